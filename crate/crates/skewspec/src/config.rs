//! Config-file parsing: `[section]` headers with `key = value` lines,
//! `#` comments, and repeated keys where lists are natural (fibres,
//! family maps, segments). All numbers are exact "p/q" rationals.
//! Diagnostics carry the offending line number.
//!
//! See the README for the full grammar and examples of every file kind.

use std::path::Path;

use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::pwl::PwlMap;
use crate::skew::{OrbitSegmentSpec, SkewPoint, SkewSystem};
use crate::subshift::Sft;

#[derive(Clone, Debug)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct Section {
    pub name: String,
    pub line: usize,
    pub entries: Vec<Entry>,
}

impl Section {
    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    pub fn require(&self, key: &str) -> Result<&Entry> {
        self.get(key).ok_or_else(|| Error::Config {
            line: self.line,
            message: format!("section [{}] is missing key '{key}'", self.name),
        })
    }

    pub fn all(&self, key: &str) -> Vec<&Entry> {
        self.entries.iter().filter(|e| e.key == key).collect()
    }
}

#[derive(Clone, Debug, Default)]
pub struct ConfigFile {
    pub sections: Vec<Section>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut sections: Vec<Section> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = match raw.split_once('#') {
                Some((head, _)) => head,
                None => raw,
            }
            .trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or(Error::Config {
                    line,
                    message: "unterminated section header".into(),
                })?;
                sections.push(Section {
                    name: name.trim().to_string(),
                    line,
                    entries: Vec::new(),
                });
                continue;
            }
            let (key, value) = content.split_once('=').ok_or(Error::Config {
                line,
                message: "expected 'key = value'".into(),
            })?;
            let section = sections.last_mut().ok_or(Error::Config {
                line,
                message: "entry before any [section] header".into(),
            })?;
            section.entries.push(Entry {
                key: key.trim().to_string(),
                value: value.trim().to_string(),
                line,
            });
        }
        Ok(ConfigFile { sections })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn require_section(&self, name: &str) -> Result<&Section> {
        self.section(name).ok_or_else(|| Error::Config {
            line: 0,
            message: format!("missing [{name}] section"),
        })
    }
}

fn config_err(line: usize, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        message: message.into(),
    }
}

fn parse_rational(s: &str, line: usize) -> Result<Rational> {
    let s = s.trim().trim_matches('"');
    s.parse()
        .map_err(|_| config_err(line, format!("malformed rational '{s}'")))
}

/// Node-list literal: `[(0, 0), (1/2, 1), (1, 0)]`, rationals optionally
/// quoted.
pub fn parse_map_literal(s: &str, line: usize) -> Result<PwlMap> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| config_err(line, "map literal must be wrapped in [...]"))?;
    let mut nodes = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        rest = rest.trim_start_matches(',').trim();
        if rest.is_empty() {
            break;
        }
        let open = rest
            .strip_prefix('(')
            .ok_or_else(|| config_err(line, "expected '(' starting a node"))?;
        let close = open
            .find(')')
            .ok_or_else(|| config_err(line, "unterminated node"))?;
        let body = &open[..close];
        let (a, b) = body
            .split_once(',')
            .ok_or_else(|| config_err(line, "node needs two comma-separated rationals"))?;
        nodes.push((parse_rational(a, line)?, parse_rational(b, line)?));
        rest = open[close + 1..].trim();
    }
    PwlMap::new(nodes).map_err(|e| config_err(line, e.to_string()))
}

/// `[map]` section with a `nodes` entry.
pub fn load_map(cfg: &ConfigFile) -> Result<PwlMap> {
    let section = cfg.require_section("map")?;
    let entry = section.require("nodes")?;
    parse_map_literal(&entry.value, entry.line)
}

/// `[family]` section with one `map` entry per member.
pub fn load_family(cfg: &ConfigFile) -> Result<Vec<PwlMap>> {
    let section = cfg.require_section("family")?;
    let entries = section.all("map");
    if entries.is_empty() {
        return Err(config_err(section.line, "family needs at least one 'map'"));
    }
    entries
        .into_iter()
        .map(|e| parse_map_literal(&e.value, e.line))
        .collect()
}

fn load_sft_from(section: &Section) -> Result<Sft> {
    let alphabet = section.require("alphabet")?;
    let n: usize = alphabet
        .value
        .parse()
        .map_err(|_| config_err(alphabet.line, "alphabet must be a positive integer"))?;
    let forbidden = section.get("forbidden");
    let matrix = section.get("matrix");
    match (forbidden, matrix) {
        (Some(_), Some(m)) => Err(config_err(
            m.line,
            "give either 'forbidden' or 'matrix', not both",
        )),
        (Some(entry), None) => {
            let mut pairs = Vec::new();
            for word in entry.value.split(',') {
                let word = word.trim();
                let chars: Vec<char> = word.chars().collect();
                if chars.len() != 2 {
                    return Err(config_err(
                        entry.line,
                        format!("forbidden entry '{word}' must be a 2-symbol word"),
                    ));
                }
                let sym = |c: char| {
                    c.to_digit(10)
                        .filter(|&d| d >= 1)
                        .map(|d| d as usize)
                        .ok_or_else(|| {
                            config_err(entry.line, format!("bad symbol '{c}' in '{word}'"))
                        })
                };
                pairs.push((sym(chars[0])?, sym(chars[1])?));
            }
            Sft::from_forbidden_pairs(n, &pairs).map_err(|e| config_err(entry.line, e.to_string()))
        }
        (None, Some(entry)) => {
            let mut allowed = Vec::new();
            for row in entry.value.split(',') {
                let row = row.trim();
                if row.len() != n {
                    return Err(config_err(
                        entry.line,
                        format!("matrix row '{row}' must have {n} entries"),
                    ));
                }
                allowed.push(
                    row.chars()
                        .map(|c| match c {
                            '1' => Ok(true),
                            '0' => Ok(false),
                            other => Err(config_err(
                                entry.line,
                                format!("matrix entries are 0/1, found '{other}'"),
                            )),
                        })
                        .collect::<Result<Vec<bool>>>()?,
                );
            }
            Sft::new(n, allowed).map_err(|e| config_err(entry.line, e.to_string()))
        }
        (None, None) => Sft::full_shift(n).map_err(|e| config_err(alphabet.line, e.to_string())),
    }
}

/// `[sft]` section: `alphabet`, plus `forbidden` pairs or an explicit
/// 0/1 `matrix`; omitting both gives the full shift.
pub fn load_sft(cfg: &ConfigFile) -> Result<Sft> {
    load_sft_from(cfg.require_section("sft")?)
}

/// `[system]` section: the sft keys plus one `fibre` map literal per
/// symbol, in symbol order.
pub fn load_system(cfg: &ConfigFile) -> Result<SkewSystem> {
    let section = cfg.require_section("system")?;
    let base = load_sft_from(section)?;
    let fibre_entries = section.all("fibre");
    if fibre_entries.is_empty() {
        return Err(config_err(section.line, "system needs 'fibre' entries"));
    }
    let fibres = fibre_entries
        .into_iter()
        .map(|e| parse_map_literal(&e.value, e.line))
        .collect::<Result<Vec<PwlMap>>>()?;
    SkewSystem::new(base, fibres).map_err(|e| config_err(section.line, e.to_string()))
}

/// `[segments]` section: one `segment = basepoint, fibre, length` entry
/// per requested orbit segment, e.g. `segment = |12, 1/3, 4`.
pub fn load_segments(cfg: &ConfigFile) -> Result<Vec<OrbitSegmentSpec>> {
    let section = cfg.require_section("segments")?;
    let entries = section.all("segment");
    if entries.is_empty() {
        return Err(config_err(
            section.line,
            "segments section needs at least one 'segment'",
        ));
    }
    let mut out = Vec::with_capacity(entries.len());
    for entry in entries {
        let parts: Vec<&str> = entry.value.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(config_err(
                entry.line,
                "segment needs 'basepoint, fibre, length'",
            ));
        }
        let base = parts[0]
            .parse()
            .map_err(|e: Error| config_err(entry.line, e.to_string()))?;
        let x = parse_rational(parts[1], entry.line)?;
        let len: usize = parts[2]
            .parse()
            .map_err(|_| config_err(entry.line, "segment length must be a positive integer"))?;
        if len == 0 {
            return Err(config_err(entry.line, "segment length must be >= 1"));
        }
        let point =
            SkewPoint::new(base, x).map_err(|e| config_err(entry.line, e.to_string()))?;
        out.push(OrbitSegmentSpec { point, len });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn parses_sections_and_comments() {
        let cfg = ConfigFile::parse(
            "# demo\n[map]\nnodes = [(0, 0), (1/2, 1), (1, 0)]  # tent\n",
        )
        .unwrap();
        let map = load_map(&cfg).unwrap();
        assert_eq!(map, PwlMap::tent());
    }

    #[test]
    fn quoted_rationals_accepted() {
        let cfg = ConfigFile::parse("[map]\nnodes = [(0,\"0\"),(1/2,\"1\"),(1,\"0\")]\n").unwrap();
        assert_eq!(load_map(&cfg).unwrap(), PwlMap::tent());
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        let err = ConfigFile::parse("[map]\nnodes [(0,0)]\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 2, .. }));

        let cfg = ConfigFile::parse("[map]\nnodes = [(0, 0), (1, 0)]\n").unwrap();
        let err = load_map(&cfg).unwrap_err();
        assert!(matches!(err, Error::Config { line: 2, .. }));
    }

    #[test]
    fn loads_golden_mean_system() {
        let text = "\
[system]
alphabet = 2
forbidden = 22
fibre = [(0, 0), (1/2, 1), (1, 0)]
fibre = [(0, 1), (1/2, 0), (1, 1)]
";
        let sys = load_system(&ConfigFile::parse(text).unwrap()).unwrap();
        assert_eq!(sys.base().alphabet_size(), 2);
        assert!(!sys.base().is_allowed(2, 2));
        assert!(sys.all_expanding());
    }

    #[test]
    fn loads_matrix_sft() {
        let cfg = ConfigFile::parse("[sft]\nalphabet = 2\nmatrix = 11,10\n").unwrap();
        let sft = load_sft(&cfg).unwrap();
        assert_eq!(sft, Sft::golden_mean());
    }

    #[test]
    fn loads_segments() {
        let text = "[segments]\nsegment = |1, 1/3, 3\nsegment = 2|1, 0/1, 2\n";
        let segs = load_segments(&ConfigFile::parse(text).unwrap()).unwrap();
        assert_eq!(segs.len(), 2);
        assert_eq!(segs[0].point.x, rat(1, 3));
        assert_eq!(segs[1].len, 2);
        assert_eq!(segs[1].point.base.to_string(), "2|1");
    }
}
