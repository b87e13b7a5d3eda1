//! Thin command-line front end; all logic lives in the library. JSON
//! reports carry exact "p/q" rationals and identical inputs (including
//! seeds) produce byte-identical output. Exit codes: 0 pass, 1 property
//! falsified or construction failed, 2 usage/config error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use skewspec::config::{self, ConfigFile};
use skewspec::error::Error;
use skewspec::nonshrink::{self, ExpandingFamily};
use skewspec::numeric::Rational;
use skewspec::skew::{OrbitSegmentSpec, SkewSystem};
use skewspec::subshift::Word;
use skewspec::witness::{self, MixingAnchor, WitnessReport};

#[derive(Parser)]
#[command(
    name = "skewspec",
    version,
    about = "Exact specification-property witnesses for step skew products"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expansion, surjectivity and mixing facts about one map
    MapCheck {
        /// Config file with a [map] section
        config: PathBuf,
        /// Iteration cap for the mixing check
        #[arg(long, default_value_t = 64)]
        cap: usize,
    },
    /// Covering exponent: m with T^m(U) = [0,1] for every |U| >= gamma
    Leo {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        gamma: String,
        #[arg(long, default_value_t = 1024)]
        cap: usize,
    },
    /// Primitivity exponent of a subshift of finite type
    SftInfo {
        /// Config file with an [sft] section
        config: PathBuf,
    },
    /// Non-shrinking certificate (alpha, m, beta, gamma) for a family
    Gamma {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        eps: String,
    },
    /// Randomized falsifier for the certificate
    Fuzz {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 10000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        word_len: usize,
    },
    /// Adaptive rate-1 schedule shrinking an interval (exact trace)
    ShrinkDemo {
        /// Rational 0 < xi < 1/4; rational xi may make the schedule
        /// eventually cycle, which the trace makes visible
        #[arg(long)]
        xi: String,
        #[arg(long)]
        steps: usize,
        /// CSV destination: step, map, interval_lo, interval_hi, length
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Construct a specification witness for requested orbit segments
    Witness {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        segments: PathBuf,
        #[arg(long)]
        eps: String,
        /// Periodic anchor word; omit to search automatically
        #[arg(long)]
        anchor: Option<String>,
        /// Period cap for the automatic anchor search
        #[arg(long, default_value_t = 4)]
        anchor_auto: usize,
        /// Write the report JSON here (also printed to stdout)
        #[arg(long)]
        report: Option<PathBuf>,
        /// Orbit dump: witness vs each segment with per-step defects
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Re-audit a previously emitted witness report
    Verify {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        segments: PathBuf,
        #[arg(long)]
        report: PathBuf,
        /// Comma-separated per-segment gap lengths (the prescribed->=M
        /// variant); defaults to the report's uniform M
        #[arg(long)]
        gaps: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(passed) => {
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config { .. } | Error::Io(_) | Error::Json(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn parse_rat(s: &str) -> Result<Rational, Error> {
    s.parse()
}

fn emit(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("valid json"));
}

fn run(command: Command) -> Result<bool, Error> {
    match command {
        Command::MapCheck { config, cap } => {
            let map = config::load_map(&ConfigFile::load(&config)?)?;
            emit(&json!({
                "expanding": map.is_expanding(),
                "rate": map.expansion_rate().to_string(),
                "surjective": map.is_surjective(),
                "mixing": map.is_mixing(cap),
            }));
            Ok(true)
        }
        Command::Leo { map, gamma, cap } => {
            let map = config::load_map(&ConfigFile::load(&map)?)?;
            let gamma = parse_rat(&gamma)?;
            let m = map.leo_exponent_capped(&gamma, cap)?;
            emit(&json!({ "gamma": gamma.to_string(), "m": m }));
            Ok(true)
        }
        Command::SftInfo { config } => {
            let sft = config::load_sft(&ConfigFile::load(&config)?)?;
            match sft.primitivity_exponent() {
                Ok(p) => {
                    emit(&json!({ "primitive": true, "exponent": p }));
                    Ok(true)
                }
                Err(Error::NotPrimitive) => {
                    emit(&json!({ "primitive": false }));
                    Ok(true)
                }
                Err(e) => Err(e),
            }
        }
        Command::Gamma { family, eps } => {
            let maps = config::load_family(&ConfigFile::load(&family)?)?;
            let family = ExpandingFamily::new(maps)?;
            let cert = nonshrink::gamma_bound(&family, &parse_rat(&eps)?)?;
            emit(&serde_json::to_value(&cert)?);
            Ok(true)
        }
        Command::Fuzz {
            family,
            eps,
            trials,
            seed,
            word_len,
        } => {
            let maps = config::load_family(&ConfigFile::load(&family)?)?;
            let family = ExpandingFamily::new(maps)?;
            let report =
                nonshrink::fuzz_nonshrink(&family, &parse_rat(&eps)?, trials, word_len, seed)?;
            emit(&serde_json::to_value(&report)?);
            Ok(report.violations == 0)
        }
        Command::ShrinkDemo { xi, steps, out } => {
            let xi = parse_rat(&xi)?;
            let trace = nonshrink::shrinking_system(&xi, steps)?;
            if let Some(path) = &out {
                fs::write(path, shrink_trace_csv(&trace))?;
            }
            emit(&json!({
                "xi": trace.xi.to_string(),
                "steps": trace.steps.len(),
                "g_events": trace.g_event_count(),
                "final_length": trace.final_interval().length().to_string(),
                "csv": out.as_ref().map(|p| p.display().to_string()),
            }));
            Ok(true)
        }
        Command::Witness {
            system,
            segments,
            eps,
            anchor,
            anchor_auto,
            report,
            csv,
        } => {
            let sys = config::load_system(&ConfigFile::load(&system)?)?;
            let segs = config::load_segments(&ConfigFile::load(&segments)?)?;
            let eps = parse_rat(&eps)?;
            let anchor = match anchor {
                Some(word) => MixingAnchor::new(&sys, word.parse::<Word>()?)?,
                None => witness::find_mixing_anchor(&sys, anchor_auto)?,
            };
            let result = witness::witness(&sys, &segs, &eps, &anchor)?;
            let value = serde_json::to_value(&result)?;
            if let Some(path) = &report {
                fs::write(path, serde_json::to_string_pretty(&value)?)?;
            }
            if let Some(path) = &csv {
                fs::write(path, orbit_csv(&sys, &segs, &result)?)?;
            }
            emit(&value);
            Ok(result.audit.passes_at(&eps))
        }
        Command::Verify {
            system,
            segments,
            report,
            gaps,
        } => {
            let sys = config::load_system(&ConfigFile::load(&system)?)?;
            let segs = config::load_segments(&ConfigFile::load(&segments)?)?;
            let report: WitnessReport = serde_json::from_str(&fs::read_to_string(&report)?)?;
            let gaps = match gaps {
                Some(spec) => spec
                    .split(',')
                    .map(|g| {
                        g.trim().parse::<usize>().map_err(|_| Error::Config {
                            line: 0,
                            message: format!("bad gap '{g}'"),
                        })
                    })
                    .collect::<Result<Vec<usize>, Error>>()?,
                None => vec![report.big_m; segs.len()],
            };
            let audit = sys.verify_tracing_gaps(&segs, &gaps, &report.witness_point())?;
            let passed = audit.passes_at(&report.eps);
            emit(&json!({
                "eps": report.eps.to_string(),
                "gaps": gaps,
                "audit": serde_json::to_value(&audit)?,
                "passed": passed,
            }));
            Ok(passed)
        }
    }
}

fn shrink_trace_csv(trace: &nonshrink::ShrinkTrace) -> String {
    let mut out = String::from("step,map,interval_lo,interval_hi,length\n");
    for step in &trace.steps {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            step.step,
            step.map,
            step.interval.lo(),
            step.interval.hi(),
            step.interval.length()
        ));
    }
    out
}

fn orbit_csv(
    sys: &SkewSystem,
    segments: &[OrbitSegmentSpec],
    report: &WitnessReport,
) -> Result<String, Error> {
    let mut out = String::from("segment,i,step,segment_x,witness_x,base_dist,fibre_dist,defect\n");
    for (j, seg) in segments.iter().enumerate() {
        let mut y = seg.point.x.clone();
        for i in 0..seg.len {
            let step = report.r[j] + i;
            let wx = sys.nonaut_compose(&report.eta, 0, step, &report.z)?;
            let base_dist = seg.point.base.shift_by(i).rho(&report.eta.shift_by(step));
            let fibre_dist = (&y - &wx).abs();
            let defect = base_dist.clone().max(fibre_dist.clone());
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                j + 1,
                i,
                step,
                y,
                wx,
                base_dist,
                fibre_dist,
                defect
            ));
            if i + 1 < seg.len {
                y = sys.fibre_for(seg.point.base.symbol_at(i)).eval(&y)?;
            }
        }
    }
    Ok(out)
}
