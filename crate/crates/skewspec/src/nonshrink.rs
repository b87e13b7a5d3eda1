//! Non-shrinking of intervals under finite nonautonomous systems of
//! expanding maps: the constructive lower bound gamma(eps) with its
//! certificate, a randomized falsifier, and the adaptive schedule that
//! shows expansion rate >= 1 alone is not enough.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{interval, rat, Rational, UnitInterval};
use crate::pwl::PwlMap;
use crate::subshift::Word;

/// A finite family of expanding piecewise-linear maps; every member must
/// have expansion rate strictly above 1.
#[derive(Clone, Debug)]
pub struct ExpandingFamily {
    maps: Vec<PwlMap>,
}

impl ExpandingFamily {
    pub fn new(maps: Vec<PwlMap>) -> Result<Self> {
        for (index, map) in maps.iter().enumerate() {
            let rate = map.expansion_rate();
            if rate <= Rational::one() {
                return Err(Error::NotExpanding {
                    index: index + 1,
                    rate: rate.to_string(),
                });
            }
        }
        if maps.is_empty() {
            return Err(Error::InvalidNodes("family must be nonempty".into()));
        }
        Ok(ExpandingFamily { maps })
    }

    pub fn maps(&self) -> &[PwlMap] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// alpha: the least expansion rate of the family.
    pub fn min_rate(&self) -> Rational {
        self.maps
            .iter()
            .map(|m| m.expansion_rate())
            .min()
            .expect("nonempty family")
    }
}

/// beta for one m-tuple of maps, with the tuple recorded by 1-based map
/// indices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TupleBeta {
    pub indices: Vec<usize>,
    pub beta: Rational,
}

/// The full certificate behind the lower bound: alpha the least
/// expansion rate, m minimal with alpha^m > 2, beta the minimum of the
/// per-tuple bounds, gamma = min(eps/2, beta). gamma depends only on the
/// family and eps, never on a word.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GammaCertificate {
    pub eps: Rational,
    pub alpha: Rational,
    pub m: usize,
    pub beta: Rational,
    pub gamma: Rational,
    pub per_tuple: Vec<TupleBeta>,
}

fn chain_eval(tuple: &[&PwlMap], upto: usize, x: &Rational) -> Rational {
    let mut cur = x.clone();
    for map in &tuple[..upto] {
        cur = map.eval(&cur).expect("chain stays in [0,1]");
    }
    cur
}

/// The largest beta > 0 such that every interval of length <= beta with
/// a critical point of the first map as an endpoint keeps all its
/// forward images (under the tuple, one map at a time) clear of the next
/// map's critical points in their interiors.
///
/// Exact: for each (critical point, side), the admissible length is
/// pushed to the nearest violation by inverting the monotone composition
/// lap-locally; the minimum over all anchors is returned.
pub fn beta_delta(tuple: &[&PwlMap]) -> Result<Rational> {
    assert!(!tuple.is_empty(), "tuple must have m >= 1 maps");
    let m = tuple.len();
    let first_criticals = tuple[0].critical_points();
    let mut best: Option<Rational> = None;

    for c in &first_criticals {
        for side_right in [true, false] {
            let cap = if side_right {
                Rational::one() - c.clone()
            } else {
                c.clone()
            };
            if cap.is_zero() {
                continue;
            }
            // stage 1: the interval itself must avoid interior critical
            // points of the first map, so stop at the adjacent one
            let mut delta = first_criticals
                .iter()
                .filter_map(|other| {
                    let d = if side_right { other - c } else { c - other };
                    d.is_positive().then_some(d)
                })
                .min()
                .unwrap_or(cap);

            for j in 2..=m {
                let endpoint = if side_right {
                    c + &delta
                } else {
                    c - &delta
                };
                let v = chain_eval(tuple, j - 1, c);
                let w = chain_eval(tuple, j - 1, &endpoint);
                debug_assert!(v != w);
                let increasing = w > v;
                let hit = tuple[j - 1]
                    .critical_points()
                    .into_iter()
                    .filter(|cr| {
                        if increasing {
                            cr > &v && cr < &w
                        } else {
                            cr < &v && cr > &w
                        }
                    })
                    .reduce(|a, b| {
                        let keep_a = if increasing { a < b } else { a > b };
                        if keep_a {
                            a
                        } else {
                            b
                        }
                    });
                let Some(mut target) = hit else { continue };
                // pull the critical value back to the anchor's side
                for idx in (0..j - 1).rev() {
                    let d0 = chain_eval(tuple, idx, c);
                    let d1 = chain_eval(tuple, idx, &endpoint);
                    let (lo, hi) = if d0 <= d1 { (d0, d1) } else { (d1, d0) };
                    let dom = UnitInterval::new(lo, hi).expect("chain stays in [0,1]");
                    target = tuple[idx].invert_monotone_on(&dom, &target).ok_or_else(|| {
                        Error::InternalContradiction(
                            "critical value escaped its monotone preimage".into(),
                        )
                    })?;
                }
                delta = (&target - c).abs();
            }

            best = Some(match best {
                Some(b) => b.min(delta),
                None => delta,
            });
        }
    }
    best.ok_or_else(|| {
        Error::InternalContradiction("no admissible anchored interval".into())
    })
}

/// The certificate for a family at tolerance eps > 0.
pub fn gamma_bound(family: &ExpandingFamily, eps: &Rational) -> Result<GammaCertificate> {
    if !eps.is_positive() {
        return Err(Error::EpsOutOfRange(eps.to_string()));
    }
    let alpha = family.min_rate();
    let mut m = 1usize;
    let two = rat(2, 1);
    let mut pow = alpha.clone();
    while pow <= two {
        pow = pow * &alpha;
        m += 1;
    }

    let n = family.len();
    let mut per_tuple = Vec::new();
    let mut indices = vec![0usize; m];
    loop {
        let tuple: Vec<&PwlMap> = indices.iter().map(|&i| &family.maps()[i]).collect();
        per_tuple.push(TupleBeta {
            indices: indices.iter().map(|&i| i + 1).collect(),
            beta: beta_delta(&tuple)?,
        });
        // odometer over {0..n-1}^m
        let mut pos = m;
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] < n {
                break;
            }
            indices[pos] = 0;
        }
        if indices.iter().all(|&i| i == 0) {
            break;
        }
    }

    let beta = per_tuple
        .iter()
        .map(|t| t.beta.clone())
        .min()
        .expect("at least one tuple");
    let gamma = (eps / &two).min(beta.clone());
    Ok(GammaCertificate {
        eps: eps.clone(),
        alpha,
        m,
        beta,
        gamma,
        per_tuple,
    })
}

/// Iterates exact interval images along the word (symbols are 1-based
/// indices into `maps`); returns whether every intermediate length,
/// including |U| itself, stays >= gamma, plus the minimum length
/// attained. Works for arbitrary map families so hypothesis failures
/// can be demonstrated, not only certified families.
pub fn verify_nonshrink(
    maps: &[PwlMap],
    word: &Word,
    u: &UnitInterval,
    gamma: &Rational,
) -> Result<(bool, Rational)> {
    for &s in word.symbols() {
        if s == 0 || s > maps.len() {
            return Err(Error::SymbolOutOfRange {
                symbol: s,
                alphabet: maps.len(),
            });
        }
    }
    let mut cur = u.clone();
    let mut min_len = u.length();
    for &s in word.symbols() {
        cur = maps[s - 1].image(&cur);
        let len = cur.length();
        if len < min_len {
            min_len = len;
        }
    }
    Ok((min_len >= *gamma, min_len))
}

/// Outcome of the randomized falsifier.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FuzzReport {
    pub trials: usize,
    pub word_len: usize,
    pub seed: u64,
    pub gamma: Rational,
    pub violations: usize,
    pub min_length_seen: Rational,
}

/// Runs `trials` random (word, interval) pairs with |U| >= eps against
/// the certificate's gamma. Start intervals live on a 1/64 grid; all
/// arithmetic stays exact. Deterministic for a fixed seed.
pub fn fuzz_nonshrink(
    family: &ExpandingFamily,
    eps: &Rational,
    trials: usize,
    word_len: usize,
    seed: u64,
) -> Result<FuzzReport> {
    if *eps > Rational::one() {
        // no interval in [0,1] can satisfy |U| >= eps
        return Err(Error::EpsOutOfRange(eps.to_string()));
    }
    let cert = gamma_bound(family, eps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = family.len();
    let grid = 64i64;
    let lo_slots = ((Rational::one() - eps) * rat(grid, 1))
        .floor_usize()
        .unwrap_or(0);
    let mut violations = 0usize;
    let mut min_seen = Rational::one();
    for _ in 0..trials {
        let word = Word::new((0..word_len).map(|_| rng.gen_range(1..=n)).collect());
        let lo = rat(rng.gen_range(0..=lo_slots) as i64, grid);
        let max_extra = ((Rational::one() - &lo - eps) * rat(grid, 1))
            .floor_usize()
            .unwrap_or(0);
        let hi = &lo + eps + rat(rng.gen_range(0..=max_extra) as i64, grid);
        let u = interval(lo, hi);
        let (ok, min_len) = verify_nonshrink(family.maps(), &word, &u, &cert.gamma)?;
        if !ok {
            violations += 1;
        }
        if min_len < min_seen {
            min_seen = min_len;
        }
    }
    Ok(FuzzReport {
        trials,
        word_len,
        seed,
        gamma: cert.gamma,
        violations,
        min_length_seen: min_seen,
    })
}

/// Which map the adaptive schedule applied at a step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleMap {
    Phi,
    F,
    G,
}

impl fmt::Display for ScheduleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScheduleMap::Phi => write!(f, "phi"),
            ScheduleMap::F => write!(f, "f"),
            ScheduleMap::G => write!(f, "g"),
        }
    }
}

/// One applied map and the exact interval after it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: usize,
    pub map: ScheduleMap,
    pub interval: UnitInterval,
}

/// Exact record of the adaptive run: the (k_i, psi_i) schedule and every
/// intermediate interval.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShrinkTrace {
    pub xi: Rational,
    pub initial: UnitInterval,
    pub schedule: Vec<(usize, ScheduleMap)>,
    pub steps: Vec<TraceStep>,
}

impl ShrinkTrace {
    pub fn g_event_count(&self) -> usize {
        self.schedule
            .iter()
            .filter(|(_, m)| *m == ScheduleMap::G)
            .count()
    }

    pub fn final_interval(&self) -> &UnitInterval {
        self.steps
            .last()
            .map(|s| &s.interval)
            .unwrap_or(&self.initial)
    }
}

/// The three surjective rate->=1 maps of the shrinking construction:
/// phi = <(0,xi),(1-xi,1),(1,0)>, f = <(0,1),(1-2xi,0),(1,2xi)>,
/// g = <(0,1),(1/4,1/4),(1/2,0),(1,1/2)>.
pub fn shrinking_maps(xi: &Rational) -> Result<(PwlMap, PwlMap, PwlMap)> {
    if !xi.is_positive() || *xi >= rat(1, 4) {
        return Err(Error::OutOfUnitRange(format!("xi = {xi}, need 0 < xi < 1/4")));
    }
    let one = Rational::one();
    let two_xi = rat(2, 1) * xi;
    let phi = PwlMap::new(vec![
        (Rational::zero(), xi.clone()),
        (&one - xi, one.clone()),
        (one.clone(), Rational::zero()),
    ])?;
    let f = PwlMap::new(vec![
        (Rational::zero(), one.clone()),
        (&one - &two_xi, Rational::zero()),
        (one.clone(), two_xi),
    ])?;
    let g = PwlMap::new(vec![
        (Rational::zero(), one.clone()),
        (rat(1, 4), rat(1, 4)),
        (rat(1, 2), Rational::zero()),
        (one, rat(1, 2)),
    ])?;
    Ok((phi, f, g))
}

/// Runs the adaptive schedule from J = [0, xi] for `steps` total map
/// applications: translate by phi until the current interval either
/// holds 1/2 in its closed middle third (then apply g, which contracts
/// by <= 2/3) or meets [1-xi, 1] (then apply f, a translation). Every
/// intermediate interval is recorded exactly.
///
/// For rational xi the translation dynamics are periodic, so a trigger
/// must fire within ceil(1/xi) phi-steps; exceeding that bound reports
/// [`Error::NoTrigger`] instead of looping.
pub fn shrinking_system(xi: &Rational, steps: usize) -> Result<ShrinkTrace> {
    let (phi, f, g) = shrinking_maps(xi)?;
    let half = rat(1, 2);
    let f_trigger_lo = Rational::one() - xi;
    let phi_cap = (Rational::one() / xi).floor_usize().unwrap_or(0) + 2;

    let initial = interval(Rational::zero(), xi.clone());
    let mut cur = initial.clone();
    let mut trace = ShrinkTrace {
        xi: xi.clone(),
        initial,
        schedule: Vec::new(),
        steps: Vec::with_capacity(steps),
    };
    let mut phi_run = 0usize;
    for step in 1..=steps {
        let map = if cur.middle_third().contains(&half) {
            cur = g.image(&cur);
            trace.schedule.push((phi_run, ScheduleMap::G));
            phi_run = 0;
            ScheduleMap::G
        } else if *cur.hi() >= f_trigger_lo {
            cur = f.image(&cur);
            trace.schedule.push((phi_run, ScheduleMap::F));
            phi_run = 0;
            ScheduleMap::F
        } else {
            cur = phi.image(&cur);
            phi_run += 1;
            if phi_run > phi_cap {
                return Err(Error::NoTrigger(phi_cap));
            }
            ScheduleMap::Phi
        };
        trace.steps.push(TraceStep {
            step,
            map,
            interval: cur.clone(),
        });
    }
    Ok(trace)
}
