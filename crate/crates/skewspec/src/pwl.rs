//! Continuous piecewise-linear self-maps of [0, 1].
//!
//! A map is a "connect the dots" interpolation through rational nodes
//! `(a_0, b_0), ..., (a_n, b_n)` with `a_0 = 0`, `a_n = 1`. Restricting to
//! piecewise *linear* maps with rational data keeps every image, preimage
//! and composition exactly computable; no acceptance check here needs a
//! tolerance. Laps of monotonicity can span several linear pieces when
//! consecutive slopes share a sign; critical points are the lap
//! boundaries together with 0 and 1.

use std::fmt;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{rat, Rational, UnitInterval};

/// Default iteration cap for covering-exponent searches.
pub const DEFAULT_LEO_CAP: usize = 1024;

/// Default iteration cap for mixing checks.
pub const DEFAULT_MIXING_CAP: usize = 64;

/// Continuous piecewise-linear self-map of [0, 1], given by its nodes.
/// Constant pieces are rejected: every theorem in scope assumes monotone
/// laps with nonzero slope.
#[derive(Clone, PartialEq, Eq)]
pub struct PwlMap {
    nodes: Vec<(Rational, Rational)>,
}

/// Maximal intervals of monotonicity and their shared endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LapDecomposition {
    pub laps: Vec<UnitInterval>,
    pub critical_points: Vec<Rational>,
}

impl PwlMap {
    pub fn new(nodes: Vec<(Rational, Rational)>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidNodes("need at least two nodes".into()));
        }
        if !nodes[0].0.is_zero() {
            return Err(Error::InvalidNodes("first node must be at x = 0".into()));
        }
        if nodes[nodes.len() - 1].0 != Rational::one() {
            return Err(Error::InvalidNodes("last node must be at x = 1".into()));
        }
        for w in nodes.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidNodes(format!(
                    "abscissae not strictly increasing at x = {}",
                    w[1].0
                )));
            }
            if w[0].1 == w[1].1 {
                return Err(Error::InvalidNodes(format!(
                    "constant piece starting at x = {}",
                    w[0].0
                )));
            }
        }
        for (x, y) in &nodes {
            if !y.in_unit_range() {
                return Err(Error::InvalidNodes(format!(
                    "value {y} at x = {x} outside [0, 1]"
                )));
            }
        }
        Ok(PwlMap { nodes })
    }

    /// Full tent map <(0,0),(1/2,1),(1,0)>, slopes +-2.
    pub fn tent() -> Self {
        PwlMap::new(vec![
            (rat(0, 1), rat(0, 1)),
            (rat(1, 2), rat(1, 1)),
            (rat(1, 1), rat(0, 1)),
        ])
        .unwrap()
    }

    /// Reflected tent <(0,1),(1/2,0),(1,1)>, slopes -+2.
    pub fn valley() -> Self {
        PwlMap::new(vec![
            (rat(0, 1), rat(1, 1)),
            (rat(1, 2), rat(0, 1)),
            (rat(1, 1), rat(1, 1)),
        ])
        .unwrap()
    }

    /// Three-lap zigzag <(0,0),(1/3,1),(2/3,0),(1,1)>, slopes +-3.
    pub fn zigzag3() -> Self {
        PwlMap::new(vec![
            (rat(0, 1), rat(0, 1)),
            (rat(1, 3), rat(1, 1)),
            (rat(2, 3), rat(0, 1)),
            (rat(1, 1), rat(1, 1)),
        ])
        .unwrap()
    }

    pub fn nodes(&self) -> &[(Rational, Rational)] {
        &self.nodes
    }

    fn piece_count(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Exact slope of linear piece `i` (between nodes i and i+1).
    fn slope(&self, i: usize) -> Rational {
        let (x0, y0) = &self.nodes[i];
        let (x1, y1) = &self.nodes[i + 1];
        (y1 - y0) / (x1 - x0)
    }

    /// Index of a piece whose closed x-range contains `x`.
    fn piece_containing(&self, x: &Rational) -> usize {
        // partition_point: first node with a_i > x, minus one; clamp to pieces
        let idx = self.nodes.partition_point(|(a, _)| a <= x);
        idx.saturating_sub(1).min(self.piece_count() - 1)
    }

    /// Exact value of the interpolant.
    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        if !x.in_unit_range() {
            return Err(Error::OutOfDomain(x.to_string()));
        }
        let i = self.piece_containing(x);
        let (a, b) = &self.nodes[i];
        Ok(b + self.slope(i) * (x - a))
    }

    /// Exact image T(J) = [min, max] over the endpoint values and the
    /// node values strictly inside J. Degenerate J gives the degenerate
    /// image point.
    pub fn image(&self, j: &UnitInterval) -> UnitInterval {
        let vlo = self.eval(j.lo()).expect("interval inside [0,1]");
        let vhi = self.eval(j.hi()).expect("interval inside [0,1]");
        let (mut min, mut max) = if vlo <= vhi { (vlo, vhi) } else { (vhi, vlo) };
        for (a, b) in &self.nodes {
            if j.interior_contains(a) {
                if *b < min {
                    min = b.clone();
                }
                if *b > max {
                    max = b.clone();
                }
            }
        }
        UnitInterval::new(min, max).expect("image stays in [0,1]")
    }

    /// The finitely many maximal closed intervals whose union is
    /// T^{-1}(J), sorted and pairwise disjoint. Components may be single
    /// points (preimages of a fold value). J may be degenerate.
    pub fn preimage_components(&self, j: &UnitInterval) -> Vec<UnitInterval> {
        let mut parts: Vec<UnitInterval> = Vec::new();
        for i in 0..self.piece_count() {
            let (a0, b0) = &self.nodes[i];
            let (a1, b1) = &self.nodes[i + 1];
            let (vmin, vmax) = if b0 <= b1 { (b0, b1) } else { (b1, b0) };
            let lo = if vmin >= j.lo() { vmin } else { j.lo() };
            let hi = if vmax <= j.hi() { vmax } else { j.hi() };
            if lo > hi {
                continue;
            }
            let slope = self.slope(i);
            let x_of = |v: &Rational| a0 + (v - b0) / &slope;
            let (xa, xb) = (x_of(lo), x_of(hi));
            let (xlo, xhi) = if xa <= xb { (xa, xb) } else { (xb, xa) };
            let piece = UnitInterval::new(xlo, xhi).expect("preimage stays in piece");
            debug_assert!(piece.lo() >= a0 && piece.hi() <= a1);
            match parts.last_mut() {
                Some(last) if piece.lo() <= last.hi() => {
                    if piece.hi() > last.hi() {
                        *last = UnitInterval::new(last.lo().clone(), piece.hi().clone()).unwrap();
                    }
                }
                _ => parts.push(piece),
            }
        }
        parts
    }

    /// Minimum over pieces of |slope|; the map is expanding iff this
    /// exceeds 1.
    pub fn expansion_rate(&self) -> Rational {
        (0..self.piece_count())
            .map(|i| self.slope(i).abs())
            .min()
            .expect("at least one piece")
    }

    pub fn is_expanding(&self) -> bool {
        self.expansion_rate() > Rational::one()
    }

    /// True iff the node values attain both 0 and 1.
    pub fn is_surjective(&self) -> bool {
        let min = self.nodes.iter().map(|(_, b)| b).min().unwrap();
        let max = self.nodes.iter().map(|(_, b)| b).max().unwrap();
        min.is_zero() && *max == Rational::one()
    }

    /// Laps of monotonicity. A breakpoint where consecutive slopes share
    /// a sign is not a critical point; laps merge across it.
    pub fn laps(&self) -> LapDecomposition {
        let mut critical = vec![Rational::zero()];
        let mut prev_up = self.slope(0).is_positive();
        for i in 1..self.piece_count() {
            let up = self.slope(i).is_positive();
            if up != prev_up {
                critical.push(self.nodes[i].0.clone());
                prev_up = up;
            }
        }
        critical.push(Rational::one());
        let laps = critical
            .windows(2)
            .map(|w| UnitInterval::new(w[0].clone(), w[1].clone()).unwrap())
            .collect();
        LapDecomposition {
            laps,
            critical_points: critical,
        }
    }

    /// Lap endpoints including 0 and 1.
    pub fn critical_points(&self) -> Vec<Rational> {
        self.laps().critical_points
    }

    /// Semi-decision for topological mixing via the locally-eventually-
    /// onto characterization: every piece of a canonical partition (laps
    /// further split to length < 1/8) must cover [0, 1] within `cap`
    /// exact image iterations. `true` is a proof of mixing; `false`
    /// means "not established within cap".
    pub fn is_mixing(&self, cap: usize) -> bool {
        let eighth = rat(1, 8);
        for lap in self.laps().laps {
            let parts = (lap.length() / &eighth)
                .floor_usize()
                .expect("lap length in [0,1]")
                + 1;
            for piece in lap.subdivide(parts) {
                let mut cur = piece;
                let mut covered = false;
                for _ in 0..cap {
                    cur = self.image(&cur);
                    if cur.is_full() {
                        covered = true;
                        break;
                    }
                }
                if !covered {
                    return false;
                }
            }
        }
        true
    }

    /// A sound covering exponent: an integer m with T^m(U) = [0, 1] for
    /// every interval U with |U| >= gamma. Computed over a partition
    /// into pieces of length < gamma/2, so any qualifying U contains a
    /// full piece; not guaranteed minimal. Requires the map to be mixing
    /// (surjectivity makes coverage persist once reached; a non-mixing
    /// map fails with [`Error::NotLeoWithinCap`]).
    pub fn leo_exponent(&self, gamma: &Rational) -> Result<usize> {
        self.leo_exponent_capped(gamma, DEFAULT_LEO_CAP)
    }

    pub fn leo_exponent_capped(&self, gamma: &Rational, cap: usize) -> Result<usize> {
        if !gamma.is_positive() || !gamma.in_unit_range() {
            return Err(Error::OutOfUnitRange(gamma.to_string()));
        }
        if *gamma == Rational::one() {
            // the only qualifying interval is [0,1] itself
            return Ok(0);
        }
        let parts = (rat(2, 1) / gamma).floor_usize().expect("gamma > 0") + 1;
        let mut worst = 0usize;
        for piece in UnitInterval::full().subdivide(parts) {
            let mut cur = piece;
            let mut reached = None;
            for t in 1..=cap {
                cur = self.image(&cur);
                if cur.is_full() {
                    reached = Some(t);
                    break;
                }
            }
            match reached {
                Some(t) => worst = worst.max(t),
                None => return Err(Error::NotLeoWithinCap { cap }),
            }
        }
        Ok(worst)
    }

    /// Exact composition `self` after `inner` (apply `inner` first).
    /// Breakpoints are the inner breakpoints plus the inner preimages of
    /// the outer breakpoints; slopes multiply, so the composite again
    /// has no constant piece.
    pub fn compose_after(&self, inner: &PwlMap) -> PwlMap {
        let mut xs: Vec<Rational> = inner.nodes.iter().map(|(a, _)| a.clone()).collect();
        for (gx, _) in &self.nodes {
            let target = UnitInterval::point(gx.clone()).expect("node value in [0,1]");
            for comp in inner.preimage_components(&target) {
                debug_assert!(comp.is_degenerate());
                xs.push(comp.lo().clone());
            }
        }
        xs.sort();
        xs.dedup();
        let nodes = xs
            .into_iter()
            .map(|x| {
                let y = self
                    .eval(&inner.eval(&x).expect("x in [0,1]"))
                    .expect("inner value in [0,1]");
                (x, y)
            })
            .collect();
        PwlMap::new(nodes).expect("composite of valid maps is valid")
    }

    /// Unique x in `domain` with self(x) = value, for a map monotone on
    /// `domain` (no interior critical point) and a value inside the
    /// image of `domain`. `None` when the value is not attained.
    pub fn invert_monotone_on(&self, domain: &UnitInterval, value: &Rational) -> Option<Rational> {
        for i in 0..self.piece_count() {
            let (a0, b0) = &self.nodes[i];
            let a1 = &self.nodes[i + 1].0;
            let xlo = if a0 >= domain.lo() { a0 } else { domain.lo() };
            let xhi = if a1 <= domain.hi() { a1 } else { domain.hi() };
            if xlo > xhi {
                continue;
            }
            let v0 = self.eval(xlo).expect("domain in [0,1]");
            let v1 = self.eval(xhi).expect("domain in [0,1]");
            let (vmin, vmax) = if v0 <= v1 { (&v0, &v1) } else { (&v1, &v0) };
            if vmin <= value && value <= vmax {
                if xlo == xhi {
                    return Some(xlo.clone());
                }
                let x = a0 + (value - b0) / self.slope(i);
                debug_assert!(&x >= xlo && &x <= xhi);
                return Some(x);
            }
        }
        None
    }
}

impl fmt::Display for PwlMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (a, b)) in self.nodes.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({a}, {b})")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for PwlMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Serialize for PwlMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<(String, String)> = self
            .nodes
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PwlMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<(String, String)>::deserialize(deserializer)?;
        let mut nodes = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let a: Rational = a.parse().map_err(de::Error::custom)?;
            let b: Rational = b.parse().map_err(de::Error::custom)?;
            nodes.push((a, b));
        }
        PwlMap::new(nodes).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::interval;
    use proptest::prelude::*;

    fn xi() -> Rational {
        rat(1, 5)
    }

    /// phi = <(0, xi), (1-xi, 1), (1, 0)>
    fn phi() -> PwlMap {
        PwlMap::new(vec![
            (rat(0, 1), xi()),
            (Rational::one() - xi(), rat(1, 1)),
            (rat(1, 1), rat(0, 1)),
        ])
        .unwrap()
    }

    /// f = <(0, 1), (1-2xi, 0), (1, 2xi)>
    fn f_map() -> PwlMap {
        let two_xi = rat(2, 1) * xi();
        PwlMap::new(vec![
            (rat(0, 1), rat(1, 1)),
            (Rational::one() - two_xi.clone(), rat(0, 1)),
            (rat(1, 1), two_xi),
        ])
        .unwrap()
    }

    /// g = <(0, 1), (1/4, 1/4), (1/2, 0), (1, 1/2)>
    fn g_map() -> PwlMap {
        PwlMap::new(vec![
            (rat(0, 1), rat(1, 1)),
            (rat(1, 4), rat(1, 4)),
            (rat(1, 2), rat(0, 1)),
            (rat(1, 1), rat(1, 2)),
        ])
        .unwrap()
    }

    #[test]
    fn rejects_constant_piece() {
        let r = PwlMap::new(vec![
            (rat(0, 1), rat(1, 2)),
            (rat(1, 2), rat(1, 2)),
            (rat(1, 1), rat(1, 1)),
        ]);
        assert!(matches!(r, Err(Error::InvalidNodes(_))));
    }

    #[test]
    fn eval_examples() {
        let tent = PwlMap::tent();
        assert_eq!(tent.eval(&rat(1, 4)).unwrap(), rat(1, 2));
        assert_eq!(tent.eval(&rat(1, 2)).unwrap(), rat(1, 1));
        assert_eq!(phi().eval(&rat(0, 1)).unwrap(), xi());
        assert!(matches!(
            tent.eval(&rat(3, 2)),
            Err(Error::OutOfDomain(_))
        ));
    }

    #[test]
    fn continuity_at_nodes() {
        for map in [PwlMap::tent(), PwlMap::valley(), PwlMap::zigzag3(), g_map()] {
            for (a, b) in map.nodes() {
                assert_eq!(&map.eval(a).unwrap(), b);
            }
        }
    }

    #[test]
    fn image_examples() {
        let tent = PwlMap::tent();
        assert_eq!(
            tent.image(&interval(rat(0, 1), rat(1, 2))),
            UnitInterval::full()
        );
        assert_eq!(
            tent.image(&interval(rat(1, 4), rat(3, 4))),
            interval(rat(1, 2), rat(1, 1))
        );
        // f on [1-2xi, 1] is a translation onto [0, 2xi]
        let two_xi = rat(2, 1) * xi();
        let src = interval(Rational::one() - two_xi.clone(), rat(1, 1));
        assert_eq!(f_map().image(&src), interval(rat(0, 1), two_xi));
    }

    #[test]
    fn preimage_examples() {
        let tent = PwlMap::tent();
        assert_eq!(
            tent.preimage_components(&interval(rat(0, 1), rat(1, 2))),
            vec![
                interval(rat(0, 1), rat(1, 4)),
                interval(rat(3, 4), rat(1, 1))
            ]
        );
        assert_eq!(
            tent.preimage_components(&interval(rat(1, 1), rat(1, 1))),
            vec![interval(rat(1, 2), rat(1, 2))]
        );
        // branches merge at the critical point
        assert_eq!(
            tent.preimage_components(&interval(rat(1, 2), rat(1, 1))),
            vec![interval(rat(1, 4), rat(3, 4))]
        );
    }

    #[test]
    fn expansion_rate_examples() {
        assert_eq!(PwlMap::tent().expansion_rate(), rat(2, 1));
        assert_eq!(g_map().expansion_rate(), rat(1, 1));
        assert_eq!(PwlMap::zigzag3().expansion_rate(), rat(3, 1));
        assert!(!g_map().is_expanding());
    }

    #[test]
    fn surjectivity_examples() {
        assert!(PwlMap::tent().is_surjective());
        let off = PwlMap::new(vec![(rat(0, 1), rat(1, 4)), (rat(1, 1), rat(3, 4))]).unwrap();
        assert!(!off.is_surjective());
        assert!(phi().is_surjective());
    }

    #[test]
    fn laps_merge_same_sign_breakpoints() {
        // g has slopes -3, -1, +1: breakpoint at 1/4 is not critical
        let laps = g_map().laps();
        assert_eq!(
            laps.critical_points,
            vec![rat(0, 1), rat(1, 2), rat(1, 1)]
        );
        assert_eq!(laps.laps.len(), 2);
    }

    #[test]
    fn mixing_examples() {
        assert!(PwlMap::tent().is_mixing(10));
        assert!(PwlMap::valley().is_mixing(10));
        let identity = PwlMap::new(vec![(rat(0, 1), rat(0, 1)), (rat(1, 1), rat(1, 1))]).unwrap();
        assert!(!identity.is_mixing(10));
    }

    /// Brute-force covering oracle: every interval of length exactly
    /// `gamma` anchored on a grid of step 1/denom, plus every critical-
    /// point-anchored one, covers [0,1] after m exact image steps.
    fn covering_oracle(map: &PwlMap, gamma: &Rational, m: usize, denom: i64) -> bool {
        let mut anchors: Vec<Rational> = (0..=denom).map(|k| rat(k, denom)).collect();
        for c in map.critical_points() {
            anchors.push(c.clone() - gamma.clone());
            anchors.push(c);
        }
        for a in anchors {
            let b = &a + gamma;
            if a.is_negative() || !b.in_unit_range() {
                continue;
            }
            let mut cur = interval(a, b);
            for _ in 0..m {
                cur = map.image(&cur);
            }
            if !cur.is_full() {
                return false;
            }
        }
        true
    }

    #[test]
    fn leo_exponent_gamma_one_is_zero() {
        assert_eq!(PwlMap::tent().leo_exponent(&rat(1, 1)).unwrap(), 0);
    }

    #[test]
    fn leo_exponent_half_is_sound() {
        let tent = PwlMap::tent();
        let m = tent.leo_exponent(&rat(1, 2)).unwrap();
        assert!(covering_oracle(&tent, &rat(1, 2), m, 128));
    }

    #[test]
    fn leo_exponent_quarter_is_sound() {
        let tent = PwlMap::tent();
        let m = tent.leo_exponent(&rat(1, 4)).unwrap();
        // partition value, frozen; the true minimum over all intervals
        // is smaller, but the contract is soundness, not minimality
        assert_eq!(m, 5);
        assert!(covering_oracle(&tent, &rat(1, 4), m, 128));
    }

    #[test]
    fn leo_exponent_fails_for_identity() {
        let identity = PwlMap::new(vec![(rat(0, 1), rat(0, 1)), (rat(1, 1), rat(1, 1))]).unwrap();
        assert!(matches!(
            identity.leo_exponent_capped(&rat(1, 2), 16),
            Err(Error::NotLeoWithinCap { cap: 16 })
        ));
    }

    #[test]
    fn compose_tent_squared() {
        let tent = PwlMap::tent();
        let t2 = tent.compose_after(&tent);
        // tent^2 is the 4-lap sawtooth
        for (x, want) in [
            (rat(0, 1), rat(0, 1)),
            (rat(1, 8), rat(1, 2)),
            (rat(1, 4), rat(1, 1)),
            (rat(3, 8), rat(1, 2)),
            (rat(1, 2), rat(0, 1)),
            (rat(5, 8), rat(1, 2)),
            (rat(3, 4), rat(1, 1)),
            (rat(1, 1), rat(0, 1)),
        ] {
            assert_eq!(t2.eval(&x).unwrap(), want);
        }
        assert_eq!(t2.expansion_rate(), rat(4, 1));
        assert_eq!(t2.laps().laps.len(), 4);
    }

    #[test]
    fn invert_monotone_on_branch() {
        let tent = PwlMap::tent();
        let dom = interval(rat(1, 2), rat(1, 1));
        assert_eq!(
            tent.invert_monotone_on(&dom, &rat(1, 2)).unwrap(),
            rat(3, 4)
        );
        assert_eq!(tent.invert_monotone_on(&dom, &rat(0, 1)).unwrap(), rat(1, 1));
    }

    fn arb_map() -> impl Strategy<Value = PwlMap> {
        prop_oneof![
            Just(PwlMap::tent()),
            Just(PwlMap::valley()),
            Just(PwlMap::zigzag3()),
            Just(g_map()),
            Just(phi()),
            Just(f_map()),
        ]
    }

    fn arb_unit() -> impl Strategy<Value = Rational> {
        (0i64..=96, 1i64..=96).prop_map(|(p, q)| if p <= q { rat(p, q) } else { rat(q, p) })
    }

    proptest! {
        // adjunction: image of every preimage component lies in J, and
        // every point mapping into J lies in some component
        #[test]
        fn preimage_image_adjunction(map in arb_map(), a in arb_unit(), b in arb_unit(), x in arb_unit()) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let j = interval(lo, hi);
            let comps = map.preimage_components(&j);
            for c in &comps {
                prop_assert!(j.contains_interval(&map.image(c)));
            }
            let v = map.eval(&x).unwrap();
            if j.contains(&v) {
                prop_assert!(comps.iter().any(|c| c.contains(&x)));
            }
        }

        // the expanding inequality on single-lap subintervals
        #[test]
        fn expansion_on_laps(map in arb_map(), a in arb_unit(), b in arb_unit()) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            if lo == hi { return Ok(()); }
            let j = interval(lo, hi);
            let rate = map.expansion_rate();
            for lap in map.laps().laps {
                if lap.contains_interval(&j) {
                    let img = map.image(&j);
                    prop_assert!(img.length() >= rate.clone() * j.length());
                }
            }
        }
    }
}
