//! The step skew product F(omega, x) = (S(omega), T_omega(x)) on
//! B x [0, 1], nonautonomous fibre compositions along a base sequence,
//! the product metric, and the tracing verifier.
//!
//! [`SkewSystem::verify_tracing`] is deliberately independent of the
//! witness construction pipeline: it re-derives everything from the
//! definition (exact orbit iteration and exact periodicity), so it can
//! serve as the oracle for whatever the pipeline produces.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{Rational, UnitInterval};
use crate::pwl::PwlMap;
use crate::subshift::{BasePoint, Sft, Symbol};

/// Base subshift plus one fibre map per symbol; the fibre applied at a
/// point is selected by the first symbol of its base sequence.
#[derive(Clone)]
pub struct SkewSystem {
    base: Sft,
    fibres: Vec<PwlMap>,
    all_expanding: bool,
    all_surjective: bool,
}

impl SkewSystem {
    pub fn new(base: Sft, fibres: Vec<PwlMap>) -> Result<Self> {
        if fibres.len() != base.alphabet_size() {
            return Err(Error::InvalidSft(format!(
                "{} fibre maps for alphabet of size {}",
                fibres.len(),
                base.alphabet_size()
            )));
        }
        let all_expanding = fibres.iter().all(|f| f.is_expanding());
        let all_surjective = fibres.iter().all(|f| f.is_surjective());
        Ok(SkewSystem {
            base,
            fibres,
            all_expanding,
            all_surjective,
        })
    }

    pub fn base(&self) -> &Sft {
        &self.base
    }

    pub fn fibres(&self) -> &[PwlMap] {
        &self.fibres
    }

    /// Fibre map for a 1-based symbol.
    pub fn fibre_for(&self, symbol: Symbol) -> &PwlMap {
        &self.fibres[symbol - 1]
    }

    /// Recorded at construction: every fibre has expansion rate > 1.
    pub fn all_expanding(&self) -> bool {
        self.all_expanding
    }

    /// Recorded at construction: every fibre attains both 0 and 1.
    pub fn all_surjective(&self) -> bool {
        self.all_surjective
    }

    pub fn check_point(&self, p: &SkewPoint) -> Result<()> {
        if !self.base.contains(&p.base) {
            return Err(Error::InvalidWord(format!(
                "base point {} not in the subshift",
                p.base
            )));
        }
        if !p.x.in_unit_range() {
            return Err(Error::OutOfUnitRange(p.x.to_string()));
        }
        Ok(())
    }

    /// One application of F.
    pub fn step(&self, p: &SkewPoint) -> Result<SkewPoint> {
        let x = self.fibre_for(p.base.symbol_at(0)).eval(&p.x)?;
        Ok(SkewPoint {
            base: p.base.shift(),
            x,
        })
    }

    /// n-fold application of F.
    pub fn iterate(&self, p: &SkewPoint, n: usize) -> Result<SkewPoint> {
        let x = self.nonaut_compose(&p.base, 0, n, &p.x)?;
        Ok(SkewPoint {
            base: p.base.shift_by(n),
            x,
        })
    }

    /// The nonautonomous composition along eta: applies the fibres
    /// selected by symbols eta_j, ..., eta_{j+i-1} to x; i = 0 is the
    /// identity.
    pub fn nonaut_compose(
        &self,
        eta: &BasePoint,
        j: usize,
        i: usize,
        x: &Rational,
    ) -> Result<Rational> {
        let mut cur = x.clone();
        for t in 0..i {
            cur = self.fibre_for(eta.symbol_at(j + t)).eval(&cur)?;
        }
        Ok(cur)
    }

    /// Exact interval image under the same composition.
    pub fn nonaut_image(&self, eta: &BasePoint, j: usize, i: usize, u: &UnitInterval) -> UnitInterval {
        let mut cur = u.clone();
        for t in 0..i {
            cur = self.fibre_for(eta.symbol_at(j + t)).image(&cur);
        }
        cur
    }

    /// Audits a candidate periodic tracing point against the segments
    /// with every gap equal to `gap`: r_j = n_1 + ... + n_j + j*gap.
    pub fn verify_tracing(
        &self,
        segments: &[OrbitSegmentSpec],
        gap: usize,
        witness: &SkewPoint,
    ) -> Result<TracingAudit> {
        self.verify_tracing_gaps(segments, &vec![gap; segments.len()], witness)
    }

    /// The prescribed-gaps variant: gap j follows segment j; the
    /// fixed-gap semantics above is the default, this one verifies
    /// tracing with any prescribed (e.g. >= M) gap lengths.
    pub fn verify_tracing_gaps(
        &self,
        segments: &[OrbitSegmentSpec],
        gaps: &[usize],
        witness: &SkewPoint,
    ) -> Result<TracingAudit> {
        if segments.len() != gaps.len() {
            return Err(Error::InvalidWord(format!(
                "{} gaps for {} segments",
                gaps.len(),
                segments.len()
            )));
        }
        if segments.is_empty() {
            return Err(Error::InvalidWord("need at least one segment".into()));
        }
        for seg in segments {
            if seg.len == 0 {
                return Err(Error::InvalidWord("segment length must be >= 1".into()));
            }
            self.check_point(&seg.point)?;
        }
        self.check_point(witness)?;

        let mut r = vec![0usize];
        for (seg, gap) in segments.iter().zip(gaps) {
            r.push(r.last().unwrap() + seg.len + gap);
        }
        let r_k = *r.last().unwrap();

        // exact periodicity of the full skew point
        if !witness.base.shift_by(r_k).seq_eq(&witness.base) {
            return Err(Error::NotPeriodic(format!(
                "base witness is not shift-periodic with period {r_k}"
            )));
        }
        let back = self.nonaut_compose(&witness.base, 0, r_k, &witness.x)?;
        if back != witness.x {
            return Err(Error::NotPeriodic(format!(
                "fibre witness returns to {back}, not {} after {r_k} steps",
                witness.x
            )));
        }

        // fibre orbit of the witness, one exact value per step
        let mut orbit = Vec::with_capacity(r_k + 1);
        orbit.push(witness.x.clone());
        for t in 0..r_k {
            let next = self
                .fibre_for(witness.base.symbol_at(t))
                .eval(orbit.last().unwrap())?;
            orbit.push(next);
        }

        let mut per_segment = Vec::with_capacity(segments.len());
        let mut worst = Rational::zero();
        for (j, seg) in segments.iter().enumerate() {
            let mut seg_worst = Rational::zero();
            let mut y = seg.point.x.clone();
            for i in 0..seg.len {
                let base_dist = seg
                    .point
                    .base
                    .shift_by(i)
                    .rho(&witness.base.shift_by(r[j] + i));
                let fibre_dist = (&y - &orbit[r[j] + i]).abs();
                let d = base_dist.max(fibre_dist);
                if d > seg_worst {
                    seg_worst = d.clone();
                }
                if d > worst {
                    worst = d;
                }
                if i + 1 < seg.len {
                    y = self.fibre_for(seg.point.base.symbol_at(i)).eval(&y)?;
                }
            }
            per_segment.push(seg_worst);
        }

        Ok(TracingAudit {
            r,
            gaps: gaps.to_vec(),
            periodic: true,
            worst_defect: worst,
            per_segment,
        })
    }
}

impl fmt::Debug for SkewSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SkewSystem(n={}, expanding={}, surjective={})",
            self.base.alphabet_size(),
            self.all_expanding,
            self.all_surjective
        )
    }
}

/// A point of the skew product: base sequence plus fibre coordinate.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewPoint {
    pub base: BasePoint,
    pub x: Rational,
}

impl SkewPoint {
    pub fn new(base: BasePoint, x: Rational) -> Result<Self> {
        if !x.in_unit_range() {
            return Err(Error::OutOfUnitRange(x.to_string()));
        }
        Ok(SkewPoint { base, x })
    }
}

impl fmt::Display for SkewPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.base, self.x)
    }
}

impl fmt::Debug for SkewPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// A requested orbit segment: start point and length >= 1.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitSegmentSpec {
    pub point: SkewPoint,
    pub len: usize,
}

/// max(rho of bases, fibre distance): the product metric.
pub fn product_metric(p: &SkewPoint, q: &SkewPoint) -> Rational {
    let base = p.base.rho(&q.base);
    let fibre = (&p.x - &q.x).abs();
    base.max(fibre)
}

/// Verdict of auditing a witness point against requested segments. The
/// worst defect is reported exactly so near-misses stay diagnosable;
/// `periodic` is always true in a returned audit (non-periodic witnesses
/// error out instead).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TracingAudit {
    pub r: Vec<usize>,
    pub gaps: Vec<usize>,
    pub periodic: bool,
    pub worst_defect: Rational,
    pub per_segment: Vec<Rational>,
}

impl TracingAudit {
    pub fn passes_at(&self, eps: &Rational) -> bool {
        self.periodic && self.worst_defect <= *eps
    }
}
