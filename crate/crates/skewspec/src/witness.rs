//! The constructive witness pipeline for the specification property of a
//! step skew product: gap length M(eps), the periodic base witness with
//! spliced anchor blocks, exact tracing components, nested covering
//! pullbacks, and the exactly periodic fibre point.
//!
//! Everything here is construction; the verdict always comes from the
//! independent audit in [`crate::skew::SkewSystem::verify_tracing`]. A
//! pipeline whose own output fails that audit aborts with
//! [`Error::InternalContradiction`] rather than returning.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nonshrink::{gamma_bound, ExpandingFamily};
use crate::numeric::{Rational, UnitInterval};
use crate::pwl::{PwlMap, DEFAULT_MIXING_CAP};
use crate::skew::{OrbitSegmentSpec, SkewPoint, SkewSystem, TracingAudit};
use crate::subshift::{check_eps, BasePoint, BaseSegment, Word};

/// Pullback rounds before the periodic solver suspects a breakpoint-
/// periodic limit; each round contracts the candidate interval by at
/// least the minimum expansion rate to the power of the period.
const MAX_SOLVE_ROUNDS: usize = 64;

/// A periodic base word whose fibre composite is mixing; the engine that
/// blows tracing intervals up to [0, 1] inside each gap.
#[derive(Clone, Debug)]
pub struct MixingAnchor {
    alpha: BasePoint,
    composite: PwlMap,
}

impl MixingAnchor {
    /// Validates that the word closes periodically inside the base and
    /// that the composite of its fibres (first symbol applied first) is
    /// mixing.
    pub fn new(sys: &SkewSystem, period_word: Word) -> Result<Self> {
        let alpha = BasePoint::periodic(period_word)?;
        if !sys.base().contains(&alpha) {
            return Err(Error::InvalidWord(format!(
                "anchor word {} does not close inside the subshift",
                alpha.period()
            )));
        }
        let composite = composite_of(sys, &alpha);
        if !composite.is_mixing(DEFAULT_MIXING_CAP) {
            return Err(Error::Hypothesis(format!(
                "composite along {} not proven mixing within {} iterations",
                alpha.period(),
                DEFAULT_MIXING_CAP
            )));
        }
        Ok(MixingAnchor { alpha, composite })
    }

    pub fn alpha(&self) -> &BasePoint {
        &self.alpha
    }

    pub fn composite(&self) -> &PwlMap {
        &self.composite
    }

    pub fn period_len(&self) -> usize {
        self.alpha.period().len()
    }
}

fn composite_of(sys: &SkewSystem, alpha: &BasePoint) -> PwlMap {
    let word = alpha.period().symbols();
    let mut composite = sys.fibre_for(word[0]).clone();
    for &q in &word[1..] {
        composite = sys.fibre_for(q).compose_after(&composite);
    }
    composite
}

/// Searches periodic base words of length 1..=max_period in
/// lexicographic order and returns the first whose composite passes the
/// mixing check. For a base with a fixed symbol and a mixing fibre this
/// finds that fixed point at period 1.
pub fn find_mixing_anchor(sys: &SkewSystem, max_period: usize) -> Result<MixingAnchor> {
    let n = sys.base().alphabet_size();
    for p in 1..=max_period {
        let mut symbols = vec![1usize; p];
        'words: loop {
            let closes = symbols.windows(2).all(|w| sys.base().is_allowed(w[0], w[1]))
                && sys.base().is_allowed(symbols[p - 1], symbols[0]);
            if closes {
                let alpha = BasePoint::periodic(Word::new(symbols.clone()))
                    .expect("period word nonempty");
                let composite = composite_of(sys, &alpha);
                if composite.is_mixing(DEFAULT_MIXING_CAP) {
                    return Ok(MixingAnchor { alpha, composite });
                }
            }
            // next word in lexicographic order
            let mut pos = p;
            loop {
                if pos == 0 {
                    break 'words;
                }
                pos -= 1;
                symbols[pos] += 1;
                if symbols[pos] <= n {
                    break;
                }
                symbols[pos] = 1;
            }
        }
    }
    Err(Error::NoAnchorFound { max_period })
}

/// The quantities behind a gap length: M = m*p + 2K with m the covering
/// exponent of the anchor composite at gamma, p the anchor period, K the
/// base gap length. Depends only on (system, eps, anchor), never on
/// segments.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GapParams {
    #[serde(rename = "M")]
    pub big_m: usize,
    #[serde(rename = "K")]
    pub k_base: usize,
    pub gamma: Rational,
    #[serde(rename = "m")]
    pub leo_m: usize,
}

/// Computes the gap length for eps in (0, 1). Requires expanding and
/// surjective fibres and a primitive base.
pub fn gap_length_m(sys: &SkewSystem, eps: &Rational, anchor: &MixingAnchor) -> Result<GapParams> {
    check_eps(eps)?;
    if !sys.all_surjective() {
        return Err(Error::Hypothesis(
            "all fibre maps must be surjective".into(),
        ));
    }
    let family = ExpandingFamily::new(sys.fibres().to_vec())?;
    let gamma = gamma_bound(&family, eps)?.gamma;
    let leo_m = anchor.composite().leo_exponent(&gamma)?;
    let k_base = sys.base().base_gap_length(eps)?;
    Ok(GapParams {
        big_m: leo_m * anchor.period_len() + 2 * k_base,
        k_base,
        gamma,
        leo_m,
    })
}

/// The exact connected component, containing x, of the set of fibre
/// points whose orbit along eta (maps starting at index `start`) stays
/// within eps of the orbit of x for n steps.
///
/// Built forward: the component starts as the i = 0 target and is cut by
/// each later constraint via single-map preimage components pulled back
/// along the stored forward-image chain.
pub fn tracing_component(
    sys: &SkewSystem,
    eta: &BasePoint,
    start: usize,
    x: &Rational,
    n: usize,
    eps: &Rational,
) -> Result<UnitInterval> {
    if !x.in_unit_range() {
        return Err(Error::OutOfUnitRange(x.to_string()));
    }
    if !eps.is_positive() {
        return Err(Error::EpsOutOfRange(eps.to_string()));
    }
    assert!(n >= 1, "tracing needs at least one step");

    // exact orbit of x and the clamped targets around it
    let mut orbit = vec![x.clone()];
    for t in 0..n - 1 {
        let next = sys.fibre_for(eta.symbol_at(start + t)).eval(&orbit[t])?;
        orbit.push(next);
    }
    let clamp = |z: &Rational| {
        let lo = (z - eps).max(Rational::zero());
        let hi = (z + eps).min(Rational::one());
        UnitInterval::new(lo, hi).expect("clamped target valid")
    };
    let targets: Vec<UnitInterval> = orbit.iter().map(clamp).collect();

    let mut component = targets[0].clone();
    // forward images of the current component
    let mut images = vec![component.clone()];
    let contradiction =
        |what: &str| Error::InternalContradiction(format!("tracing component: {what}"));

    for i in 1..n {
        let g = sys.fibre_for(eta.symbol_at(start + i - 1));
        let pre = g
            .preimage_components(&targets[i])
            .into_iter()
            .find(|c| c.contains(&orbit[i - 1]))
            .ok_or_else(|| contradiction("orbit point escaped its own target"))?;
        let mut v = pre
            .intersect(&images[i - 1])
            .ok_or_else(|| contradiction("component lost the orbit point"))?;
        for t in (1..i).rev() {
            let q = sys.fibre_for(eta.symbol_at(start + t - 1));
            let pre = q
                .preimage_components(&v)
                .into_iter()
                .find(|c| c.contains(&orbit[t - 1]))
                .ok_or_else(|| contradiction("pullback lost the orbit point"))?;
            v = pre
                .intersect(&images[t - 1])
                .ok_or_else(|| contradiction("pullback left the image chain"))?;
        }
        component = v;
        images.clear();
        images.push(component.clone());
        for t in 0..i {
            let g = sys.fibre_for(eta.symbol_at(start + t));
            let next = g.image(&images[t]);
            images.push(next);
        }
    }
    debug_assert!(component.contains(x));
    Ok(component)
}

/// Minimal leftmost closed subinterval of `w` mapping exactly onto `v`
/// under `g`. Requires v inside g(w); the endpoints of the result map
/// onto the endpoints of v with no interior preimages of either value.
fn pull_one_step(g: &PwlMap, w: &UnitInterval, v: &UnitInterval) -> Result<UnitInterval> {
    let in_w = |c: &UnitInterval| w.contains(c.lo());
    if v.is_degenerate() {
        let point = g
            .preimage_components(&v.clone())
            .into_iter()
            .filter(in_w)
            .map(|c| c.lo().clone())
            .next()
            .ok_or(Error::TargetNotCovered)?;
        return UnitInterval::point(point);
    }
    let lo_target = UnitInterval::point(v.lo().clone()).expect("endpoint in [0,1]");
    let hi_target = UnitInterval::point(v.hi().clone()).expect("endpoint in [0,1]");
    let mut hits: Vec<(Rational, bool)> = Vec::new();
    for c in g.preimage_components(&lo_target) {
        if in_w(&c) {
            hits.push((c.lo().clone(), false));
        }
    }
    for c in g.preimage_components(&hi_target) {
        if in_w(&c) {
            hits.push((c.lo().clone(), true));
        }
    }
    hits.sort_by(|a, b| a.0.cmp(&b.0));
    for pair in hits.windows(2) {
        if pair[0].1 != pair[1].1 {
            return UnitInterval::new(pair[0].0.clone(), pair[1].0.clone());
        }
    }
    Err(Error::TargetNotCovered)
}

/// An interval V inside `source` with f_start^len(V) = `target` exactly,
/// extracted one map at a time against the tracked forward image chain
/// (the interval covering argument); at every step the leftmost minimal
/// subinterval is taken, so results are reproducible.
pub fn pullback_onto(
    sys: &SkewSystem,
    eta: &BasePoint,
    start: usize,
    len: usize,
    source: &UnitInterval,
    target: &UnitInterval,
) -> Result<UnitInterval> {
    let mut chain = vec![source.clone()];
    for t in 0..len {
        let g = sys.fibre_for(eta.symbol_at(start + t));
        let next = g.image(&chain[t]);
        chain.push(next);
    }
    if !chain[len].contains_interval(target) {
        return Err(Error::TargetNotCovered);
    }
    let mut v = target.clone();
    for t in (0..len).rev() {
        let g = sys.fibre_for(eta.symbol_at(start + t));
        v = pull_one_step(g, &chain[t], &v)?;
    }
    Ok(v)
}

/// An exact rational z in `region` with f_0^period(z) = z along eta.
///
/// Repeated self-pullbacks shrink the candidate interval until its whole
/// forward orbit stays within single linear pieces; the composition is
/// then affine with |slope| > 1 and the fixed point is solved exactly.
/// If the rounds stall (the limit orbit passes through a breakpoint),
/// the finitely many breakpoint-periodic candidates are tested exactly.
pub fn periodic_point_in(
    sys: &SkewSystem,
    eta: &BasePoint,
    period: usize,
    region: &UnitInterval,
) -> Result<Rational> {
    assert!(period >= 1, "period must be positive");
    let mut current = region.clone();
    for _ in 0..MAX_SOLVE_ROUNDS {
        if let Some((slope, intercept)) = affine_along(sys, eta, period, &current) {
            // z = intercept / (1 - slope); |slope| > 1 for expanding fibres
            let z = &intercept / (Rational::one() - &slope);
            if !current.contains(&z) {
                return Err(Error::InternalContradiction(format!(
                    "affine fixed point {z} escaped its bracket {current}"
                )));
            }
            let back = sys.nonaut_compose(eta, 0, period, &z)?;
            if back != z {
                return Err(Error::InternalContradiction(
                    "affine fixed point fails exact periodicity".into(),
                ));
            }
            return Ok(z);
        }
        current = pullback_onto(sys, eta, 0, period, &current, &current)?;
    }
    // stalled: the limit may be a periodic breakpoint orbit
    for t in 0..period {
        let g = sys.fibre_for(eta.symbol_at(t));
        for (b, _) in g.nodes() {
            let cand = sys.nonaut_compose(eta, t, period - t, b)?;
            if current.contains(&cand) && sys.nonaut_compose(eta, 0, period, &cand)? == cand {
                return Ok(cand);
            }
        }
    }
    Err(Error::InternalContradiction(
        "periodic point solve stalled without a breakpoint-periodic candidate".into(),
    ))
}

/// The exact affine form (slope, intercept) of f_0^period restricted to
/// `u`, when every forward image stays inside a single linear piece of
/// the map applied next; `None` as soon as an image straddles a
/// breakpoint.
fn affine_along(
    sys: &SkewSystem,
    eta: &BasePoint,
    period: usize,
    u: &UnitInterval,
) -> Option<(Rational, Rational)> {
    let mut slope = Rational::one();
    let mut intercept = Rational::zero();
    let mut cur = u.clone();
    for t in 0..period {
        let g = sys.fibre_for(eta.symbol_at(t));
        let nodes = g.nodes();
        let mut piece = None;
        for i in 0..nodes.len() - 1 {
            if &nodes[i].0 <= cur.lo() && cur.hi() <= &nodes[i + 1].0 {
                piece = Some(i);
                break;
            }
        }
        let i = piece?;
        let (a, b) = &nodes[i];
        let (a1, b1) = &nodes[i + 1];
        let s = (b1 - b) / (a1 - a);
        let c = b - &s * a;
        // compose x -> s*x + c after the accumulated map
        intercept = &s * &intercept + &c;
        slope = &s * &slope;
        cur = g.image(&cur);
    }
    Some((slope, intercept))
}

/// Summary of the anchor used by a run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnchorInfo {
    pub alpha: BasePoint,
    pub period: usize,
}

/// Everything a run produces: the gap data, the periodic base witness,
/// the exactly periodic fibre point, the tracing components and nested
/// pullback intervals, and the independent audit. All rationals are
/// exact; reports are byte-identical across runs on equal inputs (the
/// pullback tie-break is leftmost, so intervals are comparable across
/// runs only under that convention).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessReport {
    pub eps: Rational,
    #[serde(rename = "M")]
    pub big_m: usize,
    #[serde(rename = "K")]
    pub k_base: usize,
    pub gamma: Rational,
    #[serde(rename = "m")]
    pub leo_m: usize,
    pub anchor: AnchorInfo,
    pub eta: BasePoint,
    pub z: Rational,
    pub r: Vec<usize>,
    #[serde(rename = "J")]
    pub j_components: Vec<UnitInterval>,
    #[serde(rename = "K_nested")]
    pub k_nested: Vec<UnitInterval>,
    pub audit: TracingAudit,
}

impl WitnessReport {
    pub fn witness_point(&self) -> SkewPoint {
        SkewPoint {
            base: self.eta.clone(),
            x: self.z.clone(),
        }
    }
}

/// Runs the whole pipeline for the given segments at tolerance eps:
/// gap length, base witness with anchor blocks at offset n_j + K inside
/// every gap, tracing components at each r_{j-1}, nested covering
/// pullbacks, the exactly periodic fibre point, and the final
/// independent audit (which must pass, or the run aborts).
///
/// k = 1 is accepted as the degenerate case even though tracing usually
/// speaks of k >= 2; it exercises the same machinery.
pub fn witness(
    sys: &SkewSystem,
    segments: &[OrbitSegmentSpec],
    eps: &Rational,
    anchor: &MixingAnchor,
) -> Result<WitnessReport> {
    check_eps(eps)?;
    if segments.is_empty() {
        return Err(Error::InvalidWord("need at least one segment".into()));
    }
    for seg in segments {
        if seg.len == 0 {
            return Err(Error::InvalidWord("segment length must be >= 1".into()));
        }
        sys.check_point(&seg.point)?;
    }

    let gap = gap_length_m(sys, eps, anchor)?;
    let block = anchor.alpha().period().repeat(gap.leo_m);
    debug_assert_eq!(block.len(), gap.leo_m * anchor.period_len());

    let base_segments: Vec<BaseSegment> = segments
        .iter()
        .map(|seg| BaseSegment {
            point: seg.point.base.clone(),
            len: seg.len,
            insert_after: Some(block.clone()),
        })
        .collect();
    let eta = crate::subshift::construct_base_witness(sys.base(), &base_segments, eps, gap.k_base)?;

    let mut r = vec![0usize];
    for seg in segments {
        r.push(r.last().unwrap() + seg.len + gap.big_m);
    }
    let r_k = *r.last().unwrap();
    if eta.period().len() != r_k {
        return Err(Error::InternalContradiction(format!(
            "base witness period {} does not match r_k = {r_k}",
            eta.period().len()
        )));
    }

    // anchor-block fidelity: eps < 1 forces the exact anchor symbols
    // through each gap's block window
    for (j, seg) in segments.iter().enumerate() {
        for i in 0..block.len() {
            let at = r[j] + seg.len + gap.k_base + i;
            if eta.symbol_at(at) != anchor.alpha().symbol_at(i) {
                return Err(Error::InternalContradiction(
                    "anchor block not carried verbatim in the witness".into(),
                ));
            }
        }
    }

    let mut j_components = Vec::with_capacity(segments.len());
    for (j, seg) in segments.iter().enumerate() {
        let comp = tracing_component(sys, &eta, r[j], &seg.point.x, seg.len, eps)?;
        // some image within the segment must have length >= eps, which
        // feeds the non-shrinking bound through the gap
        let spread = (0..seg.len).any(|i| sys.nonaut_image(&eta, r[j], i, &comp).length() >= *eps);
        if !spread {
            return Err(Error::InternalContradiction(
                "tracing component never spreads to eps within its segment".into(),
            ));
        }
        // full-image milestones: covered right after the anchor block,
        // and still covered at the end of the slot by surjectivity
        let after_block = seg.len + gap.k_base + block.len();
        if !sys.nonaut_image(&eta, r[j], after_block, &comp).is_full() {
            return Err(Error::InternalContradiction(
                "anchor block failed to blow the component up to [0,1]".into(),
            ));
        }
        if !sys
            .nonaut_image(&eta, r[j], seg.len + gap.big_m, &comp)
            .is_full()
        {
            return Err(Error::InternalContradiction(
                "full image not preserved through the gap".into(),
            ));
        }
        j_components.push(comp);
    }

    let mut k_nested: Vec<UnitInterval> = Vec::with_capacity(segments.len().saturating_sub(1));
    let mut carrier = j_components[0].clone();
    for j in 1..segments.len() {
        carrier = pullback_onto(sys, &eta, 0, r[j], &carrier, &j_components[j])?;
        k_nested.push(carrier.clone());
    }

    let z_region = k_nested.last().unwrap_or(&j_components[0]);
    let z = periodic_point_in(sys, &eta, r_k, z_region)?;

    let audit = sys.verify_tracing(
        segments,
        gap.big_m,
        &SkewPoint {
            base: eta.clone(),
            x: z.clone(),
        },
    )?;
    if !audit.passes_at(eps) {
        return Err(Error::InternalContradiction(format!(
            "constructed witness audits at defect {}, above eps = {eps}",
            audit.worst_defect
        )));
    }

    Ok(WitnessReport {
        eps: eps.clone(),
        big_m: gap.big_m,
        k_base: gap.k_base,
        gamma: gap.gamma,
        leo_m: gap.leo_m,
        anchor: AnchorInfo {
            alpha: anchor.alpha().clone(),
            period: anchor.period_len(),
        },
        eta,
        z,
        r,
        j_components,
        k_nested,
        audit,
    })
}

/// Convenience entry point: searches for an anchor up to `max_period`
/// and runs the pipeline with it.
pub fn witness_auto(
    sys: &SkewSystem,
    segments: &[OrbitSegmentSpec],
    eps: &Rational,
    max_period: usize,
) -> Result<WitnessReport> {
    let anchor = find_mixing_anchor(sys, max_period)?;
    witness(sys, segments, eps, &anchor)
}
