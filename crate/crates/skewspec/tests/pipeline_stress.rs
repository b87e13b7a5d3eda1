//! Harder pipeline shapes than the acceptance scenarios: an anchor of
//! period two (both fibres individually non-mixing), small tolerances,
//! maximal segment counts, and hypothesis-violation errors.

use skewspec::error::Error;
use skewspec::numeric::{rat, Rational};
use skewspec::pwl::PwlMap;
use skewspec::skew::{OrbitSegmentSpec, SkewPoint, SkewSystem};
use skewspec::subshift::Sft;
use skewspec::witness::{find_mixing_anchor, gap_length_m, witness, witness_auto};

/// Expanding, surjective, and not mixing: [0, 1/2] is invariant.
fn lower_trap() -> PwlMap {
    PwlMap::new(vec![
        (rat(0, 1), rat(0, 1)),
        (rat(1, 4), rat(1, 2)),
        (rat(1, 2), rat(0, 1)),
        (rat(3, 4), rat(1, 1)),
        (rat(1, 1), rat(0, 1)),
    ])
    .unwrap()
}

/// The mirror image: [1/2, 1] is invariant.
fn upper_trap() -> PwlMap {
    PwlMap::new(vec![
        (rat(0, 1), rat(1, 1)),
        (rat(1, 4), rat(0, 1)),
        (rat(1, 2), rat(1, 1)),
        (rat(3, 4), rat(1, 2)),
        (rat(1, 1), rat(1, 1)),
    ])
    .unwrap()
}

#[test]
fn trap_fibres_are_individually_not_mixing() {
    for map in [lower_trap(), upper_trap()] {
        assert!(map.is_expanding());
        assert!(map.is_surjective());
        assert!(!map.is_mixing(64));
    }
}

#[test]
fn anchor_of_period_two_carries_the_pipeline() {
    let sys = SkewSystem::new(
        Sft::full_shift(2).unwrap(),
        vec![lower_trap(), upper_trap()],
    )
    .unwrap();
    let anchor = find_mixing_anchor(&sys, 2).expect("a two-symbol composite should mix");
    assert_eq!(anchor.period_len(), 2, "period-1 anchors must all fail here");

    let eps = rat(1, 4);
    let gap = gap_length_m(&sys, &eps, &anchor).unwrap();
    assert_eq!(gap.big_m, gap.leo_m * 2 + 2 * gap.k_base);

    let segments = vec![
        OrbitSegmentSpec {
            point: SkewPoint::new("|1".parse().unwrap(), rat(1, 3)).unwrap(),
            len: 4,
        },
        OrbitSegmentSpec {
            point: SkewPoint::new("|21".parse().unwrap(), rat(7, 9)).unwrap(),
            len: 3,
        },
    ];
    let report = witness(&sys, &segments, &eps, &anchor).unwrap();
    assert!(report.audit.passes_at(&eps));
    assert_eq!(report.anchor.period, 2);

    // the block really is the anchor word repeated leo_m times, and the
    // anchor is rho-traced through every gap's block window
    let block_len = report.leo_m * 2;
    for (j, seg) in segments.iter().enumerate() {
        let offset = report.r[j] + seg.len + report.k_base;
        for i in 0..block_len {
            assert_eq!(
                report.eta.symbol_at(offset + i),
                report.anchor.alpha.symbol_at(i)
            );
            let d = report
                .anchor
                .alpha
                .shift_by(i)
                .rho(&report.eta.shift_by(offset + i));
            assert!(d <= eps, "anchor tracing defect {d} at gap {j}, offset {i}");
        }
    }
}

#[test]
fn small_eps_and_max_segments() {
    let sys = SkewSystem::new(
        Sft::golden_mean(),
        vec![PwlMap::tent(), PwlMap::zigzag3()],
    )
    .unwrap();
    let eps = rat(1, 64);
    let segments: Vec<OrbitSegmentSpec> = [
        ("|1", rat(1, 3), 8),
        ("21|1", rat(63, 64), 8),
        ("|121", rat(1, 7), 8),
        ("|112", rat(5, 11), 8),
    ]
    .into_iter()
    .map(|(b, x, len)| OrbitSegmentSpec {
        point: SkewPoint::new(b.parse().unwrap(), x).unwrap(),
        len,
    })
    .collect();
    let report = witness_auto(&sys, &segments, &eps, 2).unwrap();
    assert!(report.audit.passes_at(&eps));
    // h(1/64) = 6, P = 2 for the golden mean
    assert_eq!(report.k_base, 8);
    let r_k = *report.r.last().unwrap();
    assert_eq!(report.eta.period().len(), r_k);
    assert!(report.eta.shift_by(r_k).seq_eq(&report.eta));
}

#[test]
fn non_surjective_fibres_are_rejected() {
    let squashed = PwlMap::new(vec![(rat(0, 1), rat(0, 1)), (rat(1, 1), rat(1, 2))]).unwrap();
    let sys = SkewSystem::new(
        Sft::full_shift(2).unwrap(),
        vec![PwlMap::tent(), squashed],
    )
    .unwrap();
    assert!(!sys.all_surjective());
    let segments = vec![OrbitSegmentSpec {
        point: SkewPoint::new("|1".parse().unwrap(), Rational::zero()).unwrap(),
        len: 2,
    }];
    // the anchor itself is fine (symbol 1 gives the tent) but the gap
    // computation must reject the system
    let anchor = find_mixing_anchor(&sys, 1).unwrap();
    assert!(matches!(
        witness(&sys, &segments, &rat(1, 2), &anchor),
        Err(Error::Hypothesis(_))
    ));
}

#[test]
fn non_expanding_fibres_are_rejected() {
    // a slope of modulus exactly 1 passes surjectivity but not expansion
    let sawtooth = PwlMap::new(vec![
        (rat(0, 1), rat(0, 1)),
        (rat(1, 2), rat(1, 1)),
        (rat(1, 1), rat(1, 2)),
    ])
    .unwrap();
    assert_eq!(sawtooth.expansion_rate(), rat(1, 1));
    let sys = SkewSystem::new(
        Sft::full_shift(2).unwrap(),
        vec![PwlMap::tent(), sawtooth],
    )
    .unwrap();
    let segments = vec![OrbitSegmentSpec {
        point: SkewPoint::new("|1".parse().unwrap(), Rational::zero()).unwrap(),
        len: 2,
    }];
    let anchor = find_mixing_anchor(&sys, 1).unwrap();
    assert!(matches!(
        witness(&sys, &segments, &rat(1, 2), &anchor),
        Err(Error::NotExpanding { .. })
    ));
}
