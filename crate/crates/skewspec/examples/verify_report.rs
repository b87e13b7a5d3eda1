//! Reports round-trip through JSON with bit-exact rationals, and the
//! audit path is independent of the construction path: this example
//! serializes a witness report, re-parses it, and re-audits the parsed
//! point from scratch, including the prescribed-gaps variant.
//!
//! Run with: cargo run --example verify_report

use skewspec::numeric::rat;
use skewspec::pwl::PwlMap;
use skewspec::skew::{OrbitSegmentSpec, SkewPoint, SkewSystem};
use skewspec::subshift::Sft;
use skewspec::witness::{witness_auto, WitnessReport};

fn main() {
    let sys = SkewSystem::new(
        Sft::full_shift(2).unwrap(),
        vec![PwlMap::tent(), PwlMap::zigzag3()],
    )
    .unwrap();
    let segments = vec![
        OrbitSegmentSpec {
            point: SkewPoint::new("|12".parse().unwrap(), rat(3, 8)).unwrap(),
            len: 4,
        },
        OrbitSegmentSpec {
            point: SkewPoint::new("|2".parse().unwrap(), rat(1, 9)).unwrap(),
            len: 4,
        },
    ];
    let eps = rat(1, 2);
    let report = witness_auto(&sys, &segments, &eps, 2).unwrap();

    let json = serde_json::to_string_pretty(&report).unwrap();
    println!("{json}\n");

    let parsed: WitnessReport = serde_json::from_str(&json).unwrap();
    assert_eq!(parsed.z, report.z);
    assert_eq!(parsed.eta.to_string(), report.eta.to_string());

    // fresh audit of the parsed witness, uniform gap M
    let audit = sys
        .verify_tracing(&segments, parsed.big_m, &parsed.witness_point())
        .unwrap();
    println!(
        "re-audit from parsed report: periodic = {}, worst defect = {}",
        audit.periodic, audit.worst_defect
    );
    assert!(audit.passes_at(&eps));

    // prescribed-gaps semantics: a witness built for longer segments
    // covers shorter ones with correspondingly larger gaps
    let padded = vec![
        OrbitSegmentSpec {
            point: segments[0].point.clone(),
            len: segments[0].len + 2,
        },
        OrbitSegmentSpec {
            point: segments[1].point.clone(),
            len: segments[1].len + 1,
        },
    ];
    let padded_report = witness_auto(&sys, &padded, &eps, 2).unwrap();
    let gaps = [padded_report.big_m + 2, padded_report.big_m + 1];
    let audit = sys
        .verify_tracing_gaps(&segments, &gaps, &padded_report.witness_point())
        .unwrap();
    println!(
        "prescribed gaps {:?}: worst defect = {} (still <= eps)",
        gaps, audit.worst_defect
    );
    assert!(audit.passes_at(&eps));
}
