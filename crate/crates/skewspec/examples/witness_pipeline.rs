//! The full witness pipeline on a step skew product: pick orbit
//! segments, compute the gap length M(eps), build the periodic base
//! witness with anchor blocks, cut tracing components, pull back nested
//! intervals, solve for the exactly periodic fibre point, and audit.
//!
//! Run with: cargo run --example witness_pipeline

use skewspec::numeric::rat;
use skewspec::pwl::PwlMap;
use skewspec::skew::{OrbitSegmentSpec, SkewPoint, SkewSystem};
use skewspec::subshift::Sft;
use skewspec::witness::{find_mixing_anchor, witness};

fn main() {
    let sys = SkewSystem::new(
        Sft::golden_mean(),
        vec![PwlMap::tent(), PwlMap::valley()],
    )
    .unwrap();
    let segments = vec![
        OrbitSegmentSpec {
            point: SkewPoint::new("|1".parse().unwrap(), rat(1, 3)).unwrap(),
            len: 4,
        },
        OrbitSegmentSpec {
            point: SkewPoint::new("2|1".parse().unwrap(), rat(5, 7)).unwrap(),
            len: 3,
        },
        OrbitSegmentSpec {
            point: SkewPoint::new("|121".parse().unwrap(), rat(1, 16)).unwrap(),
            len: 5,
        },
    ];
    let eps = rat(1, 4);

    let anchor = find_mixing_anchor(&sys, 3).unwrap();
    println!(
        "anchor alpha = {} (composite of period {} is mixing)",
        anchor.alpha(),
        anchor.period_len()
    );

    let report = witness(&sys, &segments, &eps, &anchor).unwrap();
    println!("eps = {}  ->  K = {}, m = {}, M = m*p + 2K = {}", report.eps, report.k_base, report.leo_m, report.big_m);
    println!("gamma (non-shrinking bound) = {}", report.gamma);
    println!("r = {:?}", report.r);
    println!("eta = {} (period {})", report.eta, report.eta.period().len());
    println!("z = {}", report.z);
    for (j, comp) in report.j_components.iter().enumerate() {
        println!("  J_{} = {}", j + 1, comp);
    }
    for (j, nested) in report.k_nested.iter().enumerate() {
        println!("  K_{} = {}", j + 1, nested);
    }
    println!(
        "audit: periodic = {}, worst defect = {} <= eps = {}",
        report.audit.periodic, report.audit.worst_defect, report.eps
    );
    assert!(report.audit.passes_at(&eps));
}
