//! Specification witnesses inside the base subshift alone: a single
//! periodic sequence that traces several requested orbit segments with a
//! uniform gap, audited exactly.
//!
//! Run with: cargo run --example base_witness

use skewspec::numeric::rat;
use skewspec::subshift::{construct_base_witness, verify_base_tracing, BasePoint, BaseSegment, Sft};

fn main() {
    let golden = Sft::golden_mean();
    let eps = rat(1, 4);
    let k_gap = golden.base_gap_length(&eps).unwrap();
    println!("golden mean, eps = {eps}: gap length K = {k_gap}");

    let segments = vec![
        BaseSegment {
            point: "|12".parse::<BasePoint>().unwrap(),
            len: 4,
            insert_after: None,
        },
        BaseSegment {
            point: "|1".parse::<BasePoint>().unwrap(),
            len: 3,
            insert_after: None,
        },
        BaseSegment {
            point: "21|112".parse::<BasePoint>().unwrap(),
            len: 5,
            insert_after: None,
        },
    ];
    let eta = construct_base_witness(&golden, &segments, &eps, k_gap).unwrap();
    println!("witness eta = {eta} (period {})", eta.period().len());

    let plain: Vec<(BasePoint, usize)> = segments
        .iter()
        .map(|s| (s.point.clone(), s.len))
        .collect();
    let audit = verify_base_tracing(&plain, k_gap, &eta);
    println!(
        "audit: periodic = {}, worst rho-defect = {} (eps = {eps})",
        audit.periodic, audit.worst_defect
    );
    assert!(audit.passes_at(&eps));

    // the same machinery carries spliced blocks through the gaps; the
    // skew-product pipeline uses this for its anchor blocks
    let with_block = vec![BaseSegment {
        point: "|12".parse::<BasePoint>().unwrap(),
        len: 3,
        insert_after: Some("11".parse().unwrap()),
    }];
    let eta = construct_base_witness(&golden, &with_block, &eps, k_gap).unwrap();
    println!("with a spliced block: eta = {eta}");
}
