//! The non-shrinking lower bound for expanding families: for every eps
//! there is a gamma > 0 such that no composition drawn from the family
//! can squeeze an interval of length >= eps below gamma. Prints the full
//! certificate and fuzzes it.
//!
//! Run with: cargo run --example gamma_certificate

use skewspec::nonshrink::{fuzz_nonshrink, gamma_bound, ExpandingFamily};
use skewspec::numeric::rat;
use skewspec::pwl::PwlMap;

fn main() {
    let family = ExpandingFamily::new(vec![PwlMap::tent(), PwlMap::valley()]).unwrap();
    let eps = rat(1, 2);
    let cert = gamma_bound(&family, &eps).unwrap();

    println!("family: tent, valley; eps = {eps}");
    println!("  alpha (least rate)     = {}", cert.alpha);
    println!("  m (alpha^m > 2)        = {}", cert.m);
    for t in &cert.per_tuple {
        println!("  beta for tuple {:?} = {}", t.indices, t.beta);
    }
    println!("  beta                   = {}", cert.beta);
    println!("  gamma = min(eps/2, beta) = {}", cert.gamma);

    let report = fuzz_nonshrink(&family, &eps, 2000, 120, 42).unwrap();
    println!(
        "fuzz: {} random (word, interval) pairs, violations = {}, least length seen = {}",
        report.trials, report.violations, report.min_length_seen
    );
    assert_eq!(report.violations, 0);

    // the bound needs genuine expansion: a family containing a map with
    // a slope of modulus 1 is rejected outright
    let g = PwlMap::new(vec![
        (rat(0, 1), rat(1, 1)),
        (rat(1, 4), rat(1, 4)),
        (rat(1, 2), rat(0, 1)),
        (rat(1, 1), rat(1, 2)),
    ])
    .unwrap();
    match ExpandingFamily::new(vec![PwlMap::tent(), g]) {
        Err(e) => println!("family with a rate-1 member: {e}"),
        Ok(_) => unreachable!(),
    }
}
