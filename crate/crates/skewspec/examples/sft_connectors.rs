//! Subshift-of-finite-type machinery: primitivity exponents, connecting
//! words between arbitrary symbols, and the base gap length K(eps).
//!
//! Run with: cargo run --example sft_connectors

use skewspec::numeric::rat;
use skewspec::subshift::{agreement_depth, Sft};

fn main() {
    let golden = Sft::golden_mean();
    let p = golden.primitivity_exponent().unwrap();
    println!("golden-mean shift (forbidden word 22): primitivity exponent = {p}");

    for a in 1..=2 {
        for b in 1..=2 {
            let w = golden.connecting_word(a, b, p).unwrap();
            println!("  {a} -[{w}]-> {b}  (word {a}{w}{b} is legal)");
        }
    }

    for eps in [rat(1, 2), rat(1, 4), rat(1, 8)] {
        let h = agreement_depth(&eps);
        let k = golden.base_gap_length(&eps).unwrap();
        println!("eps = {eps}: agreement depth h = {h}, gap length K = h + P = {k}");
    }

    // a two-state cycle is irreducible but not primitive: no uniform
    // connector length exists
    let cycle = Sft::new(2, vec![vec![false, true], vec![true, false]]).unwrap();
    println!(
        "period-2 cycle: primitivity_exponent -> {}",
        cycle.primitivity_exponent().unwrap_err()
    );
}
