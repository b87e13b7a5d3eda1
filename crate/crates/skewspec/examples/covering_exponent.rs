//! The covering exponent of a mixing map: an m such that every interval
//! of length >= gamma maps onto [0, 1] after m steps, with a brute-force
//! confirmation on a grid of anchored intervals.
//!
//! Run with: cargo run --example covering_exponent

use skewspec::numeric::{interval, rat, Rational};
use skewspec::pwl::PwlMap;

fn main() {
    let tent = PwlMap::tent();
    for gamma in [rat(1, 2), rat(1, 4), rat(1, 8)] {
        let m = tent.leo_exponent(&gamma).unwrap();
        println!("gamma = {gamma}: m = {m} (tent^{m}(U) = [0,1] for every |U| >= {gamma})");

        // confirm on all grid-anchored intervals of length exactly gamma
        let grid = 128i64;
        let mut checked = 0usize;
        for k in 0..=grid {
            let a = rat(k, grid);
            let b = &a + &gamma;
            if !b.in_unit_range() {
                break;
            }
            let mut u = interval(a, b);
            for _ in 0..m {
                u = tent.image(&u);
            }
            assert!(u.is_full());
            checked += 1;
        }
        println!("  confirmed on {checked} anchored intervals (1/{grid} grid)");
    }

    // gamma = 1 is degenerate: the only qualifying interval is [0,1]
    assert_eq!(tent.leo_exponent(&Rational::one()).unwrap(), 0);
    println!("gamma = 1/1: m = 0 (the only interval of length 1 is [0,1] itself)");
}
