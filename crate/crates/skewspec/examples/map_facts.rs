//! Exact facts about piecewise-linear interval maps: evaluation, interval
//! images and preimages, laps, expansion rate, surjectivity and the
//! mixing check.
//!
//! Run with: cargo run --example map_facts

use skewspec::numeric::{interval, rat};
use skewspec::pwl::PwlMap;

fn main() {
    let tent = PwlMap::tent();
    println!("tent = {tent}");
    println!("  tent(1/4)        = {}", tent.eval(&rat(1, 4)).unwrap());
    println!("  tent([1/4, 3/4]) = {}", tent.image(&interval(rat(1, 4), rat(3, 4))));
    println!(
        "  tent^-1([1/2, 1]) = {:?} (branches merge at the critical point)",
        tent.preimage_components(&interval(rat(1, 2), rat(1, 1)))
    );
    println!("  expansion rate   = {}", tent.expansion_rate());
    println!("  surjective       = {}", tent.is_surjective());
    println!("  mixing (cap 10)  = {}", tent.is_mixing(10));

    // a map with two linear pieces of the same slope sign: the interior
    // breakpoint at 1/4 is not a critical point
    let bent = PwlMap::new(vec![
        (rat(0, 1), rat(1, 1)),
        (rat(1, 4), rat(1, 4)),
        (rat(1, 2), rat(0, 1)),
        (rat(1, 1), rat(1, 2)),
    ])
    .unwrap();
    let laps = bent.laps();
    println!("\nbent = {bent}");
    println!("  critical points = {:?}", laps.critical_points);
    println!("  laps            = {:?}", laps.laps);
    println!("  expansion rate  = {} (not expanding)", bent.expansion_rate());

    // exact composition: tent after tent is the four-lap sawtooth
    let tent2 = tent.compose_after(&tent);
    println!("\ntent o tent = {tent2}");
    println!("  laps = {}", tent2.laps().laps.len());
}
