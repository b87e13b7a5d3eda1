//! Why the expansion hypothesis cannot be weakened to rate >= 1: three
//! surjective maps with all slopes of modulus >= 1 whose adaptive
//! schedule drives an interval's length down by a factor <= 2/3 at every
//! g-event. With an irrational translation parameter the events recur
//! forever; a high-precision rational stands in here and the finite-
//! horizon contraction structure is exact.
//!
//! Run with: cargo run --example shrink_schedule

use skewspec::nonshrink::{shrinking_system, ScheduleMap};
use skewspec::numeric::rat;

fn main() {
    let xi = rat(13093, 55459); // convergent-quality approximation below 1/4
    let steps = 2000;
    let trace = shrinking_system(&xi, steps).unwrap();

    println!("xi = {xi}, {} map applications", trace.steps.len());
    println!("schedule head (phi-run length, then f or g):");
    for (k, psi) in trace.schedule.iter().take(12) {
        println!("  phi^{k} then {psi}");
    }

    let mut length = trace.initial.length();
    println!("\ncontraction events:");
    for step in &trace.steps {
        if step.map == ScheduleMap::G {
            println!(
                "  step {:>5}: {} -> {}",
                step.step,
                length,
                step.interval.length()
            );
        }
        length = step.interval.length();
    }
    println!(
        "\n{} g-events; final length = {}",
        trace.g_event_count(),
        trace.final_interval().length()
    );
}
