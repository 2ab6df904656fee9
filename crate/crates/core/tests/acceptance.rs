//! Runs every acceptance criterion and prints one line per criterion.
//!
//! Criteria listed in `KNOWN_DEVIATIONS` are still computed and reported; they fail the run only
//! if they unexpectedly start passing, which means the recorded analysis needs revisiting.

use gp_core::acceptance::{criteria, run_criterion, DEFAULT_SEED, KNOWN_DEVIATIONS};

fn main() {
    let mut unexpected = Vec::new();
    for c in criteria() {
        let o = run_criterion(&c, DEFAULT_SEED);
        println!("{}", o.line());
        let known = KNOWN_DEVIATIONS.iter().any(|(id, _)| *id == o.id);
        if o.passed == known {
            unexpected.push(o.id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
