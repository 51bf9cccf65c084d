//! Acceptance suite: one line per criterion.
//!
//! Criterion 5 is a documented failure (see the README): the case-one `s2`
//! error is not monotone over xi in {1, 2, 3}. It is still run and reported
//! as FAIL; only unexpected failures make this target exit nonzero.

use p2c::acceptance::{run, CRITERIA};

const KNOWN_FAILURES: [u8; 1] = [5];

fn main() {
    let mut unexpected = Vec::new();
    for id in CRITERIA {
        let outcome = run(id);
        let known = KNOWN_FAILURES.contains(&id);
        let note = match (outcome.passed, known) {
            (false, true) => " [known failure]",
            (true, true) => " [known failure now passes]",
            _ => "",
        };
        println!("{}{note}", outcome.line());
        if !outcome.passed && !known {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: no unexpected failures");
    } else {
        println!("acceptance: unexpected failures in criteria {unexpected:?}");
        std::process::exit(1);
    }
}
