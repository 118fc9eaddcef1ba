//! Runs every acceptance criterion at full size and prints one line each.
//!
//! Criteria listed in `KNOWN_FAILURES` are expected to fail; the target
//! fails if any other criterion fails or if a known failure starts passing.

use std::process::ExitCode;

use alphadpp::parallel::resolve_threads;
use alphadpp::verify::{run, Mode, Suite, ALL, KNOWN_FAILURES};

fn main() -> ExitCode {
    let suite = Suite {
        mode: Mode::Full,
        threads: resolve_threads(None).expect("thread count"),
        seed: 20_241_016,
    };
    let mut failing = Vec::new();
    for id in ALL {
        let r = run(id, &suite);
        let verdict = if r.pass { "PASS" } else { "FAIL" };
        let known = if !r.pass && KNOWN_FAILURES.contains(&id) {
            " (known)"
        } else {
            ""
        };
        println!(
            "criterion {id:>2} {verdict}{known}  {:<45} observed {:.3e}  tolerance {:.1e}  {:.2}s  {}",
            r.name, r.observed, r.tolerance, r.seconds, r.detail
        );
        if !r.pass {
            failing.push(id);
        }
    }
    if failing == KNOWN_FAILURES {
        println!(
            "acceptance: {} of {} criteria pass; failing set matches the known list {KNOWN_FAILURES:?}",
            ALL.len() - failing.len(),
            ALL.len()
        );
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failing:?}, expected exactly {KNOWN_FAILURES:?}");
        ExitCode::FAILURE
    }
}
