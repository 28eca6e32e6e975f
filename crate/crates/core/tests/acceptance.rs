//! Acceptance checks at their stated orders and D = 60. Prints one PASS/FAIL
//! line per criterion and exits nonzero if any fails. An optional argument
//! selects a single criterion by number.

use qlorentz::verify::{run_suite, SuiteConfig};

fn main() {
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let results = run_suite(&SuiteConfig::default(), &only, |r| println!("{r}"));
    let failed = results.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
