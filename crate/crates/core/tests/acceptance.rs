use std::process::ExitCode;

use linkgrass::verify::{run_suite, Params, SUITES};

const TITLES: [&str; 12] = [
    "Weyl lengths",
    "parahoric orders",
    "admissibility criteria agree",
    "irreducible components",
    "Bruhat order equals rank order",
    "strata and rank vectors correspond",
    "decomposition matches rank formula",
    "degeneration chains",
    "simplex inequalities",
    "dimension one strata and faces",
    "complete graphs",
    "projective exactly on top strata",
];

fn main() -> ExitCode {
    let params = Params::default();
    let mut failed = 0;
    for (i, suite) in SUITES.iter().enumerate() {
        let (ok, detail) = match run_suite(suite, &params) {
            Ok(rep) => {
                let detail = format!("{} checks, {} ms", rep.checks, rep.millis);
                for f in &rep.failures {
                    eprintln!("    {f}");
                }
                (rep.passed, detail)
            }
            Err(e) => (false, e.to_string()),
        };
        failed += !ok as usize;
        println!("criterion {:>2} {:<36} {} ({detail})", i + 1, TITLES[i], if ok { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} of {} passed", SUITES.len() - failed, SUITES.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
