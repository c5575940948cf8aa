use std::process::ExitCode;

use turan_core::acceptance::{run_suite, SuiteConfig};

fn main() -> ExitCode {
    let quick = std::env::args().any(|a| a == "--quick") || std::env::var_os("TURAN_QUICK").is_some();
    let cfg = if quick { SuiteConfig::quick() } else { SuiteConfig::full() };
    let results = run_suite(&cfg, |r| println!("{}", r.line()));
    let failed = results.iter().filter(|r| !r.pass).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
