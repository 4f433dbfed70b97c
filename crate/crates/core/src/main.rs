//! `reflexive-lab` command-line front end.
//!
//! Exit codes: 0 success, 1 error, 2 counterexample found by `search`,
//! 3 internal inconsistency (closed form vs. oracle, or a verification
//! discrepancy).

mod cli;

use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(cli::run(std::env::args_os().collect()))
}
