//! Recomputes every published university-level figure and prints each
//! next to its printed value. Exits non-zero if a check fails.

fn main() -> std::process::ExitCode {
    match fssrank::replicate::replicate() {
        Ok(report) => {
            println!("{report}");
            if report.passed() {
                std::process::ExitCode::SUCCESS
            } else {
                std::process::ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::ExitCode::from(2)
        }
    }
}
