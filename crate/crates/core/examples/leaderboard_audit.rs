//! Full audit of a leaderboard CSV, written as a JSON report.
//!
//!     cargo run --release --example leaderboard_audit -- board.csv ordinal report.json
//!
//! Without arguments, audits a generated board and prints the report.

use benchaudit::generate_random;
use benchaudit::workbench::io::write_json;
use benchaudit::workbench::{audit, load_leaderboard, AuditOptions, SensitivityMethod};

fn main() -> benchaudit::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let scores = match args.first() {
        Some(path) => load_leaderboard(path)?,
        None => generate_random(25, 6, 9)?,
    };
    let method = match args.get(1).map(String::as_str) {
        Some("ordinal") => SensitivityMethod::ordinal(),
        _ => SensitivityMethod::cardinal(),
    };
    let report = audit("example", &scores, &AuditOptions::new(method))?;
    match args.get(2) {
        Some(out) => write_json(&report, out)?,
        None => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
    }
    Ok(())
}
