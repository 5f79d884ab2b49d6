//! Checks every classical library machine against its membership
//! predicate on all short strings.
//!
//! ```text
//! cargo run --release --example oracle_sweep
//! ```

use multitape::library::{self, AnyMachine};
use multitape::verify::verify_classical;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for entry in library::all()? {
        let AnyMachine::Classical(m) = &entry.machine else { continue };
        let max_len = if m.control().alphabet().len() > 2 { 7 } else { 10 };
        let report = verify_classical(m, &entry.oracle, max_len);
        let status = match &report.counterexample {
            None => "ok".to_string(),
            Some(c) => format!("counterexample {:?}", c.input),
        };
        println!("{:<16} {:>6} strings  {status}", entry.id, report.strings());
    }
    Ok(())
}
