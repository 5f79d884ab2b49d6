//! Writes a library machine in the text format, reads it back, and
//! parses a hand-written file with a mistake in it.
//!
//! ```text
//! cargo run --example machine_file_roundtrip
//! ```

use multitape::format::{export_machine, parse_machine};
use multitape::library::{self, AnyMachine};

const COIN: &str = "\
machine coin
tapes 1
alphabet a
states s m acc rej
initial s
accept acc
reject rej
qstates q0 q1
qinitial q0
unitary H matrix 1/sqrt2 1/sqrt2 1/sqrt2 -1/sqrt2
measure M std
theta s LM1 H
delta s LM1 -> m S
theta m LM1 M
delta m LM1 @0 -> acc S
delta m LM1 @1 -> rej S
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let entry = library::build("lsquare-2tqcfa", 0.125)?;
    let text = export_machine(&entry.machine)?;
    println!("{} lines, first ones:", text.lines().count());
    for line in text.lines().take(12) {
        println!("  {line}");
    }
    let back = parse_machine(&text)?;
    println!("round trip identical: {}", export_machine(&back)? == text);

    let coin = parse_machine(COIN)?;
    if let AnyMachine::Quantum(q) = &coin {
        println!("\n{} parsed: {} operations", q.name(), q.operations().len());
    }
    print!("{}", export_machine(&coin)?);

    let broken = COIN.replace("delta s LM1 -> m S", "delta s LM1 -> n S");
    match parse_machine(&broken) {
        Ok(_) => println!("unexpectedly parsed"),
        Err(e) => println!("\nbroken file: {e}"),
    }
    Ok(())
}
