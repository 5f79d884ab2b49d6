//! Runs the aⁿbⁿ two-tape machine, then steps through one input by hand.
//!
//! ```text
//! cargo run --example classical_run
//! ```

use multitape::library::leq;
use multitape::run::{Configuration, Status};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = leq()?;
    for w in ["", "ab", "aabb", "aab", "ba", "aaabbb"] {
        let out = m.run(w, None)?;
        println!("{w:>8}  {:?} after {} steps", out.verdict, out.steps);
    }

    let word = m.control().encode("ab")?;
    let mut config = Configuration::initial(m.control());
    println!("\nstep  state  heads   active  scanned");
    loop {
        let sym = config.scanned_symbol(m.control(), &word);
        println!(
            "{:>4}  {:<5}  {:<6}  T{}      {sym}",
            config.steps,
            m.control().state_name(config.state),
            format!("{:?}", config.heads.as_slice()),
            config.active + 1,
        );
        if let Status::Halted(v) = m.step(&mut config, &word)? {
            println!("{:>4}  {}  {v:?}", config.steps, m.control().state_name(config.state));
            break;
        }
    }
    Ok(())
}
