//! The counter-based machines for aⁿb^{n^k}: accepted inputs and their
//! step counts.
//!
//! ```text
//! cargo run --example counter_machines
//! ```

use multitape::library::{kpow_tfa, lsquare_3tfa};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let square = lsquare_3tfa()?;
    for n in 1..=5usize {
        let w = "a".repeat(n) + &"b".repeat(n * n);
        let out = square.run(&w, None)?;
        println!("lsquare-3tfa n={n} |w|={:>2}: {:?} in {} steps", w.len(), out.verdict, out.steps);
    }
    for k in 1..=3u32 {
        let m = kpow_tfa(k)?;
        let accepted: Vec<String> = (0..=3usize)
            .map(|n| "a".repeat(n) + &"b".repeat(n.pow(k)))
            .filter(|w| m.accepts(w).unwrap_or(false))
            .collect();
        println!("kpow-tfa{k} ({} tapes) accepts {:?}", m.tapes(), accepted);
        println!("  and rejects aabbb: {}", !m.accepts("aabbb")?);
    }
    Ok(())
}
