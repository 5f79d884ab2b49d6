//! Exact acceptance and rejection masses of the two-way quantum machine
//! for aⁿb^{n²}.
//!
//! ```text
//! cargo run --release --example lsquare_exact
//! ```

use multitape::engine::{run_exact, ExactOptions};
use multitape::library::lsquare_2tqcfa;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let epsilon = 0.125;
    let m = lsquare_2tqcfa(epsilon)?;
    let options = ExactOptions {
        mass_threshold: 1e-3,
        ..Default::default()
    };
    println!("{:>10}  {:>9}  {:>9}  {:>9}  {:>6}", "input", "accept", "reject", "open", "levels");
    for w in ["", "ab", "aabbbb", "abb", "aabb", "aaabbbbbb", "ba", "aabab"] {
        let out = run_exact(&m, w, &options)?;
        println!(
            "{w:>10}  {:>9.6}  {:>9.6}  {:>9.2e}  {:>6}",
            out.accept_mass, out.reject_mass, out.unresolved_mass, out.depth
        );
    }
    Ok(())
}
