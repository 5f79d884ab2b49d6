//! Step counts of the palindrome machine on accepted inputs and the
//! affine fit through them.
//!
//! ```text
//! cargo run --example palindrome_timing
//! ```

use multitape::bench::bench;
use multitape::library::{self, lpal};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = lpal()?;
    let oracle = library::build("lpal", library::DEFAULT_EPSILON)?.oracle;
    let sizes: Vec<usize> = (0..=24).collect();
    let report = bench(&m, &oracle, &sizes)?;
    for p in &report.points {
        println!("{:>3}  {:>4}  {}", p.len, p.steps, p.input);
    }
    if let Some(fit) = report.fit {
        println!("steps = {}·|w| + {} (max residual {})", fit.slope, fit.intercept, fit.max_abs_residual);
    }
    // rejected inputs stop early
    for w in ["ab", "abab", "aaaaaaab"] {
        let out = m.run(w, None)?;
        println!("{w}: {:?} in {} steps", out.verdict, out.steps);
    }
    Ok(())
}
