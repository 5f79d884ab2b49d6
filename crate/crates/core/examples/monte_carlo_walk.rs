//! Monte-Carlo runs of the quantum machine and the hit probability of a
//! single random walk, started from the walk's first coin flip.
//!
//! ```text
//! cargo run --release --example monte_carlo_walk
//! ```

use smallvec::smallvec;

use multitape::engine::{probe, run_monte_carlo, MonteCarloOptions};
use multitape::library::lsquare_2tqcfa;
use multitape::qcfa::BranchNode;
use multitape::quantum::QuantumRegister;
use multitape::run::Configuration;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = lsquare_2tqcfa(0.125)?;
    let options = MonteCarloOptions {
        trials: 20_000,
        seed: 7,
        ..Default::default()
    };

    for (n, k) in [(2, 2), (2, 4), (4, 2), (3, 3)] {
        let w = "a".repeat(n) + &"b".repeat(k * n);
        let start = BranchNode {
            config: Configuration {
                state: m.control().state_id("s03_1").unwrap(),
                heads: smallvec![1, 0],
                active: 0,
                steps: 0,
            },
            register: QuantumRegister::basis(2, 0),
            probability: 1.0,
        };
        let out = probe(&m, &w, &start, &["w2t", "w2f"], &options)?;
        let hat = out.count("w2t") as f64 / out.trials as f64;
        println!("n={n} k={k}: right end {hat:.4}, 1/(n+k+1) = {:.4}", 1.0 / (n + k + 1) as f64);
    }

    let options = MonteCarloOptions {
        trials: 200,
        ..options
    };
    for w in ["ab", "aabbbb", "aabb"] {
        let r = run_monte_carlo(&m, w, &options)?;
        println!(
            "{w}: accept {:.3} reject {:.3} mean steps {:.0}",
            r.accept_fraction(),
            r.reject_fraction(),
            r.mean_steps()
        );
    }
    Ok(())
}
