//! The two-state register: irrational rotations, Hadamard and a
//! standard-basis measurement.
//!
//! ```text
//! cargo run --example quantum_register
//! ```

use multitape::angle::Angle;
use multitape::quantum::{ProjectiveMeasurement, QuantumRegister, UnitaryOp};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = ProjectiveMeasurement::standard(2);
    let q0 = QuantumRegister::basis(2, 0);

    // n rotations forward and k back leave (n-k)·√2π
    for (n, k) in [(3, 3), (3, 2), (2, 5), (10, 1)] {
        let mut r = q0.clone();
        for _ in 0..n {
            r = r.apply(&UnitaryOp::rotation(Angle::sqrt2_pi(1)))?;
        }
        for _ in 0..k {
            r = r.apply(&UnitaryOp::rotation(Angle::sqrt2_pi(-1)))?;
        }
        let p = r.probabilities(&m)?;
        let d = n - k;
        println!(
            "n={n:>2} k={k}  P(1) = {:.6}  bound 1/(2Δ²) = {}",
            p[1],
            if d == 0 { "-".to_string() } else { format!("{:.6}", 1.0 / (2.0 * (d * d) as f64)) }
        );
    }

    let spread = q0.apply(&UnitaryOp::hadamard())?;
    println!("\nH|q0⟩ = {:?}", spread.amplitudes());
    println!("probabilities {:?}", spread.probabilities(&m)?);
    let after = spread.collapse(&m, 1)?;
    println!("after result 1: {:?}", after.amplitudes());
    let flipped = after.apply(&UnitaryOp::pauli_x())?;
    println!("X resets it to {:?}", flipped.amplitudes());
    Ok(())
}
