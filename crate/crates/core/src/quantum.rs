//! Constant-dimension quantum registers, unitaries and projective
//! measurements.

use std::fmt;

use num_complex::Complex64;
use smallvec::SmallVec;

use crate::angle::Angle;
use crate::error::QuantumError;

/// Structural tolerance for norms, unitarity and projector checks.
pub const TOLERANCE: f64 = 1e-9;

type Amps = SmallVec<[Complex64; 4]>;

/// A dense `d×d` complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self, QuantumError> {
        if data.len() != dim * dim {
            return Err(QuantumError::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(CMatrix { dim, data })
    }

    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self, QuantumError> {
        Self::new(dim, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        CMatrix { dim, data }
    }

    /// `|i⟩⟨i|`.
    pub fn basis_projector(dim: usize, i: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        data[i * dim + i] = Complex64::new(1.0, 0.0);
        CMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut data = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                data.push(self.get(c, r).conj());
            }
        }
        CMatrix { dim: d, data }
    }

    pub fn mul(&self, other: &CMatrix) -> Self {
        let d = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.get(r, k);
                for c in 0..d {
                    data[r * d + c] += a * other.get(k, c);
                }
            }
        }
        CMatrix { dim: d, data }
    }

    fn apply(&self, v: &[Complex64]) -> Amps {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn distance(&self, other: &CMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UnitaryTag {
    Identity,
    Hadamard,
    Rotation(Angle),
    Custom,
}

/// A unitary operator with a symbolic tag.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOp {
    matrix: CMatrix,
    tag: UnitaryTag,
}

impl UnitaryOp {
    pub fn identity(dim: usize) -> Self {
        UnitaryOp {
            matrix: CMatrix::identity(dim),
            tag: UnitaryTag::Identity,
        }
    }

    /// `[[1, 1], [1, -1]] / √2`.
    pub fn hadamard() -> Self {
        let h = 1.0 / 2f64.sqrt();
        UnitaryOp {
            matrix: CMatrix::from_real(2, &[h, h, h, -h]).expect("2x2"),
            tag: UnitaryTag::Hadamard,
        }
    }

    /// `[[cos θ, -sin θ], [sin θ, cos θ]]` for a symbolic angle.
    pub fn rotation(angle: Angle) -> Self {
        UnitaryOp {
            matrix: rotation_matrix(angle.radians()),
            tag: UnitaryTag::Rotation(angle),
        }
    }

    /// Rotation by a plain radian value; tagged as custom since the angle
    /// has no exact form.
    pub fn rotation_radians(theta: f64) -> Self {
        UnitaryOp {
            matrix: rotation_matrix(theta),
            tag: UnitaryTag::Custom,
        }
    }

    /// `[[0, 1], [1, 0]]`.
    pub fn pauli_x() -> Self {
        UnitaryOp::from_matrix(CMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2"))
            .expect("unitary")
    }

    /// Checks `U†U = I` and tags identity and Hadamard matrices.
    pub fn from_matrix(matrix: CMatrix) -> Result<Self, QuantumError> {
        let d = matrix.dim();
        let deviation = matrix.adjoint().mul(&matrix).distance(&CMatrix::identity(d));
        if deviation > TOLERANCE {
            return Err(QuantumError::NotUnitary(deviation));
        }
        let tag = if matrix.distance(&CMatrix::identity(d)) <= TOLERANCE {
            UnitaryTag::Identity
        } else if d == 2 && matrix.distance(&UnitaryOp::hadamard().matrix) <= TOLERANCE {
            UnitaryTag::Hadamard
        } else {
            UnitaryTag::Custom
        };
        Ok(UnitaryOp { matrix, tag })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn tag(&self) -> UnitaryTag {
        self.tag
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

fn rotation_matrix(theta: f64) -> CMatrix {
    let (s, c) = theta.sin_cos();
    CMatrix::from_real(2, &[c, -s, s, c]).expect("2x2")
}

/// A projective measurement `{P_i}` with result labels.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveMeasurement {
    projectors: Vec<CMatrix>,
    labels: Vec<String>,
    standard: bool,
}

impl ProjectiveMeasurement {
    /// Measurement in the computational basis with labels `0..d-1`.
    pub fn standard(dim: usize) -> Self {
        ProjectiveMeasurement {
            projectors: (0..dim).map(|i| CMatrix::basis_projector(dim, i)).collect(),
            labels: (0..dim).map(|i| i.to_string()).collect(),
            standard: true,
        }
    }

    /// Validates hermiticity, idempotence, orthogonality and completeness.
    pub fn new(projectors: Vec<CMatrix>, labels: Vec<String>) -> Result<Self, QuantumError> {
        let invalid = |m: &str| Err(QuantumError::InvalidMeasurement(m.to_string()));
        if projectors.is_empty() || projectors.len() != labels.len() {
            return invalid("projector and label counts differ");
        }
        let d = projectors[0].dim();
        if projectors.iter().any(|p| p.dim() != d) {
            return invalid("projectors have different dimensions");
        }
        let mut sum = CMatrix::new(d, vec![Complex64::new(0.0, 0.0); d * d])?;
        for (i, p) in projectors.iter().enumerate() {
            if p.adjoint().distance(p) > TOLERANCE {
                return invalid("projector is not Hermitian");
            }
            if p.mul(p).distance(p) > TOLERANCE {
                return invalid("projector is not idempotent");
            }
            for q in &projectors[i + 1..] {
                if p.mul(q).entries().iter().any(|z| z.norm() > TOLERANCE) {
                    return invalid("projectors are not orthogonal");
                }
            }
            for (s, x) in sum.data.iter_mut().zip(p.entries()) {
                *s += x;
            }
        }
        if sum.distance(&CMatrix::identity(d)) > TOLERANCE {
            return invalid("projectors do not sum to the identity");
        }
        let standard = projectors.len() == d
            && projectors
                .iter()
                .enumerate()
                .all(|(i, p)| p.distance(&CMatrix::basis_projector(d, i)) <= TOLERANCE)
            && labels.iter().enumerate().all(|(i, l)| *l == i.to_string());
        Ok(ProjectiveMeasurement {
            projectors,
            labels,
            standard,
        })
    }

    pub fn is_standard(&self) -> bool {
        self.standard
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn projectors(&self) -> &[CMatrix] {
        &self.projectors
    }

    pub fn outcomes(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].dim()
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// A unit-norm amplitude vector over a fixed basis.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumRegister {
    amps: Amps,
}

impl QuantumRegister {
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amps: Amps = SmallVec::from_elem(Complex64::new(0.0, 0.0), dim);
        amps[index] = Complex64::new(1.0, 0.0);
        QuantumRegister { amps }
    }

    pub fn from_amplitudes(amps: &[Complex64]) -> Result<Self, QuantumError> {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > TOLERANCE {
            return Err(QuantumError::NotNormalized(norm));
        }
        Ok(QuantumRegister {
            amps: SmallVec::from_slice(amps),
        })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(amps: &[Complex64]) -> Result<Self, QuantumError> {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm <= TOLERANCE {
            return Err(QuantumError::NotNormalized(norm));
        }
        Ok(QuantumRegister {
            amps: amps.iter().map(|a| a / norm).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply(&self, op: &UnitaryOp) -> Result<Self, QuantumError> {
        self.check_dim(op.dim())?;
        if op.tag == UnitaryTag::Identity {
            return Ok(self.clone());
        }
        Ok(QuantumRegister {
            amps: op.matrix.apply(&self.amps),
        })
    }

    /// `p(i) = ⟨ψ|P_i|ψ⟩` in projector order.
    pub fn probabilities(&self, m: &ProjectiveMeasurement) -> Result<Vec<f64>, QuantumError> {
        self.check_dim(m.dim())?;
        if m.standard {
            return Ok(self.amps.iter().map(|a| a.norm_sqr()).collect());
        }
        Ok(m.projectors
            .iter()
            .map(|p| p.apply(&self.amps).iter().map(|a| a.norm_sqr()).sum())
            .collect())
    }

    pub fn labelled_probabilities(
        &self,
        m: &ProjectiveMeasurement,
    ) -> Result<Vec<(String, f64)>, QuantumError> {
        Ok(m.labels.iter().cloned().zip(self.probabilities(m)?).collect())
    }

    /// `P_i|ψ⟩ / √p(i)`.
    pub fn collapse(&self, m: &ProjectiveMeasurement, index: usize) -> Result<Self, QuantumError> {
        self.check_dim(m.dim())?;
        let projected: Amps = if m.standard {
            (0..self.dim())
                .map(|j| if j == index { self.amps[j] } else { Complex64::new(0.0, 0.0) })
                .collect()
        } else {
            m.projectors[index].apply(&self.amps)
        };
        let p: f64 = projected.iter().map(|a| a.norm_sqr()).sum();
        if p <= 0.0 {
            return Err(QuantumError::ZeroProbability(index));
        }
        let s = p.sqrt();
        Ok(QuantumRegister {
            amps: projected.iter().map(|a| a / s).collect(),
        })
    }

    /// Equality up to a unit-modulus global factor.
    pub fn approx_eq_up_to_phase(&self, other: &Self, tol: f64) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let overlap: Complex64 = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum();
        (overlap.norm() - 1.0).abs() <= tol
    }

    /// Multiplies by a phase so that the first non-negligible amplitude is
    /// real and positive.
    pub fn phase_normalized(&self) -> Self {
        let lead = self.amps.iter().find(|a| a.norm() > 1e-12).copied();
        match lead {
            Some(z) => {
                let phase = z.conj() / z.norm();
                QuantumRegister {
                    amps: self.amps.iter().map(|a| a * phase).collect(),
                }
            }
            None => self.clone(),
        }
    }

    fn check_dim(&self, expected: usize) -> Result<(), QuantumError> {
        if self.dim() != expected {
            return Err(QuantumError::DimensionMismatch {
                expected,
                found: self.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for QuantumRegister {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > 1e-12)
            .map(|(i, a)| {
                if a.im.abs() < 1e-12 {
                    format!("{:.6}|q{i}>", a.re)
                } else {
                    format!("({:.6}{:+.6}i)|q{i}>", a.re, a.im)
                }
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn hadamard_and_identity() {
        let q0 = QuantumRegister::basis(2, 0);
        assert_eq!(q0.apply(&UnitaryOp::identity(2)).unwrap(), q0);
        let psi = q0.apply(&UnitaryOp::hadamard()).unwrap();
        let h = 1.0 / 2f64.sqrt();
        let expected = QuantumRegister::from_amplitudes(&[c(h), c(h)]).unwrap();
        assert!(psi.approx_eq_up_to_phase(&expected, 1e-12));
        let m = ProjectiveMeasurement::standard(2);
        let p = psi.probabilities(&m).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rotation_convention() {
        let theta = 0.3;
        let r = QuantumRegister::basis(2, 0).apply(&UnitaryOp::rotation_radians(theta)).unwrap();
        assert!((r.amplitudes()[0].re - theta.cos()).abs() < 1e-15);
        assert!((r.amplitudes()[1].re - theta.sin()).abs() < 1e-15);
    }

    #[test]
    fn collapse_and_zero_branch() {
        let m = ProjectiveMeasurement::standard(2);
        let q0 = QuantumRegister::basis(2, 0);
        assert_eq!(q0.collapse(&m, 1), Err(QuantumError::ZeroProbability(1)));
        let h = 1.0 / 2f64.sqrt();
        let phi = QuantumRegister::from_amplitudes(&[c(h), c(-h)]).unwrap();
        let after = phi.collapse(&m, 1).unwrap();
        assert_eq!(after.amplitudes()[1], c(-1.0));
        assert!(after.approx_eq_up_to_phase(&QuantumRegister::basis(2, 1), 1e-12));
    }

    #[test]
    fn validation() {
        let bad = CMatrix::from_real(2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(UnitaryOp::from_matrix(bad), Err(QuantumError::NotUnitary(_))));
        let h = 1.0 / 2f64.sqrt();
        let had = CMatrix::from_real(2, &[h, h, h, -h]).unwrap();
        assert_eq!(UnitaryOp::from_matrix(had).unwrap().tag(), UnitaryTag::Hadamard);
        let incomplete = ProjectiveMeasurement::new(
            vec![CMatrix::basis_projector(2, 0)],
            vec!["0".into()],
        );
        assert!(incomplete.is_err());
        let generic = ProjectiveMeasurement::new(
            vec![CMatrix::basis_projector(2, 0), CMatrix::basis_projector(2, 1)],
            vec!["0".into(), "1".into()],
        )
        .unwrap();
        assert!(generic.is_standard());
        assert!(QuantumRegister::from_amplitudes(&[c(1.0), c(1.0)]).is_err());
        assert!(QuantumRegister::basis(3, 0).apply(&UnitaryOp::hadamard()).is_err());
    }
}
