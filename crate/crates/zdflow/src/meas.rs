//! Single-qudit measurement spaces over odd prime dimensions.
//!
//! For a qudit of odd prime dimension d with ω = e^{2πi/d}, the generalized
//! Pauli operators are X|m⟩ = |m+1 mod d⟩ and Z|m⟩ = ω^m|m⟩, combined as
//! X^a·Z^b (global phases dropped). The *measurement space* M(a, b) of a
//! nonzero label (a, b) consists of the unitaries M with
//!
//! ```text
//! Q·M = ω·M·Q,   Q = X^a·Z^b,
//! ```
//!
//! all of which have spectrum {ω^m} with each eigenvalue simple. Measuring a
//! qudit "in M" means projecting onto M's eigenbasis {|m:M⟩}, which this
//! module constructs explicitly: |0:M⟩ is the fixed point (eigenvalue 1),
//! recovered through the spectral projector (1/d)·Σ_k M^k, and
//! |m:M⟩ = Q^{−m}|0:M⟩ walks the rest of the basis. The canonical member of
//! M(a, b) is the Pauli X^c·Z^e on the *canonical axis* (c, e), defined by
//! bc − ea ≡ 1 with the convention (0, −a⁻¹) when a ≠ 0 and (b⁻¹, 0)
//! otherwise; a full d−1 angles' worth of freedom around it is exposed via
//! [`measurement_unitary`].
//!
//! Everything is validated numerically: unitarity to 1e−10 and operator
//! relations to 1e−9.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gfp::{GfpError, PrimeModulus};

/// Complex scalar type used throughout the simulator.
pub type C64 = Complex64;

/// Frobenius-norm tolerance for unitarity checks.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Tolerance for operator relations, eigen-equations, probabilities and
/// fidelities.
pub const RELATION_TOL: f64 = 1e-9;

/// Errors from measurement-space construction and validation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasError {
    /// Underlying field/modulus error.
    #[error(transparent)]
    Field(#[from] GfpError),
    /// d = 2 is prime but has no odd-prime measurement-space structure here.
    #[error("even modulus {0}: measurement spaces need an odd prime")]
    EvenModulus(u64),
    /// The label (0, 0) names no Pauli axis.
    #[error("zero label (0,0) names no measurement space")]
    ZeroLabel,
    /// A spec carried the wrong number of angles.
    #[error("expected {expected} angles, got {got}")]
    WrongAngleCount {
        /// d − 1.
        expected: usize,
        /// What arrived.
        got: usize,
    },
    /// The matrix fails a membership requirement for the claimed space.
    #[error("not in the measurement space: {0}")]
    NotInMeasurementSpace(String),
    /// Operand shapes do not match.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// The JSON document failed to parse or had the wrong shape.
    #[error("malformed JSON: {0}")]
    Json(String),
}

/// Validates d as an odd prime.
pub fn odd_prime(d: u64) -> Result<PrimeModulus, MeasError> {
    let m = PrimeModulus::new(d)?;
    if d == 2 {
        return Err(MeasError::EvenModulus(2));
    }
    Ok(m)
}

/// ω^k for the given modulus, with k reduced first for accuracy.
pub fn omega_pow(d: u64, k: u64) -> C64 {
    let k = k % d;
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / d as f64)
}

/// A dense complex square matrix (row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<C64>,
}

impl CMatrix {
    /// The n×n zero matrix.
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    /// The n×n identity.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    /// Builds a matrix entrywise from a function of (row, col).
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    /// Side length.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry (r, c).
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.n + c]
    }

    /// Sets entry (r, c).
    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.n + c] = v;
    }

    /// Matrix product.
    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n, "CMatrix::mul dimension mismatch");
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..n {
                    let v = out.get(r, c) + a * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    /// Entrywise difference.
    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n, "CMatrix::sub dimension mismatch");
        let mut out = self.clone();
        for (o, &v) in out.data.iter_mut().zip(other.data.iter()) {
            *o -= v;
        }
        out
    }

    /// Scalar multiple.
    pub fn scale(&self, s: C64) -> CMatrix {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v *= s;
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CMatrix {
        CMatrix::from_fn(self.n, |r, c| self.get(c, r).conj())
    }

    /// Frobenius norm.
    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Matrix power by repeated multiplication.
    pub fn pow(&self, e: u64) -> CMatrix {
        let mut acc = CMatrix::identity(self.n);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Trace.
    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Matrix–vector product.
    pub fn mat_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.n, v.len(), "CMatrix::mat_vec dimension mismatch");
        (0..self.n)
            .map(|r| (0..self.n).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }

    /// Determinant by LU decomposition with partial pivoting.
    pub fn det(&self) -> C64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = C64::new(1.0, 0.0);
        for col in 0..n {
            let (pivot_row, pivot_mag) = (col..n)
                .map(|r| (r, a[r * n + col].norm_sqr()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .expect("non-empty range");
            if pivot_mag == 0.0 {
                return C64::new(0.0, 0.0);
            }
            if pivot_row != col {
                for c in 0..n {
                    a.swap(col * n + c, pivot_row * n + c);
                }
                det = -det;
            }
            let pivot = a[col * n + col];
            det *= pivot;
            for r in col + 1..n {
                let factor = a[r * n + col] / pivot;
                if factor.norm_sqr() == 0.0 {
                    continue;
                }
                for c in col..n {
                    let sub = factor * a[col * n + c];
                    a[r * n + c] -= sub;
                }
            }
        }
        det
    }

    /// ‖M†M − I‖_F.
    pub fn unitarity_defect(&self) -> f64 {
        self.dagger().mul(self).sub(&CMatrix::identity(self.n)).frob_norm()
    }
}

/// The Pauli X^a·Z^b (phase convention: entry ((m+a) mod d, m) = ω^{b·m}).
///
/// The zero label yields the identity; only measurement *specs* reject it.
pub fn pauli_matrix(label: (u64, u64), d: u64) -> Result<CMatrix, MeasError> {
    let m = odd_prime(d)?;
    let (a, b) = (m.reduce(label.0), m.reduce(label.1));
    let n = d as usize;
    let mut out = CMatrix::zeros(n);
    for col in 0..n {
        let row = (col + a as usize) % n;
        out.set(row, col, omega_pow(d, m.mul(b, col as u64)));
    }
    Ok(out)
}

/// The canonical axis (c, e) of a nonzero label (a, b): the unique
/// convention-fixed solution of bc − ea ≡ 1, namely (0, −a⁻¹) when a ≠ 0 and
/// (b⁻¹, 0) otherwise. The Pauli on the canonical axis is the reference
/// member of M(a, b).
pub fn canonical_axis(label: (u64, u64), d: u64) -> Result<(u64, u64), MeasError> {
    let m = odd_prime(d)?;
    let (a, b) = (m.reduce(label.0), m.reduce(label.1));
    if a == 0 && b == 0 {
        return Err(MeasError::ZeroLabel);
    }
    if a != 0 {
        Ok((0, m.neg(m.inv(a)?)))
    } else {
        Ok((m.inv(b)?, 0))
    }
}

/// A measurement choice: the label naming the space plus d−1 free angles.
///
/// JSON form: `{ "label": [1, 0], "angles": [0.0, 0.0] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementSpec {
    /// The space label (a, b) ≠ (0, 0).
    pub label: (u64, u64),
    /// Angles θ_1 … θ_{d−1} (θ_0 is fixed to −Σθ_k so the twist has unit
    /// determinant).
    pub angles: Vec<f64>,
}

impl MeasurementSpec {
    /// A spec with all angles zero: the canonical member of the space.
    pub fn canonical(label: (u64, u64), d: u64) -> Result<Self, MeasError> {
        let m = odd_prime(d)?;
        let label = (m.reduce(label.0), m.reduce(label.1));
        if label == (0, 0) {
            return Err(MeasError::ZeroLabel);
        }
        Ok(MeasurementSpec {
            label,
            angles: vec![0.0; d as usize - 1],
        })
    }

    /// Validates the measurement spec against a modulus.
    pub fn validate(&self, d: u64) -> Result<(), MeasError> {
        let m = odd_prime(d)?;
        if (m.reduce(self.label.0), m.reduce(self.label.1)) == (0, 0) {
            return Err(MeasError::ZeroLabel);
        }
        if self.angles.len() != d as usize - 1 {
            return Err(MeasError::WrongAngleCount {
                expected: d as usize - 1,
                got: self.angles.len(),
            });
        }
        Ok(())
    }

    /// Parses a spec from JSON (no modulus check until `validate`).
    pub fn from_json_str(s: &str) -> Result<Self, MeasError> {
        serde_json::from_str(s).map_err(|e| MeasError::Json(e.to_string()))
    }

    /// Serializes the measurement spec to JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serialization cannot fail")
    }
}

/// Finds the unit-norm fixed point (eigenvalue-1 eigenvector) of a matrix
/// with spectrum {ω^m}, via the spectral projector (1/d)·Σ_k M^k applied to
/// probe basis vectors; picks the largest image and normalizes. Errors when
/// the projector annihilates every probe (no eigenvalue 1).
fn fixed_point(m: &CMatrix, d: u64) -> Result<Vec<C64>, MeasError> {
    let n = m.dim();
    let mut projector = CMatrix::identity(n);
    let mut power = CMatrix::identity(n);
    for _ in 1..d {
        power = power.mul(m);
        projector = {
            let mut p = projector;
            for r in 0..n {
                for c in 0..n {
                    let v = p.get(r, c) + power.get(r, c);
                    p.set(r, c, v);
                }
            }
            p
        };
    }
    let projector = projector.scale(C64::new(1.0 / d as f64, 0.0));
    let mut best: Option<(f64, Vec<C64>)> = None;
    for probe in 0..n {
        let mut e = vec![C64::new(0.0, 0.0); n];
        e[probe] = C64::new(1.0, 0.0);
        let image = projector.mat_vec(&e);
        let norm = image.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if best.as_ref().is_none_or(|(b, _)| norm > *b) {
            best = Some((norm, image));
        }
    }
    let (norm, image) = best.expect("dimension is positive");
    if norm < 1e-6 {
        return Err(MeasError::NotInMeasurementSpace(
            "no eigenvalue-1 fixed point".into(),
        ));
    }
    let mut v: Vec<C64> = image.into_iter().map(|x| x / norm).collect();
    // Phase convention: first amplitude of nonnegligible magnitude is made
    // real positive.
    let lead = v
        .iter()
        .find(|x| x.norm() > 1e-9)
        .copied()
        .expect("normalized vector has support");
    let phase = lead.conj() / lead.norm();
    for x in v.iter_mut() {
        *x *= phase;
    }
    // Confirm it really is fixed.
    let mv = m.mat_vec(&v);
    let residual: f64 = mv
        .iter()
        .zip(v.iter())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if residual > RELATION_TOL {
        return Err(MeasError::NotInMeasurementSpace(format!(
            "fixed-point residual {residual:.2e}"
        )));
    }
    Ok(v)
}

/// Builds the member of M(label) selected by a spec's angles.
///
/// With P the canonical-axis Pauli and {|k:Q⟩ = P^k|0:Q⟩} the eigenbasis of
/// Q = X^a·Z^b (raised from Q's fixed point by P, which shifts Q-eigenvalues
/// by ω), the result is U·P·U† where U = Σ_k e^{iθ_k}|k:Q⟩⟨k:Q| and
/// θ_0 = −Σ_{k≥1}θ_k. U commutes with Q, so membership, the spectrum and
/// unit determinant are all preserved; all-zero angles return P itself.
pub fn measurement_unitary(spec: &MeasurementSpec, d: u64) -> Result<CMatrix, MeasError> {
    spec.validate(d)?;
    let q = pauli_matrix(spec.label, d)?;
    let axis = canonical_axis(spec.label, d)?;
    let p = pauli_matrix(axis, d)?;
    if spec.angles.iter().all(|&t| t == 0.0) {
        return Ok(p);
    }
    let n = d as usize;
    let q0 = fixed_point(&q, d)?;
    // θ_0 closes the angle sum to zero.
    let theta0 = -spec.angles.iter().sum::<f64>();
    let mut u = CMatrix::zeros(n);
    let mut vec_k = q0;
    for k in 0..n {
        let theta = if k == 0 { theta0 } else { spec.angles[k - 1] };
        let phase = C64::from_polar(1.0, theta);
        for r in 0..n {
            for c in 0..n {
                let v = u.get(r, c) + phase * vec_k[r] * vec_k[c].conj();
                u.set(r, c, v);
            }
        }
        vec_k = p.mat_vec(&vec_k);
    }
    Ok(u.mul(&p).mul(&u.dagger()))
}

/// Constructs the eigenbasis {|m:M⟩} of a claimed member of M(label),
/// verifying membership first: unitarity within 1e−10, the commutation
/// relation Q·M = ω·M·Q within 1e−9, and a genuine eigenvalue-1 fixed point.
/// Row m of the result is |m:M⟩ = Q^{−m}|0:M⟩, with |0:M⟩'s leading
/// amplitude made real positive.
pub fn eigenbasis(m: &CMatrix, label: (u64, u64), d: u64) -> Result<Vec<Vec<C64>>, MeasError> {
    let pm = odd_prime(d)?;
    let n = d as usize;
    if m.dim() != n {
        return Err(MeasError::Dimension(format!(
            "matrix is {}x{} for d = {d}",
            m.dim(),
            m.dim()
        )));
    }
    let defect = m.unitarity_defect();
    if defect > UNITARITY_TOL {
        return Err(MeasError::NotInMeasurementSpace(format!(
            "unitarity defect {defect:.2e}"
        )));
    }
    let q = pauli_matrix(label, d)?;
    let commutation = q
        .mul(m)
        .sub(&m.mul(&q).scale(omega_pow(d, 1)))
        .frob_norm();
    if commutation > RELATION_TOL {
        return Err(MeasError::NotInMeasurementSpace(format!(
            "commutation defect {commutation:.2e}"
        )));
    }
    let v0 = fixed_point(m, d)?;
    // Q⁻¹ = Q† sends the ω^m eigenspace of M to the ω^{m+1} eigenspace.
    let q_inv = q.dagger();
    let mut basis = Vec::with_capacity(n);
    let mut v = v0;
    for _ in 0..n {
        basis.push(v.clone());
        v = q_inv.mat_vec(&v);
    }
    // The walk must return to the start (Q^{-d} = identity up to phase 1
    // for odd d), and the basis must diagonalize M.
    for (k, bk) in basis.iter().enumerate() {
        let mv = m.mat_vec(bk);
        let eig = omega_pow(d, pm.reduce(k as u64));
        let residual: f64 = mv
            .iter()
            .zip(bk.iter())
            .map(|(a, b)| (a - eig * b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if residual > RELATION_TOL {
            return Err(MeasError::NotInMeasurementSpace(format!(
                "eigenvector {k} residual {residual:.2e}"
            )));
        }
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-9
    }

    #[test]
    fn modulus_validation() {
        assert_eq!(odd_prime(2).unwrap_err(), MeasError::EvenModulus(2));
        assert!(matches!(
            odd_prime(4).unwrap_err(),
            MeasError::Field(GfpError::NonPrimeModulus(4))
        ));
        assert!(odd_prime(3).is_ok());
        assert!(odd_prime(7).is_ok());
    }

    #[test]
    fn canonical_axis_reference_values() {
        assert_eq!(canonical_axis((1, 0), 3).unwrap(), (0, 2));
        assert_eq!(canonical_axis((0, 1), 3).unwrap(), (1, 0));
        assert_eq!(canonical_axis((2, 3), 5).unwrap(), (0, 2));
        assert_eq!(canonical_axis((0, 0), 3).unwrap_err(), MeasError::ZeroLabel);
        // bc − ea ≡ 1 for a spread of labels and moduli.
        for d in [3u64, 5, 7] {
            let m = PrimeModulus::new(d).unwrap();
            for a in 0..d {
                for b in 0..d {
                    if (a, b) == (0, 0) {
                        continue;
                    }
                    let (c, e) = canonical_axis((a, b), d).unwrap();
                    assert_eq!(m.sub(m.mul(b, c), m.mul(e, a)), 1, "label ({a},{b}) mod {d}");
                }
            }
        }
    }

    #[test]
    fn pauli_matrix_entries_and_relations() {
        // (0,0) is the identity (allowed here; only specs reject it).
        let id = pauli_matrix((0, 0), 3).unwrap();
        assert!(id.sub(&CMatrix::identity(3)).frob_norm() < 1e-12);
        // X^1 Z^2 at d=3: entry ((m+1) mod 3, m) = ω^{2m}.
        let xz2 = pauli_matrix((1, 2), 3).unwrap();
        for m in 0..3u64 {
            assert!(close(
                xz2.get(((m + 1) % 3) as usize, m as usize),
                omega_pow(3, 2 * m)
            ));
        }
        // Z X = ω X Z.
        let x = pauli_matrix((1, 0), 3).unwrap();
        let z = pauli_matrix((0, 1), 3).unwrap();
        let lhs = z.mul(&x);
        let rhs = x.mul(&z).scale(omega_pow(3, 1));
        assert!(lhs.sub(&rhs).frob_norm() < 1e-12);
        // (X Z)³ = identity at d = 3.
        let xz = pauli_matrix((1, 1), 3).unwrap();
        assert!(xz.pow(3).sub(&CMatrix::identity(3)).frob_norm() < 1e-12);
    }

    #[test]
    fn reference_fixed_points() {
        // Label (1,0) ⇒ canonical member Z^{d−1}, fixed point |0⟩.
        let m = measurement_unitary(&MeasurementSpec::canonical((1, 0), 3).unwrap(), 3).unwrap();
        let p = pauli_matrix((0, 2), 3).unwrap();
        assert!(m.sub(&p).frob_norm() < 1e-12, "zero angles give the axis Pauli");
        let basis = eigenbasis(&m, (1, 0), 3).unwrap();
        assert!(close(basis[0][0], C64::new(1.0, 0.0)));
        assert!(close(basis[0][1], C64::new(0.0, 0.0)));
        // Label (0,1) ⇒ canonical member X, fixed point uniform.
        let m = measurement_unitary(&MeasurementSpec::canonical((0, 1), 3).unwrap(), 3).unwrap();
        let basis = eigenbasis(&m, (0, 1), 3).unwrap();
        let u = C64::new(1.0 / 3f64.sqrt(), 0.0);
        for k in 0..3 {
            assert!(close(basis[0][k], u), "uniform fixed point");
        }
    }

    fn spread_spec(label: (u64, u64), d: u64) -> MeasurementSpec {
        let angles: Vec<f64> = (1..d).map(|k| 0.31 * k as f64 + 0.07).collect();
        MeasurementSpec { label, angles }
    }

    #[test]
    fn measurement_unitary_membership() {
        for d in [3u64, 5] {
            for label in [(1, 0), (0, 1), (1, 1), (2, 1)] {
                let spec = spread_spec(label, d);
                let m = measurement_unitary(&spec, d).unwrap();
                assert!(m.unitarity_defect() < UNITARITY_TOL, "unitary (d={d}, {label:?})");
                assert!(close(m.det(), C64::new(1.0, 0.0)), "det 1 (d={d}, {label:?})");
                let q = pauli_matrix(label, d).unwrap();
                let defect = q.mul(&m).sub(&m.mul(&q).scale(omega_pow(d, 1))).frob_norm();
                assert!(defect < RELATION_TOL, "commutation (d={d}, {label:?})");
                // Spectrum {ω^m}: M^d = I and tr(M^k) = 0 for 0 < k < d.
                assert!(m.pow(d).sub(&CMatrix::identity(d as usize)).frob_norm() < 1e-8);
                for k in 1..d {
                    assert!(m.pow(k).trace().norm() < 1e-8, "trace of power {k}");
                }
            }
        }
    }

    #[test]
    fn eigenbasis_is_orthonormal_and_shifted_by_q() {
        let d = 5u64;
        let label = (2, 3);
        let m = measurement_unitary(&spread_spec(label, d), d).unwrap();
        let basis = eigenbasis(&m, label, d).unwrap();
        for i in 0..d as usize {
            for j in 0..d as usize {
                let inner: C64 = basis[i]
                    .iter()
                    .zip(basis[j].iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (inner - C64::new(expected, 0.0)).norm() < 1e-9,
                    "⟨{i}|{j}⟩ = {inner}"
                );
            }
        }
        // |m:M⟩ = Q^{−m}|0:M⟩ by construction; verify against fresh powers.
        let q_inv = pauli_matrix(label, d).unwrap().dagger();
        let mut v = basis[0].clone();
        for k in 1..d as usize {
            v = q_inv.mat_vec(&v);
            let diff: f64 = v
                .iter()
                .zip(basis[k].iter())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(diff < 1e-9);
        }
    }

    #[test]
    fn eigenbasis_rejects_outsiders() {
        // Identity commutes the wrong way for (1, 0).
        let err = eigenbasis(&CMatrix::identity(3), (1, 0), 3).unwrap_err();
        assert!(matches!(err, MeasError::NotInMeasurementSpace(_)));
        // ω·P merely permutes the spectrum {ω^m} and stays a member …
        let p = pauli_matrix(canonical_axis((1, 0), 3).unwrap(), 3).unwrap();
        let rotated = p.scale(omega_pow(3, 1));
        assert!(eigenbasis(&rotated, (1, 0), 3).is_ok());
        // … but a phase outside the d-th roots of unity breaks M^d = I:
        // commutation still holds, the eigenvalue 1 is gone.
        let detuned = p.scale(C64::from_polar(1.0, std::f64::consts::PI / 3.0));
        let err = eigenbasis(&detuned, (1, 0), 3).unwrap_err();
        assert!(matches!(err, MeasError::NotInMeasurementSpace(_)));
        // Wrong dimension.
        let err = eigenbasis(&CMatrix::identity(4), (1, 0), 3).unwrap_err();
        assert!(matches!(err, MeasError::Dimension(_)));
    }

    #[test]
    fn scalar_multiples_of_labels_share_the_space() {
        // Q' = X^{pa}Z^{pb} obeys Q'·M = ω^p·M·Q' for any M ∈ M(a, b).
        let d = 5u64;
        let label = (1, 1);
        let m = measurement_unitary(&spread_spec(label, d), d).unwrap();
        for p in 2..d {
            let qp = pauli_matrix((p * label.0, p * label.1), d).unwrap();
            let defect = qp
                .mul(&m)
                .sub(&m.mul(&qp).scale(omega_pow(d, p)))
                .frob_norm();
            assert!(defect < 1e-9, "p = {p}");
        }
    }

    #[test]
    fn spec_validation_and_json() {
        let spec = MeasurementSpec::canonical((1, 0), 3).unwrap();
        assert_eq!(spec.angles.len(), 2);
        spec.validate(3).unwrap();
        assert_eq!(
            spec.validate(5).unwrap_err(),
            MeasError::WrongAngleCount { expected: 4, got: 2 }
        );
        assert_eq!(
            MeasurementSpec::canonical((0, 0), 3).unwrap_err(),
            MeasError::ZeroLabel
        );
        assert_eq!(
            MeasurementSpec { label: (3, 3), angles: vec![0.0, 0.0] }
                .validate(3)
                .unwrap_err(),
            MeasError::ZeroLabel,
            "labels reduce mod d before the zero check"
        );
        let json = r#"{"label": [1, 0], "angles": [0.0, 0.25]}"#;
        let parsed = MeasurementSpec::from_json_str(json).unwrap();
        assert_eq!(parsed.label, (1, 0));
        let back = MeasurementSpec::from_json_str(&parsed.to_json()).unwrap();
        assert_eq!(parsed, back);
        assert!(matches!(
            MeasurementSpec::from_json_str("{}").unwrap_err(),
            MeasError::Json(_)
        ));
    }

    #[test]
    fn det_reference_values() {
        assert!(close(CMatrix::identity(4).det(), C64::new(1.0, 0.0)));
        let z = pauli_matrix((0, 1), 3).unwrap();
        // det Z = ω^{0+1+2} = ω^3 = 1 at d = 3.
        assert!(close(z.det(), C64::new(1.0, 0.0)));
        let x = pauli_matrix((1, 0), 3).unwrap();
        // X is an even permutation (3-cycle): det 1.
        assert!(close(x.det(), C64::new(1.0, 0.0)));
        assert!(close(CMatrix::zeros(3).det(), C64::new(0.0, 0.0)));
    }
}
