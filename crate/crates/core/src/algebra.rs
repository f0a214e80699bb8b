//! Truncated matrix representations of the Heisenberg algebra.
//!
//! Position and momentum are built from oscillator ladder matrices (unit mass
//! and frequency). Hard truncation spoils the canonical commutator in the
//! last basis state, so every identity here is asserted on the *interior
//! block*: basis indices `< N - 2` in each tensor factor.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `x̂` and `p̂` on the first `n` oscillator states.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixRep {
    n: usize,
    x: CMatrix,
    p: CMatrix,
    hbar: f64,
}

impl MatrixRep {
    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> &CMatrix {
        &self.x
    }

    pub fn p(&self) -> &CMatrix {
        &self.p
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Interior indices of a single factor.
    pub fn interior(&self) -> Vec<usize> {
        interior_indices(self.n, 1)
    }
}

/// `X = √(ħ/2)(a + a†)`, `P = i√(ħ/2)(a† − a)` with `a|k⟩ = √k|k−1⟩`.
pub fn build_rep(n: usize, hbar: f64) -> Result<MatrixRep> {
    if n < 4 {
        return Err(Error::invalid("n", format!("basis size must be at least 4, got {n}")));
    }
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::invalid("hbar", format!("must be positive, got {hbar}")));
    }
    let scale = (hbar / 2.0).sqrt();
    let mut x = CMatrix::zeros(n, n);
    let mut p = CMatrix::zeros(n, n);
    for k in 0..n - 1 {
        let amp = scale * ((k + 1) as f64).sqrt();
        x[(k, k + 1)] = Complex64::new(amp, 0.0);
        x[(k + 1, k)] = Complex64::new(amp, 0.0);
        // (a† − a)_{k+1,k} = √(k+1), (a† − a)_{k,k+1} = −√(k+1)
        p[(k + 1, k)] = Complex64::new(0.0, amp);
        p[(k, k + 1)] = Complex64::new(0.0, -amp);
    }
    Ok(MatrixRep { n, x, p, hbar })
}

/// Indices of the interior block of an `n^factors`-dimensional tensor basis.
pub fn interior_indices(n: usize, factors: u32) -> Vec<usize> {
    let dim = n.pow(factors);
    (0..dim)
        .filter(|&flat| {
            let mut rest = flat;
            (0..factors).all(|_| {
                let digit = rest % n;
                rest /= n;
                digit + 2 < n
            })
        })
        .collect()
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// `max |M_ij − conj(M_ji)|`
pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entry magnitude of `m` restricted to `indices × indices`.
pub fn interior_max_abs(m: &CMatrix, indices: &[usize]) -> f64 {
    let mut worst: f64 = 0.0;
    for &r in indices {
        for &c in indices {
            worst = worst.max(m[(r, c)].norm());
        }
    }
    worst
}

fn project(m: &CMatrix, indices: &[usize]) -> CMatrix {
    m.select_rows(indices).select_columns(indices)
}

fn scaled_identity(dim: usize, value: Complex64) -> CMatrix {
    CMatrix::identity(dim, dim) * value
}

/// Interior residual of `[X, P] − iħ·1`.
pub fn canonical_commutator_residual(rep: &MatrixRep) -> f64 {
    let deviation = commutator(&rep.x, &rep.p) - scaled_identity(rep.n, I * rep.hbar);
    interior_max_abs(&deviation, &rep.interior())
}

/// Weyl-symmetrized `x p²`: `(x̂p̂² + p̂²x̂ + p̂x̂p̂)/3`.
pub fn weyl_xp2(rep: &MatrixRep) -> CMatrix {
    let (x, p) = (&rep.x, &rep.p);
    let p2 = p * p;
    (x * &p2 + &p2 * x + p * x * p) / Complex64::new(3.0, 0.0)
}

/// Interior residual of `weyl_xp2 − (p̂²x̂ + iħp̂)`.
pub fn weyl_identity_residual(rep: &MatrixRep) -> f64 {
    let reduced = &rep.p * &rep.p * &rep.x + &rep.p * (I * rep.hbar);
    interior_max_abs(&(weyl_xp2(rep) - reduced), &rep.interior())
}

/// Noncommutative coordinates in the x–y plane expressed through canonical
/// operators on the tensor basis `(x factor) ⊗ (y factor)`:
///
/// `X = x ⊗ 1 − (θ/2ħ)·1 ⊗ p_y`, `Y = 1 ⊗ y + (θ/2ħ)·p_x ⊗ 1`, momenta unchanged.
#[derive(Debug, Clone)]
pub struct BoppShifted {
    pub x_nc: CMatrix,
    pub y_nc: CMatrix,
    pub px: CMatrix,
    pub py: CMatrix,
    n: usize,
    hbar: f64,
    theta: f64,
}

/// Residuals of the six noncommutative Heisenberg relations on the interior block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NcAlgebraResiduals {
    /// `[X, Y] − iθ`
    pub x_y: f64,
    /// `[X, P_x] − iħ`
    pub x_px: f64,
    /// `[Y, P_y] − iħ`
    pub y_py: f64,
    /// `[X, P_y]`
    pub x_py: f64,
    /// `[Y, P_x]`
    pub y_px: f64,
    /// `[P_x, P_y]`
    pub px_py: f64,
}

impl NcAlgebraResiduals {
    pub fn max(&self) -> f64 {
        [self.x_y, self.x_px, self.y_py, self.x_py, self.y_px, self.px_py]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

impl BoppShifted {
    pub fn dimension(&self) -> usize {
        self.n * self.n
    }

    pub fn interior(&self) -> Vec<usize> {
        interior_indices(self.n, 2)
    }

    pub fn residuals(&self) -> NcAlgebraResiduals {
        let dim = self.dimension();
        let idx = self.interior();
        let check = |a: &CMatrix, b: &CMatrix, expected: Complex64| {
            interior_max_abs(&(commutator(a, b) - scaled_identity(dim, expected)), &idx)
        };
        let zero = Complex64::new(0.0, 0.0);
        NcAlgebraResiduals {
            x_y: check(&self.x_nc, &self.y_nc, I * self.theta),
            x_px: check(&self.x_nc, &self.px, I * self.hbar),
            y_py: check(&self.y_nc, &self.py, I * self.hbar),
            x_py: check(&self.x_nc, &self.py, zero),
            y_px: check(&self.y_nc, &self.px, zero),
            px_py: check(&self.px, &self.py, zero),
        }
    }
}

pub fn bopp_shift(rep_x: &MatrixRep, rep_y: &MatrixRep, theta: f64) -> Result<BoppShifted> {
    if rep_x.n != rep_y.n {
        return Err(Error::DimensionMismatch(format!(
            "x basis has {} states, y basis has {}",
            rep_x.n, rep_y.n
        )));
    }
    if rep_x.hbar != rep_y.hbar {
        return Err(Error::DimensionMismatch(format!(
            "representations use different hbar ({} vs {})",
            rep_x.hbar, rep_y.hbar
        )));
    }
    if !(theta >= 0.0 && theta.is_finite()) {
        return Err(Error::invalid("theta", format!("must be finite and >= 0, got {theta}")));
    }
    let n = rep_x.n;
    let hbar = rep_x.hbar;
    let id = CMatrix::identity(n, n);
    let shift = Complex64::new(theta / (2.0 * hbar), 0.0);
    let px = rep_x.p.kronecker(&id);
    let py = id.kronecker(&rep_y.p);
    let x_nc = rep_x.x.kronecker(&id) - &py * shift;
    let y_nc = id.kronecker(&rep_y.x) + &px * shift;
    Ok(BoppShifted {
        x_nc,
        y_nc,
        px,
        py,
        n,
        hbar,
        theta,
    })
}

/// Outcome of comparing the uniform-field Hamiltonian with and without the
/// Bopp shift.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GravityTriviality {
    /// Interior eigenvalues of `P²/2m + mg·X_nc`, plus `constant_offset`.
    pub spectrum_nc: Vec<f64>,
    /// Interior eigenvalues of `P_x²/2m + (P_y − q)²/2m + mg·x`, the commutative
    /// Hamiltonian written in the redefined momentum `P_y − q`, `q = θm²g/2ħ`.
    pub spectrum_c: Vec<f64>,
    /// `max |spectrum_nc − spectrum_c|`.
    pub max_shift: f64,
    /// `θ²m³g²/(8ħ²)`, the constant left over by completing the square.
    pub constant_offset: f64,
    /// `q`, the momentum redefinition that absorbs the shift.
    pub momentum_shift: f64,
    /// Interior residual of `[Y, P_y − q] − iħ`: the redefined momentum is canonical.
    pub redefined_commutator_residual: f64,
    /// `max |spectrum_nc − spec(P²/2m + mg·x)|` with the *original* `P_y`.
    /// A finite basis cannot represent a momentum translation unitarily, so
    /// this stays of order `q·Δp` however small the shift; diagnostic only.
    pub untranslated_max_diff: f64,
}

fn hermitian_eigenvalues(m: CMatrix) -> Result<Vec<f64>> {
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, 100_000)
        .ok_or_else(|| Error::NoConvergence("Hermitian eigensolver".into()))?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

fn uniform_field_hamiltonian(px: &CMatrix, py: &CMatrix, x: &CMatrix, m: f64, g: f64) -> CMatrix {
    let inv_2m = Complex64::new(1.0 / (2.0 * m), 0.0);
    (px * px + py * py) * inv_2m + x * Complex64::new(m * g, 0.0)
}

/// Checks that the Bopp shift of `mg·x̂` is absorbed by redefining `p̂_y`.
///
/// With `X = x − (θ/2ħ)p_y` the Hamiltonian becomes
/// `p²/2m + mgx − (θmg/2ħ)p_y = p_x²/2m + (p_y − q)²/2m + mgx − θ²m³g²/8ħ²`.
/// The redefined momentum `p_y − q` obeys the same algebra as `p_y`, so the
/// noncommutative spectrum is the commutative one up to a constant.
pub fn nc_gravity_triviality(
    rep_x: &MatrixRep,
    rep_y: &MatrixRep,
    m: f64,
    g: f64,
    theta: f64,
) -> Result<GravityTriviality> {
    for (name, v) in [("m", m), ("g", g)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::invalid(name, format!("must be positive, got {v}")));
        }
    }
    let shifted = bopp_shift(rep_x, rep_y, theta)?;
    let hbar = rep_x.hbar;
    let dim = shifted.dimension();
    let idx = shifted.interior();

    let momentum_shift = theta * m * m * g / (2.0 * hbar);
    let constant_offset = theta * theta * m.powi(3) * g * g / (8.0 * hbar * hbar);
    let py_redefined = &shifted.py - scaled_identity(dim, Complex64::new(momentum_shift, 0.0));
    let x_commutative = rep_x.x.kronecker(&CMatrix::identity(rep_x.n, rep_x.n));

    let h_nc = uniform_field_hamiltonian(&shifted.px, &shifted.py, &shifted.x_nc, m, g);
    let h_c = uniform_field_hamiltonian(&shifted.px, &py_redefined, &x_commutative, m, g);
    let h_untranslated = uniform_field_hamiltonian(&shifted.px, &shifted.py, &x_commutative, m, g);

    let spectrum_nc: Vec<f64> = hermitian_eigenvalues(project(&h_nc, &idx))?
        .into_iter()
        .map(|e| e + constant_offset)
        .collect();
    let spectrum_c = hermitian_eigenvalues(project(&h_c, &idx))?;
    let spectrum_untranslated = hermitian_eigenvalues(project(&h_untranslated, &idx))?;

    let max_diff = |a: &[f64], b: &[f64]| {
        a.iter()
            .zip(b)
            .map(|(u, v)| (u - v).abs())
            .fold(0.0, f64::max)
    };
    let y_rep = id_kron(rep_y);
    let redefined_commutator_residual = interior_max_abs(
        &(commutator(&y_rep, &py_redefined) - scaled_identity(dim, I * hbar)),
        &idx,
    );

    Ok(GravityTriviality {
        max_shift: max_diff(&spectrum_nc, &spectrum_c),
        untranslated_max_diff: max_diff(&spectrum_nc, &spectrum_untranslated),
        spectrum_nc,
        spectrum_c,
        constant_offset,
        momentum_shift,
        redefined_commutator_residual,
    })
}

fn id_kron(rep_y: &MatrixRep) -> CMatrix {
    CMatrix::identity(rep_y.n, rep_y.n).kronecker(&rep_y.x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_basis_rejected() {
        assert!(build_rep(3, 1.0).is_err());
        assert!(build_rep(8, 0.0).is_err());
    }

    #[test]
    fn canonical_commutator_on_interior() {
        let rep = build_rep(4, 1.0).unwrap();
        assert!(canonical_commutator_residual(&rep) < 1e-12);
        // the truncation defect sits in the last diagonal entry
        let c = commutator(rep.x(), rep.p());
        assert!((c[(3, 3)] - Complex64::new(0.0, -3.0)).norm() < 1e-12);
    }

    #[test]
    fn hermitian_by_construction() {
        let rep = build_rep(64, 1.0).unwrap();
        assert!(hermiticity_residual(rep.x()) < 1e-14);
        assert!(hermiticity_residual(rep.p()) < 1e-14);
    }

    #[test]
    fn traceless() {
        let rep = build_rep(4, 1.0).unwrap();
        assert_eq!(rep.x().trace(), Complex64::new(0.0, 0.0));
        assert_eq!(rep.p().trace(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn interior_index_sets() {
        assert_eq!(interior_indices(4, 1), vec![0, 1]);
        assert_eq!(interior_indices(4, 2), vec![0, 1, 4, 5]);
        assert_eq!(interior_indices(16, 2).len(), 14 * 14);
    }

    #[test]
    fn weyl_identity_for_several_sizes() {
        for n in [8, 16, 32] {
            let rep = build_rep(n, 1.0).unwrap();
            assert!(weyl_identity_residual(&rep) < 1e-9, "n={n}");
        }
    }

    #[test]
    fn weyl_symmetrization_is_hermitian() {
        let rep = build_rep(16, 1.3).unwrap();
        assert!(hermiticity_residual(&weyl_xp2(&rep)) < 1e-12);
    }

    #[test]
    fn anti_hermitian_part_of_p2x_is_linear_in_hbar() {
        // (P²X − (P²X)†)/2 = −[X, P²]/2 = −iħP on the interior
        for hbar in [1.0, 2.0] {
            let rep = build_rep(16, hbar).unwrap();
            let p2x = rep.p() * rep.p() * rep.x();
            let anti = (&p2x - p2x.adjoint()) * Complex64::new(0.5, 0.0);
            let expected = rep.p() * (-I * hbar);
            assert!(interior_max_abs(&(anti - expected), &rep.interior()) < 1e-9);
        }
    }

    #[test]
    fn bopp_shift_identity_case() {
        let rep = build_rep(8, 1.0).unwrap();
        let s = bopp_shift(&rep, &rep, 0.0).unwrap();
        let id = CMatrix::identity(8, 8);
        assert_eq!(s.x_nc, rep.x().kronecker(&id));
        let r = s.residuals();
        assert_eq!(r.x_y, 0.0);
    }

    #[test]
    fn bopp_shift_reproduces_nc_algebra() {
        let rep = build_rep(8, 1.0).unwrap();
        let r = bopp_shift(&rep, &rep, 0.1).unwrap().residuals();
        assert!(r.x_y < 1e-9);
        assert!(r.x_px < 1e-9);
        assert!(r.max() < 1e-9, "{r:?}");
    }

    #[test]
    fn bopp_shift_rejects_mismatch() {
        let a = build_rep(8, 1.0).unwrap();
        let b = build_rep(10, 1.0).unwrap();
        let c = build_rep(8, 2.0).unwrap();
        assert!(matches!(bopp_shift(&a, &b, 0.1), Err(Error::DimensionMismatch(_))));
        assert!(bopp_shift(&a, &c, 0.1).is_err());
        assert!(bopp_shift(&a, &a, -0.1).is_err());
    }

    #[test]
    fn gravity_triviality_identity_case_is_bitwise() {
        let rep = build_rep(8, 1.0).unwrap();
        let t = nc_gravity_triviality(&rep, &rep, 1.0, 1.0, 0.0).unwrap();
        assert_eq!(t.spectrum_nc, t.spectrum_c);
        assert_eq!(t.max_shift, 0.0);
        assert_eq!(t.untranslated_max_diff, 0.0);
    }

    #[test]
    fn gravity_triviality_absorbs_shift() {
        let rep = build_rep(16, 1.0).unwrap();
        let t = nc_gravity_triviality(&rep, &rep, 1.0, 1.0, 0.05).unwrap();
        assert_eq!(t.spectrum_nc.len(), 14 * 14);
        assert!(t.max_shift < 1e-6, "max_shift={}", t.max_shift);
        assert!(t.redefined_commutator_residual < 1e-9);
        assert!((t.constant_offset - 0.05f64.powi(2) / 8.0).abs() < 1e-18);
    }

    #[test]
    fn offset_is_quadratic_in_theta() {
        let rep = build_rep(8, 1.0).unwrap();
        let a = nc_gravity_triviality(&rep, &rep, 1.3, 0.7, 0.05).unwrap();
        let b = nc_gravity_triviality(&rep, &rep, 1.3, 0.7, 0.10).unwrap();
        assert!((b.constant_offset / a.constant_offset - 4.0).abs() < 1e-12);
    }
}
