//! Finite-difference check of the analytic spectrum.
//!
//! The radial equation is solved in self-adjoint form
//! `−(ζΦ')' + (ζ/4)Φ = σΦ` on a cell-centred grid over `(0, ζ_max)`. The
//! flux coefficient vanishes at `ζ = 0`, so regularity there needs no ghost
//! value; `Φ(ζ_max) = 0` closes the right end. Eigenvalues come from Sturm
//! sequence bisection and eigenvectors from inverse iteration.

use std::fmt::Write as _;

use serde::Serialize;

use crate::params::{derive_constants, PhysicalParams};
use crate::{Error, Result};

pub const MIN_GRID_POINTS: usize = 50;
/// Absolute bracket width at which bisection stops.
pub const EIGENVALUE_TOLERANCE: f64 = 1e-12;
const BISECTION_BUDGET: usize = 400;
const INVERSE_ITERATIONS: usize = 4;
/// Cutoff of the reference run that separates truncation from discretization error.
pub const REFERENCE_ZETA_MAX: f64 = 80.0;

/// Uniform cell-centred grid `ζ_i = (i + 1/2)h`, `h = ζ_max/N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    zeta_max: f64,
    n_points: usize,
}

impl Grid {
    pub fn new(zeta_max: f64, n_points: usize) -> Result<Self> {
        if !(zeta_max > 0.0 && zeta_max.is_finite()) {
            return Err(Error::invalid("zeta_max", format!("must be positive, got {zeta_max}")));
        }
        if n_points < MIN_GRID_POINTS {
            return Err(Error::invalid(
                "n_points",
                format!("need at least {MIN_GRID_POINTS} points, got {n_points}"),
            ));
        }
        Ok(Grid { zeta_max, n_points })
    }

    pub fn zeta_max(&self) -> f64 {
        self.zeta_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        self.zeta_max / self.n_points as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.node(i)).collect()
    }
}

/// Symmetric tridiagonal matrix; a single off-diagonal array keeps it symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
    grid: Option<Grid>,
}

impl TridiagonalSystem {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::DimensionMismatch("empty diagonal".into()));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch(format!(
                "diagonal has {} entries, off-diagonal {} (expected {})",
                diag.len(),
                offdiag.len(),
                diag.len() - 1
            )));
        }
        if diag.iter().chain(&offdiag).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("tridiagonal entries"));
        }
        Ok(TridiagonalSystem {
            diag,
            offdiag,
            grid: None,
        })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn grid(&self) -> Option<&Grid> {
        self.grid.as_ref()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.offdiag[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.offdiag[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    fn radius(&self, i: usize) -> f64 {
        let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
        let right = self.offdiag.get(i).map_or(0.0, |e| e.abs());
        left + right
    }

    /// `(lower, upper)` enclosing every Gershgorin disk.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        (0..self.len()).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), i| {
            let r = self.radius(i);
            (lo.min(self.diag[i] - r), hi.max(self.diag[i] + r))
        })
    }

    fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.gershgorin_bounds();
        lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }

    /// Number of eigenvalues strictly below `lambda` (negative pivots of `T − λI`).
    pub fn sturm_count(&self, lambda: f64) -> usize {
        let tiny = f64::EPSILON * self.norm_bound();
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.len() {
            let coupling = if i > 0 {
                let e = self.offdiag[i - 1];
                e * e / q
            } else {
                0.0
            };
            q = self.diag[i] - lambda - coupling;
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The smallest `k` eigenvalues in ascending order.
    pub fn eigenvalues(&self, k: usize) -> Result<Vec<f64>> {
        if k > self.len() {
            return Err(Error::invalid(
                "k",
                format!("requested {k} eigenvalues of a {}x{} matrix", self.len(), self.len()),
            ));
        }
        (0..k).map(|j| self.bisect(j)).collect()
    }

    /// Eigenvalue with index `j` (0-based): the point where the count steps past `j`.
    fn bisect(&self, j: usize) -> Result<f64> {
        let (glo, ghi) = self.gershgorin_bounds();
        let pad = f64::EPSILON * self.norm_bound() + f64::MIN_POSITIVE;
        let (mut lo, mut hi) = (glo - pad, ghi + pad);
        for _ in 0..BISECTION_BUDGET {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= EIGENVALUE_TOLERANCE || mid <= lo || mid >= hi {
                return Ok(mid);
            }
            if self.sturm_count(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(Error::NoConvergence(format!(
            "bisection for eigenvalue {j} within {BISECTION_BUDGET} steps"
        )))
    }

    /// Unit eigenvector for the eigenvalue `lambda`, sign fixed so the first
    /// component is non-negative.
    pub fn eigenvector(&self, lambda: f64) -> Result<Vec<f64>> {
        let lu = ShiftedLu::factor(self, lambda);
        let n = self.len();
        let mut v = vec![1.0 / (n as f64).sqrt(); n];
        for _ in 0..INVERSE_ITERATIONS {
            lu.solve(&mut v);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !(norm.is_finite() && norm > 0.0) {
                return Err(Error::NonFinite("inverse iteration"));
            }
            v.iter_mut().for_each(|x| *x /= norm);
        }
        if v[0] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        Ok(v)
    }
}

/// LU factorization of `T − λI` with partial pivoting; `U` has two superdiagonals.
struct ShiftedLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(t: &TridiagonalSystem, lambda: f64) -> Self {
        let n = t.len();
        let mut dl = t.offdiag.clone();
        let mut d: Vec<f64> = t.diag.iter().map(|x| x - lambda).collect();
        let mut du = t.offdiag.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        // an exact eigenvalue makes U singular; a tiny pivot is what inverse iteration wants
        let tiny = f64::EPSILON * t.norm_bound();
        for p in &mut d {
            if p.abs() < tiny {
                *p = if *p < 0.0 { -tiny } else { tiny };
            }
        }
        ShiftedLu {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

/// Flux discretization of `−(ζΦ')' + (ζ/4)Φ`:
/// `diag_i = (ζ_{i−½} + ζ_{i+½})/h² + ζ_i/4`, `off_i = −ζ_{i+½}/h²`.
pub fn discretize_sl(grid: &Grid) -> TridiagonalSystem {
    let n = grid.n_points;
    let h = grid.spacing();
    let h2 = h * h;
    let face = |i: usize| i as f64 * h; // ζ_{i−½}
    let diag = (0..n)
        .map(|i| (face(i) + face(i + 1)) / h2 + grid.node(i) / 4.0)
        .collect();
    let offdiag = (0..n - 1).map(|i| -face(i + 1) / h2).collect();
    TridiagonalSystem {
        diag,
        offdiag,
        grid: Some(*grid),
    }
}

/// `Tφ − σφ` for a function sampled at the grid nodes.
pub fn sl_residual(grid: &Grid, phi: impl Fn(f64) -> f64, sigma: f64) -> Vec<f64> {
    let system = discretize_sl(grid);
    let samples: Vec<f64> = grid.nodes().into_iter().map(&phi).collect();
    system
        .apply(&samples)
        .into_iter()
        .zip(&samples)
        .map(|(a, s)| a - sigma * s)
        .collect()
}

/// Interior sign changes, ignoring entries below `1e-8` of the peak (the
/// exponentially small tail carries rounding noise only).
pub fn sign_changes(v: &[f64]) -> usize {
    let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let floor = 1e-8 * peak;
    let mut last = 0.0f64;
    let mut count = 0;
    for &x in v.iter().filter(|x| x.abs() > floor) {
        if last != 0.0 && x.signum() != last.signum() {
            count += 1;
        }
        last = x;
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericLevel {
    pub n: usize,
    pub sigma_numeric: f64,
    pub energy_numeric: f64,
}

/// Lowest `k` levels from the discretized problem, mapped to energies by
/// `E = σ·√γ·ħ²α²/(2mc⁴)`.
pub fn solve_spectrum(params: &PhysicalParams, grid: &Grid, k: usize) -> Result<Vec<NumericLevel>> {
    if k == 0 {
        return Err(Error::invalid("k", "need at least one level"));
    }
    let dc = derive_constants(params, 0.0)?;
    let PhysicalParams { m, c, hbar, alpha, .. } = *params;
    let scale = dc.gamma.sqrt() * hbar * hbar * alpha * alpha / (2.0 * m * c.powi(4));
    let sigmas = discretize_sl(grid).eigenvalues(k)?;
    Ok(sigmas
        .into_iter()
        .enumerate()
        .map(|(n, sigma)| NumericLevel {
            n,
            sigma_numeric: sigma,
            energy_numeric: sigma * scale,
        })
        .collect())
}

/// One line of the exported convergence table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub h: f64,
    pub zeta_max: f64,
    pub n: usize,
    pub sigma_numeric: f64,
    pub sigma_analytic: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub rows: Vec<ConvergenceRow>,
    /// `(h, max_n |σ_numeric − σ_analytic|)` per grid.
    pub max_errors: Vec<(f64, f64)>,
    /// `log₂(e(h)/e(h/2))` for each consecutive pair of grids.
    pub observed_orders: Vec<f64>,
    /// Per grid: the error is dominated by the finite cutoff rather than by `h`.
    pub truncation_dominated: Vec<bool>,
}

impl ConvergenceStudy {
    pub fn any_truncation(&self) -> bool {
        self.truncation_dominated.iter().any(|&t| t)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("h,zeta_max,n,sigma_numeric,sigma_analytic,abs_error\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:.17e},{:.17e},{},{:.17e},{:.17e},{:.17e}",
                r.h, r.zeta_max, r.n, r.sigma_numeric, r.sigma_analytic, r.abs_error
            );
        }
        out
    }
}

/// Errors of the lowest `k` levels on a sequence of grids with halving `h`.
///
/// Each grid is also compared with a run at `ζ_max = 80` and the same `h`;
/// when that difference exceeds half the total error the grid is flagged as
/// truncation-dominated.
pub fn convergence_study(grids: &[Grid], k: usize) -> Result<ConvergenceStudy> {
    if grids.len() < 3 {
        return Err(Error::invalid("grids", format!("need at least 3 grids, got {}", grids.len())));
    }
    if k == 0 {
        return Err(Error::invalid("k", "need at least one level"));
    }
    for pair in grids.windows(2) {
        let ratio = pair[0].spacing() / pair[1].spacing();
        if (ratio - 2.0).abs() > 1e-9 {
            return Err(Error::invalid(
                "grids",
                format!("spacing must halve between grids, ratio was {ratio}"),
            ));
        }
    }
    let mut rows = Vec::with_capacity(grids.len() * k);
    let mut max_errors = Vec::with_capacity(grids.len());
    let mut truncation_dominated = Vec::with_capacity(grids.len());
    for grid in grids {
        let sigmas = discretize_sl(grid).eigenvalues(k)?;
        let h = grid.spacing();
        let reference = if grid.zeta_max() >= REFERENCE_ZETA_MAX {
            sigmas.clone()
        } else {
            let n_ref = (REFERENCE_ZETA_MAX / h).round() as usize;
            discretize_sl(&Grid::new(n_ref as f64 * h, n_ref)?).eigenvalues(k)?
        };
        let mut worst: f64 = 0.0;
        let mut truncated = false;
        for (n, (&s, &r)) in sigmas.iter().zip(&reference).enumerate() {
            let analytic = n as f64 + 0.5;
            let err = (s - analytic).abs();
            worst = worst.max(err);
            truncated |= (s - r).abs() > 0.5 * err;
            rows.push(ConvergenceRow {
                h,
                zeta_max: grid.zeta_max(),
                n,
                sigma_numeric: s,
                sigma_analytic: analytic,
                abs_error: err,
            });
        }
        max_errors.push((h, worst));
        truncation_dominated.push(truncated);
    }
    let observed_orders = max_errors
        .windows(2)
        .map(|w| (w[0].1 / w[1].1).log2())
        .collect();
    Ok(ConvergenceStudy {
        rows,
        max_errors,
        observed_orders,
        truncation_dominated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn grid_invariants() {
        let g = Grid::new(60.0, 6000).unwrap();
        assert_relative_eq!(g.spacing(), 0.01, max_relative = 1e-15);
        assert!(g.node(0) > 0.0 && g.node(5999) < 60.0);
        assert!(Grid::new(60.0, 49).is_err());
        assert!(Grid::new(0.0, 100).is_err());
    }

    #[test]
    fn toeplitz_three_by_three() {
        let t = TridiagonalSystem::new(vec![2.0; 3], vec![-1.0; 2]).unwrap();
        let ev = t.eigenvalues(3).unwrap();
        let s = 2f64.sqrt();
        for (got, want) in ev.iter().zip([2.0 - s, 2.0, 2.0 + s]) {
            assert!((got - want).abs() < 1e-11);
        }
    }

    #[test]
    fn scalar_system() {
        let t = TridiagonalSystem::new(vec![5.0], vec![]).unwrap();
        let ev = t.eigenvalues(1).unwrap();
        assert!((ev[0] - 5.0).abs() < 1e-12);
        assert_eq!(t.eigenvector(ev[0]).unwrap(), vec![1.0]);
        assert!(t.eigenvalues(2).is_err());
    }

    #[test]
    fn shape_mismatch_rejected() {
        assert!(TridiagonalSystem::new(vec![1.0, 2.0], vec![]).is_err());
        assert!(TridiagonalSystem::new(vec![], vec![]).is_err());
        assert!(TridiagonalSystem::new(vec![1.0, f64::NAN], vec![0.0]).is_err());
    }

    #[test]
    fn inverse_iteration_matches_known_vector() {
        let t = TridiagonalSystem::new(vec![2.0; 3], vec![-1.0; 2]).unwrap();
        let lambda = t.eigenvalues(1).unwrap()[0];
        let v = t.eigenvector(lambda).unwrap();
        let expected = [0.5, 0.5 * 2f64.sqrt(), 0.5];
        for (a, b) in v.iter().zip(expected) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn pivoted_factorization_solves() {
        // small diagonal forces row swaps
        let t = TridiagonalSystem::new(vec![1e-3, 2.0, -1.0, 4.0], vec![3.0, 1.0, 2.0]).unwrap();
        let lu = ShiftedLu::factor(&t, 0.5);
        let x = [1.0, -2.0, 0.5, 3.0];
        let mut b: Vec<f64> = t.apply(&x).iter().zip(&x).map(|(a, xi)| a - 0.5 * xi).collect();
        lu.solve(&mut b);
        for (a, e) in b.iter().zip(x) {
            assert!((a - e).abs() < 1e-12);
        }
    }

    #[test]
    fn sign_structure() {
        let t = discretize_sl(&Grid::new(30.0, 300).unwrap());
        assert!(t.diag().iter().all(|&d| d > 0.0));
        assert!(t.offdiag().iter().all(|&e| e < 0.0));
    }

    #[test]
    fn constant_vector_telescopes() {
        let g = Grid::new(20.0, 200).unwrap();
        let t = discretize_sl(&g);
        let av = t.apply(&vec![1.0; 200]);
        for (i, v) in av.iter().enumerate().take(199) {
            assert!((v - g.node(i) / 4.0).abs() < 1e-9, "row {i}");
        }
    }

    #[test]
    fn ground_state_residual_is_second_order() {
        let worst = |n: usize| {
            let g = Grid::new(40.0, n).unwrap();
            sl_residual(&g, |z| (-z / 2.0).exp(), 0.5)
                .iter()
                .enumerate()
                .filter(|(i, _)| (1.0..20.0).contains(&g.node(*i)))
                .fold(0.0f64, |m, (_, r)| m.max(r.abs()))
        };
        let (a, b, c) = (worst(400), worst(800), worst(1600));
        assert!((a / b - 4.0).abs() < 0.2, "{}", a / b);
        assert!((b / c - 4.0).abs() < 0.2, "{}", b / c);
    }

    #[test]
    fn reference_spectrum() {
        let t = discretize_sl(&Grid::new(60.0, 6000).unwrap());
        let ev = t.eigenvalues(5).unwrap();
        for (n, s) in ev.iter().enumerate() {
            assert!((s - (n as f64 + 0.5)).abs() < 2e-5, "n={n} s={s}");
        }
        assert_eq!(t.sturm_count(5.0), 5);
        let (lo, _) = t.gershgorin_bounds();
        assert!(ev.iter().all(|&s| s >= lo));
    }

    #[test]
    fn eigenvectors_oscillate() {
        let t = discretize_sl(&Grid::new(60.0, 3000).unwrap());
        let ev = t.eigenvalues(6).unwrap();
        for (n, &lambda) in ev.iter().enumerate() {
            let v = t.eigenvector(lambda).unwrap();
            assert_eq!(sign_changes(&v), n, "n={n}");
        }
    }

    #[test]
    fn energies_from_params() {
        let p = PhysicalParams {
            alpha: 0.1,
            ..PhysicalParams::natural_units()
        };
        let g = Grid::new(60.0, 6000).unwrap();
        let levels = solve_spectrum(&p, &g, 5).unwrap();
        assert!((levels[0].energy_numeric - 0.070_710_7).abs() < 1e-4);
        let gaps: Vec<f64> = levels.windows(2).map(|w| w[1].energy_numeric - w[0].energy_numeric).collect();
        for gap in &gaps {
            assert!((gap / gaps[0] - 1.0).abs() < 1e-4);
        }
        let q = PhysicalParams { p_y: 1.0, ..p };
        let e0 = solve_spectrum(&q, &g, 1).unwrap()[0].energy_numeric;
        assert!((e0 - 0.5 * 3f64.sqrt() * 0.1).abs() < 1e-4);
        assert!(solve_spectrum(&q, &g, 0).is_err());
    }

    #[test]
    fn second_order_convergence() {
        let grids: Vec<Grid> = [750, 1500, 3000, 6000]
            .iter()
            .map(|&n| Grid::new(60.0, n).unwrap())
            .collect();
        let study = convergence_study(&grids, 5).unwrap();
        assert_eq!(study.rows.len(), 20);
        for order in &study.observed_orders {
            assert!((1.7..=2.3).contains(order), "order {order}");
        }
        assert!(!study.any_truncation());
        let again = convergence_study(&grids, 5).unwrap();
        assert_eq!(study, again);
    }

    #[test]
    fn short_domain_is_flagged() {
        let grids: Vec<Grid> = [250, 500, 1000]
            .iter()
            .map(|&n| Grid::new(10.0, n).unwrap())
            .collect();
        let study = convergence_study(&grids, 5).unwrap();
        assert!(study.truncation_dominated.iter().all(|&t| t));
    }

    #[test]
    fn study_preconditions() {
        let g = |n| Grid::new(60.0, n).unwrap();
        assert!(convergence_study(&[g(100), g(200)], 3).is_err());
        assert!(convergence_study(&[g(100), g(300), g(600)], 3).is_err());
    }
}
