//! Analytic spectrum of a free particle seen from a uniformly accelerated frame.
//!
//! Regularity at the horizon quantizes `σ = n + 1/2`, which gives an equally
//! spaced, oscillator-like ladder
//! `E_n = (n + 1/2)·ħα·√(p_y² + p_z² + 2m²c²)/(mc²)`.
//!
//! Taken at face value the formula collapses (`E_n → 0`) as `α → 0`
//! instead of approaching the free continuum. It is implemented as written.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::params::{derive_constants, CoordinateMaps, PhysicalParams};
use crate::specfun::{laguerre, laguerre_derivative};
use crate::Result;

/// Energy quantum `ħα·√(p_y² + p_z² + 2m²c²)/(mc²)`; equals `ħω` when `p_y = p_z = 0`.
pub fn level_spacing(params: &PhysicalParams) -> Result<f64> {
    params.validate()?;
    let PhysicalParams { m, c, hbar, alpha, .. } = *params;
    let root = (params.transverse_momentum_sq() + 2.0 * m * m * c * c).sqrt();
    Ok(hbar * alpha * root / (m * c * c))
}

/// `E_n = (n + 1/2)·level_spacing`.
pub fn energy_level(params: &PhysicalParams, n: usize) -> Result<f64> {
    Ok((n as f64 + 0.5) * level_spacing(params)?)
}

/// Normalized radial eigenfunction `φ_n(ζ) = e^{-ζ/2}·L_n(ζ)`, with `∫₀^∞ φ_n² dζ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RadialEigenfunction {
    n: usize,
}

impl RadialEigenfunction {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self, zeta: f64) -> f64 {
        (-0.5 * zeta).exp() * laguerre(self.n, zeta)
    }

    /// `φ_n'(ζ) = e^{-ζ/2}(L_n' − L_n/2)`.
    pub fn derivative(&self, zeta: f64) -> f64 {
        (-0.5 * zeta).exp() * (laguerre_derivative(self.n, zeta) - 0.5 * laguerre(self.n, zeta))
    }
}

pub fn eigenfunction(n: usize) -> RadialEigenfunction {
    RadialEigenfunction { n }
}

/// One quantized level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenState {
    pub n: usize,
    pub sigma: f64,
    pub energy: f64,
    pub phi: RadialEigenfunction,
}

pub fn eigen_state(params: &PhysicalParams, n: usize) -> Result<EigenState> {
    Ok(EigenState {
        n,
        sigma: n as f64 + 0.5,
        energy: energy_level(params, n)?,
        phi: eigenfunction(n),
    })
}

/// Separated solution `ψ(x, y, z) = N·φ_n(ζ(x))·e^{-i(p_y y + p_z z)/ħ}`.
///
/// `N = √(dζ/dx)` so that `∫|ψ|² dx = 1` over the wedge `ξ > 0`
/// (per unit transverse area).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullWavefunction {
    phi: RadialEigenfunction,
    maps: CoordinateMaps,
    norm: f64,
    k_y: f64,
    k_z: f64,
}

pub fn full_wavefunction(params: &PhysicalParams, n: usize) -> Result<FullWavefunction> {
    let maps = CoordinateMaps::from_params(params)?;
    Ok(FullWavefunction {
        phi: eigenfunction(n),
        norm: maps.dzeta_dx().sqrt(),
        maps,
        k_y: params.p_y / params.hbar,
        k_z: params.p_z / params.hbar,
    })
}

impl FullWavefunction {
    pub fn normalization(&self) -> f64 {
        self.norm
    }

    pub fn maps(&self) -> &CoordinateMaps {
        &self.maps
    }

    /// Fails with [`crate::Error::BeyondHorizon`] when `ξ(x) ≤ 0`.
    pub fn eval(&self, x: f64, y: f64, z: f64) -> Result<Complex64> {
        let xi = self.maps.xi_of_x(x);
        if !(xi > 0.0) {
            return Err(crate::Error::BeyondHorizon { xi });
        }
        let radial = self.norm * self.phi.value(self.maps.zeta_of_xi(xi));
        Ok(Complex64::from_polar(radial, -(self.k_y * y + self.k_z * z)))
    }
}

/// `|σ(E_n) − (n + 1/2)|` after feeding `E_n` back through [`derive_constants`].
pub fn spectrum_consistency(params: &PhysicalParams, n: usize) -> Result<f64> {
    let energy = energy_level(params, n)?;
    let dc = derive_constants(params, energy)?;
    Ok((dc.sigma - (n as f64 + 0.5)).abs())
}

/// One row of the exported spectrum; `spacing` is `E_{n+1} − E_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub n: usize,
    pub sigma: f64,
    pub energy: f64,
    pub spacing: f64,
}

/// The lowest `k` levels. Spacing is the closed-form quantum, identical on every row.
pub fn spectrum_table(params: &PhysicalParams, k: usize) -> Result<Vec<SpectrumRow>> {
    let spacing = level_spacing(params)?;
    (0..k)
        .map(|n| {
            Ok(SpectrumRow {
                n,
                sigma: n as f64 + 0.5,
                energy: energy_level(params, n)?,
                spacing,
            })
        })
        .collect()
}

pub fn spectrum_csv(rows: &[SpectrumRow]) -> String {
    let mut out = String::from("n,sigma,energy,spacing\n");
    for r in rows {
        let _ = writeln!(out, "{},{:.17e},{:.17e},{:.17e}", r.n, r.sigma, r.energy, r.spacing);
    }
    out
}
