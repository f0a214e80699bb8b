//! Physical parameters, the derived spectral constants, and the coordinate
//! maps `x → ξ → ζ` that take the Rindler Schrödinger equation to Laguerre
//! form.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Physical inputs shared by every module.
///
/// Units are whatever the caller chooses; [`PhysicalParams::natural_units`]
/// (`m = c = ħ = 1`) is the reference configuration used by the tests.
/// `theta` is the scalar `θ = θ_xy ≥ 0`; the orientation of the
/// antisymmetric tensor is carried by the Bopp-shift formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalParams {
    pub m: f64,
    pub alpha: f64,
    pub c: f64,
    pub hbar: f64,
    pub p_y: f64,
    pub p_z: f64,
    pub theta: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self::natural_units()
    }
}

impl PhysicalParams {
    /// `m = c = ħ = 1`, `α = 1`, no transverse momentum, commutative space.
    pub fn natural_units() -> Self {
        PhysicalParams {
            m: 1.0,
            alpha: 1.0,
            c: 1.0,
            hbar: 1.0,
            p_y: 0.0,
            p_z: 0.0,
            theta: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("m", self.m),
            ("alpha", self.alpha),
            ("c", self.c),
            ("hbar", self.hbar),
            ("p_y", self.p_y),
            ("p_z", self.p_z),
            ("theta", self.theta),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::invalid(name, format!("must be finite, got {value}")));
            }
        }
        for (name, value) in [
            ("m", self.m),
            ("alpha", self.alpha),
            ("c", self.c),
            ("hbar", self.hbar),
        ] {
            if value <= 0.0 {
                return Err(Error::invalid(name, format!("must be positive, got {value}")));
            }
        }
        if self.theta < 0.0 {
            return Err(Error::invalid(
                "theta",
                format!("sign convention requires theta >= 0, got {}", self.theta),
            ));
        }
        Ok(())
    }

    /// Parses and validates the flat JSON form (`m, alpha, c, hbar, p_y, p_z, theta`).
    pub fn from_json(text: &str) -> Result<Self> {
        let params: PhysicalParams = serde_json::from_str(text)
            .map_err(|e| Error::invalid("params", e.to_string()))?;
        params.validate()?;
        Ok(params)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain struct of floats serializes")
    }

    /// Squared transverse momentum `p_y² + p_z²`.
    pub fn transverse_momentum_sq(&self) -> f64 {
        self.p_y * self.p_y + self.p_z * self.p_z
    }

    /// `Ẽ = mc² + (p_y² + p_z²)/2m`, the energy carried by the free transverse motion.
    pub fn transverse_energy(&self) -> f64 {
        self.m * self.c * self.c + self.transverse_momentum_sq() / (2.0 * self.m)
    }

    /// `γ = 8mc⁴Ẽ/(ħ²α²)`. Independent of the trial energy.
    pub fn gamma(&self) -> f64 {
        let c4 = self.c.powi(4);
        8.0 * self.m * c4 * self.transverse_energy() / (self.hbar * self.hbar * self.alpha * self.alpha)
    }

    /// `ω = √2·α/c`.
    pub fn omega(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.alpha / self.c
    }
}

/// Constants of the radial equation for a given trial energy `E`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedConstants {
    pub e_tilde: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub sigma: f64,
    pub omega: f64,
}

/// Evaluates `Ẽ, κ, γ, σ = κ/√γ, ω` at trial energy `energy`.
///
/// `energy` is not an eigenvalue here; quantization (`σ = n + 1/2`) is
/// imposed downstream.
pub fn derive_constants(params: &PhysicalParams, energy: f64) -> Result<DerivedConstants> {
    params.validate()?;
    if !energy.is_finite() {
        return Err(Error::invalid("energy", format!("must be finite, got {energy}")));
    }
    let c4 = params.c.powi(4);
    let hbar_alpha_sq = params.hbar * params.hbar * params.alpha * params.alpha;
    let kappa = 2.0 * params.m * c4 * energy / hbar_alpha_sq;
    let gamma = params.gamma();
    Ok(DerivedConstants {
        e_tilde: params.transverse_energy(),
        kappa,
        gamma,
        sigma: kappa / gamma.sqrt(),
        omega: params.omega(),
    })
}

/// The maps `ξ(x) = 1 + αx/c²` and `ζ(ξ) = √γ·ξ`.
///
/// Forward maps are total. Inverse maps reject points at or beyond the
/// horizon (`ξ ≤ 0`, equivalently `ζ ≤ 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoordinateMaps {
    alpha: f64,
    c: f64,
    sqrt_gamma: f64,
}

impl CoordinateMaps {
    pub fn new(params: &PhysicalParams, dc: &DerivedConstants) -> Result<Self> {
        params.validate()?;
        if !(dc.gamma > 0.0 && dc.gamma.is_finite()) {
            return Err(Error::invalid("gamma", format!("must be positive, got {}", dc.gamma)));
        }
        Ok(CoordinateMaps {
            alpha: params.alpha,
            c: params.c,
            sqrt_gamma: dc.gamma.sqrt(),
        })
    }

    /// Maps built from `params` alone; `γ` does not depend on the trial energy.
    pub fn from_params(params: &PhysicalParams) -> Result<Self> {
        let dc = derive_constants(params, 0.0)?;
        Self::new(params, &dc)
    }

    pub fn xi_of_x(&self, x: f64) -> f64 {
        1.0 + self.alpha * x / (self.c * self.c)
    }

    pub fn x_of_xi(&self, xi: f64) -> Result<f64> {
        if !(xi > 0.0) {
            return Err(Error::BeyondHorizon { xi });
        }
        Ok((xi - 1.0) * self.c * self.c / self.alpha)
    }

    pub fn zeta_of_xi(&self, xi: f64) -> f64 {
        self.sqrt_gamma * xi
    }

    pub fn xi_of_zeta(&self, zeta: f64) -> Result<f64> {
        if !(zeta > 0.0) {
            return Err(Error::BeyondHorizon {
                xi: zeta / self.sqrt_gamma,
            });
        }
        Ok(zeta / self.sqrt_gamma)
    }

    pub fn zeta_of_x(&self, x: f64) -> f64 {
        self.zeta_of_xi(self.xi_of_x(x))
    }

    pub fn x_of_zeta(&self, zeta: f64) -> Result<f64> {
        self.x_of_xi(self.xi_of_zeta(zeta)?)
    }

    /// Constant Jacobian `dζ/dx = √γ·α/c²`.
    pub fn dzeta_dx(&self) -> f64 {
        self.sqrt_gamma * self.alpha / (self.c * self.c)
    }

    pub fn sqrt_gamma(&self) -> f64 {
        self.sqrt_gamma
    }
}
