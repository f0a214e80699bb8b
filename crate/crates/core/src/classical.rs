//! Classical trajectories under the accelerated-frame Hamiltonian and its truncations.
//!
//! The next-to-leading-order Hamiltonian makes the apparent acceleration
//! momentum dependent, `ᾶ = α(1 + p²/2m²c²)`. A uniform gravitational field
//! does not. Accelerations are measured at `x = 0`, where the measured `ẍ`
//! and `ᾶ` coincide exactly. At other `x` the factor `1 + αx/c²` in `ẋ`
//! separates them.

use std::fmt::Write as _;

use serde::Serialize;

use crate::params::PhysicalParams;
use crate::{Error, Result};

/// Phase-space point; `p` is the full 3-momentum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseState {
    pub x: f64,
    pub p: [f64; 3],
    pub t: f64,
}

impl PhaseState {
    pub fn at_rest() -> Self {
        PhaseState {
            x: 0.0,
            p: [0.0; 3],
            t: 0.0,
        }
    }

    fn p_sq(&self) -> f64 {
        self.p.iter().map(|q| q * q).sum()
    }

    fn is_finite(&self) -> bool {
        self.x.is_finite() && self.t.is_finite() && self.p.iter().all(|q| q.is_finite())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HamiltonianVariant {
    /// `mc²(1 + αx/c²)√(1 + p²/m²c²)`
    Full,
    /// `mc² + p²/2m + mαx`
    Leading,
    /// Leading plus `αx·p²/(2mc²)`.
    Nlo,
    /// `mc² + p²/2m + mgx` with `g = α`; no horizon.
    Gravity,
}

impl HamiltonianVariant {
    pub const ALL: [HamiltonianVariant; 4] = [Self::Full, Self::Leading, Self::Nlo, Self::Gravity];

    /// Whether the variant lives in the accelerated frame and so ends at the horizon.
    pub fn has_horizon(self) -> bool {
        !matches!(self, Self::Gravity)
    }
}

fn xi(params: &PhysicalParams, x: f64) -> f64 {
    1.0 + params.alpha * x / (params.c * params.c)
}

fn check_wedge(state: &PhaseState, params: &PhysicalParams, variant: HamiltonianVariant) -> Result<()> {
    if !state.is_finite() {
        return Err(Error::NonFinite("phase-space state"));
    }
    let xi = xi(params, state.x);
    if variant.has_horizon() && !(xi > 0.0) {
        return Err(Error::BeyondHorizon { xi });
    }
    Ok(())
}

pub fn hamiltonian(state: &PhaseState, params: &PhysicalParams, variant: HamiltonianVariant) -> Result<f64> {
    params.validate()?;
    check_wedge(state, params, variant)?;
    Ok(energy(state, params, variant))
}

fn energy(s: &PhaseState, params: &PhysicalParams, variant: HamiltonianVariant) -> f64 {
    let PhysicalParams { m, c, alpha, .. } = *params;
    let p2 = s.p_sq();
    let mc2 = m * c * c;
    match variant {
        HamiltonianVariant::Full => mc2 * xi(params, s.x) * (1.0 + p2 / (m * m * c * c)).sqrt(),
        HamiltonianVariant::Leading | HamiltonianVariant::Gravity => mc2 + p2 / (2.0 * m) + m * alpha * s.x,
        HamiltonianVariant::Nlo => mc2 + p2 / (2.0 * m) + m * alpha * s.x + alpha * s.x * p2 / (2.0 * mc2),
    }
}

/// `(∂H/∂p, ∂H/∂x)`.
fn gradient(s: &PhaseState, params: &PhysicalParams, variant: HamiltonianVariant) -> ([f64; 3], f64) {
    let PhysicalParams { m, c, alpha, .. } = *params;
    let p2 = s.p_sq();
    let (velocity_factor, force) = match variant {
        HamiltonianVariant::Full => {
            let root = (1.0 + p2 / (m * m * c * c)).sqrt();
            (xi(params, s.x) / (m * root), m * alpha * root)
        }
        HamiltonianVariant::Leading | HamiltonianVariant::Gravity => (1.0 / m, m * alpha),
        HamiltonianVariant::Nlo => (
            xi(params, s.x) / m,
            m * alpha * (1.0 + p2 / (2.0 * m * m * c * c)),
        ),
    };
    (s.p.map(|q| velocity_factor * q), force)
}

/// `ᾶ = α(1 + p²/2m²c²)`.
pub fn effective_acceleration(p: [f64; 3], params: &PhysicalParams) -> Result<f64> {
    params.validate()?;
    let p2: f64 = p.iter().map(|q| q * q).sum();
    Ok(params.alpha * (1.0 + p2 / (2.0 * params.m * params.m * params.c * params.c)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectorySample {
    pub state: PhaseState,
    pub energy: f64,
    /// `|H(t) − H(0)|/|H(0)|`
    pub drift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub variant: HamiltonianVariant,
    pub dt: f64,
    pub samples: Vec<TrajectorySample>,
}

impl Trajectory {
    pub fn max_drift(&self) -> f64 {
        self.samples.iter().map(|s| s.drift).fold(0.0, f64::max)
    }

    /// `−(x₀ − 2x₁ + x₂)/dt²`, positive for motion toward `−x`.
    pub fn initial_acceleration(&self) -> Result<f64> {
        match self.samples.as_slice() {
            [a, b, c, ..] => Ok(-(a.state.x - 2.0 * b.state.x + c.state.x) / (self.dt * self.dt)),
            _ => Err(Error::invalid("trajectory", "need at least three samples")),
        }
    }

    /// Columns `t, x, p_x, p_y, p_z, H, drift`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,p_x,p_y,p_z,H,drift\n");
        for s in &self.samples {
            let st = &s.state;
            let _ = writeln!(
                out,
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                st.t, st.x, st.p[0], st.p[1], st.p[2], s.energy, s.drift
            );
        }
        out
    }
}

fn derivative(s: &PhaseState, params: &PhysicalParams, variant: HamiltonianVariant) -> (f64, [f64; 3]) {
    let (dh_dp, dh_dx) = gradient(s, params, variant);
    (dh_dp[0], [-dh_dx, 0.0, 0.0])
}

fn advance(s: &PhaseState, dx: f64, dp: [f64; 3], h: f64) -> PhaseState {
    PhaseState {
        x: s.x + h * dx,
        p: [s.p[0] + h * dp[0], s.p[1] + h * dp[1], s.p[2] + h * dp[2]],
        t: s.t + h,
    }
}

/// Fixed-step RK4 on `ẋ = ∂H/∂p_x`, `ṗ = −∂H/∂x`, sampled every step.
///
/// Transverse coordinates are cyclic, so only `x` is tracked; `p_y, p_z`
/// stay constant.
pub fn integrate(
    state0: PhaseState,
    params: &PhysicalParams,
    variant: HamiltonianVariant,
    duration: f64,
    dt: f64,
) -> Result<Trajectory> {
    params.validate()?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid("dt", format!("must be positive, got {dt}")));
    }
    if !(duration >= dt && duration.is_finite()) {
        return Err(Error::invalid("T", format!("must be at least dt, got {duration}")));
    }
    check_wedge(&state0, params, variant)?;
    let steps = (duration / dt).round() as usize;
    let h0 = energy(&state0, params, variant);
    let drift = |e: f64| (e - h0).abs() / h0.abs();

    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(TrajectorySample {
        state: state0,
        energy: h0,
        drift: 0.0,
    });
    let mut s = state0;
    for i in 1..=steps {
        let (k1x, k1p) = derivative(&s, params, variant);
        let (k2x, k2p) = derivative(&advance(&s, k1x, k1p, 0.5 * dt), params, variant);
        let (k3x, k3p) = derivative(&advance(&s, k2x, k2p, 0.5 * dt), params, variant);
        let (k4x, k4p) = derivative(&advance(&s, k3x, k3p, dt), params, variant);
        let dx = (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0;
        let dp: [f64; 3] = std::array::from_fn(|j| (k1p[j] + 2.0 * k2p[j] + 2.0 * k3p[j] + k4p[j]) / 6.0);
        s = advance(&s, dx, dp, dt);
        s.t = state0.t + i as f64 * dt;
        check_wedge(&s, params, variant)?;
        let e = energy(&s, params, variant);
        if !e.is_finite() {
            return Err(Error::NonFinite("trajectory energy"));
        }
        samples.push(TrajectorySample {
            state: s,
            energy: e,
            drift: drift(e),
        });
    }
    Ok(Trajectory { variant, dt, samples })
}

/// One momentum of the classical comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalRow {
    /// Transverse momentum `p_y`.
    pub p: f64,
    pub nlo_acceleration: f64,
    pub gravity_acceleration: f64,
    /// `ᾶ` for this momentum.
    pub predicted: f64,
    /// NLO acceleration relative to the first row.
    pub nlo_ratio: f64,
    pub nlo_drift: f64,
    pub gravity_drift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqpClassicalReport {
    pub rows: Vec<ClassicalRow>,
    /// `max − min` of the NLO accelerations.
    pub nlo_spread: f64,
    /// `max − min` of the gravitational accelerations.
    pub gravity_spread: f64,
}

fn spread(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let hi = values.clone().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.fold(f64::INFINITY, f64::min);
    hi - lo
}

/// Starts from `x = 0`, `p = (0, p_y, 0)` for each `p_y` in `p_list` and
/// measures the initial acceleration under NLO and GRAVITY.
pub fn eqp_classical_report(
    params: &PhysicalParams,
    p_list: &[f64],
    duration: f64,
    dt: f64,
) -> Result<EqpClassicalReport> {
    if p_list.len() < 2 {
        return Err(Error::invalid(
            "p_list",
            format!("comparison needs at least 2 momenta, got {}", p_list.len()),
        ));
    }
    let mut rows = Vec::with_capacity(p_list.len());
    for &p in p_list {
        let start = PhaseState {
            x: 0.0,
            p: [0.0, p, 0.0],
            t: 0.0,
        };
        let nlo = integrate(start, params, HamiltonianVariant::Nlo, duration, dt)?;
        let grav = integrate(start, params, HamiltonianVariant::Gravity, duration, dt)?;
        rows.push(ClassicalRow {
            p,
            nlo_acceleration: nlo.initial_acceleration()?,
            gravity_acceleration: grav.initial_acceleration()?,
            predicted: effective_acceleration(start.p, params)?,
            nlo_ratio: 0.0,
            nlo_drift: nlo.max_drift(),
            gravity_drift: grav.max_drift(),
        });
    }
    let base = rows[0].nlo_acceleration;
    for r in &mut rows {
        r.nlo_ratio = r.nlo_acceleration / base;
    }
    Ok(EqpClassicalReport {
        nlo_spread: spread(rows.iter().map(|r| r.nlo_acceleration)),
        gravity_spread: spread(rows.iter().map(|r| r.gravity_acceleration)),
        rows,
    })
}

impl EqpClassicalReport {
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("p,nlo_acceleration,gravity_acceleration,predicted,nlo_ratio,nlo_drift,gravity_drift\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                r.p, r.nlo_acceleration, r.gravity_acceleration, r.predicted, r.nlo_ratio, r.nlo_drift, r.gravity_drift
            );
        }
        out
    }

    pub fn summary(&self) -> String {
        format!(
            "classical: NLO acceleration spread {:.6e}, gravity acceleration spread {:.3e}\n",
            self.nlo_spread, self.gravity_spread
        )
    }
}
