//! Quantum bouncer: a particle in a uniform field `g` above a rigid floor.
//!
//! The floor forces `Ai` to vanish there, so the levels are
//! `E_n = (mg²ħ²/2)^{1/3}·|a_n|`. The spectrum is the equivalence-principle
//! twin (`g = α`) of the equally spaced accelerated-frame spectrum, and the
//! two spacing profiles are compared here.

use std::fmt::Write as _;

use serde::Serialize;

use crate::params::PhysicalParams;
use crate::specfun::airy_zero;
use crate::spectrum::{energy_level, level_spacing};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BouncerLevel {
    /// Level index, starting at 1.
    pub n: usize,
    /// `a_n < 0`, the n-th zero of `Ai`.
    pub airy_zero: f64,
    pub energy: f64,
}

fn energy_scale(m: f64, g: f64, hbar: f64) -> Result<f64> {
    for (name, v) in [("m", m), ("g", g), ("hbar", hbar)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::invalid(name, format!("must be positive, got {v}")));
        }
    }
    Ok((m * g * g * hbar * hbar / 2.0).cbrt())
}

pub fn bouncer_level(m: f64, g: f64, hbar: f64, n: usize) -> Result<BouncerLevel> {
    let scale = energy_scale(m, g, hbar)?;
    let a = airy_zero(n)?;
    Ok(BouncerLevel {
        n,
        airy_zero: a,
        energy: scale * a.abs(),
    })
}

/// `E_n = (mg²ħ²/2)^{1/3}·|a_n|`, `n ≥ 1`.
pub fn bouncer_energy(m: f64, g: f64, hbar: f64, n: usize) -> Result<f64> {
    Ok(bouncer_level(m, g, hbar, n)?.energy)
}

/// Spread of a spacing profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpacingStats {
    pub mean: f64,
    /// Population standard deviation.
    pub stddev: f64,
    /// `(max − min)/mean`.
    pub max_relative_variation: f64,
}

impl SpacingStats {
    fn of(spacings: &[f64]) -> Self {
        // shifted by the first sample, so a constant profile gives exactly zero spread
        let len = spacings.len() as f64;
        let shift = spacings[0];
        let offset = spacings.iter().map(|s| s - shift).sum::<f64>() / len;
        let mean = shift + offset;
        let second = spacings.iter().map(|s| (s - shift).powi(2)).sum::<f64>() / len;
        let var = (second - offset * offset).max(0.0);
        let (lo, hi) = spacings
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &s| (a.min(s), b.max(s)));
        SpacingStats {
            mean,
            stddev: var.sqrt(),
            max_relative_variation: (hi - lo) / mean,
        }
    }
}

/// One row of the comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelRow {
    pub n: usize,
    pub energy: f64,
    pub spacing: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqpDeviationReport {
    /// Accelerated frame, `n = 0..k−1`; spacing is the closed-form quantum.
    pub rindler: Vec<LevelRow>,
    /// Bouncer with `g = α`, `n = 1..k`; spacing is `E_{n+1} − E_n`.
    pub bouncer: Vec<LevelRow>,
    pub rindler_stats: SpacingStats,
    pub bouncer_stats: SpacingStats,
    pub bouncer_spacing_decreasing: bool,
    /// Whether the two spacing profiles agree entry by entry.
    pub profiles_coincide: bool,
}

/// Compares the lowest `k ≥ 3` levels of the accelerated frame with the bouncer at `g = α`.
pub fn eqp_deviation_report(params: &PhysicalParams, k: usize) -> Result<EqpDeviationReport> {
    if k < 3 {
        return Err(Error::invalid("k", format!("comparison needs at least 3 levels, got {k}")));
    }
    params.validate()?;
    let quantum = level_spacing(params)?;
    let rindler = (0..k)
        .map(|n| {
            Ok(LevelRow {
                n,
                energy: energy_level(params, n)?,
                spacing: quantum,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let levels = (1..=k + 1)
        .map(|n| bouncer_level(params.m, params.alpha, params.hbar, n))
        .collect::<Result<Vec<_>>>()?;
    let bouncer: Vec<LevelRow> = levels
        .windows(2)
        .map(|w| LevelRow {
            n: w[0].n,
            energy: w[0].energy,
            spacing: w[1].energy - w[0].energy,
        })
        .collect();

    let rs: Vec<f64> = rindler.iter().map(|r| r.spacing).collect();
    let bs: Vec<f64> = bouncer.iter().map(|r| r.spacing).collect();
    Ok(EqpDeviationReport {
        rindler_stats: SpacingStats::of(&rs),
        bouncer_stats: SpacingStats::of(&bs),
        bouncer_spacing_decreasing: bs.windows(2).all(|w| w[1] < w[0]),
        profiles_coincide: rs == bs,
        rindler,
        bouncer,
    })
}

impl EqpDeviationReport {
    /// Columns `system, n, energy, spacing`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("system,n,energy,spacing\n");
        for (system, rows) in [("rindler", &self.rindler), ("bouncer", &self.bouncer)] {
            for r in rows {
                let _ = writeln!(out, "{system},{},{:.17e},{:.17e}", r.n, r.energy, r.spacing);
            }
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "rindler: spacing mean {:.10e}, stddev {:.3e}, max relative variation {:.3e}",
            self.rindler_stats.mean, self.rindler_stats.stddev, self.rindler_stats.max_relative_variation
        );
        let _ = writeln!(
            out,
            "bouncer: spacing mean {:.10e}, stddev {:.3e}, max relative variation {:.3e}, decreasing: {}",
            self.bouncer_stats.mean,
            self.bouncer_stats.stddev,
            self.bouncer_stats.max_relative_variation,
            self.bouncer_spacing_decreasing
        );
        let _ = writeln!(out, "spacing profiles coincide: {}", self.profiles_coincide);
        out
    }
}
