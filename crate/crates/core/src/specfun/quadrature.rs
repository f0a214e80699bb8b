use crate::{Error, Result};

pub const MAX_GAUSS_LAGUERRE_ORDER: usize = 200;

/// Nodes and weights of a rule for `∫₀^∞ e^{-x} g(x) dx ≈ Σ wᵢ g(xᵢ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `Σ wᵢ g(xᵢ)`. The `e^{-x}` weight is implicit: pass `g`, not `e^{-x}g`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, g: F) -> Result<f64> {
        integrate_semiinfinite(g, self)
    }
}

/// `Σ wᵢ g(xᵢ)` over `rule`; fails if `g` is non-finite at any node.
pub fn integrate_semiinfinite<F: Fn(f64) -> f64>(g: F, rule: &QuadratureRule) -> Result<f64> {
    let mut sum = 0.0;
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let value = g(x);
        if !value.is_finite() {
            return Err(Error::NonFinite("quadrature integrand"));
        }
        sum += w * value;
    }
    Ok(sum)
}

/// `L_n` and `L_n'` sharing a common factor `e^{ln_scale}`.
struct ScaledLaguerre {
    value: f64,
    derivative: f64,
    ln_scale: f64,
}

/// Rescaling keeps the recurrence finite at the outer nodes of high-order
/// rules. The derivative follows `L'_{k+1} = L'_k - L_k`, which stays
/// accurate near `x = 0` where `n(L_n - L_{n-1})/x` cancels.
fn scaled_laguerre(n: usize, x: f64) -> ScaledLaguerre {
    let mut curr: f64 = 1.0;
    let mut prev = 0.0;
    let mut derivative = 0.0;
    let mut ln_scale = 0.0;
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * curr - kf * prev) / (kf + 1.0);
        derivative -= curr;
        prev = curr;
        curr = next;
        if curr.abs() > 1e100 {
            curr *= 1e-100;
            prev *= 1e-100;
            derivative *= 1e-100;
            ln_scale += 100.0 * std::f64::consts::LN_10;
        }
    }
    ScaledLaguerre {
        value: curr,
        derivative,
        ln_scale,
    }
}

/// Gauss–Laguerre rule of order `n` (`1 ≤ n ≤ 200`).
///
/// Nodes are the roots of `L_n`, found by Newton iteration from the usual
/// asymptotic initial guesses. Weights use `wᵢ = 1/(xᵢ·L_n'(xᵢ)²)` evaluated
/// in log space. For `n` near 200 the weight of the outermost node
/// is below the smallest representable double and comes out as zero.
pub fn gauss_laguerre(n: usize) -> Result<QuadratureRule> {
    if !(1..=MAX_GAUSS_LAGUERRE_ORDER).contains(&n) {
        return Err(Error::invalid(
            "n",
            format!("Gauss-Laguerre order must lie in 1..={MAX_GAUSS_LAGUERRE_ORDER}, got {n}"),
        ));
    }
    let nf = n as f64;
    let mut nodes: Vec<f64> = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut z = 0.0;
    for i in 0..n {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2])
            }
        };
        let mut step = f64::INFINITY;
        for _ in 0..100 {
            let l = scaled_laguerre(n, z);
            step = l.value / l.derivative;
            z -= step;
            if step.abs() <= 1e-15 * z.abs() {
                break;
            }
        }
        // rounding in L_n limits the last step to a few ulp of the node
        if !(step.abs() <= 1e-11 * z.abs()) || !z.is_finite() {
            return Err(Error::NoConvergence(format!(
                "Newton iteration for Gauss-Laguerre node {i} of {n}"
            )));
        }
        let l = scaled_laguerre(n, z);
        let ln_w = -z.ln() - 2.0 * (l.derivative.abs().ln() + l.ln_scale);
        nodes.push(z);
        weights.push(ln_w.exp());
    }
    if nodes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::NoConvergence(format!(
            "Gauss-Laguerre nodes of order {n} (not strictly increasing)"
        )));
    }
    Ok(QuadratureRule { nodes, weights })
}
