//! Number-state wavefunctions in the quadrature representation.
//!
//! With `a = X + iY` the number state `|n⟩` has the position wavefunction
//!
//! ```text
//! ψ_n(x) = √(2 / (2ⁿ n! √(2π))) H_n(√2 x) e^{-x²}
//! ```
//!
//! which equals `2^{1/4} h_n(√2 x)` where `h_n` are the normalized Hermite
//! functions. Those obey a three-term recurrence with bounded coefficients,
//! so no factorial or Hermite polynomial is ever formed. The Gaussian factor
//! is carried separately in the log domain and the running values are
//! rescaled whenever they grow large, so neither overflow nor premature
//! underflow can occur for any supported order.

use crate::error::{Error, Result};

/// Largest Fock index accepted by [`hermite_psi`] unless configured otherwise.
pub const DEFAULT_MAX_ORDER: usize = 512;

const RESCALE_ABOVE: f64 = 1e150;
const RESCALE_BY: f64 = 1e-150;
// ln(1e150)
const LN_RESCALE: f64 = 345.387_763_949_107_0;

/// π^{-1/4}
const PI_POW_NEG_QUARTER: f64 = 0.751_125_544_464_942_5;
/// 2^{1/4}
const TWO_POW_QUARTER: f64 = 1.189_207_115_002_721;

/// Evaluates number-state wavefunctions up to a fixed maximum order.
#[derive(Debug, Clone, Copy)]
pub struct HermiteEvaluator {
    max_order: usize,
}

impl Default for HermiteEvaluator {
    fn default() -> Self {
        Self {
            max_order: DEFAULT_MAX_ORDER,
        }
    }
}

impl HermiteEvaluator {
    pub fn with_max_order(max_order: usize) -> Self {
        Self { max_order }
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.max_order {
            return Err(Error::Capacity(format!(
                "Fock index {n} exceeds configured maximum {}",
                self.max_order
            )));
        }
        Ok(())
    }

    /// `ψ_n(x)` for a single order.
    pub fn psi(&self, n: usize, x: f64) -> Result<f64> {
        self.check(n)?;
        Ok(psi_unchecked(n, x))
    }

    /// `ψ_0(x) ..= ψ_n(x)`.
    pub fn psi_all(&self, n: usize, x: f64) -> Result<Vec<f64>> {
        self.check(n)?;
        let mut out = vec![0.0; n + 1];
        psi_all_into(x, &mut out);
        Ok(out)
    }

    /// Normalized Hermite function `h_n(q)`.
    pub fn hermite_function(&self, n: usize, q: f64) -> Result<f64> {
        self.check(n)?;
        Ok(hermite_function_unchecked(n, q))
    }
}

/// `ψ_n(x)` with the default maximum order.
pub fn hermite_psi(n: usize, x: f64) -> Result<f64> {
    HermiteEvaluator::default().psi(n, x)
}

/// Normalized Hermite function `h_n(q) = H_n(q) e^{-q²/2} / √(2ⁿ n! √π)`.
pub fn hermite_function(n: usize, q: f64) -> Result<f64> {
    HermiteEvaluator::default().hermite_function(n, q)
}

pub(crate) fn psi_unchecked(n: usize, x: f64) -> f64 {
    TWO_POW_QUARTER * hermite_function_unchecked(n, std::f64::consts::SQRT_2 * x)
}

pub(crate) fn hermite_function_unchecked(n: usize, q: f64) -> f64 {
    let mut log_scale = -0.5 * q * q;
    let mut prev = 0.0;
    let mut cur = PI_POW_NEG_QUARTER;
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * q * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            cur *= RESCALE_BY;
            prev *= RESCALE_BY;
            log_scale += LN_RESCALE;
        }
    }
    finish(cur, log_scale)
}

/// Fills `out[k] = ψ_k(x)` for `k < out.len()`.
pub(crate) fn psi_all_into(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    let q = std::f64::consts::SQRT_2 * x;
    let mut log_scale = -0.5 * q * q;
    let mut factor = log_scale.exp();
    let mut prev = 0.0;
    let mut cur = PI_POW_NEG_QUARTER;
    out[0] = TWO_POW_QUARTER * finish_with(cur, factor, log_scale);
    for k in 0..out.len() - 1 {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * q * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            cur *= RESCALE_BY;
            prev *= RESCALE_BY;
            log_scale += LN_RESCALE;
            factor = log_scale.exp();
        }
        out[k + 1] = TWO_POW_QUARTER * finish_with(cur, factor, log_scale);
    }
}

#[inline]
fn finish(value: f64, log_scale: f64) -> f64 {
    finish_with(value, log_scale.exp(), log_scale)
}

#[inline]
fn finish_with(value: f64, factor: f64, log_scale: f64) -> f64 {
    if value == 0.0 {
        return 0.0;
    }
    if factor == 0.0 || !factor.is_finite() {
        // exp(log_scale) alone under/overflows; fold the mantissa in first.
        let mag = value.abs().ln() + log_scale;
        return value.signum() * mag.exp();
    }
    value * factor
}
