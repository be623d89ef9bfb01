use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Tolerance on `Δ²X Δ²Y − cov² = 1/16`.
const PURITY_TOL: f64 = 1e-10;

/// Pure Gaussian state described by its quadrature means and covariance.
///
/// Uncorrelated states have the minimum-uncertainty product `ΔX ΔY = 1/4`.
/// States produced by rotating a squeezed state acquire a nonzero
/// `xy_correlation` (the symmetrized covariance of `X` and `Y`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPureState {
    pub(crate) x_mean: f64,
    pub(crate) y_mean: f64,
    pub(crate) delta_x: f64,
    pub(crate) delta_y: f64,
    pub(crate) xy_correlation: f64,
}

impl GaussianPureState {
    pub fn new(x_mean: f64, y_mean: f64, delta_x: f64, delta_y: f64, xy_correlation: f64) -> Result<Self> {
        let all = [x_mean, y_mean, delta_x, delta_y, xy_correlation];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Contract("Gaussian parameters must be finite".into()));
        }
        if delta_x <= 0.0 || delta_y <= 0.0 {
            return Err(Error::Contract(format!(
                "uncertainties must be positive (ΔX = {delta_x}, ΔY = {delta_y})"
            )));
        }
        let det = delta_x * delta_x * delta_y * delta_y - xy_correlation * xy_correlation;
        if (det - 1.0 / 16.0).abs() > PURITY_TOL {
            return Err(Error::Contract(format!(
                "covariance determinant {det} differs from 1/16; state is not pure"
            )));
        }
        Ok(Self {
            x_mean,
            y_mean,
            delta_x,
            delta_y,
            xy_correlation,
        })
    }

    /// Uncorrelated minimum-uncertainty state, `ΔY = 1/(4ΔX)`.
    pub fn minimum_uncertainty(x_mean: f64, y_mean: f64, delta_x: f64) -> Result<Self> {
        if !(delta_x > 0.0) {
            return Err(Error::Contract(format!("ΔX must be positive, got {delta_x}")));
        }
        Self::new(x_mean, y_mean, delta_x, 0.25 / delta_x, 0.0)
    }

    pub fn vacuum() -> Self {
        Self::coherent(0.0, 0.0)
    }

    pub fn coherent(x_mean: f64, y_mean: f64) -> Self {
        Self {
            x_mean,
            y_mean,
            delta_x: 0.5,
            delta_y: 0.5,
            xy_correlation: 0.0,
        }
    }

    /// Built from means and a covariance matrix, re-deriving the
    /// uncertainties. The determinant is not re-checked here; callers pass
    /// covariances obtained by symplectic maps of a valid state.
    pub(crate) fn from_covariance(x_mean: f64, y_mean: f64, vx: f64, vy: f64, cov: f64) -> Self {
        Self {
            x_mean,
            y_mean,
            delta_x: vx.sqrt(),
            delta_y: vy.sqrt(),
            xy_correlation: cov,
        }
    }

    pub fn x_mean(&self) -> f64 {
        self.x_mean
    }
    pub fn y_mean(&self) -> f64 {
        self.y_mean
    }
    pub fn delta_x(&self) -> f64 {
        self.delta_x
    }
    pub fn delta_y(&self) -> f64 {
        self.delta_y
    }
    pub fn xy_correlation(&self) -> f64 {
        self.xy_correlation
    }

    pub fn is_coherent(&self) -> bool {
        (self.delta_x - 0.5).abs() < 1e-10
            && (self.delta_y - 0.5).abs() < 1e-10
            && self.xy_correlation.abs() < 1e-10
    }

    /// `ψ(x) = (2πΔ²X)^{-1/4} exp[2iȲx − A(x − X̄)²]` with
    /// `A = 1/(4Δ²X) − i cov/Δ²X`, so that `|ψ|²` has variance `Δ²X`.
    pub fn wavefunction(&self, x: f64) -> Complex64 {
        let vx = self.delta_x * self.delta_x;
        let norm = (2.0 * PI * vx).powf(-0.25);
        let d = x - self.x_mean;
        let re = -d * d / (4.0 * vx);
        let im = 2.0 * self.y_mean * x + self.xy_correlation / vx * d * d;
        Complex64::from_polar(norm * re.exp(), im)
    }

    /// Marginal density of `X`.
    pub fn pdf(&self, x: f64) -> f64 {
        let vx = self.delta_x * self.delta_x;
        let d = x - self.x_mean;
        (-d * d / (2.0 * vx)).exp() / (2.0 * PI * vx).sqrt()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.x_mean * self.x_mean
            + self.y_mean * self.y_mean
            + self.delta_x * self.delta_x
            + self.delta_y * self.delta_y
            - 0.5
    }
}

/// The X-antisqueezed vacuum with mean photon number `n_mean`:
/// `Δ²X = [(n̄ + ½) + √((n̄ + ½)² − ¼)] / 2`.
pub fn squeezed_vacuum_for_energy(n_mean: f64) -> Result<GaussianPureState> {
    if !(n_mean >= 0.0) || !n_mean.is_finite() {
        return Err(Error::Argument(format!("mean photon number must be ≥ 0, got {n_mean}")));
    }
    let e = n_mean + 0.5;
    let vx = 0.5 * (e + (e * e - 0.25).max(0.0).sqrt());
    GaussianPureState::minimum_uncertainty(0.0, 0.0, vx.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn purity_enforced() {
        assert!(GaussianPureState::new(0.0, 0.0, 1.0, 0.25, 0.0).is_ok());
        assert!(GaussianPureState::new(0.0, 0.0, 1.0, 0.5, 0.0).is_err());
        assert!(GaussianPureState::new(0.0, 0.0, -0.5, -0.5, 0.0).is_err());
        // correlated: Δ²X Δ²Y − c² = 1/16
        let c: f64 = 0.3;
        let vy = (1.0 / 16.0 + c * c) / 1.0;
        assert!(GaussianPureState::new(0.0, 0.0, 1.0, vy.sqrt(), c).is_ok());
    }

    #[test]
    fn vacuum_peak() {
        let v = GaussianPureState::vacuum();
        assert!((v.wavefunction(0.0).re - 0.893_243_841_738_002_3).abs() < 1e-15);
        let d = GaussianPureState::minimum_uncertainty(1.0, 0.0, 0.5).unwrap();
        assert!((d.wavefunction(1.0).norm() - 0.893_243_841_738_002_3).abs() < 1e-15);
    }

    #[test]
    fn energy_matched_squeezed_vacuum() {
        let g = squeezed_vacuum_for_energy(0.0).unwrap();
        assert!((g.delta_x() - 0.5).abs() < 1e-15);
        let g = squeezed_vacuum_for_energy(1.0).unwrap();
        assert!((g.delta_x() - (1.0 + 2f64.sqrt()) / 2.0).abs() < 1e-12);
        for &n in &[0.0, 0.1, 1.0, 3.7, 20.0, 400.0] {
            let g = squeezed_vacuum_for_energy(n).unwrap();
            assert!((g.mean_photon_number() - n).abs() < 1e-10 * (1.0 + n));
        }
        assert!(squeezed_vacuum_for_energy(-1.0).is_err());
    }

    #[test]
    fn squeezed_vacuum_energy() {
        let r = (1.0 + 2f64.sqrt()).ln();
        let g = GaussianPureState::minimum_uncertainty(0.0, 0.0, r.exp() / 2.0).unwrap();
        assert!((g.mean_photon_number() - 1.0).abs() < 1e-10);
    }
}
