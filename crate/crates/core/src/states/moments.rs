use nalgebra::DMatrix;
use num_complex::Complex64;

use super::StateModel;
use crate::error::{Error, Result};

/// First and second quadrature moments of a single-mode state.
///
/// `xx`, `yy` are raw moments `⟨X²⟩`, `⟨Y²⟩`; `xy` is the symmetrized
/// `⟨(XY + YX)/2⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean_x: f64,
    pub mean_y: f64,
    pub xx: f64,
    pub yy: f64,
    pub xy: f64,
}

impl Moments {
    /// `⟨a†a⟩ = ⟨X²⟩ + ⟨Y²⟩ − ½`.
    pub fn photon_number(&self) -> f64 {
        self.xx + self.yy - 0.5
    }

    pub fn variance_x(&self) -> f64 {
        self.xx - self.mean_x * self.mean_x
    }

    pub fn variance_y(&self) -> f64 {
        self.yy - self.mean_y * self.mean_y
    }

    fn rescaled(&self, lambda: f64) -> Self {
        Self {
            mean_x: self.mean_x * lambda,
            mean_y: self.mean_y / lambda,
            xx: self.xx * lambda * lambda,
            yy: self.yy / (lambda * lambda),
            xy: self.xy,
        }
    }

    fn displaced(&self, x0: f64, y0: f64) -> Self {
        Self {
            mean_x: self.mean_x + x0,
            mean_y: self.mean_y + y0,
            xx: self.xx + 2.0 * x0 * self.mean_x + x0 * x0,
            yy: self.yy + 2.0 * y0 * self.mean_y + y0 * y0,
            xy: self.xy + x0 * self.mean_y + y0 * self.mean_x + x0 * y0,
        }
    }

    /// `X' = cX + sY`, `Y' = −sX + cY`.
    fn rotated(&self, tau: f64) -> Self {
        let (s, c) = tau.sin_cos();
        Self {
            mean_x: c * self.mean_x + s * self.mean_y,
            mean_y: -s * self.mean_x + c * self.mean_y,
            xx: c * c * self.xx + s * s * self.yy + 2.0 * c * s * self.xy,
            yy: s * s * self.xx + c * c * self.yy - 2.0 * c * s * self.xy,
            xy: c * s * (self.yy - self.xx) + (c * c - s * s) * self.xy,
        }
    }
}

/// Moments from `⟨a⟩`, `⟨a²⟩` and `⟨a†a⟩`.
pub(crate) fn from_ladder(a: Complex64, a2: Complex64, n: f64) -> Moments {
    Moments {
        mean_x: a.re,
        mean_y: a.im,
        xx: 0.25 * (2.0 * a2.re + 2.0 * n + 1.0),
        yy: 0.25 * (-2.0 * a2.re + 2.0 * n + 1.0),
        xy: 0.5 * a2.im,
    }
}

fn fock_moments(rho: &DMatrix<Complex64>) -> Moments {
    let dim = rho.nrows();
    let mut a = Complex64::new(0.0, 0.0);
    let mut a2 = Complex64::new(0.0, 0.0);
    let mut n = 0.0;
    for m in 0..dim {
        let mf = m as f64;
        n += mf * rho[(m, m)].re;
        if m >= 1 {
            a += rho[(m, m - 1)] * mf.sqrt();
        }
        if m >= 2 {
            a2 += rho[(m, m - 2)] * (mf * (mf - 1.0)).sqrt();
        }
    }
    from_ladder(a, a2, n)
}

fn fock_vector_moments(c: &[Complex64]) -> Moments {
    let mut a = Complex64::new(0.0, 0.0);
    let mut a2 = Complex64::new(0.0, 0.0);
    let mut n = 0.0;
    for m in 0..c.len() {
        let mf = m as f64;
        n += mf * c[m].norm_sqr();
        // ρ_{m,m−k} = c_m conj(c_{m−k})
        if m >= 1 {
            a += c[m] * c[m - 1].conj() * mf.sqrt();
        }
        if m >= 2 {
            a2 += c[m] * c[m - 2].conj() * (mf * (mf - 1.0)).sqrt();
        }
    }
    from_ladder(a, a2, n)
}

impl StateModel {
    /// Quadrature moments of a single-mode state.
    pub fn moments(&self) -> Result<Moments> {
        Ok(match self {
            StateModel::GaussianPure(g) => Moments {
                mean_x: g.x_mean,
                mean_y: g.y_mean,
                xx: g.delta_x * g.delta_x + g.x_mean * g.x_mean,
                yy: g.delta_y * g.delta_y + g.y_mean * g.y_mean,
                xy: g.xy_correlation + g.x_mean * g.y_mean,
            },
            StateModel::Thermal(t) => {
                let v = t.quadrature_variance();
                Moments {
                    mean_x: 0.0,
                    mean_y: 0.0,
                    xx: v,
                    yy: v,
                    xy: 0.0,
                }
            }
            StateModel::FockVector(v) => fock_vector_moments(&v.coefficients),
            StateModel::FockDensityMatrix(m) => fock_moments(&m.entries),
            StateModel::Rescaled { inner, lambda } => inner.moments()?.rescaled(*lambda),
            StateModel::Displaced { inner, x0, y0 } => inner.moments()?.displaced(*x0, *y0),
            StateModel::Rotated { inner, tau } => inner.moments()?.rotated(*tau),
            StateModel::SmearedIncoherent(s) => s.moments(),
            StateModel::Product(_) | StateModel::TwoModeRemapped(_) => {
                return Err(Error::Unsupported(format!(
                    "single-mode moments requested for a {}-mode state",
                    self.mode_count()
                )))
            }
        })
    }
}

/// Total mean photon number, summed over modes.
pub fn mean_photon_number(state: &StateModel) -> Result<f64> {
    match state {
        StateModel::Thermal(t) => Ok(t.n_mean),
        StateModel::Product(p) => p.factors.iter().map(mean_photon_number).sum(),
        StateModel::TwoModeRemapped(t) => t.mean_photon_number(),
        StateModel::Rotated { inner, .. } => mean_photon_number(inner),
        _ => Ok(state.moments()?.photon_number()),
    }
}
