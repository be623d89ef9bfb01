//! Relative entropy of coherence with the `ln σ` divergence removed:
//! `S_reg = h(p) − S_vN(ρ)`, where `h` is the differential entropy of the
//! quadrature density. Values are offset-relative and may be negative.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::NumericOptions;
use crate::error::{Error, Result};
use crate::numerics::{
    build_grid, default_smooth_grid, differential_entropy, integrate_2d, spectrum_entropy, von_neumann_entropy,
    Scheme,
};
use crate::states::{fock_truncate_thermal, quadrature_pdf, StateModel, TwoModePure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyMethod {
    /// Closed forms where available, numerics otherwise.
    Auto,
    /// Always integrate the quadrature density and diagonalize ρ.
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub value: f64,
    /// Whether a closed form was used.
    pub analytic: bool,
}

impl EntropyReport {
    pub fn method_name(&self) -> &'static str {
        if self.analytic {
            "analytic"
        } else {
            "numeric"
        }
    }
}

/// `½[1 + ln(2π v)]`.
fn gaussian_entropy(variance: f64) -> f64 {
    0.5 * (1.0 + (2.0 * PI * variance).ln())
}

fn thermal_von_neumann(n: f64) -> f64 {
    if n == 0.0 {
        0.0
    } else {
        (1.0 + n) * (1.0 + n).ln() - n * n.ln()
    }
}

pub fn relative_entropy_coherence(
    state: &StateModel,
    opts: &NumericOptions,
    method: EntropyMethod,
) -> Result<EntropyReport> {
    state.validate()?;
    if method == EntropyMethod::Auto {
        if let Some(v) = analytic(state)? {
            return Ok(EntropyReport { value: v, analytic: true });
        }
    }
    Ok(EntropyReport {
        value: numeric(state, opts)?,
        analytic: false,
    })
}

fn analytic(state: &StateModel) -> Result<Option<f64>> {
    Ok(match state {
        StateModel::GaussianPure(g) => Some(gaussian_entropy(g.delta_x() * g.delta_x())),
        StateModel::Thermal(t) => {
            Some(gaussian_entropy(t.quadrature_variance()) - thermal_von_neumann(t.n_mean()))
        }
        StateModel::Rescaled { inner, lambda } => analytic(inner)?.map(|v| v + lambda.ln()),
        StateModel::Displaced { inner, .. } => analytic(inner)?,
        StateModel::Product(p) => {
            let mut total = 0.0;
            for f in p.factors() {
                match analytic(f)? {
                    Some(v) => total += v,
                    None => return Ok(None),
                }
            }
            Some(total)
        }
        _ => None,
    })
}

fn numeric(state: &StateModel, opts: &NumericOptions) -> Result<f64> {
    match state {
        StateModel::Product(p) => p.factors().iter().map(|f| numeric(f, opts)).sum(),
        StateModel::TwoModeRemapped(t) => two_mode_entropy(t),
        _ => {
            let svn = von_neumann(state, opts)?;
            let grid = default_smooth_grid(state.support()?)?;
            // Surface evaluation errors before integrating.
            quadrature_pdf(state, grid.nodes()[0])?;
            let h = differential_entropy(|x| quadrature_pdf(state, x).unwrap_or(f64::NAN), &grid)?;
            Ok(h - svn)
        }
    }
}

/// Spectrum entropy, which unitary wrappers leave unchanged.
fn von_neumann(state: &StateModel, opts: &NumericOptions) -> Result<f64> {
    if state.is_pure() {
        return Ok(0.0);
    }
    match state.unwrap_unitaries() {
        StateModel::Thermal(t) => {
            let rho = fock_truncate_thermal(t, opts.fock_dim)?;
            let p: Vec<f64> = (0..rho.dim()).map(|i| rho.matrix()[(i, i)].re).collect();
            Ok(spectrum_entropy(&p))
        }
        StateModel::FockDensityMatrix(m) => von_neumann_entropy(m.matrix()),
        other => Err(Error::Unsupported(format!(
            "no Fock-basis spectrum available for a {} state",
            other.family()
        ))),
    }
}

fn two_mode_entropy(t: &TwoModePure) -> Result<f64> {
    let [d1, d2] = t.support();
    let g1 = build_grid(d1, 64, 24, Scheme::CompositeGaussLegendre)?;
    let g2 = build_grid(d2, 64, 24, Scheme::CompositeGaussLegendre)?;
    t.amplitude(g1.nodes()[0], g2.nodes()[0])?;
    let r = integrate_2d(
        |x, y| {
            let p = t.amplitude(x, y).map_or(f64::NAN, |a| a.norm_sqr());
            if p < 1e-300 {
                0.0
            } else {
                -p * p.ln()
            }
        },
        &g1,
        &g2,
    )?;
    Ok(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o() -> NumericOptions {
        NumericOptions::default()
    }

    #[test]
    fn closed_forms() {
        let v = relative_entropy_coherence(&StateModel::vacuum(), &o(), EntropyMethod::Auto).unwrap();
        assert!(v.analytic);
        assert!((v.value - 0.725_791_352_644_727_4).abs() < 1e-15);
        let t = relative_entropy_coherence(&StateModel::thermal(1.0).unwrap(), &o(), EntropyMethod::Auto).unwrap();
        // −2 ln 2 + ½[1 + ln(3π/2)]
        assert!((t.value - (-0.111_196_864_141_108_3)).abs() < 1e-12, "{}", t.value);
    }

    #[test]
    fn numeric_agrees_with_closed_forms() {
        for s in [
            StateModel::vacuum(),
            StateModel::thermal(0.5).unwrap(),
            StateModel::thermal(1.0).unwrap(),
        ] {
            let a = relative_entropy_coherence(&s, &o(), EntropyMethod::Auto).unwrap().value;
            let n = relative_entropy_coherence(&s, &o().with_fock_dim(80), EntropyMethod::Numeric).unwrap().value;
            assert!((a - n).abs() < 1e-6, "{a} vs {n}");
        }
    }

    #[test]
    fn squeezing_shift_numeric() {
        let s = StateModel::Rescaled {
            inner: Box::new(StateModel::thermal(1.0).unwrap()),
            lambda: 2.0,
        };
        let a = relative_entropy_coherence(&StateModel::thermal(1.0).unwrap(), &o(), EntropyMethod::Numeric).unwrap();
        let b = relative_entropy_coherence(&s, &o(), EntropyMethod::Numeric).unwrap();
        assert!((b.value - a.value - 2f64.ln()).abs() < 1e-6);
    }

    #[test]
    fn two_mode_product_matches_sum() {
        let t = TwoModePure::product(StateModel::vacuum(), StateModel::number(1)).unwrap();
        let h = two_mode_entropy(&t).unwrap();
        let v = relative_entropy_coherence(&StateModel::vacuum(), &o(), EntropyMethod::Auto).unwrap().value;
        let f = relative_entropy_coherence(&StateModel::number(1), &o(), EntropyMethod::Auto).unwrap().value;
        assert!((h - v - f).abs() < 1e-6, "{h} vs {}", v + f);
    }

    #[test]
    fn smeared_states_have_no_spectrum() {
        let s: StateModel = crate::states::SmearedIncoherentState::new(vec![-1.0, 1.0], vec![0.5, 0.5], 0.1)
            .unwrap()
            .into();
        assert!(matches!(
            relative_entropy_coherence(&s, &o(), EntropyMethod::Auto),
            Err(Error::Unsupported(_))
        ));
    }
}
