//! Exact maps on [`StateModel`]: free evolution, displacement, squeezing and
//! the two-mode remaps.

mod two_mode;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measures::{relative_entropy_coherence, EntropyMethod, NumericOptions};
use crate::states::{
    project_to_fock, FockDensityMatrix, FockVector, GaussianPureState, ProductState, StateModel,
    DEFAULT_FOCK_DIM, TWO_SQRT_TWO_PI,
};

pub use crate::measures::coherence_two_mode_pure;
pub use two_mode::{beam_split, remap_two_mode, two_mode_squeeze};

fn phase(tau: f64, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, -tau * n as f64)
}

fn rotate_gaussian(g: &GaussianPureState, tau: f64) -> GaussianPureState {
    let (s, c) = tau.sin_cos();
    let vx = g.delta_x() * g.delta_x();
    let vy = g.delta_y() * g.delta_y();
    let cov = g.xy_correlation();
    GaussianPureState::from_covariance(
        c * g.x_mean() + s * g.y_mean(),
        -s * g.x_mean() + c * g.y_mean(),
        c * c * vx + s * s * vy + 2.0 * c * s * cov,
        s * s * vx + c * c * vy - 2.0 * c * s * cov,
        c * s * (vy - vx) + (c * c - s * s) * cov,
    )
}

pub(crate) fn rotate_fock_vector(v: &FockVector, tau: f64) -> Result<FockVector> {
    FockVector::new(
        v.coefficients()
            .iter()
            .enumerate()
            .map(|(n, c)| c * phase(tau, n))
            .collect(),
    )
}

fn rotate_fock_matrix(m: &FockDensityMatrix, tau: f64) -> FockDensityMatrix {
    let d = m.dim();
    let rho = m.matrix();
    FockDensityMatrix::from_unchecked(DMatrix::from_fn(d, d, |i, j| {
        rho[(i, j)] * Complex64::from_polar(1.0, -tau * (i as f64 - j as f64))
    }))
}

/// Free evolution `e^{−iτ a†a}`, so that `X → cos τ X + sin τ Y`.
///
/// States without a closed-form image are projected onto the number basis;
/// when that projection is not accurate enough a symbolic `Rotated` wrapper
/// is returned instead.
pub fn rotate(state: &StateModel, tau: f64) -> Result<StateModel> {
    state.validate()?;
    if !tau.is_finite() {
        return Err(Error::Argument(format!("rotation angle must be finite, got {tau}")));
    }
    if tau == 0.0 {
        return Ok(state.clone());
    }
    Ok(match state {
        StateModel::GaussianPure(g) => rotate_gaussian(g, tau).into(),
        StateModel::Thermal(_) => state.clone(),
        StateModel::FockVector(v) => rotate_fock_vector(v, tau)?.into(),
        StateModel::FockDensityMatrix(m) => rotate_fock_matrix(m, tau).into(),
        StateModel::Displaced { inner, x0, y0 } => {
            let (s, c) = tau.sin_cos();
            StateModel::Displaced {
                inner: Box::new(rotate(inner, tau)?),
                x0: c * x0 + s * y0,
                y0: -s * x0 + c * y0,
            }
        }
        StateModel::Product(p) => {
            let factors = p.factors().iter().map(|f| rotate(f, tau)).collect::<Result<Vec<_>>>()?;
            ProductState::new(factors)?.into()
        }
        StateModel::TwoModeRemapped(t) => match two_mode::rotate_two_mode(t, tau)? {
            Some(r) => r.into(),
            None => wrap_rotation(state, tau),
        },
        StateModel::Rotated { inner, tau: t0 } => {
            let total = t0 + tau;
            if total.rem_euclid(2.0 * std::f64::consts::PI) == 0.0 {
                (**inner).clone()
            } else {
                wrap_rotation(inner, total)
            }
        }
        StateModel::Rescaled { .. } | StateModel::SmearedIncoherent(_) => {
            match project_to_fock(state, DEFAULT_FOCK_DIM) {
                Ok(p) => rotate(&p, tau)?,
                Err(Error::Capacity(_)) => wrap_rotation(state, tau),
                Err(e) => return Err(e),
            }
        }
    })
}

fn wrap_rotation(state: &StateModel, tau: f64) -> StateModel {
    StateModel::Rotated {
        inner: Box::new(state.clone()),
        tau,
    }
}

/// `(τ, 2√(2π) √(cos²τ Δ²X + sin²τ Δ²Y))` for an uncorrelated Gaussian.
pub fn rotation_coherence_curve(g: &GaussianPureState, taus: &[f64]) -> Result<Vec<(f64, f64)>> {
    if g.xy_correlation().abs() > 1e-12 {
        return Err(Error::Contract(format!(
            "rotation curve needs an uncorrelated state, got cov(X,Y) = {}",
            g.xy_correlation()
        )));
    }
    let vx = g.delta_x() * g.delta_x();
    let vy = g.delta_y() * g.delta_y();
    Ok(taus
        .iter()
        .map(|&t| {
            let (s, c) = t.sin_cos();
            (t, TWO_SQRT_TWO_PI * (c * c * vx + s * s * vy).sqrt())
        })
        .collect())
}

/// `D†XD = X + x0`, `D†YD = Y + y0`.
pub fn displace(state: &StateModel, x0: f64, y0: f64) -> Result<StateModel> {
    state.validate()?;
    if !x0.is_finite() || !y0.is_finite() {
        return Err(Error::Argument("displacement must be finite".into()));
    }
    if state.mode_count() != 1 {
        return Err(Error::Unsupported(format!(
            "displacement of a {}-mode state",
            state.mode_count()
        )));
    }
    if x0 == 0.0 && y0 == 0.0 {
        return Ok(state.clone());
    }
    Ok(match state {
        StateModel::GaussianPure(g) => GaussianPureState::from_covariance(
            g.x_mean() + x0,
            g.y_mean() + y0,
            g.delta_x() * g.delta_x(),
            g.delta_y() * g.delta_y(),
            g.xy_correlation(),
        )
        .into(),
        StateModel::Displaced { inner, x0: a, y0: b } => StateModel::Displaced {
            inner: inner.clone(),
            x0: a + x0,
            y0: b + y0,
        },
        other => StateModel::Displaced {
            inner: Box::new(other.clone()),
            x0,
            y0,
        },
    })
}

/// `T|x⟩ = √λ |λx⟩`: `X → λX`, `Y → Y/λ`.
pub fn squeeze(state: &StateModel, lambda: f64) -> Result<StateModel> {
    state.validate()?;
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Argument(format!("squeeze factor must be positive, got {lambda}")));
    }
    if state.mode_count() != 1 {
        return Err(Error::Unsupported(format!(
            "single-mode squeezing of a {}-mode state",
            state.mode_count()
        )));
    }
    if lambda == 1.0 {
        return Ok(state.clone());
    }
    Ok(match state {
        StateModel::GaussianPure(g) => GaussianPureState::from_covariance(
            lambda * g.x_mean(),
            g.y_mean() / lambda,
            (lambda * g.delta_x()).powi(2),
            (g.delta_y() / lambda).powi(2),
            g.xy_correlation(),
        )
        .into(),
        StateModel::Rescaled { inner, lambda: mu } => {
            let total = lambda * mu;
            if total == 1.0 {
                (**inner).clone()
            } else {
                StateModel::Rescaled {
                    inner: inner.clone(),
                    lambda: total,
                }
            }
        }
        StateModel::Displaced { inner, x0, y0 } => StateModel::Displaced {
            inner: Box::new(squeeze(inner, lambda)?),
            x0: lambda * x0,
            y0: y0 / lambda,
        },
        other => StateModel::Rescaled {
            inner: Box::new(other.clone()),
            lambda,
        },
    })
}

/// `S_reg(squeeze(state, λ)) − S_reg(state)`, which should equal `ln λ`.
pub fn squeeze_entropy_shift(
    state: &StateModel,
    lambda: f64,
    opts: &NumericOptions,
    method: EntropyMethod,
) -> Result<f64> {
    let squeezed = squeeze(state, lambda)?;
    let after = relative_entropy_coherence(&squeezed, opts, method)?.value;
    let before = relative_entropy_coherence(state, opts, method)?.value;
    Ok(after - before)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{E, FRAC_PI_2, FRAC_PI_4, PI};

    use super::*;
    use crate::measures::coherence_l1;
    use crate::states::{kernel, mean_photon_number};

    fn c(s: &StateModel) -> f64 {
        coherence_l1(s, &NumericOptions::default()).unwrap().value
    }

    fn squeezed_gaussian() -> GaussianPureState {
        GaussianPureState::new(0.0, 0.0, 1.0, 0.25, 0.0).unwrap()
    }

    #[test]
    fn rotation_of_gaussian_swaps_uncertainties() {
        let g: StateModel = squeezed_gaussian().into();
        let r = rotate(&g, FRAC_PI_2).unwrap();
        assert!((c(&r) - TWO_SQRT_TWO_PI * 0.25).abs() < 1e-12);
        let q = rotate(&g, FRAC_PI_4).unwrap();
        assert!((c(&q) - 3.654_007_221_908_11).abs() < 1e-12);
        assert_eq!(rotate(&g, 0.0).unwrap(), g);
    }

    #[test]
    fn rotation_curve() {
        let coh = rotation_coherence_curve(&GaussianPureState::vacuum(), &[0.0, 0.7, 2.0]).unwrap();
        for (_, v) in coh {
            assert!((v - (2.0 * PI).sqrt()).abs() < 1e-14);
        }
        let g = squeezed_gaussian();
        let taus: Vec<f64> = (0..16).map(|k| k as f64 * PI / 15.0).collect();
        for (t, v) in rotation_coherence_curve(&g, &taus).unwrap() {
            let r = rotate(&g.into(), t).unwrap();
            assert!((c(&r) - v).abs() < 1e-8);
        }
        let corr = match rotate(&g.into(), 0.3).unwrap() {
            StateModel::GaussianPure(g) => g,
            _ => unreachable!(),
        };
        assert!(matches!(rotation_coherence_curve(&corr, &[0.0]), Err(Error::Contract(_))));
    }

    #[test]
    fn rotation_keeps_photon_number() {
        let states = [
            StateModel::from(GaussianPureState::new(1.0, -0.5, 0.8, (0.0725f64 / 0.64).sqrt(), 0.1).unwrap()),
            StateModel::thermal(0.7).unwrap(),
            StateModel::number(3),
            FockDensityMatrix::diagonal(&[0.2, 0.5, 0.3]).unwrap().into(),
            displace(&StateModel::number(1), 0.4, -1.2).unwrap(),
            squeeze(&StateModel::number(1), 1.5).unwrap(),
        ];
        for s in states {
            let r = rotate(&s, 0.9).unwrap();
            let a = mean_photon_number(&s).unwrap();
            let b = mean_photon_number(&r).unwrap();
            assert!((a - b).abs() < 1e-8, "{} {a} {b}", s.family());
        }
    }

    #[test]
    fn stationary_states() {
        let t = StateModel::thermal(1.0).unwrap();
        assert_eq!(rotate(&t, 1.3).unwrap(), t);
        let m: StateModel = FockDensityMatrix::diagonal(&[0.5, 0.5]).unwrap().into();
        let r = rotate(&m, 1.3).unwrap();
        assert_eq!(kernel(&m, 0.3, -0.7).unwrap(), kernel(&r, 0.3, -0.7).unwrap());
    }

    #[test]
    fn displacement() {
        let v = displace(&StateModel::vacuum(), 3.0, 0.0).unwrap();
        match &v {
            StateModel::GaussianPure(g) => assert!(g.is_coherent() && g.x_mean() == 3.0),
            _ => panic!("expected a Gaussian"),
        }
        assert!((c(&v) - (2.0 * PI).sqrt()).abs() < 1e-14);
        let f = StateModel::number(1);
        assert_eq!(displace(&f, 0.0, 0.0).unwrap(), f);
        let d = displace(&displace(&f, 1.0, 0.5).unwrap(), 1.0, 0.5).unwrap();
        assert!(matches!(d, StateModel::Displaced { x0, y0, .. } if x0 == 2.0 && y0 == 1.0));
    }

    #[test]
    fn squeezing() {
        let v = squeeze(&StateModel::vacuum(), 2.0).unwrap();
        assert!((c(&v) - TWO_SQRT_TWO_PI).abs() < 1e-14);
        assert!(matches!(squeeze(&v, 0.0), Err(Error::Argument(_))));
        assert!(matches!(squeeze(&v, -1.0), Err(Error::Argument(_))));
        let f = StateModel::number(2);
        assert_eq!(squeeze(&f, 1.0).unwrap(), f);
        let a = squeeze(&squeeze(&f, 1.5).unwrap(), 0.4).unwrap();
        let b = squeeze(&f, 0.6).unwrap();
        for (x, y) in [(0.1, 0.2), (-1.0, 0.7), (2.0, -2.5)] {
            assert!((kernel(&a, x, y).unwrap() - kernel(&b, x, y).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn squeeze_commutes_with_displacement_kernel() {
        let s = displace(&StateModel::thermal(0.5).unwrap(), 0.7, -0.3).unwrap();
        let a = squeeze(&s, 1.7).unwrap();
        let b = StateModel::Rescaled {
            inner: Box::new(s),
            lambda: 1.7,
        };
        for (x, y) in [(0.1, 0.2), (-1.0, 0.7), (2.0, -2.5)] {
            assert!((kernel(&a, x, y).unwrap() - kernel(&b, x, y).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn entropy_shift() {
        let o = NumericOptions::default();
        let v = squeeze_entropy_shift(&StateModel::vacuum(), E, &o, EntropyMethod::Auto).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        let one = squeeze_entropy_shift(&StateModel::vacuum(), 1.0, &o, EntropyMethod::Auto).unwrap();
        assert_eq!(one, 0.0);
    }
}
