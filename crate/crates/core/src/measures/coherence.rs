//! `C(ρ) = ∫∫ |⟨x|ρ|x'⟩| dx dx'`.

use num_complex::Complex64;

use super::{CoherenceMethod, CoherenceReport, NumericOptions};
use crate::error::{Error, Result};
use crate::numerics::{build_grid, integrate_1d, integrate_2d_rows, IntegralResult, QuadratureGrid, Scheme};
use crate::states::{wavefunction, KernelPlan, StateModel, TwoModePure, TWO_SQRT_TWO_PI};

/// Which numerical formula to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumericPath {
    /// `(∫|ψ|)²` for pure states, `∫∫|kernel|` otherwise.
    Auto,
    Pure1d,
    Kernel2d,
}

/// Coherence with closed forms where the state family has one.
pub fn coherence_l1(state: &StateModel, opts: &NumericOptions) -> Result<CoherenceReport> {
    state.validate()?;
    match state {
        StateModel::GaussianPure(g) => Ok(CoherenceReport::analytic(TWO_SQRT_TWO_PI * g.delta_x())),
        StateModel::Thermal(t) => Ok(CoherenceReport::analytic(
            (2.0 * std::f64::consts::PI / (1.0 + 2.0 * t.n_mean())).sqrt(),
        )),
        StateModel::SmearedIncoherent(s) => Ok(CoherenceReport::analytic(TWO_SQRT_TWO_PI * s.sigma())),
        StateModel::Rescaled { inner, lambda } => Ok(coherence_l1(inner, opts)?.scaled(*lambda)),
        StateModel::Displaced { inner, .. } => coherence_l1(inner, opts),
        StateModel::Rotated { .. } => Err(Error::Unsupported(
            "coherence of a rotation with no exact Fock-basis image".into(),
        )),
        StateModel::Product(p) => {
            let mut value = 1.0;
            let mut rel_err = 0.0;
            for f in p.factors() {
                let r = coherence_l1(f, opts)?;
                value *= r.value;
                if r.value > 0.0 {
                    rel_err += r.error_estimate / r.value;
                }
            }
            Ok(CoherenceReport {
                value,
                error_estimate: value * rel_err,
                method: CoherenceMethod::Product,
            })
        }
        StateModel::TwoModeRemapped(t) => coherence_two_mode_pure(t, opts),
        // |0⟩ up to a phase is the vacuum Gaussian.
        StateModel::FockVector(v) if v.coefficients().iter().skip(1).all(|c| c.norm_sqr() == 0.0) => {
            Ok(CoherenceReport::analytic(TWO_SQRT_TWO_PI * 0.5))
        }
        StateModel::FockVector(_) | StateModel::FockDensityMatrix(_) => {
            coherence_l1_numeric(state, opts, NumericPath::Auto)
        }
    }
}

fn trapezoid(domain: (f64, f64), intervals: usize) -> Result<QuadratureGrid> {
    build_grid(domain, intervals, 1, Scheme::Trapezoid)
}

/// Doubles resolution until the relative error estimate meets the
/// tolerance. `square` marks integrals whose square is the reported value.
fn refine<F>(mut eval: F, opts: &NumericOptions, refinements: usize, square: bool) -> Result<(IntegralResult, f64)>
where
    F: FnMut(usize) -> Result<IntegralResult>,
{
    let mut intervals = opts.grid_points.max(2);
    let mut last = None;
    for _ in 0..=refinements {
        let r = eval(intervals)?;
        let (value, err) = if square {
            (r.value * r.value, 2.0 * r.value.abs() * r.error_estimate)
        } else {
            (r.value, r.error_estimate)
        };
        if err <= opts.tolerance * value.abs() {
            return Ok((r, err));
        }
        last = Some((value, err));
        intervals *= 2;
    }
    let (value, estimate) = last.expect("at least one evaluation");
    Err(Error::Convergence {
        value,
        estimate,
        tolerance: opts.tolerance,
    })
}

/// Numerical coherence of a single-mode state on trapezoid grids covering
/// its support, refined until the error estimate meets `opts.tolerance`.
pub fn coherence_l1_numeric(state: &StateModel, opts: &NumericOptions, path: NumericPath) -> Result<CoherenceReport> {
    state.validate()?;
    if state.mode_count() != 1 {
        return Err(Error::Unsupported(format!(
            "single-mode numerical coherence requested for a {}-mode state",
            state.mode_count()
        )));
    }
    let domain = state.support()?;
    let pure = match path {
        NumericPath::Auto => state.is_pure(),
        NumericPath::Pure1d => {
            if !state.is_pure() {
                return Err(Error::Unsupported(format!(
                    "pure-state formula requested for a mixed {} state",
                    state.family()
                )));
            }
            true
        }
        NumericPath::Kernel2d => false,
    };
    if pure {
        let (r, err) = refine(
            |n| {
                let g = trapezoid(domain, n)?;
                pure_integral(state, &g)
            },
            opts,
            opts.max_refinements_1d,
            true,
        )?;
        Ok(CoherenceReport {
            value: r.value * r.value,
            error_estimate: err,
            method: CoherenceMethod::NumericPure,
        })
    } else {
        let (r, err) = refine(
            |n| {
                let g = trapezoid(domain, n)?;
                kernel_integral(state, &g, &g)
            },
            opts,
            opts.max_refinements_2d,
            false,
        )?;
        Ok(CoherenceReport {
            value: r.value,
            error_estimate: err,
            method: CoherenceMethod::NumericKernel,
        })
    }
}

fn pure_integral(state: &StateModel, grid: &QuadratureGrid) -> Result<IntegralResult> {
    // Evaluate once up front so that unsupported states fail cleanly.
    wavefunction(state, grid.nodes()[0])?;
    integrate_1d(|x| wavefunction(state, x).map_or(f64::NAN, |v| v.norm()), grid)
}

fn kernel_integral(state: &StateModel, gx: &QuadratureGrid, gy: &QuadratureGrid) -> Result<IntegralResult> {
    let plan = KernelPlan::new(state, gy.nodes())?;
    integrate_2d_rows(
        |xs, _ys, out| {
            let mut buf = vec![Complex64::new(0.0, 0.0); out.len()];
            plan.fill(xs, &mut buf)?;
            for (o, v) in out.iter_mut().zip(&buf) {
                *o = v.norm();
            }
            Ok(())
        },
        gx,
        gy,
    )
}

/// Coherence on caller-supplied grids, without refinement: `(∫|ψ|)²` on
/// `grid_x` for pure states, `∫∫|kernel|` on `grid_x × grid_y` otherwise.
pub fn coherence_l1_on_grids(
    state: &StateModel,
    grid_x: &QuadratureGrid,
    grid_y: &QuadratureGrid,
) -> Result<CoherenceReport> {
    if state.is_pure() {
        let r = pure_integral(state, grid_x)?;
        Ok(CoherenceReport {
            value: r.value * r.value,
            error_estimate: 2.0 * r.value.abs() * r.error_estimate,
            method: CoherenceMethod::NumericPure,
        })
    } else {
        let r = kernel_integral(state, grid_x, grid_y)?;
        Ok(CoherenceReport {
            value: r.value,
            error_estimate: r.error_estimate,
            method: CoherenceMethod::NumericKernel,
        })
    }
}

/// `(∫∫ |ψ(x1, x2)|)²` for a pure two-mode state, refined like the
/// single-mode kernel integral.
pub fn coherence_two_mode_pure(state: &TwoModePure, opts: &NumericOptions) -> Result<CoherenceReport> {
    let [d1, d2] = state.support();
    let (r, err) = refine(
        |n| two_mode_integral(state, &trapezoid(d1, n)?, &trapezoid(d2, n)?),
        opts,
        opts.max_refinements_2d,
        true,
    )?;
    Ok(CoherenceReport {
        value: r.value * r.value,
        error_estimate: err,
        method: CoherenceMethod::NumericPure,
    })
}

pub fn coherence_two_mode_on_grids(
    state: &TwoModePure,
    grid_1: &QuadratureGrid,
    grid_2: &QuadratureGrid,
) -> Result<CoherenceReport> {
    let r = two_mode_integral(state, grid_1, grid_2)?;
    Ok(CoherenceReport {
        value: r.value * r.value,
        error_estimate: 2.0 * r.value.abs() * r.error_estimate,
        method: CoherenceMethod::NumericPure,
    })
}

fn two_mode_integral(state: &TwoModePure, g1: &QuadratureGrid, g2: &QuadratureGrid) -> Result<IntegralResult> {
    integrate_2d_rows(
        |xs, ys, out| state.fill_modulus(xs, ys, out),
        g1,
        g2,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{FockDensityMatrix, FockVector};
    use std::f64::consts::PI;

    const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

    #[test]
    fn closed_forms() {
        let o = NumericOptions::default();
        let c = coherence_l1(&StateModel::vacuum(), &o).unwrap();
        assert_eq!(c.method, CoherenceMethod::Analytic);
        assert_eq!(c.error_estimate, 0.0);
        assert!((c.value - SQRT_2PI).abs() < 1e-15);
        let t = coherence_l1(&StateModel::thermal(1.0).unwrap(), &o).unwrap();
        assert!((t.value - 1.447_202_509_116_535_3).abs() < 1e-15);
        let p = StateModel::product(vec![StateModel::vacuum(), StateModel::vacuum()]).unwrap();
        let c = coherence_l1(&p, &o).unwrap();
        assert_eq!(c.method, CoherenceMethod::Product);
        assert!((c.value - 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn fock_one_pure_path() {
        let c = coherence_l1(&StateModel::number(1), &NumericOptions::default()).unwrap();
        assert_eq!(c.method, CoherenceMethod::NumericPure);
        assert!((c.value - 3.191_538_243_211_461_4).abs() < 3e-6 * 3.19, "{c:?}");
    }

    #[test]
    fn vacuum_kernel_path() {
        let c = coherence_l1_numeric(&StateModel::vacuum(), &NumericOptions::default(), NumericPath::Kernel2d).unwrap();
        assert_eq!(c.method, CoherenceMethod::NumericKernel);
        assert!((c.value - SQRT_2PI).abs() < 1e-6 * SQRT_2PI, "{c:?}");
    }

    #[test]
    fn pure_identity_with_sqrt_pdf() {
        let s: StateModel = FockVector::new(vec![Complex64::new(0.5f64.sqrt(), 0.0), Complex64::new(0.0, 0.5f64.sqrt())])
            .unwrap()
            .into();
        let g = trapezoid(s.support().unwrap(), 1 << 15).unwrap();
        let c = coherence_l1_on_grids(&s, &g, &g).unwrap();
        let root = integrate_1d(|x| crate::states::quadrature_pdf(&s, x).unwrap().sqrt(), &g).unwrap();
        assert!((c.value - root.value * root.value).abs() < 1e-6);
    }

    #[test]
    fn mixed_state_kernel_path() {
        let m: StateModel = FockDensityMatrix::diagonal(&[0.5, 0.5]).unwrap().into();
        let opts = NumericOptions::default().with_tolerance(1e-5);
        let c = coherence_l1(&m, &opts).unwrap();
        assert_eq!(c.method, CoherenceMethod::NumericKernel);
        assert!(c.value > 0.0 && c.error_estimate <= 1e-5 * c.value);
    }

    #[test]
    fn unsupported_paths() {
        let t = StateModel::thermal(1.0).unwrap();
        assert!(matches!(
            coherence_l1_numeric(&t, &NumericOptions::default(), NumericPath::Pure1d),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn convergence_failure_is_reported() {
        let opts = NumericOptions {
            tolerance: 1e-14,
            grid_points: 128,
            max_refinements_1d: 1,
            ..NumericOptions::default()
        };
        let e = coherence_l1(&StateModel::number(3), &opts).unwrap_err();
        assert!(matches!(e, Error::Convergence { .. }));
    }
}
