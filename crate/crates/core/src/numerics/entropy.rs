//! Differential (Shannon) and von Neumann entropies.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::grid::QuadratureGrid;
use super::integrate::integrate_1d;
use crate::error::{Error, Result};

/// Densities below this are treated as zero in `p ln p`.
const DENSITY_FLOOR: f64 = 1e-300;
const NORMALIZATION_TOL: f64 = 1e-4;

pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues down to this are clamped to zero; anything lower is an error.
pub const EIGENVALUE_CLAMP: f64 = -1e-8;

/// `h = −∫ p ln p` for a probability density sampled on `grid`.
pub fn differential_entropy<F>(p: F, grid: &QuadratureGrid) -> Result<f64>
where
    F: Fn(f64) -> f64 + Sync,
{
    let mass = integrate_1d(&p, grid)?.value;
    if (mass - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::Contract(format!(
            "density integrates to {mass}, not 1"
        )));
    }
    let r = integrate_1d(
        |x| {
            let v = p(x);
            if v < DENSITY_FLOOR {
                0.0
            } else {
                -v * v.ln()
            }
        },
        grid,
    )?;
    Ok(r.value)
}

/// Eigenvalues of a Hermitian matrix after the positivity check and clamp.
pub fn hermitian_spectrum(rho: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    let n = rho.nrows();
    if rho.ncols() != n {
        return Err(Error::Argument(format!(
            "matrix is not square: {}x{}",
            n,
            rho.ncols()
        )));
    }
    for i in 0..n {
        for j in i..n {
            let d = rho[(i, j)] - rho[(j, i)].conj();
            if d.norm() > HERMITIAN_TOL {
                return Err(Error::Contract(format!(
                    "matrix not Hermitian at ({i}, {j}): deviation {:e}",
                    d.norm()
                )));
            }
        }
    }
    let eig = rho.clone().symmetric_eigenvalues();
    let mut out = Vec::with_capacity(n);
    for &l in eig.iter() {
        if l < EIGENVALUE_CLAMP {
            return Err(Error::Positivity(l));
        }
        out.push(l.max(0.0));
    }
    Ok(out)
}

/// `−Σ λ ln λ` over a spectrum, with `0 ln 0 = 0`.
pub fn spectrum_entropy(eigenvalues: &[f64]) -> f64 {
    let s: f64 = eigenvalues
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln())
        .sum();
    s.max(0.0)
}

/// `S = −tr ρ ln ρ`.
pub fn von_neumann_entropy(rho: &DMatrix<Complex64>) -> Result<f64> {
    Ok(spectrum_entropy(&hermitian_spectrum(rho)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::grid::{build_grid, Scheme};
    use std::f64::consts::PI;

    fn gl() -> QuadratureGrid {
        build_grid((-10.0, 10.0), 64, 16, Scheme::CompositeGaussLegendre).unwrap()
    }

    fn gaussian(v: f64) -> impl Fn(f64) -> f64 + Sync {
        move |x| (-x * x / (2.0 * v)).exp() / (2.0 * PI * v).sqrt()
    }

    #[test]
    fn vacuum_and_thermal_quadrature_densities() {
        // ½ ln(2πe v)
        let h = differential_entropy(gaussian(0.25), &gl()).unwrap();
        assert!((h - 0.725_791_352_644_727_4).abs() < 1e-12, "{h}");
        let h = differential_entropy(gaussian(0.75), &gl()).unwrap();
        assert!((h - 1.275_097_496_978_782_3).abs() < 1e-12, "{h}");
    }

    #[test]
    fn unit_uniform_has_zero_entropy() {
        let g = build_grid((-0.5, 0.5), 8, 4, Scheme::CompositeGaussLegendre).unwrap();
        assert!(differential_entropy(|_| 1.0, &g).unwrap().abs() < 1e-15);
    }

    #[test]
    fn unnormalized_density_rejected() {
        let err = differential_entropy(|x| 2.0 * gaussian(0.25)(x), &gl()).unwrap_err();
        assert!(matches!(err, Error::Contract(m) if m.contains("integrates to")));
    }

    #[test]
    fn qubit_examples() {
        let mixed = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
        ]));
        assert!((von_neumann_entropy(&mixed).unwrap() - 2f64.ln()).abs() < 1e-15);

        let v = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8), Complex64::new(0.0, 0.0)];
        let pure = DMatrix::from_fn(3, 3, |i, j| v[i] * v[j].conj());
        assert!(von_neumann_entropy(&pure).unwrap().abs() < 1e-12);
    }

    #[test]
    fn truncated_thermal() {
        let nbar: f64 = 1.0;
        let rho = DMatrix::from_fn(60, 60, |i, j| {
            if i == j {
                Complex64::new((nbar / (1.0 + nbar)).powi(i as i32) / (1.0 + nbar), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let s = von_neumann_entropy(&rho).unwrap();
        assert!((s - 2.0 * 2f64.ln()).abs() < 1e-6);
    }

    #[test]
    fn negative_eigenvalue_rejected() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(1.1, 0.0),
            Complex64::new(-0.1, 0.0),
        ]));
        assert!(matches!(von_neumann_entropy(&m), Err(Error::Positivity(_))));
        let tiny = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(-1e-9, 0.0),
        ]));
        assert!(von_neumann_entropy(&tiny).unwrap().abs() < 1e-15);
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.5, 0.0),
                Complex64::new(0.1, 0.0),
                Complex64::new(0.2, 0.0),
                Complex64::new(0.5, 0.0),
            ],
        );
        assert!(matches!(von_neumann_entropy(&m), Err(Error::Contract(_))));
    }
}
