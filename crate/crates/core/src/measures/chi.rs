//! Discretization of the quadrature axis into box states
//! `χ_j(x) = σ^{-1/2}` on `[(j − ½)σ, (j + ½)σ]` and the induced diagonal
//! part `ρ_d = Σ_j w_j |χ_j⟩⟨χ_j|`.

use std::ops::RangeInclusive;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::NumericOptions;
use crate::error::{Error, Result};
use crate::numerics::{gauss_legendre, pairwise_sum, psi_all_into};
use crate::states::{kernel, quadrature_pdf, StateModel};

/// Gauss–Legendre nodes per bin.
const BIN_NODES: usize = 16;

/// Anything with a quadrature density and position kernel.
pub trait QuadratureSource: Sync {
    fn pdf(&self, x: f64) -> Result<f64>;
    fn kernel(&self, x: f64, xp: f64) -> Result<Complex64>;
    fn support(&self) -> Result<(f64, f64)>;
}

impl QuadratureSource for StateModel {
    fn pdf(&self, x: f64) -> Result<f64> {
        quadrature_pdf(self, x)
    }

    fn kernel(&self, x: f64, xp: f64) -> Result<Complex64> {
        kernel(self, x, xp)
    }

    fn support(&self) -> Result<(f64, f64)> {
        StateModel::support(self)
    }
}

/// A single box state of the given width, `ψ = width^{-1/2}` on the box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiBoxState {
    pub center: f64,
    pub width: f64,
}

impl ChiBoxState {
    fn inside(&self, x: f64) -> bool {
        (x - self.center).abs() <= 0.5 * self.width
    }
}

impl QuadratureSource for ChiBoxState {
    fn pdf(&self, x: f64) -> Result<f64> {
        Ok(if self.inside(x) { 1.0 / self.width } else { 0.0 })
    }

    fn kernel(&self, x: f64, xp: f64) -> Result<Complex64> {
        Ok(Complex64::new(
            if self.inside(x) && self.inside(xp) { 1.0 / self.width } else { 0.0 },
            0.0,
        ))
    }

    fn support(&self) -> Result<(f64, f64)> {
        Ok((self.center - 0.5 * self.width, self.center + 0.5 * self.width))
    }
}

/// How the diagonal weights `w_j` are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChiWeights {
    /// `∫_bin p(x) dx`; sums to one over a covering range.
    #[default]
    BinMass,
    /// `⟨χ_j|ρ|χ_j⟩ = σ⁻¹ ∫∫_bin ⟨x|ρ|x'⟩`, which falls short of one by
    /// `O(σ²)`.
    BinOverlap,
    /// `σ p(jσ)`.
    Midpoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChiDiagonal {
    pub sigma: f64,
    pub mode: ChiWeights,
    /// `(j, w_j)` in increasing `j`.
    pub weights: Vec<(i64, f64)>,
    /// Probability mass of the covered interval.
    pub covered_mass: f64,
}

impl ChiDiagonal {
    pub fn total(&self) -> f64 {
        pairwise_sum(&self.weights.iter().map(|w| w.1).collect::<Vec<_>>())
    }

    /// `Σ w_j ln w_j`.
    pub fn entropy_term(&self) -> f64 {
        let terms: Vec<f64> = self
            .weights
            .iter()
            .filter(|w| w.1 > 0.0)
            .map(|&(_, w)| w * w.ln())
            .collect();
        pairwise_sum(&terms)
    }
}

/// Bins from `⌊a/σ⌋` to `⌈b/σ⌉` over the source's support `(a, b)`.
pub fn chi_default_range<S: QuadratureSource + ?Sized>(source: &S, sigma: f64) -> Result<RangeInclusive<i64>> {
    check_sigma(sigma)?;
    let (a, b) = source.support()?;
    Ok((a / sigma).floor() as i64..=(b / sigma).ceil() as i64)
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::Argument(format!("σ must be positive, got {sigma}")));
    }
    Ok(())
}

/// Nodes and weights of the Gauss–Legendre rule on bin `j`.
fn bin_rule(j: i64, sigma: f64, gl: &(Vec<f64>, Vec<f64>)) -> (Vec<f64>, Vec<f64>) {
    let c = j as f64 * sigma;
    let h = 0.5 * sigma;
    (
        gl.0.iter().map(|t| c + h * t).collect(),
        gl.1.iter().map(|w| h * w).collect(),
    )
}

pub fn chi_diagonal<S: QuadratureSource + ?Sized>(
    source: &S,
    sigma: f64,
    j_range: RangeInclusive<i64>,
    mode: ChiWeights,
    opts: &NumericOptions,
) -> Result<ChiDiagonal> {
    check_sigma(sigma)?;
    if j_range.is_empty() {
        return Err(Error::Argument("empty χ bin range".into()));
    }
    let gl = gauss_legendre(BIN_NODES);
    let mut weights = Vec::new();
    let mut masses = Vec::new();
    for j in j_range {
        let (xs, ws) = bin_rule(j, sigma, &gl);
        let mut mass = 0.0;
        for (x, w) in xs.iter().zip(&ws) {
            mass += w * source.pdf(*x)?;
        }
        let wj = match mode {
            ChiWeights::BinMass => mass,
            ChiWeights::Midpoint => sigma * source.pdf(j as f64 * sigma)?,
            ChiWeights::BinOverlap => {
                let mut acc = 0.0;
                for (x, wx) in xs.iter().zip(&ws) {
                    for (y, wy) in xs.iter().zip(&ws) {
                        acc += wx * wy * source.kernel(*x, *y)?.re;
                    }
                }
                acc / sigma
            }
        };
        if !wj.is_finite() {
            return Err(Error::NonFinite {
                node: vec![j as f64 * sigma],
                value: wj,
            });
        }
        if wj < -1e-14 {
            return Err(Error::Positivity(wj));
        }
        weights.push((j, wj.max(0.0)));
        masses.push(mass);
    }
    let covered_mass = pairwise_sum(&masses);
    if covered_mass < 1.0 - opts.coverage_tol {
        return Err(Error::Coverage { sum: covered_mass });
    }
    Ok(ChiDiagonal {
        sigma,
        mode,
        weights,
        covered_mass,
    })
}

/// `Σ_j w_j ln w_j`; subtracting `ln σ` approaches `∫ p ln p` as `σ → 0`.
pub fn chi_entropy_term<S: QuadratureSource + ?Sized>(
    source: &S,
    sigma: f64,
    j_range: RangeInclusive<i64>,
    mode: ChiWeights,
    opts: &NumericOptions,
) -> Result<f64> {
    Ok(chi_diagonal(source, sigma, j_range, mode, opts)?.entropy_term())
}

/// `⟨m|ρ_d|n⟩ = Σ_j w_j ⟨m|χ_j⟩⟨χ_j|n⟩` on the first `dim` number states.
pub fn chi_fock_reconstruction(chi: &ChiDiagonal, dim: usize) -> DMatrix<Complex64> {
    let gl = gauss_legendre(BIN_NODES);
    let scale = 1.0 / chi.sigma.sqrt();
    let mut out = DMatrix::<f64>::zeros(dim, dim);
    let mut psi = vec![0.0; dim];
    let mut overlap = vec![0.0; dim];
    for &(j, w) in &chi.weights {
        if w == 0.0 {
            continue;
        }
        let (xs, ws) = bin_rule(j, chi.sigma, &gl);
        overlap.iter_mut().for_each(|o| *o = 0.0);
        for (x, wx) in xs.iter().zip(&ws) {
            psi_all_into(*x, &mut psi);
            for (o, p) in overlap.iter_mut().zip(&psi) {
                *o += wx * p;
            }
        }
        for m in 0..dim {
            let om = overlap[m] * scale;
            for n in 0..dim {
                out[(m, n)] += w * om * overlap[n] * scale;
            }
        }
    }
    out.map(|v| Complex64::new(v, 0.0))
}

/// `tr[(A − B)²] = Σ |A_{mn} − B_{mn}|²` for Hermitian `A`, `B`.
pub fn hilbert_schmidt_distance(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::Argument(format!(
            "dimension mismatch: {:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let terms: Vec<f64> = a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm_sqr()).collect();
    Ok(pairwise_sum(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o() -> NumericOptions {
        NumericOptions::default()
    }

    #[test]
    fn vacuum_weights_sum_to_one() {
        let v = StateModel::vacuum();
        let chi = chi_diagonal(&v, 0.1, -80..=80, ChiWeights::BinMass, &o()).unwrap();
        assert!((chi.total() - 1.0).abs() < 1e-8);
        assert!(chi.weights.iter().all(|w| w.1 >= 0.0));
    }

    #[test]
    fn vacuum_central_bin() {
        let v = StateModel::vacuum();
        let w0 = |mode| {
            let c = chi_diagonal(&v, 0.5, -30..=30, mode, &o()).unwrap();
            c.weights.iter().find(|w| w.0 == 0).unwrap().1
        };
        // erf(1/(2√2)) for variance ¼ over [−¼, ¼]
        assert!((w0(ChiWeights::BinMass) - 0.382_924_922_548_026).abs() < 1e-12);
        assert!((w0(ChiWeights::BinOverlap) - 0.382_793_590_2).abs() < 1e-9);
        assert!((w0(ChiWeights::Midpoint) - 0.398_942_280_401_432_7).abs() < 1e-12);
    }

    #[test]
    fn box_state_entropy_is_exact() {
        for n in [1usize, 3, 7, 11] {
            let b = ChiBoxState { center: 0.0, width: 1.0 };
            let sigma = 1.0 / n as f64;
            let half = (n as i64 - 1) / 2;
            let t = chi_entropy_term(&b, sigma, -half..=half, ChiWeights::BinMass, &o()).unwrap();
            assert!((t + (n as f64).ln()).abs() < 1e-12, "{n}: {t}");
        }
    }

    #[test]
    fn coverage_error() {
        let v = StateModel::vacuum();
        let e = chi_diagonal(&v, 0.1, -3..=3, ChiWeights::BinMass, &o()).unwrap_err();
        assert!(matches!(e, Error::Coverage { sum } if sum < 0.6));
    }

    #[test]
    fn overlap_weights_fall_short() {
        let v = StateModel::vacuum();
        let c = chi_diagonal(&v, 0.1, -80..=80, ChiWeights::BinOverlap, &o()).unwrap();
        // σ² ∫|ψ'|² / 12 with ∫|ψ'|² = 1 for the vacuum
        assert!((1.0 - c.total() - 0.01 / 12.0).abs() < 2e-5, "{}", c.total());
    }

    #[test]
    fn hilbert_schmidt() {
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]));
        let b = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]));
        assert_eq!(hilbert_schmidt_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(hilbert_schmidt_distance(&a, &b).unwrap(), 2.0);
        assert_eq!(hilbert_schmidt_distance(&b, &a).unwrap(), 2.0);
        let c = DMatrix::from_element(3, 3, Complex64::new(0.0, 0.0));
        assert!(matches!(hilbert_schmidt_distance(&a, &c), Err(Error::Argument(_))));
    }

    #[test]
    fn reconstruction_is_positive_and_subnormalized() {
        let t = StateModel::thermal(1.0).unwrap();
        let chi = chi_diagonal(&t, 0.25, chi_default_range(&t, 0.25).unwrap(), ChiWeights::BinMass, &o()).unwrap();
        let r = chi_fock_reconstruction(&chi, 40);
        let tr: f64 = (0..40).map(|i| r[(i, i)].re).sum();
        assert!(tr > 0.0 && tr < 1.0);
        let eig = crate::numerics::hermitian_spectrum(&r).unwrap();
        assert!(eig.iter().all(|&l| l >= 0.0));
    }
}
