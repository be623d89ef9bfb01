use nalgebra::DMatrix;
use num_complex::Complex64;

use super::gaussian::GaussianPureState;
use crate::error::{Error, Result};
use super::kernel::{wavefunction, KernelPlan};
use super::StateModel;
use crate::numerics::{default_smooth_grid, hermitian_spectrum, psi_all_into};

const NORM_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-8;
/// Largest weight a Fock truncation may discard.
pub const TRUNCATION_LOSS_TOL: f64 = 1e-8;
pub const DEFAULT_FOCK_DIM: usize = 64;

/// Thermal (geometric photon-number) state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalState {
    pub(crate) n_mean: f64,
}

impl ThermalState {
    pub fn new(n_mean: f64) -> Result<Self> {
        if !(n_mean >= 0.0) || !n_mean.is_finite() {
            return Err(Error::Contract(format!("n̄ must be finite and ≥ 0, got {n_mean}")));
        }
        Ok(Self { n_mean })
    }

    pub fn n_mean(&self) -> f64 {
        self.n_mean
    }

    /// `p_n = n̄ⁿ / (1 + n̄)^{n+1}`.
    pub fn occupation(&self, n: usize) -> f64 {
        let r = self.n_mean / (1.0 + self.n_mean);
        if n == 0 {
            1.0 / (1.0 + self.n_mean)
        } else {
            r.powi(n as i32) / (1.0 + self.n_mean)
        }
    }

    /// Closed-form kernel `√((2/π)/(1+2n̄)) exp(−xᵀMx)`.
    pub fn kernel(&self, x: f64, xp: f64) -> f64 {
        let (pref, a, b) = self.kernel_coefficients();
        pref * (-(a * (x * x + xp * xp) - 2.0 * b * x * xp)).exp()
    }

    /// `(prefactor, A, B)` with `xᵀMx = A(x² + x'²) − 2B x x'`.
    pub(crate) fn kernel_coefficients(&self) -> (f64, f64, f64) {
        let n = self.n_mean;
        let s = 1.0 + 2.0 * n;
        let off = 2.0 * n * (1.0 + n) / s;
        ((2.0 / std::f64::consts::PI / s).sqrt(), 1.0 / s + off, off)
    }

    pub fn quadrature_variance(&self) -> f64 {
        (1.0 + 2.0 * self.n_mean) / 4.0
    }
}

/// Pure state `Σ c_n |n⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    pub(crate) coefficients: Vec<Complex64>,
}

impl FockVector {
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Contract("Fock vector needs at least one coefficient".into()));
        }
        if coefficients.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Contract("Fock coefficients must be finite".into()));
        }
        let norm: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Contract(format!("Fock vector has norm² {norm}, expected 1")));
        }
        Ok(Self { coefficients })
    }

    /// The number state `|n⟩`.
    pub fn number(n: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
        c[n] = Complex64::new(1.0, 0.0);
        Self { coefficients: c }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// Highest index with non-negligible amplitude.
    pub fn max_occupied(&self) -> usize {
        self.coefficients
            .iter()
            .rposition(|c| c.norm_sqr() > 1e-30)
            .unwrap_or(0)
    }

    pub fn to_density_matrix(&self) -> FockDensityMatrix {
        let c = &self.coefficients;
        FockDensityMatrix {
            entries: DMatrix::from_fn(c.len(), c.len(), |m, n| c[m] * c[n].conj()),
        }
    }
}

/// Density matrix `ρ_{mn} = ⟨m|ρ|n⟩` on a truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    pub(crate) entries: DMatrix<Complex64>,
}

impl FockDensityMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let n = entries.nrows();
        if n == 0 || entries.ncols() != n {
            return Err(Error::Contract(format!(
                "density matrix must be square and nonempty, got {}x{}",
                n,
                entries.ncols()
            )));
        }
        let trace: Complex64 = (0..n).map(|i| entries[(i, i)]).sum();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::Contract(format!("trace is {trace}, expected 1")));
        }
        // Hermiticity and positivity (within the clamp) are checked here.
        hermitian_spectrum(&entries)?;
        Ok(Self { entries })
    }

    pub fn diagonal(probabilities: &[f64]) -> Result<Self> {
        let n = probabilities.len();
        Self::new(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(probabilities[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.entries[(i, j)].norm() == 0.0))
    }

    pub fn max_occupied(&self) -> usize {
        (0..self.dim())
            .rposition(|i| self.entries[(i, i)].re.abs() > 1e-30)
            .unwrap_or(0)
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).sum()
    }

    pub(crate) fn from_unchecked(entries: DMatrix<Complex64>) -> Self {
        debug_assert!(entries.nrows() == entries.ncols());
        Self { entries }
    }
}

/// Coherent-state amplitudes `e^{-|α|²/2} αⁿ / √n!`, computed in the log
/// domain so that `|α|²` in the hundreds does not overflow.
pub fn coherent_amplitudes(alpha: Complex64, dim: usize) -> Vec<Complex64> {
    let r2 = alpha.norm_sqr();
    let (r, phase) = alpha.to_polar();
    let mut log_fact = 0.0;
    (0..dim)
        .map(|n| {
            if n > 0 {
                log_fact += (n as f64).ln();
            }
            if r == 0.0 {
                return if n == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
            }
            let log_mag = -0.5 * r2 + n as f64 * r.ln() - 0.5 * log_fact;
            Complex64::from_polar(log_mag.exp(), n as f64 * phase)
        })
        .collect()
}

/// Truncates a thermal or coherent state to `dim` Fock levels.
///
/// Fails with a capacity error when more than 1e-8 of the weight falls
/// outside the truncated space.
pub fn fock_truncate_thermal(state: &ThermalState, dim: usize) -> Result<FockDensityMatrix> {
    if dim == 0 {
        return Err(Error::Argument("Fock dimension must be positive".into()));
    }
    let p: Vec<f64> = (0..dim).map(|n| state.occupation(n)).collect();
    let kept: f64 = p.iter().sum();
    check_loss(1.0 - kept, dim)?;
    Ok(FockDensityMatrix::from_unchecked(DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            Complex64::new(p[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })))
}

pub fn fock_truncate_coherent(state: &GaussianPureState, dim: usize) -> Result<FockVector> {
    if !state.is_coherent() {
        return Err(Error::Contract(
            "only coherent Gaussian states (ΔX = ΔY = 1/2) have a closed-form Fock expansion".into(),
        ));
    }
    if dim == 0 {
        return Err(Error::Argument("Fock dimension must be positive".into()));
    }
    let c = coherent_amplitudes(Complex64::new(state.x_mean, state.y_mean), dim);
    let kept: f64 = c.iter().map(|z| z.norm_sqr()).sum();
    check_loss(1.0 - kept, dim)?;
    Ok(FockVector { coefficients: c })
}

pub(crate) fn check_loss(loss: f64, dim: usize) -> Result<()> {
    if loss > TRUNCATION_LOSS_TOL {
        return Err(Error::Capacity(format!(
            "Fock truncation at dimension {dim} discards weight {loss:e}"
        )));
    }
    Ok(())
}

/// Fock-basis representation of a single-mode state on `dim` levels.
///
/// Number-state families are converted exactly; everything else is
/// projected numerically, `⟨m|ρ|n⟩ = ∫∫ ψ_m(x) ⟨x|ρ|x'⟩ ψ_n(x') dx dx'`, and
/// rejected with a capacity error when the projection loses more than 1e−8
/// of the trace.
pub(crate) fn project_to_fock(state: &StateModel, dim: usize) -> Result<StateModel> {
    if dim == 0 {
        return Err(Error::Argument("Fock dimension must be positive".into()));
    }
    match state {
        StateModel::FockVector(v) => {
            let lost: f64 = v.coefficients.iter().skip(dim).map(|c| c.norm_sqr()).sum();
            check_loss(lost, dim)?;
            return Ok(normalized_vector(v.coefficients.iter().take(dim).copied().collect()));
        }
        StateModel::FockDensityMatrix(m) => {
            let k = m.dim().min(dim);
            let lost: f64 = (k..m.dim()).map(|i| m.entries[(i, i)].re).sum();
            check_loss(lost, dim)?;
            return Ok(normalized_matrix(m.entries.view((0, 0), (k, k)).into_owned()).into());
        }
        StateModel::Thermal(t) => return Ok(fock_truncate_thermal(t, dim)?.into()),
        StateModel::GaussianPure(g) if g.is_coherent() => return Ok(fock_truncate_coherent(g, dim)?.into()),
        _ => {}
    }
    if state.mode_count() != 1 {
        return Err(Error::Unsupported(format!(
            "Fock projection of a {}-mode state",
            state.mode_count()
        )));
    }
    let grid = default_smooth_grid(state.support()?)?;
    let xs = grid.nodes();
    let w = grid.weights();
    // a[(n, i)] = w_i ψ_n(x_i)
    let mut a = DMatrix::<f64>::zeros(dim, xs.len());
    for (i, &x) in xs.iter().enumerate() {
        psi_all_into(x, a.column_mut(i).as_mut_slice());
        a.column_mut(i).scale_mut(w[i]);
    }
    if state.is_pure() {
        let psi: Vec<Complex64> = xs.iter().map(|&x| wavefunction(state, x)).collect::<Result<_>>()?;
        let c: Vec<Complex64> = (0..dim)
            .map(|n| (0..xs.len()).map(|i| psi[i] * a[(n, i)]).sum())
            .collect();
        let kept: f64 = c.iter().map(|z| z.norm_sqr()).sum();
        check_loss(1.0 - kept, dim)?;
        return Ok(normalized_vector(c));
    }
    let plan = KernelPlan::new(state, xs)?;
    let mut k = vec![Complex64::new(0.0, 0.0); xs.len() * xs.len()];
    plan.fill(xs, &mut k)?;
    // Row-major k is column-major kᵀ.
    let kt_re = DMatrix::from_column_slice(xs.len(), xs.len(), &k.iter().map(|z| z.re).collect::<Vec<_>>());
    let kt_im = DMatrix::from_column_slice(xs.len(), xs.len(), &k.iter().map(|z| z.im).collect::<Vec<_>>());
    // ρ = A K Aᵀ, with K = (kᵀ)ᵀ.
    let re = &a * kt_re.transpose() * a.transpose();
    let im = &a * kt_im.transpose() * a.transpose();
    let rho = DMatrix::from_fn(dim, dim, |i, j| Complex64::new(re[(i, j)], im[(i, j)]));
    let trace: f64 = (0..dim).map(|i| rho[(i, i)].re).sum();
    check_loss(1.0 - trace, dim)?;
    Ok(normalized_matrix(rho).into())
}

fn normalized_vector(mut c: Vec<Complex64>) -> StateModel {
    let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    c.iter_mut().for_each(|z| *z /= norm);
    FockVector { coefficients: c }.into()
}

fn normalized_matrix(rho: DMatrix<Complex64>) -> FockDensityMatrix {
    let herm = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    let trace: f64 = (0..herm.nrows()).map(|i| herm[(i, i)].re).sum();
    FockDensityMatrix::from_unchecked(herm / Complex64::new(trace, 0.0))
}
