//! Position-representation evaluation: `ψ(x)`, `⟨x|ρ|x'⟩` and `p(x)`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::StateModel;
use crate::error::{Error, Result};
use crate::numerics::psi_all_into;

const PDF_CLAMP: f64 = 1e-14;

fn not_evaluable(state: &StateModel, what: &str) -> Error {
    Error::Unsupported(format!("{what} is not available for a {} state", state.family()))
}

/// `ψ(x)` of a pure single-mode state.
pub fn wavefunction(state: &StateModel, x: f64) -> Result<Complex64> {
    wavefunction_with(state, x, &mut Vec::new())
}

/// [`wavefunction`] reusing `scratch` for the Hermite functions.
pub(crate) fn wavefunction_with(state: &StateModel, x: f64, scratch: &mut Vec<f64>) -> Result<Complex64> {
    match state {
        StateModel::GaussianPure(g) => Ok(g.wavefunction(x)),
        StateModel::FockVector(v) => {
            scratch.resize(v.coefficients.len(), 0.0);
            psi_all_into(x, scratch);
            Ok(v.coefficients.iter().zip(scratch.iter()).map(|(c, &pn)| c * pn).sum())
        }
        StateModel::Rescaled { inner, lambda } => {
            Ok(wavefunction_with(inner, x / lambda, scratch)? / lambda.sqrt())
        }
        StateModel::Displaced { inner, x0, y0 } => {
            Ok(wavefunction_with(inner, x - x0, scratch)? * Complex64::from_polar(1.0, 2.0 * y0 * x))
        }
        StateModel::Thermal(_) | StateModel::FockDensityMatrix(_) | StateModel::SmearedIncoherent(_) => Err(
            Error::Unsupported(format!("wavefunction requested for a mixed {} state", state.family())),
        ),
        _ => Err(not_evaluable(state, "a single-mode wavefunction")),
    }
}

/// `|ψ(x)|`, skipping the phase factors.
pub(crate) fn modulus_with(state: &StateModel, x: f64, scratch: &mut Vec<f64>) -> Result<f64> {
    match state {
        StateModel::GaussianPure(g) => Ok(g.pdf(x).sqrt()),
        StateModel::Rescaled { inner, lambda } => Ok(modulus_with(inner, x / lambda, scratch)? / lambda.sqrt()),
        StateModel::Displaced { inner, x0, .. } => modulus_with(inner, x - x0, scratch),
        _ => Ok(wavefunction_with(state, x, scratch)?.norm()),
    }
}

/// `⟨x|ρ|x'⟩` of a single-mode state.
pub fn kernel(state: &StateModel, x: f64, xp: f64) -> Result<Complex64> {
    if state.is_pure() && state.mode_count() == 1 {
        return Ok(wavefunction(state, x)? * wavefunction(state, xp)?.conj());
    }
    match state {
        StateModel::Thermal(t) => Ok(Complex64::new(t.kernel(x, xp), 0.0)),
        StateModel::FockDensityMatrix(m) => {
            let n = m.dim();
            let mut px = vec![0.0; n];
            let mut py = vec![0.0; n];
            psi_all_into(x, &mut px);
            psi_all_into(xp, &mut py);
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, &a) in px.iter().enumerate() {
                for (j, &b) in py.iter().enumerate() {
                    acc += m.entries[(i, j)] * (a * b);
                }
            }
            Ok(acc)
        }
        StateModel::Rescaled { inner, lambda } => Ok(kernel(inner, x / lambda, xp / lambda)? / *lambda),
        StateModel::Displaced { inner, x0, y0 } => Ok(kernel(inner, x - x0, xp - x0)?
            * Complex64::from_polar(1.0, 2.0 * y0 * (x - xp))),
        StateModel::SmearedIncoherent(s) => Ok(Complex64::new(s.kernel(x, xp), 0.0)),
        _ => Err(not_evaluable(state, "the position kernel")),
    }
}

/// `p(x) = ⟨x|ρ|x⟩`.
pub fn quadrature_pdf(state: &StateModel, x: f64) -> Result<f64> {
    let v = match state {
        StateModel::Thermal(t) => t.kernel(x, x),
        StateModel::SmearedIncoherent(s) => s.mixture_density(x),
        StateModel::Rescaled { inner, lambda } => quadrature_pdf(inner, x / lambda)? / lambda,
        StateModel::Displaced { inner, x0, .. } => quadrature_pdf(inner, x - x0)?,
        s if s.is_pure() && s.mode_count() == 1 => wavefunction(s, x)?.norm_sqr(),
        s => kernel(s, x, x)?.re,
    };
    Ok(if v.abs() < PDF_CLAMP { v.max(0.0) } else { v })
}

/// Kernel evaluation on a fixed set of columns `x'`, reused across rows.
///
/// Column-only work (conjugated wavefunctions, `ρ Ψ(x')` products) is done
/// once in [`KernelPlan::new`]; [`KernelPlan::fill`] then produces whole
/// row blocks.
#[derive(Debug, Clone)]
pub struct KernelPlan {
    ncols: usize,
    node: Node,
}

#[derive(Debug, Clone)]
enum Node {
    Pure {
        state: StateModel,
        cols: Vec<Complex64>,
    },
    Thermal {
        pref: f64,
        a: f64,
        b: f64,
        ys: Vec<f64>,
    },
    Fock {
        dim: usize,
        /// `(ρ Ψ)ᵀ` split into real and imaginary parts, `ncols × dim`.
        bt_re: DMatrix<f64>,
        bt_im: DMatrix<f64>,
    },
    Rescaled {
        lambda: f64,
        inner: Box<Node>,
    },
    Displaced {
        x0: f64,
        y0: f64,
        col_phase: Vec<Complex64>,
        inner: Box<Node>,
    },
    Smeared {
        state: super::SmearedIncoherentState,
        ys: Vec<f64>,
        lattice: Option<Lattice>,
    },
}

/// Mixture densities at every midpoint `(x + x')/2` of a uniform column
/// grid, so rows lying on the same lattice need no per-point mixture sums.
#[derive(Debug, Clone)]
struct Lattice {
    origin: f64,
    step: f64,
    /// `density[m]` at `origin + m·step/2`.
    density: Vec<f64>,
}

impl Lattice {
    fn build(state: &super::SmearedIncoherentState, ys: &[f64]) -> Option<Lattice> {
        if ys.len() < 2 {
            return None;
        }
        let step = (ys[ys.len() - 1] - ys[0]) / (ys.len() - 1) as f64;
        let uniform = ys
            .iter()
            .enumerate()
            .all(|(j, &y)| (y - (ys[0] + j as f64 * step)).abs() <= 1e-12 * (1.0 + y.abs()));
        if !uniform || step <= 0.0 {
            return None;
        }
        let density = (0..2 * ys.len() - 1)
            .map(|m| state.mixture_density(ys[0] + 0.5 * m as f64 * step))
            .collect();
        Some(Lattice {
            origin: ys[0],
            step,
            density,
        })
    }

    /// Index of `x` on the column lattice, if it lies on it.
    fn index(&self, x: f64, ncols: usize) -> Option<usize> {
        let k = (x - self.origin) / self.step;
        let r = k.round();
        if (k - r).abs() < 1e-9 && r >= 0.0 && (r as usize) < ncols {
            Some(r as usize)
        } else {
            None
        }
    }
}

impl KernelPlan {
    pub fn new(state: &StateModel, ys: &[f64]) -> Result<Self> {
        Ok(Self {
            ncols: ys.len(),
            node: Node::build(state, ys)?,
        })
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Writes `⟨xs[r]|ρ|ys[c]⟩` into `out[r * ncols + c]`.
    pub fn fill(&self, xs: &[f64], out: &mut [Complex64]) -> Result<()> {
        if out.len() != xs.len() * self.ncols {
            return Err(Error::Argument(format!(
                "output buffer holds {} values, expected {}",
                out.len(),
                xs.len() * self.ncols
            )));
        }
        self.node.fill(xs, self.ncols, out)
    }
}

impl Node {
    fn build(state: &StateModel, ys: &[f64]) -> Result<Node> {
        if state.is_pure() && state.mode_count() == 1 {
            let cols = ys
                .iter()
                .map(|&y| wavefunction(state, y).map(|v| v.conj()))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Node::Pure {
                state: state.clone(),
                cols,
            });
        }
        Ok(match state {
            StateModel::Thermal(t) => {
                let (pref, a, b) = t.kernel_coefficients();
                Node::Thermal {
                    pref,
                    a,
                    b,
                    ys: ys.to_vec(),
                }
            }
            StateModel::FockDensityMatrix(m) => {
                let dim = m.dim();
                let mut bt_re = DMatrix::zeros(ys.len(), dim);
                let mut bt_im = DMatrix::zeros(ys.len(), dim);
                let mut p = vec![0.0; dim];
                for (j, &y) in ys.iter().enumerate() {
                    psi_all_into(y, &mut p);
                    for mi in 0..dim {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for (n, &pn) in p.iter().enumerate() {
                            acc += m.entries[(mi, n)] * pn;
                        }
                        bt_re[(j, mi)] = acc.re;
                        bt_im[(j, mi)] = acc.im;
                    }
                }
                Node::Fock { dim, bt_re, bt_im }
            }
            StateModel::Rescaled { inner, lambda } => {
                let scaled: Vec<f64> = ys.iter().map(|y| y / lambda).collect();
                Node::Rescaled {
                    lambda: *lambda,
                    inner: Box::new(Node::build(inner, &scaled)?),
                }
            }
            StateModel::Displaced { inner, x0, y0 } => {
                let shifted: Vec<f64> = ys.iter().map(|y| y - x0).collect();
                Node::Displaced {
                    x0: *x0,
                    y0: *y0,
                    col_phase: ys.iter().map(|&y| Complex64::from_polar(1.0, -2.0 * y0 * y)).collect(),
                    inner: Box::new(Node::build(inner, &shifted)?),
                }
            }
            StateModel::SmearedIncoherent(s) => Node::Smeared {
                state: s.clone(),
                ys: ys.to_vec(),
                lattice: Lattice::build(s, ys),
            },
            other => return Err(not_evaluable(other, "the position kernel")),
        })
    }

    fn fill(&self, xs: &[f64], ncols: usize, out: &mut [Complex64]) -> Result<()> {
        match self {
            Node::Pure { state, cols } => {
                for (r, &x) in xs.iter().enumerate() {
                    let px = wavefunction(state, x)?;
                    for (o, c) in out[r * ncols..(r + 1) * ncols].iter_mut().zip(cols) {
                        *o = px * c;
                    }
                }
            }
            Node::Thermal { pref, a, b, ys } => {
                for (r, &x) in xs.iter().enumerate() {
                    for (o, &y) in out[r * ncols..(r + 1) * ncols].iter_mut().zip(ys) {
                        let e = a * (x * x + y * y) - 2.0 * b * x * y;
                        *o = Complex64::new(pref * (-e).exp(), 0.0);
                    }
                }
            }
            Node::Fock { dim, bt_re, bt_im } => {
                let mut px = DMatrix::zeros(*dim, xs.len());
                for (i, &x) in xs.iter().enumerate() {
                    psi_all_into(x, px.column_mut(i).as_mut_slice());
                }
                // (ncols × dim)(dim × nx) is column-major ncols × nx, i.e.
                // row-major nx × ncols.
                let re = bt_re * &px;
                let im = bt_im * &px;
                for ((o, &r), &i) in out.iter_mut().zip(re.as_slice()).zip(im.as_slice()) {
                    *o = Complex64::new(r, i);
                }
            }
            Node::Rescaled { lambda, inner } => {
                let scaled: Vec<f64> = xs.iter().map(|x| x / lambda).collect();
                inner.fill(&scaled, ncols, out)?;
                let inv = 1.0 / lambda;
                out.iter_mut().for_each(|v| *v *= inv);
            }
            Node::Displaced {
                x0,
                y0,
                col_phase,
                inner,
            } => {
                let shifted: Vec<f64> = xs.iter().map(|x| x - x0).collect();
                inner.fill(&shifted, ncols, out)?;
                if *y0 != 0.0 {
                    for (r, &x) in xs.iter().enumerate() {
                        let row_phase = Complex64::from_polar(1.0, 2.0 * y0 * x);
                        for (o, c) in out[r * ncols..(r + 1) * ncols].iter_mut().zip(col_phase) {
                            *o *= row_phase * c;
                        }
                    }
                }
            }
            Node::Smeared { state, ys, lattice } => {
                let inv8s2 = 1.0 / (8.0 * state.sigma * state.sigma);
                for (r, &x) in xs.iter().enumerate() {
                    let row = &mut out[r * ncols..(r + 1) * ncols];
                    match lattice.as_ref().and_then(|l| l.index(x, ncols).map(|k| (l, k))) {
                        Some((l, k)) => {
                            for (j, (o, &y)) in row.iter_mut().zip(ys).enumerate() {
                                let d = x - y;
                                *o = Complex64::new((-d * d * inv8s2).exp() * l.density[k + j], 0.0);
                            }
                        }
                        None => {
                            for (o, &y) in row.iter_mut().zip(ys) {
                                *o = Complex64::new(state.kernel(x, y), 0.0);
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
