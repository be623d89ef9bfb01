use std::f64::consts::PI;

use super::moments::Moments;
use crate::error::{Error, Result};

const MASS_TOL: f64 = 1e-6;
/// Atoms further than this many widths from `(x + x')/2` are skipped.
const WINDOW: f64 = 10.0;

/// Mixture `∫ P(x̄) |ξ_{x̄,σ}⟩⟨ξ_{x̄,σ}| dx̄` of real Gaussian wavepackets of
/// width `σ`, with `P` given as point masses at sorted atoms.
///
/// The kernel has the closed form
/// `exp(−(x − x')²/(8σ²)) Σ_k m_k N((x + x')/2 − x̄_k; σ²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmearedIncoherentState {
    pub(crate) sigma: f64,
    pub(crate) atoms: Vec<f64>,
    pub(crate) masses: Vec<f64>,
}

impl SmearedIncoherentState {
    pub fn new(atoms: Vec<f64>, masses: Vec<f64>, sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::Contract(format!("σ must be positive, got {sigma}")));
        }
        if atoms.len() != masses.len() || atoms.is_empty() {
            return Err(Error::Argument("atoms and masses must be nonempty and of equal length".into()));
        }
        if masses.iter().any(|m| !(m.is_finite() && *m >= 0.0)) || atoms.iter().any(|a| !a.is_finite()) {
            return Err(Error::Contract("masses must be finite and nonnegative".into()));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::Contract(format!("P integrates to {total}, not 1")));
        }
        let mut pairs: Vec<(f64, f64)> = atoms.into_iter().zip(masses).filter(|p| p.1 > 0.0).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (atoms, masses) = pairs.into_iter().unzip();
        Ok(Self { sigma, atoms, masses })
    }

    /// A single ξ wavepacket at `center`.
    pub fn single(center: f64, sigma: f64) -> Result<Self> {
        Self::new(vec![center], vec![1.0], sigma)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn kernel(&self, x: f64, xp: f64) -> f64 {
        let s2 = self.sigma * self.sigma;
        let d = x - xp;
        let envelope = (-d * d / (8.0 * s2)).exp();
        if envelope == 0.0 {
            return 0.0;
        }
        envelope * self.mixture_density(0.5 * (x + xp))
    }

    /// `Σ_k m_k N(u − x̄_k; σ²)`, which is also the quadrature density.
    pub fn mixture_density(&self, u: f64) -> f64 {
        let s = self.sigma;
        let lo = self.atoms.partition_point(|&a| a < u - WINDOW * s);
        let hi = self.atoms.partition_point(|&a| a <= u + WINDOW * s);
        let norm = 1.0 / (2.0 * PI * s * s).sqrt();
        let mut acc = 0.0;
        for k in lo..hi {
            let z = (u - self.atoms[k]) / s;
            acc += self.masses[k] * (-0.5 * z * z).exp();
        }
        acc * norm
    }

    pub(crate) fn support(&self) -> (f64, f64) {
        let h = 12.0 * self.sigma;
        (self.atoms[0] - h, self.atoms[self.atoms.len() - 1] + h)
    }

    pub(crate) fn moments(&self) -> Moments {
        let s2 = self.sigma * self.sigma;
        let mut mean = 0.0;
        let mut second = 0.0;
        for (a, m) in self.atoms.iter().zip(&self.masses) {
            mean += m * a;
            second += m * (a * a + s2);
        }
        Moments {
            mean_x: mean,
            mean_y: 0.0,
            xx: second,
            yy: 1.0 / (16.0 * s2),
            xy: 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_packet_is_pure_gaussian_kernel() {
        let s = SmearedIncoherentState::single(0.3, 0.2).unwrap();
        let psi = |x: f64| {
            let v: f64 = 0.04;
            (2.0 * PI * v).powf(-0.25) * (-(x - 0.3) * (x - 0.3) / (4.0 * v)).exp()
        };
        for &(x, y) in &[(0.0, 0.0), (0.3, 0.5), (-0.2, 0.7)] {
            assert!((s.kernel(x, y) - psi(x) * psi(y)).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_unnormalized() {
        assert!(SmearedIncoherentState::new(vec![0.0, 1.0], vec![0.5, 0.4], 0.1).is_err());
        assert!(SmearedIncoherentState::new(vec![0.0], vec![1.0], 0.0).is_err());
    }

    #[test]
    fn atoms_sorted() {
        let s = SmearedIncoherentState::new(vec![1.0, -1.0, 0.0], vec![0.2, 0.3, 0.5], 0.1).unwrap();
        assert_eq!(s.atoms(), &[-1.0, 0.0, 1.0]);
        assert_eq!(s.masses(), &[0.3, 0.5, 0.2]);
    }
}
