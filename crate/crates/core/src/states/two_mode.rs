use nalgebra::DMatrix;
use num_complex::Complex64;

use super::fock_support;
use super::kernel::{modulus_with, wavefunction, wavefunction_with};
use super::moments::{from_ladder, Moments};
use super::StateModel;
use crate::error::{Error, Result};
use crate::numerics::psi_all_into;

const DET_TOL: f64 = 1e-12;
const NORM_TOL: f64 = 1e-10;
/// Extra margin added around a non-trivially remapped support box.
const REMAP_PADDING: f64 = 2.0;

/// Real 2×2 matrix with unit determinant acting on `(x1, x2)`.
///
/// The basis map is `|u⟩ ↦ |M u⟩`, so remapped amplitudes are
/// `ψ'(x) = ψ(M⁻¹ x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemapMatrix {
    m: [[f64; 2]; 2],
}

impl RemapMatrix {
    pub fn new(m: [[f64; 2]; 2]) -> Result<Self> {
        if m.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Contract("remap matrix entries must be finite".into()));
        }
        let r = Self { m };
        let det = r.determinant();
        if (det - 1.0).abs() > DET_TOL {
            return Err(Error::Contract(format!("remap determinant is {det}, expected 1")));
        }
        Ok(r)
    }

    pub fn identity() -> Self {
        Self { m: [[1.0, 0.0], [0.0, 1.0]] }
    }

    /// `x1' = cos θ x1 + sin θ x2`, `x2' = −sin θ x1 + cos θ x2`.
    pub fn beam_splitter(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { m: [[c, s], [-s, c]] }
    }

    /// `x1' = cosh θ x1 + sinh θ x2`, `x2' = sinh θ x1 + cosh θ x2`.
    pub fn two_mode_squeezer(theta: f64) -> Self {
        let (c, s) = (theta.cosh(), theta.sinh());
        Self { m: [[c, s], [s, c]] }
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        self.m
    }

    pub fn determinant(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn inverse(&self) -> Self {
        let [[a, b], [c, d]] = self.m;
        Self { m: [[d, -b], [-c, a]] }
    }

    pub fn transpose(&self) -> Self {
        let [[a, b], [c, d]] = self.m;
        Self { m: [[a, c], [b, d]] }
    }

    /// `next · self`: first this map, then `next`.
    pub fn then(&self, next: &RemapMatrix) -> Self {
        let a = next.m;
        let b = self.m;
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self { m: out }
    }

    pub fn apply(&self, u: [f64; 2]) -> [f64; 2] {
        [
            self.m[0][0] * u[0] + self.m[0][1] * u[1],
            self.m[1][0] * u[0] + self.m[1][1] * u[1],
        ]
    }

    pub fn is_identity(&self) -> bool {
        self.m == [[1.0, 0.0], [0.0, 1.0]]
    }

    /// `M S Mᵀ` for a symmetric 2×2 `S`.
    fn congruence(&self, s: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
        let m = self.m;
        let mut out = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = 0.0;
                for k in 0..2 {
                    for l in 0..2 {
                        acc += m[i][k] * s[k][l] * m[j][l];
                    }
                }
                out[i][j] = acc;
            }
        }
        out
    }
}

/// The unremapped two-mode state.
#[derive(Debug, Clone, PartialEq)]
pub enum TwoModeBase {
    /// `ψ1(u1) ψ2(u2)` for two pure single-mode states.
    Product(Box<[StateModel; 2]>),
    /// `Σ c_{jk} ψ_j(u1) ψ_k(u2)`.
    Coefficients(DMatrix<Complex64>),
}

/// Pure two-mode state `ψ(M⁻¹ x)` over a pure base state.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModePure {
    base: TwoModeBase,
    remap: RemapMatrix,
    inverse: RemapMatrix,
    support: [(f64, f64); 2],
}

impl TwoModePure {
    pub fn product(first: StateModel, second: StateModel) -> Result<Self> {
        for s in [&first, &second] {
            s.validate()?;
            if s.mode_count() != 1 || !s.is_pure() {
                return Err(Error::Unsupported(format!(
                    "two-mode pure states need pure single-mode factors, got {}",
                    s.family()
                )));
            }
        }
        let base = TwoModeBase::Product(Box::new([first, second]));
        Self::with_base(base, RemapMatrix::identity())
    }

    pub fn from_coefficients(c: DMatrix<Complex64>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::Contract("coefficient matrix is empty".into()));
        }
        let norm: f64 = c.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL || !norm.is_finite() {
            return Err(Error::Contract(format!("two-mode state has norm² {norm}, expected 1")));
        }
        Self::with_base(TwoModeBase::Coefficients(c), RemapMatrix::identity())
    }

    pub(crate) fn with_base(base: TwoModeBase, remap: RemapMatrix) -> Result<Self> {
        let mut s = Self {
            base,
            remap,
            inverse: remap.inverse(),
            support: [(0.0, 0.0); 2],
        };
        s.support = s.remapped_support()?;
        Ok(s)
    }

    /// Applies a further basis remap `M` after the current one.
    pub fn remapped(&self, m: &RemapMatrix) -> Result<Self> {
        Self::with_base(self.base.clone(), self.remap.then(m))
    }

    pub fn base(&self) -> &TwoModeBase {
        &self.base
    }

    pub fn remap(&self) -> &RemapMatrix {
        &self.remap
    }

    /// Integration box per mode.
    pub fn support(&self) -> [(f64, f64); 2] {
        self.support
    }

    pub fn support_radius(&self) -> [f64; 2] {
        self.support.map(|(a, b)| a.abs().max(b.abs()))
    }

    fn base_supports(&self) -> Result<[(f64, f64); 2]> {
        match &self.base {
            TwoModeBase::Product(f) => Ok([f[0].support()?, f[1].support()?]),
            TwoModeBase::Coefficients(c) => {
                let mut n1 = 0;
                let mut n2 = 0;
                for j in 0..c.nrows() {
                    for k in 0..c.ncols() {
                        if c[(j, k)].norm_sqr() > 1e-30 {
                            n1 = n1.max(j);
                            n2 = n2.max(k);
                        }
                    }
                }
                Ok([fock_support(n1), fock_support(n2)])
            }
        }
    }

    fn remapped_support(&self) -> Result<[(f64, f64); 2]> {
        let [(a1, b1), (a2, b2)] = self.base_supports()?;
        if self.remap.is_identity() {
            return Ok([(a1, b1), (a2, b2)]);
        }
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for u in [[a1, a2], [a1, b2], [b1, a2], [b1, b2]] {
            let x = self.remap.apply(u);
            for i in 0..2 {
                lo[i] = lo[i].min(x[i]);
                hi[i] = hi[i].max(x[i]);
            }
        }
        Ok([
            (lo[0] - REMAP_PADDING, hi[0] + REMAP_PADDING),
            (lo[1] - REMAP_PADDING, hi[1] + REMAP_PADDING),
        ])
    }

    /// Amplitude of the base state at base coordinates `u`.
    pub fn base_amplitude(&self, u1: f64, u2: f64) -> Result<Complex64> {
        match &self.base {
            TwoModeBase::Product(f) => Ok(wavefunction(&f[0], u1)? * wavefunction(&f[1], u2)?),
            TwoModeBase::Coefficients(c) => {
                let mut p1 = vec![0.0; c.nrows()];
                let mut p2 = vec![0.0; c.ncols()];
                psi_all_into(u1, &mut p1);
                psi_all_into(u2, &mut p2);
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, &pj) in p1.iter().enumerate() {
                    for (k, &pk) in p2.iter().enumerate() {
                        acc += c[(j, k)] * (pj * pk);
                    }
                }
                Ok(acc)
            }
        }
    }

    pub fn amplitude(&self, x1: f64, x2: f64) -> Result<Complex64> {
        let [u1, u2] = self.inverse.apply([x1, x2]);
        self.base_amplitude(u1, u2)
    }

    /// `out[r * x2s.len() + c] = amplitude(x1s[r], x2s[c])`.
    pub fn fill(&self, x1s: &[f64], x2s: &[f64], out: &mut [Complex64]) -> Result<()> {
        let n = x2s.len();
        match &self.base {
            TwoModeBase::Product(f) if self.remap.is_identity() => {
                let mut scratch = Vec::new();
                let v2 = x2s
                    .iter()
                    .map(|&x2| wavefunction_with(&f[1], x2, &mut scratch))
                    .collect::<Result<Vec<_>>>()?;
                for (r, &x1) in x1s.iter().enumerate() {
                    let a = wavefunction_with(&f[0], x1, &mut scratch)?;
                    for (o, b) in out[r * n..(r + 1) * n].iter_mut().zip(&v2) {
                        *o = a * b;
                    }
                }
            }
            TwoModeBase::Product(f) => {
                let mut scratch = Vec::new();
                for (r, &x1) in x1s.iter().enumerate() {
                    for (c, &x2) in x2s.iter().enumerate() {
                        let [u1, u2] = self.inverse.apply([x1, x2]);
                        out[r * n + c] = wavefunction_with(&f[0], u1, &mut scratch)?
                            * wavefunction_with(&f[1], u2, &mut scratch)?;
                    }
                }
            }
            TwoModeBase::Coefficients(cm) if self.remap.is_identity() => {
                let (d1, d2) = (cm.nrows(), cm.ncols());
                let mut table = vec![0.0; n * d2];
                for (c, &x2) in x2s.iter().enumerate() {
                    psi_all_into(x2, &mut table[c * d2..(c + 1) * d2]);
                }
                let mut p1 = vec![0.0; d1];
                let mut a = vec![Complex64::new(0.0, 0.0); d2];
                for (r, &x1) in x1s.iter().enumerate() {
                    psi_all_into(x1, &mut p1);
                    for (k, ak) in a.iter_mut().enumerate() {
                        *ak = (0..d1).map(|j| cm[(j, k)] * p1[j]).sum();
                    }
                    for (c, o) in out[r * n..(r + 1) * n].iter_mut().enumerate() {
                        let p2 = &table[c * d2..(c + 1) * d2];
                        *o = a.iter().zip(p2).map(|(ak, &pk)| ak * pk).sum();
                    }
                }
            }
            TwoModeBase::Coefficients(cm) => {
                let mut p1 = vec![0.0; cm.nrows()];
                let mut p2 = vec![0.0; cm.ncols()];
                for (r, &x1) in x1s.iter().enumerate() {
                    for (c, &x2) in x2s.iter().enumerate() {
                        let [u1, u2] = self.inverse.apply([x1, x2]);
                        psi_all_into(u1, &mut p1);
                        psi_all_into(u2, &mut p2);
                        let mut acc = Complex64::new(0.0, 0.0);
                        for (j, &pj) in p1.iter().enumerate() {
                            for (k, &pk) in p2.iter().enumerate() {
                                acc += cm[(j, k)] * (pj * pk);
                            }
                        }
                        out[r * n + c] = acc;
                    }
                }
            }
        }
        Ok(())
    }

    /// `out[r * x2s.len() + c] = |amplitude(x1s[r], x2s[c])|`.
    pub fn fill_modulus(&self, x1s: &[f64], x2s: &[f64], out: &mut [f64]) -> Result<()> {
        let n = x2s.len();
        let mut scratch = Vec::new();
        match &self.base {
            TwoModeBase::Product(f) if self.remap.is_identity() => {
                let v2 = x2s
                    .iter()
                    .map(|&x2| modulus_with(&f[1], x2, &mut scratch))
                    .collect::<Result<Vec<_>>>()?;
                for (r, &x1) in x1s.iter().enumerate() {
                    let a = modulus_with(&f[0], x1, &mut scratch)?;
                    for (o, b) in out[r * n..(r + 1) * n].iter_mut().zip(&v2) {
                        *o = a * b;
                    }
                }
            }
            TwoModeBase::Product(f) => {
                for (r, &x1) in x1s.iter().enumerate() {
                    for (c, &x2) in x2s.iter().enumerate() {
                        let [u1, u2] = self.inverse.apply([x1, x2]);
                        out[r * n + c] = modulus_with(&f[0], u1, &mut scratch)? * modulus_with(&f[1], u2, &mut scratch)?;
                    }
                }
            }
            TwoModeBase::Coefficients(_) => {
                let mut buf = vec![Complex64::new(0.0, 0.0); out.len()];
                self.fill(x1s, x2s, &mut buf)?;
                for (o, v) in out.iter_mut().zip(&buf) {
                    *o = v.norm();
                }
            }
        }
        Ok(())
    }

    /// Per-mode moments of the base state plus the cross moments
    /// `⟨u1 u2⟩`, `⟨v1 v2⟩`.
    fn base_moments(&self) -> Result<([Moments; 2], f64, f64)> {
        match &self.base {
            TwoModeBase::Product(f) => {
                let m1 = f[0].moments()?;
                let m2 = f[1].moments()?;
                Ok(([m1, m2], m1.mean_x * m2.mean_x, m1.mean_y * m2.mean_y))
            }
            TwoModeBase::Coefficients(c) => {
                let (d1, d2) = (c.nrows(), c.ncols());
                let at = |j: usize, k: usize| {
                    if j < d1 && k < d2 {
                        c[(j, k)]
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                };
                let zero = Complex64::new(0.0, 0.0);
                let (mut a1, mut a1s, mut n1) = (zero, zero, 0.0);
                let (mut a2, mut a2s, mut n2) = (zero, zero, 0.0);
                let (mut a1a2, mut a1d_a2) = (zero, zero);
                for j in 0..d1 {
                    for k in 0..d2 {
                        let w = c[(j, k)].conj();
                        let (jf, kf) = (j as f64, k as f64);
                        n1 += jf * c[(j, k)].norm_sqr();
                        n2 += kf * c[(j, k)].norm_sqr();
                        a1 += w * at(j + 1, k) * (jf + 1.0).sqrt();
                        a1s += w * at(j + 2, k) * ((jf + 1.0) * (jf + 2.0)).sqrt();
                        a2 += w * at(j, k + 1) * (kf + 1.0).sqrt();
                        a2s += w * at(j, k + 2) * ((kf + 1.0) * (kf + 2.0)).sqrt();
                        a1a2 += w * at(j + 1, k + 1) * ((jf + 1.0) * (kf + 1.0)).sqrt();
                        if j >= 1 {
                            a1d_a2 += w * at(j - 1, k + 1) * (jf * (kf + 1.0)).sqrt();
                        }
                    }
                }
                Ok((
                    [from_ladder(a1, a1s, n1), from_ladder(a2, a2s, n2)],
                    0.5 * (a1a2.re + a1d_a2.re),
                    0.5 * (a1d_a2.re - a1a2.re),
                ))
            }
        }
    }

    /// Per-mode quadrature moments after the remap.
    pub fn mode_moments(&self) -> Result<[Moments; 2]> {
        let ([m1, m2], uu, vv) = self.base_moments()?;
        let sx = [[m1.xx, uu], [uu, m2.xx]];
        let sy = [[m1.yy, vv], [vv, m2.yy]];
        let mx = self.remap.apply([m1.mean_x, m2.mean_x]);
        // Momenta transform with M⁻ᵀ.
        let n = self.inverse.transpose();
        let my = n.apply([m1.mean_y, m2.mean_y]);
        let sx = self.remap.congruence(sx);
        let sy = n.congruence(sy);
        Ok([0, 1].map(|i| Moments {
            mean_x: mx[i],
            mean_y: my[i],
            xx: sx[i][i],
            yy: sy[i][i],
            // Not tracked through the remap.
            xy: f64::NAN,
        }))
    }

    pub fn mean_photon_number(&self) -> Result<f64> {
        Ok(self.mode_moments()?.iter().map(|m| m.photon_number()).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{build_grid, integrate_2d, Scheme};

    fn vac2() -> TwoModePure {
        TwoModePure::product(StateModel::vacuum(), StateModel::vacuum()).unwrap()
    }

    #[test]
    fn remap_matrices() {
        assert!((RemapMatrix::beam_splitter(0.3).determinant() - 1.0).abs() < 1e-15);
        assert!((RemapMatrix::two_mode_squeezer(0.5).determinant() - 1.0).abs() < 1e-14);
        assert!(RemapMatrix::new([[2.0, 0.0], [0.0, 1.0]]).is_err());
        let b = RemapMatrix::beam_splitter(0.4).then(&RemapMatrix::beam_splitter(0.3));
        let c = RemapMatrix::beam_splitter(0.7).matrix();
        for i in 0..2 {
            for j in 0..2 {
                assert!((b.matrix()[i][j] - c[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn beam_splitter_moves_amplitude() {
        let s = TwoModePure::product(StateModel::number(1), StateModel::vacuum()).unwrap();
        let r = s.remapped(&RemapMatrix::beam_splitter(0.6)).unwrap();
        let m = RemapMatrix::beam_splitter(0.6);
        let x = m.apply([0.3, -0.2]);
        let a = r.amplitude(x[0], x[1]).unwrap();
        let b = s.amplitude(0.3, -0.2).unwrap();
        assert!((a - b).norm() < 1e-15);
    }

    #[test]
    fn normalization_after_two_mode_squeezing() {
        let s = vac2().remapped(&RemapMatrix::two_mode_squeezer(0.5)).unwrap();
        let [(a1, b1), (a2, b2)] = s.support();
        let gx = build_grid((a1, b1), 64, 8, Scheme::CompositeGaussLegendre).unwrap();
        let gy = build_grid((a2, b2), 64, 8, Scheme::CompositeGaussLegendre).unwrap();
        let norm = integrate_2d(|x, y| s.amplitude(x, y).unwrap().norm_sqr(), &gx, &gy).unwrap();
        assert!((norm.value - 1.0).abs() < 5e-5, "{}", norm.value);
    }

    #[test]
    fn photon_numbers() {
        let t = 0.5f64;
        let s = vac2().remapped(&RemapMatrix::two_mode_squeezer(t)).unwrap();
        assert!((s.mean_photon_number().unwrap() - 2.0 * t.sinh().powi(2)).abs() < 1e-12);
        let f = TwoModePure::product(StateModel::number(1), StateModel::number(2)).unwrap();
        let r = f.remapped(&RemapMatrix::beam_splitter(0.9)).unwrap();
        assert!((r.mean_photon_number().unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn coefficient_base_matches_product() {
        let mut c = DMatrix::from_element(2, 3, Complex64::new(0.0, 0.0));
        c[(1, 2)] = Complex64::new(1.0, 0.0);
        let a = TwoModePure::from_coefficients(c).unwrap();
        let b = TwoModePure::product(StateModel::number(1), StateModel::number(2)).unwrap();
        for &(x, y) in &[(0.1, 0.2), (-0.7, 1.1)] {
            assert!((a.amplitude(x, y).unwrap() - b.amplitude(x, y).unwrap()).norm() < 1e-14);
        }
        let ma = a.mode_moments().unwrap();
        let mb = b.mode_moments().unwrap();
        assert!((ma[0].xx - mb[0].xx).abs() < 1e-14 && (ma[1].yy - mb[1].yy).abs() < 1e-14);
    }

    #[test]
    fn mixed_factor_rejected() {
        let e = TwoModePure::product(StateModel::thermal(1.0).unwrap(), StateModel::vacuum());
        assert!(matches!(e, Err(Error::Unsupported(_))));
    }
}
