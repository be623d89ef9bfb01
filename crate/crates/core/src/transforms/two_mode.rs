use nalgebra::DMatrix;
use num_complex::Complex64;

use super::rotate;
use crate::error::{Error, Result};
use crate::states::{RemapMatrix, StateModel, TwoModeBase, TwoModePure};

/// Applies `M` to the quadrature basis of a pure two-mode state, given either
/// as a [`TwoModePure`] or as a product of two pure single-mode factors.
pub fn remap_two_mode(state: &StateModel, m: &RemapMatrix) -> Result<TwoModePure> {
    match state {
        StateModel::TwoModeRemapped(t) => t.remapped(m),
        StateModel::Product(p) if p.factors().len() == 2 => {
            let [a, b] = [&p.factors()[0], &p.factors()[1]];
            TwoModePure::product(a.clone(), b.clone())?.remapped(m)
        }
        other => Err(Error::Unsupported(format!(
            "two-mode remaps need a pure two-mode state, got {} with {} modes",
            other.family(),
            other.mode_count()
        ))),
    }
}

/// `V|x1⟩|x2⟩ = |cos θ x1 + sin θ x2⟩|−sin θ x1 + cos θ x2⟩` applied to
/// `s1 ⊗ s2`.
pub fn beam_split(s1: &StateModel, s2: &StateModel, theta: f64) -> Result<TwoModePure> {
    check_angle(theta)?;
    TwoModePure::product(s1.clone(), s2.clone())?.remapped(&RemapMatrix::beam_splitter(theta))
}

/// `T|x1⟩|x2⟩ = |cosh θ x1 + sinh θ x2⟩|sinh θ x1 + cosh θ x2⟩`.
pub fn two_mode_squeeze(state: &StateModel, theta: f64) -> Result<TwoModePure> {
    check_angle(theta)?;
    remap_two_mode(state, &RemapMatrix::two_mode_squeezer(theta))
}

fn check_angle(theta: f64) -> Result<()> {
    if theta.is_finite() {
        Ok(())
    } else {
        Err(Error::Argument(format!("angle must be finite, got {theta}")))
    }
}

fn is_orthogonal(m: &RemapMatrix) -> bool {
    let [[a, b], [c, d]] = m.matrix();
    (a * a + b * b - 1.0).abs() < 1e-12 && (c * c + d * d - 1.0).abs() < 1e-12 && (a * c + b * d).abs() < 1e-12
}

/// Equal free evolution of both modes. It commutes with orthogonal remaps
/// (passive mixing), so those are rotated on the base state; `None` otherwise.
pub(super) fn rotate_two_mode(t: &TwoModePure, tau: f64) -> Result<Option<TwoModePure>> {
    if !is_orthogonal(t.remap()) {
        return Ok(None);
    }
    let base = match t.base() {
        TwoModeBase::Product(f) => {
            let a = rotate(&f[0], tau)?;
            let b = rotate(&f[1], tau)?;
            if !a.is_pure() || !b.is_pure() || matches!(a, StateModel::Rotated { .. }) {
                return Ok(None);
            }
            TwoModeBase::Product(Box::new([a, b]))
        }
        TwoModeBase::Coefficients(c) => TwoModeBase::Coefficients(DMatrix::from_fn(c.nrows(), c.ncols(), |j, k| {
            c[(j, k)] * Complex64::from_polar(1.0, -tau * (j + k) as f64)
        })),
    };
    TwoModePure::with_base(base, *t.remap()).map(Some)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_4, PI};

    use super::*;
    use crate::measures::NumericOptions;
    use crate::states::mean_photon_number;
    use crate::transforms::coherence_two_mode_pure;

    #[test]
    fn zero_angle_is_identity() {
        let t = beam_split(&StateModel::number(1), &StateModel::vacuum(), 0.0).unwrap();
        let p = TwoModePure::product(StateModel::number(1), StateModel::vacuum()).unwrap();
        for (x, y) in [(0.3, -0.2), (1.1, 0.4)] {
            assert!((t.amplitude(x, y).unwrap() - p.amplitude(x, y).unwrap()).norm() < 1e-15);
        }
    }

    #[test]
    fn vacuum_pair_is_rotation_symmetric() {
        let t = beam_split(&StateModel::vacuum(), &StateModel::vacuum(), 0.7).unwrap();
        let a = t.amplitude(1.0, 0.0).unwrap();
        let b = t.amplitude(0.6, 0.8).unwrap();
        assert!((a - b).norm() < 1e-15);
        let c = coherence_two_mode_pure(&t, &NumericOptions::default()).unwrap();
        assert!((c.value - 2.0 * PI).abs() < 1e-6);
    }

    #[test]
    fn mixed_inputs_rejected() {
        let th = StateModel::thermal(1.0).unwrap();
        assert!(matches!(beam_split(&th, &StateModel::vacuum(), 0.3), Err(Error::Unsupported(_))));
        assert!(matches!(two_mode_squeeze(&StateModel::vacuum(), 0.3), Err(Error::Unsupported(_))));
    }

    #[test]
    fn rotation_commutes_with_beam_splitter() {
        let t = beam_split(&StateModel::number(1), &StateModel::vacuum(), FRAC_PI_4).unwrap();
        let r = rotate(&t.clone().into(), 0.8).unwrap();
        assert!(matches!(r, StateModel::TwoModeRemapped(_)));
        let n = mean_photon_number(&r).unwrap();
        assert!((n - 1.0).abs() < 1e-10);
        let s = two_mode_squeeze(&StateModel::product(vec![StateModel::vacuum(), StateModel::vacuum()]).unwrap(), 0.5)
            .unwrap();
        assert!(matches!(rotate(&s.into(), 0.8).unwrap(), StateModel::Rotated { .. }));
    }
}
