//! Number states against Gaussian states of the same mean photon number.

use serde::{Deserialize, Serialize};

use super::{coherence_l1, NumericOptions};
use crate::error::Result;
use crate::states::{squeezed_vacuum_for_energy, GaussianPureState, StateModel};

/// Gaussian family used as the reference at fixed energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparator {
    /// Vacuum antisqueezed along X, the largest ΔX at fixed energy.
    #[default]
    SqueezedVacuum,
    /// Coherent state with `|α|² = n̄`, whose coherence is `√(2π)` for any n̄.
    Coherent,
}

impl Comparator {
    pub fn state(&self, n_mean: f64) -> Result<GaussianPureState> {
        match self {
            Comparator::SqueezedVacuum => squeezed_vacuum_for_energy(n_mean),
            Comparator::Coherent => Ok(GaussianPureState::coherent(n_mean.max(0.0).sqrt(), 0.0)),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Comparator::SqueezedVacuum => "squeezed_vacuum",
            Comparator::Coherent => "coherent",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fig1Row {
    pub n: usize,
    pub c_fock: f64,
    pub c_fock_err: f64,
    pub c_gauss: f64,
    pub ratio: f64,
}

/// `C(|n⟩) / C(Gaussian with n̄ = n)`.
pub fn fig1_row(n: usize, comparator: Comparator, opts: &NumericOptions) -> Result<Fig1Row> {
    let fock = coherence_l1(&StateModel::number(n), opts)?;
    let gauss = coherence_l1(&comparator.state(n as f64)?.into(), opts)?;
    Ok(Fig1Row {
        n,
        c_fock: fock.value,
        c_fock_err: fock.error_estimate,
        c_gauss: gauss.value,
        ratio: fock.value / gauss.value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_rows() {
        let o = NumericOptions::default();
        let r0 = fig1_row(0, Comparator::SqueezedVacuum, &o).unwrap();
        assert!((r0.ratio - 1.0).abs() < 1e-6);
        let r1 = fig1_row(1, Comparator::SqueezedVacuum, &o).unwrap();
        assert!((r1.ratio - 0.527_393_087_579_049_5).abs() < 1e-6, "{r1:?}");
        let c1 = fig1_row(1, Comparator::Coherent, &o).unwrap();
        assert!(c1.ratio > 1.0);
    }
}
