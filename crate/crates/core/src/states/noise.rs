use super::{check_dense_qubits, DensityMatrix};
use crate::linalg::ComplexMatrix;
use crate::pauli::PauliString;
use crate::{Error, Result};

/// Noise channels used to synthesize states near GHZ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Channel {
    /// `(1 - p) rho + p I / 2^N`.
    Depolarizing(f64),
    /// Independent dephasing of every qubit, `(1 - p/2) rho + (p/2) Z_j rho Z_j`.
    /// Coherence between basis states `r` and `c` shrinks by
    /// `(1 - p)^popcount(r ^ c)`; `p = 1` removes every off-diagonal entry.
    Dephasing(f64),
}

impl Channel {
    pub fn strength(self) -> f64 {
        match self {
            Channel::Depolarizing(p) | Channel::Dephasing(p) => p,
        }
    }

    pub(crate) fn validate(self) -> Result<()> {
        let p = self.strength();
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("noise strength {p} outside [0, 1]")));
        }
        Ok(())
    }
}

pub fn apply_noise(rho: &DensityMatrix, channel: Channel) -> Result<DensityMatrix> {
    channel.validate()?;
    let dim = rho.dim();
    let m = rho.matrix();
    let out = match channel {
        Channel::Depolarizing(p) => {
            let mut out = m.scale(1.0 - p);
            let floor = p / dim as f64;
            for i in 0..dim {
                out[(i, i)].re += floor;
            }
            out
        }
        Channel::Dephasing(p) => {
            let factors: Vec<f64> = (0..=rho.n_qubits()).map(|k| (1.0 - p).powi(k as i32)).collect();
            ComplexMatrix::from_fn(dim, |r, c| m[(r, c)] * factors[(r ^ c).count_ones() as usize])
        }
    };
    Ok(DensityMatrix::from_trusted(out))
}

/// Explicit Kraus operators of [`Channel::Dephasing`]: one weighted Z-string
/// per subset of qubits.
pub fn dephasing_kraus(n_qubits: usize, p: f64) -> Result<Vec<ComplexMatrix>> {
    Channel::Dephasing(p).validate()?;
    check_dense_qubits(n_qubits, 1)?;
    (0..1u64 << n_qubits)
        .map(|mask| {
            let flipped = mask.count_ones() as i32;
            let weight = (0.5 * p).powi(flipped) * (1.0 - 0.5 * p).powi(n_qubits as i32 - flipped);
            Ok(PauliString::s_operator(mask, n_qubits)?.to_dense()?.scale(weight.sqrt()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{apply_kraus, kraus_completeness_deviation};
    use crate::states::{ghz_state, GhzWeight};

    #[test]
    fn zero_strength_is_identity() {
        let rho = ghz_state(3, GhzWeight::balanced()).unwrap();
        for ch in [Channel::Depolarizing(0.0), Channel::Dephasing(0.0)] {
            assert!(apply_noise(&rho, ch).unwrap().matrix().max_abs_diff(rho.matrix()) == 0.0);
        }
    }

    #[test]
    fn full_depolarizing_gives_maximally_mixed() {
        let rho = ghz_state(3, GhzWeight::balanced()).unwrap();
        let out = apply_noise(&rho, Channel::Depolarizing(1.0)).unwrap();
        let mm = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(out.matrix().max_abs_diff(mm.matrix()) < 1e-16);
    }

    #[test]
    fn dephasing_matches_its_kraus_set() {
        let rho = ghz_state(3, GhzWeight::new(0.3).unwrap()).unwrap();
        let mixed = apply_noise(&rho, Channel::Depolarizing(0.2)).unwrap();
        for p in [0.0, 0.1, 0.5, 1.0] {
            let kraus = dephasing_kraus(3, p).unwrap();
            assert!(kraus_completeness_deviation(&kraus) < 1e-14);
            let via_kraus = apply_kraus(mixed.matrix(), &kraus).unwrap();
            let direct = apply_noise(&mixed, Channel::Dephasing(p)).unwrap();
            assert!(via_kraus.max_abs_diff(direct.matrix()) < 1e-14, "p = {p}");
        }
    }

    #[test]
    fn strength_out_of_range_is_rejected() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(apply_noise(&rho, Channel::Depolarizing(1.5)).is_err());
        assert!(apply_noise(&rho, Channel::Dephasing(-0.1)).is_err());
    }
}
