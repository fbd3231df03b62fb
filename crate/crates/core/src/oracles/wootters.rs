//! Concurrence of an arbitrary two-spin state from the spectrum of `rho rho~`.

use crate::error::{Error, Result};
use crate::matrix::{hermitian_eigenvalues, hermitian_map, kron, pauli, TwoQubitState};

/// Eigenvalues of `sqrt(rho) rho~ sqrt(rho)` below `-WOOTTERS_NEGATIVE_TOL` are an error.
pub const WOOTTERS_NEGATIVE_TOL: f64 = 1e-10;

/// `max(0, s1 - s2 - s3 - s4)`, `s_i` the decreasing square roots of the
/// eigenvalues of `rho (sy sy) rho* (sy sy)`.
///
/// The spectrum is taken from the Hermitian similar matrix
/// `sqrt(rho) rho~ sqrt(rho)`.
pub fn wootters_concurrence(rho: &TwoQubitState) -> Result<f64> {
    let yy = kron(&pauli::y(), &pauli::y());
    let m = rho.matrix();
    let flipped = yy * m.conj() * yy;
    let root = hermitian_map(m, |l| l.max(0.0).sqrt())?;
    let product = root * flipped * root;
    let hermitian = (product + product.adjoint()).scale_real(0.5);
    let mut s = hermitian_eigenvalues(&hermitian)?;
    for l in s.iter_mut() {
        if *l < -WOOTTERS_NEGATIVE_TOL {
            return Err(Error::NegativeEigenvalue { eigenvalue: *l });
        }
        *l = l.max(0.0).sqrt();
    }
    s.sort_by(|a, b| b.total_cmp(a));
    Ok((s[0] - s[1] - s[2] - s[3]).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{Mat4, C64};
    use crate::states::BellState;

    #[test]
    fn bell_states_are_maximal() {
        for bell in BellState::ALL {
            let c = wootters_concurrence(&bell.density()).unwrap();
            assert!((c - 1.0).abs() < 1e-9, "{bell:?}: {c}");
        }
    }

    #[test]
    fn product_state_is_separable() {
        let rho = TwoQubitState::pure([
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        ])
        .unwrap();
        assert!(wootters_concurrence(&rho).unwrap() < 1e-9);
        let mixed = TwoQubitState::new(Mat4::diagonal([0.25; 4])).unwrap();
        assert_eq!(wootters_concurrence(&mixed).unwrap(), 0.0);
    }

    #[test]
    fn werner_state() {
        // p |Psi-><Psi-| + (1 - p)/4: C = max(0, (3p - 1)/2)
        for p in [0.2, 1.0 / 3.0, 0.6, 0.9] {
            let bell = BellState::PsiMinus.density().into_matrix();
            let rho = bell.scale_real(p) + Mat4::identity().scale_real((1.0 - p) / 4.0);
            let c = wootters_concurrence(&TwoQubitState::new(rho).unwrap()).unwrap();
            assert!((c - (1.5 * p - 0.5).max(0.0)).abs() < 1e-12, "p={p}: {c}");
        }
    }
}
