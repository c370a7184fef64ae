//! Nonconvex case: the obstruction window for exponents below one half, the
//! explicit two-dimensional tail factor, and searches over simple families
//! of tail factors.

pub mod families;
pub mod pole_factor;
pub mod window;

pub use families::{candidate_family_search, FamilyKind, FamilySearch};
pub use pole_factor::{alpha_poly_diagnostics, build_h_prop_d, prop_d_r, PropDParams};
pub use window::{concavity_window, exclusion_demo, find_c, phi, phi_prime, ObstructionWindow};

use crate::ellipsoid::Ellipsoid;
use crate::error::{Error, Result};

/// First coordinate beyond the hyperplane block whose exponent is below one
/// half, if any (0-based).
pub fn nonconvex_slot(ell: &Ellipsoid) -> Option<usize> {
    (ell.k()..ell.dim()).find(|&j| ell.exponents()[j] < 0.5)
}

/// Refuses unless some `p_j < 1/2` with `j > k`.
pub fn require_nonconvex_tail(ell: &Ellipsoid) -> Result<usize> {
    nonconvex_slot(ell).ok_or_else(|| {
        Error::Hypothesis(format!(
            "no exponent below 1/2 beyond the first k = {} coordinates (p = {:?})",
            ell.k(),
            ell.exponents()
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate() {
        assert_eq!(nonconvex_slot(&Ellipsoid::new(vec![1.0, 0.3], 1).unwrap()), Some(1));
        assert_eq!(nonconvex_slot(&Ellipsoid::new(vec![0.4, 0.3], 1).unwrap()), Some(1));
        let convex = Ellipsoid::new(vec![1.0, 1.0], 1).unwrap();
        assert!(matches!(require_nonconvex_tail(&convex), Err(Error::Hypothesis(_))));
        // A small exponent inside the hyperplane block does not count.
        assert_eq!(nonconvex_slot(&Ellipsoid::new(vec![0.3, 1.0], 1).unwrap()), None);
    }
}
