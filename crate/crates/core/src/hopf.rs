//! Hopf-algebra homomorphisms `k[GL(n)] -> k[T]`, identified with their
//! value matrices.
//!
//! An algebra map out of `k[GL(n)] = k[x_ij, 1/d]` is determined by the
//! values `h(x_ij)`, provided the determinant of the value matrix is a
//! nonzero constant so that `1/d` has somewhere to go. The coordinate ring
//! itself is never materialized. The axiom checks below compare
//! `Delta_{k[T]}(h(x_ij)) = a_ij(T (x) 1 + 1 (x) T)` against
//! `(h (x) h)(Delta(x_ij)) = sum_l a_il (x) a_lj` inside `k[T,T']`, check
//! `a_ij(0) = delta_ij` for the counit, and compare the cofactor antipode
//! against `a_ij(-T)`.

use thiserror::Error;

use crate::algebra::{Field, MatPoly, Poly1, Poly2};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HopfError {
    #[error("value matrix determinant is not a nonzero constant: det = {det}")]
    DetNotUnit { det: Poly1 },
}

/// An algebra homomorphism `k[GL(n)] -> k[T]`, stored through its values
/// `h(x_ij) = a_ij(T)`. Whether it is a homomorphism of *Hopf* algebras is
/// what [`HopfHom::is_hopf_hom`] decides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopfHom {
    values: MatPoly,
    field: Field,
}

/// `h(x_ij) := a_ij(T)`; requires the determinant to be a unit of `k[T]`
/// lying in `k`.
pub fn to_hopf(values: MatPoly, field: Field) -> Result<HopfHom, HopfError> {
    let det = values.det(&field);
    if det.is_zero() || !det.is_constant() {
        return Err(HopfError::DetNotUnit { det });
    }
    Ok(HopfHom { values, field })
}

/// The inverse projection back to the value matrix. Trivial by
/// construction; named so the correspondence stays explicit in the API.
pub fn from_hopf(h: &HopfHom) -> MatPoly {
    h.values.clone()
}

impl HopfHom {
    pub fn n(&self) -> usize {
        self.values.n()
    }

    pub fn values(&self) -> &MatPoly {
        &self.values
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Commutation with the comultiplications.
    pub fn check_comultiplication(&self) -> bool {
        let f = &self.field;
        let n = self.values.n();
        for i in 0..n {
            for j in 0..n {
                let lhs = self.values.get(i, j).subst_sum(f);
                let mut rhs = Poly2::zero();
                for l in 0..n {
                    let term = Poly2::from_t(self.values.get(i, l), f)
                        .mul(&Poly2::from_tprime(self.values.get(l, j), f), f);
                    rhs = rhs.add(&term, f);
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Commutation with the counits: `a_ij(0) = delta_ij`.
    pub fn check_counit(&self) -> bool {
        let f = &self.field;
        self.values.eval(&f.zero(), f).is_identity(f)
    }

    /// Commutation with the antipodes: the cofactor expression
    /// `(-1)^{i+j} d^{-1} det((x_rs)_{r != j, s != i})` evaluated through
    /// `h` is exactly the inverse over `k[T]`, which must match `a_ij(-T)`.
    pub fn check_antipode(&self) -> bool {
        let f = &self.field;
        let inv = self
            .values
            .inv_unit(f)
            .expect("value matrices have unit determinant");
        inv == self.values.map_entries(|p| p.subst_negate(f))
    }

    /// Comultiplication and counit together; equals
    /// `verify_exponential(values)` entry for entry, which is the central
    /// property test of this module.
    pub fn is_hopf_hom(&self) -> bool {
        self.check_comultiplication() && self.check_counit()
    }
}
