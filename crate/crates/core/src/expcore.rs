//! The exponential-matrix core: verification of the defining functional
//! equation, truncated exponentials, synthesis from nilpotent tuples, and
//! the inverse factorization.
//!
//! An `A(T)` in `Mat(n, k[T])` is exponential when `A(0) = I` and
//! `A(T) A(T') = A(T + T')` holds identically in `k[T, T']`. Verification
//! compares full bivariate expansions; sampling over a small `F_q` is not
//! enough because polynomials of degree `>= q` alias.

use std::fmt;

use thiserror::Error;

use crate::algebra::field::FieldError;
use crate::algebra::{Field, FieldElem, MatConst, MatPoly, Poly1, Poly2};

/// Failure certificate for the exponential-matrix conditions. Entry
/// positions are 1-based, matching the usual matrix convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExpFailure {
    /// `A(0)` differs from the identity at `(row, col)`.
    NotIdentityAtZero {
        row: usize,
        col: usize,
        value: FieldElem,
    },
    /// The functional equation fails at `(row, col)`;
    /// `difference = a_ij(T + T') - (A(T) A(T'))_ij`.
    FunctionalEquation {
        row: usize,
        col: usize,
        difference: Poly2,
    },
}

impl fmt::Display for ExpFailure {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpFailure::NotIdentityAtZero { row, col, value } => {
                write!(out, "A(0) has entry ({row},{col}) = {value}")
            }
            ExpFailure::FunctionalEquation {
                row,
                col,
                difference,
            } => write!(
                out,
                "functional equation fails at entry ({row},{col}): difference {difference}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpError {
    #[error("not an exponential matrix: {0}")]
    NotExponential(ExpFailure),
    #[error("matrix {index} of the tuple is not nilpotent of the required order")]
    NotNilpotent { index: usize },
    #[error("tuple matrices {i} and {j} do not commute")]
    NotCommuting { i: usize, j: usize },
    #[error("characteristic-zero tuples have at most one layer, got {len}")]
    TooManyLayersCharZero { len: usize },
    #[error("inconsistent residue at layer {layer}: the input is not an exponential matrix")]
    FactorResidue { layer: usize },
}

/// Check the two defining conditions. On failure the certificate names the
/// first offending entry in row-major order and, for the functional
/// equation, the difference polynomial in `k[T, T']`.
pub fn verify_exponential(a: &MatPoly, f: &Field) -> Result<(), ExpFailure> {
    let n = a.n();
    let at_zero = a.eval(&f.zero(), f);
    for i in 0..n {
        for j in 0..n {
            let expected = if i == j { f.one() } else { f.zero() };
            if *at_zero.get(i, j) != expected {
                return Err(ExpFailure::NotIdentityAtZero {
                    row: i + 1,
                    col: j + 1,
                    value: at_zero.get(i, j).clone(),
                });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let lhs = a.get(i, j).subst_sum(f);
            let mut rhs = Poly2::zero();
            for l in 0..n {
                let term =
                    Poly2::from_t(a.get(i, l), f).mul(&Poly2::from_tprime(a.get(l, j), f), f);
                rhs = rhs.add(&term, f);
            }
            let difference = lhs.sub(&rhs, f);
            if !difference.is_zero() {
                return Err(ExpFailure::FunctionalEquation {
                    row: i + 1,
                    col: j + 1,
                    difference,
                });
            }
        }
    }
    Ok(())
}

/// A verified exponential matrix together with its field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpMat {
    mat: MatPoly,
    field: Field,
}

impl ExpMat {
    /// Verify and wrap. Every constructed value additionally satisfies
    /// `det A(T) = 1`, which is asserted.
    pub fn new(mat: MatPoly, field: Field) -> Result<ExpMat, ExpError> {
        verify_exponential(&mat, &field).map_err(ExpError::NotExponential)?;
        assert!(
            mat.det(&field) == Poly1::one(&field),
            "exponential matrices have determinant 1"
        );
        Ok(ExpMat { mat, field })
    }

    pub fn identity(n: usize, field: Field) -> ExpMat {
        let mat = MatPoly::identity(n, &field);
        ExpMat { mat, field }
    }

    pub fn n(&self) -> usize {
        self.mat.n()
    }

    pub fn matrix(&self) -> &MatPoly {
        &self.mat
    }

    pub fn into_matrix(self) -> MatPoly {
        self.mat
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Specialization `A(t)`.
    pub fn eval(&self, t: &FieldElem) -> MatConst {
        self.mat.eval(t, &self.field)
    }

    /// `A(T)^{-1} = A(-T)`: the antipode relation seen through the group
    /// law. True for every exponential matrix; exposed as a check.
    pub fn negate_inverse_check(&self) -> bool {
        let inv = self
            .mat
            .inv_unit(&self.field)
            .expect("exponential matrices are unimodular");
        inv == self.mat.map_entries(|p| p.subst_negate(&self.field))
    }

    /// Coefficient-wise embedding into an extension of the same
    /// characteristic; the result is re-verified.
    pub fn extend_scalars(&self, to: &Field) -> Result<ExpMat, FieldError> {
        let mat = self.mat.extend_scalars(&self.field, to)?;
        Ok(ExpMat::new(mat, to.clone()).expect("scalar extension preserves exponentiality"))
    }
}

/// A tuple `(N_1, .., N_r)` of pairwise-commuting matrices with
/// `N_i^p = O`. In characteristic zero a tuple holds at most one layer,
/// nilpotent in the plain sense `N^n = O`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilTuple {
    n: usize,
    mats: Vec<MatConst>,
    field: Field,
}

impl NilTuple {
    pub fn new(n: usize, mats: Vec<MatConst>, field: Field) -> Result<NilTuple, ExpError> {
        for m in &mats {
            assert_eq!(m.n(), n, "tuple entries must all be n x n");
        }
        if field.characteristic() == 0 {
            if mats.len() > 1 {
                return Err(ExpError::TooManyLayersCharZero { len: mats.len() });
            }
            if let Some(m) = mats.first() {
                if !m.is_nilpotent(&field) {
                    return Err(ExpError::NotNilpotent { index: 1 });
                }
            }
        } else {
            for (i, m) in mats.iter().enumerate() {
                if !m.is_nilpotent_p(&field) {
                    return Err(ExpError::NotNilpotent { index: i + 1 });
                }
            }
            for i in 0..mats.len() {
                for j in i + 1..mats.len() {
                    if mats[i].mul(&mats[j], &field) != mats[j].mul(&mats[i], &field) {
                        return Err(ExpError::NotCommuting { i: i + 1, j: j + 1 });
                    }
                }
            }
        }
        Ok(NilTuple { n, mats, field })
    }

    pub fn empty(n: usize, field: Field) -> NilTuple {
        NilTuple {
            n,
            mats: Vec::new(),
            field,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn mats(&self) -> &[MatConst] {
        &self.mats
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Drop trailing zero matrices only; interior zeros shift layers and
    /// stay meaningful.
    pub fn trim_trailing_zeros(&self) -> NilTuple {
        let mut mats = self.mats.clone();
        while mats.last().is_some_and(|m| m.is_zero(&self.field)) {
            mats.pop();
        }
        NilTuple {
            n: self.n,
            mats,
            field: self.field.clone(),
        }
    }
}

/// Truncated exponential `sum_{j < p} (T^e N)^j / j!` (or `j < n` in
/// characteristic zero), exact because `N` is nilpotent of the right order
/// and every `j!` in range is invertible.
pub fn trunc_exp(nmat: &MatConst, e: u64, f: &Field) -> Result<MatPoly, ExpError> {
    assert!(e >= 1, "substitution exponent must be positive");
    let p = f.characteristic();
    let (bound, nilpotent) = if p > 0 {
        (p, nmat.is_nilpotent_p(f))
    } else {
        (nmat.n() as u64, nmat.is_nilpotent(f))
    };
    if !nilpotent {
        return Err(ExpError::NotNilpotent { index: 1 });
    }
    let n = nmat.n();
    let mut acc = MatPoly::identity(n, f);
    let mut power = MatConst::identity(n, f);
    let mut factorial = f.one();
    for j in 1..bound {
        power = power.mul(nmat, f);
        if power.is_zero(f) {
            break;
        }
        factorial = f.mul(&factorial, &f.from_u64(j));
        let coeff = f
            .inv(&factorial)
            .expect("j! is invertible for j below the bound");
        let deg = (e * j) as usize;
        let term = MatPoly::from_fn(n, |r, c| {
            let v = f.mul(power.get(r, c), &coeff);
            if f.is_zero(&v) {
                Poly1::zero()
            } else {
                Poly1::monomial(v, deg, f)
            }
        });
        acc = acc.add(&term, f);
    }
    Ok(acc)
}

/// The ordered product `prod_i Exp(T^{p^{i-1}} N_i)`; the empty tuple gives
/// the identity.
pub fn build_from_tuple(tuple: &NilTuple) -> ExpMat {
    let f = tuple.field();
    let p = f.characteristic();
    let mut acc = MatPoly::identity(tuple.n(), f);
    let mut layer_exp: u64 = 1;
    for nmat in tuple.mats() {
        let factor = trunc_exp(nmat, layer_exp, f).expect("tuple entries are nilpotent");
        acc = acc.mul(&factor, f);
        if p > 0 {
            layer_exp = layer_exp
                .checked_mul(p)
                .expect("layer degree overflows u64");
        }
    }
    ExpMat::new(acc, f.clone())
        .expect("an ordered product of truncated exponentials is exponential")
}

/// Factor a verified exponential matrix back into its layers: peel the
/// coefficient of `T^{p^{i-1}}`, multiply by the inverse layer, and repeat.
/// Each peel must leave zero coefficients below the next layer degree; a
/// violation means a non-exponential input slipped past the precondition
/// and is reported as [`ExpError::FactorResidue`]. The result carries no
/// trailing zero matrices.
pub fn factor(a: &ExpMat) -> Result<NilTuple, ExpError> {
    let f = a.field();
    let n = a.n();
    let p = f.characteristic();
    if p == 0 {
        if a.matrix().is_identity(f) {
            return Ok(NilTuple::empty(n, f.clone()));
        }
        let nmat = a.matrix().coeff_matrix(1, f);
        if !nmat.is_nilpotent(f) {
            return Err(ExpError::FactorResidue { layer: 1 });
        }
        let rebuilt = trunc_exp(&nmat, 1, f)?;
        if rebuilt != *a.matrix() {
            return Err(ExpError::FactorResidue { layer: 1 });
        }
        return NilTuple::new(n, vec![nmat], f.clone());
    }

    let mut residue = a.matrix().clone();
    let mut layers: Vec<MatConst> = Vec::new();
    let mut layer_exp: u64 = 1;
    let mut layer_idx = 1usize;
    while !residue.is_identity(f) {
        if layer_exp as usize > residue.max_degree() {
            return Err(ExpError::FactorResidue { layer: layer_idx });
        }
        let nmat = residue.coeff_matrix(layer_exp as usize, f);
        if !nmat.is_zero(f) {
            if !nmat.is_nilpotent_p(f) {
                return Err(ExpError::FactorResidue { layer: layer_idx });
            }
            let peel = trunc_exp(&nmat.neg(f), layer_exp, f)?;
            residue = peel.mul(&residue, f);
        }
        let next_exp = layer_exp
            .checked_mul(p)
            .expect("layer degree overflows u64");
        for d in 1..next_exp.min(residue.max_degree() as u64 + 1) {
            if !residue.coeff_matrix(d as usize, f).is_zero(f) {
                return Err(ExpError::FactorResidue { layer: layer_idx });
            }
        }
        layers.push(nmat);
        layer_exp = next_exp;
        layer_idx += 1;
    }
    // the loop only terminates right after a nonzero layer, so the tuple is
    // already trimmed
    NilTuple::new(n, layers, f.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn upper(a: Poly1, f: &Field) -> MatPoly {
        MatPoly::new(2, vec![Poly1::one(f), a, Poly1::zero(), Poly1::one(f)])
    }

    fn e12(f: &Field) -> MatConst {
        MatConst::new(2, vec![f.zero(), f.one(), f.zero(), f.zero()])
    }

    #[test]
    fn identity_and_unipotent_verify() {
        for f in [
            fp(2),
            fp(3),
            Field::rationals(),
            Field::extension(2, 2).unwrap(),
        ] {
            assert!(verify_exponential(&MatPoly::identity(3, &f), &f).is_ok());
            assert!(verify_exponential(&upper(Poly1::var(&f), &f), &f).is_ok());
        }
    }

    #[test]
    fn t_squared_entry_depends_on_characteristic() {
        let f2 = fp(2);
        let a2 = upper(Poly1::monomial(f2.one(), 2, &f2), &f2);
        assert!(verify_exponential(&a2, &f2).is_ok());

        let q = Field::rationals();
        let aq = upper(Poly1::monomial(q.one(), 2, &q), &q);
        let err = verify_exponential(&aq, &q).unwrap_err();
        match err {
            ExpFailure::FunctionalEquation {
                row,
                col,
                difference,
            } => {
                assert_eq!((row, col), (1, 2));
                // difference is exactly 2 T T'
                assert_eq!(difference.coeff(1, 1, &q), q.from_i64(2));
                assert_eq!(difference.to_string(), "2/1*T*T'");
            }
            other => panic!("wrong certificate {other:?}"),
        }
    }

    #[test]
    fn constant_non_identity_fails_at_zero() {
        let f = fp(2);
        let swap = MatPoly::new(
            2,
            vec![Poly1::zero(), Poly1::one(&f), Poly1::one(&f), Poly1::zero()],
        );
        match verify_exponential(&swap, &f).unwrap_err() {
            ExpFailure::NotIdentityAtZero { row, col, .. } => assert_eq!((row, col), (1, 1)),
            other => panic!("wrong certificate {other:?}"),
        }
    }

    #[test]
    fn trunc_exp_examples() {
        let f2 = fp(2);
        assert_eq!(
            trunc_exp(&e12(&f2), 1, &f2).unwrap(),
            upper(Poly1::var(&f2), &f2)
        );
        assert_eq!(
            trunc_exp(&e12(&f2), 2, &f2).unwrap(),
            upper(Poly1::monomial(f2.one(), 2, &f2), &f2)
        );

        // 3x3 Jordan block over F_3: I + T N + 2 T^2 N^2 since 1/2 = 2
        let f3 = fp(3);
        let jordan = MatConst::from_fn(3, |i, j| if j == i + 1 { f3.one() } else { f3.zero() });
        let exp = trunc_exp(&jordan, 1, &f3).unwrap();
        let n2 = jordan.mul(&jordan, &f3);
        let expected = MatPoly::from_fn(3, |i, j| {
            let mut p = if i == j {
                Poly1::one(&f3)
            } else {
                Poly1::zero()
            };
            if !f3.is_zero(jordan.get(i, j)) {
                p = p.add(&Poly1::monomial(jordan.get(i, j).clone(), 1, &f3), &f3);
            }
            if !f3.is_zero(n2.get(i, j)) {
                p = p.add(
                    &Poly1::monomial(f3.mul(n2.get(i, j), &f3.from_u64(2)), 2, &f3),
                    &f3,
                );
            }
            p
        });
        assert_eq!(exp, expected);

        assert_eq!(
            trunc_exp(&MatConst::identity(2, &f2), 1, &f2),
            Err(ExpError::NotNilpotent { index: 1 })
        );
    }

    #[test]
    fn build_examples() {
        let f = fp(2);
        let single = NilTuple::new(2, vec![e12(&f)], f.clone()).unwrap();
        assert_eq!(
            *build_from_tuple(&single).matrix(),
            upper(Poly1::var(&f), &f)
        );

        let double = NilTuple::new(2, vec![e12(&f), e12(&f)], f.clone()).unwrap();
        let t_plus_t2 = Poly1::from_coeffs(vec![f.zero(), f.one(), f.one()], &f);
        assert_eq!(*build_from_tuple(&double).matrix(), upper(t_plus_t2, &f));

        let empty = NilTuple::empty(2, f.clone());
        assert!(build_from_tuple(&empty).matrix().is_identity(&f));
    }

    #[test]
    fn factor_examples() {
        let f = fp(2);
        let id = ExpMat::identity(2, f.clone());
        assert!(factor(&id).unwrap().is_empty());

        let t_plus_t2 = Poly1::from_coeffs(vec![f.zero(), f.one(), f.one()], &f);
        let a = ExpMat::new(upper(t_plus_t2, &f), f.clone()).unwrap();
        let tuple = factor(&a).unwrap();
        assert_eq!(tuple.mats(), &[e12(&f), e12(&f)]);

        // interior zero layer: T^2 alone peels to (O, N)
        let t2 = ExpMat::new(upper(Poly1::monomial(f.one(), 2, &f), &f), f.clone()).unwrap();
        let tuple = factor(&t2).unwrap();
        assert_eq!(tuple.mats(), &[MatConst::zeros(2, &f), e12(&f)]);
    }

    #[test]
    fn round_trips_on_hand_built_tuples() {
        let f = fp(3);
        let cases = vec![
            vec![],
            vec![e12(&f)],
            vec![MatConst::zeros(2, &f), e12(&f)],
            vec![e12(&f), e12(&f).scale(&f.from_u64(2), &f)],
        ];
        for mats in cases {
            let tuple = NilTuple::new(2, mats, f.clone()).unwrap();
            let a = build_from_tuple(&tuple);
            assert_eq!(factor(&a).unwrap(), tuple.trim_trailing_zeros());
            assert_eq!(build_from_tuple(&factor(&a).unwrap()), a);
            assert!(a.negate_inverse_check());
        }
    }

    #[test]
    fn factor_recovers_three_layers_with_an_interior_gap() {
        let f = fp(2);
        // (N, O, N): A = (I + T N)(I + T^4 N) = I + (T + T^4) N
        let tuple =
            NilTuple::new(2, vec![e12(&f), MatConst::zeros(2, &f), e12(&f)], f.clone()).unwrap();
        let a = build_from_tuple(&tuple);
        let t_plus_t4 =
            Poly1::from_coeffs(vec![f.zero(), f.one(), f.zero(), f.zero(), f.one()], &f);
        assert_eq!(*a.matrix(), upper(t_plus_t4, &f));
        assert_eq!(factor(&a).unwrap(), tuple);
    }

    #[test]
    fn factor_recovers_distinct_commuting_layers_in_size_3() {
        let f = fp(3);
        // N2 = E12 + E23 has N2^2 = E13 and N2^3 = O; E13 commutes with it
        let n2 = MatConst::from_fn(3, |i, j| if j == i + 1 { f.one() } else { f.zero() });
        let e13 = MatConst::from_fn(3, |i, j| if (i, j) == (0, 2) { f.one() } else { f.zero() });
        let tuple = NilTuple::new(3, vec![n2, e13], f.clone()).unwrap();
        let a = build_from_tuple(&tuple);
        assert!(verify_exponential(a.matrix(), &f).is_ok());
        assert_eq!(factor(&a).unwrap(), tuple);
        assert!(a.negate_inverse_check());
    }

    #[test]
    fn extension_field_coefficients_round_trip() {
        let f4 = Field::extension(2, 2).unwrap();
        let x = f4.from_index(2).unwrap();
        // N with an entry outside the prime field
        let nmat = MatConst::new(2, vec![f4.zero(), x, f4.zero(), f4.zero()]);
        let tuple = NilTuple::new(2, vec![nmat.clone(), nmat], f4.clone()).unwrap();
        let a = build_from_tuple(&tuple);
        assert!(verify_exponential(a.matrix(), &f4).is_ok());
        assert_eq!(factor(&a).unwrap(), tuple);
    }

    #[test]
    fn semigroup_specialization() {
        let f = fp(3);
        let tuple = NilTuple::new(2, vec![e12(&f), e12(&f)], f.clone()).unwrap();
        let a = build_from_tuple(&tuple);
        for s in f.elements().unwrap() {
            for t in f.elements().unwrap() {
                assert_eq!(a.eval(&s).mul(&a.eval(&t), &f), a.eval(&f.add(&s, &t)));
            }
        }
    }

    #[test]
    fn characteristic_zero_factors_in_one_layer() {
        let q = Field::rationals();
        let jordan = MatConst::from_fn(3, |i, j| if j == i + 1 { q.from_i64(2) } else { q.zero() });
        let m = trunc_exp(&jordan, 1, &q).unwrap();
        let a = ExpMat::new(m, q.clone()).unwrap();
        let tuple = factor(&a).unwrap();
        assert_eq!(tuple.len(), 1);
        assert_eq!(tuple.mats()[0], jordan);
        assert_eq!(build_from_tuple(&tuple), a);

        // two layers are rejected outright in characteristic zero
        assert_eq!(
            NilTuple::new(3, vec![jordan.clone(), jordan], q.clone()),
            Err(ExpError::TooManyLayersCharZero { len: 2 })
        );
    }

    #[test]
    fn tuple_invariants_are_enforced() {
        let f = fp(2);
        let e21 = MatConst::new(2, vec![f.zero(), f.zero(), f.one(), f.zero()]);
        assert_eq!(
            NilTuple::new(2, vec![MatConst::identity(2, &f)], f.clone()),
            Err(ExpError::NotNilpotent { index: 1 })
        );
        assert_eq!(
            NilTuple::new(2, vec![e12(&f), e21], f.clone()),
            Err(ExpError::NotCommuting { i: 1, j: 2 })
        );
    }
}
