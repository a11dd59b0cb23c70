//! Representations of the elementary abelian group `(Z/pZ)^r` in
//! `GL(n, k)`, coordinatized by commuting `p`-nilpotent tuples, and the
//! resulting pairing of representations with
//! `(exponential matrix, trailing-padding count)`.
//!
//! The map `rho(a_1, .., a_r) = prod (I + N_i)^{a_i}` identifies tuples
//! with representations; the layered product
//! `A(T) = prod Exp(T^{p^{i-1}} N_i)` sends a representation to an
//! exponential matrix. Trailing zero layers are exactly what the map
//! forgets, so a representation is equivalent data to its minimal
//! truncation plus the count of trailing trivial generators.

use thiserror::Error;

use crate::algebra::{Field, MatConst};
use crate::expcore::{build_from_tuple, factor, ExpError, ExpMat, NilTuple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModRepError {
    #[error("representations of (Z/pZ)^r require positive characteristic")]
    CharZero,
    #[error("exponent vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("enumeration space of {count} candidates is too large")]
    EnumerationTooLarge { count: u128 },
    #[error(transparent)]
    Exp(#[from] ExpError),
}

/// A homomorphism `(Z/pZ)^r -> GL(n, k)`, stored as its nilpotent tuple.
/// The length `r` counts trailing zero layers, which are meaningful: they
/// are the fiber coordinate of the pairing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rep {
    tuple: NilTuple,
}

impl Rep {
    pub fn new(tuple: NilTuple) -> Result<Rep, ModRepError> {
        if tuple.field().characteristic() == 0 {
            return Err(ModRepError::CharZero);
        }
        Ok(Rep { tuple })
    }

    /// The trivial representation of `(Z/pZ)^r` (all generators map to I).
    pub fn trivial(n: usize, r: usize, field: Field) -> Result<Rep, ModRepError> {
        if field.characteristic() == 0 {
            return Err(ModRepError::CharZero);
        }
        let mats = (0..r).map(|_| MatConst::zeros(n, &field)).collect();
        let tuple = NilTuple::new(n, mats, field).expect("zero matrices satisfy the invariants");
        Ok(Rep { tuple })
    }

    pub fn r(&self) -> usize {
        self.tuple.len()
    }

    pub fn n(&self) -> usize {
        self.tuple.n()
    }

    pub fn tuple(&self) -> &NilTuple {
        &self.tuple
    }

    pub fn field(&self) -> &Field {
        self.tuple.field()
    }
}

/// `rho(a_1, .., a_r) = prod_i (I + N_i)^{a_i}`; exponents are residues
/// mod `p`.
pub fn rho_eval(rep: &Rep, exponents: &[u64]) -> Result<MatConst, ModRepError> {
    if exponents.len() != rep.r() {
        return Err(ModRepError::LengthMismatch {
            expected: rep.r(),
            got: exponents.len(),
        });
    }
    let f = rep.field();
    let p = f.characteristic();
    let mut acc = MatConst::identity(rep.n(), f);
    for (nmat, a) in rep.tuple().mats().iter().zip(exponents) {
        let base = MatConst::identity(rep.n(), f).add(nmat, f);
        acc = acc.mul(&base.pow(a % p, f), f);
    }
    Ok(acc)
}

/// Independent homomorphism oracle on raw data: exhaustively checks
/// `rho(a) rho(b) = rho(a + b)` over all pairs of exponent vectors,
/// without assuming the tuple invariants. Kept separate from the checked
/// constructor as the anti-regression check for the tuple-representation
/// bijection.
pub fn verify_hom_raw(n: usize, mats: &[MatConst], f: &Field) -> bool {
    let p = f.characteristic();
    assert!(
        p > 0,
        "homomorphism checking requires positive characteristic"
    );
    let r = mats.len();
    let count = (p as u128).pow(r as u32);
    let eval = |exps: &[u64]| {
        let mut acc = MatConst::identity(n, f);
        for (nmat, a) in mats.iter().zip(exps) {
            let base = MatConst::identity(n, f).add(nmat, f);
            acc = acc.mul(&base.pow(*a, f), f);
        }
        acc
    };
    let decode = |mut k: u128| -> Vec<u64> {
        (0..r)
            .map(|_| {
                let d = (k % p as u128) as u64;
                k /= p as u128;
                d
            })
            .collect()
    };
    for ka in 0..count {
        let a = decode(ka);
        for kb in 0..count {
            let b = decode(kb);
            let sum: Vec<u64> = a.iter().zip(&b).map(|(x, y)| (x + y) % p).collect();
            if eval(&a).mul(&eval(&b), f) != eval(&sum) {
                return false;
            }
        }
    }
    true
}

/// Exhaustive check that a representation really is a homomorphism. True
/// for every checked [`Rep`]; the invariants force it.
pub fn verify_hom(rep: &Rep) -> bool {
    verify_hom_raw(rep.n(), rep.tuple().mats(), rep.field())
}

/// `pi(rho) = prod Exp(T^{p^{i-1}} N_i)`, the identity for `r = 0`.
pub fn pi_map(rep: &Rep) -> ExpMat {
    build_from_tuple(rep.tuple())
}

/// Index of the last nontrivial generator; 0 exactly for the trivial
/// representation.
pub fn l_of(rep: &Rep) -> usize {
    let f = rep.field();
    rep.tuple()
        .mats()
        .iter()
        .rposition(|m| !m.is_zero(f))
        .map_or(0, |i| i + 1)
}

/// Truncation at the last nontrivial generator; idempotent, and invariant
/// under [`pi_map`].
pub fn rho_min(rep: &Rep) -> Rep {
    let l = l_of(rep);
    let mats = rep.tuple().mats()[..l].to_vec();
    let tuple = NilTuple::new(rep.n(), mats, rep.field().clone())
        .expect("truncation preserves the invariants");
    Rep { tuple }
}

/// The pairing `rho -> (pi(rho_min), r - l(rho))`; the first component
/// equals `pi(rho)`.
pub fn to_pair(rep: &Rep) -> (ExpMat, usize) {
    (pi_map(&rho_min(rep)), rep.r() - l_of(rep))
}

/// Inverse pairing: factor the matrix and append `padding` trailing zero
/// layers.
pub fn from_pair(a: &ExpMat, padding: usize) -> Result<Rep, ModRepError> {
    if a.field().characteristic() == 0 {
        return Err(ModRepError::CharZero);
    }
    let factored = factor(a)?;
    let n = factored.n();
    let mut mats = factored.mats().to_vec();
    mats.extend((0..padding).map(|_| MatConst::zeros(n, a.field())));
    let tuple =
        NilTuple::new(n, mats, a.field().clone()).expect("zero padding preserves the invariants");
    Ok(Rep { tuple })
}

const ENUMERATION_LIMIT: u128 = 1 << 22;

/// All `n x n` matrices with `N^p = O` over a finite field, in row-major
/// lexicographic order of the entry indices (last entry varies fastest).
pub fn enumerate_nilpotent(n: usize, f: &Field) -> Result<Vec<MatConst>, ModRepError> {
    assert!(
        f.characteristic() > 0,
        "enumeration requires a finite field"
    );
    let q = f.order().expect("finite field") as u128;
    let count = q
        .checked_pow((n * n) as u32)
        .filter(|c| *c <= ENUMERATION_LIMIT)
        .ok_or(ModRepError::EnumerationTooLarge {
            count: q.saturating_pow((n * n) as u32),
        })?;
    let mut out = Vec::new();
    for k in 0..count {
        let mut rest = k;
        let mut indices = vec![0u64; n * n];
        for slot in indices.iter_mut().rev() {
            *slot = (rest % q) as u64;
            rest /= q;
        }
        let cand = MatConst::from_fn(n, |i, j| {
            f.from_index(indices[i * n + j]).expect("digit in range")
        });
        if cand.is_nilpotent_p(f) {
            out.push(cand);
        }
    }
    Ok(out)
}

/// All elements of `N_r(n, F_q)`: `r`-tuples of pairwise-commuting
/// `p`-nilpotent matrices, in lexicographic order with the last component
/// varying fastest. `r = 0` yields the single empty tuple.
pub fn enumerate_nil_tuples(n: usize, r: usize, f: &Field) -> Result<Vec<NilTuple>, ModRepError> {
    let nilpotents = enumerate_nilpotent(n, f)?;
    let mut out = Vec::new();
    let mut stack: Vec<MatConst> = Vec::new();
    extend_tuples(n, r, f, &nilpotents, &mut stack, &mut out);
    Ok(out)
}

fn extend_tuples(
    n: usize,
    r: usize,
    f: &Field,
    nilpotents: &[MatConst],
    stack: &mut Vec<MatConst>,
    out: &mut Vec<NilTuple>,
) {
    if stack.len() == r {
        let tuple = NilTuple::new(n, stack.clone(), f.clone())
            .expect("enumeration respects the invariants");
        out.push(tuple);
        return;
    }
    for cand in nilpotents {
        if stack.iter().all(|m| m.mul(cand, f) == cand.mul(m, f)) {
            stack.push(cand.clone());
            extend_tuples(n, r, f, nilpotents, stack, out);
            stack.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{MatPoly, Poly1};

    fn fp(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn e12(f: &Field) -> MatConst {
        MatConst::new(2, vec![f.zero(), f.one(), f.zero(), f.zero()])
    }

    fn rep_of(mats: Vec<MatConst>, f: &Field) -> Rep {
        Rep::new(NilTuple::new(2, mats, f.clone()).unwrap()).unwrap()
    }

    fn upper(a: Poly1, f: &Field) -> MatPoly {
        MatPoly::new(2, vec![Poly1::one(f), a, Poly1::zero(), Poly1::one(f)])
    }

    #[test]
    fn counting_oracle_for_nilpotent_tuples() {
        // brute force over all 16 (resp. 256) candidates
        let f = fp(2);
        assert_eq!(enumerate_nilpotent(2, &f).unwrap().len(), 4);
        assert_eq!(enumerate_nil_tuples(2, 1, &f).unwrap().len(), 4);
        assert_eq!(enumerate_nil_tuples(2, 2, &f).unwrap().len(), 10);
        assert_eq!(enumerate_nil_tuples(2, 0, &f).unwrap().len(), 1);
    }

    #[test]
    fn rho_eval_examples() {
        let f2 = fp(2);
        let rep = rep_of(vec![e12(&f2)], &f2);
        assert_eq!(
            rho_eval(&rep, &[1]).unwrap(),
            MatConst::new(2, vec![f2.one(), f2.one(), f2.zero(), f2.one()])
        );
        assert_eq!(rho_eval(&rep, &[0]).unwrap(), MatConst::identity(2, &f2));

        let f3 = fp(3);
        let rep3 = rep_of(vec![e12(&f3)], &f3);
        assert_eq!(
            rho_eval(&rep3, &[2]).unwrap(),
            MatConst::new(2, vec![f3.one(), f3.from_u64(2), f3.zero(), f3.one()])
        );

        assert_eq!(
            rho_eval(&rep3, &[1, 1]),
            Err(ModRepError::LengthMismatch {
                expected: 1,
                got: 2
            })
        );
    }

    #[test]
    fn verify_hom_oracle() {
        let f = fp(2);
        assert!(verify_hom(&rep_of(vec![e12(&f)], &f)));
        assert!(verify_hom(&rep_of(vec![e12(&f), e12(&f)], &f)));

        // raw invariant-violating pair: not a homomorphism
        let e21 = MatConst::new(2, vec![f.zero(), f.zero(), f.one(), f.zero()]);
        assert!(!verify_hom_raw(2, &[e12(&f), e21], &f));
    }

    #[test]
    fn pi_map_examples() {
        let f = fp(2);
        let trivial = Rep::trivial(2, 0, f.clone()).unwrap();
        assert!(pi_map(&trivial).matrix().is_identity(&f));

        let nn = rep_of(vec![e12(&f), e12(&f)], &f);
        let t_plus_t2 = Poly1::from_coeffs(vec![f.zero(), f.one(), f.one()], &f);
        assert_eq!(*pi_map(&nn).matrix(), upper(t_plus_t2, &f));

        let n0 = rep_of(vec![e12(&f), MatConst::zeros(2, &f)], &f);
        assert_eq!(*pi_map(&n0).matrix(), upper(Poly1::var(&f), &f));
    }

    #[test]
    fn minimal_truncation() {
        let f = fp(2);
        let zero = MatConst::zeros(2, &f);

        let trivial = Rep::trivial(2, 0, f.clone()).unwrap();
        assert_eq!(l_of(&trivial), 0);
        assert_eq!(rho_min(&trivial), trivial);

        let n00 = rep_of(vec![e12(&f), zero.clone(), zero.clone()], &f);
        assert_eq!(l_of(&n00), 1);
        assert_eq!(rho_min(&n00), rep_of(vec![e12(&f)], &f));

        let on = rep_of(vec![zero.clone(), e12(&f)], &f);
        assert_eq!(l_of(&on), 2);
        assert_eq!(rho_min(&on), on);
        assert_eq!(rho_min(&rho_min(&on)), on);

        assert_eq!(pi_map(&n00), pi_map(&rho_min(&n00)));
    }

    #[test]
    fn pairing_examples() {
        let f = fp(2);
        let zero = MatConst::zeros(2, &f);

        let trivial = Rep::trivial(2, 0, f.clone()).unwrap();
        let (a, pad) = to_pair(&trivial);
        assert!(a.matrix().is_identity(&f));
        assert_eq!(pad, 0);

        let n00 = rep_of(vec![e12(&f), zero.clone(), zero.clone()], &f);
        let (a, pad) = to_pair(&n00);
        assert_eq!(*a.matrix(), upper(Poly1::var(&f), &f));
        assert_eq!(pad, 2);
        assert_eq!(from_pair(&a, pad).unwrap(), n00);

        let nn = rep_of(vec![e12(&f), e12(&f)], &f);
        let (a, pad) = to_pair(&nn);
        assert_eq!(pad, 0);
        assert_eq!(from_pair(&a, 0).unwrap(), nn);

        // (I, 3) is the trivial representation of (Z/pZ)^3
        let id = ExpMat::identity(2, f.clone());
        assert_eq!(
            from_pair(&id, 3).unwrap(),
            Rep::trivial(2, 3, f.clone()).unwrap()
        );

        // factor gives (O, N); one pad appends a trailing zero
        let t2 = ExpMat::new(upper(Poly1::monomial(f.one(), 2, &f), &f), f.clone()).unwrap();
        let rep = from_pair(&t2, 1).unwrap();
        assert_eq!(rep.tuple().mats(), &[zero.clone(), e12(&f), zero]);
    }

    #[test]
    fn pairing_round_trips_on_the_enumerated_catalog() {
        let f = fp(2);
        for r in 0..=2 {
            for tuple in enumerate_nil_tuples(2, r, &f).unwrap() {
                let rep = Rep::new(tuple).unwrap();
                assert!(verify_hom(&rep));
                assert_eq!(pi_map(&rep), pi_map(&rho_min(&rep)));
                let (a, pad) = to_pair(&rep);
                assert_eq!(from_pair(&a, pad).unwrap(), rep);
            }
        }
    }

    #[test]
    fn enumeration_and_round_trips_over_gf4() {
        let f4 = Field::extension(2, 2).unwrap();
        // nilpotent 2x2 matrices over F_q number q^2
        let singles = enumerate_nil_tuples(2, 1, &f4).unwrap();
        assert_eq!(singles.len(), 16);
        for tuple in singles {
            let rep = Rep::new(tuple).unwrap();
            assert!(verify_hom(&rep));
            let (a, pad) = to_pair(&rep);
            assert_eq!(from_pair(&a, pad).unwrap(), rep);
        }
    }

    #[test]
    fn factor_build_round_trips_exhaustively_for_p3_r2() {
        let f = fp(3);
        for r in 0..=2 {
            for tuple in enumerate_nil_tuples(2, r, &f).unwrap() {
                let a = build_from_tuple(&tuple);
                assert_eq!(factor(&a).unwrap(), tuple.trim_trailing_zeros());
            }
        }
    }

    #[test]
    fn char_zero_is_rejected() {
        let q = Field::rationals();
        assert_eq!(Rep::trivial(2, 1, q.clone()), Err(ModRepError::CharZero));
        let id = ExpMat::identity(2, q);
        assert_eq!(from_pair(&id, 0), Err(ModRepError::CharZero));
    }
}
