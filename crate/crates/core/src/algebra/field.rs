//! Exact coefficient fields: the rationals, prime fields `F_p`, and
//! extensions `GF(p^m)` with a fixed irreducible modulus.
//!
//! A [`Field`] is a structure object; elements are passive [`FieldElem`]
//! data and every operation goes through the field (`f.add(&a, &b)`).
//! Elements are kept in canonical form at all times: reduced residues for
//! the finite fields, reduced fractions for the rationals, so `==` is
//! mathematical equality.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic must be 0 or a prime, got {0}")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    BadExtension,
    #[error("element index {index} out of range for a field of order {order}")]
    IndexOutOfRange { index: u64, order: u64 },
    #[error("the field is infinite")]
    InfiniteField,
    #[error("division by zero")]
    DivisionByZero,
    #[error("no embedding of {from} into {to}")]
    NoEmbedding { from: String, to: String },
}

/// An element of a [`Field`], in canonical form.
///
/// The representation is chosen so that structural equality coincides with
/// equality in the field: residues are reduced, extension coordinates have
/// fixed length `m`, fractions are reduced with positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElem {
    /// Residue in `F_p`, in `0..p`.
    Mod(u64),
    /// Coordinates in the power basis `1, x, .., x^{m-1}` of `GF(p^m)`;
    /// always length `m`, entries in `0..p`.
    Ext(Vec<u64>),
    /// Reduced fraction.
    Rat(BigRational),
}

impl fmt::Display for FieldElem {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Mod(c) => write!(out, "{c}"),
            FieldElem::Rat(r) => write!(out, "{}/{}", r.numer(), r.denom()),
            FieldElem::Ext(coords) => {
                let mut first = true;
                for (i, c) in coords.iter().enumerate() {
                    if *c == 0 {
                        continue;
                    }
                    if !first {
                        write!(out, "+")?;
                    }
                    first = false;
                    match (i, c) {
                        (0, c) => write!(out, "{c}")?,
                        (1, 1) => write!(out, "x")?,
                        (1, c) => write!(out, "{c}x")?,
                        (i, 1) => write!(out, "x^{i}")?,
                        (i, c) => write!(out, "{c}x^{i}")?,
                    }
                }
                if first {
                    write!(out, "0")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Kind {
    Rational,
    Prime {
        p: u64,
    },
    /// `modulus` is the monic irreducible, ascending coefficients,
    /// length `m + 1` with leading entry 1.
    Extension {
        p: u64,
        m: usize,
        modulus: Vec<u64>,
    },
}

/// One of `Q`, `F_p`, or `GF(p^m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    kind: Kind,
}

impl fmt::Display for Field {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Rational => write!(out, "Q"),
            Kind::Prime { p } => write!(out, "F_{p}"),
            Kind::Extension { p, m, .. } => write!(out, "GF({p}^{m})"),
        }
    }
}

impl Field {
    pub fn rationals() -> Field {
        Field {
            kind: Kind::Rational,
        }
    }

    pub fn prime(p: u64) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Field {
            kind: Kind::Prime { p },
        })
    }

    /// `GF(p^m)` with the deterministic modulus: the monic irreducible of
    /// degree `m` whose non-leading coefficient vector has the least value
    /// `sum c_i p^i`. `m = 1` yields the prime field itself.
    pub fn extension(p: u64, m: usize) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        match m {
            0 => Err(FieldError::BadExtension),
            1 => Field::prime(p),
            _ => {
                let modulus = least_irreducible(p, m);
                Ok(Field {
                    kind: Kind::Extension { p, m, modulus },
                })
            }
        }
    }

    /// 0 for the rationals, `p` otherwise.
    pub fn characteristic(&self) -> u64 {
        match &self.kind {
            Kind::Rational => 0,
            Kind::Prime { p } => *p,
            Kind::Extension { p, .. } => *p,
        }
    }

    pub fn extension_degree(&self) -> usize {
        match &self.kind {
            Kind::Extension { m, .. } => *m,
            _ => 1,
        }
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        match &self.kind {
            Kind::Rational => None,
            Kind::Prime { p } => Some(*p),
            Kind::Extension { p, m, .. } => Some(p.pow(*m as u32)),
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self.kind, Kind::Rational)
    }

    /// The stored modulus of `GF(p^m)`, ascending coefficients, monic.
    pub fn modulus(&self) -> Option<&[u64]> {
        match &self.kind {
            Kind::Extension { modulus, .. } => Some(modulus),
            _ => None,
        }
    }

    pub fn zero(&self) -> FieldElem {
        match &self.kind {
            Kind::Rational => FieldElem::Rat(BigRational::zero()),
            Kind::Prime { .. } => FieldElem::Mod(0),
            Kind::Extension { m, .. } => FieldElem::Ext(vec![0; *m]),
        }
    }

    pub fn one(&self) -> FieldElem {
        match &self.kind {
            Kind::Rational => FieldElem::Rat(BigRational::one()),
            Kind::Prime { .. } => FieldElem::Mod(1),
            Kind::Extension { m, .. } => {
                let mut coords = vec![0; *m];
                coords[0] = 1;
                FieldElem::Ext(coords)
            }
        }
    }

    pub fn from_u64(&self, v: u64) -> FieldElem {
        match &self.kind {
            Kind::Rational => FieldElem::Rat(BigRational::from_integer(BigInt::from(v))),
            Kind::Prime { p } => FieldElem::Mod(v % p),
            Kind::Extension { p, m, .. } => {
                let mut coords = vec![0; *m];
                coords[0] = v % p;
                FieldElem::Ext(coords)
            }
        }
    }

    pub fn from_i64(&self, v: i64) -> FieldElem {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> FieldElem {
        match &self.kind {
            Kind::Rational => FieldElem::Rat(BigRational::from_integer(v.clone())),
            _ => {
                let p = BigInt::from(self.characteristic());
                let mut r = v % &p;
                if r.is_negative() {
                    r += &p;
                }
                let digits = r.to_u64_digits().1;
                self.from_u64(digits.first().copied().unwrap_or(0))
            }
        }
    }

    pub fn is_zero(&self, a: &FieldElem) -> bool {
        *a == self.zero()
    }

    pub fn is_one(&self, a: &FieldElem) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        match (&self.kind, a, b) {
            (Kind::Rational, FieldElem::Rat(x), FieldElem::Rat(y)) => FieldElem::Rat(x + y),
            (Kind::Prime { p }, FieldElem::Mod(x), FieldElem::Mod(y)) => {
                FieldElem::Mod(addm(*x, *y, *p))
            }
            (Kind::Extension { p, .. }, FieldElem::Ext(x), FieldElem::Ext(y)) => FieldElem::Ext(
                x.iter()
                    .zip(y.iter())
                    .map(|(u, v)| addm(*u, *v, *p))
                    .collect(),
            ),
            _ => panic!("field element does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        match (&self.kind, a) {
            (Kind::Rational, FieldElem::Rat(x)) => FieldElem::Rat(-x),
            (Kind::Prime { p }, FieldElem::Mod(x)) => FieldElem::Mod(negm(*x, *p)),
            (Kind::Extension { p, .. }, FieldElem::Ext(x)) => {
                FieldElem::Ext(x.iter().map(|u| negm(*u, *p)).collect())
            }
            _ => panic!("field element does not belong to {self}"),
        }
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        match (&self.kind, a, b) {
            (Kind::Rational, FieldElem::Rat(x), FieldElem::Rat(y)) => FieldElem::Rat(x * y),
            (Kind::Prime { p }, FieldElem::Mod(x), FieldElem::Mod(y)) => {
                FieldElem::Mod(mulm(*x, *y, *p))
            }
            (Kind::Extension { p, m, modulus }, FieldElem::Ext(x), FieldElem::Ext(y)) => {
                let prod = fpx_mul(x, y, *p);
                let red = fpx_rem(&prod, modulus, *p);
                FieldElem::Ext(pad(red, *m))
            }
            _ => panic!("field element does not belong to {self}"),
        }
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match (&self.kind, a) {
            (Kind::Rational, FieldElem::Rat(x)) => FieldElem::Rat(x.recip()),
            (Kind::Prime { p }, FieldElem::Mod(x)) => FieldElem::Mod(invm(*x, *p)),
            (Kind::Extension { p, m, modulus }, FieldElem::Ext(x)) => {
                let (g, u, _) = fpx_xgcd(x, modulus, *p);
                // g is a nonzero constant since the modulus is irreducible
                debug_assert_eq!(g.len(), 1);
                let scale = invm(g[0], *p);
                let coords = u.iter().map(|c| mulm(*c, scale, *p)).collect::<Vec<_>>();
                let red = fpx_rem(&coords, modulus, *p);
                FieldElem::Ext(pad(red, *m))
            }
            _ => panic!("field element does not belong to {self}"),
        })
    }

    pub fn div(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &FieldElem, mut e: u64) -> FieldElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// The fixed-basis integer encoding `sum c_i p^i` of a finite-field
    /// element. Panics on rationals and on foreign elements.
    pub fn index(&self, a: &FieldElem) -> u64 {
        match (&self.kind, a) {
            (Kind::Prime { .. }, FieldElem::Mod(x)) => *x,
            (Kind::Extension { p, .. }, FieldElem::Ext(coords)) => {
                coords.iter().rev().fold(0, |acc, c| acc * p + c)
            }
            _ => panic!("index is only defined for elements of a finite field"),
        }
    }

    pub fn from_index(&self, index: u64) -> Result<FieldElem, FieldError> {
        let order = self.order().ok_or(FieldError::InfiniteField)?;
        if index >= order {
            return Err(FieldError::IndexOutOfRange { index, order });
        }
        match &self.kind {
            Kind::Prime { .. } => Ok(FieldElem::Mod(index)),
            Kind::Extension { p, m, .. } => {
                let mut coords = Vec::with_capacity(*m);
                let mut rest = index;
                for _ in 0..*m {
                    coords.push(rest % p);
                    rest /= p;
                }
                Ok(FieldElem::Ext(coords))
            }
            Kind::Rational => unreachable!(),
        }
    }

    /// All elements in index order.
    pub fn elements(&self) -> Result<Vec<FieldElem>, FieldError> {
        let order = self.order().ok_or(FieldError::InfiniteField)?;
        (0..order).map(|i| self.from_index(i)).collect()
    }

    /// Map an element of `from` into this field. Supported: the identity,
    /// and the embedding of a prime field into an extension of the same
    /// characteristic.
    pub fn embed(&self, a: &FieldElem, from: &Field) -> Result<FieldElem, FieldError> {
        if from == self {
            return Ok(a.clone());
        }
        match (&from.kind, &self.kind, a) {
            (Kind::Prime { p }, Kind::Extension { p: q, .. }, FieldElem::Mod(x)) if p == q => {
                Ok(self.from_u64(*x))
            }
            _ => Err(FieldError::NoEmbedding {
                from: from.to_string(),
                to: self.to_string(),
            }),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn addm(a: u64, b: u64, p: u64) -> u64 {
    (a + b) % p
}

fn negm(a: u64, p: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powm(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm(acc, a, p);
        }
        a = mulm(a, a, p);
        e >>= 1;
    }
    acc
}

fn invm(a: u64, p: u64) -> u64 {
    powm(a % p, p - 2, p)
}

fn pad(mut v: Vec<u64>, m: usize) -> Vec<u64> {
    v.resize(m, 0);
    v
}

// Polynomials over F_p as trimmed ascending coefficient vectors; only what
// the extension-field arithmetic needs.

fn fpx_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fpx_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (a, b): (Vec<u64>, Vec<u64>) = (trimmed(a), trimmed(b));
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = addm(out[i + j], mulm(*x, *y, p), p);
        }
    }
    fpx_trim(&mut out);
    out
}

fn trimmed(a: &[u64]) -> Vec<u64> {
    let mut v = a.to_vec();
    fpx_trim(&mut v);
    v
}

/// Remainder of `a` modulo `d` (`d` nonzero, not necessarily monic).
fn fpx_rem(a: &[u64], d: &[u64], p: u64) -> Vec<u64> {
    let d = trimmed(d);
    assert!(!d.is_empty(), "division by the zero polynomial");
    let lead_inv = invm(*d.last().unwrap(), p);
    let mut rem = trimmed(a);
    while rem.len() >= d.len() {
        let shift = rem.len() - d.len();
        let factor = mulm(*rem.last().unwrap(), lead_inv, p);
        for (i, c) in d.iter().enumerate() {
            let t = mulm(factor, *c, p);
            rem[shift + i] = addm(rem[shift + i], negm(t, p), p);
        }
        fpx_trim(&mut rem);
    }
    rem
}

/// Extended Euclid: returns `(g, u, v)` with `u*a + v*b = g`, `g` trimmed.
fn fpx_xgcd(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (trimmed(a), trimmed(b));
    let (mut u0, mut u1) = (vec![1u64], Vec::new());
    let (mut v0, mut v1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = fpx_divrem(&r0, &r1, p);
        let nu = fpx_sub(&u0, &fpx_mul(&q, &u1, p), p);
        let nv = fpx_sub(&v0, &fpx_mul(&q, &v1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        u0 = std::mem::replace(&mut u1, nu);
        v0 = std::mem::replace(&mut v1, nv);
    }
    (r0, u0, v0)
}

fn fpx_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = addm(x, negm(y, p), p);
    }
    fpx_trim(&mut out);
    out
}

fn fpx_divrem(a: &[u64], d: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let d = trimmed(d);
    assert!(!d.is_empty(), "division by the zero polynomial");
    let lead_inv = invm(*d.last().unwrap(), p);
    let mut rem = trimmed(a);
    if rem.len() < d.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![0u64; rem.len() - d.len() + 1];
    while rem.len() >= d.len() {
        let shift = rem.len() - d.len();
        let factor = mulm(*rem.last().unwrap(), lead_inv, p);
        quot[shift] = factor;
        for (i, c) in d.iter().enumerate() {
            let t = mulm(factor, *c, p);
            rem[shift + i] = addm(rem[shift + i], negm(t, p), p);
        }
        fpx_trim(&mut rem);
    }
    fpx_trim(&mut quot);
    (quot, rem)
}

/// Trial division: a reducible monic polynomial of degree `m >= 2` has a
/// monic factor of degree at most `m/2`.
fn fpx_is_irreducible(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    for d in 1..=m / 2 {
        let count = p.pow(d as u32);
        for k in 0..count {
            let mut divisor = digits(k, p, d);
            divisor.push(1);
            if fpx_rem(f, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn digits(mut k: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(k % p);
        k /= p;
    }
    out
}

fn least_irreducible(p: u64, m: usize) -> Vec<u64> {
    let count = p
        .checked_pow(m as u32)
        .expect("extension field order overflows u64");
    for c in 0..count {
        let mut f = digits(c, p, m);
        f.push(1);
        if fpx_is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_elem(f: &Field, rng: &mut StdRng) -> FieldElem {
        match f.order() {
            Some(q) => f.from_index(rng.gen_range(0..q)).unwrap(),
            None => {
                let n = rng.gen_range(-20i64..=20);
                let d = rng.gen_range(1i64..=20);
                f.div(&f.from_i64(n), &f.from_i64(d)).unwrap()
            }
        }
    }

    fn check_axioms(f: &Field, seed: u64) {
        let mut rng = StdRng::seed_from_u64(seed);
        for _ in 0..200 {
            let a = random_elem(f, &mut rng);
            let b = random_elem(f, &mut rng);
            let c = random_elem(f, &mut rng);
            assert_eq!(f.add(&a, &b), f.add(&b, &a));
            assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
            assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
            assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            assert_eq!(
                f.mul(&a, &f.add(&b, &c)),
                f.add(&f.mul(&a, &b), &f.mul(&a, &c))
            );
            assert_eq!(f.add(&a, &f.neg(&a)), f.zero());
            assert_eq!(f.mul(&a, &f.one()), a);
            if !f.is_zero(&a) {
                let ai = f.inv(&a).unwrap();
                assert_eq!(f.mul(&a, &ai), f.one());
            }
        }
    }

    #[test]
    fn field_axioms_hold_on_random_triples() {
        check_axioms(&Field::prime(2).unwrap(), 1);
        check_axioms(&Field::prime(5).unwrap(), 2);
        check_axioms(&Field::extension(2, 2).unwrap(), 3);
        check_axioms(&Field::extension(3, 2).unwrap(), 4);
        check_axioms(&Field::extension(2, 3).unwrap(), 5);
        check_axioms(&Field::rationals(), 6);
    }

    #[test]
    fn deterministic_moduli() {
        // least monic irreducibles in the integer-encoding order
        assert_eq!(
            Field::extension(2, 2).unwrap().modulus(),
            Some(&[1, 1, 1][..])
        );
        assert_eq!(
            Field::extension(2, 3).unwrap().modulus(),
            Some(&[1, 1, 0, 1][..])
        );
        assert_eq!(
            Field::extension(3, 2).unwrap().modulus(),
            Some(&[1, 0, 1][..])
        );
    }

    #[test]
    fn extension_of_degree_one_is_the_prime_field() {
        assert_eq!(Field::extension(5, 1).unwrap(), Field::prime(5).unwrap());
    }

    #[test]
    fn rejects_non_prime_characteristic() {
        assert_eq!(Field::prime(6), Err(FieldError::NotPrime(6)));
        assert_eq!(Field::prime(1), Err(FieldError::NotPrime(1)));
        assert_eq!(Field::extension(4, 2), Err(FieldError::NotPrime(4)));
    }

    #[test]
    fn index_round_trip() {
        for f in [
            Field::prime(7).unwrap(),
            Field::extension(2, 2).unwrap(),
            Field::extension(3, 2).unwrap(),
        ] {
            let q = f.order().unwrap();
            for i in 0..q {
                let e = f.from_index(i).unwrap();
                assert_eq!(f.index(&e), i);
            }
            assert!(f.from_index(q).is_err());
        }
    }

    #[test]
    fn gf4_multiplication_table_spot_checks() {
        let f = Field::extension(2, 2).unwrap();
        let x = f.from_index(2).unwrap();
        // x^2 = x + 1 under the modulus x^2 + x + 1
        assert_eq!(f.mul(&x, &x), f.from_index(3).unwrap());
        // x * (x + 1) = x^2 + x = 1
        assert_eq!(f.mul(&x, &f.from_index(3).unwrap()), f.one());
    }

    #[test]
    fn rational_elements_reduce() {
        let f = Field::rationals();
        let half = f.div(&f.from_i64(2), &f.from_i64(4)).unwrap();
        assert_eq!(half, f.div(&f.from_i64(1), &f.from_i64(2)).unwrap());
        assert_eq!(f.inv(&f.zero()), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn embeds_prime_field_into_extension() {
        let fp = Field::prime(2).unwrap();
        let f4 = Field::extension(2, 2).unwrap();
        let one = f4.embed(&fp.one(), &fp).unwrap();
        assert_eq!(one, f4.one());
        assert!(fp.embed(&f4.from_index(2).unwrap(), &f4).is_err());
    }
}
