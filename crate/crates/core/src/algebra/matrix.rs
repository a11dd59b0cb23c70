//! Dense square matrices over a [`Field`] (`MatConst`) and over `k[T]`
//! (`MatPoly`), with exact determinants and inverses.
//!
//! Determinants use cofactor expansion up to 4x4 and fraction-free
//! Bareiss elimination above, so no fraction field is ever needed over
//! `k[T]`.

use std::fmt;

use thiserror::Error;

use super::field::{Field, FieldElem, FieldError};
use super::poly::Poly1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("matrix is not unimodular over k[T]: det = {det}")]
    NotUnimodular { det: Poly1 },
    #[error("matrix is singular")]
    Singular,
}

/// Square matrix over the base field, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatConst {
    n: usize,
    entries: Vec<FieldElem>,
}

impl MatConst {
    pub fn new(n: usize, entries: Vec<FieldElem>) -> MatConst {
        assert!(n >= 1, "matrices have positive size");
        assert_eq!(entries.len(), n * n, "entry vector must have n^2 entries");
        MatConst { n, entries }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> FieldElem) -> MatConst {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        MatConst::new(n, entries)
    }

    pub fn identity(n: usize, f: &Field) -> MatConst {
        MatConst::from_fn(n, |i, j| if i == j { f.one() } else { f.zero() })
    }

    pub fn zeros(n: usize, f: &Field) -> MatConst {
        MatConst::from_fn(n, |_, _| f.zero())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElem {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.entries
    }

    pub fn is_zero(&self, f: &Field) -> bool {
        self.entries.iter().all(|e| f.is_zero(e))
    }

    pub fn is_identity(&self, f: &Field) -> bool {
        *self == MatConst::identity(self.n, f)
    }

    pub fn add(&self, other: &MatConst, f: &Field) -> MatConst {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        MatConst::from_fn(self.n, |i, j| f.add(self.get(i, j), other.get(i, j)))
    }

    pub fn neg(&self, f: &Field) -> MatConst {
        MatConst::from_fn(self.n, |i, j| f.neg(self.get(i, j)))
    }

    pub fn scale(&self, c: &FieldElem, f: &Field) -> MatConst {
        MatConst::from_fn(self.n, |i, j| f.mul(self.get(i, j), c))
    }

    pub fn mul(&self, other: &MatConst, f: &Field) -> MatConst {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        MatConst::from_fn(self.n, |i, j| {
            let mut acc = f.zero();
            for l in 0..self.n {
                acc = f.add(&acc, &f.mul(self.get(i, l), other.get(l, j)));
            }
            acc
        })
    }

    pub fn pow(&self, mut e: u64, f: &Field) -> MatConst {
        let mut acc = MatConst::identity(self.n, f);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            base = base.mul(&base, f);
            e >>= 1;
        }
        acc
    }

    pub fn transpose(&self) -> MatConst {
        MatConst::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    /// `N^p = O` for the positive characteristic `p` of the field.
    pub fn is_nilpotent_p(&self, f: &Field) -> bool {
        let p = f.characteristic();
        assert!(p > 0, "p-nilpotency requires positive characteristic");
        self.pow(p, f).is_zero(f)
    }

    /// Plain nilpotency, `N^n = O`; works in every characteristic.
    pub fn is_nilpotent(&self, f: &Field) -> bool {
        self.pow(self.n as u64, f).is_zero(f)
    }

    pub fn det(&self, f: &Field) -> FieldElem {
        self.to_poly(f).det(f).at_zero(f)
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inv(&self, f: &Field) -> Result<MatConst, AlgebraError> {
        let n = self.n;
        let mut a: Vec<Vec<FieldElem>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut b: Vec<Vec<FieldElem>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { f.one() } else { f.zero() })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !f.is_zero(&a[r][col]))
                .ok_or(AlgebraError::Singular)?;
            a.swap(col, pivot);
            b.swap(col, pivot);
            let inv = f.inv(&a[col][col]).expect("pivot is nonzero");
            for j in 0..n {
                a[col][j] = f.mul(&a[col][j], &inv);
                b[col][j] = f.mul(&b[col][j], &inv);
            }
            for r in 0..n {
                if r == col || f.is_zero(&a[r][col]) {
                    continue;
                }
                let factor = a[r][col].clone();
                for j in 0..n {
                    let ta = f.mul(&factor, &a[col][j]);
                    let tb = f.mul(&factor, &b[col][j]);
                    a[r][j] = f.sub(&a[r][j], &ta);
                    b[r][j] = f.sub(&b[r][j], &tb);
                }
            }
        }
        Ok(MatConst::from_fn(n, |i, j| b[i][j].clone()))
    }

    pub fn to_poly(&self, f: &Field) -> MatPoly {
        MatPoly::from_fn(self.n, |i, j| Poly1::constant(self.get(i, j).clone(), f))
    }

    pub fn extend_scalars(&self, from: &Field, to: &Field) -> Result<MatConst, FieldError> {
        let entries = self
            .entries
            .iter()
            .map(|e| to.embed(e, from))
            .collect::<Result<_, _>>()?;
        Ok(MatConst { n: self.n, entries })
    }
}

impl fmt::Display for MatConst {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_matrix(out, self.n, |i, j| self.get(i, j).to_string())
    }
}

/// True when every pair in the list commutes; vacuously true for empty and
/// singleton lists.
pub fn all_commute(mats: &[MatConst], f: &Field) -> bool {
    for (idx, a) in mats.iter().enumerate() {
        for b in &mats[idx + 1..] {
            assert_eq!(a.n(), b.n(), "matrix size mismatch");
            if a.mul(b, f) != b.mul(a, f) {
                return false;
            }
        }
    }
    true
}

/// Square matrix over `k[T]`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatPoly {
    n: usize,
    entries: Vec<Poly1>,
}

impl MatPoly {
    pub fn new(n: usize, entries: Vec<Poly1>) -> MatPoly {
        assert!(n >= 1, "matrices have positive size");
        assert_eq!(entries.len(), n * n, "entry vector must have n^2 entries");
        MatPoly { n, entries }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Poly1) -> MatPoly {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        MatPoly::new(n, entries)
    }

    pub fn identity(n: usize, f: &Field) -> MatPoly {
        MatPoly::from_fn(n, |i, j| if i == j { Poly1::one(f) } else { Poly1::zero() })
    }

    pub fn zeros(n: usize) -> MatPoly {
        MatPoly::from_fn(n, |_, _| Poly1::zero())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly1 {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Poly1] {
        &self.entries
    }

    pub fn is_identity(&self, f: &Field) -> bool {
        *self == MatPoly::identity(self.n, f)
    }

    pub fn map_entries(&self, f: impl Fn(&Poly1) -> Poly1) -> MatPoly {
        MatPoly {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &MatPoly, f: &Field) -> MatPoly {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        MatPoly::from_fn(self.n, |i, j| self.get(i, j).add(other.get(i, j), f))
    }

    pub fn mul(&self, other: &MatPoly, f: &Field) -> MatPoly {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        MatPoly::from_fn(self.n, |i, j| {
            let mut acc = Poly1::zero();
            for l in 0..self.n {
                acc = acc.add(&self.get(i, l).mul(other.get(l, j), f), f);
            }
            acc
        })
    }

    pub fn scale(&self, c: &FieldElem, f: &Field) -> MatPoly {
        self.map_entries(|p| p.scale(c, f))
    }

    pub fn transpose(&self) -> MatPoly {
        MatPoly::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    /// Evaluate every entry at `t`.
    pub fn eval(&self, t: &FieldElem, f: &Field) -> MatConst {
        MatConst::from_fn(self.n, |i, j| self.get(i, j).eval(t, f))
    }

    /// The matrix of coefficients of `T^d`.
    pub fn coeff_matrix(&self, d: usize, f: &Field) -> MatConst {
        MatConst::from_fn(self.n, |i, j| self.get(i, j).coeff(d, f))
    }

    /// Largest entry degree (0 when all entries are constant or zero).
    pub fn max_degree(&self) -> usize {
        self.entries
            .iter()
            .filter_map(Poly1::degree)
            .max()
            .unwrap_or(0)
    }

    /// Determinant: cofactor expansion for n <= 4, fraction-free Bareiss
    /// elimination above.
    pub fn det(&self, f: &Field) -> Poly1 {
        let rows: Vec<Vec<Poly1>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        if self.n <= 4 {
            det_cofactor(&rows, f)
        } else {
            det_bareiss(rows, f)
        }
    }

    /// Inverse over `k[T]`: exists exactly when the determinant is a nonzero
    /// constant; adjugate divided by the determinant.
    pub fn inv_unit(&self, f: &Field) -> Result<MatPoly, AlgebraError> {
        let det = self.det(f);
        if det.is_zero() || !det.is_constant() {
            return Err(AlgebraError::NotUnimodular { det });
        }
        let det_inv = f.inv(&det.at_zero(f)).expect("nonzero constant");
        let adj = self.adjugate(f);
        Ok(adj.map_entries(|p| p.scale(&det_inv, f)))
    }

    fn adjugate(&self, f: &Field) -> MatPoly {
        let n = self.n;
        if n == 1 {
            return MatPoly::identity(1, f);
        }
        MatPoly::from_fn(n, |i, j| {
            // (i, j) entry of the adjugate = (j, i) cofactor
            let minor: Vec<Vec<Poly1>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != i)
                        .map(|c| self.get(r, c).clone())
                        .collect()
                })
                .collect();
            let m = det_cofactor(&minor, f);
            if (i + j) % 2 == 1 {
                m.neg(f)
            } else {
                m
            }
        })
    }

    pub fn extend_scalars(&self, from: &Field, to: &Field) -> Result<MatPoly, FieldError> {
        let entries = self
            .entries
            .iter()
            .map(|p| p.extend_scalars(from, to))
            .collect::<Result<_, _>>()?;
        Ok(MatPoly { n: self.n, entries })
    }
}

impl fmt::Display for MatPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_matrix(out, self.n, |i, j| self.get(i, j).to_string())
    }
}

fn write_matrix(
    out: &mut fmt::Formatter<'_>,
    n: usize,
    entry: impl Fn(usize, usize) -> String,
) -> fmt::Result {
    write!(out, "[")?;
    for i in 0..n {
        if i > 0 {
            write!(out, ", ")?;
        }
        write!(out, "[")?;
        for j in 0..n {
            if j > 0 {
                write!(out, ", ")?;
            }
            write!(out, "{}", entry(i, j))?;
        }
        write!(out, "]")?;
    }
    write!(out, "]")
}

fn det_cofactor(rows: &[Vec<Poly1>], f: &Field) -> Poly1 {
    let n = rows.len();
    match n {
        0 => Poly1::one(f),
        1 => rows[0][0].clone(),
        _ => {
            let mut acc = Poly1::zero();
            for (j, pivot) in rows[0].iter().enumerate() {
                if pivot.is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly1>> = rows[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = pivot.mul(&det_cofactor(&minor, f), f);
                acc = if j % 2 == 1 {
                    acc.sub(&term, f)
                } else {
                    acc.add(&term, f)
                };
            }
            acc
        }
    }
}

/// Fraction-free Gaussian elimination; divisions are exact in `k[T]`.
fn det_bareiss(mut m: Vec<Vec<Poly1>>, f: &Field) -> Poly1 {
    let n = m.len();
    let mut negated = false;
    let mut prev = Poly1::one(f);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Poly1::zero();
            };
            m.swap(k, r);
            negated = !negated;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t1 = m[i][j].mul(&m[k][k], f);
                let t2 = m[i][k].mul(&m[k][j], f);
                m[i][j] = t1
                    .sub(&t2, f)
                    .div_exact(&prev, f)
                    .expect("fraction-free elimination divides exactly");
            }
            m[i][k] = Poly1::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negated {
        det.neg(f)
    } else {
        det
    }
}
