//! Dense polynomial arithmetic over a [`Field`]: univariate `k[T]` and
//! bivariate `k[T, T']`.
//!
//! `Poly2` doubles as the tensor product `k[T] (x) k[T]` under the fixed
//! identification `T (x) 1 <-> T`, `1 (x) T <-> T'`; no separate tensor type
//! exists. Coefficient vectors are always trimmed, so structural equality is
//! polynomial equality.

use std::fmt;

use super::field::{Field, FieldElem, FieldError};

/// Element of `k[T]`: ascending coefficients, no trailing zeros, zero = empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly1 {
    coeffs: Vec<FieldElem>,
}

impl Poly1 {
    pub fn zero() -> Poly1 {
        Poly1 { coeffs: Vec::new() }
    }

    pub fn from_coeffs(coeffs: Vec<FieldElem>, f: &Field) -> Poly1 {
        let mut p = Poly1 { coeffs };
        p.trim(f);
        p
    }

    pub fn constant(c: FieldElem, f: &Field) -> Poly1 {
        Poly1::from_coeffs(vec![c], f)
    }

    pub fn one(f: &Field) -> Poly1 {
        Poly1::constant(f.one(), f)
    }

    /// The variable `T`.
    pub fn var(f: &Field) -> Poly1 {
        Poly1::from_coeffs(vec![f.zero(), f.one()], f)
    }

    /// `c * T^deg`.
    pub fn monomial(c: FieldElem, deg: usize, f: &Field) -> Poly1 {
        let mut coeffs = vec![f.zero(); deg + 1];
        coeffs[deg] = c;
        Poly1::from_coeffs(coeffs, f)
    }

    fn trim(&mut self, f: &Field) {
        while self.coeffs.last().is_some_and(|c| f.is_zero(c)) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    /// Coefficient of `T^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize, f: &Field) -> FieldElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| f.zero())
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&FieldElem> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Poly1, f: &Field) -> Poly1 {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.add(&self.coeff(i, f), &other.coeff(i, f)))
            .collect();
        Poly1::from_coeffs(coeffs, f)
    }

    pub fn sub(&self, other: &Poly1, f: &Field) -> Poly1 {
        self.add(&other.neg(f), f)
    }

    pub fn neg(&self, f: &Field) -> Poly1 {
        Poly1 {
            coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly1, f: &Field) -> Poly1 {
        if self.is_zero() || other.is_zero() {
            return Poly1::zero();
        }
        let mut coeffs = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = f.add(&coeffs[i + j], &f.mul(a, b));
            }
        }
        Poly1::from_coeffs(coeffs, f)
    }

    pub fn scale(&self, c: &FieldElem, f: &Field) -> Poly1 {
        Poly1::from_coeffs(self.coeffs.iter().map(|a| f.mul(a, c)).collect(), f)
    }

    pub fn pow(&self, e: u64, f: &Field) -> Poly1 {
        let mut acc = Poly1::one(f);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            base = base.mul(&base, f);
            e >>= 1;
        }
        acc
    }

    /// Horner evaluation at `t`.
    pub fn eval(&self, t: &FieldElem, f: &Field) -> FieldElem {
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, t), c);
        }
        acc
    }

    /// `a(0)`.
    pub fn at_zero(&self, f: &Field) -> FieldElem {
        self.coeff(0, f)
    }

    /// `a(-T)`.
    pub fn subst_negate(&self, f: &Field) -> Poly1 {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { f.neg(c) } else { c.clone() })
            .collect();
        Poly1 { coeffs }
    }

    /// `a(T^e)`, `e >= 1`.
    pub fn subst_power(&self, e: usize, f: &Field) -> Poly1 {
        assert!(e >= 1, "substitution exponent must be positive");
        if self.is_zero() {
            return Poly1::zero();
        }
        let mut coeffs = vec![f.zero(); (self.coeffs.len() - 1) * e + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * e] = c.clone();
        }
        Poly1 { coeffs }
    }

    /// `a(T + T')` as an element of `k[T, T']`. Binomial coefficients are
    /// built additively (Pascal's triangle inside the field), so the
    /// expansion is exact in every characteristic.
    pub fn subst_sum(&self, f: &Field) -> Poly2 {
        if self.is_zero() {
            return Poly2::zero();
        }
        let deg = self.coeffs.len() - 1;
        let mut pascal: Vec<Vec<FieldElem>> = vec![vec![f.one()]];
        for i in 1..=deg {
            let prev = &pascal[i - 1];
            let mut row = Vec::with_capacity(i + 1);
            row.push(f.one());
            for j in 1..i {
                row.push(f.add(&prev[j - 1], &prev[j]));
            }
            row.push(f.one());
            pascal.push(row);
        }
        let mut grid = vec![vec![f.zero(); deg + 1]; deg + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for j in 0..=i {
                let term = f.mul(a, &pascal[i][j]);
                grid[j][i - j] = f.add(&grid[j][i - j], &term);
            }
        }
        Poly2::from_grid(grid, f)
    }

    /// Quotient and remainder; the divisor must be nonzero.
    pub fn divrem(&self, divisor: &Poly1, f: &Field) -> (Poly1, Poly1) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dlead = f.inv(divisor.leading().unwrap()).unwrap();
        let ddeg = divisor.coeffs.len() - 1;
        let mut rem = self.clone();
        if rem.coeffs.len() < divisor.coeffs.len() {
            return (Poly1::zero(), rem);
        }
        let mut quot = vec![f.zero(); rem.coeffs.len() - ddeg];
        while rem.coeffs.len() >= divisor.coeffs.len() {
            let shift = rem.coeffs.len() - divisor.coeffs.len();
            let factor = f.mul(rem.leading().unwrap(), &dlead);
            quot[shift] = factor.clone();
            for (i, c) in divisor.coeffs.iter().enumerate() {
                let t = f.mul(&factor, c);
                rem.coeffs[shift + i] = f.sub(&rem.coeffs[shift + i], &t);
            }
            rem.trim(f);
        }
        (Poly1::from_coeffs(quot, f), rem)
    }

    /// Exact quotient, or `None` when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Poly1, f: &Field) -> Option<Poly1> {
        let (q, r) = self.divrem(divisor, f);
        r.is_zero().then_some(q)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(a: &Poly1, b: &Poly1, f: &Field) -> Poly1 {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        while !r1.is_zero() {
            let (_, r) = r0.divrem(&r1, f);
            r0 = std::mem::replace(&mut r1, r);
        }
        if r0.is_zero() {
            return r0;
        }
        let lead_inv = f.inv(r0.leading().unwrap()).unwrap();
        r0.scale(&lead_inv, f)
    }

    /// Coefficient-wise embedding into a larger field.
    pub fn extend_scalars(&self, from: &Field, to: &Field) -> Result<Poly1, FieldError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| to.embed(c, from))
            .collect::<Result<_, _>>()?;
        Ok(Poly1 { coeffs })
    }
}

impl fmt::Display for Poly1 {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if is_displayed_zero(c) {
                continue;
            }
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            write_term(out, c, &var_power("T", i))?;
        }
        if first {
            write!(out, "0")?;
        }
        Ok(())
    }
}

/// Element of `k[T, T']`: `coeffs[i][j]` is the coefficient of `T^i T'^j`.
/// The grid is rectangular with trailing zero rows and columns trimmed;
/// zero = empty grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly2 {
    coeffs: Vec<Vec<FieldElem>>,
}

impl Poly2 {
    pub fn zero() -> Poly2 {
        Poly2 { coeffs: Vec::new() }
    }

    pub fn from_grid(grid: Vec<Vec<FieldElem>>, f: &Field) -> Poly2 {
        let rows = grid.len();
        let cols = grid.iter().map(Vec::len).max().unwrap_or(0);
        let mut max_row = 0usize;
        let mut max_col = 0usize;
        let mut any = false;
        for (i, row) in grid.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !f.is_zero(c) {
                    any = true;
                    max_row = max_row.max(i + 1);
                    max_col = max_col.max(j + 1);
                }
            }
        }
        if !any {
            return Poly2::zero();
        }
        let _ = (rows, cols);
        let coeffs = (0..max_row)
            .map(|i| {
                (0..max_col)
                    .map(|j| grid[i].get(j).cloned().unwrap_or_else(|| f.zero()))
                    .collect()
            })
            .collect();
        Poly2 { coeffs }
    }

    /// View `a(T)` inside `k[T, T']` (equivalently `a (x) 1`).
    pub fn from_t(a: &Poly1, f: &Field) -> Poly2 {
        Poly2::from_grid(a.coeffs().iter().map(|c| vec![c.clone()]).collect(), f)
    }

    /// View `a(T')` inside `k[T, T']` (equivalently `1 (x) a`).
    pub fn from_tprime(a: &Poly1, f: &Field) -> Poly2 {
        if a.is_zero() {
            return Poly2::zero();
        }
        Poly2::from_grid(vec![a.coeffs().to_vec()], f)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The trimmed rectangular coefficient grid; `grid()[i][j]` is the
    /// coefficient of `T^i T'^j`.
    pub fn grid(&self) -> &[Vec<FieldElem>] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, j: usize, f: &Field) -> FieldElem {
        self.coeffs
            .get(i)
            .and_then(|row| row.get(j))
            .cloned()
            .unwrap_or_else(|| f.zero())
    }

    pub fn add(&self, other: &Poly2, f: &Field) -> Poly2 {
        let rows = self.coeffs.len().max(other.coeffs.len());
        let cols = self
            .coeffs
            .first()
            .map_or(0, Vec::len)
            .max(other.coeffs.first().map_or(0, Vec::len));
        let grid = (0..rows)
            .map(|i| {
                (0..cols)
                    .map(|j| f.add(&self.coeff(i, j, f), &other.coeff(i, j, f)))
                    .collect()
            })
            .collect();
        Poly2::from_grid(grid, f)
    }

    pub fn sub(&self, other: &Poly2, f: &Field) -> Poly2 {
        self.add(&other.neg(f), f)
    }

    pub fn neg(&self, f: &Field) -> Poly2 {
        Poly2 {
            coeffs: self
                .coeffs
                .iter()
                .map(|row| row.iter().map(|c| f.neg(c)).collect())
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly2, f: &Field) -> Poly2 {
        if self.is_zero() || other.is_zero() {
            return Poly2::zero();
        }
        let rows = self.coeffs.len() + other.coeffs.len() - 1;
        let cols = self.coeffs[0].len() + other.coeffs[0].len() - 1;
        let mut grid = vec![vec![f.zero(); cols]; rows];
        for (i1, row1) in self.coeffs.iter().enumerate() {
            for (j1, a) in row1.iter().enumerate() {
                if f.is_zero(a) {
                    continue;
                }
                for (i2, row2) in other.coeffs.iter().enumerate() {
                    for (j2, b) in row2.iter().enumerate() {
                        let slot = &mut grid[i1 + i2][j1 + j2];
                        *slot = f.add(slot, &f.mul(a, b));
                    }
                }
            }
        }
        Poly2::from_grid(grid, f)
    }

    pub fn eval(&self, t: &FieldElem, tprime: &FieldElem, f: &Field) -> FieldElem {
        let mut acc = f.zero();
        let mut tpow = f.one();
        for row in &self.coeffs {
            let mut inner = f.zero();
            for c in row.iter().rev() {
                inner = f.add(&f.mul(&inner, tprime), c);
            }
            acc = f.add(&acc, &f.mul(&tpow, &inner));
            tpow = f.mul(&tpow, t);
        }
        acc
    }

    /// Specialization `T' = 0`, recovering an element of `k[T]`.
    pub fn specialize_tprime_zero(&self, f: &Field) -> Poly1 {
        Poly1::from_coeffs(
            self.coeffs
                .iter()
                .map(|row| row.first().cloned().unwrap_or_else(|| f.zero()))
                .collect(),
            f,
        )
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut first = true;
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if is_displayed_zero(c) {
                    continue;
                }
                if !first {
                    write!(out, " + ")?;
                }
                first = false;
                let vars = match (i, j) {
                    (0, 0) => String::new(),
                    (i, 0) => var_power("T", i),
                    (0, j) => var_power("T'", j),
                    (i, j) => format!("{}*{}", var_power("T", i), var_power("T'", j)),
                };
                write_term(out, c, &vars)?;
            }
        }
        Ok(())
    }
}

fn is_displayed_zero(c: &FieldElem) -> bool {
    match c {
        FieldElem::Mod(v) => *v == 0,
        FieldElem::Ext(coords) => coords.iter().all(|v| *v == 0),
        FieldElem::Rat(r) => num::Zero::is_zero(r),
    }
}

fn is_displayed_one(c: &FieldElem) -> bool {
    match c {
        FieldElem::Mod(v) => *v == 1,
        FieldElem::Ext(coords) => {
            coords.first() == Some(&1) && coords.iter().skip(1).all(|v| *v == 0)
        }
        FieldElem::Rat(r) => num::One::is_one(r),
    }
}

fn var_power(var: &str, e: usize) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        e => format!("{var}^{e}"),
    }
}

fn write_term(out: &mut fmt::Formatter<'_>, c: &FieldElem, vars: &str) -> fmt::Result {
    let coeff = c.to_string();
    if vars.is_empty() {
        write!(out, "{coeff}")
    } else if is_displayed_one(c) {
        write!(out, "{vars}")
    } else if coeff.contains('+') {
        write!(out, "({coeff})*{vars}")
    } else {
        write!(out, "{coeff}*{vars}")
    }
}
