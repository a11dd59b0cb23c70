//! The `PGL(n)` and `P^{n-1}` side: projecting an exponential matrix to its
//! scalar class, the unique lift back, and the induced additive-group
//! actions on finite projective spaces.
//!
//! A projective homomorphism is stored as a content-free, scalar-normalized
//! polynomial matrix. The lift then reduces to a scalar division: an
//! exponential lift `A` satisfies `A(T) A(-T) = I`, so its entries generate
//! the unit ideal and any content-free representative differs from `A` by a
//! constant.
//!
//! Points act on the right through the transpose,
//! `(x_0 : .. : x_{n-1}) -> (x_0 : .. : x_{n-1}) tQ` with `Q = A(t)`; the
//! convention is fixed once here and property-tested through
//! [`verify_action`].

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::field::FieldError;
use crate::algebra::{Field, FieldElem, MatConst, MatPoly, Poly1};
use crate::expcore::{ExpError, ExpFailure, ExpMat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjError {
    #[error("a projective point needs a nonzero coordinate vector")]
    ZeroPoint,
    #[error("the zero matrix does not represent a projective class")]
    ZeroMatrix,
    #[error("rep(0) is not a nonzero scalar multiple of the identity")]
    NotScalarAtZero,
    #[error("the class does not lift to an exponential matrix: {0}")]
    NotExponential(ExpFailure),
    #[error("point enumeration requires a finite field")]
    InfiniteField,
    #[error("q = {q} is not an admissible point-field size for {field}")]
    BadPointFieldSize { q: u64, field: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A point of `P^{n-1}(F_q)`, normalized so the first nonzero coordinate
/// is 1; structural equality is projective equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: Vec<FieldElem>,
}

impl ProjPoint {
    pub fn new(coords: Vec<FieldElem>, f: &Field) -> Result<ProjPoint, ProjError> {
        let lead = coords
            .iter()
            .position(|c| !f.is_zero(c))
            .ok_or(ProjError::ZeroPoint)?;
        let scale = f.inv(&coords[lead]).expect("leading coordinate is nonzero");
        let coords = coords.iter().map(|c| f.mul(c, &scale)).collect();
        Ok(ProjPoint { coords })
    }

    pub fn coords(&self) -> &[FieldElem] {
        &self.coords
    }

    pub fn dim_ambient(&self) -> usize {
        self.coords.len()
    }

    /// Deterministic sort key: the integer whose base-`q` digit `i` is the
    /// index of coordinate `i`. The point `(1:0:..:0)` comes first.
    pub fn key(&self, f: &Field) -> u128 {
        let q = f.order().expect("point keys require a finite field") as u128;
        self.coords
            .iter()
            .rev()
            .fold(0u128, |acc, c| acc * q + f.index(c) as u128)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(out, ":")?;
            }
            write!(out, "{c}")?;
        }
        write!(out, ")")
    }
}

/// All points of `P^{n-1}(F_q)` in ascending [`ProjPoint::key`] order.
pub fn enumerate_points(n: usize, f: &Field) -> Result<Vec<ProjPoint>, ProjError> {
    let q = f.order().ok_or(ProjError::InfiniteField)?;
    let total = (q as u128)
        .checked_pow(n as u32)
        .expect("point count overflows");
    let mut points = Vec::new();
    for k in 0..total {
        let mut rest = k;
        let mut coords = Vec::with_capacity(n);
        for _ in 0..n {
            coords.push(
                f.from_index((rest % q as u128) as u64)
                    .expect("digit in range"),
            );
            rest /= q as u128;
        }
        let Some(lead) = coords.iter().position(|c| !f.is_zero(c)) else {
            continue;
        };
        if f.is_one(&coords[lead]) {
            points.push(ProjPoint { coords });
        }
    }
    Ok(points)
}

/// A homomorphism `G_a -> PGL(n)`, stored by its canonical representative:
/// content-free (the monic gcd of all entries is 1) and scalar-normalized
/// (the first nonzero coefficient of the first nonzero entry, in
/// row-major/ascending-degree order, is 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PGLClass {
    rep: MatPoly,
    field: Field,
}

impl PGLClass {
    /// Normalize an arbitrary nonzero representative and validate that
    /// `rep(0)` is a nonzero scalar multiple of the identity.
    pub fn new(rep: MatPoly, field: Field) -> Result<PGLClass, ProjError> {
        let f = &field;
        let content = rep
            .entries()
            .iter()
            .fold(Poly1::zero(), |acc, p| Poly1::gcd(&acc, p, f));
        if content.is_zero() {
            return Err(ProjError::ZeroMatrix);
        }
        let rep = rep.map_entries(|p| {
            p.div_exact(&content, f)
                .expect("the content divides every entry")
        });
        let lead = rep
            .entries()
            .iter()
            .find_map(|p| (!p.is_zero()).then(|| p.coeffs().iter().find(|c| !f.is_zero(c))))
            .flatten()
            .expect("a content-free matrix is nonzero")
            .clone();
        let rep = rep.scale(&f.inv(&lead).expect("leading coefficient is nonzero"), f);

        let at0 = rep.eval(&f.zero(), f);
        let scalar = at0.get(0, 0).clone();
        if f.is_zero(&scalar) || at0 != MatConst::identity(rep.n(), f).scale(&scalar, f) {
            return Err(ProjError::NotScalarAtZero);
        }
        Ok(PGLClass { rep, field })
    }

    pub fn n(&self) -> usize {
        self.rep.n()
    }

    pub fn rep(&self) -> &MatPoly {
        &self.rep
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
}

/// Compose with the natural surjection `GL(n) -> PGL(n)`: the class of the
/// matrix. Bijective onto projective homomorphisms, with [`lift`] as the
/// inverse.
pub fn project(a: &ExpMat) -> PGLClass {
    PGLClass::new(a.matrix().clone(), a.field().clone())
        .expect("an exponential matrix is a valid class representative")
}

/// The unique homomorphism `G_a -> GL(n)` over a given projective class:
/// divide the canonical representative by its (scalar) value at 0 and
/// verify the result. Fails with a certificate when the class is not a
/// projective homomorphism.
pub fn lift(theta: &PGLClass) -> Result<ExpMat, ProjError> {
    let f = theta.field();
    let scalar = theta.rep().eval(&f.zero(), f).get(0, 0).clone();
    let a = theta
        .rep()
        .scale(&f.inv(&scalar).expect("rep(0) is a nonzero scalar"), f);
    ExpMat::new(a, f.clone()).map_err(|e| match e {
        ExpError::NotExponential(cert) => ProjError::NotExponential(cert),
        other => unreachable!("ExpMat::new only fails verification: {other}"),
    })
}

/// An additive-group action on `P^{n-1}`, stored by its lift; the action
/// map and the homomorphism into the automorphism group are views of the
/// same data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaAction {
    source: ExpMat,
}

impl GaAction {
    pub fn new(source: ExpMat) -> GaAction {
        GaAction { source }
    }

    pub fn source(&self) -> &ExpMat {
        &self.source
    }

    pub fn n(&self) -> usize {
        self.source.n()
    }

    pub fn field(&self) -> &Field {
        self.source.field()
    }

    /// `x -> x tQ` with `Q = A(t)`, renormalized.
    pub fn act(&self, t: &FieldElem, x: &ProjPoint) -> ProjPoint {
        let f = self.field();
        let n = self.n();
        assert_eq!(x.dim_ambient(), n, "point dimension mismatch");
        let q_t = self.source.eval(t).transpose();
        let coords = (0..n)
            .map(|j| {
                let mut acc = f.zero();
                for (i, xi) in x.coords().iter().enumerate() {
                    acc = f.add(&acc, &f.mul(xi, q_t.get(i, j)));
                }
                acc
            })
            .collect();
        ProjPoint::new(coords, f).expect("invertible matrices preserve nonzero vectors")
    }

    /// The same action with coefficients embedded into the point field.
    fn over_point_field(&self, q: u64) -> Result<GaAction, ProjError> {
        let pf = point_field(self.field(), q)?;
        Ok(GaAction::new(self.source.extend_scalars(&pf)?))
    }
}

impl From<ExpMat> for GaAction {
    fn from(source: ExpMat) -> GaAction {
        GaAction::new(source)
    }
}

/// Resolve the field with `q` elements in which points live: either the
/// action's own finite field, or an extension of its prime field.
fn point_field(field: &Field, q: u64) -> Result<Field, ProjError> {
    let bad = || ProjError::BadPointFieldSize {
        q,
        field: field.to_string(),
    };
    let p = field.characteristic();
    if p == 0 {
        return Err(bad());
    }
    if field.order() == Some(q) {
        return Ok(field.clone());
    }
    if field.extension_degree() > 1 {
        // no general tower embeddings; the action field itself must match
        return Err(bad());
    }
    let mut m = 0u32;
    let mut power = 1u64;
    while power < q {
        power = power.checked_mul(p).ok_or_else(bad)?;
        m += 1;
    }
    if power != q || m == 0 {
        return Err(bad());
    }
    Ok(Field::extension(p, m as usize)?)
}

/// Exhaustive check of the action axioms over `P^{n-1}(F_q)`:
/// `act(0, x) = x` and `act(s, act(t, x)) = act(s + t, x)`.
pub fn verify_action(mu: &GaAction, q: u64) -> Result<bool, ProjError> {
    let mu = mu.over_point_field(q)?;
    let f = mu.field().clone();
    let points = enumerate_points(mu.n(), &f)?;
    let zero = f.zero();
    for x in &points {
        if mu.act(&zero, x) != *x {
            return Ok(false);
        }
    }
    let elems = f.elements()?;
    for s in &elems {
        for t in &elems {
            let st = f.add(s, t);
            for x in &points {
                if mu.act(s, &mu.act(t, x)) != mu.act(&st, x) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Partition `P^{n-1}(F_q)` into orbits under `{A(t) : t in F_q}`. The
/// group is closed under an `F_p`-basis of `F_q`, so orbits are closed
/// under the basis generators `A(x^j)`. Orbits are listed by ascending
/// least member and sorted internally, making the partition deterministic.
pub fn orbits(mu: &GaAction, q: u64) -> Result<Vec<Vec<ProjPoint>>, ProjError> {
    let mu = mu.over_point_field(q)?;
    let f = mu.field().clone();
    let p = f.characteristic();
    let m = f.extension_degree();
    let points = enumerate_points(mu.n(), &f)?;
    let generators: Vec<FieldElem> = (0..m)
        .map(|j| f.from_index(p.pow(j as u32)).expect("basis index in range"))
        .collect();

    let position: HashMap<&ProjPoint, usize> =
        points.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut visited = vec![false; points.len()];
    let mut partition = Vec::new();
    for start in 0..points.len() {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let mut orbit_idx = vec![start];
        let mut frontier = vec![start];
        while let Some(i) = frontier.pop() {
            for g in &generators {
                let image = mu.act(g, &points[i]);
                let j = position[&image];
                if !visited[j] {
                    visited[j] = true;
                    orbit_idx.push(j);
                    frontier.push(j);
                }
            }
        }
        orbit_idx.sort_unstable();
        partition.push(orbit_idx.iter().map(|&i| points[i].clone()).collect());
    }
    Ok(partition)
}

/// Points fixed by every `A(t)`, `t in F_q`; exactly the singleton orbits.
pub fn fixed_points(mu: &GaAction, q: u64) -> Result<Vec<ProjPoint>, ProjError> {
    let mu = mu.over_point_field(q)?;
    let f = mu.field().clone();
    let points = enumerate_points(mu.n(), &f)?;
    let elems = f.elements()?;
    Ok(points
        .into_iter()
        .filter(|x| elems.iter().all(|t| mu.act(t, x) == *x))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Poly1;

    fn fp(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn upper_t(f: &Field) -> ExpMat {
        let m = MatPoly::new(
            2,
            vec![Poly1::one(f), Poly1::var(f), Poly1::zero(), Poly1::one(f)],
        );
        ExpMat::new(m, f.clone()).unwrap()
    }

    fn point(coords: &[i64], f: &Field) -> ProjPoint {
        ProjPoint::new(coords.iter().map(|c| f.from_i64(*c)).collect(), f).unwrap()
    }

    #[test]
    fn points_normalize() {
        let f = fp(3);
        // (2 : 1) scales by 2^{-1} = 2 to (1 : 2)
        assert_eq!(point(&[2, 1], &f).coords(), point(&[1, 2], &f).coords());
        assert_eq!(
            ProjPoint::new(vec![f.zero(), f.zero()], &f).unwrap_err(),
            ProjError::ZeroPoint
        );
    }

    #[test]
    fn point_enumeration_count_and_order() {
        let f = fp(2);
        let pts = enumerate_points(2, &f).unwrap();
        assert_eq!(
            pts,
            vec![point(&[1, 0], &f), point(&[0, 1], &f), point(&[1, 1], &f)]
        );
        let f4 = Field::extension(2, 2).unwrap();
        assert_eq!(enumerate_points(3, &f4).unwrap().len(), 21); // (64-1)/3
    }

    #[test]
    fn project_is_identity_on_normalized_matrices() {
        let f = fp(2);
        let a = upper_t(&f);
        assert_eq!(*project(&a).rep(), *a.matrix());
        let id = ExpMat::identity(3, f.clone());
        assert_eq!(*project(&id).rep(), *id.matrix());
    }

    #[test]
    fn lift_round_trip_and_scalar_perturbation() {
        let f = fp(5);
        let a = upper_t(&f);
        let theta = project(&a);
        assert_eq!(lift(&theta).unwrap(), a);

        // 2 * A over F_5 normalizes back to A
        let doubled = a.matrix().scale(&f.from_u64(2), &f);
        let theta2 = PGLClass::new(doubled, f.clone()).unwrap();
        assert_eq!(theta2, theta);
        assert_eq!(lift(&theta2).unwrap(), a);
    }

    #[test]
    fn lift_rejects_non_homomorphisms() {
        let f = fp(2);
        // [[1, T], [T, 1]]: valid class data, not a homomorphism
        let m = MatPoly::new(
            2,
            vec![
                Poly1::one(&f),
                Poly1::var(&f),
                Poly1::var(&f),
                Poly1::one(&f),
            ],
        );
        let theta = PGLClass::new(m, f.clone()).unwrap();
        match lift(&theta).unwrap_err() {
            ProjError::NotExponential(ExpFailure::FunctionalEquation {
                row,
                col,
                difference,
            }) => {
                assert_eq!((row, col), (1, 1));
                assert_eq!(difference.to_string(), "T*T'");
            }
            other => panic!("wrong error {other:?}"),
        }

        let swap_at_zero = MatPoly::new(
            2,
            vec![Poly1::zero(), Poly1::one(&f), Poly1::one(&f), Poly1::zero()],
        );
        assert_eq!(
            PGLClass::new(swap_at_zero, f.clone()).unwrap_err(),
            ProjError::NotScalarAtZero
        );
        assert_eq!(
            PGLClass::new(MatPoly::zeros(2), f).unwrap_err(),
            ProjError::ZeroMatrix
        );
    }

    #[test]
    fn content_is_stripped() {
        let f = fp(2);
        // T * I normalizes to I
        let m = MatPoly::from_fn(2, |i, j| {
            if i == j {
                Poly1::var(&f)
            } else {
                Poly1::zero()
            }
        });
        let theta = PGLClass::new(m, f.clone()).unwrap();
        assert!(theta.rep().is_identity(&f));
    }

    #[test]
    fn action_examples() {
        let f = fp(2);
        let mu = GaAction::new(upper_t(&f));
        let one = f.one();
        assert_eq!(mu.act(&one, &point(&[0, 1], &f)), point(&[1, 1], &f));
        assert_eq!(mu.act(&f.zero(), &point(&[0, 1], &f)), point(&[0, 1], &f));
        assert_eq!(mu.act(&one, &point(&[1, 0], &f)), point(&[1, 0], &f));
    }

    #[test]
    fn verify_action_over_prime_and_extension_fields() {
        let f = fp(2);
        let mu = GaAction::new(upper_t(&f));
        assert!(verify_action(&mu, 2).unwrap());
        assert!(verify_action(&mu, 4).unwrap());
        assert!(verify_action(&GaAction::new(ExpMat::identity(2, f.clone())), 2).unwrap());

        let t_plus_t2 = Poly1::from_coeffs(vec![f.zero(), f.one(), f.one()], &f);
        let wide = ExpMat::new(
            MatPoly::new(
                2,
                vec![Poly1::one(&f), t_plus_t2, Poly1::zero(), Poly1::one(&f)],
            ),
            f.clone(),
        )
        .unwrap();
        assert!(verify_action(&GaAction::new(wide), 4).unwrap());

        assert!(matches!(
            verify_action(&mu, 3),
            Err(ProjError::BadPointFieldSize { .. })
        ));
    }

    #[test]
    fn orbit_examples() {
        let f2 = fp(2);
        let mu = GaAction::new(upper_t(&f2));
        let got = orbits(&mu, 2).unwrap();
        assert_eq!(
            got,
            vec![
                vec![point(&[1, 0], &f2)],
                vec![point(&[0, 1], &f2), point(&[1, 1], &f2)],
            ]
        );

        let id = GaAction::new(ExpMat::identity(2, f2.clone()));
        assert_eq!(orbits(&id, 2).unwrap().len(), 3);

        let f3 = fp(3);
        let mu3 = GaAction::new(upper_t(&f3));
        let got = orbits(&mu3, 3).unwrap();
        assert_eq!(
            got,
            vec![
                vec![point(&[1, 0], &f3)],
                vec![
                    point(&[0, 1], &f3),
                    point(&[1, 1], &f3),
                    point(&[1, 2], &f3)
                ],
            ]
        );
    }

    #[test]
    fn fixed_point_examples() {
        let f = fp(2);
        let mu = GaAction::new(upper_t(&f));
        assert_eq!(fixed_points(&mu, 2).unwrap(), vec![point(&[1, 0], &f)]);

        let id = GaAction::new(ExpMat::identity(2, f.clone()));
        assert_eq!(fixed_points(&id, 2).unwrap().len(), 3);

        // A(t) = I + (t + t^2) N is the identity for both t in F_2
        let t_plus_t2 = Poly1::from_coeffs(vec![f.zero(), f.one(), f.one()], &f);
        let wide = ExpMat::new(
            MatPoly::new(
                2,
                vec![Poly1::one(&f), t_plus_t2, Poly1::zero(), Poly1::one(&f)],
            ),
            f.clone(),
        )
        .unwrap();
        assert_eq!(fixed_points(&GaAction::new(wide), 2).unwrap().len(), 3);
    }

    #[test]
    fn verify_action_holds_for_every_admissible_q_up_to_9() {
        let f2 = fp(2);
        let t_plus_t2 = Poly1::from_coeffs(vec![f2.zero(), f2.one(), f2.one()], &f2);
        let wide = ExpMat::new(
            MatPoly::new(
                2,
                vec![Poly1::one(&f2), t_plus_t2, Poly1::zero(), Poly1::one(&f2)],
            ),
            f2.clone(),
        )
        .unwrap();
        for mu in [GaAction::new(upper_t(&f2)), GaAction::new(wide)] {
            for q in [2u64, 4, 8] {
                assert!(verify_action(&mu, q).unwrap(), "q = {q}");
            }
        }
        let f3 = fp(3);
        let mu = GaAction::new(upper_t(&f3));
        for q in [3u64, 9] {
            assert!(verify_action(&mu, q).unwrap(), "q = {q}");
        }
    }

    #[test]
    fn orbit_sizes_are_p_powers_and_cover() {
        let f = fp(3);
        let mu = GaAction::new(upper_t(&f));
        for q in [3u64, 9] {
            let parts = orbits(&mu, q).unwrap();
            let total: usize = parts.iter().map(Vec::len).sum();
            assert_eq!(total as u64, q + 1); // (q^2 - 1) / (q - 1)
            for orbit in &parts {
                let mut size = orbit.len();
                while size % 3 == 0 {
                    size /= 3;
                }
                assert_eq!(size, 1, "orbit sizes are powers of p");
            }
        }
    }
}
