//! Exact-arithmetic toolkit for exponential matrices over `k[T]`.
//!
//! An exponential matrix is an `A(T)` in `Mat(n, k[T])` with
//! `A(T) A(T') = A(T + T')` and `A(0) = I`; it is the matrix form of a
//! polynomial one-parameter subgroup of `GL(n)`. This crate constructs,
//! verifies, factors, and converts such matrices over `Q`, `F_p`, and
//! `GF(p^m)`, together with the equivalent views the conversion targets:
//!
//! * [`hopf`] — Hopf-algebra homomorphisms `k[GL(n)] -> k[T]`, with the
//!   comultiplication/counit/antipode axiom checks;
//! * [`projective`] — homomorphisms into `PGL(n)` via projection and its
//!   unique lift, and the induced additive-group actions on `P^{n-1}` over
//!   finite fields (orbits, fixed points);
//! * [`equiv`] — conjugation equivalence at every level, witness search
//!   over `GL(n, F_q)`, and transport of equivalence across the views;
//! * [`modrep`] — representations of `(Z/pZ)^r` by commuting `p`-nilpotent
//!   tuples, the layered truncated-exponential product, and the resulting
//!   pairing with `(exponential matrix, trailing-padding count)`.
//!
//! All arithmetic is exact; all operations are pure functions on immutable
//! values and safe to evaluate in parallel.

pub mod algebra;
pub mod equiv;
pub mod expcore;
pub mod hopf;
pub mod modrep;
pub mod projective;

pub use algebra::{
    all_commute, AlgebraError, Field, FieldElem, FieldError, MatConst, MatPoly, Poly1, Poly2,
};
pub use equiv::{
    check_equiv, conjugate, search_equiv, transport_equiv, EquivError, Level, Witness,
};
pub use expcore::{
    build_from_tuple, factor, trunc_exp, verify_exponential, ExpError, ExpFailure, ExpMat, NilTuple,
};
pub use hopf::{from_hopf, to_hopf, HopfError, HopfHom};
pub use modrep::{
    enumerate_nil_tuples, enumerate_nilpotent, from_pair, l_of, pi_map, rho_eval, rho_min, to_pair,
    verify_hom, ModRepError, Rep,
};
pub use projective::{
    enumerate_points, fixed_points, lift, orbits, project, verify_action, GaAction, PGLClass,
    ProjError, ProjPoint,
};
