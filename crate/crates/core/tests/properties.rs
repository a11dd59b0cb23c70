//! Property tests for the algebra layer.

use expmat::{Field, Poly1};
use proptest::prelude::*;

fn poly(coeffs: &[u64], f: &Field) -> Poly1 {
    Poly1::from_coeffs(coeffs.iter().map(|c| f.from_u64(*c)).collect(), f)
}

fn coeff_vec(p: u64, max_len: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0..p, 0..=max_len)
}

proptest! {
    #[test]
    fn poly_ring_axioms_mod_5(a in coeff_vec(5, 7), b in coeff_vec(5, 7), c in coeff_vec(5, 7)) {
        let f = Field::prime(5).unwrap();
        let (a, b, c) = (poly(&a, &f), poly(&b, &f), poly(&c, &f));
        prop_assert_eq!(a.add(&b, &f), b.add(&a, &f));
        prop_assert_eq!(a.mul(&b, &f), b.mul(&a, &f));
        prop_assert_eq!(a.mul(&b, &f).mul(&c, &f), a.mul(&b.mul(&c, &f), &f));
        prop_assert_eq!(
            a.mul(&b.add(&c, &f), &f),
            a.mul(&b, &f).add(&a.mul(&c, &f), &f)
        );
        prop_assert_eq!(a.sub(&a, &f), Poly1::zero());
    }

    #[test]
    fn double_negation_is_identity(a in coeff_vec(7, 9)) {
        let f = Field::prime(7).unwrap();
        let a = poly(&a, &f);
        prop_assert_eq!(a.subst_negate(&f).subst_negate(&f), a);
    }

    #[test]
    fn power_substitution_composes(a in coeff_vec(3, 5), e in 1usize..4, g in 1usize..4) {
        let f = Field::prime(3).unwrap();
        let a = poly(&a, &f);
        prop_assert_eq!(
            a.subst_power(e, &f).subst_power(g, &f),
            a.subst_power(e * g, &f)
        );
    }

    #[test]
    fn divrem_reconstructs(a in coeff_vec(5, 8), b in coeff_vec(5, 5)) {
        let f = Field::prime(5).unwrap();
        let (a, b) = (poly(&a, &f), poly(&b, &f));
        prop_assume!(!b.is_zero());
        let (q, r) = a.divrem(&b, &f);
        prop_assert_eq!(q.mul(&b, &f).add(&r, &f), a);
        prop_assert!(r.degree() < b.degree() || r.is_zero());
    }

    #[test]
    fn gcd_divides_both(a in coeff_vec(5, 6), b in coeff_vec(5, 6)) {
        let f = Field::prime(5).unwrap();
        let (a, b) = (poly(&a, &f), poly(&b, &f));
        let g = Poly1::gcd(&a, &b, &f);
        if g.is_zero() {
            prop_assert!(a.is_zero() && b.is_zero());
        } else {
            prop_assert!(a.div_exact(&g, &f).is_some());
            prop_assert!(b.div_exact(&g, &f).is_some());
        }
    }

    #[test]
    fn subst_sum_specialization_round_trip(a in coeff_vec(2, 8)) {
        let f = Field::prime(2).unwrap();
        let a = poly(&a, &f);
        prop_assert_eq!(a.subst_sum(&f).specialize_tprime_zero(&f), a);
    }
}
