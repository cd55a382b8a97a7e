use num_traits::{One, Zero};
use pindex_core::evenring::{
    char_pfaffian, euler_pairing, exp_mul, fm_transform, igusa_discriminant, EvenClass, FourClass, TwoClass, PAIRS,
};
use pindex_core::exactalg::{pfaffian, Cubic};
use pindex_core::{Int, Mat, Rat};
use proptest::prelude::*;

fn r(x: i64) -> Rat {
    Rat::from_integer(Int::from(x))
}

fn two_class() -> impl Strategy<Value = TwoClass> {
    prop::array::uniform15(-9i64..=9).prop_map(TwoClass::from_i64)
}

fn small_two_class() -> impl Strategy<Value = TwoClass> {
    prop::array::uniform15(-3i64..=3).prop_map(TwoClass::from_i64)
}

fn even_class() -> impl Strategy<Value = EvenClass> {
    (-9i64..=9, small_two_class(), prop::array::uniform15(-3i64..=3), -9i64..=9)
        .prop_map(|(a, b, c, d)| EvenClass::new(r(a), b, FourClass::from_i64(c), r(d)))
}

/// Pf(tH - u) evaluated directly as a 6x6 Pfaffian.
fn direct_char_pf(u: &TwoClass, h: &TwoClass, t: i64) -> Rat {
    let m: Mat<Rat> = &h.to_matrix().scale(&r(t)) - &u.to_matrix();
    pfaffian(&m).unwrap()
}

#[test]
fn igusa_normalization() {
    let v = &EvenClass::one() + &EvenClass::omega();
    assert_eq!(igusa_discriminant(&v), Rat::new(Int::from(-1), Int::from(4)));
}

#[test]
fn igusa_of_basic_classes() {
    assert!(igusa_discriminant(&EvenClass::one()).is_zero());
    assert!(igusa_discriminant(&EvenClass::omega()).is_zero());
    assert!(igusa_discriminant(&EvenClass::from_two(TwoClass::principal())).is_zero());
}

#[test]
fn discriminant_of_reduced_classes() {
    for d in 1..=20i64 {
        let beta = TwoClass::polarization(&[1, 1, d]).star();
        for n in -10..=10i64 {
            let v = EvenClass::new(Rat::one(), TwoClass::zero(), -&beta, r(-n));
            assert_eq!(igusa_discriminant(&v), r(d) - Rat::new(Int::from(n * n), Int::from(4)), "d={d} n={n}");
        }
    }
}

#[test]
fn principal_diagonal_instance() {
    let h = TwoClass::principal();
    for (a1, a2, a3) in [(1, 2, 3), (-4, 0, 7), (5, 5, -2)] {
        let u = TwoClass::polarization(&[a1, a2, a3]);
        let cp = char_pfaffian(&u, &h).unwrap();
        let expected = Cubic::from_i64(1, -(a1 + a2 + a3), a1 * a2 + a1 * a3 + a2 * a3, -a1 * a2 * a3);
        assert_eq!(cp.closed, expected);
        assert_eq!(cp.interpolated, expected);
    }
}

#[test]
fn char_pf_rejects_degenerate_polarization() {
    let mut h = TwoClass::zero();
    h.add_term(3, 0, Rat::one());
    assert!(char_pfaffian(&TwoClass::principal(), &h).is_err());
}

#[test]
fn exp_of_principal() {
    let e = EvenClass::exp(&TwoClass::principal());
    assert_eq!(e.d, r(1));
    assert_eq!(TwoClass::principal().cube_integral(), r(6));
}

#[test]
fn pair_basis_orientation() {
    for (k, &(i, j)) in PAIRS.iter().enumerate() {
        let mut b = TwoClass::zero();
        b.add_term(i, j, Rat::one());
        let mut c = FourClass::zero();
        c.0[k] = Rat::one();
        assert_eq!(b.pair(&c), Rat::one());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn exp_is_isotropic(w in two_class()) {
        prop_assert!(igusa_discriminant(&EvenClass::exp(&w)).is_zero());
    }

    #[test]
    fn igusa_is_exp_invariant(w in small_two_class(), v in even_class()) {
        prop_assert_eq!(igusa_discriminant(&exp_mul(&w, &v)), igusa_discriminant(&v));
    }

    #[test]
    fn igusa_is_fm_invariant(v in even_class()) {
        prop_assert_eq!(igusa_discriminant(&fm_transform(&v)), igusa_discriminant(&v));
    }

    #[test]
    fn fm_squares_to_minus_identity(v in even_class()) {
        prop_assert_eq!(fm_transform(&fm_transform(&v)), -&v);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn char_pf_routes_agree(u in two_class(), h in small_two_class()) {
        prop_assume!(!h.cube_integral().is_zero());
        let cp = char_pfaffian(&u, &h).unwrap();
        prop_assert_eq!(&cp.closed, &cp.interpolated);
        for t in [-3i64, 5, 11] {
            prop_assert_eq!(cp.closed.eval(&r(t)), direct_char_pf(&u, &h, t));
        }
        prop_assert_eq!(cp.closed.a0.clone(), -u.pfaffian());
        prop_assert_eq!(cp.closed.a3.clone(), h.pfaffian());
    }

    #[test]
    fn euler_pairing_is_antisymmetric(v in even_class(), w in even_class()) {
        prop_assert_eq!(euler_pairing(&v, &w), -euler_pairing(&w, &v));
    }

    #[test]
    fn euler_pairing_is_exp_invariant(b in small_two_class(), v in even_class(), w in even_class()) {
        prop_assert_eq!(euler_pairing(&exp_mul(&b, &v), &exp_mul(&b, &w)), euler_pairing(&v, &w));
    }

    #[test]
    fn exp_is_multiplicative(b in small_two_class(), c in small_two_class()) {
        prop_assert_eq!(EvenClass::exp(&b).cup(&EvenClass::exp(&c)), EvenClass::exp(&(&b + &c)));
    }

    #[test]
    fn cube_integral_is_six_pfaffian(b in two_class()) {
        prop_assert_eq!(b.cube_integral(), b.pfaffian() * r(6));
    }

    #[test]
    fn coordinates_round_trip(v in even_class()) {
        prop_assert_eq!(EvenClass::from_coords(&v.coords()).unwrap(), v);
    }
}
