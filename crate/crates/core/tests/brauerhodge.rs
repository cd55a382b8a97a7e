use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use pindex_core::brauerhodge::{
    brauer_symbol_length, gabber_instance, hodge_locus_residual, hodge_sublattice, hodge_theoretic_index,
    local_normal_form, pathology_candidates, pathology_instance, period, symbol_length, symbol_length_smith, GaussRat,
    HodgeDatum, SiegelPoint,
};
use pindex_core::evenring::{euler_pairing, FourClass, TwoClass};
use pindex_core::sample;
use pindex_core::{Int, Mat, Rat};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn r(x: i64) -> Rat {
    Rat::from_integer(Int::from(x))
}

fn g(re: i64, im: i64) -> GaussRat {
    GaussRat::new(r(re), r(im))
}

/// `x_{4+i} ^ (sum of x_{1+j})` for each row of `rows`.
fn from_rows(rows: &[&[usize]]) -> TwoClass {
    let mut b = TwoClass::zero();
    for (i, cols) in rows.iter().enumerate() {
        for &j in cols.iter() {
            b.add_term(3 + i, j, Rat::one());
        }
    }
    b
}

fn example_b() -> TwoClass {
    from_rows(&[&[0, 1], &[0, 2], &[0, 1, 2]])
}

fn half_h_squared() -> FourClass {
    let h = TwoClass::principal();
    h.wedge(&h).scale(&Rat::new(Int::one(), Int::from(2)))
}

#[test]
fn gabber_index_is_ell_squared() {
    for ell in [2u64, 3, 5, 7] {
        let d = gabber_instance(ell).unwrap();
        assert_eq!(period(&d).unwrap(), Int::from(ell));
        let w = hodge_theoretic_index(&d).unwrap();
        assert_eq!(w.n, Int::from(ell * ell));
        assert!(w.verify(&d));
    }
    assert!(gabber_instance(9).is_err());
}

#[test]
fn example_coordinates() {
    let b = example_b();
    let minus = [(0, 3), (1, 3), (0, 4), (2, 4), (0, 5), (1, 5), (2, 5)];
    for i in 0..6 {
        for j in i + 1..6 {
            let expected = if minus.contains(&(i, j)) { -Rat::one() } else { Rat::zero() };
            assert_eq!(b.coord(i, j), expected, "({i},{j})");
        }
    }
    assert!(b.pfaffian().to_integer().is_odd());
}

#[test]
fn example_symbol_length() {
    let b = example_b();
    let h = TwoClass::principal();
    assert_eq!(symbol_length(&b, 2).unwrap(), 3);
    assert_eq!(symbol_length(&(&b + &h), 2).unwrap(), 3);
    let res = brauer_symbol_length(&b, std::slice::from_ref(&h), 2, 1 << 10).unwrap();
    assert_eq!(res.length, 3);
    assert_eq!(res.index_bound, Int::from(8));
    assert_eq!(brauer_symbol_length(&h, std::slice::from_ref(&h), 2, 16).unwrap().length, 0);
    assert!(brauer_symbol_length(&b, &[h.clone(), h.clone()], 7, 10).is_err());
}

#[test]
fn symbol_length_examples() {
    let mut x = TwoClass::zero();
    x.add_term(0, 3, Rat::one());
    assert_eq!(symbol_length(&x, 5).unwrap(), 1);
    assert_eq!(symbol_length(&TwoClass::zero(), 6).unwrap(), 0);
    assert_eq!(symbol_length(&TwoClass::polarization(&[1, 2, 4]), 4).unwrap(), 2);
    assert_eq!(symbol_length(&TwoClass::polarization(&[1, 2, 3]), 6).unwrap(), 2);
    assert_eq!(local_normal_form(&TwoClass::polarization(&[1, 2, 4]), 2, 2).unwrap(), vec![0, 1, 2]);
    assert!(symbol_length(&x, 1).is_err());
}

#[test]
fn example_invariant_under_basis_change() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let b = example_b();
    for _ in 0..100 {
        let u = sample::unimodular(&mut rng, 6, 30);
        assert_eq!(symbol_length(&b.pullback(&u), 2).unwrap(), 3);
    }
}

#[test]
fn random_data_satisfy_period_index_divisibility() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let h = TwoClass::principal();
    for _ in 0..100 {
        let n = rng.gen_range(1i64..=6);
        let b = sample::two_class(&mut rng, -5, 5);
        let mut ns2 = vec![h.clone()];
        if rng.gen_bool(0.5) {
            ns2.push(sample::two_class(&mut rng, -2, 2));
        }
        let mut hdg4 = vec![half_h_squared()];
        if ns2.len() > 1 {
            hdg4.push(ns2[0].wedge(&ns2[1]));
        }
        let d = HodgeDatum::new(&b, Int::from(n), ns2, hdg4).unwrap();
        let per = period(&d).unwrap();
        let w = hodge_theoretic_index(&d).unwrap();
        assert!(w.verify(&d));
        assert!(w.n.is_multiple_of(&per), "per={per} ind={}", w.n);
        assert!(Int::from(n * n).is_multiple_of(&w.n));
        assert!(Int::from(n).is_multiple_of(&per));
    }
}

#[test]
fn tampered_witness_fails() {
    let d = gabber_instance(3).unwrap();
    let mut w = hodge_theoretic_index(&d).unwrap();
    w.lambda.0[0] += r(1);
    assert!(!w.verify(&d));
}

#[test]
fn sublattice_rank_matches_index() {
    let d = gabber_instance(2).unwrap();
    let s = hodge_sublattice(&d).unwrap();
    assert_eq!(s.min_positive_rank, hodge_theoretic_index(&d).unwrap().n);
    for (i, v) in s.basis.iter().enumerate() {
        for (j, w) in s.basis.iter().enumerate() {
            assert_eq!(Rat::from_integer(s.gram.get(i, j).clone()), euler_pairing(v, w));
        }
    }
}

#[test]
fn pathology_gram_is_divisible() {
    let inst = pathology_instance(&[3, 5, 7], &pathology_candidates()).unwrap();
    let ell = Int::from(inst.ell);
    assert_eq!(inst.index.n, &ell * &ell);
    assert!(inst.bh_not_hodge);
    assert!(inst.gram_divisible());
    assert!(inst.sublattice.gram_gcd() > Int::one());
    assert!(inst.sublattice.gram_gcd().is_multiple_of(&ell));
    assert_eq!(inst.sublattice.min_positive_rank, &ell * &ell);
}

fn diag_siegel(a: i64, b: i64, c: i64) -> SiegelPoint {
    let mut z = Mat::<GaussRat>::zeros(3, 3);
    z.set(0, 0, g(1, a));
    z.set(1, 1, g(-2, b));
    z.set(2, 2, g(0, c));
    SiegelPoint::new(z).unwrap()
}

fn diag_form(b: [i64; 3]) -> Mat<Rat> {
    let mut m = Mat::<Rat>::zeros(6, 6);
    for (i, &x) in b.iter().enumerate() {
        m.set(i, 3 + i, r(x));
        m.set(3 + i, i, r(-x));
    }
    m
}

#[test]
fn diagonal_instances_lie_on_the_locus() {
    let z = diag_siegel(1, 2, 5);
    for b in [[1, 1, 1], [3, -2, 7], [0, 4, 1]] {
        let res = hodge_locus_residual(&diag_form(b), &z).unwrap();
        assert!(res.data().iter().all(Zero::is_zero));
    }
}

#[test]
fn unit_perturbation_leaves_the_locus() {
    let z = diag_siegel(1, 2, 5);
    let mut m = diag_form([1, 2, 3]);
    m.set(0, 1, r(1));
    m.set(1, 0, r(-1));
    let res = hodge_locus_residual(&m, &z).unwrap();
    assert!(!res.get(0, 1).is_zero());
}

#[test]
fn residual_reduces_to_a_block() {
    let z = diag_siegel(3, 1, 1);
    let mut m = Mat::<Rat>::zeros(6, 6);
    m.set(0, 2, r(4));
    m.set(2, 0, r(-4));
    let res = hodge_locus_residual(&m, &z).unwrap();
    assert_eq!(res.get(0, 2), &GaussRat::real(r(4)));
    assert_eq!(res.get(2, 0), &GaussRat::real(r(-4)));
}

#[test]
fn siegel_domain_is_enforced() {
    let mut z = Mat::<GaussRat>::zeros(3, 3);
    for i in 0..3 {
        z.set(i, i, g(0, 1));
    }
    z.set(0, 1, g(1, 0));
    assert!(SiegelPoint::new(z.clone()).is_err());
    z.set(1, 0, g(1, 0));
    assert!(SiegelPoint::new(z.clone()).is_ok());
    z.set(0, 1, g(0, 2));
    z.set(1, 0, g(0, 2));
    assert!(SiegelPoint::new(z.clone()).is_err());
    z.set(0, 1, g(0, 0));
    z.set(1, 0, g(0, 0));
    z.set(2, 2, g(0, -1));
    assert!(SiegelPoint::new(z).is_err());
    assert!(SiegelPoint::new(Mat::zeros(2, 2)).is_err());
}

fn theta_strategy() -> impl Strategy<Value = TwoClass> {
    prop::array::uniform15(-12i64..=12).prop_map(TwoClass::from_i64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn symbol_length_is_a_basis_invariant(theta in theta_strategy(), n in 2u64..=12, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = sample::unimodular(&mut rng, 6, 24);
        let l = symbol_length(&theta, n).unwrap();
        prop_assert!(l <= 3);
        prop_assert_eq!(symbol_length(&theta.pullback(&u), n).unwrap(), l);
        prop_assert_eq!(symbol_length_smith(&theta, n).unwrap(), l);
    }

    #[test]
    fn coset_minimum_is_at_most_the_class(theta in theta_strategy(), n in 2u64..=5) {
        let h = TwoClass::principal();
        let res = brauer_symbol_length(&theta, &[h], n, 64).unwrap();
        prop_assert!(res.length <= symbol_length(&theta, n).unwrap());
        prop_assert_eq!(symbol_length(&res.representative, n).unwrap(), res.length);
    }

    #[test]
    fn index_witness_reverifies(b in prop::array::uniform15(-6i64..=6), n in 1i64..=6) {
        let b = TwoClass::from_i64(b);
        let d = HodgeDatum::new(&b, Int::from(n), vec![TwoClass::principal()], vec![half_h_squared()]).unwrap();
        let w = hodge_theoretic_index(&d).unwrap();
        prop_assert!(w.verify(&d));
        prop_assert!(w.n.is_positive());
        prop_assert!(w.n.is_multiple_of(&period(&d).unwrap()));
    }
}
