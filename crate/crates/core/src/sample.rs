//! Seeded random generation of lattice data.

use rand::Rng;

use crate::evenring::{EvenClass, FourClass, TwoClass};
use crate::exactalg::{Int, Mat, Rat};

pub fn int_in<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> Int {
    Int::from(rng.gen_range(lo..=hi))
}

pub fn rat_in<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> Rat {
    Rat::from_integer(int_in(rng, lo, hi))
}

pub fn two_class<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> TwoClass {
    TwoClass::from_fn(|_| rat_in(rng, lo, hi))
}

pub fn four_class<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> FourClass {
    FourClass::from_fn(|_| rat_in(rng, lo, hi))
}

pub fn even_class<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> EvenClass {
    EvenClass::new(rat_in(rng, lo, hi), two_class(rng, lo, hi), four_class(rng, lo, hi), rat_in(rng, lo, hi))
}

/// Product of `steps` random elementary transvections and swaps; determinant +-1.
pub fn unimodular<R: Rng>(rng: &mut R, n: usize, steps: usize) -> Mat<Int> {
    let mut g = Mat::<Int>::identity(n);
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        if rng.gen_bool(0.2) {
            g.swap_rows(i, j);
        } else {
            let c = Int::from(rng.gen_range(-2i64..=2));
            for k in 0..n {
                let s = g.get(j, k).clone();
                *g.get_mut(i, k) += &c * s;
            }
        }
    }
    g
}
