//! Exact integer and rational linear algebra.

mod cubic;
mod diophantine;
mod linear;
mod mat;
mod modp;
mod pfaffian;
mod smith;

pub use cubic::{Cubic, Field};
pub use diophantine::{solve_diophantine, Diophantine, Infeasible};
pub use linear::{annihilator, clear_denominators, solve_rational};
pub use mat::Mat;
pub use modp::{is_prime, rank_mod_p};
pub use pfaffian::{det, pfaffian, pfaffian_expand, pfaffian_int};
pub use smith::{alt_type, smith_normal_form, AltType, SmithForm};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(n: Int) -> Rat {
    Rat::from_integer(n)
}

/// Returns the integer value of `r` when it has denominator one.
pub fn as_int(r: &Rat) -> Option<Int> {
    if r.denom().is_one() {
        Some(r.numer().clone())
    } else {
        None
    }
}

pub fn lcm_denominators<'a, I: IntoIterator<Item = &'a Rat>>(it: I) -> Int {
    it.into_iter().fold(Int::one(), |acc, r| acc.lcm(r.denom()))
}

pub fn gcd_all<'a, I: IntoIterator<Item = &'a Int>>(it: I) -> Int {
    it.into_iter().fold(Int::zero(), |acc, x| acc.gcd(x))
}

/// Factorial as a rational, for the small arguments used in exponentials.
pub fn factorial(n: u32) -> Int {
    (1..=n).fold(Int::one(), |acc, k| acc * Int::from(k))
}
