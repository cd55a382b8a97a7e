use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::modp::{is_prime, reduce};
use super::{lcm_denominators, Int, Rat};
use crate::error::{Error, Result};

/// `a3 t^3 + a2 t^2 + a1 t + a0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cubic {
    pub a3: Rat,
    pub a2: Rat,
    pub a1: Rat,
    pub a0: Rat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Cubic {
    pub fn new(a3: Rat, a2: Rat, a1: Rat, a0: Rat) -> Self {
        Cubic { a3, a2, a1, a0 }
    }

    pub fn from_i64(a3: i64, a2: i64, a1: i64, a0: i64) -> Self {
        let r = |x| Rat::from_integer(Int::from(x));
        Cubic::new(r(a3), r(a2), r(a1), r(a0))
    }

    pub fn coefficients(&self) -> [&Rat; 4] {
        [&self.a3, &self.a2, &self.a1, &self.a0]
    }

    pub fn is_degenerate(&self) -> bool {
        self.a3.is_zero()
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        ((&self.a3 * t + &self.a2) * t + &self.a1) * t + &self.a0
    }

    pub fn discriminant(&self) -> Rat {
        let (a, b, c, d) = (&self.a3, &self.a2, &self.a1, &self.a0);
        let n = |k: i64| Rat::from_integer(Int::from(k));
        n(18) * a * b * c * d - n(4) * b * b * b * d + b * b * c * c - n(4) * a * c * c * c - n(27) * a * a * d * d
    }

    /// Nonnegative discriminant and strictly alternating signs, which forces
    /// three real positive roots.
    pub fn positive_real_roots(&self) -> Result<bool> {
        if self.is_degenerate() {
            return Err(Error::DegenerateCubic);
        }
        let flip = self.a3.is_negative();
        let s = |x: &Rat| if flip { -x.clone() } else { x.clone() };
        let alternating = s(&self.a2).is_negative() && s(&self.a1).is_positive() && s(&self.a0).is_negative();
        Ok(alternating && !self.discriminant().is_negative())
    }

    /// Integer coefficients after clearing denominators.
    pub fn cleared(&self) -> [Int; 4] {
        let l = lcm_denominators(self.coefficients());
        self.coefficients().map(|c| (c * Rat::from_integer(l.clone())).to_integer())
    }

    pub fn irreducible(&self, over: Field) -> Result<bool> {
        if self.is_degenerate() {
            return Err(Error::DegenerateCubic);
        }
        match over {
            Field::Rationals => Ok(!self.has_rational_root()),
            Field::Prime(p) => {
                if !is_prime(p) {
                    return Err(Error::NotPrime(p));
                }
                let c = self.reduced_mod(p)?;
                if c[0] == 0 {
                    return Err(Error::DegenerateCubic);
                }
                let root = (0..p).any(|t| {
                    let v = c.iter().fold(0u128, |acc, &k| (acc * t as u128 + k as u128) % p as u128);
                    v == 0
                });
                Ok(!root)
            }
        }
    }

    /// Coefficients `[a3, a2, a1, a0]` modulo `p`; denominators must be units.
    pub fn reduced_mod(&self, p: u64) -> Result<[u64; 4]> {
        let mut out = [0u64; 4];
        for (slot, c) in out.iter_mut().zip(self.coefficients()) {
            let den = reduce(c.denom(), p);
            if den == 0 {
                return Err(Error::InvalidInput(alloc::format!("denominator divisible by {p}")));
            }
            let num = reduce(c.numer(), p);
            *slot = (num as u128 * super::modp::inv_mod(den, p) as u128 % p as u128) as u64;
        }
        Ok(out)
    }

    fn has_rational_root(&self) -> bool {
        let [c3, _, _, c0] = self.cleared();
        if c0.is_zero() {
            return true;
        }
        let ps = divisors(&c0.abs());
        let qs = divisors(&c3.abs());
        for p in &ps {
            for q in &qs {
                if !p.gcd(q).is_one() {
                    continue;
                }
                for sign in [1, -1] {
                    let r = Rat::new(Int::from(sign) * p, q.clone());
                    if self.eval(&r).is_zero() {
                        return true;
                    }
                }
            }
        }
        false
    }
}

fn divisors(n: &Int) -> Vec<Int> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = Int::one();
    while &d * &d <= *n {
        if n.is_multiple_of(&d) {
            let e = n / &d;
            if e != d {
                large.push(e);
            }
            small.push(d.clone());
        }
        d += 1u32;
    }
    small.extend(large.into_iter().rev());
    small
}

impl core::fmt::Display for Cubic {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "({})t^3 + ({})t^2 + ({})t + ({})", self.a3, self.a2, self.a1, self.a0)
    }
}
