//! Numerical stability functions on H-reduced Chern data.
//!
//! A class is reduced along a polarization `H` to the quadruple
//! `(H^3 ch_0, H^2 ch_1, H ch_2, ch_3)`. Twists are `D = b H` and the Kähler
//! class is `omega = sqrt(3) a H`, so every quantity below stays rational.

use core::cmp::Ordering;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::evenring::{EvenClass, TwoClass};
use crate::exactalg::{Int, Rat};

/// A rational slope or `+infinity`, ordered above every rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slope {
    Finite(Rat),
    Infinity,
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Slope::Infinity, Slope::Infinity) => Ordering::Equal,
            (Slope::Infinity, _) => Ordering::Greater,
            (_, Slope::Infinity) => Ordering::Less,
            (Slope::Finite(a), Slope::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(r) => write!(f, "{r}"),
            Slope::Infinity => write!(f, "+inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernQuadruple {
    pub q0: Rat,
    pub q1: Rat,
    pub q2: Rat,
    pub q3: Rat,
}

impl ChernQuadruple {
    pub fn new(q0: Rat, q1: Rat, q2: Rat, q3: Rat) -> Self {
        ChernQuadruple { q0, q1, q2, q3 }
    }

    pub fn from_i64(q: [i64; 4]) -> Self {
        let [a, b, c, d] = q.map(|x| Rat::from_integer(Int::from(x)));
        ChernQuadruple::new(a, b, c, d)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        ChernQuadruple::new(&self.q0 * c, &self.q1 * c, &self.q2 * c, &self.q3 * c)
    }

    /// The `D = b H` twist of the quadruple.
    pub fn twist(&self, b: &Rat) -> Self {
        let b2 = b * b;
        let b3 = &b2 * b;
        let two = Rat::from_integer(Int::from(2));
        let six = Rat::from_integer(Int::from(6));
        ChernQuadruple::new(
            self.q0.clone(),
            &self.q1 - b * &self.q0,
            &self.q2 - b * &self.q1 + &b2 * &self.q0 / &two,
            &self.q3 - b * &self.q2 + &b2 * &self.q1 / &two - &b3 * &self.q0 / &six,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabParams {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

impl StabParams {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Self {
        StabParams { a, b, c, d }
    }

    /// `a > 0` and `c > a^2/6 + |d| a / 2`.
    pub fn is_valid(&self) -> bool {
        let bound = &self.a * &self.a / Rat::from_integer(Int::from(6))
            + self.d.abs() * &self.a / Rat::from_integer(Int::from(2));
        self.a.is_positive() && self.c > bound
    }
}

pub fn params_valid(p: &StabParams) -> bool {
    p.is_valid()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexRat {
    pub re: Rat,
    pub im: Rat,
}

/// `(integral of exp(-D) v H^(3-i))_i` for `D = twist * H`.
pub fn reduce_along_h(v: &EvenClass, h: &TwoClass, twist: &Rat) -> Result<ChernQuadruple> {
    let h3 = h.cube_integral();
    if h3.is_zero() {
        return Err(Error::DegenerateForm);
    }
    let w = EvenClass::exp_mul(&h.scale(&-twist.clone()), v);
    Ok(ChernQuadruple::new(&w.a * &h3, w.b.pair(&h.wedge(h)), h.pair(&w.c), w.d))
}

pub fn slope_mu(q: &ChernQuadruple) -> Slope {
    if q.q0.is_zero() {
        Slope::Infinity
    } else {
        Slope::Finite(&q.q1 / &q.q0)
    }
}

/// `(q_2 - a^2 q_0 / 2) / q_1`; the tilt slope for `omega = sqrt(3) a H` is
/// this value divided by `sqrt(3) a`.
pub fn tilt_slope_nu(q: &ChernQuadruple, a: &Rat) -> Slope {
    if q.q1.is_zero() {
        return Slope::Infinity;
    }
    let num = &q.q2 - a * a * &q.q0 / Rat::from_integer(Int::from(2));
    Slope::Finite(num / &q.q1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bogomolov {
    pub value: Rat,
    pub nonnegative: bool,
}

/// `q_1^2 - 2 q_0 q_2`.
pub fn bogomolov(q: &ChernQuadruple) -> Bogomolov {
    let value = &q.q1 * &q.q1 - Rat::from_integer(Int::from(2)) * &q.q0 * &q.q2;
    let nonnegative = !value.is_negative();
    Bogomolov { value, nonnegative }
}

/// Central charge for `omega = t H` with `t^2 = omega_sq`. The imaginary part
/// is returned divided by `t`.
///
/// For `dim = 3` the slots are `(H^3 ch_0, H^2 ch_1, H ch_2, ch_3)`; for
/// `dim = 2` they are `(H^2 ch_0, H ch_1, ch_2, -)`; for `dim = 1`,
/// `(H ch_0, ch_1, -, -)`.
pub fn central_charge(q: &ChernQuadruple, dim: u32, omega_sq: &Rat) -> Result<ComplexRat> {
    let two = Rat::from_integer(Int::from(2));
    let six = Rat::from_integer(Int::from(6));
    match dim {
        1 => Ok(ComplexRat { re: -q.q1.clone(), im: q.q0.clone() }),
        2 => Ok(ComplexRat { re: -q.q2.clone() + omega_sq * &q.q0 / &two, im: q.q1.clone() }),
        3 => Ok(ComplexRat { re: -q.q3.clone() + omega_sq * &q.q1 / &two, im: &q.q2 - omega_sq * &q.q0 / &six }),
        other => Err(Error::UnsupportedDimension(other)),
    }
}

/// `(-ch_3 + d H ch_2 + c H^2 ch_1) + i (H ch_2 - a^2/2 H^3 ch_0)` on the
/// `b`-twisted quadruple.
pub fn central_charge_abcd(q: &ChernQuadruple, p: &StabParams) -> ComplexRat {
    let t = q.twist(&p.b);
    ComplexRat {
        re: -t.q3.clone() + &p.d * &t.q2 + &p.c * &t.q1,
        im: &t.q2 - &p.a * &p.a * &t.q0 / Rat::from_integer(Int::from(2)),
    }
}

/// `ch_3 <= omega^2 ch_1 / 18` with `omega = sqrt(3) a H`, i.e. `q_3 <= a^2 q_1 / 6`.
pub fn bg_inequality(q: &ChernQuadruple, a: &Rat) -> bool {
    q.q3 <= a * a * &q.q1 / Rat::from_integer(Int::from(6))
}
