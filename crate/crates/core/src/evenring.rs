//! The even cohomology ring of a rank-6 lattice.
//!
//! Coordinates are taken in the basis `x_1, ..., x_6` with volume form
//! `omega = x_1 ^ ... ^ x_6`. A degree-2 class has coordinates `b_ij` on
//! `x_ij = x_i ^ x_j` (`i < j`); a degree-4 class has coordinates `c_ij` on the
//! dual monomials `x*_ij`, normalized by `x_ij ^ x*_ij = omega`.
//!
//! The principal polarization used throughout is
//! `x_4 ^ x_1 + x_5 ^ x_2 + x_6 ^ x_3`, which has Pfaffian `+1` with respect
//! to `omega`.

use alloc::vec::Vec;
use core::array;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{factorial, pfaffian, Cubic, Int, Mat, Rat};

/// Index pairs `(i, j)`, `i < j`, zero based, in lexicographic order.
pub const PAIRS: [(usize, usize); 15] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (0, 5),
    (1, 2),
    (1, 3),
    (1, 4),
    (1, 5),
    (2, 3),
    (2, 4),
    (2, 5),
    (3, 4),
    (3, 5),
    (4, 5),
];

pub fn pair_index(i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    PAIRS.iter().position(|&p| p == (i, j)).expect("valid pair")
}

fn mask(p: (usize, usize)) -> u8 {
    (1 << p.0) | (1 << p.1)
}

/// Sign of `x_S ^ x_T` relative to the sorted monomial of `S | T`.
fn wedge_sign(s: u8, t: u8) -> i8 {
    let mut inv = 0;
    for a in 0..6 {
        if s & (1 << a) != 0 {
            inv += (t & ((1u8 << a) - 1)).count_ones();
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `x*_p` as a signed sorted monomial: `x*_p = sign * x_{complement of p}`.
fn dual_sign(p: usize) -> i8 {
    let m = mask(PAIRS[p]);
    wedge_sign(m, 0x3f & !m)
}

/// `x_p ^ x_q = sign * x*_k`, when nonzero.
fn two_two(p: usize, q: usize) -> Option<(usize, i8)> {
    let (mp, mq) = (mask(PAIRS[p]), mask(PAIRS[q]));
    if mp & mq != 0 {
        return None;
    }
    let rest = 0x3f & !(mp | mq);
    let k = PAIRS.iter().position(|&pr| mask(pr) == rest)?;
    // x_p ^ x_q = s * x_{sorted(p|q)} and x_{sorted(p|q)} = dual_sign(k) * x*_k
    Some((k, wedge_sign(mp, mq) * dual_sign(k)))
}

macro_rules! graded_piece {
    ($name:ident) => {
        #[derive(Clone, Debug, PartialEq, Eq, Hash)]
        pub struct $name(pub [Rat; 15]);

        impl $name {
            pub fn zero() -> Self {
                $name(array::from_fn(|_| Rat::zero()))
            }

            pub fn from_fn(f: impl FnMut(usize) -> Rat) -> Self {
                $name(array::from_fn(f))
            }

            pub fn from_i64(c: [i64; 15]) -> Self {
                $name(c.map(|x| Rat::from_integer(Int::from(x))))
            }

            /// Builds a class from `((i, j), coefficient)` terms with one-based indices.
            pub fn from_terms(terms: &[((usize, usize), Rat)]) -> Self {
                let mut out = Self::zero();
                for ((i, j), c) in terms {
                    out.add_term(i - 1, j - 1, c.clone());
                }
                out
            }

            /// Adds `c * e_i ^ e_j` (zero based), respecting antisymmetry.
            pub fn add_term(&mut self, i: usize, j: usize, c: Rat) {
                if i == j {
                    return;
                }
                let k = pair_index(i, j);
                if i < j {
                    self.0[k] += c;
                } else {
                    self.0[k] -= c;
                }
            }

            pub fn coord(&self, i: usize, j: usize) -> Rat {
                self.0[pair_index(i, j)].clone()
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(Zero::is_zero)
            }

            pub fn is_integral(&self) -> bool {
                self.0.iter().all(|x| x.denom().is_one())
            }

            pub fn scale(&self, c: &Rat) -> Self {
                $name(array::from_fn(|k| &self.0[k] * c))
            }

            pub fn dot(&self, other: &Self) -> Rat {
                self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
            }

            /// Alternating matrix with entry `(i, j)` equal to the `ij` coordinate.
            pub fn to_matrix(&self) -> Mat<Rat> {
                let mut m = Mat::zeros(6, 6);
                for (k, &(i, j)) in PAIRS.iter().enumerate() {
                    m.set(i, j, self.0[k].clone());
                    m.set(j, i, -self.0[k].clone());
                }
                m
            }

            pub fn to_int_matrix(&self) -> Option<Mat<Int>> {
                self.to_matrix().to_int()
            }

            pub fn from_matrix(m: &Mat<Rat>) -> Result<Self> {
                if m.rows() != 6 || !m.is_alternating() {
                    return Err(Error::NotAlternating);
                }
                Ok($name(array::from_fn(|k| m.get(PAIRS[k].0, PAIRS[k].1).clone())))
            }

            pub fn pfaffian(&self) -> Rat {
                pfaffian(&self.to_matrix()).expect("6x6 alternating")
            }

            /// Pfaffian of the 4x4 minor deleting rows and columns `i` and `j`.
            pub fn minor_pfaffian(&self, i: usize, j: usize) -> Rat {
                let keep: Vec<usize> = (0..6).filter(|&k| k != i && k != j).collect();
                let m = self.to_matrix().select(&keep, &keep);
                pfaffian(&m).expect("4x4 alternating")
            }

            /// Pullback `g^t M g` of the underlying matrix.
            pub fn pullback(&self, g: &Mat<Int>) -> Self {
                let g = g.to_rat();
                let m = &(&g.transpose() * &self.to_matrix()) * &g;
                Self::from_matrix(&m).expect("congruence preserves alternation")
            }

            /// Coordinates reduced into `[0, n)`; requires integral input.
            pub fn reduce_mod(&self, n: &Int) -> Self {
                use num_integer::Integer;
                $name(array::from_fn(|k| Rat::from_integer(self.0[k].to_integer().mod_floor(n))))
            }
        }

        impl Add for &$name {
            type Output = $name;
            fn add(self, rhs: &$name) -> $name {
                $name(array::from_fn(|k| &self.0[k] + &rhs.0[k]))
            }
        }

        impl Sub for &$name {
            type Output = $name;
            fn sub(self, rhs: &$name) -> $name {
                $name(array::from_fn(|k| &self.0[k] - &rhs.0[k]))
            }
        }

        impl Neg for &$name {
            type Output = $name;
            fn neg(self) -> $name {
                $name(array::from_fn(|k| -&self.0[k]))
            }
        }
    };
}

graded_piece!(TwoClass);
graded_piece!(FourClass);

impl TwoClass {
    /// `x_4 ^ x_1 + x_5 ^ x_2 + x_6 ^ x_3`.
    pub fn principal() -> Self {
        Self::polarization(&[1, 1, 1])
    }

    /// `d_1 x_4 ^ x_1 + d_2 x_5 ^ x_2 + d_3 x_6 ^ x_3`, a form of type `(d_1, d_2, d_3)`.
    pub fn polarization(d: &[i64; 3]) -> Self {
        let mut h = Self::zero();
        for (i, &di) in d.iter().enumerate() {
            h.add_term(i + 3, i, Rat::from_integer(Int::from(di)));
        }
        h
    }

    pub fn wedge(&self, other: &TwoClass) -> FourClass {
        let mut out = FourClass::zero();
        for p in 0..15 {
            if self.0[p].is_zero() {
                continue;
            }
            for q in 0..15 {
                if other.0[q].is_zero() {
                    continue;
                }
                if let Some((k, s)) = two_two(p, q) {
                    let t = &self.0[p] * &other.0[q];
                    if s > 0 {
                        out.0[k] += t;
                    } else {
                        out.0[k] -= t;
                    }
                }
            }
        }
        out
    }

    /// `integral of self ^ c`.
    pub fn pair(&self, c: &FourClass) -> Rat {
        self.dot_four(c)
    }

    fn dot_four(&self, c: &FourClass) -> Rat {
        self.0.iter().zip(&c.0).map(|(a, b)| a * b).sum()
    }

    pub fn cube_integral(&self) -> Rat {
        self.pair(&self.wedge(self))
    }

    /// Coordinate identity onto the dual lattice.
    pub fn star(&self) -> FourClass {
        FourClass(self.0.clone())
    }
}

impl FourClass {
    /// Contraction against `omega`: the same coordinates read as a degree-2
    /// class on the dual lattice.
    pub fn star(&self) -> TwoClass {
        TwoClass(self.0.clone())
    }
}

/// A graded class `a + B + C + d omega`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EvenClass {
    pub a: Rat,
    pub b: TwoClass,
    pub c: FourClass,
    pub d: Rat,
}

impl EvenClass {
    pub fn new(a: Rat, b: TwoClass, c: FourClass, d: Rat) -> Self {
        EvenClass { a, b, c, d }
    }

    pub fn zero() -> Self {
        EvenClass::new(Rat::zero(), TwoClass::zero(), FourClass::zero(), Rat::zero())
    }

    pub fn one() -> Self {
        Self::scalar(Rat::one())
    }

    pub fn scalar(a: Rat) -> Self {
        EvenClass::new(a, TwoClass::zero(), FourClass::zero(), Rat::zero())
    }

    pub fn omega() -> Self {
        EvenClass::new(Rat::zero(), TwoClass::zero(), FourClass::zero(), Rat::one())
    }

    pub fn from_two(b: TwoClass) -> Self {
        EvenClass::new(Rat::zero(), b, FourClass::zero(), Rat::zero())
    }

    pub fn from_four(c: FourClass) -> Self {
        EvenClass::new(Rat::zero(), TwoClass::zero(), c, Rat::zero())
    }

    pub fn rank(&self) -> &Rat {
        &self.a
    }

    pub fn is_integral(&self) -> bool {
        self.a.denom().is_one() && self.b.is_integral() && self.c.is_integral() && self.d.denom().is_one()
    }

    /// All 32 coordinates in the order `a, b_ij, c_ij, d`.
    pub fn coords(&self) -> Vec<Rat> {
        let mut v = Vec::with_capacity(32);
        v.push(self.a.clone());
        v.extend(self.b.0.iter().cloned());
        v.extend(self.c.0.iter().cloned());
        v.push(self.d.clone());
        v
    }

    pub fn from_coords(v: &[Rat]) -> Result<Self> {
        if v.len() != 32 {
            return Err(Error::InvalidInput(alloc::format!("expected 32 coordinates, got {}", v.len())));
        }
        Ok(EvenClass::new(
            v[0].clone(),
            TwoClass::from_fn(|k| v[1 + k].clone()),
            FourClass::from_fn(|k| v[16 + k].clone()),
            v[31].clone(),
        ))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        EvenClass::new(&self.a * c, self.b.scale(c), self.c.scale(c), &self.d * c)
    }

    pub fn cup(&self, o: &EvenClass) -> EvenClass {
        let a = &self.a * &o.a;
        let b = &self.b.scale(&o.a) + &o.b.scale(&self.a);
        let c = &(&self.c.scale(&o.a) + &o.c.scale(&self.a)) + &self.b.wedge(&o.b);
        let d = &self.a * &o.d + &o.a * &self.d + self.b.pair(&o.c) + o.b.pair(&self.c);
        EvenClass::new(a, b, c, d)
    }

    pub fn integrate(&self) -> Rat {
        self.d.clone()
    }

    /// `exp(B) = 1 + B + B^2/2 + B^3/6`.
    pub fn exp(b: &TwoClass) -> EvenClass {
        let b2 = b.wedge(b);
        let b3 = b.pair(&b2);
        EvenClass::new(
            Rat::one(),
            b.clone(),
            b2.scale(&Rat::new(Int::one(), Int::from(2))),
            b3 / Rat::from_integer(factorial(3)),
        )
    }

    pub fn exp_mul(b: &TwoClass, v: &EvenClass) -> EvenClass {
        EvenClass::exp(b).cup(v)
    }

    /// `(a, -B, C, -d)`.
    pub fn dual(&self) -> EvenClass {
        EvenClass::new(self.a.clone(), -&self.b, self.c.clone(), -&self.d)
    }

    /// `(a, B, C, d) -> (d, -star C, star B, -a)`.
    pub fn fm(&self) -> EvenClass {
        EvenClass::new(self.d.clone(), -&self.c.star(), self.b.star(), -&self.a)
    }

    pub fn igusa(&self) -> Rat {
        igusa_discriminant(self)
    }
}

impl Add for &EvenClass {
    type Output = EvenClass;
    fn add(self, o: &EvenClass) -> EvenClass {
        EvenClass::new(&self.a + &o.a, &self.b + &o.b, &self.c + &o.c, &self.d + &o.d)
    }
}

impl Sub for &EvenClass {
    type Output = EvenClass;
    fn sub(self, o: &EvenClass) -> EvenClass {
        EvenClass::new(&self.a - &o.a, &self.b - &o.b, &self.c - &o.c, &self.d - &o.d)
    }
}

impl Neg for &EvenClass {
    type Output = EvenClass;
    fn neg(self) -> EvenClass {
        EvenClass::new(-&self.a, -&self.b, -&self.c, -&self.d)
    }
}

impl Mul for &EvenClass {
    type Output = EvenClass;
    fn mul(self, o: &EvenClass) -> EvenClass {
        self.cup(o)
    }
}

pub fn cup(u: &EvenClass, v: &EvenClass) -> EvenClass {
    u.cup(v)
}

pub fn integrate(v: &EvenClass) -> Rat {
    v.integrate()
}

pub fn exp_mul(b: &TwoClass, v: &EvenClass) -> EvenClass {
    EvenClass::exp_mul(b, v)
}

pub fn fm_transform(v: &EvenClass) -> EvenClass {
    v.fm()
}

pub fn euler_pairing(v: &EvenClass, w: &EvenClass) -> Rat {
    v.dual().cup(w).integrate()
}

/// Igusa's quartic
/// `-a Pf(C) - d Pf(B) + sum Pf(B_(ij)) Pf(C_(ij)) - (ad - B.C)^2 / 4`.
pub fn igusa_discriminant(v: &EvenClass) -> Rat {
    let mut minors = Rat::zero();
    for &(i, j) in PAIRS.iter() {
        let pb = v.b.minor_pfaffian(i, j);
        if pb.is_zero() {
            continue;
        }
        minors += pb * v.c.minor_pfaffian(i, j);
    }
    let inner = &v.a * &v.d - v.b.dot_four(&v.c);
    -(&v.a * v.c.pfaffian()) - &v.d * v.b.pfaffian() + minors - &inner * &inner / Rat::from_integer(Int::from(4))
}

/// The characteristic Pfaffian `Pf(tH - u)` computed twice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPfaffian {
    pub interpolated: Cubic,
    pub closed: Cubic,
}

impl CharPfaffian {
    pub fn cubic(&self) -> &Cubic {
        &self.closed
    }
}

pub fn char_pfaffian(u: &TwoClass, h: &TwoClass) -> Result<CharPfaffian> {
    if h.cube_integral().is_zero() {
        return Err(Error::DegenerateForm);
    }
    let values: Vec<Rat> = (0..4).map(|t| (&h.scale(&Rat::from_integer(Int::from(t))) - u).pfaffian()).collect();
    let interpolated = interpolate_cubic(&values);

    let mut coeff: Vec<Rat> = Vec::with_capacity(4);
    for i in 0..4u32 {
        let mut prod = EvenClass::one();
        for _ in 0..i {
            prod = prod.cup(&EvenClass::from_two(h.clone()));
        }
        for _ in 0..3 - i {
            prod = prod.cup(&EvenClass::from_two(u.clone()));
        }
        let mut c = prod.integrate() / Rat::from_integer(factorial(3 - i) * factorial(i));
        if (3 - i) % 2 == 1 {
            c = -c;
        }
        coeff.push(c);
    }
    let closed = Cubic::new(coeff[3].clone(), coeff[2].clone(), coeff[1].clone(), coeff[0].clone());
    if closed != interpolated {
        return Err(Error::Internal(alloc::format!(
            "characteristic Pfaffian routes disagree: {interpolated} vs {closed}"
        )));
    }
    Ok(CharPfaffian { interpolated, closed })
}

/// Cubic through `(t, values[t])` for `t = 0, 1, 2, 3` by Newton differences.
pub fn interpolate_cubic(values: &[Rat]) -> Cubic {
    let two = Rat::from_integer(Int::from(2));
    let six = Rat::from_integer(Int::from(6));
    let f0 = values[0].clone();
    let d1 = &values[1] - &values[0];
    let d2 = &values[2] - &values[1] * &two + &values[0];
    let d3 = &values[3] - &values[2] * Rat::from_integer(Int::from(3)) + &values[1] * Rat::from_integer(Int::from(3))
        - &values[0];
    // f = f0 + d1 t + d2 t(t-1)/2 + d3 t(t-1)(t-2)/6
    let a3 = &d3 / &six;
    let a2 = &d2 / &two - &d3 / &two;
    let a1 = &d1 - &d2 / &two + &d3 / Rat::from_integer(Int::from(3));
    Cubic::new(a3, a2, a1, f0)
}
