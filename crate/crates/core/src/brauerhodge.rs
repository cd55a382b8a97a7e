//! Twisted Mukai lattices of B-fields: period, Hodge-theoretic index, the
//! Hodge sublattice with its Euler form, symbol length, and Hodge loci in
//! the Siegel space.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::evenring::{euler_pairing, EvenClass, FourClass, TwoClass};
use crate::exactalg::{
    annihilator, det, gcd_all, lcm_denominators, smith_normal_form, solve_diophantine, solve_rational, Diophantine,
    Int, Mat, Rat, SmithForm,
};

/// A rational B-field `B` with `n B` integral, together with rational
/// generators of the Hodge classes in degrees 2 and 4.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeDatum {
    pub b_field: TwoClass,
    pub n: Int,
    pub ns2: Vec<TwoClass>,
    pub hdg4: Vec<FourClass>,
}

impl HodgeDatum {
    /// `B = b / n` for an integral `b`.
    pub fn new(b: &TwoClass, n: Int, ns2: Vec<TwoClass>, hdg4: Vec<FourClass>) -> Result<Self> {
        if !n.is_positive() {
            return Err(Error::InvalidInput(String::from("n must be positive")));
        }
        if !b.is_integral() {
            return Err(Error::InvalidInput(String::from("numerator of the B-field must be integral")));
        }
        let b_field = b.scale(&Rat::new(Int::one(), n.clone()));
        Ok(HodgeDatum { b_field, n, ns2, hdg4 })
    }

    pub fn from_b_field(b_field: TwoClass, n: Int, ns2: Vec<TwoClass>, hdg4: Vec<FourClass>) -> Result<Self> {
        let d = HodgeDatum { b_field, n, ns2, hdg4 };
        if !d.numerator().is_integral() {
            return Err(Error::InvalidInput(String::from("n B is not integral")));
        }
        Ok(d)
    }

    pub fn numerator(&self) -> TwoClass {
        self.b_field.scale(&Rat::from_integer(self.n.clone()))
    }

    fn ns_annihilator(&self) -> Mat<Int> {
        let gens: Vec<Vec<Rat>> = self.ns2.iter().map(|g| g.0.to_vec()).collect();
        annihilator(&gens, 15)
    }

    fn hdg_annihilator(&self) -> Mat<Int> {
        let gens: Vec<Vec<Rat>> = self.hdg4.iter().map(|g| g.0.to_vec()).collect();
        annihilator(&gens, 15)
    }

    /// Matrix of `x -> B ^ x` from degree 2 to degree 4.
    fn wedge_matrix(&self) -> Mat<Rat> {
        let mut m = Mat::zeros(15, 15);
        for p in 0..15 {
            let mut e = TwoClass::zero();
            e.0[p] = Rat::one();
            let col = self.b_field.wedge(&e);
            for k in 0..15 {
                m.set(k, p, col.0[k].clone());
            }
        }
        m
    }

    fn half_b_squared(&self) -> FourClass {
        self.b_field.wedge(&self.b_field).scale(&Rat::new(Int::one(), Int::from(2)))
    }
}

pub fn theta_field_check(b_field: &TwoClass, n: &Int, theta: &TwoClass) -> bool {
    let nb = b_field.scale(&Rat::from_integer(n.clone()));
    if !nb.is_integral() || !theta.is_integral() {
        return false;
    }
    nb.reduce_mod(n) == theta.reduce_mod(n)
}

fn dot(row: &[Int], v: &[Rat]) -> Rat {
    row.iter().zip(v).map(|(a, b)| Rat::from_integer(a.clone()) * b).sum()
}

/// Integer solutions of `A x = N r` as `N` varies, sharing one Smith form.
struct AffineFamily {
    smith: SmithForm,
    target: Vec<Rat>,
    cols: usize,
}

impl AffineFamily {
    fn new(rows: Vec<(Vec<Rat>, Rat)>, cols: usize) -> Self {
        let mut int_rows = Vec::with_capacity(rows.len());
        let mut rhs = Vec::with_capacity(rows.len());
        for (coef, r) in rows {
            let l = Rat::from_integer(lcm_denominators(&coef));
            int_rows.push(coef.iter().map(|x| (x * &l).to_integer()).collect::<Vec<_>>());
            rhs.push(r * &l);
        }
        let a = if int_rows.is_empty() { Mat::zeros(0, cols) } else { Mat::from_rows(int_rows).expect("rows") };
        let smith = smith_normal_form(&a);
        let target = smith.u.to_rat().mul_vec(&rhs);
        AffineFamily { smith, target, cols }
    }

    fn solve_at(&self, n: &Int) -> Option<Vec<Int>> {
        let diag = self.smith.diagonal();
        let n = Rat::from_integer(n.clone());
        let mut y = vec![Int::zero(); self.cols];
        for (i, t0) in self.target.iter().enumerate() {
            let t = t0 * &n;
            let d = diag.get(i).cloned().unwrap_or_default();
            if d.is_zero() {
                if !t.is_zero() {
                    return None;
                }
                continue;
            }
            let q = t / Rat::from_integer(d);
            if !q.is_integer() {
                return None;
            }
            y[i] = q.to_integer();
        }
        Some(self.smith.v.mul_vec(&y))
    }
}

/// Minimal `N >= 1` with `N B` in `NS_Q + H^2(Z)`.
pub fn period(d: &HodgeDatum) -> Result<Int> {
    let k2 = d.ns_annihilator();
    let rows = (0..k2.rows())
        .map(|i| {
            let coef: Vec<Rat> = k2.row(i).iter().map(|x| Rat::from_integer(x.clone())).collect();
            (coef, dot(k2.row(i), &d.b_field.0))
        })
        .collect();
    let fam = AffineFamily::new(rows, 15);
    let mut n = Int::one();
    while n <= d.n {
        if fam.solve_at(&n).is_some() {
            return Ok(n);
        }
        n += 1u32;
    }
    Err(Error::Internal(format!("no period found up to n = {}", d.n)))
}

/// A solution of both congruences at the minimal `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexWitness {
    pub n: Int,
    pub h1_coeffs: Vec<Rat>,
    pub h2_coeffs: Vec<Rat>,
    pub lambda: TwoClass,
}

impl IndexWitness {
    pub fn h1(&self, d: &HodgeDatum) -> TwoClass {
        d.ns2.iter().zip(&self.h1_coeffs).fold(TwoClass::zero(), |acc, (g, c)| &acc + &g.scale(c))
    }

    pub fn h2(&self, d: &HodgeDatum) -> FourClass {
        d.hdg4.iter().zip(&self.h2_coeffs).fold(FourClass::zero(), |acc, (g, c)| &acc + &g.scale(c))
    }

    /// Re-substitutes the witness into `N B - H1` and `N B^2/2 - B H1 + H2`.
    pub fn verify(&self, d: &HodgeDatum) -> bool {
        if self.h1_coeffs.len() != d.ns2.len() || self.h2_coeffs.len() != d.hdg4.len() || !self.n.is_positive() {
            return false;
        }
        let n = Rat::from_integer(self.n.clone());
        let h1 = self.h1(d);
        let h2 = self.h2(d);
        let first = &d.b_field.scale(&n) - &h1;
        let second = &(&d.half_b_squared().scale(&n) - &d.b_field.wedge(&h1)) + &h2;
        first.is_integral() && first == self.lambda && second.is_integral()
    }
}

pub fn hodge_theoretic_index(d: &HodgeDatum) -> Result<IndexWitness> {
    let k2 = d.ns_annihilator();
    let k4 = d.hdg_annihilator();
    let mb = d.wedge_matrix();
    let half_b2 = d.half_b_squared();
    let mut rows = Vec::with_capacity(k2.rows() + k4.rows());
    for i in 0..k2.rows() {
        let mut coef: Vec<Rat> = k2.row(i).iter().map(|x| Rat::from_integer(x.clone())).collect();
        coef.extend((0..15).map(|_| Rat::zero()));
        rows.push((coef, dot(k2.row(i), &d.b_field.0)));
    }
    for i in 0..k4.rows() {
        let row = k4.row(i);
        let mut coef: Vec<Rat> = (0..15).map(|p| dot(row, &mb.column(p))).collect();
        coef.extend(row.iter().map(|x| -Rat::from_integer(x.clone())));
        rows.push((coef, dot(row, &half_b2.0)));
    }
    let fam = AffineFamily::new(rows, 30);
    let bound = &d.n * &d.n;
    let mut n = Int::one();
    while n <= bound {
        if let Some(sol) = fam.solve_at(&n) {
            let lambda = TwoClass::from_fn(|k| Rat::from_integer(sol[k].clone()));
            let mu = FourClass::from_fn(|k| Rat::from_integer(sol[15 + k].clone()));
            let nr = Rat::from_integer(n.clone());
            let h1 = &d.b_field.scale(&nr) - &lambda;
            let h2 = &(&half_b2.scale(&nr) - &d.b_field.wedge(&lambda)) + &mu;
            let h1_coeffs = span_coefficients(d.ns2.iter().map(|g| g.0.to_vec()).collect(), &h1.0)?;
            let h2_coeffs = span_coefficients(d.hdg4.iter().map(|g| g.0.to_vec()).collect(), &h2.0)?;
            let w = IndexWitness { n: n.clone(), h1_coeffs, h2_coeffs, lambda };
            if !w.verify(d) {
                return Err(Error::Internal(String::from("index witness failed re-verification")));
            }
            return Ok(w);
        }
        n += 1u32;
    }
    Err(Error::Internal(String::from("fallback witness at n^2 was not found")))
}

fn span_coefficients(gens: Vec<Vec<Rat>>, v: &[Rat]) -> Result<Vec<Rat>> {
    let g = Mat::from_fn(15, gens.len(), |i, j| gens[j][i].clone());
    solve_rational(&g, v).ok_or_else(|| Error::Internal(String::from("class is not in the rational span")))
}

/// Integral Hodge classes of the twisted Mukai lattice and their Euler form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeSublattice {
    pub basis: Vec<EvenClass>,
    pub gram: Mat<Int>,
    pub min_positive_rank: Int,
}

impl HodgeSublattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn gram_gcd(&self) -> Int {
        gcd_all(self.gram.data())
    }
}

pub fn hodge_sublattice(d: &HodgeDatum) -> Result<HodgeSublattice> {
    let k2 = d.ns_annihilator();
    let k4 = d.hdg_annihilator();
    let mb = d.wedge_matrix();
    let half_b2 = d.half_b_squared();
    let mut rows: Vec<Vec<Int>> = Vec::new();
    let push = |rows: &mut Vec<Vec<Int>>, coef: Vec<Rat>| {
        let l = Rat::from_integer(lcm_denominators(&coef));
        rows.push(coef.iter().map(|x| (x * &l).to_integer()).collect());
    };
    for i in 0..k2.rows() {
        let row = k2.row(i);
        let mut coef = vec![dot(row, &d.b_field.0)];
        coef.extend(row.iter().map(|x| Rat::from_integer(x.clone())));
        coef.extend((0..15).map(|_| Rat::zero()));
        push(&mut rows, coef);
    }
    for i in 0..k4.rows() {
        let row = k4.row(i);
        let mut coef = vec![dot(row, &half_b2.0)];
        coef.extend((0..15).map(|p| dot(row, &mb.column(p))));
        coef.extend(row.iter().map(|x| Rat::from_integer(x.clone())));
        push(&mut rows, coef);
    }
    let a = if rows.is_empty() { Mat::zeros(0, 31) } else { Mat::from_rows(rows).expect("rows") };
    let zero = vec![Int::zero(); a.rows()];
    let Diophantine::Feasible { kernel, .. } = solve_diophantine(&a, &zero) else {
        return Err(Error::Internal(String::from("homogeneous system reported infeasible")));
    };
    let to_rat = |x: &Int| Rat::from_integer(x.clone());
    let mut basis: Vec<EvenClass> = kernel
        .iter()
        .map(|k| {
            EvenClass::new(
                to_rat(&k[0]),
                TwoClass::from_fn(|p| to_rat(&k[1 + p])),
                FourClass::from_fn(|p| to_rat(&k[16 + p])),
                Rat::zero(),
            )
        })
        .collect();
    basis.push(EvenClass::omega());
    let gram = Mat::from_fn(basis.len(), basis.len(), |i, j| euler_pairing(&basis[i], &basis[j]).to_integer());
    let min_positive_rank = gcd_all(kernel.iter().map(|k| &k[0]));
    Ok(HodgeSublattice { basis, gram, min_positive_rank })
}

/// Prime-power factorization by trial division.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn valuation(x: &Int, p: &Int) -> u32 {
    let mut x = x.clone();
    let mut v = 0;
    while !x.is_zero() && x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

fn congruence_axpy_mod(m: &mut Mat<Int>, dst: usize, src: usize, c: &Int, q: &Int) {
    for j in 0..6 {
        let s = m.get(src, j).clone();
        let x = (m.get(dst, j) - c * s).mod_floor(q);
        m.set(dst, j, x);
    }
    for i in 0..6 {
        let s = m.get(i, src).clone();
        let x = (m.get(i, dst) - c * s).mod_floor(q);
        m.set(i, dst, x);
    }
}

fn swap_basis(m: &mut Mat<Int>, a: usize, b: usize) {
    m.swap_rows(a, b);
    m.swap_cols(a, b);
}

/// Valuations of the symplectic normal form of `theta` over `Z/p^e`; entries
/// equal to `e` stand for zero blocks.
pub fn local_normal_form(theta: &TwoClass, p: u64, e: u32) -> Result<Vec<u32>> {
    let pi = Int::from(p);
    let q = pi.pow(e);
    let mut m = theta
        .to_int_matrix()
        .ok_or_else(|| Error::InvalidInput(String::from("theta must be integral")))?
        .map(|x| x.mod_floor(&q));
    let mut vals = Vec::with_capacity(3);
    let mut k = 0;
    while k < 6 {
        let mut best: Option<(usize, usize, u32)> = None;
        for i in k..6 {
            for j in i + 1..6 {
                let x = m.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let v = valuation(x, &pi);
                if best.is_none_or(|(_, _, bv)| v < bv) {
                    best = Some((i, j, v));
                }
            }
        }
        let Some((i, j, a)) = best else {
            break;
        };
        swap_basis(&mut m, k, i);
        let j = if j == k { i } else { j };
        swap_basis(&mut m, k + 1, j);
        let pa = pi.pow(a);
        let unit = m.get(k, k + 1) / &pa;
        let inv = unit.extended_gcd(&q).x.mod_floor(&q);
        for t in k + 2..6 {
            let x = m.get(k, t).clone();
            if !x.is_zero() {
                let c = (&x / &pa * &inv).mod_floor(&q);
                congruence_axpy_mod(&mut m, t, k + 1, &c, &q);
            }
            let y = m.get(k + 1, t).clone();
            if !y.is_zero() {
                let c = (-(&y / &pa) * &inv).mod_floor(&q);
                congruence_axpy_mod(&mut m, t, k, &c, &q);
            }
        }
        vals.push(a);
        k += 2;
    }
    while vals.len() < 3 {
        vals.push(e);
    }
    Ok(vals)
}

/// Minimal number of symbols `x ^ y` summing to `theta` mod `n`.
pub fn symbol_length(theta: &TwoClass, n: u64) -> Result<usize> {
    if n < 2 {
        return Err(Error::InvalidInput(String::from("symbol length needs n >= 2")));
    }
    let mut best = 0;
    for (p, e) in factor(n) {
        let vals = local_normal_form(theta, p, e)?;
        best = best.max(vals.iter().filter(|&&a| a < e).count());
    }
    Ok(best)
}

/// Symbol length read off the integral Smith form, for cross-checking.
pub fn symbol_length_smith(theta: &TwoClass, n: u64) -> Result<usize> {
    let m = theta.to_int_matrix().ok_or_else(|| Error::InvalidInput(String::from("theta must be integral")))?;
    let diag = smith_normal_form(&m).diagonal();
    let mut best = 0;
    for (p, e) in factor(n) {
        let q = Int::from(p).pow(e);
        let count = diag.chunks(2).filter(|pair| !pair[0].is_multiple_of(&q)).count();
        best = best.max(count);
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrauerSymbolLength {
    pub length: usize,
    pub representative: TwoClass,
    /// `n^length`, which the index of the class divides.
    pub index_bound: Int,
}

/// Minimum symbol length over `theta + span(ns)` mod `n`.
pub fn brauer_symbol_length(theta: &TwoClass, ns: &[TwoClass], n: u64, cap: u64) -> Result<BrauerSymbolLength> {
    let size = (n as u128).checked_pow(ns.len() as u32).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(Error::CapExceeded(format!("coset has {size} elements, cap is {cap}")));
    }
    let ni = Int::from(n);
    let mut coeffs = vec![0u64; ns.len()];
    let mut best: Option<(usize, TwoClass)> = None;
    loop {
        let mut rep = theta.clone();
        for (g, &c) in ns.iter().zip(&coeffs) {
            rep = &rep + &g.scale(&Rat::from_integer(Int::from(c)));
        }
        let rep = rep.reduce_mod(&ni);
        let len = symbol_length(&rep, n)?;
        if best.as_ref().is_none_or(|(b, _)| len < *b) {
            best = Some((len, rep));
        }
        let mut k = 0;
        while k < coeffs.len() {
            coeffs[k] += 1;
            if coeffs[k] < n {
                break;
            }
            coeffs[k] = 0;
            k += 1;
        }
        if k == coeffs.len() {
            break;
        }
    }
    let (length, representative) = best.expect("coset is nonempty");
    Ok(BrauerSymbolLength { length, representative, index_bound: ni.pow(length as u32) })
}

fn unit(i: usize, j: usize) -> TwoClass {
    let mut b = TwoClass::zero();
    b.add_term(i, j, Rat::one());
    b
}

/// Gabber's B-field on a product of three elliptic curves with bases
/// `(x1, x2), (y1, y2), (z1, z2)` relabeled `e1, ..., e6`.
pub fn gabber_instance(ell: u64) -> Result<HodgeDatum> {
    if !crate::exactalg::is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    let b = &unit(0, 4) + &unit(2, 5);
    let ns2 = vec![unit(0, 1), unit(2, 3), unit(4, 5)];
    let hdg4 = vec![ns2[0].wedge(&ns2[1]), ns2[0].wedge(&ns2[2]), ns2[1].wedge(&ns2[2])];
    HodgeDatum::new(&b, Int::from(ell), ns2, hdg4)
}

/// `ind / ind_Hdg`.
pub fn voisin_order(ind: &Int, ind_hdg: &Int) -> Result<Int> {
    if ind_hdg.is_zero() || !ind.is_multiple_of(ind_hdg) {
        return Err(Error::InvalidInput(format!("{ind_hdg} does not divide {ind}")));
    }
    Ok(ind / ind_hdg)
}

/// `(n^2, -n^2 B, n^2 B^2/2 + x H^2/2, y omega)`.
pub fn hodge_class_family(n: &Int, b_field: &TwoClass, x: &Rat, y: &Rat, h: &TwoClass) -> EvenClass {
    let n2 = Rat::from_integer(n * n);
    let half = Rat::new(Int::one(), Int::from(2));
    EvenClass::new(
        n2.clone(),
        b_field.scale(&-n2.clone()),
        &b_field.wedge(b_field).scale(&(&n2 * &half)) + &h.wedge(h).scale(&(x * &half)),
        y.clone(),
    )
}

/// Gaussian rational `re + i im`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: Rat) -> Self {
        GaussRat { re, im: Rat::zero() }
    }
}

impl Zero for GaussRat {
    fn zero() -> Self {
        GaussRat::new(Rat::zero(), Rat::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, o: GaussRat) -> GaussRat {
        GaussRat::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, o: GaussRat) -> GaussRat {
        GaussRat::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, o: GaussRat) -> GaussRat {
        GaussRat::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re, -self.im)
    }
}

/// A symmetric `3 x 3` matrix with positive definite imaginary part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiegelPoint {
    z: Mat<GaussRat>,
}

impl SiegelPoint {
    pub fn new(z: Mat<GaussRat>) -> Result<Self> {
        if z.rows() != 3 || z.cols() != 3 {
            return Err(Error::ShapeMismatch { expected: (3, 3), found: (z.rows(), z.cols()) });
        }
        if z != z.transpose() {
            return Err(Error::NotInSiegelDomain(String::from("Z is not symmetric")));
        }
        let im = z.map(|x| x.im.clone());
        for k in 1..=3 {
            let idx: Vec<usize> = (0..k).collect();
            if !det(&im.select(&idx, &idx)).is_positive() {
                return Err(Error::NotInSiegelDomain(format!("leading minor {k} of Im Z is not positive")));
            }
        }
        Ok(SiegelPoint { z })
    }

    pub fn matrix(&self) -> &Mat<GaussRat> {
        &self.z
    }
}

/// `A - B Z + Z B^t + Z C Z` for the blocks `[[A, B], [-B^t, C]]` of `m`.
pub fn hodge_locus_residual(m: &Mat<Rat>, z: &SiegelPoint) -> Result<Mat<GaussRat>> {
    if m.rows() != 6 || !m.is_alternating() {
        return Err(Error::NotAlternating);
    }
    let lo = [0, 1, 2];
    let hi = [3, 4, 5];
    let g = |x: &Rat| GaussRat::real(x.clone());
    let a = m.select(&lo, &lo).map(g);
    let b = m.select(&lo, &hi).map(g);
    let c = m.select(&hi, &hi).map(g);
    let z = &z.z;
    let bz = &b * z;
    let zbt = z * &b.transpose();
    let zcz = &(z * &c) * z;
    Ok(&(&(&a - &bz) + &zbt) + &zcz)
}

/// Data for the Euler-pairing divisibility on a principally polarized
/// threefold with Picard number one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathologyInstance {
    pub ell: u64,
    pub b: TwoClass,
    pub datum: HodgeDatum,
    pub index: IndexWitness,
    /// `b ^ H` avoids `m H^2/2 + ell H^4(Z)` for every `m`.
    pub bh_not_hodge: bool,
    pub sublattice: HodgeSublattice,
}

impl PathologyInstance {
    pub fn gram_divisible(&self) -> bool {
        let l = Int::from(self.ell);
        self.sublattice.gram.data().iter().all(|x| x.is_multiple_of(&l))
    }
}

fn bh_avoids_hodge(b: &TwoClass, h: &TwoClass, ell: u64) -> bool {
    let bh = b.wedge(h);
    let h2 = h.wedge(h).scale(&Rat::new(Int::one(), Int::from(2)));
    let l = Int::from(ell);
    (0..ell).all(|m| {
        let diff = &bh - &h2.scale(&Rat::from_integer(Int::from(m)));
        diff.0.iter().any(|x| !x.to_integer().is_multiple_of(&l))
    })
}

/// Picks the first `(b, ell)` among the candidates satisfying the hypotheses.
pub fn pathology_instance(ells: &[u64], candidates: &[TwoClass]) -> Result<PathologyInstance> {
    let h = TwoClass::principal();
    let h2 = h.wedge(&h).scale(&Rat::new(Int::one(), Int::from(2)));
    for &ell in ells {
        for b in candidates {
            let datum = HodgeDatum::new(b, Int::from(ell), vec![h.clone()], vec![h2.clone()])?;
            let index = hodge_theoretic_index(&datum)?;
            if index.n != Int::from(ell * ell) || !bh_avoids_hodge(b, &h, ell) {
                continue;
            }
            let sublattice = hodge_sublattice(&datum)?;
            return Ok(PathologyInstance { ell, b: b.clone(), datum, index, bh_not_hodge: true, sublattice });
        }
    }
    Err(Error::CapExceeded(String::from("no candidate satisfied the hypotheses")))
}

/// Default candidates: Gabber's class and a few small unimodular-looking sums.
pub fn pathology_candidates() -> Vec<TwoClass> {
    vec![&unit(0, 4) + &unit(2, 5), &(&unit(0, 1) + &unit(2, 3)) + &unit(1, 5), &unit(0, 1) + &unit(2, 4), unit(0, 1)]
}
