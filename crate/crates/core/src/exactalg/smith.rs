use alloc::format;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Int, Mat};
use crate::error::{Error, Result};

/// `u * m * v == d` with `u`, `v` unimodular and `d` diagonal with a
/// nonnegative divisibility chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: Mat<Int>,
    pub v: Mat<Int>,
    pub d: Mat<Int>,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

fn row_axpy(m: &mut Mat<Int>, dst: usize, src: usize, q: &Int) {
    for j in 0..m.cols() {
        let s = m.get(src, j).clone();
        if !s.is_zero() {
            *m.get_mut(dst, j) -= q * s;
        }
    }
}

fn col_axpy(m: &mut Mat<Int>, dst: usize, src: usize, q: &Int) {
    for i in 0..m.rows() {
        let s = m.get(i, src).clone();
        if !s.is_zero() {
            *m.get_mut(i, dst) -= q * s;
        }
    }
}

pub fn smith_normal_form(m: &Mat<Int>) -> SmithForm {
    let (r, c) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = Mat::<Int>::identity(r);
    let mut v = Mat::<Int>::identity(c);

    for t in 0..r.min(c) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = d.get(i, j);
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(u, v, d);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..r {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = d.get(i, t) / d.get(t, t);
                row_axpy(&mut d, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..c {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = d.get(t, j) / d.get(t, t);
                col_axpy(&mut d, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            let p = d.get(t, t).clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let minus_one = -Int::one();
                    row_axpy(&mut d, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            for j in 0..c {
                let x = -d.get(t, j).clone();
                d.set(t, j, x);
            }
            for j in 0..r {
                let x = -u.get(t, j).clone();
                u.set(t, j, x);
            }
        }
    }
    finish(u, v, d)
}

fn finish(u: Mat<Int>, v: Mat<Int>, d: Mat<Int>) -> SmithForm {
    SmithForm { u, v, d }
}

/// Type `(d_1, ..., d_g)` of an integral alternating form together with its rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AltType {
    pub factors: Vec<Int>,
    pub rank: usize,
}

impl AltType {
    pub fn is(&self, expected: &[i64]) -> bool {
        self.factors.len() == expected.len() && self.factors.iter().zip(expected).all(|(a, &b)| *a == Int::from(b))
    }

    pub fn product(&self) -> Int {
        self.factors.iter().product()
    }
}

pub fn alt_type(m: &Mat<Int>) -> Result<AltType> {
    if !m.is_alternating() {
        return Err(Error::NotAlternating);
    }
    if m.rows() % 2 == 1 {
        return Err(Error::OddDimension);
    }
    let diag = smith_normal_form(m).diagonal();
    let mut factors = Vec::with_capacity(diag.len() / 2);
    for pair in diag.chunks(2) {
        if pair[0] != pair[1] {
            return Err(Error::Internal(format!("invariant factors {} and {} do not pair", pair[0], pair[1])));
        }
        factors.push(pair[0].clone());
    }
    let rank = 2 * factors.iter().filter(|x| !x.is_zero()).count();
    Ok(AltType { factors, rank })
}
