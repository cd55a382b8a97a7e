use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{Int, Mat, Rat};
use crate::error::{Error, Result};

fn check_alternating<T>(m: &Mat<T>) -> Result<()>
where
    T: Clone + Zero + PartialEq + core::ops::Neg<Output = T>,
{
    if !m.is_alternating() {
        return Err(Error::NotAlternating);
    }
    if m.rows() % 2 == 1 {
        return Err(Error::OddDimension);
    }
    Ok(())
}

/// Pfaffian by expansion along the first row, `Pf([[0, a], [-a, 0]]) = a`.
///
/// Matrices larger than 8x8 use a congruence elimination that produces the
/// same value.
pub fn pfaffian(m: &Mat<Rat>) -> Result<Rat> {
    check_alternating(m)?;
    if m.rows() <= 8 {
        let idx: Vec<usize> = (0..m.rows()).collect();
        Ok(expand(m, &idx))
    } else {
        Ok(eliminate(m.clone()))
    }
}

pub fn pfaffian_int(m: &Mat<Int>) -> Result<Int> {
    let pf = pfaffian(&m.to_rat())?;
    Ok(pf.to_integer())
}

/// First-row expansion regardless of size.
pub fn pfaffian_expand(m: &Mat<Rat>) -> Result<Rat> {
    check_alternating(m)?;
    let idx: Vec<usize> = (0..m.rows()).collect();
    Ok(expand(m, &idx))
}

fn expand(m: &Mat<Rat>, idx: &[usize]) -> Rat {
    if idx.is_empty() {
        return Rat::one();
    }
    let first = idx[0];
    let mut total = Rat::zero();
    for k in 1..idx.len() {
        let a = m.get(first, idx[k]);
        if a.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&j| j != idx[k]).collect();
        let term = a * expand(m, &rest);
        if k % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn congruence_axpy(m: &mut Mat<Rat>, dst: usize, src: usize, c: &Rat) {
    let n = m.rows();
    for j in 0..n {
        let s = m.get(src, j).clone();
        *m.get_mut(dst, j) -= c * s;
    }
    for i in 0..n {
        let s = m.get(i, src).clone();
        *m.get_mut(i, dst) -= c * s;
    }
}

fn eliminate(mut m: Mat<Rat>) -> Rat {
    let n = m.rows();
    let mut pf = Rat::one();
    let mut k = 0;
    while k < n {
        let Some(p) = (k + 1..n).find(|&j| !m.get(k, j).is_zero()) else {
            return Rat::zero();
        };
        if p != k + 1 {
            m.swap_rows(k + 1, p);
            m.swap_cols(k + 1, p);
            pf = -pf;
        }
        let piv = m.get(k, k + 1).clone();
        for i in k + 2..n {
            let c1 = m.get(k, i) / &piv;
            if !c1.is_zero() {
                congruence_axpy(&mut m, i, k + 1, &c1);
            }
            let c2 = m.get(k + 1, i) / m.get(k + 1, k);
            if !c2.is_zero() {
                congruence_axpy(&mut m, i, k, &c2);
            }
        }
        pf *= piv;
        k += 2;
    }
    pf
}

/// Determinant by fraction-field Gaussian elimination.
pub fn det(m: &Mat<Rat>) -> Rat {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut acc = Rat::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a.get(i, k).is_zero()) else {
            return Rat::zero();
        };
        if p != k {
            a.swap_rows(p, k);
            acc = -acc;
        }
        let piv = a.get(k, k).clone();
        for i in k + 1..n {
            let f = a.get(i, k) / &piv;
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let s = a.get(k, j).clone();
                *a.get_mut(i, j) -= &f * s;
            }
        }
        acc *= piv;
    }
    acc
}
