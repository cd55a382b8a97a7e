use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{Int, Mat};
use crate::error::{Error, Result};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * a as u128) % p as u128) as u64;
        }
        a = ((a as u128 * a as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

pub(crate) fn reduce(x: &Int, p: u64) -> u64 {
    x.mod_floor(&Int::from(p)).to_u64().expect("residue fits")
}

/// Rank over the field with `p` elements.
pub fn rank_mod_p(m: &Mat<Int>, p: u64) -> Result<usize> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let (r, c) = (m.rows(), m.cols());
    let mut a: alloc::vec::Vec<u64> = m.data().iter().map(|x| reduce(x, p)).collect();
    let mut rank = 0;
    for col in 0..c {
        let Some(piv) = (rank..r).find(|&i| a[i * c + col] != 0) else {
            continue;
        };
        for j in 0..c {
            a.swap(piv * c + j, rank * c + j);
        }
        let inv = inv_mod(a[rank * c + col], p);
        for i in 0..r {
            if i == rank || a[i * c + col] == 0 {
                continue;
            }
            let f = (a[i * c + col] as u128 * inv as u128 % p as u128) as u64;
            for j in col..c {
                let sub = (f as u128 * a[rank * c + j] as u128 % p as u128) as u64;
                a[i * c + j] = (a[i * c + j] + p - sub) % p;
            }
        }
        rank += 1;
        if rank == r {
            break;
        }
    }
    Ok(rank)
}
