use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{lcm_denominators, solve_diophantine, Diophantine, Int, Mat, Rat};

/// Integral row vector proportional to `row`.
pub fn clear_denominators(row: &[Rat]) -> Vec<Int> {
    let l = Rat::from_integer(lcm_denominators(row));
    row.iter().map(|x| (x * &l).to_integer()).collect()
}

/// Integral matrix `K` with `K v = 0` exactly when `v` lies in the rational
/// span of `gens` (vectors of length `dim`).
pub fn annihilator(gens: &[Vec<Rat>], dim: usize) -> Mat<Int> {
    if gens.is_empty() {
        return Mat::identity(dim);
    }
    let rows: Vec<Vec<Int>> = gens.iter().map(|g| clear_denominators(g)).collect();
    let gt = Mat::from_rows(rows).expect("generators share a length");
    let zero = alloc::vec![Int::zero(); gt.rows()];
    match solve_diophantine(&gt, &zero) {
        Diophantine::Feasible { kernel, .. } => {
            if kernel.is_empty() {
                Mat::zeros(0, dim)
            } else {
                Mat::from_rows(kernel).expect("kernel vectors share a length")
            }
        }
        Diophantine::Infeasible(_) => unreachable!("homogeneous systems are feasible"),
    }
}

/// Some rational solution of `A x = b`, if one exists.
pub fn solve_rational(a: &Mat<Rat>, b: &[Rat]) -> Option<Vec<Rat>> {
    let (r, c) = (a.rows(), a.cols());
    let mut m = Mat::from_fn(r, c + 1, |i, j| if j < c { a.get(i, j).clone() } else { b[i].clone() });
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..c {
        let Some(p) = (row..r).find(|&i| !m.get(i, col).is_zero()) else {
            continue;
        };
        m.swap_rows(p, row);
        let inv = Rat::one() / m.get(row, col);
        for j in col..=c {
            let x = m.get(row, j) * &inv;
            m.set(row, j, x);
        }
        for i in 0..r {
            if i == row || m.get(i, col).is_zero() {
                continue;
            }
            let f = m.get(i, col).clone();
            for j in col..=c {
                let s = m.get(row, j).clone();
                *m.get_mut(i, j) -= &f * s;
            }
        }
        pivots.push(col);
        row += 1;
        if row == r {
            break;
        }
    }
    if (row..r).any(|i| !m.get(i, c).is_zero()) {
        return None;
    }
    let mut x = alloc::vec![Rat::zero(); c];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = m.get(i, c).clone();
    }
    Some(x)
}
