use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::Zero;

use super::{smith_normal_form, Int, Mat};

/// Why `A x = b` has no integral solution: in Smith coordinates row `row`
/// reads `divisor * y = target` and `divisor` does not divide `target`
/// (a zero divisor means the target must vanish).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Infeasible {
    pub row: usize,
    pub divisor: Int,
    pub target: Int,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diophantine {
    Feasible { particular: Vec<Int>, kernel: Vec<Vec<Int>> },
    Infeasible(Infeasible),
}

impl Diophantine {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Diophantine::Feasible { .. })
    }
}

/// Solves `A x = b` over the integers.
pub fn solve_diophantine(a: &Mat<Int>, b: &[Int]) -> Diophantine {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let s = smith_normal_form(a);
    let ub = s.u.mul_vec(b);
    let diag = s.diagonal();
    let rank = s.rank();
    let mut y = alloc::vec![Int::zero(); a.cols()];
    for (i, target) in ub.iter().enumerate() {
        let divisor = diag.get(i).cloned().unwrap_or_default();
        if divisor.is_zero() {
            if !target.is_zero() {
                return Diophantine::Infeasible(Infeasible { row: i, divisor, target: target.clone() });
            }
        } else if !target.is_multiple_of(&divisor) {
            return Diophantine::Infeasible(Infeasible { row: i, divisor, target: target.clone() });
        } else {
            y[i] = target / &divisor;
        }
    }
    let particular = s.v.mul_vec(&y);
    let kernel = (rank..a.cols()).map(|j| s.v.column(j)).collect();
    Diophantine::Feasible { particular, kernel }
}
