//! Coefficients of the reduced DT series for curve classes of type `(1, 1, d)`:
//!
//! `(q + 2 + 1/q) * prod_{m >= 1} (1 + q t^m)^2 (1 + t^m / q)^2 / (1 - t^m)^4`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::exactalg::{Int, Rat};

/// Laurent polynomial in `q` stored from exponent `min_exp` upward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentColumn {
    pub min_exp: i64,
    pub coeffs: Vec<Int>,
}

impl LaurentColumn {
    pub fn get(&self, n: i64) -> Int {
        let k = n - self.min_exp;
        if k < 0 || k as usize >= self.coeffs.len() {
            Int::zero()
        } else {
            self.coeffs[k as usize].clone()
        }
    }

    pub fn max_exp(&self) -> i64 {
        self.min_exp + self.coeffs.len() as i64 - 1
    }
}

/// `DT_{d,n}` for `0 <= d <= d_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QTTable {
    columns: Vec<LaurentColumn>,
}

impl QTTable {
    pub fn d_max(&self) -> usize {
        self.columns.len() - 1
    }

    pub fn column(&self, d: usize) -> &LaurentColumn {
        &self.columns[d]
    }

    /// Zero outside the computed support.
    pub fn get(&self, d: usize, n: i64) -> Int {
        self.columns.get(d).map_or_else(Int::zero, |c| c.get(n))
    }

    /// Storage margin `ceil(2 sqrt d) + 4`.
    pub fn n_max(d: usize) -> i64 {
        let mut r = 0i64;
        while r * r < 4 * d as i64 {
            r += 1;
        }
        r + 4
    }

    /// `(d, n, DT_{d,n})` over the full nonzero support.
    pub fn entries(&self) -> Vec<(usize, i64, Int)> {
        let mut out = Vec::new();
        for (d, col) in self.columns.iter().enumerate() {
            for (k, v) in col.coeffs.iter().enumerate() {
                if !v.is_zero() {
                    out.push((d, col.min_exp + k as i64, v.clone()));
                }
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.columns.iter().all(|c| (c.min_exp..=c.max_exp()).all(|n| c.get(n) == c.get(-n)))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.columns.iter().all(|c| c.coeffs.iter().all(|x| !x.is_negative()))
    }
}

fn binom3(k: usize) -> Int {
    // C(k + 3, 3)
    let k = Int::from(k);
    (&k + 1u32) * (&k + 2u32) * (&k + 3u32) / Int::from(6)
}

pub fn expand_dt(d_max: usize) -> QTTable {
    let deg = d_max;
    let width = deg + 1;
    let span = 2 * width + 1;
    // prod[t][q + width]
    let mut prod = vec![vec![Int::zero(); span]; deg + 1];
    prod[0][width] = Int::from(1);
    for m in 1..=deg {
        for shift in [1i64, 1, -1, -1] {
            for t in (m..=deg).rev() {
                let (lo, hi) = prod.split_at_mut(t);
                let src = &lo[t - m];
                let dst = &mut hi[0];
                for (k, x) in src.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let target = k as i64 + shift;
                    if target >= 0 && (target as usize) < span {
                        dst[target as usize] += x;
                    }
                }
            }
        }
    }

    let mut eta = vec![Int::zero(); deg + 1];
    eta[0] = Int::from(1);
    for m in 1..=deg {
        let mut next = vec![Int::zero(); deg + 1];
        for (t, x) in eta.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let mut k = 0;
            while t + m * k <= deg {
                next[t + m * k] += x * binom3(k);
                k += 1;
            }
        }
        eta = next;
    }

    let mut columns = Vec::with_capacity(deg + 1);
    for d in 0..=deg {
        let mut series = vec![Int::zero(); span];
        for s in 0..=d {
            if eta[d - s].is_zero() {
                continue;
            }
            for (k, x) in prod[s].iter().enumerate() {
                if !x.is_zero() {
                    series[k] += x * &eta[d - s];
                }
            }
        }
        // prefactor q + 2 + 1/q, exponent range widened by one on each side
        let mut full = vec![Int::zero(); span + 2];
        for (k, x) in series.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            full[k] += x;
            full[k + 1] += x * Int::from(2);
            full[k + 2] += x;
        }
        columns.push(trim(full, -(width as i64) - 1));
    }
    QTTable { columns }
}

fn trim(coeffs: Vec<Int>, min_exp: i64) -> LaurentColumn {
    let first = coeffs.iter().position(|x| !x.is_zero());
    match first {
        None => LaurentColumn { min_exp: 0, coeffs: vec![] },
        Some(f) => {
            let last = coeffs.iter().rposition(|x| !x.is_zero()).unwrap_or(f);
            LaurentColumn { min_exp: min_exp + f as i64, coeffs: coeffs[f..=last].to_vec() }
        }
    }
}

/// Partitions of `b` into exactly `a` distinct positive parts.
pub fn distinct_partitions(a: usize, b: usize) -> Int {
    let mut memo = BTreeMap::new();
    count_distinct(a, b, b, &mut memo)
}

fn count_distinct(a: usize, b: usize, largest: usize, memo: &mut BTreeMap<(usize, usize, usize), Int>) -> Int {
    if a == 0 {
        return Int::from(u8::from(b == 0));
    }
    if a * (a + 1) / 2 > b || largest == 0 {
        return Int::zero();
    }
    if let Some(v) = memo.get(&(a, b, largest)) {
        return v.clone();
    }
    let mut total = Int::zero();
    for p in (1..=largest.min(b)).rev() {
        total += count_distinct(a - 1, b - p, p - 1, memo);
    }
    memo.insert((a, b, largest), total.clone());
    total
}

/// Coefficient of `q^(n-1) t^d` in `prod_m (1 + q t^m)^2`.
pub fn squared_product_coefficient(n: usize, d: usize) -> Int {
    if n == 0 {
        return Int::zero();
    }
    let e = n - 1;
    let mut memo = BTreeMap::new();
    let mut table = vec![vec![Int::zero(); d + 1]; e + 1];
    for (a, row) in table.iter_mut().enumerate() {
        for (b, slot) in row.iter_mut().enumerate() {
            *slot = count_distinct(a, b, b, &mut memo);
        }
    }
    let mut total = Int::zero();
    for a1 in 0..=e {
        for b1 in 0..=d {
            let x = &table[a1][b1];
            if !x.is_zero() {
                total += x * &table[e - a1][d - b1];
            }
        }
    }
    total
}

/// Coefficients of `prod_m (1 - t^m)^(-6)` through `t^m_max`.
pub fn eta6_coefficients(m_max: usize) -> Vec<Int> {
    let mut f = vec![Int::zero(); m_max + 1];
    f[0] = Int::from(1);
    for m in 1..=m_max {
        for _ in 0..6 {
            for t in m..=m_max {
                let (lo, hi) = f.split_at_mut(t);
                hi[0] += &lo[t - m];
            }
        }
    }
    f
}

fn triangular(a: &Int) -> Int {
    a * (a + 1u32) / Int::from(2)
}

/// The pair `(a, b)` with `a + b = n - 1` minimizing `T_a + T_b`.
pub fn theta_witness(n: &Int) -> (Int, Int) {
    let e = n - 1u32;
    let a = e.div_floor(&Int::from(2));
    let b = &e - &a;
    (a, b)
}

/// `DT_{d,n}` through the triple-product form
/// `q * theta(q, t)^2 * prod_m (1 - t^m)^(-6)` with `theta = sum_a q^a t^(a(a+1)/2)`.
pub fn dt_coefficient(d: usize, n: i64) -> Int {
    let p6 = eta6_coefficients(d);
    dt_coefficient_with(&p6, d, n)
}

fn dt_coefficient_with(p6: &[Int], d: usize, n: i64) -> Int {
    let e = n - 1;
    let mut total = Int::zero();
    let mut a = 0i64;
    while a * (a + 1) / 2 <= d as i64 {
        for s in [a, -a - 1] {
            let b = e - s;
            let used = s * (s + 1) / 2 + b * (b + 1) / 2;
            if used <= d as i64 {
                total += &p6[d - used as usize];
            }
        }
        a += 1;
    }
    total
}

/// Largest degree for which [`dt_positive`] computes `DT_{d,n}` exactly.
pub const DT_EXACT_MAX: usize = 2000;

/// Outcome of the positivity check `Delta >= 0 => DT_{d,n} > 0`.
///
/// `dt` is the exact value when `d <= DT_EXACT_MAX`. The witness `(a, b)` has
/// `a + b = n - 1` and `T_a + T_b <= d`, so that `DT_{d,n}` contains the positive
/// summand `p6(d - T_a - T_b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DtVerdict {
    pub d: Int,
    pub n: Int,
    pub delta: Rat,
    pub delta_nonnegative: bool,
    pub dt: Option<Int>,
    pub witness: Option<(Int, Int)>,
    pub positive: bool,
    pub implication_holds: bool,
}

pub fn dt_positive(d: &Int, n: &Int) -> DtVerdict {
    let delta = Rat::from_integer(d.clone()) - Rat::new(n * n, Int::from(4));
    let delta_nonnegative = !delta.is_negative();
    let (a, b) = theta_witness(n);
    let witness = (!d.is_negative() && &(triangular(&a) + triangular(&b)) <= d).then_some((a, b));
    let dt = if d.is_negative() {
        Some(Int::zero())
    } else {
        match (d.to_usize(), n.to_i64()) {
            (Some(du), Some(ni)) if du <= DT_EXACT_MAX => Some(dt_coefficient(du, ni)),
            _ => None,
        }
    };
    let positive = match &dt {
        Some(v) => v.is_positive(),
        None => witness.is_some(),
    };
    let implication_holds = !delta_nonnegative || positive;
    DtVerdict { d: d.clone(), n: n.clone(), delta, delta_nonnegative, dt, witness, positive, implication_holds }
}

pub fn dt_positive_in(table: &QTTable, d: i64, n: i64) -> DtVerdict {
    let mut v = dt_positive(&Int::from(d.max(0)), &Int::from(n));
    v.d = Int::from(d);
    v.delta = Rat::from_integer(Int::from(d)) - Rat::new(Int::from(n * n), Int::from(4));
    v.delta_nonnegative = !v.delta.is_negative();
    let dt = if d >= 0 { table.get(d as usize, n) } else { Int::zero() };
    v.positive = dt.is_positive();
    v.dt = Some(dt);
    v.implication_holds = !v.delta_nonnegative || v.positive;
    v
}
