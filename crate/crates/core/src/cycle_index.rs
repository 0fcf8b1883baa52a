//! Cycle types of the symmetric group and its cycle indicator `C_n`.
//!
//! `C_n = sum c_n(m) X_1^{m_1} ... X_n^{m_n}` over cycle types `m` of `S_n`,
//! where `c_n(m) = n! / prod_i i^{m_i} m_i!` counts the permutations of that
//! type. The builder uses the recurrence
//!
//! ```text
//! C_0 = 1,    C_m = sum_{j=0}^{m-1} (m-1)!/j! * X_{m-j} * C_j
//! ```
//!
//! and three independent routes are kept for cross-checking: the direct sum
//! over cycle types, the lower Hessenberg determinant whose cofactor expansion
//! yields the recurrence, and the exponential generating function
//! `exp(sum_i X_i t^i / i)`.

use std::borrow::Borrow;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::factorial;
use crate::poly::{Monomial, MultiPoly, RationalSeries};

/// Default largest order accepted by [`cycle_indicator_via_determinant`].
pub const DETERMINANT_BOUND: usize = 8;

/// Multiplicities `(m_1, ..., m_n)` with `sum_i i m_i = n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycleType {
    n: u64,
    m: Vec<u64>,
}

impl CycleType {
    /// Validates `sum i m_i = n`. The vector is padded or trimmed to length `n`;
    /// trimming only removes zeros.
    pub fn new(n: u64, mut m: Vec<u64>) -> Result<Self> {
        let weight = m
            .iter()
            .enumerate()
            .try_fold(0u64, |acc, (k, &mi)| acc.checked_add((k as u64 + 1).checked_mul(mi)?));
        match weight {
            Some(w) if w == n => {}
            Some(w) => return Err(Error::InvalidCycleType { n, weight: w }),
            None => return Err(Error::InvalidCycleType { n, weight: u64::MAX }),
        }
        m.resize(n as usize, 0);
        Ok(CycleType { n, m })
    }

    /// The class of `S_n` whose only cycles have lengths 1 and `p`.
    pub fn two_part(n: u64, p: u64, m1: u64, mp: u64) -> Result<Self> {
        let mut m = vec![0; n as usize];
        if let Some(slot) = m.get_mut(0) {
            *slot += m1;
        }
        if mp > 0 {
            match m.get_mut(p as usize - 1) {
                Some(slot) => *slot += mp,
                None => return Err(Error::InvalidCycleType { n, weight: m1 + p * mp }),
            }
        }
        CycleType::new(n, m)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(m_1, ..., m_n)`.
    pub fn multiplicities(&self) -> &[u64] {
        &self.m
    }

    /// `m_i` (1-based); zero past `n`.
    pub fn get(&self, i: u64) -> u64 {
        i.checked_sub(1).and_then(|k| self.m.get(k as usize)).copied().unwrap_or(0)
    }

    /// Total count of cycles whose length is neither 1 nor `p`.
    pub fn cycles_outside(&self, p: u64) -> u64 {
        self.m
            .iter()
            .enumerate()
            .filter(|&(k, _)| k as u64 + 1 != 1 && k as u64 + 1 != p)
            .map(|(_, &mi)| mi)
            .sum()
    }

    pub fn monomial(&self) -> Monomial {
        Monomial::new(self.m.iter().map(|&e| e as u32).collect())
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, mi) in self.m.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{mi}")?;
        }
        f.write_str(")")
    }
}

/// Iterator over the cycle types of `S_n`, one per partition of `n`.
///
/// Partitions come in reverse lexicographic order, largest part first:
/// `n`, `n-1 1`, `n-2 2`, `n-2 1 1`, ... ending with `1^n`.
#[derive(Debug, Clone)]
pub struct CycleTypes {
    n: u64,
    parts: Option<Vec<u64>>,
}

pub fn enumerate_cycle_types(n: u64) -> CycleTypes {
    let parts = if n == 0 { Vec::new() } else { vec![n] };
    CycleTypes { n, parts: Some(parts) }
}

impl Iterator for CycleTypes {
    type Item = CycleType;

    fn next(&mut self) -> Option<CycleType> {
        let parts = self.parts.as_mut()?;
        let mut m = vec![0u64; self.n as usize];
        for &part in parts.iter() {
            m[part as usize - 1] += 1;
        }
        let current = CycleType { n: self.n, m };

        // Advance: drop trailing ones, shrink the last part above one, and
        // refill greedily with the remaining weight.
        let mut ones = 0;
        while parts.last() == Some(&1) {
            parts.pop();
            ones += 1;
        }
        match parts.pop() {
            None => self.parts = None,
            Some(last) => {
                let size = last - 1;
                let mut rest = ones + 1 + size;
                while rest >= size {
                    parts.push(size);
                    rest -= size;
                }
                if rest > 0 {
                    parts.push(rest);
                }
            }
        }
        Some(current)
    }
}

/// `c_n(m) = n! / prod_i i^{m_i} m_i!`.
pub fn coefficient(ct: &CycleType) -> Result<BigInt> {
    let mut denom = BigInt::one();
    for (k, &mi) in ct.m.iter().enumerate() {
        if mi > 0 {
            denom *= num_traits::pow(BigInt::from(k + 1), mi as usize) * factorial(mi);
        }
    }
    let (q, r) = factorial(ct.n).div_rem(&denom);
    if !r.is_zero() {
        return Err(Error::NonIntegral { context: format!("class size of {ct}"), value: format!("{}/{denom}", factorial(ct.n)) });
    }
    Ok(q)
}

/// `C_0, ..., C_n` from the recurrence.
pub fn cycle_indicators(n: usize) -> Vec<MultiPoly> {
    let mut table: Vec<MultiPoly> = Vec::with_capacity(n + 1);
    while table.len() <= n {
        let next = next_cycle_indicator(&table[..]);
        table.push(next);
    }
    table
}

/// Given `C_0, ..., C_{m-1}`, returns `C_m` (and `C_0 = 1` for an empty slice).
pub fn next_cycle_indicator<P: Borrow<MultiPoly>>(prev: &[P]) -> MultiPoly {
    let m = prev.len();
    if m == 0 {
        return MultiPoly::one();
    }
    let mut next = MultiPoly::zero();
    // (m-1)!/j! for j = m-1 down to 0.
    let mut weight = BigInt::one();
    for j in (0..m).rev() {
        for (mono, c) in prev[j].borrow().mul_var(m - j).terms() {
            next.add_term(mono.clone(), &(c * &weight));
        }
        weight *= j;
    }
    next
}

/// `C_n` from the recurrence.
pub fn cycle_indicator(n: usize) -> MultiPoly {
    cycle_indicators(n).pop().expect("table holds C_0")
}

/// `C_n` as the sum over cycle types of `c_n(m) X^m`.
pub fn cycle_indicator_direct(n: usize) -> Result<MultiPoly> {
    let mut out = MultiPoly::zero();
    for ct in enumerate_cycle_types(n as u64) {
        out.add_term(ct.monomial(), &coefficient(&ct)?);
    }
    Ok(out)
}

/// `n!` times the coefficient of `t^n` in `exp(sum_{i<=n} X_i t^i / i)`.
pub fn cycle_indicator_via_egf(n: usize) -> Result<MultiPoly> {
    let mut coeffs = vec![crate::poly::QPoly::zero()];
    for i in 1..=n {
        coeffs.push(crate::poly::scaled_var(i, 1, i as i64));
    }
    RationalSeries::from_coeffs(coeffs, n).exp()?.egf_coefficient(n)
}

/// Determinant of the `m x m` matrix with `X_{i-j+1}` on and below the
/// diagonal and `-1, -2, ..., -(m-1)` on the superdiagonal.
pub fn cycle_indicator_via_determinant(m: usize) -> Result<MultiPoly> {
    cycle_indicator_via_determinant_bounded(m, DETERMINANT_BOUND)
}

pub fn cycle_indicator_via_determinant_bounded(m: usize, bound: usize) -> Result<MultiPoly> {
    if m > bound {
        return Err(Error::OrderTooLarge { order: m, bound });
    }
    if m == 0 {
        return Ok(MultiPoly::one());
    }
    if m > 30 {
        return Err(Error::OrderTooLarge { order: m, bound: 30 });
    }
    let entry = |row: usize, col: usize| -> MultiPoly {
        if col <= row {
            MultiPoly::var(row - col + 1)
        } else if col == row + 1 {
            MultiPoly::constant(-BigInt::from(col))
        } else {
            MultiPoly::zero()
        }
    };
    let mut memo = HashMap::new();
    Ok(laplace(0, (1u32 << m) - 1, m, &entry, &mut memo))
}

/// Cofactor expansion of rows `row..m` against the column set `cols`.
fn laplace(
    row: usize,
    cols: u32,
    m: usize,
    entry: &dyn Fn(usize, usize) -> MultiPoly,
    memo: &mut HashMap<u32, MultiPoly>,
) -> MultiPoly {
    if row == m {
        return MultiPoly::one();
    }
    if let Some(hit) = memo.get(&cols) {
        return hit.clone();
    }
    let mut acc = MultiPoly::zero();
    let mut position = 0;
    for col in 0..m {
        if cols & (1 << col) == 0 {
            continue;
        }
        let a = entry(row, col);
        if !a.is_zero() {
            let minor = laplace(row + 1, cols & !(1 << col), m, entry, memo);
            let term = &a * &minor;
            acc = if position % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        position += 1;
    }
    memo.insert(cols, acc.clone());
    acc
}
