//! Meixner polynomials `Q_n` and the auxiliary `Q*_n`.
//!
//! ```text
//! (1 + t^2)^{-1/2} exp(X arctan t) = sum_n Q_n(X) t^n / n!
//!                  exp(X arctan t) = sum_n Q*_n(X) t^n / n!
//! ```
//!
//! Since `X arctan t = sum_i x_i t^i / i` with `x_i = 0` for even `i` and
//! `x_i = (-1)^{(i-1)/2} X` for odd `i`, `Q*_n` is the cycle indicator `C_n`
//! evaluated at `X_i := x_i`.

use std::borrow::Borrow;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cycle_index::cycle_indicator;
use crate::error::{Error, Result};
use crate::padic::PadicContext;
use crate::poly::{scaled_var, Congruent, MultiPoly, RationalSeries, UniPoly};
use crate::report::{CongruenceReport, Violation};
use crate::targets::Targets;

/// `Q_n` and `Q*_n` side by side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeixnerPair {
    pub n: usize,
    pub q: UniPoly,
    pub qstar: UniPoly,
}

impl MeixnerPair {
    pub fn new(n: usize) -> Result<Self> {
        Ok(MeixnerPair { n, q: meixner_q(n)?, qstar: meixner_qstar(n) })
    }
}

/// Image of `X_i` under the arctan specialization.
pub fn arctan_image(i: usize) -> UniPoly {
    match i % 4 {
        1 => UniPoly::x(),
        3 => -UniPoly::x(),
        _ => UniPoly::zero(),
    }
}

/// `X^p - (-1)^{(p-1)/2} X` for odd `p`.
pub fn junod_binomial(p: u64) -> UniPoly {
    let p = p as usize;
    let mut coeffs = vec![BigInt::zero(); p + 1];
    coeffs[p] = BigInt::one();
    coeffs[1] = if (p - 1) / 2 % 2 == 0 { -BigInt::one() } else { BigInt::one() };
    UniPoly::from_coeffs(coeffs)
}

/// Given `Q*_0, ..., Q*_{m-1}`, returns `Q*_m`.
///
/// This is the cycle-indicator recurrence carried out after substitution,
/// which avoids materializing `C_m` (it has p(m) terms).
pub fn next_qstar<P: Borrow<UniPoly>>(prev: &[P]) -> UniPoly {
    let m = prev.len();
    if m == 0 {
        return UniPoly::one();
    }
    let mut acc = UniPoly::zero();
    let mut weight = BigInt::one();
    for j in (0..m).rev() {
        let image = arctan_image(m - j);
        if !image.is_zero() {
            acc = &acc + &(&image * prev[j].borrow()).scale(&weight);
        }
        weight *= j;
    }
    acc
}

/// `Q*_0, ..., Q*_n`.
pub fn meixner_qstar_table(n: usize) -> Vec<UniPoly> {
    let mut table = Vec::with_capacity(n + 1);
    while table.len() <= n {
        let next = next_qstar(&table[..]);
        table.push(next);
    }
    table
}

pub fn meixner_qstar(n: usize) -> UniPoly {
    meixner_qstar_table(n).pop().expect("table holds Q*_0")
}

/// `Q*_n` by literal substitution into `C_n`.
pub fn meixner_qstar_by_substitution(n: usize) -> Result<UniPoly> {
    let images: BTreeMap<usize, UniPoly> = (1..=n.max(1)).map(|i| (i, arctan_image(i))).collect();
    cycle_indicator(n).substitute_univariate(&images)
}

fn x_arctan(order: usize) -> RationalSeries {
    RationalSeries::t(order).arctan().map(|a| a.scale(&scaled_var(1, 1, 1))).expect("t has zero constant term")
}

fn to_uni(p: &MultiPoly, n: usize) -> Result<UniPoly> {
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for (m, c) in p.terms() {
        if m.width() > 1 {
            return Err(Error::Precondition(format!("unexpected variable in {m}")));
        }
        coeffs[m.exponent(1) as usize] = c.clone();
    }
    Ok(UniPoly::from_coeffs(coeffs))
}

/// `Q*_n` from the series `exp(X arctan t)`.
pub fn meixner_qstar_via_series(n: usize) -> Result<UniPoly> {
    let series = x_arctan(n).exp()?;
    to_uni(&series.egf_coefficient(n)?, n)
}

/// `Q_0, ..., Q_n` from the truncated series `(1 + t^2)^{-1/2} exp(X arctan t)`.
pub fn meixner_q_table(n: usize) -> Result<Vec<UniPoly>> {
    let t = RationalSeries::t(n);
    let root = RationalSeries::one(n).add(&t.mul(&t)).inv_sqrt()?;
    let series = root.mul(&x_arctan(n).exp()?);
    (0..=n).map(|k| to_uni(&series.egf_coefficient(k)?, k)).collect()
}

pub fn meixner_q(n: usize) -> Result<UniPoly> {
    Ok(meixner_q_table(n)?.pop().expect("table holds Q_0"))
}

fn require_odd(ctx: &PadicContext) -> Result<()> {
    if ctx.is_odd() {
        Ok(())
    } else {
        Err(Error::Precondition("Meixner congruences need an odd prime".into()))
    }
}

fn record_uni(report: &mut CongruenceReport, label: &str, a: &UniPoly, b: &UniPoly, m: &BigInt, ctx: &PadicContext) -> Result<()> {
    let check = a.congruence(b, m, ctx)?;
    report.instances += check.compared as u64;
    report.violations.extend(check.witness.map(|w| Violation::from_term(label, w, m, ctx)));
    Ok(())
}

/// `Q*_{np} ≡ Q_{np} (mod np Z_p[X])`.
pub fn check_junod_qstar_q(n: u64, ctx: &PadicContext, targets: &dyn Targets) -> Result<CongruenceReport> {
    require_odd(ctx)?;
    let np = (n * ctx.p()) as usize;
    let mut report = CongruenceReport::new("meixner-qstar-q").param("p", ctx.p()).param("n", n);
    let modulus = BigInt::from(np);
    let label = format!("Q*_{np} - Q_{np}");
    record_uni(&mut report, &label, &targets.meixner_qstar(np), &*targets.meixner_q(np)?, &modulus, ctx)?;
    Ok(report)
}

/// `Q_p ≡ X^p - (-1)^{(p-1)/2} X (mod p Z_p[X])`.
pub fn check_junod_qp(ctx: &PadicContext, targets: &dyn Targets) -> Result<CongruenceReport> {
    require_odd(ctx)?;
    let p = ctx.p();
    let mut report = CongruenceReport::new("meixner-qp").param("p", p);
    let label = format!("Q_{p} - (X^{p} -+ X)");
    record_uni(&mut report, &label, &*targets.meixner_q(p as usize)?, &junod_binomial(p), &BigInt::from(p), ctx)?;
    Ok(report)
}

/// `Q_{np} ≡ Q_p^n ≡ (X^p - (-1)^{(p-1)/2} X)^n (mod np Z_p[X])`.
pub fn check_corollary2(n: u64, ctx: &PadicContext, targets: &dyn Targets) -> Result<CongruenceReport> {
    require_odd(ctx)?;
    let p = ctx.p();
    let np = (n * p) as usize;
    let modulus = BigInt::from(np);
    let mut report = CongruenceReport::new("corollary2").param("p", p).param("n", n);
    let q_np = targets.meixner_q(np)?;
    let q_p_pow = targets.meixner_q(p as usize)?.pow(n);
    record_uni(&mut report, &format!("Q_{np} - Q_{p}^{n}"), &q_np, &q_p_pow, &modulus, ctx)?;
    let closed = junod_binomial(p).pow(n);
    record_uni(&mut report, &format!("Q_{np} - (X^{p} -+ X)^{n}"), &q_np, &closed, &modulus, ctx)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::targets::ExactTargets;

    fn u(v: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(v.iter().copied().map(BigInt::from).collect())
    }

    #[test]
    fn base_cases() {
        assert_eq!(meixner_qstar(0), UniPoly::one());
        assert_eq!(meixner_qstar(1), UniPoly::x());
        assert_eq!(meixner_qstar(3), u(&[0, -2, 0, 1]));
        assert_eq!(meixner_q(0).unwrap(), UniPoly::one());
        assert_eq!(meixner_q(2).unwrap(), u(&[-1, 0, 1]));
        // 3! [t^3] of (1 - t^2/2)(1 + Xt + X^2 t^2/2 + (X^3 - 2X) t^3/6).
        assert_eq!(meixner_q(3).unwrap(), u(&[0, -5, 0, 1]));
    }

    #[test]
    fn qstar_routes_agree() {
        for n in 0..=10 {
            let s = meixner_qstar_by_substitution(n).unwrap();
            assert_eq!(s, meixner_qstar(n), "n={n}");
            assert_eq!(s, meixner_qstar_via_series(n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn closed_forms() {
        assert_eq!(junod_binomial(3), u(&[0, 1, 0, 1]));
        assert_eq!(junod_binomial(5), u(&[0, -1, 0, 0, 0, 1]));
        assert_eq!(junod_binomial(7), u(&[0, 1, 0, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn junod_checks_small() {
        let t = ExactTargets::new();
        for p in [3, 5, 7] {
            let ctx = PadicContext::new(p).unwrap();
            assert!(check_junod_qp(&ctx, &t).unwrap().passed());
            for n in 1..=3 {
                assert!(check_junod_qstar_q(n, &ctx, &t).unwrap().passed());
                assert!(check_corollary2(n, &ctx, &t).unwrap().passed());
            }
        }
        let two = PadicContext::new(2).unwrap();
        assert!(check_junod_qp(&two, &t).is_err());
    }

    #[test]
    fn q_three_mod_three() {
        // Q_3 = X^3 - 5X ≡ X^3 + X (mod 3).
        let ctx = PadicContext::new(3).unwrap();
        let diff = &meixner_q(3).unwrap() - &junod_binomial(3);
        assert_eq!(diff, u(&[0, -6]));
        assert!(ctx.in_mzp(&diff.coeff(1), &BigInt::from(3)).unwrap());
    }
}
