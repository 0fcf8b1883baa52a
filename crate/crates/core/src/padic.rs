//! Exact integer arithmetic for p-adic questions.
//!
//! Nothing here stores a truncated p-adic expansion. Every quantity is an
//! exact integer, and "x lies in m·Z_p" is decided by comparing valuations:
//! the prime-to-p part of `m` is a unit in Z_p and drops out.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// A p-adic valuation: a natural number, or infinity for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialEq<u64> for Valuation {
    fn eq(&self, other: &u64) -> bool {
        *self == Valuation::Finite(*other)
    }
}

impl PartialOrd<u64> for Valuation {
    fn partial_cmp(&self, other: &u64) -> Option<Ordering> {
        Some(self.cmp(&Valuation::Finite(*other)))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

// Serialized as a JSON number, or the string "inf".
impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_u64(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Valuation::Finite(v)),
            Raw::Str(s) if s == "inf" => Ok(Valuation::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad valuation {s:?}"))),
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for all 64-bit inputs.
///
/// Miller-Rabin with the first twelve primes as witnesses is exact below
/// 3.3 * 10^24, which covers `u64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// n! as an exact integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= i;
    }
    acc.into()
}

/// Binomial coefficient, zero when `k > n`.
///
/// Computed multiplicatively: after step `i` the accumulator is
/// C(n-k+i, i), so every division is exact.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    acc.into()
}

/// A prime `p` together with the valuation helpers that depend on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicContext {
    p: u64,
    p_big: BigInt,
}

/// Outcome of a single valuation check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub passed: bool,
    /// The quantity whose valuation was tested.
    pub difference: BigInt,
    pub observed: Valuation,
    pub required: Valuation,
}

impl CheckResult {
    fn at_least(difference: BigInt, observed: Valuation, required: Valuation) -> Self {
        CheckResult { passed: observed >= required, difference, observed, required }
    }
}

impl PadicContext {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PadicContext { p, p_big: BigInt::from(p) })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_odd(&self) -> bool {
        self.p != 2
    }

    /// Largest `e` with `p^e | x`; infinite for zero.
    pub fn vp(&self, x: &BigInt) -> Valuation {
        if x.is_zero() {
            return Valuation::Infinite;
        }
        if self.p == 2 {
            return Valuation::Finite(x.trailing_zeros().unwrap_or(0));
        }
        let mut e = 0;
        let mut rest = x.abs();
        loop {
            let (q, r) = rest.div_rem(&self.p_big);
            if !r.is_zero() {
                return Valuation::Finite(e);
            }
            rest = q;
            e += 1;
        }
    }

    pub fn vp_u64(&self, x: u64) -> Valuation {
        if x == 0 {
            return Valuation::Infinite;
        }
        let mut x = x;
        let mut e = 0;
        while x % self.p == 0 {
            x /= self.p;
            e += 1;
        }
        Valuation::Finite(e)
    }

    /// Membership of `x` in the ideal `m·Z_p`.
    pub fn in_mzp(&self, x: &BigInt, m: &BigInt) -> Result<bool> {
        if m.is_zero() {
            return Err(Error::ZeroModulus);
        }
        Ok(self.vp(x) >= self.vp(m))
    }

    /// Morita's Gamma function at a positive integer:
    /// `(-1)^n` times the product of all `j < n` prime to `p`.
    pub fn morita_gamma(&self, n: u64) -> Result<BigInt> {
        if n < 1 {
            return Err(Error::Precondition("Morita Gamma needs n >= 1".into()));
        }
        let mut acc = BigUint::one();
        for j in 1..n {
            if j % self.p != 0 {
                acc *= j;
            }
        }
        let acc = BigInt::from(acc);
        Ok(if n % 2 == 0 { acc } else { -acc })
    }

    /// `Gamma_p(hi) / Gamma_p(lo)` for `1 <= lo <= hi`, as the signed product
    /// of the integers in `[lo, hi)` prime to `p`.
    pub fn gamma_ratio(&self, lo: u64, hi: u64) -> Result<BigInt> {
        if lo < 1 || lo > hi {
            return Err(Error::Precondition(format!("gamma ratio needs 1 <= {lo} <= {hi}")));
        }
        let mut acc = BigUint::one();
        for j in lo..hi {
            if j % self.p != 0 {
                acc *= j;
            }
        }
        let acc = BigInt::from(acc);
        Ok(if (hi - lo) % 2 == 0 { acc } else { -acc })
    }

    /// Successive values `Gamma_p(1), Gamma_p(2), ...` built from a running product.
    pub fn morita_gamma_values(&self) -> MoritaGammaValues {
        MoritaGammaValues { p: self.p, next_arg: 1, current: BigInt::from(-1) }
    }

    /// Whether `(p-1)! ≡ -1 (mod p^2)`.
    pub fn is_wilson_prime(&self) -> Result<bool> {
        if self.p == 2 {
            return Err(Error::Precondition("Wilson test is defined for odd p".into()));
        }
        let p2 = self.p as u128 * self.p as u128;
        let mut acc: u128 = 1;
        for j in 1..self.p as u128 {
            acc = acc * j % p2;
        }
        Ok(acc == p2 - 1)
    }

    /// `(mp)! == (-1)^{pm+1} Gamma_p(pm+1) m! p^m`, exactly, using the given Gamma value.
    pub fn gamma_identity_from(&self, m: u64, gamma_pm1: &BigInt) -> CheckResult {
        let pm = self.p * m;
        let mut rhs = gamma_pm1 * factorial(m) * num_traits::pow(self.p_big.clone(), m as usize);
        if (pm + 1) % 2 == 1 {
            rhs = -rhs;
        }
        let difference = factorial(pm) - rhs;
        let observed = self.vp(&difference);
        CheckResult::at_least(difference, observed, Valuation::Infinite)
    }

    pub fn check_gamma_identity(&self, m: u64) -> Result<CheckResult> {
        let gamma = self.morita_gamma(self.p * m + 1)?;
        Ok(self.gamma_identity_from(m, &gamma))
    }

    /// `vp(Gamma_p(pm+1) + 1) >= vp(pm) - vp(2)`, using the given Gamma value.
    pub fn gamma_congruence_from(&self, m: u64, gamma_pm1: &BigInt) -> CheckResult {
        let difference = gamma_pm1 + 1;
        let observed = self.vp(&difference);
        let need = self.vp_u64(self.p * m).finite().unwrap_or(0);
        let halve = self.vp_u64(2).finite().unwrap_or(0);
        CheckResult::at_least(difference, observed, Valuation::Finite(need.saturating_sub(halve)))
    }

    pub fn check_gamma_congruence(&self, m: u64) -> Result<CheckResult> {
        if m < 1 {
            return Err(Error::Precondition("gamma congruence needs m >= 1".into()));
        }
        let gamma = self.morita_gamma(self.p * m + 1)?;
        Ok(self.gamma_congruence_from(m, &gamma))
    }

    /// Both halves of the binomial lift, from supplied values of `C(np, pm)`
    /// and `C(n, m)`. The first failing half is reported; if both pass the
    /// reported difference is `C(np,pm) - C(n,m)`.
    pub fn binomial_lift_from(&self, n: u64, m: u64, upper: &BigInt, lower: &BigInt) -> CheckResult {
        let need = self.vp_u64(n * self.p);
        let lifted = upper - lower;
        let lifted_v = self.vp(&lifted);
        if lifted_v < need {
            return CheckResult::at_least(lifted, lifted_v, need);
        }
        let scaled = lower * BigInt::from(self.p * m);
        let scaled_v = self.vp(&scaled);
        if scaled_v < need {
            return CheckResult::at_least(scaled, scaled_v, need);
        }
        CheckResult::at_least(lifted, lifted_v, need)
    }

    pub fn check_binomial_lift(&self, n: u64, m: u64) -> CheckResult {
        self.binomial_lift_from(n, m, &binomial(n * self.p, m * self.p), &binomial(n, m))
    }
}

impl fmt::Display for PadicContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={}", self.p)
    }
}

/// Iterator over `(n, Gamma_p(n))` for `n = 1, 2, ...`.
#[derive(Debug, Clone)]
pub struct MoritaGammaValues {
    p: u64,
    next_arg: u64,
    current: BigInt,
}

impl Iterator for MoritaGammaValues {
    type Item = (u64, BigInt);

    fn next(&mut self) -> Option<Self::Item> {
        let n = self.next_arg;
        let out = (n, self.current.clone());
        self.current = if n % self.p == 0 {
            -&self.current
        } else {
            -(&self.current * BigInt::from(n))
        };
        self.next_arg += 1;
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> PadicContext {
        PadicContext::new(p).unwrap()
    }

    #[test]
    fn rejects_composites() {
        assert_eq!(PadicContext::new(1), Err(Error::NotPrime(1)));
        assert_eq!(PadicContext::new(9), Err(Error::NotPrime(9)));
        assert!(PadicContext::new(563).is_ok());
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..5000u64 {
            let slow = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), slow, "{n}");
        }
    }

    #[test]
    fn valuation_basics() {
        let c = ctx(3);
        assert_eq!(c.vp(&BigInt::zero()), Valuation::Infinite);
        assert_eq!(c.vp(&BigInt::from(18)), 2);
        assert_eq!(c.vp(&BigInt::from(-18)), 2);
        assert_eq!(ctx(2).vp(&BigInt::from(-40)), 3);
        assert!(Valuation::Finite(1000) < Valuation::Infinite);
    }

    #[test]
    fn ideal_membership() {
        let c = ctx(5);
        assert!(!c.in_mzp(&6.into(), &15.into()).unwrap());
        assert!(c.in_mzp(&10.into(), &15.into()).unwrap());
        assert!(c.in_mzp(&BigInt::zero(), &7.into()).unwrap());
        assert_eq!(c.in_mzp(&1.into(), &BigInt::zero()), Err(Error::ZeroModulus));
    }

    #[test]
    fn gamma_small_values() {
        let c = ctx(5);
        assert_eq!(c.morita_gamma(1).unwrap(), BigInt::from(-1));
        assert_eq!(c.morita_gamma(2).unwrap(), BigInt::from(1));
        assert_eq!(c.morita_gamma(6).unwrap(), BigInt::from(24));
        assert!(c.morita_gamma(0).is_err());
    }

    #[test]
    fn gamma_iterator_agrees_with_direct() {
        let c = ctx(3);
        for (n, g) in c.morita_gamma_values().take(60) {
            assert_eq!(g, c.morita_gamma(n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn gamma_ratio_matches_quotient() {
        let c = ctx(3);
        assert_eq!(c.gamma_ratio(4, 7).unwrap(), BigInt::from(-20));
        for lo in 1..15 {
            for hi in lo..20 {
                let q = c.morita_gamma(hi).unwrap() / c.morita_gamma(lo).unwrap();
                assert_eq!(c.gamma_ratio(lo, hi).unwrap(), q);
            }
        }
    }

    #[test]
    fn wilson_primes() {
        assert!(ctx(5).is_wilson_prime().unwrap());
        assert!(ctx(13).is_wilson_prime().unwrap());
        assert!(ctx(563).is_wilson_prime().unwrap());
        assert!(!ctx(3).is_wilson_prime().unwrap());
        assert!(!ctx(7).is_wilson_prime().unwrap());
        assert!(ctx(2).is_wilson_prime().is_err());
    }

    #[test]
    fn gamma_congruence_examples() {
        // Gamma_5(6) = 24, 24 + 1 = 25.
        let r = ctx(5).check_gamma_congruence(1).unwrap();
        assert!(r.passed);
        assert_eq!(r.difference, BigInt::from(25));
        assert_eq!(r.observed, 2);
        // Gamma_3(10) = 2240, 2241 = 3^3 * 83.
        let r = ctx(3).check_gamma_congruence(3).unwrap();
        assert!(r.passed);
        assert_eq!(r.observed, 3);
        assert_eq!(r.required, Valuation::Finite(2));
    }

    #[test]
    fn binomial_lift_examples() {
        for p in [2, 3, 5, 7] {
            assert!(ctx(p).check_binomial_lift(1, 0).passed);
        }
        let r = ctx(3).check_binomial_lift(6, 2);
        assert_eq!(r.difference, BigInt::from(18549));
        assert_eq!(r.observed, 4);
        assert!(r.passed);
        let c = ctx(5);
        assert!((0..=25).all(|m| c.check_binomial_lift(25, m).passed));
    }

    #[test]
    fn factorial_and_binomial() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(3, 5), BigInt::zero());
        for n in 0..=60 {
            for k in 0..=n {
                assert_eq!(binomial(n, k), factorial(n) / (factorial(k) * factorial(n - k)));
            }
        }
    }
}
