use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{first_bad, Coefficient, CongruenceCheck, Congruent};
use crate::error::Result;
use crate::padic::PadicContext;

/// Dense univariate polynomial; `coeffs[k]` is the coefficient of `X^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly<R = BigInt> {
    coeffs: Vec<R>,
}

impl<R: Coefficient> Default for UniPoly<R> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<R: Coefficient> UniPoly<R> {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(R::one())
    }

    pub fn x() -> Self {
        UniPoly::from_coeffs(vec![R::zero(), R::one()])
    }

    pub fn constant(c: R) -> Self {
        UniPoly::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&R> {
        self.coeffs.last()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &R) -> Self {
        UniPoly::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c).collect())
    }

    /// Product with `X^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![R::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UniPoly { coeffs }
    }

    /// `p(-X)`.
    pub fn reflect(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 0 { c.clone() } else { -c.clone() })
            .collect();
        UniPoly { coeffs }
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn map_coeffs<S: Coefficient>(&self, f: impl FnMut(&R) -> S) -> UniPoly<S> {
        UniPoly::from_coeffs(self.coeffs.iter().map(f).collect())
    }
}

impl<R: Coefficient> Add for &UniPoly<R> {
    type Output = UniPoly<R>;

    fn add(self, rhs: &UniPoly<R>) -> UniPoly<R> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<R: Coefficient> Sub for &UniPoly<R> {
    type Output = UniPoly<R>;

    fn sub(self, rhs: &UniPoly<R>) -> UniPoly<R> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<R: Coefficient> Neg for &UniPoly<R> {
    type Output = UniPoly<R>;

    fn neg(self) -> UniPoly<R> {
        UniPoly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

impl<R: Coefficient> Mul for &UniPoly<R> {
    type Output = UniPoly<R>;

    fn mul(self, rhs: &UniPoly<R>) -> UniPoly<R> {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += &(a.clone() * b);
            }
        }
        UniPoly::from_coeffs(coeffs)
    }
}

impl<R: Coefficient> Neg for UniPoly<R> {
    type Output = UniPoly<R>;
    fn neg(self) -> UniPoly<R> {
        -&self
    }
}

impl<R: Coefficient + fmt::Display> fmt::Display for UniPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                _ => {
                    if !c.is_one() {
                        write!(f, "{c}*")?;
                    }
                    if k == 1 {
                        f.write_str("X")?;
                    } else {
                        write!(f, "X^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Congruent for UniPoly<BigInt> {
    /// Differences are scanned from the top degree down.
    fn congruence(&self, other: &Self, m: &BigInt, ctx: &PadicContext) -> Result<CongruenceCheck> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let diffs = (0..n)
            .rev()
            .filter(|&k| !(self.coeff(k).is_zero() && other.coeff(k).is_zero()))
            .map(|k| (vec![k as u32], self.coeff(k) - other.coeff(k)));
        first_bad(diffs, m, ctx)
    }
}

#[derive(Serialize, Deserialize)]
struct UniPolyJson {
    coeffs: Vec<String>,
}

impl Serialize for UniPoly<BigInt> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        UniPolyJson { coeffs: self.coeffs.iter().map(ToString::to_string).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for UniPoly<BigInt> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = UniPolyJson::deserialize(d)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|c| c.parse::<BigInt>().map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(UniPoly::from_coeffs(coeffs))
    }
}
