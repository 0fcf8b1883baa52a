use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{Monomial, MultiPoly, QPoly};
use crate::error::{Error, Result};
use crate::padic::factorial;

/// Power series in `t` truncated after degree `order`, with coefficients in
/// `Q[X_1, X_2, ...]`.
///
/// Results are exact through degree `order`. Binary operations truncate to
/// the smaller order of their operands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    coeffs: Vec<QPoly>,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl RationalSeries {
    pub fn zero(order: usize) -> Self {
        RationalSeries { coeffs: vec![QPoly::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(QPoly::one(), order)
    }

    pub fn constant(c: QPoly, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `t`.
    pub fn t(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = QPoly::one();
        }
        s
    }

    /// Pads or truncates `coeffs` to degrees `0..=order`.
    pub fn from_coeffs(mut coeffs: Vec<QPoly>, order: usize) -> Self {
        coeffs.resize(order + 1, QPoly::zero());
        RationalSeries { coeffs }
    }

    /// `arctan t` from its textbook expansion.
    pub fn arctan_t(order: usize) -> Self {
        let mut s = Self::zero(order);
        for (k, d) in (1..=order).step_by(2).enumerate() {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            s.coeffs[d] = QPoly::constant(rat(sign, d as i64));
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &QPoly {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[QPoly] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs[..=order.min(self.order())].to_vec(), order)
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect();
        RationalSeries { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect();
        RationalSeries { coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut coeffs = vec![QPoly::zero(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        RationalSeries { coeffs }
    }

    /// Multiplies every coefficient by the polynomial `c`.
    pub fn scale(&self, c: &QPoly) -> Self {
        RationalSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    fn derivative(&self) -> Vec<QPoly> {
        (1..self.coeffs.len()).map(|k| self.coeffs[k].scale(&rat(k as i64, 1))).collect()
    }

    /// `exp(s)`; `s` must have zero constant term.
    ///
    /// Uses `f' = s' f`, i.e. `n f_n = sum_{k=1}^n k s_k f_{n-k}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Precondition("exp needs a series with zero constant term".into()));
        }
        let order = self.order();
        let mut f = vec![QPoly::zero(); order + 1];
        f[0] = QPoly::one();
        for n in 1..=order {
            let mut acc = QPoly::zero();
            for k in 1..=n {
                if self.coeffs[k].is_zero() || f[n - k].is_zero() {
                    continue;
                }
                let term = (&self.coeffs[k] * &f[n - k]).scale(&rat(k as i64, 1));
                acc = &acc + &term;
            }
            f[n] = acc.scale(&rat(1, n as i64));
        }
        Ok(RationalSeries { coeffs: f })
    }

    /// Constant term as a nonzero rational, if it is one.
    fn unit_constant(&self) -> Option<BigRational> {
        let c = &self.coeffs[0];
        match c.len() {
            1 => {
                let (m, v) = c.terms().next()?;
                (m.degree() == 0).then(|| v.clone())
            }
            _ => None,
        }
    }

    /// `1 / s`; the constant term must be a nonzero rational number.
    pub fn inv(&self) -> Result<Self> {
        let c0 = self
            .unit_constant()
            .ok_or_else(|| Error::Precondition("inverse needs a nonzero numeric constant term".into()))?;
        let c0_inv = c0.recip();
        let order = self.order();
        let mut h = vec![QPoly::zero(); order + 1];
        h[0] = QPoly::constant(c0_inv.clone());
        for n in 1..=order {
            let mut acc = QPoly::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() && !h[n - k].is_zero() {
                    acc = &acc + &(&self.coeffs[k] * &h[n - k]);
                }
            }
            h[n] = acc.scale(&-c0_inv.clone());
        }
        Ok(RationalSeries { coeffs: h })
    }

    /// `s^{-1/2}`; the constant term must be exactly 1.
    ///
    /// From `s h' = -(1/2) s' h`:
    /// `h_n = -(1/n) sum_{k=1}^n (n - k/2) s_k h_{n-k}`.
    pub fn inv_sqrt(&self) -> Result<Self> {
        if self.coeffs[0] != QPoly::one() {
            return Err(Error::Precondition("inverse square root needs constant term 1".into()));
        }
        let order = self.order();
        let mut h = vec![QPoly::zero(); order + 1];
        h[0] = QPoly::one();
        for n in 1..=order {
            let mut acc = QPoly::zero();
            for k in 1..=n {
                if self.coeffs[k].is_zero() || h[n - k].is_zero() {
                    continue;
                }
                let weight = rat(2 * n as i64 - k as i64, 2);
                acc = &acc + &(&self.coeffs[k] * &h[n - k]).scale(&weight);
            }
            h[n] = acc.scale(&rat(-1, n as i64));
        }
        Ok(RationalSeries { coeffs: h })
    }

    /// `arctan(s)` for `s` with zero constant term, as the integral of `s' / (1 + s^2)`.
    pub fn arctan(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Precondition("arctan needs a series with zero constant term".into()));
        }
        let order = self.order();
        if order == 0 {
            return Ok(Self::zero(0));
        }
        let denom = Self::one(order).add(&self.mul(self)).inv()?;
        let ds = Self::from_coeffs(self.derivative(), order - 1);
        let quotient = ds.mul(&denom.truncate(order - 1));
        let mut out = vec![QPoly::zero()];
        for (k, c) in quotient.coeffs.iter().enumerate() {
            out.push(c.scale(&rat(1, k as i64 + 1)));
        }
        Ok(Self::from_coeffs(out, order))
    }

    /// `n!` times the coefficient of `t^n`, which must have integer coefficients.
    pub fn egf_coefficient(&self, n: usize) -> Result<MultiPoly<BigInt>> {
        let scale = BigRational::from_integer(factorial(n as u64));
        let scaled = self.coeffs[n].scale(&scale);
        let mut out = MultiPoly::zero();
        for (m, c) in scaled.terms() {
            if !c.denom().is_one() {
                return Err(Error::NonIntegral {
                    context: format!("EGF coefficient of t^{n}"),
                    value: c.to_string(),
                });
            }
            out.add_term(m.clone(), c.numer());
        }
        Ok(out)
    }
}

/// `X_i` with rational coefficient `num/den`.
pub(crate) fn scaled_var(i: usize, num: i64, den: i64) -> QPoly {
    QPoly::monomial(Monomial::var_pow(i, 1), rat(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn q(n: i64, d: i64) -> QPoly {
        QPoly::constant(rat(n, d))
    }

    #[test]
    fn exp_of_zero_is_one() {
        assert_eq!(RationalSeries::zero(6).exp().unwrap(), RationalSeries::one(6));
        assert!(RationalSeries::one(3).exp().is_err());
    }

    #[test]
    fn exp_of_t_is_reciprocal_factorials() {
        let e = RationalSeries::t(8).exp().unwrap();
        for n in 0..=8 {
            let expect = BigRational::new(BigInt::one(), factorial(n as u64));
            assert_eq!(e.coeff(n), &QPoly::constant(expect));
        }
    }

    #[test]
    fn textbook_arctan() {
        let a = RationalSeries::arctan_t(5);
        let expect = RationalSeries::from_coeffs(vec![q(0, 1), q(1, 1), q(0, 1), q(-1, 3), q(0, 1), q(1, 5)], 5);
        assert_eq!(a, expect);
        assert_eq!(RationalSeries::t(15).arctan().unwrap(), RationalSeries::arctan_t(15));
    }

    #[test]
    fn inverse_square_root_matches_binomial_series() {
        // (1 + t^2)^{-1/2} = sum_k C(-1/2, k) t^{2k}, C(-1/2,k) = (-1)^k (2k)! / (4^k k!^2).
        let order = 20;
        let s = RationalSeries::one(order).add(&RationalSeries::t(order).mul(&RationalSeries::t(order)));
        let h = s.inv_sqrt().unwrap();
        for n in 0..=order {
            let expect = if n % 2 == 1 {
                BigRational::zero()
            } else {
                let k = (n / 2) as u64;
                let sign = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                BigRational::new(
                    sign * factorial(2 * k),
                    num_traits::pow(BigInt::from(4), k as usize) * factorial(k) * factorial(k),
                )
            };
            assert_eq!(h.coeff(n), &QPoly::constant(expect), "degree {n}");
        }
        assert_eq!(h.mul(&h).mul(&s), RationalSeries::one(order));
        assert!(RationalSeries::zero(2).inv_sqrt().is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let order = 10;
        let s = RationalSeries::from_coeffs(vec![q(2, 1), scaled_var(1, 1, 1), q(3, 7)], order);
        assert_eq!(s.mul(&s.inv().unwrap()), RationalSeries::one(order));
        assert!(RationalSeries::t(3).inv().is_err());
    }

    #[test]
    fn meixner_star_cubic() {
        // exp(X arctan t): 3! [t^3] = X^3 - 2X.
        let g = RationalSeries::arctan_t(3).scale(&scaled_var(1, 1, 1));
        let c3 = g.exp().unwrap().egf_coefficient(3).unwrap();
        let expect = MultiPoly::from_terms([
            (Monomial::var_pow(1, 3), BigInt::one()),
            (Monomial::var_pow(1, 1), BigInt::from(-2)),
        ]);
        assert_eq!(c3, expect);
    }

    #[test]
    fn non_integral_extraction_is_an_error() {
        let s = RationalSeries::from_coeffs(vec![q(0, 1), q(1, 3)], 1);
        assert!(matches!(s.egf_coefficient(1), Err(Error::NonIntegral { .. })));
    }
}
