//! Exact polynomial arithmetic.
//!
//! [`MultiPoly`] is a sparse map from monomials to coefficients and holds the
//! cycle indicators. [`UniPoly`] is a dense coefficient vector and holds the
//! Meixner polynomials. [`RationalSeries`] is a truncated power series in `t`
//! whose coefficients are rational polynomials; it is only used to evaluate
//! generating functions as an independent oracle.

mod multi;
mod series;
mod uni;

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use multi::{Monomial, MultiPoly};
pub use series::RationalSeries;
pub(crate) use series::scaled_var;
pub use uni::UniPoly;

use crate::error::Result;
use crate::padic::{PadicContext, Valuation};

/// Coefficient ring for polynomials: anything with exact ring operations.
pub trait Coefficient:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Send
    + Sync
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
{
}

impl<T> Coefficient for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Send
        + Sync
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + for<'a> Mul<&'a T, Output = T>
        + for<'a> AddAssign<&'a T>
{
}

/// Polynomial with rational coefficients, used inside series oracles.
pub type QPoly = MultiPoly<BigRational>;

/// The first coefficient at which two polynomials fail a congruence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermWitness {
    /// Exponent vector, index 0 is `X_1` (for univariate polynomials a single degree).
    pub exponents: Vec<u32>,
    /// Coefficient of `a - b` at that monomial.
    pub difference: BigInt,
    pub valuation: Valuation,
}

/// Result of comparing two polynomials coefficientwise modulo `m·Z_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceCheck {
    /// Number of monomials in the union of both supports.
    pub compared: usize,
    pub witness: Option<TermWitness>,
}

impl CongruenceCheck {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

/// Coefficientwise congruence `a ≡ b (mod m·Z_p[X])`.
pub trait Congruent {
    fn congruence(&self, other: &Self, m: &BigInt, ctx: &PadicContext) -> Result<CongruenceCheck>;
}

/// Boolean form of [`Congruent::congruence`].
pub fn congruent_mod<P: Congruent>(a: &P, b: &P, m: &BigInt, ctx: &PadicContext) -> Result<bool> {
    Ok(a.congruence(b, m, ctx)?.holds())
}

pub(crate) fn first_bad<'a, I>(diffs: I, m: &BigInt, ctx: &PadicContext) -> Result<CongruenceCheck>
where
    I: Iterator<Item = (Vec<u32>, BigInt)> + 'a,
{
    if m.is_zero() {
        return Err(crate::error::Error::ZeroModulus);
    }
    let need = ctx.vp(m);
    let mut compared = 0;
    let mut witness = None;
    for (exponents, difference) in diffs {
        compared += 1;
        if witness.is_some() {
            continue;
        }
        let valuation = ctx.vp(&difference);
        if valuation < need {
            witness = Some(TermWitness { exponents, difference, valuation });
        }
    }
    Ok(CongruenceCheck { compared, witness })
}
