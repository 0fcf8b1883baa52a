use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{first_bad, Coefficient, CongruenceCheck, Congruent, UniPoly};
use crate::error::{Error, Result};
use crate::padic::PadicContext;

/// A monomial `X_1^{e_1} ... X_k^{e_k}`.
///
/// Exponents are stored without trailing zeros, so equal monomials have equal
/// representations. Ordering is graded reverse-lexicographic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    degree: u64,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        let degree = exps.iter().map(|&e| u64::from(e)).sum();
        Monomial { degree, exps }
    }

    pub fn one() -> Self {
        Monomial::default()
    }

    /// `X_i^e`, with `i >= 1`.
    pub fn var_pow(i: usize, e: u32) -> Self {
        assert!(i >= 1, "variables are numbered from 1");
        let mut exps = vec![0; i];
        exps[i - 1] = e;
        Monomial::new(exps)
    }

    /// Total degree.
    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// Exponents; index 0 belongs to `X_1`.
    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    /// Exponent of `X_i` (1-based).
    pub fn exponent(&self, i: usize) -> u32 {
        i.checked_sub(1).and_then(|k| self.exps.get(k)).copied().unwrap_or(0)
    }

    /// Number of variables up to the last one present.
    pub fn width(&self) -> usize {
        self.exps.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.exps.len() >= other.exps.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut exps = long.exps.clone();
        for (e, s) in exps.iter_mut().zip(&short.exps) {
            *e += s;
        }
        Monomial { degree: self.degree + other.degree, exps }
    }

    fn bump(&self, i: usize) -> Monomial {
        let mut exps = self.exps.clone();
        if exps.len() < i {
            exps.resize(i, 0);
        }
        exps[i - 1] += 1;
        Monomial { degree: self.degree + 1, exps }
    }

    /// Exponents padded with zeros to `width` entries.
    pub fn padded(&self, width: usize) -> Vec<u32> {
        let mut v = self.exps.clone();
        v.resize(width.max(v.len()), 0);
        v
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            // Same degree: the monomial with the larger exponent in the last
            // differing variable is the smaller one.
            let width = self.exps.len().max(other.exps.len());
            for k in (0..width).rev() {
                let a = self.exps.get(k).copied().unwrap_or(0);
                let b = other.exps.get(k).copied().unwrap_or(0);
                if a != b {
                    return b.cmp(&a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        for (k, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            match e {
                1 => write!(f, "X{}", k + 1)?,
                _ => write!(f, "X{}^{}", k + 1, e)?,
            }
        }
        Ok(())
    }
}

/// Sparse multivariate polynomial in `X_1, X_2, ...` with no zero coefficients stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly<R = BigInt> {
    terms: BTreeMap<Monomial, R>,
}

impl<R: Coefficient> Default for MultiPoly<R> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<R: Coefficient> MultiPoly<R> {
    pub fn zero() -> Self {
        MultiPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(R::one())
    }

    pub fn constant(c: R) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    /// The variable `X_i`, `i >= 1`.
    pub fn var(i: usize) -> Self {
        Self::monomial(Monomial::var_pow(i, 1), R::one())
    }

    pub fn monomial(m: Monomial, c: R) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    /// Builds a polynomial from possibly repeated, possibly zero terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, R)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms, leading (largest in graded revlex) first.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &R)> + ExactSizeIterator {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> R {
        self.terms.get(m).cloned().unwrap_or_else(R::zero)
    }

    /// Number of variables needed to write the polynomial (index of the last one used).
    pub fn num_vars(&self) -> usize {
        self.terms.keys().map(Monomial::width).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: &R) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), a.clone() * c))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        MultiPoly { terms }
    }

    /// Product with the single variable `X_i`.
    pub fn mul_var(&self, i: usize) -> Self {
        assert!(i >= 1, "variables are numbered from 1");
        // Multiplying by a variable is injective on monomials, so no
        // collisions can occur.
        let terms = self.terms.iter().map(|(m, c)| (m.bump(i), c.clone())).collect();
        MultiPoly { terms }
    }

    /// `self^n` by binary exponentiation.
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

    pub fn map_coeffs<S: Coefficient>(&self, mut f: impl FnMut(&R) -> S) -> MultiPoly<S> {
        MultiPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Evaluates at `X_i := images[i]`, giving a univariate polynomial.
    pub fn substitute_univariate(&self, images: &BTreeMap<usize, UniPoly<R>>) -> Result<UniPoly<R>> {
        // Powers of each image, built lazily.
        let mut powers: BTreeMap<usize, Vec<UniPoly<R>>> = BTreeMap::new();
        let mut result = UniPoly::zero();
        for (m, c) in &self.terms {
            let mut term = UniPoly::constant(c.clone());
            for (k, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let var = k + 1;
                let image = images.get(&var).ok_or(Error::MissingImage(var))?;
                let table = powers.entry(var).or_insert_with(|| vec![UniPoly::one()]);
                while table.len() <= e as usize {
                    let next = &table[table.len() - 1] * image;
                    table.push(next);
                }
                term = &term * &table[e as usize];
            }
            result = &result + &term;
        }
        Ok(result)
    }
}

impl<R: Coefficient + fmt::Display> fmt::Display for MultiPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if m.exps.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<R: Coefficient> Add for &MultiPoly<R> {
    type Output = MultiPoly<R>;

    fn add(self, rhs: &MultiPoly<R>) -> MultiPoly<R> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl<R: Coefficient> Sub for &MultiPoly<R> {
    type Output = MultiPoly<R>;

    fn sub(self, rhs: &MultiPoly<R>) -> MultiPoly<R> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), &-c.clone());
        }
        out
    }
}

impl<R: Coefficient> Neg for &MultiPoly<R> {
    type Output = MultiPoly<R>;

    fn neg(self) -> MultiPoly<R> {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect();
        MultiPoly { terms }
    }
}

impl<R: Coefficient> Mul for &MultiPoly<R> {
    type Output = MultiPoly<R>;

    fn mul(self, rhs: &MultiPoly<R>) -> MultiPoly<R> {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), &(ca.clone() * cb));
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl<R: Coefficient> $tr for MultiPoly<R> {
            type Output = MultiPoly<R>;
            fn $f(self, rhs: MultiPoly<R>) -> MultiPoly<R> {
                (&self).$f(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl<R: Coefficient> Neg for MultiPoly<R> {
    type Output = MultiPoly<R>;
    fn neg(self) -> MultiPoly<R> {
        -&self
    }
}

impl Congruent for MultiPoly<BigInt> {
    fn congruence(&self, other: &Self, m: &BigInt, ctx: &PadicContext) -> Result<CongruenceCheck> {
        let mut support: Vec<&Monomial> = self.terms.keys().chain(other.terms.keys()).collect();
        support.sort_unstable_by(|a, b| b.cmp(a));
        support.dedup();
        let diffs = support.into_iter().map(|mono| {
            let d = self.coeff(mono) - other.coeff(mono);
            (mono.exps.clone(), d)
        });
        first_bad(diffs, m, ctx)
    }
}

#[derive(Serialize, Deserialize)]
struct MultiPolyJson {
    vars: usize,
    terms: Vec<(Vec<u32>, String)>,
}

impl Serialize for MultiPoly<BigInt> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let vars = self.num_vars();
        let terms = self.terms().map(|(m, c)| (m.padded(vars), c.to_string())).collect();
        MultiPolyJson { vars, terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly<BigInt> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MultiPolyJson::deserialize(d)?;
        let mut p = MultiPoly::zero();
        for (exps, c) in raw.terms {
            if exps.len() != raw.vars {
                return Err(D::Error::custom(format!(
                    "exponent vector has {} entries, expected {}",
                    exps.len(),
                    raw.vars
                )));
            }
            let c: BigInt = c.parse().map_err(D::Error::custom)?;
            p.add_term(Monomial::new(exps), &c);
        }
        Ok(p)
    }
}
