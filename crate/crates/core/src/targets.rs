//! The objects checkers examine, behind a trait so a sweep can be pointed at
//! a deliberately corrupted copy and shown to catch it.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;

use crate::cycle_index::{self, CycleType};
use crate::error::Result;
use crate::meixner;
use crate::padic::{self, PadicContext};
use crate::poly::{Monomial, MultiPoly, UniPoly};

/// Source of every value a checker compares.
pub trait Targets: Sync {
    /// Class size `c_n(m)`.
    fn coefficient(&self, ct: &CycleType) -> Result<BigInt> {
        cycle_index::coefficient(ct)
    }

    fn cycle_indicator(&self, n: usize) -> Arc<MultiPoly>;

    fn meixner_q(&self, n: usize) -> Result<Arc<UniPoly>>;

    fn meixner_qstar(&self, n: usize) -> Arc<UniPoly>;

    fn morita_gamma(&self, ctx: &PadicContext, n: u64) -> Result<BigInt> {
        ctx.morita_gamma(n)
    }

    fn binomial(&self, n: u64, k: u64) -> BigInt {
        padic::binomial(n, k)
    }

    /// The partner `beta = alpha + m·gamma` in the power-lifting lemma.
    fn junod_beta(&self, alpha: &MultiPoly, gamma: &MultiPoly, m: &BigInt) -> MultiPoly {
        alpha + &gamma.scale(m)
    }
}

/// Exact values, memoized. Tables only ever grow.
#[derive(Debug, Default)]
pub struct ExactTargets {
    cycle: Mutex<Vec<Arc<MultiPoly>>>,
    qstar: Mutex<Vec<Arc<UniPoly>>>,
    q: Mutex<Vec<Arc<UniPoly>>>,
}

impl ExactTargets {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fills the tables through the given degrees.
    pub fn warm(&self, cycle_degree: usize, meixner_degree: usize) -> Result<()> {
        self.cycle_indicator(cycle_degree);
        self.meixner_qstar(meixner_degree);
        self.meixner_q(meixner_degree)?;
        Ok(())
    }
}

impl Targets for ExactTargets {
    fn cycle_indicator(&self, n: usize) -> Arc<MultiPoly> {
        let mut table = self.cycle.lock().expect("cycle table lock");
        while table.len() <= n {
            let next = cycle_index::next_cycle_indicator(&table[..]);
            table.push(Arc::new(next));
        }
        table[n].clone()
    }

    fn meixner_q(&self, n: usize) -> Result<Arc<UniPoly>> {
        let mut table = self.q.lock().expect("meixner table lock");
        if table.len() <= n {
            // Exact values do not depend on the truncation order, so the
            // table is simply rebuilt at a larger order.
            let order = n.max(2 * table.len());
            *table = meixner::meixner_q_table(order)?.into_iter().map(Arc::new).collect();
        }
        Ok(table[n].clone())
    }

    fn meixner_qstar(&self, n: usize) -> Arc<UniPoly> {
        let mut table = self.qstar.lock().expect("meixner table lock");
        while table.len() <= n {
            let next = meixner::next_qstar(&table[..]);
            table.push(Arc::new(next));
        }
        table[n].clone()
    }
}

/// A single corruption of one target value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mutation {
    /// Adds `delta` to `c_n(m)`.
    Coefficient { cycle_type: CycleType, delta: i64 },
    /// Adds `delta` to one coefficient of `C_n`.
    CycleIndexTerm { n: usize, exponents: Vec<u32>, delta: i64 },
    /// Adds `delta` to the coefficient of `X^degree` in `Q_n`.
    MeixnerQ { n: usize, degree: usize, delta: i64 },
    MeixnerQStar { n: usize, degree: usize, delta: i64 },
    /// Adds `delta` to `Gamma_p(n)`.
    MoritaGamma { p: u64, n: u64, delta: i64 },
    /// Adds `delta` to `C(n, k)`.
    Binomial { n: u64, k: u64, delta: i64 },
    /// Adds the constant `delta` to every `beta` in the lifting lemma.
    JunodShift { delta: i64 },
}

/// Targets with one value perturbed.
#[derive(Debug)]
pub struct Mutated<T> {
    pub inner: T,
    pub mutation: Mutation,
}

impl<T: Targets> Mutated<T> {
    pub fn new(inner: T, mutation: Mutation) -> Self {
        Mutated { inner, mutation }
    }
}

fn bump_uni(p: &UniPoly, degree: usize, delta: i64) -> UniPoly {
    let mut coeffs = p.coeffs().to_vec();
    if coeffs.len() <= degree {
        coeffs.resize(degree + 1, BigInt::from(0));
    }
    coeffs[degree] += delta;
    UniPoly::from_coeffs(coeffs)
}

impl<T: Targets> Targets for Mutated<T> {
    fn coefficient(&self, ct: &CycleType) -> Result<BigInt> {
        let c = self.inner.coefficient(ct)?;
        match &self.mutation {
            Mutation::Coefficient { cycle_type, delta } if cycle_type == ct => Ok(c + delta),
            _ => Ok(c),
        }
    }

    fn cycle_indicator(&self, n: usize) -> Arc<MultiPoly> {
        let c = self.inner.cycle_indicator(n);
        match &self.mutation {
            Mutation::CycleIndexTerm { n: target, exponents, delta } if *target == n => {
                let mut bumped = (*c).clone();
                bumped.add_term(Monomial::new(exponents.clone()), &BigInt::from(*delta));
                Arc::new(bumped)
            }
            _ => c,
        }
    }

    fn meixner_q(&self, n: usize) -> Result<Arc<UniPoly>> {
        let q = self.inner.meixner_q(n)?;
        Ok(match &self.mutation {
            Mutation::MeixnerQ { n: target, degree, delta } if *target == n => Arc::new(bump_uni(&q, *degree, *delta)),
            _ => q,
        })
    }

    fn meixner_qstar(&self, n: usize) -> Arc<UniPoly> {
        let q = self.inner.meixner_qstar(n);
        match &self.mutation {
            Mutation::MeixnerQStar { n: target, degree, delta } if *target == n => Arc::new(bump_uni(&q, *degree, *delta)),
            _ => q,
        }
    }

    fn morita_gamma(&self, ctx: &PadicContext, n: u64) -> Result<BigInt> {
        let g = self.inner.morita_gamma(ctx, n)?;
        Ok(match &self.mutation {
            Mutation::MoritaGamma { p, n: target, delta } if *p == ctx.p() && *target == n => g + delta,
            _ => g,
        })
    }

    fn binomial(&self, n: u64, k: u64) -> BigInt {
        let b = self.inner.binomial(n, k);
        match &self.mutation {
            Mutation::Binomial { n: tn, k: tk, delta } if (*tn, *tk) == (n, k) => b + delta,
            _ => b,
        }
    }

    fn junod_beta(&self, alpha: &MultiPoly, gamma: &MultiPoly, m: &BigInt) -> MultiPoly {
        let beta = self.inner.junod_beta(alpha, gamma, m);
        match &self.mutation {
            Mutation::JunodShift { delta } => &beta + &MultiPoly::constant(BigInt::from(*delta)),
            _ => beta,
        }
    }
}

fn parse_list<T: FromStr>(s: &str) -> std::result::Result<Vec<T>, String> {
    s.split(',').map(|x| x.trim().parse().map_err(|_| format!("bad list entry {x:?}"))).collect()
}

fn parse_num<T: FromStr>(s: Option<&str>, what: &str) -> std::result::Result<T, String> {
    let s = s.ok_or_else(|| format!("missing {what}"))?;
    s.trim().parse().map_err(|_| format!("bad {what} {s:?}"))
}

/// Textual form, e.g. `coeff:9:6,0,1,0,0,0,0,0,0:+1` or `gamma:5:6:1`.
///
/// | kind             | fields                  |
/// |------------------|-------------------------|
/// | `coeff`          | `n : m_1,..,m_n : delta` |
/// | `cycle-index`    | `n : e_1,..,e_k : delta` |
/// | `meixner-q`      | `n : degree : delta`     |
/// | `meixner-qstar`  | `n : degree : delta`     |
/// | `gamma`          | `p : n : delta`          |
/// | `binomial`       | `n : k : delta`          |
/// | `junod-shift`    | `delta`                  |
impl FromStr for Mutation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut it = s.split(':');
        let kind = it.next().unwrap_or_default();
        let m = match kind {
            "coeff" => {
                let n: u64 = parse_num(it.next(), "n")?;
                let mults = parse_list(it.next().ok_or("missing cycle type")?)?;
                let cycle_type = CycleType::new(n, mults).map_err(|e| e.to_string())?;
                Mutation::Coefficient { cycle_type, delta: parse_num(it.next(), "delta")? }
            }
            "cycle-index" => Mutation::CycleIndexTerm {
                n: parse_num(it.next(), "n")?,
                exponents: parse_list(it.next().ok_or("missing exponents")?)?,
                delta: parse_num(it.next(), "delta")?,
            },
            "meixner-q" | "meixner-qstar" => {
                let n = parse_num(it.next(), "n")?;
                let degree = parse_num(it.next(), "degree")?;
                let delta = parse_num(it.next(), "delta")?;
                if kind == "meixner-q" {
                    Mutation::MeixnerQ { n, degree, delta }
                } else {
                    Mutation::MeixnerQStar { n, degree, delta }
                }
            }
            "gamma" => Mutation::MoritaGamma {
                p: parse_num(it.next(), "p")?,
                n: parse_num(it.next(), "n")?,
                delta: parse_num(it.next(), "delta")?,
            },
            "binomial" => Mutation::Binomial {
                n: parse_num(it.next(), "n")?,
                k: parse_num(it.next(), "k")?,
                delta: parse_num(it.next(), "delta")?,
            },
            "junod-shift" => Mutation::JunodShift { delta: parse_num(it.next(), "delta")? },
            other => return Err(format!("unknown mutation kind {other:?}")),
        };
        if it.next().is_some() {
            return Err(format!("trailing fields in mutation {s:?}"));
        }
        Ok(m)
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &mut dyn Iterator<Item = String>| v.collect::<Vec<_>>().join(",");
        match self {
            Mutation::Coefficient { cycle_type, delta } => write!(
                f,
                "coeff:{}:{}:{delta}",
                cycle_type.n(),
                join(&mut cycle_type.multiplicities().iter().map(u64::to_string))
            ),
            Mutation::CycleIndexTerm { n, exponents, delta } => {
                write!(f, "cycle-index:{n}:{}:{delta}", join(&mut exponents.iter().map(u32::to_string)))
            }
            Mutation::MeixnerQ { n, degree, delta } => write!(f, "meixner-q:{n}:{degree}:{delta}"),
            Mutation::MeixnerQStar { n, degree, delta } => write!(f, "meixner-qstar:{n}:{degree}:{delta}"),
            Mutation::MoritaGamma { p, n, delta } => write!(f, "gamma:{p}:{n}:{delta}"),
            Mutation::Binomial { n, k, delta } => write!(f, "binomial:{n}:{k}:{delta}"),
            Mutation::JunodShift { delta } => write!(f, "junod-shift:{delta}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_tables_grow() {
        let t = ExactTargets::new();
        assert_eq!(*t.cycle_indicator(3), cycle_index::cycle_indicator(3));
        assert_eq!(*t.cycle_indicator(6), cycle_index::cycle_indicator(6));
        assert_eq!(*t.cycle_indicator(2), cycle_index::cycle_indicator(2));
        assert_eq!(*t.meixner_q(5).unwrap(), meixner::meixner_q(5).unwrap());
        assert_eq!(*t.meixner_q(13).unwrap(), meixner::meixner_q(13).unwrap());
        assert_eq!(*t.meixner_qstar(9), meixner::meixner_qstar(9));
    }

    #[test]
    fn mutation_text_roundtrip() {
        for s in [
            "coeff:3:1,1,0:1",
            "cycle-index:3:0,0,1:-1",
            "meixner-q:9:1:1",
            "meixner-qstar:9:3:2",
            "gamma:5:6:1",
            "binomial:18:6:1",
            "junod-shift:1",
        ] {
            let m: Mutation = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
        assert!("coeff:3:1,0,0:1".parse::<Mutation>().is_err());
        assert!("nope:1".parse::<Mutation>().is_err());
        assert!("gamma:5:6".parse::<Mutation>().is_err());
    }

    #[test]
    fn mutation_touches_one_value() {
        let ct = CycleType::new(3, vec![1, 1, 0]).unwrap();
        let other = CycleType::new(3, vec![3, 0, 0]).unwrap();
        let t = Mutated::new(ExactTargets::new(), Mutation::Coefficient { cycle_type: ct.clone(), delta: 1 });
        assert_eq!(t.coefficient(&ct).unwrap(), BigInt::from(4));
        assert_eq!(t.coefficient(&other).unwrap(), BigInt::from(1));
    }
}
