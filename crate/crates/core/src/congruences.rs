//! Checkers for the cycle-indicator congruences.
//!
//! Throughout, `p` is the context prime and
//!
//! ```text
//! c_n(m) = n! / prod_i i^{m_i} m_i!          n* = n/2 if n is even, else n
//! ```
//!
//! Coefficient checkers take class sizes from [`Targets::coefficient`], which
//! defaults to the direct formula, so they do not depend on the polynomial
//! builder. Polynomial checkers compare coefficientwise modulo `m·Z_p`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cycle_index::{enumerate_cycle_types, CycleType};
use crate::error::{Error, Result};
use crate::padic::{PadicContext, Valuation};
use crate::poly::{Congruent, Monomial, MultiPoly};
use crate::report::{CongruenceReport, Relation, Violation};
use crate::targets::Targets;

/// `n*`: `n/2` for even `n`, `n` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NStar {
    n: u64,
    value: u64,
}

impl NStar {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("n* needs n >= 1".into()));
        }
        let value = if n % 2 == 0 { n / 2 } else { n };
        Ok(NStar { n, value })
    }

    pub fn n(self) -> u64 {
        self.n
    }

    pub fn value(self) -> u64 {
        self.value
    }

    /// The modulus `n*·p`.
    pub fn times(self, p: u64) -> BigInt {
        BigInt::from(self.value) * p
    }
}

fn signed(negative: bool, x: BigInt) -> BigInt {
    if negative {
        -x
    } else {
        x
    }
}

fn mults(ct: &CycleType) -> Vec<u64> {
    ct.multiplicities().to_vec()
}

/// Expected residue of `c_np(m)`: `(-1)^{e} C(n, m_p)` when only 1- and
/// p-cycles occur, else 0. `e` is `m_p` or `p·m_p` depending on the caller.
fn expected_class_size(ct: &CycleType, n: u64, p: u64, sign_exponent: u64, targets: &dyn Targets) -> BigInt {
    if ct.cycles_outside(p) == 0 {
        signed(sign_exponent % 2 == 1, targets.binomial(n, ct.get(p)))
    } else {
        BigInt::zero()
    }
}

/// One cycle type of `np` against the mod-`p` class-size congruence.
pub fn carlitz_coeff_instance(ct: &CycleType, n: u64, ctx: &PadicContext, targets: &dyn Targets) -> Result<Option<Violation>> {
    let p = ctx.p();
    let expected = expected_class_size(ct, n, p, ct.get(p), targets);
    let diff = targets.coefficient(ct)? - expected;
    Ok(Violation::modulo(|| format!("c_{}{ct}", ct.n()), || mults(ct), &diff, &BigInt::from(p), ctx))
}

/// One cycle type of `np` against the mod-`n*p` class-size congruence.
pub fn prop_coeff_instance(ct: &CycleType, n: u64, ctx: &PadicContext, targets: &dyn Targets) -> Result<Option<Violation>> {
    let p = ctx.p();
    let modulus = NStar::new(n)?.times(p);
    let expected = expected_class_size(ct, n, p, p * ct.get(p), targets);
    let diff = targets.coefficient(ct)? - expected;
    Ok(Violation::modulo(|| format!("c_{}{ct}", ct.n()), || mults(ct), &diff, &modulus, ctx))
}

pub fn check_carlitz_coeff(n: u64, ctx: &PadicContext, targets: &dyn Targets) -> Result<CongruenceReport> {
    let mut report = CongruenceReport::new("carlitz-coeff").param("p", ctx.p()).param("n", n);
    // Instances that meet the stronger mod n*p congruence but not this one.
    // p divides n*p, so this must stay 0.
    let mut ladder_breaks = 0u64;
    for ct in enumerate_cycle_types(n * ctx.p()) {
        let weak = carlitz_coeff_instance(&ct, n, ctx, targets)?;
        if weak.is_some() && prop_coeff_instance(&ct, n, ctx, targets)?.is_none() {
            ladder_breaks += 1;
        }
        report.record(weak);
    }
    report.observe("ladder_breaks", ladder_breaks);
    Ok(report)
}

pub fn check_prop_coeff(n: u64, ctx: &PadicContext, targets: &dyn Targets) -> Result<CongruenceReport> {
    let nstar = NStar::new(n)?;
    let mut report = CongruenceReport::new("prop-coeff").param("p", ctx.p()).param("n", n);
    report.observe("modulus", nstar.times(ctx.p()).to_string());
    for ct in enumerate_cycle_types(n * ctx.p()) {
        report.record(prop_coeff_instance(&ct, n, ctx, targets)?);
    }
    Ok(report)
}

/// `X_1^p + sign·X_p`.
fn two_term(p: u64, sign: i64) -> MultiPoly {
    let p = p as usize;
    &MultiPoly::monomial(Monomial::var_pow(1, p as u32), BigInt::one())
        + &MultiPoly::monomial(Monomial::var_pow(p, 1), BigInt::from(sign))
}

fn record_poly(report: &mut CongruenceReport, label: &str, a: &MultiPoly, b: &MultiPoly, m: &BigInt, ctx: &PadicContext) -> Result<()> {
    let check = a.congruence(b, m, ctx)?;
    report.instances += check.compared as u64;
    report.violations.extend(check.witness.map(|w| Violation::from_term(label, w, m, ctx)));
    Ok(())
}

/// `(X_1^p - X_p)^n · C_r`.
pub fn carlitz_rhs(r: usize, n: u64, p: u64, targets: &dyn Targets) -> MultiPoly {
    &two_term(p, -1).pow(n) * &*targets.cycle_indicator(r)
}

/// `C_{r+np} ≡ (X_1^p - X_p)^n C_r (mod p)`.
pub fn check_carlitz_poly(r: u64, n: u64, ctx: &PadicContext, targets: &dyn Targets) -> Result<CongruenceReport> {
    let p = ctx.p();
    let deg = (r + n * p) as usize;
    let mut report = CongruenceReport::new("carlitz-poly").param("p", p).param("n", n).param("r", r);
    let lhs = targets.cycle_indicator(deg);
    let rhs = carlitz_rhs(r as usize, n, p, targets);
    record_poly(&mut report, &format!("C_{deg} - (X1^{p} - X{p})^{n} C_{r}"), &lhs, &rhs, &BigInt::from(p), ctx)?;
    Ok(report)
}

/// `C_{r+np} ≡ (X_1^p - X_p)^n C_r (mod n*p)`, and the same with
/// `(X_1^p + (-1)^p X_p)^n`.
pub fn check_prop_poly(r: u64, n: u64, ctx: &PadicContext, targets: &dyn Targets) -> Result<CongruenceReport> {
    let p = ctx.p();
    let modulus = NStar::new(n)?.times(p);
    let deg = (r + n * p) as usize;
    let mut report = CongruenceReport::new("prop-poly").param("p", p).param("n", n).param("r", r);
    report.observe("modulus", modulus.to_string());
    let lhs = targets.cycle_indicator(deg);
    let cr = targets.cycle_indicator(r as usize);
    let rhs = &two_term(p, -1).pow(n) * &*cr;
    record_poly(&mut report, &format!("C_{deg} - (X1^{p} - X{p})^{n} C_{r}"), &lhs, &rhs, &modulus, ctx)?;
    let alt_sign = if p % 2 == 0 { 1 } else { -1 };
    let alt = &two_term(p, alt_sign).pow(n) * &*cr;
    record_poly(&mut report, &format!("C_{deg} - (X1^{p} + (-1)^{p} X{p})^{n} C_{r}"), &lhs, &alt, &modulus, ctx)?;
    Ok(report)
}

fn require_small_r(r: u64, ctx: &PadicContext) -> Result<()> {
    if r < 1 || r >= ctx.p() {
        return Err(Error::Precondition(format!("r = {r} must lie in [1, {}]", ctx.p() - 1)));
    }
    Ok(())
}

/// Class sizes of `r + np` for `1 <= r <= p-1`, reduced to class sizes of `r`.
///
/// Branch (a), `m_1 >= p(n - m_p) >= 0`: `c_{r+np}(m) ≡ (-1)^{p m_p} C(n, m_p)
/// c_r(m_1 + p m_p - np, m_2, ..., m_r)`. Branch (b): `c_{r+np}(m) ≡ 0`.
/// When the reduced tuple is not a cycle type of `r`, its class size is 0;
/// such instances are counted in the `convention_load_bearing` observation.
pub fn check_corollary1(r: u64, n: u64, ctx: &PadicContext, targets: &dyn Targets) -> Result<CongruenceReport> {
    require_small_r(r, ctx)?;
    let p = ctx.p();
    let modulus = NStar::new(n)?.times(p);
    let total = r + n * p;
    let mut report = CongruenceReport::new("corollary1").param("p", p).param("n", n).param("r", r);
    let mut load_bearing = 0u64;
    let mut branch_a = 0u64;
    for ct in enumerate_cycle_types(total) {
        let (m1, mp) = (ct.get(1), ct.get(p));
        let expected = if mp <= n && m1 >= p * (n - mp) {
            branch_a += 1;
            let mut reduced = vec![m1 + p * mp - n * p];
            reduced.extend((2..=r).map(|i| ct.get(i)));
            match CycleType::new(r, reduced) {
                Ok(small) => signed(p * mp % 2 == 1, targets.binomial(n, mp) * targets.coefficient(&small)?),
                Err(_) => {
                    load_bearing += 1;
                    BigInt::zero()
                }
            }
        } else {
            BigInt::zero()
        };
        let diff = targets.coefficient(&ct)? - expected;
        report.record(Violation::modulo(|| format!("c_{total}{ct}"), || mults(&ct), &diff, &modulus, ctx));
    }
    report.observe("branch_a_instances", branch_a);
    report.observe("convention_load_bearing", load_bearing);
    Ok(report)
}

/// `c_{r+np}(m_1, 0, .., m_p, ..) ≡ c_{np}(m_1 - r, 0, .., m_p, ..) (mod n*p)`
/// for every `m_1 + p m_p = r + np` with `m_p <= n`.
pub fn check_remark1(r: u64, n: u64, ctx: &PadicContext, targets: &dyn Targets) -> Result<CongruenceReport> {
    require_small_r(r, ctx)?;
    let p = ctx.p();
    let modulus = NStar::new(n)?.times(p);
    let mut report = CongruenceReport::new("remark1").param("p", p).param("n", n).param("r", r);
    for mp in 0..=n {
        let m1 = r + p * (n - mp);
        let big = CycleType::two_part(r + n * p, p, m1, mp)?;
        let small = CycleType::two_part(n * p, p, m1 - r, mp)?;
        let diff = targets.coefficient(&big)? - targets.coefficient(&small)?;
        report.record(Violation::modulo(
            || format!("c_{}{big} - c_{}{small}", r + n * p, n * p),
            || vec![m1, mp],
            &diff,
            &modulus,
            ctx,
        ));
    }
    Ok(report)
}

/// `(mp)! = (-1)^{pm+1} Gamma_p(pm+1) m! p^m` as an exact identity.
pub fn check_gamma_identity(m: u64, ctx: &PadicContext, targets: &dyn Targets) -> Result<CongruenceReport> {
    let mut report = CongruenceReport::new("gamma-identity").param("p", ctx.p()).param("m", m);
    let gamma = targets.morita_gamma(ctx, ctx.p() * m + 1)?;
    let r = ctx.gamma_identity_from(m, &gamma);
    report.record(Violation::identity(|| format!("({}*{m})! identity", ctx.p()), || vec![m], &r.difference, ctx));
    Ok(report)
}

/// `Gamma_p(pm+1) + 1 ∈ (pm/2) Z_p`, read as valuation `>= vp(pm) - vp(2)`.
pub fn check_gamma_congruence(m: u64, ctx: &PadicContext, targets: &dyn Targets) -> Result<CongruenceReport> {
    if m < 1 {
        return Err(Error::Precondition("gamma congruence needs m >= 1".into()));
    }
    let mut report = CongruenceReport::new("gamma-congruence").param("p", ctx.p()).param("m", m);
    if !ctx.is_odd() {
        report.observe("interpretation", "unverified for p = 2");
    }
    let gamma = targets.morita_gamma(ctx, ctx.p() * m + 1)?;
    let r = ctx.gamma_congruence_from(m, &gamma);
    report.record(Violation::check(
        || format!("Gamma_{}({}) + 1", ctx.p(), ctx.p() * m + 1),
        || vec![m],
        &r.difference,
        None,
        r.required,
        Relation::AtLeast,
        ctx,
    ));
    Ok(report)
}

/// `C(np, pm) ≡ C(n, m)` and `pm C(n, m) ≡ 0`, both modulo `np`, for all `0 <= m <= n`.
pub fn check_binomial_lift(n: u64, ctx: &PadicContext, targets: &dyn Targets) -> Result<CongruenceReport> {
    let p = ctx.p();
    let mut report = CongruenceReport::new("binomial-lift").param("p", p).param("n", n);
    for m in 0..=n {
        let upper = targets.binomial(n * p, m * p);
        let lower = targets.binomial(n, m);
        let r = ctx.binomial_lift_from(n, m, &upper, &lower);
        report.record(Violation::check(
            || format!("C({}, {}) vs C({n}, {m})", n * p, m * p),
            || vec![n, m],
            &r.difference,
            Some(&BigInt::from(n * p)),
            r.required,
            Relation::AtLeast,
            ctx,
        ));
    }
    Ok(report)
}

/// For `m_1 + p m_p = np`: `c_np(m) = (-1)^{p m_p} C(n, m_p) Gamma_p(np+1)/Gamma_p(m_1+1)`
/// exactly, and `vp(c_np(m)) = vp(C(n, m_p))`.
pub fn check_formula_gamma_ratio(n: u64, ctx: &PadicContext, targets: &dyn Targets) -> Result<CongruenceReport> {
    let p = ctx.p();
    let np = n * p;
    let mut report = CongruenceReport::new("gamma-ratio").param("p", p).param("n", n);
    for mp in 0..=n {
        let m1 = np - p * mp;
        let ct = CycleType::two_part(np, p, m1, mp)?;
        let c = targets.coefficient(&ct)?;
        let ratio = ctx.gamma_ratio(m1 + 1, np + 1)?;
        let binom = targets.binomial(n, mp);
        let rhs = signed(p * mp % 2 == 1, &binom * &ratio);
        report.record(Violation::identity(|| format!("c_{np}{ct} gamma-ratio formula"), || mults(&ct), &(&c - &rhs), ctx));
        // The product form of the ratio must agree with the Gamma values.
        let gamma_gap = targets.morita_gamma(ctx, np + 1)? - &ratio * targets.morita_gamma(ctx, m1 + 1)?;
        report.record(Violation::identity(
            || format!("Gamma_{p}({}) - ratio * Gamma_{p}({})", np + 1, m1 + 1),
            || vec![np + 1, m1 + 1],
            &gamma_gap,
            ctx,
        ));
        let (vc, vb) = (ctx.vp(&c), ctx.vp(&binom));
        report.record(Violation::check(
            || format!("vp(c_{np}{ct}) = vp(C({n},{mp}))"),
            || mults(&ct),
            &c,
            None,
            vb,
            Relation::Exactly,
            ctx,
        ));
        debug_assert!(vc != Valuation::Infinite);
    }
    Ok(report)
}

/// Sharpness at `m_p = 1`: `D = c_np(np-p, 0, .., 1, ..) - (-1)^p n` has
/// valuation exactly `vp(n) + 1` unless `p` is a Wilson prime, in which case
/// it is at least `vp(n) + 2`.
pub fn check_wilson_sharpness(n: u64, ctx: &PadicContext, targets: &dyn Targets) -> Result<CongruenceReport> {
    let p = ctx.p();
    if !ctx.is_odd() || n % p != 0 || n == 0 {
        return Err(Error::Precondition(format!("sharpness needs odd p and n in pZ, got p={p}, n={n}")));
    }
    let ct = CycleType::two_part(n * p, p, n * p - p, 1)?;
    let d = targets.coefficient(&ct)? - signed(p % 2 == 1, BigInt::from(n));
    let vn = ctx.vp_u64(n).finite().unwrap_or(0);
    let wilson = ctx.is_wilson_prime()?;
    let (required, relation) = if wilson {
        (Valuation::Finite(vn + 2), Relation::AtLeast)
    } else {
        (Valuation::Finite(vn + 1), Relation::Exactly)
    };
    let mut report = CongruenceReport::new("wilson-sharpness").param("p", p).param("n", n);
    report.observe("wilson_prime", wilson);
    report.observe("vp_difference", serde_json::to_value(ctx.vp(&d)).expect("valuation serializes"));
    report.observe("vp_n", vn);
    report.record(Violation::check(|| format!("c_{}{ct} - (-1)^{p}*{n}", n * p), || mults(&ct), &d, None, required, relation, ctx));
    Ok(report)
}

fn random_poly(rng: &mut ChaCha8Rng) -> MultiPoly {
    let terms = rng.gen_range(1..=3);
    MultiPoly::from_terms((0..terms).map(|_| {
        let a = rng.gen_range(0..=2u32);
        let b = rng.gen_range(0..=2 - a);
        (Monomial::new(vec![a, b]), BigInt::from(rng.gen_range(-5..=5i64)))
    }))
}

/// Randomized check of the power-lifting lemma in `Z[X_1, X_2]`:
/// if `p | m` and `alpha ≡ beta (mod m)` then `alpha^n ≡ beta^n (mod mn)`.
pub fn check_junod_lemma(trials: u64, seed: u64, ctx: &PadicContext, targets: &dyn Targets) -> Result<CongruenceReport> {
    let p = ctx.p();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CongruenceReport::new("junod-lemma").param("p", p).param("trials", trials);
    report.seed = Some(seed);
    for trial in 0..trials {
        let alpha = random_poly(&mut rng);
        let gamma = random_poly(&mut rng);
        let k = rng.gen_range(1..=20u64);
        let n = rng.gen_range(1..=12u64);
        let m = BigInt::from(p * k);
        let beta = targets.junod_beta(&alpha, &gamma, &m);
        let modulus = &m * n;
        let check = alpha.pow(n).congruence(&beta.pow(n), &modulus, ctx)?;
        report.instances += 1;
        if let Some(w) = check.witness {
            let label = format!("trial {trial}: alpha = {alpha}, gamma = {gamma}, m = {m}, n = {n}");
            report.violations.push(Violation::from_term(&label, w, &modulus, ctx));
        }
    }
    Ok(report)
}
