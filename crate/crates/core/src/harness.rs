//! Parameter sweeps over the checkers.
//!
//! A sweep expands into independent tasks, one per `(checker, p, n, r)`.
//! Tasks run on a thread pool and reports are emitted in task order, so the
//! output does not depend on the thread count.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::mpsc;
use std::time::Instant;

use rayon::prelude::*;

use crate::congruences as cg;
use crate::error::{Error, Result};
use crate::meixner;
use crate::padic::{is_prime, PadicContext};
use crate::report::CongruenceReport;
use crate::targets::Targets;

/// Upper bound on `r + np` for polynomial checkers unless overridden.
pub const DEFAULT_DEGREE_CAP: u64 = 36;
pub const DEFAULT_TRIALS: u64 = 500;
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Checker {
    CarlitzCoeff,
    CarlitzPoly,
    PropCoeff,
    PropPoly,
    Corollary1,
    Remark1,
    JunodLemma,
    GammaIdentity,
    GammaCongruence,
    BinomialLift,
    GammaRatio,
    WilsonSharpness,
    MeixnerQStarQ,
    MeixnerQp,
    Corollary2,
}

impl Checker {
    pub const ALL: [Checker; 15] = [
        Checker::CarlitzCoeff,
        Checker::CarlitzPoly,
        Checker::PropCoeff,
        Checker::PropPoly,
        Checker::Corollary1,
        Checker::Remark1,
        Checker::JunodLemma,
        Checker::GammaIdentity,
        Checker::GammaCongruence,
        Checker::BinomialLift,
        Checker::GammaRatio,
        Checker::WilsonSharpness,
        Checker::MeixnerQStarQ,
        Checker::MeixnerQp,
        Checker::Corollary2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Checker::CarlitzCoeff => "carlitz-coeff",
            Checker::CarlitzPoly => "carlitz-poly",
            Checker::PropCoeff => "prop-coeff",
            Checker::PropPoly => "prop-poly",
            Checker::Corollary1 => "corollary1",
            Checker::Remark1 => "remark1",
            Checker::JunodLemma => "junod-lemma",
            Checker::GammaIdentity => "gamma-identity",
            Checker::GammaCongruence => "gamma-congruence",
            Checker::BinomialLift => "binomial-lift",
            Checker::GammaRatio => "gamma-ratio",
            Checker::WilsonSharpness => "wilson-sharpness",
            Checker::MeixnerQStarQ => "meixner-qstar-q",
            Checker::MeixnerQp => "meixner-qp",
            Checker::Corollary2 => "corollary2",
        }
    }

    /// Whether the checker only makes sense for odd primes.
    pub fn odd_only(self) -> bool {
        matches!(
            self,
            Checker::WilsonSharpness | Checker::MeixnerQStarQ | Checker::MeixnerQp | Checker::Corollary2
        )
    }
}

impl fmt::Display for Checker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Checker {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Checker::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| format!("unknown checker {s:?}"))
    }
}

/// A checker or `all`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    One(Checker),
    All,
}

impl Selection {
    pub fn checkers(self) -> Vec<Checker> {
        match self {
            Selection::One(c) => vec![c],
            Selection::All => Checker::ALL.to_vec(),
        }
    }
}

impl FromStr for Selection {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "all" {
            Ok(Selection::All)
        } else {
            s.parse().map(Selection::One)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepSpec {
    pub selection: Selection,
    pub primes: Vec<u64>,
    pub n_max: u64,
    /// Inclusive range of `r`; defaults to `[0, p-1]`.
    pub r_range: Option<(u64, u64)>,
    pub degree_cap: u64,
    pub seed: u64,
    pub trials: u64,
    pub allow_p2: bool,
    /// Fill `elapsed_ms`. Off by default so reports are reproducible byte for byte.
    pub timing: bool,
}

impl SweepSpec {
    pub fn new(selection: Selection, primes: Vec<u64>, n_max: u64) -> Self {
        SweepSpec {
            selection,
            primes,
            n_max,
            r_range: None,
            degree_cap: DEFAULT_DEGREE_CAP,
            seed: DEFAULT_SEED,
            trials: DEFAULT_TRIALS,
            allow_p2: false,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.primes.is_empty() {
            return Err(Error::Precondition("no primes given".into()));
        }
        for &p in &self.primes {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            if p == 2 && !self.allow_p2 {
                return Err(Error::Precondition("p = 2 needs --allow-p2".into()));
            }
        }
        if self.n_max == 0 {
            return Err(Error::Precondition("n-max must be positive".into()));
        }
        if let Some((a, b)) = self.r_range {
            if a > b {
                return Err(Error::Precondition(format!("empty r range {a}-{b}")));
            }
        }
        Ok(())
    }

    fn primes_sorted(&self) -> Vec<u64> {
        let mut ps = self.primes.clone();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    fn r_values(&self, p: u64, lo: u64) -> impl Iterator<Item = u64> {
        let (a, b) = self.r_range.unwrap_or((0, p - 1));
        a.max(lo)..=b.min(p - 1)
    }

    /// All tasks in emission order.
    pub fn tasks(&self) -> Vec<Task> {
        let mut tasks = Vec::new();
        let cap = self.degree_cap;
        for checker in self.selection.checkers() {
            for p in self.primes_sorted() {
                if p == 2 && checker.odd_only() {
                    continue;
                }
                let task = |n: u64, r: u64| Task { checker, p, n, r };
                let ns = 1..=self.n_max;
                match checker {
                    Checker::CarlitzCoeff | Checker::PropCoeff => {
                        tasks.extend(ns.filter(|n| n * p <= cap).map(|n| task(n, 0)));
                    }
                    Checker::CarlitzPoly | Checker::PropPoly => {
                        for n in ns {
                            tasks.extend(self.r_values(p, 0).filter(|r| r + n * p <= cap).map(|r| task(n, r)));
                        }
                    }
                    Checker::Corollary1 | Checker::Remark1 => {
                        for n in ns {
                            tasks.extend(self.r_values(p, 1).filter(|r| r + n * p <= cap).map(|r| task(n, r)));
                        }
                    }
                    Checker::JunodLemma | Checker::MeixnerQp => {
                        if checker == Checker::JunodLemma || p <= cap {
                            tasks.push(task(0, 0));
                        }
                    }
                    Checker::GammaIdentity => tasks.extend((0..=self.n_max).map(|m| task(m, 0))),
                    Checker::GammaCongruence | Checker::BinomialLift | Checker::GammaRatio => {
                        tasks.extend(ns.map(|n| task(n, 0)));
                    }
                    Checker::WilsonSharpness => tasks.extend(ns.filter(|n| n % p == 0).map(|n| task(n, 0))),
                    Checker::MeixnerQStarQ | Checker::Corollary2 => {
                        tasks.extend(ns.filter(|n| n * p <= cap).map(|n| task(n, 0)));
                    }
                }
            }
        }
        tasks
    }
}

/// One unit of work. `n` doubles as `m` for the Gamma checkers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Task {
    pub checker: Checker,
    pub p: u64,
    pub n: u64,
    pub r: u64,
}

pub fn run_task(task: &Task, spec: &SweepSpec, targets: &dyn Targets) -> Result<CongruenceReport> {
    let start = Instant::now();
    let ctx = PadicContext::new(task.p)?;
    let (n, r) = (task.n, task.r);
    let t = targets;
    let mut report = match task.checker {
        Checker::CarlitzCoeff => cg::check_carlitz_coeff(n, &ctx, t),
        Checker::CarlitzPoly => cg::check_carlitz_poly(r, n, &ctx, t),
        Checker::PropCoeff => cg::check_prop_coeff(n, &ctx, t),
        Checker::PropPoly => cg::check_prop_poly(r, n, &ctx, t),
        Checker::Corollary1 => cg::check_corollary1(r, n, &ctx, t),
        Checker::Remark1 => cg::check_remark1(r, n, &ctx, t),
        Checker::JunodLemma => cg::check_junod_lemma(spec.trials, spec.seed, &ctx, t),
        Checker::GammaIdentity => cg::check_gamma_identity(n, &ctx, t),
        Checker::GammaCongruence => cg::check_gamma_congruence(n, &ctx, t),
        Checker::BinomialLift => cg::check_binomial_lift(n, &ctx, t),
        Checker::GammaRatio => cg::check_formula_gamma_ratio(n, &ctx, t),
        Checker::WilsonSharpness => cg::check_wilson_sharpness(n, &ctx, t),
        Checker::MeixnerQStarQ => meixner::check_junod_qstar_q(n, &ctx, t),
        Checker::MeixnerQp => meixner::check_junod_qp(&ctx, t),
        Checker::Corollary2 => meixner::check_corollary2(n, &ctx, t),
    }?;
    report.advisory = task.p == 2;
    if spec.timing {
        report.elapsed_ms = start.elapsed().as_millis() as u64;
    }
    Ok(report)
}

/// Totals over a finished sweep.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub reports: usize,
    pub instances: u64,
    pub violations: u64,
    pub failures: usize,
    /// Violations recorded in advisory (p = 2) reports.
    pub advisory_violations: u64,
    pub by_checker: BTreeMap<String, u64>,
}

impl SweepSummary {
    fn add(&mut self, r: &CongruenceReport) {
        self.reports += 1;
        self.instances += r.instances;
        *self.by_checker.entry(r.checker.clone()).or_default() += r.instances;
        if r.advisory {
            self.advisory_violations += r.violations.len() as u64;
        } else {
            self.violations += r.violations.len() as u64;
        }
        if r.is_failure() {
            self.failures += 1;
        }
    }

    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.failures == 0 {
            0
        } else {
            1
        }
    }
}

/// Runs every task of `spec` on `threads` workers and hands reports to `sink`
/// in task order.
pub fn run_sweep<F>(spec: &SweepSpec, targets: &dyn Targets, threads: usize, mut sink: F) -> Result<SweepSummary>
where
    F: FnMut(&CongruenceReport) -> std::io::Result<()>,
{
    spec.validate()?;
    let tasks = spec.tasks();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    let (tx, rx) = mpsc::channel::<(usize, Result<CongruenceReport>)>();
    let mut summary = SweepSummary::default();
    let mut outcome = Ok(());
    pool.in_place_scope(|scope| {
        let tasks = &tasks;
        scope.spawn(move |_| {
            tasks.par_iter().enumerate().for_each_with(tx, |tx, (i, task)| {
                // The receiver only hangs up after an error; remaining results are dropped.
                let _ = tx.send((i, run_task(task, spec, targets)));
            });
        });
        let mut pending = BTreeMap::new();
        let mut next = 0;
        for (i, result) in rx.iter() {
            pending.insert(i, result);
            while let Some(result) = pending.remove(&next) {
                next += 1;
                if outcome.is_err() {
                    continue;
                }
                outcome = result.and_then(|report| {
                    summary.add(&report);
                    sink(&report).map_err(|e| Error::Precondition(format!("writing report: {e}")))
                });
            }
        }
    });
    outcome.map(|()| summary)
}

/// Collects the reports of a sweep in memory.
pub fn collect_sweep(spec: &SweepSpec, targets: &dyn Targets, threads: usize) -> Result<(Vec<CongruenceReport>, SweepSummary)> {
    let mut reports = Vec::new();
    let summary = run_sweep(spec, targets, threads, |r| {
        reports.push(r.clone());
        Ok(())
    })?;
    Ok((reports, summary))
}
