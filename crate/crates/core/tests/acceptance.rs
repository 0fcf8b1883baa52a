//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::collections::{BTreeMap, HashMap};
use std::process::ExitCode;

use cyclopadic::congruences::check_wilson_sharpness;
use cyclopadic::cycle_index::{
    cycle_indicator_direct, cycle_indicator_via_determinant, cycle_indicator_via_egf, cycle_indicators,
};
use cyclopadic::harness::{collect_sweep, Checker, Selection, SweepSpec, SweepSummary};
use cyclopadic::meixner::{meixner_q_table, meixner_qstar, meixner_qstar_by_substitution, meixner_qstar_via_series};
use cyclopadic::padic::factorial;
use cyclopadic::targets::{ExactTargets, Mutated, Mutation, Targets};
use cyclopadic::{coefficient, CongruenceReport, CycleType, PadicContext, UniPoly};
use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::One;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn threads() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn spec(checker: Checker, primes: &[u64], n_max: u64, cap: u64) -> SweepSpec {
    let mut s = SweepSpec::new(Selection::One(checker), primes.to_vec(), n_max);
    s.degree_cap = cap;
    s
}

fn sweep(targets: &dyn Targets, s: &SweepSpec) -> Result<(Vec<CongruenceReport>, SweepSummary), String> {
    collect_sweep(s, targets, threads()).map_err(|e| format!("{}: {e}", s.selection.checkers()[0]))
}

fn clean(targets: &dyn Targets, s: &SweepSpec) -> Result<(Vec<CongruenceReport>, SweepSummary), String> {
    let (reports, summary) = sweep(targets, s)?;
    if let Some(bad) = reports.iter().find(|r| !r.passed()) {
        return Err(bad.to_string());
    }
    Ok((reports, summary))
}

fn obs(r: &CongruenceReport, key: &str) -> u64 {
    r.observations.get(key).and_then(|v| v.as_u64()).unwrap_or(0)
}

fn proposition_sweep(t: &ExactTargets) -> Outcome {
    let (_, s) = clean(t, &spec(Checker::PropPoly, &[3, 5, 7], 36, 36))?;
    Ok(format!("{} tuples, {} coefficients compared", s.reports, s.instances))
}

fn proposition_coefficients(t: &ExactTargets) -> Outcome {
    let (_, s) = clean(t, &spec(Checker::PropCoeff, &[3, 5, 7], 36, 36))?;
    Ok(format!("{} cycle types over {} (p, n)", s.instances, s.reports))
}

fn carlitz_baseline(t: &ExactTargets) -> Outcome {
    let (coeff, cs) = clean(t, &spec(Checker::CarlitzCoeff, &[3, 5, 7], 36, 36))?;
    let (poly, ps) = clean(t, &spec(Checker::CarlitzPoly, &[3, 5, 7], 36, 36))?;
    let breaks: u64 = coeff.iter().map(|r| obs(r, "ladder_breaks")).sum();
    ensure(breaks == 0, || format!("{breaks} instances pass mod n*p but fail mod p"))?;
    let (prop, _) = sweep(t, &spec(Checker::PropPoly, &[3, 5, 7], 36, 36))?;
    for (a, b) in prop.iter().zip(&poly) {
        ensure(a.params == b.params, || "grids differ".into())?;
        ensure(!a.passed() || b.passed(), || format!("implication fails at {:?}", a.params))?;
        if a.params["n"] == 1 {
            ensure(a.passed() == b.passed(), || format!("n = 1 outcomes differ at {:?}", a.params))?;
        }
    }
    Ok(format!("{} coefficient and {} polynomial instances, implication holds", cs.instances, ps.instances))
}

fn corollary1_and_remark(t: &ExactTargets) -> Outcome {
    let (c1, s1) = clean(t, &spec(Checker::Corollary1, &[3, 5], 32, 32))?;
    let (_, s2) = clean(t, &spec(Checker::Remark1, &[3, 5], 32, 32))?;
    let branch_a: u64 = c1.iter().map(|r| obs(r, "branch_a_instances")).sum();
    let load: u64 = c1.iter().map(|r| obs(r, "convention_load_bearing")).sum();
    ensure(branch_a > 0 && branch_a < s1.instances, || "a branch was never exercised".into())?;
    Ok(format!(
        "{} instances ({branch_a} in branch a, {load} relying on the empty-class convention), remark {} instances",
        s1.instances, s2.instances
    ))
}

fn meixner_congruences(t: &ExactTargets) -> Outcome {
    let primes = [3, 5, 7, 11];
    let (_, a) = clean(t, &spec(Checker::Corollary2, &primes, 66, 66))?;
    let (_, b) = clean(t, &spec(Checker::MeixnerQStarQ, &primes, 66, 66))?;
    let (_, c) = clean(t, &spec(Checker::MeixnerQp, &primes, 66, 66))?;
    Ok(format!("{} + {} + {} coefficient comparisons up to degree 66", a.instances, b.instances, c.instances))
}

fn gamma_identities(t: &ExactTargets) -> Outcome {
    let mut total = 0;
    total += clean(t, &spec(Checker::GammaIdentity, &[3, 5, 7], 12, 0))?.1.instances;
    for p in [3u64, 5, 7, 11, 13] {
        total += clean(t, &spec(Checker::GammaCongruence, &[p], 200 / p, 0))?.1.instances;
    }
    total += clean(t, &spec(Checker::BinomialLift, &[3, 5, 7], 200, 0))?.1.instances;
    total += clean(t, &spec(Checker::GammaRatio, &[3, 5, 7], 12, 0))?.1.instances;
    Ok(format!("{total} instances"))
}

fn sharpness(t: &ExactTargets) -> Outcome {
    let three = PadicContext::new(3).unwrap();
    for n in [3u64, 9] {
        let r = check_wilson_sharpness(n, &three, t).map_err(|e| e.to_string())?;
        ensure(r.passed(), || r.to_string())?;
        let ct = CycleType::two_part(n * 3, 3, n * 3 - 3, 1).unwrap();
        let d = coefficient(&ct).unwrap() + BigInt::from(n);
        let np2 = BigInt::from(n * 9);
        ensure(!three.in_mzp(&d, &np2).unwrap(), || format!("n = {n}: congruence holds mod np^2"))?;
    }
    for p in [5u64, 13] {
        let ctx = PadicContext::new(p).unwrap();
        ensure(ctx.is_wilson_prime().unwrap(), || format!("{p} not detected as a Wilson prime"))?;
        let r = check_wilson_sharpness(p, &ctx, t).map_err(|e| e.to_string())?;
        ensure(r.passed(), || r.to_string())?;
    }
    let seven = PadicContext::new(7).unwrap();
    ensure(!seven.is_wilson_prime().unwrap(), || "7 detected as a Wilson prime".into())?;
    Ok("p = 3 exact at n = 3, 9; p = 5, 13 gain a factor of p".into())
}

fn census(n: usize) -> HashMap<Vec<u64>, u64> {
    let mut counts = HashMap::new();
    for perm in (0..n).permutations(n) {
        let mut seen = vec![false; n];
        let mut m = vec![0u64; n];
        for start in 0..n {
            let (mut len, mut j) = (0, start);
            while !seen[j] {
                seen[j] = true;
                j = perm[j];
                len += 1;
            }
            if len > 0 {
                m[len - 1] += 1;
            }
        }
        *counts.entry(m).or_insert(0) += 1;
    }
    counts
}

fn cross_routes() -> Outcome {
    let table = cycle_indicators(25);
    for (n, c) in table.iter().enumerate() {
        let direct = cycle_indicator_direct(n).map_err(|e| e.to_string())?;
        ensure(*c == direct, || format!("recurrence != direct at n = {n}"))?;
        if n <= 8 {
            let det = cycle_indicator_via_determinant(n).map_err(|e| e.to_string())?;
            ensure(*c == det, || format!("recurrence != determinant at n = {n}"))?;
        }
        if n <= 12 {
            let egf = cycle_indicator_via_egf(n).map_err(|e| e.to_string())?;
            ensure(*c == egf, || format!("recurrence != EGF at n = {n}"))?;
        }
        let sum: BigInt = c.terms().map(|(_, k)| k.clone()).sum();
        ensure(sum == factorial(n as u64), || format!("coefficients of C_{n} do not sum to n!"))?;
        if n <= 15 {
            let images: BTreeMap<usize, UniPoly> = (1..=n.max(1)).map(|i| (i, UniPoly::x())).collect();
            let rising = (0..n).fold(UniPoly::one(), |acc, k| {
                &acc * &UniPoly::from_coeffs(vec![BigInt::from(k), BigInt::one()])
            });
            let got = c.substitute_univariate(&images).map_err(|e| e.to_string())?;
            ensure(got == rising, || format!("C_{n}(x, .., x) is not the rising factorial"))?;
        }
    }
    for n in 1..=7 {
        for (m, count) in census(n) {
            let ct = CycleType::new(n as u64, m).unwrap();
            ensure(coefficient(&ct).unwrap() == BigInt::from(count), || format!("census mismatch at {ct}"))?;
        }
    }
    Ok("recurrence, direct, determinant, EGF, n! sum, rising factorial, census".into())
}

fn meixner_routes() -> Outcome {
    let qs = meixner_q_table(24).map_err(|e| e.to_string())?;
    for n in 0..=24 {
        let star = meixner_qstar(n);
        let sub = meixner_qstar_by_substitution(n).map_err(|e| e.to_string())?;
        let series = meixner_qstar_via_series(n).map_err(|e| e.to_string())?;
        ensure(star == sub && sub == series, || format!("Q*_{n} routes disagree"))?;
        for q in [&qs[n], &star] {
            ensure(q.degree() == Some(n) && q.leading_coeff().is_some_and(|c| c.is_one()), || {
                format!("degree {n} polynomial not monic")
            })?;
        }
    }
    Ok("Q* by substitution = recurrence = series, Q integral and monic, n <= 24; Q has no fast path".into())
}

fn junod_lemma(t: &ExactTargets) -> Outcome {
    let s = spec(Checker::JunodLemma, &[3, 5], 1, 0);
    let (first, summary) = clean(t, &s)?;
    let (again, _) = sweep(t, &s)?;
    ensure(first == again, || "rerun with the same seed differs".into())?;
    ensure(first.iter().all(|r| r.seed == Some(s.seed)), || "seed not recorded".into())?;
    Ok(format!("{} trials, seed {}", summary.instances, s.seed))
}

struct MutationCase {
    checker: Checker,
    p: u64,
    n: u64,
    r: Option<u64>,
    mutation: &'static str,
    witness: Vec<u64>,
}

fn case(checker: Checker, p: u64, n: u64, r: Option<u64>, mutation: &'static str, witness: &[u64]) -> MutationCase {
    MutationCase { checker, p, n, r, mutation, witness: witness.to_vec() }
}

fn mutation_harness() -> Outcome {
    use Checker::*;
    let nine = [6, 0, 1, 0, 0, 0, 0, 0, 0];
    let cases = [
        case(CarlitzCoeff, 3, 3, None, "coeff:9:6,0,1,0,0,0,0,0,0:1", &nine),
        case(CarlitzPoly, 3, 2, Some(0), "cycle-index:6:0,3:1", &[0, 3]),
        case(PropCoeff, 3, 3, None, "coeff:9:6,0,1,0,0,0,0,0,0:1", &nine),
        case(PropPoly, 3, 3, Some(0), "cycle-index:9:0,0,3:1", &[0, 0, 3]),
        case(Corollary1, 3, 1, Some(1), "coeff:4:1,0,1,0:1", &[1, 0, 1, 0]),
        case(Remark1, 3, 2, Some(1), "coeff:7:4,0,1,0,0,0,0:1", &[4, 1]),
        case(JunodLemma, 3, 1, None, "junod-shift:1", &[]),
        case(GammaIdentity, 3, 2, None, "gamma:3:7:1", &[2]),
        case(GammaCongruence, 5, 2, None, "gamma:5:11:1", &[2]),
        case(BinomialLift, 3, 2, None, "binomial:6:3:1", &[2, 1]),
        case(GammaRatio, 3, 2, None, "coeff:6:3,0,1,0,0,0:1", &[3, 0, 1, 0, 0, 0]),
        case(WilsonSharpness, 3, 3, None, "coeff:9:6,0,1,0,0,0,0,0,0:18", &nine),
        case(MeixnerQStarQ, 3, 1, None, "meixner-qstar:3:1:1", &[1]),
        case(MeixnerQp, 5, 1, None, "meixner-q:5:1:1", &[1]),
        case(Corollary2, 3, 3, None, "meixner-q:9:3:1", &[3]),
    ];
    ensure(cases.len() == Checker::ALL.len(), || "a checker has no mutation case".into())?;
    for c in cases {
        let mut s = spec(c.checker, &[c.p], c.n, 66);
        s.r_range = c.r.map(|r| (r, r));
        s.trials = 20;
        let mutation: Mutation = c.mutation.parse()?;
        let clean_run = sweep(&ExactTargets::new(), &s)?.1;
        ensure(clean_run.exit_code() == 0, || format!("{}: unmutated run fails", c.checker))?;
        let (reports, summary) = sweep(&Mutated::new(ExactTargets::new(), mutation), &s)?;
        ensure(summary.exit_code() == 1, || format!("{}: {} not detected", c.checker, c.mutation))?;
        let first = reports.iter().flat_map(|r| &r.violations).next().expect("a violation");
        if c.checker != JunodLemma {
            ensure(first.witness == c.witness, || {
                format!("{}: witness {:?}, expected {:?}", c.checker, first.witness, c.witness)
            })?;
        }
        ensure(!first.relation.holds(first.observed_valuation, first.required_valuation), || {
            format!("{}: witness does not fail", c.checker)
        })?;
    }
    Ok(format!("{} checkers, each caught with the expected witness", Checker::ALL.len()))
}

fn determinism() -> Outcome {
    let mut s = SweepSpec::new(Selection::All, vec![3, 5, 7], 4);
    s.degree_cap = 24;
    s.trials = 100;
    let render = |threads: usize| -> Result<String, String> {
        let (reports, _) = collect_sweep(&s, &ExactTargets::new(), threads).map_err(|e| e.to_string())?;
        Ok(reports.iter().map(|r| serde_json::to_string(r).unwrap() + "\n").collect())
    };
    let one = render(1)?;
    let many = render(8)?;
    ensure(one == many, || "1-thread and 8-thread output differ".into())?;
    Ok(format!("{} bytes identical across 1 and 8 threads", one.len()))
}

fn main() -> ExitCode {
    let t = ExactTargets::new();
    let criteria: [(&str, &dyn Fn() -> Outcome); 12] = [
        ("mod n*p polynomial congruence sweep", &|| proposition_sweep(&t)),
        ("mod n*p class-size sweep", &|| proposition_coefficients(&t)),
        ("mod p baseline and implication", &|| carlitz_baseline(&t)),
        ("reduction to r < p and remark", &|| corollary1_and_remark(&t)),
        ("Meixner congruences", &|| meixner_congruences(&t)),
        ("Gamma and binomial identities", &|| gamma_identities(&t)),
        ("sharpness and Wilson primes", &|| sharpness(&t)),
        ("cycle indicator cross-routes", &cross_routes),
        ("Meixner routes", &meixner_routes),
        ("power-lifting lemma property test", &|| junod_lemma(&t)),
        ("mutation harness", &mutation_harness),
        ("thread-count determinism", &determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
