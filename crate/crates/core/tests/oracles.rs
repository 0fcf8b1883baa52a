//! Values computed outside this crate, frozen here.

use std::collections::{BTreeMap, HashMap};

use cyclopadic::cycle_index::{
    cycle_indicator_direct, cycle_indicator_via_determinant, cycle_indicator_via_egf, cycle_indicators,
};
use cyclopadic::meixner::{meixner_qstar_by_substitution, meixner_qstar_via_series};
use cyclopadic::padic::factorial;
use cyclopadic::{coefficient, enumerate_cycle_types, meixner_q, meixner_qstar, CycleType, MultiPoly, PadicContext, UniPoly};
use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::One;

fn uni(v: &[i64]) -> UniPoly {
    UniPoly::from_coeffs(v.iter().map(|&c| BigInt::from(c)).collect())
}

#[test]
fn golden_cycle_indicators() {
    for n in 0..=10 {
        let path = format!("{}/tests/golden/cycle_index_{n}.json", env!("CARGO_MANIFEST_DIR"));
        let golden = std::fs::read_to_string(&path).unwrap();
        let c = cyclopadic::cycle_indicator(n);
        assert_eq!(serde_json::to_string(&c).unwrap(), golden.trim_end(), "n={n}");
        let parsed: MultiPoly = serde_json::from_str(&golden).unwrap();
        assert_eq!(parsed, c);
    }
}

/// Partition numbers by Euler's pentagonal recurrence.
fn partition_numbers(n: usize) -> Vec<u64> {
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut k = 1i64;
        loop {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let mut any = false;
            for g in [k * (3 * k - 1) / 2, k * (3 * k + 1) / 2] {
                if g as usize <= m {
                    p[m] += sign * p[m - g as usize];
                    any = true;
                }
            }
            if !any {
                break;
            }
            k += 1;
        }
    }
    p.into_iter().map(|x| x as u64).collect()
}

#[test]
fn cycle_type_counts_are_partition_numbers() {
    let p = partition_numbers(40);
    assert_eq!(p[36], 17977);
    assert_eq!(p[40], 37338);
    for n in 0..=40 {
        assert_eq!(enumerate_cycle_types(n as u64).count() as u64, p[n], "n={n}");
    }
    for (n, c) in cycle_indicators(25).iter().enumerate() {
        assert_eq!(c.len() as u64, p[n], "terms of C_{n}");
    }
}

fn permutation_census(n: usize) -> HashMap<Vec<u64>, u64> {
    let mut counts = HashMap::new();
    for perm in (0..n).permutations(n) {
        let mut seen = vec![false; n];
        let mut m = vec![0u64; n];
        for start in 0..n {
            let mut len = 0;
            let mut j = start;
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

#[test]
fn brute_force_census() {
    for n in 1..=7usize {
        let census = permutation_census(n);
        assert_eq!(census.len(), enumerate_cycle_types(n as u64).count());
        for (m, count) in census {
            let ct = CycleType::new(n as u64, m).unwrap();
            assert_eq!(coefficient(&ct).unwrap(), BigInt::from(count), "n={n} {ct}");
        }
    }
}

#[test]
fn routes_agree() {
    let table = cycle_indicators(25);
    for (n, c) in table.iter().enumerate() {
        assert_eq!(*c, cycle_indicator_direct(n).unwrap(), "direct n={n}");
        if n <= 8 {
            assert_eq!(*c, cycle_indicator_via_determinant(n).unwrap(), "determinant n={n}");
        }
        if n <= 12 {
            assert_eq!(*c, cycle_indicator_via_egf(n).unwrap(), "egf n={n}");
        }
    }
}

#[test]
fn coefficient_sum_is_factorial() {
    for (n, c) in cycle_indicators(25).iter().enumerate() {
        let sum: BigInt = c.terms().map(|(_, k)| k.clone()).sum();
        assert_eq!(sum, factorial(n as u64), "n={n}");
    }
}

#[test]
fn all_variables_to_x_gives_rising_factorial() {
    for (n, c) in cycle_indicators(15).iter().enumerate() {
        let images: BTreeMap<usize, UniPoly> = (1..=n.max(1)).map(|i| (i, UniPoly::x())).collect();
        let rising = (0..n).fold(UniPoly::one(), |acc, k| &acc * &uni(&[k as i64, 1]));
        assert_eq!(c.substitute_univariate(&images).unwrap(), rising, "n={n}");
    }
}

#[test]
fn meixner_values() {
    assert_eq!(meixner_q(4).unwrap(), uni(&[9, 0, -14, 0, 1]));
    assert_eq!(meixner_q(5).unwrap(), uni(&[0, 89, 0, -30, 0, 1]));
    assert_eq!(meixner_q(8).unwrap(), uni(&[11025, 0, -24940, 0, 4214, 0, -140, 0, 1]));
    assert_eq!(
        meixner_q(12).unwrap(),
        uni(&[108056025, 0, -296266266, 0, 70548511, 0, -4054028, 0, 76263, 0, -506, 0, 1])
    );
    assert_eq!(meixner_qstar(4), uni(&[0, 0, -8, 0, 1]));
    assert_eq!(meixner_qstar(5), uni(&[0, 24, 0, -20, 0, 1]));
    assert_eq!(meixner_qstar(8), uni(&[0, 0, -8448, 0, 2464, 0, -112, 0, 1]));
    assert_eq!(
        meixner_qstar(12),
        uni(&[0, 0, -74972160, 0, 30633856, 0, -2393600, 0, 55968, 0, -440, 0, 1])
    );
}

#[test]
fn meixner_routes_and_shape() {
    let qs = cyclopadic::meixner::meixner_q_table(24).unwrap();
    for n in 0..=24 {
        let star = meixner_qstar(n);
        assert_eq!(star, meixner_qstar_by_substitution(n).unwrap(), "n={n}");
        assert_eq!(star, meixner_qstar_via_series(n).unwrap(), "n={n}");
        let sign = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        for q in [&qs[n], &star] {
            assert_eq!(q.degree(), Some(n));
            assert!(q.leading_coeff().unwrap().is_one());
            assert_eq!(q.reflect(), q.scale(&sign), "parity n={n}");
        }
    }
}

#[test]
fn morita_gamma_values() {
    let g5 = [-1i64, 1, -2, 6, -24, 24, -144, 1008, -8064, 72576, -72576, 798336];
    let g3 = [-1i64, 1, -2, 2, -8, 40, -40, 280, -2240, 2240, -22400, 246400];
    for (p, table) in [(5u64, g5), (3, g3)] {
        let ctx = PadicContext::new(p).unwrap();
        for (i, &g) in table.iter().enumerate() {
            assert_eq!(ctx.morita_gamma(i as u64 + 1).unwrap(), BigInt::from(g), "p={p} n={}", i + 1);
        }
    }
}

#[test]
fn sharpness_differences() {
    // (p, n, c_np(np-p, .., m_p = 1, ..), vp of c - (-1)^p n)
    let cases: [(u64, u64, &str, u64); 5] = [
        (3, 3, "168", 2),
        (3, 9, "5850", 3),
        (5, 5, "1275120", 3),
        (7, 7, "61848420480", 2),
        (13, 13, "4395490308229819778871091200", 3),
    ];
    for (p, n, c, v) in cases {
        let ctx = PadicContext::new(p).unwrap();
        let ct = CycleType::two_part(n * p, p, n * p - p, 1).unwrap();
        let got = coefficient(&ct).unwrap();
        assert_eq!(got.to_string(), c);
        assert_eq!(ctx.vp(&(got + BigInt::from(n))), v);
    }
}

#[test]
fn legendre_formula() {
    for p in [2u64, 3, 5, 7, 11, 13] {
        let ctx = PadicContext::new(p).unwrap();
        for n in 0..=300u64 {
            let mut legendre = 0;
            let mut q = p;
            while q <= n {
                legendre += n / q;
                q *= p;
            }
            assert_eq!(ctx.vp(&factorial(n)), legendre, "p={p} n={n}");
        }
    }
}
