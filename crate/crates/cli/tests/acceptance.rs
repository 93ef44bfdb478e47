//! Acceptance suite: one test per acceptance criterion, each ending in a
//! single PASS line (run with `--nocapture` to see them).
//!
//! Everything here is exact integer arithmetic; there are no tolerances to
//! tune, only equalities that hold or fail.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use fschar_core::fermionic::{
    binom_matrix_det, build_l, build_q, exponent, profiles_with_exponent_at_most,
};
use fschar_core::quasiparticle::{minimal_monomial, ChargeProfile, Color, QPFactor, QPMonomial};
use fschar_core::series::{GradeKey, TriGradedSeries};
use fschar_core::verify::verify_with;
use fschar_core::{
    char_configs, dual_charges, inv_pochhammer, is_admissible, run_characters, Configuration,
    Error, Method, Weight,
};

/// Every formula-supported weight of level 1, 2, and 3.
fn supported_weights() -> Vec<Weight> {
    vec![
        Weight::sl3(1, 0, 0),
        Weight::sl3(0, 1, 0),
        Weight::sl3(0, 0, 1),
        Weight::sl3(2, 0, 0),
        Weight::sl3(1, 1, 0),
        Weight::sl3(0, 2, 0),
        Weight::sl3(0, 1, 1),
        Weight::sl3(0, 0, 2),
        Weight::sl3(3, 0, 0),
        Weight::sl3(2, 1, 0),
        Weight::sl3(1, 2, 0),
        Weight::sl3(0, 3, 0),
        Weight::sl3(0, 2, 1),
        Weight::sl3(0, 1, 2),
        Weight::sl3(0, 0, 3),
    ]
}

fn assert_within(elapsed: Duration, budget: Duration, what: &str) {
    assert!(
        elapsed <= budget,
        "{what} took {elapsed:?}, over the {budget:?} target"
    );
}

#[test]
fn criterion_1_golden_matrices() {
    let start = Instant::now();

    assert_eq!(
        build_q(2).entries,
        vec![
            vec![1, 1, 0, 1],
            vec![1, 2, 1, 2],
            vec![0, 0, 1, 1],
            vec![0, 0, 1, 2],
        ]
    );

    let printed = [
        (Weight::sl3(2, 0, 0), vec![0, 0, 0, 0]),
        (Weight::sl3(1, 1, 0), vec![0, 1, 0, 0]),
        (Weight::sl3(0, 2, 0), vec![1, 2, 0, 0]),
        (Weight::sl3(0, 1, 1), vec![1, 2, 0, 1]),
        (Weight::sl3(0, 0, 2), vec![1, 2, 1, 2]),
    ];
    for (w, expected) in printed {
        assert_eq!(build_l(&w).unwrap().entries, expected, "L for ({w})");
    }

    let elapsed = start.elapsed();
    assert_within(elapsed, Duration::from_secs(1), "criterion 1");
    println!("ACCEPTANCE 1 PASS: golden Q(2) and all five printed level-2 L vectors ({elapsed:?})");
}

#[test]
fn criterion_2_five_way_character_agreement() {
    let start = Instant::now();
    let cutoff = 20;
    for w in supported_weights() {
        let results = run_characters(&w, cutoff, &Method::ALL);
        let reference = results[&Method::Configs]
            .as_ref()
            .unwrap_or_else(|e| panic!("configs failed for ({w}): {e}"));
        for method in Method::ALL {
            let series = results[&method]
                .as_ref()
                .unwrap_or_else(|e| panic!("{method} failed for ({w}): {e}"));
            assert!(
                series.equal_up_to(reference, cutoff).unwrap(),
                "{method} disagrees with configs for ({w}) below q^{cutoff}"
            );
        }
    }
    let elapsed = start.elapsed();
    assert_within(elapsed, Duration::from_secs(300), "criterion 2");
    println!(
        "ACCEPTANCE 2 PASS: configs = qp = fermionic-m = fermionic-n = georgiev up to q^20 \
         for all 15 supported weights of level <= 3 ({elapsed:?})"
    );
}

#[test]
fn criterion_3_minimal_monomial_degree_identity() {
    let start = Instant::now();
    let mut checked = 0u64;
    for w in supported_weights() {
        for profile in profiles_with_exponent_at_most(&w, 30).unwrap() {
            let e = exponent(&profile, &w).unwrap();
            let b = minimal_monomial(&profile, &w).unwrap();
            assert_eq!(
                e as i64,
                b.total_degree(),
                "exponent vs minimal degree for profile {:?}/{:?} of ({w})",
                profile.counts(Color::Gamma1),
                profile.counts(Color::Gamma2),
            );
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    assert_within(elapsed, Duration::from_secs(60), "criterion 3");
    println!(
        "ACCEPTANCE 3 PASS: minimal-monomial degree equals tM Q M + L M on {checked} profiles \
         with exponent <= 30 ({elapsed:?})"
    );
}

#[test]
fn criterion_4_binomial_determinants() {
    let start = Instant::now();
    for p in -20..=20 {
        for r in 0..=10 {
            assert_eq!(
                binom_matrix_det(p, r),
                BigInt::from(1),
                "det of the binomial matrix at p={p}, r={r}"
            );
        }
    }
    let elapsed = start.elapsed();
    assert_within(elapsed, Duration::from_secs(10), "criterion 4");
    println!("ACCEPTANCE 4 PASS: 451 binomial-matrix determinants all equal 1 ({elapsed:?})");
}

/// Exhaustive oracle: every entry sequence of bounded length and entry size,
/// filtered by the admissibility checker, counted by grade.
fn oracle_counts(w: &Weight, degree: u32) -> BTreeMap<(u32, u32), u64> {
    let k = w.level();
    let max_len = 2 * degree as usize;
    let mut counts = BTreeMap::new();
    let total = (k as u64 + 1).pow(max_len as u32);
    for code in 0..total {
        let mut entries = Vec::with_capacity(max_len);
        let mut rest = code;
        for _ in 0..max_len {
            entries.push((rest % (k as u64 + 1)) as u32);
            rest /= k as u64 + 1;
        }
        let config = Configuration::new(entries);
        let (charges, d) = config.grade(2);
        if d != degree || !is_admissible(&config, w, 2).unwrap() {
            continue;
        }
        *counts.entry((charges[0], charges[1])).or_default() += 1;
    }
    counts
}

#[test]
fn criterion_5_frozen_spot_values() {
    // q^1 of the level-1 vacuum character: one configuration per color.
    let w1 = Weight::sl3(1, 0, 0);
    let oracle1 = oracle_counts(&w1, 1);
    let frozen1: BTreeMap<(u32, u32), u64> = [((1, 0), 1), ((0, 1), 1)].into();
    assert_eq!(
        oracle1, frozen1,
        "oracle disagrees with the frozen q^1 value"
    );

    // q^2 of the level-2 vacuum character.
    let w2 = Weight::sl3(2, 0, 0);
    let oracle2 = oracle_counts(&w2, 2);
    let frozen2: BTreeMap<(u32, u32), u64> = [
        ((2, 0), 1),
        ((1, 1), 1),
        ((0, 2), 1),
        ((1, 0), 1),
        ((0, 1), 1),
    ]
    .into();
    assert_eq!(
        oracle2, frozen2,
        "oracle disagrees with the frozen q^2 value"
    );

    // The production path reproduces both.
    for (w, degree, frozen) in [(&w1, 1, &frozen1), (&w2, 2, &frozen2)] {
        let series = char_configs(w, degree).unwrap();
        for (&(n1, n2), &c) in frozen {
            assert_eq!(
                series.coeff(GradeKey::new(n1, n2, degree)).unwrap(),
                BigInt::from(c),
                "coefficient at z1^{n1} z2^{n2} q^{degree} of ({w})"
            );
        }
        let at_degree = series.iter().filter(|(k, _)| k.d == degree).count();
        assert_eq!(at_degree, frozen.len(), "spurious terms at q^{degree}");
    }
    println!(
        "ACCEPTANCE 5 PASS: q^1 of level-1 vacuum is z1 + z2 and q^2 of level-2 vacuum is \
         z1^2 + z1 z2 + z2^2 + z1 + z2, confirmed by the exhaustive oracle"
    );
}

fn random_series(rng: &mut StdRng) -> TriGradedSeries {
    let mut s = TriGradedSeries::zero(6);
    for _ in 0..rng.random_range(0..6) {
        let key = GradeKey::new(
            rng.random_range(0..4),
            rng.random_range(0..4),
            rng.random_range(0..7),
        );
        s.add_term(key, rng.random_range(-9..=9));
    }
    s
}

fn random_monomial(rng: &mut StdRng) -> QPMonomial {
    let mut factors = |max: usize| -> Vec<QPFactor> {
        (0..rng.random_range(0..max))
            .map(|_| QPFactor::new(rng.random_range(1..=3), -rng.random_range(0..=9)))
            .collect()
    };
    let gamma1 = factors(4);
    let gamma2 = factors(4);
    QPMonomial::new(gamma1, gamma2)
}

#[test]
fn criterion_6_property_suites() {
    let mut rng = StdRng::seed_from_u64(20110517);

    // Ring laws on 1000 randomized small series.
    for _ in 0..1000 {
        let (a, b, c) = (
            random_series(&mut rng),
            random_series(&mut rng),
            random_series(&mut rng),
        );
        assert_eq!(a.add(&b), b.add(&a));
        assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        assert_eq!(a.mul(&b), b.mul(&a));
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    // 1/(q)_M times (q)_M is 1 up to q^30 for M <= 12.
    for m in 0..=12 {
        let mut poch = TriGradedSeries::constant(1, 30);
        for i in 1..=m {
            let mut factor = TriGradedSeries::constant(1, 30);
            factor.add_term(GradeKey::new(0, 0, i), -1);
            poch = poch.mul(&factor);
        }
        assert_eq!(
            inv_pochhammer(m, 30).mul(&poch),
            TriGradedSeries::constant(1, 30),
            "1/(q)_{m} inverse check"
        );
    }

    // Every character coefficient satisfies n1 + n2 <= d and is positive.
    for w in supported_weights() {
        for (_, result) in run_characters(&w, 12, &Method::ALL) {
            let series = result.unwrap();
            for (key, c) in series.iter() {
                assert!(key.n1 + key.n2 <= key.d, "charge exceeds degree at {key}");
                assert!(c > &BigInt::from(0), "nonpositive coefficient at {key}");
            }
        }
    }

    // Total order and multiplication compatibility on 1000 monomial pairs.
    for _ in 0..1000 {
        let n = random_monomial(&mut rng);
        let m = random_monomial(&mut rng);
        let k = random_monomial(&mut rng);
        assert_eq!(n.cmp(&m), m.cmp(&n).reverse());
        assert_eq!(n == m, n.cmp(&m).is_eq());
        match n.cmp(&m) {
            std::cmp::Ordering::Less => assert!(n.mul(&k) < m.mul(&k)),
            std::cmp::Ordering::Greater => assert!(n.mul(&k) > m.mul(&k)),
            std::cmp::Ordering::Equal => assert_eq!(n.mul(&k), m.mul(&k)),
        }
    }

    // Dual-charge round trip on 1000 random profiles.
    for _ in 0..1000 {
        let k = rng.random_range(1..=5usize);
        let counts = |rng: &mut StdRng| (0..k).map(|_| rng.random_range(0..5)).collect();
        let gamma1: Vec<u32> = counts(&mut rng);
        let gamma2: Vec<u32> = counts(&mut rng);
        let profile = ChargeProfile::new(gamma1.clone(), gamma2.clone()).unwrap();
        let (n1, n2) = dual_charges(&profile);
        for j in 1..=k {
            let next = if j < k { n1[j] } else { 0 };
            assert_eq!(gamma1[j - 1], n1[j - 1] - next);
            let prev = if j > 1 { n2[j - 2] } else { 0 };
            assert_eq!(gamma2[k - j], n2[j - 1] - prev);
        }
        for j in 1..k {
            assert!(n1[j - 1] >= n1[j]);
            assert!(n2[j - 1] <= n2[j]);
        }
    }

    // Determinism: reruns are byte-identical, whatever --jobs says.
    let reference = fschar_stdout(&["qp", "--weight", "2,1,0", "--cutoff", "14"]);
    for args in [
        vec!["qp", "--weight", "2,1,0", "--cutoff", "14"],
        vec!["qp", "--weight", "2,1,0", "--cutoff", "14", "--jobs", "1"],
        vec!["qp", "--weight", "2,1,0", "--cutoff", "14", "--jobs", "4"],
    ] {
        assert_eq!(
            fschar_stdout(&args),
            reference,
            "stdout varies for {args:?}"
        );
    }
    let reference = fschar_stdout(&[
        "fermionic",
        "--form",
        "m",
        "--weight",
        "0,2,1",
        "--cutoff",
        "14",
    ]);
    let jobs4 = fschar_stdout(&[
        "fermionic",
        "--form",
        "m",
        "--weight",
        "0,2,1",
        "--cutoff",
        "14",
        "--jobs",
        "4",
    ]);
    assert_eq!(reference, jobs4, "fermionic output varies with --jobs");

    println!(
        "ACCEPTANCE 6 PASS: ring laws (1000 series), Pochhammer inverses to q^30, \
         charge <= degree on all coefficients, order properties (1000 pairs), \
         dual-charge round trips (1000 profiles), byte-identical reruns with --jobs"
    );
}

fn fschar_binary() -> &'static str {
    env!("CARGO_BIN_EXE_fschar")
}

fn fschar_stdout(args: &[&str]) -> Vec<u8> {
    let out = Command::new(fschar_binary())
        .args(args)
        .output()
        .expect("fschar runs");
    assert!(out.status.success(), "fschar {args:?} failed: {out:?}");
    out.stdout
}

fn fschar_exit(args: &[&str]) -> i32 {
    Command::new(fschar_binary())
        .args(args)
        .output()
        .expect("fschar runs")
        .status
        .code()
        .expect("exit code")
}

#[test]
fn criterion_7_negative_paths() {
    let mixed = Weight::sl3(1, 0, 1);

    // Library level: configs enumerates, everything else refuses.
    let results = run_characters(&mixed, 6, &Method::ALL);
    assert!(results[&Method::Configs].is_ok());
    for method in [
        Method::Qp,
        Method::FermionicM,
        Method::FermionicN,
        Method::Georgiev,
    ] {
        assert!(
            matches!(results[&method], Err(Error::UnsupportedWeight(_))),
            "{method} must reject ({mixed})"
        );
    }

    // Injected corruption flips the verdict and nothing else.
    let report = verify_with(&Weight::sl3(2, 0, 0), 8, &Method::ALL, Some(Method::Qp)).unwrap();
    assert_eq!(report.agree, Some(false));
    assert!(report.first_discrepancy.is_some());

    // Exit codes: 0 agreement, 1 discrepancy, 2 usage.
    assert_eq!(
        fschar_exit(&["verify", "--weight", "2,0,0", "--cutoff", "8"]),
        0
    );
    assert_eq!(
        fschar_exit(&[
            "verify",
            "--weight",
            "2,0,0",
            "--cutoff",
            "8",
            "--corrupt",
            "fermionic-n",
        ]),
        1
    );
    assert_eq!(
        fschar_exit(&["verify", "--weight", "1,0,1", "--cutoff", "8"]),
        2
    );
    assert_eq!(
        fschar_exit(&["verify", "--weight", "junk", "--cutoff", "8"]),
        2
    );
    assert_eq!(fschar_exit(&["verify", "--weight", "2,0,0"]), 2); // missing cutoff
    assert_eq!(
        fschar_exit(&["qp", "--weight", "1,0,1", "--cutoff", "8"]),
        2
    );
    assert_eq!(
        fschar_exit(&["configs", "--weight", "1,0,1", "--cutoff", "8"]),
        0
    );

    println!(
        "ACCEPTANCE 7 PASS: mixed weight (1,0,1) rejected by qp/fermionic paths while configs \
         enumerates; verify exits 0/1/2 as specified"
    );
}
