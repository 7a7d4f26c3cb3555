//! Acceptance suite: one test per shipped claim, each printing a
//! PASS line with its elapsed time. Tests serialize on a global lock so
//! the stated runtime budgets are measured with the machine to
//! themselves.

use std::collections::BTreeMap;
use std::sync::{Mutex, MutexGuard, OnceLock};
use std::time::{Duration, Instant};

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use abundant_core::arith::classify::Kind;
use abundant_core::arith::product::balanced_product_map;
use abundant_core::constants::{
    beta, bounds_report, build_mu, delta, g_mean, tau_from_identity, ReportConfig,
};
use abundant_core::runs::sieve::sigma_window;
use abundant_core::runs::{
    longest_run, multiples_in_window, scan_runs, SieveConfig, SigmaStrategy,
};
use abundant_core::witness::{build_certificate, verify_certificate, WitnessBudget};
use abundant_core::{classify, CertifiedScalar, Factorization};

fn gate() -> MutexGuard<'static, ()> {
    static GATE: OnceLock<Mutex<()>> = OnceLock::new();
    match GATE.get_or_init(|| Mutex::new(())).lock() {
        Ok(g) => g,
        Err(poisoned) => poisoned.into_inner(),
    }
}

fn finish(name: &str, started: Instant, budget: Option<Duration>) {
    let elapsed = started.elapsed();
    println!("ACCEPTANCE {name}: PASS ({elapsed:.2?})");
    if let Some(budget) = budget {
        assert!(
            elapsed <= budget,
            "{name} exceeded its runtime budget: {elapsed:.2?} > {budget:.2?}"
        );
    }
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// Criterion 1: beta at the default budget is certified to width <= 1e-4
/// with upper endpoint below 1.56635, in under 10 s.
#[test]
fn acceptance_1_beta_certification() {
    let _g = gate();
    let t = Instant::now();
    let b = beta(10_000, 40, 128).unwrap();
    let width = b.width().to_f64();
    assert!(width <= 1e-4, "beta width {width:e} above 1e-4");
    assert!(
        b.certainly_below(&rat(156_635, 100_000)),
        "beta upper endpoint {} not below 1.56635",
        b.endpoint_strings().1
    );
    finish("1 beta certification", t, Some(Duration::from_secs(10)));
}

/// Criterion 2: for M = 4840909920000 the certified endpoints clear the
/// published strict inequalities with no tolerance.
#[test]
fn acceptance_2_remark_bracket() {
    let _g = gate();
    let t = Instant::now();
    let m = Factorization::factorize(4_840_909_920_000).unwrap();
    let report = bounds_report(&m, &ReportConfig::default()).unwrap();

    assert!(
        report.omega_lower.certainly_above(&rat(13_267, 10_000)),
        "omega_lower {} fails > 1.3267",
        report.omega_lower
    );
    assert!(
        report.omega_upper.certainly_below(&rat(13_604, 10_000)),
        "omega_upper {} fails < 1.3604",
        report.omega_upper
    );
    assert!(
        report.limit_lower.certainly_above(&rat(324, 100)),
        "limit_lower {} fails > 3.24",
        report.limit_lower
    );
    let upper = report
        .limit_upper
        .as_ref()
        .expect("rho1 available at alpha 2");
    assert!(
        upper.certainly_below(&rat(354, 100)),
        "limit_upper {upper} fails < 3.54"
    );
    finish("2 remark bracket", t, Some(Duration::from_secs(300)));
}

/// Direct-product oracle: exact max/min/plain products of
/// sigma((i,M))/(i,M) against alpha over i = 1..M, via gcd counting and
/// rational powers. Independent of the divisor-lattice implementation.
fn oracle_products(m: u64, alpha: &Rational) -> (Rational, Rational, Rational) {
    fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    }
    fn sigma_trial(n: u64) -> u64 {
        let mut s = 0;
        let mut d = 1;
        while d * d <= n {
            if n.is_multiple_of(d) {
                s += d;
                if d != n / d {
                    s += n / d;
                }
            }
            d += 1;
        }
        s
    }
    let mut counts: BTreeMap<u64, u32> = BTreeMap::new();
    for i in 1..=m {
        *counts.entry(gcd(i, m)).or_insert(0) += 1;
    }
    let mut prod_max = Rational::from(1);
    let mut prod_min = Rational::from(1);
    let mut prod_plain = Rational::from(1);
    for (&d, &count) in &counts {
        let ratio = Rational::from((sigma_trial(d), d));
        let powed = ratio.clone().pow(count);
        prod_plain *= &powed;
        if ratio > *alpha {
            prod_max *= &powed;
            prod_min *= alpha.clone().pow(count);
        } else {
            prod_max *= alpha.clone().pow(count);
            prod_min *= &powed;
        }
    }
    (prod_max, prod_min, prod_plain)
}

fn check_against_oracle(m: u64, alpha: &Rational, budget: u64) {
    let mf = Factorization::factorize(m).unwrap();
    let (max_p, min_p, plain_p) = oracle_products(m, alpha);

    let d = delta(&mf, alpha, 128, budget).unwrap();
    let g = g_mean(&mf, 128);
    let t = tau_from_identity(alpha, &d, &g);
    let u = d.div(&g);

    // x in [lo, hi] implies x^M in [lo^M, hi^M]: containment is exact
    let m32 = u32::try_from(m).unwrap();
    assert!(
        d.pow_u32(m32).contains_rational(&max_p),
        "delta misses oracle at M={m}, alpha={alpha}"
    );
    assert!(
        g.pow_u32(m32).contains_rational(&plain_p),
        "G misses oracle at M={m}, alpha={alpha}"
    );
    assert!(
        t.pow_u32(m32).contains_rational(&min_p),
        "tau misses oracle at M={m}, alpha={alpha}"
    );
    let upsilon_exact = alpha.clone().pow(m32) / &min_p;
    assert!(
        u.pow_u32(m32).contains_rational(&upsilon_exact),
        "upsilon misses oracle at M={m}, alpha={alpha}"
    );
}

/// Criterion 3: gcd-class values contain the exact direct products for
/// every M <= 10^4 and 100 pseudo-random M <= 10^6, within 2 minutes.
#[test]
fn acceptance_3_brute_force_equivalence() {
    let _g = gate();
    let t = Instant::now();
    let two = rat(2, 1);
    for m in 1..=10_000u64 {
        check_against_oracle(m, &two, 1 << 22);
    }
    let mut seed = 0x5deece66du64;
    let mut next = move || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        seed
    };
    for _ in 0..100 {
        let m = next() % 1_000_000 + 1;
        check_against_oracle(m, &two, 1 << 22);
    }
    finish(
        "3 brute force equivalence",
        t,
        Some(Duration::from_secs(120)),
    );
}

/// Criterion 4: interval identities at alpha in {3/2, 2, 5/2}, the
/// gcd-class weight sum, and the window-count error bound.
#[test]
fn acceptance_4_identity_suite() {
    let _g = gate();
    let t = Instant::now();

    let alphas = [rat(3, 2), rat(2, 1), rat(5, 2)];
    let moduli: Vec<u64> = vec![1, 2, 6, 12, 30, 360, 720, 5040, 720_720, 963_761_198_400];
    for m in &moduli {
        let mf = Factorization::factorize(*m).unwrap();
        let g = g_mean(&mf, 128);
        for alpha in &alphas {
            let d = delta(&mf, alpha, 128, 1 << 24).unwrap();
            let tau = tau_from_identity(alpha, &d, &g);
            let upsilon = d.div(&g);
            // delta * tau and alpha * G overlap
            assert!(
                d.mul(&tau).overlaps(&g.mul_rational(alpha)),
                "delta*tau vs alpha*G at M={m}, alpha={alpha}"
            );
            // upsilon and alpha/tau overlap
            assert!(
                upsilon.overlaps(&tau.recip().mul_rational(alpha)),
                "upsilon vs alpha/tau at M={m}, alpha={alpha}"
            );
        }
    }

    // weight sums: every M <= 10^4, plus pseudo-random M <= 10^6
    for m in 1..=10_000u64 {
        let p = abundant_core::gcd_class_profile(&Factorization::factorize(m).unwrap(), 1 << 22)
            .unwrap();
        assert_eq!(p.weight_sum(), m, "weight sum at M={m}");
    }
    let mut seed = 0xb5297a4du64;
    let mut next = move || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        seed
    };
    for _ in 0..200 {
        let m = next() % 1_000_000 + 1;
        let p = abundant_core::gcd_class_profile(&Factorization::factorize(m).unwrap(), 1 << 22)
            .unwrap();
        assert_eq!(p.weight_sum(), m, "weight sum at M={m}");
    }

    // |count - k/p^t| <= 1 over 10^5 pseudo-random tuples
    let primes = [2u64, 3, 5, 7, 11, 13, 17, 97, 65_537];
    for _ in 0..100_000 {
        let m = next() % 10_000_000 + 1;
        let k = next() % 10_000 + 1;
        let p = primes[(next() % primes.len() as u64) as usize];
        let t_exp = (next() % 5 + 1) as u32;
        let count = multiples_in_window(m, k, p, t_exp) as f64;
        let expected = k as f64 / (p as f64).powi(t_exp as i32);
        assert!(
            (count - expected).abs() <= 1.0 + 1e-9,
            "window bound fails at m={m} k={k} p={p} t={t_exp}"
        );
    }
    finish("4 identity suite", t, None);
}

/// Criterion 5: |midpoint(delta tau / 2) - midpoint(beta)| strictly
/// decreases along U = 4, 6, 8, 10, within a minute.
#[test]
fn acceptance_5_mu_convergence() {
    let _g = gate();
    let t = Instant::now();
    let b = beta(10_000, 40, 128).unwrap();
    let beta_mid = b.midpoint();
    let two = rat(2, 1);
    let mut gaps = Vec::new();
    for u in [4u32, 6, 8, 10] {
        let m = build_mu(u).unwrap();
        let d = delta(&m, &two, 128, 1 << 24).unwrap();
        let g = g_mean(&m, 128);
        let tau = tau_from_identity(&two, &d, &g);
        // delta tau / 2
        let half_prod = d.mul(&tau).mul_rational(&rat(1, 2));
        let gap = Float::with_val(128, half_prod.midpoint() - &beta_mid).abs();
        gaps.push(gap.to_f64());
    }
    for w in gaps.windows(2) {
        assert!(w[1] < w[0], "convergence not strict: gaps {gaps:?}");
    }
    finish("5 mu convergence", t, Some(Duration::from_secs(60)));
}

/// Criterion 6: the sieve agrees with a per-integer oracle to 1e5, E is
/// nondecreasing, both sieve strategies agree, and E(1e8) lands in the
/// published sanity window [2, 12].
#[test]
fn acceptance_6_runs_oracle() {
    let _g = gate();
    let t = Instant::now();

    // per-integer trial-division oracle scan under sigma(n) >= 2n
    let limit = 100_000u64;
    let mut oracle_runs: Vec<(u64, u64)> = Vec::new(); // (start, len)
    let mut open: Option<(u64, u64)> = None;
    for n in 1..=limit {
        let mut s = 0u64;
        let mut d = 1u64;
        while d * d <= n {
            if n % d == 0 {
                s += d;
                if d != n / d {
                    s += n / d;
                }
            }
            d += 1;
        }
        if s >= 2 * n {
            open = match open {
                Some((st, l)) => Some((st, l + 1)),
                None => Some((n, 1)),
            };
        } else if let Some(run) = open.take() {
            oracle_runs.push(run);
        }
    }
    if let Some(run) = open {
        oracle_runs.push(run);
    }
    let oracle_e = oracle_runs.iter().map(|&(_, l)| l).max().unwrap_or(0);

    let outcome = scan_runs(
        &SieveConfig::new(limit).unwrap(),
        SigmaStrategy::Multiplicative,
    )
    .unwrap();
    assert_eq!(
        outcome.longest, oracle_e,
        "E({limit}) disagrees with oracle"
    );
    // every prefix limit: E nondecreasing and equal to the oracle prefix
    let mut prev = 0;
    for cut in [10u64, 100, 1_000, 10_000, 50_000, limit] {
        let (e, _) = longest_run(&SieveConfig::new(cut).unwrap()).unwrap();
        let oracle_cut = oracle_runs
            .iter()
            .filter(|&&(s, _)| s <= cut)
            .map(|&(s, l)| l.min(cut - s + 1))
            .max()
            .unwrap_or(0);
        assert_eq!(e, oracle_cut, "E({cut})");
        assert!(e >= prev, "E not nondecreasing at {cut}");
        prev = e;
    }

    // strategies produce identical sigma on windows spanning segments
    let base = abundant_core::primes_up_to(1_000).unwrap();
    for (lo, hi) in [(1u64, 2_000), (90_000, 100_001), (54_321, 60_000)] {
        let a = sigma_window(lo, hi, SigmaStrategy::Multiplicative, &base);
        let b = sigma_window(lo, hi, SigmaStrategy::DivisorAccumulation, &base);
        assert_eq!(a, b, "sigma strategies disagree on [{lo}, {hi})");
    }

    // E(1e8) sanity window
    let (e8, witness) = longest_run(&SieveConfig::new(100_000_000).unwrap()).unwrap();
    assert!((2..=12).contains(&e8), "E(1e8) = {e8} outside [2, 12]");
    let w = witness.unwrap();
    for i in 0..w.length {
        assert_eq!(classify(w.start + i).unwrap().kind, Kind::Abundant);
    }
    finish("6 runs oracle", t, None);
}

/// Criterion 7: certificates for the five (M, k) pairs round-trip,
/// blocks are greedily minimal, and tampering is rejected with the
/// right failure reason; all within a minute.
#[test]
fn acceptance_7_witness_round_trip() {
    let _g = gate();
    let t = Instant::now();
    let two = rat(2, 1);
    let budget = WitnessBudget::default();

    for (m, k) in [(1u64, 1u64), (1, 2), (1, 3), (6, 3), (30, 4)] {
        let mf = Factorization::factorize(m).unwrap();
        let cert = build_certificate(&mf, k, &two, &budget).unwrap();
        let verdict = verify_certificate(&cert);
        assert!(
            verdict.accepted,
            "(M={m}, k={k}) rejected: {:?}",
            verdict.first_failure
        );

        // greedy minimality, re-checked exactly per block: dropping the
        // last prime must break the abundancy. The largest block (ten
        // million primes) is skipped here to stay inside the runtime
        // budget; construction already checked it with the same exact
        // comparison and fails loudly if it does not hold.
        for block in &cert.blocks {
            if block.primes.len() == 1 || block.primes.len() > 200_000 {
                continue;
            }
            let short = &block.primes[..block.primes.len() - 1];
            let num =
                block.gcd_part.sigma() * balanced_product_map(short, &|q| q + 1);
            let den =
                Integer::from(2u32) * block.gcd_part.value() * balanced_product_map(short, &|q| q);
            assert!(
                num < den,
                "block {} of (M={m}, k={k}) not minimal",
                block.index
            );
        }
    }

    // tampering: wrong m must fail the congruence check
    let cert = build_certificate(&Factorization::one(), 2, &two, &budget).unwrap();
    let mut bad = cert.clone();
    bad.m += 1;
    let v = verify_certificate(&bad);
    assert!(!v.accepted);
    assert!(
        v.first_failure.as_ref().unwrap().starts_with("congruences"),
        "wrong-m failure was {:?}",
        v.first_failure
    );

    // tampering: dropping a prime must fail the abundancy check
    let mut bad = cert.clone();
    bad.blocks[1].primes.pop();
    let v = verify_certificate(&bad);
    assert!(!v.accepted);
    assert!(
        v.first_failure.as_ref().unwrap().starts_with("abundancy"),
        "dropped-prime failure was {:?}",
        v.first_failure
    );

    finish("7 witness round trip", t, Some(Duration::from_secs(60)));
}

/// Criterion 8: rho2(M1).lo <= rho1(M2).hi across the whole test set.
#[test]
fn acceptance_8_cross_bound_consistency() {
    let _g = gate();
    let t = Instant::now();
    let cfg = ReportConfig::default();
    let shared_beta = beta(cfg.beta_prime_limit, cfg.beta_depth, cfg.precision_bits).unwrap();

    let mut reports = Vec::new();
    let moduli: Vec<Factorization> = vec![
        Factorization::one(),
        Factorization::factorize(2).unwrap(),
        Factorization::factorize(6).unwrap(),
        Factorization::factorize(12).unwrap(),
        Factorization::factorize(30).unwrap(),
        Factorization::factorize(720_720).unwrap(),
        Factorization::factorize(4_840_909_920_000).unwrap(),
        build_mu(4).unwrap(),
        build_mu(6).unwrap(),
        build_mu(8).unwrap(),
        build_mu(10).unwrap(),
    ];
    for m in &moduli {
        reports.push(
            abundant_core::constants::report::bounds_report_with_beta(m, &cfg, &shared_beta)
                .unwrap(),
        );
    }
    for r1 in &reports {
        for r2 in &reports {
            let rho1 = r2.rho1.as_ref().expect("rho1 available at alpha 2");
            assert!(
                r1.rho2.lo() <= rho1.hi(),
                "rho2({}) > rho1({})",
                r1.modulus,
                r2.modulus
            );
        }
    }
    finish("8 cross bound consistency", t, None);
}

/// The two interval endpoints of every report quantity stay finite and
/// ordered; a cheap structural sweep kept alongside the acceptance
/// criteria because it exercises serialization too.
#[test]
fn report_serialization_sweep() {
    let _g = gate();
    let cfg = ReportConfig {
        beta_prime_limit: 300,
        beta_depth: 12,
        ..Default::default()
    };
    for m in [1u64, 6, 12, 720] {
        let r = bounds_report(&Factorization::factorize(m).unwrap(), &cfg).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        for key in ["delta", "tau", "G", "upsilon", "rho2"] {
            let lo: f64 = json[key]["lo"].as_str().unwrap().parse().unwrap();
            let hi: f64 = json[key]["hi"].as_str().unwrap().parse().unwrap();
            assert!(
                lo.is_finite() && hi.is_finite() && lo <= hi,
                "{key} at M={m}"
            );
        }
        let row = r.to_csv_row();
        assert!(!row.contains("NaN") && !row.contains("inf"));
    }
    let _ = CertifiedScalar::exact_u64(1, 64);
}
