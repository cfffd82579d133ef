//! Acceptance suite: one PASS/FAIL line per criterion; exits non-zero on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use qcong::checks::{
    carlitz_random_specializations, classical_check, q_to_1_consistency, CheckId, ClassicalParams,
    Section, Verifier, CARLITZ_A_GRID, CARLITZ_B_GRID,
};
use qcong::congruence::Valuation;
use qcong::cyclotomic::{divisors, is_prime};
use qcong::qseries::q_binomial;
use qcong::{cyclotomic_oracle, CyclotomicCache, IntPoly, RatFunc};

const MAIN_THEOREM_MAX_N: u64 = 199;
const MAIN_THEOREM_LIMIT: Duration = Duration::from_secs(120);
const EQUIVALENCE_MAX_N: u64 = 99;
const PRIOR_MAX_N: u64 = 149;
const WANG_YU_MAX_N: u64 = 99;
const WANG_YU_MAX_D: i64 = 5;
const CARLITZ_MAX_N: u64 = 25;
const CARLITZ_TRIALS: u32 = 100;
const CARLITZ_RANDOM_MAX_N: u64 = 15;
const CARLITZ_SEED: u64 = 0x5eed;
const CHAIN_MAX_N: u64 = 99;
const CHAIN_LIMIT: Duration = Duration::from_secs(600);
const CLASSICAL_R1_BOUND: u64 = 200;
const CLASSICAL_R2_BOUND: u64 = 50;
const Q_TO_ONE_MODULI: [u64; 7] = [3, 5, 7, 9, 25, 27, 49];
const CYCLOTOMIC_MAX_N: u64 = 500;
const PROPERTY_CASES: u32 = 1000;
const CLI_MAX_N: u64 = 49;

fn odd(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo..=hi).filter(|n| n % 2 == 1)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn main_theorem() -> Result<String, String> {
    let v = Verifier::default();
    let start = Instant::now();
    let mut count = 0;
    for n in odd(1, MAIN_THEOREM_MAX_N) {
        for id in [CheckId::A1, CheckId::A2] {
            let r = v
                .check_series(id, n, 2)
                .map_err(|e| format!("{id} n={n}: {e}"))?;
            ensure(r.holds, || {
                format!("{id} fails at n={n} (valuation {})", r.valuation)
            })?;
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= MAIN_THEOREM_LIMIT, || {
        format!("took {elapsed:.1?}, limit {MAIN_THEOREM_LIMIT:?}")
    })?;
    Ok(format!(
        "{count} checks, n ≤ {MAIN_THEOREM_MAX_N}, {elapsed:.1?}"
    ))
}

fn equivalence() -> Result<String, String> {
    let v = Verifier::default();
    let mut count = 0;
    for n in odd(1, EQUIVALENCE_MAX_N) {
        for (a, b) in [(CheckId::A1, CheckId::B1), (CheckId::A2, CheckId::C1)] {
            let x = v.check_series(a, n, 2).map_err(|e| e.to_string())?;
            let y = v.check_series(b, n, 2).map_err(|e| e.to_string())?;
            ensure(x.holds == y.holds, || format!("{a}/{b} disagree at n={n}"))?;
            ensure(x.holds, || format!("{a} fails at n={n}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} pairs agree, n ≤ {EQUIVALENCE_MAX_N}"))
}

fn prior_congruences() -> Result<String, String> {
    let v = Verifier::default();
    let mut count = 0;
    for n in odd(1, PRIOR_MAX_N) {
        for (id, m) in [
            (CheckId::Anew3, 1),
            (CheckId::Anew4, 2),
            (CheckId::Anew5, 1),
            (CheckId::Anew6, 1),
        ] {
            let r = v.check_series(id, n, m).map_err(|e| e.to_string())?;
            ensure(r.holds, || format!("{id} fails at n={n}"))?;
            count += 1;
        }
    }
    for n in odd(1, WANG_YU_MAX_N) {
        for d in -WANG_YU_MAX_D..=WANG_YU_MAX_D {
            if (n as i64) < 2 * d.abs() {
                continue;
            }
            let id = CheckId::WangYu(d);
            let r = v.check_series(id, n, 1).map_err(|e| e.to_string())?;
            ensure(r.holds, || format!("{id} fails at n={n}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} checks"))
}

fn carlitz() -> Result<String, String> {
    let v = Verifier::default();
    let mut count = 0;
    for n in 0..=CARLITZ_MAX_N {
        for s in [1, 2] {
            for a in CARLITZ_A_GRID {
                for b in CARLITZ_B_GRID {
                    let r = v.carlitz_check(n, a, b, s).map_err(|e| e.to_string())?;
                    ensure(r.holds && r.valuation == Valuation::Infinite, || {
                        format!("n={n} a={a} b={b} s={s}: valuation {}", r.valuation)
                    })?;
                    count += 1;
                }
            }
        }
    }
    let random = carlitz_random_specializations(CARLITZ_TRIALS, CARLITZ_SEED, CARLITZ_RANDOM_MAX_N);
    ensure(random.holds, || random.detail.clone())?;
    Ok(format!("{count} grid identities; {}", random.detail))
}

fn proof_chain() -> Result<String, String> {
    let v = Verifier::default();
    let start = Instant::now();
    let mut count = 0;
    for n in odd(3, CHAIN_MAX_N) {
        for r in v
            .proof_chain(n, Section::Both)
            .map_err(|e| format!("n={n}: {e}"))?
        {
            ensure(r.holds, || format!("{} fails at n={n}: {}", r.id, r.detail))?;
            if r.power == 0 {
                ensure(r.valuation == Valuation::Infinite, || {
                    format!("{} at n={n} is not exact", r.id)
                })?;
            }
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= CHAIN_LIMIT, || {
        format!("took {elapsed:.1?}, limit {CHAIN_LIMIT:?}")
    })?;
    Ok(format!(
        "{count} steps, 3 ≤ n ≤ {CHAIN_MAX_N}, {elapsed:.1?}"
    ))
}

fn classical() -> Result<String, String> {
    let mut count = 0;
    for (bound, r) in [(CLASSICAL_R1_BOUND, 1), (CLASSICAL_R2_BOUND, 2)] {
        for p in (3..bound).filter(|&p| is_prime(p)) {
            for power in [1, 2] {
                let res =
                    classical_check(ClassicalParams { p, r, power }).map_err(|e| e.to_string())?;
                ensure(res.holds, || {
                    format!("p={p} r={r} power={power}: {}", res.detail)
                })?;
                count += 1;
            }
        }
    }
    for m in Q_TO_ONE_MODULI {
        let (p, r) = (3..=m)
            .filter(|&p| is_prime(p) && m % p == 0)
            .map(|p| (p, m.ilog(p)))
            .next()
            .unwrap();
        for id in [CheckId::Anew3, CheckId::Anew4, CheckId::A1, CheckId::A2] {
            let res = q_to_1_consistency(id, p, r).map_err(|e| e.to_string())?;
            ensure(res.holds, || format!("{id} at {p}^{r}: {}", res.detail))?;
            count += 1;
        }
    }
    Ok(format!("{count} checks"))
}

fn poly(v: &[i64]) -> IntPoly {
    IntPoly::new(v.iter().map(|&c| BigInt::from(c)).collect())
}

fn run_property<S: Strategy>(
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases: PROPERTY_CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn infrastructure() -> Result<String, String> {
    let mut cache = CyclotomicCache::new();
    for n in 1..=CYCLOTOMIC_MAX_N {
        ensure(*cache.get(n) == cyclotomic_oracle(n), || {
            format!("Φ_{n} differs from the oracle")
        })?;
        let product = divisors(n)
            .into_iter()
            .fold(IntPoly::one(), |acc, d| &acc * cache.get(d));
        let mut target = vec![0i64; n as usize + 1];
        target[0] = -1;
        target[n as usize] = 1;
        ensure(product == poly(&target), || {
            format!("product identity fails at n={n}")
        })?;
    }
    let one = num_rational::BigRational::from_integer(BigInt::from(1));
    for n in 0..=40u64 {
        let mut classical = BigInt::from(1);
        for k in 0..=n as i64 {
            let b = q_binomial(n, k, 1).map_err(|e| e.to_string())?;
            ensure(b == q_binomial(n, n as i64 - k, 1).unwrap(), || {
                format!("symmetry [{n} {k}]")
            })?;
            ensure(
                b.eval_rational(&one) == num_rational::BigRational::from_integer(classical.clone()),
                || format!("value at 1 of [{n} {k}]"),
            )?;
            if n >= 1 && k >= 1 {
                let pascal = &q_binomial(n - 1, k - 1, 1).unwrap()
                    + &q_binomial(n - 1, k, 1).unwrap().shift(k as usize);
                ensure(b == pascal, || format!("Pascal [{n} {k}]"))?;
            }
            classical = classical * BigInt::from(n as i64 - k) / BigInt::from(k + 1);
        }
    }
    let small = || prop::collection::vec(-30i64..=30, 0..=6).prop_map(|v| poly(&v));
    let ratfunc = || {
        (small(), small())
            .prop_filter("non-zero denominator", |(_, d)| !d.is_zero())
            .prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
    };
    run_property((small(), small(), small()), |(n, d, h)| {
        prop_assume!(!d.is_zero() && !h.is_zero());
        let f = RatFunc::new(n.clone(), d.clone()).unwrap();
        prop_assert_eq!(&f, &RatFunc::new(&n * &h, &d * &h).unwrap());
        prop_assert!(*f.den().coeffs().last().unwrap() > BigInt::from(0));
        Ok(())
    })?;
    run_property((small(), small(), small()), |(a, b, c)| {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        Ok(())
    })?;
    run_property((ratfunc(), ratfunc(), ratfunc()), |(f, g, h)| {
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!(&(&f + &g) - &g, f.clone());
        if !f.is_zero() {
            prop_assert_eq!(&f * &f.inv().unwrap(), RatFunc::one());
        }
        Ok(())
    })?;
    Ok(format!(
        "Φ_n for n ≤ {CYCLOTOMIC_MAX_N}; q-binomials n ≤ 40; 3 property suites × {PROPERTY_CASES} cases"
    ))
}

fn qcong(args: &[&str]) -> (Option<i32>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qcong"))
        .args(args)
        .env_remove("QCONG_CACHE_DIR")
        .output()
        .expect("binary runs");
    (
        out.status.code(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

fn cli_contract() -> Result<String, String> {
    let expectations: [(&[&str], i32); 8] = [
        (&["verify", "anew3", "--n", "3..=3"], 0),
        (&["verify", "a1", "--n", "4..=4"], 2),
        (&["verify", "anew5", "--n", "7", "--power", "2"], 1),
        (&["proof-chain", "--n", "3", "--section", "both"], 0),
        (&["proof-chain", "--n", "2"], 2),
        (
            &[
                "carlitz",
                "--n",
                "5",
                "--a",
                "q",
                "--b",
                "-1",
                "--base-power",
                "2",
            ],
            0,
        ),
        (&["carlitz", "--n", "5", "--a", "1", "--b", "-1"], 2),
        (&["cyclotomic", "--n", "12"], 0),
    ];
    for (args, expected) in expectations {
        let (code, _) = qcong(args);
        ensure(code == Some(expected), || {
            format!("{args:?} exited with {code:?}, expected {expected}")
        })?;
    }
    let range = format!("1..={CLI_MAX_N}");
    let runs: [&[&str]; 2] = [
        &["verify", "a1", "a2"],
        &["verify", "proof-chain-s2", "proof-chain-s3"],
    ];
    for base in runs {
        let mut args: Vec<&str> = base.to_vec();
        args.extend(["--n", &range, "--format", "json", "--no-timing"]);
        let serial = qcong(&[&args[..], &["--parallelism", "1"]].concat());
        let again = qcong(&[&args[..], &["--parallelism", "1"]].concat());
        let parallel = qcong(&[&args[..], &["--parallelism", "4"]].concat());
        ensure(serial.0 == Some(0), || {
            format!("{base:?} exited with {:?}", serial.0)
        })?;
        ensure(serial == again, || format!("{base:?} is not deterministic"))?;
        ensure(serial == parallel, || {
            format!("{base:?} differs between serial and parallel runs")
        })?;
    }
    Ok(format!(
        "exit codes, determinism and serial/parallel identity for n ≤ {CLI_MAX_N}"
    ))
}

type Criterion = fn() -> Result<String, String>;

fn main() {
    let criteria: [(&str, Criterion); 8] = [
        ("main theorem", main_theorem),
        ("equivalence under q -> 1/q", equivalence),
        ("prior q-congruences", prior_congruences),
        ("Carlitz identity", carlitz),
        ("proof-chain replay", proof_chain),
        ("classical congruences", classical),
        ("infrastructure properties", infrastructure),
        ("CLI contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        match outcome {
            Ok(summary) => println!(
                "PASS criterion {} ({name}): {summary} [{elapsed:.1?}]",
                i + 1
            ),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {why} [{elapsed:.1?}]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
