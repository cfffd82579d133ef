use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{domain, monomial_text, CheckError, CheckId, CheckResult, Mode, ParamValue, Verifier};
use crate::congruence::eval::Expr;
use crate::congruence::Valuation;
use crate::qseries::{MonomialParam, QProduct, Sign};

/// Values of `a` swept by the identity suite.
pub const CARLITZ_A_GRID: [MonomialParam; 4] = [
    MonomialParam::plus(1),
    MonomialParam::plus(3),
    MonomialParam::minus(1),
    MonomialParam::minus(2),
];

/// Values of `b` swept by the identity suite.
pub const CARLITZ_B_GRID: [MonomialParam; 4] = [
    MonomialParam::minus(0),
    MonomialParam::minus(1),
    MonomialParam::minus(2),
    MonomialParam::plus(1),
];

fn monomial(sign: i64, e: i64) -> QProduct {
    &QProduct::integer(sign) * &QProduct::q_pow(e)
}

fn sign_value(s: Sign) -> i64 {
    s.to_i64()
}

/// Left summand `(a;q^s)_k (b;q^s)_k / (q^s;q^s)_k (-ab)^{N-k} q^{s(N-k)(N+k-1)/2}`.
fn left_term(n: u64, k: u64, a: MonomialParam, b: MonomialParam, s: u64) -> QProduct {
    let (ni, ki, si) = (n as i64, k as i64, s as i64);
    let ab_sign = -sign_value(a.sign) * sign_value(b.sign);
    let ab_exp = (a.exponent + b.exponent) as i64;
    let power = if (ni - ki) % 2 == 0 { 1 } else { ab_sign };
    let weight = monomial(
        power,
        ab_exp * (ni - ki) + si * (ni - ki) * (ni + ki - 1) / 2,
    );
    let top = &QProduct::pochhammer_param(a, s, k) * &QProduct::pochhammer_param(b, s, k);
    &(&top / &QProduct::pochhammer(Sign::Plus, si, s, k)) * &weight
}

/// Right summand `(a;q^s)_{N+1} (-b)^k q^{s k(k-1)/2} / ((q^s;q^s)_k (q^s;q^s)_{N-k} (1 - a q^{s(N-k)}))`.
fn right_term(n: u64, k: u64, a: MonomialParam, b: MonomialParam, s: u64) -> QProduct {
    let (ni, ki, si) = (n as i64, k as i64, s as i64);
    let sign = if k.is_multiple_of(2) {
        1
    } else {
        -sign_value(b.sign)
    };
    let top = &QProduct::pochhammer_param(a, s, n + 1)
        * &monomial(sign, b.exponent as i64 * ki + si * ki * (ki - 1) / 2);
    let bottom = &(&QProduct::pochhammer(Sign::Plus, si, s, k)
        * &QProduct::pochhammer(Sign::Plus, si, s, n - k))
        * &QProduct::one_minus(a.sign, a.exponent as i64 + si * (ni - ki));
    &top / &bottom
}

impl Verifier {
    /// Tests the two-parameter transformation at `a`, `b` with `q → q^s`,
    /// as an exact identity in `ℚ(q)`.
    pub fn carlitz_check(
        &self,
        n: u64,
        a: MonomialParam,
        b: MonomialParam,
        base_power: u64,
    ) -> Result<CheckResult, CheckError> {
        if a.is_one() {
            return Err(domain("a = 1 makes the right-hand side singular"));
        }
        if base_power == 0 {
            return Err(domain("base power must be positive"));
        }
        let start = Instant::now();
        let lhs = Expr::sum((0..=n).map(|k| left_term(n, k, a, b, base_power)));
        let rhs = Expr::sum((0..=n).map(|k| right_term(n, k, a, b, base_power)));
        let (v, _) = self.decide(1, &lhs, &rhs, Mode::Identity)?;
        let mut r = CheckResult::new(CheckId::Carlitz, n, 0)
            .param("a", monomial_text(a))
            .param("b", monomial_text(b))
            .param("base-power", ParamValue::Int(base_power as i64));
        r.holds = v.holds;
        r.valuation = v.valuation;
        Ok(r.timed(start))
    }
}

fn pochhammer_value(a: &BigRational, base: &BigRational, k: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut step = BigRational::one();
    for _ in 0..k {
        acc *= BigRational::one() - a * &step;
        step *= base;
    }
    acc
}

fn rational_pow(x: &BigRational, e: u64) -> BigRational {
    num_traits::pow(x.clone(), e as usize)
}

/// Both sides at rational `a`, `b`, `q`; `None` when a denominator vanishes.
fn evaluate_sides(
    n: u64,
    a: &BigRational,
    b: &BigRational,
    q: &BigRational,
    s: u64,
) -> Option<(BigRational, BigRational)> {
    let base = rational_pow(q, s);
    let qq: Vec<BigRational> = (0..=n).map(|k| pochhammer_value(&base, &base, k)).collect();
    if qq.iter().any(Zero::is_zero) {
        return None;
    }
    let mut lhs = BigRational::zero();
    let mut rhs = BigRational::zero();
    let minus_ab = -(a * b);
    let a_top = pochhammer_value(a, &base, n + 1);
    for k in 0..=n {
        let tri = (n - k) * (n + k).saturating_sub(1) / 2;
        lhs += pochhammer_value(a, &base, k) * pochhammer_value(b, &base, k) / &qq[k as usize]
            * rational_pow(&minus_ab, n - k)
            * rational_pow(&base, tri);
        let tail = BigRational::one() - a * rational_pow(&base, n - k);
        if tail.is_zero() {
            return None;
        }
        let choose2 = k * k.saturating_sub(1) / 2;
        rhs += &a_top * rational_pow(&-b.clone(), k) * rational_pow(&base, choose2)
            / (&qq[k as usize] * &qq[(n - k) as usize] * tail);
    }
    Some((lhs, rhs))
}

/// Numerators and denominators of sampled values lie in `[-R, R]` and `[1, R]`.
/// For fixed denominators each coordinate is uniform over `2R + 1` distinct
/// values, so a non-zero polynomial of total degree `D` vanishes at a sampled
/// point with probability at most `D / (2R + 1)`.
const SAMPLE_RANGE: i64 = 1_000_000;

fn sample(rng: &mut ChaCha8Rng) -> BigRational {
    let num = rng.random_range(-SAMPLE_RANGE..=SAMPLE_RANGE);
    let den = rng.random_range(1..=SAMPLE_RANGE);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Bound on the total degree in `(a, b, q)` of the difference of the two
/// sides times `(q^s;q^s)_N^2 ∏_k (1 - a q^{s(N-k)})`, which clears every
/// denominator. The multiplier has degree `≤ 3s(N+1)^2/2 + N + 1` and every
/// summand `≤ 3s(N+1)^2/2 + 2N + 1`.
fn cleared_degree(n: u64, s: u64) -> u64 {
    (2 * n + 1) + n + 4 * s * (n + 1) * (n + 1)
}

/// Evaluates the transformation at `trials` seeded random rational points
/// `(a, b, q)` with `N ≤ max_n` and `s ∈ {1, 2}`. A point where either side
/// is undefined is redrawn.
pub fn carlitz_random_specializations(trials: u32, seed: u64, max_n: u64) -> CheckResult {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut max_degree = 0;
    for trial in 0..trials {
        let n = rng.random_range(0..=max_n);
        let s = rng.random_range(1..=2u64);
        max_degree = max_degree.max(cleared_degree(n, s));
        let (lhs, rhs) = loop {
            let (a, b, q) = (sample(&mut rng), sample(&mut rng), sample(&mut rng));
            if q.is_zero() || q.abs().is_one() {
                continue;
            }
            if let Some(sides) = evaluate_sides(n, &a, &b, &q, s) {
                break sides;
            }
        };
        if lhs != rhs {
            failures.push(format!("trial {trial} (N={n}, s={s})"));
        }
    }
    let mut r = CheckResult::new(CheckId::CarlitzRandom, max_n, 0)
        .param("trials", ParamValue::Int(trials as i64))
        .param("seed", ParamValue::Int(seed as i64));
    r.holds = failures.is_empty();
    r.valuation = if r.holds {
        Valuation::Infinite
    } else {
        Valuation::Finite(0)
    };
    r.detail = if r.holds {
        let values = 2 * SAMPLE_RANGE + 1;
        format!(
            "{trials} points agree; cleared difference has total degree <= {max_degree}, \
             numerators drawn from {values} values, per-point miss probability <= {:.1e}",
            max_degree as f64 / values as f64
        )
    } else {
        format!("mismatch at {}", failures.join(", "))
    };
    r.timed(start)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_length_holds() {
        let v = Verifier::default();
        for a in CARLITZ_A_GRID {
            for b in CARLITZ_B_GRID {
                assert!(v.carlitz_check(0, a, b, 1).unwrap().holds);
            }
        }
    }

    #[test]
    fn specializations_used_by_the_proofs() {
        let v = Verifier::default();
        assert!(
            v.carlitz_check(5, MonomialParam::plus(1), MonomialParam::minus(0), 2)
                .unwrap()
                .holds
        );
        assert!(
            v.carlitz_check(7, MonomialParam::plus(1), MonomialParam::minus(2), 2)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn a_equal_one_is_rejected() {
        let r = Verifier::default().carlitz_check(
            5,
            MonomialParam::plus(0),
            MonomialParam::minus(0),
            1,
        );
        assert!(matches!(r, Err(CheckError::Domain(_))));
    }

    #[test]
    fn perturbed_identity_fails() {
        // dropping the last right-hand term must break equality
        let (n, a, b, s) = (4, MonomialParam::plus(1), MonomialParam::minus(1), 1);
        let lhs = Expr::sum((0..=n).map(|k| left_term(n, k, a, b, s)));
        let rhs = Expr::sum((0..n).map(|k| right_term(n, k, a, b, s)));
        let (v, _) = Verifier::default()
            .decide(1, &lhs, &rhs, Mode::Identity)
            .unwrap();
        assert!(!v.holds);
    }

    #[test]
    fn rational_points_agree() {
        let r = carlitz_random_specializations(10, 7, 6);
        assert!(r.holds, "{}", r.detail);
        let q = BigRational::new(BigInt::from(2), BigInt::from(3));
        let a = BigRational::new(BigInt::from(-5), BigInt::from(7));
        let b = BigRational::from_integer(BigInt::from(3));
        let (l, rr) = evaluate_sides(3, &a, &b, &q, 2).unwrap();
        assert_eq!(l, rr);
        assert!(!l.abs().is_zero());
    }
}
