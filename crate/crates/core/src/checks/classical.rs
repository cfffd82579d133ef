use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::series::series_lhs;
use super::{domain, require_power, sign_pow, CheckError, CheckId, CheckResult, ParamValue};
use crate::congruence::Valuation;
use crate::cyclotomic::is_prime;

/// Inputs of the integer congruence `Σ_{k<p^r} C(2k,k)/2^k ≡ (-1)^{(p^r-1)/2} (mod p^power)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassicalParams {
    pub p: u64,
    pub r: u32,
    pub power: u32,
}

impl ClassicalParams {
    /// Validates `p` (odd prime), `r ≥ 1` and `power ∈ {1, 2}`.
    pub fn new(p: u64, r: u32, power: u32) -> Result<Self, CheckError> {
        if !is_prime(p) {
            return Err(CheckError::NotPrime(p));
        }
        if p == 2 {
            return Err(CheckError::EvenPrimeRejected);
        }
        if r == 0 {
            return Err(domain("r must be positive"));
        }
        require_power(power)?;
        p.checked_pow(r)
            .ok_or_else(|| domain(format!("{p}^{r} overflows")))?;
        Ok(ClassicalParams { p, r, power })
    }

    /// `p^r`.
    pub fn n(&self) -> u64 {
        self.p.pow(self.r)
    }

    /// The check this congruence is registered under.
    pub fn id(&self) -> CheckId {
        if self.power == 1 {
            CheckId::SunTauraso
        } else {
            CheckId::Sun
        }
    }
}

/// `Σ_{k<n} C(2k,k) / 2^k` exactly.
pub fn central_binomial_sum(n: u64) -> BigRational {
    // the k-th term is C(2k,k) / 2^k; keep the numerator over 2^{n-1}
    let mut sum = BigInt::zero();
    let mut binom = BigInt::one();
    for k in 0..n {
        sum += &binom << (n - 1 - k) as usize;
        binom = binom * BigInt::from(2 * (2 * k + 1)) / BigInt::from(k + 1);
    }
    if n == 0 {
        return BigRational::zero();
    }
    BigRational::new(sum, BigInt::one() << (n - 1) as usize)
}

/// `v_p(x)` for a rational `x`; infinite at zero.
pub fn p_adic_valuation(x: &BigRational, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p);
    let count = |v: &BigInt| {
        let mut v = v.abs();
        let mut c = 0i64;
        loop {
            let (quo, rem) = v.div_rem(&p);
            if !rem.is_zero() {
                return c;
            }
            v = quo;
            c += 1;
        }
    };
    Valuation::Finite(count(x.numer()) - count(x.denom()))
}

/// The sum modulo `m`, using the inverse of 2 from the extended Euclidean algorithm.
fn modular_sum(n: u64, m: &BigInt) -> BigInt {
    let eg = BigInt::from(2).extended_gcd(m);
    debug_assert!(eg.gcd.is_one());
    let inv2 = eg.x.mod_floor(m);
    let mut sum = BigInt::zero();
    let mut binom = BigInt::one();
    let mut weight = BigInt::one();
    for k in 0..n {
        sum = (sum + (&binom % m) * &weight).mod_floor(m);
        weight = (weight * &inv2).mod_floor(m);
        binom = binom * BigInt::from(2 * (2 * k + 1)) / BigInt::from(k + 1);
    }
    sum
}

fn expected_sign(n: u64) -> i64 {
    sign_pow(((n - 1) / 2) as i64)
}

/// Decides the integer congruence twice: by modular summation and by the
/// `p`-adic valuation of the exact rational difference. Both must agree.
pub fn classical_check(params: ClassicalParams) -> Result<CheckResult, CheckError> {
    let ClassicalParams { p, r, power } = ClassicalParams::new(params.p, params.r, params.power)?;
    let start = Instant::now();
    let n = params.n();
    let modulus = BigInt::from(p).pow(power);
    let target = BigInt::from(expected_sign(n)).mod_floor(&modulus);
    let modular = modular_sum(n, &modulus) == target;
    let difference =
        central_binomial_sum(n) - BigRational::from_integer(BigInt::from(expected_sign(n)));
    let valuation = p_adic_valuation(&difference, p);
    let rational = valuation.at_least(power as i64);
    let mut res = CheckResult::new(params.id(), n, power)
        .param("p", ParamValue::Int(p as i64))
        .param("r", ParamValue::Int(r as i64));
    res.holds = modular && rational;
    res.valuation = valuation;
    if modular != rational {
        res.detail = format!("modular route says {modular}, rational route says {rational}");
    }
    Ok(res.timed(start))
}

/// Largest `p^r` accepted by [`q_to_1_consistency`].
pub const Q_TO_ONE_MAX: u64 = 50;

/// Evaluates a series at `q = 1` with `n = p^r` and compares it with the
/// integer sum, then checks the integer congruence at the series' power.
pub fn q_to_1_consistency(id: CheckId, p: u64, r: u32) -> Result<CheckResult, CheckError> {
    if !matches!(
        id,
        CheckId::Anew3 | CheckId::Anew4 | CheckId::A1 | CheckId::A2
    ) {
        return Err(domain(format!("{id} has no integer counterpart")));
    }
    let power = if id == CheckId::Anew3 { 1 } else { 2 };
    let params = ClassicalParams::new(p, r, power)?;
    let n = params.n();
    if n > Q_TO_ONE_MAX {
        return Err(domain(format!("p^r = {n} exceeds {Q_TO_ONE_MAX}")));
    }
    let start = Instant::now();
    let at_one = series_lhs(id, n)?.eval(&BigRational::one())?;
    let classical = central_binomial_sum(n);
    let valuation = p_adic_valuation(
        &(&at_one - BigRational::from_integer(BigInt::from(expected_sign(n)))),
        p,
    );
    let mut res = CheckResult::new(CheckId::QToOne, n, power)
        .param("series", ParamValue::Text(id.name().to_string()))
        .param("p", ParamValue::Int(p as i64))
        .param("r", ParamValue::Int(r as i64));
    res.holds = at_one == classical && valuation.at_least(power as i64);
    res.valuation = valuation;
    res.detail = format!("value at q = 1: {at_one}");
    Ok(res.timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_sums() {
        assert_eq!(central_binomial_sum(1), rat(1, 1));
        assert_eq!(central_binomial_sum(3), rat(7, 2));
        assert_eq!(central_binomial_sum(5), rat(83, 8));
    }

    #[test]
    fn modular_examples() {
        assert_eq!(modular_sum(3, &BigInt::from(9)), BigInt::from(8));
        assert_eq!(modular_sum(5, &BigInt::from(5)), BigInt::from(1));
    }

    #[test]
    fn documented_examples() {
        for (p, r, power) in [(3, 1, 2), (5, 1, 1), (3, 2, 2)] {
            let res = classical_check(ClassicalParams { p, r, power }).unwrap();
            assert!(res.holds, "p={p} r={r} power={power}");
        }
    }

    #[test]
    fn parameter_errors() {
        assert_eq!(ClassicalParams::new(9, 1, 1), Err(CheckError::NotPrime(9)));
        assert_eq!(
            ClassicalParams::new(2, 1, 1),
            Err(CheckError::EvenPrimeRejected)
        );
        assert!(matches!(
            ClassicalParams::new(3, 1, 3),
            Err(CheckError::Domain(_))
        ));
    }

    #[test]
    fn valuations() {
        assert_eq!(p_adic_valuation(&rat(18, 5), 3), Valuation::Finite(2));
        assert_eq!(p_adic_valuation(&rat(5, 18), 3), Valuation::Finite(-2));
        assert_eq!(p_adic_valuation(&rat(0, 1), 3), Valuation::Infinite);
    }

    #[test]
    fn q_to_one_examples() {
        for (id, p) in [(CheckId::Anew3, 3), (CheckId::A1, 3), (CheckId::A2, 5)] {
            let res = q_to_1_consistency(id, p, 1).unwrap();
            assert!(res.holds, "{id} p={p}: {}", res.detail);
        }
        assert!(matches!(
            q_to_1_consistency(CheckId::B1, 3, 1),
            Err(CheckError::Domain(_))
        ));
        assert!(matches!(
            q_to_1_consistency(CheckId::A1, 11, 2),
            Err(CheckError::Domain(_))
        ));
    }
}
