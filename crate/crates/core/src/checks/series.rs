use std::time::Instant;

use super::{
    domain, require_odd, require_power, sign_pow, CheckError, CheckId, CheckResult, Mode, Verifier,
};
use crate::congruence::eval::{ExactEvaluator, Expr};
use crate::cyclotomic::cyclotomic;
use crate::qseries::{QProduct, Sign};
use crate::RatFunc;

fn poch(sign: Sign, exp: i64, step: u64, k: u64) -> QProduct {
    QProduct::pochhammer(sign, exp, step, k)
}

/// `(q^{2d+1}; q^2)_k / (q; q)_k · q^k`; `d = 0` is the unshifted summand.
fn anew_term(d: i64, k: u64) -> QProduct {
    &(&poch(Sign::Plus, 2 * d + 1, 2, k) / &poch(Sign::Plus, 1, 1, k)) * &QProduct::q_pow(k as i64)
}

/// `(q; q^2)_k (c; q^2)_k / (q^2; q^2)_k` with `c = -1` or `c = -q^2`.
pub(crate) fn half_core(c_exp: i64, k: u64) -> QProduct {
    &(&poch(Sign::Plus, 1, 2, k) * &poch(Sign::Minus, c_exp, 2, k)) / &poch(Sign::Plus, 2, 2, k)
}

pub(crate) fn validate(id: CheckId, n: u64) -> Result<(), CheckError> {
    if !id.is_series() {
        return Err(domain(format!("{id} is not a series check")));
    }
    require_odd(n, 1)?;
    if let CheckId::WangYu(d) = id {
        if (n as i64) < 2 * d.abs() {
            return Err(domain(format!(
                "wang-yu(d={d}) requires n > {}",
                2 * d.abs() - 1
            )));
        }
    }
    Ok(())
}

/// The summands `t_0, ..., t_{n-1}` of a series check.
pub fn series_terms(id: CheckId, n: u64) -> Result<Vec<QProduct>, CheckError> {
    validate(id, n)?;
    let term = |k: u64| -> QProduct {
        let ki = k as i64;
        match id {
            CheckId::Anew3 | CheckId::Anew4 => anew_term(0, k),
            CheckId::WangYu(d) => anew_term(d, k),
            CheckId::A1 | CheckId::Anew5 => &half_core(0, k) * &QProduct::q_pow(2 * ki),
            CheckId::A2 | CheckId::Anew6 => &half_core(2, k) * &QProduct::q_pow(2 * ki + 1),
            CheckId::B1 => &half_core(0, k) * &QProduct::q_pow(-ki * ki),
            CheckId::C1 => &half_core(2, k) * &QProduct::q_pow(-(ki + 1) * (ki + 1)),
            _ => unreachable!("validated as a series check"),
        }
    };
    Ok((0..n).map(term).collect())
}

/// The signed monomial on the right-hand side, as `(sign, exponent)`.
pub(crate) fn rhs_monomial(id: CheckId, n: u64) -> Result<(i64, i64), CheckError> {
    validate(id, n)?;
    let n = n as i64;
    let h = (n - 1) / 2;
    let lower = n * (n - 1) / 2;
    let upper = n * (n + 1) / 2;
    let one_mod_four = n % 4 == 1;
    Ok(match id {
        CheckId::Anew3 | CheckId::Anew4 => (sign_pow(h), (n * n - 1) / 4),
        CheckId::WangYu(d) => (sign_pow(h + d), (n * n - (2 * d + 1) * (2 * d + 1)) / 4),
        CheckId::Anew5 | CheckId::Anew6 => (sign_pow(h), 0),
        CheckId::A1 if one_mod_four => (1, lower),
        CheckId::A1 => (-1, upper),
        CheckId::A2 if one_mod_four => (1, upper),
        CheckId::A2 => (-1, lower),
        CheckId::B1 if one_mod_four => (1, -lower),
        CheckId::B1 => (-1, -upper),
        CheckId::C1 if one_mod_four => (1, -upper),
        CheckId::C1 => (-1, -lower),
        _ => unreachable!("validated as a series check"),
    })
}

fn rhs_product(id: CheckId, n: u64) -> Result<QProduct, CheckError> {
    let (sign, e) = rhs_monomial(id, n)?;
    Ok(&QProduct::integer(sign) * &QProduct::q_pow(e))
}

/// The finite sum `Σ_{k<n} t_k` as a canonical rational function.
pub fn series_lhs(id: CheckId, n: u64) -> Result<RatFunc, CheckError> {
    let terms = series_terms(id, n)?;
    Ok(ExactEvaluator::new(n, cyclotomic(n)).eval_ratfunc(&Expr::Sum(terms))?)
}

/// The closed-form right-hand side.
pub fn series_rhs(id: CheckId, n: u64) -> Result<RatFunc, CheckError> {
    let (sign, e) = rhs_monomial(id, n)?;
    Ok(&RatFunc::from_integer(sign) * &RatFunc::q_pow(e))
}

impl Verifier {
    /// Tests `Σ_{k<n} t_k ≡ RHS (mod Φ_n^m)`.
    pub fn check_series(&self, id: CheckId, n: u64, m: u32) -> Result<CheckResult, CheckError> {
        require_power(m)?;
        let start = Instant::now();
        let lhs = Expr::Sum(series_terms(id, n)?);
        let rhs = Expr::Product(rhs_product(id, n)?);
        let (v, engine) = self.decide(n, &lhs, &rhs, Mode::Congruence(m))?;
        let mut r = CheckResult::new(id, n, m).with_verdict(v);
        if r.detail.is_empty() {
            r.detail = engine.to_string();
        }
        Ok(r.timed(start))
    }
}
