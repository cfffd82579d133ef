use std::ops::{Add, Mul, Sub};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::series::half_core;
use super::{
    domain, require_odd, sign_pow, CheckError, CheckId, CheckResult, Mode, ParamValue, Verifier,
};
use crate::congruence::eval::{ExactEvaluator, Expr};
use crate::congruence::Valuation;
use crate::cyclotomic::cyclotomic;
use crate::qseries::{QProduct, Sign};
use crate::{IntPoly, RatFunc};

/// Which half of the proof to replay.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Section {
    /// The chain for the first supercongruence, via its `q → 1/q` form.
    Two,
    /// The chain for the second supercongruence.
    Three,
    Both,
}

fn q(e: i64) -> QProduct {
    QProduct::q_pow(e)
}

fn int(c: i64) -> QProduct {
    QProduct::integer(c)
}

fn rational(num: i64, den: i64) -> QProduct {
    QProduct::constant(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// `1 - q^e`.
fn om(e: i64) -> QProduct {
    QProduct::one_minus(Sign::Plus, e)
}

/// `1 + q^e`.
fn op(e: i64) -> QProduct {
    QProduct::one_minus(Sign::Minus, e)
}

fn poch(sign: Sign, exp: i64, step: u64, k: u64) -> QProduct {
    QProduct::pochhammer(sign, exp, step, k)
}

fn prod(factors: &[&QProduct]) -> QProduct {
    factors.iter().fold(QProduct::one(), |acc, f| &acc * *f)
}

fn qbin2(n: u64, k: u64) -> QProduct {
    QProduct::q_binomial(n, k as i64, 2)
}

/// Quantities shared by the steps for one `n`.
struct Ctx {
    n: u64,
    ni: i64,
    h: u64,
    /// `(-1)^h`.
    sigma: i64,
    /// `(1 + (-1)^{h-1}) / 2`, the alternating sum over `k < h`.
    alt: i64,
}

impl Ctx {
    fn new(n: u64) -> Self {
        let h = (n - 1) / 2;
        Ctx {
            n,
            ni: n as i64,
            h,
            sigma: sign_pow(h as i64),
            alt: (1 + sign_pow(h as i64 - 1)) / 2,
        }
    }

    fn ks_without_h(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.n).filter(move |&k| k != self.h)
    }

    /// `1 - q^n`.
    fn t(&self) -> QProduct {
        om(self.ni)
    }

    /// `c · q^e · (1 - q^n)` with rational `c = num/den`.
    fn lin(&self, num: i64, den: i64, e: i64) -> QProduct {
        prod(&[&rational(num, den), &q(e), &self.t()])
    }

    fn a(&self, k: u64) -> QProduct {
        a_product(self.n, k)
    }

    fn b(&self, k: u64) -> QProduct {
        b_product(self.n, k)
    }

    fn c(&self, k: u64) -> QProduct {
        c_product(self.n, k)
    }

    /// Summands of the first transformed series, `... q^{(n-1)^2 - k^2}`.
    fn lhs_b(&self) -> Expr {
        let top = (self.ni - 1) * (self.ni - 1);
        Expr::sum((0..self.n).map(|k| &half_core(0, k) * &q(top - (k * k) as i64)))
    }

    /// Summands of the second transformed series, `... q^{n^2 - (k+1)^2}`.
    fn lhs_c(&self) -> Expr {
        let top = self.ni * self.ni;
        Expr::sum((0..self.n).map(|k| &half_core(2, k) * &q(top - ((k + 1) * (k + 1)) as i64)))
    }

    fn sum_b_without_h(&self) -> Expr {
        Expr::sum(self.ks_without_h().map(|k| self.b(k)))
    }

    /// `Σ_{k≠h} (-1)^k / (1 - q^{2k+1})`.
    fn alternating_reciprocals(&self) -> Expr {
        Expr::sum(
            self.ks_without_h()
                .map(|k| &int(sign_pow(k as i64)) / &om(2 * k as i64 + 1)),
        )
    }

    /// `[2n choose n]`.
    fn central(&self) -> QProduct {
        QProduct::q_binomial(2 * self.n, self.ni, 1)
    }

    /// `(q; q^2)_n (-q; q)_{n-1}^2 / ((1 - q^n) (q^2; q^2)_{n-1})`.
    fn ratio_lhs(&self) -> QProduct {
        let neg = poch(Sign::Minus, 1, 1, self.n - 1);
        &prod(&[&poch(Sign::Plus, 1, 2, self.n), &neg, &neg])
            / &(&self.t() * &poch(Sign::Plus, 2, 2, self.n - 1))
    }

    /// `σ (q^{1-n} + (1-n) q (1 - q^n) / 2)`.
    fn a_h_linear(&self) -> Expr {
        Expr::from(&int(self.sigma) * &q(1 - self.ni))
            .add(self.lin(self.sigma * (1 - self.ni), 2, 1).into())
    }
}

/// `(q; q^2)_n q^{k^2 - k} [n-1 choose k]_{q^2} / ((q^2; q^2)_{n-1} (1 - q^{2n-2k-1}))`.
fn a_product(n: u64, k: u64) -> QProduct {
    let (ni, ki) = (n as i64, k as i64);
    &prod(&[
        &poch(Sign::Plus, 1, 2, n),
        &q(ki * ki - ki),
        &qbin2(n - 1, k),
    ]) / &(&poch(Sign::Plus, 2, 2, n - 1) * &om(2 * ni - 2 * ki - 1))
}

/// `q (1 - q^n) (-1)^{k+1} / (1 - q^{2k+1})`.
fn b_product(n: u64, k: u64) -> QProduct {
    &prod(&[&q(1), &om(n as i64), &int(sign_pow(k as i64 + 1))]) / &om(2 * k as i64 + 1)
}

/// `(q; q^2)_n q^{k^2 + k} [n-1 choose k]_{q^2} / ((q^2; q^2)_{n-1} (1 - q^{2n-2k-1}))`.
fn c_product(n: u64, k: u64) -> QProduct {
    let (ni, ki) = (n as i64, k as i64);
    &prod(&[
        &poch(Sign::Plus, 1, 2, n),
        &q(ki * ki + ki),
        &qbin2(n - 1, k),
    ]) / &(&poch(Sign::Plus, 2, 2, n - 1) * &om(2 * ni - 2 * ki - 1))
}

fn exact_value(n: u64, k: u64, p: QProduct) -> Result<RatFunc, CheckError> {
    require_odd(n, 1)?;
    if k >= n {
        return Err(domain(format!("k = {k} is outside 0..{n}")));
    }
    Ok(ExactEvaluator::new(n, cyclotomic(n)).eval_ratfunc(&Expr::Product(p))?)
}

/// The summand `a_{n,k}`.
pub fn a_nk(n: u64, k: u64) -> Result<RatFunc, CheckError> {
    exact_value(
        n,
        k,
        if n >= 1 && k < n {
            a_product(n, k)
        } else {
            QProduct::zero()
        },
    )
}

/// `b_{n,k} = q (1 - q^n) (-1)^{k+1} / (1 - q^{2k+1})`.
pub fn b_nk(n: u64, k: u64) -> Result<RatFunc, CheckError> {
    exact_value(
        n,
        k,
        if n >= 1 && k < n {
            b_product(n, k)
        } else {
            QProduct::zero()
        },
    )
}

/// The summand `c_{n,k}`.
pub fn c_nk(n: u64, k: u64) -> Result<RatFunc, CheckError> {
    exact_value(
        n,
        k,
        if n >= 1 && k < n {
            c_product(n, k)
        } else {
            QProduct::zero()
        },
    )
}

/// The exponents `s` exercised in a chain replay: `1, 2, 3, (n-1)/2,
/// (n-3)/2, (n+1)/2`, without repeats.
pub fn qpow_lemma_exponents(n: u64) -> Vec<i64> {
    let ni = n as i64;
    let mut out: Vec<i64> = Vec::new();
    for s in [1, 2, 3, (ni - 1) / 2, (ni - 3) / 2, (ni + 1) / 2] {
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

struct Part {
    label: String,
    lhs: Expr,
    rhs: Expr,
    mode: Mode,
}

fn identity(label: impl Into<String>, lhs: impl Into<Expr>, rhs: impl Into<Expr>) -> Part {
    Part {
        label: label.into(),
        lhs: lhs.into(),
        rhs: rhs.into(),
        mode: Mode::Identity,
    }
}

fn congruence(
    label: impl Into<String>,
    lhs: impl Into<Expr>,
    rhs: impl Into<Expr>,
    m: u32,
) -> Part {
    Part {
        label: label.into(),
        lhs: lhs.into(),
        rhs: rhs.into(),
        mode: Mode::Congruence(m),
    }
}

fn require_residue(id: CheckId, n: u64, r: u64) -> Result<(), CheckError> {
    if n % 4 != r {
        return Err(domain(format!(
            "{id} applies only to n ≡ {r} (mod 4), got n = {n}"
        )));
    }
    Ok(())
}

fn parts(id: CheckId, c: &Ctx) -> Result<Vec<Part>, CheckError> {
    use CheckId::*;
    let (n, ni, h, sigma) = (c.n, c.ni, c.h, c.sigma);
    let mut out = Vec::new();
    match id {
        B2Identity | C2Identity => {
            let (lhs, shift, term): (Expr, i64, fn(&Ctx, u64) -> QProduct) = if id == B2Identity {
                (c.lhs_b(), -1, |c, k| c.a(k))
            } else {
                (c.lhs_c(), 1, |c, k| c.c(k))
            };
            out.push(identity("sum", lhs, Expr::sum((0..n).map(|k| term(c, k)))));
            for k in 0..n {
                let ki = k as i64;
                let middle = &prod(&[&poch(Sign::Plus, 1, 2, n), &q(ki * ki + shift * ki)])
                    / &prod(&[
                        &poch(Sign::Plus, 2, 2, k),
                        &poch(Sign::Plus, 2, 2, n - k - 1),
                        &om(2 * ni - 2 * ki - 1),
                    ]);
                out.push(identity(format!("k={k} binomial form"), middle, term(c, k)));
            }
        }
        QbinomNegk => {
            for k in 0..n {
                let ki = k as i64;
                out.push(congruence(
                    format!("k={k}"),
                    qbin2(n - 1, k),
                    &int(sign_pow(ki)) * &q(-ki * ki - ki),
                    1,
                ));
            }
        }
        B3 => {
            for k in c.ks_without_h() {
                let rhs = &prod(&[
                    &int(sign_pow(k as i64)),
                    &om(1),
                    &poch(Sign::Plus, 1, 2, n - 1),
                ]) / &(&om(2 * k as i64 + 1) * &poch(Sign::Plus, 2, 2, n - 1));
                out.push(congruence(format!("k={k}"), c.a(k), rhs, 2));
            }
        }
        B4 => {
            let left = &poch(Sign::Plus, 1, 2, n - 1) / &poch(Sign::Plus, 2, 2, n - 1);
            let split = &poch(Sign::Plus, 1, 2, n - 1)
                / &(&poch(Sign::Plus, 1, 1, n - 1) * &poch(Sign::Minus, 1, 1, n - 1));
            let q_int = &om(ni) / &om(1);
            let minus_q_int = prod(&[&int(-1), &q(1), &q_int]);
            out.push(identity("factor (q^2;q^2)", left.clone(), split));
            out.push(congruence(
                "first",
                left.clone(),
                &minus_q_int / &poch(Sign::Minus, 1, 1, n - 1),
                2,
            ));
            out.push(congruence(
                "second",
                &minus_q_int / &poch(Sign::Minus, 1, 1, n - 1),
                minus_q_int.clone(),
                2,
            ));
            out.push(congruence("combined", left, minus_q_int, 2));
        }
        B5 => {
            for k in c.ks_without_h() {
                out.push(congruence(format!("k={k}"), c.a(k), c.b(k), 2));
            }
        }
        B8 => {
            out.push(identity(
                "split at h",
                c.lhs_b(),
                Expr::sum(c.ks_without_h().map(|k| c.a(k))).add(c.a(h).into()),
            ));
            out.push(congruence(
                "main",
                c.lhs_b(),
                c.sum_b_without_h().add(c.a(h).into()),
                2,
            ));
        }
        MorleyB9 => {
            let neg = poch(Sign::Minus, 1, 1, n - 1);
            let rhs = prod(&[&int(sigma), &q((1 - ni * ni) / 4), &neg, &neg]);
            out.push(congruence("main", qbin2(n - 1, h), rhs, 2));
        }
        B10 => {
            let explicit = &prod(&[
                &q((ni * ni - 4 * ni + 3) / 4),
                &poch(Sign::Plus, 1, 2, n),
                &qbin2(n - 1, h),
            ]) / &(&c.t() * &poch(Sign::Plus, 2, 2, n - 1));
            out.push(identity("k=h form", c.a(h), explicit));
            let morley = prod(&[&int(sigma), &q(1 - ni), &c.ratio_lhs()]);
            out.push(congruence("after q-Morley", c.a(h), morley, 2));
            let central = &prod(&[&int(sigma), &q(1 - ni), &c.central()]) / &op(ni);
            out.push(congruence("central form", c.a(h), central, 2));
        }
        RatioIdentity => {
            out.push(identity("main", c.ratio_lhs(), &c.central() / &op(ni)));
        }
        CentralQbinom => {
            let rhs = IntPoly::new(
                std::iter::once(BigInt::from(2 - ni))
                    .chain(std::iter::repeat_n(BigInt::from(0), n as usize - 1))
                    .chain(std::iter::once(BigInt::from(ni)))
                    .collect(),
            );
            out.push(congruence("main", c.central(), rhs, 2));
        }
        B11 => {
            let two_minus = Expr::from(int(2)).sub(Expr::from(&int(ni) * &c.t()));
            let middle = Expr::from(&prod(&[&int(sigma), &q(1 - ni)]) / &op(ni)).mul(two_minus);
            out.push(congruence("substitute central", c.a(h), middle.clone(), 2));
            out.push(congruence("expand", middle, c.a_h_linear(), 2));
            out.push(congruence("combined", c.a(h), c.a_h_linear(), 2));
        }
        B12 => {
            let rhs = Expr::from(prod(&[&int(-1), &q(1), &c.t()])).mul(c.alternating_reciprocals());
            out.push(identity("main", c.sum_b_without_h(), rhs));
        }
        B13 => {
            let e = |sign_exp: i64, exp: i64| &int(sign_pow(sign_exp)) / &om(exp);
            let low = || Expr::sum((0..h).map(|k| e(k as i64, 2 * k as i64 + 1)));
            let reflected =
                Expr::sum((0..h).map(|k| e(ni - k as i64 - 1, 2 * ni - 2 * k as i64 - 1)));
            let reduced = Expr::sum((0..h).map(|k| {
                let ki = k as i64;
                &prod(&[&int(sign_pow(ki)), &q(2 * ki + 1)]) / &om(2 * ki + 1)
            }));
            let folded = low().sub(reduced);
            out.push(identity(
                "reindex",
                c.alternating_reciprocals(),
                low().add(reflected.clone()),
            ));
            out.push(congruence(
                "reduce q^{2n}",
                low().add(reflected),
                folded.clone(),
                1,
            ));
            out.push(identity("telescope", folded, int(c.alt)));
            out.push(congruence(
                "main",
                c.alternating_reciprocals(),
                int(c.alt),
                1,
            ));
        }
        B14 => {
            let rhs = prod(&[&int(-c.alt), &q(1), &c.t()]);
            out.push(congruence("main", c.sum_b_without_h(), rhs, 2));
        }
        B15 => {
            let rhs = Expr::from(prod(&[&int(-c.alt), &q(1), &c.t()])).add(c.a_h_linear());
            out.push(congruence("main", c.lhs_b(), rhs, 2));
        }
        B16 => {
            require_residue(id, n, 1)?;
            let rhs = Expr::from(q(1 - ni)).add(c.lin(1 - ni, 2, 1).into());
            out.push(congruence("main", c.lhs_b(), rhs, 2));
        }
        B18 => {
            require_residue(id, n, 1)?;
            let half = ni * (ni - 1) / 2;
            let lhs = q((ni - 1) * (ni - 1) - half);
            out.push(identity(
                "exponent split",
                lhs.clone(),
                &q(1 - ni) * &q(half),
            ));
            let lemma = Expr::from(q(1 - ni)).add(c.lin(-(ni - 1), 2, 1 - ni).into());
            out.push(congruence("q-power lemma", lhs.clone(), lemma, 2));
            out.push(congruence(
                "main",
                lhs,
                Expr::from(q(1 - ni)).add(c.lin(1 - ni, 2, 1).into()),
                2,
            ));
        }
        B19 => {
            require_residue(id, n, 3)?;
            let rhs = Expr::from(&int(-1) * &q(1 - ni)).add(c.lin(ni - 3, 2, 1).into());
            out.push(congruence("main", c.lhs_b(), rhs, 2));
        }
        B20 => {
            require_residue(id, n, 3)?;
            let upper = ni * (ni + 1) / 2;
            let lhs = &int(-1) * &q((ni - 1) * (ni - 1) - upper);
            let split = prod(&[&int(-1), &q(1 - ni), &q(ni * (ni - 3) / 2)]);
            out.push(identity("exponent split", lhs.clone(), split));
            let lemma = Expr::from(&int(-1) * &q(1 - ni)).add(c.lin(ni - 3, 2, 1 - ni).into());
            out.push(congruence("q-power lemma", lhs.clone(), lemma, 2));
            let rhs = Expr::from(&int(-1) * &q(1 - ni)).add(c.lin(ni - 3, 2, 1).into());
            out.push(congruence("main", lhs, rhs, 2));
        }
        QpowLemma(s) => {
            let lhs = q(s * ni);
            if s >= 1 {
                let geometric = IntPoly::new(
                    (0..s as usize * n as usize)
                        .map(|i| BigInt::from(u8::from(i % n as usize == 0)))
                        .collect(),
                );
                let telescoped = Expr::from(int(1)).sub(Expr::from(c.t()).mul(geometric.into()));
                out.push(identity("telescope", lhs.clone(), telescoped));
            }
            out.push(congruence(
                "main",
                lhs,
                Expr::from(int(1)).add((&int(-s) * &c.t()).into()),
                2,
            ));
        }
        C3 => {
            for k in 0..n {
                out.push(identity(
                    format!("k={k}"),
                    c.c(k),
                    &q(2 * k as i64) * &c.a(k),
                ));
            }
        }
        C4 => {
            for k in c.ks_without_h() {
                let ki = k as i64;
                let mid =
                    &prod(&[&q(1), &c.t(), &int(sign_pow(ki + 1)), &q(2 * ki)]) / &om(2 * ki + 1);
                let split = Expr::from(&int(sign_pow(ki)) * &c.t()).add((&q(-1) * &c.b(k)).into());
                out.push(congruence(format!("k={k}"), c.c(k), mid.clone(), 2));
                out.push(identity(format!("k={k} split"), mid, split));
            }
        }
        C5 => {
            let sum_c = Expr::sum(c.ks_without_h().map(|k| c.c(k)));
            let signs = Expr::sum(c.ks_without_h().map(|k| int(sign_pow(k as i64))));
            let first = Expr::from(c.t())
                .mul(signs)
                .add(Expr::from(q(-1)).mul(c.sum_b_without_h()));
            let second = Expr::from(&int(1 - sigma) * &c.t()).add((&int(-c.alt) * &c.t()).into());
            let last = &rational(1 - sigma, 2) * &c.t();
            out.push(congruence("termwise", sum_c.clone(), first.clone(), 2));
            out.push(congruence("evaluate sums", first, second.clone(), 2));
            out.push(identity("collect", second, last.clone()));
            out.push(congruence("main", sum_c, last, 2));
        }
        C6 => {
            out.push(identity("shift", c.c(h), &q(ni - 1) * &c.a(h)));
            let rhs = Expr::from(int(sigma)).add(c.lin(sigma * (1 - ni), 2, 0).into());
            out.push(congruence("main", c.c(h), rhs, 2));
        }
        C7 => {
            let rhs = Expr::from(&rational(1 - sigma, 2) * &c.t())
                .add(int(sigma).into())
                .add(c.lin(sigma * (1 - ni), 2, 0).into());
            out.push(congruence("main", c.lhs_c(), rhs, 2));
        }
        C8 => {
            require_residue(id, n, 1)?;
            let rhs = Expr::from(int(1)).add(c.lin(1 - ni, 2, 0).into());
            out.push(congruence("main", c.lhs_c(), rhs, 2));
        }
        C9 => {
            require_residue(id, n, 1)?;
            let lhs = q(ni * ni - ni * (ni + 1) / 2);
            out.push(identity("exponent", lhs.clone(), q(ni * (ni - 1) / 2)));
            out.push(congruence(
                "main",
                lhs,
                Expr::from(int(1)).add(c.lin(1 - ni, 2, 0).into()),
                2,
            ));
        }
        C10 => {
            require_residue(id, n, 3)?;
            let rhs = Expr::from(int(-1)).add(c.lin(ni + 1, 2, 0).into());
            out.push(congruence("main", c.lhs_c(), rhs, 2));
        }
        C11 => {
            require_residue(id, n, 3)?;
            let lhs = &int(-1) * &q(ni * ni - ni * (ni - 1) / 2);
            out.push(identity(
                "exponent",
                lhs.clone(),
                &int(-1) * &q(ni * (ni + 1) / 2),
            ));
            out.push(congruence(
                "main",
                lhs,
                Expr::from(int(-1)).add(c.lin(ni + 1, 2, 0).into()),
                2,
            ));
        }
        other => return Err(domain(format!("{other} is not a proof step"))),
    }
    Ok(out)
}

impl Verifier {
    /// Verifies every part of one proof step for one `n`.
    pub fn proof_step(&self, id: CheckId, n: u64) -> Result<CheckResult, CheckError> {
        self.run_step(id, n, None)
    }

    /// One index `k` of a step quantified over `k`.
    pub fn proof_step_at(&self, id: CheckId, n: u64, k: u64) -> Result<CheckResult, CheckError> {
        self.run_step(id, n, Some(k))
    }

    fn run_step(&self, id: CheckId, n: u64, k: Option<u64>) -> Result<CheckResult, CheckError> {
        require_odd(n, 3)?;
        let start = Instant::now();
        let ctx = Ctx::new(n);
        let mut parts = parts(id, &ctx)?;
        if let Some(k) = k {
            let tag = format!("k={k}");
            parts.retain(|p| p.label == tag || p.label.starts_with(&format!("{tag} ")));
            if parts.is_empty() {
                return Err(domain(format!("{id} has no part for k = {k} at n = {n}")));
            }
        }
        let mut valuation = Valuation::Infinite;
        let mut lower_bound = false;
        let mut failed = Vec::new();
        let mut engines = Vec::new();
        for part in &parts {
            let (v, engine) = self.decide(n, &part.lhs, &part.rhs, part.mode)?;
            if !v.holds {
                failed.push(part.label.clone());
            }
            if v.valuation < valuation {
                valuation = v.valuation;
                lower_bound = v.valuation_is_lower_bound;
            } else if v.valuation == valuation {
                lower_bound |= v.valuation_is_lower_bound;
            }
            if !engines.contains(&engine) {
                engines.push(engine);
            }
        }
        let mut r = CheckResult::new(id, n, id.native_power());
        if let Some(k) = k {
            r = r.param("k", ParamValue::Int(k as i64));
        }
        r.holds = failed.is_empty();
        r.valuation = valuation;
        r.valuation_is_lower_bound = lower_bound;
        let engines: Vec<String> = engines.iter().map(|e| e.to_string()).collect();
        r.detail = if failed.is_empty() {
            let noun = if parts.len() == 1 {
                "part holds"
            } else {
                "parts hold"
            };
            format!("{} {noun} ({})", parts.len(), engines.join("+"))
        } else {
            format!("failed: {}", failed.join(", "))
        };
        if id == CheckId::B14 && r.holds && k.is_none() {
            // the difference is -q(1 - q^n) times the mod-Φ_n difference of the previous step
            let b13 = self.proof_step(CheckId::B13, n)?;
            r.detail = format!(
                "{}; valuation {} + 1 from the factor q(1 - q^n)",
                r.detail, b13.valuation
            );
        }
        Ok(r.timed(start))
    }

    /// Every step of the chosen proof for `n`, in proof order.
    pub fn proof_chain(&self, n: u64, section: Section) -> Result<Vec<CheckResult>, CheckError> {
        require_odd(n, 3)?;
        chain_steps(n, section)
            .into_iter()
            .map(|id| self.proof_step(id, n))
            .collect()
    }
}

/// Step identifiers of a chain replay, in proof order.
pub fn chain_steps(n: u64, section: Section) -> Vec<CheckId> {
    use CheckId::*;
    let one_mod_four = n % 4 == 1;
    let mut out = Vec::new();
    if matches!(section, Section::Two | Section::Both) {
        out.extend([
            B2Identity,
            QbinomNegk,
            B3,
            B4,
            B5,
            B8,
            MorleyB9,
            B10,
            RatioIdentity,
            CentralQbinom,
            B11,
            B12,
            B13,
            B14,
            B15,
        ]);
        out.push(if one_mod_four { B16 } else { B19 });
        out.extend(qpow_lemma_exponents(n).into_iter().map(QpowLemma));
        out.push(if one_mod_four { B18 } else { B20 });
    }
    if matches!(section, Section::Three | Section::Both) {
        out.extend([C2Identity, C3, C4, C5, C6, C7]);
        out.extend(if one_mod_four { [C8, C9] } else { [C10, C11] });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::series::series_lhs;

    #[test]
    fn b_nk_at_zero() {
        // -q (1 - q^n) / (1 - q)
        let n = 5;
        let expected = RatFunc::from_poly(IntPoly::new(
            [0, -1, -1, -1, -1, -1]
                .iter()
                .map(|&c| BigInt::from(c))
                .collect(),
        ));
        assert_eq!(b_nk(n, 0).unwrap(), expected);
    }

    #[test]
    fn c_over_a_is_q_power() {
        let (n, k) = (7, 3);
        let ratio = c_nk(n, k)
            .unwrap()
            .checked_div(&a_nk(n, k).unwrap())
            .unwrap();
        assert_eq!(ratio, RatFunc::q_pow(6));
    }

    #[test]
    fn sum_of_a_matches_transformed_series() {
        let n = 5;
        let sum = (0..n).fold(RatFunc::zero(), |acc, k| &acc + &a_nk(n, k).unwrap());
        let lhs = &series_lhs(CheckId::B1, n).unwrap() * &RatFunc::q_pow(16);
        assert_eq!(sum, lhs);
    }

    #[test]
    fn step_examples() {
        let v = Verifier::default();
        assert!(v.proof_step(CheckId::MorleyB9, 5).unwrap().holds);
        assert!(v.proof_step(CheckId::QpowLemma(3), 9).unwrap().holds);
        assert!(v.proof_step(CheckId::CentralQbinom, 3).unwrap().holds);
    }

    #[test]
    fn case_split_steps_reject_wrong_residue() {
        let v = Verifier::default();
        assert!(matches!(
            v.proof_step(CheckId::B16, 7),
            Err(CheckError::Domain(_))
        ));
        assert!(matches!(
            v.proof_step(CheckId::C10, 9),
            Err(CheckError::Domain(_))
        ));
        assert!(matches!(
            v.proof_step(CheckId::B3, 1),
            Err(CheckError::Domain(_))
        ));
        assert!(matches!(
            v.proof_step(CheckId::A1, 5),
            Err(CheckError::Domain(_))
        ));
    }

    #[test]
    fn small_chains_hold() {
        let v = Verifier::default();
        for n in [3u64, 5, 7, 9] {
            for r in v.proof_chain(n, Section::Both).unwrap() {
                assert!(r.holds, "n={n} {}: {}", r.id, r.detail);
            }
        }
    }

    #[test]
    fn single_index_parts() {
        let v = Verifier::default();
        let r = v.proof_step_at(CheckId::B3, 7, 1).unwrap();
        assert!(r.holds);
        assert_eq!(r.params.get("k"), Some(&ParamValue::Int(1)));
        assert!(matches!(
            v.proof_step_at(CheckId::B3, 7, 3),
            Err(CheckError::Domain(_))
        ));
        assert!(matches!(
            v.proof_step_at(CheckId::B4, 7, 0),
            Err(CheckError::Domain(_))
        ));
    }

    #[test]
    fn chain_lengths() {
        assert_eq!(
            chain_steps(25, Section::Two).len(),
            15 + 2 + qpow_lemma_exponents(25).len()
        );
        assert_eq!(chain_steps(3, Section::Three).len(), 8);
        assert_eq!(qpow_lemma_exponents(3), vec![1, 2, 3, 0]);
    }
}
