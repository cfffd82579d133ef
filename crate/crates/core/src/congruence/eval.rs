//! Evaluation of q-series expressions for congruence decisions.
//!
//! An [`Expr`] is built from symbolic [`QProduct`] terms, explicit
//! polynomials, finite sums of products, and ring operations. Two
//! [`Evaluator`]s interpret it:
//!
//! * [`ExactEvaluator`] produces a [`Fraction`] whose denominator stays a
//!   symbolic product of binomials `1 ± q^j`. Common denominators are unions
//!   of factor multisets, so no polynomial gcd is ever taken, and the
//!   Φ_n-adic valuation of a denominator is read off its factors.
//! * [`ResidueEvaluator`] works in [`CyclicRing`] `ℤ[q]/(q^n - 1)^M`, keeping
//!   numerator and a unit denominator separately. Binomials `1 - q^{an}` are
//!   split as `-t u_a` with `t = q^n - 1`, so a term such as
//!   `(1 - q^n)/(1 - q^{2n})` is handled even though neither factor is a
//!   unit.
//!
//! Sums are evaluated by Horner's rule on the symbolic term ratios
//! `t_{k+1}/t_k`, which keeps every step a sparse multiplication.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use thiserror::Error;

use super::{poly_valuation, poly_valuation_capped, CongruenceVerdict, CyclicRing, Valuation};
use crate::cyclotomic::{binomial_factor_indices, CyclotomicCache};
use crate::qseries::{MonomialParam, QProduct, Sign};
use crate::{IntPoly, RatFunc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("denominator factor 1 - ({factor}) is not a unit modulo Φ_{n}")]
    NonUnitDenominator { factor: MonomialParam, n: u64 },
    #[error("a term has negative Φ_{n}-adic valuation")]
    NegativeValuation { n: u64 },
    #[error("modulus power {requested} exceeds the ring power {available}")]
    PowerTooHigh { requested: u32, available: u32 },
}

/// A q-series expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Product(QProduct),
    Poly(IntPoly),
    /// A finite sum of products, evaluated by Horner's rule.
    Sum(Vec<QProduct>),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Neg(Box<Expr>),
}

impl Expr {
    pub fn integer(c: i64) -> Self {
        Expr::Product(QProduct::integer(c))
    }

    pub fn q_pow(e: i64) -> Self {
        Expr::Product(QProduct::q_pow(e))
    }

    pub fn sum(terms: impl IntoIterator<Item = QProduct>) -> Self {
        Expr::Sum(terms.into_iter().collect())
    }
}

impl Add for Expr {
    type Output = Expr;

    fn add(self, other: Expr) -> Expr {
        match self {
            Expr::Add(mut v) => {
                v.push(other);
                Expr::Add(v)
            }
            e => Expr::Add(vec![e, other]),
        }
    }
}

impl Sub for Expr {
    type Output = Expr;

    fn sub(self, other: Expr) -> Expr {
        self + (-other)
    }
}

impl Mul for Expr {
    type Output = Expr;

    fn mul(self, other: Expr) -> Expr {
        match self {
            Expr::Mul(mut v) => {
                v.push(other);
                Expr::Mul(v)
            }
            e => Expr::Mul(vec![e, other]),
        }
    }
}

impl Neg for Expr {
    type Output = Expr;

    fn neg(self) -> Expr {
        match self {
            Expr::Neg(e) => *e,
            e => Expr::Neg(Box::new(e)),
        }
    }
}

impl From<QProduct> for Expr {
    fn from(p: QProduct) -> Self {
        Expr::Product(p)
    }
}

impl From<IntPoly> for Expr {
    fn from(p: IntPoly) -> Self {
        Expr::Poly(p)
    }
}

/// Does `Φ_n` divide `1 - a`?
fn phi_divides(a: MonomialParam, n: u64) -> bool {
    match a.sign {
        Sign::Plus => a.exponent.is_multiple_of(n),
        Sign::Minus => (2 * a.exponent).is_multiple_of(n) && !a.exponent.is_multiple_of(n),
    }
}

/// An interpretation of [`Expr`] in some ring of fractions.
pub trait Evaluator {
    type Value: Clone;

    fn n(&self) -> u64;
    fn product(&self, p: &QProduct) -> Result<Self::Value, EvalError>;
    fn poly(&self, p: &IntPoly) -> Self::Value;
    /// Sum of consecutive non-zero terms.
    fn run(&self, terms: &[QProduct]) -> Result<Self::Value, EvalError>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn neg(&self, a: &Self::Value) -> Self::Value;
    /// Verdict on `lhs ≡ rhs (mod Φ_n^m)`.
    fn verdict(
        &self,
        lhs: &Self::Value,
        rhs: &Self::Value,
        m: u32,
    ) -> Result<CongruenceVerdict, EvalError>;

    fn eval(&self, e: &Expr) -> Result<Self::Value, EvalError> {
        match e {
            Expr::Product(p) => self.product(p),
            Expr::Poly(p) => Ok(self.poly(p)),
            Expr::Sum(terms) => {
                let mut acc = self.poly(&IntPoly::zero());
                for run in terms.split(|t| t.is_zero()).filter(|r| !r.is_empty()) {
                    acc = self.add(&acc, &self.run(run)?);
                }
                Ok(acc)
            }
            Expr::Add(parts) => {
                let mut acc = self.poly(&IntPoly::zero());
                for p in parts {
                    acc = self.add(&acc, &self.eval(p)?);
                }
                Ok(acc)
            }
            Expr::Mul(parts) => {
                let mut acc = self.poly(&IntPoly::one());
                for p in parts {
                    acc = self.mul(&acc, &self.eval(p)?);
                }
                Ok(acc)
            }
            Expr::Neg(inner) => Ok(self.neg(&self.eval(inner)?)),
        }
    }

    /// Decides `lhs ≡ rhs (mod Φ_n^m)`; `m = 0` asks only for the valuation.
    fn congruence(&self, lhs: &Expr, rhs: &Expr, m: u32) -> Result<CongruenceVerdict, EvalError> {
        if let (Expr::Product(a), Expr::Product(b)) = (lhs, rhs) {
            if a == b {
                return Ok(CongruenceVerdict::identical());
            }
        }
        let l = self.eval(lhs)?;
        let r = self.eval(rhs)?;
        self.verdict(&l, &r, m)
    }
}

/// One side of a split [`QProduct`]: `coeff · q^shift · ∏ (1 - a)^m`.
struct Part {
    coeff: BigInt,
    shift: i64,
    factors: Vec<(MonomialParam, u64)>,
}

/// Splits `p` into numerator and denominator parts; the denominator
/// coefficient is positive and the q-power is split by sign.
fn split(p: &QProduct) -> (Part, Part) {
    let e = p.q_exp();
    (
        Part {
            coeff: p.coeff().numer().clone(),
            shift: e.max(0),
            factors: p.numerator_factors().collect(),
        },
        Part {
            coeff: p.coeff().denom().clone(),
            shift: (-e).max(0),
            factors: p.denominator_factors().collect(),
        },
    )
}

fn mul_binomials(mut p: IntPoly, factors: &[(MonomialParam, u64)]) -> IntPoly {
    for &(a, m) in factors {
        let c = a.sign.to_bigint();
        for _ in 0..m {
            p = p.mul_one_minus_monomial(&c, a.exponent as usize);
        }
    }
    p
}

fn apply_part(p: &IntPoly, part: &Part) -> IntPoly {
    let mut out = if part.coeff.is_one() {
        p.clone()
    } else {
        p.scale(&part.coeff)
    };
    if part.shift > 0 {
        out = out.shift(part.shift as usize);
    }
    mul_binomials(out, &part.factors)
}

/// `constant · q^shift · ∏ (1 - a)^m`, kept symbolic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Denom {
    constant: BigInt,
    shift: u64,
    factors: BTreeMap<MonomialParam, u64>,
}

impl Denom {
    pub fn one() -> Self {
        Denom {
            constant: BigInt::one(),
            shift: 0,
            factors: BTreeMap::new(),
        }
    }

    pub fn constant(&self) -> &BigInt {
        &self.constant
    }

    pub fn shift(&self) -> u64 {
        self.shift
    }

    pub fn factors(&self) -> impl Iterator<Item = (MonomialParam, u64)> + '_ {
        self.factors.iter().map(|(&a, &m)| (a, m))
    }

    fn absorb(&mut self, part: &Part) {
        self.constant *= &part.coeff;
        self.shift += part.shift as u64;
        for &(a, m) in &part.factors {
            *self.factors.entry(a).or_insert(0) += m;
        }
    }

    fn product(&self, other: &Denom) -> Denom {
        let mut out = self.clone();
        out.constant *= &other.constant;
        out.shift += other.shift;
        for (&a, &m) in &other.factors {
            *out.factors.entry(a).or_insert(0) += m;
        }
        out
    }

    /// Least common multiple by factor-wise maximum.
    fn lcm(&self, other: &Denom) -> Denom {
        let mut factors = self.factors.clone();
        for (&a, &m) in &other.factors {
            let e = factors.entry(a).or_insert(0);
            *e = (*e).max(m);
        }
        Denom {
            constant: self.constant.lcm(&other.constant),
            shift: self.shift.max(other.shift),
            factors,
        }
    }

    /// `self / sub` as a multiplier part; `sub` must divide `self`.
    fn cofactor(&self, sub: &Denom) -> Part {
        Part {
            coeff: &self.constant / &sub.constant,
            shift: (self.shift - sub.shift) as i64,
            factors: self
                .factors
                .iter()
                .filter_map(|(&a, &m)| {
                    let k = m - sub.factors.get(&a).copied().unwrap_or(0);
                    (k > 0).then_some((a, k))
                })
                .collect(),
        }
    }

    fn phi_multiplicity(&self, n: u64) -> u64 {
        self.factors()
            .filter(|&(a, _)| phi_divides(a, n))
            .map(|(_, m)| m)
            .sum()
    }
}

/// `num / den` with an expanded numerator and symbolic denominator. Not
/// reduced; [`Fraction::to_ratfunc`] gives the canonical value.
#[derive(Clone, Debug, PartialEq)]
pub struct Fraction {
    num: IntPoly,
    den: Denom,
}

impl Fraction {
    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den(&self) -> &Denom {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Canonical value, cancelling common cyclotomic factors.
    pub fn to_ratfunc(&self) -> RatFunc {
        if self.num.is_zero() {
            return RatFunc::zero();
        }
        let mut num = self.num.clone();
        let mut negate = false;
        let mut multiset: BTreeMap<u64, u64> = BTreeMap::new();
        for (a, m) in self.den.factors() {
            // 1 - q^j = -∏ Φ_d, while 1 + q^j = ∏ Φ_d
            if a.sign == Sign::Plus && m % 2 == 1 {
                negate = !negate;
            }
            for d in binomial_factor_indices(a.sign == Sign::Minus, a.exponent) {
                *multiset.entry(d).or_insert(0) += m;
            }
        }
        let c = if negate {
            -self.den.constant.clone()
        } else {
            self.den.constant.clone()
        };
        let mut den = IntPoly::constant(c);
        let mut cache = CyclotomicCache::new();
        for (d, mut left) in multiset {
            let phi = cache.get(d);
            while left > 0 {
                let (quot, rem) = num.div_rem_monic(phi);
                if !rem.is_zero() {
                    break;
                }
                num = quot;
                left -= 1;
            }
            if left > 0 {
                den = &den * &phi.pow(left as u32);
            }
        }
        let common = (num.low_degree() as u64).min(self.den.shift);
        let num = num.shift_down(common as usize);
        let den = den.shift((self.den.shift - common) as usize);
        RatFunc::normalize_scalars(num, den)
    }
}

/// Exact evaluation in ℚ(q) with symbolic denominators.
#[derive(Clone, Debug)]
pub struct ExactEvaluator {
    n: u64,
    phi: IntPoly,
}

impl ExactEvaluator {
    pub fn new(n: u64, phi: IntPoly) -> Self {
        ExactEvaluator { n, phi }
    }

    /// Canonical value of an expression.
    pub fn eval_ratfunc(&self, e: &Expr) -> Result<RatFunc, EvalError> {
        Ok(self.eval(e)?.to_ratfunc())
    }
}

impl Evaluator for ExactEvaluator {
    type Value = Fraction;

    fn n(&self) -> u64 {
        self.n
    }

    fn product(&self, p: &QProduct) -> Result<Fraction, EvalError> {
        if p.is_zero() {
            return Ok(self.poly(&IntPoly::zero()));
        }
        let (num, den) = split(p);
        let mut d = Denom::one();
        d.absorb(&den);
        Ok(Fraction {
            num: apply_part(&IntPoly::one(), &num),
            den: d,
        })
    }

    fn poly(&self, p: &IntPoly) -> Fraction {
        Fraction {
            num: p.clone(),
            den: Denom::one(),
        }
    }

    fn run(&self, terms: &[QProduct]) -> Result<Fraction, EvalError> {
        // V_k = 1 + r_k V_{k+1}, carried as n_acc / d_acc with d_acc = expand(den)
        let mut n_acc = IntPoly::one();
        let mut d_acc = IntPoly::one();
        let mut den = Denom::one();
        for k in (0..terms.len() - 1).rev() {
            let (alpha, beta) = split(&(&terms[k + 1] / &terms[k]));
            let scaled = apply_part(&d_acc, &beta);
            n_acc = &scaled + &apply_part(&n_acc, &alpha);
            d_acc = scaled;
            den.absorb(&beta);
        }
        let (head_num, head_den) = split(&terms[0]);
        den.absorb(&head_den);
        Ok(Fraction {
            num: apply_part(&n_acc, &head_num),
            den,
        })
    }

    fn add(&self, a: &Fraction, b: &Fraction) -> Fraction {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        if a.den == b.den {
            return Fraction {
                num: &a.num + &b.num,
                den: a.den.clone(),
            };
        }
        let den = a.den.lcm(&b.den);
        let num =
            &apply_part(&a.num, &den.cofactor(&a.den)) + &apply_part(&b.num, &den.cofactor(&b.den));
        Fraction { num, den }
    }

    fn mul(&self, a: &Fraction, b: &Fraction) -> Fraction {
        Fraction {
            num: &a.num * &b.num,
            den: a.den.product(&b.den),
        }
    }

    fn neg(&self, a: &Fraction) -> Fraction {
        Fraction {
            num: -&a.num,
            den: a.den.clone(),
        }
    }

    fn verdict(
        &self,
        lhs: &Fraction,
        rhs: &Fraction,
        m: u32,
    ) -> Result<CongruenceVerdict, EvalError> {
        let d = self.add(lhs, &self.neg(rhs));
        if d.is_zero() {
            return Ok(CongruenceVerdict::identical());
        }
        let v_den = d.den.phi_multiplicity(self.n) as i64;
        let v_num = poly_valuation(&d.num, &self.phi) as i64;
        // the reduced denominator keeps Φ_n exactly when v_num < v_den
        Ok(CongruenceVerdict::new(
            Valuation::Finite(v_num - v_den),
            v_num >= v_den,
            m,
        ))
    }
}

/// A fraction in [`CyclicRing`] whose denominator is a unit modulo `Φ_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidueFraction {
    num: IntPoly,
    den: IntPoly,
}

impl ResidueFraction {
    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den(&self) -> &IntPoly {
        &self.den
    }
}

/// Evaluation modulo `(q^n - 1)^M`, deciding congruences modulo `Φ_n^m`
/// for `m ≤ M`.
#[derive(Clone, Debug)]
pub struct ResidueEvaluator {
    ring: CyclicRing,
    phi: IntPoly,
    /// `Φ_n^i` for `i = 1..=M`.
    phi_powers: Vec<IntPoly>,
}

impl ResidueEvaluator {
    pub fn new(n: u64, power: u32, phi: IntPoly) -> Self {
        let phi_powers = (1..=power).map(|i| phi.pow(i)).collect();
        ResidueEvaluator {
            ring: CyclicRing::new(n, power),
            phi,
            phi_powers,
        }
    }

    pub fn ring(&self) -> &CyclicRing {
        &self.ring
    }

    fn constant(c: &BigInt) -> IntPoly {
        IntPoly::constant(c.clone())
    }

    fn is_extractable(&self, a: MonomialParam) -> bool {
        a.sign == Sign::Plus && a.exponent.is_multiple_of(self.ring.n())
    }

    /// Multiplies by a numerator part with a signed q-power.
    fn apply_numerator(
        &self,
        p: &IntPoly,
        coeff: &BigInt,
        shift: i64,
        factors: &[(MonomialParam, u64)],
    ) -> IntPoly {
        let mut out = if coeff.is_one() {
            p.clone()
        } else {
            p.scale(coeff)
        };
        if shift != 0 {
            out = self.ring.mul_q_pow(&out, shift);
        }
        for &(a, m) in factors {
            for _ in 0..m {
                out = self.ring.mul_one_minus(&out, a.sign, a.exponent as i64);
            }
        }
        out
    }

    /// Multiplies by a denominator part, every factor of which must be a unit.
    fn apply_denominator(
        &self,
        p: &IntPoly,
        coeff: &BigInt,
        factors: &[(MonomialParam, u64)],
    ) -> Result<IntPoly, EvalError> {
        let n = self.ring.n();
        let mut out = if coeff.is_one() {
            p.clone()
        } else {
            p.scale(coeff)
        };
        for &(a, m) in factors {
            if phi_divides(a, n) {
                return Err(EvalError::NonUnitDenominator { factor: a, n });
            }
            for _ in 0..m {
                out = self.ring.mul_one_minus(&out, a.sign, a.exponent as i64);
            }
        }
        Ok(out)
    }
}

impl Evaluator for ResidueEvaluator {
    type Value = ResidueFraction;

    fn n(&self) -> u64 {
        self.ring.n()
    }

    fn product(&self, p: &QProduct) -> Result<ResidueFraction, EvalError> {
        if p.is_zero() {
            return Ok(self.poly(&IntPoly::zero()));
        }
        let n = self.ring.n();
        let mut num = self
            .ring
            .mul_q_pow(&Self::constant(p.coeff().numer()), p.q_exp());
        let mut den = Self::constant(p.coeff().denom());
        let mut t_count: i64 = 0;
        let mut negate = false;
        for (a, m) in p.factors() {
            if self.is_extractable(a) {
                // 1 - q^{jn} = -t u_j
                let u = self.ring.unit_cofactor(a.exponent / n);
                t_count += m;
                negate ^= m % 2 != 0;
                for _ in 0..m.unsigned_abs() {
                    if m > 0 {
                        num = self.ring.mul(&num, &u);
                    } else {
                        den = self.ring.mul(&den, &u);
                    }
                }
            } else if m > 0 {
                for _ in 0..m {
                    num = self.ring.mul_one_minus(&num, a.sign, a.exponent as i64);
                }
            } else {
                den = self.apply_denominator(&den, &BigInt::one(), &[(a, m.unsigned_abs())])?;
            }
        }
        if t_count < 0 {
            return Err(EvalError::NegativeValuation { n });
        }
        num = self.ring.mul_t_pow(&num, t_count as u32);
        if negate {
            num = -num;
        }
        Ok(ResidueFraction { num, den })
    }

    fn poly(&self, p: &IntPoly) -> ResidueFraction {
        ResidueFraction {
            num: self.ring.reduce(p.clone()),
            den: IntPoly::one(),
        }
    }

    fn run(&self, terms: &[QProduct]) -> Result<ResidueFraction, EvalError> {
        let mut n_acc = IntPoly::one();
        let mut d_acc = IntPoly::one();
        for k in (0..terms.len() - 1).rev() {
            let r = &terms[k + 1] / &terms[k];
            let num_factors: Vec<_> = r.numerator_factors().collect();
            let den_factors: Vec<_> = r.denominator_factors().collect();
            let scaled = self.apply_denominator(&d_acc, r.coeff().denom(), &den_factors)?;
            let advanced = self.apply_numerator(&n_acc, r.coeff().numer(), r.q_exp(), &num_factors);
            n_acc = &scaled + &advanced;
            d_acc = scaled;
        }
        let head = self.product(&terms[0])?;
        Ok(ResidueFraction {
            num: self.ring.mul(&head.num, &n_acc),
            den: self.ring.mul(&head.den, &d_acc),
        })
    }

    fn add(&self, a: &ResidueFraction, b: &ResidueFraction) -> ResidueFraction {
        if a.num.is_zero() {
            return b.clone();
        }
        if b.num.is_zero() {
            return a.clone();
        }
        if a.den == b.den {
            return ResidueFraction {
                num: &a.num + &b.num,
                den: a.den.clone(),
            };
        }
        ResidueFraction {
            num: &self.ring.mul(&a.num, &b.den) + &self.ring.mul(&b.num, &a.den),
            den: self.ring.mul(&a.den, &b.den),
        }
    }

    fn mul(&self, a: &ResidueFraction, b: &ResidueFraction) -> ResidueFraction {
        ResidueFraction {
            num: self.ring.mul(&a.num, &b.num),
            den: self.ring.mul(&a.den, &b.den),
        }
    }

    fn neg(&self, a: &ResidueFraction) -> ResidueFraction {
        ResidueFraction {
            num: -&a.num,
            den: a.den.clone(),
        }
    }

    fn verdict(
        &self,
        lhs: &ResidueFraction,
        rhs: &ResidueFraction,
        m: u32,
    ) -> Result<CongruenceVerdict, EvalError> {
        let available = self.ring.power();
        if m > available {
            return Err(EvalError::PowerTooHigh {
                requested: m,
                available,
            });
        }
        let diff = &self.ring.mul(&lhs.num, &rhs.den) - &self.ring.mul(&rhs.num, &lhs.den);
        let den = self.ring.mul(&lhs.den, &rhs.den);
        let coprime = !den.rem_monic(&self.phi).is_zero();
        // the class modulo Φ_n^M determines the valuation only below M
        let reduced = diff.rem_monic(&self.phi_powers[available as usize - 1]);
        if reduced.is_zero() {
            return Ok(CongruenceVerdict {
                holds: coprime,
                valuation: Valuation::Finite(available as i64),
                denominator_coprime: coprime,
                valuation_is_lower_bound: true,
            });
        }
        let v = poly_valuation_capped(&reduced, &self.phi, available as u64);
        Ok(CongruenceVerdict::new(
            Valuation::Finite(v as i64),
            coprime,
            m,
        ))
    }
}
