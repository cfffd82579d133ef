//! q-integers, q-shifted factorials and q-binomial coefficients.
//!
//! Besides the expanded [`IntPoly`] forms, this module provides
//! [`QProduct`], a symbolic product `c · q^e · ∏ (1 - a_i)^{m_i}` over monomial
//! arguments `a_i = ±q^{j_i}`. Every summand that occurs in the verified
//! congruences has this shape, and keeping it symbolic makes cancellation,
//! term ratios and Φ-adic valuations exact and cheap.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Div, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::cyclotomic::binomial_factor_indices;
use crate::IntPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QSeriesError {
    /// An exact division that must succeed did not; indicates a bug.
    #[error("q-binomial [{n} choose {k}] in base q^{s} is not an integral polynomial")]
    InternalNonIntegral { n: u64, k: i64, s: u64 },
    #[error("cannot parse monomial `{0}` (expected forms like q, -1, -q^2)")]
    ParseMonomial(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.to_i64())
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// A monomial `±q^j` with `j ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonomialParam {
    pub sign: Sign,
    pub exponent: u64,
}

impl MonomialParam {
    pub const fn new(sign: Sign, exponent: u64) -> Self {
        MonomialParam { sign, exponent }
    }

    pub const fn plus(exponent: u64) -> Self {
        Self::new(Sign::Plus, exponent)
    }

    pub const fn minus(exponent: u64) -> Self {
        Self::new(Sign::Minus, exponent)
    }

    /// True for the constant `1`.
    pub fn is_one(&self) -> bool {
        self.sign == Sign::Plus && self.exponent == 0
    }

    pub fn to_poly(&self) -> IntPoly {
        IntPoly::monomial(self.sign.to_bigint(), self.exponent as usize)
    }
}

impl fmt::Display for MonomialParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == Sign::Minus {
            write!(f, "-")?;
        }
        match self.exponent {
            0 => write!(f, "1"),
            1 => write!(f, "q"),
            j => write!(f, "q^{j}"),
        }
    }
}

impl FromStr for MonomialParam {
    type Err = QSeriesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || QSeriesError::ParseMonomial(s.to_string());
        let t = s.trim();
        let (sign, body) = match t.strip_prefix('-') {
            Some(rest) => (Sign::Minus, rest.trim_start()),
            None => (Sign::Plus, t.strip_prefix('+').unwrap_or(t).trim_start()),
        };
        let exponent = match body {
            "1" => 0,
            "q" => 1,
            _ => body
                .strip_prefix("q^")
                .and_then(|e| e.parse::<u64>().ok())
                .ok_or_else(err)?,
        };
        Ok(MonomialParam { sign, exponent })
    }
}

/// `[n] = 1 + q + ... + q^{n-1}`.
pub fn q_int(n: u64) -> IntPoly {
    IntPoly::new(vec![BigInt::one(); n as usize])
}

/// `(a; q^s)_k = ∏_{i<k} (1 - a q^{s i})`, expanded.
pub fn pochhammer(a: MonomialParam, s: u64, k: u64) -> IntPoly {
    let c = a.sign.to_bigint();
    (0..k).fold(IntPoly::one(), |p, i| {
        p.mul_one_minus_monomial(&c, (a.exponent + s * i) as usize)
    })
}

/// The Gaussian binomial `[n choose k]` in base `q^s`; zero unless `0 ≤ k ≤ n`.
///
/// Computed as the quotient of q-shifted factorials, dividing out one factor
/// `1 - q^{s i}` at a time; every partial quotient is itself a Gaussian
/// binomial, so each division is exact.
pub fn q_binomial(n: u64, k: i64, s: u64) -> Result<IntPoly, QSeriesError> {
    if k < 0 || k as u64 > n {
        return Ok(IntPoly::zero());
    }
    let k_small = (k as u64).min(n - k as u64);
    let one = BigInt::one();
    let mut p = IntPoly::one();
    for i in 1..=k_small {
        p = p.mul_one_minus_monomial(&one, (s * (n - k_small + i)) as usize);
        p = p
            .div_one_minus_monomial(&one, (s * i) as usize)
            .ok_or(QSeriesError::InternalNonIntegral { n, k, s })?;
    }
    Ok(p)
}

/// A symbolic product `coeff · q^{q_exp} · ∏ (1 - a)^{m_a}` with every
/// argument `a = ±q^j` having `j ≥ 1` and every multiplicity non-zero.
///
/// The representation is canonical for the factors it names, so equal
/// products compare equal; the converse holds only up to rewriting
/// identities such as `1 - q^2 = (1 - q)(1 + q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QProduct {
    coeff: BigRational,
    q_exp: i64,
    factors: BTreeMap<MonomialParam, i64>,
}

impl QProduct {
    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn zero() -> Self {
        Self::constant(BigRational::zero())
    }

    pub fn constant(c: BigRational) -> Self {
        QProduct {
            coeff: c,
            q_exp: 0,
            factors: BTreeMap::new(),
        }
    }

    pub fn integer(c: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Self::constant(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `±1`.
    pub fn sign(s: Sign) -> Self {
        Self::integer(s.to_i64())
    }

    /// `(-1)^e`.
    pub fn minus_one_pow(e: i64) -> Self {
        Self::integer(if e.rem_euclid(2) == 0 { 1 } else { -1 })
    }

    /// `q^e` for any integer `e`.
    pub fn q_pow(e: i64) -> Self {
        QProduct {
            coeff: BigRational::one(),
            q_exp: e,
            factors: BTreeMap::new(),
        }
    }

    /// `1 - sign·q^exp` for any integer exponent.
    pub fn one_minus(sign: Sign, exp: i64) -> Self {
        match exp {
            0 => match sign {
                Sign::Plus => Self::zero(),
                Sign::Minus => Self::integer(2),
            },
            e if e > 0 => {
                let mut factors = BTreeMap::new();
                factors.insert(MonomialParam::new(sign, e as u64), 1);
                QProduct {
                    coeff: BigRational::one(),
                    q_exp: 0,
                    factors,
                }
            }
            e => {
                // 1 - s q^{-a} = -s q^{-a} (1 - s q^a)
                let mut p = Self::one_minus(sign, -e);
                p.coeff = -BigRational::from_integer(sign.to_bigint());
                p.q_exp = e;
                p
            }
        }
    }

    /// `(sign·q^exp; q^step)_k`, allowing negative `exp`.
    pub fn pochhammer(sign: Sign, exp: i64, step: u64, k: u64) -> Self {
        (0..k).fold(Self::one(), |acc, i| {
            &acc * &Self::one_minus(sign, exp + (step * i) as i64)
        })
    }

    /// `(a; q^s)_k` for a monomial parameter.
    pub fn pochhammer_param(a: MonomialParam, s: u64, k: u64) -> Self {
        Self::pochhammer(a.sign, a.exponent as i64, s, k)
    }

    /// `[n choose k]` in base `q^s` as a ratio of q-shifted factorials.
    pub fn q_binomial(n: u64, k: i64, s: u64) -> Self {
        if k < 0 || k as u64 > n {
            return Self::zero();
        }
        let k = k as u64;
        let mut p = Self::one();
        for i in 1..=k {
            p = &p * &Self::one_minus(Sign::Plus, (s * (n - k + i)) as i64);
            p = &p / &Self::one_minus(Sign::Plus, (s * i) as i64);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn q_exp(&self) -> i64 {
        self.q_exp
    }

    pub fn factors(&self) -> impl Iterator<Item = (MonomialParam, i64)> + '_ {
        self.factors.iter().map(|(&a, &m)| (a, m))
    }

    /// Factors with positive multiplicity.
    pub fn numerator_factors(&self) -> impl Iterator<Item = (MonomialParam, u64)> + '_ {
        self.factors()
            .filter(|&(_, m)| m > 0)
            .map(|(a, m)| (a, m as u64))
    }

    /// Factors with negative multiplicity, as positive counts.
    pub fn denominator_factors(&self) -> impl Iterator<Item = (MonomialParam, u64)> + '_ {
        self.factors()
            .filter(|&(_, m)| m < 0)
            .map(|(a, m)| (a, m.unsigned_abs()))
    }

    pub fn pow(&self, e: i64) -> Self {
        if e == 0 {
            return Self::one();
        }
        let base = if e < 0 {
            &Self::one() / self
        } else {
            self.clone()
        };
        let e = e.unsigned_abs();
        let coeff = num_traits::pow::Pow::pow(&base.coeff, e as u32);
        QProduct {
            coeff,
            q_exp: base.q_exp * e as i64,
            factors: base
                .factors
                .iter()
                .map(|(&a, &m)| (a, m * e as i64))
                .collect(),
        }
    }

    /// Multiplicity of `Φ_n` in the product (numerator minus denominator).
    pub fn phi_valuation(&self, n: u64) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(
            self.factors()
                .map(|(a, m)| {
                    let hits =
                        binomial_factor_indices(a.sign == Sign::Minus, a.exponent).contains(&n);
                    if hits {
                        m
                    } else {
                        0
                    }
                })
                .sum(),
        )
    }

    /// Value at a rational point, `None` at a pole.
    pub fn eval_rational(&self, x: &BigRational) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if x.is_zero() && self.q_exp < 0 {
            return None;
        }
        let mut acc = self.coeff.clone() * rational_pow(x, self.q_exp)?;
        for (a, m) in self.factors() {
            let v = BigRational::one()
                - BigRational::from_integer(a.sign.to_bigint())
                    * rational_pow(x, a.exponent as i64)?;
            if v.is_zero() {
                if m < 0 {
                    return None;
                }
                return Some(BigRational::zero());
            }
            acc *= rational_pow(&v, m)?;
        }
        Some(acc)
    }
}

fn rational_pow(x: &BigRational, e: i64) -> Option<BigRational> {
    if e < 0 && x.is_zero() {
        return None;
    }
    let base = if e < 0 { x.recip() } else { x.clone() };
    Some(num_traits::pow::Pow::pow(&base, e.unsigned_abs() as u32))
}

impl Mul for &QProduct {
    type Output = QProduct;
    fn mul(self, rhs: &QProduct) -> QProduct {
        if self.is_zero() || rhs.is_zero() {
            return QProduct::zero();
        }
        let mut factors = self.factors.clone();
        for (&a, &m) in &rhs.factors {
            let e = factors.entry(a).or_insert(0);
            *e += m;
            if *e == 0 {
                factors.remove(&a);
            }
        }
        QProduct {
            coeff: &self.coeff * &rhs.coeff,
            q_exp: self.q_exp + rhs.q_exp,
            factors,
        }
    }
}

impl Div for &QProduct {
    type Output = QProduct;
    /// Panics when dividing by the zero product.
    fn div(self, rhs: &QProduct) -> QProduct {
        assert!(!rhs.is_zero(), "division by a zero q-product");
        let inv = QProduct {
            coeff: rhs.coeff.recip(),
            q_exp: -rhs.q_exp,
            factors: rhs.factors.iter().map(|(&a, &m)| (a, -m)).collect(),
        };
        self * &inv
    }
}

impl Mul for QProduct {
    type Output = QProduct;
    fn mul(self, rhs: QProduct) -> QProduct {
        &self * &rhs
    }
}

impl Div for QProduct {
    type Output = QProduct;
    fn div(self, rhs: QProduct) -> QProduct {
        &self / &rhs
    }
}

impl fmt::Display for QProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeff)?;
        if self.q_exp != 0 {
            write!(f, "·q^{}", self.q_exp)?;
        }
        for (a, m) in self.factors() {
            let op = if a.sign == Sign::Plus { '-' } else { '+' };
            write!(f, "·(1{op}q^{})^{m}", a.exponent)?;
        }
        Ok(())
    }
}
