//! Dense univariate polynomials in `q` over a generic coefficient ring.
//!
//! Coefficients are stored in ascending order of degree with no trailing
//! zeros, so the zero polynomial is the empty vector and structural equality
//! is mathematical equality.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::scalar::{FieldScalar, Scalar};

/// Operand length at which multiplication switches from schoolbook to Karatsuba.
pub const KARATSUBA_THRESHOLD: usize = 64;

/// Errors raised by polynomial and rational-function arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial is not exactly divisible")]
    NotDivisible,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,
    #[error("cannot parse polynomial `{0}`")]
    Parse(String),
}

/// Degree of a polynomial. The zero polynomial has degree [`Degree::NegInf`],
/// which orders below every finite degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInf,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// A polynomial `c0 + c1*q + c2*q^2 + ...`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly<C> {
    coeffs: Vec<C>,
}

impl<C: Scalar> Poly<C> {
    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    pub fn new(coeffs: Vec<C>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly {
            coeffs: vec![C::one()],
        }
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    /// `c * q^k`.
    pub fn monomial(c: C, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![C::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::monomial(C::one(), 1)
    }

    /// `1 - c*q^j`.
    pub fn one_minus_monomial(c: &C, j: usize) -> Self {
        Self::one().mul_one_minus_monomial(c, j)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Coefficient of `q^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInf,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> Option<&C> {
        self.coeffs.last()
    }

    /// Largest `k` with `q^k` dividing `self` (0 for the zero polynomial).
    pub fn low_degree(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + k);
        coeffs.resize(k, C::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Divides by `q^k`, dropping any lower-order terms.
    pub fn shift_down(&self, k: usize) -> Self {
        if k >= self.coeffs.len() {
            return Self::zero();
        }
        Poly {
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|x| x.mul_ref(c)).collect())
    }

    /// Evaluates at `x` by Horner's rule.
    pub fn eval(&self, x: &C) -> C {
        let mut acc = C::zero();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Product with an explicit Karatsuba cut-over length.
    pub fn mul_with_threshold(&self, other: &Self, threshold: usize) -> Self {
        Self::new(mul_slices(&self.coeffs, &other.coeffs, threshold))
    }

    /// Multiplies by the sparse binomial `1 - c*q^j` in linear time.
    pub fn mul_one_minus_monomial(&self, c: &C, j: usize) -> Self {
        if self.is_zero() || c.is_zero() {
            return self.clone();
        }
        let n = self.coeffs.len();
        let mut out = Vec::with_capacity(n + j);
        out.extend(self.coeffs.iter().cloned());
        out.resize(n + j, C::zero());
        let sign = unit_sign(c);
        for (i, x) in self.coeffs.iter().enumerate() {
            match sign {
                Some(true) => out[i + j] -= x,
                Some(false) => out[i + j] += x,
                None => out[i + j] -= &x.mul_ref(c),
            }
        }
        Self::new(out)
    }

    /// Exact quotient by `1 - c*q^j` for a unit `c` (±1), or `None` when the
    /// division leaves a remainder.
    pub fn div_one_minus_monomial(&self, c: &C, j: usize) -> Option<Self> {
        let sign = unit_sign(c)?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        if j == 0 {
            let one_minus = C::one() + (-c.clone());
            return if one_minus.is_zero() {
                None
            } else if one_minus.is_one() {
                Some(self.clone())
            } else {
                None
            };
        }
        let len = self.coeffs.len();
        if len <= j {
            return None;
        }
        let qlen = len - j;
        let mut quot: Vec<C> = Vec::with_capacity(qlen);
        for i in 0..qlen {
            let mut v = self.coeffs[i].clone();
            if i >= j {
                if sign {
                    v += &quot[i - j];
                } else {
                    v -= &quot[i - j];
                }
            }
            quot.push(v);
        }
        for i in qlen..len {
            let mut v = self.coeffs[i].clone();
            if sign {
                v += &quot[i - j];
            } else {
                v -= &quot[i - j];
            }
            if !v.is_zero() {
                return None;
            }
        }
        Some(Self::new(quot))
    }

    /// Quotient and remainder by a monic divisor; valid over any coefficient ring.
    ///
    /// Panics if `m` is not monic.
    pub fn div_rem_monic(&self, m: &Self) -> (Self, Self) {
        let dm = match m.degree() {
            Degree::Finite(d) => d,
            Degree::NegInf => panic!("division by the zero polynomial"),
        };
        assert!(m.coeffs[dm].is_one(), "divisor must be monic");
        if self.coeffs.len() <= dm {
            return (Self::zero(), self.clone());
        }
        let mut r = self.coeffs.clone();
        let mut quot = vec![C::zero(); r.len() - dm];
        for i in (dm..r.len()).rev() {
            if r[i].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut r[i], C::zero());
            let base = i - dm;
            for (k, mk) in m.coeffs[..dm].iter().enumerate() {
                sub_scaled(&mut r[base + k], &c, mk);
            }
            quot[base] = c;
        }
        r.truncate(dm);
        (Self::new(quot), Self::new(r))
    }

    /// Remainder by a monic divisor.
    pub fn rem_monic(&self, m: &Self) -> Self {
        self.div_rem_monic(m).1
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<C: FieldScalar> Poly<C> {
    /// Euclidean division over a field: `self = quot * d + rem` with
    /// `degree(rem) < degree(d)`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), PolyError> {
        let lc = d.leading_coeff().ok_or(PolyError::DivisionByZero)?;
        let inv = lc.inv().ok_or(PolyError::DivisionByZero)?;
        let monic = d.scale(&inv);
        let (quot, rem) = self.div_rem_monic(&monic);
        Ok((quot.scale(&inv), rem))
    }

    /// Scales so the leading coefficient is one (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.leading_coeff().and_then(|c| c.inv()) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }
}

/// `Some(true)` for one, `Some(false)` for minus one, `None` otherwise.
fn unit_sign<C: Scalar>(c: &C) -> Option<bool> {
    if c.is_one() {
        Some(true)
    } else if (-c.clone()).is_one() {
        Some(false)
    } else {
        None
    }
}

/// `acc -= c * m`, skipping the multiplication for the small cyclotomic
/// coefficients that dominate in practice.
fn sub_scaled<C: Scalar>(acc: &mut C, c: &C, m: &C) {
    if m.is_zero() {
        return;
    }
    match unit_sign(m) {
        Some(true) => *acc -= c,
        Some(false) => *acc += c,
        None => *acc -= &c.mul_ref(m),
    }
}

fn schoolbook<C: Scalar>(a: &[C], b: &[C]) -> Vec<C> {
    let mut out = vec![C::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += &x.mul_ref(y);
            }
        }
    }
    out
}

fn add_slices<C: Scalar>(a: &[C], b: &[C]) -> Vec<C> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, x) in out.iter_mut().zip(short) {
        *o += x;
    }
    out
}

fn mul_slices<C: Scalar>(a: &[C], b: &[C], threshold: usize) -> Vec<C> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let (a, b) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if a.len() < threshold.max(2) {
        return schoolbook(a, b);
    }
    let mut out = vec![C::zero(); a.len() + b.len() - 1];
    if b.len() >= 2 * a.len() {
        for (ci, chunk) in b.chunks(a.len()).enumerate() {
            let part = mul_slices(a, chunk, threshold);
            let off = ci * a.len();
            for (i, c) in part.iter().enumerate() {
                out[off + i] += c;
            }
        }
        return out;
    }
    // a.len() > m, so both halves of `a` are non-empty.
    let m = b.len() / 2;
    let (a0, a1) = a.split_at(m);
    let (b0, b1) = b.split_at(m);
    let z0 = mul_slices(a0, b0, threshold);
    let z2 = mul_slices(a1, b1, threshold);
    let mut z1 = mul_slices(&add_slices(a0, a1), &add_slices(b0, b1), threshold);
    for (i, c) in z0.iter().enumerate() {
        z1[i] -= c;
        out[i] += c;
    }
    for (i, c) in z2.iter().enumerate() {
        z1[i] -= c;
        out[2 * m + i] += c;
    }
    for (i, c) in z1.iter().enumerate() {
        if i + m < out.len() {
            out[m + i] += c;
        } else {
            debug_assert!(c.is_zero());
        }
    }
    out
}

impl<C: Scalar> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        Poly::new(add_slices(&self.coeffs, &rhs.coeffs))
    }
}

impl<C: Scalar> Add for Poly<C> {
    type Output = Poly<C>;
    fn add(mut self, rhs: Poly<C>) -> Poly<C> {
        self += &rhs;
        self
    }
}

impl<C: Scalar> AddAssign<&Poly<C>> for Poly<C> {
    fn add_assign(&mut self, rhs: &Poly<C>) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), C::zero());
        }
        for (o, x) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *o += x;
        }
        self.trim();
    }
}

impl<C: Scalar> SubAssign<&Poly<C>> for Poly<C> {
    fn sub_assign(&mut self, rhs: &Poly<C>) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), C::zero());
        }
        for (o, x) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *o -= x;
        }
        self.trim();
    }
}

impl<C: Scalar> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<C: Scalar> Sub for Poly<C> {
    type Output = Poly<C>;
    fn sub(mut self, rhs: Poly<C>) -> Poly<C> {
        self -= &rhs;
        self
    }
}

impl<C: Scalar> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<C: Scalar> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<C: Scalar> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        self.mul_with_threshold(rhs, KARATSUBA_THRESHOLD)
    }
}

impl<C: Scalar> Mul for Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: Poly<C>) -> Poly<C> {
        &self * &rhs
    }
}

impl Poly<BigInt> {
    /// Non-negative gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides out the content and fixes the sign so the leading coefficient is positive.
    pub fn primitive_part(&self) -> Self {
        let Some(lc) = self.leading_coeff() else {
            return Self::zero();
        };
        let mut g = self.content();
        if lc.is_negative() {
            g = -g;
        }
        if g.is_one() {
            return self.clone();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|c| c / &g).collect(),
        }
    }

    /// Exact quotient with integer coefficients.
    pub fn exact_div(&self, d: &Self) -> Result<Self, PolyError> {
        let dd = d.degree().finite().ok_or(PolyError::DivisionByZero)?;
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let ds = self.coeffs.len() - 1;
        if ds < dd {
            return Err(PolyError::NotDivisible);
        }
        let lc = &d.coeffs[dd];
        let lc_sign = unit_sign(lc);
        let mut r = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); ds - dd + 1];
        for i in (0..=ds - dd).rev() {
            let top = std::mem::take(&mut r[i + dd]);
            if top.is_zero() {
                continue;
            }
            let c = match lc_sign {
                Some(true) => top,
                Some(false) => -top,
                None => {
                    let (c, rem) = top.div_rem(lc);
                    if !rem.is_zero() {
                        return Err(PolyError::NotDivisible);
                    }
                    c
                }
            };
            for (k, dk) in d.coeffs[..dd].iter().enumerate() {
                sub_scaled(&mut r[i + k], &c, dk);
            }
            quot[i] = c;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return Err(PolyError::NotDivisible);
        }
        Ok(Self::new(quot))
    }

    /// Pseudo-remainder of `self` by `d`, content-stripped after every step.
    fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.coeffs.len() - 1;
        let lc = &d.coeffs[dd];
        let mut r = self.clone();
        while let Degree::Finite(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let top = r.coeffs[dr].clone();
            r = r.scale(lc) - d.shift(dr - dd).scale(&top);
            let g = r.content();
            if !g.is_zero() && !g.is_one() {
                r = Poly {
                    coeffs: r.coeffs.iter().map(|c| c / &g).collect(),
                };
            }
        }
        r
    }

    /// Primitive gcd with positive leading coefficient, by a primitive
    /// polynomial remainder sequence.
    pub fn gcd(&self, other: &Self) -> Result<Self, PolyError> {
        if self.is_zero() && other.is_zero() {
            return Err(PolyError::BothZero);
        }
        if self.is_zero() {
            return Ok(other.primitive_part());
        }
        if other.is_zero() {
            return Ok(self.primitive_part());
        }
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            if b.is_constant() {
                return Ok(Self::one());
            }
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                return Ok(b);
            }
            a = b;
            b = r.primitive_part();
        }
    }

    pub fn to_rational(&self) -> Poly<BigRational> {
        self.map(|c| BigRational::from_integer(c.clone()))
    }

    /// Division with remainder over the rationals.
    pub fn div_rem_rational(
        &self,
        d: &Self,
    ) -> Result<(Poly<BigRational>, Poly<BigRational>), PolyError> {
        self.to_rational().div_rem(&d.to_rational())
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }
}

impl Poly<BigRational> {
    /// Clears denominators: returns `(p, d)` with `self = p / d`, `d > 0`.
    pub fn clear_denominators(&self) -> (Poly<BigInt>, BigInt) {
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let p = self.map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer());
        (p, lcm)
    }
}

impl<C: Scalar + Signed + fmt::Display> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            match (k, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{abs}*q")?,
                (_, true) => write!(f, "q^{k}")?,
                (_, false) => write!(f, "{abs}*q^{k}")?,
            }
        }
        Ok(())
    }
}

impl<C: Scalar + FromStr> FromStr for Poly<C> {
    type Err = PolyError;

    /// Parses the rendering grammar `c0 + c1*q + c2*q^2 - ...` (terms in any
    /// order, repeated degrees summed, whitespace ignored).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || PolyError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let mut terms: Vec<(bool, &str)> = Vec::new();
        let mut start = 0;
        let mut negative = false;
        let bytes = compact.as_bytes();
        for (i, &b) in bytes.iter().enumerate() {
            if (b == b'+' || b == b'-') && i > 0 {
                terms.push((negative, &compact[start..i]));
                negative = b == b'-';
                start = i + 1;
            } else if (b == b'+' || b == b'-') && i == 0 {
                negative = b == b'-';
                start = 1;
            }
        }
        terms.push((negative, &compact[start..]));

        let mut coeffs: Vec<C> = Vec::new();
        for (neg, term) in terms {
            if term.is_empty() {
                return Err(err());
            }
            let (coef, power) = match term.find('q') {
                None => (term.parse::<C>().map_err(|_| err())?, 0usize),
                Some(pos) => {
                    let head = &term[..pos];
                    let tail = &term[pos + 1..];
                    let coef = if head.is_empty() {
                        C::one()
                    } else {
                        let head = head.strip_suffix('*').ok_or_else(err)?;
                        head.parse::<C>().map_err(|_| err())?
                    };
                    let power = if tail.is_empty() {
                        1
                    } else {
                        let digits = tail.strip_prefix('^').ok_or_else(err)?;
                        digits.parse::<usize>().map_err(|_| err())?
                    };
                    (coef, power)
                }
            };
            if coeffs.len() <= power {
                coeffs.resize(power + 1, C::zero());
            }
            if neg {
                coeffs[power] -= &coef;
            } else {
                coeffs[power] += &coef;
            }
        }
        Ok(Poly::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::IntPoly;
    use proptest::prelude::*;

    fn ip(v: &[i64]) -> IntPoly {
        IntPoly::new(v.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn zero_has_neg_inf_degree() {
        assert_eq!(IntPoly::zero().degree(), Degree::NegInf);
        assert!(Degree::NegInf < Degree::Finite(0));
        assert_eq!(ip(&[0, 0, 0]), IntPoly::zero());
        assert_eq!(ip(&[1, 2, 0]).degree(), Degree::Finite(1));
    }

    #[test]
    fn basic_arithmetic() {
        let a = ip(&[1, 1]);
        let b = ip(&[1, -1]);
        assert_eq!(&a * &b, ip(&[1, 0, -1]));
        assert_eq!(&a + &IntPoly::zero(), a);
        assert_eq!(a.pow(3), ip(&[1, 3, 3, 1]));
        assert_eq!(&a - &a, IntPoly::zero());
    }

    #[test]
    fn divrem_examples() {
        let (q, r) = ip(&[-1, 0, 0, 0, 1])
            .div_rem_rational(&ip(&[-1, 0, 1]))
            .unwrap();
        assert_eq!(q, ip(&[1, 0, 1]).to_rational());
        assert!(r.is_zero());

        let (q, r) = ip(&[1, 0, 1]).div_rem_rational(&ip(&[0, 1])).unwrap();
        assert_eq!(q, ip(&[0, 1]).to_rational());
        assert_eq!(r, ip(&[1]).to_rational());

        let (q, r) = ip(&[-1, 0, 0, 1]).div_rem_rational(&ip(&[-2, 2])).unwrap();
        assert_eq!(q, Poly::new(vec![rat(1, 2), rat(1, 2), rat(1, 2)]));
        assert!(r.is_zero());

        assert_eq!(
            ip(&[1]).div_rem_rational(&IntPoly::zero()),
            Err(PolyError::DivisionByZero)
        );
    }

    #[test]
    fn exact_division() {
        let p = ip(&[-1, 0, 0, 0, 0, 0, 1]);
        assert_eq!(p.exact_div(&ip(&[-1, 0, 1])).unwrap(), ip(&[1, 0, 1, 0, 1]));
        assert_eq!(p.exact_div(&IntPoly::one()).unwrap(), p);
        assert_eq!(
            ip(&[-1, 0, 0, 0, 1]).exact_div(&ip(&[-1, 0, 0, 1])),
            Err(PolyError::NotDivisible)
        );
        // divisible over Q but with a non-integral quotient
        assert_eq!(
            ip(&[-1, 0, 0, 1]).exact_div(&ip(&[-2, 2])),
            Err(PolyError::NotDivisible)
        );
        assert_eq!(
            p.exact_div(&IntPoly::zero()),
            Err(PolyError::DivisionByZero)
        );
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(
            ip(&[-1, 0, 1]).gcd(&ip(&[-1, 0, 0, 1])).unwrap(),
            ip(&[-1, 1])
        );
        assert_eq!(ip(&[-4, 6]).gcd(&IntPoly::zero()).unwrap(), ip(&[-2, 3]));
        let a = ip(&[1, 1]);
        let b = ip(&[1, -1]);
        let f = &(&a * &a) * &b;
        let g = &(&b * &b) * &a;
        // (1+q)(1-q) = 1 - q^2, normalized to a positive leading coefficient
        assert_eq!(f.gcd(&g).unwrap(), ip(&[1, 0, -1]).primitive_part());
        assert_eq!(
            IntPoly::zero().gcd(&IntPoly::zero()),
            Err(PolyError::BothZero)
        );
    }

    #[test]
    fn sparse_binomial_ops() {
        let p = ip(&[3, -1, 4, 1, 5]);
        let one = BigInt::one();
        let m = p.mul_one_minus_monomial(&one, 3);
        assert_eq!(m, &p * &ip(&[1, 0, 0, -1]));
        assert_eq!(m.div_one_minus_monomial(&one, 3), Some(p.clone()));
        let minus = -BigInt::one();
        let m = p.mul_one_minus_monomial(&minus, 2);
        assert_eq!(m, &p * &ip(&[1, 0, 1]));
        assert_eq!(m.div_one_minus_monomial(&minus, 2), Some(p.clone()));
        assert_eq!(p.div_one_minus_monomial(&one, 2), None);
    }

    #[test]
    fn render_and_parse() {
        let p = ip(&[1, 0, -1, 0, 1]);
        assert_eq!(p.to_string(), "1 - q^2 + q^4");
        assert_eq!(ip(&[-1, 1]).to_string(), "-1 + q");
        assert_eq!(ip(&[0, 2, -3]).to_string(), "2*q - 3*q^2");
        assert_eq!(IntPoly::zero().to_string(), "0");
        assert_eq!("1 - q^2 + q^4".parse::<IntPoly>().unwrap(), p);
        assert_eq!(
            "-q + 2*q^3 + q".parse::<IntPoly>().unwrap(),
            ip(&[0, 0, 0, 2])
        );
        assert!("1 + * q".parse::<IntPoly>().is_err());
        assert!("".parse::<IntPoly>().is_err());
    }

    #[test]
    fn karatsuba_matches_schoolbook_on_unbalanced_operands() {
        let a: Vec<i64> = (0..150).map(|i| (i * 7919 % 23) - 11).collect();
        let b: Vec<i64> = (0..401).map(|i| (i * 104_729 % 31) - 15).collect();
        let pa = Poly::new(a);
        let pb = Poly::new(b);
        assert_eq!(
            pa.mul_with_threshold(&pb, 2),
            pa.mul_with_threshold(&pb, usize::MAX)
        );
        assert_eq!(
            pa.mul_with_threshold(&pb, 8),
            pa.mul_with_threshold(&pb, usize::MAX)
        );
    }

    fn arb_poly(max_len: usize) -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-1_000_000i64..=1_000_000, 0..=max_len)
            .prop_map(|v| IntPoly::new(v.into_iter().map(BigInt::from).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn ring_axioms(a in arb_poly(31), b in arb_poly(31), c in arb_poly(31)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn divrem_reconstructs(p in arb_poly(25), d in arb_poly(10)) {
            prop_assume!(!d.is_zero());
            let (q, r) = p.div_rem_rational(&d).unwrap();
            prop_assert!(r.degree() < d.degree());
            prop_assert_eq!(&(&q * &d.to_rational()) + &r, p.to_rational());
        }

        #[test]
        fn gcd_divides_and_scales(p in arb_poly(8), r in arb_poly(8), h in arb_poly(4)) {
            prop_assume!(!p.is_zero() && !r.is_zero() && !h.is_zero());
            let g = p.gcd(&r).unwrap();
            prop_assert!(p.exact_div(&g).is_ok());
            prop_assert!(r.exact_div(&g).is_ok());
            let gh = (&p * &h).gcd(&(&r * &h)).unwrap();
            prop_assert_eq!(gh, (&g * &h.primitive_part()).primitive_part());
        }

        #[test]
        fn render_parse_roundtrip(p in arb_poly(20)) {
            prop_assert_eq!(p.to_string().parse::<IntPoly>().unwrap(), p);
        }
    }
}
