//! Canonical elements of the rational function field ℚ(q).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::{Degree, PolyError};
use crate::IntPoly;

/// A fraction `num / den` of integer polynomials in canonical form:
///
/// * `den` is non-zero with a positive leading coefficient;
/// * `num` and `den` have no common factor of positive degree;
/// * the integer contents of `num` and `den` are coprime.
///
/// Every element of ℚ(q) has exactly one such representation, so the derived
/// equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: IntPoly,
    den: IntPoly,
}

impl RatFunc {
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den)?;
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g)?, den.exact_div(&g)?)
        };
        Ok(Self::normalize_scalars(num, den))
    }

    /// Fixes the scalar freedom of a fraction already free of polynomial
    /// common factors.
    pub(crate) fn normalize_scalars(num: IntPoly, den: IntPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let mut g = num.content().gcd(&den.content());
        if den.leading_coeff().is_some_and(|c| c.is_negative()) {
            g = -g;
        }
        if g.is_one() {
            return RatFunc { num, den };
        }
        RatFunc {
            num: num.map(|c| c / &g),
            den: den.map(|c| c / &g),
        }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: IntPoly::zero(),
            den: IntPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(IntPoly::one())
    }

    pub fn from_poly(p: IntPoly) -> Self {
        RatFunc {
            num: p,
            den: IntPoly::one(),
        }
    }

    pub fn from_integer(c: i64) -> Self {
        Self::from_poly(IntPoly::constant(BigInt::from(c)))
    }

    pub fn from_rational(c: &BigRational) -> Self {
        Self::normalize_scalars(
            IntPoly::constant(c.numer().clone()),
            IntPoly::constant(c.denom().clone()),
        )
    }

    /// `q^k` for any integer `k`.
    pub fn q_pow(k: i64) -> Self {
        let one = BigInt::one();
        if k >= 0 {
            Self::from_poly(IntPoly::monomial(one, k as usize))
        } else {
            RatFunc {
                num: IntPoly::one(),
                den: IntPoly::monomial(one, k.unsigned_abs() as usize),
            }
        }
    }

    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den(&self) -> &IntPoly {
        &self.den
    }

    pub fn into_parts(self) -> (IntPoly, IntPoly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial value, if the denominator is a constant dividing every coefficient.
    pub fn as_poly(&self) -> Option<IntPoly> {
        if self.den.is_one() {
            Some(self.num.clone())
        } else {
            None
        }
    }

    pub fn inv(&self) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(Self::normalize_scalars(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, PolyError> {
        Ok(self * &other.inv()?)
    }

    /// Integer power; negative exponents require a non-zero base.
    pub fn pow(&self, e: i64) -> Result<Self, PolyError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = u32::try_from(e.unsigned_abs()).expect("exponent fits in u32");
        // powers of coprime polynomials stay coprime
        Ok(Self::normalize_scalars(base.num.pow(e), base.den.pow(e)))
    }

    /// The substitution `q -> 1/q`, returned in canonical form.
    pub fn subst_qinv(&self) -> Self {
        let Degree::Finite(dn) = self.num.degree() else {
            return Self::zero();
        };
        let dd = self.den.degree().finite().expect("denominator is non-zero");
        let rev = |p: &IntPoly| IntPoly::new(p.coeffs().iter().rev().cloned().collect());
        let (mut num, mut den) = (rev(&self.num), rev(&self.den));
        if dd > dn {
            num = num.shift(dd - dn);
        } else {
            den = den.shift(dn - dd);
        }
        // reversal can expose powers of q on both sides
        let common = num.low_degree().min(den.low_degree());
        Self::normalize_scalars(num.shift_down(common), den.shift_down(common))
    }

    /// Exact value at a rational point.
    pub fn eval(&self, x: &BigRational) -> Result<BigRational, PolyError> {
        let d = self.den.eval_rational(x);
        if d.is_zero() {
            return Err(PolyError::PoleAtPoint);
        }
        Ok(self.num.eval_rational(x) / d)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone())
                .expect("non-zero denominator");
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::new(num, &self.den * &rhs.den).expect("non-zero denominator")
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("non-zero denominator")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        &self + &rhs
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: RatFunc) -> RatFunc {
        &self - &rhs
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        &self * &rhs
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl From<IntPoly> for RatFunc {
    fn from(p: IntPoly) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ip(v: &[i64]) -> IntPoly {
        IntPoly::new(v.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn rf(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(ip(n), ip(d)).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn negative_power_of_q() {
        assert_eq!(RatFunc::q_pow(-2), rf(&[1], &[0, 0, 1]));
        assert_eq!(
            RatFunc::from_poly(ip(&[0, 1])).pow(-2).unwrap(),
            RatFunc::q_pow(-2)
        );
    }

    #[test]
    fn inverse_law() {
        let f = rf(&[1, -1], &[1, 1]);
        assert_eq!(&f * &f.inv().unwrap(), RatFunc::one());
        assert_eq!(RatFunc::zero().inv(), Err(PolyError::DivisionByZero));
        assert_eq!(
            RatFunc::new(ip(&[1]), IntPoly::zero()),
            Err(PolyError::DivisionByZero)
        );
    }

    #[test]
    fn common_denominator() {
        let s = &rf(&[1], &[1, -1]) + &rf(&[1], &[1, 1]);
        assert_eq!(s, rf(&[2], &[1, 0, -1]));
        // canonical sign lives in the numerator
        assert_eq!(s.den(), &ip(&[-1, 0, 1]));
        assert_eq!(s.num(), &ip(&[-2]));
    }

    #[test]
    fn scalars_are_canonical() {
        assert_eq!(rf(&[2, 2], &[4, 4]), RatFunc::from_rational(&rat(1, 2)));
        assert_eq!(rf(&[3, 3], &[3, 3]), RatFunc::one());
        assert_eq!(rf(&[1], &[0, 2]), rf(&[3], &[0, 6]));
        assert_eq!(rf(&[1], &[0, 2]).den(), &ip(&[0, 2]));
        assert_eq!(rf(&[2], &[0, 4]).num(), &ip(&[1]));
    }

    #[test]
    fn subst_qinv_examples() {
        let f = RatFunc::from_poly(ip(&[1, 0, 0, -1]));
        assert_eq!(f.subst_qinv(), rf(&[-1, 0, 0, 1], &[0, 0, 0, 1]));
        let c = RatFunc::from_integer(7);
        assert_eq!(c.subst_qinv(), c);
        let g = rf(&[1, 2, 0, 5], &[0, 3, 1]);
        assert_eq!(g.subst_qinv().subst_qinv(), g);
    }

    #[test]
    fn eval_examples() {
        let f = rf(&[1, 0, 0, -1], &[1, -1]);
        assert_eq!(f.eval(&rat(2, 1)).unwrap(), rat(7, 1));
        assert_eq!(f.eval(&rat(1, 1)).unwrap(), rat(3, 1));
        let g = rf(&[1], &[1, -1]);
        assert_eq!(g.eval(&rat(1, 1)), Err(PolyError::PoleAtPoint));
    }

    fn arb_small_poly() -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-9i64..=9, 0..=5)
            .prop_map(|v| IntPoly::new(v.into_iter().map(BigInt::from).collect()))
    }

    fn arb_ratfunc() -> impl Strategy<Value = RatFunc> {
        (arb_small_poly(), arb_small_poly())
            .prop_filter("non-zero denominator", |(_, d)| !d.is_zero())
            .prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn canonical_form_independent_of_expression_order(
            f in arb_ratfunc(), g in arb_ratfunc(), h in arb_ratfunc()
        ) {
            prop_assert_eq!(&(&f + &g) * &h, &(&h * &g) + &(&f * &h));
            prop_assert_eq!(&(&f + &g) + &h, &f + &(&h + &g));
            prop_assert_eq!(&(&f - &g) + &g, f.clone());
        }

        #[test]
        fn qinv_is_multiplicative_involution(f in arb_ratfunc(), g in arb_ratfunc()) {
            prop_assert_eq!(f.subst_qinv().subst_qinv(), f.clone());
            prop_assert_eq!((&f * &g).subst_qinv(), &f.subst_qinv() * &g.subst_qinv());
        }

        #[test]
        fn eval_is_homomorphism(f in arb_ratfunc(), g in arb_ratfunc(), xn in -7i64..=7, xd in 1i64..=5) {
            let x = rat(xn, xd);
            if let (Ok(a), Ok(b)) = (f.eval(&x), g.eval(&x)) {
                prop_assert_eq!((&f * &g).eval(&x).unwrap(), a * b);
            }
        }
    }
}
