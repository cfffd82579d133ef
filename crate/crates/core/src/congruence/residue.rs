use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;

use super::CongruenceError;
use crate::cyclotomic::cyclotomic;
use crate::scalar::FieldScalar;
use crate::{IntPoly, Poly, RatFunc, Scalar};

/// The quotient ring `C[q] / Φ_n(q)^m`.
///
/// The modulus is monic, so reduction never divides coefficients and works
/// over any coefficient ring; inversion needs a field.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidueRing<C> {
    n: u64,
    power: u32,
    modulus: Poly<C>,
}

impl<C: Scalar> ResidueRing<C> {
    pub fn new(n: u64, power: u32) -> Arc<Self> {
        Self::with_phi(n, power, &cyclotomic(n))
    }

    /// Builds the ring from a known `Φ_n`.
    pub fn with_phi(n: u64, power: u32, phi: &IntPoly) -> Arc<Self> {
        assert!(n >= 1 && power >= 1, "ring needs n >= 1 and m >= 1");
        Arc::new(ResidueRing {
            n,
            power,
            modulus: phi.pow(power).map(C::from_bigint),
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    /// `Φ_n^m`.
    pub fn modulus(&self) -> &Poly<C> {
        &self.modulus
    }

    /// `m·φ(n)`; every representative has smaller degree.
    pub fn dimension(&self) -> usize {
        self.modulus.degree().finite().expect("modulus is non-zero")
    }

    pub fn element(self: &Arc<Self>, p: &Poly<C>) -> ResidueElem<C> {
        ResidueElem {
            ring: Arc::clone(self),
            rep: p.rem_monic(&self.modulus),
        }
    }

    pub fn from_int_poly(self: &Arc<Self>, p: &IntPoly) -> ResidueElem<C> {
        self.element(&p.map(C::from_bigint))
    }

    pub fn zero(self: &Arc<Self>) -> ResidueElem<C> {
        self.element(&Poly::zero())
    }

    pub fn one(self: &Arc<Self>) -> ResidueElem<C> {
        self.element(&Poly::one())
    }

    /// The class of `q`.
    pub fn q(self: &Arc<Self>) -> ResidueElem<C> {
        self.element(&Poly::q())
    }

    /// The class of `q^e`, by square-and-multiply on residues.
    pub fn q_pow(self: &Arc<Self>, e: u64) -> ResidueElem<C> {
        self.q().pow(e)
    }
}

impl ResidueRing<BigRational> {
    /// The class of `f`, inverting its denominator in the ring.
    pub fn reduce(
        self: &Arc<Self>,
        f: &RatFunc,
    ) -> Result<ResidueElem<BigRational>, CongruenceError> {
        let num = self.from_int_poly(f.num());
        let den = self.from_int_poly(f.den());
        Ok(&num * &den.inv()?)
    }
}

/// Canonical residue class: `rep` is fully reduced modulo the ring modulus.
#[derive(Clone, Debug)]
pub struct ResidueElem<C> {
    ring: Arc<ResidueRing<C>>,
    rep: Poly<C>,
}

impl<C: Scalar> ResidueElem<C> {
    pub fn ring(&self) -> &Arc<ResidueRing<C>> {
        &self.ring
    }

    pub fn rep(&self) -> &Poly<C> {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rep.is_one()
    }

    fn with_rep(&self, rep: Poly<C>) -> Self {
        self.ring.element(&rep)
    }

    fn same_ring(&self, other: &Self) {
        assert!(
            self.ring.n == other.ring.n && self.ring.power == other.ring.power,
            "residues from different rings"
        );
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = self.ring.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }
}

impl<C: FieldScalar> ResidueElem<C> {
    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self) -> Result<Self, CongruenceError> {
        let not_invertible = || CongruenceError::NotInvertible {
            n: self.ring.n,
            power: self.ring.power,
        };
        // invariant: s_i · rep ≡ r_i (mod modulus)
        let (mut r0, mut r1) = (self.ring.modulus.clone(), self.rep.clone());
        let (mut s0, mut s1) = (Poly::<C>::zero(), Poly::<C>::one());
        while !r1.is_zero() {
            let (quot, rem) = r0.div_rem(&r1).expect("non-zero divisor");
            let s2 = &s0 - &(&quot * &s1);
            (r0, r1) = (r1, rem);
            (s0, s1) = (s1, s2);
        }
        if !r0.is_constant() {
            return Err(not_invertible());
        }
        let c = r0.coeff(0).inv().ok_or_else(not_invertible)?;
        Ok(self.with_rep(s0.scale(&c)))
    }
}

impl<C: PartialEq> PartialEq for ResidueElem<C> {
    fn eq(&self, other: &Self) -> bool {
        self.ring.n == other.ring.n && self.ring.power == other.ring.power && self.rep == other.rep
    }
}

impl<C: Scalar> Add for &ResidueElem<C> {
    type Output = ResidueElem<C>;
    fn add(self, rhs: &ResidueElem<C>) -> ResidueElem<C> {
        self.same_ring(rhs);
        // both operands are reduced, so the sum is too
        ResidueElem {
            ring: Arc::clone(&self.ring),
            rep: &self.rep + &rhs.rep,
        }
    }
}

impl<C: Scalar> Sub for &ResidueElem<C> {
    type Output = ResidueElem<C>;
    fn sub(self, rhs: &ResidueElem<C>) -> ResidueElem<C> {
        self.same_ring(rhs);
        ResidueElem {
            ring: Arc::clone(&self.ring),
            rep: &self.rep - &rhs.rep,
        }
    }
}

impl<C: Scalar> Neg for &ResidueElem<C> {
    type Output = ResidueElem<C>;
    fn neg(self) -> ResidueElem<C> {
        ResidueElem {
            ring: Arc::clone(&self.ring),
            rep: -&self.rep,
        }
    }
}

impl<C: Scalar> Mul for &ResidueElem<C> {
    type Output = ResidueElem<C>;
    fn mul(self, rhs: &ResidueElem<C>) -> ResidueElem<C> {
        self.same_ring(rhs);
        self.with_rep(&self.rep * &rhs.rep)
    }
}

impl<C: Scalar + num_traits::Signed + fmt::Display> fmt::Display for ResidueElem<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod Φ_{}^{}", self.rep, self.ring.n, self.ring.power)
    }
}

/// The class of `f` in `ring`; fails when the denominator of `f` shares a
/// factor with `Φ_n`.
pub fn ring_reduce(
    f: &RatFunc,
    ring: &Arc<ResidueRing<BigRational>>,
) -> Result<ResidueElem<BigRational>, CongruenceError> {
    ring.reduce(f)
}

/// Multiplicative inverse of a residue.
pub fn ring_inv<C: FieldScalar>(e: &ResidueElem<C>) -> Result<ResidueElem<C>, CongruenceError> {
    e.inv()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type Ring = ResidueRing<BigRational>;

    fn ip(v: &[i64]) -> IntPoly {
        IntPoly::new(v.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn q_to_the_n_is_one() {
        let ring = Ring::new(5, 1);
        let e = ring.reduce(&RatFunc::q_pow(5)).unwrap();
        assert!(e.is_one());
        assert_eq!(ring.q_pow(5), ring.one());
        assert_eq!(ring.q_pow(12), ring.reduce(&RatFunc::q_pow(2)).unwrap());
    }

    #[test]
    fn inverse_of_one_minus_q() {
        let ring = Ring::new(5, 2);
        let f = RatFunc::new(IntPoly::one(), ip(&[1, -1])).unwrap();
        let e = ring.reduce(&f).unwrap();
        let back = &e * &ring.from_int_poly(&ip(&[1, -1]));
        assert!(back.is_one());
    }

    #[test]
    fn non_units_are_rejected() {
        let ring = Ring::new(5, 1);
        let f = RatFunc::new(IntPoly::one(), ip(&[1, 0, 0, 0, 0, -1])).unwrap();
        assert_eq!(
            ring.reduce(&f),
            Err(CongruenceError::NotInvertible { n: 5, power: 1 })
        );
        let ring2 = Ring::new(5, 2);
        let phi = ring2.from_int_poly(&cyclotomic(5));
        assert!(ring_inv(&phi).is_err());
        assert!(ring_inv(&ring2.one()).unwrap().is_one());
        let e = ring2.from_int_poly(&ip(&[1, 1]));
        assert!((&e * &ring_inv(&e).unwrap()).is_one());
    }

    #[test]
    fn dimension_is_m_times_totient() {
        assert_eq!(Ring::new(9, 2).dimension(), 12);
        assert_eq!(ResidueRing::<BigInt>::new(15, 1).dimension(), 8);
    }
}
