//! Congruences of rational functions modulo `Φ_n(q)^m`.
//!
//! A congruence `f ≡ g (mod Φ_n^m)` between fractions is decided through the
//! Φ_n-adic valuation of `f - g`; it is meaningful only when the reduced
//! denominator of `f - g` is coprime to `Φ_n`, and that condition is reported
//! rather than assumed.
//!
//! Three evaluation strategies live here:
//!
//! * [`congruent_mod`] on canonical [`RatFunc`] values, for small inputs;
//! * [`ResidueRing`], the quotient `ℚ[q]/Φ_n^m` with inverses by extended
//!   Euclid;
//! * the [`eval`] engine, which evaluates structured q-series expressions
//!   either exactly with symbolic denominators or inside [`CyclicRing`].

mod cyclic;
pub mod eval;
mod residue;

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::cyclotomic::cyclotomic;
use crate::{IntPoly, RatFunc};

pub use cyclic::CyclicRing;
pub use residue::{ring_inv, ring_reduce, ResidueElem, ResidueRing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CongruenceError {
    #[error("element is not invertible modulo Φ_{n}(q)^{power}")]
    NotInvertible { n: u64, power: u32 },
}

/// A Φ_n-adic valuation: an integer, or infinity for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        self == Valuation::Infinite
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// `self ≥ m`.
    pub fn at_least(self, m: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= m,
            Valuation::Infinite => true,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Outcome of a congruence test modulo `Φ_n^m`.
///
/// `holds == (denominator_coprime && valuation ≥ m)`. When
/// `valuation_is_lower_bound` is set the difference was only determined
/// modulo `Φ_n^m`, so a reported `Finite(m)` means "at least `m`".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CongruenceVerdict {
    pub holds: bool,
    pub valuation: Valuation,
    pub denominator_coprime: bool,
    pub valuation_is_lower_bound: bool,
}

impl CongruenceVerdict {
    pub fn new(valuation: Valuation, denominator_coprime: bool, power: u32) -> Self {
        CongruenceVerdict {
            holds: denominator_coprime && valuation.at_least(power as i64),
            valuation,
            denominator_coprime,
            valuation_is_lower_bound: false,
        }
    }

    /// Verdict for `f = g` exactly.
    pub fn identical() -> Self {
        Self::new(Valuation::Infinite, true, 0)
    }
}

/// Multiplicity of the monic polynomial `phi` in the non-zero polynomial `p`,
/// stopping once `cap` is reached.
pub(crate) fn poly_valuation_capped(p: &IntPoly, phi: &IntPoly, cap: u64) -> u64 {
    debug_assert!(!p.is_zero());
    let mut v = 0;
    let mut cur = p.clone();
    while v < cap {
        let (quot, rem) = cur.div_rem_monic(phi);
        if !rem.is_zero() {
            break;
        }
        cur = quot;
        v += 1;
    }
    v
}

pub(crate) fn poly_valuation(p: &IntPoly, phi: &IntPoly) -> u64 {
    poly_valuation_capped(p, phi, u64::MAX)
}

fn valuation_with(f: &RatFunc, phi: &IntPoly) -> Valuation {
    if f.is_zero() {
        return Valuation::Infinite;
    }
    Valuation::Finite(poly_valuation(f.num(), phi) as i64 - poly_valuation(f.den(), phi) as i64)
}

/// Φ_n-adic valuation of `f`: multiplicity in the numerator minus
/// multiplicity in the denominator.
pub fn phi_valuation(f: &RatFunc, n: u64) -> Valuation {
    valuation_with(f, &cyclotomic(n))
}

/// Decides `f ≡ g (mod Φ_n^m)` exactly in ℚ(q).
pub fn congruent_mod(f: &RatFunc, g: &RatFunc, n: u64, m: u32) -> CongruenceVerdict {
    congruent_mod_with(f, g, &cyclotomic(n), m)
}

/// [`congruent_mod`] with a precomputed `Φ_n`.
pub fn congruent_mod_with(f: &RatFunc, g: &RatFunc, phi: &IntPoly, m: u32) -> CongruenceVerdict {
    let d = f - g;
    if d.is_zero() {
        return CongruenceVerdict::identical();
    }
    let v_den = poly_valuation(d.den(), phi) as i64;
    let v_num = poly_valuation(d.num(), phi) as i64;
    CongruenceVerdict::new(Valuation::Finite(v_num - v_den), v_den == 0, m)
}
