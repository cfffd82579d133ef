//! Cyclotomic polynomials over the integers and the elementary number theory
//! they need.
//!
//! `Φ_n` is built as the exact quotient `(q^n - 1) / ∏_{d | n, d < n} Φ_d`
//! with memoization. The Möbius product formula is kept as an independent
//! oracle, [`cyclotomic_oracle`].

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::IntPoly;

/// Prime factorization by trial division, as `(prime, exponent)` pairs in
/// increasing order. `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// All positive divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let current = divs.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            divs.extend(current.iter().map(|d| d * pk));
        }
    }
    divs.sort_unstable();
    divs
}

pub fn moebius(n: u64) -> i8 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Indices `d` with `Φ_d` dividing `1 - q^j` (when `negated` is false) or
/// `1 + q^j` (when `negated` is true). Each occurs with multiplicity one.
pub fn binomial_factor_indices(negated: bool, j: u64) -> Vec<u64> {
    if negated {
        divisors(2 * j)
            .into_iter()
            .filter(|d| !j.is_multiple_of(*d))
            .collect()
    } else {
        divisors(j)
    }
}

/// `q^n - 1`.
fn q_pow_minus_one(n: u64) -> IntPoly {
    let mut coeffs = vec![BigInt::from(0); n as usize + 1];
    coeffs[0] = BigInt::from(-1);
    coeffs[n as usize] = BigInt::one();
    IntPoly::new(coeffs)
}

/// Memo table of cyclotomic polynomials.
///
/// Fill it single-threaded, then [`freeze`](Self::freeze) it into a
/// [`FrozenCyclotomics`] handle that threads share read-only.
#[derive(Clone, Debug, Default)]
pub struct CyclotomicCache {
    table: BTreeMap<u64, IntPoly>,
}

impl CyclotomicCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// `Φ_n`, computing and storing it (and every `Φ_d` for `d | n`) if missing.
    pub fn get(&mut self, n: u64) -> &IntPoly {
        assert!(n >= 1, "cyclotomic index must be positive");
        if !self.table.contains_key(&n) {
            let mut product = IntPoly::one();
            for d in divisors(n) {
                if d < n {
                    product = &product * self.get(d);
                }
            }
            let phi = q_pow_minus_one(n)
                .exact_div(&product)
                .expect("q^n - 1 is divisible by the proper cyclotomic factors");
            self.table.insert(n, phi);
        }
        &self.table[&n]
    }

    pub fn lookup(&self, n: u64) -> Option<&IntPoly> {
        self.table.get(&n)
    }

    pub fn warm_up(&mut self, ns: impl IntoIterator<Item = u64>) {
        for n in ns {
            self.get(n);
        }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &IntPoly)> {
        self.table.iter().map(|(&n, p)| (n, p))
    }

    /// Checks `∏_{d | n} Φ_d = q^n - 1` using cached and computed entries.
    pub fn product_identity_holds(&mut self, n: u64) -> bool {
        let mut product = IntPoly::one();
        for d in divisors(n) {
            product = &product * self.get(d);
        }
        product == q_pow_minus_one(n)
    }

    pub fn freeze(self) -> FrozenCyclotomics {
        FrozenCyclotomics {
            table: Arc::new(self.table),
        }
    }

    /// Writes one `n<TAB>polynomial` line per entry.
    pub fn write_tsv(&self, mut w: impl Write) -> io::Result<()> {
        for (n, p) in &self.table {
            writeln!(w, "{n}\t{p}")?;
        }
        Ok(())
    }

    /// Reads the format produced by [`write_tsv`](Self::write_tsv), rejecting
    /// entries that are not monic of degree `φ(n)`.
    pub fn read_tsv(r: impl BufRead) -> Result<Self, CacheFileError> {
        let mut table = BTreeMap::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let bad = || CacheFileError::Malformed(lineno + 1);
            let (n, poly) = line.split_once('\t').ok_or_else(bad)?;
            let n: u64 = n.trim().parse().map_err(|_| bad())?;
            let poly: IntPoly = poly.parse().map_err(|_| bad())?;
            if n == 0
                || poly.degree().finite() != Some(totient(n) as usize)
                || !poly.leading_coeff().is_some_and(|c| c.is_one())
            {
                return Err(CacheFileError::Invalid(n));
            }
            table.insert(n, poly);
        }
        Ok(CyclotomicCache { table })
    }
}

#[derive(Debug, Error)]
pub enum CacheFileError {
    #[error("cache file: {0}")]
    Io(#[from] io::Error),
    #[error("cache file line {0} is malformed")]
    Malformed(usize),
    #[error("cache file entry for n = {0} is not a valid cyclotomic polynomial")]
    Invalid(u64),
}

/// Read-only, cheaply clonable view of a warmed cache. Misses are computed on
/// the fly and not stored.
#[derive(Clone, Debug, Default)]
pub struct FrozenCyclotomics {
    table: Arc<BTreeMap<u64, IntPoly>>,
}

impl FrozenCyclotomics {
    pub fn phi(&self, n: u64) -> Cow<'_, IntPoly> {
        match self.table.get(&n) {
            Some(p) => Cow::Borrowed(p),
            None => Cow::Owned(cyclotomic(n)),
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        self.table.contains_key(&n)
    }
}

/// `Φ_n(q)`.
pub fn cyclotomic(n: u64) -> IntPoly {
    CyclotomicCache::new().get(n).clone()
}

/// `Φ_n(q)` by the Möbius product `∏_{d | n} (q^{n/d} - 1)^{μ(d)}`.
pub fn cyclotomic_oracle(n: u64) -> IntPoly {
    assert!(n >= 1, "cyclotomic index must be positive");
    let mut num = IntPoly::one();
    let mut den = IntPoly::one();
    for d in divisors(n) {
        match moebius(d) {
            1 => num = &num * &q_pow_minus_one(n / d),
            -1 => den = &den * &q_pow_minus_one(n / d),
            _ => {}
        }
    }
    num.exact_div(&den).expect("Möbius product is a polynomial")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(v: &[i64]) -> IntPoly {
        IntPoly::new(v.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), ip(&[-1, 1]));
        assert_eq!(cyclotomic(2), ip(&[1, 1]));
        assert_eq!(cyclotomic(12), ip(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic_oracle(1), ip(&[-1, 1]));
        assert_eq!(cyclotomic_oracle(6), ip(&[1, -1, 1]));
        assert_eq!(cyclotomic_oracle(7), ip(&[1; 7]));
    }

    #[test]
    fn phi_105_has_a_coefficient_minus_two() {
        let p = cyclotomic(105);
        assert_eq!(p.degree().finite(), Some(48));
        assert!(p.coeffs().contains(&BigInt::from(-2)));
    }

    #[test]
    fn arithmetic_functions() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(12), 0);
        assert_eq!(moebius(30), -1);
        assert_eq!(totient(9), 6);
        assert_eq!(totient(1), 1);
        assert!(is_prime(199));
        assert!(!is_prime(1));
        assert!(!is_prime(91));
    }

    #[test]
    fn totient_counts_coprime_residues() {
        for n in 1..200u64 {
            let count = (1..=n).filter(|&k| num_integer::gcd(n, k) == 1).count() as u64;
            assert_eq!(totient(n), count, "n = {n}");
        }
    }

    #[test]
    fn binomial_factor_indices_multiply_back() {
        let mut cache = CyclotomicCache::new();
        for j in 1..30u64 {
            for negated in [false, true] {
                let mut prod = IntPoly::one();
                for d in binomial_factor_indices(negated, j) {
                    prod = &prod * cache.get(d);
                }
                let c = if negated {
                    -BigInt::one()
                } else {
                    BigInt::one()
                };
                let target = IntPoly::one_minus_monomial(&c, j as usize);
                assert!(
                    prod == target || prod == -&target,
                    "j = {j}, negated = {negated}"
                );
            }
        }
    }

    #[test]
    fn tsv_round_trip_and_validation() {
        let mut cache = CyclotomicCache::new();
        cache.warm_up(1..=30);
        let mut buf = Vec::new();
        cache.write_tsv(&mut buf).unwrap();
        let back = CyclotomicCache::read_tsv(&buf[..]).unwrap();
        assert_eq!(back.len(), cache.len());
        assert_eq!(back.lookup(12), cache.lookup(12));
        assert!(matches!(
            CyclotomicCache::read_tsv(&b"5\t1 + q\n"[..]),
            Err(CacheFileError::Invalid(5))
        ));
        assert!(matches!(
            CyclotomicCache::read_tsv(&b"five\tq\n"[..]),
            Err(CacheFileError::Malformed(1))
        ));
    }

    #[test]
    fn frozen_cache_serves_hits_and_misses() {
        let mut cache = CyclotomicCache::new();
        cache.warm_up([15]);
        let frozen = cache.freeze();
        assert!(frozen.contains(15) && frozen.contains(5));
        assert!(!frozen.contains(16));
        assert_eq!(frozen.phi(16).into_owned(), cyclotomic_oracle(16));
    }
}
