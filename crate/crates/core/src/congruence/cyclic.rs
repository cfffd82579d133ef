use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::qseries::Sign;
use crate::IntPoly;

/// The ring `ℤ[q] / (q^n - 1)^M`, a cover of `ℤ[q] / Φ_n^M`.
///
/// With `t = q^n - 1`, every `q^{an+b}` is `q^b (1 + t)^a`, and `(1 + t)^a`
/// truncates after `M` terms even for negative `a`. Multiplying a residue by
/// a monomial or by a binomial `1 ± q^j` therefore costs `O(M² n)` with no
/// division, and `q` is a unit. Representatives have degree `< M n`.
#[derive(Clone, Debug)]
pub struct CyclicRing {
    n: usize,
    power: u32,
    /// `q^{Mn} ≡ Σ c_l q^{l n}` over `l < M`, stored as `(l n, c_l)`.
    relation: Vec<(usize, BigInt)>,
}

/// Generalized binomial coefficient `a choose l` for any integer `a`.
fn binomial(a: i64, l: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..l as i64 {
        num *= BigInt::from(a - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

impl CyclicRing {
    pub fn new(n: u64, power: u32) -> Self {
        assert!(n >= 1 && power >= 1, "cyclic ring needs n >= 1 and M >= 1");
        let n = usize::try_from(n).expect("n fits in usize");
        // (q^n - 1)^M = Σ_{l ≤ M} C(M, l) (-1)^{M-l} q^{ln}
        let relation = (0..power)
            .map(|l| {
                let mut c = binomial(power as i64, l);
                if (power - l).is_multiple_of(2) {
                    c = -c;
                }
                (l as usize * n, c)
            })
            .collect();
        CyclicRing { n, power, relation }
    }

    pub fn n(&self) -> u64 {
        self.n as u64
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    /// `M n`; every representative has smaller degree.
    pub fn dimension(&self) -> usize {
        self.power as usize * self.n
    }

    /// Canonical representative of an arbitrary polynomial.
    pub fn reduce(&self, p: IntPoly) -> IntPoly {
        let dim = self.dimension();
        if p.coeffs().len() <= dim {
            return p;
        }
        let mut c = p.into_coeffs();
        for i in (dim..c.len()).rev() {
            let top = std::mem::take(&mut c[i]);
            if top.is_zero() {
                continue;
            }
            let base = i - dim;
            for (off, r) in &self.relation {
                c[base + off] += &top * r;
            }
        }
        c.truncate(dim);
        IntPoly::new(c)
    }

    pub fn mul(&self, a: &IntPoly, b: &IntPoly) -> IntPoly {
        if a.is_one() {
            return b.clone();
        }
        if b.is_one() {
            return a.clone();
        }
        self.reduce(a * b)
    }

    /// `p · (q^n - 1)`.
    pub fn mul_t(&self, p: &IntPoly) -> IntPoly {
        &self.reduce(p.shift(self.n)) - p
    }

    /// `p · q^e` for any integer `e`.
    pub fn mul_q_pow(&self, p: &IntPoly, e: i64) -> IntPoly {
        let n = self.n as i64;
        let (a, b) = (e.div_euclid(n), e.rem_euclid(n) as usize);
        let base = self.reduce(p.shift(b));
        if a == 0 || self.power == 1 {
            return base;
        }
        let mut acc = base.clone();
        let mut t_pow = base;
        for l in 1..self.power {
            t_pow = self.mul_t(&t_pow);
            let c = binomial(a, l);
            if !c.is_zero() {
                acc += &t_pow.scale(&c);
            }
        }
        acc
    }

    pub fn q_pow(&self, e: i64) -> IntPoly {
        self.mul_q_pow(&IntPoly::one(), e)
    }

    /// `p · (1 - s q^e)`.
    pub fn mul_one_minus(&self, p: &IntPoly, s: Sign, e: i64) -> IntPoly {
        let shifted = self.mul_q_pow(p, e);
        match s {
            Sign::Plus => p - &shifted,
            Sign::Minus => p + &shifted,
        }
    }

    /// `p · t^c`; zero once `c ≥ M`.
    pub fn mul_t_pow(&self, p: &IntPoly, c: u32) -> IntPoly {
        if c >= self.power {
            return IntPoly::zero();
        }
        (0..c).fold(p.clone(), |acc, _| self.mul_t(&acc))
    }

    /// `u_a = 1 + q^n + ... + q^{(a-1)n}`, the cofactor in `1 - q^{an} = -t u_a`.
    /// It is `a` modulo `Φ_n`, hence a unit in `ℚ[q]/Φ_n^M` for `a ≥ 1`.
    pub fn unit_cofactor(&self, a: u64) -> IntPoly {
        let a = i64::try_from(a).expect("multiple fits in i64");
        let mut acc = IntPoly::zero();
        let mut t_pow = IntPoly::one();
        for l in 0..self.power {
            let c = binomial(a, l + 1);
            if !c.is_zero() {
                acc += &t_pow.scale(&c);
            }
            if l + 1 < self.power {
                t_pow = self.mul_t(&t_pow);
            }
        }
        acc
    }
}
