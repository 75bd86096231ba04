use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::Rational;
use crate::error::{Error, Result};

/// `H_n = 1 + 1/2 + ... + 1/n`, exact and in lowest terms.
pub fn harmonic_exact(n: u64) -> Result<Rational> {
    if n == 0 {
        return Err(Error::domain("harmonic number requires n >= 1"));
    }
    harmonic_value(n).map(|v| v.to_rational())
}

/// `H_n` as an unreduced exact fraction, `n >= 1`.
pub fn harmonic_value(n: u64) -> Result<HarmonicValue> {
    if n == 0 {
        return Err(Error::domain("harmonic number requires n >= 1"));
    }
    let mut seq = HarmonicSequence::new();
    for _ in 1..n {
        seq.advance();
    }
    Ok(seq.next_value())
}

/// Yields `H_1, H_2, ...` exactly.
///
/// The running sum is kept over `lcm(1..=n)` so each step costs one
/// small-by-big division; only the emitted value is reduced.
#[derive(Debug, Clone)]
pub struct HarmonicSequence {
    n: u64,
    numer: BigInt,
    lcm: BigInt,
}

/// Exact `H_n` held as the unreduced fraction `numer / lcm(1..=n)`.
///
/// Reducing to lowest terms needs a gcd of numbers with `~1.44 n` bits;
/// sweeps that only need dyadic bounds skip it.
#[derive(Debug, Clone)]
pub struct HarmonicValue {
    pub n: u64,
    numer: BigInt,
    denom: BigInt,
}

impl HarmonicValue {
    pub fn to_rational(&self) -> Rational {
        Rational::new(self.numer.clone(), self.denom.clone()).expect("lcm is positive")
    }

    /// Multiples of `2^-bits` bracketing `H_n`, computed from the exact value.
    pub fn dyadic_bounds(&self, bits: u64) -> (Rational, Rational) {
        let (q, r) = (&self.numer << bits).div_rem(&self.denom);
        let lo = Rational::new(q.clone(), BigInt::one() << bits).expect("nonzero");
        if r.is_zero() {
            (lo.clone(), lo)
        } else {
            (lo, Rational::new(q + 1, BigInt::one() << bits).expect("nonzero"))
        }
    }
}

impl HarmonicSequence {
    pub fn new() -> Self {
        HarmonicSequence {
            n: 0,
            numer: BigInt::zero(),
            lcm: BigInt::one(),
        }
    }

    /// Next term without reduction to lowest terms.
    pub fn next_value(&mut self) -> HarmonicValue {
        self.advance();
        HarmonicValue {
            n: self.n,
            numer: self.numer.clone(),
            denom: self.lcm.clone(),
        }
    }

    fn advance(&mut self) {
        self.n += 1;
        let k = BigInt::from(self.n);
        let g = (&self.lcm % &k).gcd(&k);
        let factor = &k / g;
        if !factor.is_one() {
            self.numer *= &factor;
            self.lcm *= &factor;
        }
        self.numer += &self.lcm / &k;
    }
}

impl Default for HarmonicSequence {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for HarmonicSequence {
    type Item = Rational;

    fn next(&mut self) -> Option<Rational> {
        self.advance();
        Some(Rational::new(self.numer.clone(), self.lcm.clone()).expect("lcm is positive"))
    }

    fn nth(&mut self, skip: usize) -> Option<Rational> {
        for _ in 0..skip {
            self.advance();
        }
        self.next()
    }
}
