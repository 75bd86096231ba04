//! Rigorous enclosures of `ln`, Euler's constant, digamma and trigamma at
//! positive rational arguments.
//!
//! Every public enclosure is produced in two stages: a core computation of
//! width at most `eps / 8`, followed by [`Precision::finish`], which pads the
//! core by `3 eps / 8` on each side and rounds outward to a dyadic grid. The
//! padding makes refinements nest: a result at `eps' <= 2 eps / 3` always lies
//! inside the result at `eps`.

mod digamma;
mod interval;
mod ln;

pub use digamma::{
    gamma_enclosure, harmonic_enclosure, psi_enclosure, psi_enclosure_shifted, psi_prime_enclosure,
    psi_prime_enclosure_shifted, psi_series_oracle,
};
pub use interval::{interval_arith, Interval, IntervalOp};
pub use ln::{ln2_enclosure, ln_enclosure};

pub(crate) use digamma::{gamma_core, psi_core, psi_prime_core};
pub(crate) use ln::{ln2_core, ln_core};

use crate::error::{Error, Result};
use crate::exact::Rational;

/// Target maximum width of a result interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Precision {
    eps: Rational,
}

impl Precision {
    pub fn new(eps: Rational) -> Result<Self> {
        if !eps.is_positive() {
            return Err(Error::domain(format!("precision must be positive, got {eps}")));
        }
        Ok(Precision { eps })
    }

    /// `eps = 10^-digits`
    pub fn digits(digits: u32) -> Self {
        Precision {
            eps: Rational::pow10(-(digits as i32)),
        }
    }

    pub fn eps(&self) -> &Rational {
        &self.eps
    }

    /// Smallest `b >= 0` with `2^-b <= eps`.
    pub fn bits(&self) -> u64 {
        let e = self.eps.floor_log2().expect("eps is positive");
        (-e).max(0) as u64
    }

    /// `eps * factor`; `factor` must be positive.
    pub fn scaled(&self, factor: &Rational) -> Precision {
        assert!(factor.is_positive(), "precision scale must be positive");
        Precision {
            eps: &self.eps * factor,
        }
    }

    pub fn divided(&self, d: u64) -> Precision {
        self.scaled(&Rational::new(1, d).expect("nonzero divisor"))
    }

    /// Precision for a core computation that [`finish`](Self::finish) accepts.
    pub(crate) fn core(&self) -> Precision {
        self.divided(8)
    }

    /// Pads a core enclosure (width `<= eps/8`) into the published result.
    pub(crate) fn finish(&self, core: Interval) -> Interval {
        debug_assert!(core.width() <= self.core().eps, "core enclosure too wide");
        if core.is_point() {
            return core;
        }
        let pad = &self.eps * Rational::frac(3, 8);
        let grid = self.bits() + 4;
        let lo = (core.lo() - &pad).floor_dyadic(grid);
        let hi = (core.hi() + &pad).ceil_dyadic(grid);
        Interval::new(lo, hi).expect("ordered endpoints")
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::digits(12)
    }
}
