//! Mechanical replay of the bound, monotonicity and positivity arguments:
//! exact identity reconstruction, positivity certificates, interval sweeps
//! and a ledger of printed against recomputed values.
//!
//! Every sweep refines its enclosures (doubling the working bits, starting
//! just above the requested `eps`) until each claim separates or
//! [`REFINEMENT_CAP_BITS`] is reached; overlaps at the cap are reported as
//! undecided, never as violations.

mod identities;
mod lemmas;
pub mod printed;
mod report;
mod sweeps;

pub use identities::{
    build_dw_gap, build_lr_gap, check_identities, compare_coefficients, compare_with_printed, positivity_certificate,
    PositivityCertificate, SignVerdict, SHIFT_SEARCH_CAP,
};
pub use lemmas::{check_lemma_sandwich, default_lemma_grid, lemma_brackets, Lemma};
pub use report::{
    digits_consistent, ErrataEntry, ErrataValue, Verdict, VerificationReport, Witness, WitnessStatus, WitnessValue,
};
pub use sweeps::{
    check_asymptotics, check_monotonicity, check_theorem_bounds, d_asymptotic_series, ASYMPTOTIC_BAND, ASYMPTOTIC_MIN_N,
};

use crate::enclosure::{Interval, Precision};
use crate::exact::{HarmonicSequence, HarmonicValue};

/// Largest working precision tried before a claim is declared undecided.
pub const REFINEMENT_CAP_BITS: u64 = 1024;

/// Working precisions tried in order: `bits(eps) + 8`, doubled up to the cap.
pub(crate) fn refinement_levels(prec: &Precision) -> Vec<u64> {
    let mut levels = Vec::new();
    let mut b = (prec.bits() + 8).min(REFINEMENT_CAP_BITS);
    loop {
        levels.push(b);
        if b >= REFINEMENT_CAP_BITS {
            return levels;
        }
        b = (2 * b).min(REFINEMENT_CAP_BITS);
    }
}

/// Position of an enclosure relative to strict bounds `lo < x < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Separation {
    Inside,
    Outside,
    Overlap,
}

impl Separation {
    pub(crate) fn of(lo: &Interval, x: &Interval, hi: &Interval) -> Separation {
        if lo.strictly_below(x) && x.strictly_below(hi) {
            Separation::Inside
        } else if x.hi() <= lo.lo() || x.lo() >= hi.hi() {
            Separation::Outside
        } else {
            Separation::Overlap
        }
    }
}

/// Indices that always get a witness: `n <= 10`, powers of ten, `n_max`.
pub(crate) fn notable(n: u64, n_max: u64) -> bool {
    if n <= 10 || n == n_max {
        return true;
    }
    let mut p = 10;
    while p < n {
        p *= 10;
    }
    p == n
}

/// Exact `H_1 ..= H_n_max`, unreduced.
pub(crate) fn harmonic_table(n_max: u64) -> Vec<HarmonicValue> {
    let mut seq = HarmonicSequence::new();
    (0..n_max).map(|_| seq.next_value()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;

    #[test]
    fn levels_double_to_cap() {
        let l = refinement_levels(&Precision::digits(12));
        assert_eq!(l[0], 48);
        assert_eq!(l[1], 96);
        assert_eq!(*l.last().unwrap(), REFINEMENT_CAP_BITS);
    }

    #[test]
    fn notable_indices() {
        assert!(notable(7, 50));
        assert!(notable(100, 5000));
        assert!(!notable(101, 5000));
        assert!(notable(5000, 5000));
    }

    #[test]
    fn separation_cases() {
        let p = |a: i64| Interval::point(Rational::from(a));
        let iv = |a: i64, b: i64| Interval::new(Rational::from(a), Rational::from(b)).unwrap();
        assert_eq!(Separation::of(&p(0), &iv(1, 2), &p(3)), Separation::Inside);
        assert_eq!(Separation::of(&p(0), &iv(3, 4), &p(3)), Separation::Outside);
        assert_eq!(Separation::of(&p(0), &iv(2, 4), &p(3)), Separation::Overlap);
    }
}
