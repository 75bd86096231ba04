use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Interval, Precision};
use crate::error::{Error, Result};
use crate::exact::Rational;

/// Bits held by the shared `ln 2` enclosure.
const LN2_CACHE_BITS: u64 = 2048;

static LN2: OnceLock<Interval> = OnceLock::new();

/// Encloses `2 atanh(y) = ln((1+y)/(1-y))` to within `2^-bits`, `|y| <= 1/3`.
///
/// Partial sums of `2 sum y^(2j+1)/(2j+1)` are accumulated in fixed point
/// with `W` fractional bits, lower and upper powers rounded apart; the tail
/// after `J` terms is bounded by `2|y|^(2J+1) / ((2J+1)(1-y^2))`.
pub(crate) fn two_atanh(y: &Rational, bits: u64) -> Interval {
    if y.is_zero() {
        return Interval::point(Rational::zero());
    }
    // rounding drift is a few units per term and there are fewer than W terms
    let guard = 8 + (64 - (3 * (bits + 64)).leading_zeros() as u64);
    let work = bits + guard;
    // Long operands are replaced by dyadic neighbours; atanh is increasing.
    let size = y.numer().bits().max(y.denom().bits());
    if size > work + 32 {
        let lo = atanh_series(&y.floor_dyadic(work + 4), work);
        let hi = atanh_series(&y.ceil_dyadic(work + 4), work);
        return lo.hull(&hi);
    }
    atanh_series(y, work)
}

fn atanh_series(y: &Rational, work: u64) -> Interval {
    let a = y.numer().abs();
    let b = y.denom().clone();
    let a2 = &a * &a;
    let b2 = &b * &b;
    let gap = &b2 - &a2;
    let ceil_div = |n: BigInt, d: &BigInt| -> BigInt {
        let (q, r) = n.div_rem(d);
        if r.is_zero() {
            q
        } else {
            q + 1
        }
    };
    let mut p_lo = (&a << work) / &b;
    let mut p_hi = ceil_div(&a << work, &b);
    let mut s_lo = BigInt::zero();
    let mut s_hi = BigInt::zero();
    let mut j: u64 = 0;
    let tail = loop {
        let k = BigInt::from(2 * j + 1);
        s_lo += (&p_lo << 1) / &k;
        s_hi += ceil_div(&p_hi << 1, &k);
        p_lo = (&p_lo * &a2) / &b2;
        p_hi = ceil_div(&p_hi * &a2, &b2);
        j += 1;
        let tail = ceil_div((&p_hi << 1) * &b2, &(BigInt::from(2 * j + 1) * &gap));
        if tail <= BigInt::one() {
            break tail;
        }
    };
    let unit = Rational::pow2(-(work as i64));
    let lo = Rational::from_integer(s_lo) * &unit;
    let hi = Rational::from_integer(s_hi + tail) * &unit;
    if y.is_positive() {
        Interval::new(lo, hi).expect("ordered")
    } else {
        Interval::new(-hi, -lo).expect("ordered")
    }
}

/// `ln 2` to within `2^-bits`, cut from the shared cache when possible.
pub(crate) fn ln2_core(bits: u64) -> Interval {
    if bits + 2 > LN2_CACHE_BITS {
        return two_atanh(&Rational::frac(1, 3), bits);
    }
    LN2.get_or_init(|| two_atanh(&Rational::frac(1, 3), LN2_CACHE_BITS))
        .round_outward(bits + 2)
}

/// `ln q` to within `2^-bits`, `q > 0`.
///
/// Writes `q = 2^e m` with `m` in `(2/3, 4/3]`, so the series argument
/// `(m-1)/(m+1)` stays in `[-1/5, 1/7]`.
pub(crate) fn ln_core(q: &Rational, bits: u64) -> Interval {
    assert!(q.is_positive(), "ln of non-positive value");
    if *q == 1 {
        return Interval::point(Rational::zero());
    }
    let mut e = q.floor_log2().expect("nonzero");
    let mut m = q * Rational::pow2(-e);
    if m > Rational::frac(4, 3) {
        e += 1;
        m = m * Rational::frac(1, 2);
    }
    let y = (&m - Rational::one()) / (&m + Rational::one());
    let ln_m = two_atanh(&y, bits + 1);
    if e == 0 {
        return ln_m;
    }
    let scale_bits = 64 - e.unsigned_abs().leading_zeros() as u64;
    let ln2 = ln2_core(bits + 1 + scale_bits);
    &ln_m + &ln2.scale(&Rational::from(e))
}

/// Enclosure of `ln q` of width at most `prec.eps`.
pub fn ln_enclosure(q: &Rational, prec: &Precision) -> Result<Interval> {
    if !q.is_positive() {
        return Err(Error::domain(format!("ln of non-positive value {q}")));
    }
    Ok(prec.finish(ln_core(q, prec.core().bits())))
}

/// Enclosure of `ln 2` of width at most `prec.eps`.
pub fn ln2_enclosure(prec: &Precision) -> Interval {
    prec.finish(ln2_core(prec.core().bits()))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: atanh series for ln((1+y)/(1-y)) summed exactly,
    /// tail bounded by the geometric series of the remaining terms.
    fn oracle_ln(q: Rational, terms: u64) -> Interval {
        let y = (&q - Rational::one()) / (&q + Rational::one());
        let mut s = Rational::zero();
        for j in 0..terms {
            s += &(y.pow(2 * j as i32 + 1) * Rational::new(2, 2 * j + 1).unwrap());
        }
        let tail = Rational::from(2) * y.abs().pow(2 * terms as i32 + 1) / (Rational::one() - &y * &y);
        Interval::new(&s - &tail, &s + &tail).unwrap()
    }

    #[test]
    fn ln_one_is_exact_zero() {
        let r = ln_enclosure(&Rational::one(), &Precision::digits(12)).unwrap();
        assert_eq!(r, Interval::point(Rational::zero()));
    }

    #[test]
    fn ln_two_and_three_halves() {
        let p = Precision::digits(12);
        let ln2 = ln_enclosure(&Rational::from(2), &p).unwrap();
        assert!(ln2.width() <= *p.eps());
        assert!(ln2.overlaps(&oracle_ln(Rational::from(2), 60)));
        assert!(ln2.overlaps(&oracle_ln(Rational::from(2), 40)));
        let ln32 = ln_enclosure(&Rational::frac(3, 2), &p).unwrap();

        assert!(ln32.overlaps(&oracle_ln(Rational::frac(3, 2), 40)));
        assert!(ln32.width() <= *p.eps());
    }

    #[test]
    fn ln_rejects_non_positive() {
        let p = Precision::digits(6);
        assert!(ln_enclosure(&Rational::zero(), &p).is_err());
        assert!(ln_enclosure(&Rational::from(-3), &p).is_err());
    }

    #[test]
    fn ln_small_and_large_arguments() {
        let p = Precision::digits(20);
        for q in [Rational::frac(1, 1000), Rational::from(12345), Rational::frac(7, 9)] {
            let r = ln_enclosure(&q, &p).unwrap();
            assert!(r.width() <= *p.eps());
            let f = q.to_f64().ln();
            assert!((r.midpoint().to_f64() - f).abs() < 1e-12, "{q}");
        }
    }

    #[test]
    fn huge_operands_fall_back_to_dyadic_argument() {
        let q = Rational::one() + Rational::pow2(-3000) * Rational::frac(1, 3) + Rational::frac(1, 7);
        let r = ln_enclosure(&q, &Precision::digits(15)).unwrap();
        let lit: Rational = "0.13353139262452262315".parse().unwrap();
        let tol = Rational::pow10(-19);
        assert!(r.overlaps(&Interval::new(&lit - &tol, &lit + &tol).unwrap()));
    }
}
