use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::ln::ln_core;
use super::{Interval, Precision};
use crate::error::{Error, Result};
use crate::exact::Rational;

/// Euler's constant, keyed by core bits (multiples of 16).
static GAMMA_CACHE: Mutex<Vec<(u64, Interval)>> = Mutex::new(Vec::new());

fn ceil_log2(n: u64) -> u64 {
    64 - n.saturating_sub(1).leading_zeros() as u64
}

/// `H_n` from the fixed-point sum of `1/k` with every term rounded outward;
/// width at most `2^-bits`.
pub fn harmonic_enclosure(n: u64, bits: u64) -> Interval {
    let work = bits + ceil_log2(n.max(1)) + 1;
    let unit = BigUint::one() << work;
    let mut lo = BigUint::zero();
    let mut hi = BigUint::zero();
    for k in 1..=n {
        let (q, r) = unit.div_rem(&BigUint::from(k));
        if !r.is_zero() {
            hi += 1u32;
        }
        hi += &q;
        lo += q;
    }
    let scale = Rational::pow2(-(work as i64));
    Interval::new(
        Rational::from(BigInt::from(lo)) * &scale,
        Rational::from(BigInt::from(hi)) * &scale,
    )
    .expect("ordered")
}

/// Smallest integer `m >= 0` with `coeff * (x + m)^power >= 2^(bits + 1)`.
fn shift_for_remainder(x: &Rational, coeff: u64, power: i32, bits: u64) -> u64 {
    let target = Rational::pow2(bits as i64 + 1);
    let ok = |m: u64| (x + &Rational::from(m)).pow(power) * Rational::from(coeff) >= target;
    // f64 estimate, then exact correction in both directions
    let est =
        (2f64.powf((bits as f64 + 1.0) / power as f64) / (coeff as f64).powf(1.0 / power as f64) - x.to_f64()).max(0.0);
    let mut m = if est.is_finite() {
        est.ceil() as u64
    } else {
        u64::MAX / 2
    };
    while m > 0 && ok(m - 1) {
        m -= 1;
    }
    while !ok(m) {
        m += 1;
    }
    m
}

/// `sum_{j=1..k} (1/(x+j))^power`, each term rounded outward at `work` bits.
fn shifted_reciprocal_sum(x: &Rational, k: u64, power: i32, work: u64) -> Interval {
    let mut lo = Rational::zero();
    let mut hi = Rational::zero();
    for j in 1..=k {
        let t = (x + &Rational::from(j)).pow(-power);
        lo += &t.floor_dyadic(work);
        hi += &t.ceil_dyadic(work);
    }
    Interval::new(lo, hi).expect("ordered")
}

fn rounded(value: Rational, bits: u64) -> Interval {
    Interval::new(value.floor_dyadic(bits), value.ceil_dyadic(bits)).expect("ordered")
}

/// Euler's constant to within `2^-bits`:
/// `gamma = H_n - ln n - 1/(2n) + 1/(12n^2) - 1/(120n^4) + 1/(252n^6) - theta/(240n^8)`
/// with `0 < theta < 1` and `n` the smallest with `1/(240n^8) <= 2^-(bits+1)`.
pub(crate) fn gamma_core(bits: u64) -> Interval {
    let want = (bits + 2).div_ceil(16) * 16;
    {
        let cache = GAMMA_CACHE.lock().expect("gamma cache poisoned");
        if let Some((_, g)) = cache.iter().find(|(b, _)| *b >= want) {
            return g.round_outward(bits + 2);
        }
    }
    let g = gamma_uncached(want);
    let mut cache = GAMMA_CACHE.lock().expect("gamma cache poisoned");
    if !cache.iter().any(|(b, _)| *b >= want) {
        cache.push((want, g.clone()));
        cache.sort_by_key(|(b, _)| *b);
    }
    g.round_outward(bits + 2)
}

fn gamma_uncached(bits: u64) -> Interval {
    let n = shift_for_remainder(&Rational::zero(), 240, 8, bits).max(1);
    let nr = Rational::from(n);
    let h = harmonic_enclosure(n, bits + 3);
    let ln_n = ln_core(&nr, bits + 3);
    let inv = nr.recip().expect("n >= 1");
    let series = Rational::frac(1, 2) * &inv - Rational::frac(1, 12) * inv.pow(2) + Rational::frac(1, 120) * inv.pow(4)
        - Rational::frac(1, 252) * inv.pow(6);
    let base = &(&h - &ln_n) - &rounded(series, bits + 3);
    let remainder = Rational::frac(1, 240) * inv.pow(8);
    Interval::new(base.lo() - &remainder, base.hi().clone()).expect("ordered")
}

/// Enclosure of Euler's constant of width at most `prec.eps`.
pub fn gamma_enclosure(prec: &Precision) -> Interval {
    prec.finish(gamma_core(prec.core().bits()))
}

/// `Psi(x + 1)` to within `2^-bits`, using
/// `Psi(y+1) = ln y + 1/(2y) - 1/(12y^2) + 1/(120y^4) - 1/(252y^6) + theta/(240y^8)`
/// at `y = x + k` and `Psi(x+1) = Psi(x+k+1) - sum_{j=1..k} 1/(x+j)`.
pub(crate) fn psi_core(x: &Rational, bits: u64, extra_shift: u64) -> Interval {
    let k = shift_for_remainder(x, 240, 8, bits) + extra_shift;
    let y = x + &Rational::from(k);
    let inv = y.recip().expect("y > 0");
    let series = Rational::frac(1, 2) * &inv - Rational::frac(1, 12) * inv.pow(2) + Rational::frac(1, 120) * inv.pow(4)
        - Rational::frac(1, 252) * inv.pow(6);
    let remainder = (Rational::frac(1, 240) * inv.pow(8)).ceil_dyadic(bits + 3);
    let shift_sum = shifted_reciprocal_sum(x, k, 1, bits + 3 + ceil_log2(k + 1));
    let at_y = &ln_core(&y, bits + 3) + &rounded(series, bits + 3);
    let at_y = Interval::new(at_y.lo().clone(), at_y.hi() + &remainder).expect("ordered");
    &at_y - &shift_sum
}

/// `Psi'(x + 1)` to within `2^-bits`, using
/// `Psi'(y+1) = 1/y - 1/(2y^2) + 1/(6y^3) - 1/(30y^5) + 1/(42y^7) - Theta/(30y^9)`
/// and `Psi'(x+1) = Psi'(x+k+1) + sum_{j=1..k} 1/(x+j)^2`.
pub(crate) fn psi_prime_core(x: &Rational, bits: u64, extra_shift: u64) -> Interval {
    let k = shift_for_remainder(x, 30, 9, bits) + extra_shift;
    let y = x + &Rational::from(k);
    let inv = y.recip().expect("y > 0");
    let series = inv.clone() - Rational::frac(1, 2) * inv.pow(2) + Rational::frac(1, 6) * inv.pow(3)
        - Rational::frac(1, 30) * inv.pow(5)
        + Rational::frac(1, 42) * inv.pow(7);
    let remainder = (Rational::frac(1, 30) * inv.pow(9)).ceil_dyadic(bits + 3);
    let shift_sum = shifted_reciprocal_sum(x, k, 2, bits + 3 + ceil_log2(k + 1));
    let at_y = rounded(series, bits + 3);
    let at_y = Interval::new(at_y.lo() - &remainder, at_y.hi().clone()).expect("ordered");
    &at_y + &shift_sum
}

fn require_positive(x: &Rational, what: &str) -> Result<()> {
    if x.is_positive() {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} requires x > 0, got {x}")))
    }
}

/// Enclosure of `Psi(x + 1)` of width at most `prec.eps`, `x > 0`.
pub fn psi_enclosure(x: &Rational, prec: &Precision) -> Result<Interval> {
    psi_enclosure_shifted(x, prec, 0)
}

/// As [`psi_enclosure`], with `extra_shift` more recurrence steps than needed.
pub fn psi_enclosure_shifted(x: &Rational, prec: &Precision, extra_shift: u64) -> Result<Interval> {
    require_positive(x, "psi_enclosure")?;
    Ok(prec.finish(psi_core(x, prec.core().bits(), extra_shift)))
}

/// Enclosure of `Psi'(x + 1)` of width at most `prec.eps`, `x > 0`.
pub fn psi_prime_enclosure(x: &Rational, prec: &Precision) -> Result<Interval> {
    psi_prime_enclosure_shifted(x, prec, 0)
}

/// As [`psi_prime_enclosure`], with `extra_shift` more recurrence steps.
pub fn psi_prime_enclosure_shifted(x: &Rational, prec: &Precision, extra_shift: u64) -> Result<Interval> {
    require_positive(x, "psi_prime_enclosure")?;
    Ok(prec.finish(psi_prime_core(x, prec.core().bits(), extra_shift)))
}

/// Encloses `Psi(x)` (note: not `Psi(x+1)`) from the series
/// `Psi(x) = -gamma - 1/x + sum_{n>=1} x/(n(x+n))` truncated after `terms`.
///
/// The terms `x/(n(n+x))` are positive and decreasing in `n`. Comparing with
/// `x/(n(n-1))`, which telescopes, bounds the tail above by `x/N`. Comparing
/// with `x/((n+x)(n+x+1))`, also telescoping, bounds it below by
/// `x/(N+x+1)`. The partial sum is accumulated in fixed point with outward
/// rounding, far below the tail width.
pub fn psi_series_oracle(x: &Rational, terms: u64) -> Result<Interval> {
    require_positive(x, "psi_series_oracle")?;
    if terms == 0 {
        return Err(Error::domain("psi_series_oracle requires at least one term"));
    }
    let n_bits = ceil_log2(terms + 1);
    let work = 3 * n_bits + 32;
    let p = x.numer().clone();
    let q = x.denom().clone();
    let scaled_p: BigInt = &p << work;
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    let big_n = terms as u128;
    let fast = scaled_p
        .to_u128()
        .zip(p.to_u128())
        .zip(q.to_u128())
        .filter(|((sp, pp), qq)| {
            // the running sums stay below 2 sp; the largest divisor is N (p + N q)
            *sp < 1u128 << 124
                && qq
                    .checked_mul(big_n)
                    .and_then(|v| v.checked_add(*pp))
                    .and_then(|v| v.checked_mul(big_n))
                    .is_some()
        });
    match fast {
        Some(((sp, pp), qq)) => {
            let (mut l, mut h) = (0u128, 0u128);
            for n in 1..=big_n {
                let d = n * (pp + n * qq);
                let t = sp / d;
                l += t;
                h += t + u128::from(sp % d != 0);
            }
            lo += l;
            hi += h;
        }
        None => {
            for n in 1..=terms {
                let n = BigInt::from(n);
                let d = &n * (&p + &n * &q);
                let (t, r) = scaled_p.div_rem(&d);
                if !r.is_zero() {
                    hi += 1;
                }
                hi += &t;
                lo += t;
            }
        }
    }
    let scale = Rational::pow2(-(work as i64));
    let nr = Rational::from(terms);
    let tail_lo = x / &(&nr + x + Rational::one());
    let tail_hi = x / &nr;
    let sum = Interval::new(
        Rational::from(lo) * &scale + tail_lo,
        Rational::from(hi) * &scale + tail_hi,
    )
    .expect("ordered");
    let gamma = gamma_core(2 * n_bits + 16);
    let inv_x = x.recip()?;
    Ok(&(&sum - &gamma) - &Interval::point(inv_x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::harmonic_exact;

    fn dec(s: &str) -> Rational {
        s.parse().unwrap()
    }

    /// 20-digit reference value widened by `1e-19`.
    fn reference(s: &str) -> Interval {
        let r = dec(s);
        let tol = Rational::pow10(-19);
        Interval::new(&r - &tol, &r + &tol).unwrap()
    }

    /// Independent oracle for `sum_{k>=1} 1/k^2 = pi^2/6`: partial sum to
    /// `N`, rounded outward, plus the tail bracket `1/(N+1) < tail < 1/N`.
    fn basel(n: u64) -> Interval {
        let mut lo = Rational::new(1, n + 1).unwrap();
        let mut hi = Rational::new(1, n).unwrap();
        for k in 1..=n {
            let t = Rational::new(1, k * k).unwrap();
            lo += &t.floor_dyadic(80);
            hi += &t.ceil_dyadic(80);
        }
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn harmonic_enclosure_contains_exact() {
        for n in [1u64, 2, 7, 100] {
            let e = harmonic_enclosure(n, 40);
            assert!(e.contains(&harmonic_exact(n).unwrap()));
            assert!(e.width() <= Rational::pow2(-40));
        }
    }

    #[test]
    fn gamma_values_and_widths() {
        let g4 = gamma_enclosure(&Precision::digits(4));
        assert!(g4.overlaps(&reference("0.57721566490153286061")));
        let g12 = gamma_enclosure(&Precision::digits(12));
        assert!(g12.overlaps(&reference("0.57721566490153286061")));
        for d in [6u32, 12, 30] {
            let p = Precision::digits(d);
            assert!(gamma_enclosure(&p).width() <= *p.eps());
        }
    }

    #[test]
    fn gamma_at_two_truncation_points_agree() {
        // The same formula evaluated at two different n must overlap.
        let a = gamma_uncached(40);
        let b = gamma_uncached(80);
        assert!(a.overlaps(&b));
        assert!(a.width() <= Rational::pow2(-40));
    }

    #[test]
    fn psi_at_one_is_one_minus_gamma() {
        let p = Precision::digits(10);
        let psi = psi_enclosure(&Rational::one(), &p).unwrap();
        assert!(psi.overlaps(&reference("0.42278433509846713939")));
        let bridge = &Interval::point(Rational::one()) - &gamma_enclosure(&p);
        assert!(psi.overlaps(&bridge));
        assert!(psi.width() <= *p.eps());
    }

    #[test]
    fn psi_bridge_to_harmonic_numbers() {
        let p = Precision::digits(12);
        let g = gamma_enclosure(&p);
        for n in [2u64, 5, 10] {
            let psi = psi_enclosure(&Rational::from(n), &p).unwrap();
            let sum = &psi + &g;
            assert!(sum.contains(&harmonic_exact(n).unwrap()), "n = {n}");
        }
    }

    #[test]
    fn psi_prime_at_one() {
        let p = Precision::digits(10);
        let v = psi_prime_enclosure(&Rational::one(), &p).unwrap();
        assert!(v.overlaps(&reference("0.64493406684822643647")));
        let oracle = &basel(20_000) - &Interval::point(Rational::one());
        assert!(v.overlaps(&oracle));
        for d in [6u32, 10, 20] {
            let p = Precision::digits(d);
            assert!(psi_prime_enclosure(&Rational::frac(3, 7), &p).unwrap().width() <= *p.eps());
        }
    }

    #[test]
    fn longer_recurrence_shift_overlaps() {
        let p = Precision::digits(15);
        for x in [Rational::frac(1, 2), Rational::from(3), Rational::frac(22, 7)] {
            let a = psi_prime_enclosure(&x, &p).unwrap();
            let b = psi_prime_enclosure_shifted(&x, &p, 5).unwrap();
            assert!(a.overlaps(&b));
            let a = psi_enclosure(&x, &p).unwrap();
            let b = psi_enclosure_shifted(&x, &p, 5).unwrap();
            assert!(a.overlaps(&b));
        }
    }

    #[test]
    fn domain_errors() {
        let p = Precision::digits(6);
        assert!(psi_enclosure(&Rational::zero(), &p).is_err());
        assert!(psi_prime_enclosure(&Rational::from(-1), &p).is_err());
        assert!(psi_series_oracle(&Rational::zero(), 10).is_err());
        assert!(psi_series_oracle(&Rational::one(), 0).is_err());
    }

    #[test]
    fn series_oracle_at_one_is_minus_gamma() {
        let s = psi_series_oracle(&Rational::one(), 1_000_000).unwrap();
        assert!(s.overlaps(&reference("-0.57721566490153286061")));
        assert!(s.width() < Rational::pow10(-11));
    }

    #[test]
    fn series_oracle_nests_and_overlaps() {
        let coarse = psi_series_oracle(&Rational::from(2), 1_000).unwrap();
        let fine = psi_series_oracle(&Rational::from(2), 1_000_000).unwrap();
        assert!(coarse.encloses(&fine));
        let lemma = psi_enclosure(&Rational::one(), &Precision::digits(6)).unwrap();
        assert!(fine.overlaps(&lemma));
    }

    #[test]
    fn series_oracle_big_argument_path() {
        let x = Rational::new(BigInt::one() << 200u32, (BigInt::one() << 199u32) + 1).unwrap();
        let a = psi_series_oracle(&x, 2_000).unwrap();
        let b = psi_enclosure(&(&x - &Rational::one()), &Precision::digits(8)).unwrap();
        assert!(a.overlaps(&b));
    }
}
