use std::sync::OnceLock;

use rayon::prelude::*;

use super::lemmas::{lemma_brackets, Lemma};
use super::printed;
use super::report::{params, ErrataEntry, VerificationReport, Witness, WitnessStatus, WitnessValue};
use super::{harmonic_table, notable, refinement_levels, Separation};
use crate::approx::{correction, correction_core, sharp_constant_form, target_core, ApproxMethod, Side, Theorem};
use crate::enclosure::{Interval, Precision};
use crate::error::{Error, Result};
use crate::exact::{HarmonicValue, Polynomial, Rational};

/// Half-width of the band around 1 for the normalized `21/5 - d_n`.
pub const ASYMPTOTIC_BAND: (i64, i64) = (2, 100);
/// Smallest index at which the `d_n` asymptotic ratio is evaluated.
pub const ASYMPTOTIC_MIN_N: u64 = 10_000;

/// Checks `lower < T_n < upper` for `n <= n_max`, and at `n = 1` that the
/// documented side overlaps `T_1` while the other side stays strict.
pub fn check_theorem_bounds(t: Theorem, n_max: u64, prec: &Precision) -> Result<VerificationReport> {
    if n_max == 0 {
        return Err(Error::domain("n_max must be at least 1"));
    }
    let levels = refinement_levels(prec);
    let (num, den) = sharp_constant_form(t);
    let constants: Vec<OnceLock<Interval>> = levels.iter().map(|_| OnceLock::new()).collect();
    let constant_at = |i: usize| -> &Interval {
        constants[i].get_or_init(|| {
            let b = levels[i] + 16;
            num.eval_core(b)
                .div(&den.eval_core(b))
                .expect("denominator is positive")
        })
    };
    constant_at(0);
    let hs = harmonic_table(n_max);
    let witnesses: Vec<Witness> = hs
        .par_iter()
        .filter_map(|h| {
            let w = bound_point(t, h, &levels, &constant_at, prec);
            (notable(h.n, n_max) || !matches!(w.status, WitnessStatus::Holds)).then_some(w)
        })
        .collect();
    let side = match t.equality_side() {
        Side::Lower => "lower",
        Side::Upper => "upper",
    };
    Ok(VerificationReport::new(
        format!("theorem-bounds/{t:?}").to_lowercase(),
        params([
            ("n_max", n_max.to_string()),
            ("eps", prec.eps().to_string()),
            ("equality_side", side.to_string()),
        ]),
        witnesses,
        Vec::new(),
    ))
}

fn bound_point<'a>(
    t: Theorem,
    h: &HarmonicValue,
    levels: &[u64],
    constant_at: &(dyn Fn(usize) -> &'a Interval + Sync),
    prec: &Precision,
) -> Witness {
    let m = t.method();
    let x = Rational::from(h.n);
    let p = m.poly_part(&x);
    let limit_side = Interval::point((&p + &m.limit()).recip().expect("positive"));
    let mut last = None;
    let mut status = WitnessStatus::Undecided;
    for (i, &bits) in levels.iter().enumerate() {
        let c = constant_at(i);
        let target = target_core(m, h, bits);
        let const_side = c.add_rational(&p).recip().expect("positive");
        let (lower, upper) = match t.equality_side() {
            Side::Lower => (const_side, limit_side.clone()),
            Side::Upper => (limit_side.clone(), const_side),
        };
        let decided = if h.n == 1 {
            equality_case(t.equality_side(), &lower, &target, &upper, prec)
        } else {
            match Separation::of(&lower, &target, &upper) {
                Separation::Inside => Some(WitnessStatus::Holds),
                Separation::Outside => Some(WitnessStatus::Violated),
                Separation::Overlap => None,
            }
        };
        last = Some((lower, target, upper));
        if let Some(s) = decided {
            status = s;
            break;
        }
    }
    let (lower, target, upper) = last.expect("at least one level");
    Witness::named(
        format!("n={}", h.n),
        [("lower", lower), ("target", target), ("upper", upper)],
        status,
    )
}

fn equality_case(
    side: Side,
    lower: &Interval,
    target: &Interval,
    upper: &Interval,
    prec: &Precision,
) -> Option<WitnessStatus> {
    let (eq, strict_ok, strict_bad) = match side {
        Side::Lower => (lower, target.strictly_below(upper), upper.hi() <= target.lo()),
        Side::Upper => (upper, lower.strictly_below(target), target.hi() <= lower.lo()),
    };
    if strict_bad || !eq.overlaps(target) {
        return Some(WitnessStatus::Violated);
    }
    let narrow = eq.width() <= *prec.eps() && target.width() <= *prec.eps();
    (strict_ok && narrow).then_some(WitnessStatus::Equality)
}

/// Strict monotonicity of the correction sequence of `m` on `1..=n_max`:
/// decreasing for `f`, increasing for `lambda` and `d`.
pub fn check_monotonicity(m: ApproxMethod, n_max: u64, prec: &Precision) -> Result<VerificationReport> {
    if n_max < 2 {
        return Err(Error::domain("monotonicity needs n_max >= 2"));
    }
    let decreasing = m == ApproxMethod::TothMare;
    let size = n_max as usize;
    let hs = harmonic_table(n_max);
    let mut values: Vec<Option<Interval>> = vec![None; size];
    let mut outcome: Vec<Option<WitnessStatus>> = vec![None; size - 1];
    let mut pending: Vec<usize> = (0..size - 1).collect();
    for bits in refinement_levels(prec) {
        let mut need = vec![false; size];
        for &i in &pending {
            need[i] = true;
            need[i + 1] = true;
        }
        let fresh: Vec<(usize, Option<Interval>)> = (0..size)
            .into_par_iter()
            .filter(|&i| need[i])
            .map(|i| (i, correction_core(m, &hs[i], bits).ok()))
            .collect();
        for (i, v) in fresh {
            if v.is_some() {
                values[i] = v;
            }
        }
        pending.retain(|&i| {
            let (Some(a), Some(b)) = (&values[i], &values[i + 1]) else {
                return true;
            };
            let (small, big) = if decreasing { (b, a) } else { (a, b) };
            let decided = if small.strictly_below(big) {
                Some(WitnessStatus::Holds)
            } else if big.hi() <= small.lo() {
                Some(WitnessStatus::Violated)
            } else {
                None
            };
            outcome[i] = decided;
            decided.is_none()
        });
        if pending.is_empty() {
            break;
        }
    }
    let name = m.sequence_name();
    let witnesses = (0..size - 1)
        .filter_map(|i| {
            let n = i as u64 + 1;
            let status = outcome[i].unwrap_or(WitnessStatus::Undecided);
            if !notable(n, n_max - 1) && status == WitnessStatus::Holds {
                return None;
            }
            let zero = || Interval::point(Rational::zero());
            Some(Witness::named(
                format!("n={n}"),
                [
                    (format!("{name}_{n}"), values[i].clone().unwrap_or_else(zero)),
                    (format!("{name}_{}", n + 1), values[i + 1].clone().unwrap_or_else(zero)),
                ],
                status,
            ))
        })
        .collect();
    let direction = if decreasing { "decreasing" } else { "increasing" };
    Ok(VerificationReport::new(
        format!("monotone-{name}"),
        params([
            ("n_max", n_max.to_string()),
            ("eps", prec.eps().to_string()),
            ("direction", direction.to_string()),
        ]),
        witnesses,
        Vec::new(),
    ))
}

fn truncate(p: &Polynomial, len: usize) -> Polynomial {
    Polynomial::new(p.coeffs().iter().take(len).cloned().collect())
}

/// Coefficients of `1/u^2`-free series of a bracket `sum c_k / x^k` in `u = 1/x`.
fn inverse_power_series(f: &crate::exact::RationalFunction) -> Vec<Rational> {
    let den = f.denom();
    let k = den.degree().expect("nonzero denominator");
    assert!(
        *den == Polynomial::monomial(Rational::one(), k),
        "bracket must be a sum of inverse powers"
    );
    (0..=k).map(|j| f.numer().coeff(k - j)).collect()
}

/// Expansion `d_n = a0 + a1 v + a2 v^2 + a3 v^3 + O(v^4)`, `v = 1/(n+1/2)`,
/// derived from the bracket of `Psi(x+1) - ln(x+1/2)`. Both sides of the
/// bracket agree through `1/x^7`, which fixes the coefficients returned.
pub fn d_asymptotic_series() -> Vec<Rational> {
    const LEN: usize = 4;
    let (lo, hi) = lemma_brackets(Lemma::Lemma3Psi);
    let t_lo = inverse_power_series(&lo);
    let t_hi = inverse_power_series(&hi);
    assert_eq!(t_lo[..8], t_hi[..8], "brackets differ below 1/x^8");
    assert!(t_lo[0].is_zero() && t_lo[1].is_zero());
    // T = u^2/24 * S with S(0) = 1
    let s: Vec<Rational> = (0..LEN + 2).map(|j| Rational::from(24) * &t_lo[j + 2]).collect();
    assert_eq!(s[0], Rational::one());
    let mut inv = vec![Rational::one()];
    for k in 1..LEN + 2 {
        let acc: Rational = (1..=k).map(|j| &s[j] * &inv[k - j]).sum();
        inv.push(-acc);
    }
    // d = 24/u^2 * (1/S - (1 + u + u^2/4))
    let base = [Rational::one(), Rational::one(), Rational::frac(1, 4)];
    for (j, b) in base.iter().enumerate().take(2) {
        assert_eq!(&inv[j], b, "pole terms must cancel");
    }
    let e: Vec<Rational> = (0..LEN)
        .map(|j| {
            let b = base.get(j + 2).cloned().unwrap_or_else(Rational::zero);
            Rational::from(24) * (&inv[j + 2] - &b)
        })
        .collect();
    // u = v / (1 - v/2)
    let u = Polynomial::new(
        (0..LEN)
            .map(|k| {
                if k == 0 {
                    Rational::zero()
                } else {
                    Rational::pow2(1 - k as i64)
                }
            })
            .collect(),
    );
    let mut d = Polynomial::zero();
    let mut power = Polynomial::one();
    for c in &e {
        d = &d + &power.scale(c);
        power = truncate(&(&power * &u), LEN);
    }
    (0..LEN).map(|k| d.coeff(k)).collect()
}

/// `0 < 6/5 - lambda_n < 38/(175 n(n+1))` for `n <= n_max`, `6/5 - lambda_n`
/// decreasing along `1, 2, 4, ...`, and the leading correction of `d_n`
/// at `max(n_max, ASYMPTOTIC_MIN_N)`.
pub fn check_asymptotics(n_max: u64, prec: &Precision) -> Result<VerificationReport> {
    if n_max == 0 {
        return Err(Error::domain("n_max must be at least 1"));
    }
    let levels = refinement_levels(prec);
    let hs = harmonic_table(n_max);
    let six_fifths = Rational::frac(6, 5);
    let zero = Interval::point(Rational::zero());
    let deltas: Vec<(Interval, WitnessStatus)> = hs
        .par_iter()
        .map(|h| {
            let n = Rational::from(h.n);
            let bound = Interval::point(Rational::frac(38, 175) / (&n * (&n + Rational::one())));
            let mut delta = zero.clone();
            for &bits in &levels {
                let Ok(lambda) = correction_core(ApproxMethod::LodgeRamanujan, h, bits) else {
                    continue;
                };
                delta = (-&lambda).add_rational(&six_fifths);
                match Separation::of(&zero, &delta, &bound) {
                    Separation::Inside => return (delta, WitnessStatus::Holds),
                    Separation::Outside => return (delta, WitnessStatus::Violated),
                    Separation::Overlap => {}
                }
            }
            (delta, WitnessStatus::Undecided)
        })
        .collect();
    let mut witnesses: Vec<Witness> = deltas
        .iter()
        .enumerate()
        .filter(|(i, (_, s))| notable(*i as u64 + 1, n_max) || *s != WitnessStatus::Holds)
        .map(|(i, (d, s))| Witness::new(format!("Delta_{}", i + 1), WitnessValue::Interval(d.clone()), *s))
        .collect();

    let mut k = 1usize;
    while 2 * k <= n_max as usize {
        let (a, b) = (&deltas[k - 1].0, &deltas[2 * k - 1].0);
        let status = if b.strictly_below(a) {
            WitnessStatus::Holds
        } else if a.hi() <= b.lo() {
            WitnessStatus::Violated
        } else {
            WitnessStatus::Undecided
        };
        witnesses.push(Witness::named(
            format!("Delta_{} > Delta_{}", k, 2 * k),
            [
                (format!("Delta_{k}"), a.clone()),
                (format!("Delta_{}", 2 * k), b.clone()),
            ],
            status,
        ));
        k *= 2;
    }

    let series = d_asymptotic_series();
    let big_n = n_max.max(ASYMPTOTIC_MIN_N);
    let d = correction(ApproxMethod::DeTempleWang, big_n, &Precision::digits(24))?;
    let gap = (-&d).add_rational(&Rational::frac(21, 5));
    let m = Rational::from(big_n) + Rational::frac(1, 2);
    let corrected = gap.scale(&(m.pow(2) / -&series[2]));
    let (bp, bq) = ASYMPTOTIC_BAND;
    let band = Rational::frac(bp, bq);
    let lo = Interval::point(Rational::one() - &band);
    let hi = Interval::point(Rational::one() + &band);
    let status = match Separation::of(&lo, &corrected, &hi) {
        Separation::Inside => WitnessStatus::Holds,
        Separation::Outside => WitnessStatus::Violated,
        Separation::Overlap => WitnessStatus::Undecided,
    };
    witnesses.push(Witness::new(
        format!("(21/5 - d_n)(n+1/2)^2 / {} at n={big_n}", -&series[2]),
        WitnessValue::Interval(corrected),
        status,
    ));
    let (pp, pq) = printed::D_ASYMPTOTIC_FIRST;
    let printed_ratio = gap.scale(&(&m * Rational::frac(-pq, pp)));
    witnesses.push(Witness::new(
        format!("(21/5 - d_n)(n+1/2) * {}/{} at n={big_n}", pq, -pp),
        WitnessValue::Interval(printed_ratio),
        WitnessStatus::Recorded,
    ));
    let errata = vec![
        ErrataEntry::rational("d_n asymptotic constant term", Rational::frac(21, 5), series[0].clone()),
        ErrataEntry::rational(
            "d_n asymptotic coefficient of (n+1/2)^-1",
            Rational::frac(pp, pq),
            series[1].clone(),
        ),
    ];
    Ok(VerificationReport::new(
        "asymptotics",
        params([
            ("n_max", n_max.to_string()),
            ("eps", prec.eps().to_string()),
            ("ratio_n", big_n.to_string()),
            ("band", band.to_string()),
        ]),
        witnesses,
        errata,
    ))
}
