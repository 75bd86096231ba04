use serde::{Deserialize, Serialize};

use super::lemmas::{lemma_brackets, Lemma};
use super::printed;
use super::report::{params, ErrataEntry, ErrataValue, VerificationReport, Witness, WitnessStatus, WitnessValue};
use crate::approx::{
    approx_value, correction, correction_lambda, lambda_cont, sharp_bounds, sharp_constant, sharp_constant_form,
    ApproxMethod, LogForm, Side, Theorem,
};
use crate::enclosure::{gamma_enclosure, Interval, Precision};
use crate::error::{Error, Result};
use crate::exact::{harmonic_exact, Polynomial, Rational, RationalFunction};

/// Integer shifts tried past the requested point before giving up.
pub const SHIFT_SEARCH_CAP: i64 = 64;
const MAX_BISECTION_DEPTH: u32 = 40;
const MAX_RESIDUAL_CHECKS: usize = 4096;

/// Lower bracket of `1/x + 1/(x+1) - 2 Psi'(x+1)` minus `(6x+3)` times the
/// squared upper bracket of `2 Psi(x+1) - ln(x(x+1))`.
pub fn build_lr_gap() -> RationalFunction {
    let (psi_prime_lo, _) = lemma_brackets(Lemma::Lemma2PsiPrime);
    let (_, psi_hi) = lemma_brackets(Lemma::Lemma2Psi);
    let factor = RationalFunction::from_polynomial(Polynomial::from_integers(&[3, 6]));
    &psi_prime_lo - &(&factor * &psi_hi.pow(2))
}

/// Lower bracket of `1/(x+1/2) - Psi'(x+1)` minus `48(x+1/2)` times the
/// squared upper bracket of `Psi(x+1) - ln(x+1/2)`.
pub fn build_dw_gap() -> RationalFunction {
    let (psi_prime_lo, _) = lemma_brackets(Lemma::Lemma3PsiPrime);
    let (_, psi_hi) = lemma_brackets(Lemma::Lemma3Psi);
    let factor = RationalFunction::from_polynomial(Polynomial::from_integers(&[24, 48]));
    &psi_prime_lo - &(&factor * &psi_hi.pow(2))
}

/// `66150 x^7 (x+1)^6`
fn lr_target() -> Polynomial {
    let x7 = Polynomial::monomial(Rational::from(printed::LR_DENOMINATOR_SCALE), 7);
    &x7 * &Polynomial::from_integers(&[1, 1]).pow(6)
}

/// `17340825600 x^16 (1+2x)`
fn dw_target() -> Polynomial {
    let x16 = Polynomial::monomial(Rational::from(printed::DW_DENOMINATOR_SCALE), 16);
    &x16 * &Polynomial::from_integers(&[1, 2])
}

/// The whole-polynomial comparison.
pub fn compare_with_printed(derived: &Polynomial, printed: &Polynomial, location: &str) -> ErrataEntry {
    ErrataEntry::exact(
        location,
        ErrataValue::Polynomial(printed.clone()),
        ErrataValue::Polynomial(derived.clone()),
    )
}

/// One entry per coefficient, highest degree first.
pub fn compare_coefficients(derived: &Polynomial, printed: &Polynomial, location: &str) -> Vec<ErrataEntry> {
    let deg = derived.degree().max(printed.degree()).unwrap_or(0);
    (0..=deg)
        .rev()
        .map(|k| {
            ErrataEntry::rational(
                format!("{location}, coefficient of x^{k}"),
                printed.coeff(k),
                derived.coeff(k),
            )
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignVerdict {
    Positive,
    Negative,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositivityCertificate {
    pub shift_point: Rational,
    /// Coefficients of `p(x + shift_point)`.
    pub shifted: Polynomial,
    pub shifted_coefficients_nonnegative: bool,
    /// Smallest integer `m > shift_point` whose shift is nonnegative, when
    /// the shift at `shift_point` itself fails.
    pub minimal_integer_shift_found: Option<i64>,
    /// Sign decisions covering `(shift_point, m]`.
    pub residual_interval_checks: Vec<(Interval, SignVerdict)>,
    /// `p > 0` on `(shift_point, oo)` is certified.
    pub holds: bool,
}

fn nonnegative(p: &Polynomial) -> bool {
    !p.is_zero() && p.coeffs().iter().all(|c| !c.is_negative())
}

/// Lower bound of `q(t)` over `t in (0, w]` (`open_left`) or `[0, w]`,
/// from the constant term and the negative coefficients at `t = w`. With
/// `open_left`, the factor `t^j` of vanishing low coefficients is dropped.
fn shifted_lower_bound(q: &Polynomial, w: &Rational, open_left: bool) -> Rational {
    let coeffs = q.coeffs();
    let skip = if open_left {
        coeffs.iter().take_while(|c| c.is_zero()).count()
    } else {
        0
    };
    let mut bound = Rational::zero();
    for (k, c) in coeffs.iter().enumerate().skip(skip) {
        if k == skip {
            bound += c;
        } else if c.is_negative() {
            bound += &(c * &w.pow((k - skip) as i32));
        }
    }
    bound
}

fn residual_checks(p: &Polynomial, a: &Rational, m: &Rational) -> Vec<(Interval, SignVerdict)> {
    let mut out = Vec::new();
    let mut stack = vec![(a.clone(), m.clone(), 0u32)];
    while let Some((l, h, depth)) = stack.pop() {
        if out.len() + stack.len() >= MAX_RESIDUAL_CHECKS {
            out.push((Interval::new(l, h).expect("ordered"), SignVerdict::Undecided));
            continue;
        }
        let w = &h - &l;
        let q = p.taylor_shift(&l);
        let open_left = &l == a;
        let verdict = if shifted_lower_bound(&q, &w, open_left).is_positive() {
            SignVerdict::Positive
        } else if p.eval(&h).is_negative() || (!open_left && !p.eval(&l).is_positive()) {
            SignVerdict::Negative
        } else if depth >= MAX_BISECTION_DEPTH {
            SignVerdict::Undecided
        } else {
            let mid = (&l + &h) * Rational::frac(1, 2);
            stack.push((mid.clone(), h, depth + 1));
            stack.push((l, mid, depth + 1));
            continue;
        };
        out.push((Interval::new(l, h).expect("ordered"), verdict));
    }
    out.sort_by(|x, y| x.0.lo().cmp(y.0.lo()));
    out
}

/// Certifies `p > 0` on `(a, oo)`: first by the signs of `p(x + a)`, then by
/// the smallest integer shift that works plus sign checks on `(a, m]`.
pub fn positivity_certificate(p: &Polynomial, a: &Rational) -> Result<PositivityCertificate> {
    if p.is_zero() {
        return Err(Error::domain("positivity certificate of the zero polynomial"));
    }
    let shifted = p.taylor_shift(a);
    let ok = nonnegative(&shifted);
    let mut cert = PositivityCertificate {
        shift_point: a.clone(),
        shifted,
        shifted_coefficients_nonnegative: ok,
        minimal_integer_shift_found: None,
        residual_interval_checks: Vec::new(),
        holds: ok,
    };
    if ok {
        return Ok(cert);
    }
    let start = a.floor() + 1;
    let start: i64 = i64::try_from(&start).map_err(|_| Error::domain("shift point out of range"))?;
    for m in start..=start + SHIFT_SEARCH_CAP {
        let mr = Rational::from(m);
        if nonnegative(&p.taylor_shift(&mr)) {
            cert.minimal_integer_shift_found = Some(m);
            cert.residual_interval_checks = residual_checks(p, a, &mr);
            cert.holds = cert
                .residual_interval_checks
                .iter()
                .all(|(_, v)| *v == SignVerdict::Positive);
            return Ok(cert);
        }
    }
    Ok(cert)
}

fn status(ok: bool) -> WitnessStatus {
    if ok {
        WitnessStatus::Holds
    } else {
        WitnessStatus::Violated
    }
}

fn text(s: impl Into<String>) -> WitnessValue {
    WitnessValue::Text(s.into())
}

/// Numerator over `target`, checking that `target` is a valid denominator.
fn numerator_witness(gap: &RationalFunction, target: &Polynomial, name: &str, out: &mut Vec<Witness>) -> Polynomial {
    let num = gap.numerator_over(target).filter(|n| n.has_integer_coefficients());
    out.push(Witness::new(
        format!("{name} denominator divides {target}"),
        text(format!("canonical denominator {}", gap.denom())),
        status(num.is_some()),
    ));
    num.unwrap_or_else(|| gap.numer().clone())
}

/// Positivity of `num` beyond `shift`, plus exact sign samples of `gap`.
fn positivity_witnesses(
    num: &Polynomial,
    gap: &RationalFunction,
    shift: i64,
    name: &str,
    out: &mut Vec<Witness>,
) -> Result<PositivityCertificate> {
    let a = Rational::from(shift);
    let cert = positivity_certificate(num, &a)?;
    let how = if cert.shifted_coefficients_nonnegative {
        format!("shifted coefficients {}", cert.shifted)
    } else {
        format!(
            "integer shift {:?} plus {} residual intervals",
            cert.minimal_integer_shift_found,
            cert.residual_interval_checks.len()
        )
    };
    out.push(Witness::new(
        format!("{name} numerator > 0 on ({shift}, oo)"),
        text(how),
        status(cert.holds),
    ));
    for dx in [
        Rational::frac(1, 7),
        Rational::one(),
        Rational::from(5),
        Rational::from(95),
        Rational::from(1000),
    ] {
        let x = &a + &dx;
        let v = gap.eval(&x)?;
        out.push(Witness::new(
            format!("{name} gap at x={x}"),
            WitnessValue::Rational(v.clone()),
            status(v.is_positive()),
        ));
    }
    Ok(cert)
}

fn logform_entries(t: Theorem, out: &mut Vec<ErrataEntry>) {
    let (pn, pd) = printed::sharp_constant_form(t);
    let (rn, rd) = sharp_constant_form(t);
    let parts = |f: &LogForm| {
        [
            ("constant term", f.constant.clone()),
            ("gamma", f.gamma.clone()),
            ("ln 2", f.ln2.clone()),
            ("ln 3", f.ln3.clone()),
        ]
    };
    for (which, p, r) in [("numerator", &pn, &rn), ("denominator", &pd, &rd)] {
        for ((label, pv), (_, rv)) in parts(p).into_iter().zip(parts(r)) {
            out.push(ErrataEntry::rational(
                format!("{t:?} sharp constant {which}, coefficient of {label}"),
                pv,
                rv,
            ));
        }
    }
}

/// Exact identity replay and the printed-versus-recomputed ledger.
pub fn check_identities(prec: &Precision) -> Result<VerificationReport> {
    let mut w = Vec::new();
    let mut e = Vec::new();

    // Lodge-Ramanujan gap
    let lr = build_lr_gap();
    let lr_num = numerator_witness(&lr, &lr_target(), "lr gap", &mut w);
    e.extend(compare_coefficients(
        &lr_num,
        &printed::lr_numerator(),
        "lr gap numerator",
    ));
    let lead = lr_num.leading().cloned().unwrap_or_else(Rational::one);
    let (q, r) = lr_num
        .scale(&lead.recip()?)
        .divrem(&Polynomial::linear_root(&Rational::from(printed::LR_SHIFT)))?;
    let r = r.coeff(0);
    e.extend(compare_coefficients(
        &q,
        &printed::lr_factored_quotient(),
        "lr factored quotient",
    ));
    let (rp, rq) = printed::LR_FACTORED_REMAINDER;
    e.push(ErrataEntry::rational(
        "lr factored remainder",
        Rational::frac(rp, rq),
        r.clone(),
    ));
    let (sp, sq) = printed::LR_FACTORED_SCALE;
    let scale = Rational::from(printed::LR_DENOMINATOR_SCALE) / &lead;
    e.push(ErrataEntry::rational(
        "lr factored denominator scale",
        Rational::frac(sp, sq),
        scale,
    ));
    let expanded =
        (&(&Polynomial::linear_root(&Rational::from(printed::LR_SHIFT)) * &q) + &Polynomial::constant(r)).scale(&lead);
    w.push(Witness::new(
        "lr factored form expands to the recomputed numerator",
        text(expanded.to_string()),
        status(expanded == lr_num),
    ));
    positivity_witnesses(&lr_num, &lr, printed::LR_SHIFT, "lr", &mut w)?;
    w.push(Witness::new(
        "lr gap at x=1",
        WitnessValue::Rational(lr.eval(&Rational::one())?),
        WitnessStatus::Recorded,
    ));
    e.push(ErrataEntry::rational(
        "Lambda' numerator, coefficient of Psi'(x+1)",
        Rational::from(printed::LAMBDA_DERIVATIVE_PSI_PRIME),
        // d/dx of 2 Psi(x+1) - ln(x(x+1)) is 2 Psi'(x+1) - 1/x - 1/(x+1)
        Rational::from(-2),
    ));

    // DeTemple-Wang gap
    let dw = build_dw_gap();
    let dw_num = numerator_witness(&dw, &dw_target(), "dw gap", &mut w);
    e.extend(compare_coefficients(
        &dw_num,
        &printed::dw_numerator(),
        "dw gap numerator",
    ));
    let (p, r) = dw_num.divrem(&Polynomial::linear_root(&Rational::from(printed::DW_SHIFT)))?;
    e.extend(compare_coefficients(&p, &printed::dw_quotient(), "dw quotient p(x)"));
    e.push(ErrataEntry::rational(
        "dw remainder r",
        Rational::from(printed::DW_REMAINDER),
        r.coeff(0),
    ));
    let recombined = &(&p * &Polynomial::linear_root(&Rational::from(printed::DW_SHIFT))) + &r;
    w.push(Witness::new(
        "dw p(x)(x-4)+r equals the recomputed numerator",
        text(recombined.to_string()),
        status(recombined == dw_num),
    ));
    positivity_witnesses(&dw_num, &dw, printed::DW_SHIFT, "dw", &mut w)?;
    w.push(Witness::new(
        "dw gap at x=4",
        WitnessValue::Rational(dw.eval(&Rational::from(printed::DW_SHIFT))?),
        WitnessStatus::Recorded,
    ));

    // sharp constants: closed forms, printed digits, equality side, middle term
    let fine = Precision::digits(15);
    for (i, t) in Theorem::ALL.into_iter().enumerate() {
        logform_entries(t, &mut e);
        let c = sharp_constant(t, &fine);
        e.push(ErrataEntry::digits(
            format!("{t:?} sharp constant digits"),
            printed::SHARP_CONSTANT_DIGITS[i],
            &c,
        ));
        let m = t.method();
        let first = correction(m, 1, &fine)?;
        let second = correction(m, 2, &fine)?;
        let side = if second.strictly_below(&first) {
            "lower"
        } else {
            "upper"
        };
        w.push(Witness::named(
            format!("{} at n=1,2", m.sequence_name()),
            [("n=1", first.clone()), ("n=2", second)],
            WitnessStatus::Recorded,
        ));
        w.push(Witness::new(
            format!("{t:?} sharp constant equals {}_1", m.sequence_name()),
            WitnessValue::Interval(c.clone()),
            status(c.overlaps(&first)),
        ));
        let printed_side = match printed::equality_side(t) {
            Side::Lower => "lower",
            Side::Upper => "upper",
        };
        e.push(ErrataEntry::text(
            format!("{t:?} side attained at n=1"),
            printed_side,
            side,
        ));
        e.push(middle_term_entry(t, &fine)?);
    }

    // direction of each approximation
    for m in ApproxMethod::ALL {
        let mut over = 0;
        let mut under = 0;
        for n in [1u64, 10, 100] {
            let a = approx_value(n, m, &fine)?;
            let h = Interval::point(harmonic_exact(n)?);
            if h.strictly_below(&a) {
                over += 1;
            } else if a.strictly_below(&h) {
                under += 1;
            }
            w.push(Witness::named(
                format!("{} at n={n}", m.name()),
                [("approx", a), ("H_n", h)],
                WitnessStatus::Recorded,
            ));
        }
        let recomputed = match (over, under) {
            (3, 0) => "overestimates",
            (0, 3) => "underestimates",
            _ => "mixed",
        };
        e.push(ErrataEntry::text(
            format!("{} direction", m.name()),
            printed::direction(m),
            recomputed,
        ));
    }

    // tables
    let table_prec = Precision::digits(15);
    for (i, s) in printed::LAMBDA_CONT_TABLE.iter().enumerate() {
        let n = i as u64 + 1;
        let v = lambda_cont(&Rational::from(n), &table_prec)?;
        e.push(ErrataEntry::digits(format!("Lambda_{n}"), s, &v));
    }
    for (i, s) in printed::D_TABLE.iter().enumerate() {
        let n = i as u64 + 1;
        let v = correction(ApproxMethod::DeTempleWang, n, &table_prec)?;
        e.push(ErrataEntry::digits(format!("d_{n}"), s, &v));
    }
    let lam = correction_lambda(1, &table_prec)?;
    w.push(Witness::new(
        "lambda_1",
        WitnessValue::Interval(lam),
        WitnessStatus::Recorded,
    ));
    w.push(Witness::new(
        "gamma",
        WitnessValue::Interval(gamma_enclosure(prec)),
        WitnessStatus::Recorded,
    ));

    Ok(VerificationReport::new(
        "identities",
        params([("eps", prec.eps().to_string())]),
        w,
        e,
    ))
}

/// Whether the printed middle term survives at `n = 1`; if not, the
/// recomputed entry names the method's own logarithmic term.
fn middle_term_entry(t: Theorem, prec: &Precision) -> Result<ErrataEntry> {
    let printed_term = printed::middle_log_term(t);
    let own = match t.method() {
        ApproxMethod::TothMare => "ln n",
        ApproxMethod::LodgeRamanujan => "ln sqrt(n(n+1))",
        ApproxMethod::DeTempleWang => "ln(n+1/2)",
    };
    if printed_term == own {
        return Ok(ErrataEntry::text(format!("{t:?} middle term"), printed_term, own));
    }
    // at n = 1 the printed term is H_1 - ln 1 - gamma = 1 - gamma
    let b = sharp_bounds(1, t, prec)?;
    let value = (-&gamma_enclosure(prec)).add_rational(&Rational::one());
    let inside = b.lower.lo() <= value.hi() && value.lo() <= b.upper.hi();
    let recomputed = if inside { printed_term } else { own };
    Ok(ErrataEntry::text(
        format!("{t:?} middle term"),
        printed_term,
        recomputed,
    ))
}
