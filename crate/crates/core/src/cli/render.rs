use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use crate::enclosure::Interval;
use crate::error::{Error, Result};
use crate::exact::Rational;

/// Marker appended to a digit string that is a truncation, not the value.
pub const ELLIPSIS: char = '…';

fn fixed(n: &BigInt, k: u32) -> String {
    let scale = BigInt::from(10).pow(k);
    let (q, r) = n.abs().div_rem(&scale);
    let sign = if n.is_negative() { "-" } else { "" };
    if k == 0 {
        format!("{sign}{q}")
    } else {
        format!("{sign}{q}.{:0>width$}", r.to_string(), width = k as usize)
    }
}

/// Shortest decimal for `x` if it terminates within `digits` fractional digits.
pub fn exact_decimal(x: &Rational, digits: u32) -> Option<String> {
    (0..=digits).find_map(|k| {
        let scaled = x * Rational::pow10(k as i32);
        scaled.is_integer().then(|| fixed(&scaled.floor(), k))
    })
}

/// Digits shared by every point of `x`, truncated toward zero, or `None`
/// when the endpoints disagree at `digits` fractional places or `x` straddles 0.
pub fn common_prefix(x: &Interval, digits: u32) -> Option<String> {
    if x.lo().is_negative() && !x.hi().is_negative() {
        return None;
    }
    let negative = x.hi().is_negative();
    let (a, b) = if negative {
        (-x.hi(), -x.lo())
    } else {
        (x.lo().clone(), x.hi().clone())
    };
    let scale = Rational::pow10(digits as i32);
    let fa = (&a * &scale).floor();
    let fb = (&b * &scale).floor();
    // b may sit exactly on the next digit boundary; then the prefix does not cover it
    if fa != fb {
        return None;
    }
    let body = fixed(&fa, digits);
    Some(if negative {
        format!("-{body}{ELLIPSIS}")
    } else {
        format!("{body}{ELLIPSIS}")
    })
}

fn floor_log10(a: &Rational) -> i32 {
    let mut e = (a.floor_log2().expect("positive") as f64 * std::f64::consts::LOG10_2).floor() as i32;
    while Rational::pow10(e) > *a {
        e -= 1;
    }
    while Rational::pow10(e + 1) <= *a {
        e += 1;
    }
    e
}

/// `d.ddd…e-N` with `digits` significant digits shared by every point of `x`,
/// for enclosures that exclude zero.
pub fn scientific_prefix(x: &Interval, digits: u32) -> Option<String> {
    if x.contains_zero() || digits == 0 {
        return None;
    }
    let negative = x.hi().is_negative();
    let (a, b) = if negative {
        (-x.hi(), -x.lo())
    } else {
        (x.lo().clone(), x.hi().clone())
    };
    let e = floor_log10(&a);
    let k = digits as i32 - 1 - e;
    let scale = Rational::pow10(k);
    let fa = (&a * &scale).floor();
    if fa != (&b * &scale).floor() {
        return None;
    }
    let sign = if negative { "-" } else { "" };
    Some(format!("{sign}{}{ELLIPSIS}e{e}", fixed(&fa, digits - 1)))
}

fn is_zero_prefix(s: &str) -> bool {
    s.ends_with(ELLIPSIS) && !s.contains('e') && !s.chars().any(|c| ('1'..='9').contains(&c))
}

/// `m ± r` with both parts at `digits` fractional places, `r` rounded up.
pub fn plus_minus(x: &Interval, digits: u32) -> String {
    let scale = Rational::pow10(digits as i32);
    let half = Rational::frac(1, 2);
    let m = (&(x.midpoint() * &scale) + &half).floor();
    let mr = Rational::from_integer(m.clone()) / &scale;
    let spread = (x.hi() - &mr).max(&mr - x.lo());
    let r = (&spread * &scale).ceil().max(BigInt::from(1));
    format!("{} ± {}", fixed(&m, digits), fixed(&r, digits))
}

/// Decimal text faithful to `x`: the exact value when it is a point with a
/// short expansion, otherwise the common digits of both endpoints followed by
/// `…`, otherwise `m ± r`. A prefix of zeros for a value bounded away from 0
/// is replaced by `digits` significant digits in exponent form.
/// [`parse_rendered`] of the result encloses `x`.
pub fn render_decimal(x: &Interval, digits: u32) -> String {
    if x.is_point() {
        if let Some(s) = exact_decimal(x.lo(), digits) {
            return s;
        }
    }
    match common_prefix(x, digits) {
        Some(p) if is_zero_prefix(&p) => scientific_prefix(x, digits).unwrap_or(p),
        Some(p) => p,
        None => plus_minus(x, digits),
    }
}

/// The set of reals a rendered string stands for.
pub fn parse_rendered(s: &str) -> Result<Interval> {
    let s = s.trim();
    if let Some((m, r)) = s.split_once('±') {
        let m: Rational = m.trim().parse()?;
        let r: Rational = r.trim().parse()?;
        return Interval::new(&m - &r, &m + &r);
    }
    if let Some((body, e)) = s.split_once(&format!("{ELLIPSIS}e")) {
        let e: i32 = e
            .parse()
            .map_err(|_| Error::Parse(format!("invalid exponent in {s:?}")))?;
        let mantissa = parse_rendered(&format!("{body}{ELLIPSIS}"))?;
        return Ok(mantissa.scale(&Rational::pow10(e)));
    }
    if let Some(body) = s.strip_suffix(ELLIPSIS) {
        let p: Rational = body.parse()?;
        let k = body.split_once('.').map_or(0, |(_, f)| f.len()) as i32;
        let ulp = Rational::pow10(-k);
        return if body.starts_with('-') {
            Interval::new(&p - &ulp, p)
        } else {
            Interval::new(p.clone(), &p + &ulp)
        };
    }
    if s.is_empty() {
        return Err(Error::Parse("empty decimal".into()));
    }
    Ok(Interval::point(s.parse()?))
}

/// True when [`render_decimal`] falls back to the `m ± r` form.
pub fn is_plus_minus(s: &str) -> bool {
    s.contains('±')
}

/// False for renderings a tighter enclosure could improve: `m ± r`, or
/// a bare zero prefix.
pub fn is_settled(s: &str) -> bool {
    !is_plus_minus(s) && !is_zero_prefix(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: &str, hi: &str) -> Interval {
        Interval::new(lo.parse().unwrap(), hi.parse().unwrap()).unwrap()
    }

    #[test]
    fn exact_points() {
        assert_eq!(render_decimal(&Interval::point(Rational::frac(3, 2)), 6), "1.5");
        assert_eq!(render_decimal(&Interval::point(Rational::from(7)), 3), "7");
        assert_eq!(render_decimal(&Interval::point(Rational::frac(1, 3)), 4), "0.3333…");
        assert_eq!(render_decimal(&Interval::point(Rational::frac(-1, 8)), 2), "-0.12…");
        assert_eq!(render_decimal(&Interval::point(Rational::frac(-1, 8)), 3), "-0.125");
    }

    #[test]
    fn prefixes_and_fallback() {
        assert_eq!(
            render_decimal(&iv("0.577215664901", "0.577215664902"), 8),
            "0.57721566…"
        );
        assert_eq!(render_decimal(&iv("0.1299", "0.1301"), 3), "0.130 ± 0.001");
        assert_eq!(render_decimal(&iv("-0.01", "0.01"), 2), "0.00 ± 0.01");
        assert_eq!(render_decimal(&iv("-2.7182", "-2.71"), 2), "-2.71…");
        assert_eq!(render_decimal(&iv("0.129", "0.13"), 2), "0.13 ± 0.01");
    }

    #[test]
    fn tiny_values_use_exponent() {
        assert_eq!(render_decimal(&iv("2.5487e-15", "2.5488e-15"), 4), "2.548…e-15");
        assert_eq!(render_decimal(&iv("-1.3889e-11", "-1.3888e-11"), 4), "-1.388…e-11");
        assert_eq!(render_decimal(&iv("2.5e-15", "2.7e-15"), 6), "0.000000…");
        assert_eq!(render_decimal(&iv("9.99e-7", "1.001e-6"), 3), "0.000…");
        let x = iv("-1.3889e-11", "-1.3888e-11");
        assert!(parse_rendered(&render_decimal(&x, 4)).unwrap().encloses(&x));
        assert!(!is_settled("0.000…"));
        assert!(is_settled("2.5…e-15"));
    }

    #[test]
    fn reparse_encloses() {
        for (lo, hi, d) in [
            ("0.577215664901", "0.577215664902", 8),
            ("0.1299", "0.1301", 3),
            ("-2.7183", "-2.7182", 3),
            ("-0.01", "0.02", 2),
        ] {
            let x = iv(lo, hi);
            let back = parse_rendered(&render_decimal(&x, d)).unwrap();
            assert!(back.encloses(&x), "{lo} {hi} {d}");
        }
        assert!(parse_rendered("").is_err());
        assert!(parse_rendered("abc").is_err());
    }
}
