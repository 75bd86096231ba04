//! The three classical approximations of `H_n`, the correction sequences
//! `f_n`, `lambda_n`, `d_n` and their sharp bounds.
//!
//! Each method pairs a logarithmic term `L(x)` and a polynomial `P(x)`:
//!
//! | method          | `L(x)`            | `P(x)`        | limit |
//! |-----------------|-------------------|---------------|-------|
//! | Toth-Mare       | `ln x`            | `2x`          | 1/3   |
//! | Lodge-Ramanujan | `ln sqrt(x(x+1))` | `6x(x+1)`     | 6/5   |
//! | DeTemple-Wang   | `ln(x + 1/2)`     | `24(x+1/2)^2` | 21/5  |
//!
//! The target is `T_n = H_n - L(n) - gamma` and the correction is
//! `1/T_n - P(n)`. The continuous versions replace `H_x - gamma` by
//! `Psi(x+1)`.

use serde::{Deserialize, Serialize};

use crate::enclosure::{gamma_core, ln2_core, ln_core, psi_core, Interval, Precision};
use crate::error::{Error, Result};
use crate::exact::{harmonic_value, HarmonicValue, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ApproxMethod {
    TothMare,
    LodgeRamanujan,
    DeTempleWang,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    Thm1,
    Thm2,
    Thm3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

impl ApproxMethod {
    pub const ALL: [ApproxMethod; 3] = [
        ApproxMethod::TothMare,
        ApproxMethod::LodgeRamanujan,
        ApproxMethod::DeTempleWang,
    ];

    pub fn theorem(self) -> Theorem {
        match self {
            ApproxMethod::TothMare => Theorem::Thm1,
            ApproxMethod::LodgeRamanujan => Theorem::Thm2,
            ApproxMethod::DeTempleWang => Theorem::Thm3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ApproxMethod::TothMare => "toth-mare",
            ApproxMethod::LodgeRamanujan => "lodge-ramanujan",
            ApproxMethod::DeTempleWang => "detemple-wang",
        }
    }

    /// Name of the correction sequence.
    pub fn sequence_name(self) -> &'static str {
        match self {
            ApproxMethod::TothMare => "f",
            ApproxMethod::LodgeRamanujan => "lambda",
            ApproxMethod::DeTempleWang => "d",
        }
    }

    /// `lim` of the correction sequence: 1/3, 6/5, 21/5.
    pub fn limit(self) -> Rational {
        match self {
            ApproxMethod::TothMare => Rational::frac(1, 3),
            ApproxMethod::LodgeRamanujan => Rational::frac(6, 5),
            ApproxMethod::DeTempleWang => Rational::frac(21, 5),
        }
    }

    /// `P(x)`.
    pub fn poly_part(self, x: &Rational) -> Rational {
        match self {
            ApproxMethod::TothMare => Rational::from(2) * x,
            ApproxMethod::LodgeRamanujan => Rational::from(6) * x * (x + Rational::one()),
            ApproxMethod::DeTempleWang => Rational::from(24) * (x + Rational::frac(1, 2)).pow(2),
        }
    }

    /// `L(x)` to within `2^-bits`, `x > 0`.
    pub(crate) fn log_core(self, x: &Rational, bits: u64) -> Interval {
        match self {
            ApproxMethod::TothMare => ln_core(x, bits),
            ApproxMethod::LodgeRamanujan => {
                ln_core(&(x * (x + Rational::one())), bits + 1).scale(&Rational::frac(1, 2))
            }
            ApproxMethod::DeTempleWang => ln_core(&(x + Rational::frac(1, 2)), bits),
        }
    }

    /// `L(1)` as a form in `ln 2` and `ln 3`.
    fn log_at_one(self) -> LogForm {
        match self {
            ApproxMethod::TothMare => LogForm::default(),
            ApproxMethod::LodgeRamanujan => LogForm {
                ln2: Rational::frac(1, 2),
                ..LogForm::default()
            },
            ApproxMethod::DeTempleWang => LogForm {
                ln2: Rational::from(-1),
                ln3: Rational::one(),
                ..LogForm::default()
            },
        }
    }
}

impl std::str::FromStr for ApproxMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "toth-mare" | "tothmare" | "tm" => Ok(ApproxMethod::TothMare),
            "lodge-ramanujan" | "lodgeramanujan" | "lr" => Ok(ApproxMethod::LodgeRamanujan),
            "detemple-wang" | "detemplewang" | "dw" => Ok(ApproxMethod::DeTempleWang),
            _ => Err(Error::Parse(format!("unknown method {s:?}"))),
        }
    }
}

impl Theorem {
    pub const ALL: [Theorem; 3] = [Theorem::Thm1, Theorem::Thm2, Theorem::Thm3];

    pub fn method(self) -> ApproxMethod {
        match self {
            Theorem::Thm1 => ApproxMethod::TothMare,
            Theorem::Thm2 => ApproxMethod::LodgeRamanujan,
            Theorem::Thm3 => ApproxMethod::DeTempleWang,
        }
    }

    /// Side of the bound pair attained at `n = 1`.
    ///
    /// `f_n` decreases to 1/3, so `c1 = f_1` sits in the lower bound;
    /// `lambda_n` and `d_n` increase, so `c2`, `c3` sit in the upper one.
    pub fn equality_side(self) -> Side {
        match self {
            Theorem::Thm1 => Side::Lower,
            Theorem::Thm2 | Theorem::Thm3 => Side::Upper,
        }
    }
}

impl std::str::FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "thm1" | "1" => Ok(Theorem::Thm1),
            "thm2" | "2" => Ok(Theorem::Thm2),
            "thm3" | "3" => Ok(Theorem::Thm3),
            _ => Err(Error::Parse(format!("unknown theorem {s:?}"))),
        }
    }
}

/// `constant + g gamma + a ln 2 + b ln 3` with rational coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogForm {
    pub constant: Rational,
    pub gamma: Rational,
    pub ln2: Rational,
    pub ln3: Rational,
}

impl LogForm {
    pub fn constant(c: Rational) -> Self {
        LogForm {
            constant: c,
            ..LogForm::default()
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        LogForm {
            constant: &self.constant * c,
            gamma: &self.gamma * c,
            ln2: &self.ln2 * c,
            ln3: &self.ln3 * c,
        }
    }

    pub fn sub(&self, other: &LogForm) -> Self {
        LogForm {
            constant: &self.constant - &other.constant,
            gamma: &self.gamma - &other.gamma,
            ln2: &self.ln2 - &other.ln2,
            ln3: &self.ln3 - &other.ln3,
        }
    }

    /// Enclosure to within `2^-bits`.
    pub(crate) fn eval_core(&self, bits: u64) -> Interval {
        let mut acc = Interval::point(self.constant.clone());
        let terms = [(&self.gamma, 0u8), (&self.ln2, 1), (&self.ln3, 2)];
        for (c, which) in terms {
            if c.is_zero() {
                continue;
            }
            let scale_bits = c.abs().floor_log2().unwrap_or(0).max(0) as u64 + 1;
            let b = bits + 2 + scale_bits;
            let v = match which {
                0 => gamma_core(b),
                1 => ln2_core(b),
                _ => ln_core(&Rational::from(3), b),
            };
            acc = &acc + &v.scale(c);
        }
        acc
    }

    pub fn enclose(&self, prec: &Precision) -> Interval {
        let core = prec.core();
        prec.finish(self.eval_core(core.bits()).round_outward(core.bits() + 4))
    }
}

/// Sharp constant `c_t = N / D` with `D = 1 - L(1) - gamma` (so `D = T_1`)
/// and `N = 1 - P(1) D`, which is exactly the value `1/T_1 - P(1)`.
pub fn sharp_constant_form(t: Theorem) -> (LogForm, LogForm) {
    let m = t.method();
    let one = LogForm::constant(Rational::one());
    let gamma = LogForm {
        gamma: Rational::one(),
        ..LogForm::default()
    };
    let den = one.sub(&m.log_at_one()).sub(&gamma);
    let p1 = m.poly_part(&Rational::one());
    let num = one.sub(&den.scale(&p1));
    (num, den)
}

/// Runs `f` at increasing working precision until its result fits in
/// `3/4 eps`, then rounds outward onto a grid below `eps/8`.
pub(crate) fn adaptive<F>(prec: &Precision, mut f: F) -> Result<Interval>
where
    F: FnMut(u64) -> Result<Interval>,
{
    let budget = prec.eps() * Rational::frac(3, 4);
    let grid = prec.bits() + 4;
    let mut bits = grid;
    for _ in 0..64 {
        let r = f(bits)?;
        if r.width() <= budget {
            return Ok(r.round_outward(grid));
        }
        let excess = (r.width() / &budget).floor_log2().unwrap_or(0).max(0) as u64;
        bits += excess + 8;
    }
    Err(Error::domain("enclosure did not reach the requested width"))
}

fn require_n(n: u64) -> Result<Rational> {
    if n == 0 {
        Err(Error::domain("n must be at least 1"))
    } else {
        Ok(Rational::from(n))
    }
}

fn harmonic_interval(h: &HarmonicValue, bits: u64) -> Interval {
    let (lo, hi) = h.dyadic_bounds(bits);
    Interval::new(lo, hi).expect("ordered")
}

/// `T_n = H_n - L(n) - gamma` to within `2^-bits`.
pub(crate) fn target_core(m: ApproxMethod, h: &HarmonicValue, bits: u64) -> Interval {
    let x = Rational::from(h.n);
    let hn = harmonic_interval(h, bits + 2);
    &(&hn - &m.log_core(&x, bits + 2)) - &gamma_core(bits + 2)
}

/// `1/T - P(x)`; fails if `T` is not separated from zero.
fn correction_from_target(m: ApproxMethod, x: &Rational, t: &Interval) -> Result<Interval> {
    Ok(t.recip()?.add_rational(&-m.poly_part(x)))
}

/// Correction `1/T_n - P(n)` at working precision `bits` for `T_n`.
pub(crate) fn correction_core(m: ApproxMethod, h: &HarmonicValue, bits: u64) -> Result<Interval> {
    correction_from_target(m, &Rational::from(h.n), &target_core(m, h, bits))
}

/// `H_n - L(n) - gamma`, the quantity bounded by the theorem.
pub fn target_quantity(n: u64, t: Theorem, prec: &Precision) -> Result<Interval> {
    require_n(n)?;
    let h = harmonic_value(n)?;
    adaptive(prec, |bits| Ok(target_core(t.method(), &h, bits)))
}

/// Correction sequence value at `n` for `m` (`f_n`, `lambda_n` or `d_n`).
pub fn correction(m: ApproxMethod, n: u64, prec: &Precision) -> Result<Interval> {
    require_n(n)?;
    let h = harmonic_value(n)?;
    adaptive(prec, |bits| correction_core(m, &h, bits))
}

/// `f_n = 1/(H_n - ln n - gamma) - 2n`.
pub fn correction_f(n: u64, prec: &Precision) -> Result<Interval> {
    correction(ApproxMethod::TothMare, n, prec)
}

/// `lambda_n = 1/(H_n - ln sqrt(n(n+1)) - gamma) - 6n(n+1)`.
pub fn correction_lambda(n: u64, prec: &Precision) -> Result<Interval> {
    correction(ApproxMethod::LodgeRamanujan, n, prec)
}

/// `d_n = 1/(H_n - ln(n+1/2) - gamma) - 24(n+1/2)^2`.
pub fn correction_d(n: u64, prec: &Precision) -> Result<Interval> {
    correction(ApproxMethod::DeTempleWang, n, prec)
}

/// Continuous correction `1/(Psi(x+1) - L(x)) - P(x)`, `x > 0`.
pub(crate) fn correction_cont_core(m: ApproxMethod, x: &Rational, bits: u64) -> Result<Interval> {
    let t = &psi_core(x, bits + 2, 0) - &m.log_core(x, bits + 2);
    correction_from_target(m, x, &t)
}

pub fn correction_cont(m: ApproxMethod, x: &Rational, prec: &Precision) -> Result<Interval> {
    if !x.is_positive() {
        return Err(Error::domain(format!("x must be positive, got {x}")));
    }
    adaptive(prec, |bits| correction_cont_core(m, x, bits))
}

/// `Lambda_x = 1/(2 Psi(x+1) - ln(x(x+1))) - 3x(x+1)`, so `2 Lambda_n = lambda_n`.
pub fn lambda_cont(x: &Rational, prec: &Precision) -> Result<Interval> {
    if !x.is_positive() {
        return Err(Error::domain(format!("x must be positive, got {x}")));
    }
    let half = Rational::frac(1, 2);
    adaptive(prec, |bits| {
        Ok(correction_cont_core(ApproxMethod::LodgeRamanujan, x, bits + 1)?.scale(&half))
    })
}

/// `D_x = 1/(Psi(x+1) - ln(x+1/2)) - 24(x+1/2)^2`.
pub fn d_cont(x: &Rational, prec: &Precision) -> Result<Interval> {
    correction_cont(ApproxMethod::DeTempleWang, x, prec)
}

/// `L(n) + gamma + 1/(P(n) + limit)`.
pub fn approx_value(n: u64, m: ApproxMethod, prec: &Precision) -> Result<Interval> {
    let x = require_n(n)?;
    let tail = (m.poly_part(&x) + m.limit()).recip()?;
    adaptive(prec, |bits| {
        Ok((&m.log_core(&x, bits + 2) + &gamma_core(bits + 2)).add_rational(&tail))
    })
}

/// `c1`, `c2`, `c3`: the value of the correction sequence at `n = 1`.
pub fn sharp_constant(t: Theorem, prec: &Precision) -> Interval {
    let (num, den) = sharp_constant_form(t);
    adaptive(prec, |bits| {
        // D is about 0.017 at worst; 8 guard bits cover the division.
        let b = bits + 8;
        num.eval_core(b).div(&den.eval_core(b))
    })
    .expect("denominator is bounded away from zero")
}

/// Bounds on `T_n` from one theorem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundPair {
    pub lower: Interval,
    pub upper: Interval,
    /// Side attained with equality, present only at `n = 1`.
    pub equality_at_one: Option<Side>,
}

/// `1/(P(n) + a) <= T_n <= 1/(P(n) + b)` where `{a, b}` are the sharp
/// constant and the limit, larger one first.
pub fn sharp_bounds(n: u64, t: Theorem, prec: &Precision) -> Result<BoundPair> {
    let x = require_n(n)?;
    let m = t.method();
    let p = m.poly_part(&x);
    let limit_side = Interval::point((&p + &m.limit()).recip()?);
    let (num, den) = sharp_constant_form(t);
    let const_side = adaptive(prec, |bits| {
        let b = bits + 16;
        let c = num.eval_core(b).div(&den.eval_core(b))?;
        c.add_rational(&p).recip()
    })?;
    let (lower, upper) = match t.equality_side() {
        Side::Lower => (const_side, limit_side),
        Side::Upper => (limit_side, const_side),
    };
    Ok(BoundPair {
        lower,
        upper,
        equality_at_one: (n == 1).then(|| t.equality_side()),
    })
}

/// Normalized error, oriented so that it is positive and tends to 1:
/// `(approx - H_n) 72 n^3` for Toth-Mare,
/// `(H_n - approx) 3150 (n(n+1))^3 / 19` for Lodge-Ramanujan,
/// `(H_n - approx) 806400 (n+1/2)^6 / 2071` for DeTemple-Wang.
pub fn error_order_product(n: u64, m: ApproxMethod, prec: &Precision) -> Result<Interval> {
    let x = require_n(n)?;
    let h = harmonic_value(n)?;
    let tail = (m.poly_part(&x) + m.limit()).recip()?;
    let (factor, over) = error_factor(m, &x);
    let factor_bits = factor.floor_log2().unwrap_or(0).max(0) as u64 + 1;
    adaptive(prec, |bits| {
        let b = bits + factor_bits + 2;
        let approx = (&m.log_core(&x, b) + &gamma_core(b)).add_rational(&tail);
        let hn = harmonic_interval(&h, b);
        let diff = if over { &approx - &hn } else { &hn - &approx };
        Ok(diff.scale(&factor))
    })
}

/// Normalizing factor and whether the approximation overestimates `H_n`.
pub fn error_factor(m: ApproxMethod, x: &Rational) -> (Rational, bool) {
    match m {
        ApproxMethod::TothMare => (Rational::from(72) * x.pow(3), true),
        ApproxMethod::LodgeRamanujan => (Rational::frac(3150, 19) * (x * (x + Rational::one())).pow(3), false),
        ApproxMethod::DeTempleWang => (Rational::frac(806400, 2071) * (x + Rational::frac(1, 2)).pow(6), false),
    }
}
