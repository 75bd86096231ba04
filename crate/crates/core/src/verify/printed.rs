//! Values exactly as printed in the displays being replayed. Nothing here
//! feeds a computation; these are only compared against recomputed values.

use crate::approx::{LogForm, Side, Theorem};
use crate::exact::{Polynomial, Rational};

/// Lodge-Ramanujan gap numerator over `66150 x^7 (x+1)^6`, ascending.
pub const LR_NUMERATOR: [i64; 7] = [-3675, -22178, -502999, -49266, -17829, 840, 1071];
pub const LR_DENOMINATOR_SCALE: i64 = 66150;

/// Monic quotient of the factored form, ascending, as (numer, denom).
pub const LR_FACTORED_QUOTIENT: [(i64, i64); 6] =
    [(137927, 1071), (32021, 1071), (784, 51), (628, 51), (295, 51), (1, 1)];
pub const LR_FACTORED_REMAINDER: (i64, i64) = (685960, 1071);
pub const LR_FACTORED_SCALE: (i64, i64) = (1051, 17);
pub const LR_SHIFT: i64 = 5;

/// DeTemple-Wang gap numerator over `17340825600 x^16 (1+2x)`, ascending.
pub const DW_NUMERATOR: [i64; 11] = [
    -9018009, -31747716, -14007876, 59313792, 11454272, -129239296, 119566592, 65630208, -701008896, -534417408,
    178139136,
];
pub const DW_DENOMINATOR_SCALE: i64 = 17340825600;

/// Quotient `p(x)` of the numerator by `x - 4`, ascending.
pub const DW_QUOTIENT: [i64; 10] = [
    548963242092,
    137248747452,
    34315688832,
    8564093760,
    2138159872,
    566849792,
    111820800,
    11547648,
    178139136,
    178139136,
];
pub const DW_REMAINDER: i64 = 2195843950359;
pub const DW_SHIFT: i64 = 4;

pub const LAMBDA_CONT_TABLE: [&str; 5] = ["0.56075467", "0.58418229", "0.59158588", "0.59481086", "0.59649019"];
pub const D_TABLE: [&str; 4] = ["3.73929752", "4.08925414", "4.13081174", "4.15288035"];

pub const SHARP_CONSTANT_DIGITS: [&str; 3] = ["0.3652721", "1.12150934", "3.73929752"];

/// Coefficient of `(n + 1/2)^-1` in the expansion of `d_n`.
pub const D_ASYMPTOTIC_FIRST: (i64, i64) = (-1400, 2071);

/// Coefficient of `Psi'(x+1)` in the displayed derivative of `Lambda_x`
/// multiplied by `(2 Psi(x+1) - ln x(x+1))^2`.
pub const LAMBDA_DERIVATIVE_PSI_PRIME: i64 = -1;

pub fn lr_numerator() -> Polynomial {
    Polynomial::from_integers(&LR_NUMERATOR)
}

pub fn lr_factored_quotient() -> Polynomial {
    Polynomial::new(
        LR_FACTORED_QUOTIENT
            .iter()
            .map(|&(p, q)| Rational::frac(p, q))
            .collect(),
    )
}

pub fn dw_numerator() -> Polynomial {
    Polynomial::from_integers(&DW_NUMERATOR)
}

pub fn dw_quotient() -> Polynomial {
    Polynomial::from_integers(&DW_QUOTIENT)
}

/// Closed form of each sharp constant as printed: (numerator, denominator).
pub fn sharp_constant_form(t: Theorem) -> (LogForm, LogForm) {
    let form = |c: i64, g: i64, l2: Rational, l3: i64| LogForm {
        constant: Rational::from(c),
        gamma: Rational::from(g),
        ln2: l2,
        ln3: Rational::from(l3),
    };
    match t {
        // 1/(1 - gamma) - 2 = (2 gamma - 1)/(1 - gamma)
        Theorem::Thm1 => (form(-1, 2, Rational::zero(), 0), form(1, -1, Rational::zero(), 0)),
        // (12 gamma - 11 - 12 ln 2)/(1 - gamma - ln sqrt 2)
        Theorem::Thm2 => (
            form(-11, 12, Rational::from(-12), 0),
            form(1, -1, Rational::frac(-1, 2), 0),
        ),
        // (54 ln(3/2) + 54 gamma - 53)/(1 - ln(3/2) - gamma)
        Theorem::Thm3 => (form(-53, 54, Rational::from(-54), 54), form(1, -1, Rational::one(), -1)),
    }
}

/// Side carrying the non-strict inequality in each printed statement.
pub fn equality_side(t: Theorem) -> Side {
    match t {
        Theorem::Thm1 | Theorem::Thm3 => Side::Lower,
        Theorem::Thm2 => Side::Upper,
    }
}

/// Logarithmic term in the middle of each printed inequality.
pub fn middle_log_term(t: Theorem) -> &'static str {
    match t {
        Theorem::Thm1 | Theorem::Thm3 => "ln n",
        Theorem::Thm2 => "ln sqrt(n(n+1))",
    }
}

/// Stated direction of each approximation relative to `H_n`.
pub fn direction(m: crate::approx::ApproxMethod) -> &'static str {
    use crate::approx::ApproxMethod::*;
    match m {
        TothMare => "underestimates",
        LodgeRamanujan | DeTempleWang => "overestimates",
    }
}
