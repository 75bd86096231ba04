use serde::{Deserialize, Serialize};

use super::report::{params, VerificationReport, Witness, WitnessStatus};
use super::{refinement_levels, Separation};
use crate::enclosure::{ln_core, psi_core, psi_prime_core, Interval, Precision};
use crate::error::{Error, Result};
use crate::exact::{Polynomial, Rational, RationalFunction};

/// The four two-sided digamma inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Lemma {
    /// `2 Psi(x+1) - ln(x(x+1))`
    Lemma2Psi,
    /// `1/x + 1/(x+1) - 2 Psi'(x+1)`
    Lemma2PsiPrime,
    /// `1/(x+1/2) - Psi'(x+1)`
    Lemma3PsiPrime,
    /// `Psi(x+1) - ln(x+1/2)`
    Lemma3Psi,
}

impl Lemma {
    pub const ALL: [Lemma; 4] = [
        Lemma::Lemma2Psi,
        Lemma::Lemma2PsiPrime,
        Lemma::Lemma3PsiPrime,
        Lemma::Lemma3Psi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Lemma::Lemma2Psi => "Lemma2_psi",
            Lemma::Lemma2PsiPrime => "Lemma2_psiprime",
            Lemma::Lemma3PsiPrime => "Lemma3_psiprime",
            Lemma::Lemma3Psi => "Lemma3_psi",
        }
    }
}

impl std::str::FromStr for Lemma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Lemma::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown lemma {s:?}")))
    }
}

/// `c / x^k`
fn inv_x(c: Rational, k: usize) -> RationalFunction {
    RationalFunction::over(c, Polynomial::monomial(Rational::one(), k)).expect("nonzero")
}

/// `c / (x^k (x+1)^k)`
fn inv_xx1(c: Rational, k: u32) -> RationalFunction {
    let xx1 = Polynomial::from_integers(&[0, 1, 1]);
    RationalFunction::over(c, xx1.pow(k)).expect("nonzero")
}

/// `1 / (x + 1/2)`
fn inv_x_half() -> RationalFunction {
    RationalFunction::over(Rational::one(), Polynomial::linear_root(&Rational::frac(-1, 2))).expect("nonzero")
}

fn sum(terms: Vec<RationalFunction>) -> RationalFunction {
    terms.iter().fold(RationalFunction::zero(), |acc, t| &acc + t)
}

/// Lower and upper bracket of the lemma, as exact rational functions of `x`.
pub fn lemma_brackets(l: Lemma) -> (RationalFunction, RationalFunction) {
    let f = Rational::frac;
    match l {
        Lemma::Lemma2Psi => {
            let lo = sum(vec![inv_xx1(f(1, 3), 1), inv_xx1(f(-1, 15), 2)]);
            let hi = &lo + &inv_xx1(f(8, 315), 3);
            (lo, hi)
        }
        Lemma::Lemma2PsiPrime => {
            let hi = sum(vec![
                inv_x(f(1, 1), 2),
                inv_xx1(f(-1, 1), 1),
                inv_x(f(-1, 3), 3),
                inv_x(f(1, 15), 5),
            ]);
            let lo = &hi + &inv_x(f(-1, 18), 7);
            (lo, hi)
        }
        Lemma::Lemma3PsiPrime => {
            let hi = sum(vec![
                inv_x_half(),
                inv_x(f(-1, 1), 1),
                inv_x(f(1, 2), 2),
                inv_x(f(-1, 6), 3),
                inv_x(f(1, 30), 5),
            ]);
            let lo = &hi + &inv_x(f(-1, 42), 7);
            (lo, hi)
        }
        Lemma::Lemma3Psi => {
            let lo = sum(vec![
                inv_x(f(1, 24), 2),
                inv_x(f(-1, 24), 3),
                inv_x(f(23, 960), 4),
                inv_x(f(-1, 160), 5),
                inv_x(f(-11, 8064), 6),
                inv_x(f(-1, 896), 7),
            ]);
            let hi = &lo + &inv_x(f(143, 30720), 8);
            (lo, hi)
        }
    }
}

/// Enclosure of the lemma's middle quantity at `x`, width about `2^-bits`.
pub(crate) fn middle_core(l: Lemma, x: &Rational, bits: u64) -> Interval {
    let b = bits + 3;
    let one = Rational::one();
    let half = Rational::frac(1, 2);
    match l {
        Lemma::Lemma2Psi => &psi_core(x, b, 0).scale(&Rational::from(2)) - &ln_core(&(x * (x + &one)), b),
        Lemma::Lemma2PsiPrime => {
            let c = x.recip().expect("x > 0") + (x + &one).recip().expect("x > 0");
            psi_prime_core(x, b, 0).scale(&Rational::from(-2)).add_rational(&c)
        }
        Lemma::Lemma3PsiPrime => {
            let c = (x + &half).recip().expect("x > 0");
            (-&psi_prime_core(x, b, 0)).add_rational(&c)
        }
        Lemma::Lemma3Psi => &psi_core(x, b, 0) - &ln_core(&(x + &half), b),
    }
}

/// Checks `lower(x) < middle(x) < upper(x)` at every grid point, refining
/// the enclosure of the middle quantity until the inequalities separate.
pub fn check_lemma_sandwich(l: Lemma, grid: &[Rational], prec: &Precision) -> Result<VerificationReport> {
    if grid.is_empty() {
        return Err(Error::domain("lemma grid must be nonempty"));
    }
    if let Some(x) = grid.iter().find(|x| !x.is_positive()) {
        return Err(Error::domain(format!("lemma grid point must be positive, got {x}")));
    }
    let (lo_f, hi_f) = lemma_brackets(l);
    let mut witnesses = Vec::new();
    for x in grid {
        let lo = Interval::point(lo_f.eval(x)?);
        let hi = Interval::point(hi_f.eval(x)?);
        let mut status = WitnessStatus::Undecided;
        let mut middle = Interval::point(Rational::zero());
        for bits in refinement_levels(prec) {
            middle = middle_core(l, x, bits);
            status = match Separation::of(&lo, &middle, &hi) {
                Separation::Inside => WitnessStatus::Holds,
                Separation::Outside => WitnessStatus::Violated,
                Separation::Overlap => continue,
            };
            break;
        }
        witnesses.push(Witness::named(
            format!("x={x}"),
            [("lower", lo), ("middle", middle), ("upper", hi)],
            status,
        ));
    }
    let grid_text = grid.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    Ok(VerificationReport::new(
        format!("lemma-sandwich/{}", l.name()),
        params([("grid", grid_text), ("eps", prec.eps().to_string())]),
        witnesses,
        Vec::new(),
    ))
}

/// The grid used by `verify lemmas`.
pub fn default_lemma_grid() -> Vec<Rational> {
    [(1, 2), (1, 1), (3, 2), (2, 1), (5, 1), (10, 1), (100, 1)]
        .iter()
        .map(|&(p, q)| Rational::frac(p, q))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::report::Verdict;

    #[test]
    fn brackets_match_direct_evaluation() {
        let x = Rational::frac(7, 3);
        let (lo, hi) = lemma_brackets(Lemma::Lemma3Psi);
        let direct_lo = Rational::frac(1, 24) * x.pow(-2) - Rational::frac(1, 24) * x.pow(-3)
            + Rational::frac(23, 960) * x.pow(-4)
            - Rational::frac(1, 160) * x.pow(-5)
            - Rational::frac(11, 8064) * x.pow(-6)
            - Rational::frac(1, 896) * x.pow(-7);
        assert_eq!(lo.eval(&x).unwrap(), direct_lo);
        assert_eq!(hi.eval(&x).unwrap(), direct_lo + Rational::frac(143, 30720) * x.pow(-8));
        let (lo, _) = lemma_brackets(Lemma::Lemma2Psi);
        let xx1 = &x * (&x + Rational::one());
        assert_eq!(
            lo.eval(&x).unwrap(),
            Rational::frac(1, 3) / &xx1 - Rational::frac(1, 15) / xx1.pow(2)
        );
    }

    #[test]
    fn sandwiches_hold_on_small_grids() {
        let p = Precision::digits(12);
        let grid = vec![Rational::one(), Rational::from(2), Rational::from(10)];
        for l in Lemma::ALL {
            let r = check_lemma_sandwich(l, &grid, &p).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{}", l.name());
        }
    }

    #[test]
    fn names_parse() {
        for l in Lemma::ALL {
            assert_eq!(l.name().parse::<Lemma>().unwrap(), l);
        }
        assert!(check_lemma_sandwich(Lemma::Lemma2Psi, &[], &Precision::default()).is_err());
    }
}
