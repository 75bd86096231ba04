use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::polynomial::Polynomial;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Quotient of two polynomials in canonical form: `gcd(num, den) = 1` and
/// `den` is monic. Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

/// Sign attached to a term of [`ratfun_combine`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermSign {
    Plus,
    Minus,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::domain("rational function with zero denominator"));
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let num = num.exact_div(&g).expect("gcd divides numerator");
        let den = den.exact_div(&g).expect("gcd divides denominator");
        let lc_inv = den.leading().expect("nonzero").recip()?;
        Ok(RationalFunction {
            num: num.scale(&lc_inv),
            den: den.scale(&lc_inv),
        })
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    /// `c / d(x)`, the common shape of the bracket terms.
    pub fn over(c: Rational, den: Polynomial) -> Result<Self> {
        Self::new(Polynomial::constant(c), den)
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::domain(format!("pole of rational function at {x}")));
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.num.scale(c), self.den.clone()).expect("denominator unchanged")
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::from_polynomial(Polynomial::one()), |acc, _| &acc * self)
    }

    /// The numerator this function has when written over `target`, i.e.
    /// `self * target` as a polynomial. `None` if the canonical
    /// denominator does not divide `target` in `Q[x]`.
    pub fn numerator_over(&self, target: &Polynomial) -> Option<Polynomial> {
        let cofactor = target.exact_div(&self.den)?;
        Some(&self.num * &cofactor)
    }
}

/// Exact signed sum of `terms`, reduced to canonical form.
pub fn ratfun_combine(terms: &[(RationalFunction, TermSign)]) -> RationalFunction {
    terms
        .iter()
        .fold(RationalFunction::zero(), |acc, (f, sign)| match sign {
            TermSign::Plus => &acc + f,
            TermSign::Minus => &acc - f,
        })
}

/// Exact `f(x)`; a pole is a domain error.
pub fn ratfun_eval(f: &RationalFunction, x: &Rational) -> Result<Rational> {
    f.eval(x)
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::new(num, &self.den * &rhs.den).expect("product of nonzero denominators")
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("product of nonzero denominators")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_integers(c)
    }

    fn recip_of(den: Polynomial) -> RationalFunction {
        RationalFunction::over(Rational::one(), den).unwrap()
    }

    #[test]
    fn combine_examples() {
        let x_inv = recip_of(p(&[0, 1]));
        let x1_inv = recip_of(p(&[1, 1]));
        let sum = ratfun_combine(&[(x_inv.clone(), TermSign::Plus), (x1_inv, TermSign::Plus)]);
        assert_eq!(sum, RationalFunction::new(p(&[1, 2]), p(&[0, 1, 1])).unwrap());
        let cancel = ratfun_combine(&[(x_inv.clone(), TermSign::Plus), (x_inv, TermSign::Minus)]);
        assert!(cancel.is_zero());
        assert_eq!(cancel.denom(), &Polynomial::one());
    }

    #[test]
    fn canonical_denominator_is_monic_and_reduced() {
        // (2x^2 - 2) / (4x - 4) = (x + 1) / 2
        let f = RationalFunction::new(p(&[-2, 0, 2]), p(&[-4, 4])).unwrap();
        assert_eq!(f.denom(), &Polynomial::one());
        assert_eq!(
            f.numer(),
            &Polynomial::new(vec![Rational::frac(1, 2), Rational::frac(1, 2)])
        );
        assert!(RationalFunction::new(p(&[1]), Polynomial::zero()).is_err());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(
            ratfun_eval(&recip_of(p(&[0, 1])), &Rational::from(2)).unwrap(),
            Rational::frac(1, 2)
        );
        let f = RationalFunction::new(p(&[1, 2]), p(&[0, 1, 1])).unwrap();
        assert_eq!(ratfun_eval(&f, &Rational::one()).unwrap(), Rational::frac(3, 2));
        assert!(ratfun_eval(&f, &Rational::zero()).is_err());
    }

    #[test]
    fn numerator_over_common_denominator() {
        let f = RationalFunction::new(p(&[1, 2]), p(&[0, 1, 1])).unwrap();
        let target = &p(&[0, 6]) * &p(&[1, 1]).pow(2);
        let n = f.numerator_over(&target).unwrap();
        assert_eq!(n, &p(&[1, 2]) * &p(&[6, 6]));
        assert!(f.numerator_over(&p(&[0, 0, 1])).is_none());
    }
}
