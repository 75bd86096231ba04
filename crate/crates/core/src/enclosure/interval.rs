use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Polynomial, Rational};

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

/// Operation selector for [`interval_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalOp {
    Add,
    Sub,
    Mul,
    Div,
    /// Unary; the right operand is ignored.
    Reciprocal,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::domain(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    /// Interval spanning two values in either order.
    pub fn hull_of(a: Rational, b: Rational) -> Self {
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) * Rational::frac(1, 2)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Rational::zero())
    }

    /// `other ⊆ self`
    pub fn encloses(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Every point of `self` is strictly less than every point of `other`.
    pub fn strictly_below(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = std::cmp::max(&self.lo, &other.lo).clone();
        let hi = std::cmp::min(&self.hi, &other.hi).clone();
        Interval::new(lo, hi).ok()
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: std::cmp::min(&self.lo, &other.lo).clone(),
            hi: std::cmp::max(&self.hi, &other.hi).clone(),
        }
    }

    pub fn recip(&self) -> Result<Interval> {
        if self.contains_zero() {
            return Err(Error::domain(format!("reciprocal of interval containing zero {self}")));
        }
        Ok(Interval {
            lo: self.hi.recip()?,
            hi: self.lo.recip()?,
        })
    }

    pub fn div(&self, rhs: &Interval) -> Result<Interval> {
        Ok(self * &rhs.recip()?)
    }

    pub fn add_rational(&self, c: &Rational) -> Interval {
        Interval {
            lo: &self.lo + c,
            hi: &self.hi + c,
        }
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        Interval::hull_of(&self.lo * c, &self.hi * c)
    }

    /// Tight square (`[-1, 2]^2 = [0, 4]`, not `[-2, 4]`).
    pub fn square(&self) -> Interval {
        let a = &self.lo * &self.lo;
        let b = &self.hi * &self.hi;
        if self.contains_zero() {
            Interval {
                lo: Rational::zero(),
                hi: a.max(b),
            }
        } else {
            Interval::hull_of(a, b)
        }
    }

    /// Outward rounding of both endpoints to multiples of `2^-bits`.
    pub fn round_outward(&self, bits: u64) -> Interval {
        Interval {
            lo: self.lo.floor_dyadic(bits),
            hi: self.hi.ceil_dyadic(bits),
        }
    }

    /// Range enclosure of `p` over this interval (interval Horner).
    pub fn eval_polynomial(&self, p: &Polynomial) -> Interval {
        p.coeffs()
            .iter()
            .rev()
            .fold(Interval::point(Rational::zero()), |acc, c| {
                (&acc * self).add_rational(c)
            })
    }
}

/// Exact interval arithmetic; the result contains every `x op y`.
pub fn interval_arith(a: &Interval, b: &Interval, op: IntervalOp) -> Result<Interval> {
    match op {
        IntervalOp::Add => Ok(a + b),
        IntervalOp::Sub => Ok(a - b),
        IntervalOp::Mul => Ok(a * b),
        IntervalOp::Div => a.div(b),
        IntervalOp::Reciprocal => a.recip(),
    }
}

impl<'a> Add<&'a Interval> for &'a Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl<'a> Sub<&'a Interval> for &'a Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl<'a> Mul<&'a Interval> for &'a Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = products.iter().min().expect("four products").clone();
        let hi = products.iter().max().expect("four products").clone();
        Interval { lo, hi }
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Interval> for Interval {
            type Output = Interval;
            fn $method(self, rhs: Interval) -> Interval {
                (&self).$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        -&self
    }
}

impl From<Rational> for Interval {
    fn from(x: Rational) -> Self {
        Interval::point(x)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]", self.lo.to_f64(), self.hi.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: i64, hi: i64) -> Interval {
        Interval::new(Rational::from(lo), Rational::from(hi)).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(interval_arith(&iv(1, 2), &iv(3, 4), IntervalOp::Add).unwrap(), iv(4, 6));
        assert_eq!(
            interval_arith(&iv(-1, 1), &iv(-1, 1), IntervalOp::Mul).unwrap(),
            iv(-1, 1)
        );
        let r = interval_arith(&iv(2, 4), &iv(0, 0), IntervalOp::Reciprocal).unwrap();
        assert_eq!(r, Interval::new(Rational::frac(1, 4), Rational::frac(1, 2)).unwrap());
        assert_eq!(
            interval_arith(&iv(1, 2), &iv(3, 4), IntervalOp::Sub).unwrap(),
            iv(-3, -1)
        );
    }

    #[test]
    fn division_by_zero_interval() {
        assert!(interval_arith(&iv(1, 2), &iv(-1, 1), IntervalOp::Div).is_err());
        assert!(iv(0, 3).recip().is_err());
        assert!(Interval::new(Rational::one(), Rational::zero()).is_err());
    }

    #[test]
    fn square_is_tight() {
        assert_eq!(iv(-1, 2).square(), iv(0, 4));
        assert_eq!(iv(-3, -2).square(), iv(4, 9));
    }

    #[test]
    fn polynomial_range_encloses_samples() {
        let p = Polynomial::from_integers(&[-3, 1, -2, 1]);
        let dom = Interval::new(Rational::frac(-1, 2), Rational::from(2)).unwrap();
        let range = dom.eval_polynomial(&p);
        for k in 0..=10 {
            let x = Rational::frac(-1, 2) + Rational::frac(k, 4);
            assert!(range.contains(&p.eval(&x)));
        }
    }
}
