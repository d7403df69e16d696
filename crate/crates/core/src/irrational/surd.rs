use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cf::QuotientStream;
use crate::error::{Error, Result};

/// The quadratic irrational `(a + b*sqrt(d)) / c`.
///
/// Stored with `c > 0` and `gcd(a, b, c) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    a: i64,
    b: i64,
    d: u64,
    c: i64,
}

impl QuadraticSurd {
    pub fn new(a: i64, b: i64, d: u64, c: i64) -> Result<Self> {
        if c == 0 {
            return Err(Error::InvalidSlope("zero denominator".into()));
        }
        if b == 0 {
            return Err(Error::RationalInput(format!("({a}+0*sqrt({d}))/{c}")));
        }
        if d == 0 || d.sqrt() * d.sqrt() == d {
            return Err(Error::RationalInput(format!("sqrt({d}) is an integer")));
        }
        let (mut a, mut b, mut c) = (a, b, c);
        if c < 0 {
            a = a.checked_neg().ok_or_else(overflow)?;
            b = b.checked_neg().ok_or_else(overflow)?;
            c = c.checked_neg().ok_or_else(overflow)?;
        }
        let g = a.gcd(&b).gcd(&c);
        Ok(QuadraticSurd {
            a: a / g,
            b: b / g,
            d,
            c: c / g,
        })
    }

    pub fn a(&self) -> i64 {
        self.a
    }
    pub fn b(&self) -> i64 {
        self.b
    }
    pub fn d(&self) -> u64 {
        self.d
    }
    pub fn c(&self) -> i64 {
        self.c
    }

    /// `self + m`.
    pub fn shifted(&self, m: i64) -> Result<Self> {
        let a = m
            .checked_mul(self.c)
            .and_then(|mc| mc.checked_add(self.a))
            .ok_or_else(overflow)?;
        QuadraticSurd::new(a, self.b, self.d, self.c)
    }

    /// `-self`.
    pub fn negated(&self) -> Result<Self> {
        QuadraticSurd::new(-self.a, -self.b, self.d, self.c)
    }

    /// Exact `floor(t * self)`.
    ///
    /// `floor((t*a + t*b*sqrt(d)) / c) = floor((t*a + floor(t*b*sqrt(d))) / c)`
    /// for `c > 0`, and `floor(t*b*sqrt(d))` is an integer square root.
    pub fn floor_scaled(&self, t: i64) -> i64 {
        if t == 0 {
            return 0;
        }
        let tb = t as i128 * self.b as i128;
        let ta = t as i128 * self.a as i128;
        let tb_abs = tb.unsigned_abs();
        let fast = tb_abs
            .checked_mul(tb_abs)
            .and_then(|s| s.checked_mul(self.d as u128));
        match fast {
            Some(rad) => {
                let r = rad.sqrt() as i128;
                let fl = if tb > 0 { r } else { -r - 1 };
                let num = ta + fl;
                Integer::div_floor(&num, &(self.c as i128))
                    .to_i64()
                    .expect("floor(t*alpha) fits in i64")
            }
            None => {
                let tb = BigInt::from(tb);
                let rad = (&tb * &tb).magnitude() * BigUint::from(self.d);
                let r = BigInt::from_biguint(Sign::Plus, rad.sqrt());
                let fl = if tb.is_positive() { r } else { -r - 1 };
                (BigInt::from(ta) + fl)
                    .div_floor(&BigInt::from(self.c))
                    .to_i64()
                    .expect("floor(t*alpha) fits in i64")
            }
        }
    }

    /// Partial quotients via the standard `(P + sqrt(D)) / Q` recurrence.
    pub(crate) fn stream(&self) -> QuotientStream {
        let sign = if self.b > 0 { 1 } else { -1 };
        let mut p = BigInt::from(self.a * sign);
        let mut q = BigInt::from(self.c * sign);
        let b = BigInt::from(self.b);
        let mut dd = &b * &b * BigInt::from(self.d);
        if !((&dd - &p * &p) % &q).is_zero() {
            let qa = q.abs();
            p *= &qa;
            dd *= &qa * &qa;
            q *= &qa;
        }
        let s = dd.sqrt();
        Box::new(std::iter::from_fn(move || {
            let a = if q.is_positive() {
                (&p + &s).div_floor(&q)
            } else {
                (-&p - &s - BigInt::one()).div_floor(&(-&q))
            };
            let p_next = &a * &q - &p;
            let q_next = (&dd - &p_next * &p_next) / &q;
            p = p_next;
            q = q_next;
            Some(a)
        }))
    }
}

fn overflow() -> Error {
    Error::InvalidSlope("surd coefficients overflow 64 bits".into())
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.b < 0 { '-' } else { '+' };
        write!(f, "({}{}{}*sqrt({}))/{}", self.a, op, self.b.abs(), self.d, self.c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_rational_forms() {
        assert!(matches!(
            QuadraticSurd::new(1, 0, 5, 2),
            Err(Error::RationalInput(_))
        ));
        assert!(matches!(
            QuadraticSurd::new(1, 1, 9, 2),
            Err(Error::RationalInput(_))
        ));
        assert!(QuadraticSurd::new(1, 1, 5, 0).is_err());
    }

    #[test]
    fn normalizes_sign_and_gcd() {
        let s = QuadraticSurd::new(2, -4, 5, -6).unwrap();
        assert_eq!((s.a(), s.b(), s.d(), s.c()), (-1, 2, 5, 3));
    }

    #[test]
    fn floor_of_golden_ratio_multiples() {
        let phi = QuadraticSurd::new(-1, 1, 5, 2).unwrap();
        assert_eq!(phi.floor_scaled(1), 0);
        assert_eq!(phi.floor_scaled(10), 6);
        assert_eq!(phi.floor_scaled(-1), -1);
        assert_eq!(phi.floor_scaled(-10), -7);
    }

    #[test]
    fn floor_takes_the_bigint_path_for_huge_multipliers() {
        // (t*b)^2 * d overflows u128 here, the quotient itself is ~2e13.
        let s = QuadraticSurd::new(0, 3_000_000_000, 3, 1_000_000).unwrap();
        let t = 4_000_000_000i64;
        let got = s.floor_scaled(t);
        let via_cf = super::super::cf::floor_by_refinement(s.stream(), t, 10_000).unwrap();
        assert_eq!(got, via_cf);
        assert_eq!(s.floor_scaled(-t), -got - 1);
    }

    #[test]
    fn stream_of_sqrt2_is_periodic() {
        let s = QuadraticSurd::new(0, 1, 2, 1).unwrap();
        let q: Vec<BigInt> = s.stream().take(6).collect();
        let want: Vec<BigInt> = [1, 2, 2, 2, 2, 2].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(q, want);
    }

    #[test]
    fn stream_of_negative_surd() {
        // (sqrt(5) - 3) / 2 = -0.381966... = [-1; 1, 1, 1, ...]
        let s = QuadraticSurd::new(-3, 1, 5, 2).unwrap();
        let q: Vec<BigInt> = s.stream().take(5).collect();
        let want: Vec<BigInt> = [-1, 1, 1, 1, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(q, want);
        let t = QuadraticSurd::new(1, -1, 7, 3).unwrap(); // (1 - sqrt 7)/3 < 0
        let head: Vec<BigInt> = t.stream().take(1).collect();
        assert_eq!(head[0], BigInt::from(-1));
    }
}
