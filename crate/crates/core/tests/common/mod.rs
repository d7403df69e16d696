//! Shared helpers for the integration tests: an independent decimal oracle
//! for slopes and a few constructors.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use sturmlab::{FracPermutation, IrrationalSlope};

/// `floor(alpha * 10^digits)`, computed from first principles (integer square
/// roots and the exponential series), never through the library.
#[derive(Clone, Debug)]
pub struct Decimal {
    scaled: BigInt,
    unit: BigInt,
}

impl Decimal {
    fn unit(digits: u32) -> BigInt {
        BigInt::from(10u32).pow(digits)
    }

    /// `(a + b sqrt(d)) / c`, to within one unit in the last place.
    pub fn surd(a: i64, b: i64, d: u64, c: i64, digits: u32) -> Self {
        let unit = Self::unit(digits);
        let root = (BigInt::from(d) * &unit * &unit).sqrt();
        let num = BigInt::from(a) * &unit + BigInt::from(b) * root;
        Decimal { scaled: num.div_floor(&BigInt::from(c)), unit }
    }

    pub fn phi(digits: u32) -> Self {
        Self::surd(-1, 1, 5, 2, digits)
    }

    pub fn sqrt2_minus_1(digits: u32) -> Self {
        Self::surd(-1, 1, 2, 1, digits)
    }

    /// `sum (-1)^k / k!` with guard digits.
    pub fn e_inv(digits: u32) -> Self {
        let unit = Self::unit(digits);
        let wide = Self::unit(digits + 12);
        let mut term = wide.clone();
        let mut sum = BigInt::zero();
        let mut k = 0u32;
        while !term.is_zero() {
            if k.is_multiple_of(2) {
                sum += &term;
            } else {
                sum -= &term;
            }
            k += 1;
            term /= k;
        }
        Decimal { scaled: sum / Self::unit(12), unit }
    }

    pub fn e(digits: u32) -> Self {
        let unit = Self::unit(digits);
        let wide = Self::unit(digits + 12);
        let mut term = wide;
        let mut sum = BigInt::zero();
        let mut k = 0u32;
        while !term.is_zero() {
            sum += &term;
            k += 1;
            term /= k;
        }
        Decimal { scaled: sum / Self::unit(12), unit }
    }

    /// `{i alpha}` scaled by `10^digits`.
    pub fn frac_key(&self, i: u64) -> BigInt {
        (BigInt::from(i) * &self.scaled).mod_floor(&self.unit)
    }

    pub fn floor(&self, i: i64) -> BigInt {
        (BigInt::from(i) * &self.scaled).div_floor(&self.unit)
    }

    /// `1..=n` ordered by fractional part.
    pub fn sorted(&self, n: usize) -> Vec<usize> {
        let keys: Vec<BigInt> = (0..=n as u64).map(|i| self.frac_key(i)).collect();
        let mut idx: Vec<usize> = (1..=n).collect();
        idx.sort_by(|&i, &j| keys[i].cmp(&keys[j]));
        idx
    }

    pub fn approx(&self) -> num_rational::BigRational {
        num_rational::BigRational::new(self.scaled.clone(), self.unit.clone())
    }

    pub fn ulp(&self) -> num_rational::BigRational {
        num_rational::BigRational::new(BigInt::one(), self.unit.clone())
    }
}

pub fn sqrt2_minus_1() -> IrrationalSlope {
    IrrationalSlope::quadratic(-1, 1, 2, 1).expect("sqrt(2) - 1")
}

/// Named test slopes with their decimal oracles.
pub fn oracle_slopes(digits: u32) -> Vec<(&'static str, IrrationalSlope, Decimal)> {
    vec![
        ("phi", IrrationalSlope::phi(), Decimal::phi(digits)),
        ("1/e", IrrationalSlope::e_inv(), Decimal::e_inv(digits)),
        ("sqrt2-1", sqrt2_minus_1(), Decimal::sqrt2_minus_1(digits)),
        ("e", IrrationalSlope::e(), Decimal::e(digits)),
    ]
}

pub fn perm(v: &[usize]) -> FracPermutation {
    FracPermutation::new(v.to_vec()).expect("valid permutation")
}

pub fn all_perms(n: usize) -> Vec<FracPermutation> {
    fn extend(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<FracPermutation>) {
        if cur.len() == used.len() {
            out.push(perm(cur));
            return;
        }
        for x in 1..=used.len() {
            if !used[x - 1] {
                used[x - 1] = true;
                cur.push(x);
                extend(cur, used, out);
                cur.pop();
                used[x - 1] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub fn inversion_sign(p: &FracPermutation) -> i8 {
    let v = p.one_line();
    let mut inv = 0usize;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            inv += usize::from(v[i] > v[j]);
        }
    }
    if inv.is_multiple_of(2) {
        1
    } else {
        -1
    }
}
