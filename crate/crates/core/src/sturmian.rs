//! Sturmian words and their factor sets.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::irrational::IrrationalSlope;
use crate::matrep;
use crate::permtool::FracPermutation;

/// Default multiplier `C` for the window scan cap of `C * n^2` positions.
pub const DEFAULT_SCAN_FACTOR: usize = 50;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Intercept {
    /// `beta = alpha`, giving the characteristic word.
    Slope,
    Rational(Rational64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Floor,
    Ceiling,
}

/// A mechanical word `floor((i+1)a + b) - floor(i a + b)` or its ceiling variant.
#[derive(Clone, Debug)]
pub struct WordSpec {
    slope: IrrationalSlope,
    intercept: Intercept,
    rounding: Rounding,
}

impl WordSpec {
    /// The slope is reduced into `(0, 1)`.
    pub fn new(alpha: &IrrationalSlope, intercept: Intercept, rounding: Rounding) -> Result<Self> {
        Ok(WordSpec {
            slope: alpha.reduced()?,
            intercept,
            rounding,
        })
    }

    pub fn characteristic(alpha: &IrrationalSlope) -> Result<Self> {
        Self::new(alpha, Intercept::Slope, Rounding::Floor)
    }

    pub fn slope(&self) -> &IrrationalSlope {
        &self.slope
    }

    /// `floor(t*alpha + beta)`, or the ceiling for the ceiling variant.
    fn level(&self, t: u64) -> Result<i64> {
        let t = i64::try_from(t).map_err(|_| Error::InvalidArgument("index exceeds i64".into()))?;
        let (fl, exact) = match &self.intercept {
            Intercept::Slope => (self.slope.floor_scaled(t + 1)?, false),
            Intercept::Rational(beta) => {
                let (r, s) = (*beta.numer(), *beta.denom());
                let st = s
                    .checked_mul(t)
                    .ok_or_else(|| Error::InvalidArgument("intercept denominator too large".into()))?;
                // floor(t*a + r/s) = floor((floor(s*t*a) + r) / s) since s*t*a is irrational
                // for t > 0; at t = 0 the value is r/s itself.
                let num = self.slope.floor_scaled(st)? + r;
                (Integer::div_floor(&num, &s), t == 0 && num.mod_floor(&s) == 0)
            }
        };
        Ok(match self.rounding {
            Rounding::Floor => fl,
            Rounding::Ceiling if exact => fl,
            Rounding::Ceiling => fl + 1,
        })
    }

    /// The letter at position `i`.
    pub fn letter(&self, i: u64) -> Result<u8> {
        let d = self.level(i + 1)? - self.level(i)?;
        u8::try_from(d)
            .ok()
            .filter(|&x| x <= 1)
            .ok_or_else(|| Error::InternalInvariantViolation(format!("letter {d} at {i}")))
    }

    /// Letters `0..len`, evaluating each level once.
    pub fn prefix(&self, len: usize) -> Result<Vec<u8>> {
        let mut out = Vec::with_capacity(len);
        let mut prev = self.level(0)?;
        for i in 0..len as u64 {
            let next = self.level(i + 1)?;
            let d = next - prev;
            if !(0..=1).contains(&d) {
                return Err(Error::InternalInvariantViolation(format!("letter {d} at {i}")));
            }
            out.push(d as u8);
            prev = next;
        }
        Ok(out)
    }
}

pub fn word_letter(spec: &WordSpec, i: u64) -> Result<u8> {
    spec.letter(i)
}

/// `(c(0), ..., c(len-1))` of the characteristic word of slope `{alpha}`.
pub fn characteristic_prefix(alpha: &IrrationalSlope, len: usize) -> Result<Vec<u8>> {
    WordSpec::characteristic(alpha)?.prefix(len)
}

/// A length-`n` block of a word, as a 0/1 column vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor(Vec<u8>);

impl Factor {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidArgument("factor entries must be 0 or 1".into()));
        }
        Ok(Factor(bits))
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    /// Coordinate-wise `1 - b`.
    pub fn complement(&self) -> Factor {
        Factor(self.0.iter().map(|&b| 1 - b).collect())
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// The `n + 1` factors of length `n`, in anti-lexicographic order: reading
/// from row 1 downward, with `1` before `0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactorSet {
    n: usize,
    factors: Vec<Factor>,
}

impl FactorSet {
    /// Sorts and checks the factors; there must be exactly `n + 1` distinct ones.
    pub fn new(n: usize, factors: impl IntoIterator<Item = Factor>) -> Result<Self> {
        let set: BTreeSet<Factor> = factors.into_iter().collect();
        if set.len() != n + 1 || set.iter().any(|f| f.len() != n) {
            return Err(Error::InvalidArgument(format!(
                "expected {} distinct factors of length {n}",
                n + 1
            )));
        }
        Ok(FactorSet {
            n,
            factors: set.into_iter().rev().collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Factor> {
        self.factors.iter()
    }

    /// `F_n(1 - alpha)`, obtained from `F_n(alpha)` by swapping letters.
    pub fn complement(&self) -> FactorSet {
        FactorSet::new(self.n, self.factors.iter().map(Factor::complement))
            .expect("complement of a factor set is a factor set")
    }
}

/// Distinct length-`n` windows of `spec`, scanning at most `scan_factor * n^2` positions.
pub fn factor_set_of_word(spec: &WordSpec, n: usize, scan_factor: usize) -> Result<FactorSet> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let cap = scan_factor.saturating_mul(n * n);
    let mut seen: BTreeSet<Factor> = BTreeSet::new();
    let mut word: Vec<u8> = Vec::new();
    let mut scanned = 0usize;
    let mut chunk = 4 * n + 8;
    while seen.len() < n + 1 {
        if scanned >= cap {
            return Err(Error::SafetyCapExceeded { scanned, wanted: n + 1 });
        }
        let want = (scanned + chunk).min(cap) + n - 1;
        if word.len() < want {
            word = spec.prefix(want)?;
        }
        while scanned + n <= word.len() && scanned < cap && seen.len() < n + 1 {
            seen.insert(Factor(word[scanned..scanned + n].to_vec()));
            scanned += 1;
        }
        chunk *= 2;
    }
    FactorSet::new(n, seen)
}

/// `F_n(alpha)` read off the characteristic word.
pub fn factor_set(alpha: &IrrationalSlope, n: usize) -> Result<FactorSet> {
    factor_set_with_cap(alpha, n, DEFAULT_SCAN_FACTOR)
}

pub fn factor_set_with_cap(alpha: &IrrationalSlope, n: usize, scan_factor: usize) -> Result<FactorSet> {
    factor_set_of_word(&WordSpec::characteristic(alpha)?, n, scan_factor)
}

/// The columns of the auxiliary matrix of `pi`.
pub fn factor_set_from_perm(pi: &FracPermutation) -> FactorSet {
    let l = matrep::aux_matrix(pi).expect("auxiliary matrix entries are 0/1");
    let n = pi.n();
    let cols = (0..=n).map(|j| Factor((0..n).map(|i| l.get(i, j) as u8).collect()));
    FactorSet::new(n, cols).expect("auxiliary matrix columns are distinct 0/1 vectors")
}
