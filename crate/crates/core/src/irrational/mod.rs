//! Exact irrational slopes.
//!
//! Every decision about an irrational `alpha` (floors of integer multiples,
//! comparisons of fractional parts) is made exactly. Quadratic surds go
//! through an integer square root; everything else is decided by rational
//! brackets from continued-fraction convergents, with a machine-integer
//! bracket tried first and an arbitrary-precision refinement loop behind it.
//!
//! Only fractional parts matter for words and permutations, so an integer
//! shift of the slope changes nothing there. The parity `(-1)^floor(2*l*alpha)`
//! used by the sign formula is also shift invariant because
//! `floor(2*l*(alpha + m)) = floor(2*l*alpha) + 2*l*m`. Floors are therefore
//! always taken of the un-reduced value.

mod cf;
mod parse;
mod surd;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use cf::{CfTail, ContinuedFraction, Convergent, Convergents, RationalInterval, Refiner};
pub use surd::QuadraticSurd;

use crate::error::{Error, Result};
use cf::{FastBracket, QuotientStream};

/// Default cap on refinement rounds for a single exact decision.
pub const DEFAULT_REFINEMENT_BUDGET: usize = 10_000;

#[derive(Clone, Debug)]
pub enum SlopeKind {
    QuadraticSurd(QuadraticSurd),
    EulerE,
    EulerEInv,
    ExplicitCf(ContinuedFraction),
}

/// An irrational real number with exact floor and comparison procedures.
///
/// Values are `sign * base + shift` where `base` is given by [`SlopeKind`];
/// surds fold the affine part into their coefficients.
#[derive(Clone, Debug)]
pub struct IrrationalSlope {
    kind: SlopeKind,
    negated: bool,
    shift: i64,
    budget: usize,
    fast: Option<FastBracket>,
}

impl IrrationalSlope {
    fn build(kind: SlopeKind, negated: bool, shift: i64, budget: usize) -> Self {
        let mut s = IrrationalSlope {
            kind,
            negated,
            shift,
            budget,
            fast: None,
        };
        if !matches!(s.kind, SlopeKind::QuadraticSurd(_)) {
            s.fast = FastBracket::build(s.stream());
        }
        s
    }

    pub fn quadratic(a: i64, b: i64, d: u64, c: i64) -> Result<Self> {
        Ok(Self::from_surd(QuadraticSurd::new(a, b, d, c)?))
    }

    pub fn from_surd(s: QuadraticSurd) -> Self {
        Self::build(SlopeKind::QuadraticSurd(s), false, 0, DEFAULT_REFINEMENT_BUDGET)
    }

    /// `(sqrt(5) - 1) / 2`.
    pub fn phi() -> Self {
        Self::quadratic(-1, 1, 5, 2).expect("valid surd")
    }

    pub fn sqrt(d: u64) -> Result<Self> {
        Self::quadratic(0, 1, d, 1)
    }

    pub fn e() -> Self {
        Self::build(SlopeKind::EulerE, false, 0, DEFAULT_REFINEMENT_BUDGET)
    }

    pub fn e_inv() -> Self {
        Self::build(SlopeKind::EulerEInv, false, 0, DEFAULT_REFINEMENT_BUDGET)
    }

    pub fn continued_fraction(cf: ContinuedFraction) -> Self {
        Self::build(SlopeKind::ExplicitCf(cf), false, 0, DEFAULT_REFINEMENT_BUDGET)
    }

    pub fn kind(&self) -> &SlopeKind {
        &self.kind
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Same value, different refinement cap.
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget.max(1);
        self
    }

    /// `self + m`.
    pub fn shifted(&self, m: i64) -> Result<Self> {
        match &self.kind {
            SlopeKind::QuadraticSurd(s) => {
                Ok(Self::from_surd(s.shifted(m)?).with_budget(self.budget))
            }
            k => Ok(Self::build(
                k.clone(),
                self.negated,
                self.shift.checked_add(m).ok_or_else(|| {
                    Error::InvalidSlope("integer shift overflows".into())
                })?,
                self.budget,
            )),
        }
    }

    /// `-self`.
    pub fn negated(&self) -> Result<Self> {
        match &self.kind {
            SlopeKind::QuadraticSurd(s) => Ok(Self::from_surd(s.negated()?).with_budget(self.budget)),
            k => Ok(Self::build(k.clone(), !self.negated, -self.shift, self.budget)),
        }
    }

    /// `1 - self`; its fractional parts are `1 - {k*self}`.
    pub fn complement(&self) -> Result<Self> {
        self.negated()?.shifted(1)
    }

    /// `{self}`, the representative in `(0, 1)`.
    pub fn reduced(&self) -> Result<Self> {
        let m = self.floor_scaled(1)?;
        self.shifted(-m)
    }

    /// Whether the fractional part lies below 1/2.
    pub fn frac_below_half(&self) -> Result<bool> {
        Ok(self.floor_scaled(2)? - 2 * self.floor_scaled(1)? == 0)
    }

    pub(crate) fn stream(&self) -> QuotientStream {
        let base = match &self.kind {
            SlopeKind::QuadraticSurd(s) => return s.stream(),
            SlopeKind::EulerE => cf::euler_stream(),
            SlopeKind::EulerEInv => cf::reciprocal(cf::euler_stream()),
            SlopeKind::ExplicitCf(c) => c.stream(),
        };
        let base = if self.negated { cf::negate(base) } else { base };
        cf::shift(base, self.shift)
    }

    /// Convergents of the full (un-reduced) value.
    pub fn convergents(&self) -> Convergents {
        Convergents::new(self.stream())
    }

    /// The `k`-th convergent `p_k / q_k`.
    pub fn convergent(&self, k: usize) -> Result<Convergent> {
        self.convergents()
            .nth(k)
            .ok_or(Error::CoefficientsExhausted { index: k })
    }

    /// A fresh refinement handle; each call to `next_interval` narrows.
    pub fn refiner(&self) -> Refiner {
        Refiner::new(self.stream())
    }

    /// Exact `floor(k * alpha)` of the un-reduced value.
    pub fn floor_multiple(&self, k: u64) -> Result<i64> {
        let k = i64::try_from(k)
            .map_err(|_| Error::InvalidArgument("multiplier exceeds i64".into()))?;
        self.floor_scaled(k)
    }

    /// Exact `floor(t * alpha)` for any integer `t`.
    pub fn floor_scaled(&self, t: i64) -> Result<i64> {
        match &self.kind {
            SlopeKind::QuadraticSurd(s) => Ok(s.floor_scaled(t)),
            _ => {
                if let Some(v) = self.fast.as_ref().and_then(|b| b.floor(t)) {
                    return Ok(v);
                }
                cf::floor_by_refinement(self.stream(), t, self.budget)
            }
        }
    }

    /// `floor(t * alpha)` decided purely by convergent refinement, bypassing
    /// the integer square root and machine-integer fast paths.
    pub fn floor_scaled_refined(&self, t: i64) -> Result<i64> {
        cf::floor_by_refinement(self.stream(), t, self.budget)
    }

    /// Exact comparison of `{i*alpha}` with `{j*alpha}`.
    ///
    /// With `t = i - j` and `m = floor(i*alpha) - floor(j*alpha)`,
    /// `{i*alpha} < {j*alpha}` iff `t*alpha < m` iff `floor(t*alpha) < m`.
    pub fn frac_compare(&self, i: u64, j: u64) -> Result<Ordering> {
        if i == j {
            return Ok(Ordering::Equal);
        }
        let (ii, jj) = (to_i64(i)?, to_i64(j)?);
        let m = self.floor_scaled(ii)? - self.floor_scaled(jj)?;
        let ft = self.floor_scaled(ii - jj)?;
        Ok(if ft < m {
            Ordering::Less
        } else {
            Ordering::Greater
        })
    }

    /// A rational interval around `{k*alpha}` of width below `eps`, inside `[0, 1]`.
    pub fn frac_interval(&self, k: u64, eps: &BigRational) -> Result<RationalInterval> {
        if eps <= &BigRational::from_integer(0.into()) {
            return Err(Error::InvalidArgument("eps must be positive".into()));
        }
        let t = BigInt::from(k);
        let mut refiner = self.refiner();
        while refiner.rounds() < self.budget {
            let iv = refiner.next_interval()?.scaled(&t);
            if let Some(m) = iv.integer_part() {
                if &iv.width() < eps {
                    let m = BigRational::from_integer(m);
                    return Ok(RationalInterval {
                        lo: iv.lo - &m,
                        hi: iv.hi - m,
                    });
                }
            }
        }
        Err(Error::RefinementBudgetExceeded {
            budget: self.budget,
        })
    }

    /// `floor(t * alpha)` for `t = 0..=n`.
    pub fn floor_table(&self, n: usize) -> Result<Vec<i64>> {
        (0..=n).map(|t| self.floor_scaled(to_i64(t as u64)?)).collect()
    }

    /// Comparator over `{1*alpha}, ..., {n*alpha}` with O(1) comparisons.
    pub fn frac_order(&self, n: usize) -> Result<FracOrder> {
        Ok(FracOrder {
            floors: self.floor_table(n)?,
        })
    }
}

fn to_i64(x: u64) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::InvalidArgument("index exceeds i64".into()))
}

/// Precomputed floors `floor(t*alpha)`, `0 <= t <= n`, giving exact
/// comparisons of fractional parts of multiples up to `n`.
#[derive(Clone, Debug)]
pub struct FracOrder {
    floors: Vec<i64>,
}

impl FracOrder {
    pub fn len(&self) -> usize {
        self.floors.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn floor(&self, t: usize) -> i64 {
        self.floors[t]
    }

    /// `floor(t*alpha)` for `|t| <= n`; negative multiples use
    /// `floor(-x) = -floor(x) - 1` for irrational `x`.
    pub fn floor_signed(&self, t: i64) -> i64 {
        if t >= 0 {
            self.floors[t as usize]
        } else {
            -self.floors[(-t) as usize] - 1
        }
    }

    /// Compares `{i*alpha}` and `{j*alpha}` for `0 <= i, j <= n`.
    pub fn cmp(&self, i: usize, j: usize) -> Ordering {
        if i == j {
            return Ordering::Equal;
        }
        let m = self.floors[i] - self.floors[j];
        let ft = self.floor_signed(i as i64 - j as i64);
        if ft < m {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl fmt::Display for IrrationalSlope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match &self.kind {
            SlopeKind::QuadraticSurd(s) => return write!(f, "{s}"),
            SlopeKind::EulerE => "e".to_string(),
            SlopeKind::EulerEInv => "1/e".to_string(),
            SlopeKind::ExplicitCf(c) => c.to_string(),
        };
        match (self.negated, self.shift) {
            (false, 0) => write!(f, "{base}"),
            (true, 0) => write!(f, "-({base})"),
            (false, s) => write!(f, "{base}{s:+}"),
            (true, s) => write!(f, "{s}-({base})"),
        }
    }
}

impl std::str::FromStr for IrrationalSlope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse::parse_slope(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use num_traits::{One, ToPrimitive};

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn convergents_of_e() {
        let e = IrrationalSlope::e();
        let got: Vec<String> = e.convergents().take(8).map(|c| c.to_string()).collect();
        assert_eq!(
            got,
            ["2/1", "3/1", "8/3", "11/4", "19/7", "87/32", "106/39", "193/71"]
        );
        assert_eq!(e.convergent(7).unwrap().to_string(), "193/71");
    }

    #[test]
    fn convergents_of_phi_are_fibonacci_ratios() {
        let phi = IrrationalSlope::phi();
        let fib: Vec<u64> = {
            let mut v = vec![0u64, 1];
            while v.len() < 40 {
                let n = v[v.len() - 1] + v[v.len() - 2];
                v.push(n);
            }
            v
        };
        for (k, c) in phi.convergents().take(30).enumerate() {
            // phi = [0; 1, 1, ...] so p_k/q_k = f_k / f_{k+1}
            assert_eq!(c.p, BigInt::from(fib[k]), "k = {k}");
            assert_eq!(c.q, BigInt::from(fib[k + 1]), "k = {k}");
        }
    }

    #[test]
    fn convergent_determinant_identity() {
        for alpha in [IrrationalSlope::e(), IrrationalSlope::e_inv(), IrrationalSlope::sqrt(7).unwrap()] {
            let cs: Vec<Convergent> = alpha.convergents().take(25).collect();
            for w in cs.windows(2) {
                let lhs = &w[1].p * &w[0].q - &w[0].p * &w[1].q;
                let sign = if w[1].index % 2 == 1 { 1 } else { -1 };
                assert_eq!(lhs, BigInt::from(sign));
                assert!(num_integer::Integer::gcd(&w[1].p, &w[1].q).is_one());
            }
        }
    }

    #[test]
    fn first_refinement_of_e() {
        let mut r = IrrationalSlope::e().refiner();
        let iv = r.next_interval().unwrap();
        assert_eq!(iv.lo, rat(8, 3));
        assert_eq!(iv.hi, rat(11, 4));
    }

    #[test]
    fn refinement_widths_shrink() {
        let mut r = IrrationalSlope::phi().refiner();
        let mut prev = r.next_interval().unwrap();
        for _ in 0..50 {
            let next = r.next_interval().unwrap();
            assert!(next.width() < prev.width());
            assert!(prev.lo <= next.lo && next.hi <= prev.hi);
            prev = next;
        }
    }

    #[test]
    fn refinement_excludes_small_denominators() {
        // Best approximation: no rational with denominator below q_k falls
        // strictly inside the bracket (q_{k-1}, q_k).
        let alpha = IrrationalSlope::quadratic(-1, 1, 2, 1).unwrap();
        let mut r = alpha.refiner();
        for _ in 0..6 {
            let iv = r.next_interval().unwrap();
            let qmax = iv.lo.denom().max(iv.hi.denom()).to_i64().unwrap();
            for q in 1..qmax {
                for p in 0..=q {
                    assert!(!iv.contains(&rat(p, q)), "{p}/{q} in {iv:?}");
                }
            }
        }
    }

    #[test]
    fn floor_multiple_examples() {
        assert_eq!(IrrationalSlope::e().floor_multiple(4).unwrap(), 10);
        let phi = IrrationalSlope::phi();
        assert_eq!(phi.floor_multiple(1).unwrap(), 0);
        assert_eq!(phi.floor_multiple(10).unwrap(), 6);
        assert_eq!(phi.floor_scaled_refined(10).unwrap(), 6);
        // independent: floor(10*phi) = floor((-10 + isqrt(500)) / 2)
        assert_eq!(Integer::div_floor(&(num_integer::Roots::sqrt(&500u64) as i64 - 10), &2), 6);
    }

    #[test]
    fn frac_compare_examples() {
        let phi = IrrationalSlope::phi();
        assert_eq!(phi.frac_compare(5, 2).unwrap(), Ordering::Less);
        assert_eq!(phi.frac_compare(1, 2).unwrap(), Ordering::Greater);
        assert_eq!(phi.frac_compare(3, 3).unwrap(), Ordering::Equal);
    }

    #[test]
    fn frac_interval_contract() {
        let eps = rat(1, 100);
        let iv = IrrationalSlope::phi().frac_interval(1, &eps).unwrap();
        assert!(iv.lo < iv.hi && iv.width() < eps);
        assert!(iv.contains(&rat(6_180_339_887, 10_000_000_000)));
        let iv = IrrationalSlope::e().frac_interval(1, &rat(1, 10)).unwrap();
        assert!(iv.lo > rat(0, 1) && iv.hi < rat(1, 1));
        assert!(iv.contains(&rat(71828, 100000)));
        assert!(IrrationalSlope::e().frac_interval(3, &rat(0, 1)).is_err());
    }

    #[test]
    fn transforms_keep_fractional_parts_consistent() {
        let e = IrrationalSlope::e();
        let red = e.reduced().unwrap();
        let comp = e.complement().unwrap();
        for k in 1..200i64 {
            let f = e.floor_scaled(k).unwrap();
            assert_eq!(red.floor_scaled(k).unwrap(), f - 2 * k);
            // floor(k(1-e)) = k - floor(ke) - 1
            assert_eq!(comp.floor_scaled(k).unwrap(), k - f - 1);
            // the continued-fraction route of the transformed value agrees
            assert_eq!(comp.floor_scaled_refined(k).unwrap(), k - f - 1);
        }
        assert_eq!(e.negated().unwrap().convergent(0).unwrap().p, BigInt::from(-3));
        let phi = IrrationalSlope::phi();
        assert!(!phi.frac_below_half().unwrap());
        assert!(phi.complement().unwrap().frac_below_half().unwrap());
        assert!(IrrationalSlope::e_inv().frac_below_half().unwrap());
    }

    #[test]
    fn exhausted_rule_reports_index() {
        let cf = ContinuedFraction::new(
            vec![0, 2],
            CfTail::Rule(std::sync::Arc::new(|i| (i < 5).then_some(1))),
        )
        .unwrap();
        let alpha = IrrationalSlope::continued_fraction(cf);
        assert!(alpha.convergent(4).is_ok());
        assert_eq!(
            alpha.convergent(5),
            Err(Error::CoefficientsExhausted { index: 5 })
        );
        assert!(matches!(
            alpha.floor_scaled_refined(1_000_000),
            Err(Error::CoefficientsExhausted { .. })
        ));
    }

    #[test]
    fn tiny_budget_is_reported() {
        let alpha = IrrationalSlope::e().with_budget(1);
        assert_eq!(
            alpha.floor_scaled_refined(71),
            Err(Error::RefinementBudgetExceeded { budget: 1 })
        );
    }

    #[test]
    fn finite_cf_is_rejected() {
        assert!(matches!(
            ContinuedFraction::new(vec![0, 2, 3], CfTail::None),
            Err(Error::RationalInput(_))
        ));
        assert!(ContinuedFraction::new(vec![0, 0], CfTail::Periodic(vec![1])).is_err());
    }

    #[test]
    fn frac_order_matches_frac_compare() {
        let alpha = IrrationalSlope::e_inv();
        let ord = alpha.frac_order(60).unwrap();
        for i in 1..=60 {
            for j in 1..=60 {
                assert_eq!(ord.cmp(i, j), alpha.frac_compare(i as u64, j as u64).unwrap());
            }
        }
    }
}
