//! The permutation ordering `{alpha}, {2 alpha}, ..., {n alpha}` and its
//! algebraic invariants.
//!
//! Permutations compose right to left: `(s t)(i) = s(t(i))`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};
use crate::irrational::{FracOrder, IrrationalSlope};

/// A permutation of `1..=n` in one-line form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FracPermutation {
    map: Vec<usize>,
}

impl FracPermutation {
    pub fn new(one_line: Vec<usize>) -> Result<Self> {
        let n = one_line.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("empty".into()));
        }
        let mut seen = vec![false; n + 1];
        for &v in &one_line {
            if v == 0 || v > n || seen[v] {
                return Err(Error::InvalidPermutation(format!(
                    "{one_line:?} is not a permutation of 1..={n}"
                )));
            }
            seen[v] = true;
        }
        Ok(FracPermutation { map: one_line })
    }

    pub fn identity(n: usize) -> Self {
        FracPermutation {
            map: (1..=n).collect(),
        }
    }

    /// Builds a permutation of `1..=n` from disjoint cycles, e.g. `[[1,5,3,4]]`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut map: Vec<usize> = (1..=n).collect();
        let mut used = BTreeSet::new();
        for c in cycles {
            for (idx, &x) in c.iter().enumerate() {
                if x == 0 || x > n || !used.insert(x) {
                    return Err(Error::InvalidPermutation(format!("bad cycle {c:?}")));
                }
                map[x - 1] = c[(idx + 1) % c.len()];
            }
        }
        Self::new(map)
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn one_line(&self) -> &[usize] {
        &self.map
    }

    /// `self(i)` for `1 <= i <= n`.
    pub fn apply(&self, i: usize) -> usize {
        self.map[i - 1]
    }

    /// The same permutation as an element of `S_m`, `m >= n`, fixing `n+1..=m`.
    pub fn embed(&self, m: usize) -> Self {
        let mut map = self.map.clone();
        map.extend(self.n() + 1..=m.max(self.n()));
        FracPermutation { map }
    }

    /// `self * other`, i.e. `other` first. The smaller factor is embedded.
    pub fn compose(&self, other: &FracPermutation) -> FracPermutation {
        let n = self.n().max(other.n());
        let (a, b) = (self.embed(n), other.embed(n));
        FracPermutation {
            map: b.map.iter().map(|&i| a.apply(i)).collect(),
        }
    }

    pub fn inverse(&self) -> FracPermutation {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        FracPermutation { map: inv }
    }

    /// Cycles, each led by its least element, ordered by that element.
    pub fn cycles(&self) -> CycleDecomposition {
        let n = self.n();
        let mut seen = vec![false; n + 1];
        let mut cycles = Vec::new();
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            let mut c = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                c.push(x);
                x = self.apply(x);
            }
            cycles.push(c);
        }
        CycleDecomposition { cycles }
    }

    pub fn fixed_points(&self) -> usize {
        self.map.iter().enumerate().filter(|(i, &v)| i + 1 == v).count()
    }

    /// `(-1)^(n - #cycles)`.
    pub fn sign(&self) -> i8 {
        if (self.n() - self.cycles().len()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Least `t >= 1` with `self^t = id`.
    pub fn order(&self) -> BigUint {
        self.cycles()
            .lengths()
            .into_iter()
            .fold(BigUint::one(), |acc, l| acc.lcm(&BigUint::from(l)))
    }
}

impl fmt::Display for FracPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// Parses one-line notation such as `[5,2,4,1,3]` (brackets optional).
impl FromStr for FracPermutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('[').trim_end_matches(']');
        let vals = body
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPermutation(format!("bad entry `{}`", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(vals)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleDecomposition {
    cycles: Vec<Vec<usize>>,
}

impl CycleDecomposition {
    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.cycles.iter().map(Vec::len).collect()
    }

    /// Cycle lengths in decreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t = self.lengths();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }
}

impl fmt::Display for CycleDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cycles {
            let inner: Vec<String> = c.iter().map(ToString::to_string).collect();
            write!(f, "({})", inner.join(","))?;
        }
        Ok(())
    }
}

/// Sorts `1..=n` by fractional part using a precomputed comparator.
pub fn pi_from_order(order: &FracOrder, n: usize) -> FracPermutation {
    let mut idx: Vec<usize> = (1..=n).collect();
    idx.sort_unstable_by(|&i, &j| order.cmp(i, j));
    FracPermutation { map: idx }
}

/// `pi_{alpha,n}` by sorting.
pub fn pi_direct(alpha: &IrrationalSlope, n: usize) -> Result<FracPermutation> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    Ok(pi_from_order(&alpha.frac_order(n)?, n))
}

/// `pi_{alpha,n}` from its first and last entries by the three-gap recurrence
/// `p(k+1) = p(k) + p(1)[p(k) <= p(n)] - p(n)[n < p(1) + p(k)]`.
pub fn pi_sos(alpha: &IrrationalSlope, n: usize) -> Result<FracPermutation> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let (mut lo, mut hi) = (1u64, 1u64);
    for k in 2..=n as u64 {
        if alpha.frac_compare(k, lo)?.is_lt() {
            lo = k;
        }
        if alpha.frac_compare(k, hi)?.is_gt() {
            hi = k;
        }
    }
    sos_fill(n, lo as usize, hi as usize)
}

/// Fills `p(2..n)` from `p(1) = first` and `p(n) = last`.
pub fn sos_fill(n: usize, first: usize, last: usize) -> Result<FracPermutation> {
    let mut map = Vec::with_capacity(n);
    map.push(first);
    let mut cur = first as i64;
    let (f, l, nn) = (first as i64, last as i64, n as i64);
    for _ in 1..n {
        cur = cur + f * i64::from(cur <= l) - l * i64::from(nn < f + cur);
        if cur < 1 || cur > nn {
            return Err(Error::RecurrenceMismatch { n });
        }
        map.push(cur as usize);
    }
    if map[n - 1] != last {
        return Err(Error::RecurrenceMismatch { n });
    }
    FracPermutation::new(map).map_err(|_| Error::RecurrenceMismatch { n })
}

/// `B_alpha(k) = #{q : 1 <= q < k, {q alpha} < {k alpha}}` by direct count.
pub fn b_alpha(alpha: &IrrationalSlope, k: usize) -> Result<usize> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let order = alpha.frac_order(k)?;
    Ok((1..k).filter(|&q| order.cmp(q, k).is_lt()).count())
}

/// Incremental `k -> B_alpha(k)`, one exact floor per step.
///
/// Works with `g = {alpha}` when `g < 1/2` and `g = 1 - {alpha}` otherwise.
/// For `g < 1/2` and `k >= 3`,
/// `B(k) - 2B(k-1) + B(k-2)` is `1-k`, `k-1` or `0` as `{kg}` lies in
/// `[0,g)`, `[g,2g)` or `[2g,1)`; the other side is `B_alpha(k) = k-1-B_g(k)`.
#[derive(Clone, Debug)]
pub struct BetterCount {
    slope: IrrationalSlope,
    reflect: bool,
    k: u64,
    // B_g(k), B_g(k-1)
    b: [i64; 2],
    // floor(k g), floor((k-1) g)
    fl: [i64; 2],
    f1: i64,
    f2: i64,
}

impl BetterCount {
    pub fn new(alpha: &IrrationalSlope) -> Result<Self> {
        let red = alpha.reduced()?;
        let reflect = !red.frac_below_half()?;
        let slope = if reflect { red.complement()? } else { red };
        let f1 = slope.floor_scaled(1)?;
        let f2 = slope.floor_scaled(2)?;
        Ok(BetterCount {
            slope,
            reflect,
            k: 0,
            b: [0, 0],
            fl: [0, 0],
            f1,
            f2,
        })
    }

    /// The last `k` produced, 0 before the first step.
    pub fn k(&self) -> u64 {
        self.k
    }

    /// Advances to the next `k` and returns `B_alpha(k)`.
    pub fn step(&mut self) -> Result<u64> {
        let k = self.k + 1;
        let t = i64::try_from(k).map_err(|_| Error::InvalidArgument("k exceeds i64".into()))?;
        let fk = self.slope.floor_scaled(t)?;
        let bk = match k {
            1 => 0,
            2 => 1,
            _ => {
                // {kg} < {g}  iff  floor((k-1) g) < floor(kg) - floor(g)
                let below1 = self.fl[0] < fk - self.f1;
                let below2 = self.fl[1] < fk - self.f2;
                let jump = if below1 {
                    1 - t
                } else if below2 {
                    t - 1
                } else {
                    0
                };
                2 * self.b[0] - self.b[1] + jump
            }
        };
        self.b = [bk, self.b[0]];
        self.fl = [fk, self.fl[0]];
        self.k = k;
        let out = if self.reflect { t - 1 - bk } else { bk };
        if out < 0 || out >= t.max(1) {
            return Err(Error::InternalInvariantViolation(format!(
                "B({k}) = {out} out of range"
            )));
        }
        Ok(out as u64)
    }
}

impl Iterator for BetterCount {
    type Item = Result<(u64, u64)>;

    fn next(&mut self) -> Option<Self::Item> {
        Some(self.step().map(|b| (self.k, b)))
    }
}

/// `B_alpha(1..=k_max)` via the recurrence.
pub fn b_alpha_table(alpha: &IrrationalSlope, k_max: usize) -> Result<Vec<u64>> {
    let mut bc = BetterCount::new(alpha)?;
    (0..k_max).map(|_| bc.step()).collect()
}

/// The `(n-k)`-cycle `(n, n-1, ..., k+1)` in `S_n`.
pub fn rho(n: usize, k: usize) -> Result<FracPermutation> {
    if n == 0 || k >= n {
        return Err(Error::InvalidArgument(format!("rho({n}, {k}) needs 0 <= k < n")));
    }
    let map = (1..=n)
        .map(|i| {
            if i <= k {
                i
            } else if i == k + 1 {
                n
            } else {
                i - 1
            }
        })
        .collect();
    Ok(FracPermutation { map })
}

pub fn sign_direct(pi: &FracPermutation) -> i8 {
    pi.sign()
}

/// Signs of `pi_{alpha,1}, pi_{alpha,2}, ...` from
/// `sgn(pi_{2t}) = sgn(pi_{2t+1}) = prod_{l <= t} (-1)^floor(2 l alpha)`.
///
/// The parity of `floor(2 l alpha)` does not change when `alpha` is shifted
/// by an integer, so the un-reduced slope is used.
#[derive(Clone, Debug)]
pub struct SignSequence {
    alpha: IrrationalSlope,
    m: u64,
    sign: i8,
}

impl SignSequence {
    pub fn new(alpha: &IrrationalSlope) -> Self {
        SignSequence {
            alpha: alpha.clone(),
            m: 0,
            sign: 1,
        }
    }

    /// Advances to the next `m` and returns `sgn(pi_{alpha,m})`.
    pub fn step(&mut self) -> Result<i8> {
        let m = self.m + 1;
        if m.is_multiple_of(2) {
            let t = i64::try_from(m).map_err(|_| Error::InvalidArgument("m exceeds i64".into()))?;
            if self.alpha.floor_scaled(t)?.rem_euclid(2) == 1 {
                self.sign = -self.sign;
            }
        }
        self.m = m;
        Ok(self.sign)
    }

    pub fn m(&self) -> u64 {
        self.m
    }
}

impl Iterator for SignSequence {
    type Item = Result<i8>;

    fn next(&mut self) -> Option<Self::Item> {
        Some(self.step())
    }
}

/// `sgn(pi_{alpha,m})` by the closed formula.
pub fn sign_formula(alpha: &IrrationalSlope, m: usize) -> Result<i8> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let mut s = SignSequence::new(alpha);
    let mut last = 1;
    for _ in 0..m {
        last = s.step()?;
    }
    Ok(last)
}

pub fn order(pi: &FracPermutation) -> BigUint {
    pi.order()
}

/// Multiplicative order of `x` modulo `m`; `None` unless `gcd(x, m) = 1`.
pub fn multiplicative_order(x: i64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    let m128 = m as i128;
    let x = (x as i128).rem_euclid(m128);
    if (x as u64).gcd(&m) != 1 {
        return None;
    }
    let (mut p, mut t) = (x, 1u64);
    while p != 1 {
        p = p * x % m128;
        t += 1;
    }
    Some(t)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderPrediction {
    /// `p(n) = n`: both `ord(pi_{n-1})` and `ord(pi_n)` equal `predicted`.
    CaseI { predicted: u64 },
    /// `p(1) = n`.
    CaseII { pred_nminus1: u64, pred_n: u64, g: u64 },
    NotApplicable,
}

/// Predicted orders of `pi_{n-1}` and `pi_n` from the first and last entries of `pi = pi_n`.
pub fn order_prediction_for(pi: &FracPermutation) -> Result<OrderPrediction> {
    let n = pi.n();
    if n < 2 {
        return Err(Error::InvalidArgument("n must be at least 2".into()));
    }
    let (first, last) = (pi.apply(1), pi.apply(n));
    let nn = n as u64;
    let unit = |x: i64, m: u64| {
        multiplicative_order(x, m).ok_or_else(|| {
            Error::InternalInvariantViolation(format!("{x} is not a unit modulo {m}"))
        })
    };
    if last == n {
        Ok(OrderPrediction::CaseI {
            predicted: unit(first as i64, nn)?,
        })
    } else if first == n {
        let x = -(last as i64);
        let h = last as u64 + 1;
        let g = (1..=h)
            .find(|g| h.is_multiple_of(*g) && nn.gcd(&(h / g)) == 1)
            .expect("g = h always qualifies");
        Ok(OrderPrediction::CaseII {
            pred_nminus1: unit(x, nn)?,
            pred_n: unit(x, g * nn)?,
            g,
        })
    } else {
        Ok(OrderPrediction::NotApplicable)
    }
}

pub fn order_prediction(alpha: &IrrationalSlope, n: usize) -> Result<OrderPrediction> {
    order_prediction_for(&pi_direct(alpha, n)?)
}

/// The real number `t*alpha - m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gap {
    pub t: i64,
    pub m: i64,
}

/// The `n + 1` gaps cut out of `[0, 1]` by `{alpha}, ..., {n alpha}`, in
/// increasing position. Each point `{i alpha}` is `i*alpha - floor(i alpha)`,
/// so gaps are exact integer pairs and equal gaps have equal pairs.
pub fn three_distance_gaps(alpha: &IrrationalSlope, n: usize) -> Result<Vec<Gap>> {
    let order = alpha.frac_order(n)?;
    let pi = pi_from_order(&order, n);
    let mut prev = Gap { t: 0, m: 0 };
    let mut gaps = Vec::with_capacity(n + 1);
    let points = pi
        .one_line()
        .iter()
        .map(|&i| Gap { t: i as i64, m: order.floor(i) })
        .chain(std::iter::once(Gap { t: 0, m: -1 }));
    for p in points {
        gaps.push(Gap { t: p.t - prev.t, m: p.m - prev.m });
        prev = p;
    }
    Ok(gaps)
}

pub fn distinct_gaps(gaps: &[Gap]) -> BTreeSet<Gap> {
    gaps.iter().copied().collect()
}
