//! Piecewise-constant structure of `alpha -> pi_{alpha,n}` and the
//! experiments built on it.
//!
//! The relative order of `{i alpha}` and `{j alpha}` for `i, j <= n` can only
//! change where `(i - j) alpha` is an integer, i.e. at rationals with
//! denominator below `n`. So `pi_{alpha,n}` is constant on every open cell
//! between neighbours of the order-`n` Farey sequence, and any interior
//! rational with denominator above `n` evaluates it exactly.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::irrational::IrrationalSlope;
use crate::permtool::{BetterCount, FracPermutation, SignSequence};
use crate::sturmian::{factor_set, FactorSet};

/// A reduced fraction `num/den` in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub fn to_rational(self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// The open interval between two neighbours `a/b < c/d` of a Farey sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FareyCell {
    pub left: Fraction,
    pub right: Fraction,
}

impl FareyCell {
    /// The mediant `(a+c)/(b+d)`.
    pub fn witness(&self) -> Fraction {
        Fraction {
            num: self.left.num + self.right.num,
            den: self.left.den + self.right.den,
        }
    }

    /// `c/d - a/b = 1/(bd)`.
    pub fn length(&self) -> BigRational {
        BigRational::new(BigInt::from(1), BigInt::from(self.left.den) * self.right.den)
    }

    /// Whether `{alpha}` lies strictly inside.
    pub fn contains(&self, alpha: &IrrationalSlope) -> Result<bool> {
        let alpha = alpha.reduced()?;
        // a/b < alpha  iff  floor(b alpha) >= a, since b alpha is irrational
        let above = alpha.floor_scaled(self.left.den as i64)? >= self.left.num as i64;
        let below = alpha.floor_scaled(self.right.den as i64)? < self.right.num as i64;
        Ok(above && below)
    }

    /// The quadratic irrational `a/b + (c/d - a/b) / sqrt(k)` for `k >= 2`
    /// non-square, which lies inside the cell.
    pub fn interior_surd(&self, k: u64) -> Result<IrrationalSlope> {
        // a/b + 1/(bd sqrt k) = (a d k + sqrt k) / (b d k)
        let (a, b, d) = (self.left.num as i64, self.left.den as i64, self.right.den as i64);
        let k = k as i64;
        IrrationalSlope::quadratic(a * d * k, 1, k as u64, b * d * k)
    }
}

impl fmt::Display for FareyCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.left, self.right)
    }
}

/// Neighbouring pairs of the order-`n` Farey sequence on `[0, 1]`.
pub fn farey_cells(n: usize) -> Result<Vec<FareyCell>> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let n = n as u64;
    let mut cells = Vec::new();
    let (mut a, mut b, mut c, mut d) = (0u64, 1u64, 1u64, n);
    loop {
        cells.push(FareyCell {
            left: Fraction { num: a, den: b },
            right: Fraction { num: c, den: d },
        });
        if c == 1 && d == 1 {
            break;
        }
        let k = (n + b) / d;
        let (e, f) = (k * c - a, k * d - b);
        (a, b, c, d) = (c, d, e, f);
    }
    Ok(cells)
}

/// `pi_{alpha,n}` for every irrational `alpha` in the cell, evaluated at the mediant.
pub fn perm_on_cell(cell: &FareyCell, n: usize) -> Result<FracPermutation> {
    let w = cell.witness();
    let (p, q) = (w.num as u128, w.den as u128);
    let mut keyed: Vec<(u128, usize)> = (1..=n).map(|i| (i as u128 * p % q, i)).collect();
    keyed.sort_unstable();
    for pair in keyed.windows(2) {
        if pair[0].0 == pair[1].0 {
            return Err(Error::WitnessCollision {
                witness: w.to_string(),
                i: pair[0].1,
                j: pair[1].1,
            });
        }
    }
    if let Some(&(0, i)) = keyed.first() {
        return Err(Error::WitnessCollision { witness: w.to_string(), i, j: 0 });
    }
    FracPermutation::new(keyed.into_iter().map(|(_, i)| i).collect())
}

/// The cell of order `n` holding `alpha` (reduced mod 1).
pub fn locate_cell(alpha: &IrrationalSlope, n: usize) -> Result<FareyCell> {
    let red = alpha.reduced()?;
    let cells = farey_cells(n)?;
    // cells are ordered; binary search on the left endpoint
    let (mut lo, mut hi) = (0usize, cells.len());
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        let l = cells[mid].left;
        if red.floor_scaled(l.den as i64)? >= l.num as i64 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(cells[lo])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralResult {
    pub n: usize,
    /// `sum over cells of length * ord`.
    pub value: BigRational,
    pub cells: usize,
    /// Sum of cell lengths, 1 when the decomposition is complete.
    pub length_sum: BigRational,
}

/// `I(n) = integral over (0,1) of ord(pi_{alpha,n})`, exactly.
pub fn exact_integral(n: usize) -> Result<IntegralResult> {
    let cells = farey_cells(n)?;
    let terms = cells
        .par_iter()
        .map(|c| Ok((c.length(), perm_on_cell(c, n)?.order())))
        .collect::<Result<Vec<(BigRational, BigUint)>>>()?;
    let mut value = BigRational::zero();
    let mut length_sum = BigRational::zero();
    for (len, ord) in terms {
        value += &len * BigRational::from_integer(BigInt::from(ord));
        length_sum += len;
    }
    Ok(IntegralResult {
        n,
        value,
        cells: cells.len(),
        length_sum,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignSum {
    /// `sum_{n <= N} sgn(pi_{alpha,n})`.
    pub final_sum: i64,
    /// `max_{M <= N} |S(M)|`.
    pub max_abs: i64,
    /// Least `M` attaining `max_abs`.
    pub argmax: u64,
}

pub fn sign_sum(alpha: &IrrationalSlope, big_n: u64) -> Result<SignSum> {
    if big_n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let mut seq = SignSequence::new(alpha);
    let (mut s, mut best, mut argmax) = (0i64, 0i64, 0u64);
    for m in 1..=big_n {
        s += i64::from(seq.step()?);
        if s.abs() > best {
            best = s.abs();
            argmax = m;
        }
    }
    Ok(SignSum {
        final_sum: s,
        max_abs: best,
        argmax,
    })
}

/// Least `k <= k_max` with `B_alpha(k) = target`.
pub fn b_range_search(alpha: &IrrationalSlope, target: u64, k_max: u64) -> Result<Option<u64>> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be positive".into()));
    }
    let mut bc = BetterCount::new(alpha)?;
    for k in 1..=k_max {
        if bc.step()? == target {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Congruence {
    Congruent,
    NotCongruent,
}

/// Squared distances between 0/1 vertices, i.e. Hamming distances.
fn distance_matrix(fs: &FactorSet) -> Vec<Vec<u32>> {
    let v = fs.factors();
    v.iter()
        .map(|x| {
            v.iter()
                .map(|y| x.bits().iter().zip(y.bits()).filter(|(a, b)| a != b).count() as u32)
                .collect()
        })
        .collect()
}

/// Whether some vertex bijection preserves all pairwise distances.
pub fn simplices_congruent(a: &FactorSet, b: &FactorSet) -> bool {
    if a.n() != b.n() {
        return false;
    }
    let (da, db) = (distance_matrix(a), distance_matrix(b));
    let profile = |d: &Vec<Vec<u32>>| -> Vec<Vec<u32>> {
        d.iter()
            .map(|r| {
                let mut r = r.clone();
                r.sort_unstable();
                r
            })
            .collect()
    };
    let (pa, pb) = (profile(&da), profile(&db));
    let mut sa = pa.clone();
    let mut sb = pb.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return false;
    }
    let m = da.len();
    let candidates: Vec<Vec<usize>> = (0..m)
        .map(|i| (0..m).filter(|&j| pa[i] == pb[j]).collect())
        .collect();
    // place the most constrained vertices first
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&i| candidates[i].len());
    let mut assign = vec![usize::MAX; m];
    let mut used = vec![false; m];
    fn search(
        depth: usize,
        order: &[usize],
        cand: &[Vec<usize>],
        da: &[Vec<u32>],
        db: &[Vec<u32>],
        assign: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let Some(&i) = order.get(depth) else {
            return true;
        };
        for &j in &cand[i] {
            if used[j] {
                continue;
            }
            let ok = order[..depth]
                .iter()
                .all(|&k| da[i][k] == db[j][assign[k]]);
            if !ok {
                continue;
            }
            assign[i] = j;
            used[j] = true;
            if search(depth + 1, order, cand, da, db, assign, used) {
                return true;
            }
            used[j] = false;
        }
        assign[i] = usize::MAX;
        false
    }
    search(0, &order, &candidates, &da, &db, &mut assign, &mut used)
}

/// Decides whether `F_n(alpha)` and `F_n(beta)` are congruent simplices.
pub fn congruence_test(alpha: &IrrationalSlope, beta: &IrrationalSlope, n: usize) -> Result<Congruence> {
    let (a, b) = (factor_set(alpha, n)?, factor_set(beta, n)?);
    Ok(if simplices_congruent(&a, &b) {
        Congruence::Congruent
    } else {
        Congruence::NotCongruent
    })
}

/// How `F_n(alpha)` relates to `F_n(beta)` and `F_n(1 - beta)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConjectureEvidence {
    pub congruent: bool,
    pub equal: bool,
    pub equal_to_complement: bool,
}

impl ConjectureEvidence {
    /// The conjectured equivalence holds for this pair.
    pub fn consistent(&self) -> bool {
        self.congruent == (self.equal || self.equal_to_complement)
    }
}

pub fn conjecture_evidence(alpha: &IrrationalSlope, beta: &IrrationalSlope, n: usize) -> Result<ConjectureEvidence> {
    let (a, b) = (factor_set(alpha, n)?, factor_set(beta, n)?);
    Ok(ConjectureEvidence {
        congruent: simplices_congruent(&a, &b),
        equal: a == b,
        equal_to_complement: a == b.complement(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(num: u64, den: u64) -> Fraction {
        Fraction { num, den }
    }

    #[test]
    fn small_farey_sequences() {
        let c1 = farey_cells(1).unwrap();
        assert_eq!(c1.len(), 1);
        assert_eq!(c1[0].witness(), frac(1, 2));
        let ends: Vec<Fraction> = farey_cells(3).unwrap().iter().map(|c| c.right).collect();
        assert_eq!(ends, [frac(1, 3), frac(1, 2), frac(2, 3), frac(1, 1)]);
        for c in farey_cells(12).unwrap() {
            assert_eq!(c.left.den * c.right.num - c.left.num * c.right.den, 1);
        }
    }

    #[test]
    fn lengths_sum_to_one() {
        let total: BigRational = farey_cells(60).unwrap().iter().map(FareyCell::length).sum();
        assert_eq!(total, BigRational::from_integer(1.into()));
    }

    #[test]
    fn perm_on_small_cells() {
        let cell = FareyCell { left: frac(1, 2), right: frac(1, 1) };
        assert_eq!(perm_on_cell(&cell, 2).unwrap().one_line(), &[2, 1]);
        let phi = IrrationalSlope::phi();
        let cell = locate_cell(&phi, 5).unwrap();
        assert!(cell.contains(&phi).unwrap());
        assert_eq!(perm_on_cell(&cell, 5).unwrap().one_line(), &[5, 2, 4, 1, 3]);
    }

    #[test]
    fn collisions_are_reported() {
        // 1/2 as a witness for n = 2 puts {2 * 1/2} at 0
        let bad = FareyCell { left: frac(0, 1), right: frac(1, 1) };
        assert!(matches!(perm_on_cell(&bad, 2), Err(Error::WitnessCollision { .. })));
    }

    #[test]
    fn first_integrals() {
        assert_eq!(exact_integral(1).unwrap().value, BigRational::from_integer(1.into()));
        assert_eq!(
            exact_integral(2).unwrap().value,
            BigRational::new(3.into(), 2.into())
        );
    }

    #[test]
    fn interior_surd_is_inside() {
        for c in farey_cells(7).unwrap() {
            for k in [2, 3, 5] {
                assert!(c.contains(&c.interior_surd(k).unwrap()).unwrap(), "{c} k={k}");
            }
        }
    }

    #[test]
    fn sign_sum_small() {
        let r = sign_sum(&IrrationalSlope::e(), 10).unwrap();
        assert_eq!(r.final_sum, -4);
        let r = sign_sum(&IrrationalSlope::phi(), 1).unwrap();
        assert_eq!((r.final_sum, r.max_abs), (1, 1));
    }

    #[test]
    fn b_range_trivial() {
        assert_eq!(b_range_search(&IrrationalSlope::e_inv(), 0, 10).unwrap(), Some(1));
    }

    #[test]
    fn congruence_basics() {
        let phi = IrrationalSlope::phi();
        assert_eq!(congruence_test(&phi, &phi, 8).unwrap(), Congruence::Congruent);
        let comp = phi.complement().unwrap();
        assert_eq!(congruence_test(&phi, &comp, 8).unwrap(), Congruence::Congruent);
    }
}
