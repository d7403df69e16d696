//! The factor matrices `L_s`, `M_s` of a permutation and the linear algebra
//! around them.
//!
//! For `s` in `S_n`, with `e_{n+1} = 0` and `d_i = e_{i+1} - e_i`:
//! `w_1` is the indicator of the descent set `D(s)`, `w_{j+1} = w_j + d_{s(j)}`,
//! `L_s = (w_1, ..., w_{n+1})` and `M_s = (w_1 - w_{n+1}, ..., w_n - w_{n+1})`.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::irrational::IrrationalSlope;
use crate::permtool::{pi_direct, FracPermutation};
use crate::sturmian::{factor_set, FactorSet};

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry `(i, j)`, 0-based.
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j].clone()
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self.get(i, i))
    }
}

impl<'a, T> Mul for &'a Matrix<T>
where
    T: Clone + Zero + Add<Output = T>,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    type Output = Matrix<T>;

    fn mul(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix shapes do not conform");
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| acc + self.at(i, k) * rhs.at(k, j))
        })
    }
}

impl<'a, T> Add for &'a Matrix<T>
where
    for<'x> &'x T: Add<&'x T, Output = T>,
    T: Clone,
{
    type Output = Matrix<T>;

    fn add(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j) + rhs.at(i, j))
    }
}

impl<'a, T> Sub for &'a Matrix<T>
where
    for<'x> &'x T: Sub<&'x T, Output = T>,
    T: Clone,
{
    type Output = Matrix<T>;

    fn sub(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j) - rhs.at(i, j))
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(ToString::to_string).collect();
        let w = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format!("{:>w$}", cells[i * self.cols + j]))
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl Matrix<BigRational> {
    /// Gauss-Jordan inverse; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::<BigRational>::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !a.at(r, c).is_zero())?;
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                    inv.data.swap(p * n + j, c * n + j);
                }
            }
            let piv = a.get(c, c).recip();
            for j in 0..n {
                a.set(c, j, a.at(c, j) * &piv);
                inv.set(c, j, inv.at(c, j) * &piv);
            }
            for r in 0..n {
                if r == c || a.at(r, c).is_zero() {
                    continue;
                }
                let f = a.get(r, c);
                for j in 0..n {
                    a.set(r, j, a.at(r, j) - &f * a.at(c, j));
                    inv.set(r, j, inv.at(r, j) - &f * inv.at(c, j));
                }
            }
        }
        Some(inv)
    }

    /// Determinant by rational elimination.
    pub fn determinant(&self) -> BigRational {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a.at(r, c).is_zero()) else {
                return BigRational::zero();
            };
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = a.get(c, c);
            det *= &piv;
            for r in c + 1..n {
                if a.at(r, c).is_zero() {
                    continue;
                }
                let f = a.at(r, c) / &piv;
                for j in c..n {
                    a.set(r, j, a.at(r, j) - &f * a.at(c, j));
                }
            }
        }
        det
    }
}

pub type IntMatrix = Matrix<i64>;

/// `D(s) = {1} u {k : s^-1(k-1) > s^-1(k)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentSet {
    n: usize,
    members: BTreeSet<usize>,
}

impl DescentSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn contains(&self, k: usize) -> bool {
        self.members.contains(&k)
    }
}

pub fn descent_set(sigma: &FracPermutation) -> DescentSet {
    let inv = sigma.inverse();
    let members = std::iter::once(1)
        .chain((2..=sigma.n()).filter(|&k| inv.apply(k - 1) > inv.apply(k)))
        .collect();
    DescentSet { n: sigma.n(), members }
}

/// `L_s`, `n x (n+1)`, entries 0/1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxMatrix(IntMatrix);

impl AuxMatrix {
    pub fn n(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    /// Entry `(i, j)`, 0-based.
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.0.get(i, j)
    }

    /// `w_j`, 1-based as in the definition.
    pub fn w(&self, j: usize) -> Vec<i64> {
        self.0.column(j - 1)
    }

    pub fn trace(&self) -> i64 {
        self.0.trace()
    }
}

/// `M_s`, `n x n`, entries in `{-1, 0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactorMatrix(IntMatrix);

impl FactorMatrix {
    pub fn new(m: IntMatrix) -> Result<Self> {
        if !m.is_square() || m.data.iter().any(|v| !(-1..=1).contains(v)) {
            return Err(Error::NotInImage("expected a square {-1,0,1} matrix".into()));
        }
        Ok(FactorMatrix(m))
    }

    pub fn n(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.0.get(i, j)
    }

    pub fn trace(&self) -> i64 {
        self.0.trace()
    }
}

impl Mul for &FactorMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &FactorMatrix) -> IntMatrix {
        &self.0 * &rhs.0
    }
}

impl fmt::Display for FactorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Display for AuxMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn aux_matrix(sigma: &FracPermutation) -> Result<AuxMatrix> {
    let n = sigma.n();
    let d = descent_set(sigma);
    let mut l = IntMatrix::from_fn(n, n + 1, |_, _| 0);
    let mut w: Vec<i64> = (1..=n).map(|i| i64::from(d.contains(i))).collect();
    for j in 0..=n {
        for (i, &v) in w.iter().enumerate() {
            if !(0..=1).contains(&v) {
                return Err(Error::InternalInvariantViolation(format!(
                    "L has entry {v} at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
            l.set(i, j, v);
        }
        if j < n {
            // w += e_{k+1} - e_k, with e_{n+1} = 0
            let k = sigma.apply(j + 1);
            w[k - 1] -= 1;
            if k < n {
                w[k] += 1;
            }
        }
    }
    Ok(AuxMatrix(l))
}

pub fn factor_matrix(sigma: &FracPermutation) -> Result<FactorMatrix> {
    let l = aux_matrix(sigma)?;
    let n = sigma.n();
    Ok(FactorMatrix(IntMatrix::from_fn(n, n, |i, j| l.get(i, j) - l.get(i, n))))
}

/// `M_n(alpha)` via `pi_{alpha,n}`.
pub fn m_from_alpha(alpha: &IrrationalSlope, n: usize) -> Result<FactorMatrix> {
    factor_matrix(&pi_direct(alpha, n)?)
}

/// `(v_1 - v_{n+1}, ..., v_n - v_{n+1})` for factors `v_j` in anti-lexicographic order.
pub fn m_from_factor_set(fs: &FactorSet) -> FactorMatrix {
    let n = fs.n();
    let v = fs.factors();
    FactorMatrix(IntMatrix::from_fn(n, n, |i, j| {
        i64::from(v[j].bits()[i]) - i64::from(v[n].bits()[i])
    }))
}

/// `M_n(alpha)` read off the word's factors.
pub fn m_from_alpha_geometric(alpha: &IrrationalSlope, n: usize) -> Result<FactorMatrix> {
    Ok(m_from_factor_set(&factor_set(alpha, n)?))
}

/// Recovers `s` from `M_s`: rows holding a `-1` give `w_{n+1}`, then
/// consecutive columns of `L_s` differ by `d_{s(j)}`.
pub fn reconstruct_sigma(m: &IntMatrix) -> Result<FracPermutation> {
    let fm = FactorMatrix::new(m.clone())?;
    let n = fm.n();
    if n == 0 {
        return Err(Error::NotInImage("empty matrix".into()));
    }
    let last: Vec<i64> = (0..n)
        .map(|i| i64::from(m.row(i).contains(&-1)))
        .collect();
    let w = |j: usize| -> Vec<i64> {
        if j == n {
            last.clone()
        } else {
            (0..n).map(|i| m.get(i, j) + last[i]).collect()
        }
    };
    let mut one_line = Vec::with_capacity(n);
    for j in 0..n {
        let diff: Vec<i64> = w(j + 1).iter().zip(w(j)).map(|(a, b)| a - b).collect();
        let k = decode_delta(&diff).ok_or_else(|| {
            Error::NotInImage(format!("columns {} and {} do not differ by a unit step", j + 1, j + 2))
        })?;
        one_line.push(k);
    }
    let sigma = FracPermutation::new(one_line)
        .map_err(|e| Error::NotInImage(format!("decoded map is not a bijection: {e}")))?;
    if factor_matrix(&sigma)?.0 != *m {
        return Err(Error::NotInImage(format!("decoded {sigma} but its matrix differs")));
    }
    Ok(sigma)
}

/// `k` with `v = e_{k+1} - e_k`, where `e_{n+1} = 0`.
fn decode_delta(v: &[i64]) -> Option<usize> {
    let n = v.len();
    let k = v.iter().position(|&x| x == -1)? + 1;
    let mut want = vec![0i64; n];
    want[k - 1] = -1;
    if k < n {
        want[k] = 1;
    }
    (want == v).then_some(k)
}

/// `P_s` with `p_ij = [i = s(j)]`, so that `P_s P_t = P_{st}`.
pub fn perm_matrix(sigma: &FracPermutation) -> IntMatrix {
    let n = sigma.n();
    IntMatrix::from_fn(n, n, |i, j| i64::from(i + 1 == sigma.apply(j + 1)))
}

/// The change of basis `Q` with `Q^-1 M_s Q = P_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Intertwiner {
    n: usize,
    a: BigRational,
    b: BigRational,
}

pub fn intertwiner(n: usize, a: BigRational, b: BigRational) -> Result<Intertwiner> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let q = Intertwiner { n, a, b };
    if q.det_formula().is_zero() {
        return Err(Error::SingularParameters);
    }
    Ok(q)
}

impl Intertwiner {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `q_11 = a+b`, `q_1k = a`, `q_kk = b`, `q_{k,k-1} = -b`.
    pub fn matrix(&self) -> Matrix<BigRational> {
        let z = BigRational::zero();
        Matrix::from_fn(self.n, self.n, |i, j| {
            if i == 0 && j == 0 {
                &self.a + &self.b
            } else if i == 0 {
                self.a.clone()
            } else if i == j {
                self.b.clone()
            } else if i == j + 1 {
                -self.b.clone()
            } else {
                z.clone()
            }
        })
    }

    pub fn inverse(&self) -> Matrix<BigRational> {
        self.matrix().inverse().expect("nonsingular by construction")
    }

    /// `(n a + b) b^(n-1)`.
    pub fn det_formula(&self) -> BigRational {
        let na = BigRational::from_integer(BigInt::from(self.n)) * &self.a;
        (na + &self.b) * num_traits::pow(self.b.clone(), self.n - 1)
    }
}

/// Lifts an integer matrix to rationals.
pub fn to_rational(m: &IntMatrix) -> Matrix<BigRational> {
    m.map(|&v| BigRational::from_integer(BigInt::from(v)))
}

/// `(tr M_s, tr L_s)`.
pub fn char_trace(sigma: &FracPermutation) -> Result<(i64, i64)> {
    Ok((factor_matrix(sigma)?.trace(), aux_matrix(sigma)?.trace()))
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det_exact(m: &IntMatrix) -> BigInt {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let rows: Vec<Vec<i128>> = m
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(i128::from).collect())
        .collect();
    match bareiss_i128(rows) {
        Some(d) => BigInt::from(d),
        None => bareiss_big(
            m.to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect(),
        ),
    }
}

fn bareiss_i128(mut a: Vec<Vec<i128>>) -> Option<i128> {
    let n = a.len();
    if n == 0 {
        return Some(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return Some(0);
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[i][j]
                    .checked_mul(a[k][k])?
                    .checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = t / prev;
            }
        }
        prev = a[k][k];
    }
    a[n - 1][n - 1].checked_mul(sign)
}

fn bareiss_big(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// `|det M_n(alpha)| / n!`.
pub fn simplex_volume(alpha: &IrrationalSlope, n: usize) -> Result<BigRational> {
    let m = m_from_alpha(alpha, n)?;
    let fact: BigInt = (1..=n).map(BigInt::from).product();
    Ok(BigRational::new(det_exact(m.matrix()).abs(), fact))
}
