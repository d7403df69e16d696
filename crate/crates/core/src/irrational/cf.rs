//! Partial-quotient streams and the convergent/interval machinery built on them.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A stream of simple continued fraction partial quotients `a0, a1, a2, ...`.
pub(crate) type QuotientStream = Box<dyn Iterator<Item = BigInt> + Send>;

/// Generator for the partial quotients that follow an explicit head.
///
/// `Rule` receives the absolute index of the requested quotient and returns
/// `None` once it has nothing more to give.
#[derive(Clone)]
pub enum CfTail {
    None,
    Periodic(Vec<u64>),
    Rule(Arc<dyn Fn(usize) -> Option<u64> + Send + Sync>),
}

impl fmt::Debug for CfTail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CfTail::None => write!(f, "None"),
            CfTail::Periodic(p) => f.debug_tuple("Periodic").field(p).finish(),
            CfTail::Rule(_) => write!(f, "Rule(..)"),
        }
    }
}

/// An explicit simple continued fraction `[a0; a1, a2, ...]`.
#[derive(Clone, Debug)]
pub struct ContinuedFraction {
    pub(crate) head: Vec<i64>,
    pub(crate) tail: CfTail,
}

impl ContinuedFraction {
    /// Builds `[head[0]; head[1], ..., tail...]`.
    ///
    /// Rejects empty heads, quotients below 1 after the first, and finite
    /// expansions (which denote rationals).
    pub fn new(head: Vec<i64>, tail: CfTail) -> Result<Self> {
        if head.is_empty() {
            return Err(Error::InvalidSlope(
                "continued fraction needs at least a0".into(),
            ));
        }
        if let Some(bad) = head.iter().skip(1).find(|&&a| a < 1) {
            return Err(Error::InvalidSlope(format!(
                "partial quotient {bad} after the first must be >= 1"
            )));
        }
        match &tail {
            CfTail::None => {
                return Err(Error::RationalInput(
                    "finite continued fraction denotes a rational".into(),
                ))
            }
            CfTail::Periodic(block) => {
                if block.is_empty() {
                    return Err(Error::RationalInput("empty repeating block".into()));
                }
                if block.contains(&0) {
                    return Err(Error::InvalidSlope(
                        "repeating block contains a zero quotient".into(),
                    ));
                }
            }
            CfTail::Rule(_) => {}
        }
        Ok(ContinuedFraction { head, tail })
    }

    pub fn head(&self) -> &[i64] {
        &self.head
    }

    pub fn tail(&self) -> &CfTail {
        &self.tail
    }

    pub(crate) fn stream(&self) -> QuotientStream {
        let head = self.head.clone();
        let tail = self.tail.clone();
        let mut idx = 0usize;
        Box::new(std::iter::from_fn(move || {
            let i = idx;
            idx += 1;
            if i < head.len() {
                return Some(BigInt::from(head[i]));
            }
            match &tail {
                CfTail::None => None,
                CfTail::Periodic(block) => {
                    Some(BigInt::from(block[(i - head.len()) % block.len()]))
                }
                // A rule that hands out a zero is treated as exhausted.
                CfTail::Rule(rule) => rule(i).filter(|&a| a >= 1).map(BigInt::from),
            }
        }))
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cf:[{};", self.head[0])?;
        let rest: Vec<String> = self.head[1..].iter().map(|a| a.to_string()).collect();
        write!(f, "{}", rest.join(","))?;
        match &self.tail {
            CfTail::None => {}
            CfTail::Periodic(block) => {
                if !rest.is_empty() {
                    write!(f, ",|")?;
                }
                let b: Vec<String> = block.iter().map(|a| a.to_string()).collect();
                write!(f, "{},...", b.join(","))?;
            }
            CfTail::Rule(_) => write!(f, ",<rule>")?,
        }
        write!(f, "]")
    }
}

/// Partial quotients of e: `[2; 1, 2, 1, 1, 4, 1, 1, 6, 1, ...]`.
pub(crate) fn euler_stream() -> QuotientStream {
    Box::new((0u64..).map(|i| {
        if i == 0 {
            BigInt::from(2)
        } else if i % 3 == 2 {
            BigInt::from(2 * (i + 1) / 3)
        } else {
            BigInt::one()
        }
    }))
}

/// Reciprocal of a positive value: `[0; a0, a1, ...]`, or drop a leading 0.
pub(crate) fn reciprocal(mut inner: QuotientStream) -> QuotientStream {
    let first = inner.next();
    match first {
        Some(a0) if a0.is_zero() => inner,
        Some(a0) => Box::new(std::iter::once(BigInt::zero()).chain(std::iter::once(a0)).chain(inner)),
        None => Box::new(std::iter::empty()),
    }
}

/// Negation of an irrational value.
///
/// `-[a0; a1, a2, ...] = [-a0-1; 1, a1-1, a2, ...]` when `a1 >= 2`, and
/// `[-a0-1; a2+1, a3, ...]` when `a1 = 1`.
pub(crate) fn negate(mut inner: QuotientStream) -> QuotientStream {
    let Some(a0) = inner.next() else {
        return Box::new(std::iter::empty());
    };
    let lead = -a0 - 1;
    let Some(a1) = inner.next() else {
        // Integer input; nothing sensible to negate into, keep it finite.
        return Box::new(std::iter::once(lead + 1));
    };
    if a1 > BigInt::one() {
        let prefix = vec![lead, BigInt::one(), a1 - 1];
        Box::new(prefix.into_iter().chain(inner))
    } else {
        match inner.next() {
            Some(a2) => Box::new(vec![lead, a2 + 1].into_iter().chain(inner)),
            None => Box::new(std::iter::once(lead + 1)),
        }
    }
}

/// Adds an integer to the represented value.
pub(crate) fn shift(mut inner: QuotientStream, by: i64) -> QuotientStream {
    if by == 0 {
        return inner;
    }
    match inner.next() {
        Some(a0) => Box::new(std::iter::once(a0 + by).chain(inner)),
        None => Box::new(std::iter::empty()),
    }
}

/// A continued-fraction convergent `p/q` with its index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub index: usize,
    pub p: BigInt,
    pub q: BigInt,
}

impl Convergent {
    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.q.clone())
    }
}

impl fmt::Display for Convergent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Iterates the convergents of a quotient stream.
pub struct Convergents {
    stream: QuotientStream,
    index: usize,
    p: (BigInt, BigInt),
    q: (BigInt, BigInt),
}

impl Convergents {
    pub(crate) fn new(stream: QuotientStream) -> Self {
        Convergents {
            stream,
            index: 0,
            // (p_{k-1}, p_{k-2}) seeded with p_{-1} = 1, p_{-2} = 0
            p: (BigInt::one(), BigInt::zero()),
            q: (BigInt::zero(), BigInt::one()),
        }
    }
}

impl Iterator for Convergents {
    type Item = Convergent;

    fn next(&mut self) -> Option<Convergent> {
        let a = self.stream.next()?;
        let p = &a * &self.p.0 + &self.p.1;
        let q = &a * &self.q.0 + &self.q.1;
        self.p = (p.clone(), std::mem::take(&mut self.p.0));
        self.q = (q.clone(), std::mem::take(&mut self.q.0));
        let c = Convergent { index: self.index, p, q };
        self.index += 1;
        Some(c)
    }
}

/// An open rational interval `(lo, hi)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RationalInterval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo < x && x < &self.hi
    }

    /// Image under multiplication by an integer, endpoints kept ordered.
    pub fn scaled(&self, t: &BigInt) -> RationalInterval {
        let a = &self.lo * BigRational::from_integer(t.clone());
        let b = &self.hi * BigRational::from_integer(t.clone());
        if a <= b {
            RationalInterval { lo: a, hi: b }
        } else {
            RationalInterval { lo: b, hi: a }
        }
    }

    /// The integer `m` with `(lo, hi)` inside `(m, m + 1)`, if there is one.
    pub fn integer_part(&self) -> Option<BigInt> {
        let m = self.lo.floor().to_integer();
        let top = self.hi.ceil().to_integer();
        (top - 1 == m).then_some(m)
    }
}

/// Successively narrower brackets of an irrational, one per call.
///
/// Each interval is spanned by two consecutive convergents, so it strictly
/// contains the value and is nested in the previous one. The first interval
/// uses convergents 2 and 3, which keeps both endpoints off the integers.
pub struct Refiner {
    convergents: Convergents,
    last: Option<Convergent>,
    rounds: usize,
}

impl Refiner {
    pub(crate) fn new(stream: QuotientStream) -> Self {
        Refiner {
            convergents: Convergents::new(stream),
            last: None,
            rounds: 0,
        }
    }

    /// Number of intervals handed out so far.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn next_interval(&mut self) -> Result<RationalInterval> {
        if self.last.is_none() {
            for _ in 0..3 {
                let c = self.pull()?;
                self.last = Some(c);
            }
        }
        let next = self.pull()?;
        let prev = self.last.replace(next.clone()).expect("seeded above");
        self.rounds += 1;
        let (a, b) = (prev.to_rational(), next.to_rational());
        Ok(if a < b {
            RationalInterval { lo: a, hi: b }
        } else {
            RationalInterval { lo: b, hi: a }
        })
    }

    fn pull(&mut self) -> Result<Convergent> {
        let index = self.convergents.index;
        self.convergents
            .next()
            .ok_or(Error::CoefficientsExhausted { index })
    }
}

/// Exact `floor(t * x)` by refining brackets of `x` until `t * bracket`
/// contains no integer.
pub(crate) fn floor_by_refinement(stream: QuotientStream, t: i64, budget: usize) -> Result<i64> {
    if t == 0 {
        return Ok(0);
    }
    let t = BigInt::from(t);
    let mut refiner = Refiner::new(stream);
    while refiner.rounds() < budget {
        let iv = refiner.next_interval()?.scaled(&t);
        if let Some(m) = iv.integer_part() {
            return i64::try_from(m)
                .map_err(|_| Error::InvalidArgument("floor does not fit in 64 bits".into()));
        }
    }
    Err(Error::RefinementBudgetExceeded { budget })
}

/// Machine-integer bracket `lo_p/lo_q < x < hi_p/hi_q` for fast floors.
#[derive(Clone, Copy, Debug)]
pub(crate) struct FastBracket {
    lo: (i128, i128),
    hi: (i128, i128),
}

const FAST_TARGET_DENOMINATOR: i128 = 1_000_000_000_000_000;
const FAST_LIMIT: i128 = 1 << 96;

impl FastBracket {
    /// Walks convergents until the denominators pass ~1e15, keeping the last
    /// consecutive pair whose entries stay well inside i128.
    pub(crate) fn build(stream: QuotientStream) -> Option<Self> {
        let mut prev: Option<(i128, i128)> = None;
        let mut best = None;
        for c in Convergents::new(stream).take(400) {
            let (Ok(p), Ok(q)) = (i128::try_from(&c.p), i128::try_from(&c.q)) else {
                break;
            };
            if p.abs() > FAST_LIMIT || q > FAST_LIMIT {
                break;
            }
            if let Some(pr) = prev {
                best = Some(Self::ordered(pr, (p, q)));
                if q >= FAST_TARGET_DENOMINATOR {
                    break;
                }
            }
            prev = Some((p, q));
        }
        best
    }

    fn ordered(a: (i128, i128), b: (i128, i128)) -> Self {
        // a.p/a.q < b.p/b.q  <=>  a.p*b.q < b.p*a.q  (denominators positive)
        if a.0 * b.1 < b.0 * a.1 {
            FastBracket { lo: a, hi: b }
        } else {
            FastBracket { lo: b, hi: a }
        }
    }

    /// `floor(t * x)` when the bracket decides it.
    pub(crate) fn floor(&self, t: i64) -> Option<i64> {
        if t == 0 {
            return Some(0);
        }
        let t = t as i128;
        let x = (t.checked_mul(self.lo.0)?, self.lo.1);
        let y = (t.checked_mul(self.hi.0)?, self.hi.1);
        let (x, y) = if t > 0 { (x, y) } else { (y, x) };
        let m = Integer::div_floor(&x.0, &x.1);
        let top = Integer::div_ceil(&y.0, &y.1);
        if top - 1 == m {
            i64::try_from(m).ok()
        } else {
            None
        }
    }
}
