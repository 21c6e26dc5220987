//! Test sets `S`, index sets `J_{w,S}` and realized counts `M_k(x, w)(S)`.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, resource, Error, Result};
use crate::measures::{CylinderMass, Symbol};
use crate::rational::to_f64;
use crate::words::Word;

/// Largest index placed in a `J` set; keeps `i + k` inside `u64` arithmetic.
pub const MAX_INDEX: u64 = 1 << 62;

/// One interval with rational endpoints and closedness flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational, lo_closed: bool, hi_closed: bool) -> Self {
        Interval { lo, hi, lo_closed, hi_closed }
    }

    /// `(lo, hi]`, the usual shape of a test set.
    pub fn open_closed(lo: BigRational, hi: BigRational) -> Self {
        Interval::new(lo, hi, false, true)
    }

    pub fn is_empty(&self) -> bool {
        match self.lo.cmp(&self.hi) {
            Ordering::Less => false,
            Ordering::Equal => !(self.lo_closed && self.hi_closed),
            Ordering::Greater => true,
        }
    }

    pub fn length(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        let above = match x.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        let below = match x.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        above && below
    }

    // Whether `self` (starting no later than `next`) can absorb `next`.
    fn joins(&self, next: &Interval) -> bool {
        match self.hi.cmp(&next.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.hi_closed || next.lo_closed,
            Ordering::Less => false,
        }
    }
}

/// A finite union of disjoint intervals in `[0, inf)`, sorted and canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalUnion {
    intervals: Vec<Interval>,
    total_length: BigRational,
    sup: BigRational,
}

/// Canonicalizes raw intervals: drops empty ones, merges overlapping or
/// touching ones, and computes `m`, `|S|` and `sup S`.
pub fn make_interval_union(raw: Vec<Interval>) -> Result<IntervalUnion> {
    let mut items = Vec::with_capacity(raw.len());
    for iv in raw {
        if iv.lo.is_negative() || iv.hi.is_negative() {
            return Err(domain("interval endpoints must be non-negative"));
        }
        if iv.lo > iv.hi {
            return Err(domain(format!("interval with lo > hi ({} > {})", iv.lo, iv.hi)));
        }
        if !iv.is_empty() {
            items.push(iv);
        }
    }
    // Closed lower ends first so ties keep the wider interval as the anchor.
    items.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
    let mut merged: Vec<Interval> = Vec::with_capacity(items.len());
    for iv in items {
        match merged.last_mut() {
            Some(cur) if cur.joins(&iv) => match iv.hi.cmp(&cur.hi) {
                Ordering::Greater => {
                    cur.hi = iv.hi;
                    cur.hi_closed = iv.hi_closed;
                }
                Ordering::Equal => cur.hi_closed |= iv.hi_closed,
                Ordering::Less => {}
            },
            _ => merged.push(iv),
        }
    }
    let total_length = merged.iter().fold(BigRational::zero(), |acc, iv| acc + iv.length());
    let sup = merged.last().map(|iv| iv.hi.clone()).unwrap_or_else(BigRational::zero);
    Ok(IntervalUnion { intervals: merged, total_length, sup })
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion { intervals: Vec::new(), total_length: BigRational::zero(), sup: BigRational::zero() }
    }

    /// `(0, hi]`.
    pub fn unit_like(hi: BigRational) -> Result<Self> {
        make_interval_union(alloc::vec![Interval::open_closed(BigRational::zero(), hi)])
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    /// Number of disjoint intervals `m`.
    pub fn m(&self) -> usize {
        self.intervals.len()
    }

    /// Lebesgue measure `|S|`.
    pub fn length(&self) -> &BigRational {
        &self.total_length
    }

    pub fn length_f64(&self) -> f64 {
        to_f64(&self.total_length)
    }

    /// `sup S`; zero for the empty union.
    pub fn sup(&self) -> &BigRational {
        &self.sup
    }

    pub fn sup_f64(&self) -> f64 {
        to_f64(&self.sup)
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.intervals.iter().any(|iv| iv.contains(x))
    }

    /// True if every point of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &IntervalUnion) -> bool {
        self.intervals.iter().all(|a| {
            other.intervals.iter().any(|b| {
                let lo_ok = match b.lo.cmp(&a.lo) {
                    Ordering::Less => true,
                    Ordering::Equal => b.lo_closed || !a.lo_closed,
                    Ordering::Greater => false,
                };
                let hi_ok = match a.hi.cmp(&b.hi) {
                    Ordering::Less => true,
                    Ordering::Equal => b.hi_closed || !a.hi_closed,
                    Ordering::Greater => false,
                };
                lo_ok && hi_ok
            })
        })
    }

    /// True if no point lies in both unions.
    pub fn is_disjoint_from(&self, other: &IntervalUnion) -> bool {
        self.intervals.iter().all(|a| {
            other.intervals.iter().all(|b| {
                let (first, second) = if (&a.lo, !a.lo_closed) <= (&b.lo, !b.lo_closed) { (a, b) } else { (b, a) };
                match first.hi.cmp(&second.lo) {
                    Ordering::Less => true,
                    Ordering::Equal => !(first.hi_closed && second.lo_closed),
                    Ordering::Greater => false,
                }
            })
        })
    }

    pub fn union(&self, other: &IntervalUnion) -> Result<IntervalUnion> {
        let mut all = self.intervals.clone();
        all.extend(other.intervals.iter().cloned());
        make_interval_union(all)
    }
}

/// The set `J_{w,S} = {i >= 1 : i * mu_k(w) in S}` as sorted disjoint ranges.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexSet {
    ranges: Vec<(u64, u64)>,
    mu_w: f64,
}

impl IndexSet {
    /// Builds from inclusive ranges; they are sorted and adjacent ones coalesced.
    pub fn from_ranges(mut ranges: Vec<(u64, u64)>, mu_w: f64) -> Self {
        ranges.retain(|&(a, b)| a <= b);
        ranges.sort_unstable();
        let mut out: Vec<(u64, u64)> = Vec::with_capacity(ranges.len());
        for (a, b) in ranges {
            match out.last_mut() {
                Some(last) if a <= last.1.saturating_add(1) => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        IndexSet { ranges: out, mu_w }
    }

    pub fn empty(mu_w: f64) -> Self {
        IndexSet { ranges: Vec::new(), mu_w }
    }

    pub fn ranges(&self) -> &[(u64, u64)] {
        &self.ranges
    }

    pub fn mu_w(&self) -> f64 {
        self.mu_w
    }

    /// `#J`.
    pub fn len(&self) -> u64 {
        self.ranges.iter().map(|&(a, b)| b - a + 1).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    pub fn min(&self) -> Option<u64> {
        self.ranges.first().map(|r| r.0)
    }

    pub fn max(&self) -> Option<u64> {
        self.ranges.last().map(|r| r.1)
    }

    pub fn contains(&self, i: u64) -> bool {
        let idx = self.ranges.partition_point(|r| r.1 < i);
        idx < self.ranges.len() && self.ranges[idx].0 <= i
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.ranges.iter().flat_map(|&(a, b)| a..=b)
    }

    pub fn is_subset_of(&self, other: &IndexSet) -> bool {
        self.ranges.iter().all(|&(a, b)| {
            let idx = other.ranges.partition_point(|r| r.1 < a);
            idx < other.ranges.len() && other.ranges[idx].0 <= a && b <= other.ranges[idx].1
        })
    }

    /// Number of ordered pairs `(i, j)` in `J x J` with `j - i = lag`, for `lag >= 1`.
    pub fn pairs_at_lag(&self, lag: u64) -> u64 {
        let mut total = 0u64;
        for &(a, b) in &self.ranges {
            for &(c, d) in &self.ranges {
                // i in [a, b], i + lag in [c, d]
                let lo = a.max(c.saturating_sub(lag));
                let hi = b.min(d.saturating_sub(lag));
                if d >= lag && hi >= lo {
                    total += hi - lo + 1;
                }
            }
        }
        total
    }
}

fn above_lo(mass: &CylinderMass, i: u64, iv: &Interval) -> Result<bool> {
    Ok(match mass.cmp_scaled(i, &iv.lo)? {
        Ordering::Greater => true,
        Ordering::Equal => iv.lo_closed,
        Ordering::Less => false,
    })
}

fn below_hi(mass: &CylinderMass, i: u64, iv: &Interval) -> Result<bool> {
    Ok(match mass.cmp_scaled(i, &iv.hi)? {
        Ordering::Less => true,
        Ordering::Equal => iv.hi_closed,
        Ordering::Greater => false,
    })
}

/// Smallest `i` in `[1, MAX_INDEX]` with `pred(i)`, for `pred` monotone
/// false-then-true; `None` if it is false on the whole range.
fn first_true(guess: u64, mut pred: impl FnMut(u64) -> Result<bool>) -> Result<Option<u64>> {
    let guess = guess.clamp(1, MAX_INDEX);
    let (mut lo, mut hi); // pred(lo) false (or lo = 0), pred(hi) true
    if pred(guess)? {
        hi = guess;
        let mut step = 1u64;
        loop {
            if hi == 1 {
                return Ok(Some(1));
            }
            let probe = hi.saturating_sub(step).max(1);
            if pred(probe)? {
                hi = probe;
                step = step.saturating_mul(2);
            } else {
                lo = probe;
                break;
            }
        }
    } else {
        lo = guess;
        let mut step = 1u64;
        loop {
            if lo == MAX_INDEX {
                return Ok(None);
            }
            let probe = lo.saturating_add(step).min(MAX_INDEX);
            if pred(probe)? {
                hi = probe;
                break;
            }
            lo = probe;
            step = step.saturating_mul(2);
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

fn float_guess(x: f64) -> u64 {
    if !(x.is_finite()) || x >= MAX_INDEX as f64 {
        MAX_INDEX
    } else if x < 1.0 {
        1
    } else {
        x as u64
    }
}

fn floor_ratio(a: &BigRational, b: &BigRational) -> BigInt {
    (a / b).floor().to_integer()
}

fn clamp_index(v: BigInt) -> Result<u64> {
    if v.is_negative() {
        return Ok(0);
    }
    match v.to_u64() {
        Some(x) if x <= MAX_INDEX => Ok(x),
        _ => Err(resource("index set reaches past 2^62")),
    }
}

fn rational_range(mu: &BigRational, iv: &Interval) -> Result<Option<(u64, u64)>> {
    // smallest i with i*mu above lo
    let q_lo = &iv.lo / mu;
    let first = if q_lo.is_integer() && iv.lo_closed {
        q_lo.to_integer()
    } else {
        q_lo.floor().to_integer() + BigInt::one()
    };
    let q_hi = floor_ratio(&iv.hi, mu);
    let last = if (&iv.hi / mu).is_integer() && !iv.hi_closed { q_hi - BigInt::one() } else { q_hi };
    let first = clamp_index(first.max(BigInt::one()))?;
    let last = clamp_index(last)?;
    Ok(if first <= last && last >= 1 { Some((first, last)) } else { None })
}

/// Builds `J_{w,S}` for a cylinder of mass `mass`; membership is exact.
pub fn j_set(mass: &CylinderMass, s: &IntervalUnion) -> Result<IndexSet> {
    if mass.is_zero() {
        return Err(domain("index set of a zero-measure word"));
    }
    let mu_f = mass.value();
    let mut ranges = Vec::with_capacity(s.m());
    for iv in s.intervals() {
        let range = match mass {
            CylinderMass::Rational(mu) => rational_range(mu, iv)?,
            CylinderMass::Gauss(_) => {
                let first = first_true(float_guess(to_f64(&iv.lo) / mu_f), |i| above_lo(mass, i, iv))?;
                let past = first_true(float_guess(to_f64(&iv.hi) / mu_f), |i| Ok(!below_hi(mass, i, iv)?))?;
                let last = match past {
                    Some(p) => p - 1,
                    None => return Err(resource("index set reaches past 2^62")),
                };
                match first {
                    Some(f) if f <= last => Some((f, last)),
                    _ => None,
                }
            }
        };
        if let Some(r) = range {
            ranges.push(r);
        }
    }
    Ok(IndexSet::from_ranges(ranges, mu_f))
}

/// Whether `i * mass` lies in `s`, decided exactly.
pub fn scaled_in_set(mass: &CylinderMass, i: u64, s: &IntervalUnion) -> Result<bool> {
    for iv in s.intervals() {
        if above_lo(mass, i, iv)? && below_hi(mass, i, iv)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `max(J) + |w| - 1`, or 0 for empty `J`.
pub fn required_prefix_length(w: &Word, j: &IndexSet) -> u64 {
    match j.max() {
        Some(m) => m + w.len() as u64 - 1,
        None => 0,
    }
}

/// One realized count `M_k(x, w)(S)` with its audit fields.
#[derive(Debug, Clone, PartialEq)]
pub struct CountSample {
    pub count: u64,
    pub word: Word,
    pub mu_w: f64,
    pub index_count: u64,
    pub prefix_len_used: u64,
    pub truncated: bool,
}

/// Counts `i in J` with `x[i, i + |w|) = w` by direct comparison, using only
/// positions inside `x_prefix`.
pub fn count_occurrences(x_prefix: &[Symbol], w: &Word, j: &IndexSet) -> CountSample {
    let k = w.len() as u64;
    let n = x_prefix.len() as u64;
    let last_start = if n + 1 > k { n + 1 - k } else { 0 };
    let needed = required_prefix_length(w, j);
    let mut count = 0u64;
    if k > 0 {
        for &(a, b) in j.ranges() {
            let hi = b.min(last_start);
            let mut i = a;
            while i <= hi {
                let s = (i - 1) as usize;
                if &x_prefix[s..s + k as usize] == w.symbols() {
                    count += 1;
                }
                i += 1;
            }
        }
    }
    CountSample {
        count,
        word: w.clone(),
        mu_w: j.mu_w(),
        index_count: j.len(),
        prefix_len_used: needed.min(n),
        truncated: needed > n,
    }
}

/// All `k`-windows of a fixed sequence, sorted by content, so occurrence
/// positions of any word can be found by binary search.
#[derive(Debug, Clone)]
pub struct WindowIndex<'x> {
    x: &'x [Symbol],
    k: usize,
    // 0-based window starts, ordered by (window, start)
    order: Vec<u32>,
}

impl<'x> WindowIndex<'x> {
    pub fn new(x: &'x [Symbol], k: usize) -> Result<Self> {
        if k == 0 {
            return Err(domain("window length must be positive"));
        }
        if x.len() > u32::MAX as usize {
            return Err(resource("sequence too long for a window index"));
        }
        let count = if x.len() >= k { x.len() - k + 1 } else { 0 };
        let mut order: Vec<u32> = (0..count as u32).collect();
        order.sort_unstable_by(|&a, &b| {
            let (a, b) = (a as usize, b as usize);
            x[a..a + k].cmp(&x[b..b + k]).then(a.cmp(&b))
        });
        Ok(WindowIndex { x, k, order })
    }

    pub fn sequence(&self) -> &'x [Symbol] {
        self.x
    }

    fn group(&self, w: &[Symbol]) -> &[u32] {
        let k = self.k;
        let x = self.x;
        let lo = self.order.partition_point(|&p| &x[p as usize..p as usize + k] < w);
        let hi = self.order.partition_point(|&p| &x[p as usize..p as usize + k] <= w);
        &self.order[lo..hi]
    }

    /// 1-based occurrence positions of `w`, ascending.
    pub fn occurrences(&self, w: &Word) -> Result<Vec<u64>> {
        if w.len() != self.k {
            return Err(domain("word length differs from the index window"));
        }
        Ok(self.group(w.symbols()).iter().map(|&p| p as u64 + 1).collect())
    }

    /// Same result as [`count_occurrences`] on the indexed sequence.
    pub fn count(&self, w: &Word, j: &IndexSet) -> Result<CountSample> {
        if w.len() != self.k {
            return Err(Error::Domain("word length differs from the index window".into()));
        }
        let group = self.group(w.symbols());
        let mut count = 0u64;
        for &(a, b) in j.ranges() {
            // starts are 0-based: position i corresponds to start i - 1
            let lo = group.partition_point(|&p| (p as u64) + 1 < a);
            let hi = group.partition_point(|&p| (p as u64) < b);
            count += (hi - lo) as u64;
        }
        let n = self.x.len() as u64;
        let needed = required_prefix_length(w, j);
        Ok(CountSample {
            count,
            word: w.clone(),
            mu_w: j.mu_w(),
            index_count: j.len(),
            prefix_len_used: needed.min(n),
            truncated: needed > n,
        })
    }
}

/// `|S| / mu - m <= #J <= |S| / mu + m`, decided exactly for rational `mu`.
pub fn cardinality_sandwich_holds(mu: &BigRational, s: &IntervalUnion, j: &IndexSet) -> bool {
    let ratio = s.length() / mu;
    let m = BigRational::from_integer(BigInt::from(s.m()));
    let n = BigRational::from_integer(BigInt::from(j.len()));
    &ratio - &m <= n && n <= ratio + m
}
