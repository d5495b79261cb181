//! Finite unions of intervals with quadratic-irrational endpoints.

use std::fmt;

use crate::curvetrace::quadreal::QuadReal;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: QuadReal,
    pub lo_closed: bool,
    pub hi: QuadReal,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: QuadReal, lo_closed: bool, hi: QuadReal, hi_closed: bool) -> Self {
        Interval {
            lo,
            lo_closed,
            hi,
            hi_closed,
        }
    }

    pub fn point(x: QuadReal) -> Self {
        Self::new(x.clone(), true, x, true)
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    pub fn contains(&self, x: &QuadReal) -> bool {
        let above = if self.lo_closed { x >= &self.lo } else { x > &self.lo };
        let below = if self.hi_closed { x <= &self.hi } else { x < &self.hi };
        above && below
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            return write!(f, "{{{}}}", self.lo);
        }
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Sorted, pairwise disjoint, maximal intervals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalSet {
    items: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_intervals(mut items: Vec<Interval>) -> Self {
        items.retain(|i| !i.is_empty());
        items.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
        let mut out: Vec<Interval> = Vec::new();
        for next in items {
            if let Some(cur) = out.last_mut() {
                let touches = next.lo < cur.hi
                    || (next.lo == cur.hi && (cur.hi_closed || next.lo_closed));
                if touches {
                    if next.hi > cur.hi {
                        cur.hi = next.hi;
                        cur.hi_closed = next.hi_closed;
                    } else if next.hi == cur.hi {
                        cur.hi_closed |= next.hi_closed;
                    }
                    continue;
                }
            }
            out.push(next);
        }
        IntervalSet { items: out }
    }

    pub fn single(interval: Interval) -> Self {
        Self::from_intervals(vec![interval])
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.items
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, x: &QuadReal) -> bool {
        self.items.iter().any(|i| i.contains(x))
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_intervals(self.items.iter().chain(&other.items).cloned().collect())
    }

    /// `base \ self`
    pub fn complement_within(&self, base: &Interval) -> Self {
        let mut out = Vec::new();
        let mut lo = base.lo.clone();
        let mut lo_closed = base.lo_closed;
        for i in &self.items {
            out.push(Interval::new(lo, lo_closed, i.lo.clone(), !i.lo_closed));
            lo = i.hi.clone();
            lo_closed = !i.hi_closed;
        }
        out.push(Interval::new(lo, lo_closed, base.hi.clone(), base.hi_closed));
        let clipped = out
            .into_iter()
            .filter_map(|i| intersect(&i, base))
            .collect();
        Self::from_intervals(clipped)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for a in &self.items {
            for b in &other.items {
                out.extend(intersect(a, b));
            }
        }
        Self::from_intervals(out)
    }

    /// `self \ other`
    pub fn difference(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for a in &self.items {
            out.extend(other.complement_within(a).items);
        }
        Self::from_intervals(out)
    }
}

fn intersect(a: &Interval, b: &Interval) -> Option<Interval> {
    let (lo, lo_closed) = match a.lo.cmp(&b.lo) {
        std::cmp::Ordering::Less => (b.lo.clone(), b.lo_closed),
        std::cmp::Ordering::Greater => (a.lo.clone(), a.lo_closed),
        std::cmp::Ordering::Equal => (a.lo.clone(), a.lo_closed && b.lo_closed),
    };
    let (hi, hi_closed) = match a.hi.cmp(&b.hi) {
        std::cmp::Ordering::Less => (a.hi.clone(), a.hi_closed),
        std::cmp::Ordering::Greater => (b.hi.clone(), b.hi_closed),
        std::cmp::Ordering::Equal => (a.hi.clone(), a.hi_closed && b.hi_closed),
    };
    let i = Interval::new(lo, lo_closed, hi, hi_closed);
    (!i.is_empty()).then_some(i)
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.items.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self.items.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join(" u "))
    }
}
