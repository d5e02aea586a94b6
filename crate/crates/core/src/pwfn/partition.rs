use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::{int, midpoint, Rational};

/// Ordered points `a = x_0 < x_1 < ... < x_n = b`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    points: Vec<Rational>,
}

impl Partition {
    pub fn new(points: Vec<Rational>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidPartition("a partition needs at least two points".into()));
        }
        if let Some(w) = points.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPartition(format!(
                "points must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(Partition { points })
    }

    /// Builds from arbitrary points inside `[a, b]`, sorting and removing
    /// duplicates; `a` and `b` are always included.
    pub fn from_points(a: &Rational, b: &Rational, extra: impl IntoIterator<Item = Rational>) -> Result<Self> {
        if a >= b {
            return Err(Error::InvalidPartition(format!("empty interval [{a}, {b}]")));
        }
        let mut pts: Vec<Rational> = extra.into_iter().filter(|x| x > a && x < b).collect();
        pts.push(a.clone());
        pts.push(b.clone());
        pts.sort();
        pts.dedup();
        Ok(Partition { points: pts })
    }

    /// `n` equal subintervals of `[a, b]`.
    pub fn uniform(a: &Rational, b: &Rational, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPartition("need at least one subinterval".into()));
        }
        let h = (b - a) / int(n as i64);
        Partition::new((0..=n).map(|i| a + &h * int(i as i64)).collect())
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn a(&self) -> &Rational {
        &self.points[0]
    }

    pub fn b(&self) -> &Rational {
        self.points.last().unwrap()
    }

    pub fn len_intervals(&self) -> usize {
        self.points.len() - 1
    }

    /// The open intervals `(x_{i-1}, x_i)` as endpoint pairs.
    pub fn intervals(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.points.windows(2).map(|w| (&w[0], &w[1]))
    }

    /// Longest subinterval.
    pub fn mesh(&self) -> Rational {
        self.intervals().map(|(l, r)| r - l).max().unwrap()
    }

    pub fn contains_point(&self, x: &Rational) -> bool {
        self.points.binary_search(x).is_ok()
    }

    /// Adds the given points (those strictly inside the domain).
    pub fn refine(&self, extra: impl IntoIterator<Item = Rational>) -> Partition {
        let mut pts = self.points.clone();
        pts.extend(extra.into_iter().filter(|x| x > self.a() && x < self.b()));
        pts.sort();
        pts.dedup();
        Partition { points: pts }
    }

    /// Splits every subinterval at its midpoint.
    pub fn bisect_all(&self) -> Partition {
        let mids: Vec<Rational> = self.intervals().map(|(l, r)| midpoint(l, r)).collect();
        self.refine(mids)
    }

    /// `true` when every point of `self` is a point of `other`.
    pub fn is_refined_by(&self, other: &Partition) -> bool {
        self.points.iter().all(|x| other.contains_point(x))
    }
}

/// Union of two partitions of the same interval.
pub fn common_refinement(p: &Partition, q: &Partition) -> Result<Partition> {
    if p.a() != q.a() || p.b() != q.b() {
        return Err(Error::domain_mismatch((p.a(), p.b()), (q.a(), q.b())));
    }
    Ok(p.refine(q.points.iter().cloned()))
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}
