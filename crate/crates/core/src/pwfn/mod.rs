//! Piecewise-polynomial functions with first-class point values.
//!
//! A [`PiecewiseFn`] on `[a, b]` stores a polynomial for every open interval
//! between consecutive breakpoints and, separately, the value at each
//! breakpoint. The value at a breakpoint need not agree with either
//! adjacent limit; this is what lets the integral see point masses.

mod partition;
mod step;

use std::fmt;

use num_traits::{Signed, Zero};

pub use partition::{common_refinement, Partition};
pub use step::StepFn;

use crate::error::{Error, Result};
use crate::numerics::{int, max_degree, midpoint, sign_changes, Poly, Rational};

/// Where a point sits relative to the breakpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Locus {
    Breakpoint(usize),
    /// Inside the open piece with this index.
    Piece(usize),
}

/// A jump of a piecewise function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discontinuity {
    pub x: Rational,
    /// `f(x) - f(x-)`.
    pub left_gap: Rational,
    /// `f(x+) - f(x)`.
    pub right_gap: Rational,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PiecewiseFn {
    breakpoints: Vec<Rational>,
    pieces: Vec<Poly>,
    values: Vec<Rational>,
}

impl PiecewiseFn {
    pub fn new(breakpoints: Vec<Rational>, pieces: Vec<Poly>, values: Vec<Rational>) -> Result<Self> {
        let f = Self::new_uncapped(breakpoints, pieces, values)?;
        let cap = max_degree();
        if let Some(d) = f.pieces.iter().filter_map(Poly::degree).find(|&d| d > cap) {
            return Err(Error::DegreeTooHigh { degree: d, cap });
        }
        Ok(f)
    }

    pub(crate) fn new_uncapped(breakpoints: Vec<Rational>, pieces: Vec<Poly>, values: Vec<Rational>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidPiecewise("need at least the two domain endpoints".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPiecewise("breakpoints must be strictly increasing".into()));
        }
        if pieces.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidPiecewise(format!(
                "{} breakpoints need {} pieces, got {}",
                breakpoints.len(),
                breakpoints.len() - 1,
                pieces.len()
            )));
        }
        if values.len() != breakpoints.len() {
            return Err(Error::InvalidPiecewise(format!(
                "{} breakpoints need {} point values, got {}",
                breakpoints.len(),
                breakpoints.len(),
                values.len()
            )));
        }
        Ok(PiecewiseFn { breakpoints, pieces, values })
    }

    /// A single polynomial on `[a, b]` with matching endpoint values.
    pub fn from_poly(a: Rational, b: Rational, p: Poly) -> Result<Self> {
        let values = vec![p.eval(&a), p.eval(&b)];
        Self::new(vec![a, b], vec![p], values)
    }

    pub fn constant(a: Rational, b: Rational, c: Rational) -> Result<Self> {
        Self::from_poly(a, b, Poly::constant(c))
    }

    pub fn identity(a: Rational, b: Rational) -> Result<Self> {
        Self::from_poly(a, b, Poly::x())
    }

    /// `H_c(x - at)` on `[a, b]`: 0 left of `at`, `c` at `at`, 1 right of it.
    pub fn heaviside(a: Rational, b: Rational, c: Rational, at: Rational) -> Result<Self> {
        if a >= b {
            return Err(Error::InvalidPiecewise(format!("empty domain [{a}, {b}]")));
        }
        let zero = Poly::zero();
        let one = Poly::constant(int(1));
        if at > a && at < b {
            Self::new(vec![a, at, b], vec![zero, one], vec![int(0), c, int(1)])
        } else if at == a {
            Self::new(vec![a, b], vec![one], vec![c, int(1)])
        } else if at == b {
            Self::new(vec![a, b], vec![zero], vec![int(0), c])
        } else if at < a {
            Self::constant(a, b, int(1))
        } else {
            Self::constant(a, b, int(0))
        }
    }

    pub fn a(&self) -> &Rational {
        &self.breakpoints[0]
    }

    pub fn b(&self) -> &Rational {
        self.breakpoints.last().unwrap()
    }

    pub fn domain(&self) -> (&Rational, &Rational) {
        (self.a(), self.b())
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn partition(&self) -> Partition {
        Partition::new(self.breakpoints.clone()).expect("breakpoints validated at construction")
    }

    /// Every piece is a constant.
    pub fn is_step(&self) -> bool {
        self.pieces.iter().all(Poly::is_constant)
    }

    pub fn max_piece_degree(&self) -> usize {
        self.pieces.iter().filter_map(Poly::degree).max().unwrap_or(0)
    }

    pub(crate) fn locate(&self, x: &Rational) -> Result<Locus> {
        if x < self.a() || x > self.b() {
            return Err(Error::OutOfDomain { x: x.clone(), a: self.a().clone(), b: self.b().clone() });
        }
        Ok(match self.breakpoints.binary_search(x) {
            Ok(i) => Locus::Breakpoint(i),
            Err(j) => Locus::Piece(j - 1),
        })
    }

    /// Point value at a breakpoint, piece value elsewhere.
    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        Ok(match self.locate(x)? {
            Locus::Breakpoint(i) => self.values[i].clone(),
            Locus::Piece(j) => self.pieces[j].eval(x),
        })
    }

    /// `f(x-)`, with `f(a-) = f(a)`.
    pub fn limit_left(&self, x: &Rational) -> Result<Rational> {
        Ok(match self.locate(x)? {
            Locus::Breakpoint(0) => self.values[0].clone(),
            Locus::Breakpoint(i) => self.pieces[i - 1].eval(x),
            Locus::Piece(j) => self.pieces[j].eval(x),
        })
    }

    /// `f(x+)`, with `f(b+) = f(b)`.
    pub fn limit_right(&self, x: &Rational) -> Result<Rational> {
        let last = self.breakpoints.len() - 1;
        Ok(match self.locate(x)? {
            Locus::Breakpoint(i) if i == last => self.values[last].clone(),
            Locus::Breakpoint(i) => self.pieces[i].eval(x),
            Locus::Piece(j) => self.pieces[j].eval(x),
        })
    }

    /// Breakpoints where the point value differs from a one-sided limit.
    pub fn discontinuities(&self) -> Vec<Discontinuity> {
        self.breakpoints
            .iter()
            .map(|x| {
                let v = self.eval(x).unwrap();
                Discontinuity {
                    x: x.clone(),
                    left_gap: &v - self.limit_left(x).unwrap(),
                    right_gap: self.limit_right(x).unwrap() - &v,
                }
            })
            .filter(|d| !d.left_gap.is_zero() || !d.right_gap.is_zero())
            .collect()
    }

    pub fn is_continuous(&self) -> bool {
        self.discontinuities().is_empty()
    }

    /// Same function with extra breakpoints inserted.
    pub fn refine(&self, extra: impl IntoIterator<Item = Rational>) -> PiecewiseFn {
        let p = self.partition().refine(extra);
        self.on_partition(&p)
    }

    /// Re-expresses `self` on a partition that contains all its breakpoints.
    fn on_partition(&self, p: &Partition) -> PiecewiseFn {
        let values = p.points().iter().map(|x| self.eval(x).unwrap()).collect();
        let pieces = p
            .intervals()
            .map(|(l, r)| match self.locate(&midpoint(l, r)).unwrap() {
                Locus::Piece(j) => self.pieces[j].clone(),
                Locus::Breakpoint(_) => unreachable!("partition refines the breakpoints"),
            })
            .collect();
        PiecewiseFn { breakpoints: p.points().to_vec(), pieces, values }
    }

    /// Drops interior breakpoints where nothing changes.
    pub fn simplify(&self) -> PiecewiseFn {
        let mut bps = vec![self.breakpoints[0].clone()];
        let mut vals = vec![self.values[0].clone()];
        let mut pieces: Vec<Poly> = vec![self.pieces[0].clone()];
        for i in 1..self.breakpoints.len() {
            let x = &self.breakpoints[i];
            let last = pieces.last().unwrap();
            let removable = i < self.pieces.len()
                && self.pieces[i] == *last
                && last.eval(x) == self.values[i];
            if !removable {
                bps.push(x.clone());
                vals.push(self.values[i].clone());
                if i < self.pieces.len() {
                    pieces.push(self.pieces[i].clone());
                }
            }
        }
        PiecewiseFn { breakpoints: bps, pieces, values: vals }
    }

    fn check_same_domain(&self, other: &PiecewiseFn) -> Result<()> {
        if self.domain() != other.domain() {
            return Err(Error::domain_mismatch(self.domain(), other.domain()));
        }
        Ok(())
    }

    fn zip_with(
        &self,
        other: &PiecewiseFn,
        piece: impl Fn(&Poly, &Poly) -> Poly,
        value: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<PiecewiseFn> {
        self.check_same_domain(other)?;
        let p = common_refinement(&self.partition(), &other.partition())?;
        let f = self.on_partition(&p);
        let g = other.on_partition(&p);
        let pieces = f.pieces.iter().zip(&g.pieces).map(|(x, y)| piece(x, y)).collect();
        let values = f.values.iter().zip(&g.values).map(|(x, y)| value(x, y)).collect();
        Ok(PiecewiseFn { breakpoints: f.breakpoints, pieces, values }.simplify())
    }

    pub fn add(&self, other: &PiecewiseFn) -> Result<PiecewiseFn> {
        self.zip_with(other, |x, y| x + y, |x, y| x + y)
    }

    pub fn sub(&self, other: &PiecewiseFn) -> Result<PiecewiseFn> {
        self.zip_with(other, |x, y| x - y, |x, y| x - y)
    }

    /// Pointwise product, point values included. The result may exceed the
    /// degree cap; callers building user-facing functions re-check it.
    pub fn mul(&self, other: &PiecewiseFn) -> Result<PiecewiseFn> {
        self.zip_with(other, |x, y| x * y, |x, y| x * y)
    }

    pub fn scale(&self, r: &Rational) -> PiecewiseFn {
        PiecewiseFn {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(|p| p.scale(r)).collect(),
            values: self.values.iter().map(|v| v * r).collect(),
        }
        .simplify()
    }

    pub fn neg(&self) -> PiecewiseFn {
        self.scale(&int(-1))
    }

    /// Adds a constant everywhere.
    pub fn shift(&self, c: &Rational) -> PiecewiseFn {
        PiecewiseFn {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(|p| p + &Poly::constant(c.clone())).collect(),
            values: self.values.iter().map(|v| v + c).collect(),
        }
    }

    /// Restriction to `[c, d]`; the new endpoints take `f(c)` and `f(d)`.
    pub fn restrict(&self, c: &Rational, d: &Rational) -> Result<PiecewiseFn> {
        if c >= d {
            return Err(Error::InvalidPiecewise(format!("empty restriction [{c}, {d}]")));
        }
        if c < self.a() || d > self.b() {
            let out = if c < self.a() { c } else { d };
            return Err(Error::OutOfDomain { x: out.clone(), a: self.a().clone(), b: self.b().clone() });
        }
        let refined = self.refine([c.clone(), d.clone()]);
        let lo = refined.breakpoints.binary_search(c).unwrap();
        let hi = refined.breakpoints.binary_search(d).unwrap();
        Ok(PiecewiseFn {
            breakpoints: refined.breakpoints[lo..=hi].to_vec(),
            pieces: refined.pieces[lo..hi].to_vec(),
            values: refined.values[lo..=hi].to_vec(),
        })
    }

    /// `max(f, 0)`. Pieces are split at rational sign changes; an irrational
    /// crossing cannot be represented and is reported as
    /// [`Error::IrrationalRoot`].
    pub fn pos_part(&self) -> Result<PiecewiseFn> {
        let mut cuts = Vec::new();
        for ((l, r), p) in self.partition().intervals().zip(&self.pieces) {
            let sc = sign_changes(p, l, r);
            if sc.irrational_crossing {
                return Err(Error::IrrationalRoot { lo: l.clone(), hi: r.clone() });
            }
            cuts.extend(sc.rational);
        }
        let f = self.refine(cuts);
        let pieces = f
            .partition()
            .intervals()
            .zip(&f.pieces)
            .map(|((l, r), p)| {
                if p.eval(&midpoint(l, r)).is_negative() {
                    Poly::zero()
                } else {
                    p.clone()
                }
            })
            .collect();
        let values = f
            .values
            .iter()
            .map(|v| if v.is_negative() { Rational::zero() } else { v.clone() })
            .collect();
        Ok(PiecewiseFn { breakpoints: f.breakpoints, pieces, values }.simplify())
    }

    /// `max(-f, 0)`, so that `f = f⁺ - f⁻`.
    pub fn neg_part(&self) -> Result<PiecewiseFn> {
        self.neg().pos_part()
    }

    pub fn abs(&self) -> Result<PiecewiseFn> {
        self.pos_part()?.add(&self.neg_part()?)
    }

    /// Bounds for `f` over the open interval `(l, r)`, including point
    /// values at breakpoints strictly inside it. The bounds overshoot the
    /// true range by at most `width`.
    pub fn range_open(&self, l: &Rational, r: &Rational, width: &Rational) -> (Rational, Rational) {
        RangeOracle::new(self, width).range_open(l, r)
    }

    /// Bounds for `f` over the closed interval `[l, r]`.
    pub fn range_closed(&self, l: &Rational, r: &Rational, width: &Rational) -> (Rational, Rational) {
        let (mut m, mut big) = self.range_open(l, r, width);
        for x in [l, r] {
            let v = self.eval(x).expect("endpoint inside domain");
            if v < m {
                m = v.clone();
            }
            if v > big {
                big = v;
            }
        }
        (m, big)
    }

    /// Upper bound on `sup |f|`.
    pub fn sup_abs(&self) -> Rational {
        let (m, big) = self.range_closed(self.a(), self.b(), &Rational::zero());
        if m.abs() > big.abs() {
            m.abs()
        } else {
            big.abs()
        }
    }

    /// Best-fit bracketing step functions on `p`: open-interval upper and
    /// lower bounds on each subinterval (outer bounds within `width`), and
    /// `f`'s own values at the partition points.
    pub fn best_fit_steps(&self, p: &Partition, width: &Rational) -> Result<(StepFn, StepFn)> {
        if p.a() != self.a() || p.b() != self.b() {
            return Err(Error::domain_mismatch(self.domain(), (p.a(), p.b())));
        }
        let values: Vec<Rational> = p.points().iter().map(|x| self.eval(x).unwrap()).collect();
        let (lower, upper): (Vec<Rational>, Vec<Rational>) =
            p.intervals().map(|(l, r)| self.range_open(l, r, width)).unzip();
        let u = StepFn::new(p.points().to_vec(), upper, values.clone())?;
        let v = StepFn::new(p.points().to_vec(), lower, values)?;
        Ok((u, v))
    }
}

/// A turning point of one piece, found once and reused for every range
/// query on that piece.
#[derive(Debug, Clone)]
enum Turn {
    Exact { x: Rational, v: Rational },
    /// Irrational turning point inside `(lo, hi)`; the piece stays within
    /// `[min, max]` there.
    Boxed { lo: Rational, hi: Rational, min: Rational, max: Rational },
}

/// Range bounds for many subintervals of one function.
///
/// Every bound overshoots the true range by at most `width` in total.
#[derive(Debug, Clone)]
pub struct RangeOracle<'a> {
    f: &'a PiecewiseFn,
    turns: Vec<Vec<Turn>>,
}

impl<'a> RangeOracle<'a> {
    pub fn new(f: &'a PiecewiseFn, width: &Rational) -> Self {
        let slack = if width.is_positive() {
            width / int(4)
        } else {
            crate::numerics::pow2_neg(crate::numerics::EXACT_FALLBACK_SLACK_BITS)
        };
        let turns = f
            .breakpoints
            .windows(2)
            .zip(&f.pieces)
            .map(|(w, p)| {
                if p.is_constant() {
                    return Vec::new();
                }
                let lip = p.lipschitz_bound(&w[0], &w[1]);
                let box_width = &slack / &lip;
                crate::numerics::real_roots(&p.derivative(), &w[0], &w[1], &box_width)
                    .into_iter()
                    .map(|root| match root {
                        crate::numerics::Root::Exact(x) => Turn::Exact { v: p.eval(&x), x },
                        crate::numerics::Root::Isolated { lo, hi } => {
                            let v = p.eval(&lo);
                            let spread = &lip * (&hi - &lo);
                            Turn::Boxed { min: &v - &spread, max: &v + &spread, lo, hi }
                        }
                    })
                    .collect()
            })
            .collect();
        RangeOracle { f, turns }
    }

    /// Bounds over the open interval `(l, r)`, including point values at
    /// breakpoints strictly inside it.
    pub fn range_open(&self, l: &Rational, r: &Rational) -> (Rational, Rational) {
        let f = self.f;
        let first = match f.breakpoints.binary_search(l) {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        };
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        let mut take = |m: &Rational, big: &Rational| {
            if lo.as_ref().is_none_or(|v| m < v) {
                lo = Some(m.clone());
            }
            if hi.as_ref().is_none_or(|v| big > v) {
                hi = Some(big.clone());
            }
        };
        for j in first..f.pieces.len() {
            let pl = &f.breakpoints[j];
            if pl >= r {
                break;
            }
            let pr = &f.breakpoints[j + 1];
            let ol = if pl > l { pl } else { l };
            let or = if pr < r { pr } else { r };
            if ol >= or {
                continue;
            }
            let p = &f.pieces[j];
            for x in [ol, or] {
                let v = p.eval(x);
                take(&v, &v);
            }
            for t in &self.turns[j] {
                match t {
                    Turn::Exact { x, v } if x > ol && x < or => take(v, v),
                    Turn::Boxed { lo: bl, hi: bh, min, max } if bl < or && bh > ol => take(min, max),
                    _ => {}
                }
            }
            if pl > l {
                let v = &f.values[j];
                take(v, v);
            }
        }
        (lo.expect("non-empty interval"), hi.expect("non-empty interval"))
    }
}

impl fmt::Display for PiecewiseFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "piecewise on [{}, {}] {{ ", self.a(), self.b())?;
        for (i, x) in self.breakpoints.iter().enumerate() {
            if i > 0 {
                write!(f, "; ({}, {}): {}; ", self.breakpoints[i - 1], x, self.pieces[i - 1])?;
            }
            write!(f, "at {}: {}", x, self.values[i])?;
        }
        write!(f, " }}")
    }
}

impl fmt::Debug for PiecewiseFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An integrand: a piecewise polynomial, or the Dirichlet function (1 on
/// rationals, 0 elsewhere) on a domain.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Function {
    Piecewise(PiecewiseFn),
    Dirichlet { a: Rational, b: Rational },
}

impl Function {
    pub fn dirichlet(a: Rational, b: Rational) -> Self {
        Function::Dirichlet { a, b }
    }

    pub fn domain(&self) -> (&Rational, &Rational) {
        match self {
            Function::Piecewise(f) => f.domain(),
            Function::Dirichlet { a, b } => (a, b),
        }
    }

    pub fn is_dirichlet(&self) -> bool {
        matches!(self, Function::Dirichlet { .. })
    }

    pub fn as_piecewise(&self) -> Result<&PiecewiseFn> {
        match self {
            Function::Piecewise(f) => Ok(f),
            Function::Dirichlet { .. } => {
                Err(Error::Unsupported("the Dirichlet function has no polynomial pieces".into()))
            }
        }
    }

    /// Dirichlet evaluates to 1 at every (necessarily rational) input.
    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        match self {
            Function::Piecewise(f) => f.eval(x),
            Function::Dirichlet { a, b } => {
                if x < a || x > b {
                    Err(Error::OutOfDomain { x: x.clone(), a: a.clone(), b: b.clone() })
                } else {
                    Ok(int(1))
                }
            }
        }
    }

    pub fn limit_left(&self, x: &Rational) -> Result<Rational> {
        match self {
            Function::Piecewise(f) => f.limit_left(x),
            Function::Dirichlet { .. } => Err(Error::Unsupported("Dirichlet has no one-sided limits".into())),
        }
    }

    pub fn limit_right(&self, x: &Rational) -> Result<Rational> {
        match self {
            Function::Piecewise(f) => f.limit_right(x),
            Function::Dirichlet { .. } => Err(Error::Unsupported("Dirichlet has no one-sided limits".into())),
        }
    }

    pub fn restrict(&self, c: &Rational, d: &Rational) -> Result<Function> {
        match self {
            Function::Piecewise(f) => f.restrict(c, d).map(Function::Piecewise),
            Function::Dirichlet { a, b } => {
                if c < a || d > b || c >= d {
                    Err(Error::InvalidPiecewise(format!("cannot restrict [{a}, {b}] to [{c}, {d}]")))
                } else {
                    Ok(Function::Dirichlet { a: c.clone(), b: d.clone() })
                }
            }
        }
    }
}

impl From<PiecewiseFn> for Function {
    fn from(f: PiecewiseFn) -> Self {
        Function::Piecewise(f)
    }
}

impl From<StepFn> for Function {
    fn from(s: StepFn) -> Self {
        Function::Piecewise(s.into_piecewise())
    }
}

impl fmt::Display for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Function::Piecewise(p) => write!(f, "{p}"),
            Function::Dirichlet { a, b } => write!(f, "dirichlet on [{a}, {b}]"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    fn h(c: Rational) -> PiecewiseFn {
        PiecewiseFn::heaviside(int(-1), int(1), c, int(0)).unwrap()
    }

    fn square01() -> PiecewiseFn {
        PiecewiseFn::from_poly(int(0), int(1), Poly::monomial(2)).unwrap()
    }

    #[test]
    fn eval_point_values_and_pieces() {
        let a = rat(3, 7);
        assert_eq!(h(a.clone()).eval(&int(0)).unwrap(), a);
        assert_eq!(square01().eval(&rat(1, 2)).unwrap(), rat(1, 4));
        assert_eq!(Function::dirichlet(int(0), int(1)).eval(&rat(1, 3)).unwrap(), int(1));
        assert!(matches!(square01().eval(&int(2)), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn one_sided_limits() {
        let f = h(rat(1, 2));
        assert_eq!(f.limit_right(&int(0)).unwrap(), int(1));
        assert_eq!(f.limit_left(&int(0)).unwrap(), int(0));
        // endpoint conventions
        let g = PiecewiseFn::new(vec![int(0), int(1)], vec![Poly::constant(int(5))], vec![int(2), int(3)]).unwrap();
        assert_eq!(g.limit_left(&int(0)).unwrap(), int(2));
        assert_eq!(g.limit_right(&int(1)).unwrap(), int(3));
        // polynomial continuity from the left
        let k = PiecewiseFn::new(
            vec![int(0), int(1), int(2)],
            vec![Poly::monomial(2), Poly::zero()],
            vec![int(0), int(7), int(0)],
        )
        .unwrap();
        assert_eq!(k.limit_left(&int(1)).unwrap(), int(1));
        assert!(Function::dirichlet(int(0), int(1)).limit_left(&rat(1, 2)).is_err());
    }

    #[test]
    fn discontinuity_gaps() {
        assert!(square01().discontinuities().is_empty());
        let a = rat(1, 3);
        let d = h(a.clone()).discontinuities();
        assert_eq!(d, vec![Discontinuity { x: int(0), left_gap: a.clone(), right_gap: int(1) - &a }]);
        let right_only = h(int(0)).discontinuities();
        assert_eq!(right_only[0].left_gap, int(0));
        assert_eq!(right_only[0].right_gap, int(1));
    }

    #[test]
    fn best_fit_linear() {
        let f = PiecewiseFn::identity(int(0), int(1)).unwrap();
        let p = Partition::new(vec![int(0), rat(1, 2), int(1)]).unwrap();
        let (u, v) = f.best_fit_steps(&p, &rat(1, 1000)).unwrap();
        assert_eq!(u.constants(), vec![rat(1, 2), int(1)]);
        assert_eq!(v.constants(), vec![int(0), rat(1, 2)]);
        assert_eq!(u.values(), &[int(0), rat(1, 2), int(1)]);
        assert_eq!(v.values(), u.values());
    }

    #[test]
    fn best_fit_constant_and_square() {
        let c = PiecewiseFn::constant(int(0), int(1), rat(5, 2)).unwrap();
        let p = Partition::uniform(&int(0), &int(1), 3).unwrap();
        let (u, v) = c.best_fit_steps(&p, &rat(1, 100)).unwrap();
        assert_eq!(u, v);
        assert!(u.constants().iter().all(|k| *k == rat(5, 2)));

        let sq = PiecewiseFn::from_poly(int(-1), int(1), Poly::monomial(2)).unwrap();
        let p = Partition::new(vec![int(-1), int(0), int(1)]).unwrap();
        let (u, v) = sq.best_fit_steps(&p, &rat(1, 100)).unwrap();
        assert!(v.constants()[0] <= int(0));
        assert!(u.constants()[0] >= int(1));
    }

    #[test]
    fn best_fit_sees_interior_point_values() {
        // 0 on (0,1) but value 5 at 1/2
        let f = PiecewiseFn::new(
            vec![int(0), rat(1, 2), int(1)],
            vec![Poly::zero(), Poly::zero()],
            vec![int(0), int(5), int(0)],
        )
        .unwrap();
        let p = Partition::new(vec![int(0), int(1)]).unwrap();
        let (u, v) = f.best_fit_steps(&p, &Rational::zero()).unwrap();
        assert_eq!(u.constants(), vec![int(5)]);
        assert_eq!(v.constants(), vec![int(0)]);
    }

    #[test]
    fn positive_part() {
        let f = PiecewiseFn::from_poly(int(-1), int(1), Poly::x()).unwrap();
        let pp = f.pos_part().unwrap();
        assert_eq!(pp.breakpoints(), &[int(-1), int(0), int(1)]);
        assert_eq!(pp.pieces(), &[Poly::zero(), Poly::x()]);
        assert_eq!(pp.values(), &[int(0), int(0), int(1)]);

        let neg = PiecewiseFn::constant(int(0), int(1), int(-1)).unwrap();
        assert_eq!(neg.pos_part().unwrap(), PiecewiseFn::constant(int(0), int(1), int(0)).unwrap());

        let s = StepFn::new(vec![int(-1), int(0), int(1)], vec![int(-2), int(3)], vec![int(-2), int(-2), int(3)])
            .unwrap();
        let sp = s.as_piecewise().pos_part().unwrap();
        assert!(sp.is_step());
        assert_eq!(sp.pieces(), &[Poly::zero(), Poly::constant(int(3))]);

        let irr = PiecewiseFn::from_poly(int(0), int(2), Poly::from_coeffs(vec![int(-2), int(0), int(1)])).unwrap();
        assert!(matches!(irr.pos_part(), Err(Error::IrrationalRoot { .. })));
    }

    #[test]
    fn algebra() {
        let x = PiecewiseFn::identity(int(0), int(1)).unwrap();
        let one_minus = PiecewiseFn::from_poly(int(0), int(1), Poly::from_coeffs(vec![int(1), int(-1)])).unwrap();
        assert_eq!(x.add(&one_minus).unwrap(), PiecewiseFn::constant(int(0), int(1), int(1)).unwrap());
        let a = rat(2, 5);
        let scaled = h(a.clone()).scale(&int(2));
        assert_eq!(scaled.eval(&int(0)).unwrap(), a * int(2));
        let other = PiecewiseFn::identity(int(0), int(2)).unwrap();
        assert!(matches!(x.add(&other), Err(Error::DomainMismatch { .. })));
    }

    #[test]
    fn restriction_keeps_endpoint_values() {
        let f = h(rat(1, 4));
        let left = f.restrict(&int(-1), &int(0)).unwrap();
        assert_eq!(left.domain(), (&int(-1), &int(0)));
        assert_eq!(left.eval(&int(0)).unwrap(), rat(1, 4));
        assert_eq!(left.limit_right(&int(0)).unwrap(), rat(1, 4));
        let mid = f.restrict(&rat(-1, 2), &rat(1, 2)).unwrap();
        assert_eq!(mid.breakpoints(), &[rat(-1, 2), int(0), rat(1, 2)]);
    }
}
