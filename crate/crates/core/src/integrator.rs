//! Bounded-variation integrators in saltus form.
//!
//! An [`Integrator`] on `[a, b]` is `α = G + S_L + S_R` where `G` is a
//! continuous piecewise polynomial with monotone pieces, `S_L` is a sum of
//! left-continuous jumps `a_i·H_0(x - x_i)` and `S_R` a sum of
//! right-continuous jumps `b_i·H_1(x - y_i)`. A left jump at `b` or a right
//! jump at `a` would be invisible on the domain and is never stored.
//!
//! A saltus part may be a truncation of an infinite series; its
//! `tail_bound` bounds the ℓ¹ mass of the omitted terms. Everything else in
//! this module works with the truncation itself.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{int, midpoint, sign_changes, Rational};
use crate::pwfn::{Partition, PiecewiseFn};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chirality {
    /// Terms `w·H_0(x - loc)`: value at `loc` equals the left limit.
    Left,
    /// Terms `w·H_1(x - loc)`: value at `loc` equals the right limit.
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SaltusPart {
    chirality: Chirality,
    terms: Vec<(Rational, Rational)>,
    tail_bound: Rational,
}

impl SaltusPart {
    /// Terms must have strictly increasing locations and nonzero weights.
    pub fn new(chirality: Chirality, terms: Vec<(Rational, Rational)>, tail_bound: Rational) -> Result<Self> {
        if tail_bound.is_negative() {
            return Err(Error::InvalidIntegrator("tail bound must be nonnegative".into()));
        }
        if let Some(w) = terms.windows(2).find(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidIntegrator(format!(
                "saltus locations must be strictly increasing ({} then {})",
                w[0].0, w[1].0
            )));
        }
        if let Some((loc, _)) = terms.iter().find(|(_, w)| w.is_zero()) {
            return Err(Error::InvalidIntegrator(format!("zero saltus weight at {loc}")));
        }
        Ok(SaltusPart { chirality, terms, tail_bound })
    }

    pub fn empty(chirality: Chirality) -> Self {
        SaltusPart { chirality, terms: Vec::new(), tail_bound: Rational::zero() }
    }

    /// Sorts, merges repeated locations and drops zero weights.
    fn merged(chirality: Chirality, mut terms: Vec<(Rational, Rational)>, tail_bound: Rational) -> Self {
        terms.sort_by(|x, y| x.0.cmp(&y.0));
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(terms.len());
        for (loc, w) in terms {
            match out.last_mut() {
                Some(last) if last.0 == loc => last.1 += w,
                _ => out.push((loc, w)),
            }
        }
        out.retain(|(_, w)| !w.is_zero());
        SaltusPart { chirality, terms: out, tail_bound }
    }

    pub fn chirality(&self) -> Chirality {
        self.chirality
    }

    pub fn terms(&self) -> &[(Rational, Rational)] {
        &self.terms
    }

    pub fn tail_bound(&self) -> &Rational {
        &self.tail_bound
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ |w|` over the stored terms.
    pub fn mass(&self) -> Rational {
        self.terms.iter().map(|(_, w)| w.abs()).sum()
    }

    fn map_weights(&self, f: impl Fn(&Rational) -> Rational, tail: Rational) -> SaltusPart {
        let terms = self.terms.iter().map(|(l, w)| (l.clone(), f(w))).collect();
        SaltusPart::merged(self.chirality, terms, tail)
    }

    /// Sum of weights whose location satisfies `keep`.
    fn sum_where(&self, keep: impl Fn(&Rational) -> bool) -> Rational {
        self.terms.iter().filter(|(l, _)| keep(l)).map(|(_, w)| w.clone()).sum()
    }
}

/// Subsets of `[a, b]` that can be measured.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Set {
    /// `(c, d)`
    Open(Rational, Rational),
    /// `[c, d]`
    Closed(Rational, Rational),
    /// `(c, d]`
    OpenClosed(Rational, Rational),
    /// `[c, d)`
    ClosedOpen(Rational, Rational),
    Point(Rational),
}

impl fmt::Display for Set {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Set::Open(c, d) => write!(f, "({c}, {d})"),
            Set::Closed(c, d) => write!(f, "[{c}, {d}]"),
            Set::OpenClosed(c, d) => write!(f, "({c}, {d}]"),
            Set::ClosedOpen(c, d) => write!(f, "[{c}, {d})"),
            Set::Point(c) => write!(f, "{{{c}}}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Integrator {
    continuous: PiecewiseFn,
    left: SaltusPart,
    right: SaltusPart,
}

impl Integrator {
    /// Validates and normalizes: `continuous` must have no jumps, its pieces
    /// are split at rational critical points, and the saltus parts must be
    /// reduced and inside the domain.
    pub fn new(continuous: PiecewiseFn, left: SaltusPart, right: SaltusPart) -> Result<Self> {
        if let Some(d) = continuous.discontinuities().first() {
            return Err(Error::InvalidIntegrator(format!("continuous part jumps at {}", d.x)));
        }
        if left.chirality != Chirality::Left || right.chirality != Chirality::Right {
            return Err(Error::InvalidIntegrator("saltus parts passed in the wrong order".into()));
        }
        let (a, b) = continuous.domain();
        for (loc, _) in left.terms.iter().chain(&right.terms) {
            if loc < a || loc > b {
                return Err(Error::OutOfDomain { x: loc.clone(), a: a.clone(), b: b.clone() });
            }
        }
        if left.terms.last().is_some_and(|(l, _)| l == b) {
            return Err(Error::InvalidIntegrator(format!("left-continuous jump at the right endpoint {b}")));
        }
        if right.terms.first().is_some_and(|(l, _)| l == a) {
            return Err(Error::InvalidIntegrator(format!("right-continuous jump at the left endpoint {a}")));
        }
        let continuous = monotone_pieces(&continuous)?;
        Ok(Integrator { continuous, left, right })
    }

    /// Splits a piecewise function into continuous part and reduced jumps.
    pub fn from_piecewise(pw: &PiecewiseFn) -> Result<Self> {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for d in pw.discontinuities() {
            if !d.right_gap.is_zero() {
                left.push((d.x.clone(), d.right_gap));
            }
            if !d.left_gap.is_zero() {
                right.push((d.x, d.left_gap));
            }
        }
        let left = SaltusPart::new(Chirality::Left, left, Rational::zero())?;
        let right = SaltusPart::new(Chirality::Right, right, Rational::zero())?;
        let bps = pw.breakpoints();
        let pieces = bps
            .windows(2)
            .zip(pw.pieces())
            .map(|(w, p)| {
                let lo = &w[0];
                let jumps = left.sum_where(|l| l <= lo) + right.sum_where(|l| l <= lo);
                p - &crate::numerics::Poly::constant(jumps)
            })
            .collect();
        let values = bps
            .iter()
            .zip(pw.values())
            .map(|(x, v)| v - left.sum_where(|l| l < x) - right.sum_where(|l| l <= x))
            .collect();
        let g = PiecewiseFn::new_uncapped(bps.to_vec(), pieces, values)?.simplify();
        Integrator::new(g, left, right)
    }

    /// No continuous motion: only the given jumps, starting from 0.
    pub fn pure_saltus(a: Rational, b: Rational, left: SaltusPart, right: SaltusPart) -> Result<Self> {
        let g = PiecewiseFn::constant(a, b, Rational::zero())?;
        Integrator::new(g, left, right)
    }

    pub fn identity(a: Rational, b: Rational) -> Result<Self> {
        Integrator::new(
            PiecewiseFn::identity(a, b)?,
            SaltusPart::empty(Chirality::Left),
            SaltusPart::empty(Chirality::Right),
        )
    }

    /// `H_c(x - at)` as an integrator.
    pub fn heaviside(a: Rational, b: Rational, c: Rational, at: Rational) -> Result<Self> {
        Integrator::from_piecewise(&PiecewiseFn::heaviside(a, b, c, at)?)
    }

    pub fn a(&self) -> &Rational {
        self.continuous.a()
    }

    pub fn b(&self) -> &Rational {
        self.continuous.b()
    }

    pub fn domain(&self) -> (&Rational, &Rational) {
        self.continuous.domain()
    }

    pub fn continuous(&self) -> &PiecewiseFn {
        &self.continuous
    }

    pub fn left_saltus(&self) -> &SaltusPart {
        &self.left
    }

    pub fn right_saltus(&self) -> &SaltusPart {
        &self.right
    }

    /// Combined tail bound of both saltus parts.
    pub fn tail_bound(&self) -> Rational {
        &self.left.tail_bound + &self.right.tail_bound
    }

    pub fn is_continuous(&self) -> bool {
        self.left.is_empty() && self.right.is_empty()
    }

    /// All jumps as `(location, weight, chirality)`, ordered by location.
    pub fn jumps(&self) -> Vec<(Rational, Rational, Chirality)> {
        let mut out: Vec<_> = self
            .left
            .terms
            .iter()
            .map(|(l, w)| (l.clone(), w.clone(), Chirality::Left))
            .chain(self.right.terms.iter().map(|(l, w)| (l.clone(), w.clone(), Chirality::Right)))
            .collect();
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out
    }

    /// Breakpoints of the continuous part and jump locations, sorted.
    pub fn event_points(&self) -> Vec<Rational> {
        let mut pts: Vec<Rational> = self.continuous.breakpoints().to_vec();
        pts.extend(self.left.terms.iter().map(|(l, _)| l.clone()));
        pts.extend(self.right.terms.iter().map(|(l, _)| l.clone()));
        pts.sort();
        pts.dedup();
        pts
    }

    /// Jump locations only.
    pub fn jump_points(&self) -> Vec<Rational> {
        let mut pts: Vec<Rational> = self.jumps().into_iter().map(|(l, _, _)| l).collect();
        pts.dedup();
        pts
    }

    fn check(&self, x: &Rational) -> Result<()> {
        if x < self.a() || x > self.b() {
            return Err(Error::OutOfDomain { x: x.clone(), a: self.a().clone(), b: self.b().clone() });
        }
        Ok(())
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let g = self.continuous.eval(x)?;
        Ok(g + self.left.sum_where(|l| l < x) + self.right.sum_where(|l| l <= x))
    }

    /// `α(x+)`, with `α(b+) = α(b)`.
    pub fn limit_right(&self, x: &Rational) -> Result<Rational> {
        let g = self.continuous.eval(x)?;
        Ok(g + self.left.sum_where(|l| l <= x) + self.right.sum_where(|l| l <= x))
    }

    /// `α(x-)`, with `α(a-) = α(a)`.
    pub fn limit_left(&self, x: &Rational) -> Result<Rational> {
        let g = self.continuous.eval(x)?;
        Ok(g + self.left.sum_where(|l| l < x) + self.right.sum_where(|l| l < x))
    }

    /// The α-length `μ_α` of an interval or point, from one-sided limits.
    pub fn mu(&self, set: &Set) -> Result<Rational> {
        let ordered = |c: &Rational, d: &Rational, strict: bool| -> Result<()> {
            self.check(c)?;
            self.check(d)?;
            if c > d || (strict && c == d) {
                return Err(Error::InvalidPartition(format!("empty or reversed interval {set}")));
            }
            Ok(())
        };
        match set {
            Set::Open(c, d) => {
                ordered(c, d, true)?;
                Ok(self.limit_left(d)? - self.limit_right(c)?)
            }
            Set::Closed(c, d) => {
                ordered(c, d, false)?;
                Ok(self.limit_right(d)? - self.limit_left(c)?)
            }
            Set::OpenClosed(c, d) => {
                ordered(c, d, true)?;
                Ok(self.limit_right(d)? - self.limit_right(c)?)
            }
            Set::ClosedOpen(c, d) => {
                ordered(c, d, true)?;
                Ok(self.limit_left(d)? - self.limit_left(c)?)
            }
            Set::Point(c) => Ok(self.limit_right(c)? - self.limit_left(c)?),
        }
    }

    /// Classical length `α(d) - α(c)` from point values.
    pub fn mu_classical(&self, c: &Rational, d: &Rational) -> Result<Rational> {
        Ok(self.eval(d)? - self.eval(c)?)
    }

    /// Pieces of the continuous part are monotone, and every weight is
    /// nonnegative.
    pub fn is_increasing(&self) -> bool {
        let g = &self.continuous;
        let pieces_up = g.breakpoints().windows(2).zip(g.pieces()).all(|(w, p)| p.eval(&w[1]) >= p.eval(&w[0]));
        pieces_up && self.left.terms.iter().chain(&self.right.terms).all(|(_, w)| !w.is_negative())
    }

    /// `V(α, [a, x])` as an increasing integrator with `Vα(a) = 0`.
    pub fn variation(&self) -> Integrator {
        let g = &self.continuous;
        let bps = g.breakpoints();
        let mut values = vec![Rational::zero()];
        let mut pieces = Vec::with_capacity(g.pieces().len());
        for (w, p) in bps.windows(2).zip(g.pieces()) {
            let start = values.last().unwrap().clone();
            let rise = p.eval(&w[1]) - p.eval(&w[0]);
            let shifted = p - &crate::numerics::Poly::constant(p.eval(&w[0]));
            let piece = if rise.is_negative() { -&shifted } else { shifted };
            pieces.push(&piece + &crate::numerics::Poly::constant(start.clone()));
            values.push(start + rise.abs());
        }
        let vg = PiecewiseFn::new_uncapped(bps.to_vec(), pieces, values).expect("same breakpoints");
        Integrator {
            continuous: vg.simplify(),
            left: self.left.map_weights(|w| w.abs(), self.left.tail_bound.clone()),
            right: self.right.map_weights(|w| w.abs(), self.right.tail_bound.clone()),
        }
    }

    /// Total variation `Vα(b)` of the stored representation.
    pub fn total_variation(&self) -> Rational {
        let v = self.variation();
        v.eval(self.b()).expect("endpoint in domain")
    }

    /// `(Pα, Nα)` with `α = Pα - Nα + α(a)`, both increasing from 0.
    pub fn jordan(&self) -> (Integrator, Integrator) {
        let v = self.variation();
        let alpha_a = self.eval(self.a()).expect("endpoint in domain");
        let half = crate::numerics::rat(1, 2);
        let gv = v.continuous.clone();
        let g0 = self.continuous.shift(&-alpha_a);
        let gp = gv.add(&g0).expect("same domain").scale(&half);
        let gn = gv.sub(&g0).expect("same domain").scale(&half);
        let pos = |part: &SaltusPart| part.map_weights(|w| if w.is_positive() { w.clone() } else { Rational::zero() }, part.tail_bound.clone());
        let neg = |part: &SaltusPart| part.map_weights(|w| if w.is_negative() { -w } else { Rational::zero() }, part.tail_bound.clone());
        // The continuous parts stay piecewise monotone: on each piece they
        // are either constant or a shifted copy of ±G.
        let p = Integrator { continuous: gp, left: pos(&self.left), right: pos(&self.right) };
        let n = Integrator { continuous: gn, left: neg(&self.left), right: neg(&self.right) };
        (p, n)
    }

    /// Upper bound on `sup|α| + Vα(b)` for the series this represents:
    /// the truncation's norm plus twice the tail bound. Exact when there
    /// is no tail.
    pub fn bv_norm(&self) -> Rational {
        let mut sup = Rational::zero();
        for x in self.event_points() {
            for v in [self.eval(&x), self.limit_left(&x), self.limit_right(&x)] {
                let v = v.expect("event point in domain").abs();
                if v > sup {
                    sup = v;
                }
            }
        }
        sup + self.total_variation() + self.tail_bound() * int(2)
    }

    pub fn bv_distance(&self, other: &Integrator) -> Result<Rational> {
        Ok(self.sub(other)?.bv_norm())
    }

    fn check_same_domain(&self, other: &Integrator) -> Result<()> {
        if self.domain() != other.domain() {
            return Err(Error::domain_mismatch(self.domain(), other.domain()));
        }
        Ok(())
    }

    /// Pointwise sum. Tail bounds add. Can fail when the summed continuous
    /// part has an irrational turning point.
    pub fn add(&self, other: &Integrator) -> Result<Integrator> {
        self.check_same_domain(other)?;
        let g = self.continuous.add(&other.continuous)?;
        let join = |x: &SaltusPart, y: &SaltusPart| {
            let terms = x.terms.iter().chain(&y.terms).cloned().collect();
            SaltusPart::merged(x.chirality, terms, &x.tail_bound + &y.tail_bound)
        };
        Ok(Integrator {
            continuous: monotone_pieces(&g)?,
            left: join(&self.left, &other.left),
            right: join(&self.right, &other.right),
        })
    }

    pub fn scale(&self, r: &Rational) -> Integrator {
        let tail = |p: &SaltusPart| &p.tail_bound * r.abs();
        Integrator {
            continuous: self.continuous.scale(r),
            left: self.left.map_weights(|w| w * r, tail(&self.left)),
            right: self.right.map_weights(|w| w * r, tail(&self.right)),
        }
    }

    pub fn neg(&self) -> Integrator {
        self.scale(&int(-1))
    }

    pub fn sub(&self, other: &Integrator) -> Result<Integrator> {
        self.add(&other.neg())
    }

    /// Adds a constant.
    pub fn shift(&self, c: &Rational) -> Integrator {
        Integrator { continuous: self.continuous.shift(c), left: self.left.clone(), right: self.right.clone() }
    }

    /// The same function viewed on `[c, d]`. Jumps at or before `c` that
    /// are already felt at `c` fold into the continuous part; the tail
    /// bound is kept as is.
    pub fn restrict(&self, c: &Rational, d: &Rational) -> Result<Integrator> {
        let offset = self.left.sum_where(|l| l < c) + self.right.sum_where(|l| l <= c);
        let g = self.continuous.restrict(c, d)?.shift(&offset);
        let left: Vec<_> = self.left.terms.iter().filter(|(l, _)| l >= c && l < d).cloned().collect();
        let right: Vec<_> = self.right.terms.iter().filter(|(l, _)| l > c && l <= d).cloned().collect();
        Integrator::new(
            g,
            SaltusPart::new(Chirality::Left, left, self.left.tail_bound.clone())?,
            SaltusPart::new(Chirality::Right, right, self.right.tail_bound.clone())?,
        )
    }

    /// Same one-sided limits, but every interior value replaced by the
    /// left limit. Fails when α jumps into `b`.
    pub fn normalize_left(&self) -> Result<Integrator> {
        if let Some((l, _)) = self.right.terms.last().filter(|(l, _)| l == self.b()) {
            return Err(Error::EndpointDiscontinuity(l.clone()));
        }
        let terms = self.left.terms.iter().chain(&self.right.terms).cloned().collect();
        let tail = self.tail_bound();
        Ok(Integrator {
            continuous: self.continuous.clone(),
            left: SaltusPart::merged(Chirality::Left, terms, tail),
            right: SaltusPart::empty(Chirality::Right),
        })
    }

    /// Mirror image of [`Integrator::normalize_left`]: values become right
    /// limits. Fails when α jumps right after `a`.
    pub fn normalize_right(&self) -> Result<Integrator> {
        if let Some((l, _)) = self.left.terms.first().filter(|(l, _)| l == self.a()) {
            return Err(Error::EndpointDiscontinuity(l.clone()));
        }
        let terms = self.left.terms.iter().chain(&self.right.terms).cloned().collect();
        let tail = self.tail_bound();
        Ok(Integrator {
            continuous: self.continuous.clone(),
            left: SaltusPart::empty(Chirality::Left),
            right: SaltusPart::merged(Chirality::Right, terms, tail),
        })
    }

    /// Largest α-length of an open subinterval of `p`.
    pub fn alpha_mesh(&self, p: &Partition) -> Result<Rational> {
        if !self.is_increasing() {
            return Err(Error::NotIncreasing);
        }
        let mut best = Rational::zero();
        for (l, r) in p.intervals() {
            let m = self.mu(&Set::Open(l.clone(), r.clone()))?;
            if m > best {
                best = m;
            }
        }
        Ok(best)
    }

    /// α as a plain piecewise function. Only meaningful for an exact
    /// representation, so a nonzero tail is refused.
    pub fn to_piecewise(&self) -> Result<PiecewiseFn> {
        if !self.tail_bound().is_zero() {
            return Err(Error::Unsupported("integrator with a saltus tail has no finite form".into()));
        }
        let g = self.continuous.refine(self.jump_points());
        let bps = g.breakpoints().to_vec();
        let pieces = bps
            .windows(2)
            .zip(g.pieces())
            .map(|(w, p)| {
                let lo = &w[0];
                let k = self.left.sum_where(|l| l <= lo) + self.right.sum_where(|l| l <= lo);
                p + &crate::numerics::Poly::constant(k)
            })
            .collect();
        let values = bps.iter().map(|x| self.eval(x).unwrap()).collect();
        Ok(PiecewiseFn::new_uncapped(bps, pieces, values)?.simplify())
    }
}

/// Splits pieces at the rational turning points of `g`.
fn monotone_pieces(g: &PiecewiseFn) -> Result<PiecewiseFn> {
    let mut cuts = Vec::new();
    for (w, p) in g.breakpoints().windows(2).zip(g.pieces()) {
        let sc = sign_changes(&p.derivative(), &w[0], &w[1]);
        if sc.irrational_crossing {
            return Err(Error::NonMonotonePiece { lo: w[0].clone(), hi: w[1].clone() });
        }
        cuts.extend(sc.rational);
    }
    Ok(if cuts.is_empty() { g.clone() } else { g.refine(cuts) })
}

impl fmt::Display for Integrator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.continuous)?;
        for (name, part) in [("left", &self.left), ("right", &self.right)] {
            if part.terms.is_empty() && part.tail_bound.is_zero() {
                continue;
            }
            write!(f, " + saltus {name} on [{}, {}] {{ ", self.a(), self.b())?;
            for (i, (l, w)) in part.terms.iter().enumerate() {
                if i > 0 {
                    write!(f, "; ")?;
                }
                write!(f, "{l}: {w}")?;
            }
            write!(f, " }}")?;
            if !part.tail_bound.is_zero() {
                write!(f, " tail {}", part.tail_bound)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Integrator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Integrator({self})")
    }
}

/// Midpoint of the one-sided limits, `(α(t+) + α(t-)) / 2`.
pub(crate) fn limit_midpoint(alpha: &Integrator, t: &Rational) -> Result<Rational> {
    Ok(midpoint(&alpha.limit_right(t)?, &alpha.limit_left(t)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, Poly};

    fn x_plus_h1_half() -> PiecewiseFn {
        PiecewiseFn::new(
            vec![int(0), rat(1, 2), int(1)],
            vec![Poly::x(), &Poly::x() + &Poly::constant(int(1))],
            vec![int(0), rat(3, 2), int(2)],
        )
        .unwrap()
    }

    #[test]
    fn splits_jumps_from_continuous_part() {
        let alpha = Integrator::from_piecewise(&x_plus_h1_half()).unwrap();
        assert_eq!(alpha.continuous(), &PiecewiseFn::identity(int(0), int(1)).unwrap());
        assert!(alpha.left_saltus().is_empty());
        assert_eq!(alpha.right_saltus().terms(), &[(rat(1, 2), int(1))]);

        let a = rat(1, 3);
        let h = Integrator::heaviside(int(-1), int(1), a.clone(), int(0)).unwrap();
        assert_eq!(h.left_saltus().terms(), &[(int(0), int(1) - &a)]);
        assert_eq!(h.right_saltus().terms(), &[(int(0), a)]);
        assert!(h.continuous().pieces().iter().all(Poly::is_zero));
    }

    #[test]
    fn alpha_lengths() {
        let h = Integrator::heaviside(int(-1), int(1), int(1), int(0)).unwrap();
        assert_eq!(h.mu(&Set::Point(int(0))).unwrap(), int(1));
        assert_eq!(h.mu(&Set::Open(int(0), int(1))).unwrap(), int(0));
        assert_eq!(h.mu(&Set::Open(int(-1), int(0))).unwrap(), int(0));
        let id = Integrator::identity(int(0), int(1)).unwrap();
        assert_eq!(id.mu(&Set::Open(rat(1, 4), rat(3, 4))).unwrap(), rat(1, 2));
        let c = Integrator::from_piecewise(&PiecewiseFn::constant(int(0), int(1), int(3)).unwrap()).unwrap();
        assert_eq!(c.mu(&Set::Closed(int(0), int(1))).unwrap(), int(0));
        assert!(matches!(id.mu(&Set::Point(int(2))), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn classical_lengths() {
        let b = rat(2, 7);
        let h = Integrator::heaviside(int(-1), int(1), b.clone(), int(0)).unwrap();
        assert_eq!(h.mu_classical(&int(-1), &int(0)).unwrap(), b.clone());
        assert_eq!(h.mu_classical(&int(0), &int(1)).unwrap(), int(1) - b);
    }

    #[test]
    fn variation_and_jordan() {
        let neg_x = Integrator::from_piecewise(&PiecewiseFn::from_poly(int(0), int(1), -&Poly::x()).unwrap()).unwrap();
        let v = neg_x.variation();
        assert_eq!(v.continuous(), &PiecewiseFn::identity(int(0), int(1)).unwrap());
        let (p, n) = neg_x.jordan();
        assert_eq!(p.continuous().pieces(), &[Poly::zero()]);
        assert_eq!(n.continuous(), &PiecewiseFn::identity(int(0), int(1)).unwrap());

        // x - 2·H_1(x - 1/2)
        let pw = PiecewiseFn::new(
            vec![int(0), rat(1, 2), int(1)],
            vec![Poly::x(), &Poly::x() - &Poly::constant(int(2))],
            vec![int(0), rat(-3, 2), int(-1)],
        )
        .unwrap();
        let alpha = Integrator::from_piecewise(&pw).unwrap();
        let v = alpha.variation();
        assert_eq!(v.right_saltus().terms(), &[(rat(1, 2), int(2))]);
        assert_eq!(v.total_variation(), int(3));
        let (p, n) = alpha.jordan();
        assert_eq!(p.continuous(), &PiecewiseFn::identity(int(0), int(1)).unwrap());
        assert!(p.right_saltus().is_empty());
        assert_eq!(n.right_saltus().terms(), &[(rat(1, 2), int(2))]);
        assert!(p.is_increasing() && n.is_increasing());
    }

    #[test]
    fn bv_norms() {
        let h = Integrator::heaviside(int(-1), int(1), int(1), int(0)).unwrap();
        assert_eq!(h.bv_norm(), int(2));
        let zero = Integrator::from_piecewise(&PiecewiseFn::constant(int(0), int(1), int(0)).unwrap()).unwrap();
        assert_eq!(zero.bv_norm(), int(0));
        assert_eq!(Integrator::identity(int(0), int(1)).unwrap().bv_norm(), int(2));
    }

    #[test]
    fn left_normalization() {
        let a = rat(3, 5);
        let h = Integrator::heaviside(int(-1), int(1), a, int(0)).unwrap();
        let n = h.normalize_left().unwrap();
        assert_eq!(n.eval(&int(0)).unwrap(), int(0));
        assert_eq!(n, Integrator::heaviside(int(-1), int(1), int(0), int(0)).unwrap());
        assert_eq!(n.normalize_left().unwrap(), n);

        let alpha = Integrator::from_piecewise(&x_plus_h1_half()).unwrap();
        let n = alpha.normalize_left().unwrap();
        assert_eq!(n.eval(&rat(1, 2)).unwrap(), rat(1, 2));
        assert_eq!(n.limit_right(&rat(1, 2)).unwrap(), rat(3, 2));

        let jump_at_b = Integrator::heaviside(int(0), int(1), int(1), int(1)).unwrap();
        assert!(matches!(jump_at_b.normalize_left(), Err(Error::EndpointDiscontinuity(_))));
    }

    #[test]
    fn alpha_mesh_examples() {
        let id = Integrator::identity(int(0), int(1)).unwrap();
        assert_eq!(id.alpha_mesh(&Partition::uniform(&int(0), &int(1), 4).unwrap()).unwrap(), rat(1, 4));
        let h = Integrator::heaviside(int(-1), int(1), int(1), int(0)).unwrap();
        let through = Partition::new(vec![int(-1), int(0), int(1)]).unwrap();
        assert_eq!(h.alpha_mesh(&through).unwrap(), int(0));
        let around = Partition::new(vec![int(-1), int(1)]).unwrap();
        assert_eq!(h.alpha_mesh(&around).unwrap(), int(1));
        assert!(matches!(h.neg().alpha_mesh(&around), Err(Error::NotIncreasing)));
    }

    #[test]
    fn restriction_across_a_jump() {
        let alpha = Integrator::from_piecewise(&x_plus_h1_half()).unwrap();
        let left = alpha.restrict(&int(0), &rat(1, 2)).unwrap();
        assert_eq!(left.eval(&rat(1, 2)).unwrap(), rat(3, 2));
        assert_eq!(left.mu(&Set::Point(rat(1, 2))).unwrap(), int(1));
        let right = alpha.restrict(&rat(1, 2), &int(1)).unwrap();
        assert_eq!(right.eval(&rat(1, 2)).unwrap(), rat(3, 2));
        assert_eq!(right.mu(&Set::Point(rat(1, 2))).unwrap(), int(0));
    }

    #[test]
    fn splits_at_turning_points() {
        // x^2 on [-1, 1] turns at 0
        let g = PiecewiseFn::from_poly(int(-1), int(1), Poly::monomial(2)).unwrap();
        let alpha = Integrator::from_piecewise(&g).unwrap();
        assert_eq!(alpha.continuous().breakpoints(), &[int(-1), int(0), int(1)]);
        assert_eq!(alpha.total_variation(), int(2));
        // x^3 - x turns at ±1/sqrt(3)
        let cubic = Poly::from_coeffs(vec![int(0), int(-1), int(0), int(1)]);
        let g = PiecewiseFn::from_poly(int(0), int(1), cubic).unwrap();
        assert!(matches!(Integrator::from_piecewise(&g), Err(Error::NonMonotonePiece { .. })));
    }

    #[test]
    fn round_trip_to_piecewise() {
        let pw = x_plus_h1_half();
        let alpha = Integrator::from_piecewise(&pw).unwrap();
        assert_eq!(alpha.to_piecewise().unwrap(), pw);
    }
}
