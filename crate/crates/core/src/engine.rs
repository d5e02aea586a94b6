//! RDS and classical DS integration, Ross sums, discrepancy, integration by
//! parts and the table harnesses.
//!
//! Two paths share [`IntegralResult`]. The exact path sums `w·f(loc)` over
//! the jumps and integrates `f·G'` piece by piece. The enclosure path
//! brackets `f` with best-fit step functions on a refining partition and
//! reports `[L, U]`.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::integrator::{limit_midpoint, Integrator, Set};
use crate::numerics::{int, midpoint, rat, Rational};
use crate::pwfn::{common_refinement, Function, Partition, PiecewiseFn, RangeOracle, StepFn};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Exact(Rational),
    Enclosure { lo: Rational, hi: Rational },
}

impl Value {
    pub fn lo(&self) -> &Rational {
        match self {
            Value::Exact(v) => v,
            Value::Enclosure { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> &Rational {
        match self {
            Value::Exact(v) => v,
            Value::Enclosure { hi, .. } => hi,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Value::Exact(v) => Some(v),
            Value::Enclosure { .. } => None,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo() <= x && x <= self.hi()
    }

    pub fn width(&self) -> Rational {
        self.hi() - self.lo()
    }

    fn add(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Exact(x), Value::Exact(y)) => Value::Exact(x + y),
            _ => Value::Enclosure { lo: self.lo() + other.lo(), hi: self.hi() + other.hi() },
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(v) => write!(f, "{v}"),
            Value::Enclosure { lo, hi } => write!(f, "[{lo}, {hi}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralResult {
    pub value: Value,
    /// Tail bound of the integrator's truncated saltus series.
    pub saltus_tail_error: Rational,
    /// Bound on `sup |f|`; the tail costs at most this times the tail bound.
    pub integrand_bound: Rational,
    pub refinements: u32,
    /// `false` when an enclosure stayed wider than the tolerance.
    pub converged: bool,
}

impl IntegralResult {
    fn exact(v: Rational, tail: Rational, bound: Rational) -> Self {
        IntegralResult {
            value: Value::Exact(v),
            saltus_tail_error: tail,
            integrand_bound: bound,
            refinements: 0,
            converged: true,
        }
    }

    /// Interval certain to contain the integral against the full series.
    pub fn guarantee(&self) -> (Rational, Rational) {
        let slack = &self.saltus_tail_error * &self.integrand_bound;
        (self.value.lo() - &slack, self.value.hi() + &slack)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Exact whenever the inputs allow it.
    #[default]
    Auto,
    /// Always bracket.
    Enclosure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settings {
    pub tol: Rational,
    pub max_refine: u32,
    pub method: Method,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { tol: rat(1, 1_000_000), max_refine: 60, method: Method::Auto }
    }
}

impl Settings {
    pub fn enclosure(tol: Rational, max_refine: u32) -> Self {
        Settings { tol, max_refine, method: Method::Enclosure }
    }
}

fn check_domains(f: (&Rational, &Rational), alpha: &Integrator) -> Result<()> {
    if f != alpha.domain() {
        return Err(Error::domain_mismatch(f, alpha.domain()));
    }
    Ok(())
}

fn open(l: &Rational, r: &Rational) -> Set {
    Set::Open(l.clone(), r.clone())
}

/// `Σ s(x_i)·μ({x_i}) + Σ c_i·μ(I_i)` on `partition`, which must contain
/// every breakpoint of `s`.
fn rds_step_sum(s: &PiecewiseFn, alpha: &Integrator, partition: &Partition) -> Result<Rational> {
    let mut total = Rational::zero();
    for x in partition.points() {
        let m = alpha.mu(&Set::Point(x.clone()))?;
        if !m.is_zero() {
            total += s.eval(x)? * m;
        }
    }
    for (l, r) in partition.intervals() {
        let m = alpha.mu(&open(l, r))?;
        if !m.is_zero() {
            total += s.eval(&midpoint(l, r))? * m;
        }
    }
    Ok(total)
}

/// The RDS integral of a step function.
pub fn rds_step_integral(s: &StepFn, alpha: &Integrator) -> Result<Rational> {
    check_domains(s.domain(), alpha)?;
    let p = s.partition().refine(alpha.jump_points());
    rds_step_sum(s, alpha, &p)
}

/// The classical DS step integral `Σ c_i·(α(x_i) - α(x_{i-1}))`.
pub fn ds_step_integral(s: &StepFn, alpha: &Integrator) -> Result<Rational> {
    check_domains(s.domain(), alpha)?;
    let mut total = Rational::zero();
    for ((l, r), c) in s.partition().intervals().zip(s.constants()) {
        total += c * alpha.mu_classical(l, r)?;
    }
    Ok(total)
}

/// Ross upper and lower sums `(U, L)` from the best-fit steps on `p`.
pub fn ross_sums(f: &PiecewiseFn, alpha: &Integrator, p: &Partition, width: &Rational) -> Result<(Rational, Rational)> {
    check_domains(f.domain(), alpha)?;
    if !alpha.is_increasing() {
        return Err(Error::NotIncreasing);
    }
    let (u, v) = f.best_fit_steps(p, width)?;
    Ok((rds_step_integral(&u, alpha)?, rds_step_integral(&v, alpha)?))
}

/// `∫ f·G' dx` over the continuous part, piece by piece.
fn continuous_part_integral(f: &PiecewiseFn, alpha: &Integrator) -> Result<Rational> {
    let g = alpha.continuous();
    let p = common_refinement(&f.partition(), &g.partition())?;
    let f = f.refine(p.points().iter().cloned());
    let g = g.refine(p.points().iter().cloned());
    let mut total = Rational::zero();
    for ((w, fp), gp) in p.points().windows(2).zip(f.pieces()).zip(g.pieces()) {
        let dg = gp.derivative();
        if !dg.is_zero() {
            total += (fp * &dg).integrate(&w[0], &w[1]);
        }
    }
    Ok(total)
}

fn jump_sum(alpha: &Integrator, value_at: impl Fn(&Rational, bool) -> Result<Rational>) -> Result<Rational> {
    let mut total = Rational::zero();
    for (loc, w) in alpha.left_saltus().terms() {
        total += w * value_at(loc, true)?;
    }
    for (loc, w) in alpha.right_saltus().terms() {
        total += w * value_at(loc, false)?;
    }
    Ok(total)
}

fn rds_exact(f: &PiecewiseFn, alpha: &Integrator) -> Result<Rational> {
    Ok(jump_sum(alpha, |x, _| f.eval(x))? + continuous_part_integral(f, alpha)?)
}

fn ds_exact(f: &PiecewiseFn, alpha: &Integrator) -> Result<Rational> {
    let jumps = jump_sum(alpha, |x, left| if left { f.limit_right(x) } else { f.limit_left(x) })?;
    Ok(jumps + continuous_part_integral(f, alpha)?)
}

/// Whether the continuous part of α is constant, the only situation in
/// which the Dirichlet function can be integrated.
fn continuous_part_is_flat(alpha: &Integrator) -> bool {
    alpha.continuous().pieces().iter().all(|p| p.is_constant())
}

fn dirichlet_bound() -> Rational {
    int(1)
}

/// The RDS integral `∫ f dα`.
pub fn rds_integrate(f: &Function, alpha: &Integrator, settings: &Settings) -> Result<IntegralResult> {
    check_domains(f.domain(), alpha)?;
    let tail = alpha.tail_bound();
    let f = match f {
        Function::Dirichlet { .. } => {
            if !continuous_part_is_flat(alpha) {
                return Err(Error::DirichletUnsupported);
            }
            // Every jump sits at a rational point where the function is 1.
            let total = jump_sum(alpha, |_, _| Ok(int(1)))?;
            return Ok(IntegralResult::exact(total, tail, dirichlet_bound()));
        }
        Function::Piecewise(f) => f,
    };
    let bound = f.sup_abs();
    match settings.method {
        Method::Auto => Ok(IntegralResult::exact(rds_exact(f, alpha)?, tail, bound)),
        Method::Enclosure => rds_enclosure(f, alpha, settings),
    }
}

/// The classical interior DS integral.
pub fn ds_integrate(f: &Function, alpha: &Integrator, settings: &Settings) -> Result<IntegralResult> {
    check_domains(f.domain(), alpha)?;
    let f = match f {
        Function::Dirichlet { .. } => return Err(Error::DirichletUnsupported),
        Function::Piecewise(f) => f,
    };
    let tail = alpha.tail_bound();
    let bound = f.sup_abs();
    match settings.method {
        Method::Auto => Ok(IntegralResult::exact(ds_exact(f, alpha)?, tail, bound)),
        Method::Enclosure => enclosure_by_parts(f, alpha, settings, Mode::Ds),
    }
}

/// Which step integral the bracketing uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Rds,
    Ds,
}

/// Outcome of bracketing `f` against one increasing integrator.
#[derive(Debug, Clone)]
pub struct EnclosureRun {
    pub lower: Rational,
    pub upper: Rational,
    /// The partition the final sums were taken on.
    pub partition: Partition,
    pub rounds: u32,
    pub converged: bool,
    /// Width allowed to the range oracle on each cell.
    pub slack: Rational,
}

struct Cell {
    l: Rational,
    r: Rational,
    mass: Rational,
    lo: Rational,
    hi: Rational,
    gap: Rational,
}

struct Bracketer<'a> {
    f: &'a PiecewiseFn,
    oracle: RangeOracle<'a>,
    beta: &'a Integrator,
    mode: Mode,
}

impl Bracketer<'_> {
    fn cell(&self, l: Rational, r: Rational) -> Result<Cell> {
        let mass = match self.mode {
            Mode::Rds => self.beta.mu(&open(&l, &r))?,
            Mode::Ds => self.beta.mu_classical(&l, &r)?,
        };
        let (lo, hi) = if mass.is_zero() {
            (Rational::zero(), Rational::zero())
        } else {
            self.oracle.range_open(&l, &r)
        };
        let gap = (&hi - &lo) * &mass;
        Ok(Cell { l, r, mass, lo, hi, gap })
    }

    fn point_terms(&self, points: &[Rational]) -> Result<Rational> {
        if self.mode == Mode::Ds {
            return Ok(Rational::zero());
        }
        let mut total = Rational::zero();
        for x in points {
            let m = self.beta.mu(&Set::Point(x.clone()))?;
            if !m.is_zero() {
                total += self.f.eval(x)? * m;
            }
        }
        Ok(total)
    }
}

/// Brackets `∫ f dβ` for increasing `β` by refining a partition until the
/// upper and lower sums are within `tol`.
///
/// Each round bisects the cells with the largest `(M_i - m_i)·μ(I_i)`
/// until three quarters of the total gap is covered (ties go to the
/// leftmost cell); every eighth round bisects everything.
pub fn enclose_increasing(f: &PiecewiseFn, beta: &Integrator, tol: &Rational, max_refine: u32) -> Result<EnclosureRun> {
    enclose(f, beta, tol, max_refine, Mode::Rds)
}

fn enclose(f: &PiecewiseFn, beta: &Integrator, tol: &Rational, max_refine: u32, mode: Mode) -> Result<EnclosureRun> {
    check_domains(f.domain(), beta)?;
    if !beta.is_increasing() {
        return Err(Error::NotIncreasing);
    }
    let (a, b) = beta.domain();
    let total_mass = beta.mu(&Set::Closed(a.clone(), b.clone()))?;
    let width = tol / (int(8) * (total_mass + int(1)));
    let br = Bracketer { f, oracle: RangeOracle::new(f, &width), beta, mode };
    let start = Partition::from_points(a, b, beta.event_points().into_iter().chain(f.breakpoints().iter().cloned()))?;
    let points_fixed = br.point_terms(start.points())?;
    let mut cells = start
        .intervals()
        .map(|(l, r)| br.cell(l.clone(), r.clone()))
        .collect::<Result<Vec<_>>>()?;
    // Bisection points are new partition points and may carry point mass
    // only when β jumps there, which cannot happen: all jumps are already
    // in the starting partition.
    let mut rounds = 0;
    let mut upper: Rational = &points_fixed + cells.iter().map(|c| &c.hi * &c.mass).sum::<Rational>();
    let mut lower: Rational = &points_fixed + cells.iter().map(|c| &c.lo * &c.mass).sum::<Rational>();
    loop {
        let gap = &upper - &lower;
        let converged = gap <= tol / int(2);
        if converged || rounds >= max_refine {
            let mut pts: Vec<Rational> = cells.iter().map(|c| c.l.clone()).collect();
            pts.push(b.clone());
            return Ok(EnclosureRun { lower, upper, partition: Partition::new(pts)?, rounds, converged, slack: width });
        }
        rounds += 1;
        let split: Vec<bool> = if rounds % 8 == 0 {
            vec![true; cells.len()]
        } else {
            let mut order: Vec<usize> = (0..cells.len()).filter(|&i| !cells[i].gap.is_zero()).collect();
            order.sort_by(|&i, &j| cells[j].gap.cmp(&cells[i].gap).then(i.cmp(&j)));
            let mut chosen = vec![false; cells.len()];
            let mut covered = Rational::zero();
            let target = &gap * int(3) / int(4);
            for i in order {
                if covered >= target {
                    break;
                }
                covered += &cells[i].gap;
                chosen[i] = true;
            }
            chosen
        };
        let mut next = Vec::with_capacity(cells.len() * 2);
        for (cell, s) in cells.into_iter().zip(split) {
            if s {
                let m = midpoint(&cell.l, &cell.r);
                let left = br.cell(cell.l.clone(), m.clone())?;
                let right = br.cell(m, cell.r.clone())?;
                upper += &left.hi * &left.mass + &right.hi * &right.mass - &cell.hi * &cell.mass;
                lower += &left.lo * &left.mass + &right.lo * &right.mass - &cell.lo * &cell.mass;
                next.push(left);
                next.push(right);
            } else {
                next.push(cell);
            }
        }
        cells = next;
    }
}

fn enclosure_by_parts(f: &PiecewiseFn, alpha: &Integrator, settings: &Settings, mode: Mode) -> Result<IntegralResult> {
    let (p, n) = alpha.jordan();
    let half_tol = &settings.tol / int(2);
    let rp = enclose(f, &p, &half_tol, settings.max_refine, mode)?;
    let rn = enclose(f, &n, &half_tol, settings.max_refine, mode)?;
    let lo = &rp.lower - &rn.upper;
    let hi = &rp.upper - &rn.lower;
    Ok(IntegralResult {
        value: Value::Enclosure { lo, hi },
        saltus_tail_error: alpha.tail_bound(),
        integrand_bound: f.sup_abs(),
        refinements: rp.rounds + rn.rounds,
        converged: rp.converged && rn.converged,
    })
}

/// Certified enclosure of `∫ f dα` through `α = Pα - Nα + α(a)`.
pub fn rds_enclosure(f: &PiecewiseFn, alpha: &Integrator, settings: &Settings) -> Result<IntegralResult> {
    check_domains(f.domain(), alpha)?;
    enclosure_by_parts(f, alpha, settings, Mode::Rds)
}

/// `RDS - DS`: `Σ a_i·(f(x_i) - f(x_i+)) + Σ b_i·(f(y_i) - f(y_i-))`.
pub fn discrepancy(f: &Function, alpha: &Integrator) -> Result<Rational> {
    check_domains(f.domain(), alpha)?;
    let f = match f {
        Function::Dirichlet { .. } => return Err(Error::DirichletUnsupported),
        Function::Piecewise(f) => f,
    };
    jump_sum(alpha, |x, left| {
        let side = if left { f.limit_right(x)? } else { f.limit_left(x)? };
        Ok(f.eval(x)? - side)
    })
}

/// The jump interaction `A(t)` of α and β at `t`.
pub fn parts_correction(alpha: &Integrator, beta: &Integrator, t: &Rational) -> Result<Rational> {
    let a_bracket = alpha.eval(t)? - limit_midpoint(alpha, t)?;
    let b_bracket = beta.eval(t)? - limit_midpoint(beta, t)?;
    let mu_b = beta.mu(&Set::Point(t.clone()))?;
    let mu_a = alpha.mu(&Set::Point(t.clone()))?;
    Ok(a_bracket * mu_b + b_bracket * mu_a)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartsCheck {
    /// `∫ α dβ`
    pub alpha_dbeta: Value,
    /// `∫ β dα`
    pub beta_dalpha: Value,
    /// Sum of the two integrals.
    pub lhs: Value,
    /// `α(b)β(b) - α(a)β(a) + Σ A(t)`.
    pub rhs: Rational,
    /// Sum of the corrections alone.
    pub correction: Rational,
}

impl PartsCheck {
    pub fn holds(&self) -> bool {
        self.lhs.contains(&self.rhs) && (self.lhs.exact().is_none() || self.lhs.exact() == Some(&self.rhs))
    }
}

/// Both sides of the integration-by-parts formula.
pub fn parts_check(alpha: &Integrator, beta: &Integrator, settings: &Settings) -> Result<PartsCheck> {
    if alpha.domain() != beta.domain() {
        return Err(Error::domain_mismatch(alpha.domain(), beta.domain()));
    }
    let fa = Function::Piecewise(alpha.to_piecewise()?);
    let fb = Function::Piecewise(beta.to_piecewise()?);
    let ab = rds_integrate(&fa, beta, settings)?.value;
    let ba = rds_integrate(&fb, alpha, settings)?.value;
    let (a, b) = alpha.domain();
    let mut correction = Rational::zero();
    let mut s = alpha.jump_points();
    s.extend(beta.jump_points());
    s.sort();
    s.dedup();
    for t in &s {
        correction += parts_correction(alpha, beta, t)?;
    }
    let rhs = alpha.eval(b)? * beta.eval(b)? - alpha.eval(a)? * beta.eval(a)? + &correction;
    Ok(PartsCheck { lhs: ab.add(&ba), alpha_dbeta: ab, beta_dalpha: ba, rhs, correction })
}

/// Integrability verdict with the reason behind it.
pub fn is_rds_integrable(f: &Function, alpha: &Integrator) -> (bool, String) {
    match f {
        Function::Piecewise(_) => (true, "finitely many discontinuities, each of continuous-part measure 0".into()),
        Function::Dirichlet { .. } => {
            if continuous_part_is_flat(alpha) {
                (true, "continuous parts of the Jordan components are constant".into())
            } else {
                let g = alpha.continuous();
                let mass = Integrator::from_piecewise(g).map(|c| c.total_variation()).unwrap_or_else(|_| int(0));
                let (a, b) = alpha.domain();
                (false, format!("G-measure of [{a},{b}] is {mass}"))
            }
        }
    }
}

/// Integrates each function against the same integrator.
pub fn convergence_table(fs: &[Function], alpha: &Integrator, settings: &Settings) -> Result<Vec<IntegralResult>> {
    fs.iter().map(|f| rds_integrate(f, alpha, settings)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceRow {
    pub result: IntegralResult,
    /// BV distance to the limit integrator, when one was supplied.
    pub distance: Option<Rational>,
}

/// Integrates one function against each integrator of a sequence.
pub fn integrator_sequence_table(
    f: &Function,
    alphas: &[Integrator],
    limit: Option<&Integrator>,
    settings: &Settings,
) -> Result<Vec<SequenceRow>> {
    alphas
        .iter()
        .map(|alpha| {
            let result = rds_integrate(f, alpha, settings)?;
            let distance = limit.map(|l| alpha.bv_distance(l)).transpose()?;
            Ok(SequenceRow { result, distance })
        })
        .collect()
}
