use std::fmt;

use num_traits::{One, Signed, Zero};
use stieltjes::{Chirality, PiecewiseFn, Poly, Rational, SaltusPart};

/// A parsed program. Bindings come first in canonical form; each query
/// only names bindings.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Program {
    pub bindings: Vec<Binding>,
    pub queries: Vec<Query>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binding {
    pub name: String,
    pub expr: Expr,
}

/// Flat sum of scaled atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coef: Rational,
    pub atom: Atom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    /// The constant 1; a bare scalar `c` is `c * One`.
    One,
    X,
    /// `H_c(x - at)`.
    Heaviside { c: Rational, at: Rational },
    Dirichlet,
    Name(String),
    Piecewise(PiecewiseFn),
    Saltus(SaltusLit),
    Pow(Box<Atom>, u32),
    Group(Expr),
}

/// A jump series on `[a, b]`, written
/// `saltus left on [a, b] { loc: weight; ... } tail t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaltusLit {
    pub a: Rational,
    pub b: Rational,
    pub part: SaltusPart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Probe {
    Mrs,
    Rps,
    Rrs,
}

impl Probe {
    pub fn keyword(self) -> &'static str {
        match self {
            Probe::Mrs => "mrs",
            Probe::Rps => "rps",
            Probe::Rrs => "rrs",
        }
    }
}

/// Optional `with` arguments of a `sums` query.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SumsArgs {
    pub meshes: Option<Vec<Rational>>,
    pub base: Option<Vec<Rational>>,
    pub rounds: Option<u32>,
    pub deltas: Option<Vec<Rational>>,
}

impl SumsArgs {
    pub fn is_empty(&self) -> bool {
        self.meshes.is_none() && self.base.is_none() && self.rounds.is_none() && self.deltas.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryKind {
    Integrate { f: String, alpha: String },
    Compare { f: String, alpha: String },
    Parts { alpha: String, beta: String },
    Decompose { alpha: String },
    Check { f: String, alpha: String },
    Sums { probe: Probe, f: String, alpha: String, args: SumsArgs },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub kind: QueryKind,
    pub a: Rational,
    pub b: Rational,
}

impl Expr {
    pub fn atom(atom: Atom) -> Self {
        Expr { terms: vec![Term { coef: Rational::one(), atom }] }
    }

    /// Appends `coef * atom`, splicing unscaled groups so sums stay flat.
    pub(crate) fn push(&mut self, coef: Rational, atom: Atom) {
        match atom {
            Atom::Group(inner) if coef.is_one() => self.terms.extend(inner.terms),
            atom => self.terms.push(Term { coef, atom }),
        }
    }
}

/// Wraps a parenthesized expression, unwrapping it when it is a single
/// unscaled atom.
pub(crate) fn group(e: Expr) -> Atom {
    if e.terms.len() == 1 && e.terms[0].coef.is_one() {
        e.terms.into_iter().next().map(|t| t.atom).unwrap()
    } else {
        Atom::Group(e)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bindings {
            writeln!(f, "let {} = {};", b.name, b.expr)?;
        }
        for q in &self.queries {
            writeln!(f, "{q}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coef.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = t.coef.abs();
            match &t.atom {
                Atom::One => write!(f, "{mag}")?,
                atom if mag.is_one() => write!(f, "{atom}")?,
                atom => write!(f, "{mag}*{atom}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::One => write!(f, "1"),
            Atom::X => write!(f, "x"),
            Atom::Heaviside { c, at } => write!(f, "heaviside(c={c}, at={at})"),
            Atom::Dirichlet => write!(f, "dirichlet"),
            Atom::Name(n) => write!(f, "{n}"),
            Atom::Piecewise(p) => write_piecewise(f, p),
            Atom::Saltus(s) => write!(f, "{s}"),
            Atom::Pow(base, n) => write!(f, "{base}^{n}"),
            Atom::Group(e) => write!(f, "({e})"),
        }
    }
}

impl fmt::Display for SaltusLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.part.chirality() {
            Chirality::Left => "left",
            Chirality::Right => "right",
        };
        write!(f, "saltus {side} on [{}, {}] {{", self.a, self.b)?;
        for (i, (loc, w)) in self.part.terms().iter().enumerate() {
            write!(f, "{} {loc}: {w}", if i == 0 { "" } else { ";" })?;
        }
        write!(f, " }}")?;
        if !self.part.tail_bound().is_zero() {
            write!(f, " tail {}", self.part.tail_bound())?;
        }
        Ok(())
    }
}

fn write_piecewise(f: &mut fmt::Formatter<'_>, p: &PiecewiseFn) -> fmt::Result {
    write!(f, "piecewise on [{}, {}] {{ ", p.a(), p.b())?;
    let bps = p.breakpoints();
    for (i, x) in bps.iter().enumerate() {
        write!(f, "at {x}: {}", p.values()[i])?;
        if i + 1 < bps.len() {
            write!(f, "; ({x}, {}): {}; ", bps[i + 1], PolyText(&p.pieces()[i]))?;
        }
    }
    write!(f, " }}")
}

/// A polynomial in the DSL's own syntax, highest degree first.
pub struct PolyText<'a>(pub &'a Poly);

impl fmt::Display for PolyText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<Term> = self
            .0
            .coeffs()
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| Term {
                coef: c.clone(),
                atom: match k {
                    0 => Atom::One,
                    1 => Atom::X,
                    k => Atom::Pow(Box::new(Atom::X), k as u32),
                },
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", Expr { terms })
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            QueryKind::Integrate { f: g, alpha } => write!(f, "integrate {g} d{alpha}")?,
            QueryKind::Compare { f: g, alpha } => write!(f, "compare {g} d{alpha}")?,
            QueryKind::Parts { alpha, beta } => write!(f, "parts {alpha} {beta}")?,
            QueryKind::Decompose { alpha } => write!(f, "decompose {alpha}")?,
            QueryKind::Check { f: g, alpha } => write!(f, "check {g} d{alpha}")?,
            QueryKind::Sums { probe, f: g, alpha, args } => {
                write!(f, "sums {} {g} d{alpha}", probe.keyword())?;
                if !args.is_empty() {
                    let mut parts = Vec::new();
                    let list = |v: &[Rational]| v.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ");
                    if let Some(m) = &args.meshes {
                        parts.push(format!("meshes = [{}]", list(m)));
                    }
                    if let Some(bs) = &args.base {
                        parts.push(format!("base = [{}]", list(bs)));
                    }
                    if let Some(r) = args.rounds {
                        parts.push(format!("rounds = {r}"));
                    }
                    if let Some(d) = &args.deltas {
                        parts.push(format!("deltas = [{}]", list(d)));
                    }
                    write!(f, " with {}", parts.join(", "))?;
                }
            }
        }
        write!(f, " on [{}, {}];", self.a, self.b)
    }
}
