use std::collections::HashMap;

use num_traits::One;
use stieltjes::numerics::max_degree;
use stieltjes::{Chirality, Error, Function, Integrator, PiecewiseFn, Rational, Result, SaltusPart};

use crate::ast::{Atom, Expr, Program};

/// Name lookup for materializing expressions.
pub struct Scope<'p> {
    names: HashMap<&'p str, &'p Expr>,
}

enum Val {
    Pw(PiecewiseFn),
    Dirichlet,
    Int(Integrator),
}

impl<'p> Scope<'p> {
    pub fn new(program: &'p Program) -> Self {
        Scope { names: program.bindings.iter().map(|b| (b.name.as_str(), &b.expr)).collect() }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (&'p str, &'p Expr)>) -> Self {
        Scope { names: pairs.into_iter().collect() }
    }

    fn lookup(&self, name: &str) -> Result<&'p Expr> {
        self.names.get(name).copied().ok_or_else(|| Error::Unsupported(format!("`{name}` is not bound")))
    }

    /// The bound expression `name` as a function on `[a, b]`.
    pub fn function(&self, name: &str, a: &Rational, b: &Rational) -> Result<Function> {
        self.expr_function(self.lookup(name)?, a, b)
    }

    /// The bound expression `name` as an integrator on `[a, b]`.
    pub fn integrator(&self, name: &str, a: &Rational, b: &Rational) -> Result<Integrator> {
        self.expr_integrator(self.lookup(name)?, a, b)
    }

    pub fn expr_function(&self, e: &Expr, a: &Rational, b: &Rational) -> Result<Function> {
        Ok(match self.eval(e, a, b)? {
            Val::Pw(p) => Function::Piecewise(p),
            Val::Dirichlet => Function::dirichlet(a.clone(), b.clone()),
            Val::Int(i) => Function::Piecewise(i.to_piecewise()?),
        })
    }

    pub fn expr_integrator(&self, e: &Expr, a: &Rational, b: &Rational) -> Result<Integrator> {
        match self.eval(e, a, b)? {
            Val::Pw(p) => Integrator::from_piecewise(&p),
            Val::Dirichlet => Err(Error::NotBv),
            Val::Int(i) => Ok(i),
        }
    }

    fn eval(&self, e: &Expr, a: &Rational, b: &Rational) -> Result<Val> {
        let mut acc: Option<Val> = None;
        for t in &e.terms {
            let v = scale(self.atom(&t.atom, a, b)?, &t.coef)?;
            acc = Some(match acc {
                None => v,
                Some(prev) => add(prev, v)?,
            });
        }
        acc.ok_or_else(|| Error::Unsupported("empty expression".into()))
    }

    fn atom(&self, atom: &Atom, a: &Rational, b: &Rational) -> Result<Val> {
        let (a_, b_) = (a.clone(), b.clone());
        Ok(match atom {
            Atom::One => Val::Pw(PiecewiseFn::constant(a_, b_, Rational::one())?),
            Atom::X => Val::Pw(PiecewiseFn::identity(a_, b_)?),
            Atom::Heaviside { c, at } => Val::Pw(PiecewiseFn::heaviside(a_, b_, c.clone(), at.clone())?),
            Atom::Dirichlet => Val::Dirichlet,
            Atom::Name(n) => self.eval(self.lookup(n)?, a, b)?,
            Atom::Piecewise(p) => Val::Pw(p.restrict(a, b)?),
            Atom::Saltus(s) => {
                let (left, right) = match s.part.chirality() {
                    Chirality::Left => (s.part.clone(), SaltusPart::empty(Chirality::Right)),
                    Chirality::Right => (SaltusPart::empty(Chirality::Left), s.part.clone()),
                };
                let full = Integrator::pure_saltus(s.a.clone(), s.b.clone(), left, right)?;
                Val::Int(full.restrict(a, b)?)
            }
            Atom::Pow(base, n) => pow(self.atom(base, a, b)?, *n, a, b)?,
            Atom::Group(e) => self.eval(e, a, b)?,
        })
    }
}

fn scale(v: Val, c: &Rational) -> Result<Val> {
    if c.is_one() {
        return Ok(v);
    }
    match v {
        Val::Pw(p) => Ok(Val::Pw(p.scale(c))),
        Val::Int(i) => Ok(Val::Int(i.scale(c))),
        Val::Dirichlet => Err(Error::Unsupported("the Dirichlet function cannot be scaled".into())),
    }
}

fn add(x: Val, y: Val) -> Result<Val> {
    match (x, y) {
        (Val::Pw(p), Val::Pw(q)) => Ok(Val::Pw(p.add(&q)?)),
        (Val::Int(i), Val::Int(j)) => Ok(Val::Int(i.add(&j)?)),
        (Val::Int(i), Val::Pw(p)) | (Val::Pw(p), Val::Int(i)) => Ok(Val::Int(i.add(&Integrator::from_piecewise(&p)?)?)),
        _ => Err(Error::Unsupported("the Dirichlet function cannot be combined with other terms".into())),
    }
}

fn pow(v: Val, n: u32, a: &Rational, b: &Rational) -> Result<Val> {
    let base = match v {
        Val::Dirichlet if n > 0 => return Ok(Val::Dirichlet),
        Val::Dirichlet => return Ok(Val::Pw(PiecewiseFn::constant(a.clone(), b.clone(), Rational::one())?)),
        Val::Pw(p) => p,
        Val::Int(i) => i.to_piecewise()?,
    };
    let mut acc = PiecewiseFn::constant(a.clone(), b.clone(), Rational::one())?;
    for _ in 0..n {
        acc = acc.mul(&base)?;
    }
    let (degree, cap) = (acc.max_piece_degree(), max_degree());
    if degree > cap {
        return Err(Error::DegreeTooHigh { degree, cap });
    }
    Ok(Val::Pw(acc))
}
