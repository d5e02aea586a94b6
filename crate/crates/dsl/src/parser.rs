use std::collections::{BTreeMap, HashSet};

use num_traits::{One, Signed, Zero};
use stieltjes::numerics::max_degree;
use stieltjes::{Chirality, PiecewiseFn, Poly, Rational, SaltusPart};

use crate::ast::{group, Atom, Binding, Expr, Probe, Program, Query, QueryKind, SaltusLit, SumsArgs};
use crate::lexer::{tokenize, Tok, Token};
use crate::Diagnostic;

/// Words that cannot be bound as names.
pub const RESERVED: &[&str] = &[
    "let", "x", "d", "heaviside", "dirichlet", "piecewise", "saltus", "on", "at", "left", "right", "tail", "with",
    "integrate", "compare", "parts", "decompose", "check", "sums", "mrs", "rps", "rrs",
];

/// Largest `rounds` a `sums rps` query may request; the partition doubles
/// every round.
pub const MAX_ROUNDS: u32 = 20;

type PResult<T> = Result<T, Diagnostic>;

pub fn parse(src: &str) -> PResult<Program> {
    let mut p = Parser { toks: tokenize(src)?, pos: 0, bound: HashSet::new() };
    p.program()
}

/// Parses a single expression that may mention the names in `bound`.
pub fn parse_expr(src: &str, bound: &[&str]) -> PResult<Expr> {
    let mut p = Parser { toks: tokenize(src)?, pos: 0, bound: bound.iter().map(|s| s.to_string()).collect() };
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    bound: HashSet<String>,
}

struct Interval {
    lo: Rational,
    hi: Rational,
    closed: bool,
    at: Token,
}

enum Piece {
    Poly { lo: Rational, hi: Rational, closed: bool, poly: Poly, at: Token },
    Value { x: Rational, v: Rational, at: Token },
}

fn diag(t: &Token, message: impl Into<String>) -> Diagnostic {
    Diagnostic::new(t.line, t.column, message)
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected<T>(&self, expected: &[&str]) -> PResult<T> {
        let t = self.peek();
        Err(diag(t, format!("unexpected {}", t.tok.describe())).expecting(expected))
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn at_kw(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn expect_sym(&mut self, c: char) -> PResult<Token> {
        if self.at_sym(c) {
            Ok(self.bump())
        } else {
            self.unexpected(&[&format!("\"{c}\"")])
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<Token> {
        if self.at_kw(kw) {
            Ok(self.bump())
        } else {
            self.unexpected(&[&format!("`{kw}`")])
        }
    }

    fn expect_eof(&self) -> PResult<()> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            self.unexpected(&["end of input"])
        }
    }

    fn program(&mut self) -> PResult<Program> {
        let mut prog = Program::default();
        loop {
            match &self.peek().tok {
                Tok::Eof => return Ok(prog),
                Tok::Ident(s) if s == "let" => prog.bindings.push(self.binding()?),
                Tok::Ident(s) if QUERY_WORDS.contains(&s.as_str()) => prog.queries.push(self.query()?),
                _ => return self.unexpected(&["`let`", "a query"]),
            }
        }
    }

    fn binding(&mut self) -> PResult<Binding> {
        self.expect_kw("let")?;
        let t = self.peek().clone();
        let name = match &t.tok {
            Tok::Ident(s) if RESERVED.contains(&s.as_str()) => {
                return Err(diag(&t, format!("`{s}` is reserved and cannot be bound")));
            }
            Tok::Ident(s) if self.bound.contains(s) => return Err(diag(&t, format!("`{s}` is already bound"))),
            Tok::Ident(s) => s.clone(),
            _ => return self.unexpected(&["a name"]),
        };
        self.bump();
        self.expect_sym('=')?;
        let expr = self.expr()?;
        if !self.at_sym(';') {
            return self.unexpected(&["\"+\"", "\"-\"", "\";\""]);
        }
        self.bump();
        self.bound.insert(name.clone());
        Ok(Binding { name, expr })
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut e = Expr { terms: Vec::new() };
        let (c, a) = self.term()?;
        e.push(c, a);
        loop {
            let sign = if self.at_sym('+') {
                Rational::one()
            } else if self.at_sym('-') {
                -Rational::one()
            } else {
                return Ok(e);
            };
            self.bump();
            let (c, a) = self.term()?;
            e.push(sign * c, a);
        }
    }

    /// `"-" term | power ("*" power)?`, where only a scalar may stand left
    /// of `*`.
    fn term(&mut self) -> PResult<(Rational, Atom)> {
        if self.at_sym('-') {
            self.bump();
            let (c, a) = self.term()?;
            return Ok((-c, a));
        }
        let (c, a) = self.power()?;
        if !self.at_sym('*') {
            return Ok((c, a));
        }
        if a != Atom::One {
            return Err(diag(self.peek(), "only a scalar may stand left of \"*\""));
        }
        self.bump();
        let (c2, a2) = self.power()?;
        Ok((c * c2, a2))
    }

    fn power(&mut self) -> PResult<(Rational, Atom)> {
        let (mut c, mut a) = self.primary()?;
        while self.at_sym('^') {
            self.bump();
            let t = self.peek().clone();
            let n = match &t.tok {
                Tok::Num { value, integer: true } => u32::try_from(value.to_integer())
                    .map_err(|_| diag(&t, "exponent is too large"))?,
                _ => return self.unexpected(&["a nonnegative integer exponent"]),
            };
            self.bump();
            if a == Atom::One {
                c = num_traits::pow(c, n as usize);
            } else {
                a = Atom::Pow(Box::new(a), n);
                if let Some(d) = atom_poly(&a).and_then(|p| p.degree()) {
                    let cap = max_degree();
                    if d > cap {
                        return Err(diag(&t, format!("polynomial degree {d} exceeds the cap {cap}")));
                    }
                }
            }
        }
        Ok((c, a))
    }

    fn primary(&mut self) -> PResult<(Rational, Atom)> {
        let t = self.peek().clone();
        let one = Rational::one();
        match &t.tok {
            Tok::Num { value, .. } => {
                self.bump();
                Ok((value.clone(), Atom::One))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                if !self.at_sym(')') {
                    return self.unexpected(&["\"+\"", "\"-\"", "\")\""]);
                }
                self.bump();
                // a parenthesized scalar stays a scalar
                if let [t] = e.terms.as_slice() {
                    if t.atom == Atom::One {
                        return Ok((t.coef.clone(), Atom::One));
                    }
                }
                Ok((one, group(e)))
            }
            Tok::Ident(s) => match s.as_str() {
                "x" => {
                    self.bump();
                    Ok((one, Atom::X))
                }
                "dirichlet" => {
                    self.bump();
                    Ok((one, Atom::Dirichlet))
                }
                "heaviside" => Ok((one, self.heaviside()?)),
                "piecewise" => Ok((one, Atom::Piecewise(self.piecewise()?))),
                "saltus" => Ok((one, Atom::Saltus(self.saltus()?))),
                s if RESERVED.contains(&s) => Err(diag(&t, format!("keyword `{s}` cannot start an expression"))),
                s if self.bound.contains(s) => {
                    self.bump();
                    Ok((one, Atom::Name(s.to_string())))
                }
                s => Err(diag(&t, format!("`{s}` is not bound; names must be bound before use"))),
            },
            _ => self.unexpected(&["an expression"]),
        }
    }

    fn scalar(&mut self) -> PResult<Rational> {
        let neg = self.at_sym('-');
        if neg {
            self.bump();
        }
        match &self.peek().tok {
            Tok::Num { value, .. } => {
                let v = value.clone();
                self.bump();
                Ok(if neg { -v } else { v })
            }
            _ => self.unexpected(&["a number"]),
        }
    }

    /// `heaviside(c = s)` or `heaviside(c = s, at = s)`; `at` defaults to 0.
    fn heaviside(&mut self) -> PResult<Atom> {
        self.expect_kw("heaviside")?;
        self.expect_sym('(')?;
        self.expect_kw("c")?;
        self.expect_sym('=')?;
        let c = self.scalar()?;
        let mut at = Rational::zero();
        if self.at_sym(',') {
            self.bump();
            self.expect_kw("at")?;
            self.expect_sym('=')?;
            at = self.scalar()?;
        } else if !self.at_sym(')') {
            return self.unexpected(&["\",\"", "\")\""]);
        }
        self.expect_sym(')')?;
        Ok(Atom::Heaviside { c, at })
    }

    fn interval(&mut self) -> PResult<Interval> {
        let at = self.peek().clone();
        let close = match at.tok {
            Tok::Sym('[') => ']',
            Tok::Sym('(') => ')',
            _ => return self.unexpected(&["\"[\"", "\"(\""]),
        };
        self.bump();
        let lo = self.scalar()?;
        self.expect_sym(',')?;
        let hi = self.scalar()?;
        self.expect_sym(close)?;
        if lo >= hi {
            return Err(diag(&at, format!("interval needs its left end below its right end, got {lo} and {hi}")));
        }
        Ok(Interval { lo, hi, closed: close == ']', at })
    }

    fn closed_interval(&mut self) -> PResult<(Rational, Rational)> {
        let iv = self.interval()?;
        if !iv.closed {
            return Err(diag(&iv.at, "a closed interval [a, b] is required here"));
        }
        Ok((iv.lo, iv.hi))
    }

    fn piecewise(&mut self) -> PResult<PiecewiseFn> {
        let start = self.expect_kw("piecewise")?;
        self.expect_kw("on")?;
        let (a, b) = self.closed_interval()?;
        self.expect_sym('{')?;
        let mut pieces = vec![self.piece()?];
        while self.at_sym(';') {
            self.bump();
            pieces.push(self.piece()?);
        }
        if !self.at_sym('}') {
            return self.unexpected(&["\";\"", "\"}\""]);
        }
        let close = self.bump();
        assemble_piecewise(a, b, pieces, &start, &close)
    }

    fn piece(&mut self) -> PResult<Piece> {
        let at = self.peek().clone();
        if self.at_kw("at") {
            self.bump();
            let x = self.scalar()?;
            self.expect_sym(':')?;
            let v = self.scalar()?;
            return Ok(Piece::Value { x, v, at });
        }
        let iv = self.interval()?;
        self.expect_sym(':')?;
        let body = self.peek().clone();
        let e = self.expr()?;
        let poly = to_poly(&e).ok_or_else(|| diag(&body, "a piece must be a polynomial in x"))?;
        Ok(Piece::Poly { lo: iv.lo, hi: iv.hi, closed: iv.closed, poly, at })
    }

    fn saltus(&mut self) -> PResult<SaltusLit> {
        self.expect_kw("saltus")?;
        let chirality = if self.at_kw("left") {
            Chirality::Left
        } else if self.at_kw("right") {
            Chirality::Right
        } else {
            return self.unexpected(&["`left`", "`right`"]);
        };
        self.bump();
        self.expect_kw("on")?;
        let (a, b) = self.closed_interval()?;
        self.expect_sym('{')?;
        let mut terms: Vec<(Rational, Rational)> = Vec::new();
        if !self.at_sym('}') {
            loop {
                let t = self.peek().clone();
                let loc = self.scalar()?;
                self.expect_sym(':')?;
                let w = self.scalar()?;
                if loc < a || loc > b {
                    return Err(diag(&t, format!("jump at {loc} lies outside [{a}, {b}]")));
                }
                match chirality {
                    Chirality::Left if loc == b => {
                        return Err(diag(&t, format!("a left jump at the right end {b} is not reduced")));
                    }
                    Chirality::Right if loc == a => {
                        return Err(diag(&t, format!("a right jump at the left end {a} is not reduced")));
                    }
                    _ => {}
                }
                if terms.last().is_some_and(|(l, _)| *l >= loc) {
                    return Err(diag(&t, "jump locations must strictly increase"));
                }
                if w.is_zero() {
                    return Err(diag(&t, "a jump weight must be nonzero"));
                }
                terms.push((loc, w));
                if !self.at_sym(';') {
                    break;
                }
                self.bump();
            }
        }
        if !self.at_sym('}') {
            return self.unexpected(&["\";\"", "\"}\""]);
        }
        self.bump();
        let mut tail = Rational::zero();
        if self.at_kw("tail") {
            self.bump();
            let t = self.peek().clone();
            tail = self.scalar()?;
            if tail.is_negative() {
                return Err(diag(&t, "tail bound must be nonnegative"));
            }
        }
        let part = SaltusPart::new(chirality, terms, tail).expect("validated above");
        Ok(SaltusLit { a, b, part })
    }

    fn name_ref(&mut self) -> PResult<String> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Ident(s) if self.bound.contains(s) => {
                self.bump();
                Ok(s.clone())
            }
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => {
                Err(diag(&t, format!("`{s}` is not bound; names must be bound before use")))
            }
            _ => self.unexpected(&["a bound name"]),
        }
    }

    /// `d NAME`, also written without the space as `dNAME`.
    fn d_name(&mut self) -> PResult<String> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Ident(s) if s == "d" => {
                self.bump();
                self.name_ref()
            }
            Tok::Ident(s) if s.starts_with('d') && s.len() > 1 => {
                let name = &s[1..];
                if self.bound.contains(name) {
                    self.bump();
                    Ok(name.to_string())
                } else {
                    Err(Diagnostic::new(t.line, t.column + 1, format!("`{name}` is not bound; names must be bound before use")))
                }
            }
            _ => self.unexpected(&["`d`"]),
        }
    }

    fn query(&mut self) -> PResult<Query> {
        let t = self.bump();
        let word = match &t.tok {
            Tok::Ident(s) => s.clone(),
            _ => unreachable!("caller checked for a query word"),
        };
        let kind = match word.as_str() {
            "integrate" => QueryKind::Integrate { f: self.name_ref()?, alpha: self.d_name()? },
            "compare" => QueryKind::Compare { f: self.name_ref()?, alpha: self.d_name()? },
            "check" => QueryKind::Check { f: self.name_ref()?, alpha: self.d_name()? },
            "parts" => QueryKind::Parts { alpha: self.name_ref()?, beta: self.name_ref()? },
            "decompose" => QueryKind::Decompose { alpha: self.name_ref()? },
            "sums" => {
                let probe = if self.at_kw("mrs") {
                    Probe::Mrs
                } else if self.at_kw("rps") {
                    Probe::Rps
                } else if self.at_kw("rrs") {
                    Probe::Rrs
                } else {
                    return self.unexpected(&["`mrs`", "`rps`", "`rrs`"]);
                };
                self.bump();
                let f = self.name_ref()?;
                let alpha = self.d_name()?;
                let args = if self.at_kw("with") { self.sums_args(probe)? } else { SumsArgs::default() };
                QueryKind::Sums { probe, f, alpha, args }
            }
            _ => unreachable!("caller checked for a query word"),
        };
        if !self.at_kw("on") {
            return self.unexpected(&["`on`"]);
        }
        self.bump();
        let (a, b) = self.closed_interval()?;
        self.expect_sym(';')?;
        Ok(Query { kind, a, b })
    }

    fn sums_args(&mut self, probe: Probe) -> PResult<SumsArgs> {
        self.expect_kw("with")?;
        let mut args = SumsArgs::default();
        loop {
            let t = self.peek().clone();
            let key = match &t.tok {
                Tok::Ident(s) => s.clone(),
                _ => return self.unexpected(&["an argument name"]),
            };
            let allowed: &[&str] = match probe {
                Probe::Mrs => &["meshes"],
                Probe::Rps => &["base", "rounds"],
                Probe::Rrs => &["deltas"],
            };
            if !allowed.contains(&key.as_str()) {
                return Err(diag(&t, format!("`sums {}` takes no argument `{key}`", probe.keyword()))
                    .expecting(&allowed.iter().map(|a| format!("`{a}`")).collect::<Vec<_>>()));
            }
            self.bump();
            self.expect_sym('=')?;
            let taken = match key.as_str() {
                "meshes" => args.meshes.replace(self.positive_list()?).is_some(),
                "deltas" => args.deltas.replace(self.positive_list()?).is_some(),
                "base" => {
                    let at = self.peek().clone();
                    let pts = self.list()?;
                    if pts.len() < 2 || pts.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(diag(&at, "base points must strictly increase and number at least two"));
                    }
                    args.base.replace(pts).is_some()
                }
                _ => {
                    let at = self.peek().clone();
                    let n = match &at.tok {
                        Tok::Num { value, integer: true } => value.to_integer(),
                        _ => return self.unexpected(&["a nonnegative integer"]),
                    };
                    self.bump();
                    let n = u32::try_from(n).ok().filter(|&n| n <= MAX_ROUNDS);
                    let n = n.ok_or_else(|| diag(&at, format!("rounds must be at most {MAX_ROUNDS}")))?;
                    args.rounds.replace(n).is_some()
                }
            };
            if taken {
                return Err(diag(&t, format!("argument `{key}` given twice")));
            }
            if !self.at_sym(',') {
                return Ok(args);
            }
            self.bump();
        }
    }

    fn list(&mut self) -> PResult<Vec<Rational>> {
        self.expect_sym('[')?;
        let mut out = vec![self.scalar()?];
        while self.at_sym(',') {
            self.bump();
            out.push(self.scalar()?);
        }
        if !self.at_sym(']') {
            return self.unexpected(&["\",\"", "\"]\""]);
        }
        self.bump();
        Ok(out)
    }

    fn positive_list(&mut self) -> PResult<Vec<Rational>> {
        let at = self.peek().clone();
        let v = self.list()?;
        if v.iter().any(|r| !r.is_positive()) {
            return Err(diag(&at, "every entry must be positive"));
        }
        Ok(v)
    }
}

const QUERY_WORDS: &[&str] = &["integrate", "compare", "parts", "decompose", "check", "sums"];

/// Polynomial value of an expression built from `x`, scalars, sums,
/// powers and parentheses.
pub fn to_poly(e: &Expr) -> Option<Poly> {
    let mut acc = Poly::zero();
    for t in &e.terms {
        acc = &acc + &atom_poly(&t.atom)?.scale(&t.coef);
    }
    Some(acc)
}

fn atom_poly(a: &Atom) -> Option<Poly> {
    match a {
        Atom::One => Some(Poly::constant(Rational::one())),
        Atom::X => Some(Poly::x()),
        Atom::Pow(base, n) => Some(atom_poly(base)?.pow(*n)),
        Atom::Group(e) => to_poly(e),
        _ => None,
    }
}

/// Checks that the pieces tile `[a, b]` and that every breakpoint gets
/// exactly one value. Closed pieces supply their endpoint values unless
/// an `at` entry gives them.
fn assemble_piecewise(a: Rational, b: Rational, pieces: Vec<Piece>, start: &Token, close: &Token) -> PResult<PiecewiseFn> {
    let mut spans: Vec<(Rational, Rational, Poly, Token)> = Vec::new();
    let mut explicit: BTreeMap<Rational, Rational> = BTreeMap::new();
    let mut implied: BTreeMap<Rational, (Rational, Token)> = BTreeMap::new();
    for piece in pieces {
        match piece {
            Piece::Value { x, v, at } => {
                if explicit.insert(x.clone(), v).is_some() {
                    return Err(diag(&at, format!("value at {x} given twice")));
                }
                if x < a || x > b {
                    return Err(diag(&at, format!("{x} lies outside [{a}, {b}]")));
                }
            }
            Piece::Poly { lo, hi, closed, poly, at } => {
                if closed {
                    for end in [&lo, &hi] {
                        let v = poly.eval(end);
                        if let Some((w, _)) = implied.get(end) {
                            if *w != v {
                                return Err(diag(&at, format!("closed pieces disagree at {end}")));
                            }
                        }
                        implied.insert(end.clone(), (v, at.clone()));
                    }
                }
                spans.push((lo, hi, poly, at));
            }
        }
    }
    if spans.is_empty() {
        return Err(diag(close, "a piecewise function needs at least one piece"));
    }
    spans.sort_by(|x, y| x.0.cmp(&y.0));
    let mut cursor = a.clone();
    for (lo, hi, _, at) in &spans {
        if *lo != cursor {
            let what = if *lo < cursor { "overlaps the previous piece" } else { "leaves a gap before it" };
            return Err(diag(at, format!("piece ({lo}, {hi}) {what}")));
        }
        if *hi > b {
            return Err(diag(at, format!("piece ({lo}, {hi}) extends past {b}")));
        }
        cursor = hi.clone();
    }
    if cursor != b {
        return Err(diag(close, format!("pieces stop at {cursor}, short of {b}")));
    }
    let mut breakpoints = vec![a.clone()];
    breakpoints.extend(spans.iter().map(|s| s.1.clone()));
    if let Some(x) = explicit.keys().find(|x| !breakpoints.contains(x)) {
        return Err(diag(start, format!("value given at {x}, which is not a breakpoint")));
    }
    let mut values = Vec::new();
    for x in &breakpoints {
        match explicit.get(x).or_else(|| implied.get(x).map(|(v, _)| v)) {
            Some(v) => values.push(v.clone()),
            None => return Err(diag(close, format!("no value given at breakpoint {x}"))),
        }
    }
    let pieces = spans.into_iter().map(|s| s.2).collect();
    PiecewiseFn::new(breakpoints, pieces, values).map_err(|e| diag(start, e.to_string()))
}
