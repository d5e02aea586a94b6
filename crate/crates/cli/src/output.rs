//! Output records and their two renderings.
//!
//! JSON is the authoritative form. Text is produced from the same JSON
//! value, so both formats always carry identical numbers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use serde::Serialize;
use serde_json::Value as Json;
use stieltjes::engine::{IntegralResult, Value};
use stieltjes::numerics::parse_rational;
use stieltjes::riemann::ProbeRow;
use stieltjes::{Error, Integrator, Rational};
use stieltjes_dsl::{Atom, Diagnostic};

/// One line of output: the query echo plus a result or an error.
#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub query: String,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Result(Box<QueryResult>),
    Error(ErrorInfo),
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorInfo {
    pub code: String,
    pub message: String,
}

impl From<&Error> for ErrorInfo {
    fn from(e: &Error) -> Self {
        ErrorInfo { code: e.code().into(), message: e.to_string() }
    }
}

/// Either a value or an inline error, for fields that may fail on their
/// own without failing the query.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Fallible<T> {
    Ok(T),
    Err { error: ErrorInfo },
}

impl<T> From<Result<T, Error>> for Fallible<T> {
    fn from(r: Result<T, Error>) -> Self {
        match r {
            Ok(v) => Fallible::Ok(v),
            Err(e) => Fallible::Err { error: (&e).into() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValueOut {
    Exact { value: String },
    Enclosure { lo: String, hi: String },
}

impl From<&Value> for ValueOut {
    fn from(v: &Value) -> Self {
        match v {
            Value::Exact(x) => ValueOut::Exact { value: x.to_string() },
            Value::Enclosure { lo, hi } => ValueOut::Enclosure { lo: lo.to_string(), hi: hi.to_string() },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Integral {
    pub value: ValueOut,
    pub tail_error: String,
    pub integrand_bound: String,
    pub refinements: u32,
    pub converged: bool,
}

impl From<&IntegralResult> for Integral {
    fn from(r: &IntegralResult) -> Self {
        Integral {
            value: (&r.value).into(),
            tail_error: r.saltus_tail_error.to_string(),
            integrand_bound: r.integrand_bound.to_string(),
            refinements: r.refinements,
            converged: r.converged,
        }
    }
}

/// An integrator as continuous part plus jump lists.
#[derive(Debug, Clone, Serialize)]
pub struct IntegratorOut {
    /// Canonical program text of the continuous part.
    pub continuous: String,
    pub left_saltus: Vec<[String; 2]>,
    pub right_saltus: Vec<[String; 2]>,
    pub tail: String,
}

impl From<&Integrator> for IntegratorOut {
    fn from(i: &Integrator) -> Self {
        let jumps = |t: &[(Rational, Rational)]| t.iter().map(|(l, w)| [l.to_string(), w.to_string()]).collect();
        IntegratorOut {
            continuous: Atom::Piecewise(i.continuous().clone()).to_string(),
            left_saltus: jumps(i.left_saltus().terms()),
            right_saltus: jumps(i.right_saltus().terms()),
            tail: i.tail_bound().to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub param: String,
    pub achieved: String,
    pub intervals: usize,
    pub gap: String,
}

impl From<&ProbeRow> for Row {
    fn from(r: &ProbeRow) -> Self {
        Row { param: r.param.to_string(), achieved: r.achieved.to_string(), intervals: r.intervals, gap: r.gap.to_string() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub n: u32,
    #[serde(flatten)]
    pub integral: Integral,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QueryResult {
    Integrate(Integral),
    Compare {
        rds: Fallible<Integral>,
        ds: Fallible<Integral>,
        discrepancy: Fallible<String>,
    },
    Parts {
        alpha_dbeta: ValueOut,
        beta_dalpha: ValueOut,
        lhs: ValueOut,
        rhs: String,
        correction: String,
        holds: bool,
    },
    Decompose {
        total_variation: String,
        saltus: IntegratorOut,
        positive: IntegratorOut,
        negative: IntegratorOut,
    },
    Check {
        integrable: bool,
        reason: String,
    },
    Sums {
        probe: String,
        rows: Vec<Row>,
    },
    Table {
        family: String,
        rows: Vec<TableRow>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

pub fn render(rec: &Record, format: Format) -> String {
    let json = serde_json::to_value(rec).expect("records serialize");
    match format {
        Format::Json => json.to_string(),
        Format::Text => text(&json),
    }
}

pub fn render_diagnostic(d: &Diagnostic, source: &str, format: Format) -> String {
    match format {
        Format::Json => serde_json::json!({
            "source": source,
            "diagnostic": {
                "code": "E200",
                "line": d.line,
                "column": d.column,
                "message": d.message,
                "expected": d.expected,
            }
        })
        .to_string(),
        Format::Text => format!("{source}:{d}"),
    }
}

fn text(json: &Json) -> String {
    let mut out = String::new();
    let obj = json.as_object().expect("records are objects");
    if let Some(q) = obj.get("query").and_then(Json::as_str) {
        out.push_str(q);
        out.push('\n');
    }
    for (k, v) in obj.iter().filter(|(k, _)| *k != "query") {
        walk(&mut out, k, v, 1);
    }
    out.pop();
    out
}

fn walk(out: &mut String, key: &str, v: &Json, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Json::Object(map) => {
            out.push_str(&format!("{pad}{key}\n"));
            for (k, v) in map {
                walk(out, k, v, depth + 1);
            }
        }
        Json::Array(items) if items.iter().all(Json::is_object) && !items.is_empty() => {
            out.push_str(&format!("{pad}{key}\n"));
            table(out, items, depth + 1);
        }
        Json::Array(items) => {
            let cells: Vec<String> = items.iter().map(cell).collect();
            out.push_str(&format!("{pad}{key:<18} [{}]\n", cells.join(", ")));
        }
        scalar => {
            let c = cell(scalar);
            match scalar.as_str().and_then(approx) {
                Some(a) => out.push_str(&format!("{pad}{key:<18} {c}  ~ {a}\n")),
                None => out.push_str(&format!("{pad}{key:<18} {c}\n")),
            }
        }
    }
}

fn cell(v: &Json) -> String {
    match v {
        Json::String(s) => s.clone(),
        Json::Array(items) => format!("({})", items.iter().map(cell).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

/// Rows of flat objects as aligned columns. Nested objects flatten into
/// dotted column names.
fn table(out: &mut String, rows: &[Json], depth: usize) {
    let pad = "  ".repeat(depth);
    let flat: Vec<Vec<(String, String)>> = rows.iter().map(|r| flatten("", r)).collect();
    let headers: Vec<String> = flat[0].iter().map(|(k, _)| k.clone()).collect();
    let mut widths: Vec<usize> = headers.iter().map(String::len).collect();
    for row in &flat {
        for (i, (_, v)) in row.iter().enumerate().take(widths.len()) {
            widths[i] = widths[i].max(v.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let body: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        format!("{pad}{}\n", body.join("  ").trim_end())
    };
    out.push_str(&line(headers.iter().map(String::as_str).collect()));
    for row in &flat {
        out.push_str(&line(row.iter().map(|(_, v)| v.as_str()).collect()));
    }
}

fn flatten(prefix: &str, v: &Json) -> Vec<(String, String)> {
    match v {
        Json::Object(map) => map
            .iter()
            .flat_map(|(k, v)| {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v)
            })
            .collect(),
        other => vec![(prefix.to_string(), cell(other))],
    }
}

/// Fifteen-significant-digit decimal form of a rational string, shown
/// next to the exact value. `None` for integers and non-numbers.
pub fn approx(s: &str) -> Option<String> {
    let r = parse_rational(s).ok()?;
    if r.is_integer() {
        return None;
    }
    Some(sig_digits(&r, 15))
}

fn sig_digits(r: &Rational, digits: u32) -> String {
    let neg = r.is_negative();
    let (n, d) = (r.numer().abs(), r.denom().clone());
    let ten = BigInt::from(10);
    // 10^e <= n/d < 10^(e+1)
    let mut e: i64 = n.to_string().len() as i64 - d.to_string().len() as i64;
    let scaled = |e: i64| -> (BigInt, BigInt) {
        if e >= 0 {
            (n.clone(), &d * ten.pow(e as u32))
        } else {
            (&n * ten.pow((-e) as u32), d.clone())
        }
    };
    loop {
        let (p, q) = scaled(e);
        if p < q {
            e -= 1;
        } else if p >= &q * &ten {
            e += 1;
        } else {
            break;
        }
    }
    // mantissa = round(n/d * 10^(digits-1-e))
    let shift = digits as i64 - 1 - e;
    let (p, q) = scaled(-shift);
    let (quot, rem) = p.div_rem(&q);
    let mut m = if &rem * 2 >= q { quot + 1 } else { quot };
    if m.to_string().len() > digits as usize {
        m /= &ten;
        e += 1;
    }
    let mut ds = m.to_string();
    let sign = if neg { "-" } else { "" };
    if !(-6..15).contains(&e) {
        let frac = ds.split_off(1);
        let frac = frac.trim_end_matches('0');
        let frac = if frac.is_empty() { String::new() } else { format!(".{frac}") };
        return format!("{sign}{ds}{frac}e{e}");
    }
    let s = if e >= 0 {
        let int_len = e as usize + 1;
        let (i, f) = ds.split_at(int_len);
        format!("{i}.{f}")
    } else {
        format!("0.{}{ds}", "0".repeat((-e - 1) as usize))
    };
    format!("{sign}{}", s.trim_end_matches('0').trim_end_matches('.'))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn approximations() {
        assert_eq!(approx("4/9").unwrap(), "0.444444444444444");
        assert_eq!(approx("2/3").unwrap(), "0.666666666666667");
        assert_eq!(approx("-1/8").unwrap(), "-0.125");
        assert_eq!(approx("1/1000000").unwrap(), "0.000001");
        assert_eq!(approx("1/3000000").unwrap(), "3.33333333333333e-7");
        assert_eq!(approx("7"), None);
        assert_eq!(approx("[0, 1]"), None);
    }
}
