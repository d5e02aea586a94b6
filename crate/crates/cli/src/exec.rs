use stieltjes::engine::{
    convergence_table, discrepancy, ds_integrate, is_rds_integrable, parts_check, rds_integrate, Settings,
};
use stieltjes::numerics::{max_degree, rat, set_max_degree};
use stieltjes::riemann::{mrs_probe, rps_probe, rrs_probe};
use stieltjes::{Error, Function, Partition, PiecewiseFn, Poly, Rational};
use stieltjes_dsl::{Probe, Program, Query, QueryKind, Scope};

use crate::output::{Integral, Outcome, QueryResult, Record, Row, TableRow};

pub fn default_meshes() -> Vec<Rational> {
    vec![rat(1, 10), rat(1, 100), rat(1, 1000)]
}

pub fn default_deltas() -> Vec<Rational> {
    vec![rat(1, 2), rat(1, 4), rat(1, 8)]
}

pub const DEFAULT_ROUNDS: u32 = 6;

/// Runs every query of `program` in order. The echo of each record is
/// `prefix` followed by the canonical query text.
pub fn run_program(program: &Program, settings: &Settings, prefix: &str) -> Vec<Record> {
    let scope = Scope::new(program);
    program
        .queries
        .iter()
        .map(|q| Record {
            query: format!("{prefix}{q}"),
            outcome: match run_query(&scope, q, settings) {
                Ok(r) => Outcome::Result(Box::new(r)),
                Err(e) => Outcome::Error((&e).into()),
            },
        })
        .collect()
}

pub fn run_query(scope: &Scope, q: &Query, settings: &Settings) -> Result<QueryResult, Error> {
    let (a, b) = (&q.a, &q.b);
    Ok(match &q.kind {
        QueryKind::Integrate { f, alpha } => {
            let r = rds_integrate(&scope.function(f, a, b)?, &scope.integrator(alpha, a, b)?, settings)?;
            QueryResult::Integrate((&r).into())
        }
        QueryKind::Compare { f, alpha } => {
            let f = scope.function(f, a, b)?;
            let alpha = scope.integrator(alpha, a, b)?;
            QueryResult::Compare {
                rds: rds_integrate(&f, &alpha, settings).map(|r| Integral::from(&r)).into(),
                ds: ds_integrate(&f, &alpha, settings).map(|r| Integral::from(&r)).into(),
                discrepancy: discrepancy(&f, &alpha).map(|d| d.to_string()).into(),
            }
        }
        QueryKind::Parts { alpha, beta } => {
            let pc = parts_check(&scope.integrator(alpha, a, b)?, &scope.integrator(beta, a, b)?, settings)?;
            QueryResult::Parts {
                alpha_dbeta: (&pc.alpha_dbeta).into(),
                beta_dalpha: (&pc.beta_dalpha).into(),
                lhs: (&pc.lhs).into(),
                rhs: pc.rhs.to_string(),
                correction: pc.correction.to_string(),
                holds: pc.holds(),
            }
        }
        QueryKind::Decompose { alpha } => {
            let alpha = scope.integrator(alpha, a, b)?;
            let (p, n) = alpha.jordan();
            QueryResult::Decompose {
                total_variation: alpha.total_variation().to_string(),
                saltus: (&alpha).into(),
                positive: (&p).into(),
                negative: (&n).into(),
            }
        }
        QueryKind::Check { f, alpha } => {
            let (integrable, reason) = is_rds_integrable(&scope.function(f, a, b)?, &scope.integrator(alpha, a, b)?);
            QueryResult::Check { integrable, reason }
        }
        QueryKind::Sums { probe, f, alpha, args } => {
            let f = scope.function(f, a, b)?;
            let f = f.as_piecewise()?;
            let alpha = scope.integrator(alpha, a, b)?;
            let rows = match probe {
                Probe::Mrs => mrs_probe(f, &alpha, args.meshes.as_deref().unwrap_or(&default_meshes()))?,
                Probe::Rps => {
                    let base = match &args.base {
                        Some(pts) if pts.first() != Some(a) || pts.last() != Some(b) => {
                            return Err(Error::InvalidPartition(format!("base must run from {a} to {b}")));
                        }
                        Some(pts) => Partition::new(pts.clone())?,
                        None => Partition::new(vec![a.clone(), b.clone()])?,
                    };
                    rps_probe(f, &alpha, &base, args.rounds.unwrap_or(DEFAULT_ROUNDS))?
                }
                Probe::Rrs => rrs_probe(f, &alpha, args.deltas.as_deref().unwrap_or(&default_deltas()))?,
            };
            QueryResult::Sums { probe: probe.keyword().into(), rows: rows.iter().map(Row::from).collect() }
        }
    })
}

/// `∫ x^n dα` for `n = 1..=count`. The degree cap is raised to `count`
/// for the duration of the call since the family is generated here, not
/// typed by the user.
pub fn power_table(scope: &Scope, alpha: &str, a: &Rational, b: &Rational, count: u32, settings: &Settings) -> Result<QueryResult, Error> {
    let alpha = scope.integrator(alpha, a, b)?;
    let saved = max_degree();
    set_max_degree(saved.max(count as usize));
    let fs: Result<Vec<Function>, Error> = (1..=count)
        .map(|n| PiecewiseFn::from_poly(a.clone(), b.clone(), Poly::monomial(n as usize)).map(Function::from))
        .collect();
    let results = fs.and_then(|fs| convergence_table(&fs, &alpha, settings));
    set_max_degree(saved);
    let results = results?;
    let rows = results.iter().zip(1..).map(|(r, n)| TableRow { n, integral: r.into() }).collect();
    Ok(QueryResult::Table { family: "x^n".into(), rows })
}
