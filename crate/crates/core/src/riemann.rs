//! Tagged partitions, Riemann step functions and probes for the
//! Riemann-type Stieltjes integrals.
//!
//! The probes build specific partition families and report how far apart
//! the extreme Riemann sums can be. They produce evidence tables only: a
//! shrinking gap is consistent with integrability, a gap that stays
//! constant is a witness against it.

use num_traits::{Signed, Zero};

use crate::engine::rds_step_integral;
use crate::error::{Error, Result};
use crate::integrator::{Integrator, Set};
use crate::numerics::{int, midpoint, Rational};
use crate::pwfn::{Partition, PiecewiseFn, StepFn};

/// A partition with one sample point per closed subinterval. Adjacent
/// intervals may share a sample at their common endpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedPartition {
    partition: Partition,
    samples: Vec<Rational>,
}

impl TaggedPartition {
    pub fn new(partition: Partition, samples: Vec<Rational>) -> Result<Self> {
        if samples.len() != partition.len_intervals() {
            return Err(Error::InvalidPartition(format!(
                "{} intervals need {} samples, got {}",
                partition.len_intervals(),
                partition.len_intervals(),
                samples.len()
            )));
        }
        for ((l, r), s) in partition.intervals().zip(&samples) {
            if s < l || s > r {
                return Err(Error::InvalidPartition(format!("sample {s} outside [{l}, {r}]")));
            }
        }
        Ok(TaggedPartition { partition, samples })
    }

    /// Samples at interval midpoints.
    pub fn midpoints(partition: Partition) -> Self {
        let samples = partition.intervals().map(|(l, r)| midpoint(l, r)).collect();
        TaggedPartition { partition, samples }
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn samples(&self) -> &[Rational] {
        &self.samples
    }
}

/// `f(sample_i)` on each open interval, `f(x_i)` at the partition points.
pub fn riemann_step(f: &PiecewiseFn, tp: &TaggedPartition) -> Result<StepFn> {
    let constants = tp.samples.iter().map(|s| f.eval(s)).collect::<Result<Vec<_>>>()?;
    let values = tp.partition.points().iter().map(|x| f.eval(x)).collect::<Result<Vec<_>>>()?;
    StepFn::on_partition(&tp.partition, constants, values)
}

/// Outer bounds on the smallest and largest Riemann sum over all tag
/// choices on `p`.
pub fn sample_extremes(f: &PiecewiseFn, alpha: &Integrator, p: &Partition, width: &Rational) -> Result<(Rational, Rational)> {
    if !alpha.is_increasing() {
        return Err(Error::NotIncreasing);
    }
    if f.domain() != alpha.domain() || (p.a(), p.b()) != alpha.domain() {
        return Err(Error::domain_mismatch(f.domain(), alpha.domain()));
    }
    let mut fixed = Rational::zero();
    for x in p.points() {
        let m = alpha.mu(&Set::Point(x.clone()))?;
        if !m.is_zero() {
            fixed += f.eval(x)? * m;
        }
    }
    let mut lo = fixed.clone();
    let mut hi = fixed;
    for (l, r) in p.intervals() {
        let m = alpha.mu(&Set::Open(l.clone(), r.clone()))?;
        if m.is_zero() {
            continue;
        }
        let (fl, fh) = f.range_closed(l, r, width);
        lo += fl * &m;
        hi += fh * &m;
    }
    Ok((lo, hi))
}

/// Convenience check used by tests and the CLI: the Riemann sum for a
/// particular tagging.
pub fn riemann_sum(f: &PiecewiseFn, alpha: &Integrator, tp: &TaggedPartition) -> Result<Rational> {
    rds_step_integral(&riemann_step(f, tp)?, alpha)
}

/// One row of a probe table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeRow {
    /// Mesh bound, round number or α-mesh target, depending on the probe.
    pub param: Rational,
    /// Mesh (or α-mesh) the constructed partition actually has.
    pub achieved: Rational,
    pub intervals: usize,
    pub gap: Rational,
}

fn gap(f: &PiecewiseFn, alpha: &Integrator, p: &Partition) -> Result<Rational> {
    let (lo, hi) = sample_extremes(f, alpha, p, &Rational::zero())?;
    Ok(hi - lo)
}

/// Uniform partition of mesh at most `δ/2`, with every point that lands on
/// a jump of α nudged off it by at most a third of the step.
pub fn adversarial_partition(alpha: &Integrator, delta: &Rational) -> Result<Partition> {
    if !delta.is_positive() {
        return Err(Error::MeshUnachievable(delta.clone()));
    }
    let (a, b) = alpha.domain();
    let n = ((b - a) * int(2) / delta).ceil().to_integer();
    let n: usize = n.try_into().map_err(|_| Error::MeshUnachievable(delta.clone()))?;
    let base = Partition::uniform(a, b, n)?;
    let h = (b - a) / int(n as i64);
    let jumps = alpha.jump_points();
    let last = base.points().len() - 1;
    let pts = base
        .points()
        .iter()
        .enumerate()
        .map(|(i, x)| {
            if i == 0 || i == last || jumps.binary_search(x).is_err() {
                return x.clone();
            }
            // Offsets h/3, h/4, ... on both sides: 2(J + 1) distinct
            // candidates cannot all be among J jumps, and no offset
            // exceeds h/3, so order and mesh bound survive.
            (3..jumps.len() as i64 + 4)
                .flat_map(|k| {
                    let off = &h / int(k);
                    [x + &off, x - &off]
                })
                .find(|y| jumps.binary_search(y).is_err())
                .expect("some candidate avoids every jump")
        })
        .collect();
    Partition::new(pts)
}

/// Gap between extreme Riemann sums on jump-avoiding partitions of
/// shrinking mesh.
pub fn mrs_probe(f: &PiecewiseFn, alpha: &Integrator, meshes: &[Rational]) -> Result<Vec<ProbeRow>> {
    if !alpha.is_increasing() {
        return Err(Error::NotIncreasing);
    }
    meshes
        .iter()
        .map(|delta| {
            let p = adversarial_partition(alpha, delta)?;
            Ok(ProbeRow { param: delta.clone(), achieved: p.mesh(), intervals: p.len_intervals(), gap: gap(f, alpha, &p)? })
        })
        .collect()
}

/// Gap along successive bisections of `base`; row `k` is after `k` rounds.
pub fn rps_probe(f: &PiecewiseFn, alpha: &Integrator, base: &Partition, rounds: u32) -> Result<Vec<ProbeRow>> {
    if !alpha.is_increasing() {
        return Err(Error::NotIncreasing);
    }
    let mut p = base.clone();
    let mut rows = Vec::new();
    for k in 0..=rounds {
        if k > 0 {
            p = p.bisect_all();
        }
        rows.push(ProbeRow { param: int(k as i64), achieved: p.mesh(), intervals: p.len_intervals(), gap: gap(f, alpha, &p)? });
    }
    Ok(rows)
}

/// Cap on bisection rounds when chasing an α-mesh target.
const RRS_MAX_ROUNDS: u32 = 64;

/// A partition whose open intervals all have α-length at most `δ`. Jumps
/// of size at least `δ` become partition points first.
pub fn alpha_mesh_partition(alpha: &Integrator, delta: &Rational) -> Result<Partition> {
    if !alpha.is_increasing() {
        return Err(Error::NotIncreasing);
    }
    if !delta.is_positive() {
        return Err(Error::MeshUnachievable(delta.clone()));
    }
    let (a, b) = alpha.domain();
    let mut heavy = Vec::new();
    for x in alpha.jump_points() {
        if &alpha.mu(&Set::Point(x.clone()))? >= delta {
            heavy.push(x);
        }
    }
    let mut p = Partition::from_points(a, b, heavy)?;
    for _ in 0..RRS_MAX_ROUNDS {
        let mut mids = Vec::new();
        for (l, r) in p.intervals() {
            if &alpha.mu(&Set::Open(l.clone(), r.clone()))? > delta {
                mids.push(midpoint(l, r));
            }
        }
        if mids.is_empty() {
            return Ok(p);
        }
        p = p.refine(mids);
    }
    Err(Error::MeshUnachievable(delta.clone()))
}

/// Gap on partitions of decreasing α-mesh.
pub fn rrs_probe(f: &PiecewiseFn, alpha: &Integrator, deltas: &[Rational]) -> Result<Vec<ProbeRow>> {
    deltas
        .iter()
        .map(|delta| {
            let p = alpha_mesh_partition(alpha, delta)?;
            Ok(ProbeRow {
                param: delta.clone(),
                achieved: alpha.alpha_mesh(&p)?,
                intervals: p.len_intervals(),
                gap: gap(f, alpha, &p)?,
            })
        })
        .collect()
}
