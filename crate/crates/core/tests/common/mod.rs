#![allow(dead_code)]

use proptest::prelude::*;
use stieltjes::numerics::{int, rat};
use stieltjes::{Chirality, Integrator, Partition, PiecewiseFn, Poly, Rational, SaltusPart, StepFn};

/// Small rational with denominator up to 12.
pub fn small_rat() -> impl Strategy<Value = Rational> {
    (-24i64..=24, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

/// Grid points on `[a, a + len]`.
pub fn points_on(a: i64, len: i64, max_inner: usize) -> impl Strategy<Value = Vec<Rational>> {
    points_on_rat(int(a), int(a + len), max_inner)
}

/// Endpoints `a`, `b` plus up to `max_inner` points of the grid of width
/// `(b-a)/24`.
pub fn points_on_rat(a: Rational, b: Rational, max_inner: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::btree_set(1i64..24, 0..=max_inner).prop_map(move |inner| {
        let step = (&b - &a) / int(24);
        let mut pts = vec![a.clone()];
        pts.extend(inner.into_iter().map(|k| &a + &step * int(k)));
        pts.push(b.clone());
        pts
    })
}

/// Points on a random domain.
pub fn grid_points(max_inner: usize) -> impl Strategy<Value = Vec<Rational>> {
    (-2i64..=1, 1i64..=3).prop_flat_map(move |(a, len)| points_on(a, len, max_inner))
}

pub fn step_on(pts: Vec<Rational>) -> impl Strategy<Value = StepFn> {
    let n = pts.len();
    (proptest::collection::vec(small_rat(), n - 1), proptest::collection::vec(small_rat(), n))
        .prop_map(move |(cs, vs)| StepFn::new(pts.clone(), cs, vs).unwrap())
}

pub fn step_fn(max_inner: usize) -> impl Strategy<Value = StepFn> {
    grid_points(max_inner).prop_flat_map(step_on)
}

/// Quadratic pieces always turn at a rational point, so any function made
/// of them is a valid integrator.
pub fn quad_piece() -> impl Strategy<Value = Poly> {
    (small_rat(), small_rat(), prop_oneof![Just(int(0)), small_rat()])
        .prop_map(|(c0, c1, c2)| Poly::from_coeffs(vec![c0, c1, c2]))
}

pub fn linear_piece() -> impl Strategy<Value = Poly> {
    (small_rat(), small_rat()).prop_map(|(c0, c1)| Poly::from_coeffs(vec![c0, c1]))
}

/// `None` keeps the value continuous from the left piece.
fn assemble(pts: Vec<Rational>, pieces: Vec<Poly>, vals: Vec<Option<Rational>>) -> PiecewiseFn {
    let values = pts
        .iter()
        .enumerate()
        .zip(vals)
        .map(|((i, x), v)| match v {
            Some(v) => v,
            None if i == 0 => pieces[0].eval(x),
            None => pieces[i - 1].eval(x),
        })
        .collect();
    PiecewiseFn::new(pts, pieces, values).unwrap()
}

pub fn piecewise_on(pts: Vec<Rational>, piece: BoxedStrategy<Poly>) -> impl Strategy<Value = PiecewiseFn> {
    let n = pts.len();
    (
        proptest::collection::vec(piece, n - 1),
        proptest::collection::vec(proptest::option::weighted(0.6, small_rat()), n),
    )
        .prop_map(move |(pieces, vals)| assemble(pts.clone(), pieces, vals))
}

pub fn piecewise_quad(max_inner: usize) -> impl Strategy<Value = PiecewiseFn> {
    grid_points(max_inner).prop_flat_map(|pts| piecewise_on(pts, quad_piece().boxed()))
}

pub fn piecewise_linear(max_inner: usize) -> impl Strategy<Value = PiecewiseFn> {
    grid_points(max_inner).prop_flat_map(|pts| piecewise_on(pts, linear_piece().boxed()))
}

pub fn integrator_on(pts: Vec<Rational>) -> impl Strategy<Value = Integrator> {
    piecewise_on(pts, quad_piece().boxed()).prop_map(|pw| Integrator::from_piecewise(&pw).unwrap())
}

pub fn integrator(max_inner: usize) -> impl Strategy<Value = Integrator> {
    grid_points(max_inner).prop_flat_map(integrator_on)
}

/// Increasing integrator: nondecreasing linear pieces, upward jumps.
pub fn increasing_on(pts: Vec<Rational>) -> impl Strategy<Value = Integrator> {
    let n = pts.len();
    (
        proptest::collection::vec((0i64..=6, 1i64..=4), n - 1),
        proptest::collection::vec((0i64..=4, 0i64..=4), n),
    )
        .prop_map(move |(slopes, jumps)| {
            let pts = pts.clone();
            let mut pieces = Vec::new();
            let mut values = Vec::new();
            let mut level = int(0);
            for i in 0..pts.len() {
                let (mut down, mut up) = jumps[i];
                if i == 0 {
                    down = 0;
                }
                if i == pts.len() - 1 {
                    up = 0;
                }
                level += rat(down, 2);
                values.push(level.clone());
                level += rat(up, 2);
                if i + 1 < pts.len() {
                    let slope = rat(slopes[i].0, slopes[i].1);
                    let c0 = &level - &slope * &pts[i];
                    pieces.push(Poly::from_coeffs(vec![c0, slope.clone()]));
                    level += slope * (&pts[i + 1] - &pts[i]);
                }
            }
            Integrator::from_piecewise(&PiecewiseFn::new(pts, pieces, values).unwrap()).unwrap()
        })
}

pub fn increasing_integrator(max_inner: usize) -> impl Strategy<Value = Integrator> {
    grid_points(max_inner).prop_flat_map(increasing_on)
}

/// Only jumps, at grid points of `[a, a + len]`.
pub fn saltus_on(a: i64, len: i64, max_jumps: usize) -> impl Strategy<Value = Integrator> {
    (points_on(a, len, max_jumps), points_on(a, len, max_jumps), proptest::collection::vec(small_rat(), 2 * max_jumps + 4))
        .prop_map(move |(lp, rp, ws)| {
            let mut ws = ws.into_iter().filter(|w| *w != int(0)).chain(std::iter::repeat(int(1)));
            let left: Vec<_> = lp[..lp.len() - 1].iter().map(|x| (x.clone(), ws.next().unwrap())).collect();
            let right: Vec<_> = rp[1..].iter().map(|x| (x.clone(), ws.next().unwrap())).collect();
            let a_r = int(a);
            let b_r = &a_r + int(len);
            Integrator::pure_saltus(
                a_r,
                b_r,
                SaltusPart::new(Chirality::Left, left, int(0)).unwrap(),
                SaltusPart::new(Chirality::Right, right, int(0)).unwrap(),
            )
            .unwrap()
        })
}

/// A rational strictly inside `(a, b)`, on a grid of width `(b-a)/48`.
pub fn interior(a: &Rational, b: &Rational, k: u32) -> Rational {
    let k = 1 + (k % 47) as i64;
    a + (b - a) * rat(k, 48)
}

/// A rational in `[a, b]` on a grid of width `(b-a)/96`, which hits the
/// breakpoints of the generated functions.
pub fn inside(a: &Rational, b: &Rational, k: u32) -> Rational {
    a + (b - a) * rat((k % 97) as i64, 96)
}

pub fn partition_of(pts: &[Rational]) -> Partition {
    Partition::new(pts.to_vec()).unwrap()
}
