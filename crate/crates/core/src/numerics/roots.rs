//! Real-root isolation by Sturm sequences, with exact detection of rational
//! roots, and the certified range bounds built on top of it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::Poly;
use super::rational::{ceil_int, floor_int, int, lcm_of_denominators, midpoint, pow2_neg, Rational};

/// Slack used for irrational extrema when a caller asks for exact bounds.
pub const EXACT_FALLBACK_SLACK_BITS: u32 = 48;

/// A real root inside an open interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Root {
    /// The root is this rational number.
    Exact(Rational),
    /// Exactly one root lies in the open interval `(lo, hi)` and it is
    /// irrational. Neither endpoint is a root.
    Isolated { lo: Rational, hi: Rational },
}

impl Root {
    pub fn lo(&self) -> &Rational {
        match self {
            Root::Exact(r) => r,
            Root::Isolated { lo, .. } => lo,
        }
    }
}

struct Sturm {
    seq: Vec<Poly>,
}

impl Sturm {
    fn new(p: &Poly) -> Self {
        let mut seq = vec![p.clone(), p.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            seq.push(-&r);
        }
        seq.pop();
        Sturm { seq }
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.seq {
            let v = p.eval(x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Distinct roots in `(l, r]`; `l` must not be a root.
    fn count(&self, l: &Rational, r: &Rational) -> usize {
        self.variations(l).saturating_sub(self.variations(r))
    }
}

/// Primitive integer-coefficient multiple of `p` (same roots).
fn integer_leading(p: &Poly) -> BigInt {
    let lcm = lcm_of_denominators(p.coeffs());
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let lead = ints.last().cloned().unwrap_or_else(BigInt::one);
    if g.is_zero() {
        lead
    } else {
        (lead / g).abs()
    }
}

/// All distinct real roots of `p` in the open interval `(lo, hi)`, sorted.
/// Isolating boxes are refined until narrower than `box_width`.
///
/// A root is reported as [`Root::Exact`] exactly when it is rational: every
/// rational root of a primitive integer polynomial has the form `k / lead`,
/// so once a box is narrower than `1 / lead` at most one candidate needs an
/// exact check.
pub fn real_roots(p: &Poly, lo: &Rational, hi: &Rational, box_width: &Rational) -> Vec<Root> {
    if p.is_constant() || lo >= hi {
        return Vec::new();
    }
    let sf0 = p.square_free();
    let lead = integer_leading(&sf0);
    let cand_width = Rational::new(BigInt::one(), lead.clone() * 2);
    let target = if box_width.is_positive() && box_width < &cand_width {
        box_width.clone()
    } else {
        cand_width
    };

    let mut sf = sf0.clone();
    for end in [lo, hi] {
        if sf.eval(end).is_zero() {
            sf = sf.div_rem(&linear_factor(end)).0;
        }
    }
    let mut sturm = Sturm::new(&sf);
    let mut exact = Vec::new();
    let mut boxes = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone())];
    while let Some((l, r)) = stack.pop() {
        if sf.is_constant() {
            break;
        }
        let n = sturm.count(&l, &r);
        if n == 0 {
            continue;
        }
        if n == 1 && &r - &l < target {
            boxes.push((l, r));
            continue;
        }
        let m = midpoint(&l, &r);
        if sf.eval(&m).is_zero() {
            exact.push(m.clone());
            sf = sf.div_rem(&linear_factor(&m)).0;
            sturm = Sturm::new(&sf);
        }
        stack.push((m.clone(), r));
        stack.push((l, m));
    }

    let mut roots: Vec<Root> = exact.into_iter().map(Root::Exact).collect();
    let lead_r = Rational::from_integer(lead);
    for (l, r) in boxes {
        let mut found = None;
        let mut k = ceil_int(&(&l * &lead_r));
        let kmax = floor_int(&(&r * &lead_r));
        while k <= kmax {
            let c = Rational::from_integer(k.clone()) / &lead_r;
            if sf0.eval(&c).is_zero() {
                found = Some(c);
                break;
            }
            k += 1;
        }
        roots.push(match found {
            Some(c) => Root::Exact(c),
            None => Root::Isolated { lo: l, hi: r },
        });
    }
    roots.sort_by(|a, b| a.lo().cmp(b.lo()));
    roots
}

fn linear_factor(r: &Rational) -> Poly {
    Poly::from_coeffs(vec![-r.clone(), int(1)])
}

/// Outcome of scanning a polynomial for sign changes on an interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignChanges {
    /// Rational roots in the open interval; splitting there is always safe.
    pub rational: Vec<Rational>,
    /// Whether an irrational root with a sign change was found.
    pub irrational_crossing: bool,
}

/// Points in `(lo, hi)` where `p` may change sign. Irrational roots of even
/// multiplicity are not crossings and are skipped.
pub fn sign_changes(p: &Poly, lo: &Rational, hi: &Rational) -> SignChanges {
    let mut rational = Vec::new();
    let mut irrational_crossing = false;
    for root in real_roots(p, lo, hi, &Rational::zero()) {
        match root {
            Root::Exact(r) => rational.push(r),
            Root::Isolated { lo: l, hi: r } => {
                let sl = p.eval(&l).signum();
                let sr = p.eval(&r).signum();
                if sl != sr {
                    irrational_crossing = true;
                }
            }
        }
    }
    SignChanges { rational, irrational_crossing }
}

/// Outer bounds `(m, M)` for the range of `p` on `[lo, hi]`.
///
/// Endpoint values and rational critical points are evaluated exactly;
/// each irrational critical point is boxed tightly enough that its bound
/// overshoots by at most `width / 2`, so `M - m` exceeds the true range by
/// at most `width`. A non-positive `width` asks for exact bounds; those are
/// exact whenever every critical point is rational, and otherwise fall back
/// to a slack of `2^-48`.
pub fn poly_range(p: &Poly, lo: &Rational, hi: &Rational, width: &Rational) -> (Rational, Rational) {
    let a = p.eval(lo);
    let b = p.eval(hi);
    let (mut m, mut big) = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    if p.is_constant() || lo >= hi {
        return (m, big);
    }
    let slack = if width.is_positive() {
        width / int(2)
    } else {
        pow2_neg(EXACT_FALLBACK_SLACK_BITS)
    };
    let lip = p.lipschitz_bound(lo, hi);
    let box_width = if lip.is_zero() { Rational::zero() } else { &slack / &lip };
    for root in real_roots(&p.derivative(), lo, hi, &box_width) {
        let (low, high) = match root {
            Root::Exact(r) => {
                let v = p.eval(&r);
                (v.clone(), v)
            }
            Root::Isolated { lo: l, hi: r } => {
                let v = p.eval(&l);
                let spread = &lip * (&r - &l);
                (&v - &spread, &v + &spread)
            }
        };
        if low < m {
            m = low;
        }
        if high > big {
            big = high;
        }
    }
    (m, big)
}
