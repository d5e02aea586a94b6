use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicUsize, Ordering};

use num_traits::{One, Signed, Zero};

use super::rational::{int, Rational};
use crate::error::{Error, Result};

/// Default cap on the degree of user-supplied polynomial pieces.
pub const DEFAULT_MAX_DEGREE: usize = 6;

static MAX_DEGREE: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_DEGREE);

pub fn max_degree() -> usize {
    MAX_DEGREE.load(Ordering::Relaxed)
}

/// Overrides the degree cap checked by [`Poly::new`].
pub fn set_max_degree(cap: usize) {
    MAX_DEGREE.store(cap, Ordering::Relaxed);
}

/// Polynomial with rational coefficients in ascending degree order.
///
/// The coefficient list never ends in a zero; the zero polynomial is the
/// empty list. [`Poly::new`] enforces the degree cap; arithmetic between
/// polynomials is closed and does not re-check it (products such as
/// `f * g'` inside the integration engine may exceed the cap).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        let p = Self::from_coeffs(coeffs);
        let cap = max_degree();
        match p.degree() {
            Some(d) if d > cap => Err(Error::DegreeTooHigh { degree: d, cap }),
            _ => Ok(p),
        }
    }

    /// Builds without checking the degree cap.
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Poly { coeffs: vec![int(0), int(1)] }
    }

    /// `x^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![int(0); n + 1];
        coeffs[n] = int(1);
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Constant term (zero for the zero polynomial).
    pub fn constant_term(&self) -> Rational {
        self.coeffs.first().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * int(k as i64))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Poly {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        if !self.coeffs.is_empty() {
            coeffs.push(Rational::zero());
        }
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / int(k as i64 + 1));
        }
        Poly::from_coeffs(coeffs)
    }

    /// `∫_lo^hi p(x) dx`.
    pub fn integrate(&self, lo: &Rational, hi: &Rational) -> Rational {
        let anti = self.antiderivative();
        anti.eval(hi) - anti.eval(lo)
    }

    pub fn scale(&self, r: &Rational) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c * r).collect())
    }

    pub fn pow(&self, n: u32) -> Poly {
        (0..n).fold(Poly::constant(int(1)), |acc, _| &acc * self)
    }

    /// Bound on `|p'|` over `[lo, hi]`, from the coefficient magnitudes.
    pub fn lipschitz_bound(&self, lo: &Rational, hi: &Rational) -> Rational {
        let r = if lo.abs() >= hi.abs() { lo.abs() } else { hi.abs() };
        let mut bound = Rational::zero();
        let mut rpow = Rational::one();
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            bound += c.abs() * int(k as i64) * &rpow;
            rpow *= &r;
        }
        bound
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.coeffs.len() - 1;
        let lead = &d.coeffs[dd];
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let q = &rem[i + dd] / lead;
            if !q.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] -= &q * dc;
                }
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
            None => Poly::zero(),
        }
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Square-free part with the same real roots.
    pub fn square_free(&self) -> Poly {
        if self.is_constant() {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.is_constant() {
            self.monic()
        } else {
            self.div_rem(&g).0.monic()
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
                match rhs.coeffs.get(i) {
                    Some(b) => a + b,
                    None => a,
                }
            })
            .collect();
        Poly::from_coeffs(coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::from_coeffs(coeffs)
    }
}

/// Writes the polynomial in descending degree, e.g. `x^2 - 1/3 * x + 1`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let var = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            if k == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{mag} * {var}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::rat;

    fn p(cs: &[(i64, i64)]) -> Poly {
        Poly::from_coeffs(cs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn horner_eval() {
        let sq = Poly::monomial(2);
        assert_eq!(sq.eval(&rat(1, 3)), rat(1, 9));
        assert_eq!(Poly::zero().eval(&int(7)), int(0));
        // 2x^3 - x at -1/2
        let cubic = p(&[(0, 1), (-1, 1), (0, 1), (2, 1)]);
        assert_eq!(cubic.eval(&rat(-1, 2)), rat(1, 4));
    }

    #[test]
    fn antiderivative_power_rule() {
        assert_eq!(Poly::monomial(2).antiderivative(), p(&[(0, 1), (0, 1), (0, 1), (1, 3)]));
        assert_eq!(Poly::zero().antiderivative(), Poly::zero());
        // 3x^2 + 2 -> x^3 + 2x
        assert_eq!(p(&[(2, 1), (0, 1), (3, 1)]).antiderivative(), p(&[(0, 1), (2, 1), (0, 1), (1, 1)]));
    }

    #[test]
    fn degree_cap_enforced_at_construction() {
        let coeffs = vec![int(1); DEFAULT_MAX_DEGREE + 2];
        assert!(matches!(Poly::new(coeffs), Err(Error::DegreeTooHigh { .. })));
        assert!(Poly::new(vec![int(1); DEFAULT_MAX_DEGREE + 1]).is_ok());
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let q = p(&[(1, 1), (0, 1), (0, 1)]);
        assert_eq!(q.degree(), Some(0));
        assert!(p(&[(0, 1)]).is_zero());
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)^2 (x+2)
        let a = &(&p(&[(-1, 1), (1, 1)]) * &p(&[(-1, 1), (1, 1)])) * &p(&[(2, 1), (1, 1)]);
        let (q, r) = a.div_rem(&p(&[(-1, 1), (1, 1)]));
        assert!(r.is_zero());
        assert_eq!(q.degree(), Some(2));
        let sf = a.square_free();
        assert_eq!(sf, p(&[(-2, 1), (1, 1), (1, 1)]));
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(p(&[(1, 1), (-1, 3), (1, 1)]).to_string(), "x^2 - 1/3 * x + 1");
        assert_eq!(p(&[(0, 1), (-1, 1)]).to_string(), "-x");
        assert_eq!(Poly::zero().to_string(), "0");
    }
}
