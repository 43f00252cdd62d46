//! Certified real points for test oracles.
//!
//! A [`Surd`] is `a + b·√c` with rational `a, b, c` and `c >= 0`. Comparisons
//! with rationals are exact, and surds over the same radicand form a field, so
//! the probe functions used by the condition checks (sums, products, squares,
//! halving) stay exact on points like `√2` or `√(3/10)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::rational::Rat;
use crate::spaces::MetricKind;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Surd {
    a: Rat,
    b: Rat,
    c: Rat,
}

fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn sign_of(r: &Rat) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl Surd {
    /// `a + b·√c`. Panics if `c < 0`.
    pub fn new(a: Rat, b: Rat, c: Rat) -> Self {
        assert!(!c.is_negative(), "negative radicand");
        if b.is_zero() || c.is_zero() {
            return Surd::rational(a);
        }
        if let (Some(p), Some(q)) = (exact_sqrt(c.numer()), exact_sqrt(c.denom())) {
            return Surd::rational(a + b * Rat::new(p, q));
        }
        Surd { a, b, c }
    }

    pub fn rational(a: Rat) -> Self {
        Surd { a, b: Rat::zero(), c: Rat::zero() }
    }

    /// `√c`.
    pub fn sqrt(c: Rat) -> Self {
        Surd::new(Rat::zero(), Rat::one(), c)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        self.is_rational().then_some(&self.a)
    }

    pub fn radicand(&self) -> Option<&Rat> {
        (!self.is_rational()).then_some(&self.c)
    }

    pub fn signum(&self) -> i8 {
        let (sa, sb) = (sign_of(&self.a), sign_of(&self.b));
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a² with b²c
        let lhs = self.a.square();
        let rhs = self.b.square() * &self.c;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    fn common_radicand(&self, other: &Surd) -> Option<Rat> {
        match (self.radicand(), other.radicand()) {
            (None, None) => Some(Rat::zero()),
            (Some(c), None) | (None, Some(c)) => Some(c.clone()),
            (Some(c), Some(d)) if c == d => Some(c.clone()),
            _ => None,
        }
    }

    /// `None` when the radicands differ.
    pub fn checked_add(&self, other: &Surd) -> Option<Surd> {
        let c = self.common_radicand(other)?;
        Some(Surd::new(&self.a + &other.a, &self.b + &other.b, c))
    }

    pub fn checked_sub(&self, other: &Surd) -> Option<Surd> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Surd) -> Option<Surd> {
        let c = self.common_radicand(other)?;
        let a = &self.a * &other.a + &self.b * &other.b * &c;
        let b = &self.a * &other.b + &self.b * &other.a;
        Some(Surd::new(a, b, c))
    }

    pub fn add_rat(&self, q: &Rat) -> Surd {
        Surd { a: &self.a + q, ..self.clone() }
    }

    pub fn mul_rat(&self, q: &Rat) -> Surd {
        Surd::new(&self.a * q, &self.b * q, self.c.clone())
    }

    pub fn neg(&self) -> Surd {
        Surd { a: -&self.a, b: -&self.b, c: self.c.clone() }
    }

    pub fn abs(&self) -> Surd {
        if self.signum() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn square(&self) -> Surd {
        self.checked_mul(self).expect("same radicand")
    }

    pub fn cmp_rat(&self, q: &Rat) -> Ordering {
        self.add_rat(&-q).signum().cmp(&0)
    }

    pub fn lt_rat(&self, q: &Rat) -> bool {
        self.cmp_rat(q) == Ordering::Less
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * self.c.to_f64().sqrt()
    }
}

impl From<Rat> for Surd {
    fn from(q: Rat) -> Self {
        Surd::rational(q)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}·√({})", self.b, self.c)
        } else {
            write!(f, "{} + {}·√({})", self.a, self.b, self.c)
        }
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A certified point of `ℝ^p`.
pub type CertPoint = Vec<Surd>;

pub fn cert_point(q: &[Rat]) -> CertPoint {
    q.iter().cloned().map(Surd::rational).collect()
}

/// Exact decision of `d(x, q) < bound`; `None` if the components of `x`
/// mix radicands in a way the metric cannot handle.
pub fn cert_dist_lt(metric: MetricKind, x: &[Surd], q: &[Rat], bound: &Rat) -> Option<bool> {
    assert_eq!(x.len(), q.len(), "dimension mismatch");
    match metric {
        MetricKind::Max => Some(x.iter().zip(q).all(|(xi, qi)| {
            let diff = xi.add_rat(&-qi);
            diff.lt_rat(bound) && diff.neg().lt_rat(bound)
        })),
        MetricKind::Euclidean => {
            let mut acc = Surd::rational(Rat::zero());
            for (xi, qi) in x.iter().zip(q) {
                acc = acc.checked_add(&xi.add_rat(&-qi).square())?;
            }
            Some(acc.lt_rat(&bound.square()))
        }
    }
}

/// Same as [`cert_dist_lt`] between two certified points.
pub fn cert_dist_lt_cert(metric: MetricKind, x: &[Surd], y: &[Surd], bound: &Rat) -> Option<bool> {
    assert_eq!(x.len(), y.len(), "dimension mismatch");
    let diff: Option<Vec<Surd>> = x.iter().zip(y).map(|(a, b)| a.checked_sub(b)).collect();
    let zero = vec![Rat::zero(); x.len()];
    cert_dist_lt(metric, &diff?, &zero, bound)
}
