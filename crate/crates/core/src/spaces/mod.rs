//! Semi-computable metric spaces and formal inclusion of balls.
//!
//! A space indexes a dense set of points and semi-decides the strict
//! distance predicate `d(γ(l), γ(l′)) < bound`. Every bundled instance has
//! rational points, so [`Space::dist_lt`] answers exactly at stage 0; the
//! stage argument keeps the engines honest for spaces that only confirm late.

pub mod discrete;
pub mod finite;
pub mod inclusion;
pub mod vector;

use std::fmt::Debug;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certified::{cert_dist_lt, Surd};
use crate::rational::Rat;
use crate::renum::{Elem, REnum};
use crate::schedule::PrecisionSchedule;

pub use discrete::{AbsRationalSpace, DiscreteNatSpace, FractionGridSpace};
pub use finite::{FiniteInstance, InstanceError};
pub use vector::RationalVectorSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Max,
    Euclidean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Confirmed,
    Unknown,
}

impl Verdict {
    pub fn confirmed(self) -> bool {
        self == Verdict::Confirmed
    }

    fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Confirmed
        } else {
            Verdict::Unknown
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// Header description of a space, as written to system files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SpaceDescriptor {
    Rational { dim: usize, metric: MetricKind },
    Nat,
    FractionGrid,
    AbsRational,
}

/// Index types that can be written to and read from system files.
pub trait IndexValue: Elem + Debug + Serialize + DeserializeOwned {}
impl<T: Elem + Debug + Serialize + DeserializeOwned> IndexValue for T {}

pub trait Space: Send + Sync + 'static {
    type Index: IndexValue;

    fn dim(&self) -> usize;

    fn metric(&self) -> MetricKind;

    /// A total surjection `ℕ → dom(γ)`; repetitions are allowed.
    fn index_of_code(&self, code: u64) -> Self::Index;

    /// `γ(i)` as exact rational coordinates.
    fn point(&self, i: &Self::Index) -> Result<Vec<Rat>, SpaceError>;

    fn descriptor(&self) -> SpaceDescriptor;

    /// Semi-decides `d(γ(a), γ(b)) < bound`.
    fn dist_lt(&self, a: &Self::Index, b: &Self::Index, bound: &Rat, _stage: u64) -> Result<Verdict, SpaceError> {
        let (pa, pb) = (self.point(a)?, self.point(b)?);
        Ok(Verdict::from_bool(rat_dist_lt(self.metric(), &pa, &pb, bound)))
    }

    /// Decides `γ(a) = γ(b)`.
    fn same_point(&self, a: &Self::Index, b: &Self::Index) -> Result<bool, SpaceError> {
        Ok(self.point(a)? == self.point(b)?)
    }
}

pub type SpaceRef<I> = Arc<dyn Space<Index = I>>;

/// `W_s = {index_of_code(0), …, index_of_code(s)}`.
pub fn indices<I: IndexValue>(space: &SpaceRef<I>) -> REnum<I> {
    let space = space.clone();
    REnum::from_stage_fn(move |s| Some(space.index_of_code(s)))
}

/// Exact `d(a, b) < bound` between rational points.
pub fn rat_dist_lt(metric: MetricKind, a: &[Rat], b: &[Rat], bound: &Rat) -> bool {
    assert_eq!(a.len(), b.len(), "dimension mismatch");
    match metric {
        MetricKind::Max => a.iter().zip(b).all(|(x, y)| &(x - y).abs() < bound),
        MetricKind::Euclidean => {
            let sq: Rat = a.iter().zip(b).map(|(x, y)| (x - y).square()).sum();
            sq < bound.square()
        }
    }
}

/// Exact distance when it is rational (always for `Max`, and for
/// `Euclidean` in dimension 1).
pub fn rat_dist(metric: MetricKind, a: &[Rat], b: &[Rat]) -> Option<Rat> {
    match metric {
        MetricKind::Max => Some(a.iter().zip(b).map(|(x, y)| (x - y).abs()).max().unwrap_or_default()),
        MetricKind::Euclidean if a.len() == 1 => Some((&a[0] - &b[0]).abs()),
        MetricKind::Euclidean => None,
    }
}

/// `x ∈ B(γ(i), bound)` for a certified point `x`.
pub fn ball_contains<I: IndexValue>(
    space: &SpaceRef<I>,
    center: &I,
    bound: &Rat,
    x: &[Surd],
) -> Result<Option<bool>, SpaceError> {
    let c = space.point(center)?;
    Ok(cert_dist_lt(space.metric(), x, &c, bound))
}

/// The ball `B(γ(center), r_radius)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BallIndex<I> {
    pub center: I,
    pub radius: u64,
}

impl<I> BallIndex<I> {
    pub fn new(center: I, radius: u64) -> Self {
        BallIndex { center, radius }
    }
}

/// Semi-decides `(γ(a.center), a.radius) <_d (γ(b.center), b.radius)`, i.e.
/// `d(γ(b.center), γ(a.center)) < r_{b.radius} − r_{a.radius}`. A
/// non-positive margin can never be confirmed.
pub fn formally_included<I: IndexValue>(
    space: &dyn Space<Index = I>,
    schedule: &PrecisionSchedule,
    a: &BallIndex<I>,
    b: &BallIndex<I>,
    stage: u64,
) -> Result<Verdict, SpaceError> {
    let margin = schedule.r(b.radius) - schedule.r(a.radius);
    if !margin.is_positive() {
        // still validate the indices
        space.point(&a.center)?;
        space.point(&b.center)?;
        return Ok(Verdict::Unknown);
    }
    space.dist_lt(&b.center, &a.center, &margin, stage)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn scalar() -> RationalVectorSpace {
        RationalVectorSpace::new(1, MetricKind::Max)
    }

    fn b(x: Rat, m: u64) -> BallIndex<Vec<Rat>> {
        BallIndex::new(vec![x], m)
    }

    #[test]
    fn dist_lt_examples() {
        let max2 = RationalVectorSpace::new(2, MetricKind::Max);
        let o = vec![Rat::zero(), Rat::zero()];
        let p = vec![rat(3, 2), rat(1, 1)];
        assert_eq!(max2.dist_lt(&o, &p, &rat(2, 1), 0), Ok(Verdict::Confirmed));
        for stage in [0, 10, 1000] {
            assert_eq!(max2.dist_lt(&o, &p, &rat(3, 2), stage), Ok(Verdict::Unknown));
        }
        let euc = RationalVectorSpace::new(2, MetricKind::Euclidean);
        let q = vec![rat(3, 1), rat(4, 1)];
        assert_eq!(euc.dist_lt(&o, &q, &rat(6, 1), 0), Ok(Verdict::Confirmed));
        assert_eq!(euc.dist_lt(&o, &q, &rat(5, 1), 0), Ok(Verdict::Unknown));
    }

    #[test]
    fn invalid_index_is_an_error() {
        let max2 = RationalVectorSpace::new(2, MetricKind::Max);
        let bad = vec![Rat::zero()];
        assert!(matches!(max2.dist_lt(&bad, &bad, &rat(1, 1), 0), Err(SpaceError::InvalidIndex(_))));
    }

    #[test]
    fn formal_inclusion_examples() {
        let s = scalar();
        let d = PrecisionSchedule::dyadic();
        let inc = |a, bb| formally_included(&s, &d, &a, &bb, 0).unwrap();
        assert_eq!(inc(b(Rat::zero(), 2), b(Rat::zero(), 1)), Verdict::Confirmed);
        assert_eq!(inc(b(rat(1, 1), 1), b(Rat::zero(), 0)), Verdict::Unknown);
        assert_eq!(inc(b(rat(1, 4), 3), b(Rat::zero(), 1)), Verdict::Confirmed);
        assert_eq!(inc(b(rat(1, 4), 1), b(rat(1, 4), 1)), Verdict::Unknown);
    }
}
