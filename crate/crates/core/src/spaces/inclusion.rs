//! Exact checks of the basic facts about `<_d` on rational points.
//!
//! Each check returns `None` when its premise does not hold for the given
//! sample, and otherwise whether the conclusion held.

use crate::rational::Rat;
use crate::schedule::PrecisionSchedule;

use super::{formally_included, rat_dist, BallIndex, RationalVectorSpace, Space};

fn inc(space: &RationalVectorSpace, sch: &PrecisionSchedule, a: &BallIndex<Vec<Rat>>, b: &BallIndex<Vec<Rat>>) -> bool {
    formally_included(space, sch, a, b, 0).map(|v| v.confirmed()).unwrap_or(false)
}

fn dist(space: &RationalVectorSpace, a: &[Rat], b: &[Rat]) -> Rat {
    rat_dist(space.metric(), a, b).expect("rational distance")
}

/// `(a, m) <_d (a, m)` is never confirmed.
pub fn irreflexive(space: &RationalVectorSpace, sch: &PrecisionSchedule, a: &BallIndex<Vec<Rat>>) -> bool {
    !inc(space, sch, a, a)
}

/// `a <_d b` and `b <_d c` give `a <_d c`.
pub fn transitive(
    space: &RationalVectorSpace,
    sch: &PrecisionSchedule,
    a: &BallIndex<Vec<Rat>>,
    b: &BallIndex<Vec<Rat>>,
    c: &BallIndex<Vec<Rat>>,
) -> Option<bool> {
    (inc(space, sch, a, b) && inc(space, sch, b, c)).then(|| inc(space, sch, a, c))
}

/// `a <_d b` and `d(a, x) <= r_{a.radius}` give `d(b, x) < r_{b.radius}`:
/// the closed ball of `a` lies inside the open ball of `b`.
pub fn closed_ball_inside(
    space: &RationalVectorSpace,
    sch: &PrecisionSchedule,
    a: &BallIndex<Vec<Rat>>,
    b: &BallIndex<Vec<Rat>>,
    x: &[Rat],
) -> Option<bool> {
    let premise = inc(space, sch, a, b) && dist(space, &a.center, x) <= sch.r(a.radius);
    premise.then(|| dist(space, &b.center, x) < sch.r(b.radius))
}

/// For `x̄` inside the ball `b`, some `m` with `2r_m < r_{b.radius} − d(b, x̄)`.
pub fn shrink_radius(
    space: &RationalVectorSpace,
    sch: &PrecisionSchedule,
    b: &BallIndex<Vec<Rat>>,
    xbar: &[Rat],
) -> Option<u64> {
    let margin = sch.r(b.radius) - dist(space, &b.center, xbar);
    margin.is_positive().then(|| sch.find_m_below(&(margin / Rat::from(3))))
}

/// With `m = shrink_radius(b, x̄)`, every `x` with `d(x̄, x) < r_m` has
/// `(x, m) <_d b`.
pub fn shrunk_ball_included(
    space: &RationalVectorSpace,
    sch: &PrecisionSchedule,
    b: &BallIndex<Vec<Rat>>,
    xbar: &[Rat],
    x: &[Rat],
) -> Option<bool> {
    let m = shrink_radius(space, sch, b, xbar)?;
    (dist(space, xbar, x) < sch.r(m)).then(|| inc(space, sch, &BallIndex::new(x.to_vec(), m), b))
}
