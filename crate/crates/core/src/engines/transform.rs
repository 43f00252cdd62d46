//! Conversions between metric and topological systems, and the formal
//! intersection table of a space.
//!
//! All fibers are lazy: a fiber at stage `s` walks candidates with codes and
//! precision indices up to `s`, checking the cheap margin conditions first.

use std::sync::Arc;

use crate::renum::REnum;
use crate::schedule::PrecisionSchedule;
use crate::spaces::{BallIndex, IndexValue, Space, SpaceRef};
use crate::systems::{ApproxSystem, FiberRelation, Flavor};
use crate::tupling::untuple;

fn dist_confirmed<I: IndexValue>(space: &dyn Space<Index = I>, a: &I, b: &I, bound: &crate::Rat, s: u64) -> bool {
    space.dist_lt(a, b, bound, s).map(|v| v.confirmed()).unwrap_or(false)
}

/// `S′ = {(k, m, l′, n′) | ∃l, n ((k, m, l, n) ∈ S ∧ (β(l), n) <_e (β(l′), n′))}`.
pub fn metric_to_topological<I: IndexValue, J: IndexValue>(sys: &ApproxSystem<I, J>) -> ApproxSystem<I, J> {
    let inner = sys.clone();
    let rel = FiberRelation::fibers(sys.source.clone(), move |k: &I, m, n2| {
        let (sys, k) = (inner.clone(), k.clone());
        REnum::from_approximations(move |s| {
            let (sys, k) = (sys.clone(), k.clone());
            let rn2 = sys.schedule.r(n2);
            let sch = sys.schedule.clone();
            (0..=s)
                .filter_map(move |n| {
                    let margin = &rn2 - sch.r(n);
                    margin.is_positive().then_some((n, margin))
                })
                .flat_map({
                    let sys = sys.clone();
                    move |(n, margin)| {
                        let tgt = sys.target.clone();
                        sys.fiber(&k, m, n).iter(s).flat_map(move |l| {
                            let (tgt, margin) = (tgt.clone(), margin.clone());
                            (0..=s)
                                .map({
                                    let tgt = tgt.clone();
                                    move |c| tgt.index_of_code(c)
                                })
                                .filter(move |l2| dist_confirmed(tgt.as_ref(), l2, &l, &margin, s))
                        })
                    }
                })
        })
    });
    ApproxSystem::new(
        sys.source.clone(),
        sys.target.clone(),
        sys.schedule.clone(),
        Flavor::Topological,
        format!("m2t({})", sys.label),
        rel,
    )
}

/// `S′ = {(k′, m′, l, n) | k′ ∈ K ∧ ∃k, m ((k, m, l, n) ∈ S ∧ (α(k′), m′) <_d (α(k), m))}`.
pub fn topological_to_metric<I: IndexValue, J: IndexValue>(sys: &ApproxSystem<I, J>) -> ApproxSystem<I, J> {
    let inner = sys.clone();
    let rel = FiberRelation::fibers(sys.source.clone(), move |k2: &I, m2, n| {
        if inner.source.point(k2).is_err() {
            return REnum::empty();
        }
        let (sys, k2) = (inner.clone(), k2.clone());
        REnum::from_approximations(move |s| {
            let (sys, k2) = (sys.clone(), k2.clone());
            let rm2 = sys.schedule.r(m2);
            let sch = sys.schedule.clone();
            (0..=s)
                .filter_map(move |m| {
                    let margin = sch.r(m) - &rm2;
                    margin.is_positive().then_some((m, margin))
                })
                .flat_map({
                    let sys = sys.clone();
                    move |(m, margin)| {
                        let (sys, k2) = (sys.clone(), k2.clone());
                        let src = sys.source.clone();
                        (0..=s)
                            .map(move |c| src.index_of_code(c))
                            .filter({
                                let src = sys.source.clone();
                                move |k| dist_confirmed(src.as_ref(), k, &k2, &margin, s)
                            })
                            .flat_map(move |k| sys.fiber(&k, m, n).iter(s))
                    }
                })
        })
    });
    ApproxSystem::new(
        sys.source.clone(),
        sys.target.clone(),
        sys.schedule.clone(),
        Flavor::Metric,
        format!("t2m({})", sys.label),
        rel,
    )
}

/// Balls `(k, m)` formally included in both `b1` and `b2`; stage `s` tries
/// codes and radius indices up to `s`.
pub fn intersection_fiber<I: IndexValue>(
    space: SpaceRef<I>,
    schedule: PrecisionSchedule,
    b1: BallIndex<I>,
    b2: BallIndex<I>,
) -> REnum<BallIndex<I>> {
    REnum::from_approximations(move |s| {
        let (space, schedule, b1, b2) = (space.clone(), schedule.clone(), b1.clone(), b2.clone());
        (0..=s).flat_map(move |m| {
            let (space, schedule, b1, b2) = (space.clone(), schedule.clone(), b1.clone(), b2.clone());
            let rm = schedule.r(m);
            let e1 = schedule.r(b1.radius) - &rm;
            let e2 = schedule.r(b2.radius) - &rm;
            let live = e1.is_positive() && e2.is_positive();
            (0..=s).filter(move |_| live).filter_map(move |c| {
                let k = space.index_of_code(c);
                let ok = dist_confirmed(space.as_ref(), &b1.center, &k, &e1, s)
                    && dist_confirmed(space.as_ref(), &b2.center, &k, &e2, s);
                ok.then(|| BallIndex::new(k, m))
            })
        })
    })
}

pub type IntersectionTriple<I> = (BallIndex<I>, BallIndex<I>, BallIndex<I>);

/// `H = {((k₁, m₁), (k₂, m₂), (k, m)) | (α(k), m) <_d (α(k₁), m₁) ∧ (α(k), m) <_d (α(k₂), m₂)}`.
/// Stage `t` decodes `(code(k₁), m₁, code(k₂), m₂, s)` and emits the
/// intersection fiber at stage `s`.
pub fn intersection_h<I: IndexValue>(space: SpaceRef<I>, schedule: PrecisionSchedule) -> REnum<IntersectionTriple<I>> {
    REnum::from_batches(move |t| {
        let v = untuple(t, 5);
        let b1 = BallIndex::new(space.index_of_code(v[0]), v[1]);
        let b2 = BallIndex::new(space.index_of_code(v[2]), v[3]);
        intersection_fiber(space.clone(), schedule.clone(), b1.clone(), b2.clone())
            .iter(v[4])
            .map(move |b| (b1.clone(), b2.clone(), b))
    })
}

/// Semi-decides membership in `H` at `stage`.
pub fn in_intersection_h<I: IndexValue>(
    space: &SpaceRef<I>,
    schedule: &PrecisionSchedule,
    t: &IntersectionTriple<I>,
    stage: u64,
) -> bool {
    let inc = |outer: &BallIndex<I>| {
        crate::spaces::formally_included(space.as_ref(), schedule, &t.2, outer, stage)
            .map(|v| v.confirmed())
            .unwrap_or(false)
    };
    inc(&t.0) && inc(&t.1)
}

/// A scalar rational space, for callers that only need `ℚ`.
pub fn scalar_space() -> SpaceRef<Vec<crate::Rat>> {
    Arc::new(crate::spaces::RationalVectorSpace::scalar())
}
