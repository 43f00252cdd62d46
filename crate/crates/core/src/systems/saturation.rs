//! Saturation, and moving between index-level and point-level systems.
//!
//! A system is saturated when membership of `(k, m, l, n)` depends only on
//! the decoded points `α(k)` and `β(l)`.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::rational::Rat;
use crate::renum::REnum;
use crate::schedule::PrecisionSchedule;
use crate::spaces::{IndexValue, SpaceRef};

use super::{ApproxSystem, FiberRelation, Flavor, Quad, SystemError};

/// A quadruple over decoded points.
pub type PointQuad = Quad<Vec<Rat>, Vec<Rat>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SatBounds {
    pub code_bound: u64,
    pub max_m: u64,
    pub max_n: u64,
    pub stage: u64,
}

impl Default for SatBounds {
    fn default() -> Self {
        SatBounds { code_bound: 20, max_m: 2, max_n: 2, stage: 50 }
    }
}

/// `present ∈ S` and `missing ∉ S` although their balls decode identically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturationWitness<I, J> {
    pub present: Quad<I, J>,
    pub missing: Quad<I, J>,
}

impl<I: fmt::Debug, J: fmt::Debug> fmt::Display for SaturationWitness<I, J> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ∈ S but {} ∉ S", self.present, self.missing)
    }
}

fn distinct_codes<I: IndexValue>(space: &SpaceRef<I>, bound: u64) -> Vec<I> {
    let mut seen = HashSet::new();
    (0..=bound).map(|c| space.index_of_code(c)).filter(|i| seen.insert(i.clone())).collect()
}

fn eq_available<I: IndexValue>(space: &SpaceRef<I>) -> Result<(), SystemError> {
    let i = space.index_of_code(0);
    space.same_point(&i, &i).map(|_| ()).map_err(|e| SystemError::Unsupported(format!("point equality: {e}")))
}

/// Searches codes `<= code_bound`, `m <= max_m`, `n <= max_n` for
/// `(k, m, l, n) ∈ S` with `α(k) = α(k̄)`, `β(l) = β(l̄)` and
/// `(k̄, m, l̄, n) ∉ S`, reading `S` up to `stage`.
pub fn is_saturated<I: IndexValue, J: IndexValue>(
    sys: &ApproxSystem<I, J>,
    b: &SatBounds,
) -> Result<Vec<SaturationWitness<I, J>>, SystemError> {
    eq_available(&sys.source)?;
    eq_available(&sys.target)?;
    let ks = distinct_codes(&sys.source, b.code_bound);
    let ls = distinct_codes(&sys.target, b.code_bound);
    let mut out = Vec::new();
    for k in &ks {
        let mut kbars = vec![k.clone()];
        for other in &ks {
            if other != k && sys.source.same_point(k, other)? {
                kbars.push(other.clone());
            }
        }
        for m in 0..=b.max_m {
            for n in 0..=b.max_n {
                for l in sys.fiber(k, m, n).approx(b.stage) {
                    let mut lbars = vec![l.clone()];
                    for other in &ls {
                        if other != &l && sys.target.same_point(&l, other)? {
                            lbars.push(other.clone());
                        }
                    }
                    for kb in &kbars {
                        let fib = sys.fiber(kb, m, n).approx(b.stage);
                        for lb in &lbars {
                            if (kb, lb) != (k, &l) && !fib.contains(lb) {
                                out.push(SaturationWitness {
                                    present: Quad::new(k.clone(), m, l.clone(), n),
                                    missing: Quad::new(kb.clone(), m, lb.clone(), n),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The closure of `S` under replacing indices by indices of the same points.
/// At stage `s`, the fiber of `(k, m, n)` collects the stage-`s` fibers of
/// every `k′ ∈ {k} ∪ W_s` with `α(k′) = α(k)`, together with every target
/// index in `W_s` naming the same point as one of their elements.
pub fn saturate<I: IndexValue, J: IndexValue>(sys: &ApproxSystem<I, J>) -> Result<ApproxSystem<I, J>, SystemError> {
    eq_available(&sys.source)?;
    eq_available(&sys.target)?;
    let inner = sys.clone();
    let rel = FiberRelation::fibers(sys.source.clone(), move |k: &I, m, n| {
        let (sys, k) = (inner.clone(), k.clone());
        REnum::from_approximations(move |s| {
            let src = sys.source.clone();
            let tgt = sys.target.clone();
            let mut ks = vec![k.clone()];
            ks.extend(
                (0..=s).map(|c| src.index_of_code(c)).filter(|k2| k2 != &k && src.same_point(&k, k2).unwrap_or(false)),
            );
            let mut out: Vec<J> = Vec::new();
            let mut seen = HashSet::new();
            for k2 in &ks {
                for l in sys.fiber(k2, m, n).iter(s) {
                    if !seen.insert(l.clone()) {
                        continue;
                    }
                    for c in 0..=s {
                        let l2 = tgt.index_of_code(c);
                        if l2 != l && tgt.same_point(&l, &l2).unwrap_or(false) && seen.insert(l2.clone()) {
                            out.push(l2);
                        }
                    }
                    out.push(l);
                }
            }
            out
        })
    });
    let label = format!("saturate({})", sys.label);
    Ok(ApproxSystem::new(sys.source.clone(), sys.target.clone(), sys.schedule.clone(), sys.flavor, label, rel))
}

/// Lifts a point-level system given by a decidable predicate on
/// `(α(k), m, β(l), n)`. Fibers enumerate target indices in code order.
pub fn lift_point_system<I, J, F>(
    source: SpaceRef<I>,
    target: SpaceRef<J>,
    schedule: PrecisionSchedule,
    pred: F,
) -> ApproxSystem<I, J>
where
    I: IndexValue,
    J: IndexValue,
    F: Fn(&[Rat], u64, &[Rat], u64) -> bool + Send + Sync + 'static,
{
    let pred = Arc::new(pred);
    let (src, tgt) = (source.clone(), target.clone());
    let rel = FiberRelation::fibers(source.clone(), move |k: &I, m, n| {
        let Ok(x) = src.point(k) else { return REnum::empty() };
        let (tgt, pred) = (tgt.clone(), pred.clone());
        REnum::from_stage_fn(move |c| {
            let l = tgt.index_of_code(c);
            let y = tgt.point(&l).ok()?;
            pred(&x, m, &y, n).then_some(l)
        })
    });
    ApproxSystem::new(source, target, schedule, Flavor::Metric, "lift", rel)
}

/// Lifts an enumerated point-level set `S₀`: `(k, m, l, n)` is included once
/// `(α(k), m, β(l), n)` has been enumerated.
pub fn lift_point_set<I: IndexValue, J: IndexValue>(
    source: SpaceRef<I>,
    target: SpaceRef<J>,
    schedule: PrecisionSchedule,
    s0: REnum<PointQuad>,
) -> ApproxSystem<I, J> {
    let (src, tgt) = (source.clone(), target.clone());
    let rel = FiberRelation::fibers(source.clone(), move |k: &I, m, n| {
        let Ok(x) = src.point(k) else { return REnum::empty() };
        let (tgt, s0) = (tgt.clone(), s0.clone());
        REnum::from_approximations(move |s| {
            let ys: Vec<Vec<Rat>> = s0.iter(s).filter(|q| q.m == m && q.n == n && q.k == x).map(|q| q.l).collect();
            let tgt = tgt.clone();
            (0..=s).filter_map(move |c| {
                let l = tgt.index_of_code(c);
                let y = tgt.point(&l).ok()?;
                ys.contains(&y).then_some(l)
            })
        })
    });
    ApproxSystem::new(source, target, schedule, Flavor::Metric, "lift", rel)
}

/// Decodes a saturated system to points. The saturation search runs within
/// `b` first; a witness against saturation is an error.
pub fn project_system<I: IndexValue, J: IndexValue>(
    sys: &ApproxSystem<I, J>,
    b: &SatBounds,
) -> Result<REnum<PointQuad>, SystemError> {
    let witnesses = is_saturated(sys, b)?;
    if !witnesses.is_empty() {
        let shown: Vec<String> = witnesses.iter().map(|w| w.to_string()).collect();
        return Err(SystemError::Unsaturated(shown.join("; ")));
    }
    let (src, tgt) = (sys.source.clone(), sys.target.clone());
    Ok(sys.quads().filter_map(move |q| Some(Quad::new(src.point(&q.k).ok()?, q.m, tgt.point(&q.l).ok()?, q.n))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::spaces::RationalVectorSpace;
    use crate::systems::builders::id_system;
    use crate::systems::fixtures::halving_system;

    fn known_witness() -> SaturationWitness<(u64, u64), (u64, u64)> {
        SaturationWitness { present: Quad::new((1, 0), 0, (0, 0), 0), missing: Quad::new((2, 1), 0, (0, 0), 0) }
    }

    #[test]
    fn halving_is_not_saturated() {
        let s = halving_system(PrecisionSchedule::harmonic());
        let b = SatBounds { code_bound: 10, max_m: 0, max_n: 0, stage: 0 };
        let found = is_saturated(&s, &b).unwrap();
        assert!(found.contains(&known_witness()), "{found:?}");
    }

    #[test]
    fn injective_coding_is_saturated() {
        let s = id_system(PrecisionSchedule::dyadic());
        assert!(is_saturated(&s, &SatBounds::default()).unwrap().is_empty());
    }

    #[test]
    fn saturate_contains_original_and_closes() {
        let s = halving_system(PrecisionSchedule::harmonic());
        let sat = saturate(&s).unwrap();
        let b = SatBounds { code_bound: 10, max_m: 1, max_n: 1, stage: 12 };
        for c in 0..=b.code_bound {
            let k = s.source.index_of_code(c);
            for m in 0..=b.max_m {
                for n in 0..=b.max_n {
                    for l in s.fiber(&k, m, n).approx(b.stage) {
                        assert!(sat.fiber(&k, m, n).member_by_stage(&l, b.stage));
                    }
                }
            }
        }
        assert!(sat.contains(&known_witness().missing, 12));
        let found = is_saturated(&sat, &SatBounds { code_bound: 6, max_m: 0, max_n: 0, stage: 30 }).unwrap();
        assert!(found.is_empty(), "{found:?}");
    }

    #[test]
    fn saturate_is_idempotent_on_bounded_ranges() {
        let s = halving_system(PrecisionSchedule::harmonic());
        let once = saturate(&s).unwrap();
        let twice = saturate(&once).unwrap();
        for c in 0..=8 {
            let k = s.source.index_of_code(c);
            for (m, n) in [(0, 0), (1, 0), (1, 1)] {
                let mut a = once.fiber(&k, m, n).approx(10);
                let mut b = twice.fiber(&k, m, n).approx(10);
                a.sort();
                b.sort();
                assert_eq!(a, b, "k = {k:?}, m = {m}, n = {n}");
            }
        }
    }

    #[test]
    fn project_unsaturated_reports_witness() {
        let s = halving_system(PrecisionSchedule::harmonic());
        let b = SatBounds { code_bound: 10, max_m: 0, max_n: 0, stage: 0 };
        match project_system(&s, &b) {
            Err(SystemError::Unsaturated(msg)) => assert!(msg.contains(&known_witness().to_string())),
            other => panic!("{other:?}"),
        }
    }

    fn scalar() -> SpaceRef<Vec<Rat>> {
        Arc::new(RationalVectorSpace::scalar())
    }

    #[test]
    fn lifted_half_system() {
        let d = PrecisionSchedule::dyadic();
        let sch = d.clone();
        let half = vec![rat(1, 2)];
        let h2 = half.clone();
        let s =
            lift_point_system(scalar(), scalar(), d, move |x, m, y, n| x == h2.as_slice() && y == x && sch.le(m, n));
        assert_eq!(s.fiber(&half, 2, 1).approx(20), vec![half.clone()]);
        assert!(s.fiber(&vec![rat(1, 3)], 2, 1).approx(20).is_empty());
        assert!(s.fiber(&half, 1, 2).approx(20).is_empty());
    }

    #[test]
    fn id_round_trip_through_points() {
        let d = PrecisionSchedule::dyadic();
        let id = id_system(d.clone());
        let points = project_system(&id, &SatBounds::default()).unwrap();
        let back = lift_point_set(scalar(), scalar(), d, points);
        let stage = 400;
        for c in 0..6 {
            let k = id.source.index_of_code(c);
            for m in 0..3 {
                for n in 0..3 {
                    let mut a = id.fiber(&k, m, n).approx(stage);
                    let mut b = back.fiber(&k, m, n).approx(stage);
                    a.sort();
                    b.sort();
                    assert_eq!(a, b, "k = {k:?}, m = {m}, n = {n}");
                }
            }
        }
    }
}
