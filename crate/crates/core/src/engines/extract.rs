//! Extraction of a metric system from a recursive operator on names.
//!
//! `(k, m, l, n)` is included when for some `s, p` with
//! `min{r_0, …, r_s} >= 2r_m` and `r_p <= r_n/2`, and some finite
//! `u° : {0, …, s} → K` with `d(α(u°(t)), α(k)) < r_t/2` for every `t <= s`,
//! `F(u°)(p)` is defined and `e(β(F(u°)(p)), β(l)) < r_n/2`.
//!
//! The search is exponential in `s`. Operators may declare which positions
//! of `u°` an output reads; undeclared positions are then fixed to their
//! first admissible value, which by the use principle cannot change the
//! result.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;
use std::sync::Arc;

use itertools::Itertools;

use crate::rational::Rat;
use crate::renum::REnum;
use crate::schedule::PrecisionSchedule;
use crate::spaces::{IndexValue, SpaceRef};
use crate::systems::{ApproxSystem, FiberRelation, Flavor};

/// A recursive operator on index streams, seen through finite prefixes.
///
/// Contract: `apply_finite` is deterministic, stable once defined as
/// `effort` grows, and unchanged when the prefix is extended. Violating the
/// contract voids every guarantee of [`extract_metric_system`].
pub trait RecursiveOperator<I, J>: Send + Sync {
    /// `F(u°)(p)` after `effort` steps, if defined by then.
    fn apply_finite(&self, prefix: &[I], p: u64, effort: u64) -> Option<J>;

    /// Positions of the prefix that output `p` may read. `None` means any.
    fn use_positions(&self, _p: u64) -> Option<Vec<u64>> {
        None
    }
}

/// `F(u)(p) = u(p)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityOperator;

impl<I: Clone> RecursiveOperator<I, I> for IdentityOperator {
    fn apply_finite(&self, prefix: &[I], p: u64, _effort: u64) -> Option<I> {
        prefix.get(p as usize).cloned()
    }

    fn use_positions(&self, p: u64) -> Option<Vec<u64>> {
        Some(vec![p])
    }
}

/// `F(u)(p) = c`.
#[derive(Debug, Clone)]
pub struct ConstantOperator<J>(pub J);

impl<I, J: Clone + Send + Sync> RecursiveOperator<I, J> for ConstantOperator<J> {
    fn apply_finite(&self, _prefix: &[I], _p: u64, _effort: u64) -> Option<J> {
        Some(self.0.clone())
    }

    fn use_positions(&self, _p: u64) -> Option<Vec<u64>> {
        Some(vec![])
    }
}

/// `F(u)(p) = u(p + 1)/2` on scalar rationals; names `x/2` whenever
/// `r_{p+1} <= 2r_p`.
#[derive(Debug, Clone, Copy, Default)]
pub struct HalvingOperator;

impl RecursiveOperator<Vec<Rat>, Vec<Rat>> for HalvingOperator {
    fn apply_finite(&self, prefix: &[Vec<Rat>], p: u64, _effort: u64) -> Option<Vec<Rat>> {
        prefix.get(p as usize + 1).map(|v| vec![v[0].halve()])
    }

    fn use_positions(&self, p: u64) -> Option<Vec<u64>> {
        Some(vec![p + 1])
    }
}

/// The metric system extracted from `op`. At stage `S`, the values of `u°`
/// and the target index `l` range over codes `<= S`, distances are
/// confirmed at stage `S`, and `op` gets effort `S`.
pub fn extract_metric_system<I: IndexValue, J: IndexValue>(
    op: Arc<dyn RecursiveOperator<I, J>>,
    source: SpaceRef<I>,
    target: SpaceRef<J>,
    schedule: PrecisionSchedule,
) -> ApproxSystem<I, J> {
    let (src, tgt, sch) = (source.clone(), target.clone(), schedule.clone());
    let rel = FiberRelation::fibers(source.clone(), move |k: &I, m, n| {
        if src.point(k).is_err() {
            return REnum::empty();
        }
        let (op, src, tgt, sch, k) = (op.clone(), src.clone(), tgt.clone(), sch.clone(), k.clone());
        REnum::from_approximations(move |stage| {
            let search = Search {
                op: op.clone(),
                src: src.clone(),
                tgt: tgt.clone(),
                sch: sch.clone(),
                k: k.clone(),
                stage,
                cands: Rc::new(RefCell::new(HashMap::new())),
            };
            search.fiber(m, n)
        })
    });
    ApproxSystem::new(source, target, schedule, Flavor::Metric, "extracted", rel)
}

struct Search<I, J> {
    op: Arc<dyn RecursiveOperator<I, J>>,
    src: SpaceRef<I>,
    tgt: SpaceRef<J>,
    sch: PrecisionSchedule,
    k: I,
    stage: u64,
    cands: Rc<RefCell<HashMap<u64, Rc<Vec<I>>>>>,
}

impl<I: IndexValue, J: IndexValue> Clone for Search<I, J> {
    fn clone(&self) -> Self {
        Search {
            op: self.op.clone(),
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            sch: self.sch.clone(),
            k: self.k.clone(),
            stage: self.stage,
            cands: self.cands.clone(),
        }
    }
}

impl<I: IndexValue, J: IndexValue> Search<I, J> {
    /// Codes `<= stage` within `r_t/2` of `α(k)`.
    fn candidates(&self, t: u64) -> Rc<Vec<I>> {
        if let Some(c) = self.cands.borrow().get(&t) {
            return c.clone();
        }
        let bound = self.sch.r(t).halve();
        let found: Vec<I> = (0..=self.stage)
            .map(|c| self.src.index_of_code(c))
            .filter(|i| self.src.dist_lt(i, &self.k, &bound, self.stage).map(|v| v.confirmed()).unwrap_or(false))
            .collect();
        let found = Rc::new(found);
        self.cands.borrow_mut().insert(t, found.clone());
        found
    }

    fn fiber(self, m: u64, n: u64) -> Box<dyn Iterator<Item = J>> {
        let two_rm = self.sch.r(m) * Rat::from(2);
        let half_rn = self.sch.r(n).halve();
        let ss: Vec<u64> = (0..=self.stage).take_while(|&s| self.sch.min_up_to(s) >= two_rm).collect();
        let ps: Rc<Vec<u64>> = Rc::new((0..=self.stage).filter(|&p| self.sch.r(p) <= half_rn).collect());
        Box::new(ss.into_iter().flat_map(move |s| {
            let me = self.clone();
            let half_rn = half_rn.clone();
            let ps = ps.clone();
            (0..ps.len()).flat_map(move |i| me.clone().at(s, ps[i], half_rn.clone()))
        }))
    }

    /// Target indices reached through `(s, p)`.
    fn at(self, s: u64, p: u64, half_rn: Rat) -> Box<dyn Iterator<Item = J>> {
        let used: Vec<u64> = self.op.use_positions(p).unwrap_or_else(|| (0..=s).collect());
        if used.iter().any(|&t| t > s) {
            return Box::new(std::iter::empty());
        }
        let mut base = Vec::with_capacity(s as usize + 1);
        for t in 0..=s {
            match self.candidates(t).first() {
                Some(c) => base.push(c.clone()),
                None => return Box::new(std::iter::empty()),
            }
        }
        let choices: Vec<Vec<I>> = used.iter().map(|&t| self.candidates(t).as_ref().clone()).collect();
        let assignments: Box<dyn Iterator<Item = Vec<I>>> = if used.is_empty() {
            Box::new(std::iter::once(Vec::new()))
        } else {
            Box::new(choices.into_iter().map(|v| v.into_iter()).multi_cartesian_product())
        };
        let (op, tgt, stage) = (self.op.clone(), self.tgt.clone(), self.stage);
        Box::new(assignments.flat_map(move |vals| {
            let mut prefix = base.clone();
            for (&t, v) in used.iter().zip(vals) {
                prefix[t as usize] = v;
            }
            let tgt = tgt.clone();
            let half_rn = half_rn.clone();
            let j = op.apply_finite(&prefix, p, stage);
            j.into_iter().flat_map(move |j| {
                let tgt = tgt.clone();
                let half_rn = half_rn.clone();
                (0..=stage)
                    .map({
                        let tgt = tgt.clone();
                        move |c| tgt.index_of_code(c)
                    })
                    .filter(move |l| tgt.dist_lt(&j, l, &half_rn, stage).map(|v| v.confirmed()).unwrap_or(false))
            })
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::evaluate::evaluate_metric;
    use crate::engines::transform::scalar_space;
    use crate::names::constant_name;
    use crate::rational::rat;
    use crate::spaces::RationalVectorSpace;
    use crate::systems::builders::{const_probe, id_probe};
    use crate::systems::{check_metric, CheckBounds, Quad, Sample};

    fn extracted(op: Arc<dyn RecursiveOperator<Vec<Rat>, Vec<Rat>>>) -> ApproxSystem<Vec<Rat>, Vec<Rat>> {
        extract_metric_system(op, scalar_space(), scalar_space(), PrecisionSchedule::dyadic())
    }

    fn code_of(x: &Rat) -> u64 {
        let sp = RationalVectorSpace::scalar();
        u64::try_from(sp.encode_point(std::slice::from_ref(x)).unwrap()).unwrap()
    }

    #[test]
    fn identity_contains_shifted_diagonal() {
        let s = extracted(Arc::new(IdentityOperator));
        for x in [Rat::zero(), rat(1, 2), rat(-1, 3), rat(2, 7)] {
            let cap = code_of(&x).max(4);
            for n in 0..=3 {
                let k = vec![x.clone()];
                assert!(s.contains(&Quad::new(k.clone(), n + 2, k.clone(), n), cap), "{x}, n = {n}");
            }
        }
    }

    #[test]
    fn nothing_below_the_radius_floor() {
        // min{r_0} = 1 < 2r_0, so no s works for m = 0
        let s = extracted(Arc::new(IdentityOperator));
        assert!(s.fiber(&vec![Rat::zero()], 0, 0).approx(30).is_empty());
    }

    #[test]
    fn identity_is_sound_and_covering() {
        let d = PrecisionSchedule::dyadic();
        let s = extracted(Arc::new(IdentityOperator));
        let samples: Vec<_> =
            [rat(1, 3), rat(-1, 2), rat(1, 2)].into_iter().map(|x| Sample::rational(vec![x], d.clone())).collect();
        let b = CheckBounds { max_n: 2, max_m: 5, stage_cap: 16, code_bound: 16, name_depth: 5, fiber_limit: 3 };
        let r = check_metric(&s, &id_probe(), &samples, &b);
        assert!(r.is_empty(), "{r}");
    }

    #[test]
    fn constant_is_sound() {
        let d = PrecisionSchedule::dyadic();
        let c = vec![rat(1, 2)];
        let s = extracted(Arc::new(ConstantOperator(c.clone())));
        let samples = vec![Sample::rational(vec![rat(2, 1)], d)];
        let b = CheckBounds { max_n: 2, max_m: 4, stage_cap: 16, code_bound: 16, name_depth: 4, fiber_limit: 8 };
        let r = check_metric(&s, &const_probe(c), &samples, &b);
        assert!(r.is_empty(), "{r}");
    }

    #[test]
    fn halving_operator_is_sound() {
        let d = PrecisionSchedule::dyadic();
        let s = extracted(Arc::new(HalvingOperator));
        let samples = vec![Sample::rational(vec![rat(1, 3)], d)];
        let b = CheckBounds { max_n: 1, max_m: 5, stage_cap: 14, code_bound: 14, name_depth: 5, fiber_limit: 8 };
        let probe: crate::systems::Probe =
            Arc::new(|x: &[crate::certified::Surd]| Some(vec![x[0].mul_rat(&rat(1, 2))]));
        let r = check_metric(&s, &probe, &samples, &b);
        assert!(!r.has_unsound(), "{r}");
    }

    #[test]
    fn evaluation_reproduces_identity() {
        let d = PrecisionSchedule::dyadic();
        let s = extracted(Arc::new(IdentityOperator));
        let v = evaluate_metric(&s, &constant_name(vec![rat(2, 7)], d.clone()), 1_000_000);
        for n in 0..=2 {
            let got = &v.at(n).unwrap()[0];
            assert!((got - &rat(2, 7)).abs() < d.r(n), "n = {n}: {got}");
        }
    }
}
