//! Recursively enumerable sets as cumulative stage approximations.
//!
//! An [`REnum`] is a deterministic, restartable map `s ↦ W_s` from stages to
//! finite approximations with `W_s ⊆ W_{s+1}`; the denoted set is the union
//! of all `W_s`. Approximations are produced lazily as iterators and may repeat
//! elements, so a search can stop at the first witness. A second stage map
//! yields the elements that are new at stage `s` (possibly with some old ones),
//! which lets [`REnum::stages`] stream the enumeration cheaply.

use std::collections::HashSet;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use crate::tupling::unpair;

pub type BoxIter<T> = Box<dyn Iterator<Item = T>>;
type StageFn<T> = Arc<dyn Fn(u64) -> BoxIter<T> + Send + Sync>;

/// Element bound for enumerated values.
pub trait Elem: Clone + Eq + Hash + Send + Sync + 'static {}
impl<T: Clone + Eq + Hash + Send + Sync + 'static> Elem for T {}

pub struct REnum<T> {
    approx: StageFn<T>,
    // Invariant: W_s \ W_{s-1} ⊆ fresh(s) ⊆ W_s.
    fresh: StageFn<T>,
}

impl<T> Clone for REnum<T> {
    fn clone(&self) -> Self {
        REnum { approx: self.approx.clone(), fresh: self.fresh.clone() }
    }
}

impl<T> fmt::Debug for REnum<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("REnum(..)")
    }
}

impl<T: Elem> REnum<T> {
    /// From a map `s ↦ W_s`. The caller guarantees monotonicity.
    pub fn from_approximations<F, I>(f: F) -> Self
    where
        F: Fn(u64) -> I + Send + Sync + 'static,
        I: IntoIterator<Item = T>,
        I::IntoIter: 'static,
    {
        let f: StageFn<T> = Arc::new(move |s| Box::new(f(s).into_iter()));
        REnum { approx: f.clone(), fresh: f }
    }

    /// Classical stage function: stage `s` emits at most one element.
    pub fn from_stage_fn<F>(f: F) -> Self
    where
        F: Fn(u64) -> Option<T> + Send + Sync + 'static,
    {
        let f = Arc::new(f);
        let g = f.clone();
        REnum {
            approx: Arc::new(move |s| {
                let f = f.clone();
                Box::new((0..=s).filter_map(move |t| f(t)))
            }),
            fresh: Arc::new(move |s| Box::new(g(s).into_iter())),
        }
    }

    /// Each stage emits a finite batch; `W_s` is the union of batches `0..=s`.
    pub fn from_batches<F, I>(f: F) -> Self
    where
        F: Fn(u64) -> I + Send + Sync + 'static,
        I: IntoIterator<Item = T> + 'static,
        I::IntoIter: 'static,
    {
        let f = Arc::new(f);
        let g = f.clone();
        REnum {
            approx: Arc::new(move |s| {
                let f = f.clone();
                Box::new((0..=s).flat_map(move |t| f(t)))
            }),
            fresh: Arc::new(move |s| Box::new(g(s).into_iter())),
        }
    }

    /// A finite set, fully present from stage 0.
    pub fn finite(items: Vec<T>) -> Self {
        let items = Arc::new(items);
        let f: StageFn<T> = Arc::new(move |_| {
            let items = items.clone();
            Box::new((0..items.len()).map(move |i| items[i].clone()))
        });
        let g: StageFn<T> = {
            let f = f.clone();
            Arc::new(move |s| if s == 0 { f(0) } else { Box::new(std::iter::empty()) })
        };
        REnum { approx: f, fresh: g }
    }

    pub fn empty() -> Self {
        REnum::finite(Vec::new())
    }

    /// `W_s`, lazily and possibly with repetitions.
    pub fn iter(&self, s: u64) -> BoxIter<T> {
        (self.approx)(s)
    }

    /// `W_s` without repetitions, in first-seen order.
    pub fn approx(&self, s: u64) -> Vec<T> {
        let mut seen = HashSet::new();
        self.iter(s).filter(|x| seen.insert(x.clone())).collect()
    }

    pub fn member_by_stage(&self, x: &T, s: u64) -> bool {
        self.iter(s).any(|y| &y == x)
    }

    pub fn first(&self, s: u64) -> Option<T> {
        self.iter(s).next()
    }

    /// A superset of `W_s \ W_{s-1}` inside `W_s`; cheaper than
    /// [`REnum::emitted_at`] but may repeat older elements.
    pub fn fresh(&self, s: u64) -> BoxIter<T> {
        (self.fresh)(s)
    }

    /// `W_s \ W_{s-1}`.
    pub fn emitted_at(&self, s: u64) -> Vec<T> {
        let old: HashSet<T> = if s == 0 { HashSet::new() } else { self.iter(s - 1).collect() };
        let mut seen = HashSet::new();
        (self.fresh)(s).filter(|x| !old.contains(x) && seen.insert(x.clone())).collect()
    }

    /// Streams `(s, x)` for each element the first time it appears.
    pub fn stages(&self) -> Stages<T> {
        Stages { fresh: self.fresh.clone(), stage: 0, seen: HashSet::new(), pending: Vec::new() }
    }

    /// The first `n` stages, flattened.
    pub fn take_stages(&self, n: u64) -> Vec<(u64, T)> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for s in 0..n {
            for x in (self.fresh)(s) {
                if seen.insert(x.clone()) {
                    out.push((s, x));
                }
            }
        }
        out
    }

    pub fn map<U: Elem, F>(&self, f: F) -> REnum<U>
    where
        F: Fn(T) -> U + Send + Sync + 'static,
    {
        let f = Arc::new(f);
        let (a, r) = (self.approx.clone(), self.fresh.clone());
        let g = f.clone();
        REnum {
            approx: Arc::new(move |s| {
                let f = f.clone();
                Box::new(a(s).map(move |x| f(x)))
            }),
            fresh: Arc::new(move |s| {
                let g = g.clone();
                Box::new(r(s).map(move |x| g(x)))
            }),
        }
    }

    pub fn filter_map<U: Elem, F>(&self, f: F) -> REnum<U>
    where
        F: Fn(T) -> Option<U> + Send + Sync + 'static,
    {
        let f = Arc::new(f);
        let (a, r) = (self.approx.clone(), self.fresh.clone());
        let g = f.clone();
        REnum {
            approx: Arc::new(move |s| {
                let f = f.clone();
                Box::new(a(s).filter_map(move |x| f(x)))
            }),
            fresh: Arc::new(move |s| {
                let g = g.clone();
                Box::new(r(s).filter_map(move |x| g(x)))
            }),
        }
    }

    /// Keeps elements satisfying a decidable, stage-independent predicate.
    pub fn filter<F>(&self, pred: F) -> Self
    where
        F: Fn(&T) -> bool + Send + Sync + 'static,
    {
        let pred = Arc::new(pred);
        let (a, r) = (self.approx.clone(), self.fresh.clone());
        let p2 = pred.clone();
        REnum {
            approx: Arc::new(move |s| {
                let p = pred.clone();
                Box::new(a(s).filter(move |x| p(x)))
            }),
            fresh: Arc::new(move |s| {
                let p = p2.clone();
                Box::new(r(s).filter(move |x| p(x)))
            }),
        }
    }

    /// Keeps `x ∈ W_s` once `pred(x, s)` confirms; `pred` must be monotone in `s`.
    pub fn filter_staged<F>(&self, pred: F) -> Self
    where
        F: Fn(&T, u64) -> bool + Send + Sync + 'static,
    {
        let pred = Arc::new(pred);
        let a = self.approx.clone();
        REnum::from_stage_iter(move |s| {
            let p = pred.clone();
            Box::new(a(s).filter(move |x| p(x, s)))
        })
    }

    /// `W_s = ⋃ { W_s(f(a)) | a ∈ W_s(self) }`.
    pub fn flat_map<U: Elem, F>(&self, f: F) -> REnum<U>
    where
        F: Fn(T) -> REnum<U> + Send + Sync + 'static,
    {
        let f = Arc::new(f);
        let a = self.approx.clone();
        REnum::from_stage_iter(move |s| {
            let f = f.clone();
            Box::new(a(s).flat_map(move |x| f(x).iter(s)))
        })
    }

    /// Cartesian product, `W_s(A) × W_s(B)`.
    pub fn product<U: Elem>(&self, other: &REnum<U>) -> REnum<(T, U)> {
        let a = self.approx.clone();
        let b = other.approx.clone();
        REnum::from_stage_iter(move |s| {
            let b = b.clone();
            Box::new(a(s).flat_map(move |x| b(s).map(move |y| (x.clone(), y))))
        })
    }

    pub fn union(&self, other: &REnum<T>) -> REnum<T> {
        let (a, b) = (self.approx.clone(), other.approx.clone());
        let (ra, rb) = (self.fresh.clone(), other.fresh.clone());
        REnum {
            approx: Arc::new(move |s| Box::new(a(s).chain(b(s)))),
            fresh: Arc::new(move |s| Box::new(ra(s).chain(rb(s)))),
        }
    }

    /// Re-times the enumeration: `W'_t = W_{s(t)}` for a non-decreasing,
    /// unbounded `s`. Used to slow fast-growing approximations down.
    pub fn retimed<F>(&self, s_of: F) -> Self
    where
        F: Fn(u64) -> u64 + Send + Sync + 'static,
    {
        let a = self.approx.clone();
        REnum::from_stage_iter(move |t| a(s_of(t)))
    }

    fn from_stage_iter<F>(f: F) -> Self
    where
        F: Fn(u64) -> BoxIter<T> + Send + Sync + 'static,
    {
        let f: StageFn<T> = Arc::new(f);
        REnum { approx: f.clone(), fresh: f }
    }
}

/// Iterator over first appearances; see [`REnum::stages`].
pub struct Stages<T> {
    fresh: StageFn<T>,
    stage: u64,
    seen: HashSet<T>,
    pending: Vec<T>,
}

impl<T: Elem> Stages<T> {
    /// Stage that will be examined next.
    pub fn stage(&self) -> u64 {
        self.stage
    }
}

impl<T: Elem> Iterator for Stages<T> {
    type Item = (u64, T);

    /// Never returns `None`; on a finite set this loops through empty stages.
    /// Bound it with `take_while` on the stage.
    fn next(&mut self) -> Option<(u64, T)> {
        loop {
            if let Some(x) = self.pending.pop() {
                return Some((self.stage - 1, x));
            }
            let mut batch: Vec<T> = (self.fresh)(self.stage).filter(|x| self.seen.insert(x.clone())).collect();
            batch.reverse();
            self.pending = batch;
            self.stage += 1;
        }
    }
}

/// `W_s = {(a, b) | pair(i, j) <= s}` over two index maps; the classic dovetail.
pub fn dovetail_pairs<A: Elem, B: Elem>(
    a: impl Fn(u64) -> A + Send + Sync + 'static,
    b: impl Fn(u64) -> B + Send + Sync + 'static,
) -> REnum<(A, B)> {
    REnum::from_stage_fn(move |t| {
        let (i, j) = unpair(t);
        Some((a(i), b(j)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn at_stage(x: u32, s0: u64) -> REnum<u32> {
        REnum::from_stage_fn(move |s| (s == s0).then_some(x))
    }

    #[test]
    fn member_by_stage_examples() {
        let e = REnum::finite(vec![7u32]);
        assert!(e.member_by_stage(&7, 0));
        assert!(!e.member_by_stage(&8, 100));
        let q = at_stage(42, 5);
        assert!(!q.member_by_stage(&42, 4));
        assert!(q.member_by_stage(&42, 5));
        assert_eq!(q.emitted_at(5), vec![42]);
        assert!(q.emitted_at(6).is_empty());
    }

    #[test]
    fn product_examples() {
        let one = REnum::finite(vec![1u32]);
        let two = REnum::finite(vec![2u32]);
        assert_eq!(one.product(&two).approx(10), vec![(1, 2)]);
        let none: REnum<u32> = REnum::empty();
        assert!(none.product(&two).approx(50).is_empty());
        let bits = REnum::from_stage_fn(|s| (s < 2).then_some(s as u32));
        let mut all = bits.product(&bits).approx(3);
        all.sort();
        assert_eq!(all, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
    }

    #[test]
    fn union_and_stages() {
        let a = at_stage(1, 2);
        let b = at_stage(2, 0).union(&at_stage(1, 4));
        let u = a.union(&b);
        let got: Vec<_> = u.stages().take(2).collect();
        assert_eq!(got, vec![(0, 2), (2, 1)]);
    }

    #[test]
    fn dovetail_hits_grid() {
        let d = dovetail_pairs(|i| i, |j| j);
        let got: HashSet<_> = d.approx(crate::tupling::pair(3, 3)).into_iter().collect();
        for i in 0..=3 {
            for j in 0..=3 {
                assert!(got.contains(&(i, j)));
            }
        }
    }

    #[test]
    fn flat_map_is_staged() {
        let base = REnum::from_stage_fn(Some);
        let fm = base.flat_map(|x| at_stage(x as u32 * 10, x + 1));
        assert!(!fm.member_by_stage(&30, 3));
        assert!(fm.member_by_stage(&30, 4));
    }

    #[test]
    fn staged_filter_confirms_late() {
        let e = REnum::finite(vec![3u64, 9]).filter_staged(|x, s| s >= *x);
        assert_eq!(e.approx(3), vec![3]);
        assert_eq!(e.approx(9), vec![3, 9]);
        assert_eq!(e.take_stages(10), vec![(3, 3), (9, 9)]);
    }

    proptest! {
        #[test]
        fn membership_is_monotone(seed in 0u64..1000, x in 0u64..50, s in 0u64..60) {
            let e = REnum::from_stage_fn(move |t| ((t * 7 + seed) % 11 < 4).then_some((t * 13 + seed) % 50));
            if e.member_by_stage(&x, s) {
                prop_assert!(e.member_by_stage(&x, s + 1));
            }
        }

        #[test]
        fn traversals_agree(seed in 0u64..1000) {
            let e = REnum::from_stage_fn(move |t| ((t + seed) % 3 != 0).then_some(t ^ seed))
                .map(|x| x % 17)
                .union(&REnum::finite(vec![seed % 5]));
            let a: Vec<_> = e.stages().take(5).collect();
            let b: Vec<_> = e.stages().take(5).collect();
            prop_assert_eq!(a, b);
            prop_assert_eq!(e.take_stages(30), e.take_stages(30));
        }

        #[test]
        fn stages_match_emitted_at(seed in 0u64..500) {
            let e = REnum::from_batches(move |s| (0..(s % 3)).map(move |i| (s * i + seed) % 23));
            let streamed = e.take_stages(25);
            let mut by_diff = Vec::new();
            for s in 0..25 {
                let mut batch = e.emitted_at(s);
                batch.sort();
                by_diff.extend(batch.into_iter().map(|x| (s, x)));
            }
            let mut streamed_sorted = streamed.clone();
            streamed_sorted.sort();
            by_diff.sort();
            prop_assert_eq!(streamed_sorted, by_diff);
        }
    }
}
