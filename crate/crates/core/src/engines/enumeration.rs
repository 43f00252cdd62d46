//! Enumeration operators, their application to set names, and the
//! construction of a base-pair system from an operator and an intersection
//! table.

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;
use std::sync::{Arc, Mutex};

use crate::names::SetName;
use crate::renum::{Elem, REnum};
use crate::spaces::{BallIndex, FiniteInstance, IndexValue};
use crate::systems::{maximal_uv_system, ApproxSystem};

/// `F(M) = {j | ∃i ∈ M ((i, j) ∈ R)}`. At stage `s`, `W_s(R)` is matched
/// against `W_s(M)`.
pub fn enum_apply<I: Elem, J: Elem>(r: &REnum<(I, J)>, m: &REnum<I>) -> REnum<J> {
    let (r, m) = (r.clone(), m.clone());
    REnum::from_approximations(move |s| {
        let ms: HashSet<I> = m.iter(s).collect();
        let mut seen = HashSet::new();
        r.iter(s).filter(move |(i, _)| ms.contains(i)).map(|(_, j)| j).filter(move |j| seen.insert(j.clone()))
    })
}

/// An enumeration operator given by pairs `(D, j)` with `D` finite:
/// `F(M) = {j | ∃(D, j) (D ⊆ M)}`. Each `D` is kept sorted and deduplicated.
#[derive(Debug, Clone)]
pub struct EnumOperatorSet<I, J> {
    pub pairs: REnum<(Vec<I>, J)>,
}

fn normalized<I: Ord>(mut d: Vec<I>) -> Vec<I> {
    d.sort();
    d.dedup();
    d
}

impl<I: Elem + Ord, J: Elem> EnumOperatorSet<I, J> {
    pub fn new(pairs: REnum<(Vec<I>, J)>) -> Self {
        EnumOperatorSet { pairs: pairs.map(|(d, j)| (normalized(d), j)) }
    }

    pub fn finite(pairs: Vec<(Vec<I>, J)>) -> Self {
        EnumOperatorSet::new(REnum::finite(pairs))
    }

    /// The operator `M ↦ {j | ∃i ∈ M ((i, j) ∈ R)}` as singleton pairs.
    pub fn from_relation(r: &REnum<(I, J)>) -> Self {
        EnumOperatorSet::new(r.map(|(i, j)| (vec![i], j)))
    }

    pub fn apply(&self, m: &REnum<I>) -> REnum<J> {
        let (w, m) = (self.pairs.clone(), m.clone());
        REnum::from_approximations(move |s| {
            let ms: HashSet<I> = m.iter(s).collect();
            let mut seen = HashSet::new();
            w.iter(s)
                .filter(move |(d, _)| d.iter().all(|i| ms.contains(i)))
                .map(|(_, j)| j)
                .filter(move |j| seen.insert(j.clone()))
        })
    }

    /// `W_s(F)(M)` for a finite `M`.
    pub fn apply_finite(&self, m: &[I], stage: u64) -> Vec<J> {
        let ms: HashSet<&I> = m.iter().collect();
        let mut seen = HashSet::new();
        self.pairs
            .iter(stage)
            .filter(|(d, _)| d.iter().all(|i| ms.contains(i)))
            .map(|(_, j)| j)
            .filter(|j| seen.insert(j.clone()))
            .collect()
    }
}

/// Streams an enumerable set as a total enumeration; each scan step either
/// releases a pending element or examines one more stage.
fn stream_set<J: Elem>(what: &'static str, cap: u64, set: REnum<BallIndex<J>>) -> SetName<J> {
    struct State<T> {
        stage: u64,
        seen: HashSet<T>,
        pending: VecDeque<T>,
    }
    let state = Arc::new(Mutex::new(State { stage: 0, seen: HashSet::new(), pending: VecDeque::new() }));
    SetName::from_scan(what, cap, move |_| {
        let mut st = state.lock().unwrap();
        if let Some(x) = st.pending.pop_front() {
            return Ok(Some(x));
        }
        let s = st.stage;
        st.stage += 1;
        let State { seen, pending, .. } = &mut *st;
        for x in set.fresh(s) {
            if seen.insert(x.clone()) {
                pending.push_back(x);
            }
        }
        Ok(st.pending.pop_front())
    })
}

/// Applies a topological system to a set name of `x`: the quadruples become
/// pairs of balls `((k, m), (l, n))` and the resulting operator is applied
/// to the balls listed by `u`. The output lists `[f(x)]_V`.
pub fn apply_topological<I: IndexValue, J: IndexValue>(
    sys: &ApproxSystem<I, J>,
    u: &SetName<I>,
    step_cap: u64,
) -> SetName<J> {
    let r = sys.quads().map(|q| (BallIndex::new(q.k, q.m), BallIndex::new(q.l, q.n)));
    let src = u.clone();
    let m = REnum::from_approximations(move |s| {
        let src = src.clone();
        (0..=s).map_while(move |i| src.at(i).ok())
    });
    let mut out = stream_set("apply_topological", step_cap, enum_apply(&r, &m));
    if let Some(x) = u.witness() {
        out = out.with_witness(x.clone());
    }
    out
}

/// `W = {(D, j) | |D| <= 2, ⋂_{i ∈ D} U_i ∩ E ⊆ f⁻¹(V_j)}`, with the empty
/// intersection read as the whole carrier. For `x ∈ E` it maps `[x]_U` to
/// `[f(x)]_V` whenever the instance is continuous.
pub fn derive_w(inst: &FiniteInstance) -> EnumOperatorSet<usize, usize> {
    let nu = inst.num_u();
    let mut ds: Vec<Vec<usize>> = vec![vec![]];
    for a in 0..nu {
        for b in a..nu {
            ds.push(if a == b { vec![a] } else { vec![a, b] });
        }
    }
    let mut pairs = Vec::new();
    for d in ds {
        let mut meet = inst.domain().clone();
        for &i in &d {
            meet = meet.intersection(inst.u(i)).copied().collect();
        }
        for j in 0..inst.num_v() {
            if meet.is_subset(&inst.preimage(j)) {
                pairs.push((d.clone(), j));
            }
        }
    }
    EnumOperatorSet::finite(pairs)
}

/// The operator of the maximal base-pair system, as singleton pairs.
pub fn operator_of_maximal(inst: &FiniteInstance) -> EnumOperatorSet<usize, usize> {
    EnumOperatorSet::from_relation(&maximal_uv_system(inst).pairs)
}

/// `{(i₁, i₂, i) | U_i ⊆ U_{i₁} ∩ U_{i₂}}`. For bases closed under binary
/// intersection, `U_{i₁} ∩ U_{i₂}` is the union of the listed `U_i`.
pub fn h_by_exhaustion(inst: &FiniteInstance) -> REnum<(usize, usize, usize)> {
    let n = inst.num_u();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let meet: std::collections::BTreeSet<usize> = inst.u(a).intersection(inst.u(b)).copied().collect();
            for i in 0..n {
                if inst.u(i).is_subset(&meet) {
                    out.push((a, b, i));
                }
            }
        }
    }
    REnum::finite(out)
}

/// `⋃_{k>=2} H_k` with `H₂ = H` and
/// `H_{k+1} = {(i₁, …, i_{k+1}, i) | ∃i′ ((i₁, …, i_k, i′) ∈ H_k ∧ (i′, i_{k+1}, i) ∈ H)}`.
/// Stage `s` joins `W_s(H)` up to `k = s + 2`; the last entry of each
/// sequence is `i`.
pub fn hk_closure<I: Elem>(h: &REnum<(I, I, I)>) -> REnum<Vec<I>> {
    let h = h.clone();
    REnum::from_approximations(move |s| {
        let hs = h.approx(s);
        let mut by_first: HashMap<I, Vec<(I, I)>> = HashMap::new();
        for (a, b, c) in &hs {
            by_first.entry(a.clone()).or_default().push((b.clone(), c.clone()));
        }
        let mut level: Vec<Vec<I>> = hs.into_iter().map(|(a, b, c)| vec![a, b, c]).collect();
        let mut all = level.clone();
        for _ in 3..=s + 2 {
            let mut next = Vec::new();
            for seq in &level {
                let (last, prefix) = seq.split_last().expect("nonempty");
                for (b, c) in by_first.get(last).into_iter().flatten() {
                    let mut t = prefix.to_vec();
                    t.push(b.clone());
                    t.push(c.clone());
                    next.push(t);
                }
            }
            all.extend(next.iter().cloned());
            level = next;
        }
        all
    })
}

/// `I₀ = {i | ∃i′ ((i′, i′, i) ∈ H)}`.
pub fn i_zero<I: Elem>(h: &REnum<(I, I, I)>) -> REnum<I> {
    h.filter(|(a, b, _)| a == b).map(|(_, _, c)| c)
}

/// `R = {(i, j) | i ∈ I₀ ∧ j ∈ F(∅)} ∪ {(i, j) | (i₁, …, i_k, i) ∈ H_k ∧ j ∈ F({i₁, …, i_k})}`.
pub fn build_r<I: Elem + Ord, J: Elem>(w: &EnumOperatorSet<I, J>, h: &REnum<(I, I, I)>) -> REnum<(I, J)> {
    let (w, i0, hk) = (w.clone(), i_zero(h), hk_closure(h));
    REnum::from_approximations(move |s| {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        let ws = w.pairs.approx(s);
        let empty: Vec<&J> = ws.iter().filter(|(d, _)| d.is_empty()).map(|(_, j)| j).collect();
        for i in i0.approx(s) {
            for &j in &empty {
                if seen.insert((i.clone(), j.clone())) {
                    out.push((i.clone(), j.clone()));
                }
            }
        }
        for seq in hk.iter(s) {
            let (i, prefix) = seq.split_last().expect("nonempty");
            let members: HashSet<&I> = prefix.iter().collect();
            for (d, j) in &ws {
                if d.iter().all(|x| members.contains(x)) && seen.insert((i.clone(), j.clone())) {
                    out.push((i.clone(), j.clone()));
                }
            }
        }
        out
    })
}

fn as_set<T: Hash + Eq>(v: Vec<T>) -> HashSet<T> {
    v.into_iter().collect()
}

/// `enum_apply(R_max, [x]_U)` against `[f(x)]_V` for every `x ∈ E`.
/// Returns the points where the two sets differ.
pub fn check_operator_on_instance(inst: &FiniteInstance) -> Vec<usize> {
    let r = maximal_uv_system(inst).pairs;
    inst.domain()
        .iter()
        .copied()
        .filter(|&x| {
            let got = as_set(enum_apply(&r, &REnum::finite(inst.x_name(x))).approx(0));
            let want = as_set(inst.y_name(inst.f(x).expect("x in E")));
            got != want
        })
        .collect()
}
