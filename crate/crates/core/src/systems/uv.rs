//! Approximation systems between indexed bases of finite instances.

use std::collections::BTreeSet;
use std::fmt;

use crate::renum::REnum;
use crate::spaces::FiniteInstance;

/// An enumerable set of base-index pairs `(i, j)`.
#[derive(Debug, Clone)]
pub struct UvSystem {
    pub pairs: REnum<(usize, usize)>,
}

impl UvSystem {
    pub fn new(pairs: REnum<(usize, usize)>) -> Self {
        UvSystem { pairs }
    }
}

/// `{(i, j) | U_i ∩ E ⊆ f⁻¹(V_j)}`, computed exhaustively.
pub fn maximal_uv_system(inst: &FiniteInstance) -> UvSystem {
    let mut pairs = Vec::new();
    for i in 0..inst.num_u() {
        let r = inst.restricted(i);
        for j in 0..inst.num_v() {
            if r.is_subset(&inst.preimage(j)) {
                pairs.push((i, j));
            }
        }
    }
    UvSystem::new(REnum::finite(pairs))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UvReport {
    /// `j` with points of `f⁻¹(V_j)` in no listed `U_i ∩ E`.
    pub uncovered: Vec<(usize, Vec<usize>)>,
    /// Listed pairs whose `U_i ∩ E` leaves `f⁻¹(V_j)`, with the offending points.
    pub unsound: Vec<((usize, usize), Vec<usize>)>,
    /// Listed pairs outside `I × J`.
    pub out_of_range: Vec<(usize, usize)>,
}

impl UvReport {
    pub fn is_empty(&self) -> bool {
        self.uncovered.is_empty() && self.unsound.is_empty() && self.out_of_range.is_empty()
    }

    /// One line per violation, with point labels.
    pub fn lines(&self, inst: &FiniteInstance) -> Vec<String> {
        let labels = |xs: &[usize]| xs.iter().map(|&x| inst.x_label(x)).collect::<Vec<_>>().join(", ");
        let mut out = Vec::new();
        for (j, xs) in &self.uncovered {
            out.push(format!(
                "j = {j}: f⁻¹(V_{j}) not covered by the listed U_i ∩ E; uncovered points: {}",
                labels(xs)
            ));
        }
        for ((i, j), xs) in &self.unsound {
            out.push(format!("pair ({i}, {j}): U_{i} ∩ E ⊄ f⁻¹(V_{j}); offending points: {}", labels(xs)));
        }
        for (i, j) in &self.out_of_range {
            out.push(format!("pair ({i}, {j}) is outside I × J"));
        }
        out
    }
}

impl fmt::Display for UvReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} uncovered, {} unsound, {} out of range",
            self.uncovered.len(),
            self.unsound.len(),
            self.out_of_range.len()
        )
    }
}

/// Checks `f⁻¹(V_j) = ⋃{U_i ∩ E | (i, j) ∈ R}` for every `j`, reading `R`
/// up to `stage_cap`.
pub fn check_uv_condition(inst: &FiniteInstance, r: &UvSystem, stage_cap: u64) -> UvReport {
    let mut report = UvReport::default();
    let pairs = r.pairs.approx(stage_cap);
    let mut union: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); inst.num_v()];
    for &(i, j) in &pairs {
        if i >= inst.num_u() || j >= inst.num_v() {
            report.out_of_range.push((i, j));
            continue;
        }
        let part = inst.restricted(i);
        let pre = inst.preimage(j);
        let bad: Vec<usize> = part.difference(&pre).copied().collect();
        if !bad.is_empty() {
            report.unsound.push(((i, j), bad));
        }
        union[j].extend(part);
    }
    for (j, covered) in union.iter().enumerate() {
        let missing: Vec<usize> = inst.preimage(j).difference(covered).copied().collect();
        if !missing.is_empty() {
            report.uncovered.push((j, missing));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::finite::InstanceFile;

    const TWO_POINT: &str = include_str!("../../fixtures/two_point.json");

    fn two_point() -> FiniteInstance {
        FiniteInstance::from_json(TWO_POINT).unwrap()
    }

    #[test]
    fn two_point_maximal_system() {
        let inst = two_point();
        let mut got = maximal_uv_system(&inst).pairs.approx(0);
        got.sort();
        let want: Vec<(usize, usize)> = (0..3).flat_map(|i| [(i, 1), (i, 2)]).collect();
        assert_eq!(got, want);
        assert!(check_uv_condition(&inst, &maximal_uv_system(&inst), 0).is_empty());
    }

    #[test]
    fn identity_on_two_point_bases() {
        let mut file: InstanceFile = serde_json::from_str(TWO_POINT).unwrap();
        file.function = vec![("0".into(), "0".into()), ("1".into(), "1".into())];
        let inst = FiniteInstance::new(file).unwrap();
        let got = maximal_uv_system(&inst).pairs.approx(0);
        assert!(got.contains(&(0, 0)));
        assert!(!got.contains(&(1, 0)));
    }

    #[test]
    fn empty_domain_gives_everything() {
        let mut file: InstanceFile = serde_json::from_str(TWO_POINT).unwrap();
        file.domain.clear();
        file.function.clear();
        let inst = FiniteInstance::new(file).unwrap();
        assert_eq!(maximal_uv_system(&inst).pairs.approx(0).len(), 9);
    }

    #[test]
    fn missing_pair_names_j() {
        let inst = two_point();
        let pairs: Vec<_> = maximal_uv_system(&inst).pairs.approx(0).into_iter().filter(|&(_, j)| j != 2).collect();
        let report = check_uv_condition(&inst, &UvSystem::new(REnum::finite(pairs)), 0);
        assert_eq!(report.uncovered, vec![(2, vec![0, 1])]);
        assert!(report.lines(&inst)[0].starts_with("j = 2"));
    }

    #[test]
    fn unsound_pair_reported() {
        let inst = two_point();
        let report = check_uv_condition(&inst, &UvSystem::new(REnum::finite(vec![(1, 0)])), 0);
        assert_eq!(report.unsound, vec![((1, 0), vec![0, 1])]);
    }

    #[test]
    fn preimage_two_ways() {
        for seed in 0..30 {
            let inst = FiniteInstance::random(seed);
            let r = maximal_uv_system(&inst);
            let pairs = r.pairs.approx(0);
            for j in 0..inst.num_v() {
                let direct: BTreeSet<usize> =
                    inst.domain().iter().copied().filter(|&x| inst.v(j).contains(&inst.f(x).unwrap())).collect();
                let via_r: BTreeSet<usize> =
                    pairs.iter().filter(|p| p.1 == j).flat_map(|&(i, _)| inst.restricted(i)).collect();
                assert_eq!(direct, via_r, "seed {seed}, j = {j}");
            }
        }
    }
}
