//! Small systems with known behavior, used by tests and the CLI.

use std::sync::Arc;

use num_traits::ToPrimitive;

use crate::certified::Surd;
use crate::names::{sqrt_name, AlphaName, NameError};
use crate::rational::{rat, Rat};
use crate::schedule::PrecisionSchedule;
use crate::spaces::{AbsRationalSpace, FiniteInstance, FractionGridSpace, SpaceRef};

use super::checks::Sample;
use super::{ApproxSystem, FiberRelation, Flavor, Probe};

pub type GridSystem = ApproxSystem<(u64, u64), (u64, u64)>;

/// `{((p, q), m, (⌊p/2⌋, q), n) | q >= n, m >= n}` on the fraction grid,
/// a metric system for `x ↦ x/2` on the positive irrationals under the
/// harmonic schedule. It is not saturated.
pub fn halving_system(schedule: PrecisionSchedule) -> GridSystem {
    let grid: SpaceRef<(u64, u64)> = Arc::new(FractionGridSpace);
    let rel =
        FiberRelation::predicate(grid.clone(), |&(p, q): &(u64, u64), m, n| (q >= n && m >= n).then_some((p / 2, q)));
    ApproxSystem::new(grid.clone(), grid, schedule, Flavor::Metric, "halving", rel)
}

pub fn halving_probe() -> Probe {
    Arc::new(|x: &[Surd]| Some(vec![x[0].mul_rat(&rat(1, 2))]))
}

/// Converts a name over nonnegative rationals to the fraction grid:
/// `a/b ↦ (a, b − 1)`.
pub fn grid_name(u: AlphaName<Vec<Rat>>) -> AlphaName<(u64, u64)> {
    let witness = u.witness().cloned();
    let v = u.clone();
    let g = AlphaName::from_fn(u.schedule().clone(), move |t| {
        let q = &v.at(t)?[0];
        let a = q.numer().to_u64();
        let b = q.denom().to_u64();
        match (a, b) {
            (Some(a), Some(b)) => Ok((a, b - 1)),
            _ => Err(NameError::Invalid(format!("{q} has no grid index"))),
        }
    });
    match witness {
        Some(x) => g.with_witness(x),
        None => g,
    }
}

/// Radicands of the irrational halving samples. For each, the coverage
/// witness `m` for `n <= 4` under the harmonic schedule is at most 25
/// (for `√(1/2)`, whose distance to `2/3` is about `0.040`).
pub const HALVING_RADICANDS: [(i64, i64); 5] = [(2, 1), (1, 2), (3, 10), (6, 1), (10, 1)];

pub fn halving_samples(schedule: PrecisionSchedule) -> Vec<Sample<(u64, u64)>> {
    HALVING_RADICANDS
        .iter()
        .map(|&(a, b)| Sample::named(grid_name(sqrt_name(rat(a, b), schedule.clone()))).expect("witness"))
        .collect()
}

pub type AbsSystem = ApproxSystem<Vec<Rat>, Vec<Rat>>;

/// `{(k, m, l, n) | k = l >= 0, m = n}` over `α(k) = |k|`. Sound for the
/// identity on the nonnegative reals, but negative centers never get a
/// target ball, so the per-precision coverage fails.
pub fn remark_system(schedule: PrecisionSchedule) -> AbsSystem {
    let sp: SpaceRef<Vec<Rat>> = Arc::new(AbsRationalSpace);
    let rel =
        FiberRelation::predicate(sp.clone(), |k: &Vec<Rat>, m, n| (!k[0].is_negative() && m == n).then(|| k.clone()));
    ApproxSystem::new(sp.clone(), sp, schedule, Flavor::Metric, "remark", rel)
}

pub fn remark_probe() -> Probe {
    Arc::new(|x: &[Surd]| (x[0].signum() >= 0).then(|| x.to_vec()))
}

/// `X = Y = {0, 1}`, bases `{0}, {0,1}, {0,1}` on both sides, `f ≡ 1`.
pub fn two_point_instance() -> FiniteInstance {
    FiniteInstance::from_json(include_str!("../../fixtures/two_point.json")).expect("fixture")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::Quad;

    #[test]
    fn halving_membership() {
        let s = halving_system(PrecisionSchedule::harmonic());
        assert!(s.contains(&Quad::new((1, 0), 0, (0, 0), 0), 0));
        assert!(!s.contains(&Quad::new((2, 1), 0, (0, 0), 0), 100));
        assert!(s.contains(&Quad::new((2, 1), 0, (1, 1), 0), 0));
    }

    #[test]
    fn grid_names_keep_contract() {
        let h = PrecisionSchedule::harmonic();
        let grid: SpaceRef<(u64, u64)> = Arc::new(FractionGridSpace);
        for s in halving_samples(h) {
            assert_eq!(s.name.unwrap().check_contract(&grid, 40).unwrap(), None);
        }
    }

    #[test]
    fn two_point_loads() {
        let inst = two_point_instance();
        assert_eq!((inst.num_x(), inst.num_u(), inst.num_v()), (2, 3, 3));
    }
}
