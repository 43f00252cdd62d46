//! Metric systems for elementary real arithmetic over `ℚ` and `ℚ²`.
//!
//! Each builder includes `(k, m, l, n)` when `l` is the exact image of the
//! center and a simple error bound shows every point of the ball `(k, m)` is
//! mapped into the ball `(l, n)`. Two-argument builders use the max metric.

use std::sync::Arc;

use crate::certified::Surd;
use crate::rational::Rat;
use crate::schedule::PrecisionSchedule;
use crate::spaces::{MetricKind, RationalVectorSpace, SpaceRef};

use super::{ApproxSystem, FiberRelation, Flavor, Probe};

pub type RatSystem = ApproxSystem<Vec<Rat>, Vec<Rat>>;

fn scalar() -> SpaceRef<Vec<Rat>> {
    Arc::new(RationalVectorSpace::scalar())
}

fn plane() -> SpaceRef<Vec<Rat>> {
    Arc::new(RationalVectorSpace::new(2, MetricKind::Max))
}

fn system<F>(
    source: SpaceRef<Vec<Rat>>,
    target: SpaceRef<Vec<Rat>>,
    schedule: PrecisionSchedule,
    label: String,
    f: F,
) -> RatSystem
where
    F: Fn(&Vec<Rat>, u64, u64) -> Option<Vec<Rat>> + Send + Sync + 'static,
{
    let rel = FiberRelation::predicate(source.clone(), f);
    ApproxSystem::new(source, target, schedule, Flavor::Metric, label, rel)
}

/// `l = k` when `r_m <= r_n`.
pub fn id_system(schedule: PrecisionSchedule) -> RatSystem {
    let sch = schedule.clone();
    system(scalar(), scalar(), schedule, "id".into(), move |k, m, n| sch.le(m, n).then(|| k.clone()))
}

/// `l = c` for every `k, m, n`.
pub fn const_system(c: Vec<Rat>, schedule: PrecisionSchedule) -> RatSystem {
    let target: SpaceRef<Vec<Rat>> = Arc::new(RationalVectorSpace::new(c.len(), MetricKind::Max));
    let label = format!("const:{}", join(&c));
    system(scalar(), target, schedule, label, move |_, _, _| Some(c.clone()))
}

/// `l = a·k + b` when `|a|·r_m < r_n`, or for any `m` when `a = 0`.
pub fn affine_system(a: Rat, b: Rat, schedule: PrecisionSchedule) -> RatSystem {
    let sch = schedule.clone();
    let label = format!("affine:{a},{b}");
    system(scalar(), scalar(), schedule, label, move |k, m, n| {
        let ok = a.is_zero() || a.abs() * sch.r(m) < sch.r(n);
        ok.then(|| vec![&a * &k[0] + &b])
    })
}

/// `l = k₁ + k₂` when `2·r_m < r_n`.
pub fn add_system(schedule: PrecisionSchedule) -> RatSystem {
    let sch = schedule.clone();
    system(plane(), scalar(), schedule, "add".into(), move |k, m, n| {
        (sch.r(m) * Rat::from(2) < sch.r(n)).then(|| vec![&k[0] + &k[1]])
    })
}

/// `l = k₁·k₂` when `(|k₁| + |k₂| + r_m)·r_m < r_n`.
pub fn mul_system(schedule: PrecisionSchedule) -> RatSystem {
    let sch = schedule.clone();
    system(plane(), scalar(), schedule, "mul".into(), move |k, m, n| {
        let rm = sch.r(m);
        let err = (k[0].abs() + k[1].abs() + &rm) * &rm;
        (err < sch.r(n)).then(|| vec![&k[0] * &k[1]])
    })
}

/// `l = k²` when `(2|k| + r_m)·r_m < r_n`.
pub fn sq_system(schedule: PrecisionSchedule) -> RatSystem {
    let sch = schedule.clone();
    system(scalar(), scalar(), schedule, "sq".into(), move |k, m, n| {
        let rm = sch.r(m);
        let err = (k[0].abs() * Rat::from(2) + &rm) * &rm;
        (err < sch.r(n)).then(|| vec![k[0].square()])
    })
}

fn join(c: &[Rat]) -> String {
    c.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",")
}

pub fn id_probe() -> Probe {
    Arc::new(|x: &[Surd]| Some(x.to_vec()))
}

pub fn const_probe(c: Vec<Rat>) -> Probe {
    Arc::new(move |_: &[Surd]| Some(c.iter().cloned().map(Surd::rational).collect()))
}

pub fn affine_probe(a: Rat, b: Rat) -> Probe {
    Arc::new(move |x: &[Surd]| Some(vec![x[0].mul_rat(&a).add_rat(&b)]))
}

pub fn add_probe() -> Probe {
    Arc::new(|x: &[Surd]| Some(vec![x[0].checked_add(&x[1])?]))
}

pub fn mul_probe() -> Probe {
    Arc::new(|x: &[Surd]| Some(vec![x[0].checked_mul(&x[1])?]))
}

pub fn sq_probe() -> Probe {
    Arc::new(|x: &[Surd]| Some(vec![x[0].square()]))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownBuilder(pub String);

impl std::fmt::Display for UnknownBuilder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "unknown system {:?}", self.0)
    }
}

impl std::error::Error for UnknownBuilder {}

/// Builds a system and its probe from a spec such as `id`, `sq`,
/// `const:5`, `const:1/2,3` or `affine:2,-1/3`.
pub fn builder(spec: &str, schedule: PrecisionSchedule) -> Result<(RatSystem, Probe), UnknownBuilder> {
    let bad = || UnknownBuilder(spec.to_string());
    let rats = |s: &str| -> Result<Vec<Rat>, UnknownBuilder> {
        s.split(',').map(|p| p.trim().parse::<Rat>().map_err(|_| bad())).collect()
    };
    let (head, arg) = match spec.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (spec, None),
    };
    Ok(match (head, arg) {
        ("id", None) => (id_system(schedule), id_probe()),
        ("add", None) => (add_system(schedule), add_probe()),
        ("mul", None) => (mul_system(schedule), mul_probe()),
        ("sq", None) => (sq_system(schedule), sq_probe()),
        ("empty", None) => {
            let sys = ApproxSystem::empty(scalar(), scalar(), schedule, Flavor::Metric);
            (sys, id_probe())
        }
        ("const", Some(a)) => {
            let c = rats(a)?;
            (const_system(c.clone(), schedule), const_probe(c))
        }
        ("affine", Some(a)) => match rats(a)?.as_slice() {
            [a, b] => (affine_system(a.clone(), b.clone(), schedule), affine_probe(a.clone(), b.clone())),
            _ => return Err(bad()),
        },
        _ => return Err(bad()),
    })
}
