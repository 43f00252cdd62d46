//! Approximation systems.
//!
//! A system is a recursively enumerable set of quadruples `(k, m, l, n)` over
//! a source and a target space. Besides the plain enumeration, every system
//! exposes its fibers `{l | (k, m, l, n) ∈ S}` as enumerable sets; the engines
//! search fibers rather than the whole quadruple set.

pub mod builders;
pub mod checks;
pub mod fixtures;
pub mod jsonl;
pub mod saturation;
pub mod uv;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certified::{CertPoint, Surd};
use crate::renum::{Elem, REnum};
use crate::schedule::PrecisionSchedule;
use crate::spaces::{indices, IndexValue, SpaceError, SpaceRef};
use crate::tupling::{quadruple, triple};

pub use builders::{add_system, affine_system, builder, const_system, id_system, mul_system, sq_system};
pub use checks::{check_metric, check_topological, CheckBounds, Report, Sample, Violation};
pub use saturation::{
    is_saturated, lift_point_set, lift_point_system, project_system, saturate, SatBounds, SaturationWitness,
};
pub use uv::{check_uv_condition, maximal_uv_system, UvReport, UvSystem};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Quad<I, J> {
    pub k: I,
    pub m: u64,
    pub l: J,
    pub n: u64,
}

impl<I, J> Quad<I, J> {
    pub fn new(k: I, m: u64, l: J, n: u64) -> Self {
        Quad { k, m, l, n }
    }
}

impl<I: fmt::Debug, J: fmt::Debug> fmt::Display for Quad<I, J> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {}, {:?}, {})", self.k, self.m, self.l, self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("system is not saturated: {0}")]
    Unsaturated(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// A relation between source balls and target balls.
pub trait QuadRelation<I, J>: Send + Sync {
    /// `{l | (k, m, l, n) ∈ S}`.
    fn fiber(&self, k: &I, m: u64, n: u64) -> REnum<J>;

    fn quads(&self) -> REnum<Quad<I, J>>;
}

type FiberFn<I, J> = Arc<dyn Fn(&I, u64, u64) -> REnum<J> + Send + Sync>;

/// A relation given by its fibers.
pub struct FiberRelation<I, J> {
    fiber: FiberFn<I, J>,
    quads: REnum<Quad<I, J>>,
}

impl<I: IndexValue, J: IndexValue> FiberRelation<I, J> {
    /// Decidable membership with at most one `l` per `(k, m, n)`. The quadruple
    /// enumeration dovetails over `(code(k), m, n) = triple(t)` and emits at
    /// stage `t` when the predicate holds.
    pub fn predicate<F>(source: SpaceRef<I>, f: F) -> Self
    where
        F: Fn(&I, u64, u64) -> Option<J> + Send + Sync + 'static,
    {
        let f = Arc::new(f);
        let g = f.clone();
        let quads = REnum::from_stage_fn(move |t| {
            let (code, m, n) = triple(t);
            let k = source.index_of_code(code);
            g(&k, m, n).map(|l| Quad::new(k, m, l, n))
        });
        FiberRelation {
            fiber: Arc::new(move |k, m, n| match f(k, m, n) {
                Some(l) => REnum::finite(vec![l]),
                None => REnum::empty(),
            }),
            quads,
        }
    }

    /// General fibers. Stage `t` of the quadruple enumeration decodes
    /// `(code(k), m, n, s) = quadruple(t)` and emits the fiber's `W_s`.
    pub fn fibers<F>(source: SpaceRef<I>, f: F) -> Self
    where
        F: Fn(&I, u64, u64) -> REnum<J> + Send + Sync + 'static,
    {
        let fiber: FiberFn<I, J> = Arc::new(f);
        let quads = derived_quads(source, fiber.clone());
        FiberRelation { fiber, quads }
    }
}

fn derived_quads<I: IndexValue, J: IndexValue>(source: SpaceRef<I>, fiber: FiberFn<I, J>) -> REnum<Quad<I, J>> {
    REnum::from_batches(move |t| {
        let (code, m, n, s) = quadruple(t);
        let k = source.index_of_code(code);
        fiber(&k, m, n).iter(s).map(move |l| Quad::new(k.clone(), m, l, n))
    })
}

impl<I: IndexValue, J: IndexValue> QuadRelation<I, J> for FiberRelation<I, J> {
    fn fiber(&self, k: &I, m: u64, n: u64) -> REnum<J> {
        (self.fiber)(k, m, n)
    }

    fn quads(&self) -> REnum<Quad<I, J>> {
        self.quads.clone()
    }
}

/// A relation given only by its quadruple enumeration.
pub struct EnumeratedRelation<I, J> {
    quads: REnum<Quad<I, J>>,
}

impl<I: Elem, J: Elem> EnumeratedRelation<I, J> {
    pub fn new(quads: REnum<Quad<I, J>>) -> Self {
        EnumeratedRelation { quads }
    }
}

impl<I: Elem, J: Elem> QuadRelation<I, J> for EnumeratedRelation<I, J> {
    fn fiber(&self, k: &I, m: u64, n: u64) -> REnum<J> {
        let k = k.clone();
        self.quads.filter(move |q| q.m == m && q.n == n && q.k == k).map(|q| q.l)
    }

    fn quads(&self) -> REnum<Quad<I, J>> {
        self.quads.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Metric,
    Topological,
}

/// An enumerable set of quadruples tied to its spaces and schedule.
///
/// The flavor records which conditions the system is meant to satisfy:
/// soundness and per-precision coverage for metric systems, the equivalence
/// of ball membership for topological ones.
pub struct ApproxSystem<I, J> {
    pub source: SpaceRef<I>,
    pub target: SpaceRef<J>,
    pub schedule: PrecisionSchedule,
    pub flavor: Flavor,
    pub label: String,
    rel: Arc<dyn QuadRelation<I, J>>,
}

pub type MetricSystem<I, J> = ApproxSystem<I, J>;
pub type TopologicalSystem<I, J> = ApproxSystem<I, J>;

impl<I, J> Clone for ApproxSystem<I, J> {
    fn clone(&self) -> Self {
        ApproxSystem {
            source: self.source.clone(),
            target: self.target.clone(),
            schedule: self.schedule.clone(),
            flavor: self.flavor,
            label: self.label.clone(),
            rel: self.rel.clone(),
        }
    }
}

impl<I, J> fmt::Debug for ApproxSystem<I, J> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ApproxSystem")
            .field("label", &self.label)
            .field("flavor", &self.flavor)
            .field("schedule", &self.schedule)
            .finish()
    }
}

impl<I: IndexValue, J: IndexValue> ApproxSystem<I, J> {
    pub fn new(
        source: SpaceRef<I>,
        target: SpaceRef<J>,
        schedule: PrecisionSchedule,
        flavor: Flavor,
        label: impl Into<String>,
        rel: impl QuadRelation<I, J> + 'static,
    ) -> Self {
        ApproxSystem { source, target, schedule, flavor, label: label.into(), rel: Arc::new(rel) }
    }

    /// The system with no quadruples.
    pub fn empty(source: SpaceRef<I>, target: SpaceRef<J>, schedule: PrecisionSchedule, flavor: Flavor) -> Self {
        ApproxSystem::new(source, target, schedule, flavor, "empty", EnumeratedRelation::new(REnum::empty()))
    }

    pub fn fiber(&self, k: &I, m: u64, n: u64) -> REnum<J> {
        self.rel.fiber(k, m, n)
    }

    pub fn quads(&self) -> REnum<Quad<I, J>> {
        self.rel.quads()
    }

    /// `(k, m, l, n) ∈ W_s`, read through the fiber.
    pub fn contains(&self, q: &Quad<I, J>, stage: u64) -> bool {
        self.fiber(&q.k, q.m, q.n).member_by_stage(&q.l, stage)
    }

    pub fn source_indices(&self) -> REnum<I> {
        indices(&self.source)
    }

    pub fn target_indices(&self) -> REnum<J> {
        indices(&self.target)
    }

    pub fn with_flavor(mut self, flavor: Flavor) -> Self {
        self.flavor = flavor;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// A probe oracle: exact values of `f` on certified points, `None` where
/// unsupported or outside the domain.
pub type Probe = Arc<dyn Fn(&[Surd]) -> Option<CertPoint> + Send + Sync>;
