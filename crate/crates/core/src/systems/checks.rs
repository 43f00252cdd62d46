//! Bounded condition checks against a probe oracle.
//!
//! Samples are certified points, optionally with a name whose approximants
//! are used as extra candidate centers. Soundness violations are exact
//! counterexamples. Missing coverage is only ever reported relative to the
//! search bounds.

use std::collections::HashSet;
use std::fmt;

use crate::certified::{cert_dist_lt_cert, cert_point, CertPoint};
use crate::names::{constant_name, AlphaName};
use crate::rational::Rat;
use crate::renum::Elem;
use crate::schedule::PrecisionSchedule;
use crate::spaces::{ball_contains, IndexValue, SpaceRef};

use super::{ApproxSystem, Probe, Quad};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckBounds {
    /// Target precisions `n <= max_n`.
    pub max_n: u64,
    /// Source precisions `m <= max_m`.
    pub max_m: u64,
    /// Fibers are read up to this stage.
    pub stage_cap: u64,
    /// Candidate centers and targets come from index codes `<= code_bound`.
    pub code_bound: u64,
    /// Name approximants `u(t)`, `t <= name_depth`, are added as candidates.
    pub name_depth: u64,
    /// At most this many fiber elements are checked per ball pair.
    pub fiber_limit: usize,
}

impl Default for CheckBounds {
    fn default() -> Self {
        CheckBounds { max_n: 4, max_m: 12, stage_cap: 200, code_bound: 60, name_depth: 12, fiber_limit: 4 }
    }
}

#[derive(Debug, Clone)]
pub struct Sample<I> {
    pub point: CertPoint,
    pub name: Option<AlphaName<I>>,
}

impl<I> Sample<I> {
    pub fn point(point: CertPoint) -> Self {
        Sample { point, name: None }
    }
}

impl Sample<Vec<Rat>> {
    /// A rational sample carrying its constant name.
    pub fn rational(q: Vec<Rat>, schedule: PrecisionSchedule) -> Self {
        Sample { point: cert_point(&q), name: Some(constant_name(q, schedule)) }
    }
}

impl<I: Elem> Sample<I> {
    /// A sample named by `u`; the point is the name's witness.
    pub fn named(u: AlphaName<I>) -> Option<Self> {
        Some(Sample { point: u.witness()?.clone(), name: Some(u) })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation<I, J> {
    /// `x` lies in the source ball of `quad` but `f(x)` is not in its target ball.
    Unsound { quad: Quad<I, J>, x: CertPoint },
    /// No `m <= max_m` gives every nearby center a nonempty fiber.
    NoWitness { x: CertPoint, n: u64, max_m: u64 },
    /// No candidate source ball around `x` reaches the target ball `(l, n)`.
    Uncovered { x: CertPoint, l: J, n: u64 },
    /// The oracle cannot decide something about `x`.
    Undecided { x: CertPoint, detail: String },
}

impl<I: fmt::Debug, J: fmt::Debug> fmt::Display for Violation<I, J> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Unsound { quad, x } => {
                write!(f, "condition (a): soundness violated by {quad} at x = {x:?}")
            }
            Violation::NoWitness { x, n, max_m } => {
                write!(f, "condition (b): no witness m <= {max_m} for n = {n} at x = {x:?}")
            }
            Violation::Uncovered { x, l, n } => {
                write!(f, "target ball ({l:?}, {n}) around f(x) not reached within bounds at x = {x:?}")
            }
            Violation::Undecided { x, detail } => write!(f, "undecided at x = {x:?}: {detail}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report<I, J> {
    pub violations: Vec<Violation<I, J>>,
    pub samples: usize,
    pub fibers_read: usize,
}

impl<I, J> Report<I, J> {
    fn new(samples: usize) -> Self {
        Report { violations: Vec::new(), samples, fibers_read: 0 }
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_unsound(&self) -> bool {
        self.violations.iter().any(|v| matches!(v, Violation::Unsound { .. }))
    }
}

impl<I: fmt::Debug, J: fmt::Debug> fmt::Display for Report<I, J> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "consistent up to bounds ({} samples)", self.samples);
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        write!(f, "{} violation(s) over {} samples", self.violations.len(), self.samples)
    }
}

fn candidates<I: IndexValue>(space: &SpaceRef<I>, sample: &Sample<I>, b: &CheckBounds) -> Vec<I> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let named = sample.name.iter().flat_map(|u| (0..=b.name_depth).filter_map(move |t| u.at(t).ok()));
    for k in (0..=b.code_bound).map(|c| space.index_of_code(c)).chain(named) {
        if seen.insert(k.clone()) {
            out.push(k);
        }
    }
    out
}

/// `e(β(l), y) < bound`, or `None` when undecidable for the oracle.
fn target_near<J: IndexValue>(target: &SpaceRef<J>, l: &J, y: &[crate::certified::Surd], bound: &Rat) -> Option<bool> {
    let c = target.point(l).ok()?;
    cert_dist_lt_cert(target.metric(), &cert_point(&c), y, bound)
}

struct Ctx<'a, I, J> {
    sys: &'a ApproxSystem<I, J>,
    b: &'a CheckBounds,
}

impl<I: IndexValue, J: IndexValue> Ctx<'_, I, J> {
    /// Reads the fiber of `(k, m, n)` and records unsound elements. Returns
    /// whether the fiber was nonempty.
    fn sound_fiber(&self, k: &I, m: u64, n: u64, x: &CertPoint, fx: &CertPoint, report: &mut Report<I, J>) -> bool {
        report.fibers_read += 1;
        let rn = self.sys.schedule.r(n);
        let mut seen = HashSet::new();
        let mut any = false;
        for l in self.sys.fiber(k, m, n).iter(self.b.stage_cap) {
            if !seen.insert(l.clone()) {
                continue;
            }
            any = true;
            match target_near(&self.sys.target, &l, fx, &rn) {
                Some(true) => {}
                Some(false) => {
                    report.violations.push(Violation::Unsound { quad: Quad::new(k.clone(), m, l, n), x: x.clone() })
                }
                None => report
                    .violations
                    .push(Violation::Undecided { x: x.clone(), detail: format!("target distance for {l:?}") }),
            }
            if seen.len() >= self.b.fiber_limit {
                break;
            }
        }
        any
    }

    /// Centers `k` among the candidates whose ball `(k, m)` contains `x`.
    fn inside(&self, cands: &[I], m: u64, x: &CertPoint, report: &mut Report<I, J>) -> Vec<I> {
        let rm = self.sys.schedule.r(m);
        let mut out = Vec::new();
        for k in cands {
            match ball_contains(&self.sys.source, k, &rm, x) {
                Ok(Some(true)) => out.push(k.clone()),
                Ok(Some(false)) | Err(_) => {}
                Ok(None) => report
                    .violations
                    .push(Violation::Undecided { x: x.clone(), detail: format!("source distance for {k:?}") }),
            }
        }
        out
    }
}

/// Checks soundness and coverage of a metric system:
/// `x ∈ B(α(k), r_m)` must put `f(x)` in `B(β(l), r_n)` for every `l` in the
/// fiber, and for each `n` some `m <= max_m` must give every candidate center
/// near `x` a nonempty fiber.
pub fn check_metric<I: IndexValue, J: IndexValue>(
    sys: &ApproxSystem<I, J>,
    probe: &Probe,
    samples: &[Sample<I>],
    bounds: &CheckBounds,
) -> Report<I, J> {
    let ctx = Ctx { sys, b: bounds };
    let mut report = Report::new(samples.len());
    for sample in samples {
        let x = &sample.point;
        let Some(fx) = probe(x) else {
            report.violations.push(Violation::Undecided { x: x.clone(), detail: "probe has no value".into() });
            continue;
        };
        let cands = candidates(&sys.source, sample, bounds);
        let near: Vec<Vec<I>> = (0..=bounds.max_m).map(|m| ctx.inside(&cands, m, x, &mut report)).collect();
        for n in 0..=bounds.max_n {
            let mut witnessed = false;
            for (m, ks) in near.iter().enumerate() {
                let mut covered = true;
                for k in ks {
                    covered &= ctx.sound_fiber(k, m as u64, n, x, &fx, &mut report);
                }
                witnessed |= covered;
            }
            if !witnessed {
                report.violations.push(Violation::NoWitness { x: x.clone(), n, max_m: bounds.max_m });
            }
        }
    }
    report
}

/// Checks `e(β(l), f(x)) < r_n ⇔ ∃k, m ((k, m, l, n) ∈ S ∧ d(α(k), x) < r_m)`.
///
/// The `⇐` direction is checked on every fiber read. The `⇒` direction is
/// probed for target centers with code `<= code_bound` lying within `r_n/2`
/// of `f(x)`; a target ball whose center sits close to its boundary needs
/// arbitrarily fine source balls, which no bounded search can supply.
pub fn check_topological<I: IndexValue, J: IndexValue>(
    sys: &ApproxSystem<I, J>,
    probe: &Probe,
    samples: &[Sample<I>],
    bounds: &CheckBounds,
) -> Report<I, J> {
    let ctx = Ctx { sys, b: bounds };
    let mut report = Report::new(samples.len());
    let targets: Vec<J> = {
        let mut seen = HashSet::new();
        (0..=bounds.code_bound).map(|c| sys.target.index_of_code(c)).filter(|l| seen.insert(l.clone())).collect()
    };
    for sample in samples {
        let x = &sample.point;
        let Some(fx) = probe(x) else {
            report.violations.push(Violation::Undecided { x: x.clone(), detail: "probe has no value".into() });
            continue;
        };
        let cands = candidates(&sys.source, sample, bounds);
        let near: Vec<Vec<I>> = (0..=bounds.max_m).map(|m| ctx.inside(&cands, m, x, &mut report)).collect();
        for n in 0..=bounds.max_n {
            for (m, ks) in near.iter().enumerate() {
                for k in ks {
                    ctx.sound_fiber(k, m as u64, n, x, &fx, &mut report);
                }
            }
            let half = sys.schedule.r(n).halve();
            for l in &targets {
                if target_near(&sys.target, l, &fx, &half) != Some(true) {
                    continue;
                }
                let reached = near
                    .iter()
                    .enumerate()
                    .any(|(m, ks)| ks.iter().any(|k| sys.fiber(k, m as u64, n).member_by_stage(l, bounds.stage_cap)));
                if !reached {
                    report.violations.push(Violation::Uncovered { x: x.clone(), l: l.clone(), n });
                }
            }
        }
    }
    report
}
