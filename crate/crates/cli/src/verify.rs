//! The `verify` subcommand.

use std::path::Path;

use approxsys::names::sqrt_name;
use approxsys::spaces::{FiniteInstance, IndexValue};
use approxsys::systems::builders::builder;
use approxsys::systems::fixtures::{halving_probe, halving_samples, halving_system, remark_probe, remark_system};
use approxsys::systems::jsonl::{load_system, read_uv, LoadedSystem};
use approxsys::systems::{
    check_metric, check_topological, check_uv_condition, maximal_uv_system, ApproxSystem, CheckBounds, Flavor, Probe,
    Report, Sample,
};
use approxsys::{rat, PrecisionSchedule, Rat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::Failure;

/// Bounds for the halving fixture; its coverage witnesses need `m` up to 25.
pub const HALVING_BOUNDS: CheckBounds =
    CheckBounds { max_n: 4, max_m: 40, stage_cap: 0, code_bound: 120, name_depth: 40, fiber_limit: 1 };

/// Bounds for builder and file systems.
pub const SYSTEM_BOUNDS: CheckBounds =
    CheckBounds { max_n: 3, max_m: 8, stage_cap: 50, code_bound: 30, name_depth: 8, fiber_limit: 2 };

pub fn instance(inst_text: &str, system: Option<String>, stages: u64) -> Result<bool, Failure> {
    let inst = FiniteInstance::from_json(inst_text).map_err(|e| Failure::Usage(format!("instance: {e}")))?;
    let r = match system {
        Some(text) => read_uv(&text).map_err(|e| Failure::Usage(format!("system: {e}")))?,
        None => maximal_uv_system(&inst),
    };
    let report = check_uv_condition(&inst, &r, stages);
    for line in report.lines(&inst) {
        println!("{line}");
    }
    if report.is_empty() {
        println!("consistent up to bounds (stage cap {stages})");
    } else {
        println!("{report}");
    }
    Ok(report.is_empty())
}

fn print<I: IndexValue, J: IndexValue>(label: &str, report: &Report<I, J>) -> bool {
    println!("{label}");
    println!("{report}");
    report.is_empty()
}

fn random_samples(dim: usize, count: usize, seed: u64, sch: &PrecisionSchedule) -> Vec<Sample<Vec<Rat>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let q: Vec<Rat> = (0..dim).map(|_| rat(rng.gen_range(-20..=20), rng.gen_range(1..=8))).collect();
            Sample::rational(q, sch.clone())
        })
        .collect()
}

fn check_vector(sys: &ApproxSystem<Vec<Rat>, Vec<Rat>>, probe: &Probe, samples: &[Sample<Vec<Rat>>]) -> bool {
    let report = match sys.flavor {
        Flavor::Metric => check_metric(sys, probe, samples, &SYSTEM_BOUNDS),
        Flavor::Topological => check_topological(sys, probe, samples, &SYSTEM_BOUNDS),
    };
    print(&format!("{} ({:?}, schedule {})", sys.label, sys.flavor, sys.schedule.name()), &report)
}

pub fn system(
    spec: &str,
    against: Option<&str>,
    sch: PrecisionSchedule,
    count: usize,
    seed: u64,
) -> Result<bool, Failure> {
    match spec {
        "halving" => {
            let r = check_metric(
                &halving_system(sch.clone()),
                &halving_probe(),
                &halving_samples(sch.clone()),
                &HALVING_BOUNDS,
            );
            return Ok(print(&format!("halving (schedule {})", sch.name()), &r));
        }
        "remark" => {
            let samples = vec![Sample::rational(vec![rat(1, 2)], sch.clone())];
            let r = check_metric(&remark_system(sch.clone()), &remark_probe(), &samples, &SYSTEM_BOUNDS);
            return Ok(print(&format!("remark (schedule {})", sch.name()), &r));
        }
        _ => {}
    }
    if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec).map_err(|e| Failure::Usage(format!("{spec}: {e}")))?;
        let loaded = load_system(&text).map_err(|e| Failure::Usage(format!("{spec}: {e}")))?;
        let LoadedSystem::Vector(sys) = loaded else {
            return Err(Failure::Usage(format!("{spec}: only rational vector systems can be checked from a file")));
        };
        let Some(name) = against else {
            return Err(Failure::Usage("a system file needs --against <builder>".into()));
        };
        let (_, probe) = builder(name, sys.schedule.clone()).map_err(|e| Failure::Usage(e.to_string()))?;
        let samples = random_samples(sys.source.dim(), count, seed, &sys.schedule);
        return Ok(check_vector(&sys, &probe, &samples));
    }
    let (sys, probe) = builder(spec, sch.clone()).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut samples = random_samples(sys.source.dim(), count, seed, &sch);
    if sys.source.dim() == 1 {
        samples.extend(Sample::named(sqrt_name(rat(2, 1), sch.clone())));
    }
    Ok(check_vector(&sys, &probe, &samples))
}
