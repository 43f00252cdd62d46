//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use approxsys::engines::enumeration::check_operator_on_instance;
use approxsys::engines::{
    build_r, derive_w, evaluate_metric, extract_metric_system, h_by_exhaustion, metric_to_topological,
    topological_to_metric, IdentityOperator, RecursiveOperator,
};
use approxsys::names::{constant_name, gamma_beta_v, sqrt_name, AlphaName, DEFAULT_STEP_CAP};
use approxsys::spaces::inclusion::{closed_ball_inside, irreflexive, shrink_radius, shrunk_ball_included, transitive};
use approxsys::spaces::{BallIndex, FiniteInstance, MetricKind, RationalVectorSpace, Space, SpaceRef};
use approxsys::systems::builders::{
    add_system, affine_system, const_system, id_probe, id_system, mul_system, sq_system, RatSystem,
};
use approxsys::systems::fixtures::{halving_system, two_point_instance};
use approxsys::systems::{
    check_metric, check_topological, check_uv_condition, is_saturated, maximal_uv_system, CheckBounds, Quad, Sample,
    SatBounds, UvSystem,
};
use approxsys::{rat, PrecisionSchedule, Rat};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

type Criterion = (&'static str, fn() -> Outcome, u64);

fn scalar() -> SpaceRef<Vec<Rat>> {
    Arc::new(RationalVectorSpace::scalar())
}

fn within(v: &AlphaName<Vec<Rat>>, want: &Rat, n: u64, sch: &PrecisionSchedule) -> Result<(), String> {
    let got = v.at(n).map_err(|e| format!("n = {n}: {e}"))?;
    if (&got[0] - want).abs() < sch.r(n) {
        Ok(())
    } else {
        Err(format!("n = {n}: {} is not within {} of {want}", got[0], sch.r(n)))
    }
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    rat(rng.gen_range(-30..=30), rng.gen_range(1..=12))
}

/// Evaluation soundness on builder systems.
fn criterion_1() -> Outcome {
    let d = PrecisionSchedule::dyadic();
    let v = evaluate_metric(&sq_system(d.clone()), &sqrt_name(rat(2, 1), d.clone()), DEFAULT_STEP_CAP);
    for n in 0..=10 {
        within(&v, &rat(2, 1), n, &d)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checks = 0;
    for _ in 0..200 {
        let (x, y, a, b) = (random_rat(&mut rng), random_rat(&mut rng), random_rat(&mut rng), random_rat(&mut rng));
        let cases: Vec<(RatSystem, Vec<Rat>, Rat)> = vec![
            (id_system(d.clone()), vec![x.clone()], x.clone()),
            (const_system(vec![a.clone()], d.clone()), vec![x.clone()], a.clone()),
            (affine_system(a.clone(), b.clone(), d.clone()), vec![x.clone()], &a * &x + &b),
            (add_system(d.clone()), vec![x.clone(), y.clone()], &x + &y),
            (mul_system(d.clone()), vec![x.clone(), y.clone()], &x * &y),
        ];
        for (sys, input, want) in cases {
            let v = evaluate_metric(&sys, &constant_name(input.clone(), d.clone()), DEFAULT_STEP_CAP);
            for n in 0..=12 {
                within(&v, &want, n, &d).map_err(|e| format!("{} at {input:?}: {e}", sys.label))?;
                checks += 1;
            }
        }
    }
    Ok(format!("sq(√2) exact for n <= 10; {checks} builder outputs exact, 0 violations"))
}

fn instances() -> Vec<FiniteInstance> {
    std::iter::once(two_point_instance()).chain((0..20).map(FiniteInstance::random)).collect()
}

/// Enumeration operator of the maximal pair system.
fn criterion_2() -> Outcome {
    let mut points = 0;
    for (i, inst) in instances().iter().enumerate() {
        let bad = check_operator_on_instance(inst);
        if !bad.is_empty() {
            return Err(format!("instance {i}: mismatch at x = {bad:?}"));
        }
        points += inst.domain().len();
    }
    Ok(format!("21 instances, {points} points, exact set equality"))
}

/// Pair system built from an operator and the intersection table.
fn criterion_3() -> Outcome {
    for (i, inst) in instances().iter().enumerate() {
        let r = build_r(&derive_w(inst), &h_by_exhaustion(inst));
        let report = check_uv_condition(inst, &UvSystem::new(r), 1);
        if !report.is_empty() {
            return Err(format!("instance {i}: {report}"));
        }
    }
    Ok("21 instances, empty reports".into())
}

/// Rationals `a/b` in `[-1, 1]` with `b <= 9`, drawn with a fixed seed.
fn unit_samples(count: usize, sch: &PrecisionSchedule) -> Vec<Sample<Vec<Rat>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    (0..count)
        .map(|_| {
            let b = rng.gen_range(1..=9);
            Sample::rational(vec![rat(rng.gen_range(-b..=b), b)], sch.clone())
        })
        .collect()
}

/// Metric → topological → metric round trip.
fn criterion_4() -> Outcome {
    let d = PrecisionSchedule::dyadic();
    let t = metric_to_topological(&id_system(d.clone()));
    let rt = topological_to_metric(&t);
    let v = evaluate_metric(&rt, &constant_name(vec![rat(1, 3)], d.clone()), 10_000);
    for n in 0..=10 {
        within(&v, &rat(1, 3), n, &d)?;
    }
    let samples = unit_samples(50, &d);
    let b = CheckBounds { max_n: 2, max_m: 7, stage_cap: 80, code_bound: 20, name_depth: 7, fiber_limit: 2 };
    let r = check_topological(&t, &id_probe(), &samples, &b);
    if !r.is_empty() {
        return Err(format!("m2t(id): {r}"));
    }
    let r = check_metric(&rt, &id_probe(), &samples, &b);
    if !r.is_empty() {
        return Err(format!("t2m(m2t(id)): {r}"));
    }
    Ok("round trip within r_n at 1/3 for n <= 10; both systems consistent on 50 samples".into())
}

/// Extraction from the identity operator.
fn criterion_5() -> Outcome {
    let d = PrecisionSchedule::dyadic();
    let op: Arc<dyn RecursiveOperator<Vec<Rat>, Vec<Rat>>> = Arc::new(IdentityOperator);
    let s = extract_metric_system(op, scalar(), scalar(), d.clone());
    let sp = RationalVectorSpace::scalar();
    let mut sampled = 0;
    for code in [0u64, 3, 4, 7, 12, 61] {
        let k = sp.index_of_code(code);
        for n in 0..=3 {
            // l = k needs codes up to code(k); s = p = n + 1 needs stage n + 1
            let cap = code.max(n + 1);
            if !s.contains(&Quad::new(k.clone(), n + 2, k.clone(), n), cap) {
                return Err(format!("({k:?}, {}, {k:?}, {n}) not found by stage {cap}", n + 2));
            }
            sampled += 1;
        }
    }
    let v = evaluate_metric(&s, &constant_name(vec![rat(2, 7)], d.clone()), 1_000_000);
    for n in 0..=3 {
        within(&v, &rat(2, 7), n, &d)?;
    }
    Ok(format!("{sampled} diagonal quadruples found; evaluation at 2/7 within r_n for n <= 3"))
}

/// Output index bound within which each sampled member of `[1/2]_V` must
/// appear; the slowest member of the sample below appears near 142 000.
const GAMMA_OUTPUT_CAP: u64 = 150_000;

/// The converter from α-names to set names.
fn criterion_6() -> Outcome {
    let d = PrecisionSchedule::dyadic();
    let half = rat(1, 2);
    let out = gamma_beta_v(&constant_name(vec![half.clone()], d.clone()), scalar(), DEFAULT_STEP_CAP);
    let first = out.prefix(200).map_err(|e| e.to_string())?;
    for b in &first {
        if (&b.center[0] - &half).abs() >= d.r(b.radius) {
            return Err(format!("unsound output {b:?}"));
        }
    }
    // members with center code <= 40 and radius index <= 5
    let sp = scalar();
    let mut small = BTreeSet::new();
    for code in 0..=40 {
        for m in 0..=5 {
            let k = sp.index_of_code(code);
            if (&k[0] - &half).abs() < d.r(m) {
                small.insert(BallIndex::new(k, m));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let small: Vec<_> = small.into_iter().collect();
    let mut pending: BTreeSet<BallIndex<Vec<Rat>>> = small.choose_multiple(&mut rng, 20).cloned().collect();
    let mut i = 0;
    while !pending.is_empty() && i < GAMMA_OUTPUT_CAP {
        pending.remove(&out.at(i).map_err(|e| e.to_string())?);
        i += 1;
    }
    if !pending.is_empty() {
        return Err(format!("{pending:?} not listed among the first {GAMMA_OUTPUT_CAP} outputs"));
    }
    Ok(format!("200 outputs sound; 20 sampled members listed within {i} outputs (cap {GAMMA_OUTPUT_CAP})"))
}

/// Fixtures with known answers.
fn criterion_7() -> Outcome {
    let inst = two_point_instance();
    let got: BTreeSet<(usize, usize)> = maximal_uv_system(&inst).pairs.approx(0).into_iter().collect();
    let want: BTreeSet<(usize, usize)> =
        (0..inst.num_u()).flat_map(|i| (1..inst.num_v()).map(move |j| (i, j))).collect();
    if got != want {
        return Err(format!("two-point maximal system {got:?}, expected {want:?}"));
    }
    let h = halving_system(PrecisionSchedule::harmonic());
    let found =
        is_saturated(&h, &SatBounds { code_bound: 10, max_m: 0, max_n: 0, stage: 0 }).map_err(|e| e.to_string())?;
    let witness = found
        .iter()
        .find(|w| w.present == Quad::new((1, 0), 0, (0, 0), 0) && w.missing == Quad::new((2, 1), 0, (0, 0), 0))
        .ok_or_else(|| format!("expected witness not among {found:?}"))?;
    let o = Command::new(env!("CARGO_BIN_EXE_approxsys"))
        .args(["verify", "--system", "halving", "--schedule", "dyadic"])
        .output()
        .map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&o.stdout);
    if o.status.code() != Some(1) || !text.contains("condition (a)") {
        return Err(format!("verify under dyadic: exit {:?}, output {text}", o.status.code()));
    }
    Ok(format!("I × (J∖{{0}}) exact; witness {witness}; dyadic halving flagged"))
}

fn random_ball(rng: &mut ChaCha8Rng, dim: usize) -> BallIndex<Vec<Rat>> {
    BallIndex::new((0..dim).map(|_| random_rat(rng)).collect(), rng.gen_range(0..6))
}

/// A point near `c` at a random fraction of `r`.
fn nudge(rng: &mut ChaCha8Rng, c: &[Rat], r: &Rat) -> Vec<Rat> {
    c.iter().map(|x| x + &(r * &rat(rng.gen_range(-99..=99), 100))).collect()
}

/// Formal inclusion properties on random rational samples.
fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut held = [0usize; 4];
    for i in 0..500 {
        let sch = if i % 2 == 0 { PrecisionSchedule::dyadic() } else { PrecisionSchedule::harmonic() };
        let dim = 1 + i % 2;
        let space = RationalVectorSpace::new(dim, MetricKind::Max);
        let c = random_ball(&mut rng, dim);
        if !irreflexive(&space, &sch, &c) {
            return Err(format!("{c:?} <_d itself"));
        }
        held[0] += 1;
        // nested chain a <_d b <_d c, built so the premises usually hold
        let b = BallIndex::new(nudge(&mut rng, &c.center, &sch.r(c.radius + 2)), c.radius + 1 + rng.gen_range(0..3));
        let a = BallIndex::new(nudge(&mut rng, &b.center, &sch.r(b.radius + 2)), b.radius + 1 + rng.gen_range(0..3));
        if let Some(ok) = transitive(&space, &sch, &a, &b, &c) {
            if !ok {
                return Err(format!("transitivity fails on {a:?}, {b:?}, {c:?}"));
            }
            held[1] += 1;
        }
        let x = nudge(&mut rng, &a.center, &sch.r(a.radius));
        if let Some(ok) = closed_ball_inside(&space, &sch, &a, &b, &x) {
            if !ok {
                return Err(format!("closed ball of {a:?} leaves {b:?} at {x:?}"));
            }
            held[2] += 1;
        }
        let xbar = nudge(&mut rng, &c.center, &sch.r(c.radius));
        if let Some(m) = shrink_radius(&space, &sch, &c, &xbar) {
            let x = nudge(&mut rng, &xbar, &sch.r(m));
            if shrunk_ball_included(&space, &sch, &c, &xbar, &x) != Some(true) {
                return Err(format!("shrunk ball at {xbar:?} with m = {m} fails at {x:?}"));
            }
            held[3] += 1;
        }
    }
    if held[1..].iter().any(|&h| h < 250) {
        return Err(format!("too few samples met their premises: {held:?}"));
    }
    Ok(format!("500 samples; premises met (irreflexive, transitive, closed ball, shrink) = {held:?}"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("evaluation soundness", criterion_1, 60),
        ("enumeration operator", criterion_2, 5),
        ("pair system pipeline", criterion_3, 10),
        ("transformation round trip", criterion_4, 120),
        ("extraction", criterion_5, 300),
        ("set-name converter", criterion_6, 60),
        ("known fixtures", criterion_7, 60),
        ("formal inclusion", criterion_8, 10),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(d) if took > Duration::from_secs(*limit) => Err(format!("{d}, but took over {limit} s")),
            o => o,
        };
        match outcome {
            Ok(d) => println!("PASS {} {name}: {d} ({:.2} s)", i + 1, took.as_secs_f64()),
            Err(e) => {
                failed += 1;
                println!("FAIL {} {name}: {e} ({:.2} s)", i + 1, took.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
