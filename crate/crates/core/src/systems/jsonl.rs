//! Line-oriented system files.
//!
//! A quadruple file starts with a header line
//! `{"source":…,"target":…,"schedule":"dyadic","flavor":"metric","label":…}`
//! followed by one `{"s":…,"k":…,"m":…,"l":…,"n":…}` object per emitted
//! quadruple. Base-pair files start with `{"kind":"uv"}` and carry
//! `{"s":…,"i":…,"j":…}` lines. Replaying a file gives back the same stages.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::rational::Rat;
use crate::renum::REnum;
use crate::schedule::PrecisionSchedule;
use crate::spaces::{
    AbsRationalSpace, DiscreteNatSpace, FractionGridSpace, IndexValue, RationalVectorSpace, SpaceDescriptor, SpaceRef,
};

use super::uv::UvSystem;
use super::{ApproxSystem, EnumeratedRelation, Flavor, Quad};

#[derive(Debug, Error)]
pub enum JsonlError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("empty file")]
    Empty,
    #[error("unsupported space combination: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn at(line: usize, msg: impl ToString) -> JsonlError {
    JsonlError::Line { line, msg: msg.to_string() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Header {
    pub source: SpaceDescriptor,
    pub target: SpaceDescriptor,
    pub schedule: String,
    pub flavor: Flavor,
    #[serde(default)]
    pub label: String,
}

impl Header {
    pub fn of<I: IndexValue, J: IndexValue>(sys: &ApproxSystem<I, J>) -> Self {
        Header {
            source: sys.source.descriptor(),
            target: sys.target.descriptor(),
            schedule: sys.schedule.name().to_string(),
            flavor: sys.flavor,
            label: sys.label.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadLine<I, J> {
    s: u64,
    k: I,
    m: u64,
    l: J,
    n: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UvLine {
    s: u64,
    i: usize,
    j: usize,
}

/// Writes the header and every quadruple emitted at stages `< stages`.
pub fn write_system<I: IndexValue, J: IndexValue>(
    sys: &ApproxSystem<I, J>,
    stages: u64,
    out: &mut dyn Write,
) -> io::Result<()> {
    serde_json::to_writer(&mut *out, &Header::of(sys))?;
    writeln!(out)?;
    for (s, q) in sys.quads().take_stages(stages) {
        serde_json::to_writer(&mut *out, &QuadLine { s, k: q.k, m: q.m, l: q.l, n: q.n })?;
        writeln!(out)?;
    }
    Ok(())
}

pub fn write_uv(sys: &UvSystem, stages: u64, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "{}", serde_json::json!({"kind": "uv"}))?;
    for (s, (i, j)) in sys.pairs.take_stages(stages) {
        serde_json::to_writer(&mut *out, &UvLine { s, i, j })?;
        writeln!(out)?;
    }
    Ok(())
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty())
}

pub fn read_header(text: &str) -> Result<Header, JsonlError> {
    let (no, first) = lines(text).next().ok_or(JsonlError::Empty)?;
    serde_json::from_str(first).map_err(|e| at(no, e))
}

fn batches<T: crate::renum::Elem>(items: Vec<(u64, T)>) -> REnum<T> {
    let mut by_stage: BTreeMap<u64, Vec<T>> = BTreeMap::new();
    for (s, x) in items {
        by_stage.entry(s).or_default().push(x);
    }
    let by_stage = Arc::new(by_stage);
    REnum::from_batches(move |s| by_stage.get(&s).cloned().unwrap_or_default())
}

/// Reads the quadruple lines of a system file, validating indices against
/// the given spaces.
pub fn read_quads<I: IndexValue, J: IndexValue>(
    text: &str,
    source: &SpaceRef<I>,
    target: &SpaceRef<J>,
) -> Result<REnum<Quad<I, J>>, JsonlError> {
    let mut items = Vec::new();
    for (no, line) in lines(text).skip(1) {
        let q: QuadLine<I, J> = serde_json::from_str(line).map_err(|e| at(no, e))?;
        source.point(&q.k).map_err(|e| at(no, e))?;
        target.point(&q.l).map_err(|e| at(no, e))?;
        items.push((q.s, Quad::new(q.k, q.m, q.l, q.n)));
    }
    Ok(batches(items))
}

pub fn read_system<I: IndexValue, J: IndexValue>(
    text: &str,
    source: SpaceRef<I>,
    target: SpaceRef<J>,
) -> Result<ApproxSystem<I, J>, JsonlError> {
    let header = read_header(text)?;
    let schedule: PrecisionSchedule = header.schedule.parse().map_err(|e| at(1, e))?;
    let quads = read_quads(text, &source, &target)?;
    Ok(ApproxSystem::new(source, target, schedule, header.flavor, header.label, EnumeratedRelation::new(quads)))
}

pub fn read_uv(text: &str) -> Result<UvSystem, JsonlError> {
    let mut it = lines(text);
    let (no, first) = it.next().ok_or(JsonlError::Empty)?;
    let head: Value = serde_json::from_str(first).map_err(|e| at(no, e))?;
    if head != serde_json::json!({"kind": "uv"}) {
        return Err(at(no, "expected {\"kind\":\"uv\"} header"));
    }
    let mut items = Vec::new();
    for (no, line) in it {
        let p: UvLine = serde_json::from_str(line).map_err(|e| at(no, e))?;
        items.push((p.s, (p.i, p.j)));
    }
    Ok(UvSystem::new(batches(items)))
}

/// A system file loaded with spaces chosen from its header.
#[derive(Debug, Clone)]
pub enum LoadedSystem {
    Vector(ApproxSystem<Vec<Rat>, Vec<Rat>>),
    Grid(ApproxSystem<(u64, u64), (u64, u64)>),
    Nat(ApproxSystem<u64, u64>),
}

pub fn vector_space(d: &SpaceDescriptor) -> Option<SpaceRef<Vec<Rat>>> {
    match *d {
        SpaceDescriptor::Rational { dim, metric } => Some(Arc::new(RationalVectorSpace::new(dim, metric))),
        SpaceDescriptor::AbsRational => Some(Arc::new(AbsRationalSpace)),
        _ => None,
    }
}

pub fn load_system(text: &str) -> Result<LoadedSystem, JsonlError> {
    let h = read_header(text)?;
    match (&h.source, &h.target) {
        (SpaceDescriptor::FractionGrid, SpaceDescriptor::FractionGrid) => {
            let g: SpaceRef<(u64, u64)> = Arc::new(FractionGridSpace);
            Ok(LoadedSystem::Grid(read_system(text, g.clone(), g)?))
        }
        (SpaceDescriptor::Nat, SpaceDescriptor::Nat) => {
            let g: SpaceRef<u64> = Arc::new(DiscreteNatSpace);
            Ok(LoadedSystem::Nat(read_system(text, g.clone(), g)?))
        }
        (a, b) => match (vector_space(a), vector_space(b)) {
            (Some(src), Some(tgt)) => Ok(LoadedSystem::Vector(read_system(text, src, tgt)?)),
            _ => Err(JsonlError::Unsupported(format!("{a:?} → {b:?}"))),
        },
    }
}
