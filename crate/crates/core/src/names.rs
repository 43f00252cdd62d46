//! Names of points as memoized index streams.
//!
//! An α-name `u` of `x` satisfies `d(α(u(t)), x) < r_t` for every `t`. A set
//! name enumerates `[x]_U`, the ball indices `(k, m)` whose ball contains `x`.
//! Streams are computed on demand and memoized; a stream may fail at a
//! position when an internal search exceeds its step cap.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::certified::{CertPoint, Surd};
use crate::rational::Rat;
use crate::renum::Elem;
use crate::schedule::PrecisionSchedule;
use crate::spaces::{ball_contains, formally_included, BallIndex, IndexValue, SpaceError, SpaceRef};
use crate::tupling::{quadruple, unpair};

/// Default bound on the steps of a μ-search inside a name converter.
pub const DEFAULT_STEP_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NameError {
    #[error("{what}: no result within step cap {cap}")]
    StepCap { what: String, cap: u64 },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("{0}")]
    Invalid(String),
}

type PointFn<T> = Arc<dyn Fn(u64) -> Result<T, NameError> + Send + Sync>;

/// An α-name over some index type.
pub struct AlphaName<I> {
    gen: PointFn<I>,
    memo: Arc<Mutex<HashMap<u64, I>>>,
    schedule: PrecisionSchedule,
    witness: Option<CertPoint>,
}

impl<I> Clone for AlphaName<I> {
    fn clone(&self) -> Self {
        AlphaName {
            gen: self.gen.clone(),
            memo: self.memo.clone(),
            schedule: self.schedule.clone(),
            witness: self.witness.clone(),
        }
    }
}

impl<I> fmt::Debug for AlphaName<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlphaName").field("schedule", &self.schedule).field("witness", &self.witness).finish()
    }
}

impl<I: Elem> AlphaName<I> {
    pub fn from_fn<F>(schedule: PrecisionSchedule, f: F) -> Self
    where
        F: Fn(u64) -> Result<I, NameError> + Send + Sync + 'static,
    {
        AlphaName { gen: Arc::new(f), memo: Arc::new(Mutex::new(HashMap::new())), schedule, witness: None }
    }

    /// Attaches the named point for oracle checks. Engines never read it.
    pub fn with_witness(mut self, x: CertPoint) -> Self {
        self.witness = Some(x);
        self
    }

    /// `u(t)`.
    pub fn at(&self, t: u64) -> Result<I, NameError> {
        if let Some(v) = self.memo.lock().unwrap().get(&t) {
            return Ok(v.clone());
        }
        let v = (self.gen)(t)?;
        self.memo.lock().unwrap().insert(t, v.clone());
        Ok(v)
    }

    pub fn schedule(&self) -> &PrecisionSchedule {
        &self.schedule
    }

    pub fn witness(&self) -> Option<&CertPoint> {
        self.witness.as_ref()
    }

    /// Checks `d(α(u(t)), x) < r_t` against the witness for `t <= upto`.
    /// Returns the first failing `t`.
    pub fn check_contract(&self, space: &SpaceRef<I>, upto: u64) -> Result<Option<u64>, NameError>
    where
        I: IndexValue,
    {
        let x = self.witness.as_ref().ok_or_else(|| NameError::Invalid("name has no witness".into()))?;
        for t in 0..=upto {
            let inside = ball_contains(space, &self.at(t)?, &self.schedule.r(t), x)?;
            if inside != Some(true) {
                return Ok(Some(t));
            }
        }
        Ok(None)
    }
}

/// `u(t) = point` for all `t`.
pub fn constant_name(point: Vec<Rat>, schedule: PrecisionSchedule) -> AlphaName<Vec<Rat>> {
    let witness = point.iter().cloned().map(Surd::rational).collect();
    AlphaName::from_fn(schedule, move |_| Ok(point.clone())).with_witness(witness)
}

/// Bisection on `[0, max(1, c)]` keeping `lo² <= c <= hi²`, stopped once the
/// width drops below `r`. Returns the final interval.
pub fn sqrt_bracket(c: &Rat, r: &Rat) -> (Rat, Rat) {
    assert!(!c.is_negative(), "square root of a negative number");
    let mut lo = Rat::zero();
    let mut hi = c.clone().max(Rat::one());
    while &(&hi - &lo) >= r {
        let mid = (&lo + &hi).halve();
        if &mid.square() <= c {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// A name of `√c` over the scalar space: `u(t)` is the midpoint of the
/// bisection bracket of width `< r_t`.
pub fn sqrt_name(c: Rat, schedule: PrecisionSchedule) -> AlphaName<Vec<Rat>> {
    let witness = vec![Surd::sqrt(c.clone())];
    let sch = schedule.clone();
    AlphaName::from_fn(schedule, move |t| {
        let (lo, hi) = sqrt_bracket(&c, &sch.r(t));
        Ok(vec![(lo + hi).halve()])
    })
    .with_witness(witness)
}

/// `u′(t) = u(μs[r_s <= r′_t])`: a name of the same point under `target`.
pub fn reschedule<I: Elem>(u: &AlphaName<I>, target: PrecisionSchedule) -> AlphaName<I> {
    let src = u.clone();
    let tgt = target.clone();
    let mut out = AlphaName::from_fn(target, move |t| {
        let m = src.schedule().find_m_below(&tgt.r(t));
        src.at(m)
    });
    out.witness = u.witness.clone();
    out
}

/// `u(t) = u₁(t) ⧺ u₂(t) ⧺ …`: a name of the tuple point under the max
/// metric. Parts are rescheduled to the schedule of the first.
pub fn product_name(parts: &[AlphaName<Vec<Rat>>]) -> AlphaName<Vec<Rat>> {
    assert!(!parts.is_empty(), "empty product");
    let sch = parts[0].schedule().clone();
    let parts: Vec<_> = parts.iter().map(|u| reschedule(u, sch.clone())).collect();
    let witness: Option<CertPoint> =
        parts.iter().map(|u| u.witness().cloned()).collect::<Option<Vec<_>>>().map(|w| w.concat());
    let mut out = AlphaName::from_fn(sch, move |t| {
        let mut v = Vec::new();
        for u in &parts {
            v.extend(u.at(t)?);
        }
        Ok(v)
    });
    out.witness = witness;
    out
}

type ScanFn<T> = Arc<dyn Fn(u64) -> Result<Option<T>, NameError> + Send + Sync>;

struct ScanState<T> {
    found: Vec<T>,
    next: u64,
}

/// A total enumeration of a set of ball indices.
///
/// Built from a candidate test over steps `t = 0, 1, 2, …`; the `i`-th value
/// is the `i`-th accepted candidate.
pub struct SetName<I> {
    scan: ScanFn<BallIndex<I>>,
    state: Arc<Mutex<ScanState<BallIndex<I>>>>,
    cap: u64,
    what: &'static str,
    witness: Option<CertPoint>,
}

impl<I> Clone for SetName<I> {
    fn clone(&self) -> Self {
        SetName {
            scan: self.scan.clone(),
            state: self.state.clone(),
            cap: self.cap,
            what: self.what,
            witness: self.witness.clone(),
        }
    }
}

impl<I> fmt::Debug for SetName<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SetName").field("what", &self.what).field("cap", &self.cap).finish()
    }
}

impl<I: Elem> SetName<I> {
    pub fn from_scan<F>(what: &'static str, cap: u64, f: F) -> Self
    where
        F: Fn(u64) -> Result<Option<BallIndex<I>>, NameError> + Send + Sync + 'static,
    {
        SetName {
            scan: Arc::new(f),
            state: Arc::new(Mutex::new(ScanState { found: Vec::new(), next: 0 })),
            cap,
            what,
            witness: None,
        }
    }

    /// A stream given position by position.
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(u64) -> BallIndex<I> + Send + Sync + 'static,
    {
        SetName::from_scan("set name", u64::MAX, move |t| Ok(Some(f(t))))
    }

    pub fn with_witness(mut self, x: CertPoint) -> Self {
        self.witness = Some(x);
        self
    }

    pub fn witness(&self) -> Option<&CertPoint> {
        self.witness.as_ref()
    }

    /// The `i`-th element.
    pub fn at(&self, i: u64) -> Result<BallIndex<I>, NameError> {
        let mut st = self.state.lock().unwrap();
        while st.found.len() as u64 <= i {
            if st.next >= self.cap {
                return Err(NameError::StepCap { what: self.what.to_string(), cap: self.cap });
            }
            let t = st.next;
            if let Some(b) = (self.scan)(t)? {
                st.found.push(b);
            }
            st.next += 1;
        }
        Ok(st.found[i as usize].clone())
    }

    /// The first `n` elements.
    pub fn prefix(&self, n: u64) -> Result<Vec<BallIndex<I>>, NameError> {
        (0..n).map(|i| self.at(i)).collect()
    }

    /// Number of candidate steps consumed so far.
    pub fn steps_used(&self) -> u64 {
        self.state.lock().unwrap().next
    }
}

/// Enumerates `[x]_U` for a rational point `x`: ball indices `(k, m)` in
/// `pair(code(k), m)` order, kept when `d(α(k), x) < r_m`.
pub fn canonical_set_name<I: IndexValue>(space: SpaceRef<I>, schedule: PrecisionSchedule, x: Vec<Rat>) -> SetName<I> {
    let witness: CertPoint = x.iter().cloned().map(Surd::rational).collect();
    let w = witness.clone();
    SetName::from_scan("canonical set name", u64::MAX, move |t| {
        let (code, m) = unpair(t);
        let k = space.index_of_code(code);
        let inside = ball_contains(&space, &k, &schedule.r(m), &w)?;
        Ok((inside == Some(true)).then(|| BallIndex::new(k, m)))
    })
    .with_witness(witness)
}

/// `Γ_{U,α}(u)(m)`: the center of the first listed ball with radius index `m`.
pub fn gamma_u_alpha<I: Elem>(u: &SetName<I>, schedule: PrecisionSchedule, step_cap: u64) -> AlphaName<I> {
    let src = u.clone();
    let mut out = AlphaName::from_fn(schedule, move |m| {
        for i in 0..step_cap {
            let b = src.at(i)?;
            if b.radius == m {
                return Ok(b.center);
            }
        }
        Err(NameError::StepCap { what: format!("Γ_U,α at m = {m}"), cap: step_cap })
    });
    out.witness = u.witness.clone();
    out
}

/// `Γ_{β,V}(v)`: an enumeration of `[y]_V` from a β-name `v` of `y`.
///
/// Step `t` decodes `(n, code(l′), n′, s) = (π₁, π₂, π₃, π₄)(t)` and is a zero
/// of `Λ(v)` when `(β(v(n)), n) <_e (β(l′), n′)` is confirmed at stage `s`.
/// The `p`-th output is the ball `(l′, n′)` of the `p`-th zero.
pub fn gamma_beta_v<J: IndexValue>(v: &AlphaName<J>, space: SpaceRef<J>, step_cap: u64) -> SetName<J> {
    let src = v.clone();
    let schedule = v.schedule().clone();
    let mut out = SetName::from_scan("Γ_β,V", step_cap, move |t| {
        let (n, code, n2, s) = quadruple(t);
        let inner = BallIndex::new(src.at(n)?, n);
        let outer = BallIndex::new(space.index_of_code(code), n2);
        let ok = formally_included(space.as_ref(), &schedule, &inner, &outer, s)?.confirmed();
        Ok(ok.then_some(outer))
    });
    out.witness = v.witness.clone();
    out
}

/// Exact check of `q − r < √c < q + r` by squaring.
pub fn within_sqrt(q: &Rat, c: &Rat, r: &Rat) -> bool {
    let lo = q - r;
    let hi = q + r;
    let below = lo.is_negative() || &lo.square() < c;
    below && hi.is_positive() && c < &hi.square()
}
