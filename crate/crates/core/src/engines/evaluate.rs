//! Evaluation of a metric system on an α-name.

use crate::names::{reschedule, AlphaName, NameError};
use crate::schedule::ScheduleKind;
use crate::spaces::IndexValue;
use crate::systems::ApproxSystem;
use crate::tupling::unpair;

/// `v(n)`: search `t = 0, 1, …` with `(m, s) = unpair(t)` and return the
/// first element of the fiber of `(u(m), m, n)` at stage `s`.
///
/// For a metric system of `f` and a name `u` of `x ∈ dom(f)`, `v` names
/// `f(x)`. A search exceeding `step_cap` fails with a step-cap error, which
/// is the expected outcome on names outside the domain.
pub fn evaluate_metric<I: IndexValue, J: IndexValue>(
    sys: &ApproxSystem<I, J>,
    u: &AlphaName<I>,
    step_cap: u64,
) -> AlphaName<J> {
    let same = u.schedule().kind() == sys.schedule.kind() && sys.schedule.kind() != ScheduleKind::Custom;
    let u = if same { u.clone() } else { reschedule(u, sys.schedule.clone()) };
    let sys = sys.clone();
    AlphaName::from_fn(sys.schedule.clone(), move |n| {
        for t in 0..step_cap {
            let (m, s) = unpair(t);
            let k = u.at(m)?;
            if let Some(l) = sys.fiber(&k, m, n).first(s) {
                return Ok(l);
            }
        }
        Err(NameError::StepCap { what: format!("evaluation of {} at n = {n}", sys.label), cap: step_cap })
    })
}
