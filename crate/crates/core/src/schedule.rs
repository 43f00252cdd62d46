//! Precision schedules `r_0, r_1, r_2, …`: positive rationals accumulating at 0.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::rational::Rat;

/// How many leading values a custom schedule is checked for at construction.
pub const CUSTOM_SPOT_CHECK: u64 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleError {
    #[error("custom schedule value r_{t} = {value} is not positive")]
    NonPositive { t: u64, value: Rat },
    #[error("unknown schedule {0:?} (expected dyadic or harmonic)")]
    Unknown(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScheduleKind {
    Dyadic,
    Harmonic,
    Custom,
}

type RFn = Arc<dyn Fn(u64) -> Rat + Send + Sync>;

#[derive(Clone)]
pub struct PrecisionSchedule {
    kind: ScheduleKind,
    custom: Option<RFn>,
}

impl PrecisionSchedule {
    /// `r_t = 2^-t`.
    pub fn dyadic() -> Self {
        PrecisionSchedule { kind: ScheduleKind::Dyadic, custom: None }
    }

    /// `r_t = 1/(t+1)`.
    pub fn harmonic() -> Self {
        PrecisionSchedule { kind: ScheduleKind::Harmonic, custom: None }
    }

    /// A caller-supplied schedule. Positivity is spot-checked on the first
    /// [`CUSTOM_SPOT_CHECK`] values; accumulation at 0 is the caller's promise,
    /// and `find_m_below` will not terminate if it is broken.
    pub fn custom<F>(f: F) -> Result<Self, ScheduleError>
    where
        F: Fn(u64) -> Rat + Send + Sync + 'static,
    {
        for t in 0..CUSTOM_SPOT_CHECK {
            let value = f(t);
            if !value.is_positive() {
                return Err(ScheduleError::NonPositive { t, value });
            }
        }
        Ok(PrecisionSchedule { kind: ScheduleKind::Custom, custom: Some(Arc::new(f)) })
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn r(&self, t: u64) -> Rat {
        match self.kind {
            ScheduleKind::Dyadic => Rat::dyadic(t),
            ScheduleKind::Harmonic => Rat::new(1, BigInt::from(t) + 1),
            ScheduleKind::Custom => (self.custom.as_ref().unwrap())(t),
        }
    }

    /// Least `m` with `r_m <= q`. Panics unless `q > 0`.
    pub fn find_m_below(&self, q: &Rat) -> u64 {
        assert!(q.is_positive(), "find_m_below needs a positive bound");
        match self.kind {
            ScheduleKind::Dyadic => {
                // 2^-m <= q  <=>  2^m >= ceil(1/q)
                let c = q.recip().ceil();
                if c <= BigInt::one() {
                    0
                } else {
                    (c - BigInt::one()).bits()
                }
            }
            ScheduleKind::Harmonic => {
                // 1/(m+1) <= q  <=>  m+1 >= ceil(1/q)
                let c = q.recip().ceil();
                let m: BigInt = (c - BigInt::one()).max(BigInt::from(0));
                u64::try_from(m.abs()).expect("precision index beyond u64")
            }
            ScheduleKind::Custom => (0..).find(|&m| &self.r(m) <= q).unwrap(),
        }
    }

    /// `min{r_0, …, r_s}`.
    pub fn min_up_to(&self, s: u64) -> Rat {
        match self.kind {
            ScheduleKind::Dyadic | ScheduleKind::Harmonic => self.r(s),
            ScheduleKind::Custom => (0..=s).map(|t| self.r(t)).min().unwrap(),
        }
    }

    pub fn is_monotone(&self) -> bool {
        self.kind != ScheduleKind::Custom
    }

    /// `r_m <= r_n`, by index comparison where the schedule allows it.
    pub fn le(&self, m: u64, n: u64) -> bool {
        if self.is_monotone() {
            m >= n
        } else {
            self.r(m) <= self.r(n)
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ScheduleKind::Dyadic => "dyadic",
            ScheduleKind::Harmonic => "harmonic",
            ScheduleKind::Custom => "custom",
        }
    }
}

impl Default for PrecisionSchedule {
    fn default() -> Self {
        PrecisionSchedule::dyadic()
    }
}

impl fmt::Debug for PrecisionSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrecisionSchedule({})", self.name())
    }
}

impl FromStr for PrecisionSchedule {
    type Err = ScheduleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dyadic" => Ok(PrecisionSchedule::dyadic()),
            "harmonic" => Ok(PrecisionSchedule::harmonic()),
            other => Err(ScheduleError::Unknown(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn all() -> Vec<PrecisionSchedule> {
        let zigzag = PrecisionSchedule::custom(|t| {
            // non-monotone: 1, 1/4, 1/2, 1/16, 1/8, ...
            if t % 2 == 1 {
                Rat::dyadic(t + 1)
            } else {
                Rat::dyadic(t.saturating_sub(1))
            }
        })
        .unwrap();
        vec![PrecisionSchedule::dyadic(), PrecisionSchedule::harmonic(), zigzag]
    }

    #[test]
    fn radius_values() {
        let d = PrecisionSchedule::dyadic();
        assert_eq!(d.r(0), rat(1, 1));
        assert_eq!(d.r(3), rat(1, 8));
        assert_eq!(PrecisionSchedule::harmonic().r(4), rat(1, 5));
    }

    #[test]
    fn find_m_below_examples() {
        let d = PrecisionSchedule::dyadic();
        assert_eq!(d.find_m_below(&rat(1, 1)), 0);
        assert_eq!(d.find_m_below(&rat(1, 5)), 3);
        assert_eq!(d.find_m_below(&rat(1, 4)), 2);
        assert_eq!(d.find_m_below(&rat(7, 2)), 0);
        assert_eq!(PrecisionSchedule::harmonic().find_m_below(&rat(1, 3)), 2);
        assert_eq!(PrecisionSchedule::harmonic().find_m_below(&rat(2, 7)), 3);
    }

    #[test]
    fn positivity_first_thousand() {
        for s in all() {
            for t in 0..=1000 {
                assert!(s.r(t).is_positive());
            }
        }
    }

    #[test]
    fn custom_rejects_non_positive() {
        let err = PrecisionSchedule::custom(|t| if t == 17 { Rat::zero() } else { Rat::one() });
        assert!(matches!(err, Err(ScheduleError::NonPositive { t: 17, .. })));
    }

    #[test]
    fn parse_names() {
        assert_eq!("harmonic".parse::<PrecisionSchedule>().unwrap().kind(), ScheduleKind::Harmonic);
        assert!("cubic".parse::<PrecisionSchedule>().is_err());
    }

    proptest! {
        #[test]
        fn find_m_below_is_least(num in 1i64..500, den in 1i64..5000) {
            let q = rat(num, den);
            for s in all() {
                let m = s.find_m_below(&q);
                prop_assert!(s.r(m) <= q);
                for earlier in 0..m {
                    prop_assert!(s.r(earlier) > q);
                }
            }
        }

        #[test]
        fn min_up_to_matches_scan(s in 0u64..40) {
            for sch in all() {
                let scan = (0..=s).map(|t| sch.r(t)).min().unwrap();
                prop_assert_eq!(sch.min_up_to(s), scan);
            }
        }
    }
}
