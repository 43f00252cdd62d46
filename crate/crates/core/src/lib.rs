//! Recursively enumerable approximation systems over exact rationals.
//!
//! Functions between semi-computable metric or topological spaces are
//! represented by enumerable sets of index quadruples `(k, m, l, n)`, read as
//! "if x lies in the ball `(k, m)` then f(x) lies in the ball `(l, n)`". The
//! engines evaluate such systems on names of points, convert between the
//! metric and topological flavors, and extract systems from operators.

pub mod certified;
pub mod engines;
pub mod names;
pub mod rational;
pub mod renum;
pub mod schedule;
pub mod spaces;
pub mod systems;
pub mod tupling;

pub use rational::{rat, Rat};
pub use renum::REnum;
pub use schedule::PrecisionSchedule;
