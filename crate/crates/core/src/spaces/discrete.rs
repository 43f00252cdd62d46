//! Small index spaces used by fixtures: `ℕ` with `|i − j|`, the fraction
//! grid `(p, q) ↦ p/(q+1)` over `ℕ²`, and `ℚ` with `k ↦ |k|`.

use super::{MetricKind, Space, SpaceDescriptor, SpaceError};
use crate::rational::Rat;
use crate::tupling::unpair;

#[derive(Debug, Clone, Copy, Default)]
pub struct DiscreteNatSpace;

impl Space for DiscreteNatSpace {
    type Index = u64;

    fn dim(&self) -> usize {
        1
    }

    fn metric(&self) -> MetricKind {
        MetricKind::Max
    }

    fn index_of_code(&self, code: u64) -> u64 {
        code
    }

    fn point(&self, i: &u64) -> Result<Vec<Rat>, SpaceError> {
        Ok(vec![Rat::from(*i)])
    }

    fn descriptor(&self) -> SpaceDescriptor {
        SpaceDescriptor::Nat
    }

    fn same_point(&self, a: &u64, b: &u64) -> Result<bool, SpaceError> {
        Ok(a == b)
    }
}

/// Non-negative rationals indexed by `(p, q) ↦ p/(q+1)`; many indices name
/// the same point.
#[derive(Debug, Clone, Copy, Default)]
pub struct FractionGridSpace;

impl Space for FractionGridSpace {
    type Index = (u64, u64);

    fn dim(&self) -> usize {
        1
    }

    fn metric(&self) -> MetricKind {
        MetricKind::Max
    }

    fn index_of_code(&self, code: u64) -> (u64, u64) {
        unpair(code)
    }

    fn point(&self, &(p, q): &(u64, u64)) -> Result<Vec<Rat>, SpaceError> {
        Ok(vec![Rat::new(p, q as u128 + 1)])
    }

    fn descriptor(&self) -> SpaceDescriptor {
        SpaceDescriptor::FractionGrid
    }
}

/// Indices are rationals `k`, naming the non-negative point `|k|`.
#[derive(Debug, Clone, Copy, Default)]
pub struct AbsRationalSpace;

impl Space for AbsRationalSpace {
    type Index = Vec<Rat>;

    fn dim(&self) -> usize {
        1
    }

    fn metric(&self) -> MetricKind {
        MetricKind::Max
    }

    fn index_of_code(&self, code: u64) -> Vec<Rat> {
        super::RationalVectorSpace::scalar().index_of_code(code)
    }

    fn point(&self, i: &Vec<Rat>) -> Result<Vec<Rat>, SpaceError> {
        match i.as_slice() {
            [k] => Ok(vec![k.abs()]),
            _ => Err(SpaceError::InvalidIndex(format!("expected one component, got {}", i.len()))),
        }
    }

    fn descriptor(&self) -> SpaceDescriptor {
        SpaceDescriptor::AbsRational
    }
}
