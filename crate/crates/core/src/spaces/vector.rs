//! `ℚ^p` as a dense subset of `ℝ^p`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::One;

use super::{MetricKind, Space, SpaceDescriptor, SpaceError};
use crate::rational::Rat;
use crate::tupling::{pair_big, tuple_big, unpair, untuple, untuple_big, unzigzag, zigzag};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalVectorSpace {
    dim: usize,
    metric: MetricKind,
}

impl RationalVectorSpace {
    pub fn new(dim: usize, metric: MetricKind) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        RationalVectorSpace { dim, metric }
    }

    pub fn scalar() -> Self {
        RationalVectorSpace::new(1, MetricKind::Max)
    }

    /// Injective code of a vector: component codes `pair(zigzag(num), den − 1)`,
    /// tupled for `p > 1`.
    pub fn encode_point(&self, v: &[Rat]) -> Result<BigUint, SpaceError> {
        self.check_dim(v)?;
        let codes: Vec<BigUint> = v.iter().map(component_code).collect();
        Ok(if codes.len() == 1 { codes[0].clone() } else { tuple_big(&codes) })
    }

    /// Inverse of [`Self::encode_point`]; codes of non-canonical fractions
    /// are rejected.
    pub fn decode_point(&self, code: &BigUint) -> Result<Vec<Rat>, SpaceError> {
        let parts = if self.dim == 1 { vec![code.clone()] } else { untuple_big(code, self.dim) };
        parts.iter().map(decode_component).collect()
    }

    fn check_dim(&self, v: &[Rat]) -> Result<(), SpaceError> {
        if v.len() != self.dim {
            return Err(SpaceError::InvalidIndex(format!(
                "expected a {}-vector, got {} components",
                self.dim,
                v.len()
            )));
        }
        Ok(())
    }
}

pub fn component_code(q: &Rat) -> BigUint {
    let den = q.denom().magnitude() - 1u32;
    pair_big(&zigzag(q.numer()), &den)
}

fn decode_component(code: &BigUint) -> Result<Rat, SpaceError> {
    let (z, d) = crate::tupling::unpair_big(code);
    let num = unzigzag(&z);
    let den = BigInt::from(d + 1u32);
    if !num.gcd(&den).is_one() {
        return Err(SpaceError::InvalidIndex(format!("code {code} is not in lowest terms")));
    }
    Ok(Rat::new(num, den))
}

/// Lenient component decoding used for enumeration: every code names some
/// rational, non-canonical codes repeat earlier ones.
fn component_of_code(code: u64) -> Rat {
    let (z, d) = unpair(code);
    Rat::new(unzigzag(&BigUint::from(z)), BigInt::from(d) + 1)
}

impl Space for RationalVectorSpace {
    type Index = Vec<Rat>;

    fn dim(&self) -> usize {
        self.dim
    }

    fn metric(&self) -> MetricKind {
        self.metric
    }

    fn index_of_code(&self, code: u64) -> Vec<Rat> {
        if self.dim == 1 {
            vec![component_of_code(code)]
        } else {
            untuple(code, self.dim).into_iter().map(component_of_code).collect()
        }
    }

    fn point(&self, i: &Vec<Rat>) -> Result<Vec<Rat>, SpaceError> {
        self.check_dim(i)?;
        Ok(i.clone())
    }

    fn descriptor(&self) -> SpaceDescriptor {
        SpaceDescriptor::Rational { dim: self.dim, metric: self.metric }
    }

    fn same_point(&self, a: &Vec<Rat>, b: &Vec<Rat>) -> Result<bool, SpaceError> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        Ok(a == b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;
    use std::collections::{HashMap, HashSet};

    #[test]
    fn frozen_codes() {
        let s = RationalVectorSpace::scalar();
        let code = |q: Rat| s.encode_point(&[q]).unwrap();
        assert_eq!(code(Rat::zero()), BigUint::from(0u32));
        assert_eq!(code(rat(1, 2)), BigUint::from(7u32));
        assert_eq!(code(rat(1, 3)), BigUint::from(12u32));
        assert_eq!(code(rat(2, 7)), BigUint::from(61u32));
        assert_eq!(s.index_of_code(12), vec![rat(1, 3)]);
        assert_eq!(s.index_of_code(61), vec![rat(2, 7)]);
    }

    #[test]
    fn roundtrip_examples() {
        let v2 = RationalVectorSpace::new(2, MetricKind::Max);
        let v = vec![rat(1, 3), rat(-2, 1)];
        assert_eq!(v2.decode_point(&v2.encode_point(&v).unwrap()).unwrap(), v);
        let s = RationalVectorSpace::scalar();
        assert_eq!(s.decode_point(&s.encode_point(&[Rat::zero()]).unwrap()).unwrap(), vec![Rat::zero()]);
    }

    #[test]
    fn non_canonical_code_rejected() {
        // pair(zigzag(2), 3) would be 2/4
        let s = RationalVectorSpace::scalar();
        let code = pair_big(&BigUint::from(4u32), &BigUint::from(3u32));
        assert!(matches!(s.decode_point(&code), Err(SpaceError::InvalidIndex(_))));
    }

    #[test]
    fn injective_on_small_grid() {
        let v2 = RationalVectorSpace::new(2, MetricKind::Euclidean);
        let mut seen: HashMap<BigUint, Vec<Rat>> = HashMap::new();
        for a in -6..=6 {
            for b in 1..=6 {
                for c in -6..=6 {
                    for d in 1..=6 {
                        let v = vec![rat(a, b), rat(c, d)];
                        let code = v2.encode_point(&v).unwrap();
                        let prev = seen.entry(code).or_insert_with(|| v.clone());
                        assert_eq!(prev, &v);
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_is_surjective_on_small_rationals() {
        let s = RationalVectorSpace::scalar();
        let hit: HashSet<Vec<Rat>> = (0..2000).map(|c| s.index_of_code(c)).collect();
        for a in -5..=5 {
            for b in 1..=5 {
                assert!(hit.contains(&vec![rat(a, b)]));
            }
        }
    }

    proptest! {
        #[test]
        fn encode_decode_roundtrip(parts in prop::collection::vec((-10_000i64..10_000, 1i64..10_000), 1..4)) {
            let v: Vec<Rat> = parts.iter().map(|&(n, d)| rat(n, d)).collect();
            let space = RationalVectorSpace::new(v.len(), MetricKind::Max);
            let code = space.encode_point(&v).unwrap();
            prop_assert_eq!(space.decode_point(&code).unwrap(), v);
        }

        #[test]
        fn canonical_codes_index_themselves(code in 0u64..1_000_000) {
            let s = RationalVectorSpace::scalar();
            let v = s.index_of_code(code);
            let back = s.encode_point(&v).unwrap();
            prop_assert!(back <= BigUint::from(code));
        }
    }
}
