//! Cantor pairing and right-nested tupling.
//!
//! `pair(s, t) = (s + t)(s + t + 1)/2 + t`. Tuples nest to the right:
//! `tuple([a, b, c]) = pair(a, pair(b, c))`. Stage numbers use the `u64`
//! functions; point codes can grow past 64 bits and use the `BigUint` ones.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Roots;
use num_traits::{One, Zero};

/// Cantor pairing. Panics on `u64` overflow.
pub fn pair(s: u64, t: u64) -> u64 {
    checked_pair(s, t).expect("pair overflows u64")
}

pub fn checked_pair(s: u64, t: u64) -> Option<u64> {
    let w = s.checked_add(t)?;
    let tri = (w as u128) * (w as u128 + 1) / 2;
    u64::try_from(tri + t as u128).ok()
}

/// Inverse of [`pair`].
pub fn unpair(n: u64) -> (u64, u64) {
    let n = n as u128;
    let mut w = ((8 * n + 1).sqrt() - 1) / 2;
    // guard against isqrt rounding at the boundary
    while w * (w + 1) / 2 > n {
        w -= 1;
    }
    while (w + 1) * (w + 2) / 2 <= n {
        w += 1;
    }
    let t = n - w * (w + 1) / 2;
    let s = w - t;
    (s as u64, t as u64)
}

/// Right-nested tuple code of a non-empty sequence.
pub fn tuple(items: &[u64]) -> u64 {
    let (last, rest) = items.split_last().expect("empty tuple");
    rest.iter().rev().fold(*last, |acc, &x| pair(x, acc))
}

/// Decodes a `k`-tuple (`k >= 1`).
pub fn untuple(mut n: u64, k: usize) -> Vec<u64> {
    assert!(k >= 1, "tuple arity must be positive");
    let mut out = Vec::with_capacity(k);
    for _ in 1..k {
        let (head, tail) = unpair(n);
        out.push(head);
        n = tail;
    }
    out.push(n);
    out
}

/// `(π₁(t), π₂(t), π₃(t))`; every triple of naturals is hit exactly once.
pub fn triple(t: u64) -> (u64, u64, u64) {
    let v = untuple(t, 3);
    (v[0], v[1], v[2])
}

/// `(π₁(t), …, π₄(t))`.
pub fn quadruple(t: u64) -> (u64, u64, u64, u64) {
    let v = untuple(t, 4);
    (v[0], v[1], v[2], v[3])
}

pub fn pair_big(s: &BigUint, t: &BigUint) -> BigUint {
    let w = s + t;
    (&w * (&w + 1u32)) / 2u32 + t
}

pub fn unpair_big(n: &BigUint) -> (BigUint, BigUint) {
    let eight_n1: BigUint = n * 8u32 + 1u32;
    let mut w: BigUint = (eight_n1.sqrt() - 1u32) / 2u32;
    let tri = |w: &BigUint| (w * (w + 1u32)) / 2u32;
    while &tri(&w) > n {
        w -= 1u32;
    }
    while &tri(&(&w + 1u32)) <= n {
        w += 1u32;
    }
    let t = n - tri(&w);
    let s = &w - &t;
    (s, t)
}

pub fn tuple_big(items: &[BigUint]) -> BigUint {
    let (last, rest) = items.split_last().expect("empty tuple");
    rest.iter().rev().fold(last.clone(), |acc, x| pair_big(x, &acc))
}

pub fn untuple_big(n: &BigUint, k: usize) -> Vec<BigUint> {
    assert!(k >= 1, "tuple arity must be positive");
    let mut out = Vec::with_capacity(k);
    let mut rest = n.clone();
    for _ in 1..k {
        let (head, tail) = unpair_big(&rest);
        out.push(head);
        rest = tail;
    }
    out.push(rest);
    out
}

/// Integer to natural: `0, -1, 1, -2, 2, …` ↦ `0, 1, 2, 3, 4, …`.
pub fn zigzag(n: &BigInt) -> BigUint {
    let mag = n.magnitude();
    match n.sign() {
        Sign::Minus => mag * 2u32 - 1u32,
        _ => mag * 2u32,
    }
}

pub fn unzigzag(n: &BigUint) -> BigInt {
    let half: BigUint = n >> 1u32;
    if (n & BigUint::one()).is_zero() {
        BigInt::from_biguint(Sign::Plus, half)
    } else {
        -BigInt::from_biguint(Sign::Plus, half + 1u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cantor_small_values() {
        assert_eq!(pair(0, 0), 0);
        assert_eq!(pair(1, 0), 1);
        assert_eq!(pair(0, 1), 2);
        assert_eq!(pair(2, 0), 3);
        assert_eq!(unpair(4), (1, 1));
    }

    #[test]
    fn unpair_roundtrips_first_ten_thousand() {
        for n in 0..=10_000u64 {
            let (s, t) = unpair(n);
            assert_eq!(pair(s, t), n);
        }
    }

    #[test]
    fn pair_injective_on_grid() {
        let mut seen = std::collections::HashSet::new();
        for s in 0..=100 {
            for t in 0..=100 {
                assert!(seen.insert(pair(s, t)));
            }
        }
    }

    #[test]
    fn triples_cover_small_cube() {
        let mut hit = std::collections::HashSet::new();
        let mut t = 0;
        while hit.len() < 5 * 5 * 5 {
            let (a, b, c) = triple(t);
            if a < 5 && b < 5 && c < 5 {
                hit.insert((a, b, c));
            }
            t += 1;
        }
        assert!(tuple(&[4, 4, 4]) + 1 >= t);
    }

    #[test]
    fn overflow_is_reported() {
        assert_eq!(checked_pair(u64::MAX, 1), None);
        assert!(checked_pair(1 << 30, 1 << 30).is_some());
    }

    #[test]
    fn zigzag_order() {
        let got: Vec<BigInt> = (0u32..5).map(|n| unzigzag(&BigUint::from(n))).collect();
        let want: Vec<BigInt> = [0, -1, 1, -2, 2].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(got, want);
    }

    proptest! {
        #[test]
        fn tuple_roundtrip(items in prop::collection::vec(0u64..3, 2..=6)) {
            let code = tuple(&items);
            prop_assert_eq!(untuple(code, items.len()), items);
        }

        #[test]
        fn short_tuple_roundtrip(items in prop::collection::vec(0u64..2000, 2..=3)) {
            let code = tuple(&items);
            prop_assert_eq!(untuple(code, items.len()), items);
        }

        #[test]
        fn big_pair_agrees_with_u64(s in 0u64..1_000_000, t in 0u64..1_000_000) {
            let big = pair_big(&BigUint::from(s), &BigUint::from(t));
            prop_assert_eq!(big.clone(), BigUint::from(pair(s, t)));
            prop_assert_eq!(unpair_big(&big), (BigUint::from(s), BigUint::from(t)));
        }

        #[test]
        fn zigzag_roundtrip(n in any::<i64>()) {
            let n = BigInt::from(n);
            prop_assert_eq!(unzigzag(&zigzag(&n)), n);
        }

        #[test]
        fn big_tuple_roundtrip(items in prop::collection::vec(any::<u64>(), 2..=5)) {
            let items: Vec<BigUint> = items.into_iter().map(BigUint::from).collect();
            let code = tuple_big(&items);
            prop_assert_eq!(untuple_big(&code, items.len()), items);
        }
    }
}
