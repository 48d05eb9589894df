//! Exact rational and modular arithmetic: the sawtooth function, Dedekind
//! sums, continued fractions and quadratic-residue tests.
//!
//! Square tests scan every residue rather than using Euler's criterion, so
//! they are valid for composite moduli.

mod rational;
mod sieve;

use std::collections::BTreeSet;

use num_bigint::BigInt;

pub use rational::{q, Rational};
pub use sieve::NegOneSquares;

use crate::error::{check_modulus, Error, Result};

pub fn gcd(a: i64, b: i64) -> u64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn require_coprime(a: i64, b: i64) -> Result<()> {
    match gcd(a, b) {
        1 => Ok(()),
        g => Err(Error::NotCoprime { a, b, gcd: g }),
    }
}

/// `a mod p` in `[0, p)`.
pub fn residue(a: i64, p: u64) -> u64 {
    (a as i128).rem_euclid(p as i128) as u64
}

/// Inverse of `a` modulo `p`, if it exists.
pub fn mod_inverse(a: i64, p: u64) -> Option<u64> {
    if p == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (residue(a, p) as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(p as i128) as u64)
}

/// `((x))`: `x - floor(x) - 1/2` off the integers, `0` on them.
pub fn sawtooth(x: &Rational) -> Rational {
    if x.is_integer() {
        Rational::zero()
    } else {
        x - Rational::from_integer(x.floor()) - q(1, 2)
    }
}

/// The Dedekind sum `s(q, p) = sum_{k=1}^{p-1} ((k/p)) ((kq/p))`.
///
/// For `0 < k < p` and `gcd(p, q) = 1` both sawtooth arguments are
/// non-integral, so each term is `(2k - p)(2r_k - p) / (4p^2)` with
/// `r_k = kq mod p`; the sum is accumulated in integers and divided once.
pub fn dedekind_sum(q: i64, p: u64) -> Result<Rational> {
    if p == 0 {
        return Err(Error::domain("dedekind_sum", "p must be positive"));
    }
    check_modulus(p)?;
    require_coprime(q, p as i64)?;
    let p_i = p as i128;
    let qr = residue(q, p) as i128;
    let mut total: i128 = 0;
    for k in 1..p_i {
        let r = (k * qr) % p_i;
        total += (2 * k - p_i) * (2 * r - p_i);
    }
    Ok(Rational::new(BigInt::from(total), BigInt::from(4 * p_i * p_i)))
}

/// Canonical continued fraction of `p/q` for `0 < q < p`: every term is at
/// least 1 and the last term is at least 2.
pub fn cf_expand(p: u64, q: i64) -> Result<Vec<u64>> {
    if q <= 0 || q as u64 >= p {
        return Err(Error::domain("cf_expand", format!("need 0 < q < p, got p = {p}, q = {q}")));
    }
    require_coprime(p as i64, q)?;
    let (mut a, mut b) = (p, q as u64);
    let mut terms = Vec::new();
    while b != 0 {
        terms.push(a / b);
        (a, b) = (b, a % b);
    }
    Ok(terms)
}

/// Evaluates `[a1, a2, ...] = a1 + 1/(a2 + ...)` as a reduced pair `(p, q)`.
pub fn cf_evaluate(terms: &[u64]) -> Result<(u64, u64)> {
    let (last, rest) = terms
        .split_last()
        .ok_or_else(|| Error::domain("cf_evaluate", "empty continued fraction"))?;
    if let Some(i) = terms.iter().position(|&t| t == 0) {
        return Err(Error::domain("cf_evaluate", format!("term {} is 0; terms must be >= 1", i + 1)));
    }
    let (mut num, mut den) = (*last, 1u64);
    for &a in rest.iter().rev() {
        let next = a
            .checked_mul(num)
            .and_then(|x| x.checked_add(den))
            .ok_or(Error::Overflow("continued fraction"))?;
        (num, den) = (next, num);
    }
    Ok((num, den))
}

/// Whether `a` is a square modulo `p`, by scanning every residue.
///
/// Panics if `p == 0`.
pub fn is_square_mod(a: i64, p: u64) -> bool {
    assert!(p >= 1, "modulus must be positive");
    let target = residue(a, p) as u128;
    let m = p as u128;
    (0..m).any(|u| u * u % m == target)
}

/// `{ u^2 b mod p : u a unit mod p }`, the equivalence class of the form
/// `b/p` on `Z/p`.
pub fn unit_square_orbit(b: i64, p: u64) -> BTreeSet<u64> {
    assert!(p >= 1, "modulus must be positive");
    let m = p as u128;
    let b = residue(b, p) as u128;
    (0..m)
        .filter(|&u| gcd(u as i64, p as i64) == 1)
        .map(|u| (u * u % m * b % m) as u64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sawtooth_values() {
        assert_eq!(sawtooth(&q(1, 3)), q(-1, 6));
        assert_eq!(sawtooth(&q(2, 1)), q(0, 1));
        assert_eq!(sawtooth(&q(-1, 4)), q(1, 4));
        assert_eq!(sawtooth(&q(1, 2)), q(0, 1));
    }

    #[test]
    fn dedekind_small_cases() {
        assert_eq!(dedekind_sum(1, 2).unwrap(), q(0, 1));
        assert_eq!(dedekind_sum(1, 3).unwrap(), q(1, 18));
        assert_eq!(dedekind_sum(0, 1).unwrap(), q(0, 1));
        assert!(matches!(dedekind_sum(2, 4), Err(Error::NotCoprime { .. })));
        assert!(dedekind_sum(1, 0).is_err());
    }

    #[test]
    fn dedekind_matches_sawtooth_definition() {
        for p in 1..=40u64 {
            for qq in -3..(p as i64 + 3) {
                if gcd(qq, p as i64) != 1 {
                    continue;
                }
                let direct: Rational = (1..p)
                    .map(|k| {
                        sawtooth(&q(k as i64, p as i64)) * sawtooth(&q(k as i64 * qq, p as i64))
                    })
                    .sum();
                assert_eq!(dedekind_sum(qq, p).unwrap(), direct, "s({qq},{p})");
            }
        }
    }

    #[test]
    fn cf_examples() {
        assert_eq!(cf_expand(5, 2).unwrap(), vec![2, 2]);
        assert_eq!(cf_expand(7, 3).unwrap(), vec![2, 3]);
        assert_eq!(cf_expand(9, 1).unwrap(), vec![9]);
        assert_eq!(cf_evaluate(&[2, 2]).unwrap(), (5, 2));
        assert_eq!(cf_evaluate(&[7]).unwrap(), (7, 1));
        assert!(cf_evaluate(&[]).is_err());
        assert!(cf_evaluate(&[2, 0]).is_err());
        assert!(cf_expand(5, 5).is_err());
        assert!(cf_expand(6, 4).is_err());
        assert!(cf_expand(5, 0).is_err());
    }

    #[test]
    fn cf_canonical_last_term() {
        for p in 2..=60u64 {
            for qq in 1..p as i64 {
                if gcd(p as i64, qq) == 1 {
                    let t = cf_expand(p, qq).unwrap();
                    assert!(*t.last().unwrap() >= 2, "{p}/{qq}: {t:?}");
                }
            }
        }
    }

    #[test]
    fn square_examples() {
        assert!(is_square_mod(-1, 5));
        assert!(!is_square_mod(-1, 3));
        assert!(is_square_mod(0, 7));
        assert!(is_square_mod(-1, 1));
        assert!(is_square_mod(-1, 2));
        assert!(!is_square_mod(-1, 4));
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(unit_square_orbit(1, 5), BTreeSet::from([1, 4]));
        assert_eq!(unit_square_orbit(2, 5), BTreeSet::from([2, 3]));
        assert_eq!(unit_square_orbit(3, 2), BTreeSet::from([1]));
        assert_eq!(unit_square_orbit(4, 2), BTreeSet::from([0]));
    }

    #[test]
    fn inverses() {
        assert_eq!(mod_inverse(4, 7), Some(2));
        assert_eq!(mod_inverse(-1, 7), Some(6));
        assert_eq!(mod_inverse(2, 4), None);
        assert_eq!(mod_inverse(5, 1), Some(0));
    }
}
