//! Table of moduli `m` for which `-1` is a square mod `m`, built from
//! explicit square roots.
//!
//! If `u^2 = -1 (mod m)` has a solution then the smallest one satisfies
//! `u <= m/2`, and `m` divides `u^2 + 1`. So factoring `u^2 + 1` for every
//! `u <= max/2` and listing its divisors `m > u` finds every such modulus
//! together with its smallest root. The factoring is the usual sieve over the
//! values of `u^2 + 1`: when the scan reaches `u`, whatever is left of
//! `u^2 + 1` is 1 or a single prime whose smallest root is `u`.

use crate::error::{check_modulus, Result};

const NO_ROOT: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct NegOneSquares {
    smallest_root: Vec<u32>,
}

impl NegOneSquares {
    /// Covers every modulus in `1..=max`.
    pub fn build(max: u64) -> Result<Self> {
        check_modulus(max)?;
        let max = max as usize;
        let mut smallest_root = vec![NO_ROOT; max + 1];
        let half = max / 2 + 1;

        let mut rest: Vec<u64> = (0..=half as u64).map(|u| u * u + 1).collect();
        let mut factors: Vec<Vec<(u64, u32)>> = vec![Vec::new(); half + 1];

        for u in 0..=half {
            let p = rest[u];
            if p > 1 {
                let other = (p - u as u64 % p) % p;
                let mut starts = vec![u as u64];
                if other != u as u64 % p && other as usize >= u {
                    starts.push(other);
                }
                for start in starts {
                    let mut v = start as usize;
                    while v <= half {
                        let mut e = 0;
                        while rest[v].is_multiple_of(p) {
                            rest[v] /= p;
                            e += 1;
                        }
                        if e > 0 {
                            factors[v].push((p, e));
                        }
                        v += p as usize;
                    }
                }
            }
            debug_assert_eq!(rest[u], 1);

            let fs = std::mem::take(&mut factors[u]);
            for_each_divisor(&fs, max as u64, &mut |m| {
                if m > u as u64 && smallest_root[m as usize] == NO_ROOT {
                    smallest_root[m as usize] = u as u32;
                }
            });
        }
        Ok(NegOneSquares { smallest_root })
    }

    pub fn max(&self) -> u64 {
        self.smallest_root.len() as u64 - 1
    }

    /// Whether `-1` is a square modulo `m`. Panics outside `1..=max`.
    pub fn contains(&self, m: u64) -> bool {
        assert!(m >= 1 && m <= self.max(), "modulus {m} outside table");
        self.smallest_root[m as usize] != NO_ROOT
    }

    /// Smallest `u` with `u^2 = -1 (mod m)`.
    pub fn smallest_root(&self, m: u64) -> Option<u64> {
        assert!(m >= 1 && m <= self.max(), "modulus {m} outside table");
        match self.smallest_root[m as usize] {
            NO_ROOT => None,
            u => Some(u as u64),
        }
    }
}

fn for_each_divisor(factors: &[(u64, u32)], bound: u64, f: &mut impl FnMut(u64)) {
    fn go(factors: &[(u64, u32)], acc: u64, bound: u64, f: &mut impl FnMut(u64)) {
        let Some((&(p, e), rest)) = factors.split_first() else {
            f(acc);
            return;
        };
        let mut m = acc;
        for i in 0..=e {
            go(rest, m, bound, f);
            if i < e {
                match m.checked_mul(p) {
                    Some(next) if next <= bound => m = next,
                    _ => break,
                }
            }
        }
    }
    go(factors, 1, bound, f);
}
