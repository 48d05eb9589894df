use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Finitely generated abelian group `Z^r + Z/d1 + ... + Z/dk` with
/// `d1 | d2 | ... | dk` and every `di > 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: u32,
    pub invariant_factors: Vec<u64>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup { free_rank: 0, invariant_factors: Vec::new() }
    }

    /// Direct sum of cyclic groups; an order of 0 stands for `Z`.
    pub fn from_cyclic_orders(orders: impl IntoIterator<Item = u64>) -> Self {
        let mut free_rank = 0;
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for n in orders {
            if n == 0 {
                free_rank += 1;
                continue;
            }
            for (p, e) in factorize(n) {
                by_prime.entry(p).or_default().push(e);
            }
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; len];
        for (p, mut exps) in by_prime {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            // largest exponents go to the last (largest) factor
            for (k, e) in exps.into_iter().enumerate() {
                factors[len - 1 - k] *= p.pow(e);
            }
        }
        AbelianGroup { free_rank, invariant_factors: factors }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_cyclic_orders([n])
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> Self {
        let mut orders: Vec<u64> = self.invariant_factors.clone();
        orders.extend(&other.invariant_factors);
        orders.extend(std::iter::repeat_n(0, (self.free_rank + other.free_rank) as usize));
        Self::from_cyclic_orders(orders)
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_cyclic(&self) -> bool {
        self.free_rank + self.invariant_factors.len() as u32 <= 1
    }

    /// `None` for infinite groups.
    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.invariant_factors.iter().product())
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = (0..self.free_rank).map(|_| "Z".to_string()).collect();
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p <= n / p {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}
