//! Slopes on the boundary torus of a rational homology solid torus, in a
//! basis `(mu, lambda)` with `lambda` the rational longitude.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::gcd;

/// Unoriented slope `mu_coeff * mu + lambda_coeff * lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slope {
    mu: i64,
    lambda: i64,
}

impl Slope {
    /// Reduces by the gcd and fixes the sign: `mu >= 0`, and `lambda > 0`
    /// when `mu == 0`.
    pub fn new(mu: i64, lambda: i64) -> Result<Self> {
        if mu == 0 && lambda == 0 {
            return Err(Error::domain("slope", "(0, 0) is not a slope"));
        }
        let g = gcd(mu, lambda) as i64;
        let (mut mu, mut lambda) = (mu / g, lambda / g);
        if mu < 0 || (mu == 0 && lambda < 0) {
            mu = -mu;
            lambda = -lambda;
        }
        Ok(Slope { mu, lambda })
    }

    pub fn meridian() -> Self {
        Slope { mu: 1, lambda: 0 }
    }

    pub fn longitude() -> Self {
        Slope { mu: 0, lambda: 1 }
    }

    pub fn mu_coeff(&self) -> i64 {
        self.mu
    }

    pub fn lambda_coeff(&self) -> i64 {
        self.lambda
    }

    /// The same curve written in the basis `(mu + k lambda, lambda)`.
    pub fn rebase(&self, k: i64) -> Slope {
        Slope::new(self.mu, self.lambda - k * self.mu).expect("rebasing preserves primitivity")
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.mu, self.lambda)
    }
}

/// Minimal geometric intersection number `|ad - bc|`.
pub fn distance(s1: &Slope, s2: &Slope) -> u64 {
    let det = s1.mu as i128 * s2.lambda as i128 - s1.lambda as i128 * s2.mu as i128;
    det.unsigned_abs() as u64
}

/// `|H_1|` of the filling along `s` when the ambient manifold is a homology
/// `S^1 x D^2`; 0 means the filling has `b_1 > 0`.
pub fn filling_order(s: &Slope) -> u64 {
    distance(s, &Slope::longitude())
}

/// Basis change putting consecutive fillings into standard position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Consecutive {
    /// New meridian is `mu0 + k lambda`.
    pub k: i64,
    pub epsilon: i64,
}

/// Given `gamma = p mu0 + c lambda` and `gamma' = (p+1) mu0 + d lambda` at
/// distance one, returns `k = d - c` and `epsilon = (p+1)c - pd`, so that
/// with `mu = mu0 + k lambda` both read `p mu + epsilon lambda` and
/// `(p+1) mu + epsilon lambda`.
pub fn normalize_consecutive(p: u64, c: i64, d: i64) -> Result<Consecutive> {
    if p == 0 {
        return Err(Error::domain("normalize_consecutive", "p must be positive"));
    }
    let p = p as i64;
    let epsilon = (p + 1) * c - p * d;
    if epsilon.abs() != 1 {
        return Err(Error::NotDistanceOne {
            left: format!("({p},{c})"),
            right: format!("({},{d})", p + 1),
            distance: epsilon.unsigned_abs(),
        });
    }
    Ok(Consecutive { k: d - c, epsilon })
}

/// `(2, n)` with `n = 2k + 1` becomes `(2, 1)` in the basis `mu0 + k lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfInteger {
    pub k: i64,
    pub slope: Slope,
}

pub fn normalize_half_integer(n: i64) -> Result<HalfInteger> {
    if n % 2 == 0 {
        return Err(Error::domain("normalize_half_integer", format!("n = {n} must be odd")));
    }
    let k = (n - 1).div_euclid(2);
    let slope = Slope::new(2, n)?.rebase(k);
    Ok(HalfInteger { k, slope })
}

/// Slopes with `mu` coefficient `order` at distance one from `s`.
pub fn distance_one_companions(s: &Slope, order: u64) -> Result<Vec<Slope>> {
    if s.mu == 0 {
        return Err(Error::domain(
            "distance_one_companions",
            "companions of the longitude are not determined by their order",
        ));
    }
    let order = order as i64;
    let mut out: Vec<Slope> = [-1, 1]
        .iter()
        .filter_map(|e| {
            let num = s.lambda * order + e;
            (num % s.mu == 0).then(|| Slope::new(order, num / s.mu))
        })
        .collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// For a primitive knot, any distance between the trivial filling and a
/// filling with `|H_1| = p'` is a multiple of `gcd(p, p')`.
pub fn gcd_obstruction(p: u64, p_prime: u64) -> u64 {
    gcd(p as i64, p_prime as i64)
}
