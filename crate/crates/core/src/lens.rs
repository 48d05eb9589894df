//! Lens spaces and connected sums of lens spaces.
//!
//! `L(p, q)` is `p/q` surgery on the unknot in `S^3`. With this orientation
//! `L(p, 1)` is `+p` surgery and its correction terms are
//! `(2i - p)^2 / 4p - 1/4`. `L(p, q)` and `L(p, q')` are
//! orientation-preservingly homeomorphic iff `q' = q^{+-1} (mod p)`, and
//! `-L(p, q) = L(p, p - q)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{check_modulus, Error, Result};
use crate::exactmath::{mod_inverse, q, require_coprime, residue, Rational};
use crate::group::{factorize, AbelianGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LensSpace {
    p: u64,
    q: u64,
}

impl LensSpace {
    /// `q` is reduced mod `p` but not otherwise normalized, so the Spin^c
    /// indexing of [`d_invariants`] follows the given `q`.
    pub fn new(p: u64, q: i64) -> Result<Self> {
        if p == 0 {
            return Err(Error::domain("lens space", "p must be positive"));
        }
        check_modulus(p)?;
        if p == 1 {
            return Ok(LensSpace { p: 1, q: 0 });
        }
        require_coprime(p as i64, q)?;
        Ok(LensSpace { p, q: residue(q, p) })
    }

    pub fn s3() -> Self {
        LensSpace { p: 1, q: 0 }
    }

    pub fn rp3() -> Self {
        LensSpace { p: 2, q: 1 }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_s3(&self) -> bool {
        self.p == 1
    }

    /// Smallest representative of `{q, q^-1} mod p`.
    pub fn normalize(&self) -> LensSpace {
        if self.p == 1 {
            return *self;
        }
        let inv = mod_inverse(self.q as i64, self.p).expect("q is a unit mod p");
        LensSpace { p: self.p, q: self.q.min(inv) }
    }

    pub fn reverse_orientation(&self) -> LensSpace {
        if self.p == 1 {
            return *self;
        }
        LensSpace { p: self.p, q: self.p - self.q }.normalize()
    }

    /// Orientation-preserving homeomorphism.
    pub fn is_homeomorphic(&self, other: &LensSpace) -> bool {
        self.normalize() == other.normalize()
    }

    pub fn is_amphichiral(&self) -> bool {
        self.is_homeomorphic(&self.reverse_orientation())
    }

    pub fn linking_form(&self) -> LinkingForm {
        LinkingForm::cyclic(self.p, self.q as i64)
    }

    pub fn h1(&self) -> AbelianGroup {
        AbelianGroup::cyclic(self.p)
    }

    /// The Spin^c conjugation `i -> q - 1 - i (mod p)` in the indexing of
    /// [`d_invariants`].
    pub fn conjugate(&self, i: u64) -> u64 {
        residue(self.q as i64 - 1 - i as i64, self.p)
    }

    pub fn d_invariants(&self) -> DInvariants {
        d_invariants(self)
    }

    pub fn lambda(&self) -> Rational {
        lambda_lens(self)
    }

    /// Short name that prefers `-L(p, q)` when that has the smaller `q`,
    /// e.g. `L(3,2)` prints as `-L(3,1)`.
    pub fn signed_name(&self) -> String {
        let me = self.normalize();
        match me.p {
            1 => "S^3".to_string(),
            2 => "RP^3".to_string(),
            _ => {
                let rev = me.reverse_orientation();
                if rev.q < me.q {
                    format!("-L({},{})", rev.p, rev.q)
                } else {
                    format!("L({},{})", me.p, me.q)
                }
            }
        }
    }
}

impl fmt::Display for LensSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p == 1 {
            write!(f, "S^3")
        } else {
            write!(f, "L({},{})", self.p, self.q)
        }
    }
}

/// Oriented lens spaces of order `p` in normal form, sorted by `q`.
pub fn lens_spaces_of_order(p: u64) -> Vec<LensSpace> {
    if p == 1 {
        return vec![LensSpace::s3()];
    }
    (1..p)
        .filter_map(|q| LensSpace::new(p, q as i64).ok())
        .filter(|l| l.normalize() == *l)
        .collect()
}

/// Ways to write `n` as an unordered product of factors `>= 2`.
pub fn multiplicative_partitions(n: u64) -> Vec<Vec<u64>> {
    fn go(n: u64, min: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if n == 1 {
            out.push(cur.clone());
            return;
        }
        let mut f = min;
        while f <= n {
            if n.is_multiple_of(f) {
                cur.push(f);
                go(n / f, f, cur, out);
                cur.pop();
            }
            f += 1;
        }
    }
    let mut out = Vec::new();
    if n >= 1 {
        go(n, 2, &mut Vec::new(), &mut out);
    }
    out
}

/// Connected sum of lens spaces. Summands are stored normalized and sorted,
/// with `S^3` summands dropped; the empty sum is `S^3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConnSum {
    summands: Vec<LensSpace>,
}

impl ConnSum {
    pub fn new(summands: impl IntoIterator<Item = LensSpace>) -> Self {
        let mut summands: Vec<LensSpace> =
            summands.into_iter().filter(|l| !l.is_s3()).map(|l| l.normalize()).collect();
        summands.sort();
        ConnSum { summands }
    }

    pub fn s3() -> Self {
        ConnSum { summands: Vec::new() }
    }

    /// Every connected sum of lens spaces with `|H_1| = n`, oriented and in
    /// normal form, sorted.
    pub fn all_of_order(n: u64) -> Vec<ConnSum> {
        let mut out: Vec<ConnSum> = Vec::new();
        for factors in multiplicative_partitions(n) {
            let mut partial = vec![Vec::<LensSpace>::new()];
            for &f in &factors {
                partial = partial
                    .into_iter()
                    .flat_map(|acc| {
                        lens_spaces_of_order(f).into_iter().map(move |l| {
                            let mut next = acc.clone();
                            next.push(l);
                            next
                        })
                    })
                    .collect();
            }
            out.extend(partial.into_iter().map(ConnSum::new));
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn lens(l: LensSpace) -> Self {
        ConnSum::new([l])
    }

    pub fn summands(&self) -> &[LensSpace] {
        &self.summands
    }

    pub fn is_s3(&self) -> bool {
        self.summands.is_empty()
    }

    /// `S^3` counts as a lens space.
    pub fn as_lens_space(&self) -> Option<LensSpace> {
        match self.summands.as_slice() {
            [] => Some(LensSpace::s3()),
            [l] => Some(*l),
            _ => None,
        }
    }

    pub fn connect(&self, other: &ConnSum) -> ConnSum {
        ConnSum::new(self.summands.iter().chain(&other.summands).copied())
    }

    /// `|H_1|`, the product of the summand orders.
    pub fn order(&self) -> Result<u64> {
        self.summands
            .iter()
            .try_fold(1u64, |acc, l| acc.checked_mul(l.p))
            .ok_or(Error::Overflow("order of H_1"))
    }

    pub fn h1(&self) -> AbelianGroup {
        AbelianGroup::from_cyclic_orders(self.summands.iter().map(|l| l.p))
    }

    pub fn reverse_orientation(&self) -> ConnSum {
        ConnSum::new(self.summands.iter().map(LensSpace::reverse_orientation))
    }

    pub fn is_amphichiral(&self) -> bool {
        *self == self.reverse_orientation()
    }

    pub fn linking_form(&self) -> LinkingForm {
        LinkingForm::direct_sum(self.summands.iter().map(LensSpace::linking_form))
    }

    /// All correction terms, sorted: Spin^c structures of a connected sum
    /// are tuples and the correction terms add.
    pub fn d_invariants(&self) -> Vec<Rational> {
        let mut acc = vec![Rational::zero()];
        for l in &self.summands {
            let ds = l.d_invariants().values;
            acc = acc.iter().flat_map(|a| ds.iter().map(move |d| a + d)).collect();
        }
        acc.sort();
        acc
    }

    /// Casson-Walker invariant; additive under connected sum.
    pub fn lambda(&self) -> Rational {
        self.summands.iter().map(LensSpace::lambda).sum()
    }

    pub fn signed_name(&self) -> String {
        if self.summands.is_empty() {
            return "S^3".to_string();
        }
        let names: Vec<String> = self.summands.iter().map(LensSpace::signed_name).collect();
        names.join(" # ")
    }
}

impl fmt::Display for ConnSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "S^3");
        }
        let names: Vec<String> = self.summands.iter().map(ToString::to_string).collect();
        write!(f, "{}", names.join(" # "))
    }
}

impl From<LensSpace> for ConnSum {
    fn from(l: LensSpace) -> Self {
        ConnSum::lens(l)
    }
}

/// Linking form of a cyclic group: `numerator / order` on `Z/order`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicForm {
    pub order: u64,
    pub numerator: u64,
}

impl fmt::Display for CyclicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.order)
    }
}

/// A linking form presented as an orthogonal sum of cyclic forms; trivial
/// summands are dropped.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinkingForm {
    pub summands: Vec<CyclicForm>,
}

impl LinkingForm {
    /// The form `a/p`. `a` is reduced mod `p`.
    pub fn cyclic(p: u64, a: i64) -> Self {
        LinkingForm::direct_sum([LinkingForm {
            summands: vec![CyclicForm { order: p, numerator: residue(a, p) }],
        }])
    }

    pub fn direct_sum(parts: impl IntoIterator<Item = LinkingForm>) -> Self {
        let mut summands: Vec<CyclicForm> =
            parts.into_iter().flat_map(|f| f.summands).filter(|c| c.order > 1).collect();
        summands.sort();
        LinkingForm { summands }
    }

    pub fn orders(&self) -> Vec<u64> {
        self.summands.iter().map(|c| c.order).collect()
    }

    pub fn group(&self) -> AbelianGroup {
        AbelianGroup::from_cyclic_orders(self.orders())
    }

    /// Cyclic summands split over prime powers: prime to `(exponent, numerator)`.
    fn primary_parts(&self) -> BTreeMap<u64, Vec<(u32, u64)>> {
        let mut out: BTreeMap<u64, Vec<(u32, u64)>> = BTreeMap::new();
        for c in &self.summands {
            for (l, e) in factorize(c.order) {
                let pe = l.pow(e);
                let cof = (c.order / pe) % pe;
                let num = ((c.numerator % pe) as u128 * cof as u128 % pe as u128) as u64;
                out.entry(l).or_default().push((e, num));
            }
        }
        out
    }
}

impl fmt::Display for LinkingForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.summands.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Indexed correction terms of a lens space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DInvariants {
    pub lens: LensSpace,
    /// `values[i]` is the correction term of the `i`-th Spin^c structure.
    pub values: Vec<Rational>,
}

impl DInvariants {
    pub fn multiset(&self) -> Vec<Rational> {
        let mut v = self.values.clone();
        v.sort();
        v
    }

    pub fn sum(&self) -> Rational {
        self.values.iter().sum()
    }
}

/// `d(L(p,1), i) = (2i - p)^2 / 4p - 1/4`.
pub fn d_lp1(p: u64, i: u64) -> Rational {
    let p = p as i128;
    let t = 2 * i as i128 - p;
    Rational::new(BigInt::from(t * t), BigInt::from(4 * p)) - q(1, 4)
}

/// Correction terms of `L(p, q)` via the two-term recursion
///
/// `d(L(p,q), i) = ((2i + 1 - p - q)^2 - pq) / 4pq - d(L(q, r), i mod q)`,
/// `r = p mod q`, with `d(S^3) = 0`.
pub fn d_invariants(l: &LensSpace) -> DInvariants {
    DInvariants { lens: *l, values: d_vector(l.p, l.q) }
}

fn d_vector(p: u64, q: u64) -> Vec<Rational> {
    if p == 1 {
        return vec![Rational::zero()];
    }
    let inner = d_vector(q, p % q);
    let (pi, qi) = (p as i128, q as i128);
    let den = BigInt::from(4 * pi * qi);
    (0..p)
        .map(|i| {
            let t = 2 * i as i128 + 1 - pi - qi;
            Rational::new(BigInt::from(t * t - pi * qi), den.clone()) - &inner[(i % q) as usize]
        })
        .collect()
}

/// `lambda(L(p,q)) = -(1/2p) sum_i d(L(p,q), i)`, the Casson-Walker
/// invariant of an L-space read off its correction terms.
pub fn lambda_lens(l: &LensSpace) -> Rational {
    let total = d_invariants(l).sum();
    -(total / Rational::from_integer(2 * l.p as i64))
}

/// The lens space `a/b` surgery on the unknot, for `a != 0`.
pub fn surgery_on_unknot(a: i64, b: i64) -> Result<LensSpace> {
    if a == 0 {
        return Err(Error::domain("surgery coefficient", "a must be nonzero"));
    }
    require_coprime(a, b)?;
    let (a, b) = if a < 0 { (-a, -b) } else { (a, b) };
    LensSpace::new(a as u64, b)
}

/// `lambda(Y_{a/b}(K)) = lambda(L(a,b)) + lambda(Y) + (b/a) A(K)` for a knot
/// in an integer homology sphere, with `A(K) = Delta_K''(1)/2`.
pub fn cw_surgery(lambda_y: &Rational, a_k: &Rational, a: i64, b: i64) -> Result<Rational> {
    let lens = surgery_on_unknot(a, b)?;
    Ok(lambda_lens(&lens) + lambda_y + q(b, a) * a_k)
}

/// Linking form `q/p` of `p/q` surgery on a knot in an integer homology
/// sphere.
pub fn linking_form_of_surgery(p: i64, q: i64) -> Result<LinkingForm> {
    if p == 0 {
        return Err(Error::domain("linking form", "p must be nonzero"));
    }
    require_coprime(p, q)?;
    let num = if p < 0 { -q } else { q };
    Ok(LinkingForm::cyclic(p.unsigned_abs(), num))
}

/// Isometry of linking forms.
///
/// A cyclic summand `a/n` splits over the prime powers `l^k || n` as
/// `a (n / l^k) / l^k`. On an odd primary part the form is determined by the
/// rank at each exponent and the Legendre symbol of the product of the
/// numerators there. The 2-primary part is compared in closed form when it
/// is cyclic (`a = b` mod 2, 4 or 8) and by an isometry search otherwise.
pub fn linking_forms_equivalent(f1: &LinkingForm, f2: &LinkingForm) -> Result<bool> {
    for c in f1.summands.iter().chain(&f2.summands) {
        require_coprime(c.numerator as i64, c.order as i64)?;
    }
    if f1.group() != f2.group() {
        return Err(Error::OrderMismatch { left: f1.to_string(), right: f2.to_string() });
    }
    let (p1, p2) = (f1.primary_parts(), f2.primary_parts());
    for (&l, left) in &p1 {
        let right = &p2[&l];
        let same = if l == 2 { two_primary_isometric(left, right)? } else { odd_primary_isometric(l, left, right) };
        if !same {
            return Ok(false);
        }
    }
    Ok(true)
}

fn pow_mod(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn odd_primary_isometric(l: u64, left: &[(u32, u64)], right: &[(u32, u64)]) -> bool {
    let symbols = |parts: &[(u32, u64)]| -> BTreeMap<u32, (usize, u128)> {
        let mut by_exp: BTreeMap<u32, (usize, u128)> = BTreeMap::new();
        for &(e, a) in parts {
            let entry = by_exp.entry(e).or_insert((0, 1));
            entry.0 += 1;
            entry.1 = entry.1 * (a % l) as u128 % l as u128;
        }
        for v in by_exp.values_mut() {
            v.1 = pow_mod(v.1, (l as u128 - 1) / 2, l as u128);
        }
        by_exp
    };
    symbols(left) == symbols(right)
}

/// Largest 2-primary part compared by search.
const MAX_TWO_PRIMARY_SEARCH: u32 = 16;

fn two_primary_isometric(left: &[(u32, u64)], right: &[(u32, u64)]) -> Result<bool> {
    if let ([(e, a)], [(_, b)]) = (left, right) {
        let m = 1u64 << (*e).min(3);
        return Ok(a % m == b % m);
    }
    let total: u32 = right.iter().map(|(e, _)| e).sum();
    if total > MAX_TWO_PRIMARY_SEARCH {
        return Err(Error::domain(
            "linking_forms_equivalent",
            format!("non-cyclic 2-primary part of order 2^{total} exceeds 2^{MAX_TWO_PRIMARY_SEARCH}"),
        ));
    }
    let top = right.iter().map(|(e, _)| *e).max().unwrap_or(0);
    let modulus = 1u64 << top;
    // value of the form on (x, y) in G2, as a numerator over 2^top
    let pair = |x: &[u64], y: &[u64]| -> u64 {
        right.iter().zip(x.iter().zip(y)).fold(0u64, |acc, (&(e, b), (&xi, &yi))| {
            (acc + (xi * yi % modulus) * (b % modulus) % modulus * (1 << (top - e))) % modulus
        })
    };
    let mut elements: Vec<Vec<u64>> = vec![Vec::new()];
    for &(e, _) in right {
        elements = elements
            .into_iter()
            .flat_map(|v| {
                (0..1u64 << e).map(move |t| {
                    let mut w = v.clone();
                    w.push(t);
                    w
                })
            })
            .collect();
    }
    let candidates: Vec<Vec<&Vec<u64>>> = left
        .iter()
        .map(|&(e, a)| {
            let want = (a % modulus) * (1 << (top - e)) % modulus;
            elements
                .iter()
                .filter(|x| right.iter().zip(x.iter()).all(|(&(f, _), &xi)| (xi << e) % (1 << f) == 0))
                .filter(|x| pair(x, x) == want)
                .collect()
        })
        .collect();
    fn extend(i: usize, cands: &[Vec<&Vec<u64>>], chosen: &mut Vec<Vec<u64>>, pair: &dyn Fn(&[u64], &[u64]) -> u64) -> bool {
        if i == cands.len() {
            return true;
        }
        for x in &cands[i] {
            if chosen.iter().all(|y| pair(x, y) == 0) {
                chosen.push((*x).clone());
                if extend(i + 1, cands, chosen, pair) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    // an isometric embedding of a nondegenerate form is injective, hence
    // onto a group of the same order
    Ok(extend(0, &candidates, &mut Vec::new(), &pair))
}

/// Compares multisets of rationals after sorting.
pub fn same_multiset(a: &[Rational], b: &[Rational]) -> bool {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    a.sort();
    b.sort();
    a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| x.cmp(y) == Ordering::Equal)
}
