//! Spin^c grading bookkeeping for 2-handle cobordisms between lens spaces.
//!
//! A Spin^c structure on a 2-handle cobordism with `H_2 = Z` generated by a
//! class of square `g` is labeled by `k = <c_1, generator>`, which is
//! characteristic: `k = g (mod 2)`. Then `c_1^2 = k^2 / g`, and the restriction
//! to a boundary lens space of order `P` depends only on `k mod 2P`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{gcd, q, Rational};
use crate::lens::{d_lp1, linking_forms_equivalent, ConnSum, LensSpace, LinkingForm};
use crate::slope::{distance, Slope};

/// Largest boundary order accepted by [`residue_pairing_table`].
pub const MAX_TABLE_ORDER: u64 = 64;

/// A 2-handle cobordism between two rational homology spheres.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CobordismData {
    pub source: ConnSum,
    pub target: ConnSum,
    pub gen_square: i64,
    pub euler: i64,
    pub signature: i64,
}

impl CobordismData {
    pub fn new(source: ConnSum, target: ConnSum, gen_square: i64) -> Result<Self> {
        if gen_square == 0 {
            return Err(Error::domain("cobordism", "generator square must be nonzero"));
        }
        Ok(CobordismData { source, target, gen_square, euler: 1, signature: gen_square.signum() })
    }

    pub fn is_negative_definite(&self) -> bool {
        self.signature == -1
    }

    /// Degree shift of the Spin^c structure with `<c_1, generator> = k`.
    pub fn grading_shift(&self, k: i64) -> Rational {
        grading_shift(&c1_square(k, self.gen_square), self.euler, self.signature)
    }
}

/// `(c_1^2 - 2 chi - 3 sigma) / 4`.
pub fn grading_shift(c1_squared: &Rational, euler: i64, signature: i64) -> Rational {
    (c1_squared - Rational::from_integer(2 * euler + 3 * signature)) / Rational::from_integer(4)
}

fn c1_square(k: i64, gen_square: i64) -> Rational {
    let k = BigInt::from(k);
    Rational::new(&k * &k, BigInt::from(gen_square))
}

/// Characteristic values `k` in `window` with their `c_1^2 = k^2 / g`.
pub fn c1_squares(gen_square: i64, window: std::ops::RangeInclusive<i64>) -> Result<Vec<(i64, Rational)>> {
    if gen_square == 0 {
        return Err(Error::domain("c1_squares", "generator square must be nonzero"));
    }
    Ok(window
        .filter(|k| (k - gen_square).rem_euclid(2) == 0)
        .map(|k| (k, c1_square(k, gen_square)))
        .collect())
}

/// Whether `d_target - d_source = (c_1^2 + 1) / 4 (mod 2)`, the relation
/// forced by a negative definite 2-handle cobordism map between L-spaces.
pub fn d_mod2_shift(d_source: &Rational, d_target: &Rational, c1_squared: &Rational) -> bool {
    let shift = (c1_squared + Rational::one()) / Rational::from_integer(4);
    (d_target - d_source).congruent(&shift, 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PairingStatus {
    Consistent,
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingEntry {
    pub k: i64,
    /// Pairs that appear for this `k` in at least one consistent assignment.
    pub pairs: Vec<(Rational, Rational)>,
    /// Pairs allowed by the mod 2 relation alone.
    pub pointwise: Vec<(Rational, Rational)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResiduePairing {
    pub source: LensSpace,
    pub target: LensSpace,
    pub gen_square: i64,
    /// `2 |gen_square|`.
    pub modulus: u64,
    /// Smallest period of the entry map; divides `modulus`.
    pub period: u64,
    pub entries: Vec<PairingEntry>,
    pub status: PairingStatus,
    /// Every consistent assignment gives the same pair at every `k`.
    pub determined: bool,
    pub assignments: usize,
}

impl ResiduePairing {
    /// Residues grouped by their common pair, each group closed under
    /// `k -> -k`, ordered by smallest residue.
    pub fn classes(&self) -> Vec<(Vec<i64>, (Rational, Rational))> {
        let mut groups: BTreeMap<(Rational, Rational), Vec<i64>> = BTreeMap::new();
        for e in &self.entries {
            if let [pair] = e.pairs.as_slice() {
                groups.entry(pair.clone()).or_default().push(e.k);
            }
        }
        let mut out: Vec<(Vec<i64>, (Rational, Rational))> =
            groups.into_iter().map(|(pair, ks)| (ks, pair)).collect();
        out.sort_by_key(|(ks, _)| ks[0]);
        out
    }

    pub fn entry(&self, k: i64) -> Option<&PairingEntry> {
        let k = k.rem_euclid(self.modulus as i64);
        self.entries.iter().find(|e| e.k == k)
    }
}

/// Residue analysis for a negative definite 2-handle cobordism from
/// `source` to `target` with generator square `gen_square < 0`.
///
/// Each characteristic residue `k mod 2|g|` restricts to the Spin^c
/// structure `k mod 2P` on the source and `k mod 2P'` on the target. The
/// table is the set of labelings of those restriction classes by
/// correction terms, respecting multiplicities, under which every `k`
/// satisfies [`d_mod2_shift`].
pub fn residue_pairing_table(source: &LensSpace, target: &LensSpace, gen_square: i64) -> Result<ResiduePairing> {
    if gen_square >= 0 {
        return Err(Error::domain("residue_pairing_table", "generator square must be negative"));
    }
    let (ps, pt) = (source.p(), target.p());
    for (name, p) in [("source", ps), ("target", pt)] {
        if p > MAX_TABLE_ORDER {
            return Err(Error::domain("residue_pairing_table", format!("{name} order {p} exceeds {MAX_TABLE_ORDER}")));
        }
        if gen_square % p as i64 != 0 {
            return Err(Error::domain(
                "residue_pairing_table",
                format!("{name} order {p} does not divide generator square {gen_square}"),
            ));
        }
    }
    let modulus = 2 * gen_square.unsigned_abs();
    let ks: Vec<i64> = c1_squares(gen_square, 0..=modulus as i64 - 1)?.into_iter().map(|(k, _)| k).collect();

    let src_values = distinct_with_counts(&source.d_invariants().values);
    let tgt_values = distinct_with_counts(&target.d_invariants().values);

    let pointwise: Vec<Vec<(usize, usize)>> = ks
        .iter()
        .map(|&k| {
            let c1 = c1_square(k, gen_square);
            let mut ok = Vec::new();
            for (i, (ds, _)) in src_values.iter().enumerate() {
                for (j, (dt, _)) in tgt_values.iter().enumerate() {
                    if d_mod2_shift(ds, dt, &c1) {
                        ok.push((i, j));
                    }
                }
            }
            ok
        })
        .collect();

    // restriction classes present among the characteristic residues
    let class_of = |k: i64, p: u64| k.rem_euclid(2 * p as i64);
    let src_classes: Vec<i64> = ks.iter().map(|&k| class_of(k, ps)).collect::<BTreeSet<_>>().into_iter().collect();
    let tgt_classes: Vec<i64> = ks.iter().map(|&k| class_of(k, pt)).collect::<BTreeSet<_>>().into_iter().collect();
    if src_classes.len() as u64 != ps || tgt_classes.len() as u64 != pt {
        return Err(Error::domain("residue_pairing_table", "restriction classes do not match the Spin^c counts"));
    }

    let src_counts: Vec<usize> = src_values.iter().map(|(_, c)| *c).collect();
    let tgt_counts: Vec<usize> = tgt_values.iter().map(|(_, c)| *c).collect();
    let mut search = Labeling {
        ks_by_src: src_classes
            .iter()
            .map(|&c| (0..ks.len()).filter(|&i| class_of(ks[i], ps) == c).collect())
            .collect(),
        tgt_of: ks.iter().map(|&k| tgt_classes.binary_search(&class_of(k, pt)).unwrap()).collect(),
        n_targets: tgt_classes.len(),
        pointwise: &pointwise,
        seen: vec![BTreeSet::new(); ks.len()],
        assignments: 0,
    };
    let mut tau = Vec::with_capacity(tgt_classes.len());
    search.targets(&mut tgt_counts.clone(), &mut tau, &mut src_counts.clone());
    let (seen, assignments) = (search.seen, search.assignments);

    let as_values = |set: &BTreeSet<(usize, usize)>| -> Vec<(Rational, Rational)> {
        set.iter().map(|&(i, j)| (src_values[i].0.clone(), tgt_values[j].0.clone())).collect()
    };
    let entries: Vec<PairingEntry> = ks
        .iter()
        .zip(&seen)
        .zip(&pointwise)
        .map(|((&k, set), ok)| PairingEntry {
            k,
            pairs: as_values(set),
            pointwise: as_values(&ok.iter().copied().collect()),
        })
        .collect();
    let status = if assignments > 0 { PairingStatus::Consistent } else { PairingStatus::Inconsistent };
    let determined = assignments > 0 && seen.iter().all(|s| s.len() == 1);
    let period = minimal_period(&entries, modulus);
    Ok(ResiduePairing {
        source: *source,
        target: *target,
        gen_square,
        modulus,
        period,
        entries,
        status,
        determined,
        assignments,
    })
}

fn distinct_with_counts(values: &[Rational]) -> Vec<(Rational, usize)> {
    let mut counts: BTreeMap<Rational, usize> = BTreeMap::new();
    for v in values {
        *counts.entry(v.clone()).or_default() += 1;
    }
    counts.into_iter().collect()
}

/// Backtracking over labelings of restriction classes by correction terms.
/// Target classes are labeled first; each source class is then checked
/// against every residue it contains.
struct Labeling<'a> {
    ks_by_src: Vec<Vec<usize>>,
    tgt_of: Vec<usize>,
    n_targets: usize,
    pointwise: &'a [Vec<(usize, usize)>],
    seen: Vec<BTreeSet<(usize, usize)>>,
    assignments: usize,
}

impl Labeling<'_> {
    fn targets(&mut self, counts: &mut [usize], tau: &mut Vec<usize>, src_counts: &mut [usize]) {
        if tau.len() == self.n_targets {
            let mut sigma = Vec::with_capacity(self.ks_by_src.len());
            self.sources(src_counts, &mut sigma, tau);
            return;
        }
        for j in 0..counts.len() {
            if counts[j] > 0 {
                counts[j] -= 1;
                tau.push(j);
                self.targets(counts, tau, src_counts);
                tau.pop();
                counts[j] += 1;
            }
        }
    }

    fn sources(&mut self, counts: &mut [usize], sigma: &mut Vec<usize>, tau: &[usize]) {
        let c = sigma.len();
        if c == self.ks_by_src.len() {
            self.assignments += 1;
            for (cls, &i) in self.ks_by_src.iter().zip(sigma.iter()) {
                for &k in cls {
                    self.seen[k].insert((i, tau[self.tgt_of[k]]));
                }
            }
            return;
        }
        for i in 0..counts.len() {
            if counts[i] == 0 {
                continue;
            }
            let fits = self.ks_by_src[c].iter().all(|&k| self.pointwise[k].contains(&(i, tau[self.tgt_of[k]])));
            if fits {
                counts[i] -= 1;
                sigma.push(i);
                self.sources(counts, sigma, tau);
                sigma.pop();
                counts[i] += 1;
            }
        }
    }
}

fn minimal_period(entries: &[PairingEntry], modulus: u64) -> u64 {
    let m = modulus as i64;
    let at = |k: i64| entries.iter().find(|e| e.k == k.rem_euclid(m)).map(|e| &e.pairs);
    (1..=modulus)
        .filter(|d| modulus.is_multiple_of(*d))
        .find(|&d| entries.iter().all(|e| at(e.k + d as i64) == Some(&e.pairs)))
        .unwrap_or(modulus)
}

/// Checks `d(L(p,1), n mod p) = ((2n+p)^2/4p - 5/4) + 1 (mod 2)` for every
/// `n` in one period `0..p`.
pub fn parity_identity_check(p: u64) -> bool {
    if p == 0 {
        return false;
    }
    let pi = p as i128;
    (0..p).all(|n| {
        let t = 2 * n as i128 + pi;
        let shifted = Rational::new(BigInt::from(t * t), BigInt::from(4 * pi)) - q(5, 4) + Rational::one();
        d_lp1(p, n % p).congruent(&shifted, 2)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "values", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DSolution {
    Unique(Vec<Rational>),
    NoSolution,
    Ambiguous(Vec<Vec<Rational>>),
}

/// Searches for correction terms of a manifold whose linking form matches
/// `model`: each `d_i` agrees with the model's `i`-th value mod 2, lies in
/// `[lower, lower + 2 radius]`, conjugate Spin^c structures share a value,
/// and the total is `d_sum`.
pub fn solve_d_invariants(
    form: &LinkingForm,
    d_sum: &Rational,
    lower: &Rational,
    model: &LensSpace,
    radius: u64,
) -> Result<DSolution> {
    let model_form = model.linking_form();
    if !linking_forms_equivalent(form, &model_form)? {
        return Err(Error::domain(
            "solve_d_invariants",
            format!("linking form {form} is not equivalent to {model_form} of {model}"),
        ));
    }
    let p = model.p();
    let ds = model.d_invariants().values;
    let mut orbits: Vec<(u64, Rational)> = Vec::new();
    let mut done = vec![false; p as usize];
    for i in 0..p {
        if done[i as usize] {
            continue;
        }
        let j = model.conjugate(i);
        done[i as usize] = true;
        done[j as usize] = true;
        orbits.push((if i == j { 1 } else { 2 }, ds[i as usize].clone()));
    }

    let upper = lower + Rational::from_integer(2 * radius as i64);
    let choices: Vec<Vec<Rational>> = orbits
        .iter()
        .map(|(_, base)| {
            // smallest base + 2t >= lower
            let half_gap = (base - lower) / Rational::from_integer(2);
            let t0 = -half_gap.floor();
            let mut v = base + Rational::from_integer(t0).scale(2);
            let mut out = Vec::new();
            while v <= upper {
                out.push(v.clone());
                v = v + Rational::from_integer(2);
            }
            out
        })
        .collect();

    let sizes: Vec<u64> = orbits.iter().map(|(s, _)| *s).collect();
    let mut found: BTreeSet<Vec<Rational>> = BTreeSet::new();
    let mut cur = Vec::new();
    search(&choices, &sizes, 0, Rational::zero(), d_sum, &mut cur, &mut found);

    let mut sols: Vec<Vec<Rational>> = found.into_iter().collect();
    Ok(match sols.len() {
        0 => DSolution::NoSolution,
        1 => DSolution::Unique(sols.remove(0)),
        _ => DSolution::Ambiguous(sols),
    })
}

fn search(
    choices: &[Vec<Rational>],
    sizes: &[u64],
    i: usize,
    acc: Rational,
    target: &Rational,
    cur: &mut Vec<(u64, Rational)>,
    found: &mut BTreeSet<Vec<Rational>>,
) {
    if i == choices.len() {
        if &acc == target {
            let mut ms: Vec<Rational> =
                cur.iter().flat_map(|(s, v)| std::iter::repeat_n(v.clone(), *s as usize)).collect();
            ms.sort();
            found.insert(ms);
        }
        return;
    }
    // remaining orbits contribute at least their smallest choices
    let rest_min: Rational = (i + 1..choices.len())
        .map(|j| choices[j].first().map(|v| v.scale(sizes[j])).unwrap_or_default())
        .sum();
    for v in &choices[i] {
        let next = &acc + v.scale(sizes[i]);
        if &next + &rest_min > *target {
            break;
        }
        cur.push((sizes[i], v.clone()));
        search(choices, sizes, i + 1, next, target, cur, found);
        cur.pop();
    }
}

/// Sign of the 2-handle cobordism between fillings along `gamma` and
/// `gamma_prime`.
///
/// Orient the pair so that `gamma . gamma' = -1`, using the intersection
/// pairing with `mu . lambda = -1`; the cobordism is positive definite when
/// `gamma . lambda` and `gamma' . lambda` have the same sign, negative
/// definite when they differ, and 0 marks a filling along `lambda` itself.
pub fn cobordism_sign(gamma: &Slope, gamma_prime: &Slope) -> Result<i8> {
    if distance(gamma, gamma_prime) != 1 {
        return Err(Error::NotDistanceOne {
            left: gamma.to_string(),
            right: gamma_prime.to_string(),
            distance: distance(gamma, gamma_prime),
        });
    }
    let dot = |x: (i64, i64), y: (i64, i64)| x.1 * y.0 - x.0 * y.1;
    let g = (gamma.mu_coeff(), gamma.lambda_coeff());
    let mut h = (gamma_prime.mu_coeff(), gamma_prime.lambda_coeff());
    if dot(g, h) == 1 {
        h = (-h.0, -h.1);
    }
    let lam = (0, 1);
    let (a, b) = (dot(g, lam).signum(), dot(h, lam).signum());
    Ok((a * b) as i8)
}

/// Whether `gcd` of the two boundary orders is 1, the case where the
/// restriction classes are independent.
pub fn coprime_boundaries(source: &LensSpace, target: &LensSpace) -> bool {
    gcd(source.p() as i64, target.p() as i64) == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(p: u64, qq: i64) -> LensSpace {
        LensSpace::new(p, qq).unwrap()
    }

    #[test]
    fn grading_shift_examples() {
        assert_eq!(grading_shift(&q(0, 1), 0, 0), q(0, 1));
        assert_eq!(grading_shift(&q(-4, 10), 1, -1), (q(-4, 10) + q(1, 1)) / q(4, 1));
        for p in 1..8i64 {
            for n in -3..4i64 {
                let c1 = q((2 * n + p) * (2 * n + p), p);
                assert_eq!(grading_shift(&c1, 1, 1), q((2 * n + p) * (2 * n + p), 4 * p) - q(5, 4));
            }
        }
    }

    #[test]
    fn characteristic_classes() {
        let v = c1_squares(-10, -4..=4).unwrap();
        assert_eq!(v.iter().map(|(k, _)| *k).collect::<Vec<_>>(), vec![-4, -2, 0, 2, 4]);
        assert_eq!(v[0].1, q(-16, 10));
        let v = c1_squares(1, 0..=4).unwrap();
        assert_eq!(v.iter().map(|(k, _)| *k).collect::<Vec<_>>(), vec![1, 3]);
        assert!(c1_squares(0, 0..=1).is_err());
    }

    #[test]
    fn mod2_shift_examples() {
        assert!(d_mod2_shift(&q(-2, 5), &q(1, 4), &q(-64, 10)));
        assert!(!d_mod2_shift(&q(-2, 5), &q(1, 4), &q(-16, 10)));
        assert!(d_mod2_shift(&q(1, 4), &q(1, 4), &q(-1, 1)));
        assert!(d_mod2_shift(&q(-2, 5), &q(-1, 4), &q(-4, 10)));
        assert!(!d_mod2_shift(&q(1, 4), &q(-2, 5), &q(-4, 10)));
    }

    #[test]
    fn residue_table_l53_to_rp3() {
        let t = residue_pairing_table(&l(5, 3), &l(2, 1), -10).unwrap();
        assert_eq!(t.modulus, 20);
        assert_eq!(t.status, PairingStatus::Consistent);
        assert!(t.determined);
        let classes = t.classes();
        let expect = vec![
            (vec![0], (q(0, 1), q(1, 4))),
            (vec![2, 18], (q(-2, 5), q(-1, 4))),
            (vec![4, 16], (q(2, 5), q(1, 4))),
            (vec![6, 14], (q(2, 5), q(-1, 4))),
            (vec![8, 12], (q(-2, 5), q(1, 4))),
            (vec![10], (q(0, 1), q(-1, 4))),
        ];
        assert_eq!(classes, expect);
    }

    #[test]
    fn residue_table_trivial_and_l32() {
        let s3 = LensSpace::s3();
        let t = residue_pairing_table(&s3, &s3, -1).unwrap();
        assert_eq!(t.entries.len(), 1);
        assert_eq!(t.entries[0].pairs, vec![(q(0, 1), q(0, 1))]);
        let t = residue_pairing_table(&l(3, 2), &l(2, 1), -6).unwrap();
        assert_eq!(t.status, PairingStatus::Consistent);
        assert!(residue_pairing_table(&l(3, 2), &l(2, 1), 6).is_err());
        assert!(residue_pairing_table(&l(5, 3), &l(2, 1), -6).is_err());
    }

    #[test]
    fn parity_small() {
        assert!((1..=60).all(parity_identity_check));
    }

    #[test]
    fn solver_examples() {
        let f = LinkingForm::cyclic(3, 2);
        let m = l(3, 2);
        assert_eq!(
            solve_d_invariants(&f, &q(-1, 6), &q(-1, 2), &m, 3).unwrap(),
            DSolution::Unique(vec![q(-1, 2), q(1, 6), q(1, 6)])
        );
        assert_eq!(
            solve_d_invariants(&f, &q(11, 6), &q(-1, 2), &m, 1).unwrap(),
            DSolution::Unique(vec![q(1, 6), q(1, 6), q(3, 2)])
        );
        assert_eq!(solve_d_invariants(&f, &q(11, 6), &q(-1, 2), &m, 0).unwrap(), DSolution::NoSolution);
        assert_eq!(
            solve_d_invariants(&LinkingForm::cyclic(2, 1), &q(0, 1), &q(-1, 4), &l(2, 1), 2).unwrap(),
            DSolution::Unique(vec![q(-1, 4), q(1, 4)])
        );
        assert!(solve_d_invariants(&LinkingForm::cyclic(3, 1), &q(0, 1), &q(0, 1), &m, 1).is_err());
    }

    #[test]
    fn sign_examples() {
        let s = |a, b| Slope::new(a, b).unwrap();
        for n in 1..10 {
            assert_eq!(cobordism_sign(&s(2, 1), &s(2 * n - 1, n)).unwrap(), 1);
        }
        assert_eq!(cobordism_sign(&Slope::meridian(), &Slope::longitude()).unwrap(), 0);
        assert!(cobordism_sign(&s(2, 1), &s(5, 1)).is_err());
    }
}
