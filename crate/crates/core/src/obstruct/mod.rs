//! Obstructions to distance-one surgeries between connected sums of lens
//! spaces, and a rule engine that replays the case analysis classifying
//! formal L-spaces of small determinant.

mod derivation;
mod engine;
mod knots;
mod rules;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{is_square_mod, require_coprime, NegOneSquares, Rational};
use crate::group::AbelianGroup;
use crate::lens::{lambda_lens, linking_form_of_surgery, linking_forms_equivalent, surgery_on_unknot, ConnSum, LensSpace};

pub use derivation::{Derivation, Node, NodeStatus, Premise};
pub use engine::{classify, classify_formal_lspaces, MAX_DETERMINANT};
pub use knots::{trefoil_surgery, unknot_surgery, Knot};
pub use rules::{Registry, Rule, RuleKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum KnotClass {
    Nullhomologous,
    /// Generates `H_1` of the ambient manifold.
    Primitive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryHomology {
    pub group: AbelianGroup,
    /// Every filling of the exterior has cyclic `H_1`.
    pub cyclic_only: bool,
}

/// `H_1` of the filling along `p mu + q lambda`.
///
/// For a nullhomologous knot `(mu, lambda)` is the meridian and Seifert
/// longitude and the result is `H_1(ambient) + Z/|p|`. For a primitive knot
/// the exterior has `H_1 = Z`, `lambda` is the rational longitude and the
/// result is `Z/|p|`.
pub fn h1_of_surgery(ambient: &ConnSum, class: KnotClass, p: i64, q: i64) -> Result<SurgeryHomology> {
    require_coprime(p, q)?;
    let filling = AbelianGroup::cyclic(p.unsigned_abs());
    match class {
        KnotClass::Nullhomologous => {
            Ok(SurgeryHomology { group: ambient.h1().direct_sum(&filling), cyclic_only: false })
        }
        KnotClass::Primitive => {
            if !ambient.h1().is_cyclic() {
                return Err(Error::domain("h1_of_surgery", format!("{ambient} has non-cyclic H_1; no knot is primitive")));
            }
            Ok(SurgeryHomology { group: filling, cyclic_only: true })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lp1Record {
    pub p: u64,
    pub neg1_sq_mod_p: bool,
    pub neg1_sq_mod_p1: bool,
    /// Both flags hold, so `Y_{-p} = L(p,1)` and `Y_{-(p+1)} = L(p+1,1)` are
    /// compatible with linking forms; this forces `p = 1 (mod 12)`.
    pub forces_mod12: bool,
    pub p_mod_12: u64,
}

impl Lp1Record {
    /// The negative-surgery scenario is ruled out by linking forms.
    pub fn obstructed(&self) -> bool {
        !self.forces_mod12
    }

    pub fn consistent(&self) -> bool {
        !self.forces_mod12 || self.p_mod_12 == 1
    }
}

/// Linking-form test for a knot in a homology sphere with
/// `Y_{-p} = L(p,1)` and `Y_{-(p+1)} = L(p+1,1)`: the forms `-1/p` and `1/p`
/// agree iff `-1` is a square mod `p`, and likewise for `p + 1`.
pub fn lp1_number_theory(p: u64) -> Result<Lp1Record> {
    if p == 0 {
        return Err(Error::domain("lp1_number_theory", "p must be positive"));
    }
    crate::error::check_modulus(p + 1)?;
    let a = is_square_mod(-1, p);
    let b = is_square_mod(-1, p + 1);
    Ok(Lp1Record { p, neg1_sq_mod_p: a, neg1_sq_mod_p1: b, forces_mod12: a && b, p_mod_12: p % 12 })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lp1Search {
    pub max: u64,
    /// Number of `p <= max` with `-1` a square mod both `p` and `p + 1`.
    pub hits: u64,
    pub first_hits: Vec<u64>,
    pub counterexamples: Vec<u64>,
    pub all_one_mod_12: bool,
}

/// Runs [`lp1_number_theory`] for every `p <= max` using a sieve of square
/// roots of `-1`.
pub fn lp1_search(max: u64) -> Result<Lp1Search> {
    if max == 0 {
        return Err(Error::domain("lp1_search", "max must be positive"));
    }
    let table = NegOneSquares::build(max + 1)?;
    let mut hits = 0;
    let mut first_hits = Vec::new();
    let mut counterexamples = Vec::new();
    for p in 1..=max {
        if table.contains(p) && table.contains(p + 1) {
            hits += 1;
            if first_hits.len() < 10 {
                first_hits.push(p);
            }
            if p % 12 != 1 {
                counterexamples.push(p);
            }
        }
    }
    let all_one_mod_12 = counterexamples.is_empty();
    Ok(Lp1Search { max, hits, first_hits, counterexamples, all_one_mod_12 })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CwSolution {
    Solved { lambda_y: Rational, a_k: Rational },
    Underdetermined,
    Inconsistent,
}

/// Solves `lambda(target_i) - lambda(L(a_i, b_i)) = lambda_Y + (b_i/a_i) A_K`
/// for surgeries `a_i/b_i` on one knot in an integer homology sphere.
pub fn cw_consistency(surgeries: &[(i64, i64, ConnSum)]) -> Result<CwSolution> {
    let mut rows: Vec<(Rational, Rational)> = Vec::new();
    for (a, b, target) in surgeries {
        let lens = surgery_on_unknot(*a, *b)?;
        rows.push((crate::exactmath::q(*b, *a), target.lambda() - lambda_lens(&lens)));
    }
    let Some((s0, r0)) = rows.first().cloned() else {
        return Ok(CwSolution::Underdetermined);
    };
    let Some((s1, r1)) = rows.iter().find(|(s, _)| *s != s0).cloned() else {
        return Ok(if rows.iter().all(|(_, r)| *r == r0) {
            CwSolution::Underdetermined
        } else {
            CwSolution::Inconsistent
        });
    };
    let a_k = (&r1 - &r0) / (&s1 - &s0);
    let lambda_y = &r0 - &s0 * &a_k;
    if rows.iter().all(|(s, r)| &lambda_y + s * &a_k == *r) {
        Ok(CwSolution::Solved { lambda_y, a_k })
    } else {
        Ok(CwSolution::Inconsistent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FormCheck {
    Pass,
    Fail,
}

/// Whether `p/q` surgery on a knot in a homology sphere can be `target`:
/// the linking form `q/p` must match the target's form.
pub fn linking_form_obstruction(p: i64, q: i64, target: &LensSpace) -> Result<FormCheck> {
    let form = linking_form_of_surgery(p, q)?;
    let other = target.linking_form();
    if form.group() != other.group() {
        return Ok(FormCheck::Fail);
    }
    Ok(if linking_forms_equivalent(&form, &other)? { FormCheck::Pass } else { FormCheck::Fail })
}
