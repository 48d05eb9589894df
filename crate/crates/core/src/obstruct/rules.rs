use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::derivation::Premise;
use super::knots::{trefoil_surgery, unknot_surgery, Knot};
use super::{
    cw_consistency, h1_of_surgery, linking_form_obstruction, lp1_number_theory, CwSolution, FormCheck, KnotClass,
};
use crate::error::{Error, Result};
use crate::exactmath::{gcd, q, Rational};
use crate::lens::{cw_surgery, lens_spaces_of_order, ConnSum, LensSpace, LinkingForm};
use crate::slope::{distance_one_companions, gcd_obstruction, normalize_consecutive, normalize_half_integer, Slope};
use crate::spinccob::{parity_identity_check, residue_pairing_table, solve_d_invariants, DSolution, PairingStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RuleKind {
    /// Every step is computed here.
    Computed,
    /// Rests on a published theorem; only its hypotheses are checked.
    Axiom,
}

pub(crate) type Apply = fn(&Branch) -> Option<Firing>;

#[derive(Clone, Serialize)]
pub struct Rule {
    pub id: &'static str,
    pub kind: RuleKind,
    pub citation: Option<&'static str>,
    pub hypothesis: &'static str,
    /// `None` for the two rules the driver applies itself.
    #[serde(skip)]
    pub(crate) apply: Option<Apply>,
}

impl std::fmt::Debug for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Rule").field("id", &self.id).field("kind", &self.kind).finish()
    }
}

/// Ordered rule list. The first enabled rule that applies to a branch fires.
#[derive(Debug, Clone)]
pub struct Registry {
    rules: Vec<Rule>,
    disabled: BTreeSet<&'static str>,
}

pub(crate) const BASE_CASE: &str = "base-case";
pub(crate) const TRIAD_SPLIT: &str = "triad-split";

impl Registry {
    pub fn standard() -> Self {
        use RuleKind::*;
        let r = |id, kind, citation, hypothesis, apply: Option<Apply>| Rule { id, kind, citation, hypothesis, apply };
        let rules = vec![
            r(BASE_CASE, Axiom, Some("definition: the only formal L-space of determinant 1 is S^3"), "det = 1", None),
            r(TRIAD_SPLIT, Computed, None, "Y0, Y1, Y form a surgery triad with det(Y) = det(Y0) + det(Y1)", None),
            r(
                "lens-cosmetic",
                Axiom,
                Some(COSMETIC),
                "Y0 = Y1 is a lens space of prime order",
                Some(lens_cosmetic),
            ),
            r("knot-class-dichotomy", Computed, None, "|H_1(Y0)| is 1 or prime", Some(knot_class_dichotomy)),
            r("gcd-obstruction", Computed, None, "primitive knot with gcd(|H_1(Y0)|, |H_1(Y1)|) > 1", Some(gcd_rule)),
            r("h1-order", Computed, None, "nullhomologous knot, coefficients not yet fixed", Some(h1_order)),
            r("h1-cyclic", Computed, None, "primitive knot in a manifold with cyclic H_1", Some(h1_cyclic)),
            r("kmos", Axiom, Some(KMOS), "lens space surgery of order at most 8 on a knot in S^3", Some(kmos)),
            r(
                "greene-cabling",
                Axiom,
                Some(GREENE),
                "S^3_{+-6}(K) = +-(L(3,2) # L(2,1))",
                Some(greene_cabling),
            ),
            r("moser-trefoil", Axiom, Some(MOSER), "J0 is a trefoil in S^3", Some(moser_trefoil)),
            r("unknot-surgery", Computed, None, "J0 is an unknot", Some(unknot_rule)),
            r(
                "gainullin",
                Axiom,
                Some(GAINULLIN),
                "Y1 = Y0 # S^3_m(U) for a nullhomologous knot in an L-space Y0",
                Some(gainullin),
            ),
            r("cgo", Axiom, Some(CGO), "Y1 = -Y0 by +-1 surgery, Y0 not amphichiral", Some(cgo)),
            r("linking-form", Computed, None, "primitive knot, Y0 and Y1 lens spaces", Some(linking_form_rule)),
            r(
                "lp1-fillings",
                Axiom,
                Some(LP1),
                "+-Y0 = L(p,1), +-Y1 = L(p+1,1), p != 1 mod 12",
                Some(lp1_fillings),
            ),
            r("rp3-l5q", Axiom, Some(RP3_L5Q), "Y0 = RP^3, Y1 a lens space of order 5", Some(rp3_l5q)),
            r("solid-torus", Computed, None, "the exterior of J0 is a solid torus", Some(solid_torus)),
        ];
        Registry { rules, disabled: BTreeSet::new() }
    }

    /// Turns off a branch rule. The base case and the triad split drive the
    /// recursion and cannot be disabled.
    pub fn disable(&mut self, id: &str) -> Result<()> {
        let rule = self
            .get(id)
            .ok_or_else(|| Error::domain("registry", format!("unknown rule {id:?}")))?;
        if rule.apply.is_none() {
            return Err(Error::domain("registry", format!("rule {id:?} cannot be disabled")));
        }
        let id = rule.id;
        self.disabled.insert(id);
        Ok(())
    }

    pub fn without(mut self, id: &str) -> Result<Self> {
        self.disable(id)?;
        Ok(self)
    }

    pub fn is_enabled(&self, id: &str) -> bool {
        !self.disabled.contains(id)
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn get(&self, id: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.id == id)
    }

    pub(crate) fn branch_rules(&self) -> impl Iterator<Item = (&Rule, Apply)> {
        self.rules
            .iter()
            .filter(|r| self.is_enabled(r.id))
            .filter_map(|r| r.apply.map(|f| (r, f)))
    }
}

const KMOS: &str = "Kronheimer, Mrowka, Ozsvath, Szabo, Monopoles and lens space surgeries: \
                    lens space surgeries of order at most 8 on knots in S^3 come from the unknot or a trefoil";
const GAINULLIN: &str = "Gainullin, Heegaard Floer homology and knots determined by their complements: \
                         a nullhomologous knot in an L-space with a surgery matching that of the unknot is the unknot";
const COSMETIC: &str = "consequence of Gainullin's surgery characterization of the unknot: \
                        a distance-one surgery on a knot in an L-space of prime order that returns the same \
                        manifold is a surgery on the unknot";
const GREENE: &str = "Greene, L-space surgeries, genus bounds, and the cabling conjecture: \
                      a knot in S^3 with S^3_6(K) = L(3,2) # L(2,1) is the right-handed trefoil";
const MOSER: &str = "Moser, Elementary surgery along a torus knot: integer surgeries on the trefoil";
const CGO: &str = "Cochran, Gerges, Orr, Dehn surgery equivalence relations on 3-manifolds: \
                   +-1 surgery on a nullhomologous knot preserves the linking form";
const LP1: &str = "consecutive fillings L(p,1) and L(p+1,1) of a knot exterior in a homology sphere, \
                   p != 1 mod 12, force a solid torus (linking forms, Casson-Walker and correction terms)";
const RP3_L5Q: &str = "fillings RP^3 and L(5,q) at distance one force a solid torus \
                       (correction terms across the 2-handle cobordism)";

/// State of one branch of the case analysis.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Branch {
    pub n: u64,
    pub a: u64,
    pub b: u64,
    pub y0: ConnSum,
    pub y1: ConnSum,
    pub class: Option<KnotClass>,
    /// Candidate coefficients `m1` with `Y1 = (Y0)_{m1}(J0)`; then
    /// `Y = (Y0)_{m1 + sign(m1)}(J0)`.
    pub coeffs: Vec<i64>,
    pub knot: Option<Knot>,
    pub cyclic_checked: bool,
    /// Filling slopes `(gamma0, gamma1)` surviving the linking form test.
    pub slopes: Option<Vec<(Slope, Slope)>>,
    pub solid_torus: bool,
}

impl Branch {
    pub fn new(y0: ConnSum, y1: ConnSum) -> Result<Self> {
        let (a, b) = (y0.order()?, y1.order()?);
        Ok(Branch {
            n: a + b,
            a,
            b,
            y0,
            y1,
            class: None,
            coeffs: Vec::new(),
            knot: None,
            cyclic_checked: false,
            slopes: None,
            solid_torus: false,
        })
    }

    pub fn inputs(&self) -> Value {
        let mut v = json!({
            "n": self.n,
            "y0": self.y0.to_string(),
            "y1": self.y1.to_string(),
        });
        let m = v.as_object_mut().expect("object");
        if let Some(c) = self.class {
            m.insert("class".into(), json!(c));
        }
        if !self.coeffs.is_empty() {
            m.insert("coefficients".into(), json!(self.coeffs));
        }
        if let Some(k) = self.knot {
            m.insert("knot".into(), json!(k.to_string()));
        }
        if let Some(s) = &self.slopes {
            let s: Vec<String> = s.iter().map(|(g0, g1)| format!("{g0} {g1}")).collect();
            m.insert("slopes".into(), json!(s));
        }
        if self.solid_torus {
            m.insert("solid_torus".into(), json!(true));
        }
        v
    }

    fn with(&self, f: impl FnOnce(&mut Branch)) -> Branch {
        let mut b = self.clone();
        f(&mut b);
        b
    }

    fn nullhomologous(&self) -> bool {
        self.class == Some(KnotClass::Nullhomologous)
    }

    fn primitive(&self) -> bool {
        self.class == Some(KnotClass::Primitive)
    }
}

#[derive(Debug, Clone)]
pub(crate) enum Outcome {
    Exclude,
    Refine(Vec<Branch>),
    Resolve(Vec<ConnSum>),
}

#[derive(Debug, Clone)]
pub(crate) struct Firing {
    pub conclusion: String,
    pub premises: Vec<Premise>,
    pub outcome: Outcome,
}

fn fire(conclusion: impl Into<String>, premises: Vec<Premise>, outcome: Outcome) -> Option<Firing> {
    Some(Firing { conclusion: conclusion.into(), premises, outcome })
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn signed(m: i64) -> String {
    format!("{m:+}")
}

fn lens_cosmetic(b: &Branch) -> Option<Firing> {
    if b.class.is_some() || b.knot.is_some() || b.a != b.b || b.y0 != b.y1 || !is_prime(b.a) {
        return None;
    }
    b.y0.as_lens_space()?;
    fire(
        "Y1 = Y0 is a lens space of prime order, so J0 is an unknot",
        vec![Premise::new("Y0 == Y1", b.y0.to_string(), true), Premise::new("|H_1(Y0)| prime", b.a, true)],
        Outcome::Refine(vec![b.with(|x| {
            x.class = Some(KnotClass::Nullhomologous);
            x.knot = Some(Knot::Unknot);
        })]),
    )
}

fn knot_class_dichotomy(b: &Branch) -> Option<Firing> {
    if b.class.is_some() {
        return None;
    }
    let null = b.with(|x| x.class = Some(KnotClass::Nullhomologous));
    let prim = b.with(|x| x.class = Some(KnotClass::Primitive));
    if b.a == 1 {
        fire("H_1(Y0) = 0, so J0 is nullhomologous", vec![], Outcome::Refine(vec![null]))
    } else if is_prime(b.a) {
        fire(
            format!("|H_1(Y0)| = {} is prime, so [J0] is zero or a generator", b.a),
            vec![Premise::new("|H_1(Y0)| prime", b.a, true)],
            Outcome::Refine(vec![null, prim]),
        )
    } else {
        None
    }
}

fn gcd_rule(b: &Branch) -> Option<Firing> {
    if !b.primitive() {
        return None;
    }
    let g = gcd_obstruction(b.a, b.b);
    (g > 1).then_some(())?;
    fire(
        format!("the trivial filling and Y1 are at distance a multiple of gcd = {g}, not 1"),
        vec![Premise::new(format!("gcd({}, {})", b.a, b.b), g, true)],
        Outcome::Exclude,
    )
}

fn h1_order(b: &Branch) -> Option<Firing> {
    if !b.nullhomologous() || !b.coeffs.is_empty() {
        return None;
    }
    if !b.b.is_multiple_of(b.a) {
        return fire(
            format!("|H_1(Y1)| = {} is not a multiple of |H_1(Y0)| = {}", b.b, b.a),
            vec![Premise::new("|H_1(Y1)| mod |H_1(Y0)|", b.b % b.a, true)],
            Outcome::Exclude,
        );
    }
    let m = (b.b / b.a) as i64;
    let h = h1_of_surgery(&b.y0, KnotClass::Nullhomologous, m, 1).ok()?.group;
    let actual = b.y1.h1();
    if h != actual {
        return fire(
            format!("surgery gives H_1 = {h}, but H_1(Y1) = {actual}"),
            vec![Premise::new(format!("H_1((Y0)_{m}(J0))"), h.to_string(), true)],
            Outcome::Exclude,
        );
    }
    fire(
        format!("Y1 = (Y0)_{{+-{m}}}(J0), so Y = (Y0)_{{+-{}}}(J0)", m + 1),
        vec![Premise::new(format!("H_1((Y0)_{m}(J0)) == H_1(Y1)"), h.to_string(), true)],
        Outcome::Refine(vec![b.with(|x| x.coeffs = vec![m, -m])]),
    )
}

fn h1_cyclic(b: &Branch) -> Option<Firing> {
    if !b.primitive() || b.cyclic_checked {
        return None;
    }
    let h = h1_of_surgery(&b.y0, KnotClass::Primitive, b.b as i64, 1).ok()?;
    let actual = b.y1.h1();
    let premise = Premise::new("fillings of the exterior have cyclic H_1", h.cyclic_only, true);
    if !actual.is_cyclic() {
        return fire(format!("H_1(Y1) = {actual} is not cyclic"), vec![premise], Outcome::Exclude);
    }
    fire(
        format!("H_1(Y1) = {actual} is cyclic"),
        vec![premise],
        Outcome::Refine(vec![b.with(|x| x.cyclic_checked = true)]),
    )
}

fn kmos(b: &Branch) -> Option<Firing> {
    if !b.y0.is_s3() || !b.nullhomologous() || b.coeffs.is_empty() || b.knot.is_some() || b.b > 8 {
        return None;
    }
    b.y1.as_lens_space()?;
    let knots: &[Knot] =
        if b.b <= 4 { &[Knot::Unknot] } else { &[Knot::Unknot, Knot::RightTrefoil, Knot::LeftTrefoil] };
    let names: Vec<String> = knots.iter().map(ToString::to_string).collect();
    fire(
        format!("a lens space surgery of order {} on a knot in S^3: J0 is one of {}", b.b, names.join(", ")),
        vec![Premise::new("|H_1(Y1)| <= 8", b.b, true)],
        Outcome::Refine(knots.iter().map(|&k| b.with(|x| x.knot = Some(k))).collect()),
    )
}

fn greene_cabling(b: &Branch) -> Option<Firing> {
    if !b.y0.is_s3() || !b.nullhomologous() || b.coeffs.is_empty() || b.knot.is_some() {
        return None;
    }
    let hits: Vec<(Knot, i64)> = [(Knot::RightTrefoil, 6), (Knot::LeftTrefoil, -6)]
        .into_iter()
        .filter(|&(k, m)| b.coeffs.contains(&m) && trefoil_surgery(k, m).as_ref() == Some(&b.y1))
        .collect();
    if hits.is_empty() {
        return None;
    }
    let names: Vec<String> = hits.iter().map(|(k, m)| format!("{k} with m1 = {}", signed(*m))).collect();
    fire(
        format!("Y1 is a reducible surgery of order 6 on a knot in S^3: {}", names.join("; ")),
        vec![Premise::new("Y1 == S^3_m1(T)", b.y1.to_string(), true)],
        Outcome::Refine(
            hits.into_iter()
                .map(|(k, m)| {
                    b.with(|x| {
                        x.knot = Some(k);
                        x.coeffs = vec![m];
                    })
                })
                .collect(),
        ),
    )
}

fn moser_trefoil(b: &Branch) -> Option<Firing> {
    let knot = b.knot.filter(|k| *k != Knot::Unknot)?;
    if !b.y0.is_s3() || b.coeffs.is_empty() {
        return None;
    }
    let hits: Vec<i64> =
        b.coeffs.iter().copied().filter(|&m| trefoil_surgery(knot, m).as_ref() == Some(&b.y1)).collect();
    if hits.is_empty() {
        return fire(
            format!("Y1 is not S^3_m(K) for K = {knot} and m in {:?}", b.coeffs),
            vec![],
            Outcome::Exclude,
        );
    }
    let mut results = Vec::new();
    let mut premises = Vec::new();
    for m1 in hits {
        let m = m1 + m1.signum();
        let y = trefoil_surgery(knot, m)?;
        let expect = cw_surgery(&Rational::zero(), &knot.a_invariant(), m, 1).ok()?;
        premises.push(Premise::new(
            format!("lambda(S^3_{}({knot})) == lambda(L({},1)) + A/{}", signed(m), m.abs(), m),
            json!({ "table": y.lambda(), "formula": expect }),
            y.lambda() == expect,
        ));
        if !results.contains(&y) {
            results.push(y);
        }
    }
    let names: Vec<String> = results.iter().map(ToString::to_string).collect();
    fire(format!("Y = {}", names.join(", ")), premises, Outcome::Resolve(results))
}

fn unknot_matches(b: &Branch) -> Vec<i64> {
    b.coeffs
        .iter()
        .copied()
        .filter(|&m| unknot_surgery(m).map(|u| b.y0.connect(&u) == b.y1).unwrap_or(false))
        .collect()
}

fn unknot_rule(b: &Branch) -> Option<Firing> {
    if b.knot != Some(Knot::Unknot) || !b.nullhomologous() || b.coeffs.is_empty() {
        return None;
    }
    let hits = unknot_matches(b);
    if hits.is_empty() {
        return fire(
            format!("Y1 is not Y0 # S^3_m(U) for m in {:?}", b.coeffs),
            vec![],
            Outcome::Exclude,
        );
    }
    let mut results = Vec::new();
    let mut premises = Vec::new();
    for m1 in hits {
        premises.push(Premise::new(format!("Y1 == Y0 # S^3_{}(U)", signed(m1)), b.y1.to_string(), true));
        let y = b.y0.connect(&unknot_surgery(m1 + m1.signum()).ok()?);
        if !results.contains(&y) {
            results.push(y);
        }
    }
    let names: Vec<String> = results.iter().map(ToString::to_string).collect();
    fire(format!("Y = {}", names.join(", ")), premises, Outcome::Resolve(results))
}

fn gainullin(b: &Branch) -> Option<Firing> {
    if !b.nullhomologous() || b.coeffs.is_empty() || b.knot.is_some() || b.y0.is_s3() {
        return None;
    }
    let hits = unknot_matches(b);
    if hits.is_empty() {
        return None;
    }
    let premises =
        hits.iter().map(|m| Premise::new(format!("Y1 == Y0 # S^3_{}(U)", signed(*m)), b.y1.to_string(), true)).collect();
    fire(
        "Y1 agrees with the same surgery on an unknot, so J0 is an unknot",
        premises,
        Outcome::Refine(vec![b.with(|x| {
            x.knot = Some(Knot::Unknot);
            x.coeffs = hits.clone();
        })]),
    )
}

fn cgo(b: &Branch) -> Option<Firing> {
    if !b.nullhomologous() || b.knot.is_some() || b.coeffs.is_empty() || b.coeffs.iter().any(|m| m.abs() != 1) {
        return None;
    }
    if b.y1 != b.y0.reverse_orientation() || b.y1 == b.y0 {
        return None;
    }
    let same = crate::lens::linking_forms_equivalent(&b.y0.linking_form(), &b.y1.linking_form()).ok()?;
    fire(
        "+-1 surgery preserves the linking form, but Y1 = -Y0 has a different one",
        vec![Premise::new("linking form of Y0 equivalent to that of Y1", same, !same)],
        Outcome::Exclude,
    )
}

/// Distance-one slope pairs `(a, c), (b, d)` in a homology sphere basis,
/// with `c` reduced mod `a`, and their linking form verdicts.
fn slope_pairs(a: u64, b: u64, y0: &LensSpace, y1: &LensSpace) -> Vec<(Slope, Slope, FormCheck, FormCheck)> {
    let (ai, bi) = (a as i64, b as i64);
    let mut out = Vec::new();
    for c in 0..ai.max(1) {
        if gcd(ai, c) != 1 {
            continue;
        }
        for e in [-1, 1] {
            let num = bi * c + e;
            if num % ai != 0 {
                continue;
            }
            let d = num / ai;
            let (Ok(g0), Ok(g1)) = (Slope::new(ai, c), Slope::new(bi, d)) else { continue };
            let (Ok(f0), Ok(f1)) = (linking_form_obstruction(ai, c, y0), linking_form_obstruction(bi, d, y1)) else {
                continue;
            };
            if !out.iter().any(|(x, y, _, _)| *x == g0 && *y == g1) {
                out.push((g0, g1, f0, f1));
            }
        }
    }
    out
}

fn linking_form_rule(b: &Branch) -> Option<Firing> {
    if !b.primitive() || !b.cyclic_checked || b.slopes.is_some() || gcd(b.a as i64, b.b as i64) != 1 {
        return None;
    }
    let (l0, l1) = (b.y0.as_lens_space()?, b.y1.as_lens_space()?);
    let pairs = slope_pairs(b.a, b.b, &l0, &l1);
    let premises: Vec<Premise> = pairs
        .iter()
        .map(|(g0, g1, f0, f1)| {
            Premise::new(
                format!("forms of {g0} -> {l0} and {g1} -> {l1}"),
                json!([f0, f1]),
                *f0 == FormCheck::Pass && *f1 == FormCheck::Pass,
            )
        })
        .collect();
    let surviving: Vec<(Slope, Slope)> =
        pairs.iter().filter(|(_, _, f0, f1)| *f0 == FormCheck::Pass && *f1 == FormCheck::Pass).map(|p| (p.0, p.1)).collect();
    if surviving.is_empty() {
        return fire("no distance-one slope pair realizes both linking forms", premises, Outcome::Exclude);
    }
    let names: Vec<String> = surviving.iter().map(|(g0, g1)| format!("{g0} {g1}")).collect();
    fire(
        format!("slope pairs compatible with both linking forms: {}", names.join(", ")),
        premises,
        Outcome::Refine(vec![b.with(|x| x.slopes = Some(surviving.clone()))]),
    )
}

fn lp1_fillings(b: &Branch) -> Option<Firing> {
    if !b.primitive() || !b.cyclic_checked || b.solid_torus || b.b != b.a + 1 || b.a % 12 == 1 {
        return None;
    }
    let (l0, l1) = (b.y0.as_lens_space()?, b.y1.as_lens_space()?);
    let (p0, p1) = (LensSpace::new(b.a, 1).ok()?, LensSpace::new(b.b, 1).ok()?);
    let orient = [1i8, -1].into_iter().find(|&s| {
        let (x0, x1) = if s == 1 { (l0, l1) } else { (l0.reverse_orientation(), l1.reverse_orientation()) };
        x0 == p0 && x1 == p1
    })?;

    let mut premises = Vec::new();
    let (c, d) = match b.slopes.as_ref().and_then(|s| s.first()) {
        Some((g0, g1)) => (g0.lambda_coeff(), g1.lambda_coeff()),
        None => (1, 1),
    };
    let cons = normalize_consecutive(b.a, c, d).ok()?;
    premises.push(Premise::new("consecutive slopes in standard position", cons, true));
    let rec = lp1_number_theory(b.a).ok()?;
    premises.push(Premise::new("negative surgeries obstructed by linking forms", rec, rec.obstructed()));
    let sys = [(b.a as i64, 1, ConnSum::lens(p0)), (b.b as i64, 1, ConnSum::lens(p1))];
    let cw = cw_consistency(&sys).ok()?;
    let cw_ok = cw == CwSolution::Solved { lambda_y: Rational::zero(), a_k: Rational::zero() };
    premises.push(Premise::new("Casson-Walker forces lambda(Y) = 0 and A = 0", &cw, cw_ok));
    let parity = parity_identity_check(b.a);
    premises.push(Premise::new(format!("d(L({},1)) parity identity", b.a), parity, parity));
    if premises.iter().any(|p| !p.holds) {
        return None;
    }
    let side = if orient == 1 { "Y0, Y1" } else { "-Y0, -Y1" };
    fire(
        format!("{side} are L({},1), L({},1): the exterior is a solid torus", b.a, b.b),
        premises,
        Outcome::Refine(vec![b.with(|x| x.solid_torus = true)]),
    )
}

fn rp3_l5q(b: &Branch) -> Option<Firing> {
    if !b.primitive() || !b.cyclic_checked || b.solid_torus || b.b != 5 {
        return None;
    }
    let (l0, l1) = (b.y0.as_lens_space()?, b.y1.as_lens_space()?);
    if l0 != LensSpace::rp3() {
        return None;
    }
    let mut premises = Vec::new();
    let c = b.slopes.as_ref().and_then(|s| s.first()).map(|(g0, _)| g0.lambda_coeff()).unwrap_or(1);
    let half = normalize_half_integer(c).ok()?;
    premises.push(Premise::new("half-integer slope in standard position", half, true));
    let companions = distance_one_companions(&half.slope, 5).ok()?;
    let names: Vec<String> = companions.iter().map(ToString::to_string).collect();
    premises.push(Premise::new("distance-one companions of order 5", &names, companions.len() == 2));
    let realized: Vec<String> = companions
        .iter()
        .filter(|s| linking_form_obstruction(5, s.lambda_coeff(), &l1).ok() == Some(FormCheck::Pass))
        .map(ToString::to_string)
        .collect();
    premises.push(Premise::new(format!("companions realizing the linking form of {l1}"), &realized, !realized.is_empty()));

    let l53 = LensSpace::new(5, 3).ok()?;
    let cw = cw_consistency(&[(2, 1, ConnSum::lens(LensSpace::rp3())), (5, 3, ConnSum::lens(l53))]).ok()?;
    let cw_ok = cw == CwSolution::Solved { lambda_y: Rational::zero(), a_k: Rational::zero() };
    premises.push(Premise::new("Casson-Walker forces lambda(Y) = 0 and A = 0", &cw, cw_ok));

    let t = residue_pairing_table(&l53, &LensSpace::rp3(), -10).ok()?;
    premises.push(Premise::new(
        "residue table L(5,3) -> L(2,1), g = -10",
        json!({ "status": t.status, "determined": t.determined }),
        t.status == PairingStatus::Consistent && t.determined,
    ));
    let l32 = LensSpace::new(3, 2).ok()?;
    let t = residue_pairing_table(&l32, &LensSpace::rp3(), -6).ok()?;
    premises.push(Premise::new(
        "residue table L(3,2) -> L(2,1), g = -6",
        json!({ "status": t.status }),
        t.status == PairingStatus::Consistent,
    ));

    // d of the order 3 filling: sum fixed by lambda, each value at least
    // min d(RP^3) - 1/4
    let sum = -l32.lambda().scale(6);
    let lower = q(-1, 4) - q(1, 4);
    let sol = solve_d_invariants(&LinkingForm::cyclic(3, 2), &sum, &lower, &l32, 3).ok()?;
    let unique = matches!(&sol, DSolution::Unique(v) if *v == [q(-1, 2), q(1, 6), q(1, 6)]);
    premises.push(Premise::new("correction terms of the order 3 filling", &sol, unique));
    if premises.iter().any(|p| !p.holds) {
        return None;
    }
    fire(
        format!("RP^3 and {l1} at distance one: the exterior is a solid torus"),
        premises,
        Outcome::Refine(vec![b.with(|x| x.solid_torus = true)]),
    )
}

fn solid_torus(b: &Branch) -> Option<Firing> {
    if !b.solid_torus {
        return None;
    }
    let ys: Vec<ConnSum> = lens_spaces_of_order(b.n).into_iter().map(ConnSum::lens).collect();
    fire(format!("Y is a filling of a solid torus: a lens space of order {}", b.n), vec![], Outcome::Resolve(ys))
}
