use std::fmt::Write as _;

use serde_json::{json, Value};

use qalens::exactmath::{cf_evaluate, cf_expand, dedekind_sum};
use qalens::lens::linking_forms_equivalent;
use qalens::obstruct::{cw_consistency, lp1_search as search_lp1, CwSolution, Registry, RuleKind};
use qalens::slope::distance;
use qalens::spinccob::{cobordism_sign, parity_identity_check, residue_pairing_table, solve_d_invariants, DSolution};
use qalens::twobridge::{census_rows, census_tsv, pretzel_det};
use qalens::{LensSpace, LinkingForm, Rational, Result};

use crate::parse;

pub const SCHEMA: &str = "qalens.report/v1";

/// Each p costs O(p), so the sweep is quadratic.
const MAX_PARITY_CHECK: u64 = 20_000;

pub struct Report {
    pub command: &'static str,
    pub inputs: Value,
    pub outputs: Value,
    pub notes: Vec<String>,
    pub text: String,
}

impl Report {
    fn new(command: &'static str, inputs: Value, outputs: Value, text: String) -> Self {
        Report { command, inputs, outputs, notes: Vec::new(), text }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "notes": self.notes,
        })
    }
}

fn braces(values: &[Rational]) -> String {
    let parts: Vec<String> = values.iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn dinv(p: u64, q: i64) -> Result<Report> {
    let l = LensSpace::new(p, q)?;
    let d = l.d_invariants();
    let multiset = d.multiset();
    let mut text = format!("d({l}) = {}\n", braces(&multiset));
    for (i, v) in d.values.iter().enumerate() {
        let _ = writeln!(text, "  i = {i}: {v}");
    }
    let out = json!({ "lens": l.to_string(), "by_spinc": d.values, "multiset": multiset, "sum": d.sum() });
    Ok(Report::new("dinv", json!({ "p": p, "q": q }), out, text))
}

pub fn dedekind(q: i64, p: u64) -> Result<Report> {
    let s = dedekind_sum(q, p)?;
    let text = format!("s({q},{p}) = {s}\n");
    Ok(Report::new("dedekind", json!({ "q": q, "p": p }), json!({ "value": s }), text))
}

pub fn cf(p: u64, q: i64) -> Result<Report> {
    let terms = cf_expand(p, q)?;
    let parts: Vec<String> = terms.iter().map(ToString::to_string).collect();
    let text = format!("{p}/{q} = [{}]\n", parts.join(", "));
    Ok(Report::new("cf", json!({ "p": p, "q": q }), json!({ "terms": terms }), text))
}

pub fn cf_eval(terms: &[u64]) -> Result<Report> {
    let (p, q) = cf_evaluate(terms)?;
    let text = format!("{p}/{q}\n");
    Ok(Report::new("cf-eval", json!({ "terms": terms }), json!({ "p": p, "q": q, "value": format!("{p}/{q}") }), text))
}

pub fn lambda(p: u64, q: i64) -> Result<Report> {
    let l = LensSpace::new(p, q)?;
    let v = l.lambda();
    let text = format!("lambda({l}) = {v}\n");
    Ok(Report::new("lambda", json!({ "p": p, "q": q }), json!({ "lens": l.to_string(), "lambda": v }), text))
}

pub fn cw(surgeries: &[String]) -> Result<Report> {
    let parsed: Vec<(i64, i64, qalens::ConnSum)> = surgeries.iter().map(|s| parse::surgery(s)).collect::<Result<_>>()?;
    let sol = cw_consistency(&parsed)?;
    let text = match &sol {
        CwSolution::Solved { lambda_y, a_k } => format!("SOLVED lambda(Y) = {lambda_y}, A(K) = {a_k}\n"),
        CwSolution::Underdetermined => "UNDERDETERMINED\n".to_string(),
        CwSolution::Inconsistent => "INCONSISTENT\n".to_string(),
    };
    let inputs: Vec<Value> = parsed
        .iter()
        .map(|(a, b, t)| json!({ "coefficient": format!("{a}/{b}"), "target": t.to_string() }))
        .collect();
    Ok(Report::new("cw", json!({ "surgeries": inputs }), serde_json::to_value(&sol).expect("serializes"), text))
}

pub fn lkform_equiv(a: i64, b: i64, p: u64) -> Result<Report> {
    let (f, g) = (LinkingForm::cyclic(p, a), LinkingForm::cyclic(p, b));
    let eq = linking_forms_equivalent(&f, &g)?;
    let text = format!("{f} ~ {g}: {eq}\n");
    Ok(Report::new("lkform-equiv", json!({ "a": a, "b": b, "p": p }), json!({ "equivalent": eq }), text))
}

pub fn slope_dist(first: &str, second: &str) -> Result<Report> {
    let (s, t) = (parse::slope(first)?, parse::slope(second)?);
    let d = distance(&s, &t);
    let mut text = format!("distance {s} {t} = {d}\n");
    let mut out = json!({ "distance": d });
    if d == 1 {
        let sign = cobordism_sign(&s, &t)?;
        let _ = writeln!(text, "cobordism sign = {sign:+}");
        out["cobordism_sign"] = json!(sign);
    }
    Ok(Report::new("slope-dist", json!({ "first": s.to_string(), "second": t.to_string() }), out, text))
}

pub fn residue_table(source: &str, target: &str, gen_square: i64) -> Result<Report> {
    let (s, t) = (parse::lens(source)?, parse::lens(target)?);
    let table = residue_pairing_table(&s, &t, gen_square)?;
    let status = serde_json::to_value(table.status).expect("serializes");
    let status = status.as_str().unwrap_or_default().to_string();
    let mut text = format!("source {s}, target {t}, generator square {gen_square}\n");
    let _ = writeln!(text, "residues mod {}, period {}", table.modulus, table.period);
    let determined = if table.determined { "determined" } else { "not determined" };
    let _ = writeln!(text, "status {status}, {determined}, {} assignment(s)", table.assignments);
    let classes = table.classes();
    for (ks, (ds, dt)) in &classes {
        let ks: Vec<String> = ks.iter().map(ToString::to_string).collect();
        let _ = writeln!(text, "  k in {{{}}}: d_source = {ds}, d_target = {dt}", ks.join(","));
    }
    for e in table.entries.iter().filter(|e| e.pairs.len() != 1) {
        let pairs: Vec<String> = e.pairs.iter().map(|(a, b)| format!("({a}, {b})")).collect();
        let _ = writeln!(text, "  k = {}: {}", e.k, if pairs.is_empty() { "none".into() } else { pairs.join(" ") });
    }
    let class_json: Vec<Value> = classes
        .iter()
        .map(|(ks, (ds, dt))| json!({ "residues": ks, "d_source": ds, "d_target": dt }))
        .collect();
    let mut out = serde_json::to_value(&table).expect("serializes");
    out["classes"] = json!(class_json);
    let inputs = json!({ "source": s.to_string(), "target": t.to_string(), "gen_square": gen_square });
    Ok(Report::new("residue-table", inputs, out, text))
}

pub fn solve_d(form: &str, sum: &str, lower: &str, model: &str, radius: u64) -> Result<Report> {
    let (a, p) = parse::fraction(form)?;
    let (sum, lower, model) = (parse::rational(sum)?, parse::rational(lower)?, parse::lens(model)?);
    let f = LinkingForm::cyclic(p, a);
    let sol = solve_d_invariants(&f, &sum, &lower, &model, radius)?;
    let text = match &sol {
        DSolution::Unique(v) => format!("UNIQUE {}\n", braces(v)),
        DSolution::NoSolution => "NO_SOLUTION\n".to_string(),
        DSolution::Ambiguous(vs) => {
            let mut t = format!("AMBIGUOUS ({} solutions)\n", vs.len());
            for v in vs {
                let _ = writeln!(t, "  {}", braces(v));
            }
            t
        }
    };
    let inputs = json!({
        "form": f.to_string(), "sum": sum, "lower": lower, "model": model.to_string(), "radius": radius,
    });
    Ok(Report::new("solve-d", inputs, serde_json::to_value(&sol).expect("serializes"), text))
}

pub fn parity_check(max: u64) -> Result<Report> {
    if max == 0 || max > MAX_PARITY_CHECK {
        return Err(qalens::Error::Domain {
            what: "parity-check",
            detail: format!("--max must be in 1..={MAX_PARITY_CHECK}, got {max}"),
        });
    }
    let failures: Vec<u64> = (1..=max).filter(|&p| !parity_identity_check(p)).collect();
    let holds = failures.is_empty();
    let mut text = format!("parity identity for 1 <= p <= {max}: {holds}\n");
    if !holds {
        let f: Vec<String> = failures.iter().map(ToString::to_string).collect();
        let _ = writeln!(text, "fails at: {}", f.join(", "));
    }
    Ok(Report::new("parity-check", json!({ "max": max }), json!({ "holds": holds, "failures": failures }), text))
}

pub fn lp1_search(max: u64) -> Result<Report> {
    let s = search_lp1(max)?;
    let first: Vec<String> = s.first_hits.iter().map(ToString::to_string).collect();
    let mut text = format!("p <= {max} with -1 a square mod p and mod p+1: {} hits\n", s.hits);
    let _ = writeln!(text, "first hits: {}", first.join(", "));
    if s.all_one_mod_12 {
        let _ = writeln!(text, "all hits = 1 (mod 12)");
    } else {
        let c: Vec<String> = s.counterexamples.iter().map(ToString::to_string).collect();
        let _ = writeln!(text, "hits not 1 (mod 12): {}", c.join(", "));
    }
    Ok(Report::new("lp1-search", json!({ "max": max }), serde_json::to_value(&s).expect("serializes"), text))
}

pub fn classify(det: u64, disable: &[String]) -> Result<Report> {
    let mut registry = Registry::standard();
    for id in disable {
        registry.disable(id)?;
    }
    let d = qalens::classify(det, &registry)?;
    let mut report = Report::new("classify", json!({ "det": det, "disabled": disable }), d.to_json(), d.render_text());
    let used = d.rules_used();
    report.notes = registry
        .rules()
        .iter()
        .filter(|r| r.kind == RuleKind::Axiom && used.contains(r.id))
        .filter_map(|r| r.citation.map(|c| format!("{}: {c}", r.id)))
        .collect();
    if !d.complete {
        report.notes.push("derivation incomplete: some branches fell back to every candidate".into());
    }
    Ok(report)
}

pub fn census(det: u64) -> Result<Report> {
    let rows = census_rows(det)?;
    let text = census_tsv(&rows);
    Ok(Report::new("census", json!({ "det": det }), json!({ "rows": rows }), text))
}

pub fn pretzel(e1: i64, e2: i64, e3: i64) -> Result<Report> {
    let d = pretzel_det(e1, e2, e3)?;
    let text = format!("det P({e1},{e2},{e3}) = {d}\n");
    Ok(Report::new("pretzel", json!({ "e1": e1, "e2": e2, "e3": e3 }), json!({ "determinant": d.to_string() }), text))
}

#[cfg(test)]
mod tests {
    use super::*;
    use qalens::lens::same_multiset;
    use qalens::q;

    #[test]
    fn reports() {
        let r = dinv(5, 3).unwrap();
        assert!(r.text.starts_with("d(L(5,3)) = {-2/5, -2/5, 0, 2/5, 2/5}"));
        assert_eq!(r.to_json()["schema"], SCHEMA);
        let r = solve_d("2/3", "-1/6", "-1/2", "3,2", 3).unwrap();
        assert_eq!(r.text, "UNIQUE {-1/2, 1/6, 1/6}\n");
        assert!(same_multiset(
            &serde_json::from_value::<Vec<Rational>>(r.outputs["values"].clone()).unwrap(),
            &[q(-1, 2), q(1, 6), q(1, 6)]
        ));
        assert!(classify(8, &[]).is_err());
        assert!(classify(3, &["nope".to_string()]).is_err());
        assert_eq!(pretzel(2, 5, -3).unwrap().text, "det P(2,5,-3) = 11\n");
    }
}
