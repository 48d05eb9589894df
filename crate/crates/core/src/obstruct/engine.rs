use std::collections::BTreeSet;

use serde_json::json;

use super::derivation::{Derivation, Node, NodeStatus};
use super::rules::{Branch, Outcome, Registry, BASE_CASE, TRIAD_SPLIT};
use crate::error::{Error, Result};
use crate::lens::ConnSum;

/// Largest determinant the rule set covers.
pub const MAX_DETERMINANT: u64 = 7;

/// Guards against rule sets that refine a branch forever.
const MAX_DEPTH: usize = 32;

/// Classification with the standard rules.
pub fn classify_formal_lspaces(n: u64) -> Result<Derivation> {
    classify(n, &Registry::standard())
}

/// Runs the case analysis for every determinant up to `n`, feeding each
/// level's leaves into the splits of the next.
pub fn classify(n: u64, registry: &Registry) -> Result<Derivation> {
    if n == 0 || n > MAX_DETERMINANT {
        return Err(Error::domain(
            "classify",
            format!("determinant must be in 1..={MAX_DETERMINANT}, got {n}"),
        ));
    }
    let mut levels: Vec<Derivation> = vec![base_case(registry)];
    for m in 2..=n {
        let next = split_level(m, registry, &levels)?;
        levels.push(next);
    }
    Ok(levels.pop().expect("at least one level"))
}

fn driver_node(registry: &Registry, id: &str) -> (Option<super::RuleKind>, Option<String>) {
    let rule = registry.get(id).expect("driver rules are registered");
    (Some(rule.kind), rule.citation.map(str::to_string))
}

fn base_case(registry: &Registry) -> Derivation {
    let (kind, citation) = driver_node(registry, BASE_CASE);
    let s3 = ConnSum::s3();
    Derivation {
        n: 1,
        complete: true,
        root: Node {
            rule: BASE_CASE.into(),
            kind,
            citation,
            inputs: json!({ "n": 1 }),
            conclusion: "Y = S^3".into(),
            premises: vec![],
            status: NodeStatus::Resolved,
            candidates: vec![s3.to_string()],
            children: vec![],
        },
        leaves: vec![s3],
    }
}

fn split_level(n: u64, registry: &Registry, lower: &[Derivation]) -> Result<Derivation> {
    let splits: Vec<(u64, u64)> = (1..=n / 2).map(|a| (a, n - a)).collect();
    let mut children = Vec::new();
    for &(a, b) in &splits {
        let (l0, l1) = (&lower[a as usize - 1], &lower[b as usize - 1]);
        for (i, y0) in l0.leaves.iter().enumerate() {
            // equal orders: unordered pairs suffice
            let start = if a == b { i } else { 0 };
            for y1 in &l1.leaves[start..] {
                children.push(run_branch(Branch::new(y0.clone(), y1.clone())?, registry, 0));
            }
        }
    }
    let unresolved = children.iter().flat_map(Node::walk).any(|x| x.status == NodeStatus::Unresolved);
    let leaves = collect_leaves(&children, n);
    let complete = !unresolved && lower.iter().all(|d| d.complete);
    let (kind, citation) = driver_node(registry, TRIAD_SPLIT);
    let split_names: Vec<String> = splits.iter().map(|(a, b)| format!("{a}+{b}")).collect();
    Ok(Derivation {
        n,
        complete,
        root: Node {
            rule: TRIAD_SPLIT.into(),
            kind,
            citation,
            inputs: json!({ "n": n, "splits": splits }),
            conclusion: format!(
                "det(Y) = det(Y0) + det(Y1) with det(Y0) <= det(Y1): splits {}",
                split_names.join(", ")
            ),
            premises: vec![],
            status: NodeStatus::Refined,
            candidates: leaves.iter().map(ToString::to_string).collect(),
            children,
        },
        leaves,
    })
}

/// Leaves of the resolved and unresolved nodes, deduplicated and sorted.
fn collect_leaves(children: &[Node], n: u64) -> Vec<ConnSum> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for node in children.iter().flat_map(Node::walk) {
        if !matches!(node.status, NodeStatus::Resolved | NodeStatus::Unresolved) {
            continue;
        }
        for c in resolved_sums(node, n) {
            if seen.insert(c.clone()) {
                out.push(c);
            }
        }
    }
    out.sort();
    out
}

fn resolved_sums(node: &Node, n: u64) -> Vec<ConnSum> {
    // candidates are display strings; map them back through the order-n list
    ConnSum::all_of_order(n).into_iter().filter(|c| node.candidates.contains(&c.to_string())).collect()
}

fn run_branch(branch: Branch, registry: &Registry, depth: usize) -> Node {
    let inputs = branch.inputs();
    let fired = if depth < MAX_DEPTH {
        registry.branch_rules().find_map(|(rule, apply)| apply(&branch).map(|f| (rule, f)))
    } else {
        None
    };
    let Some((rule, firing)) = fired else {
        return Node {
            rule: "unresolved".into(),
            kind: None,
            citation: None,
            inputs,
            conclusion: "no enabled rule applies; every connected sum of this order remains".into(),
            premises: vec![],
            status: NodeStatus::Unresolved,
            candidates: ConnSum::all_of_order(branch.n).iter().map(ToString::to_string).collect(),
            children: vec![],
        };
    };
    let (status, candidates, children) = match firing.outcome {
        Outcome::Exclude => (NodeStatus::Excluded, vec![], vec![]),
        Outcome::Resolve(ys) => (NodeStatus::Resolved, ys.iter().map(ToString::to_string).collect(), vec![]),
        Outcome::Refine(bs) => {
            let kids: Vec<Node> = bs.into_iter().map(|b| run_branch(b, registry, depth + 1)).collect();
            (NodeStatus::Refined, vec![], kids)
        }
    };
    Node {
        rule: rule.id.into(),
        kind: Some(rule.kind),
        citation: rule.citation.map(str::to_string),
        inputs,
        conclusion: firing.conclusion,
        premises: firing.premises,
        status,
        candidates,
        children,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::obstruct::RuleKind;

    fn names(n: u64) -> Vec<String> {
        let mut v = classify_formal_lspaces(n).unwrap().leaf_names();
        v.sort();
        v
    }

    #[test]
    fn small_determinants() {
        assert_eq!(names(1), ["S^3"]);
        assert_eq!(names(2), ["L(2,1)"]);
        assert_eq!(names(3), ["L(3,1)", "L(3,2)"]);
        assert_eq!(names(4), ["L(2,1) # L(2,1)", "L(4,1)", "L(4,3)"]);
        assert_eq!(names(5), ["L(5,1)", "L(5,2)", "L(5,4)"]);
        assert_eq!(names(6), ["L(2,1) # L(3,1)", "L(2,1) # L(3,2)", "L(6,1)", "L(6,5)"]);
        assert_eq!(names(7), ["L(7,1)", "L(7,2)", "L(7,3)", "L(7,6)"]);
        for n in 1..=MAX_DETERMINANT {
            assert!(classify_formal_lspaces(n).unwrap().complete, "{n}");
        }
    }

    #[test]
    fn leaves_have_order_n() {
        for n in 1..=MAX_DETERMINANT {
            for l in classify_formal_lspaces(n).unwrap().leaves {
                assert_eq!(l.order().unwrap(), n);
            }
        }
    }

    #[test]
    fn bounds() {
        assert!(classify_formal_lspaces(0).is_err());
        assert!(classify_formal_lspaces(8).is_err());
    }

    #[test]
    fn every_computed_rule_is_exercised() {
        let r = Registry::standard();
        let mut used = BTreeSet::new();
        for n in 1..=MAX_DETERMINANT {
            used.extend(classify(n, &r).unwrap().rules_used());
        }
        for rule in r.rules() {
            assert!(used.contains(rule.id), "{} never fired", rule.id);
        }
        assert!(!used.contains("unresolved"));
        assert!(r.rules().iter().any(|x| x.kind == RuleKind::Computed));
    }

    #[test]
    fn axioms_carry_citations() {
        let d = classify_formal_lspaces(7).unwrap();
        for node in d.nodes() {
            if node.kind == Some(RuleKind::Axiom) {
                assert!(node.citation.as_deref().is_some_and(|c| !c.is_empty()));
            }
            if node.status == NodeStatus::Resolved {
                assert!(node.premises.iter().all(|p| p.holds), "{}", node.rule);
            }
        }
    }

    #[test]
    fn disabling_linking_forms_leaves_three_four_open() {
        let r = Registry::standard().without("linking-form").unwrap();
        let d = classify(7, &r).unwrap();
        assert!(!d.complete);
        let open = d.nodes().into_iter().any(|node| {
            node.status == NodeStatus::Unresolved
                && node.inputs["y0"] == "L(3,1)"
                && node.inputs["y1"] == "L(4,3)"
        });
        assert!(open);
        // other determinants are unaffected
        assert!(classify(4, &r).unwrap().complete);
    }

    #[test]
    fn deterministic() {
        let a = classify_formal_lspaces(7).unwrap();
        let b = classify_formal_lspaces(7).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.render_text(), b.render_text());
    }
}
