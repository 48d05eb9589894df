use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use super::rules::RuleKind;
use crate::lens::ConnSum;

/// A computed check recorded under a rule application.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Premise {
    pub check: String,
    pub result: Value,
    pub holds: bool,
}

impl Premise {
    pub fn new(check: impl Into<String>, result: impl Serialize, holds: bool) -> Self {
        Premise {
            check: check.into(),
            result: serde_json::to_value(result).expect("premise results serialize"),
            holds,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NodeStatus {
    Refined,
    Excluded,
    Resolved,
    /// No rule applied; candidates fall back to every connected sum of the
    /// right order.
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Node {
    pub rule: String,
    pub kind: Option<RuleKind>,
    pub citation: Option<String>,
    pub inputs: Value,
    pub conclusion: String,
    pub premises: Vec<Premise>,
    pub status: NodeStatus,
    pub candidates: Vec<String>,
    pub children: Vec<Node>,
}

impl Node {
    /// Depth-first, parents before children.
    pub fn walk(&self) -> Vec<&Node> {
        let mut out = vec![self];
        for c in &self.children {
            out.extend(c.walk());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    pub n: u64,
    /// False if any branch here or at a lower determinant was unresolved.
    pub complete: bool,
    pub root: Node,
    pub leaves: Vec<ConnSum>,
}

impl Derivation {
    pub fn nodes(&self) -> Vec<&Node> {
        self.root.walk()
    }

    pub fn rules_used(&self) -> BTreeSet<String> {
        self.nodes().iter().map(|n| n.rule.clone()).collect()
    }

    pub fn leaf_names(&self) -> Vec<String> {
        self.leaves.iter().map(ToString::to_string).collect()
    }

    pub fn to_json(&self) -> Value {
        let leaves: Vec<Value> = self
            .leaves
            .iter()
            .map(|l| {
                json!({
                    "normal_form": l.to_string(),
                    "signed": l.signed_name(),
                    "h1": l.h1().to_string(),
                    "order": l.order().ok(),
                })
            })
            .collect();
        json!({
            "determinant": self.n,
            "complete": self.complete,
            "leaves": leaves,
            "derivation": self.root,
        })
    }

    /// Indented tree, one line per rule application.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let status = if self.complete { "complete" } else { "INCOMPLETE" };
        let _ = writeln!(out, "determinant {}: {}", self.n, status);
        let names: Vec<String> =
            self.leaves.iter().map(|l| format!("{} [{}]", l, l.signed_name())).collect();
        let _ = writeln!(out, "leaves: {}", names.join(", "));
        render_node(&self.root, 0, &mut out);
        out
    }
}

fn render_node(node: &Node, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let kind = match node.kind {
        Some(RuleKind::Computed) => "COMPUTED",
        Some(RuleKind::Axiom) => "AXIOM",
        None => "-",
    };
    let status = match node.status {
        NodeStatus::Refined => "",
        NodeStatus::Excluded => " => excluded",
        NodeStatus::Resolved => " => resolved",
        NodeStatus::Unresolved => " => UNRESOLVED",
    };
    let ctx = match (node.inputs.get("y0"), node.inputs.get("y1")) {
        (Some(Value::String(a)), Some(Value::String(b))) => format!(" {{Y0 = {a}, Y1 = {b}}}"),
        _ => String::new(),
    };
    let _ = writeln!(out, "{pad}- {} ({kind}){ctx}: {}{status}", node.rule, node.conclusion);
    if node.kind == Some(RuleKind::Axiom) {
        if let Some(c) = &node.citation {
            let _ = writeln!(out, "{pad}    cites: {c}");
        }
    }
    for p in &node.premises {
        let mark = if p.holds { "ok" } else { "FAILS" };
        let _ = writeln!(out, "{pad}    premise {}: {} [{mark}]", p.check, p.result);
    }
    if !node.candidates.is_empty() && node.status != NodeStatus::Refined {
        let _ = writeln!(out, "{pad}    candidates: {}", node.candidates.join(", "));
    }
    for c in &node.children {
        render_node(c, depth + 1, out);
    }
}
