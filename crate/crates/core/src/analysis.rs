//! Property checks for NNF circuits and the smoothing/conditioning transforms.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::lit::{Assignment, Literal, Var, VarSet};
use crate::nnf::{block_mask, NnfBuilder, NnfCircuit, NnfNode, NodeId};
use crate::vtree::{Vtree, VtreeId};

/// Variable cap for exhaustive checks.
pub const DEFAULT_ORACLE_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Structural,
    Exhaustive,
    /// Accepted on the caller's word.
    Assumed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub node: NodeId,
    pub detail: String,
}

/// Outcome of one property check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub name: String,
    pub method: Method,
    pub witnesses: Vec<Witness>,
    /// Per-node facts established by a passing check (decision variables,
    /// conforming vtree nodes).
    pub annotations: Vec<(NodeId, String)>,
}

impl PropertyReport {
    pub fn new(name: &str, method: Method) -> PropertyReport {
        PropertyReport {
            name: name.to_string(),
            method,
            witnesses: Vec::new(),
            annotations: Vec::new(),
        }
    }

    fn fail(&mut self, node: NodeId, detail: impl Into<String>) {
        self.witnesses.push(Witness {
            node,
            detail: detail.into(),
        });
    }

    pub fn holds(&self) -> bool {
        self.witnesses.is_empty()
    }

    /// `PROPERTY <name> HOLDS|FAILS` followed by one `WITNESS` line per violation.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "PROPERTY {} {}",
            self.name,
            if self.holds() { "HOLDS" } else { "FAILS" }
        )?;
        for w in &self.witnesses {
            writeln!(f, "WITNESS node={} {}", w.node, w.detail)?;
        }
        Ok(())
    }
}

pub fn check_decomposability(c: &NnfCircuit) -> PropertyReport {
    let vars = c.node_vars();
    let mut r = PropertyReport::new("decomposable", Method::Structural);
    for (id, node) in c.nodes().iter().enumerate() {
        if let NnfNode::And(cs) = node {
            let mut seen = VarSet::with_capacity(c.var_count);
            let mut shared = VarSet::with_capacity(c.var_count);
            for &ch in cs {
                for v in seen.intersection(&vars[ch]) {
                    shared.insert(v);
                }
                seen.union_with(&vars[ch]);
            }
            if !shared.is_empty() {
                r.fail(id, format!("shared={shared}"));
            }
        }
    }
    r
}

/// Satisfiability of every node, by a linear pass when the circuit is
/// decomposable and by enumeration (up to `cap` variables) otherwise.
pub fn node_satisfiable(c: &NnfCircuit, cap: usize) -> Result<Vec<bool>> {
    if check_decomposability(c).holds() {
        return Ok(sat_flags_decomposable(c));
    }
    if c.var_count > cap {
        return Err(Error::CapExceeded {
            what: "variable count for satisfiability enumeration",
            size: c.var_count as u64,
            cap: cap as u64,
        });
    }
    let n = c.var_count;
    let mut ever = vec![0u64; c.len()];
    for base in (0..1u64 << n).step_by(64) {
        let mask = block_mask(n, base);
        for (e, v) in ever.iter_mut().zip(c.eval_block(base)) {
            *e |= v & mask;
        }
    }
    Ok(ever.into_iter().map(|e| e != 0).collect())
}

pub(crate) fn sat_flags_decomposable(c: &NnfCircuit) -> Vec<bool> {
    let mut sat = Vec::with_capacity(c.len());
    for node in c.nodes() {
        let s = match node {
            NnfNode::Lit(_) => true,
            NnfNode::And(cs) => cs.iter().all(|&ch| sat[ch]),
            NnfNode::Or { children, .. } => children.iter().any(|&ch| sat[ch]),
        };
        sat.push(s);
    }
    sat
}

/// Every Or node's children mention the same variables. With `exclude_unsat`,
/// unsatisfiable children are ignored.
pub fn check_smoothness(c: &NnfCircuit, exclude_unsat: bool) -> Result<PropertyReport> {
    let sat = if exclude_unsat {
        Some(node_satisfiable(c, DEFAULT_ORACLE_CAP)?)
    } else {
        None
    };
    let vars = c.node_vars();
    let mut r = PropertyReport::new("smooth", Method::Structural);
    for (id, node) in c.nodes().iter().enumerate() {
        if let NnfNode::Or { children, .. } = node {
            let live: Vec<NodeId> = children
                .iter()
                .copied()
                .filter(|&ch| sat.as_ref().is_none_or(|s| s[ch]))
                .collect();
            if let Some((&first, rest)) = live.split_first() {
                if let Some(&bad) = rest.iter().find(|&&ch| !vars[ch].same_vars(&vars[first])) {
                    r.fail(
                        id,
                        format!(
                            "child {first} mentions {} but child {bad} mentions {}",
                            vars[first], vars[bad]
                        ),
                    );
                }
            }
        }
    }
    Ok(r)
}

fn branch_lits(c: &NnfCircuit, id: NodeId) -> Vec<Literal> {
    match c.node(id) {
        NnfNode::Lit(l) => vec![*l],
        NnfNode::And(cs) => cs
            .iter()
            .filter_map(|&ch| match c.node(ch) {
                NnfNode::Lit(l) => Some(*l),
                _ => None,
            })
            .collect(),
        NnfNode::Or { .. } => Vec::new(),
    }
}

/// Whether a two-child Or splits on `v`: one child carries `v`, the other `¬v`.
fn splits_on(c: &NnfCircuit, children: &[NodeId], v: Var) -> bool {
    let [a, b] = children else { return false };
    let (la, lb) = (branch_lits(c, *a), branch_lits(c, *b));
    [true, false]
        .into_iter()
        .any(|p| la.contains(&v.lit(p)) && lb.contains(&v.lit(!p)))
}

/// Decision variable of an Or node of shape `(X ∧ α) ∨ (¬X ∧ β)`, if any.
fn decision_of(c: &NnfCircuit, children: &[NodeId]) -> Option<Var> {
    let [a, b] = children else { return None };
    let lb = branch_lits(c, *b);
    branch_lits(c, *a)
        .into_iter()
        .find(|l| lb.contains(&l.negate()))
        .map(|l| l.var())
}

/// Decision variable of every non-empty Or node, or the first violating node.
pub fn decision_vars(c: &NnfCircuit) -> std::result::Result<Vec<Option<Var>>, NodeId> {
    let r = check_decision(c);
    match r.witnesses.first() {
        Some(w) => Err(w.node),
        None => {
            let mut out = vec![None; c.len()];
            for (id, node) in c.nodes().iter().enumerate() {
                if let NnfNode::Or { children, decision } = node {
                    if !children.is_empty() {
                        out[id] = decision.or_else(|| decision_of(c, children));
                    }
                }
            }
            Ok(out)
        }
    }
}

/// Every non-empty Or node has the form `(X ∧ α) ∨ (¬X ∧ β)`.
pub fn check_decision(c: &NnfCircuit) -> PropertyReport {
    let mut r = PropertyReport::new("decision", Method::Structural);
    for (id, node) in c.nodes().iter().enumerate() {
        let NnfNode::Or { decision, children } = node else {
            continue;
        };
        if children.is_empty() {
            continue;
        }
        let found = match decision {
            Some(d) => splits_on(c, children, *d).then_some(*d),
            None => decision_of(c, children),
        };
        match found {
            Some(x) => r.annotations.push((id, format!("decision={x}"))),
            None => r.fail(id, "or-gate is not a decision on one variable"),
        }
    }
    r
}

/// No Or deciding a variable in `x` lies below an Or deciding a variable
/// outside `x`.
pub fn check_x_constrained(c: &NnfCircuit, x: &[Var]) -> Result<bool> {
    let dec = decision_vars(c).map_err(|node| {
        Error::precondition(format!("circuit lacks the decision property (node {node})"))
    })?;
    let xs = VarSet::from_vars(c.var_count, x.iter().copied());
    // below_x[n]: some X-decision at or below n.
    let mut below_x = vec![false; c.len()];
    let reachable = c.reachable();
    for (id, node) in c.nodes().iter().enumerate() {
        let kids = node.children();
        let is_x = dec[id].is_some_and(|v| xs.contains(v));
        let child_x = kids.iter().any(|&ch| below_x[ch]);
        if let Some(v) = dec[id] {
            if !xs.contains(v) && child_x && reachable[id] {
                return Ok(false);
            }
        }
        below_x[id] = is_x || child_x;
    }
    Ok(true)
}

/// Every And is binary and conforms to a vtree node: the first child's
/// variables lie in its left subtree and the second's in its right subtree.
pub fn check_structured(c: &NnfCircuit, v: &Vtree) -> PropertyReport {
    let vars = c.node_vars();
    let mut r = PropertyReport::new("structured", Method::Structural);
    let out_of_tree: Vec<Var> = vars[c.root()]
        .iter()
        .filter(|&x| v.leaf_of(x).is_none())
        .collect();
    if !out_of_tree.is_empty() {
        r.fail(c.root(), format!("variables {out_of_tree:?} are not in the vtree"));
        return r;
    }
    for (id, node) in c.nodes().iter().enumerate() {
        let NnfNode::And(cs) = node else { continue };
        if cs.is_empty() {
            continue;
        }
        let [a, b] = cs.as_slice() else {
            r.fail(id, format!("and-gate has {} inputs", cs.len()));
            continue;
        };
        match conforming_node(v, &vars[*a], &vars[*b]) {
            Some(u) => r
                .annotations
                .push((id, format!("vtree={}", v.external_id(u)))),
            None => r.fail(
                id,
                format!("no vtree node separates {} from {}", vars[*a], vars[*b]),
            ),
        }
    }
    r
}

fn conforming_node(v: &Vtree, left: &VarSet, right: &VarSet) -> Option<VtreeId> {
    let ll = v.lca_of_vars(left.iter());
    let rl = v.lca_of_vars(right.iter());
    let start = match (ll, rl) {
        (Some(a), Some(b)) => v.lca(a, b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => return (0..v.len()).find(|&u| !v.is_leaf(u)),
    };
    let mut u = Some(start);
    while let Some(w) = u {
        let left_ok = ll.map_or(!v.is_leaf(w), |a| v.in_left(w, a));
        let right_ok = rl.map_or(!v.is_leaf(w), |b| v.in_right(w, b));
        if left_ok && right_ok {
            return Some(w);
        }
        // Once both sides are non-empty, only the lca can separate them.
        if ll.is_some() && rl.is_some() {
            return None;
        }
        u = v.parent(w);
    }
    None
}

/// Every Or has at most one high input under every complete assignment,
/// checked by enumerating all `2^n` assignments.
pub fn check_determinism_exhaustive(c: &NnfCircuit, cap: usize) -> Result<PropertyReport> {
    let n = c.var_count;
    if n > cap {
        return Err(Error::CapExceeded {
            what: "variable count for exhaustive determinism check",
            size: n as u64,
            cap: cap as u64,
        });
    }
    let mut r = PropertyReport::new("deterministic", Method::Exhaustive);
    let mut reported = vec![false; c.len()];
    for base in (0..1u64 << n).step_by(64) {
        let mask = block_mask(n, base);
        let vals = c.eval_block(base);
        for (id, node) in c.nodes().iter().enumerate() {
            if reported[id] {
                continue;
            }
            if let NnfNode::Or { children, .. } = node {
                let mut acc = 0u64;
                let mut dup = 0u64;
                for &ch in children {
                    dup |= acc & vals[ch];
                    acc |= vals[ch];
                }
                dup &= mask;
                if dup != 0 {
                    let j = dup.trailing_zeros() as u64;
                    let a = Assignment::from_index(n, base + j);
                    r.fail(id, format!("assignment={}", a.to_bits(n)));
                    reported[id] = true;
                }
            }
        }
    }
    Ok(r)
}

/// Establishes that a circuit may be treated as deterministic: structurally
/// through the decision property, else by enumeration within `cap`, else only
/// on explicit acknowledgement.
pub fn certify_determinism(c: &NnfCircuit, cap: usize, assume: bool) -> Result<Method> {
    if check_decision(c).holds() {
        return Ok(Method::Structural);
    }
    if assume {
        return Ok(Method::Assumed);
    }
    if c.var_count <= cap {
        let r = check_determinism_exhaustive(c, cap)?;
        if r.holds() {
            return Ok(Method::Exhaustive);
        }
        return Err(Error::precondition(format!(
            "circuit is not deterministic (node {})",
            r.witnesses[0].node
        )));
    }
    Err(Error::precondition(
        "determinism cannot be certified; pass the assume-deterministic acknowledgement",
    ))
}

/// Quadratic smoothing: each Or child missing some of its siblings' variables
/// is conjoined with shared `X ∨ ¬X` gadgets for the missing variables.
pub fn smooth(c: &NnfCircuit) -> NnfCircuit {
    let vars = c.node_vars();
    let mut b = NnfBuilder::new(c.var_count);
    let mut map = Vec::with_capacity(c.len());
    let mut gadgets: HashMap<Var, NodeId> = HashMap::new();
    for (id, node) in c.nodes().iter().enumerate() {
        let new = match node {
            NnfNode::Lit(l) => b.lit(*l),
            NnfNode::And(cs) => {
                let kids = cs.iter().map(|&ch| map[ch]).collect();
                b.and(kids)
            }
            NnfNode::Or { decision, children } => {
                let mut all = VarSet::with_capacity(c.var_count);
                for &ch in children {
                    all.union_with(&vars[ch]);
                }
                let mut kids = Vec::with_capacity(children.len());
                for &ch in children {
                    let missing = all.difference(&vars[ch]);
                    if missing.is_empty() {
                        kids.push(map[ch]);
                        continue;
                    }
                    let mut parts: Vec<NodeId> = match b.node(map[ch]) {
                        NnfNode::And(inner) => inner.clone(),
                        _ => vec![map[ch]],
                    };
                    for v in missing {
                        let g = *gadgets.entry(v).or_insert_with(|| {
                            let p = b.lit(v.pos_lit());
                            let n = b.lit(v.neg_lit());
                            b.or(Some(v), vec![p, n])
                        });
                        parts.push(g);
                    }
                    kids.push(b.and(parts));
                }
                b.or(*decision, kids)
            }
        };
        debug_assert_eq!(map.len(), id);
        map.push(new);
    }
    b.finish(map[c.root()]).with_names(c.names.clone())
}

/// Restriction of `c` to literal `l`, with constants propagated.
pub fn condition(c: &NnfCircuit, l: Literal) -> NnfCircuit {
    condition_all(c, &Assignment::from_literals([l]).expect("single literal"))
}

/// Restriction of `c` to every literal of `e`.
pub fn condition_all(c: &NnfCircuit, e: &Assignment) -> NnfCircuit {
    let mut b = NnfBuilder::new(c.var_count);
    let mut map: Vec<NodeId> = Vec::with_capacity(c.len());
    for node in c.nodes() {
        let new = match node {
            NnfNode::Lit(l) => match e.value_of(*l) {
                Some(true) => b.tru(),
                Some(false) => b.fals(),
                None => b.lit(*l),
            },
            NnfNode::And(cs) => {
                let mut kids = Vec::new();
                let mut dead = false;
                for &ch in cs {
                    let m = map[ch];
                    if b.node(m).is_false() {
                        dead = true;
                        break;
                    }
                    if !b.node(m).is_true() {
                        kids.push(m);
                    }
                }
                if dead {
                    b.fals()
                } else if kids.len() == 1 {
                    kids[0]
                } else {
                    b.and(kids)
                }
            }
            NnfNode::Or { decision, children } => {
                let mut kids = Vec::new();
                let mut live = false;
                for &ch in children {
                    let m = map[ch];
                    if b.node(m).is_true() {
                        live = true;
                        break;
                    }
                    if !b.node(m).is_false() {
                        kids.push(m);
                    }
                }
                if live {
                    b.tru()
                } else if kids.len() == 1 {
                    kids[0]
                } else {
                    let d = decision.filter(|d| e.get(*d).is_none());
                    b.or(d, kids)
                }
            }
        };
        map.push(new);
    }
    b.finish(map[c.root()]).with_names(c.names.clone())
}
