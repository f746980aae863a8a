//! NNF circuits stored as a topologically ordered node arena.
//!
//! Constants follow the c2d convention: `true` is an `And` with no children
//! and `false` is an `Or` with no children.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::cnf::names_directive;
use crate::error::{Error, Result};
use crate::lit::{Assignment, Literal, Var, VarSet};

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NnfNode {
    Lit(Literal),
    And(Vec<NodeId>),
    Or {
        decision: Option<Var>,
        children: Vec<NodeId>,
    },
}

impl NnfNode {
    pub const TRUE: NnfNode = NnfNode::And(Vec::new());
    pub const FALSE: NnfNode = NnfNode::Or {
        decision: None,
        children: Vec::new(),
    };

    pub fn children(&self) -> &[NodeId] {
        match self {
            NnfNode::Lit(_) => &[],
            NnfNode::And(c) => c,
            NnfNode::Or { children, .. } => children,
        }
    }

    pub fn is_true(&self) -> bool {
        matches!(self, NnfNode::And(c) if c.is_empty())
    }

    pub fn is_false(&self) -> bool {
        matches!(self, NnfNode::Or { children, .. } if children.is_empty())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NnfCircuit {
    pub var_count: usize,
    nodes: Vec<NnfNode>,
    root: NodeId,
    /// Optional display names, position `i` naming variable `i+1`.
    pub names: Option<Vec<String>>,
}

impl NnfCircuit {
    /// Validates topological order and variable ranges.
    pub fn new(var_count: usize, nodes: Vec<NnfNode>, root: NodeId) -> Result<NnfCircuit> {
        if root >= nodes.len() {
            return Err(Error::Invalid(format!("root {root} out of range")));
        }
        for (id, node) in nodes.iter().enumerate() {
            if let Some(&c) = node.children().iter().find(|&&c| c >= id) {
                return Err(Error::Invalid(format!(
                    "node {id} references node {c}, which does not precede it"
                )));
            }
            let var = match node {
                NnfNode::Lit(l) => Some(l.var()),
                NnfNode::Or { decision, .. } => *decision,
                NnfNode::And(_) => None,
            };
            if let Some(v) = var {
                if v.index() as usize > var_count {
                    return Err(Error::Invalid(format!(
                        "node {id} mentions variable {v} beyond {var_count}"
                    )));
                }
            }
        }
        Ok(NnfCircuit {
            var_count,
            nodes,
            root,
            names: None,
        })
    }

    pub fn constant(var_count: usize, value: bool) -> NnfCircuit {
        let node = if value { NnfNode::TRUE } else { NnfNode::FALSE };
        NnfCircuit {
            var_count,
            nodes: vec![node],
            root: 0,
            names: None,
        }
    }

    pub fn with_names(mut self, names: Option<Vec<String>>) -> NnfCircuit {
        self.names = names;
        self
    }

    pub fn nodes(&self) -> &[NnfNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &NnfNode {
        &self.nodes[id]
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Circuit size measured in edges.
    pub fn edge_count(&self) -> usize {
        self.nodes.iter().map(|n| n.children().len()).sum()
    }

    /// Variables mentioned below each node.
    pub fn node_vars(&self) -> Vec<VarSet> {
        let mut sets: Vec<VarSet> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let set = match node {
                NnfNode::Lit(l) => VarSet::singleton(self.var_count, l.var()),
                _ => {
                    let mut s = VarSet::with_capacity(self.var_count);
                    for &c in node.children() {
                        s.union_with(&sets[c]);
                    }
                    s
                }
            };
            sets.push(set);
        }
        sets
    }

    /// Nodes reachable from the root.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        seen[self.root] = true;
        for id in (0..=self.root).rev() {
            if seen[id] {
                for &c in self.nodes[id].children() {
                    seen[c] = true;
                }
            }
        }
        seen
    }

    /// Drops unreachable nodes and renumbers so that the root is last.
    pub fn compact(&self) -> NnfCircuit {
        let seen = self.reachable();
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (id, node) in self.nodes.iter().enumerate() {
            if !seen[id] {
                continue;
            }
            let fix = |cs: &[NodeId]| cs.iter().map(|&c| remap[c]).collect::<Vec<_>>();
            let n = match node {
                NnfNode::Lit(l) => NnfNode::Lit(*l),
                NnfNode::And(cs) => NnfNode::And(fix(cs)),
                NnfNode::Or { decision, children } => NnfNode::Or {
                    decision: *decision,
                    children: fix(children),
                },
            };
            remap[id] = nodes.len();
            nodes.push(n);
        }
        NnfCircuit {
            var_count: self.var_count,
            root: remap[self.root],
            nodes,
            names: self.names.clone(),
        }
    }

    /// Value of every node under a complete assignment.
    pub fn eval_nodes(&self, a: &Assignment) -> Result<Vec<bool>> {
        if !a.is_complete_for(self.var_count) {
            return Err(Error::precondition("evaluation needs a complete assignment"));
        }
        let mut vals = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match node {
                NnfNode::Lit(l) => a.value_of(*l) == Some(true),
                NnfNode::And(cs) => cs.iter().all(|&c| vals[c]),
                NnfNode::Or { children, .. } => children.iter().any(|&c| vals[c]),
            };
            vals.push(v);
        }
        Ok(vals)
    }

    /// Output of the circuit under a complete assignment.
    pub fn evaluate(&self, a: &Assignment) -> Result<bool> {
        Ok(self.eval_nodes(a)?[self.root])
    }

    /// Evaluates every node on 64 consecutive assignments at once.
    ///
    /// Assignment `base + j` (variable 1 most significant) is bit `j` of each
    /// returned word. Bits beyond `2^var_count` are meaningless; mask with
    /// [`block_mask`].
    pub fn eval_block(&self, base: u64) -> Vec<u64> {
        let n = self.var_count;
        let mut vals: Vec<u64> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match node {
                NnfNode::Lit(l) => {
                    let m = var_block_bits(n, l.var().pos(), base);
                    if l.is_positive() {
                        m
                    } else {
                        !m
                    }
                }
                NnfNode::And(cs) => cs.iter().fold(!0u64, |acc, &c| acc & vals[c]),
                NnfNode::Or { children, .. } => children.iter().fold(0u64, |acc, &c| acc | vals[c]),
            };
            vals.push(v);
        }
        vals
    }

    pub fn to_text(&self) -> String {
        if self.root + 1 != self.nodes.len() {
            return self.compact().to_text();
        }
        let mut out = String::new();
        if let Some(names) = &self.names {
            let _ = writeln!(out, "c names {}", names.join(" "));
        }
        let _ = writeln!(
            out,
            "nnf {} {} {}",
            self.nodes.len(),
            self.edge_count(),
            self.var_count
        );
        for node in &self.nodes {
            match node {
                NnfNode::Lit(l) => {
                    let _ = write!(out, "L {}", l.to_dimacs());
                }
                NnfNode::And(cs) => {
                    let _ = write!(out, "A {}", cs.len());
                    for c in cs {
                        let _ = write!(out, " {c}");
                    }
                }
                NnfNode::Or { decision, children } => {
                    let j = decision.map_or(0, |v| v.index());
                    let _ = write!(out, "O {j} {}", children.len());
                    for c in children {
                        let _ = write!(out, " {c}");
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Bits of variable `pos` for the 64 assignments starting at `base`.
pub fn var_block_bits(n: usize, pos: usize, base: u64) -> u64 {
    let shift = n - 1 - pos;
    if shift < 6 {
        // Pattern repeats within the word.
        let mut m = 0u64;
        for j in 0..64u64 {
            if ((base + j) >> shift) & 1 == 1 {
                m |= 1 << j;
            }
        }
        m
    } else if base.checked_shr(shift as u32).unwrap_or(0) & 1 == 1 {
        !0
    } else {
        0
    }
}

/// Mask of meaningful bits for block `base` over `n` variables.
pub fn block_mask(n: usize, base: u64) -> u64 {
    let total: u64 = 1u64 << n;
    let left = total - base;
    if left >= 64 {
        !0
    } else {
        (1u64 << left) - 1
    }
}

/// Hash-consing builder; node identifiers are handed out in topological order.
#[derive(Debug, Clone)]
pub struct NnfBuilder {
    var_count: usize,
    nodes: Vec<NnfNode>,
    unique: HashMap<NnfNode, NodeId>,
}

impl NnfBuilder {
    pub fn new(var_count: usize) -> NnfBuilder {
        NnfBuilder {
            var_count,
            nodes: Vec::new(),
            unique: HashMap::new(),
        }
    }

    pub fn add(&mut self, node: NnfNode) -> NodeId {
        if let Some(&id) = self.unique.get(&node) {
            return id;
        }
        debug_assert!(node.children().iter().all(|&c| c < self.nodes.len()));
        let id = self.nodes.len();
        self.unique.insert(node.clone(), id);
        self.nodes.push(node);
        id
    }

    pub fn lit(&mut self, l: Literal) -> NodeId {
        self.add(NnfNode::Lit(l))
    }

    pub fn tru(&mut self) -> NodeId {
        self.add(NnfNode::TRUE)
    }

    pub fn fals(&mut self) -> NodeId {
        self.add(NnfNode::FALSE)
    }

    pub fn and(&mut self, children: Vec<NodeId>) -> NodeId {
        self.add(NnfNode::And(children))
    }

    pub fn or(&mut self, decision: Option<Var>, children: Vec<NodeId>) -> NodeId {
        self.add(NnfNode::Or { decision, children })
    }

    pub fn node(&self, id: NodeId) -> &NnfNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Seals the builder; unreachable nodes are dropped and the root moves last.
    pub fn finish(self, root: NodeId) -> NnfCircuit {
        NnfCircuit {
            var_count: self.var_count,
            nodes: self.nodes,
            root,
            names: None,
        }
        .compact()
    }
}

fn parse_usize(tok: Option<&str>, lineno: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::parse(lineno, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(lineno, format!("bad {what} `{tok}`")))
}

/// Parses the c2d NNF format: header `nnf <nodes> <edges> <vars>` followed by
/// `L lit`, `A c ids...` and `O j c ids...` lines. The root is the last node.
pub fn parse_nnf(text: &str) -> Result<NnfCircuit> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut names = None;
    let mut nodes: Vec<NnfNode> = Vec::new();
    let mut edges = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('c') {
            if let Some(n) = names_directive(line) {
                names = Some(n);
            }
            continue;
        }
        let mut toks = line.split_whitespace();
        let op = toks.next().unwrap_or_default();
        if op == "nnf" {
            if header.is_some() {
                return Err(Error::parse(lineno, "duplicate header"));
            }
            let n = parse_usize(toks.next(), lineno, "node count")?;
            let e = parse_usize(toks.next(), lineno, "edge count")?;
            let v = parse_usize(toks.next(), lineno, "variable count")?;
            if toks.next().is_some() {
                return Err(Error::parse(lineno, "trailing tokens in header"));
            }
            header = Some((n, e, v));
            continue;
        }
        let (node_count, _, var_count) =
            header.ok_or_else(|| Error::parse(lineno, "node before `nnf` header"))?;
        if nodes.len() == node_count {
            return Err(Error::parse(lineno, "more nodes than declared in header"));
        }
        let id = nodes.len();
        let read_children = |toks: &mut std::str::SplitWhitespace, count: usize| -> Result<Vec<NodeId>> {
            let mut cs = Vec::with_capacity(count.min(1 << 16));
            for _ in 0..count {
                let c = parse_usize(toks.next(), lineno, "child id")?;
                if c >= id {
                    return Err(Error::parse(lineno, format!("forward reference to node {c}")));
                }
                cs.push(c);
            }
            Ok(cs)
        };
        let node = match op {
            "L" => {
                let tok = toks.next().ok_or_else(|| Error::parse(lineno, "missing literal"))?;
                let code: i64 = tok
                    .parse()
                    .map_err(|_| Error::parse(lineno, format!("bad literal `{tok}`")))?;
                let l = Literal::from_dimacs(code)
                    .filter(|l| l.var().index() as usize <= var_count)
                    .ok_or_else(|| Error::parse(lineno, format!("literal {code} out of range")))?;
                NnfNode::Lit(l)
            }
            "A" => {
                let c = parse_usize(toks.next(), lineno, "child count")?;
                NnfNode::And(read_children(&mut toks, c)?)
            }
            "O" => {
                let j = parse_usize(toks.next(), lineno, "decision variable")?;
                if j > var_count {
                    return Err(Error::parse(lineno, format!("decision variable {j} out of range")));
                }
                let c = parse_usize(toks.next(), lineno, "child count")?;
                NnfNode::Or {
                    decision: Var::new(j as u32),
                    children: read_children(&mut toks, c)?,
                }
            }
            other => return Err(Error::parse(lineno, format!("bad opcode `{other}`"))),
        };
        if toks.next().is_some() {
            return Err(Error::parse(lineno, "trailing tokens"));
        }
        edges += node.children().len();
        nodes.push(node);
    }

    let (node_count, edge_count, var_count) =
        header.ok_or_else(|| Error::parse(0, "missing `nnf` header"))?;
    if nodes.len() != node_count {
        return Err(Error::parse(
            0,
            format!("header declares {node_count} nodes, found {}", nodes.len()),
        ));
    }
    if edges != edge_count {
        return Err(Error::parse(
            0,
            format!("header declares {edge_count} edges, found {edges}"),
        ));
    }
    if nodes.is_empty() {
        return Err(Error::parse(0, "circuit has no nodes"));
    }
    if let Some(n) = &names {
        if n.len() != var_count {
            return Err(Error::parse(0, "`c names` must name every variable"));
        }
    }
    let root = nodes.len() - 1;
    Ok(NnfCircuit {
        var_count,
        nodes,
        root,
        names,
    })
}
