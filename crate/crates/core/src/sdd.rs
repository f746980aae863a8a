//! Sentential decision diagrams under a fixed vtree.
//!
//! Nodes live in a manager arena and are kept compressed (no two elements
//! share a sub) and trimmed (no `{(⊤, s)}` or `{(p, ⊤), (¬p, ⊥)}` nodes), so
//! equal functions share one identity.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::cnf::CnfFormula;
use crate::error::{Error, Result};
use crate::lit::{Assignment, Literal, Var};
use crate::nnf::{NnfBuilder, NnfCircuit, NodeId};
use crate::vtree::{Vtree, VtreeId};

pub type SddId = usize;

pub const FALSE: SddId = 0;
pub const TRUE: SddId = 1;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SddNode {
    False,
    True,
    Lit(Literal),
    /// Elements sorted by `(prime, sub)`.
    Decision { vnode: VtreeId, elements: Vec<(SddId, SddId)> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    And,
    Or,
}

#[derive(Clone, Debug)]
pub struct SddManager {
    vtree: Vtree,
    nodes: Vec<SddNode>,
    unique: HashMap<SddNode, SddId>,
    apply_cache: HashMap<(Op, SddId, SddId), SddId>,
    neg_cache: HashMap<SddId, SddId>,
}

impl SddManager {
    pub fn new(vtree: Vtree) -> SddManager {
        let mut m = SddManager {
            vtree,
            nodes: Vec::new(),
            unique: HashMap::new(),
            apply_cache: HashMap::new(),
            neg_cache: HashMap::new(),
        };
        let f = m.intern(SddNode::False);
        let t = m.intern(SddNode::True);
        debug_assert_eq!((f, t), (FALSE, TRUE));
        m
    }

    pub fn vtree(&self) -> &Vtree {
        &self.vtree
    }

    pub fn var_count(&self) -> usize {
        self.vtree.var_count()
    }

    pub fn node(&self, id: SddId) -> &SddNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn intern(&mut self, node: SddNode) -> SddId {
        if let Some(&id) = self.unique.get(&node) {
            return id;
        }
        let id = self.nodes.len();
        self.unique.insert(node.clone(), id);
        self.nodes.push(node);
        id
    }

    pub fn constant(&mut self, value: bool) -> SddId {
        if value {
            TRUE
        } else {
            FALSE
        }
    }

    pub fn literal(&mut self, l: Literal) -> Result<SddId> {
        if self.vtree.leaf_of(l.var()).is_none() {
            return Err(Error::Invalid(format!("variable {} is not in the vtree", l.var())));
        }
        Ok(self.intern(SddNode::Lit(l)))
    }

    /// Vtree node a node is normalized for; `None` for constants.
    pub fn vnode(&self, id: SddId) -> Option<VtreeId> {
        match &self.nodes[id] {
            SddNode::False | SddNode::True => None,
            SddNode::Lit(l) => self.vtree.leaf_of(l.var()),
            SddNode::Decision { vnode, .. } => Some(*vnode),
        }
    }

    pub fn elements(&self, id: SddId) -> &[(SddId, SddId)] {
        match &self.nodes[id] {
            SddNode::Decision { elements, .. } => elements,
            _ => &[],
        }
    }

    pub fn negate(&mut self, a: SddId) -> SddId {
        if let Some(&r) = self.neg_cache.get(&a) {
            return r;
        }
        let r = match self.nodes[a].clone() {
            SddNode::False => TRUE,
            SddNode::True => FALSE,
            SddNode::Lit(l) => self.intern(SddNode::Lit(!l)),
            SddNode::Decision { vnode, elements } => {
                let mut els: Vec<(SddId, SddId)> =
                    elements.iter().map(|&(p, s)| (p, self.negate(s))).collect();
                els.sort_unstable();
                self.intern(SddNode::Decision { vnode, elements: els })
            }
        };
        self.neg_cache.insert(a, r);
        self.neg_cache.insert(r, a);
        r
    }

    pub fn conjoin(&mut self, a: SddId, b: SddId) -> SddId {
        self.apply(a, b, Op::And)
    }

    pub fn disjoin(&mut self, a: SddId, b: SddId) -> SddId {
        self.apply(a, b, Op::Or)
    }

    pub fn apply(&mut self, a: SddId, b: SddId, op: Op) -> SddId {
        let (zero, one) = match op {
            Op::And => (FALSE, TRUE),
            Op::Or => (TRUE, FALSE),
        };
        if a == zero || b == zero {
            return zero;
        }
        if a == one {
            return b;
        }
        if b == one || a == b {
            return a;
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        if let Some(&r) = self.apply_cache.get(&(op, a, b)) {
            return r;
        }
        let va = self.vnode(a).expect("non-constant");
        let vb = self.vnode(b).expect("non-constant");
        let w = self.vtree.lca(va, vb);
        let r = if self.vtree.is_leaf(w) {
            // Two literals of the same variable that differ: x and ¬x.
            zero
        } else {
            let ea = self.elements_at(a, w);
            let eb = self.elements_at(b, w);
            let mut out = Vec::with_capacity(ea.len() * eb.len());
            for &(p1, s1) in &ea {
                for &(p2, s2) in &eb {
                    let p = self.apply(p1, p2, Op::And);
                    if p == FALSE {
                        continue;
                    }
                    let s = self.apply(s1, s2, op);
                    out.push((p, s));
                }
            }
            self.decision(w, out)
        };
        self.apply_cache.insert((op, a, b), r);
        r
    }

    /// Elements of `a` viewed as a decision at vtree node `w`.
    fn elements_at(&mut self, a: SddId, w: VtreeId) -> Vec<(SddId, SddId)> {
        let v = self.vnode(a).expect("non-constant");
        if v == w {
            return self.elements(a).to_vec();
        }
        if self.vtree.in_left(w, v) {
            let na = self.negate(a);
            vec![(a, TRUE), (na, FALSE)]
        } else {
            vec![(TRUE, a)]
        }
    }

    /// Compresses and trims a partition at `w`, returning the unique node.
    fn decision(&mut self, w: VtreeId, elements: Vec<(SddId, SddId)>) -> SddId {
        let mut by_sub: Vec<(SddId, SddId)> = Vec::with_capacity(elements.len());
        for (p, s) in elements {
            match by_sub.iter_mut().find(|e| e.1 == s) {
                Some(e) => e.0 = self.apply(e.0, p, Op::Or),
                None => by_sub.push((p, s)),
            }
        }
        match by_sub.as_slice() {
            [(_, s)] => return *s,
            [(p, TRUE), (_, FALSE)] | [(_, FALSE), (p, TRUE)] => return *p,
            _ => {}
        }
        by_sub.sort_unstable();
        self.intern(SddNode::Decision {
            vnode: w,
            elements: by_sub,
        })
    }

    /// Disjunction of the clause literals, conjoined over all clauses.
    pub fn compile_cnf(&mut self, f: &CnfFormula) -> Result<SddId> {
        let mut acc = TRUE;
        for clause in &f.clauses {
            let mut c = FALSE;
            for &l in clause {
                let x = self.literal(l)?;
                c = self.disjoin(c, x);
            }
            acc = self.conjoin(acc, c);
            if acc == FALSE {
                break;
            }
        }
        Ok(acc)
    }

    pub fn evaluate(&self, root: SddId, a: &Assignment) -> bool {
        let mut memo: HashMap<SddId, bool> = HashMap::new();
        self.eval_rec(root, a, &mut memo)
    }

    fn eval_rec(&self, id: SddId, a: &Assignment, memo: &mut HashMap<SddId, bool>) -> bool {
        if let Some(&v) = memo.get(&id) {
            return v;
        }
        let v = match &self.nodes[id] {
            SddNode::False => false,
            SddNode::True => true,
            SddNode::Lit(l) => a.value_of(*l) == Some(true),
            SddNode::Decision { elements, .. } => elements
                .iter()
                .find(|&&(p, _)| self.eval_rec(p, a, memo))
                .is_some_and(|&(_, s)| self.eval_rec(s, a, memo)),
        };
        memo.insert(id, v);
        v
    }

    /// Nodes reachable from `root`, children before parents.
    pub fn reachable(&self, root: SddId) -> Vec<SddId> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(id) = stack.pop() {
            for &(p, s) in self.elements(id) {
                for c in [p, s] {
                    if !seen[c] {
                        seen[c] = true;
                        stack.push(c);
                    }
                }
            }
        }
        // Children are always created before their parents.
        (0..self.nodes.len()).filter(|&i| seen[i]).collect()
    }

    /// Expands decisions into `(p1 ∧ s1) ∨ … ∨ (pm ∧ sm)` gates.
    pub fn to_nnf(&self, root: SddId) -> NnfCircuit {
        let mut b = NnfBuilder::new(self.var_count());
        let mut map: HashMap<SddId, NodeId> = HashMap::new();
        for id in self.reachable(root) {
            let n = match &self.nodes[id] {
                SddNode::False => b.fals(),
                SddNode::True => b.tru(),
                SddNode::Lit(l) => b.lit(*l),
                SddNode::Decision { vnode, elements } => {
                    let kids: Vec<NodeId> = elements
                        .iter()
                        .map(|(p, s)| b.and(vec![map[p], map[s]]))
                        .collect();
                    let decision = self
                        .vtree
                        .left(*vnode)
                        .and_then(|l| self.vtree.leaf_var(l))
                        .filter(|_| elements.len() == 2);
                    b.or(decision, kids)
                }
            };
            map.insert(id, n);
        }
        b.finish(map[&root])
    }

    /// Node in the diagram as an OBDD; needs a right-linear vtree.
    pub fn to_obdd(&self, root: SddId) -> Result<Obdd> {
        if !self.vtree.is_right_linear() {
            return Err(Error::precondition("OBDD export needs a right-linear vtree"));
        }
        let mut nodes = Vec::new();
        let mut map: HashMap<SddId, ObddRef> = HashMap::new();
        for id in self.reachable(root) {
            let r = match &self.nodes[id] {
                SddNode::False => ObddRef::False,
                SddNode::True => ObddRef::True,
                SddNode::Lit(l) => {
                    let (low, high) = if l.is_positive() {
                        (ObddRef::False, ObddRef::True)
                    } else {
                        (ObddRef::True, ObddRef::False)
                    };
                    nodes.push(ObddNode { var: l.var(), low, high });
                    ObddRef::Node(nodes.len() - 1)
                }
                SddNode::Decision { elements, .. } => {
                    let mut high = None;
                    let mut low = None;
                    for &(p, s) in elements {
                        match &self.nodes[p] {
                            SddNode::Lit(l) if l.is_positive() => high = Some((l.var(), map[&s])),
                            SddNode::Lit(l) => low = Some((l.var(), map[&s])),
                            _ => {}
                        }
                    }
                    match (high, low, elements.len()) {
                        (Some((x, h)), Some((y, lo)), 2) if x == y => {
                            nodes.push(ObddNode { var: x, low: lo, high: h });
                            ObddRef::Node(nodes.len() - 1)
                        }
                        _ => {
                            return Err(Error::Invalid(format!(
                                "decision node {id} does not branch on a literal pair"
                            )))
                        }
                    }
                }
            };
            map.insert(id, r);
        }
        Ok(Obdd {
            var_count: self.var_count(),
            nodes,
            root: map[&root],
        })
    }

    /// SDD text: `sdd N`, then `F id`, `T id`, `L id vtree lit` and
    /// `D id vtree m p1 s1 … pm sm` lines in topological order; root last.
    pub fn to_text(&self, root: SddId) -> String {
        let order = self.reachable(root);
        let line_of: HashMap<SddId, usize> = order.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let mut out = String::new();
        let _ = writeln!(out, "sdd {}", order.len());
        for (i, &id) in order.iter().enumerate() {
            match &self.nodes[id] {
                SddNode::False => {
                    let _ = writeln!(out, "F {i}");
                }
                SddNode::True => {
                    let _ = writeln!(out, "T {i}");
                }
                SddNode::Lit(l) => {
                    let v = self.vtree.leaf_of(l.var()).expect("literal in vtree");
                    let _ = writeln!(out, "L {i} {} {l}", self.vtree.external_id(v));
                }
                SddNode::Decision { vnode, elements } => {
                    let _ = write!(out, "D {i} {} {}", self.vtree.external_id(*vnode), elements.len());
                    for (p, s) in elements {
                        let _ = write!(out, " {} {}", line_of[p], line_of[s]);
                    }
                    out.push('\n');
                }
            }
        }
        out
    }

    /// Builds a decision from explicit elements after checking that they
    /// form a partition normalized for `w`. The result is canonicalized.
    pub fn decision_checked(&mut self, w: VtreeId, elements: &[(SddId, SddId)]) -> Result<SddId> {
        if self.vtree.is_leaf(w) {
            return Err(Error::Invalid("decision node on a vtree leaf".into()));
        }
        if elements.is_empty() {
            return Err(Error::Invalid("decision node without elements".into()));
        }
        for &(p, s) in elements {
            if p == FALSE {
                return Err(Error::Invalid("prime is false".into()));
            }
            if let Some(v) = self.vnode(p) {
                if !self.vtree.in_left(w, v) {
                    return Err(Error::Invalid("prime outside the left subtree".into()));
                }
            }
            if let Some(v) = self.vnode(s) {
                if !self.vtree.in_right(w, v) {
                    return Err(Error::Invalid("sub outside the right subtree".into()));
                }
            }
        }
        let mut cover = FALSE;
        for (i, &(p, _)) in elements.iter().enumerate() {
            for &(q, _) in &elements[i + 1..] {
                if self.conjoin(p, q) != FALSE {
                    return Err(Error::Invalid("primes are not mutually exclusive".into()));
                }
            }
            cover = self.disjoin(cover, p);
        }
        if cover != TRUE {
            return Err(Error::Invalid("primes are not exhaustive".into()));
        }
        Ok(self.decision(w, elements.to_vec()))
    }
}

/// Line numbers of a parsed SDD file mapped to manager nodes.
#[derive(Clone, Debug)]
pub struct ParsedSdd {
    pub root: SddId,
    /// Node id written on each line.
    pub ids: Vec<usize>,
    pub line_nodes: Vec<SddId>,
    /// Declared elements of each `D` line (as manager ids).
    pub declared: Vec<Option<Declared>>,
}

/// A decision as written: its vtree node and elements in line order.
pub type Declared = (VtreeId, Vec<(SddId, SddId)>);

/// Reads SDD text into `m`. With `strict`, every declared decision must
/// already be in canonical form.
pub fn parse_sdd(m: &mut SddManager, text: &str, strict: bool) -> Result<ParsedSdd> {
    let mut count: Option<usize> = None;
    let mut by_id: HashMap<usize, usize> = HashMap::new();
    let mut line_nodes: Vec<SddId> = Vec::new();
    let mut ids = Vec::new();
    let mut declared = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let num = |i: usize, what: &str| -> Result<usize> {
            let t = toks
                .get(i)
                .ok_or_else(|| Error::parse(lineno, format!("missing {what}")))?;
            t.parse().map_err(|_| Error::parse(lineno, format!("bad {what} `{t}`")))
        };
        if toks[0] == "sdd" {
            if count.is_some() || toks.len() != 2 {
                return Err(Error::parse(lineno, "expected a single `sdd N` header"));
            }
            count = Some(num(1, "node count")?);
            continue;
        }
        if count.is_none() {
            return Err(Error::parse(lineno, "node before `sdd` header"));
        }
        let id = num(1, "node id")?;
        if by_id.contains_key(&id) {
            return Err(Error::parse(lineno, format!("duplicate node id {id}")));
        }
        let child = |x: usize| -> Result<SddId> {
            by_id
                .get(&x)
                .map(|&i| line_nodes[i])
                .ok_or_else(|| Error::parse(lineno, format!("node {x} referenced before definition")))
        };
        let vnode_of = |m: &SddManager, ext: usize| -> Result<VtreeId> {
            m.vtree()
                .by_external_id(ext)
                .ok_or_else(|| Error::parse(lineno, format!("unknown vtree node {ext}")))
        };
        let mut decl = None;
        let node = match toks[0] {
            "F" | "T" if toks.len() == 2 => m.constant(toks[0] == "T"),
            "L" if toks.len() == 4 => {
                let v = vnode_of(m, num(2, "vtree node")?)?;
                let code: i64 = toks[3]
                    .parse()
                    .map_err(|_| Error::parse(lineno, format!("bad literal `{}`", toks[3])))?;
                let l = Literal::from_dimacs(code)
                    .ok_or_else(|| Error::parse(lineno, "literal 0"))?;
                if m.vtree().leaf_var(v) != Some(l.var()) {
                    return Err(Error::parse(lineno, "literal does not match its vtree leaf"));
                }
                m.literal(l).map_err(|e| Error::parse(lineno, e.to_string()))?
            }
            "D" => {
                let v = vnode_of(m, num(2, "vtree node")?)?;
                let k = num(3, "element count")?;
                if k.checked_mul(2).and_then(|n| n.checked_add(4)) != Some(toks.len()) {
                    return Err(Error::parse(lineno, "element count disagrees with the line"));
                }
                let mut els = Vec::with_capacity(k);
                for i in 0..k {
                    els.push((child(num(4 + 2 * i, "prime")?)?, child(num(5 + 2 * i, "sub")?)?));
                }
                let id = m
                    .decision_checked(v, &els)
                    .map_err(|e| Error::parse(lineno, e.to_string()))?;
                if strict {
                    let mut sorted = els.clone();
                    sorted.sort_unstable();
                    let canonical = matches!(m.node(id), SddNode::Decision { vnode, elements }
                        if *vnode == v && *elements == sorted);
                    if !canonical {
                        return Err(Error::parse(lineno, "decision is not compressed and trimmed"));
                    }
                }
                decl = Some((v, els));
                id
            }
            other => return Err(Error::parse(lineno, format!("bad line `{other}`"))),
        };
        by_id.insert(id, line_nodes.len());
        ids.push(id);
        line_nodes.push(node);
        declared.push(decl);
    }
    let count = count.ok_or_else(|| Error::parse(0, "missing `sdd` header"))?;
    if line_nodes.len() != count {
        return Err(Error::parse(
            0,
            format!("header declares {count} nodes, found {}", line_nodes.len()),
        ));
    }
    let root = *line_nodes.last().ok_or_else(|| Error::parse(0, "no nodes"))?;
    Ok(ParsedSdd {
        root,
        ids,
        line_nodes,
        declared,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ObddRef {
    False,
    True,
    Node(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ObddNode {
    pub var: Var,
    pub low: ObddRef,
    pub high: ObddRef,
}

/// Ordered BDD with nodes in topological order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obdd {
    pub var_count: usize,
    pub nodes: Vec<ObddNode>,
    pub root: ObddRef,
}

impl Obdd {
    pub fn evaluate(&self, a: &Assignment) -> bool {
        let mut r = self.root;
        loop {
            match r {
                ObddRef::False => return false,
                ObddRef::True => return true,
                ObddRef::Node(i) => {
                    let n = self.nodes[i];
                    r = if a.get(n.var) == Some(true) { n.high } else { n.low };
                }
            }
        }
    }

    /// `obdd N` header, then `N id var low high` with `T`/`F` terminals.
    pub fn to_text(&self) -> String {
        let show = |r: ObddRef| match r {
            ObddRef::False => "F".to_string(),
            ObddRef::True => "T".to_string(),
            ObddRef::Node(i) => i.to_string(),
        };
        let mut out = String::new();
        let _ = writeln!(out, "obdd {}", self.nodes.len());
        for (i, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "N {i} {} {} {}", n.var, show(n.low), show(n.high));
        }
        let _ = writeln!(out, "root {}", show(self.root));
        out
    }

    /// Each node becomes `(X ∧ high) ∨ (¬X ∧ low)` with decision variable X.
    pub fn to_nnf(&self) -> NnfCircuit {
        let mut b = NnfBuilder::new(self.var_count);
        let f = b.fals();
        let t = b.tru();
        let mut map = Vec::with_capacity(self.nodes.len());
        let get = |r: ObddRef, map: &Vec<NodeId>| match r {
            ObddRef::False => f,
            ObddRef::True => t,
            ObddRef::Node(i) => map[i],
        };
        for n in &self.nodes {
            let pl = b.lit(n.var.pos_lit());
            let nl = b.lit(n.var.neg_lit());
            let hi = b.and(vec![pl, get(n.high, &map)]);
            let lo = b.and(vec![nl, get(n.low, &map)]);
            map.push(b.or(Some(n.var), vec![hi, lo]));
        }
        let root = get(self.root, &map);
        b.finish(root)
    }
}
