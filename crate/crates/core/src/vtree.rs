//! Vtrees: full binary trees whose leaves are the variables.
//!
//! Nodes are stored in post-order (children before parents, root last).
//! Every node covers a contiguous interval of leaf positions, which makes
//! containment and ancestor tests constant-time.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lit::{Var, VarSet};

pub type VtreeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VtreeNode {
    Leaf(Var),
    Internal { left: VtreeId, right: VtreeId },
}

/// A parsed or constructed tree shape, used before post-order normalization.
#[derive(Clone, Debug)]
pub enum Shape {
    Leaf(Var),
    Node(Box<Shape>, Box<Shape>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vtree {
    nodes: Vec<VtreeNode>,
    /// External identifier of each node (as read from / written to text).
    ids: Vec<usize>,
    parent: Vec<Option<VtreeId>>,
    /// Half-open interval of in-order leaf positions.
    span: Vec<(u32, u32)>,
    leaf_of_var: Vec<VtreeId>,
    leaf_pos_of_var: Vec<u32>,
}

/// Result of [`Vtree::classify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VtreeClass {
    pub right_linear: bool,
    /// The right-spine node `u` whose complement is exactly the given set.
    pub constrained_node: Option<VtreeId>,
}

impl VtreeClass {
    pub fn constrained_for_x(&self) -> bool {
        self.constrained_node.is_some()
    }
}

impl Vtree {
    /// Builds a vtree from a shape whose leaves must be exactly `1..=n`.
    pub fn from_shape(shape: &Shape) -> Result<Vtree> {
        Self::from_shape_with_ids(shape, None)
    }

    fn from_shape_with_ids(shape: &Shape, ext: Option<&dyn Fn(&Shape) -> usize>) -> Result<Vtree> {
        let mut t = Vtree {
            nodes: Vec::new(),
            ids: Vec::new(),
            parent: Vec::new(),
            span: Vec::new(),
            leaf_of_var: Vec::new(),
            leaf_pos_of_var: Vec::new(),
        };
        let mut leaves: Vec<Var> = Vec::new();
        // Iterative post-order to survive deep right-linear trees.
        enum Frame<'a> {
            Enter(&'a Shape),
            Exit(&'a Shape),
        }
        let mut stack = vec![Frame::Enter(shape)];
        let mut results: Vec<VtreeId> = Vec::new();
        while let Some(f) = stack.pop() {
            match f {
                Frame::Enter(s) => match s {
                    Shape::Leaf(v) => {
                        let id = t.nodes.len();
                        let pos = leaves.len() as u32;
                        leaves.push(*v);
                        t.nodes.push(VtreeNode::Leaf(*v));
                        t.parent.push(None);
                        t.span.push((pos, pos + 1));
                        t.ids.push(ext.map_or(id, |e| e(s)));
                        results.push(id);
                    }
                    Shape::Node(l, r) => {
                        stack.push(Frame::Exit(s));
                        stack.push(Frame::Enter(r));
                        stack.push(Frame::Enter(l));
                    }
                },
                Frame::Exit(s) => {
                    let right = results.pop().expect("right child");
                    let left = results.pop().expect("left child");
                    let id = t.nodes.len();
                    t.nodes.push(VtreeNode::Internal { left, right });
                    t.parent.push(None);
                    t.parent[left] = Some(id);
                    t.parent[right] = Some(id);
                    t.span.push((t.span[left].0, t.span[right].1));
                    t.ids.push(ext.map_or(id, |e| e(s)));
                    results.push(id);
                }
            }
        }
        let n = leaves.len();
        t.leaf_of_var = vec![usize::MAX; n];
        t.leaf_pos_of_var = vec![u32::MAX; n];
        for (pos, v) in leaves.iter().enumerate() {
            let p = v.pos();
            if p >= n {
                return Err(Error::Invalid(format!(
                    "leaf variable {v} outside 1..={n}"
                )));
            }
            if t.leaf_of_var[p] != usize::MAX {
                return Err(Error::Invalid(format!("variable {v} appears on two leaves")));
            }
            t.leaf_pos_of_var[p] = pos as u32;
        }
        for (id, node) in t.nodes.iter().enumerate() {
            if let VtreeNode::Leaf(v) = node {
                t.leaf_of_var[v.pos()] = id;
            }
        }
        Ok(t)
    }

    /// Balanced vtree over the given variable order.
    pub fn balanced(order: &[Var]) -> Result<Vtree> {
        fn build(vs: &[Var]) -> Shape {
            if vs.len() == 1 {
                return Shape::Leaf(vs[0]);
            }
            let mid = vs.len() / 2;
            Shape::Node(Box::new(build(&vs[..mid])), Box::new(build(&vs[mid..])))
        }
        if order.is_empty() {
            return Err(Error::Invalid("vtree needs at least one variable".into()));
        }
        Vtree::from_shape(&build(order))
    }

    /// Right-linear vtree: the left child of every internal node is a leaf.
    pub fn right_linear(order: &[Var]) -> Result<Vtree> {
        let (last, rest) = order
            .split_last()
            .ok_or_else(|| Error::Invalid("vtree needs at least one variable".into()))?;
        let mut shape = Shape::Leaf(*last);
        for v in rest.iter().rev() {
            shape = Shape::Node(Box::new(Shape::Leaf(*v)), Box::new(shape));
        }
        Vtree::from_shape(&shape)
    }

    /// Right-linear vtree over `1..=n` in natural order.
    pub fn right_linear_natural(n: usize) -> Result<Vtree> {
        Vtree::right_linear(&(0..n).map(Var::from_pos).collect::<Vec<_>>())
    }

    pub fn balanced_natural(n: usize) -> Result<Vtree> {
        Vtree::balanced(&(0..n).map(Var::from_pos).collect::<Vec<_>>())
    }

    pub fn var_count(&self) -> usize {
        self.leaf_of_var.len()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> VtreeId {
        self.nodes.len() - 1
    }

    pub fn node(&self, v: VtreeId) -> VtreeNode {
        self.nodes[v]
    }

    pub fn external_id(&self, v: VtreeId) -> usize {
        self.ids[v]
    }

    /// Looks up a node by its external identifier.
    pub fn by_external_id(&self, ext: usize) -> Option<VtreeId> {
        self.ids.iter().position(|&i| i == ext)
    }

    pub fn parent(&self, v: VtreeId) -> Option<VtreeId> {
        self.parent[v]
    }

    pub fn is_leaf(&self, v: VtreeId) -> bool {
        matches!(self.nodes[v], VtreeNode::Leaf(_))
    }

    pub fn left(&self, v: VtreeId) -> Option<VtreeId> {
        match self.nodes[v] {
            VtreeNode::Internal { left, .. } => Some(left),
            VtreeNode::Leaf(_) => None,
        }
    }

    pub fn right(&self, v: VtreeId) -> Option<VtreeId> {
        match self.nodes[v] {
            VtreeNode::Internal { right, .. } => Some(right),
            VtreeNode::Leaf(_) => None,
        }
    }

    pub fn leaf_var(&self, v: VtreeId) -> Option<Var> {
        match self.nodes[v] {
            VtreeNode::Leaf(x) => Some(x),
            VtreeNode::Internal { .. } => None,
        }
    }

    pub fn leaf_of(&self, var: Var) -> Option<VtreeId> {
        self.leaf_of_var.get(var.pos()).copied()
    }

    pub fn contains_var(&self, v: VtreeId, var: Var) -> bool {
        match self.leaf_pos_of_var.get(var.pos()) {
            Some(&p) => {
                let (lo, hi) = self.span[v];
                lo <= p && p < hi
            }
            None => false,
        }
    }

    /// True when `a` is `b` or one of its ancestors.
    pub fn is_ancestor_or_self(&self, a: VtreeId, b: VtreeId) -> bool {
        let (alo, ahi) = self.span[a];
        let (blo, bhi) = self.span[b];
        alo <= blo && bhi <= ahi
    }

    /// True when `b` lies in the left subtree of `a`.
    pub fn in_left(&self, a: VtreeId, b: VtreeId) -> bool {
        self.left(a).is_some_and(|l| self.is_ancestor_or_self(l, b))
    }

    pub fn in_right(&self, a: VtreeId, b: VtreeId) -> bool {
        self.right(a).is_some_and(|r| self.is_ancestor_or_self(r, b))
    }

    pub fn lca(&self, a: VtreeId, b: VtreeId) -> VtreeId {
        let mut u = a;
        while !self.is_ancestor_or_self(u, b) {
            u = self.parent[u].expect("root covers every node");
        }
        u
    }

    /// Lowest node containing all the given variables; `None` for the empty set.
    pub fn lca_of_vars<I: IntoIterator<Item = Var>>(&self, vars: I) -> Option<VtreeId> {
        let mut acc: Option<VtreeId> = None;
        for var in vars {
            let leaf = self.leaf_of(var)?;
            acc = Some(match acc {
                None => leaf,
                Some(u) => self.lca(u, leaf),
            });
        }
        acc
    }

    /// Variables below `v`, in leaf order.
    pub fn vars(&self, v: VtreeId) -> Vec<Var> {
        let (lo, hi) = self.span[v];
        let mut out: Vec<(u32, Var)> = (0..self.var_count())
            .filter_map(|p| {
                let pos = self.leaf_pos_of_var[p];
                (lo <= pos && pos < hi).then(|| (pos, Var::from_pos(p)))
            })
            .collect();
        out.sort_unstable();
        out.into_iter().map(|(_, v)| v).collect()
    }

    pub fn var_set(&self, v: VtreeId) -> VarSet {
        VarSet::from_vars(self.var_count(), self.vars(v))
    }

    pub fn var_span_len(&self, v: VtreeId) -> usize {
        let (lo, hi) = self.span[v];
        (hi - lo) as usize
    }

    /// Variables in leaf (in-order) order.
    pub fn leaf_order(&self) -> Vec<Var> {
        self.vars(self.root())
    }

    /// Every internal node has a leaf as its left child.
    pub fn is_right_linear(&self) -> bool {
        self.nodes.iter().all(|n| match n {
            VtreeNode::Internal { left, .. } => self.is_leaf(*left),
            VtreeNode::Leaf(_) => true,
        })
    }

    /// Right-linearity plus the constrained-for-`Y|X` test for `x`.
    pub fn classify(&self, x: &[Var]) -> VtreeClass {
        let mut u = self.root();
        let xs = VarSet::from_vars(self.var_count(), x.iter().copied());
        let want = self.var_count() - xs.len();
        let constrained_node = loop {
            // Outside(u) = X  <=>  vars(u) = all \ X
            if self.var_span_len(u) == want && self.vars(u).iter().all(|v| !xs.contains(*v)) {
                break Some(u);
            }
            if self.var_span_len(u) < want {
                break None;
            }
            match self.right(u) {
                Some(r) => u = r,
                None => break None,
            }
        };
        VtreeClass {
            right_linear: self.is_right_linear(),
            constrained_node,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "vtree {}", self.nodes.len());
        for (i, node) in self.nodes.iter().enumerate() {
            match node {
                VtreeNode::Leaf(v) => {
                    let _ = writeln!(out, "L {} {}", self.ids[i], v.index());
                }
                VtreeNode::Internal { left, right } => {
                    let _ = writeln!(out, "I {} {} {}", self.ids[i], self.ids[*left], self.ids[*right]);
                }
            }
        }
        out
    }
}

/// Parses the vtree text format (`vtree N`, `L id var`, `I id left right`).
///
/// Children must be declared before their parent. The root is the unique node
/// without a parent.
pub fn parse_vtree(text: &str) -> Result<Vtree> {
    #[derive(Clone)]
    enum Decl {
        Leaf(Var),
        Node(usize, usize),
    }
    let mut count: Option<usize> = None;
    let mut decls: Vec<(usize, Decl)> = Vec::new();
    let mut by_id: HashMap<usize, usize> = HashMap::new();
    let mut has_parent: Vec<bool> = Vec::new();

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
            t.parse()
                .map_err(|_| Error::parse(lineno, format!("bad {what} `{t}`")))
        };
        match toks[0] {
            "vtree" => {
                if count.is_some() {
                    return Err(Error::parse(lineno, "duplicate header"));
                }
                if toks.len() != 2 {
                    return Err(Error::parse(lineno, "expected `vtree N`"));
                }
                count = Some(num(1, "node count")?);
            }
            "L" | "I" => {
                if count.is_none() {
                    return Err(Error::parse(lineno, "node before `vtree` header"));
                }
                let id = num(1, "node id")?;
                if by_id.contains_key(&id) {
                    return Err(Error::parse(lineno, format!("duplicate node id {id}")));
                }
                let decl = if toks[0] == "L" {
                    if toks.len() != 3 {
                        return Err(Error::parse(lineno, "expected `L id var`"));
                    }
                    let v = num(2, "variable")?;
                    let var = u32::try_from(v)
                        .ok()
                        .and_then(Var::new)
                        .ok_or_else(|| Error::parse(lineno, format!("bad variable {v}")))?;
                    Decl::Leaf(var)
                } else {
                    if toks.len() != 4 {
                        return Err(Error::parse(
                            lineno,
                            "internal nodes need exactly two children (`I id left right`)",
                        ));
                    }
                    let l = num(2, "left child")?;
                    let r = num(3, "right child")?;
                    let mut kids = [0usize; 2];
                    for (k, c) in [l, r].into_iter().enumerate() {
                        if c == id {
                            return Err(Error::parse(lineno, format!("cycle: node {id} is its own child")));
                        }
                        let ci = *by_id.get(&c).ok_or_else(|| {
                            Error::parse(lineno, format!("child {c} not declared before node {id}"))
                        })?;
                        if has_parent[ci] {
                            return Err(Error::parse(lineno, format!("node {c} has two parents")));
                        }
                        has_parent[ci] = true;
                        kids[k] = ci;
                    }
                    if kids[0] == kids[1] {
                        return Err(Error::parse(lineno, "both children are the same node"));
                    }
                    Decl::Node(kids[0], kids[1])
                };
                by_id.insert(id, decls.len());
                decls.push((id, decl));
                has_parent.push(false);
            }
            other => return Err(Error::parse(lineno, format!("bad line type `{other}`"))),
        }
    }

    let count = count.ok_or_else(|| Error::parse(0, "missing `vtree` header"))?;
    if decls.len() != count {
        return Err(Error::parse(
            0,
            format!("header declares {count} nodes, found {}", decls.len()),
        ));
    }
    let roots: Vec<usize> = (0..decls.len()).filter(|&i| !has_parent[i]).collect();
    let root = match roots.as_slice() {
        [r] => *r,
        [] => return Err(Error::parse(0, "vtree has no nodes")),
        _ => return Err(Error::parse(0, "vtree has more than one root")),
    };

    fn shape_of(decls: &[(usize, Decl)], i: usize) -> Shape {
        match &decls[i].1 {
            Decl::Leaf(v) => Shape::Leaf(*v),
            Decl::Node(l, r) => Shape::Node(Box::new(shape_of(decls, *l)), Box::new(shape_of(decls, *r))),
        }
    }
    let shape = shape_of(&decls, root);
    let mut t = Vtree::from_shape(&shape).map_err(|e| match e {
        Error::Invalid(m) => Error::parse(0, m),
        other => other,
    })?;
    // Re-attach external ids: both traversals are post-order, left first.
    let mut order = Vec::with_capacity(decls.len());
    let mut stack = vec![(root, false)];
    while let Some((i, done)) = stack.pop() {
        match (&decls[i].1, done) {
            (Decl::Node(l, r), false) => {
                stack.push((i, true));
                stack.push((*r, false));
                stack.push((*l, false));
            }
            _ => order.push(decls[i].0),
        }
    }
    t.ids = order;
    Ok(t)
}
