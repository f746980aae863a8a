//! CNF to Decision-DNNF by recording the trace of an exhaustive DPLL search
//! with unit propagation, component decomposition and component caching.

use std::num::NonZeroUsize;

use lru::LruCache;
use petgraph::unionfind::UnionFind;

use crate::cnf::{Clause, CnfFormula};
use crate::lit::{Assignment, Literal, Var, VarSet};
use crate::nnf::{NnfBuilder, NnfCircuit, NnfNode, NodeId};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Heuristic {
    LowestIndex,
    #[default]
    MostOccurring,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompileOptions {
    pub heuristic: Heuristic,
    /// Maximum number of cached components; 0 disables caching.
    pub cache_capacity: usize,
    /// Variables branched on before any other variable of the same component.
    pub x_first: Option<Vec<Var>>,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            heuristic: Heuristic::MostOccurring,
            cache_capacity: 1 << 16,
            x_first: None,
        }
    }
}

/// Outcome of unit propagation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Propagation {
    Conflict,
    /// The extended assignment and the clauses neither satisfied nor unit.
    Residual {
        assignment: Assignment,
        clauses: Vec<Clause>,
    },
}

/// Applies the unit rule to a fixpoint.
pub fn unit_propagate(clauses: &[Clause], a: &Assignment) -> Propagation {
    let mut a = a.clone();
    let mut current: Vec<Clause> = clauses.to_vec();
    loop {
        let mut next = Vec::with_capacity(current.len());
        let mut units = Vec::new();
        for c in &current {
            if c.iter().any(|&l| a.value_of(l) == Some(true)) {
                continue;
            }
            let live: Clause = c.iter().copied().filter(|&l| a.value_of(l).is_none()).collect();
            match live.len() {
                0 => return Propagation::Conflict,
                1 => units.push(live[0]),
                _ => next.push(live),
            }
        }
        if units.is_empty() {
            return Propagation::Residual {
                assignment: a,
                clauses: next,
            };
        }
        for u in units {
            match a.value_of(u) {
                Some(false) => return Propagation::Conflict,
                Some(true) => {}
                None => a.assign(u),
            }
        }
        current = next;
    }
}

/// Splits clauses into groups that share no variables, ordered by their
/// lowest variable.
pub fn components(clauses: &[Clause]) -> Vec<Vec<Clause>> {
    let n = clauses
        .iter()
        .flatten()
        .map(|l| l.var().index() as usize)
        .max()
        .unwrap_or(0);
    let mut uf = UnionFind::<usize>::new(n);
    for c in clauses {
        if let Some((first, rest)) = c.split_first() {
            for l in rest {
                uf.union(first.var().pos(), l.var().pos());
            }
        }
    }
    let mut groups: Vec<(usize, Vec<Clause>)> = Vec::new();
    let mut slot_of_root = vec![usize::MAX; n];
    for c in clauses {
        let Some(first) = c.first() else { continue };
        let root = uf.find(first.var().pos());
        if slot_of_root[root] == usize::MAX {
            slot_of_root[root] = groups.len();
            groups.push((usize::MAX, Vec::new()));
        }
        let g = &mut groups[slot_of_root[root]];
        g.0 = g.0.min(c.iter().map(|l| l.var().pos()).min().unwrap_or(usize::MAX));
        g.1.push(c.clone());
    }
    groups.sort_by_key(|g| g.0);
    groups.into_iter().map(|g| g.1).collect()
}

/// Sorted clauses of sorted literals, duplicates removed.
fn normalize(clauses: &[Clause]) -> Vec<Clause> {
    let mut out: Vec<Clause> = clauses
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort_unstable();
            c.dedup();
            c
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

struct Compiler {
    b: NnfBuilder,
    cache: Option<LruCache<Vec<Clause>, NodeId>>,
    heuristic: Heuristic,
    x_first: Option<VarSet>,
    var_count: usize,
}

impl Compiler {
    fn pick(&self, comp: &[Clause]) -> Var {
        let mut counts = vec![0usize; self.var_count];
        for l in comp.iter().flatten() {
            counts[l.var().pos()] += 1;
        }
        let preferred = |p: usize| self.x_first.as_ref().is_some_and(|x| x.contains(Var::from_pos(p)));
        let any_preferred = (0..self.var_count).any(|p| counts[p] > 0 && preferred(p));
        let mut best: Option<usize> = None;
        for p in 0..self.var_count {
            if counts[p] == 0 || (any_preferred && !preferred(p)) {
                continue;
            }
            best = match (best, self.heuristic) {
                (None, _) => Some(p),
                (Some(b), Heuristic::MostOccurring) if counts[p] > counts[b] => Some(p),
                (keep, _) => keep,
            };
        }
        Var::from_pos(best.expect("component mentions a variable"))
    }

    /// Conjunction of literals and a sub-trace, flattening And sub-traces.
    fn conjoin(&mut self, mut lits: Vec<Literal>, sub: NodeId) -> NodeId {
        lits.sort_unstable();
        let mut kids: Vec<NodeId> = lits.into_iter().map(|l| self.b.lit(l)).collect();
        match self.b.node(sub) {
            NnfNode::And(cs) => kids.extend(cs.iter().copied()),
            _ => kids.push(sub),
        }
        if kids.len() == 1 {
            kids[0]
        } else {
            self.b.and(kids)
        }
    }

    /// Trace of a clause set without unit or satisfied clauses.
    fn clauses(&mut self, clauses: &[Clause]) -> NodeId {
        if clauses.is_empty() {
            return self.b.tru();
        }
        let mut kids = Vec::new();
        for comp in components(clauses) {
            let t = self.component(&comp);
            if self.b.node(t).is_false() {
                return t;
            }
            match self.b.node(t) {
                NnfNode::And(cs) => kids.extend(cs.iter().copied()),
                _ => kids.push(t),
            }
        }
        if kids.len() == 1 {
            kids[0]
        } else {
            self.b.and(kids)
        }
    }

    fn component(&mut self, comp: &[Clause]) -> NodeId {
        let key = normalize(comp);
        if let Some(cache) = self.cache.as_mut() {
            if let Some(&hit) = cache.get(&key) {
                return hit;
            }
        }
        let v = self.pick(&key);
        let mut branches = Vec::with_capacity(2);
        for polarity in [true, false] {
            let mut a = Assignment::new();
            a.set(v, polarity);
            let Propagation::Residual { assignment, clauses } = unit_propagate(&key, &a) else {
                continue;
            };
            let sub = self.clauses(&clauses);
            if self.b.node(sub).is_false() {
                continue;
            }
            let lits: Vec<Literal> = assignment.literals().collect();
            branches.push(self.conjoin(lits, sub));
        }
        let node = match branches.len() {
            0 => self.b.fals(),
            1 => branches[0],
            _ => self.b.or(Some(v), branches),
        };
        if let Some(cache) = self.cache.as_mut() {
            cache.put(key, node);
        }
        node
    }
}

/// Compiles `f` into a decomposable circuit with the decision property.
///
/// Unsatisfiable formulas compile to the false node. The result is not
/// smoothed; variables eliminated without branching are simply absent.
pub fn compile(f: &CnfFormula, opts: &CompileOptions) -> NnfCircuit {
    let mut c = Compiler {
        b: NnfBuilder::new(f.var_count),
        cache: NonZeroUsize::new(opts.cache_capacity).map(LruCache::new),
        heuristic: opts.heuristic,
        x_first: opts
            .x_first
            .as_ref()
            .map(|xs| VarSet::from_vars(f.var_count, xs.iter().copied())),
        var_count: f.var_count,
    };
    // Tautological clauses constrain nothing.
    let clauses: Vec<Clause> = f
        .clauses
        .iter()
        .filter(|cl| !cl.iter().any(|l| cl.contains(&l.negate())))
        .cloned()
        .collect();
    let root = match unit_propagate(&clauses, &Assignment::new()) {
        Propagation::Conflict => c.b.fals(),
        Propagation::Residual { assignment, clauses } => {
            let sub = c.clauses(&clauses);
            if c.b.node(sub).is_false() {
                sub
            } else {
                c.conjoin(assignment.literals().collect(), sub)
            }
        }
    };
    c.b.finish(root).with_names(f.names.clone())
}
