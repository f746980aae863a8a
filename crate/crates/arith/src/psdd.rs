//! Probabilistic SDDs: local distributions on the elements of every
//! decision, Bernoulli parameters for variables left unconstrained.

use std::collections::HashMap;
use std::fmt::Write;

use tc_core::sdd::{parse_sdd, SddNode, FALSE};
use tc_core::weights::parse_rational;
use tc_core::{Error, Result, SddId, SddManager, Var, Vtree, VtreeId};

use crate::ac::{AcBuilder, ArithmeticCircuit};
use crate::dataset::Dataset;
use crate::factor::DiscreteVar;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct Psdd<T> {
    m: SddManager,
    root: SddId,
    theta: HashMap<SddId, Vec<T>>,
    /// Probability of each variable being true where the base leaves it
    /// unconstrained.
    bern: Vec<T>,
}

/// Decision nodes reachable from `root`, children first.
pub fn decisions(m: &SddManager, root: SddId) -> Vec<SddId> {
    m.reachable(root)
        .into_iter()
        .filter(|&id| matches!(m.node(id), SddNode::Decision { .. }))
        .collect()
}

fn vnode_of(m: &SddManager, id: SddId) -> Option<VtreeId> {
    match m.node(id) {
        SddNode::Lit(l) => m.vtree().leaf_of(l.var()),
        SddNode::Decision { vnode, .. } => Some(*vnode),
        _ => None,
    }
}

/// Variables below `v` that are not below `w`.
fn gap(vt: &Vtree, v: VtreeId, w: Option<VtreeId>) -> Vec<Var> {
    vt.vars(v)
        .into_iter()
        .filter(|&x| w.is_none_or(|w| !vt.contains_var(w, x)))
        .collect()
}

/// Boolean value of every node reachable from `root` at the complete row `x`.
fn truth(m: &SddManager, root: SddId, x: &[bool]) -> HashMap<SddId, bool> {
    let mut t = HashMap::new();
    for id in m.reachable(root) {
        let v = match m.node(id) {
            SddNode::False => false,
            SddNode::True => true,
            SddNode::Lit(l) => x[l.var().pos()] == l.is_positive(),
            SddNode::Decision { elements, .. } => elements.iter().any(|(p, s)| t[p] && t[s]),
        };
        t.insert(id, v);
    }
    t
}

impl<T: Scalar> Psdd<T> {
    /// Checks that every reachable decision carries a distribution over its
    /// elements, zero on elements whose sub is false, and that every
    /// Bernoulli parameter lies in [0, 1].
    pub fn attach_params(m: SddManager, root: SddId, theta: HashMap<SddId, Vec<T>>, bern: Vec<T>) -> Result<Psdd<T>> {
        if root == FALSE {
            return Err(Error::Invalid("a PSDD needs a satisfiable base".into()));
        }
        if bern.len() != m.var_count() {
            return Err(Error::Invalid(format!("expected {} Bernoulli parameters", m.var_count())));
        }
        if let Some(b) = bern.iter().find(|b| **b < T::zero() || **b > T::one()) {
            return Err(Error::Invalid(format!("Bernoulli parameter {b} outside [0, 1]")));
        }
        for id in decisions(&m, root) {
            let els = m.elements(id);
            let th = theta
                .get(&id)
                .ok_or_else(|| Error::Invalid(format!("decision {id} has no parameters")))?;
            if th.len() != els.len() {
                return Err(Error::Invalid(format!("decision {id} has {} elements but {} parameters", els.len(), th.len())));
            }
            if th.iter().any(|t| *t < T::zero()) {
                return Err(Error::Invalid(format!("decision {id} has a negative parameter")));
            }
            if els.iter().zip(th).any(|(&(_, s), t)| s == FALSE && !t.is_zero()) {
                return Err(Error::Invalid(format!("decision {id} puts mass on an element with a false sub")));
            }
            let sum = th.iter().fold(T::zero(), |a, t| a + t.clone());
            if !sum.approx_eq(&T::one()) {
                return Err(Error::Invalid(format!("parameters of decision {id} sum to {sum}")));
            }
        }
        Ok(Psdd { m, root, theta, bern })
    }

    pub fn manager(&self) -> &SddManager {
        &self.m
    }

    pub fn root(&self) -> SddId {
        self.root
    }

    pub fn var_count(&self) -> usize {
        self.m.var_count()
    }

    pub fn theta(&self, id: SddId) -> Option<&[T]> {
        self.theta.get(&id).map(Vec::as_slice)
    }

    pub fn bernoulli(&self, v: Var) -> &T {
        &self.bern[v.pos()]
    }

    fn bern_of(&self, v: Var, value: bool) -> T {
        let b = self.bern[v.pos()].clone();
        if value {
            b
        } else {
            T::one() - b
        }
    }

    /// Probability of the complete row `x`.
    pub fn evaluate(&self, x: &[bool]) -> T {
        assert_eq!(x.len(), self.var_count(), "evaluate needs a complete row");
        let t = truth(&self.m, self.root, x);
        let mut memo = HashMap::new();
        self.eval(self.root, self.m.vtree().root(), x, &t, &mut memo)
    }

    fn eval(&self, n: SddId, v: VtreeId, x: &[bool], t: &HashMap<SddId, bool>, memo: &mut HashMap<(SddId, VtreeId), T>) -> T {
        if !t[&n] {
            return T::zero();
        }
        if let Some(r) = memo.get(&(n, v)) {
            return r.clone();
        }
        let vt = self.m.vtree();
        let mut r = gap(vt, v, vnode_of(&self.m, n))
            .into_iter()
            .fold(T::one(), |acc, var| acc * self.bern_of(var, x[var.pos()]));
        if let SddNode::Decision { vnode, elements } = self.m.node(n) {
            let (l, rr) = (vt.left(*vnode).expect("internal"), vt.right(*vnode).expect("internal"));
            let i = elements.iter().position(|(p, _)| t[p]).expect("primes partition");
            let (p, s) = elements[i];
            r = r * self.theta[&n][i].clone() * self.eval(p, l, x, t, memo) * self.eval(s, rr, x, t, memo);
        }
        memo.insert((n, v), r.clone());
        r
    }

    /// Natural-log likelihood of a dataset, in floating point.
    pub fn log_likelihood(&self, d: &Dataset) -> f64 {
        d.rows
            .iter()
            .map(|(x, c)| *c as f64 * self.evaluate(x).to_f64().ln())
            .sum()
    }

    /// The PSDD as an arithmetic circuit over Boolean variables with values
    /// `0` and `1`. Decisions become adders of parameter-weighted
    /// multipliers; unconstrained variables become `θλx + (1-θ)λx̄`.
    pub fn to_ac(&self, names: Option<&[String]>) -> ArithmeticCircuit<T> {
        let vars: Vec<DiscreteVar> = (0..self.var_count())
            .map(|p| {
                let name = names
                    .and_then(|n| n.get(p).cloned())
                    .unwrap_or_else(|| format!("x{}", p + 1));
                DiscreteVar::new(name.clone(), vec!["0".into(), "1".into()])
                    .unwrap_or_else(|_| DiscreteVar::boolean(format!("x{}", p + 1)))
            })
            .collect();
        let mut b = AcBuilder::new(vars);
        let mut bern_nodes: HashMap<usize, usize> = HashMap::new();
        let mut memo: HashMap<(SddId, VtreeId), usize> = HashMap::new();
        let root = self.build(&mut b, self.root, self.m.vtree().root(), &mut bern_nodes, &mut memo);
        b.finish(root)
    }

    fn bern_node(&self, b: &mut AcBuilder<T>, v: Var, cache: &mut HashMap<usize, usize>) -> usize {
        if let Some(&id) = cache.get(&v.pos()) {
            return id;
        }
        let hi = b.constant(self.bern_of(v, true));
        let on = b.indicator(v.pos(), 1);
        let lo = b.constant(self.bern_of(v, false));
        let off = b.indicator(v.pos(), 0);
        let m1 = b.mul(vec![hi, on]);
        let m0 = b.mul(vec![lo, off]);
        let id = b.add(vec![m1, m0]);
        cache.insert(v.pos(), id);
        id
    }

    fn build(
        &self,
        b: &mut AcBuilder<T>,
        n: SddId,
        v: VtreeId,
        bern: &mut HashMap<usize, usize>,
        memo: &mut HashMap<(SddId, VtreeId), usize>,
    ) -> usize {
        if let Some(&id) = memo.get(&(n, v)) {
            return id;
        }
        let vt = self.m.vtree();
        let mut kids: Vec<usize> = gap(vt, v, vnode_of(&self.m, n))
            .into_iter()
            .map(|var| self.bern_node(b, var, bern))
            .collect();
        let id = match self.m.node(n) {
            SddNode::False => b.add(Vec::new()),
            SddNode::True => {
                if kids.len() == 1 {
                    kids[0]
                } else {
                    b.mul(kids)
                }
            }
            SddNode::Lit(l) => {
                kids.push(b.indicator(l.var().pos(), usize::from(l.is_positive())));
                if kids.len() == 1 {
                    kids[0]
                } else {
                    b.mul(kids)
                }
            }
            SddNode::Decision { vnode, elements } => {
                let (l, r) = (vt.left(*vnode).expect("internal"), vt.right(*vnode).expect("internal"));
                let mut terms = Vec::new();
                for (i, &(p, s)) in elements.iter().enumerate() {
                    if s == FALSE {
                        continue;
                    }
                    let c = b.constant(self.theta[&n][i].clone());
                    let pa = self.build(b, p, l, bern, memo);
                    let sa = self.build(b, s, r, bern, memo);
                    terms.push(b.mul(vec![c, pa, sa]));
                }
                let sum = b.add(terms);
                if kids.is_empty() {
                    sum
                } else {
                    kids.push(sum);
                    b.mul(kids)
                }
            }
        };
        memo.insert((n, v), id);
        id
    }

    /// SDD text followed by `P id θ1 … θm` per decision and `B leaf θ` per
    /// vtree leaf.
    pub fn to_text(&self) -> String {
        let mut out = self.m.to_text(self.root);
        for (line, id) in self.m.reachable(self.root).into_iter().enumerate() {
            if let Some(th) = self.theta.get(&id) {
                let _ = write!(out, "P {line}");
                for t in th {
                    let _ = write!(out, " {t}");
                }
                out.push('\n');
            }
        }
        let vt = self.m.vtree();
        for p in 0..self.var_count() {
            let leaf = vt.leaf_of(Var::from_pos(p)).expect("every variable has a leaf");
            let _ = writeln!(out, "B {} {}", vt.external_id(leaf), self.bern[p]);
        }
        out
    }
}

/// Per-decision element counts and per-variable Bernoulli counts of the
/// rows routed through a PSDD structure.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoutedCounts {
    pub elements: HashMap<SddId, Vec<u64>>,
    /// (rows with the variable true, rows reaching it unconstrained)
    pub free: Vec<(u64, u64)>,
    pub rejected: u64,
}

/// Routes every feasible row of `d` through the structure.
pub fn routed_counts(m: &SddManager, root: SddId, d: &Dataset) -> Result<RoutedCounts> {
    if d.var_count != m.var_count() {
        return Err(Error::Invalid(format!("dataset has {} columns, base has {} variables", d.var_count, m.var_count())));
    }
    let mut c = RoutedCounts {
        elements: decisions(m, root).into_iter().map(|id| (id, vec![0; m.elements(id).len()])).collect(),
        free: vec![(0, 0); m.var_count()],
        rejected: 0,
    };
    for (x, k) in &d.rows {
        let t = truth(m, root, x);
        if !t[&root] {
            c.rejected += k;
            continue;
        }
        let mut stack = vec![(root, m.vtree().root())];
        while let Some((n, v)) = stack.pop() {
            for var in gap(m.vtree(), v, vnode_of(m, n)) {
                let f = &mut c.free[var.pos()];
                f.1 += k;
                if x[var.pos()] {
                    f.0 += k;
                }
            }
            if let SddNode::Decision { vnode, elements } = m.node(n) {
                let i = elements.iter().position(|(p, _)| t[p]).expect("primes partition");
                c.elements.get_mut(&n).expect("reachable decision")[i] += k;
                let vt = m.vtree();
                stack.push((elements[i].0, vt.left(*vnode).expect("internal")));
                stack.push((elements[i].1, vt.right(*vnode).expect("internal")));
            }
        }
    }
    Ok(c)
}

/// Maximum-likelihood parameters from complete data, in closed form: each
/// element gets the share of its node's rows routed through it. `alpha`
/// adds pseudo-counts to every feasible element and both values of each
/// Bernoulli. Nodes no row reaches get uniform parameters over their
/// feasible elements. Rows the base rules out are rejected and counted.
pub fn learn_ml_complete<T: Scalar>(m: SddManager, root: SddId, d: &Dataset, alpha: &T) -> Result<(Psdd<T>, u64)> {
    if d.total() == 0 {
        return Err(Error::Invalid("empty dataset".into()));
    }
    let c = routed_counts(&m, root, d)?;
    if c.rejected == d.total() {
        return Err(Error::Invalid("no row of the dataset satisfies the base".into()));
    }
    if c.rejected > 0 {
        log::warn!("rejected {} rows that violate the base", c.rejected);
    }
    let mut theta = HashMap::new();
    for (&id, counts) in &c.elements {
        let feasible: Vec<bool> = m.elements(id).iter().map(|&(_, s)| s != FALSE).collect();
        let nf = feasible.iter().filter(|&&f| f).count() as u64;
        let total = counts.iter().fold(T::zero(), |a, &k| a + T::from_u64(k));
        let denom = total + alpha.clone() * T::from_u64(nf);
        let th: Vec<T> = counts
            .iter()
            .zip(&feasible)
            .map(|(&k, &f)| match (f, denom.is_zero()) {
                (false, _) => T::zero(),
                (true, true) => T::one() / T::from_u64(nf),
                (true, false) => (T::from_u64(k) + alpha.clone()) / denom.clone(),
            })
            .collect();
        theta.insert(id, th);
    }
    let two = T::from_u64(2);
    let bern = c
        .free
        .iter()
        .map(|&(on, n)| {
            let denom = T::from_u64(n) + alpha.clone() * two.clone();
            if denom.is_zero() {
                T::one() / two.clone()
            } else {
                (T::from_u64(on) + alpha.clone()) / denom
            }
        })
        .collect();
    Ok((Psdd::attach_params(m, root, theta, bern)?, c.rejected))
}

/// Reads PSDD text against `vtree`. Leaves without a `B` line get 1/2.
pub fn parse_psdd<T: Scalar>(vtree: Vtree, text: &str) -> Result<Psdd<T>> {
    let mut m = SddManager::new(vtree);
    let mut sdd_text = String::new();
    let mut extra = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let t = raw.trim_start();
        if t.starts_with("P ") || t.starts_with("B ") || t == "P" || t == "B" {
            extra.push((idx + 1, t));
            sdd_text.push('\n');
        } else {
            sdd_text.push_str(raw);
            sdd_text.push('\n');
        }
    }
    let parsed = parse_sdd(&mut m, &sdd_text, true)?;
    let line_of: HashMap<usize, usize> = parsed.ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut theta: HashMap<SddId, Vec<T>> = HashMap::new();
    let mut bern: Vec<Option<T>> = vec![None; m.var_count()];
    for (lineno, line) in extra {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let num = |t: &str| -> Result<T> {
            parse_rational(t)
                .map(|r| T::from_rational(&r))
                .ok_or_else(|| Error::parse(lineno, format!("bad number `{t}`")))
        };
        let id: usize = toks
            .get(1)
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::parse(lineno, "expected an id"))?;
        if toks[0] == "B" {
            let leaf = m
                .vtree()
                .by_external_id(id)
                .and_then(|v| m.vtree().leaf_var(v))
                .ok_or_else(|| Error::parse(lineno, format!("{id} is not a vtree leaf")))?;
            if toks.len() != 3 {
                return Err(Error::parse(lineno, "expected `B leaf θ`"));
            }
            if bern[leaf.pos()].replace(num(toks[2])?).is_some() {
                return Err(Error::parse(lineno, format!("leaf {id} has two Bernoulli lines")));
            }
            continue;
        }
        let line_idx = *line_of
            .get(&id)
            .ok_or_else(|| Error::parse(lineno, format!("unknown node {id}")))?;
        let (_, declared) = parsed.declared[line_idx]
            .as_ref()
            .ok_or_else(|| Error::parse(lineno, format!("node {id} is not a decision")))?;
        let values = toks[2..].iter().map(|t| num(t)).collect::<Result<Vec<T>>>()?;
        if values.len() != declared.len() {
            return Err(Error::parse(lineno, "parameter count disagrees with the element count"));
        }
        let node = parsed.line_nodes[line_idx];
        let canonical: Vec<T> = m
            .elements(node)
            .iter()
            .map(|e| {
                let j = declared.iter().position(|d| d == e).expect("strict parse keeps declared elements");
                values[j].clone()
            })
            .collect();
        if let Some(prev) = theta.insert(node, canonical.clone()) {
            if prev != canonical {
                return Err(Error::parse(lineno, format!("conflicting parameters for node {id}")));
            }
        }
    }
    let half = T::one() / T::from_u64(2);
    let bern = bern.into_iter().map(|b| b.unwrap_or_else(|| half.clone())).collect();
    Psdd::attach_params(m, parsed.root, theta, bern)
}
