//! Maximizer circuits, MPE by top-down extraction, and complete subcircuits.

use std::collections::BTreeSet;

use tc_core::{Error, Result};

use crate::ac::{AcNode, ArithmeticCircuit};
use crate::scalar::Scalar;

/// An arithmetic circuit whose adders have been replaced by maximizers.
#[derive(Clone, Debug, PartialEq)]
pub struct MaximizerCircuit<T>(ArithmeticCircuit<T>);

pub fn maximizer_of<T: Scalar>(ac: &ArithmeticCircuit<T>) -> MaximizerCircuit<T> {
    let nodes = ac
        .nodes()
        .iter()
        .map(|n| match n {
            AcNode::Add(cs) => AcNode::Max(cs.clone()),
            other => other.clone(),
        })
        .collect();
    let mc = ArithmeticCircuit::new(ac.vars().to_vec(), nodes, ac.params().to_vec())
        .expect("same shape as a valid circuit");
    MaximizerCircuit(mc)
}

impl<T: Scalar> MaximizerCircuit<T> {
    pub fn circuit(&self) -> &ArithmeticCircuit<T> {
        &self.0
    }

    pub fn evaluate(&self, e: &[Option<usize>]) -> Result<T> {
        self.0.evaluate(e)
    }

    /// Value at `e` and the term of the subcircuit selected top-down: each
    /// maximizer keeps a child attaining its value, the lowest id on ties.
    /// Evidence wins over the selection, which matters only when the value
    /// is zero; variables neither fixes take their first value.
    ///
    /// Exact only when the source circuit is deterministic, decomposable
    /// and smooth; [`mpe`] checks that first.
    pub fn mpe_unchecked(&self, e: &[Option<usize>]) -> Result<(T, Vec<usize>)> {
        let ac = &self.0;
        let val = ac.node_values(&ac.setting(e))?;
        let mut inst: Vec<Option<usize>> = vec![None; ac.vars().len()];
        let mut visited = vec![false; ac.len()];
        let mut stack = vec![ac.root()];
        while let Some(n) = stack.pop() {
            if std::mem::replace(&mut visited[n], true) {
                continue;
            }
            match &ac.nodes()[n] {
                AcNode::Indicator { var, value } => {
                    if inst[*var].is_some_and(|x| x != *value) {
                        return Err(Error::precondition("selected subcircuit binds a variable twice"));
                    }
                    inst[*var] = Some(*value);
                }
                AcNode::Max(cs) | AcNode::Add(cs) => {
                    if let Some(&c) = cs.iter().filter(|&&c| val[c] == val[n]).min() {
                        stack.push(c);
                    }
                }
                AcNode::Mul(cs) => stack.extend(cs.iter().copied()),
                AcNode::Constant(_) | AcNode::Param(_) => {}
            }
        }
        let x = inst
            .iter()
            .zip(e.iter().copied().chain(std::iter::repeat(None)))
            .map(|(&sel, ev)| ev.or(sel).unwrap_or(0))
            .collect();
        Ok((val[ac.root()].clone(), x))
    }
}

/// Most probable explanation: the largest reference-point row compatible
/// with `e`, and that row. Checks the three properties first, enumerating
/// up to `cap` rows for determinism.
pub fn mpe<T: Scalar>(ac: &ArithmeticCircuit<T>, e: &[Option<usize>], cap: u64) -> Result<(T, Vec<usize>)> {
    ac.require_tractable(cap)?;
    maximizer_of(ac).mpe_unchecked(e)
}

/// One top-down selection: a single child per adder or maximizer, every
/// child per multiplier.
#[derive(Clone, Debug, PartialEq)]
pub struct CompleteSubcircuit<T> {
    /// Indicator subscripts as (variable, value).
    pub term: BTreeSet<(usize, usize)>,
    /// Product of the constants in the selection.
    pub coefficient: T,
    /// Selected (parent, child) edges.
    pub edges: BTreeSet<(usize, usize)>,
}

impl<T> CompleteSubcircuit<T> {
    /// True when the term mentions exactly the values of `x`.
    pub fn matches(&self, x: &[usize]) -> bool {
        self.term.len() == x.len() && x.iter().enumerate().all(|(v, &val)| self.term.contains(&(v, val)))
    }
}

/// Every complete subcircuit of `ac`. Errors if any node has more than
/// `cap` of them.
pub fn enumerate_complete_subcircuits<T: Scalar>(ac: &ArithmeticCircuit<T>, cap: usize) -> Result<Vec<CompleteSubcircuit<T>>> {
    let mut per_node: Vec<Vec<CompleteSubcircuit<T>>> = Vec::with_capacity(ac.len());
    let too_many = |n: usize| Error::CapExceeded { what: "complete subcircuits", size: n as u64, cap: cap as u64 };
    for (i, n) in ac.nodes().iter().enumerate() {
        let here = match n {
            AcNode::Indicator { var, value } => vec![CompleteSubcircuit {
                term: BTreeSet::from([(*var, *value)]),
                coefficient: T::one(),
                edges: BTreeSet::new(),
            }],
            AcNode::Constant(c) => vec![CompleteSubcircuit {
                term: BTreeSet::new(),
                coefficient: c.clone(),
                edges: BTreeSet::new(),
            }],
            AcNode::Param(p) => {
                return Err(Error::precondition(format!("parameter `{}` is unbound", ac.params()[*p])))
            }
            AcNode::Add(cs) | AcNode::Max(cs) => {
                let total: usize = cs.iter().map(|&c| per_node[c].len()).sum();
                if total > cap {
                    return Err(too_many(total));
                }
                let mut out = Vec::with_capacity(total);
                for &c in cs {
                    for s in &per_node[c] {
                        let mut s = s.clone();
                        s.edges.insert((i, c));
                        out.push(s);
                    }
                }
                out
            }
            AcNode::Mul(cs) => {
                let mut out = vec![CompleteSubcircuit {
                    term: BTreeSet::new(),
                    coefficient: T::one(),
                    edges: BTreeSet::new(),
                }];
                for &c in cs {
                    let size = out.len().saturating_mul(per_node[c].len());
                    if size > cap {
                        return Err(too_many(size));
                    }
                    let mut next = Vec::with_capacity(size);
                    for acc in &out {
                        for s in &per_node[c] {
                            let mut t = acc.clone();
                            t.term.extend(s.term.iter().copied());
                            t.coefficient = t.coefficient * s.coefficient.clone();
                            t.edges.extend(s.edges.iter().copied());
                            t.edges.insert((i, c));
                            next.push(t);
                        }
                    }
                    out = next;
                }
                out
            }
        };
        per_node.push(here);
    }
    Ok(per_node.pop().expect("non-empty circuit"))
}
