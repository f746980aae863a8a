//! Linear-time queries over tractable circuits: satisfiability, (weighted)
//! model counting, per-literal counts by backpropagation and E-MajSat.

use num_bigint::BigUint;

use crate::analysis::{
    certify_determinism, check_decomposability, check_smoothness, check_x_constrained,
    decision_vars, sat_flags_decomposable, DEFAULT_ORACLE_CAP,
};
use crate::error::{Error, Result};
use crate::lit::{Assignment, Literal, Var, VarSet};
use crate::nnf::{block_mask, NnfCircuit, NnfNode};
use crate::weights::{Weight, WeightMap};

/// How counting queries establish their preconditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrustOptions {
    /// Accept determinism without a structural or exhaustive certificate.
    pub assume_deterministic: bool,
    /// Variable cap for exhaustive fallbacks.
    pub oracle_cap: usize,
}

impl Default for TrustOptions {
    fn default() -> Self {
        TrustOptions {
            assume_deterministic: false,
            oracle_cap: DEFAULT_ORACLE_CAP,
        }
    }
}

fn require_decomposable(c: &NnfCircuit) -> Result<()> {
    let r = check_decomposability(c);
    match r.witnesses.first() {
        None => Ok(()),
        Some(w) => Err(Error::precondition(format!(
            "circuit is not decomposable (node {} {})",
            w.node, w.detail
        ))),
    }
}

/// Smoothness where children that can never be high are ignored; they add 0.
fn require_smooth(c: &NnfCircuit) -> Result<()> {
    if check_smoothness(c, false)?.holds() {
        return Ok(());
    }
    let r = check_smoothness(c, true)?;
    match r.witnesses.first() {
        None => Ok(()),
        Some(w) => Err(Error::precondition(format!(
            "circuit is not smooth (node {}: {})",
            w.node, w.detail
        ))),
    }
}

fn require_counting(c: &NnfCircuit, opts: &TrustOptions) -> Result<()> {
    require_decomposable(c)?;
    require_smooth(c)?;
    certify_determinism(c, opts.oracle_cap, opts.assume_deterministic)?;
    Ok(())
}

/// Linear-time satisfiability of a decomposable circuit.
pub fn sat(c: &NnfCircuit) -> Result<bool> {
    require_decomposable(c)?;
    Ok(sat_flags_decomposable(c)[c.root()])
}

/// Bottom-up sum/product pass with the given literal leaf values.
fn forward<T: Weight>(c: &NnfCircuit, leaf: &impl Fn(Literal) -> T) -> Vec<T> {
    let mut vals: Vec<T> = Vec::with_capacity(c.len());
    for node in c.nodes() {
        let v = match node {
            NnfNode::Lit(l) => leaf(*l),
            NnfNode::And(cs) => cs.iter().fold(T::one(), |acc, &ch| acc * vals[ch].clone()),
            NnfNode::Or { children, .. } => children
                .iter()
                .fold(T::zero(), |acc, &ch| acc + vals[ch].clone()),
        };
        vals.push(v);
    }
    vals
}

/// Variables of `1..=var_count` the root does not mention.
fn free_vars(c: &NnfCircuit) -> Vec<Var> {
    let root_vars = c.node_vars().swap_remove(c.root());
    let all = VarSet::full(c.var_count);
    all.difference(&root_vars)
}

fn leaf_weight<T: Weight>(w: &WeightMap<T>, e: &Assignment, l: Literal) -> T {
    if e.allows(l) {
        w.get(l)
    } else {
        T::zero()
    }
}

/// Weight of a variable left unconstrained by the circuit.
fn free_factor<T: Weight>(w: &WeightMap<T>, e: &Assignment, v: Var) -> T {
    leaf_weight(w, e, v.pos_lit()) + leaf_weight(w, e, v.neg_lit())
}

fn check_weights<T>(c: &NnfCircuit, w: &WeightMap<T>) -> Result<()> {
    if w.var_count() < c.var_count {
        return Err(Error::Invalid(format!(
            "weights cover {} variables, circuit has {}",
            w.var_count(),
            c.var_count
        )));
    }
    Ok(())
}

/// Weighted count of the satisfying completions of `e`.
pub fn weighted_count<T: Weight>(
    c: &NnfCircuit,
    w: &WeightMap<T>,
    e: &Assignment,
    opts: &TrustOptions,
) -> Result<T> {
    require_counting(c, opts)?;
    check_weights(c, w)?;
    Ok(weighted_count_unchecked(c, w, e))
}

pub(crate) fn weighted_count_unchecked<T: Weight>(c: &NnfCircuit, w: &WeightMap<T>, e: &Assignment) -> T {
    let vals = forward(c, &|l| leaf_weight(w, e, l));
    free_vars(c)
        .into_iter()
        .fold(vals[c.root()].clone(), |acc, v| acc * free_factor(w, e, v))
}

/// Number of complete assignments satisfying the circuit.
pub fn model_count(c: &NnfCircuit, opts: &TrustOptions) -> Result<BigUint> {
    conditioned_count(c, &Assignment::new(), opts)
}

/// Number of satisfying completions of `e`.
pub fn conditioned_count(c: &NnfCircuit, e: &Assignment, opts: &TrustOptions) -> Result<BigUint> {
    weighted_count(c, &WeightMap::<BigUint>::unit(c.var_count), e, opts)
}

/// For every literal `l`, the weighted count under `e` with `l` also
/// asserted, from one forward and one backward pass. Indexed by
/// [`Literal::code`].
pub fn literal_marginal_counts<T: Weight>(
    c: &NnfCircuit,
    w: &WeightMap<T>,
    e: &Assignment,
    opts: &TrustOptions,
) -> Result<Vec<T>> {
    require_counting(c, opts)?;
    check_weights(c, w)?;
    let leaf = |l: Literal| leaf_weight(w, e, l);
    let vals = forward(c, &leaf);
    let mut d: Vec<T> = vec![T::zero(); c.len()];
    d[c.root()] = T::one();
    for id in (0..c.len()).rev() {
        if d[id].is_zero() {
            continue;
        }
        let here = d[id].clone();
        match c.node(id) {
            NnfNode::Lit(_) => {}
            NnfNode::Or { children, .. } => {
                for &ch in children {
                    d[ch] = d[ch].clone() + here.clone();
                }
            }
            NnfNode::And(cs) => {
                // prefix[i] * suffix[i+1] is the product of all siblings but i.
                let k = cs.len();
                let mut suffix = vec![T::one(); k + 1];
                for i in (0..k).rev() {
                    suffix[i] = suffix[i + 1].clone() * vals[cs[i]].clone();
                }
                let mut prefix = T::one();
                for i in 0..k {
                    let others = prefix.clone() * suffix[i + 1].clone();
                    d[cs[i]] = d[cs[i]].clone() + here.clone() * others;
                    prefix = prefix * vals[cs[i]].clone();
                }
            }
        }
    }
    let free = free_vars(c);
    let free_set = VarSet::from_vars(c.var_count, free.iter().copied());
    let free_all = free
        .iter()
        .fold(T::one(), |acc, &v| acc * free_factor(w, e, v));
    let mut out = vec![T::zero(); 2 * c.var_count];
    for (id, node) in c.nodes().iter().enumerate() {
        if let NnfNode::Lit(l) = node {
            out[l.code()] = out[l.code()].clone() + d[id].clone() * vals[id].clone();
        }
    }
    for p in 0..c.var_count {
        let v = Var::from_pos(p);
        if free_set.contains(v) {
            let rest = free
                .iter()
                .filter(|&&u| u != v)
                .fold(T::one(), |acc, &u| acc * free_factor(w, e, u));
            let root = vals[c.root()].clone() * rest;
            for l in [v.pos_lit(), v.neg_lit()] {
                out[l.code()] = root.clone() * leaf(l);
            }
        } else {
            for l in [v.pos_lit(), v.neg_lit()] {
                out[l.code()] = out[l.code()].clone() * free_all.clone();
            }
        }
    }
    Ok(out)
}

/// Maximum over instantiations `x` of `X` of the weighted count conditioned
/// on `x`, with a maximizing `x`.
///
/// Or nodes deciding a variable in `X` take the maximum, other Or nodes the
/// sum and And nodes the product. Ties go to the child with the lowest node id.
pub fn e_majsat<T: Weight>(c: &NnfCircuit, x: &[Var], w: &WeightMap<T>) -> Result<(T, Assignment)> {
    require_decomposable(c)?;
    let dec = decision_vars(c).map_err(|node| {
        Error::precondition(format!("circuit lacks the decision property (node {node})"))
    })?;
    if !check_x_constrained(c, x)? {
        return Err(Error::precondition("circuit is not constrained for the given variables"));
    }
    require_smooth(c)?;
    check_weights(c, w)?;
    let xs = VarSet::from_vars(c.var_count, x.iter().copied());

    let mut vals: Vec<T> = Vec::with_capacity(c.len());
    let mut choice: Vec<Option<usize>> = vec![None; c.len()];
    for (id, node) in c.nodes().iter().enumerate() {
        let v = match node {
            NnfNode::Lit(l) => w.get(*l),
            NnfNode::And(cs) => cs.iter().fold(T::one(), |acc, &ch| acc * vals[ch].clone()),
            NnfNode::Or { children, .. } => {
                if dec[id].is_some_and(|v| xs.contains(v)) {
                    let mut best: Option<usize> = None;
                    for &ch in children {
                        best = match best {
                            None => Some(ch),
                            Some(b) if vals[ch] > vals[b] || (vals[ch] == vals[b] && ch < b) => Some(ch),
                            keep => keep,
                        };
                    }
                    choice[id] = best;
                    best.map_or(T::zero(), |b| vals[b].clone())
                } else {
                    children
                        .iter()
                        .fold(T::zero(), |acc, &ch| acc + vals[ch].clone())
                }
            }
        };
        vals.push(v);
    }

    let mut witness = Assignment::new();
    let mut value = vals[c.root()].clone();
    for v in free_vars(c) {
        let (pw, nw) = (w.get(v.pos_lit()), w.get(v.neg_lit()));
        if xs.contains(v) {
            let positive = pw >= nw;
            witness.set(v, positive);
            value = value * if positive { pw } else { nw };
        } else {
            value = value * (pw + nw);
        }
    }

    // Trace the chosen subcircuit above the first non-X decisions.
    let mut on = vec![false; c.len()];
    on[c.root()] = true;
    for id in (0..c.len()).rev() {
        if !on[id] {
            continue;
        }
        match c.node(id) {
            NnfNode::Lit(l) => {
                if xs.contains(l.var()) {
                    witness.assign(*l);
                }
            }
            NnfNode::And(cs) => {
                for &ch in cs {
                    on[ch] = true;
                }
            }
            NnfNode::Or { .. } => {
                if let Some(ch) = choice[id] {
                    on[ch] = true;
                }
            }
        }
    }
    for &v in x {
        if witness.get(v).is_none() {
            witness.set(v, true);
        }
    }
    Ok((value, witness))
}

/// All satisfying complete assignments in lexicographic order (variable 1
/// most significant), by enumeration.
pub fn enumerate_models(c: &NnfCircuit, cap: usize) -> Result<Vec<Assignment>> {
    let n = c.var_count;
    if n > cap {
        return Err(Error::CapExceeded {
            what: "variable count for model enumeration",
            size: n as u64,
            cap: cap as u64,
        });
    }
    let mut out = Vec::new();
    for base in (0..1u64 << n).step_by(64) {
        let mut bits = c.eval_block(base)[c.root()] & block_mask(n, base);
        while bits != 0 {
            let j = bits.trailing_zeros() as u64;
            out.push(Assignment::from_index(n, base + j));
            bits &= bits - 1;
        }
    }
    Ok(out)
}

/// Count of satisfying assignments by enumeration.
pub fn count_by_enumeration(c: &NnfCircuit, cap: usize) -> Result<BigUint> {
    let n = c.var_count;
    if n > cap {
        return Err(Error::CapExceeded {
            what: "variable count for model enumeration",
            size: n as u64,
            cap: cap as u64,
        });
    }
    let mut total = 0u64;
    for base in (0..1u64 << n).step_by(64) {
        total += u64::from((c.eval_block(base)[c.root()] & block_mask(n, base)).count_ones());
    }
    Ok(BigUint::from(total))
}
