//! Reverse-mode derivatives and soft evidence.

use tc_core::{Error, Result};

use crate::ac::{AcNode, ArithmeticCircuit, IndicatorSetting};
use crate::scalar::Scalar;

/// Root value and the partial derivative of the root with respect to every
/// node.
#[derive(Clone, Debug, PartialEq)]
pub struct Gradient<T> {
    pub value: T,
    pub node: Vec<T>,
}

impl<T: Scalar> Gradient<T> {
    /// Partial with respect to the indicator λ_{var=value}, summed over
    /// every leaf carrying it.
    pub fn indicator(&self, ac: &ArithmeticCircuit<T>, var: usize, value: usize) -> T {
        ac.nodes()
            .iter()
            .enumerate()
            .filter(|(_, n)| matches!(n, AcNode::Indicator { var: v, value: x } if *v == var && *x == value))
            .fold(T::zero(), |acc, (i, _)| acc + self.node[i].clone())
    }

    /// Indicator partials for every variable and value.
    pub fn indicators(&self, ac: &ArithmeticCircuit<T>) -> Vec<Vec<T>> {
        let mut out: Vec<Vec<T>> = ac.vars().iter().map(|d| vec![T::zero(); d.k()]).collect();
        for (i, n) in ac.nodes().iter().enumerate() {
            if let AcNode::Indicator { var, value } = n {
                out[*var][*value] = out[*var][*value].clone() + self.node[i].clone();
            }
        }
        out
    }
}

/// One upward pass for values, one downward pass for partials. Multiplier
/// partials use prefix and suffix products, so zero inputs are handled
/// exactly.
pub fn backprop<T: Scalar>(ac: &ArithmeticCircuit<T>, s: &IndicatorSetting<T>) -> Result<Gradient<T>> {
    if ac.nodes().iter().any(|n| matches!(n, AcNode::Max(_))) {
        return Err(Error::precondition("maximizers have no derivative"));
    }
    let val = ac.node_values(s)?;
    let mut d = vec![T::zero(); ac.len()];
    d[ac.root()] = T::one();
    for i in (0..ac.len()).rev() {
        if d[i].is_zero() {
            continue;
        }
        match &ac.nodes()[i] {
            AcNode::Add(cs) => {
                for &c in cs {
                    d[c] = d[c].clone() + d[i].clone();
                }
            }
            AcNode::Mul(cs) => {
                let k = cs.len();
                let mut suffix = vec![T::one(); k + 1];
                for j in (0..k).rev() {
                    suffix[j] = suffix[j + 1].clone() * val[cs[j]].clone();
                }
                let mut prefix = T::one();
                for j in 0..k {
                    let c = cs[j];
                    d[c] = d[c].clone() + d[i].clone() * prefix.clone() * suffix[j + 1].clone();
                    prefix = prefix * val[c].clone();
                }
            }
            _ => {}
        }
    }
    Ok(Gradient {
        value: val[ac.root()].clone(),
        node: d,
    })
}

/// Probability of hard evidence `e` given soft evidence: `b / a`, where
/// `a` evaluates the circuit with indicators set to the likelihoods and `b`
/// additionally zeroes the indicators `e` rules out. The circuit must be
/// deterministic, decomposable and smooth, and normalized.
pub fn soft_evidence<T: Scalar>(
    ac: &ArithmeticCircuit<T>,
    likelihoods: &IndicatorSetting<T>,
    e: &[Option<usize>],
    cap: u64,
) -> Result<T> {
    ac.require_tractable(cap)?;
    let total = ac.evaluate(&vec![None; ac.vars().len()])?;
    if !total.approx_eq(&T::one()) {
        return Err(Error::precondition(format!("circuit sums to {total}, not 1")));
    }
    check_setting(ac, likelihoods)?;
    let a = ac.evaluate_setting(likelihoods)?;
    if a.is_zero() {
        return Err(Error::Invalid("soft evidence has probability zero".into()));
    }
    let mut s = likelihoods.clone();
    for (v, row) in s.iter_mut().enumerate() {
        if let Some(x) = e.get(v).copied().flatten() {
            for (y, w) in row.iter_mut().enumerate() {
                if y != x {
                    *w = T::zero();
                }
            }
        }
    }
    let b = ac.evaluate_setting(&s)?;
    Ok(b / a)
}

pub(crate) fn check_setting<T: Scalar>(ac: &ArithmeticCircuit<T>, s: &IndicatorSetting<T>) -> Result<()> {
    let ok = s.len() == ac.vars().len()
        && s.iter().zip(ac.vars()).all(|(row, d)| row.len() == d.k() && row.iter().all(|w| *w >= T::zero()));
    if ok {
        Ok(())
    } else {
        Err(Error::Invalid("indicator setting does not match the circuit's variables".into()))
    }
}
