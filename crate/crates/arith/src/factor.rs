//! Discrete variables, instantiations and factors.

use std::fmt::Write;

use tc_core::{Error, Result};

use crate::scalar::Scalar;

/// Largest number of complete instantiations enumerated by default.
pub const DEFAULT_ROW_CAP: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteVar {
    pub name: String,
    pub labels: Vec<String>,
}

impl DiscreteVar {
    pub fn new(name: impl Into<String>, labels: Vec<String>) -> Result<DiscreteVar> {
        let name = name.into();
        if name.is_empty() || name.contains(|c: char| c.is_whitespace() || c == '=' || c == ',') {
            return Err(Error::Invalid(format!("bad variable name `{name}`")));
        }
        if labels.len() < 2 {
            return Err(Error::Invalid(format!("variable {name} needs at least two values")));
        }
        let mut seen = std::collections::HashSet::with_capacity(labels.len());
        for l in &labels {
            if l.is_empty() || l.contains(|c: char| c.is_whitespace() || c == '=' || c == ',') {
                return Err(Error::Invalid(format!("bad value label `{l}` for {name}")));
            }
            if !seen.insert(l.as_str()) {
                return Err(Error::Invalid(format!("duplicate value label `{l}` for {name}")));
            }
        }
        Ok(DiscreteVar { name, labels })
    }

    /// Binary variables get `x`/`~x`, others `x1`..`xk`, from the lowercased name.
    pub fn with_default_labels(name: impl Into<String>, k: usize) -> Result<DiscreteVar> {
        let name = name.into();
        let base = name.to_lowercase();
        let labels = if k == 2 {
            vec![base.clone(), format!("~{base}")]
        } else {
            (1..=k).map(|i| format!("{base}{i}")).collect()
        };
        DiscreteVar::new(name, labels)
    }

    pub fn boolean(name: impl Into<String>) -> DiscreteVar {
        DiscreteVar::new(name, vec!["0".into(), "1".into()]).expect("valid boolean variable")
    }

    pub fn k(&self) -> usize {
        self.labels.len()
    }

    /// Value by label, falling back to a numeric index.
    pub fn value_of(&self, label: &str) -> Option<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .or_else(|| label.parse::<usize>().ok().filter(|&i| i < self.k()))
    }

    fn uses_default_labels(&self) -> bool {
        DiscreteVar::with_default_labels(self.name.clone(), self.k()).is_ok_and(|d| d.labels == self.labels)
    }
}

/// Partial instantiation: one optional value index per variable.
pub type Inst = Vec<Option<usize>>;

/// Parses `A=a,B=~b` (commas or whitespace between bindings).
pub fn parse_instantiation(text: &str, vars: &[DiscreteVar]) -> Result<Inst> {
    let mut inst = vec![None; vars.len()];
    for tok in text.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        let (name, label) = tok
            .split_once('=')
            .ok_or_else(|| Error::parse(1, format!("expected NAME=VALUE, got `{tok}`")))?;
        let v = vars
            .iter()
            .position(|d| d.name == name)
            .ok_or_else(|| Error::parse(1, format!("unknown variable `{name}`")))?;
        let x = vars[v]
            .value_of(label)
            .ok_or_else(|| Error::parse(1, format!("unknown value `{label}` for {name}")))?;
        if inst[v].is_some() {
            return Err(Error::parse(1, format!("variable {name} bound twice")));
        }
        inst[v] = Some(x);
    }
    Ok(inst)
}

pub fn format_instantiation(inst: &[Option<usize>], vars: &[DiscreteVar]) -> String {
    inst.iter()
        .zip(vars)
        .filter_map(|(x, d)| x.map(|x| format!("{}={}", d.name, d.labels[x])))
        .collect::<Vec<_>>()
        .join(",")
}

/// Number of complete instantiations, if it fits in `cap`.
pub fn row_count(vars: &[DiscreteVar], cap: u64) -> Result<u64> {
    let mut n: u64 = 1;
    for d in vars {
        n = n
            .checked_mul(d.k() as u64)
            .filter(|&n| n <= cap)
            .ok_or(Error::CapExceeded { what: "instantiation count", size: u64::MAX, cap })?;
    }
    Ok(n)
}

/// Complete instantiations in row-major order (last variable fastest).
pub fn rows(vars: &[DiscreteVar]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = vars.iter().map(DiscreteVar::k).product();
    (0..total).map(move |mut i| {
        let mut x = vec![0; vars.len()];
        for (slot, d) in x.iter_mut().zip(vars).rev() {
            *slot = i % d.k();
            i /= d.k();
        }
        x
    })
}

pub fn compatible(x: &[usize], e: &[Option<usize>]) -> bool {
    x.iter().zip(e).all(|(a, b)| b.is_none_or(|b| b == *a))
}

/// A table from complete instantiations to non-negative numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct Factor<T> {
    pub vars: Vec<DiscreteVar>,
    /// Row-major, last variable fastest.
    pub values: Vec<T>,
}

impl<T: Scalar> Factor<T> {
    pub fn new(vars: Vec<DiscreteVar>, values: Vec<T>) -> Result<Factor<T>> {
        let n = row_count(&vars, DEFAULT_ROW_CAP)?;
        if values.len() as u64 != n {
            return Err(Error::Invalid(format!("factor needs {n} values, got {}", values.len())));
        }
        if values.iter().any(|v| *v < T::zero()) {
            return Err(Error::Invalid("negative factor value".into()));
        }
        Ok(Factor { vars, values })
    }

    pub fn index_of(&self, x: &[usize]) -> usize {
        x.iter().zip(&self.vars).fold(0, |acc, (&v, d)| acc * d.k() + v)
    }

    pub fn get(&self, x: &[usize]) -> &T {
        &self.values[self.index_of(x)]
    }

    /// Sum of the rows compatible with `e`.
    pub fn marginal(&self, e: &[Option<usize>]) -> T {
        rows(&self.vars)
            .zip(&self.values)
            .filter(|(x, _)| compatible(x, e))
            .fold(T::zero(), |acc, (_, v)| acc + v.clone())
    }

    /// Compatible row with the largest value; ties go to the first row.
    pub fn argmax(&self, e: &[Option<usize>]) -> Option<(T, Vec<usize>)> {
        let mut best: Option<(T, Vec<usize>)> = None;
        for (x, v) in rows(&self.vars).zip(&self.values) {
            if compatible(&x, e) && best.as_ref().is_none_or(|(b, _)| *v > *b) {
                best = Some((v.clone(), x));
            }
        }
        best
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (x, v) in rows(&self.vars).zip(&self.values) {
            let inst: Inst = x.into_iter().map(Some).collect();
            let _ = writeln!(out, "{} {v}", format_instantiation(&inst, &self.vars));
        }
        out
    }
}

/// Writes a `v` declaration line, omitting labels when they are the defaults.
pub(crate) fn declaration(d: &DiscreteVar) -> String {
    if d.uses_default_labels() {
        format!("v {} {}", d.name, d.k())
    } else {
        format!("v {} {} {}", d.name, d.k(), d.labels.join(" "))
    }
}
