//! Variables, literals, partial assignments and variable sets.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// A Boolean variable, 1-based as in DIMACS.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    /// Returns `None` for index 0.
    pub fn new(index: u32) -> Option<Var> {
        (index >= 1).then_some(Var(index))
    }

    /// Builds a variable from a 0-based position.
    pub fn from_pos(pos: usize) -> Var {
        Var(pos as u32 + 1)
    }

    pub fn index(self) -> u32 {
        self.0
    }

    /// 0-based position, handy for indexing dense tables.
    pub fn pos(self) -> usize {
        self.0 as usize - 1
    }

    pub fn lit(self, positive: bool) -> Literal {
        Literal { var: self, positive }
    }

    pub fn pos_lit(self) -> Literal {
        self.lit(true)
    }

    pub fn neg_lit(self) -> Literal {
        self.lit(false)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A variable together with a polarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    var: Var,
    positive: bool,
}

impl Literal {
    pub fn new(var: Var, positive: bool) -> Literal {
        Literal { var, positive }
    }

    /// Decodes a signed DIMACS literal; `None` for 0.
    pub fn from_dimacs(code: i64) -> Option<Literal> {
        if code == 0 || code.unsigned_abs() > u32::MAX as u64 {
            return None;
        }
        Some(Literal {
            var: Var(code.unsigned_abs() as u32),
            positive: code > 0,
        })
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var.0 as i64;
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn var(self) -> Var {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn negate(self) -> Literal {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }

    /// Dense code: `2*pos + (negative as usize)`.
    pub fn code(self) -> usize {
        2 * self.var.pos() + usize::from(!self.positive)
    }
}

impl std::ops::Not for Literal {
    type Output = Literal;
    fn not(self) -> Literal {
        self.negate()
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// Partial mapping from variables to truth values.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    /// Complete assignment from a dense vector (position `i` is variable `i+1`).
    pub fn complete(values: &[bool]) -> Assignment {
        Assignment {
            values: values.iter().map(|&b| Some(b)).collect(),
        }
    }

    /// Assignment of the `n` variables from the bits of `index`; variable 1 is
    /// the most significant bit so that increasing `index` gives lexicographic
    /// order.
    pub fn from_index(n: usize, index: u64) -> Assignment {
        Assignment {
            values: (0..n).map(|i| Some((index >> (n - 1 - i)) & 1 == 1)).collect(),
        }
    }

    pub fn from_literals<I: IntoIterator<Item = Literal>>(lits: I) -> Result<Assignment> {
        let mut a = Assignment::new();
        for l in lits {
            if let Some(b) = a.get(l.var()) {
                if b != l.is_positive() {
                    return Err(Error::Invalid(format!("variable {} bound twice", l.var())));
                }
            }
            a.set(l.var(), l.is_positive());
        }
        Ok(a)
    }

    pub fn get(&self, v: Var) -> Option<bool> {
        self.values.get(v.pos()).copied().flatten()
    }

    pub fn set(&mut self, v: Var, value: bool) {
        if self.values.len() <= v.pos() {
            self.values.resize(v.pos() + 1, None);
        }
        self.values[v.pos()] = Some(value);
    }

    pub fn unset(&mut self, v: Var) {
        if let Some(slot) = self.values.get_mut(v.pos()) {
            *slot = None;
        }
    }

    pub fn assign(&mut self, l: Literal) {
        self.set(l.var(), l.is_positive());
    }

    /// `Some(true)` if `l` holds, `Some(false)` if it is falsified, `None` if unbound.
    pub fn value_of(&self, l: Literal) -> Option<bool> {
        self.get(l.var()).map(|b| b == l.is_positive())
    }

    /// True when `l` is not contradicted.
    pub fn allows(&self, l: Literal) -> bool {
        self.value_of(l) != Some(false)
    }

    pub fn is_complete_for(&self, var_count: usize) -> bool {
        (1..=var_count).all(|i| self.get(Var(i as u32)).is_some())
    }

    pub fn len(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Bound literals in increasing variable order.
    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|b| Var::from_pos(i).lit(b)))
    }

    /// Renders the assignment as a 0/1 string over variables `1..=n` (`?` when unbound).
    pub fn to_bits(&self, n: usize) -> String {
        (1..=n)
            .map(|i| match self.get(Var(i as u32)) {
                Some(true) => '1',
                Some(false) => '0',
                None => '?',
            })
            .collect()
    }

    /// Parses evidence such as `"A=1,K=0"` or `"3=0,1=1"`. Names are resolved
    /// through `names` (position `i` names variable `i+1`); plain integers are
    /// taken as 1-based variable indices.
    pub fn parse_evidence(text: &str, names: Option<&[String]>, var_count: usize) -> Result<Assignment> {
        let mut a = Assignment::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::parse(0, format!("evidence item `{item}` lacks `=`")))?;
            let (key, value) = (key.trim(), value.trim());
            let var = resolve_var(key, names, var_count)?;
            let b = match value {
                "1" | "true" | "t" | "T" => true,
                "0" | "false" | "f" | "F" => false,
                _ => return Err(Error::parse(0, format!("bad truth value `{value}`"))),
            };
            if a.get(var).is_some_and(|old| old != b) {
                return Err(Error::parse(0, format!("variable `{key}` bound twice")));
            }
            a.set(var, b);
        }
        Ok(a)
    }
}

/// Resolves a variable by name (if `names` given) or 1-based index.
pub fn resolve_var(key: &str, names: Option<&[String]>, var_count: usize) -> Result<Var> {
    if let Some(names) = names {
        if let Some(p) = names.iter().position(|n| n == key) {
            return Ok(Var::from_pos(p));
        }
    }
    match key.parse::<u32>() {
        Ok(i) if i >= 1 && (i as usize) <= var_count => Ok(Var(i)),
        _ => Err(Error::parse(0, format!("unknown variable `{key}`"))),
    }
}

/// Parses a comma-separated variable list (names or indices).
pub fn parse_var_list(text: &str, names: Option<&[String]>, var_count: usize) -> Result<Vec<Var>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|k| resolve_var(k, names, var_count))
        .collect()
}

/// Set of variables as a bitset over 0-based positions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct VarSet(FixedBitSet);

impl VarSet {
    pub fn with_capacity(var_count: usize) -> VarSet {
        VarSet(FixedBitSet::with_capacity(var_count))
    }

    pub fn singleton(var_count: usize, v: Var) -> VarSet {
        let mut s = VarSet::with_capacity(var_count.max(v.index() as usize));
        s.insert(v);
        s
    }

    pub fn full(var_count: usize) -> VarSet {
        let mut s = VarSet::with_capacity(var_count);
        s.0.insert_range(..);
        s
    }

    pub fn from_vars<I: IntoIterator<Item = Var>>(var_count: usize, vars: I) -> VarSet {
        let mut s = VarSet::with_capacity(var_count);
        for v in vars {
            s.insert(v);
        }
        s
    }

    pub fn insert(&mut self, v: Var) {
        self.0.grow(v.index() as usize);
        self.0.insert(v.pos());
    }

    pub fn contains(&self, v: Var) -> bool {
        self.0.contains(v.pos())
    }

    pub fn union_with(&mut self, other: &VarSet) {
        self.0.union_with(&other.0);
    }

    pub fn is_disjoint(&self, other: &VarSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn is_subset(&self, other: &VarSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Set equality regardless of the underlying capacities.
    pub fn same_vars(&self, other: &VarSet) -> bool {
        self.is_subset(other) && other.is_subset(self)
    }

    pub fn intersection(&self, other: &VarSet) -> Vec<Var> {
        self.0.intersection(&other.0).map(Var::from_pos).collect()
    }

    pub fn difference(&self, other: &VarSet) -> Vec<Var> {
        self.0.difference(&other.0).map(Var::from_pos).collect()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.ones().map(Var::from_pos)
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_literal_codes() {
        let l = Literal::from_dimacs(-3).unwrap();
        assert_eq!(l.var().index(), 3);
        assert!(!l.is_positive());
        assert_eq!((!l).to_dimacs(), 3);
        assert!(Literal::from_dimacs(0).is_none());
    }

    #[test]
    fn index_assignments_are_lexicographic() {
        assert_eq!(Assignment::from_index(2, 1).to_bits(2), "01");
        assert_eq!(Assignment::from_index(3, 4).to_bits(3), "100");
    }

    #[test]
    fn evidence_by_name_and_index() {
        let names: Vec<String> = ["A", "K", "L", "P"].iter().map(|s| s.to_string()).collect();
        let e = Assignment::parse_evidence("A=1, K=0", Some(&names), 4).unwrap();
        assert_eq!(e.get(Var(1)), Some(true));
        assert_eq!(e.get(Var(2)), Some(false));
        let e = Assignment::parse_evidence("4=1", Some(&names), 4).unwrap();
        assert_eq!(e.get(Var(4)), Some(true));
        assert!(Assignment::parse_evidence("Z=1", Some(&names), 4).is_err());
        assert!(Assignment::parse_evidence("A=1,A=0", Some(&names), 4).is_err());
    }

    #[test]
    fn varset_equality_ignores_capacity() {
        let a = VarSet::from_vars(3, [Var(1)]);
        let b = VarSet::from_vars(10, [Var(1)]);
        assert!(a.same_vars(&b));
    }
}
