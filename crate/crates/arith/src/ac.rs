//! Arithmetic circuits: indicators and constants combined by adders and
//! multipliers, evaluated under indicator settings.

use std::collections::HashMap;
use std::fmt::Write;

use fixedbitset::FixedBitSet;
use num_traits::Zero;
use tc_core::analysis::{Method, PropertyReport, Witness};
use tc_core::weights::parse_rational;
use tc_core::{Error, Result};

use crate::factor::{declaration, format_instantiation, row_count, rows, DiscreteVar, Factor, Inst};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum AcNode<T> {
    Indicator { var: usize, value: usize },
    Constant(T),
    /// Symbolic parameter, an index into the circuit's parameter names.
    Param(usize),
    Add(Vec<usize>),
    Mul(Vec<usize>),
    Max(Vec<usize>),
}

impl<T> AcNode<T> {
    pub fn children(&self) -> &[usize] {
        match self {
            AcNode::Add(c) | AcNode::Mul(c) | AcNode::Max(c) => c,
            _ => &[],
        }
    }
}

/// Value of every indicator, per variable and value.
pub type IndicatorSetting<T> = Vec<Vec<T>>;

/// Nodes in topological order; the root is the last node.
#[derive(Clone, Debug, PartialEq)]
pub struct ArithmeticCircuit<T> {
    vars: Vec<DiscreteVar>,
    nodes: Vec<AcNode<T>>,
    params: Vec<String>,
}

impl<T: Scalar> ArithmeticCircuit<T> {
    pub fn new(vars: Vec<DiscreteVar>, nodes: Vec<AcNode<T>>, params: Vec<String>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Invalid("circuit has no nodes".into()));
        }
        for (i, n) in nodes.iter().enumerate() {
            match n {
                AcNode::Indicator { var, value } => {
                    if vars.get(*var).is_none_or(|d| *value >= d.k()) {
                        return Err(Error::Invalid(format!("node {i}: indicator out of range")));
                    }
                }
                AcNode::Constant(c) if *c < T::zero() => {
                    return Err(Error::Invalid(format!("node {i}: negative constant")));
                }
                AcNode::Param(p) if *p >= params.len() => {
                    return Err(Error::Invalid(format!("node {i}: unknown parameter")));
                }
                _ => {}
            }
            if n.children().iter().any(|&c| c >= i) {
                return Err(Error::Invalid(format!("node {i}: child not before parent")));
            }
        }
        Ok(ArithmeticCircuit { vars, nodes, params })
    }

    pub fn vars(&self) -> &[DiscreteVar] {
        &self.vars
    }

    pub fn nodes(&self) -> &[AcNode<T>] {
        &self.nodes
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.iter().map(|n| n.children().len()).sum()
    }

    /// Indicators compatible with `e` are 1, the others 0.
    pub fn setting(&self, e: &[Option<usize>]) -> IndicatorSetting<T> {
        self.vars
            .iter()
            .enumerate()
            .map(|(v, d)| {
                (0..d.k())
                    .map(|x| match e.get(v).copied().flatten() {
                        Some(y) if y != x => T::zero(),
                        _ => T::one(),
                    })
                    .collect()
            })
            .collect()
    }

    pub fn node_values(&self, s: &IndicatorSetting<T>) -> Result<Vec<T>> {
        let mut val: Vec<T> = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let v = match n {
                AcNode::Indicator { var, value } => s[*var][*value].clone(),
                AcNode::Constant(c) => c.clone(),
                AcNode::Param(p) => {
                    return Err(Error::precondition(format!("parameter `{}` is unbound", self.params[*p])))
                }
                AcNode::Add(cs) => cs.iter().fold(T::zero(), |acc, &c| acc + val[c].clone()),
                AcNode::Mul(cs) => cs.iter().fold(T::one(), |acc, &c| acc * val[c].clone()),
                AcNode::Max(cs) => {
                    let mut best = T::zero();
                    for &c in cs {
                        if val[c] > best {
                            best = val[c].clone();
                        }
                    }
                    best
                }
            };
            val.push(v);
        }
        Ok(val)
    }

    pub fn evaluate_setting(&self, s: &IndicatorSetting<T>) -> Result<T> {
        Ok(self.node_values(s)?.pop().expect("non-empty circuit"))
    }

    pub fn evaluate(&self, e: &[Option<usize>]) -> Result<T> {
        self.evaluate_setting(&self.setting(e))
    }

    /// The circuit's reference point: its value at every complete
    /// instantiation.
    pub fn circuit_factor(&self, cap: u64) -> Result<Factor<T>> {
        row_count(&self.vars, cap)?;
        let values = rows(&self.vars)
            .map(|x| {
                let e: Inst = x.into_iter().map(Some).collect();
                self.evaluate(&e)
            })
            .collect::<Result<Vec<T>>>()?;
        Factor::new(self.vars.clone(), values)
    }

    /// Variables mentioned below each node.
    pub fn node_vars(&self) -> Vec<FixedBitSet> {
        let mut out: Vec<FixedBitSet> = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let mut s = FixedBitSet::with_capacity(self.vars.len());
            match n {
                AcNode::Indicator { var, .. } => s.insert(*var),
                _ => {
                    for &c in n.children() {
                        s.union_with(&out[c]);
                    }
                }
            }
            out.push(s);
        }
        out
    }

    fn var_names(&self, s: &FixedBitSet) -> String {
        let names: Vec<&str> = s.ones().map(|v| self.vars[v].name.as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn check_decomposability(&self) -> PropertyReport {
        let vs = self.node_vars();
        let mut r = PropertyReport::new("decomposable", Method::Structural);
        for (i, n) in self.nodes.iter().enumerate() {
            let AcNode::Mul(cs) = n else { continue };
            let mut seen = FixedBitSet::with_capacity(self.vars.len());
            for &c in cs {
                let shared: FixedBitSet = seen.intersection(&vs[c]).collect();
                if shared.count_ones(..) > 0 {
                    r.witnesses.push(Witness { node: i, detail: format!("shared={}", self.var_names(&shared)) });
                    break;
                }
                seen.union_with(&vs[c]);
            }
        }
        r
    }

    pub fn check_smoothness(&self) -> PropertyReport {
        let vs = self.node_vars();
        let mut r = PropertyReport::new("smooth", Method::Structural);
        for (i, n) in self.nodes.iter().enumerate() {
            if !matches!(n, AcNode::Add(_) | AcNode::Max(_)) {
                continue;
            }
            if let Some(&c) = n.children().iter().find(|&&c| vs[c] != vs[i]) {
                let missing: FixedBitSet = vs[i].difference(&vs[c]).collect();
                r.witnesses.push(Witness { node: i, detail: format!("child={c} missing={}", self.var_names(&missing)) });
            }
        }
        r
    }

    /// Under every complete instantiation, at most one input of each adder
    /// is non-zero.
    pub fn check_determinism(&self, cap: u64) -> Result<PropertyReport> {
        row_count(&self.vars, cap)?;
        let mut r = PropertyReport::new("deterministic", Method::Exhaustive);
        let mut flagged = vec![false; self.nodes.len()];
        for x in rows(&self.vars) {
            let e: Inst = x.into_iter().map(Some).collect();
            let val = self.node_values(&self.setting(&e))?;
            for (i, n) in self.nodes.iter().enumerate() {
                if flagged[i] || !matches!(n, AcNode::Add(_) | AcNode::Max(_)) {
                    continue;
                }
                if n.children().iter().filter(|&&c| !val[c].is_zero()).count() > 1 {
                    flagged[i] = true;
                    r.witnesses.push(Witness {
                        node: i,
                        detail: format!("instantiation={}", format_instantiation(&e, &self.vars)),
                    });
                }
            }
        }
        Ok(r)
    }

    pub fn check_properties(&self, cap: u64) -> Result<AcProperties> {
        Ok(AcProperties {
            decomposable: self.check_decomposability(),
            smooth: self.check_smoothness(),
            deterministic: self.check_determinism(cap)?,
        })
    }

    /// Errors unless the circuit is decomposable, smooth and deterministic.
    pub fn require_tractable(&self, cap: u64) -> Result<()> {
        let p = self.check_properties(cap)?;
        let failing: Vec<&str> = p.all().iter().filter(|r| !r.holds()).map(|r| r.name.as_str()).collect();
        if failing.is_empty() {
            Ok(())
        } else {
            Err(Error::precondition(format!("circuit is not {}", failing.join(", "))))
        }
    }

    /// Sum of the reference-point rows compatible with `e`, by a single
    /// evaluation. Needs decomposability and smoothness.
    pub fn marginal(&self, e: &[Option<usize>]) -> Result<T> {
        for r in [self.check_decomposability(), self.check_smoothness()] {
            if !r.holds() {
                return Err(Error::precondition(format!("marginals need a {} circuit", r.name)));
            }
        }
        self.evaluate(e)
    }

    /// Replaces every symbolic parameter by its value.
    pub fn bind(&self, values: &HashMap<String, T>) -> Result<ArithmeticCircuit<T>> {
        let missing: Vec<&str> = self
            .params
            .iter()
            .filter(|p| !values.contains_key(*p))
            .map(String::as_str)
            .collect();
        if !missing.is_empty() {
            return Err(Error::precondition(format!("unbound parameters: {}", missing.join(" "))));
        }
        let nodes = self
            .nodes
            .iter()
            .map(|n| match n {
                AcNode::Param(p) => AcNode::Constant(values[&self.params[*p]].clone()),
                other => other.clone(),
            })
            .collect();
        ArithmeticCircuit::new(self.vars.clone(), nodes, Vec::new())
    }

    /// `ac N E`, variable declarations, then one line per node.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "ac {} {}", self.nodes.len(), self.edge_count());
        for d in &self.vars {
            let _ = writeln!(out, "{}", declaration(d));
        }
        for n in &self.nodes {
            let gate = |out: &mut String, op: &str, cs: &[usize]| {
                let _ = write!(out, "{op} {}", cs.len());
                for c in cs {
                    let _ = write!(out, " {c}");
                }
                out.push('\n');
            };
            match n {
                AcNode::Indicator { var, value } => {
                    let d = &self.vars[*var];
                    let _ = writeln!(out, "l {} {}", d.name, d.labels[*value]);
                }
                AcNode::Constant(c) => {
                    let _ = writeln!(out, "c {c}");
                }
                AcNode::Param(p) => {
                    let _ = writeln!(out, "p {}", self.params[*p]);
                }
                AcNode::Add(cs) => gate(&mut out, "+", cs),
                AcNode::Mul(cs) => gate(&mut out, "*", cs),
                AcNode::Max(cs) => gate(&mut out, "max", cs),
            }
        }
        out
    }
}

/// The three property reports of an arithmetic circuit.
#[derive(Clone, Debug)]
pub struct AcProperties {
    pub decomposable: PropertyReport,
    pub smooth: PropertyReport,
    pub deterministic: PropertyReport,
}

impl AcProperties {
    pub fn all(&self) -> [&PropertyReport; 3] {
        [&self.decomposable, &self.smooth, &self.deterministic]
    }
}

/// Builds circuits bottom-up, sharing indicator, parameter and constant-one
/// leaves.
#[derive(Clone, Debug)]
pub struct AcBuilder<T> {
    vars: Vec<DiscreteVar>,
    nodes: Vec<AcNode<T>>,
    params: Vec<String>,
    indicators: HashMap<(usize, usize), usize>,
    param_nodes: HashMap<String, usize>,
}

impl<T: Scalar> AcBuilder<T> {
    pub fn new(vars: Vec<DiscreteVar>) -> AcBuilder<T> {
        AcBuilder {
            vars,
            nodes: Vec::new(),
            params: Vec::new(),
            indicators: HashMap::new(),
            param_nodes: HashMap::new(),
        }
    }

    pub fn vars(&self) -> &[DiscreteVar] {
        &self.vars
    }

    pub fn node(&self, id: usize) -> &AcNode<T> {
        &self.nodes[id]
    }

    fn push(&mut self, n: AcNode<T>) -> usize {
        self.nodes.push(n);
        self.nodes.len() - 1
    }

    pub fn indicator(&mut self, var: usize, value: usize) -> usize {
        if let Some(&id) = self.indicators.get(&(var, value)) {
            return id;
        }
        let id = self.push(AcNode::Indicator { var, value });
        self.indicators.insert((var, value), id);
        id
    }

    pub fn constant(&mut self, c: T) -> usize {
        self.push(AcNode::Constant(c))
    }

    pub fn param(&mut self, name: &str) -> usize {
        if let Some(&id) = self.param_nodes.get(name) {
            return id;
        }
        self.params.push(name.to_string());
        let id = self.push(AcNode::Param(self.params.len() - 1));
        self.param_nodes.insert(name.to_string(), id);
        id
    }

    pub fn add(&mut self, children: Vec<usize>) -> usize {
        self.push(AcNode::Add(children))
    }

    pub fn mul(&mut self, children: Vec<usize>) -> usize {
        self.push(AcNode::Mul(children))
    }

    pub fn max(&mut self, children: Vec<usize>) -> usize {
        self.push(AcNode::Max(children))
    }

    /// Keeps the nodes reachable from `root`, which becomes the last node.
    pub fn finish(self, root: usize) -> ArithmeticCircuit<T> {
        let mut keep = vec![false; self.nodes.len()];
        keep[root] = true;
        for i in (0..=root).rev() {
            if keep[i] {
                for &c in self.nodes[i].children() {
                    keep[c] = true;
                }
            }
        }
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        let mut param_remap = vec![usize::MAX; self.params.len()];
        let mut params = Vec::new();
        for (i, n) in self.nodes.into_iter().enumerate().take(root + 1) {
            if !keep[i] {
                continue;
            }
            remap[i] = nodes.len();
            nodes.push(match n {
                AcNode::Add(cs) => AcNode::Add(cs.iter().map(|&c| remap[c]).collect()),
                AcNode::Mul(cs) => AcNode::Mul(cs.iter().map(|&c| remap[c]).collect()),
                AcNode::Max(cs) => AcNode::Max(cs.iter().map(|&c| remap[c]).collect()),
                AcNode::Param(p) => {
                    if param_remap[p] == usize::MAX {
                        param_remap[p] = params.len();
                        params.push(self.params[p].clone());
                    }
                    AcNode::Param(param_remap[p])
                }
                leaf => leaf,
            });
        }
        ArithmeticCircuit::new(self.vars, nodes, params).expect("builder keeps circuits well formed")
    }

    /// Copies `ac` in, matching variables by name; returns the copy's root.
    pub fn import(&mut self, ac: &ArithmeticCircuit<T>) -> Result<usize> {
        let mut var_map = Vec::with_capacity(ac.vars.len());
        for d in &ac.vars {
            match self.vars.iter().position(|e| e.name == d.name) {
                Some(i) if self.vars[i].labels == d.labels => var_map.push(i),
                Some(_) => return Err(Error::Invalid(format!("variable {} has different values", d.name))),
                None => {
                    self.vars.push(d.clone());
                    var_map.push(self.vars.len() - 1);
                }
            }
        }
        let mut map = Vec::with_capacity(ac.nodes.len());
        for n in &ac.nodes {
            let id = match n {
                AcNode::Indicator { var, value } => self.indicator(var_map[*var], *value),
                AcNode::Constant(c) => self.constant(c.clone()),
                AcNode::Param(p) => self.param(&ac.params[*p]),
                AcNode::Add(cs) => self.add(cs.iter().map(|&c| map[c]).collect()),
                AcNode::Mul(cs) => self.mul(cs.iter().map(|&c| map[c]).collect()),
                AcNode::Max(cs) => self.max(cs.iter().map(|&c| map[c]).collect()),
            };
            map.push(id);
        }
        Ok(map[ac.root()])
    }
}

/// The depth-two circuit of a factor: one multiplier per row under a single
/// adder.
pub fn depth_two_circuit<T: Scalar>(f: &Factor<T>, cap: u64) -> Result<ArithmeticCircuit<T>> {
    row_count(&f.vars, cap)?;
    let mut b = AcBuilder::new(f.vars.clone());
    let mut terms = Vec::with_capacity(f.values.len());
    for (x, v) in rows(&f.vars).zip(&f.values) {
        let mut kids = vec![b.constant(v.clone())];
        for (var, &value) in x.iter().enumerate() {
            kids.push(b.indicator(var, value));
        }
        terms.push(b.mul(kids));
    }
    let root = b.add(terms);
    Ok(b.finish(root))
}

/// A single multiplier over both roots. Variables are matched by name.
pub fn multiply_circuits<T: Scalar>(a: &ArithmeticCircuit<T>, b: &ArithmeticCircuit<T>) -> Result<ArithmeticCircuit<T>> {
    let mut builder = AcBuilder::new(a.vars.clone());
    let ra = builder.import(a)?;
    let rb = builder.import(b)?;
    let root = builder.mul(vec![ra, rb]);
    Ok(builder.finish(root))
}

/// Parses the `ac` text format.
pub fn parse_ac<T: Scalar>(text: &str) -> Result<ArithmeticCircuit<T>> {
    let mut header: Option<(usize, usize)> = None;
    let mut vars: Vec<DiscreteVar> = Vec::new();
    let mut nodes: Vec<AcNode<T>> = Vec::new();
    let mut params: Vec<String> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let count = |i: usize| -> Result<usize> {
            toks.get(i)
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::parse(lineno, "expected a count"))
        };
        if toks[0] == "ac" {
            if header.is_some() || toks.len() != 3 {
                return Err(Error::parse(lineno, "expected a single `ac N E` header"));
            }
            header = Some((count(1)?, count(2)?));
            continue;
        }
        if header.is_none() {
            return Err(Error::parse(lineno, "line before `ac` header"));
        }
        let var_index = |name: &str| -> Result<usize> {
            vars.iter()
                .position(|d| d.name == name)
                .ok_or_else(|| Error::parse(lineno, format!("undeclared variable `{name}`")))
        };
        match toks[0] {
            "v" => {
                if !nodes.is_empty() {
                    return Err(Error::parse(lineno, "variables must be declared before nodes"));
                }
                let name = toks.get(1).ok_or_else(|| Error::parse(lineno, "missing name"))?;
                let k = count(2)?;
                if k > 1 << 16 {
                    return Err(Error::parse(lineno, "domain too large"));
                }
                let d = match toks.len() {
                    3 => DiscreteVar::with_default_labels(*name, k),
                    n if n == 3 + k => DiscreteVar::new(*name, toks[3..].iter().map(|s| s.to_string()).collect()),
                    _ => return Err(Error::parse(lineno, "label count disagrees with the domain size")),
                }
                .map_err(|e| Error::parse(lineno, e.to_string()))?;
                if vars.iter().any(|e| e.name == d.name) {
                    return Err(Error::parse(lineno, format!("variable {} declared twice", d.name)));
                }
                vars.push(d);
            }
            "l" if toks.len() == 3 => {
                let var = var_index(toks[1])?;
                let value = vars[var]
                    .value_of(toks[2])
                    .ok_or_else(|| Error::parse(lineno, format!("unknown value `{}`", toks[2])))?;
                nodes.push(AcNode::Indicator { var, value });
            }
            "c" if toks.len() == 2 => {
                let r = parse_rational(toks[1])
                    .filter(|r| *r >= num_rational::BigRational::zero())
                    .ok_or_else(|| Error::parse(lineno, format!("bad constant `{}`", toks[1])))?;
                nodes.push(AcNode::Constant(T::from_rational(&r)));
            }
            "p" if toks.len() == 2 => {
                let p = match params.iter().position(|p| p == toks[1]) {
                    Some(p) => p,
                    None => {
                        params.push(toks[1].to_string());
                        params.len() - 1
                    }
                };
                nodes.push(AcNode::Param(p));
            }
            "+" | "*" | "max" => {
                let k = count(1)?;
                if k.checked_add(2) != Some(toks.len()) {
                    return Err(Error::parse(lineno, "child count disagrees with the line"));
                }
                let mut cs = Vec::with_capacity(k);
                for t in &toks[2..] {
                    let c: usize = t
                        .parse()
                        .map_err(|_| Error::parse(lineno, format!("bad child `{t}`")))?;
                    if c >= nodes.len() {
                        return Err(Error::parse(lineno, format!("child {c} not defined before use")));
                    }
                    cs.push(c);
                }
                nodes.push(match toks[0] {
                    "+" => AcNode::Add(cs),
                    "*" => AcNode::Mul(cs),
                    _ => AcNode::Max(cs),
                });
            }
            other => return Err(Error::parse(lineno, format!("bad line `{other}`"))),
        }
    }
    let (n, e) = header.ok_or_else(|| Error::parse(0, "missing `ac` header"))?;
    if nodes.len() != n {
        return Err(Error::parse(0, format!("header declares {n} nodes, found {}", nodes.len())));
    }
    let ac = ArithmeticCircuit::new(vars, nodes, params).map_err(|err| Error::parse(0, err.to_string()))?;
    if ac.edge_count() != e {
        return Err(Error::parse(0, format!("header declares {e} edges, found {}", ac.edge_count())));
    }
    Ok(ac)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// λa(3λb + 4λb̄) + λā(10λb + 12λb̄)
    const AC2: &str = "ac 17 18\nv A 2\nv B 2\nl A a\nl A ~a\nl B b\nl B ~b\nc 3\nc 4\nc 10\nc 12\n\
        * 2 4 2\n* 2 5 3\n+ 2 8 9\n* 2 6 2\n* 2 7 3\n+ 2 11 12\n* 2 0 10\n* 2 1 13\n+ 2 14 15\n";

    fn ac2() -> ArithmeticCircuit<f64> {
        parse_ac(AC2).unwrap()
    }

    #[test]
    fn parse_survives_hostile_counts() {
        let text = format!("ac 2 0\nv A 2\nl A a\n+ {} 0\n", usize::MAX);
        assert!(parse_ac::<f64>(&text).is_err());
        let wide = parse_ac::<f64>("ac 1 0\nv A 60000\nl A a59999\n").unwrap();
        assert_eq!(wide.vars()[0].k(), 60000);
    }

    #[test]
    fn evaluation_and_reference_point() {
        let ac = ac2();
        let f = ac.circuit_factor(DEFAULT_CAP).unwrap();
        assert_eq!(f.values, vec![3.0, 4.0, 10.0, 12.0]);
        assert_eq!(ac.marginal(&[Some(0), None]).unwrap(), 7.0);
        assert_eq!(ac.evaluate(&[None, None]).unwrap(), 29.0);
        let p = ac.check_properties(DEFAULT_CAP).unwrap();
        assert!(p.all().iter().all(|r| r.holds()));
    }

    const DEFAULT_CAP: u64 = 1 << 12;

    #[test]
    fn text_round_trips() {
        let ac = ac2();
        let back: ArithmeticCircuit<f64> = parse_ac(&ac.to_text()).unwrap();
        assert_eq!(back, ac);
        assert!(parse_ac::<f64>("ac 1 0\nv A 2\nl A z\n").is_err());
        assert!(parse_ac::<f64>("ac 2 1\nv A 2\nl A a\n+ 1 5\n").is_err());
        assert!(parse_ac::<f64>("ac 1 0\nc -1\n").is_err());
    }

    #[test]
    fn depth_two_and_products() {
        let a = DiscreteVar::with_default_labels("A", 2).unwrap();
        let b = DiscreteVar::with_default_labels("B", 2).unwrap();
        let f1 = Factor::new(vec![a.clone()], vec![1.0, 2.0]).unwrap();
        let f2 = Factor::new(vec![a, b], vec![3.0, 4.0, 5.0, 6.0]).unwrap();
        let p = multiply_circuits(&depth_two_circuit(&f1, 16).unwrap(), &depth_two_circuit(&f2, 16).unwrap()).unwrap();
        assert_eq!(p.circuit_factor(16).unwrap().values, vec![3.0, 4.0, 10.0, 12.0]);
        assert_eq!(p.evaluate(&[None, Some(0)]).unwrap(), 24.0);
        assert!(!p.check_decomposability().holds());
    }

    #[test]
    fn binding_symbolic_parameters() {
        let a = DiscreteVar::with_default_labels("A", 2).unwrap();
        let mut b = AcBuilder::<f64>::new(vec![a]);
        let t = b.param("t");
        let l = b.indicator(0, 0);
        let root = b.mul(vec![t, l]);
        let ac = b.finish(root);
        assert!(ac.evaluate(&[None]).is_err());
        assert!(ac.bind(&HashMap::new()).is_err());
        let bound = ac.bind(&HashMap::from([("t".to_string(), 0.25)])).unwrap();
        assert_eq!(bound.evaluate(&[None]).unwrap(), 0.25);
    }
}
