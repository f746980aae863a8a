//! Bayesian networks: parsing, the joint factor, the weighted-model-counting
//! encoding, and compilation to arithmetic circuits.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;
use petgraph::algo::toposort;
use petgraph::graph::DiGraph;
use tc_core::analysis::smooth;
use tc_core::compile::{compile, CompileOptions};
use tc_core::weights::parse_rational;
use tc_core::{CnfFormula, Error, Literal, NnfCircuit, NnfNode, Result, Var, WeightMap};

use crate::ac::{AcBuilder, ArithmeticCircuit};
use crate::derivatives::backprop;
use crate::factor::{row_count, rows, DiscreteVar, Factor};
use crate::scalar::{near_one, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct BayesNet {
    pub vars: Vec<DiscreteVar>,
    pub parents: Vec<Vec<usize>>,
    /// Row-major conditional tables: parent instantiations in the listed
    /// parent order, the child's value fastest.
    pub cpts: Vec<Vec<BigRational>>,
}

impl BayesNet {
    /// Validates shapes, acyclicity and normalization (to 1e-9).
    pub fn new(vars: Vec<DiscreteVar>, parents: Vec<Vec<usize>>, cpts: Vec<Vec<BigRational>>) -> Result<BayesNet> {
        let n = vars.len();
        if parents.len() != n || cpts.len() != n {
            return Err(Error::Invalid("every variable needs a parent list and a table".into()));
        }
        let mut g = DiGraph::<(), ()>::new();
        let idx: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
        for (child, ps) in parents.iter().enumerate() {
            for (i, &p) in ps.iter().enumerate() {
                if p >= n {
                    return Err(Error::Invalid(format!("{} has an unknown parent", vars[child].name)));
                }
                if ps[..i].contains(&p) {
                    return Err(Error::Invalid(format!("{} lists parent {} twice", vars[child].name, vars[p].name)));
                }
                g.add_edge(idx[p], idx[child], ());
            }
        }
        if let Err(cycle) = toposort(&g, None) {
            return Err(Error::Invalid(format!("cycle through {}", vars[cycle.node_id().index()].name)));
        }
        for (x, table) in cpts.iter().enumerate() {
            let k = vars[x].k();
            let rows: usize = parents[x].iter().map(|&p| vars[p].k()).product::<usize>() * k;
            if table.len() != rows {
                return Err(Error::Invalid(format!("table of {} needs {rows} entries, got {}", vars[x].name, table.len())));
            }
            if table.iter().any(|v| *v < BigRational::zero()) {
                return Err(Error::Invalid(format!("table of {} has a negative entry", vars[x].name)));
            }
            for (j, block) in table.chunks(k).enumerate() {
                let sum = block.iter().fold(BigRational::zero(), |a, b| a + b);
                if !near_one(&sum) {
                    return Err(Error::Invalid(format!("table of {} row {j} sums to {sum}", vars[x].name)));
                }
            }
        }
        Ok(BayesNet { vars, parents, cpts })
    }

    /// Index into the table of `x` for the complete instantiation `row`.
    pub fn cpt_index(&self, x: usize, row: &[usize]) -> usize {
        let u = self.parents[x].iter().fold(0, |acc, &p| acc * self.vars[p].k() + row[p]);
        u * self.vars[x].k() + row[x]
    }

    /// Parent instantiation and child value of entry `j` in the table of `x`.
    pub fn cpt_row(&self, x: usize, j: usize) -> (Vec<(usize, usize)>, usize) {
        let k = self.vars[x].k();
        let mut u = j / k;
        let mut assignment = Vec::with_capacity(self.parents[x].len());
        for &p in self.parents[x].iter().rev() {
            assignment.push((p, u % self.vars[p].k()));
            u /= self.vars[p].k();
        }
        assignment.reverse();
        (assignment, j % k)
    }

    /// Identifier of a table entry, e.g. `B=b1|A=a1`.
    pub fn param_name(&self, x: usize, j: usize) -> String {
        let (us, v) = self.cpt_row(x, j);
        let mut s = format!("{}={}", self.vars[x].name, self.vars[x].labels[v]);
        if !us.is_empty() {
            let ctx: Vec<String> = us
                .iter()
                .map(|&(p, y)| format!("{}={}", self.vars[p].name, self.vars[p].labels[y]))
                .collect();
            s.push('|');
            s.push_str(&ctx.join(","));
        }
        s
    }

    pub fn param_values<T: Scalar>(&self) -> HashMap<String, T> {
        let mut out = HashMap::new();
        for (x, table) in self.cpts.iter().enumerate() {
            for (j, v) in table.iter().enumerate() {
                out.insert(self.param_name(x, j), T::from_rational(v));
            }
        }
        out
    }

    /// The product of all tables.
    pub fn joint_factor<T: Scalar>(&self, cap: u64) -> Result<Factor<T>> {
        row_count(&self.vars, cap)?;
        let values = rows(&self.vars)
            .map(|row| {
                (0..self.vars.len()).fold(T::one(), |acc, x| acc * T::from_rational(&self.cpts[x][self.cpt_index(x, &row)]))
            })
            .collect();
        Factor::new(self.vars.clone(), values)
    }
}

/// Parses `net`, `var NAME K [LABELS…]`, `parents NAME P…` and
/// `cpt NAME V…` lines.
pub fn parse_bn(text: &str) -> Result<BayesNet> {
    let mut seen_header = false;
    let mut vars: Vec<DiscreteVar> = Vec::new();
    let mut parent_names: Vec<Option<(usize, Vec<String>)>> = Vec::new();
    let mut tables: Vec<Option<(usize, Vec<BigRational>)>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] == "net" {
            if seen_header || toks.len() != 1 {
                return Err(Error::parse(lineno, "expected a single `net` header"));
            }
            seen_header = true;
            continue;
        }
        if !seen_header {
            return Err(Error::parse(lineno, "line before `net` header"));
        }
        let name = *toks.get(1).ok_or_else(|| Error::parse(lineno, "missing variable name"))?;
        let var = |vars: &[DiscreteVar]| {
            vars.iter()
                .position(|d| d.name == name)
                .ok_or_else(|| Error::parse(lineno, format!("undeclared variable `{name}`")))
        };
        match toks[0] {
            "var" => {
                let k: usize = toks
                    .get(2)
                    .and_then(|t| t.parse().ok())
                    .filter(|&k| (2..=1 << 16).contains(&k))
                    .ok_or_else(|| Error::parse(lineno, "expected a domain size of at least 2"))?;
                let d = match toks.len() {
                    3 => DiscreteVar::with_default_labels(name, k),
                    n if n == 3 + k => DiscreteVar::new(name, toks[3..].iter().map(|s| s.to_string()).collect()),
                    _ => return Err(Error::parse(lineno, "label count disagrees with the domain size")),
                }
                .map_err(|e| Error::parse(lineno, e.to_string()))?;
                if vars.iter().any(|e| e.name == d.name) {
                    return Err(Error::parse(lineno, format!("variable {name} declared twice")));
                }
                vars.push(d);
                parent_names.push(None);
                tables.push(None);
            }
            "parents" => {
                let x = var(&vars)?;
                if parent_names[x].is_some() {
                    return Err(Error::parse(lineno, format!("parents of {name} given twice")));
                }
                parent_names[x] = Some((lineno, toks[2..].iter().map(|s| s.to_string()).collect()));
            }
            "cpt" => {
                let x = var(&vars)?;
                if tables[x].is_some() {
                    return Err(Error::parse(lineno, format!("table of {name} given twice")));
                }
                let values = toks[2..]
                    .iter()
                    .map(|t| parse_rational(t).ok_or_else(|| Error::parse(lineno, format!("bad probability `{t}`"))))
                    .collect::<Result<Vec<_>>>()?;
                tables[x] = Some((lineno, values));
            }
            other => return Err(Error::parse(lineno, format!("bad line `{other}`"))),
        }
    }
    if !seen_header {
        return Err(Error::parse(0, "missing `net` header"));
    }
    let mut parents = Vec::with_capacity(vars.len());
    for entry in &parent_names {
        let ps = match entry {
            None => Vec::new(),
            Some((lineno, names)) => names
                .iter()
                .map(|p| {
                    vars.iter()
                        .position(|d| d.name == *p)
                        .ok_or_else(|| Error::parse(*lineno, format!("undeclared parent `{p}`")))
                })
                .collect::<Result<Vec<_>>>()?,
        };
        parents.push(ps);
    }
    let mut cpts = Vec::with_capacity(vars.len());
    for (x, t) in tables.into_iter().enumerate() {
        let (_, values) = t.ok_or_else(|| Error::parse(0, format!("no table for {}", vars[x].name)))?;
        cpts.push(values);
    }
    BayesNet::new(vars, parents, cpts).map_err(|e| Error::parse(0, e.to_string()))
}

/// What a CNF variable of the encoding stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Legend {
    Indicator { var: usize, value: usize },
    /// Entry `entry` of the table of `var`.
    Parameter { var: usize, entry: usize },
}

#[derive(Clone, Debug)]
pub struct WmcEncoding {
    pub cnf: CnfFormula,
    pub weights: WeightMap<BigRational>,
    /// Indexed by CNF variable position.
    pub legend: Vec<Legend>,
}

impl WmcEncoding {
    pub fn indicator_var(&self, var: usize, value: usize) -> Var {
        let p = self
            .legend
            .iter()
            .position(|l| *l == Legend::Indicator { var, value })
            .expect("every value has an indicator");
        Var::from_pos(p)
    }

    pub fn indicator_vars(&self) -> Vec<Var> {
        (0..self.legend.len())
            .filter(|&p| matches!(self.legend[p], Legend::Indicator { .. }))
            .map(Var::from_pos)
            .collect()
    }
}

/// One indicator per value with exactly-one clauses per variable, and one
/// parameter variable per table entry, equivalent to the conjunction of
/// the indicators it is conditioned on. Parameter variables weigh their
/// entry when true and 1 when false; indicators weigh 1 both ways.
pub fn encode_wmc(bn: &BayesNet) -> Result<WmcEncoding> {
    let mut legend = Vec::new();
    let mut first_indicator = Vec::with_capacity(bn.vars.len());
    for (x, d) in bn.vars.iter().enumerate() {
        first_indicator.push(legend.len());
        for value in 0..d.k() {
            legend.push(Legend::Indicator { var: x, value });
        }
    }
    let ind = |x: usize, v: usize| Var::from_pos(first_indicator[x] + v);
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    for (x, d) in bn.vars.iter().enumerate() {
        clauses.push((0..d.k()).map(|v| ind(x, v).pos_lit()).collect());
        for a in 0..d.k() {
            for b in a + 1..d.k() {
                clauses.push(vec![ind(x, a).neg_lit(), ind(x, b).neg_lit()]);
            }
        }
    }
    let mut param_weights = Vec::new();
    for (x, table) in bn.cpts.iter().enumerate() {
        for (j, w) in table.iter().enumerate() {
            let theta = Var::from_pos(legend.len());
            legend.push(Legend::Parameter { var: x, entry: j });
            param_weights.push((theta, w.clone()));
            let (us, v) = bn.cpt_row(x, j);
            let mut body: Vec<Var> = us.iter().map(|&(p, y)| ind(p, y)).collect();
            body.push(ind(x, v));
            for &l in &body {
                clauses.push(vec![theta.neg_lit(), l.pos_lit()]);
            }
            let mut back: Vec<Literal> = body.iter().map(|l| l.neg_lit()).collect();
            back.push(theta.pos_lit());
            clauses.push(back);
        }
    }
    let n = legend.len();
    let names: Vec<String> = legend
        .iter()
        .map(|l| match *l {
            Legend::Indicator { var, value } => format!("{}={}", bn.vars[var].name, bn.vars[var].labels[value]),
            Legend::Parameter { var, entry } => format!("th:{}", bn.param_name(var, entry)),
        })
        .collect();
    let mut cnf = CnfFormula::new(n, clauses)?;
    cnf.names = Some(names);
    let mut weights = WeightMap::unit(n);
    for (theta, w) in param_weights {
        weights.set(theta.pos_lit(), w)?;
    }
    Ok(WmcEncoding { cnf, weights, legend })
}

/// Maps a smoothed compilation of the encoding onto an arithmetic circuit:
/// positive indicator literals become indicators, positive parameter
/// literals constants (or named parameters), negative literals the unit,
/// or-gates adders and and-gates multipliers.
pub fn extract_ac<T: Scalar>(bn: &BayesNet, enc: &WmcEncoding, c: &NnfCircuit, symbolic: bool) -> ArithmeticCircuit<T> {
    let mut b = AcBuilder::new(bn.vars.clone());
    let one = b.mul(Vec::new());
    let mut map = Vec::with_capacity(c.len());
    for n in c.nodes() {
        let id = match n {
            NnfNode::Lit(l) if !l.is_positive() => one,
            NnfNode::Lit(l) => match enc.legend[l.var().pos()] {
                Legend::Indicator { var, value } => b.indicator(var, value),
                Legend::Parameter { var, entry } => {
                    if symbolic {
                        b.param(&bn.param_name(var, entry))
                    } else {
                        b.constant(T::from_rational(&bn.cpts[var][entry]))
                    }
                }
            },
            NnfNode::And(cs) => {
                let kids: Vec<usize> = cs.iter().map(|&k| map[k]).filter(|&k| k != one).collect();
                if kids.len() == 1 {
                    kids[0]
                } else {
                    b.mul(kids)
                }
            }
            NnfNode::Or { children, .. } => b.add(children.iter().map(|&k| map[k]).collect()),
        };
        map.push(id);
    }
    b.finish(map[c.root()])
}

/// Encodes, compiles with indicators decided first, smooths and extracts.
pub fn compile_to_ac<T: Scalar>(bn: &BayesNet, symbolic: bool) -> Result<ArithmeticCircuit<T>> {
    let enc = encode_wmc(bn)?;
    let opts = CompileOptions {
        x_first: Some(enc.indicator_vars()),
        ..CompileOptions::default()
    };
    let c = smooth(&compile(&enc.cnf, &opts));
    Ok(extract_ac(bn, &enc, &c, symbolic))
}

/// P(e, X=x) for every variable X and value x, from one forward and one
/// backward pass. Values ruled out by `e` get 0.
pub fn marginals<T: Scalar>(ac: &ArithmeticCircuit<T>, e: &[Option<usize>]) -> Result<Vec<Vec<T>>> {
    ac.marginal(e)?;
    let g = backprop(ac, &ac.setting(e))?;
    let mut out = g.indicators(ac);
    for (v, row) in out.iter_mut().enumerate() {
        if let Some(x) = e.get(v).copied().flatten() {
            for (y, val) in row.iter_mut().enumerate() {
                *val = if y == x { g.value.clone() } else { T::zero() };
            }
        }
    }
    Ok(out)
}

/// The joint-factor view used to check query results: `P(e)`.
pub fn evidence_probability<T: Scalar>(ac: &ArithmeticCircuit<T>, e: &[Option<usize>]) -> Result<T> {
    ac.marginal(e)
}
