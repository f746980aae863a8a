//! Seeded generators and brute-force oracles shared by the integration
//! tests and the acceptance harness.
#![allow(dead_code)]

use std::collections::HashMap;

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tc_arith::ac::{AcBuilder, AcNode, ArithmeticCircuit, IndicatorSetting};
use tc_arith::bn::BayesNet;
use tc_arith::dataset::Dataset;
use tc_arith::factor::{DiscreteVar, Factor};
use tc_arith::psdd::{decisions, Psdd};
use tc_arith::Scalar;
use tc_core::sdd::{SddNode, FALSE};
use tc_core::vtree::Shape;
use tc_core::{Assignment, CnfFormula, Literal, SddId, SddManager, Var, Vtree};

pub fn fixture(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Node-by-node recursive evaluation, independent of the circuit's passes.
pub fn oracle_eval<T: Scalar>(ac: &ArithmeticCircuit<T>, s: &IndicatorSetting<T>) -> T {
    fn go<T: Scalar>(ac: &ArithmeticCircuit<T>, n: usize, s: &IndicatorSetting<T>) -> T {
        match &ac.nodes()[n] {
            AcNode::Indicator { var, value } => s[*var][*value].clone(),
            AcNode::Constant(c) => c.clone(),
            AcNode::Param(_) => panic!("unbound parameter"),
            AcNode::Add(cs) => cs.iter().fold(T::zero(), |a, &c| a + go(ac, c, s)),
            AcNode::Mul(cs) => cs.iter().fold(T::one(), |a, &c| a * go(ac, c, s)),
            AcNode::Max(cs) => cs.iter().fold(T::zero(), |a, &c| {
                let v = go(ac, c, s);
                if v > a {
                    v
                } else {
                    a
                }
            }),
        }
    }
    go(ac, ac.root(), s)
}

/// All complete instantiations, first variable slowest.
pub fn all_rows(vars: &[DiscreteVar]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for d in vars {
        out = out
            .into_iter()
            .flat_map(|r| {
                (0..d.k()).map(move |x| {
                    let mut r = r.clone();
                    r.push(x);
                    r
                })
            })
            .collect();
    }
    out
}

pub fn complete(x: &[usize]) -> Vec<Option<usize>> {
    x.iter().map(|&v| Some(v)).collect()
}

pub fn compatible(x: &[usize], e: &[Option<usize>]) -> bool {
    x.iter().zip(e).all(|(a, b)| b.is_none_or(|b| b == *a))
}

pub fn random_vars(r: &mut ChaCha8Rng, n: usize, max_k: usize) -> Vec<DiscreteVar> {
    (0..n)
        .map(|i| DiscreteVar::with_default_labels(format!("V{i}"), r.gen_range(2..=max_k)).unwrap())
        .collect()
}

pub fn random_evidence(r: &mut ChaCha8Rng, vars: &[DiscreteVar]) -> Vec<Option<usize>> {
    vars.iter()
        .map(|d| r.gen_bool(0.4).then(|| r.gen_range(0..d.k())))
        .collect()
}

/// Arbitrary circuit: no structural property is promised.
pub fn random_ac(r: &mut ChaCha8Rng, vars: &[DiscreteVar], gates: usize) -> ArithmeticCircuit<f64> {
    let mut b = AcBuilder::new(vars.to_vec());
    let mut ids = Vec::new();
    for (v, d) in vars.iter().enumerate() {
        for x in 0..d.k() {
            ids.push(b.indicator(v, x));
        }
    }
    for _ in 0..3 {
        ids.push(b.constant(r.gen_range(0.0..2.0)));
    }
    for _ in 0..gates {
        let k = r.gen_range(1..=3);
        let kids: Vec<usize> = (0..k).map(|_| ids[r.gen_range(0..ids.len())]).collect();
        ids.push(if r.gen_bool(0.5) { b.add(kids) } else { b.mul(kids) });
    }
    let root = *ids.last().unwrap();
    b.finish(root)
}

/// Random decomposable, deterministic and smooth circuit over `vars`:
/// products over variable partitions and adders branching on one variable.
pub fn random_tractable_ac(r: &mut ChaCha8Rng, vars: &[DiscreteVar]) -> ArithmeticCircuit<f64> {
    fn build(b: &mut AcBuilder<f64>, r: &mut ChaCha8Rng, scope: &mut Vec<usize>, k: &[usize]) -> usize {
        if scope.len() >= 2 && r.gen_bool(0.3) {
            scope.shuffle(r);
            let cut = r.gen_range(1..scope.len());
            let mut right = scope.split_off(cut);
            let a = build(b, r, scope, k);
            let c = build(b, r, &mut right, k);
            return b.mul(vec![a, c]);
        }
        let x = scope.swap_remove(r.gen_range(0..scope.len()));
        let mut values: Vec<usize> = (0..k[x]).filter(|_| r.gen_bool(0.8)).collect();
        if values.is_empty() {
            values.push(r.gen_range(0..k[x]));
        }
        let mut terms = Vec::new();
        for v in values {
            let w = if r.gen_bool(0.1) { 0.0 } else { r.gen_range(0.1..3.0) };
            let mut kids = vec![b.indicator(x, v), b.constant(w)];
            if !scope.is_empty() {
                kids.push(build(b, r, &mut scope.clone(), k));
            }
            terms.push(b.mul(kids));
        }
        b.add(terms)
    }
    let k: Vec<usize> = vars.iter().map(DiscreteVar::k).collect();
    let mut b = AcBuilder::new(vars.to_vec());
    let mut scope: Vec<usize> = (0..vars.len()).collect();
    let root = build(&mut b, r, &mut scope, &k);
    b.finish(root)
}

pub fn random_factor(r: &mut ChaCha8Rng, vars: &[DiscreteVar]) -> Factor<f64> {
    let n: usize = vars.iter().map(DiscreteVar::k).product();
    Factor::new(vars.to_vec(), (0..n).map(|_| r.gen_range(0.0..5.0)).collect()).unwrap()
}

/// Random distribution with exact rational entries summing to one.
fn random_distribution(r: &mut ChaCha8Rng, k: usize) -> Vec<BigRational> {
    let w: Vec<i64> = (0..k).map(|_| r.gen_range(0..=9)).collect();
    let total: i64 = w.iter().sum();
    if total == 0 {
        return (0..k).map(|i| q(i64::from(i == 0), 1)).collect();
    }
    w.into_iter().map(|x| q(x, total)).collect()
}

/// Random network: variables in a random topological order, each with up to
/// two earlier parents.
pub fn random_bn(r: &mut ChaCha8Rng, max_nodes: usize, max_k: usize) -> BayesNet {
    let n = r.gen_range(1..=max_nodes);
    let vars = random_vars(r, n, max_k);
    let mut parents = Vec::with_capacity(n);
    let mut cpts = Vec::with_capacity(n);
    for x in 0..n {
        let mut ps: Vec<usize> = (0..x).filter(|_| r.gen_bool(0.4)).collect();
        ps.shuffle(r);
        ps.truncate(2);
        let rows: usize = ps.iter().map(|&p| vars[p].k()).product();
        let mut table = Vec::new();
        for _ in 0..rows {
            table.extend(random_distribution(r, vars[x].k()));
        }
        parents.push(ps);
        cpts.push(table);
    }
    BayesNet::new(vars, parents, cpts).unwrap()
}

pub fn random_vtree(r: &mut ChaCha8Rng, n: usize) -> Vtree {
    let mut vars: Vec<Var> = (0..n).map(Var::from_pos).collect();
    vars.shuffle(r);
    fn build(vars: &[Var], r: &mut ChaCha8Rng) -> Shape {
        if vars.len() == 1 {
            return Shape::Leaf(vars[0]);
        }
        let k = r.gen_range(1..vars.len());
        Shape::Node(Box::new(build(&vars[..k], r)), Box::new(build(&vars[k..], r)))
    }
    Vtree::from_shape(&build(&vars, r)).unwrap()
}

pub fn random_cnf(r: &mut ChaCha8Rng, n: usize, clauses: usize, width: usize) -> CnfFormula {
    let cs = (0..clauses)
        .map(|_| {
            (0..width)
                .map(|_| Var::from_pos(r.gen_range(0..n)).lit(r.gen_bool(0.5)))
                .collect::<Vec<Literal>>()
        })
        .collect();
    CnfFormula::new(n, cs).unwrap()
}

/// A satisfiable SDD over `n` variables on a random vtree.
pub fn random_base(r: &mut ChaCha8Rng, n: usize) -> (SddManager, SddId) {
    loop {
        let mut m = SddManager::new(random_vtree(r, n));
        let (clauses, width) = (r.gen_range(0..=n + 1), r.gen_range(1..=3));
        let f = random_cnf(r, n, clauses, width);
        let root = m.compile_cnf(&f).unwrap();
        if root != FALSE {
            return (m, root);
        }
    }
}

/// Random valid parameters: zero on elements with a false sub.
pub fn random_params(r: &mut ChaCha8Rng, m: &SddManager, root: SddId) -> (HashMap<SddId, Vec<BigRational>>, Vec<BigRational>) {
    let mut theta = HashMap::new();
    for id in decisions(m, root) {
        let els = m.elements(id);
        let w: Vec<i64> = els
            .iter()
            .map(|&(_, s)| if s == FALSE { 0 } else { r.gen_range(1..=9) })
            .collect();
        let total: i64 = w.iter().sum();
        theta.insert(id, w.into_iter().map(|x| q(x, total)).collect());
    }
    let bern = (0..m.var_count()).map(|_| q(r.gen_range(0..=10), 10)).collect();
    (theta, bern)
}

pub fn random_psdd(r: &mut ChaCha8Rng, m: SddManager, root: SddId) -> Psdd<BigRational> {
    let (theta, bern) = random_params(r, &m, root);
    Psdd::attach_params(m, root, theta, bern).unwrap()
}

pub fn to_f64_psdd(p: &Psdd<BigRational>) -> Psdd<f64> {
    let m = p.manager().clone();
    let theta = decisions(&m, p.root())
        .into_iter()
        .map(|id| (id, p.theta(id).unwrap().iter().map(Scalar::to_f64).collect()))
        .collect();
    let bern = (0..m.var_count()).map(|i| p.bernoulli(Var::from_pos(i)).to_f64()).collect();
    Psdd::attach_params(m, p.root(), theta, bern).unwrap()
}

pub fn bits(n: usize, i: usize) -> Vec<bool> {
    (0..n).map(|p| i >> (n - 1 - p) & 1 == 1).collect()
}

pub fn sdd_holds(m: &SddManager, id: SddId, x: &[bool]) -> bool {
    match m.node(id) {
        SddNode::False => false,
        SddNode::True => true,
        SddNode::Lit(l) => x[l.var().pos()] == l.is_positive(),
        SddNode::Decision { elements, .. } => elements.iter().any(|&(p, s)| sdd_holds(m, p, x) && sdd_holds(m, s, x)),
    }
}

/// Random feasible rows of the base with random multiplicities.
pub fn random_dataset(r: &mut ChaCha8Rng, m: &SddManager, root: SddId) -> Dataset {
    let n = m.var_count();
    let feasible: Vec<Vec<bool>> = (0..1usize << n).map(|i| bits(n, i)).filter(|x| sdd_holds(m, root, x)).collect();
    let mut d = Dataset::new(n);
    for _ in 0..r.gen_range(1..=12) {
        let x = feasible[r.gen_range(0..feasible.len())].clone();
        d.push(x, r.gen_range(1..=5)).unwrap();
    }
    d
}

pub fn assignment(x: &[bool]) -> Assignment {
    Assignment::complete(x)
}

/// Element counts per decision node: each row follows the element whose
/// prime it satisfies, through both prime and sub.
pub fn oracle_element_counts(m: &SddManager, root: SddId, d: &Dataset) -> HashMap<SddId, Vec<u64>> {
    fn route(m: &SddManager, id: SddId, x: &[bool], c: u64, out: &mut HashMap<SddId, Vec<u64>>) {
        if let SddNode::Decision { elements, .. } = m.node(id) {
            let i = elements.iter().position(|&(p, _)| sdd_holds(m, p, x)).expect("primes partition");
            out.entry(id).or_insert_with(|| vec![0; elements.len()])[i] += c;
            route(m, elements[i].0, x, c, out);
            route(m, elements[i].1, x, c, out);
        }
    }
    let mut out = HashMap::new();
    for (x, c) in &d.rows {
        if sdd_holds(m, root, x) {
            route(m, root, x, *c, &mut out);
        }
    }
    out
}
