//! Brute-force oracles and random generators shared by the integration tests.
#![allow(dead_code)]

use proptest::prelude::*;
use tc_core::{Assignment, Clause, CnfFormula, Literal, NnfBuilder, NnfCircuit, Var, WeightMap};

pub fn fixture(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn all_assignments(n: usize) -> impl Iterator<Item = Assignment> {
    (0..1u64 << n).map(move |i| Assignment::from_index(n, i))
}

/// Clause-by-clause CNF evaluation.
pub fn cnf_holds(f: &CnfFormula, a: &Assignment) -> bool {
    f.clauses
        .iter()
        .all(|c| c.iter().any(|l| a.get(l.var()) == Some(l.is_positive())))
}

/// Node-by-node recursive NNF evaluation, independent of the arena passes.
pub fn nnf_holds(c: &NnfCircuit, a: &Assignment) -> bool {
    fn go(c: &NnfCircuit, id: usize, a: &Assignment) -> bool {
        match c.node(id) {
            tc_core::NnfNode::Lit(l) => a.get(l.var()) == Some(l.is_positive()),
            tc_core::NnfNode::And(cs) => cs.iter().all(|&k| go(c, k, a)),
            tc_core::NnfNode::Or { children, .. } => children.iter().any(|&k| go(c, k, a)),
        }
    }
    go(c, c.root(), a)
}

pub fn weight_of(w: &WeightMap<f64>, a: &Assignment, n: usize) -> f64 {
    (1..=n)
        .map(|i| {
            let v = Var::new(i as u32).unwrap();
            w.get(v.lit(a.get(v).unwrap()))
        })
        .product()
}

pub fn consistent(a: &Assignment, e: &Assignment) -> bool {
    e.literals().all(|l| a.get(l.var()) == Some(l.is_positive()))
}

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

pub fn clause_strategy(n: usize, width: usize) -> impl Strategy<Value = Clause> {
    proptest::collection::vec((1..=n as i64, any::<bool>()), 1..=width).prop_map(|lits| {
        lits.into_iter()
            .map(|(v, p)| Literal::from_dimacs(if p { v } else { -v }).unwrap())
            .collect()
    })
}

/// Random CNF over `1..=max_n` variables with clauses of width up to 3.
pub fn cnf_strategy(max_n: usize, max_clauses: usize) -> impl Strategy<Value = CnfFormula> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(clause_strategy(n, 3), 0..=max_clauses)
            .prop_map(move |cs| CnfFormula::new(n, cs).unwrap())
    })
}

/// Exactly-three-literal random CNF.
pub fn three_cnf(n: usize, m: usize) -> impl Strategy<Value = CnfFormula> {
    proptest::collection::vec(
        proptest::collection::vec((1..=n as i64, any::<bool>()), 3),
        m,
    )
    .prop_map(move |cs| {
        let clauses = cs
            .into_iter()
            .map(|c| {
                c.into_iter()
                    .map(|(v, p)| Literal::from_dimacs(if p { v } else { -v }).unwrap())
                    .collect()
            })
            .collect();
        CnfFormula::new(n, clauses).unwrap()
    })
}

pub fn weights_strategy(n: usize) -> impl Strategy<Value = WeightMap<f64>> {
    proptest::collection::vec(0.0f64..2.0, 2 * n).prop_map(move |ws| {
        let mut w = WeightMap::unit(n);
        for (p, pair) in ws.chunks(2).enumerate() {
            let v = Var::from_pos(p);
            w.set(v.pos_lit(), pair[0]).unwrap();
            w.set(v.neg_lit(), pair[1]).unwrap();
        }
        w
    })
}

/// Arbitrary NNF (not necessarily decomposable) built from a random recipe.
pub fn nnf_strategy(max_n: usize, max_nodes: usize) -> impl Strategy<Value = NnfCircuit> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(
            (0u8..3, proptest::collection::vec(any::<prop::sample::Index>(), 0..4), 1..=n as i64, any::<bool>()),
            1..=max_nodes,
        )
        .prop_map(move |recipe| {
            let mut b = NnfBuilder::new(n);
            let mut ids = Vec::new();
            for (kind, kids, v, p) in recipe {
                let id = if ids.is_empty() || kind == 0 {
                    b.lit(Literal::from_dimacs(if p { v } else { -v }).unwrap())
                } else {
                    let ch: Vec<usize> = kids.iter().map(|k| ids[k.index(ids.len())]).collect();
                    if kind == 1 {
                        b.and(ch)
                    } else {
                        b.or(None, ch)
                    }
                };
                ids.push(id);
            }
            b.finish(*ids.last().unwrap())
        })
    })
}

/// Random partial assignment over `1..=n`.
pub fn evidence_strategy(n: usize) -> impl Strategy<Value = Assignment> {
    proptest::collection::vec(0u8..3, n).prop_map(|vals| {
        let mut a = Assignment::new();
        for (p, v) in vals.into_iter().enumerate() {
            if v < 2 {
                a.set(Var::from_pos(p), v == 1);
            }
        }
        a
    })
}
