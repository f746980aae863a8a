mod common;

use common::{all_assignments, fixture, nnf_holds};
use num_bigint::BigUint;
use tc_core::analysis::{
    check_decision, check_decomposability, check_determinism_exhaustive, check_smoothness,
    check_structured,
};
use tc_core::queries::{conditioned_count, literal_marginal_counts, model_count};
use tc_core::{parse_cnf, parse_nnf, parse_vtree, Assignment, TrustOptions, Var, WeightMap};

fn var(i: u32) -> Var {
    Var::new(i).unwrap()
}

#[test]
fn smooth_decision_circuit_counts_nine_of_sixteen() {
    let c = parse_nnf(&fixture("smooth_decision_aklp.nnf")).unwrap();
    assert_eq!(c.var_count, 4);
    assert!(check_decomposability(&c).holds());
    assert!(check_decision(&c).holds());
    assert!(check_smoothness(&c, false).unwrap().holds());
    assert_eq!(model_count(&c, &TrustOptions::default()).unwrap(), BigUint::from(9u32));
    let oracle = all_assignments(4).filter(|a| nnf_holds(&c, a)).count();
    assert_eq!(oracle, 9);
}

#[test]
fn conditioning_on_a_high_k_low_leaves_two() {
    let c = parse_nnf(&fixture("smooth_decision_aklp.nnf")).unwrap();
    let e = Assignment::parse_evidence("A=1,K=0", c.names.as_deref(), 4).unwrap();
    assert_eq!(conditioned_count(&c, &e, &TrustOptions::default()).unwrap(), BigUint::from(2u32));
}

#[test]
fn complete_evidence_counts_zero_or_one() {
    let c = parse_nnf(&fixture("smooth_decision_aklp.nnf")).unwrap();
    for a in all_assignments(4) {
        let want = u32::from(nnf_holds(&c, &a));
        assert_eq!(conditioned_count(&c, &a, &TrustOptions::default()).unwrap(), BigUint::from(want));
    }
}

#[test]
fn literal_counts_match_per_literal_conditioning() {
    let c = parse_nnf(&fixture("smooth_decision_aklp.nnf")).unwrap();
    let w = WeightMap::<BigUint>::unit(4);
    let m = literal_marginal_counts(&c, &w, &Assignment::new(), &TrustOptions::default()).unwrap();
    for p in 0..4 {
        for positive in [true, false] {
            let l = Var::from_pos(p).lit(positive);
            let e = Assignment::from_literals([l]).unwrap();
            let direct = conditioned_count(&c, &e, &TrustOptions::default()).unwrap();
            assert_eq!(m[l.code()], direct, "literal {l}");
        }
    }
}

#[test]
fn dnnf_is_decomposable_deterministic_and_structured() {
    let c = parse_nnf(&fixture("dnnf_aklp.nnf")).unwrap();
    assert!(check_decomposability(&c).holds());
    assert!(check_determinism_exhaustive(&c, 20).unwrap().holds());
    let v = parse_vtree(&fixture("balanced.vtree")).unwrap();
    let r = check_structured(&c, &v);
    assert!(r.holds(), "{r}");
    // The and-gates directly below the root or-gate conform to the vtree root.
    let root_vtree = format!("vtree={}", v.external_id(v.root()));
    assert_eq!(root_vtree, "vtree=1");
    for &k in c.node(c.root()).children() {
        let note = r.annotations.iter().find(|(n, _)| *n == k).map(|(_, s)| s.clone());
        assert_eq!(note.as_deref(), Some(root_vtree.as_str()), "and-gate {k}");
    }
}

#[test]
fn dnnf_or_gates_have_at_most_one_high_input_when_all_high() {
    let c = parse_nnf(&fixture("dnnf_aklp.nnf")).unwrap();
    let all_high = Assignment::complete(&[true; 4]);
    let vals = c.eval_nodes(&all_high).unwrap();
    for (id, node) in c.nodes().iter().enumerate() {
        if let tc_core::NnfNode::Or { children, .. } = node {
            assert!(children.iter().filter(|&&k| vals[k]).count() <= 1, "or-gate {id}");
        }
    }
    assert_eq!(c.evaluate(&all_high).unwrap(), nnf_holds(&c, &all_high));
}

#[test]
fn vtree_shapes() {
    let bal = parse_vtree(&fixture("balanced.vtree")).unwrap();
    assert!(!bal.is_right_linear());
    let rl = parse_vtree(&fixture("right_linear.vtree")).unwrap();
    assert!(rl.is_right_linear());
    let con = parse_vtree(&fixture("constrained.vtree")).unwrap();
    let class = con.classify(&[var(1), var(2), var(4)]);
    assert!(class.constrained_for_x());
    assert_eq!(con.vars(class.constrained_node.unwrap()), vec![var(3), var(5)]);
    assert_eq!(bal.classify(&[]).constrained_node, Some(bal.root()));
}

#[test]
fn fixture_codecs_round_trip() {
    for name in ["dnnf_aklp.nnf", "smooth_decision_aklp.nnf"] {
        let c = parse_nnf(&fixture(name)).unwrap();
        assert_eq!(parse_nnf(&c.to_text()).unwrap(), c, "{name}");
        let text = fixture(name);
        let body: Vec<&str> = text
            .lines()
            .filter(|l| !l.starts_with("c ") || l.starts_with("c names"))
            .collect();
        let ours: Vec<String> = c.to_text().lines().map(str::to_string).collect();
        assert_eq!(body, ours, "{name}");
    }
    for name in ["balanced.vtree", "constrained.vtree", "right_linear.vtree"] {
        let v = parse_vtree(&fixture(name)).unwrap();
        let body: Vec<String> = fixture(name).lines().filter(|l| !l.starts_with('c')).map(str::to_string).collect();
        let ours: Vec<String> = v.to_text().lines().map(str::to_string).collect();
        assert_eq!(body, ours, "{name}");
    }
    let f = parse_cnf(&fixture("two_clauses.cnf")).unwrap();
    assert_eq!(parse_cnf(&f.to_dimacs()).unwrap(), f);
}
