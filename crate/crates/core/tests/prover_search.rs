//! Search-capability tests for the backward prover: rediscovery of the two
//! worked proofs and the provability boundary around choice reusability.

use gameproof_core::calculus::{check_proof, prove, ProveBudgets, ProveOutcome};
use gameproof_core::classical::Budgets;
use gameproof_core::syntax::parse_sequent;

fn provable(s: &str) -> bool {
    let seq = parse_sequent(s).unwrap();
    match prove(&seq, &ProveBudgets::default()) {
        ProveOutcome::Proved(p) => {
            assert_eq!(check_proof(&p, &Budgets::default()), Ok(()), "re-check of {s}");
            assert_eq!(*p.conclusion(), seq);
            true
        }
        ProveOutcome::Unprovable => false,
        ProveOutcome::Unknown => panic!("unknown verdict for {s}"),
    }
}

#[test]
fn rediscovers_cube_proof() {
    assert!(provable(
        "Ax: (cube(x)=mul(mul(x,x),x)), !x: !y: ?z: (z=mul(x,y)) => !x: ?y: (y=cube(x))"
    ));
}

#[test]
fn rediscovers_quantifier_order_proof() {
    assert!(provable("=> !x: ?y: (p(x) -> p(y))"));
    assert!(!provable("=> ?y: !x: (p(x) -> p(y))"));
}

#[test]
fn reusability_boundary_sequent_form() {
    // one branching copy of the antecedent suffices for two parallel demands
    assert!(provable(
        "?x: !y: p(x,y) => ?x: (!y: p(x,y) /\\ !y: p(x,y))"
    ));
}

#[test]
fn reusability_boundary_formula_forms() {
    // the parallel forms are unprovable no matter how many copies
    assert!(!provable(
        "=> ?x: !y: p(x,y) -> ?x: (!y: p(x,y) /\\ !y: p(x,y))"
    ));
    assert!(!provable(
        "=> ?x: !y: p(x,y) /\\ ?x: !y: p(x,y) -> ?x: (!y: p(x,y) /\\ !y: p(x,y))"
    ));
}
