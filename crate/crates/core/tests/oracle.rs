use std::collections::BTreeSet;

use symsub::chains::{chain_to_sn_embedding, is_chain, max_chain, SearchOptions, SymmetryMode};
use symsub::norton::norton_check;
use symsub::phi::{
    classical_specs, discrepancy_report, documented_conflicts, oracle_options, phi_bruteforce, phi_search, realize,
    FormulaSource,
};
use symsub::{GroupSpec, Sign};

#[test]
fn discrepancies_up_to_six_are_the_documented_conflicts() {
    let got: BTreeSet<GroupSpec> = discrepancy_report(6).unwrap().into_iter().map(|r| r.spec).collect();
    let want: BTreeSet<GroupSpec> = documented_conflicts(6).into_iter().collect();
    assert_eq!(got, want);
}

#[test]
fn orthogonal_minus_eight_is_an_extra_discrepancy() {
    let records = discrepancy_report(8).unwrap();
    let got: BTreeSet<GroupSpec> = records.iter().map(|r| r.spec).collect();
    let mut want: BTreeSet<GroupSpec> = documented_conflicts(8).into_iter().collect();
    let extra = GroupSpec::OrthogonalF2 { n: 8, eps: Sign::Minus };
    want.insert(extra);
    assert_eq!(got, want);
    let r = records.iter().find(|r| r.spec == extra).unwrap();
    assert_eq!((r.phi_proposition, r.phi_conclusion, r.phi_search), (9, 9, 8));
    assert!(r.search_agrees_with.is_empty());
    // every documented conflict is settled in favour of one of the sources
    for r in records.iter().filter(|r| r.spec != extra) {
        assert!(!r.search_agrees_with.is_empty(), "{:?}", r);
    }
}

#[test]
fn conflict_winners() {
    let sides = |spec| {
        let r = discrepancy_report(6).unwrap().into_iter().find(|r| r.spec == spec).unwrap();
        (r.winner, r.search_agrees_with)
    };
    assert_eq!(sides(GroupSpec::Unitary { n: 2 }), (3, vec![FormulaSource::Propositions]));
    let po = |n| GroupSpec::OrthogonalF3 { n, mu: Sign::Minus, pi: Sign::Plus };
    assert_eq!(sides(po(3)), (2, vec![FormulaSource::Propositions]));
    assert_eq!(sides(po(5)), (6, vec![FormulaSource::Propositions]));
}

#[test]
fn oracle_witnesses_give_faithful_symmetric_groups() {
    for spec in classical_specs(6) {
        let r = phi_bruteforce(spec).unwrap();
        let (space, class) = realize(r.normalized).unwrap();
        let w = r.witness.unwrap();
        let check = is_chain(&space, class, &w.vectors()).unwrap();
        assert!(check.is_valid(), "{spec}");
        assert_eq!(w.len() + 1, r.phi_search.unwrap());
        if !w.is_empty() {
            let emb = chain_to_sn_embedding(&space, &w, Some(6)).unwrap();
            assert!(emb.faithful(), "{spec}");
        }
    }
}

#[test]
fn symmetry_modes_agree_on_f2_dimension_six() {
    for spec in [
        GroupSpec::Symplectic { n: 6 },
        GroupSpec::OrthogonalF2 { n: 6, eps: Sign::Plus },
        GroupSpec::OrthogonalF2 { n: 6, eps: Sign::Minus },
    ] {
        let values: Vec<usize> = [SymmetryMode::None, SymmetryMode::FirstVertex, SymmetryMode::Orbit]
            .into_iter()
            .map(|m| phi_search(spec, &SearchOptions::with_symmetry(m)).unwrap().0)
            .collect();
        assert!(values.windows(2).all(|w| w[0] == w[1]), "{spec}: {values:?}");
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let (space, class) = realize(GroupSpec::Unitary { n: 6 }).unwrap();
            let search = max_chain(&space, class, &SearchOptions::default()).unwrap();
            let norton = norton_check(GroupSpec::Symplectic { n: 6 }, 3000, 9).unwrap();
            let oracle = phi_search(GroupSpec::OrthogonalF2 { n: 8, eps: Sign::Minus }, &oracle_options()).unwrap();
            (search, norton, oracle)
        })
    };
    assert_eq!(run(1), run(5));
}
