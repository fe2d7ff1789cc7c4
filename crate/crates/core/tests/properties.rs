mod common;

use proptest::prelude::*;

use symsub::chains::{is_chain, witt_extend, PartialIsometry};
use symsub::phi::{filter_universe, normalize_spec, phi_formula, FormulaSource};
use symsub::transpositions::{apply_transposition, canonical_rep, class_representatives, in_class_d, matrix_of};
use symsub::{ClassSpec, FieldId, FormSpace, GroupSpec, Sign, Vector};

const FIELDS: [FieldId; 3] = [FieldId::F2, FieldId::F3, FieldId::F4];

fn field() -> impl Strategy<Value = FieldId> {
    prop::sample::select(FIELDS.to_vec())
}

/// A field and three of its elements.
fn triple() -> impl Strategy<Value = (FieldId, u8, u8, u8)> {
    field().prop_flat_map(|f| {
        let r = 0..f.order();
        (Just(f), r.clone(), r.clone(), r)
    })
}

fn space_pool() -> Vec<(FormSpace, ClassSpec)> {
    common::presets(4, 3)
}

fn spec_strategy() -> impl Strategy<Value = GroupSpec> {
    let sign = prop::sample::select(vec![Sign::Plus, Sign::Minus]);
    prop_oneof![
        (0usize..30).prop_map(|n| GroupSpec::Symmetric { n }),
        (0usize..30).prop_map(|n| GroupSpec::Symplectic { n }),
        (0usize..30).prop_map(|n| GroupSpec::Unitary { n }),
        (0usize..30, sign.clone()).prop_map(|(n, eps)| GroupSpec::OrthogonalF2 { n, eps }),
        (0usize..30, sign.clone(), sign).prop_map(|(n, mu, pi)| GroupSpec::OrthogonalF3 { n, mu, pi }),
        (18usize..28).prop_map(|n| GroupSpec::Fischer { n }),
    ]
}

proptest! {
    #[test]
    fn field_axioms((f, a, b, c) in triple()) {
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism((f, a, b, _c) in triple()) {
        prop_assert_eq!(f.conj(f.conj(a)), a);
        prop_assert_eq!(f.conj(f.mul(a, b)), f.mul(f.conj(a), f.conj(b)));
        prop_assert_eq!(f.conj(f.add(a, b)), f.add(f.conj(a), f.conj(b)));
    }

    #[test]
    fn transpositions_are_isometric_involutions(idx in 0usize..1000, pick in 0usize..1000) {
        let pool = space_pool();
        let (space, spec) = &pool[idx % pool.len()];
        let reps = class_representatives(space, *spec).unwrap();
        prop_assume!(!reps.is_empty());
        let v = &reps[pick % reps.len()];
        let t = matrix_of(space, *spec, v).unwrap();
        prop_assert!(space.is_isometry(&t));
        prop_assert!(!t.is_identity());
        prop_assert!(t.mul(&t).is_identity());
        // D is a conjugacy class: t permutes the representatives
        for w in &reps {
            let image = canonical_rep(&t.mul_vec(w)).unwrap();
            prop_assert!(in_class_d(space, *spec, &image));
        }
    }

    #[test]
    fn products_of_class_elements_have_order_at_most_three(idx in 0usize..1000, a in 0usize..1000, b in 0usize..1000) {
        let pool = space_pool();
        let (space, spec) = &pool[idx % pool.len()];
        let reps = class_representatives(space, *spec).unwrap();
        prop_assume!(!reps.is_empty());
        let (v, w) = (&reps[a % reps.len()], &reps[b % reps.len()]);
        let p = matrix_of(space, *spec, v).unwrap().mul(&matrix_of(space, *spec, w).unwrap());
        let order = p.order(6).unwrap();
        let orthogonal = space.bilinear(v, w).unwrap().is_zero();
        prop_assert!(order <= 3);
        if v == w {
            prop_assert_eq!(order, 1);
        } else {
            prop_assert_eq!(order, if orthogonal { 2 } else { 3 });
        }
    }

    #[test]
    fn action_matches_matrix(idx in 0usize..1000, pick in 0usize..1000, coords in prop::collection::vec(0u8..4, 4)) {
        let pool = space_pool();
        let (space, spec) = &pool[idx % pool.len()];
        let reps = class_representatives(space, *spec).unwrap();
        prop_assume!(!reps.is_empty());
        let f = space.field();
        let w = Vector::from_codes(f, coords.iter().take(space.dim()).map(|c| c % f.order()).collect()).unwrap();
        let v = &reps[pick % reps.len()];
        let direct = apply_transposition(space, *spec, v, &w).unwrap();
        prop_assert_eq!(direct, matrix_of(space, *spec, v).unwrap().mul_vec(&w));
    }

    #[test]
    fn canonical_rep_is_idempotent_and_projective(f in field(), coords in prop::collection::vec(0u8..4, 1..6), c in 1u8..4) {
        let v = Vector::from_codes(f, coords.iter().map(|x| x % f.order()).collect()).unwrap();
        prop_assume!(!v.is_zero());
        let c = 1 + (c - 1) % (f.order() - 1);
        let r = canonical_rep(&v).unwrap();
        prop_assert_eq!(canonical_rep(&r).unwrap(), r.clone());
        prop_assert_eq!(canonical_rep(&v.scale_code(c)).unwrap(), r);
    }

    #[test]
    fn normalize_is_idempotent(spec in spec_strategy()) {
        let once = normalize_spec(spec);
        prop_assert_eq!(normalize_spec(once), once);
        prop_assert_eq!(once.dim() + usize::from(matches!(spec, GroupSpec::OrthogonalF2 { n, .. } if n % 2 == 1)), spec.dim());
    }

    #[test]
    fn formulas_respect_isomorphisms(spec in spec_strategy()) {
        for source in [FormulaSource::Propositions, FormulaSource::Conclusion] {
            match phi_formula(spec, source) {
                Ok(v) => {
                    prop_assert!(spec.validate().is_ok());
                    prop_assert_eq!(phi_formula(normalize_spec(spec), source).unwrap(), v);
                    // lowest is O+(4,2) with 3
                    if spec.is_classical() {
                        prop_assert!(v + 1 >= spec.dim());
                    }
                }
                Err(_) => prop_assert!(spec.validate().is_err()),
            }
        }
    }

    #[test]
    fn is_chain_never_panics(idx in 0usize..1000, picks in prop::collection::vec(0usize..1000, 0..7)) {
        let pool = space_pool();
        let (space, spec) = &pool[idx % pool.len()];
        let all: Vec<Vector> = Vector::all(space.field(), space.dim()).collect();
        let vs: Vec<Vector> = picks.iter().map(|i| all[i % all.len()].clone()).collect();
        let check = is_chain(space, *spec, &vs).unwrap();
        prop_assert_eq!(check.length, vs.len());
    }

    #[test]
    fn witt_extension_of_identity(idx in 0usize..1000, seed in any::<u64>()) {
        use rand::SeedableRng;
        let pool = space_pool();
        let (space, _) = &pool[idx % pool.len()];
        prop_assume!(space.is_nondegenerate());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let k = 1 + (seed as usize) % space.dim();
        let dom = common::random_independent(space, k, &mut rng);
        let p = PartialIsometry::new(space, dom.clone(), dom.clone()).unwrap();
        let t = witt_extend(space, &p).unwrap();
        prop_assert!(space.is_isometry(&t));
        for u in &dom {
            prop_assert_eq!(&t.mul_vec(u), u);
        }
    }
}

#[test]
fn filter_universe_normalizes_into_itself() {
    let universe = filter_universe(12);
    for s in &universe {
        let n = normalize_spec(*s);
        assert!(universe.contains(&n), "{s} -> {n}");
    }
}
