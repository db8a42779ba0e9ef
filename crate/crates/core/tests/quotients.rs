use coxsplit_core::{
    centralizer_evidence, classify_finite_type, normalizer_evidence, search_quotients, shortlex_normal_form,
    verify_quotient, CoxeterSystem, Order, Subset, Word,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn systems() -> Vec<CoxeterSystem> {
    vec![
        CoxeterSystem::path(&[0]),
        CoxeterSystem::path(&[3, 3]),
        CoxeterSystem::path(&[4, 4]),
        CoxeterSystem::universal(3),
        CoxeterSystem::from_rows(&[&[1, 3, 3], &[3, 1, 3], &[3, 3, 1]]).unwrap(),
    ]
}

fn subsets(rank: usize) -> impl Iterator<Item = Subset> {
    (0u32..1 << rank).map(move |mask| {
        let members = (0..rank).filter(|i| mask >> i & 1 == 1).collect();
        Subset::new(members, rank).unwrap()
    })
}

#[test]
fn relators_and_trivial_words_map_to_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for sys in systems() {
        let quotients = search_quotients(&sys, 4, 200).unwrap();
        assert!(!quotients.is_empty());
        for q in &quotients {
            assert!(verify_quotient(&sys, q));
            for s in 0..sys.rank() {
                for t in 0..sys.rank() {
                    if let Order::Finite(m) = sys.order(s, t) {
                        let relator = Word::new([s, t].repeat(m as usize));
                        assert!(q.image_of(&relator).unwrap().is_identity());
                    }
                }
            }
        }
        // Words equal to the identity in W are trivial in every quotient.
        for _ in 0..50 {
            let len = rng.gen_range(0..10);
            let u = Word::new((0..len).map(|_| rng.gen_range(0..sys.rank())).collect());
            let nf = shortlex_normal_form(&sys, &u).unwrap();
            let trivial = u.concat(&nf.to_word().reversed());
            for q in &quotients {
                assert!(q.image_of(&trivial).unwrap().is_identity());
            }
        }
    }
}

#[test]
fn evidence_containment() {
    for sys in systems() {
        for q in search_quotients(&sys, 4, 40).unwrap() {
            for t in subsets(sys.rank()) {
                if !classify_finite_type(&sys, &t).unwrap().is_spherical {
                    continue;
                }
                let n = normalizer_evidence(&sys, &t, &q).unwrap();
                assert!(n.result_order >= n.subgroup_image_order);
                assert_eq!(n.tight, n.result_order == n.subgroup_image_order);
                assert_eq!(q.image_order() % n.result_order, 0);
                let c = centralizer_evidence(&sys, &t, &q).unwrap();
                assert_eq!(q.image_order() % c.result_order, 0);
                assert!(c.result_order >= 1);
            }
        }
    }
}

#[test]
fn json_round_trip_of_search_results() {
    let sys = CoxeterSystem::universal(3);
    let found = search_quotients(&sys, 3, 30).unwrap();
    let text = serde_json::to_string(&found).unwrap();
    let back: Vec<coxsplit_core::PermQuotient> = serde_json::from_str(&text).unwrap();
    assert_eq!(back, found);
}
