use proptest::prelude::*;

use kostant::automaton::{build_dfa, ReducedWordDFA};
use kostant::game::{play, replay_cross_checked, Configuration, GameSpec, Strategy as Pick};
use kostant::mukai::root_sum_lemma_holds;
use kostant::root_system::{reflect, ActiveSet, Basis, CartanMatrix, CartanType, DynkinDiagram, RootSystem, RootVector};
use kostant::syt::{fill_tableau, sequence_of_tableau, type_a_game};

fn catalog(max_rank: usize) -> impl Strategy<Value = CartanType> {
    proptest::sample::select(CartanType::all_up_to(max_rank))
}

/// A catalog type together with a nonempty active set.
fn game(max_rank: usize) -> impl Strategy<Value = (CartanType, ActiveSet)> {
    catalog(max_rank).prop_flat_map(|ty| {
        (Just(ty), 1..1u64 << ty.rank).prop_map(|(ty, m)| (ty, ActiveSet::from_mask(ty.rank, m)))
    })
}

proptest! {
    #[test]
    fn reflections_are_involutions(
        ty in catalog(8),
        v in proptest::collection::vec(-5i64..5, 8),
        i in 0usize..8,
        coroot in any::<bool>(),
    ) {
        let n = ty.rank;
        let cartan = CartanMatrix::of(&DynkinDiagram::from_type(ty));
        let basis = if coroot { Basis::Coroot } else { Basis::Root };
        let x = RootVector::new(v[..n].to_vec(), basis);
        let y = reflect(&cartan, &reflect(&cartan, &x, i % n), i % n);
        prop_assert_eq!(y, x);
    }

    #[test]
    fn reflections_permute_the_roots(ty in catalog(6), i in 0usize..6) {
        let rs = RootSystem::of_type(ty);
        let i = i % ty.rank;
        for r in rs.positive_roots() {
            let s = reflect(rs.cartan(), r, i);
            let simple = r.coeffs.iter().enumerate().all(|(j, &c)| c == i64::from(j == i));
            if simple {
                prop_assert!(s.is_negative());
            } else {
                prop_assert!(rs.is_root(&s.coeffs), "{:?} -> {:?}", r.coeffs, s.coeffs);
            }
        }
    }

    #[test]
    fn root_sum_lemma(ty in catalog(7)) {
        prop_assert!(root_sum_lemma_holds(&RootSystem::of_type(ty)));
    }

    #[test]
    fn chips_match_the_algebraic_state((ty, active) in game(5), seed in any::<u64>()) {
        let g = GameSpec::modified(DynkinDiagram::from_type(ty), active).unwrap();
        let r = play(&g, Pick::Random(seed));
        prop_assert!(r.is_terminated());
        prop_assert!(replay_cross_checked(&g, &r.moves).is_ok());
    }

    #[test]
    fn final_configuration_is_strategy_independent((ty, active) in game(5), seed in any::<u64>()) {
        let g = GameSpec::modified(DynkinDiagram::from_type(ty), active).unwrap();
        let a = play(&g, Pick::Random(seed));
        let b = play(&g, Pick::Lowest);
        prop_assert_eq!(a.last(), b.last());
        prop_assert_eq!(a.moves.len(), b.moves.len());
    }

    #[test]
    fn accepted_words_are_prefix_closed(
        (ty, active) in game(3),
        word in proptest::collection::vec(0usize..3, 0..10),
    ) {
        let dfa = build_dfa(&DynkinDiagram::from_type(ty), &active).unwrap();
        let word: Vec<usize> = word.into_iter().map(|x| x % ty.rank).collect();
        if dfa.accepts(&word).unwrap() {
            for k in 0..word.len() {
                prop_assert!(dfa.accepts(&word[..k]).unwrap());
            }
        }
        let min = dfa.minimize();
        prop_assert_eq!(min.accepts(&word).unwrap(), dfa.accepts(&word).unwrap());
    }

    #[test]
    fn dfa_json_roundtrip((ty, active) in game(4)) {
        let dfa = build_dfa(&DynkinDiagram::from_type(ty), &active).unwrap();
        let text = serde_json::to_string(&dfa.to_json()).unwrap();
        let back = ReducedWordDFA::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back.to_json(), dfa.to_json());
    }

    #[test]
    fn tableau_roundtrip(n in 2usize..9, k in 1usize..8, seed in any::<u64>(), cut in 0usize..20) {
        let k = 1 + (k - 1) % (n - 1);
        let g = type_a_game(n, k - 1).unwrap();
        let r = play(&g, Pick::Random(seed));
        // Prefixes of legal plays are legal, and give partial tableaux.
        let moves = &r.moves[..cut.min(r.moves.len())];
        let t = fill_tableau(moves, n, k - 1).unwrap();
        prop_assert_eq!(t.shape().size(), moves.len());
        prop_assert_eq!(sequence_of_tableau(&t, n, k - 1).unwrap(), moves.to_vec());
    }

    #[test]
    fn classical_games_from_simple_roots_visit_roots(ty in catalog(6), i in 0usize..6, seed in any::<u64>()) {
        let rs = RootSystem::of_type(ty);
        let d = DynkinDiagram::from_type(ty);
        let start = Configuration::basis(ty.rank, i % ty.rank);
        let g = GameSpec::classical(d, start).unwrap();
        let r = play(&g, Pick::Random(seed));
        prop_assert!(r.is_terminated());
        for c in &r.configs {
            let v = c.to_i64s().unwrap();
            prop_assert!(rs.is_root(&v), "{} is not a root", c);
        }
    }
}
