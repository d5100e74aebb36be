use proptest::prelude::*;

use treeproj::game::{greedy_wins, marshal_monotone_wins};
use treeproj::hypergraph::{gyo_reduce, join_tree, leq, parse_hypergraph};
use treeproj::methods::{width, Method};
use treeproj::monotonize::{project, validate_tree_projection, TreeProjection};
use treeproj::oracle::{
    generate, ghw_bruteforce, naive_join, random_database, random_query, tp_exists_elimination, InstanceSpec, PairMode,
};
use treeproj::query::{answer, AnswerConfig};

fn pair_spec() -> impl Strategy<Value = InstanceSpec> {
    (2usize..=4, 2usize..=5, any::<u64>(), 0usize..3, 1usize..=2).prop_flat_map(|(arity, edges, seed, mode, extra)| {
        (arity..=7usize.min(edges * arity)).prop_map(move |nodes| InstanceSpec {
            nodes,
            edges,
            min_arity: 2,
            max_arity: arity,
            seed,
            mode: [PairMode::Cover, PairMode::Power(2), PairMode::Augment(extra)][mode],
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn greedy_wins_yield_valid_projections(spec in pair_spec()) {
        let (h1, h2) = generate(&spec).unwrap();
        let (won, game) = greedy_wins(&h1, &h2).unwrap();
        prop_assert_eq!(won, project(&game).unwrap().is_some());
        if let Some(p) = project(&game).unwrap() {
            prop_assert!(validate_tree_projection(&p.projection, &h1, game.h2()).is_ok());
            prop_assert!(p.monotone.stats.rewrites <= p.monotone.stats.bound);
            prop_assert!(tp_exists_elimination(&h1, &h2).unwrap());
        }
        if marshal_monotone_wins(&h1, &h2).unwrap() {
            prop_assert!(won);
        }
    }

    #[test]
    fn widths_are_sandwiched(spec in pair_spec()) {
        let (h, _) = generate(&spec).unwrap();
        let ghw = ghw_bruteforce(&h, 3).unwrap();
        let grhw = width(&h, Method::GrHw, 3).unwrap().width;
        let hw = width(&h, Method::Hw, 3).unwrap().width;
        prop_assert_eq!(width(&h, Method::Ghw, 3).unwrap().width, ghw);
        let g = ghw.unwrap();
        prop_assert!(g <= grhw.unwrap());
        if let Some(hw) = hw {
            prop_assert!(grhw.unwrap() <= hw && hw <= 3 * g + 1);
        }
        prop_assert_eq!(gyo_reduce(&h).acyclic, g == 1);
    }

    #[test]
    fn answers_match_naive_join(seed in any::<u64>(), vars in 3usize..=6, atoms in 2usize..=5) {
        let q = random_query(seed, vars, atoms, 3.min(vars)).unwrap();
        let db = random_database(&q, 12, 4, seed ^ 1);
        let (got, stats) = answer(&q, &db, AnswerConfig { kmax: atoms, ..Default::default() }).unwrap();
        prop_assert_eq!(got, naive_join(&q, &db).unwrap());
        prop_assert!(stats.r_prime <= stats.r);
    }
}

#[test]
fn acyclic_hypergraph_is_its_own_projection() {
    let h = parse_hypergraph("a1(A,B,C,D)\na2(A,D,E,F,J,K)\na3(E,F,G,H,I,J,K)").unwrap();
    let tp = TreeProjection::of_acyclic(&h).unwrap();
    validate_tree_projection(&tp, &h, &h).unwrap();
    assert!(leq(&h, &tp.ha).is_some());
    assert_eq!(join_tree(&h).unwrap().len(), 3);
}
