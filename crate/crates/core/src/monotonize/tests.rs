use super::*;
use crate::game::{greedy_wins, marshal_monotone_game, marshal_monotone_wins};
use crate::hypergraph::fixtures::*;
use crate::hypergraph::{parse_hypergraph, Hypergraph};
use proptest::prelude::*;

/// A triangle with a two-edge tail on two of its corners; the big squad
/// swallows the triangle but greedy play has to give up a corner later.
fn tailed_triangle() -> (Hypergraph, Hypergraph) {
    let h1 = parse_hypergraph("ab(A,B)\nbc(B,C)\ncd(C,D)\nde(D,E)\nce(C,E)\nef(E,F)\nfg(F,G)").unwrap();
    let h2 = parse_hypergraph("big(A,C,D,E,G)\nbc(B,C)\nef(E,F)\nab(A,B)\nfg(F,G)").unwrap();
    (h1, h2)
}

fn pipeline(h1: &Hypergraph, h2: &Hypergraph) -> Option<Pipeline> {
    let (_, g) = greedy_wins(h1, h2).unwrap();
    project(&g).unwrap()
}

#[test]
fn escape_door_examples() {
    let h = hq0();
    let c = h.set_of(&["H", "I", "J", "K"]).unwrap();
    let g = h.set_of(&["G"]).unwrap();
    assert_eq!(escape_door(&h, &g, &c, &NodeSet::new()).unwrap(), g);
    assert!(escape_door(&h, &g, &c, &h.set_of(&["G", "A"]).unwrap())
        .unwrap()
        .is_empty());
    assert!(matches!(
        escape_door(&h, &NodeSet::new(), &c, &g),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn one_move_capture_projection() {
    let h1 = hq0();
    let h2 = parse_hypergraph("all(A,B,C,D,E,F,G,H,I,J,K)").unwrap();
    let p = pipeline(&h1, &h2).unwrap();
    assert_eq!(p.components.len(), 2);
    assert_eq!(p.projection.ha.edge_count(), 1);
    assert_eq!(p.projection.ha.edge(0).nodes, h1.nodes());
    assert_eq!(p.monotone.stats.rewrites, 0);
}

#[test]
fn tailed_triangle_needs_rewrites() {
    let (h1, h2) = tailed_triangle();
    assert!(!marshal_monotone_wins(&h1, &h2).unwrap());
    let p = pipeline(&h1, &h2).expect("greedy strategy exists");
    p.strategy.validate(&h1, &h2, true).unwrap();
    p.nice.validate(&h1, &h2, true).unwrap();
    assert!(!p.components.is_monotone());
    let m = &p.monotone;
    assert!(m.stats.rewrites > 0);
    assert!(m.stats.rewrites <= m.stats.bound);
    assert!(m.graph.is_monotone());
    validate_tree_projection(&p.projection, &h1, &h2).unwrap();
    for r in &m.log {
        assert!(!r.escape_door.is_empty());
    }
}

#[test]
fn monotone_input_is_unchanged() {
    let h = ha();
    let p = pipeline(&h, &h).unwrap();
    assert!(p.components.is_monotone());
    assert_eq!(p.monotone.stats.rewrites, 0);
    assert_eq!(p.monotone.graph.len(), p.components.len());
}

#[test]
fn marshal_strategies_are_already_monotone() {
    let h1 = hq0();
    let h2 = parse_hypergraph("a(A,B,C,D)\nb(A,D,E,F)\nc(E,F,G)\nd(G,H,I)\ne(I,J)\nf(J,K)").unwrap();
    let (won, g) = marshal_monotone_game(&h1, &h2).unwrap();
    assert!(won);
    let p = project(&g).unwrap().unwrap();
    assert_eq!(p.monotone.stats.rewrites, 0);
}

#[test]
fn invalid_component_graph_is_rejected() {
    let (h1, h2) = tailed_triangle();
    let p = pipeline(&h1, &h2).unwrap();
    let mut bad = p.components.clone();
    let root = bad.roots()[0];
    bad.node_mut(root).children.pop();
    assert!(matches!(
        monotonize(&bad, &h1, &h2),
        Err(Error::InvalidComponentGraph(_))
    ));
}

#[test]
fn component_graph_replays_the_strategy() {
    let (h1, h2) = tailed_triangle();
    let p = pipeline(&h1, &h2).unwrap();
    let s = &p.nice;
    let g = &p.components;
    assert!(g.len() <= s.len());
    // walk both in lockstep over every Robber choice
    let mut stack: Vec<(usize, usize)> = s.roots.iter().copied().zip(g.roots().iter().copied()).collect();
    while let Some((c, v)) = stack.pop() {
        let mut c = c;
        let conf = &s.configs[c];
        if !conf.is_capture() && conf.cops != h1.border(&conf.comp) {
            c = s.children[c][0];
        }
        let conf = &s.configs[c];
        assert_eq!(conf.comp, g.node(v).comp);
        if conf.is_capture() {
            continue;
        }
        let pos = s.moves[c].as_ref().unwrap();
        let (squad, cops) = g.move_of(&h1, v).unwrap();
        assert_eq!(pos.squad, Some(squad));
        assert_eq!(pos.cops, cops);
        for &k in &s.children[c] {
            let comp = &s.configs[k].comp;
            let w = *g.node(v).children.iter().find(|&&w| g.node(w).comp == *comp).unwrap();
            stack.push((k, w));
        }
    }
}

#[test]
fn projection_validator_diagnostics() {
    let h = ha();
    let tp = TreeProjection::of_acyclic(&h).unwrap();
    validate_tree_projection(&tp, &h, &h).unwrap();
    let small = parse_hypergraph("a1(A,B,C,D)\na2(A,D,E,F,J,K)\na3(E,F,G,H,I,J)\nx(K)").unwrap();
    let err = validate_tree_projection(&tp, &h, &small).unwrap_err();
    assert!(err.contains("a3"), "{err}");
    let mut bad = tp.clone();
    bad.lower[0] = 2;
    assert!(validate_tree_projection(&bad, &h, &h).is_err());
    assert!(tp.to_text(&h).contains("% join"));
}

#[test]
fn hq0_square_projection_has_width_two() {
    let h = hq0();
    let mut edges = Vec::new();
    for i in 0..h.edge_count() {
        for j in i..h.edge_count() {
            let u = h.edge(i).nodes.union(&h.edge(j).nodes);
            edges.push((format!("u{i}_{j}"), h.names_of(&u)));
        }
    }
    let h2 = Hypergraph::from_named_edges(edges).unwrap();
    let p = pipeline(&h, &h2).unwrap();
    validate_tree_projection(&p.projection, &h, &h2).unwrap();
    for e in p.projection.ha.edges() {
        let covers = (0..h.edge_count()).filter(|&i| h.edge(i).nodes.is_subset(&e.nodes)).count();
        assert!(covers > 0 || e.nodes.len() <= 5);
    }
}

fn small_pair() -> impl Strategy<Value = (Hypergraph, Hypergraph)> {
    let edges = proptest::collection::vec(proptest::collection::btree_set(0u8..7, 1..4), 2..6);
    (edges, proptest::collection::vec((0usize..6, 0usize..6, proptest::collection::btree_set(0u8..7, 0..2)), 1..6))
        .prop_map(|(e1, extra)| {
            let h1 = Hypergraph::from_named_edges(e1.iter().enumerate().map(|(i, e)| {
                (format!("e{i}"), e.iter().map(|x| format!("v{x}")).collect::<Vec<_>>())
            }))
            .unwrap();
            // H2: unions of pairs of H1 edges plus a few nodes of H1
            let n = h1.node_count();
            let mut e2: Vec<(String, Vec<String>)> = h1
                .edges()
                .iter()
                .map(|e| (e.name.clone(), h1.names_of(&e.nodes).iter().map(|s| s.to_string()).collect()))
                .collect();
            for (k, (a, b, add)) in extra.into_iter().enumerate() {
                let m = h1.edge_count();
                let mut u = h1.edge(a % m).nodes.union(&h1.edge(b % m).nodes);
                for x in add {
                    u.insert(crate::hypergraph::NodeId::from(x as usize % n));
                }
                e2.push((format!("x{k}"), h1.names_of(&u).iter().map(|s| s.to_string()).collect()));
            }
            let h2 = Hypergraph::from_named_edges(e2).unwrap().aligned_to(&h1).unwrap();
            (h1, h2)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn greedy_wins_yield_valid_projections((h1, h2) in small_pair()) {
        let (won, g) = greedy_wins(&h1, &h2).unwrap();
        let p = project(&g).unwrap();
        prop_assert_eq!(won, p.is_some());
        if let Some(p) = p {
            prop_assert!(validate_tree_projection(&p.projection, &h1, &h2).is_ok());
            prop_assert!(p.monotone.stats.rewrites <= p.monotone.stats.bound);
        }
    }
}
