use super::*;
use crate::error::Error;
use crate::hypergraph::fixtures::hq0;
use crate::monotonize::TreeProjection;

const Q0: &str = "ans() :- r1(A,B,C), r2(A,F), r3(C,D), r4(D,E,F), r5(E,F,G), r6(G,H,I), r7(I,J), r8(J,K).";

fn t(xs: &[&str]) -> Tuple {
    xs.iter().map(|s| s.to_string()).collect()
}

#[test]
fn parses_rules() {
    let q = parse_query("ans() :- r1(A,B,C), r2(A,F).").unwrap();
    assert!(q.is_boolean());
    assert_eq!(q.body.len(), 2);
    let q0 = parse_query(Q0).unwrap();
    assert_eq!(q0.body.len(), 8);
    assert_eq!(q0.variables().len(), 11);
    let c = parse_query("out(X) :-\n  r(X, 'a b'), % comment\n  s(\"7\", X)").unwrap();
    assert_eq!(c.body[0].terms[1], Term::Const("a b".into()));
    assert_eq!(parse_query(&c.to_string()).unwrap(), c);
}

#[test]
fn rejects_bad_rules() {
    assert!(matches!(parse_query("ans(X) :- ."), Err(Error::Syntax { .. })));
    assert!(matches!(parse_query("ans(Y) :- r(X)."), Err(Error::UnsafeHead(v)) if v == "Y"));
    assert!(matches!(parse_query("ans(X) :- r(X"), Err(Error::Syntax { .. })));
    match parse_query("ans() :-\n r(X) s(X).") {
        Err(Error::Syntax { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
    assert!(parse_query("ans('c') :- r(X).").is_err());
}

#[test]
fn q0_hypergraph_is_hq0() {
    let qh = query_hypergraph(&parse_query(Q0).unwrap());
    let h = qh.hypergraph.unwrap();
    assert_eq!(h, hq0());
    assert!(qh.connected);
}

#[test]
fn repeated_variables_and_constants() {
    let q = parse_query("ans() :- r(A,A), s('x'), t(A,B), u(C).").unwrap();
    let qh = query_hypergraph(&q);
    let h = qh.hypergraph.unwrap();
    assert_eq!(h.edge_count(), 3);
    assert_eq!(h.names_of(&h.edge(0).nodes), ["A"]);
    assert_eq!(qh.ground_atoms, [1]);
    assert!(!qh.connected);
}

fn small_db() -> Database {
    let mut db = Database::new();
    db.insert("r", [t(&["1", "1"]), t(&["1", "2"]), t(&["3", "3"])]).unwrap();
    db.insert("s", [t(&["x"])]).unwrap();
    db.insert("t", [t(&["1", "5"]), t(&["2", "6"])]).unwrap();
    db
}

#[test]
fn atom_relations_filter() {
    let db = small_db();
    let q = parse_query("ans(A) :- r(A,A), r('1',B).").unwrap();
    let r0 = atom_relation(&q.body[0], &db).unwrap();
    assert_eq!(r0.tuples.len(), 2);
    let r1 = atom_relation(&q.body[1], &db).unwrap();
    assert_eq!(r1.attrs, ["B"]);
    assert_eq!(r1.tuples.len(), 2);
    let bad = parse_query("ans() :- r(A).").unwrap();
    assert!(matches!(atom_relation(&bad.body[0], &db), Err(Error::Arity { .. })));
    let missing = parse_query("ans() :- nope(A).").unwrap();
    assert!(matches!(atom_relation(&missing.body[0], &db), Err(Error::UnknownRelation(_))));
}

#[test]
fn answers_with_constants_and_ground_atoms() {
    let db = small_db();
    let q = parse_query("ans(A,B) :- r(A,A), s('x'), t(A,B).").unwrap();
    let (out, _) = answer(&q, &db, AnswerConfig::default()).unwrap();
    assert_eq!(out.tuples.into_iter().collect::<Vec<_>>(), [t(&["1", "5"])]);
    let q = parse_query("ans(A) :- r(A,A), s('y').").unwrap();
    assert!(answer(&q, &db, AnswerConfig::default()).unwrap().0.is_empty());
    let q = parse_query("ans() :- s('x').").unwrap();
    assert_eq!(answer(&q, &db, AnswerConfig::default()).unwrap().0.len(), 1);
}

#[test]
fn views_at_k1_and_k2() {
    let q = parse_query(Q0).unwrap();
    let mut db = Database::new();
    for a in &q.body {
        let n = a.terms.len();
        db.insert(&a.relation, [vec!["0".to_string(); n], vec!["1".to_string(); n]]).unwrap();
    }
    let v1 = materialize_views(&q, &db, 1).unwrap();
    assert_eq!(v1.views.len(), 8);
    assert!(v1.atoms.iter().all(|a| a.len() == 1));
    let v2 = materialize_views(&q, &db, 2).unwrap();
    let abcd = v2
        .hypergraph
        .edges()
        .iter()
        .position(|e| v2.hypergraph.names_of(&e.nodes) == ["A", "B", "C", "D"])
        .unwrap();
    assert_eq!(v2.atoms[abcd], [0, 2]);
    assert_eq!(v2.views[abcd].len(), 2);
}

#[test]
fn acyclic_query_rewrites_to_itself() {
    let q = parse_query("ans(A,D) :- p(A,B), q(B,C), w(C,D).").unwrap();
    let mut db = Database::new();
    db.insert("p", [t(&["a", "b"]), t(&["a2", "zz"])]).unwrap();
    db.insert("q", [t(&["b", "c"])]).unwrap();
    db.insert("w", [t(&["c", "d"]), t(&["c", "e"])]).unwrap();
    let h = query_hypergraph(&q).hypergraph.unwrap();
    let vs = materialize_views(&q, &db, 1).unwrap();
    let tp = TreeProjection::of_acyclic(&h).unwrap();
    let aq = acyclic_rewrite(&q, &db, &vs, &tp).unwrap();
    assert_eq!(aq.len(), 3);
    assert_eq!(aq.to_rule("ans", &q.head), "ans(A,D) :- p(A,B), q(B,C), w(C,D).");
    let (out, stats) = yannakakis(&aq, &q.head);
    assert_eq!(out.len(), 2);
    assert_eq!(stats.m, 3);
    assert_eq!(stats.s, 2);
}

#[test]
fn empty_relation_gives_empty_answer() {
    let q = parse_query(Q0).unwrap();
    let mut db = Database::new();
    for a in &q.body {
        let n = a.terms.len();
        if a.relation != "r5" {
            db.insert(&a.relation, [vec!["0".to_string(); n]]).unwrap();
        } else {
            db.relations.insert("r5".into(), Table::default());
        }
    }
    let (out, stats) = answer(&q, &db, AnswerConfig::default()).unwrap();
    assert!(out.is_empty());
    assert_eq!(stats.k, 2);
    assert!(stats.r_prime <= stats.r);
}

#[test]
fn no_projection_within_kmax() {
    let q = parse_query("ans() :- a(X,Y), b(Y,Z), c(Z,X).").unwrap();
    let mut db = Database::new();
    for r in ["a", "b", "c"] {
        db.insert(r, [t(&["1", "1"])]).unwrap();
    }
    let cfg = AnswerConfig { kmax: 1, monotone_only: false, ..Default::default() };
    assert!(matches!(answer(&q, &db, cfg), Err(Error::NoProjection(1))));
    let cfg = AnswerConfig { kmax: 2, monotone_only: true, ..Default::default() };
    assert_eq!(answer(&q, &db, cfg).unwrap().0.len(), 1);
}

#[test]
fn csv_round_trip() {
    let dir = std::env::temp_dir().join(format!("treeproj-db-{}", std::process::id()));
    let db = small_db();
    db.save_dir(&dir).unwrap();
    let back = Database::load_dir(&dir).unwrap();
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(back, db);
    let r = Relation::unit();
    assert_eq!(r.to_csv(), "\"\"\n");
}
