//! The Robber & Captain game with greedy Captain moves.
//!
//! A greedy move is fully determined by the squad: the Captain activates
//! `M = h ∩ Fr(C)`. Because of that the future of a play depends only on the
//! squad and the Robber's component, and only when the current squad still
//! meets the component (the squad is then forced). The game graph is built
//! over those abstract states:
//!
//! * `Free(C)`: the current squad misses `C`, every squad is a candidate;
//! * `Forced(h, C)`: `h ∩ C ≠ ∅`, the only candidate is `h`.
//!
//! Moves (and-nodes) from a free state that yield the same cop set and the
//! same successor states are merged and keep the lowest squad index.

mod strategy;

use std::collections::{HashMap, HashSet, VecDeque};

pub use strategy::{
    component_graph, extract_strategy, make_nice, Configuration, Position, StrategyGraph,
};
pub(crate) use strategy::{squad_name as squad_label, topo as strategy_topo};

use crate::error::{Error, Result};
use crate::hypergraph::{Component, Hypergraph, NodeSet};

/// Robber options after the Captain activates `cops` while the Robber is
/// confined to `comp`; `blockers` are the cops that stay in place during the
/// move (the previous cops that are also activated now).
pub fn robber_options(
    h1: &Hypergraph,
    comp: &NodeSet,
    blockers: &NodeSet,
    cops: &NodeSet,
) -> Vec<Component> {
    let space = h1.reach(comp, blockers);
    h1.components_within(&space, cops)
}

/// Robber options when `comp` is a component of the previous cop set. Only
/// the previous cops on `∂comp` can be shared with `cops ⊆ Fr(comp)`, so the
/// previous cop set itself is not needed.
pub fn options_from(h1: &Hypergraph, comp: &NodeSet, cops: &NodeSet) -> Vec<Component> {
    let blockers = h1.border(comp).intersection(cops);
    robber_options(h1, comp, &blockers, cops)
}

/// `|E2|·|N1|·(|E2|·|N1|+1)+1`, the ceiling on distinct configurations of a
/// greedy strategy.
pub fn greedy_bound(h1: &Hypergraph, h2: &Hypergraph) -> u128 {
    let x = h2.edge_count() as u128 * h1.node_count() as u128;
    x * (x + 1) + 1
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StateKey {
    /// `Some(h)` exactly for forced states.
    pub squad: Option<usize>,
    pub comp: NodeSet,
}

#[derive(Clone, Debug)]
pub struct GameState {
    pub key: StateKey,
    /// Outgoing moves, in ascending squad order.
    pub moves: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Move {
    pub state: usize,
    /// Lowest squad index realizing this move.
    pub squad: usize,
    pub cops: NodeSet,
    pub options: Vec<Component>,
    /// Successor state per option.
    pub succ: Vec<usize>,
    /// Every option stays inside the current component.
    pub monotone: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// All greedy moves.
    Greedy,
    /// Greedy moves whose every option shrinks the Robber's space.
    Monotone,
}

/// Explicit AND/OR graph of the greedy game with its fixpoint marks.
///
/// Marks are levels: a capture move has level 0, any other move is one more
/// than the largest level among its successors, and a state takes the
/// smallest level of its moves. Unmarked states are lost.
#[derive(Clone, Debug)]
pub struct GameGraph {
    h1: Hypergraph,
    h2: Hypergraph,
    states: Vec<GameState>,
    moves: Vec<Move>,
    index: HashMap<StateKey, usize>,
    roots: Vec<usize>,
    mode: Mode,
    state_level: Vec<Option<u32>>,
    move_level: Vec<Option<u32>>,
}

impl GameGraph {
    /// Explores every state reachable from the initial configuration of each
    /// connected part of `h1`. `h2` is re-indexed onto `h1`'s universe.
    pub fn build(h1: &Hypergraph, h2: &Hypergraph) -> Result<GameGraph> {
        let h2 = h2.aligned_to(h1)?;
        let mut g = GameGraph {
            h1: h1.clone(),
            h2,
            states: Vec::new(),
            moves: Vec::new(),
            index: HashMap::new(),
            roots: Vec::new(),
            mode: Mode::Greedy,
            state_level: Vec::new(),
            move_level: Vec::new(),
        };
        for part in h1.connected_parts() {
            let r = g.intern(StateKey {
                squad: None,
                comp: part.members,
            });
            g.roots.push(r);
        }
        let mut next = 0;
        while next < g.states.len() {
            g.expand(next);
            next += 1;
        }
        Ok(g)
    }

    fn intern(&mut self, key: StateKey) -> usize {
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        let i = self.states.len();
        self.index.insert(key.clone(), i);
        self.states.push(GameState {
            key,
            moves: Vec::new(),
        });
        i
    }

    fn expand(&mut self, s: usize) {
        let key = self.states[s].key.clone();
        let front = self.h1.frontier(&key.comp);
        let border = front.difference(&key.comp);
        let squads: Vec<usize> = match key.squad {
            Some(h) => vec![h],
            None => (0..self.h2.edge_count()).collect(),
        };
        let mut cache: HashMap<NodeSet, Vec<Component>> = HashMap::new();
        let mut seen: HashSet<(NodeSet, Vec<usize>)> = HashSet::new();
        for h in squads {
            let squad_nodes = self.h2.edge(h).nodes.clone();
            let cops = squad_nodes.intersection(&front);
            let options = cache
                .entry(cops.clone())
                .or_insert_with(|| {
                    robber_options(&self.h1, &key.comp, &border.intersection(&cops), &cops)
                })
                .clone();
            let succ: Vec<usize> = options
                .iter()
                .map(|o| {
                    let squad = squad_nodes.intersects(&o.members).then_some(h);
                    self.intern(StateKey {
                        squad,
                        comp: o.members.clone(),
                    })
                })
                .collect();
            if !seen.insert((cops.clone(), succ.clone())) {
                continue;
            }
            let monotone = options.iter().all(|o| o.members.is_subset(&key.comp));
            let id = self.moves.len();
            self.moves.push(Move {
                state: s,
                squad: h,
                cops,
                options,
                succ,
                monotone,
            });
            self.states[s].moves.push(id);
        }
    }

    /// Computes the marks for `mode`, replacing any previous marks.
    pub fn solve(&mut self, mode: Mode) {
        self.mode = mode;
        let allowed = |m: &Move| mode == Mode::Greedy || m.monotone;
        let mut state_level = vec![None; self.states.len()];
        let mut move_level = vec![None; self.moves.len()];
        let mut pending = vec![0usize; self.moves.len()];
        let mut dependents: Vec<Vec<usize>> = vec![Vec::new(); self.states.len()];
        let mut queue = VecDeque::new();
        for (i, m) in self.moves.iter().enumerate() {
            if !allowed(m) {
                continue;
            }
            let mut distinct = m.succ.clone();
            distinct.sort_unstable();
            distinct.dedup();
            pending[i] = distinct.len();
            for s in distinct {
                dependents[s].push(i);
            }
            if pending[i] == 0 {
                move_level[i] = Some(0);
                queue.push_back(i);
            }
        }
        // FIFO order pops moves by nondecreasing level, so the first move to
        // reach a state fixes its minimum level
        while let Some(mv) = queue.pop_front() {
            let level = move_level[mv].expect("queued moves are marked");
            let s = self.moves[mv].state;
            if state_level[s].is_some() {
                continue;
            }
            state_level[s] = Some(level);
            for &d in &dependents[s] {
                pending[d] -= 1;
                if pending[d] == 0 {
                    move_level[d] = Some(level + 1);
                    queue.push_back(d);
                }
            }
        }
        self.state_level = state_level;
        self.move_level = move_level;
    }

    pub fn h1(&self) -> &Hypergraph {
        &self.h1
    }

    /// The second hypergraph, re-indexed onto the first one's universe.
    pub fn h2(&self) -> &Hypergraph {
        &self.h2
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn states(&self) -> &[GameState] {
        &self.states
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn state_of(&self, key: &StateKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn state_level(&self, s: usize) -> Option<u32> {
        self.state_level.get(s).copied().flatten()
    }

    pub fn move_level(&self, m: usize) -> Option<u32> {
        self.move_level.get(m).copied().flatten()
    }

    /// Every connected part of `h1` is won.
    pub fn won(&self) -> bool {
        self.roots.iter().all(|&r| self.state_level(r).is_some())
    }

    /// The move extraction commits to at state `s`: the lowest-squad move
    /// whose level equals the state's level. Successors of a chosen move all
    /// have strictly smaller levels, so following choices never cycles.
    pub fn chosen_move(&self, s: usize) -> Option<usize> {
        let level = self.state_level(s)?;
        self.states[s]
            .moves
            .iter()
            .copied()
            .find(|&m| self.move_level(m) == Some(level))
    }

    /// Key of the abstract state a concrete configuration falls into.
    pub fn key_for(&self, squad: Option<usize>, comp: &NodeSet) -> StateKey {
        let forced = squad.filter(|&h| self.h2.edge(h).nodes.intersects(comp));
        StateKey {
            squad: forced,
            comp: comp.clone(),
        }
    }

    /// Distinct concrete configurations `(h, M, C)` reachable in the game,
    /// counting the initial configurations and the capture configurations.
    pub fn configuration_count(&self) -> usize {
        let mut seen: HashSet<(Option<usize>, NodeSet, NodeSet)> = HashSet::new();
        for &r in &self.roots {
            seen.insert((None, NodeSet::new(), self.states[r].key.comp.clone()));
        }
        for state in &self.states {
            let comp = &state.key.comp;
            let front = self.h1.frontier(comp);
            let squads: Vec<usize> = match state.key.squad {
                Some(h) => vec![h],
                None => (0..self.h2.edge_count()).collect(),
            };
            for h in squads {
                let cops = self.h2.edge(h).nodes.intersection(&front);
                let mv = state.moves.iter().find(|&&m| self.moves[m].cops == cops);
                let options = match mv {
                    Some(&m) => self.moves[m].options.clone(),
                    None => options_from(&self.h1, comp, &cops),
                };
                if options.is_empty() {
                    seen.insert((Some(h), cops.clone(), NodeSet::new()));
                }
                for o in options {
                    seen.insert((Some(h), cops.clone(), o.members));
                }
            }
        }
        seen.len()
    }
}

fn decide(h1: &Hypergraph, h2: &Hypergraph, mode: Mode) -> Result<(bool, GameGraph)> {
    check_universe(h1, h2)?;
    let mut g = GameGraph::build(h1, h2)?;
    g.solve(mode);
    Ok((g.won(), g))
}

fn check_universe(h1: &Hypergraph, h2: &Hypergraph) -> Result<()> {
    let mut a: Vec<&String> = h1.names().iter().collect();
    let mut b: Vec<&String> = h2.names().iter().collect();
    a.sort();
    b.sort();
    if a != b {
        return Err(Error::UniverseMismatch(format!(
            "H1 has {} nodes, H2 has {} nodes, and the name sets differ",
            h1.node_count(),
            h2.node_count()
        )));
    }
    Ok(())
}

/// Decides whether the Captain has a greedy winning strategy on `(h1, h2)`.
pub fn greedy_wins(h1: &Hypergraph, h2: &Hypergraph) -> Result<(bool, GameGraph)> {
    decide(h1, h2, Mode::Greedy)
}

/// Decides whether the Marshal has a monotone winning strategy, played as the
/// greedy Captain game restricted to monotone moves.
pub fn marshal_monotone_wins(h1: &Hypergraph, h2: &Hypergraph) -> Result<bool> {
    Ok(marshal_monotone_game(h1, h2)?.0)
}

/// As [`marshal_monotone_wins`], also returning the marked graph.
pub fn marshal_monotone_game(h1: &Hypergraph, h2: &Hypergraph) -> Result<(bool, GameGraph)> {
    decide(h1, h2, Mode::Monotone)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::fixtures::*;
    use crate::hypergraph::parse_hypergraph;
    use crate::oracle::naive;

    fn hq0_squared() -> Hypergraph {
        // unions of at most two atoms of Q_0
        let h = hq0();
        let mut edges = Vec::new();
        let mut seen = HashSet::new();
        for i in 0..h.edge_count() {
            for j in i..h.edge_count() {
                let u = h.edge(i).nodes.union(&h.edge(j).nodes);
                if seen.insert(u.clone()) {
                    edges.push((format!("u{i}_{j}"), h.names_of(&u)));
                }
            }
        }
        Hypergraph::from_named_edges(edges).unwrap()
    }

    #[test]
    fn bound_formula() {
        let one = parse_hypergraph("e(A)").unwrap();
        assert_eq!(greedy_bound(&one, &one), 3);
        let h1 = parse_hypergraph("e(A,B,C,D,E,F,G)").unwrap();
        let h2 = parse_hypergraph("a(A)\nb(B)\nc(C)\nd(D)\ne(E,F,G)").unwrap();
        assert_eq!(greedy_bound(&h1, &h2), 1261);
    }

    #[test]
    fn full_squad_wins_in_one_move() {
        let h1 = hq0();
        let h2 = parse_hypergraph("all(A,B,C,D,E,F,G,H,I,J,K)").unwrap();
        let (won, g) = greedy_wins(&h1, &h2).unwrap();
        assert!(won);
        assert_eq!(g.state_level(g.roots()[0]), Some(0));
        assert!(marshal_monotone_wins(&h1, &h2).unwrap());
    }

    #[test]
    fn hq0_against_its_square() {
        let h2 = hq0_squared();
        let (won, g) = greedy_wins(&hq0(), &h2).unwrap();
        assert!(won);
        assert!((g.configuration_count() as u128) <= greedy_bound(&hq0(), &h2));
        assert!(marshal_monotone_wins(&hq0(), &h2).unwrap());
    }

    #[test]
    fn cyclic_self_pairs_are_lost() {
        let t = triangle();
        assert!(!greedy_wins(&t, &t).unwrap().0);
        assert!(!marshal_monotone_wins(&t, &t).unwrap());
        assert!(!greedy_wins(&hq0(), &hq0()).unwrap().0);
    }

    #[test]
    fn acyclic_self_pair_is_won() {
        let h = ha();
        assert!(greedy_wins(&h, &h).unwrap().0);
        assert!(marshal_monotone_wins(&h, &h).unwrap());
    }

    #[test]
    fn universe_mismatch_is_an_error() {
        let a = parse_hypergraph("e(A,B)").unwrap();
        let b = parse_hypergraph("e(A,C)").unwrap();
        assert!(matches!(greedy_wins(&a, &b), Err(Error::UniverseMismatch(_))));
        // same names in a different order are fine
        let c = parse_hypergraph("f(B)\ne(A,B)").unwrap();
        assert!(greedy_wins(&a, &c).unwrap().0);
    }

    #[test]
    fn disconnected_parts_are_decided_separately() {
        let h1 = parse_hypergraph("e(A,B)\nf(C,D)").unwrap();
        let (won, g) = greedy_wins(&h1, &h1).unwrap();
        assert!(won);
        assert_eq!(g.roots().len(), 2);
        let h2 = parse_hypergraph("e(A,B)\nf(C)\ng(D)").unwrap();
        assert!(!greedy_wins(&h1, &h2).unwrap().0);
    }

    #[test]
    fn options_match_definition() {
        let h = hq0();
        for comp in h.components(&h.set_of(&["E", "F", "G"]).unwrap()) {
            let prev = h.set_of(&["E", "F", "G"]).unwrap();
            for e in h.edges() {
                let cops = e.nodes.intersection(&h.frontier(&comp.members));
                let fast: Vec<NodeSet> = options_from(&h, &comp.members, &cops)
                    .into_iter()
                    .map(|c| c.members)
                    .collect();
                assert_eq!(fast, naive::options(&h, &comp.members, &prev, &cops));
            }
        }
    }

    #[test]
    fn forced_states_lead_to_free_states() {
        let h2 = hq0_squared();
        let (_, g) = greedy_wins(&hq0(), &h2).unwrap();
        for m in g.moves() {
            if g.states()[m.state].key.squad.is_some() {
                for &s in &m.succ {
                    assert!(g.states()[s].key.squad.is_none());
                }
            }
        }
    }
}
