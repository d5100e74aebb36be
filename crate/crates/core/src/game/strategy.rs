use std::collections::HashMap;
use std::fmt::Write as _;

use super::GameGraph;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, NodeSet};
use crate::monotonize::{CgNode, ComponentGraph};
use crate::oracle::naive;

/// A Captain position: squad (an edge of `H2`) and the active cops.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Position {
    pub squad: Option<usize>,
    pub cops: NodeSet,
}

/// `(h, M, C)`; an empty `comp` marks a capture configuration.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub squad: Option<usize>,
    pub cops: NodeSet,
    pub comp: NodeSet,
}

impl Configuration {
    pub fn is_capture(&self) -> bool {
        self.comp.is_empty()
    }
}

/// A Captain strategy as its strategy graph. Node ids index `configs`;
/// `moves[v]` is `None` exactly for capture configurations.
#[derive(Clone, Debug, Default)]
pub struct StrategyGraph {
    pub configs: Vec<Configuration>,
    pub moves: Vec<Option<Position>>,
    pub children: Vec<Vec<usize>>,
    /// One initial configuration per connected part of `H1`.
    pub roots: Vec<usize>,
}

struct Builder {
    g: StrategyGraph,
    index: HashMap<Configuration, usize>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            g: StrategyGraph::default(),
            index: HashMap::new(),
        }
    }

    /// Returns the id and whether the configuration is new.
    fn intern(&mut self, c: Configuration) -> (usize, bool) {
        if let Some(&i) = self.index.get(&c) {
            return (i, false);
        }
        let i = self.g.configs.len();
        self.index.insert(c.clone(), i);
        self.g.configs.push(c);
        self.g.moves.push(None);
        self.g.children.push(Vec::new());
        (i, true)
    }
}

/// Follows the marked choices from every initial configuration. `None` when
/// some part of the game is lost.
pub fn extract_strategy(game: &GameGraph) -> Option<StrategyGraph> {
    if !game.won() {
        return None;
    }
    let (h1, h2) = (game.h1(), game.h2());
    let mut b = Builder::new();
    let mut stack = Vec::new();
    for &r in game.roots() {
        let (id, _) = b.intern(Configuration {
            squad: None,
            cops: NodeSet::new(),
            comp: game.states()[r].key.comp.clone(),
        });
        b.g.roots.push(id);
        stack.push(id);
    }
    while let Some(v) = stack.pop() {
        let c = b.g.configs[v].clone();
        let s = game
            .state_of(&game.key_for(c.squad, &c.comp))
            .expect("reachable configurations map to explored states");
        let mv = &game.moves()[game.chosen_move(s).expect("won states have a choice")];
        let cops = h2.edge(mv.squad).nodes.intersection(&h1.frontier(&c.comp));
        debug_assert_eq!(cops, mv.cops);
        let mut kids = Vec::new();
        if mv.options.is_empty() {
            kids.push(b.intern(capture(mv.squad, &cops)).0);
        }
        for o in &mv.options {
            let (id, fresh) = b.intern(Configuration {
                squad: Some(mv.squad),
                cops: cops.clone(),
                comp: o.members.clone(),
            });
            if fresh {
                stack.push(id);
            }
            kids.push(id);
        }
        b.g.moves[v] = Some(Position {
            squad: Some(mv.squad),
            cops,
        });
        b.g.children[v] = kids;
    }
    Some(b.g)
}

fn capture(squad: usize, cops: &NodeSet) -> Configuration {
    Configuration {
        squad: Some(squad),
        cops: cops.clone(),
        comp: NodeSet::new(),
    }
}

/// Inserts the cop-removal move `(h, ∂C)` in front of every configuration
/// whose cops strictly exceed the border of the Robber's component.
pub fn make_nice(h1: &Hypergraph, s: &StrategyGraph) -> StrategyGraph {
    let mut b = Builder::new();
    for c in &s.configs {
        b.intern(c.clone());
    }
    b.g.moves = s.moves.clone();
    b.g.children = s.children.clone();
    b.g.roots = s.roots.clone();
    for v in 0..s.configs.len() {
        let c = s.configs[v].clone();
        if c.is_capture() {
            continue;
        }
        let border = h1.border(&c.comp);
        if !border.is_proper_subset(&c.cops) {
            continue;
        }
        let trimmed = Configuration {
            squad: c.squad,
            cops: border.clone(),
            comp: c.comp.clone(),
        };
        let (t, fresh) = b.intern(trimmed);
        if fresh {
            b.g.moves[t] = b.g.moves[v].clone();
            b.g.children[t] = b.g.children[v].clone();
        }
        b.g.moves[v] = Some(Position {
            squad: c.squad,
            cops: border,
        });
        b.g.children[v] = vec![t];
    }
    b.g
}

/// Quotient of a nice strategy keyed by `(squad, component)`.
pub fn component_graph(h1: &Hypergraph, s: &StrategyGraph) -> Result<ComponentGraph> {
    let bad = |m: String| Error::InvalidComponentGraph(m);
    let mut ids: HashMap<(Option<usize>, NodeSet), usize> = HashMap::new();
    let mut nodes: Vec<CgNode> = Vec::new();
    let mut of_config: Vec<Option<usize>> = vec![None; s.configs.len()];
    // the configuration a node stands for: post-removal, or a capture
    let settled = |v: usize| -> Result<usize> {
        let c = &s.configs[v];
        if c.is_capture() || c.cops == h1.border(&c.comp) {
            return Ok(v);
        }
        match (&s.moves[v], s.children[v].as_slice()) {
            (Some(p), [t]) if p.cops == h1.border(&c.comp) && p.squad == c.squad => Ok(*t),
            _ => Err(bad(format!(
                "configuration {v} keeps cops off the border without a removal move"
            ))),
        }
    };
    let mut order = Vec::new();
    let mut visited = vec![false; s.configs.len()];
    let mut stack: Vec<usize> = s.roots.iter().rev().copied().collect();
    let mut roots = Vec::new();
    for &r in &s.roots {
        let c = &s.configs[r];
        let id = nodes.len();
        ids.insert((c.squad, c.comp.clone()), id);
        nodes.push(CgNode {
            squad: c.squad,
            comp: c.comp.clone(),
            children: Vec::new(),
        });
        of_config[r] = Some(id);
        roots.push(id);
    }
    while let Some(v) = stack.pop() {
        if std::mem::replace(&mut visited[v], true) {
            continue;
        }
        order.push(v);
        for &k in &s.children[v] {
            let t = settled(k)?;
            if of_config[t].is_none() {
                let c = &s.configs[t];
                let key = (c.squad, c.comp.clone());
                let id = *ids.entry(key).or_insert_with(|| {
                    nodes.push(CgNode {
                        squad: c.squad,
                        comp: c.comp.clone(),
                        children: Vec::new(),
                    });
                    nodes.len() - 1
                });
                of_config[t] = Some(id);
                if !s.configs[t].is_capture() {
                    stack.push(t);
                }
            }
        }
    }
    for &v in &order {
        let p = of_config[v].expect("visited configurations are mapped");
        let mut kids = Vec::new();
        for &k in &s.children[v] {
            let c = of_config[settled(k)?].expect("children are mapped");
            if !kids.contains(&c) {
                kids.push(c);
            }
        }
        nodes[p].children = kids;
    }
    Ok(ComponentGraph::new(nodes, roots))
}

impl StrategyGraph {
    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    /// Configurations with `∂C ⊊ M` are followed by the removal move.
    pub fn is_nice(&self, h1: &Hypergraph) -> bool {
        (0..self.len()).all(|v| {
            let c = &self.configs[v];
            if c.is_capture() {
                return true;
            }
            let border = h1.border(&c.comp);
            if !border.is_proper_subset(&c.cops) {
                return true;
            }
            match (&self.moves[v], self.children[v].as_slice()) {
                (Some(p), [t]) => {
                    p.cops == border
                        && p.squad == c.squad
                        && self.configs[*t]
                            == Configuration {
                                squad: c.squad,
                                cops: border.clone(),
                                comp: c.comp.clone(),
                            }
                }
                _ => false,
            }
        })
    }

    /// Topological order (parents first), or `None` on a cycle.
    pub fn topological(&self) -> Option<Vec<usize>> {
        topo(&self.children)
    }

    /// Independent check of a (possibly nice) greedy strategy: legal moves
    /// computed from the definitions, greedy cop sets and squad rule outside
    /// removal moves, children exactly the Robber's options, and acyclicity.
    pub fn validate(&self, h1: &Hypergraph, h2: &Hypergraph, greedy: bool) -> Result<(), String> {
        let h2 = h2.aligned_to(h1).map_err(|e| e.to_string())?;
        let parts = naive::components(h1, &NodeSet::new());
        let root_comps: Vec<&NodeSet> = self.roots.iter().map(|&r| &self.configs[r].comp).collect();
        if root_comps.len() != parts.len() || parts.iter().any(|p| !root_comps.contains(&p)) {
            return Err("initial configurations do not match the connected parts of H1".into());
        }
        for &r in &self.roots {
            let c = &self.configs[r];
            if c.squad.is_some() || !c.cops.is_empty() {
                return Err(format!("initial configuration {r} has cops"));
            }
        }
        for v in 0..self.len() {
            let c = &self.configs[v];
            if c.is_capture() {
                if self.moves[v].is_some() || !self.children[v].is_empty() {
                    return Err(format!("capture configuration {v} has a move"));
                }
                continue;
            }
            if !naive::components(h1, &c.cops).contains(&c.comp) {
                return Err(format!("configuration {v}: C is not an [M]-component"));
            }
            let Some(p) = &self.moves[v] else {
                return Err(format!("configuration {v} has no move"));
            };
            let Some(hr) = p.squad else {
                return Err(format!("configuration {v} moves to no squad"));
            };
            let front = naive::frontier(h1, &c.comp);
            let squad = &h2.edge(hr).nodes;
            if !p.cops.is_subset(&squad.intersection(&front)) {
                return Err(format!("configuration {v}: M is not within h ∩ Fr(C)"));
            }
            let removal = p.squad == c.squad && p.cops == front.difference(&c.comp) && {
                let border = front.difference(&c.comp);
                border.is_proper_subset(&c.cops)
            };
            if greedy && !removal {
                if p.cops != squad.intersection(&front) {
                    return Err(format!("configuration {v}: M ≠ h ∩ Fr(C)"));
                }
                if let Some(hp) = c.squad {
                    if h2.edge(hp).nodes.intersects(&c.comp) && hr != hp {
                        return Err(format!("configuration {v}: squad changed while h ∩ C ≠ ∅"));
                    }
                }
            }
            let opts = naive::options(h1, &c.comp, &c.cops, &p.cops);
            let mut want: Vec<Configuration> = opts
                .into_iter()
                .map(|o| Configuration {
                    squad: p.squad,
                    cops: p.cops.clone(),
                    comp: o,
                })
                .collect();
            if want.is_empty() {
                want.push(Configuration {
                    squad: p.squad,
                    cops: p.cops.clone(),
                    comp: NodeSet::new(),
                });
            }
            let mut got: Vec<Configuration> =
                self.children[v].iter().map(|&k| self.configs[k].clone()).collect();
            let key = |c: &Configuration| c.comp.clone();
            want.sort_by_key(key);
            got.sort_by_key(key);
            if want != got {
                return Err(format!("configuration {v}: children are not the Robber's options"));
            }
        }
        if self.topological().is_none() {
            return Err("strategy graph has a cycle".into());
        }
        Ok(())
    }

    /// One line per configuration, then one per arc.
    pub fn to_trace(&self, h1: &Hypergraph, h2: &Hypergraph) -> String {
        let mut s = String::new();
        for (v, c) in self.configs.iter().enumerate() {
            let _ = write!(s, "config {v} squad={} cops={} ", squad_name(h2, c.squad), h1.fmt_set(&c.cops));
            if c.is_capture() {
                s.push_str("capture");
            } else {
                let rep = c.comp.first().expect("non-empty");
                let _ = write!(s, "comp={}:{}", h1.name(rep), h1.fmt_set(&c.comp));
            }
            if let Some(p) = &self.moves[v] {
                let _ = write!(s, " move=({},{})", squad_name(h2, p.squad), h1.fmt_set(&p.cops));
            }
            s.push('\n');
        }
        for (v, kids) in self.children.iter().enumerate() {
            for k in kids {
                let _ = writeln!(s, "arc {v} {k}");
            }
        }
        s
    }

    pub fn to_dot(&self, h1: &Hypergraph, h2: &Hypergraph) -> String {
        let mut s = String::from("digraph strategy {\n  node [shape=box];\n");
        for (v, c) in self.configs.iter().enumerate() {
            let comp = if c.is_capture() {
                "capture".to_string()
            } else {
                h1.fmt_set(&c.comp)
            };
            let _ = writeln!(
                s,
                "  c{v} [label=\"{} {} {}\"];",
                squad_name(h2, c.squad),
                h1.fmt_set(&c.cops),
                comp
            );
        }
        for (v, kids) in self.children.iter().enumerate() {
            for k in kids {
                let _ = writeln!(s, "  c{v} -> c{k};");
            }
        }
        s.push_str("}\n");
        s
    }
}

pub(crate) fn squad_name(h2: &Hypergraph, squad: Option<usize>) -> String {
    squad.map_or_else(|| "-".to_string(), |h| h2.edge(h).name.clone())
}

/// Kahn's algorithm over child lists.
pub(crate) fn topo(children: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = children.len();
    let mut indeg = vec![0usize; n];
    for kids in children {
        for &k in kids {
            indeg[k] += 1;
        }
    }
    let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).rev().collect();
    let mut out = Vec::with_capacity(n);
    while let Some(v) = ready.pop() {
        out.push(v);
        for &k in children[v].iter().rev() {
            indeg[k] -= 1;
            if indeg[k] == 0 {
                ready.push(k);
            }
        }
    }
    (out.len() == n).then_some(out)
}
