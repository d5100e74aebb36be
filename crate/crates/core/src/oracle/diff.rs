//! Differential checks of the engine against the oracles over a seeded
//! corpus.

use std::fmt::Write as _;

use super::gen::{corpus_spec, generate};
use super::tp::{ghw_bruteforce, tp_exists_bruteforce, tp_exists_elimination, tw_bruteforce};
use crate::error::Result;
use crate::game::{greedy_bound, greedy_wins, marshal_monotone_wins};
use crate::hypergraph::Hypergraph;
use crate::methods::{simplicial, width, Method};
use crate::monotonize::{project, validate_tree_projection};

/// Everything measured on one pair.
#[derive(Clone, Debug, Default)]
pub struct PairOutcome {
    pub greedy: bool,
    pub marshal: bool,
    pub unrestricted: bool,
    pub elimination: bool,
    pub greedy_simplicial: bool,
    pub configurations: usize,
    pub bound: u128,
    /// `Err` carries the monotonization or validation failure.
    pub projection: Option<Result<(), String>>,
    pub rewrites: usize,
    pub rewrite_bound: usize,
}

pub fn run_pair(h1: &Hypergraph, h2: &Hypergraph) -> Result<PairOutcome> {
    let (greedy, game) = greedy_wins(h1, h2)?;
    let mut out = PairOutcome {
        greedy,
        marshal: marshal_monotone_wins(h1, h2)?,
        unrestricted: tp_exists_bruteforce(h1, h2)?,
        elimination: tp_exists_elimination(h1, h2)?,
        greedy_simplicial: greedy_wins(h1, &simplicial(h2)?.hypergraph)?.0,
        configurations: game.configuration_count(),
        bound: greedy_bound(h1, h2),
        ..Default::default()
    };
    if greedy {
        out.projection = Some(match project(&game) {
            Ok(Some(p)) => {
                out.rewrites = p.monotone.stats.rewrites;
                out.rewrite_bound = p.monotone.stats.bound;
                validate_tree_projection(&p.projection, h1, game.h2())
            }
            Ok(None) => Err("won game without a strategy".into()),
            Err(e) => Err(e.to_string()),
        });
    }
    Ok(out)
}

/// Widths of one hypergraph, engine and oracle.
#[derive(Clone, Debug, Default)]
pub struct WidthOutcome {
    pub ghw_oracle: Option<usize>,
    pub ghw: Option<usize>,
    pub grhw: Option<usize>,
    pub hw: Option<usize>,
    pub tw_oracle: usize,
    pub tw: Option<usize>,
}

pub fn run_widths(h: &Hypergraph, kmax: usize) -> Result<WidthOutcome> {
    Ok(WidthOutcome {
        ghw_oracle: ghw_bruteforce(h, kmax)?,
        ghw: width(h, Method::Ghw, kmax)?.width,
        grhw: width(h, Method::GrHw, kmax)?.width,
        hw: width(h, Method::Hw, kmax)?.width,
        tw_oracle: tw_bruteforce(h)?,
        tw: width(h, Method::Tw, h.node_count())?.width,
    })
}

/// One named property with the corpus indices that violated it.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub tested: usize,
    pub failures: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct DiffReport {
    pub seed: u64,
    pub count: u64,
    pub checks: Vec<Check>,
}

pub const PAIR_CHECKS: [&str; 8] = [
    "greedy on simplicial(H2) = unrestricted search",
    "unrestricted search = elimination oracle",
    "marshal win => greedy win",
    "greedy win => unrestricted win",
    "greedy win => valid tree projection",
    "configurations <= greedy bound",
    "rewrites <= nodes x max in-degree",
    "width sandwich ghw <= gr-hw <= hw <= 3 ghw + 1",
];

pub const WIDTH_CHECKS: [&str; 2] = ["ghw (fpt) = ghw oracle", "tw (H^tk) = tw oracle"];

impl DiffReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures.is_empty())
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One line per property: `PASS`/`FAIL`, counts, failing indices.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "seed {} count {}", self.seed, self.count);
        for c in &self.checks {
            let status = if c.failures.is_empty() { "PASS" } else { "FAIL" };
            let _ = write!(s, "{status} {:<48} {:>6} tested", c.name, c.tested);
            if !c.failures.is_empty() {
                let shown: Vec<String> = c.failures.iter().take(10).map(|i| i.to_string()).collect();
                let _ = write!(s, " failing pairs {}", shown.join(","));
            }
            s.push('\n');
        }
        s
    }
}

fn sandwich(w: &WidthOutcome) -> bool {
    match (w.ghw_oracle, w.grhw, w.hw) {
        (Some(g), Some(gr), Some(h)) => g <= gr && gr <= h && h <= 3 * g + 1,
        // hw beyond kmax is only acceptable when 3·ghw + 1 is too
        (Some(g), Some(gr), None) => g <= gr,
        (Some(_), None, _) => false,
        (None, _, _) => w.grhw.is_none() && w.hw.is_none(),
    }
}

/// Runs every check on pairs `0..count` of the corpus for `seed`. Width
/// checks use `H1` of each pair with `kmax = 3`.
pub fn differential(seed: u64, count: u64) -> Result<DiffReport> {
    let mut checks: Vec<Check> = PAIR_CHECKS
        .iter()
        .chain(WIDTH_CHECKS.iter())
        .map(|&name| Check {
            name,
            tested: 0,
            failures: Vec::new(),
        })
        .collect();
    let record = |checks: &mut Vec<Check>, k: usize, applies: bool, ok: bool, i: u64| {
        if applies {
            checks[k].tested += 1;
            if !ok {
                checks[k].failures.push(i);
            }
        }
    };
    for i in 0..count {
        let (h1, h2) = generate(&corpus_spec(seed, i))?;
        let p = run_pair(&h1, &h2)?;
        record(&mut checks, 0, true, p.greedy_simplicial == p.unrestricted, i);
        record(&mut checks, 1, true, p.unrestricted == p.elimination, i);
        record(&mut checks, 2, p.marshal, p.greedy, i);
        record(&mut checks, 3, p.greedy, p.unrestricted, i);
        record(&mut checks, 4, true, p.greedy == matches!(p.projection, Some(Ok(()))), i);
        record(&mut checks, 5, true, p.configurations as u128 <= p.bound, i);
        record(&mut checks, 6, p.greedy, p.rewrites <= p.rewrite_bound, i);
        let w = run_widths(&h1, 3)?;
        record(&mut checks, 7, true, sandwich(&w), i);
        record(&mut checks, 8, true, w.ghw == w.ghw_oracle, i);
        record(&mut checks, 9, true, w.tw == Some(w.tw_oracle), i);
    }
    Ok(DiffReport { seed, count, checks })
}
