//! `treeproj`: tree projections, width measures and query answering from the
//! command line.
//!
//! Exit codes: 0 success or a true decision, 1 a false decision, 2 usage or
//! input errors, 3 internal validation failures.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use treeproj::game::{greedy_bound, greedy_wins, marshal_monotone_game, GameGraph};
use treeproj::hypergraph::{join_tree, leq, parse_hypergraph, Hypergraph};
use treeproj::methods::{width_with, Method, DEFAULT_CEILING};
use treeproj::monotonize::{project, validate_tree_projection, Pipeline, TreeProjection};
use treeproj::oracle::{differential, generate, InstanceSpec, PairMode};
use treeproj::query::{answer, parse_query, AnswerConfig, Database};
use treeproj::Error;

#[derive(Parser)]
#[command(name = "treeproj", version, about = "Tree projections via the greedy Robber and Captain game")]
struct Cli {
    /// Machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Greedy tree projection of a pair `H1 ≤ H2`.
    Decompose {
        h1: PathBuf,
        h2: PathBuf,
        /// Also write `Ha` to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Smallest width up to `--kmax` with a decomposition.
    Width {
        file: PathBuf,
        #[arg(long, default_value = "gr-hw")]
        method: Method,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
        #[command(flatten)]
        budget: Budget,
    },
    /// Solve the game on a pair and optionally dump the strategy pipeline.
    Game {
        h1: PathBuf,
        h2: PathBuf,
        /// Restrict the Captain to monotone moves.
        #[arg(long)]
        monotone: bool,
        /// Strategy, nice strategy and component graphs, with every
        /// escape-door rewrite.
        #[arg(long)]
        trace: bool,
        /// Graphviz of the monotone component graph.
        #[arg(long)]
        dot: bool,
    },
    /// Evaluate a conjunctive query over a directory of CSV relations.
    Answer {
        query: PathBuf,
        db: PathBuf,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
        /// Use hypertree width instead of greedy hypertree width.
        #[arg(long)]
        monotone: bool,
        /// Write the answer rows here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Differential run against the oracles, or validation of a given `Ha`.
    Check {
        #[arg(long, conflicts_with = "files")]
        diff: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: u64,
        /// `H1 H2 HA`: is `HA` a tree projection of `(H1, H2)`?
        #[arg(num_args = 3, value_names = ["H1", "H2", "HA"])]
        files: Vec<PathBuf>,
    },
    /// Seeded random pair `(H1, H2)`.
    Gen {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        nodes: usize,
        #[arg(long, default_value_t = 5)]
        edges: usize,
        #[arg(long, default_value_t = 2)]
        min_arity: usize,
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
        /// `cover`, `power:K` or `augment:N`.
        #[arg(long, default_value = "cover")]
        mode: ModeArg,
        /// Directory for `h1.hg` and `h2.hg`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Budget {
    /// Ceiling on the edges of derived view hypergraphs.
    #[arg(long, default_value_t = DEFAULT_CEILING)]
    budget_edges: u128,
}

#[derive(Clone, Copy)]
struct ModeArg(PairMode);

impl FromStr for ModeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, n) = match s.split_once(':') {
            Some((k, n)) => (k, Some(n.parse::<usize>().map_err(|e| format!("{n}: {e}"))?)),
            None => (s, None),
        };
        match (kind, n) {
            ("cover", None) => Ok(ModeArg(PairMode::Cover)),
            ("power", Some(k)) => Ok(ModeArg(PairMode::Power(k))),
            ("power", None) => Ok(ModeArg(PairMode::Power(2))),
            ("augment", Some(x)) => Ok(ModeArg(PairMode::Augment(x))),
            ("augment", None) => Ok(ModeArg(PairMode::Augment(1))),
            _ => Err(format!("unknown mode `{s}`, expected cover, power:K or augment:N")),
        }
    }
}

/// A finished command: what to print and how to exit.
struct Report {
    text: String,
    json: Value,
    code: u8,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, code: 0 }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Validation(_) | Error::InvalidComponentGraph(_) => 3,
        Error::NoProjection(_) => 1,
        _ => 2,
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), Error> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load(path: &Path) -> Result<Hypergraph, Error> {
    parse_hypergraph(&read(path)?)
}

fn edges_json(h: &Hypergraph) -> Value {
    h.edges()
        .iter()
        .map(|e| json!({"name": e.name, "nodes": h.names_of(&e.nodes)}))
        .collect()
}

fn projection_json(tp: &TreeProjection, h2: &Hypergraph) -> Value {
    let name = |i: usize| tp.ha.edge(i).name.clone();
    let joins: Vec<Value> = tp
        .join_tree
        .preorder()
        .into_iter()
        .filter_map(|v| tp.join_tree.parent[v].map(|p| json!([name(p), name(v)])))
        .collect();
    let cover: Vec<Value> = tp
        .upper
        .iter()
        .enumerate()
        .map(|(i, &u)| json!([name(i), h2.edge(u).name]))
        .collect();
    json!({
        "edges": edges_json(&tp.ha),
        "root": name(tp.join_tree.root),
        "join": joins,
        "cover": cover,
    })
}

fn decompose(h1: &Path, h2: &Path, out: Option<&Path>) -> Result<Report, Error> {
    let (h1, h2) = (load(h1)?, load(h2)?);
    let (won, game) = greedy_wins(&h1, &h2)?;
    let pipeline = if won { project(&game)? } else { None };
    let Some(p) = pipeline else {
        return Ok(Report {
            text: "no greedy winning strategy\n".into(),
            json: json!({"won": false}),
            code: 1,
        });
    };
    validate_tree_projection(&p.projection, &h1, game.h2()).map_err(Error::Validation)?;
    let ha = p.projection.to_text(game.h2());
    if let Some(path) = out {
        write(path, &ha)?;
    }
    let text = format!("{ha}% rewrites {}\n", p.monotone.stats.rewrites);
    let json = json!({
        "won": true,
        "rewrites": p.monotone.stats.rewrites,
        "projection": projection_json(&p.projection, game.h2()),
    });
    Ok(Report::ok(text, json))
}

fn width_cmd(file: &Path, method: Method, kmax: usize, budget: u128) -> Result<Report, Error> {
    let h = load(file)?;
    let report = width_with(&h, method, kmax, budget)?;
    let code = if report.width.is_some() { 0 } else { 1 };
    let json = serde_json::to_value(report.summary(&h)).expect("plain data serializes");
    Ok(Report {
        text: report.to_text(&h),
        json,
        code,
    })
}

fn trace(p: &Pipeline, game: &GameGraph) -> String {
    let (h1, h2) = (game.h1(), game.h2());
    let mut s = String::new();
    s.push_str("# strategy\n");
    s.push_str(&p.strategy.to_trace(h1, h2));
    s.push_str("# nice strategy\n");
    s.push_str(&p.nice.to_trace(h1, h2));
    s.push_str("# component graph\n");
    s.push_str(&p.components.to_trace(h1, h2));
    s.push_str("# rewrites\n");
    for r in &p.monotone.log {
        let removed: Vec<String> = r.removed.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(
            s,
            "rewrite node {} parent {} child {} escape-door {} cops {} new-node {} removed [{}]",
            r.node,
            r.parent,
            r.offending_child,
            h1.fmt_set(&r.escape_door),
            h1.fmt_set(&r.new_cops),
            r.new_node,
            removed.join(",")
        );
    }
    s.push_str("# monotone component graph\n");
    s.push_str(&p.monotone.graph.to_trace(h1, h2));
    s.push_str("# tree projection\n");
    s.push_str(&p.projection.to_text(h2));
    s
}

fn game_cmd(h1: &Path, h2: &Path, monotone: bool, want_trace: bool, dot: bool) -> Result<Report, Error> {
    let (h1, h2) = (load(h1)?, load(h2)?);
    let (won, game) = if monotone {
        marshal_monotone_game(&h1, &h2)?
    } else {
        greedy_wins(&h1, &h2)?
    };
    let player = if monotone { "monotone marshal" } else { "greedy captain" };
    let configurations = game.configuration_count();
    let bound = greedy_bound(&h1, game.h2());
    let mut text = format!(
        "{player}: {}\nstates {} moves {}\nconfigurations {configurations} bound {bound}\n",
        if won { "wins" } else { "loses" },
        game.states().len(),
        game.moves().len(),
    );
    let mut json = json!({
        "player": player,
        "won": won,
        "states": game.states().len(),
        "moves": game.moves().len(),
        "configurations": configurations,
        "bound": bound.to_string(),
    });
    if won {
        let p = project(&game)?.expect("won games have a strategy");
        validate_tree_projection(&p.projection, &h1, game.h2()).map_err(Error::Validation)?;
        let stats = &p.monotone.stats;
        let _ = writeln!(text, "rewrites {} bound {}", stats.rewrites, stats.bound);
        json["rewrites"] = json!(stats.rewrites);
        json["rewrite_bound"] = json!(stats.bound);
        json["projection"] = projection_json(&p.projection, game.h2());
        if want_trace {
            let t = trace(&p, &game);
            text.push_str(&t);
            json["trace"] = json!(t);
        }
        if dot {
            let d = p.monotone.graph.to_dot(&h1, game.h2());
            text.push_str(&d);
            json["dot"] = json!(d);
        }
    }
    Ok(Report {
        text,
        json,
        code: if won { 0 } else { 1 },
    })
}

fn answer_cmd(
    query: &Path,
    db: &Path,
    cfg: AnswerConfig,
    out: Option<&Path>,
) -> Result<Report, Error> {
    let q = parse_query(&read(query)?)?;
    let db = Database::load_dir(db)?;
    let (rel, stats) = answer(&q, &db, cfg)?;
    let csv = rel.to_csv();
    let summary = format!(
        "% {} answers, k = {}, m = {}, r = {}, r' = {}\n",
        stats.s, stats.k, stats.m, stats.r, stats.r_prime
    );
    let text = match out {
        Some(path) => {
            write(path, &csv)?;
            summary
        }
        None => format!("{summary}{csv}"),
    };
    let json = json!({
        "head": rel.attrs,
        "tuples": rel.tuples,
        "stats": {"k": stats.k, "m": stats.m, "r": stats.r, "r_prime": stats.r_prime, "s": stats.s},
    });
    Ok(Report::ok(text, json))
}

fn check_diff(seed: u64, count: u64) -> Result<Report, Error> {
    let r = differential(seed, count)?;
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| json!({"name": c.name, "tested": c.tested, "failures": c.failures}))
        .collect();
    Ok(Report {
        text: r.to_table(),
        json: json!({"seed": seed, "count": count, "passed": r.passed(), "checks": checks}),
        code: if r.passed() { 0 } else { 3 },
    })
}

fn check_projection(files: &[PathBuf]) -> Result<Report, Error> {
    let (h1, h2, ha) = (load(&files[0])?, load(&files[1])?, load(&files[2])?);
    let ha = ha.aligned_to(&h1)?;
    let h2 = h2.aligned_to(&h1)?;
    let verdict = (|| {
        let jt = join_tree(&ha).ok_or("HA is not acyclic")?;
        let lower = leq(&h1, &ha).ok_or("H1 is not covered by HA")?;
        let upper = leq(&ha, &h2).ok_or("HA is not covered by H2")?;
        let tp = TreeProjection {
            ha: ha.clone(),
            join_tree: jt,
            lower,
            upper,
        };
        validate_tree_projection(&tp, &h1, &h2)
    })();
    Ok(match verdict {
        Ok(()) => Report::ok("valid tree projection\n".into(), json!({"valid": true})),
        Err(why) => Report {
            text: format!("not a tree projection: {why}\n"),
            json: json!({"valid": false, "reason": why}),
            code: 1,
        },
    })
}

fn gen_cmd(spec: InstanceSpec, out: Option<&Path>) -> Result<Report, Error> {
    let (h1, h2) = generate(&spec)?;
    let (t1, t2) = (h1.to_text(), h2.to_text());
    let text = match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|source| Error::Io {
                path: dir.display().to_string(),
                source,
            })?;
            write(&dir.join("h1.hg"), &t1)?;
            write(&dir.join("h2.hg"), &t2)?;
            format!("wrote h1.hg ({} edges) and h2.hg ({} edges)\n", h1.edge_count(), h2.edge_count())
        }
        None => format!("% H1\n{t1}% H2\n{t2}"),
    };
    Ok(Report::ok(text, json!({"h1": edges_json(&h1), "h2": edges_json(&h2)})))
}

fn run(cli: Cli) -> Result<Report, Error> {
    match cli.command {
        Command::Decompose { h1, h2, out } => decompose(&h1, &h2, out.as_deref()),
        Command::Width {
            file,
            method,
            kmax,
            budget,
        } => width_cmd(&file, method, kmax, budget.budget_edges),
        Command::Game {
            h1,
            h2,
            monotone,
            trace,
            dot,
        } => game_cmd(&h1, &h2, monotone, trace, dot),
        Command::Answer {
            query,
            db,
            kmax,
            monotone,
            out,
            budget,
        } => {
            let cfg = AnswerConfig {
                kmax,
                monotone_only: monotone,
                budget_edges: budget.budget_edges,
            };
            answer_cmd(&query, &db, cfg, out.as_deref())
        }
        Command::Check {
            diff,
            seed,
            count,
            files,
        } => match (diff, files.is_empty()) {
            (true, _) => check_diff(seed, count),
            (false, false) => check_projection(&files),
            (false, true) => Err(Error::Precondition("check needs --diff or H1 H2 HA".into())),
        },
        Command::Gen {
            seed,
            nodes,
            edges,
            min_arity,
            max_arity,
            mode,
            out,
        } => {
            let spec = InstanceSpec {
                nodes,
                edges,
                min_arity,
                max_arity,
                seed,
                mode: mode.0,
            };
            gen_cmd(spec, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(r) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&r.json).expect("json values serialize"));
            } else {
                print!("{}", r.text);
            }
            ExitCode::from(r.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
