use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Duration;

use serde::Serialize;

use crate::hypergraph::Hypergraph;
use crate::monotonize::TreeProjection;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    GrHw,
    Ghw,
    Hw,
    Tw,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::GrHw, Method::Ghw, Method::Hw, Method::Tw];

    pub fn tag(self) -> &'static str {
        match self {
            Method::GrHw => "gr-hw",
            Method::Ghw => "ghw",
            Method::Hw => "hw",
            Method::Tw => "tw",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "grhw" | "gr-hw" => Ok(Method::GrHw),
            "ghw" => Ok(Method::Ghw),
            "hw" => Ok(Method::Hw),
            "tw" => Ok(Method::Tw),
            _ => Err(format!("unknown method `{s}` (expected grhw, ghw, hw or tw)")),
        }
    }
}

/// A validated tree projection plus, per `Ha` edge, the base edges whose
/// union covers it (empty for treewidth, where bags are arbitrary node sets).
#[derive(Clone, Debug)]
pub struct Certificate {
    pub projection: TreeProjection,
    pub lambda: Vec<Vec<usize>>,
    /// Escape-door rewrites needed to make the strategy monotone.
    pub rewrites: usize,
}

#[derive(Clone, Debug)]
pub struct WidthReport {
    pub method: Method,
    pub kmax: usize,
    /// `None` when no `k ≤ kmax` succeeded.
    pub width: Option<usize>,
    pub certificate: Option<Certificate>,
    /// Wall time per attempted `k`.
    pub timings: Vec<(usize, Duration)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Bag {
    pub name: String,
    pub nodes: Vec<String>,
    pub lambda: Vec<String>,
}

/// Serializable view of a [`WidthReport`], without timings.
#[derive(Clone, Debug, Serialize)]
pub struct WidthSummary {
    pub method: Method,
    pub kmax: usize,
    pub width: Option<usize>,
    pub exceeds_kmax: bool,
    pub rewrites: Option<usize>,
    pub bags: Vec<Bag>,
    pub root: Option<String>,
    pub join_tree: Vec<(String, String)>,
}

impl WidthReport {
    /// Largest certificate width: `max |λ|`, or `max |bag| - 1` for
    /// treewidth.
    pub fn certificate_width(&self) -> Option<usize> {
        let c = self.certificate.as_ref()?;
        Some(match self.method {
            Method::Tw => c.projection.max_edge().saturating_sub(1),
            _ => c.lambda.iter().map(Vec::len).max().unwrap_or(0),
        })
    }

    pub fn summary(&self, h: &Hypergraph) -> WidthSummary {
        let mut bags = Vec::new();
        let mut join_tree = Vec::new();
        let mut root = None;
        if let Some(c) = &self.certificate {
            let tp = &c.projection;
            for (i, e) in tp.ha.edges().iter().enumerate() {
                bags.push(Bag {
                    name: e.name.clone(),
                    nodes: tp.ha.names_of(&e.nodes).iter().map(|s| s.to_string()).collect(),
                    lambda: c.lambda[i].iter().map(|&j| h.edge(j).name.clone()).collect(),
                });
            }
            root = Some(tp.ha.edge(tp.join_tree.root).name.clone());
            for v in tp.join_tree.preorder() {
                if let Some(p) = tp.join_tree.parent[v] {
                    join_tree.push((tp.ha.edge(p).name.clone(), tp.ha.edge(v).name.clone()));
                }
            }
        }
        WidthSummary {
            method: self.method,
            kmax: self.kmax,
            width: self.width,
            exceeds_kmax: self.width.is_none(),
            rewrites: self.certificate.as_ref().map(|c| c.rewrites),
            bags,
            root,
            join_tree,
        }
    }

    /// `hw = 2` followed by the decomposition, or `hw > kmax`.
    pub fn to_text(&self, h: &Hypergraph) -> String {
        let s = self.summary(h);
        let mut out = String::new();
        match s.width {
            Some(w) => {
                let _ = writeln!(out, "{} = {}", s.method, w);
            }
            None => {
                let _ = writeln!(out, "{} > {}", s.method, s.kmax);
                return out;
            }
        }
        for b in &s.bags {
            let _ = write!(out, "bag {} {{{}}}", b.name, b.nodes.join(","));
            if !b.lambda.is_empty() {
                let _ = write!(out, " lambda {}", b.lambda.join(","));
            }
            out.push('\n');
        }
        if let Some(r) = &s.root {
            let _ = writeln!(out, "root {r}");
        }
        for (p, c) in &s.join_tree {
            let _ = writeln!(out, "join {p} {c}");
        }
        out
    }
}
