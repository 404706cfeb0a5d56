//! Path-based local optimality.
//!
//! A deviation is the normalized characteristic vector of a backtrackless
//! path of length `h`, scaled by `1/(h+1)`. A codeword `x` is `h`-locally
//! optimal for LLRs `λ` when every deviation has strictly positive cost under
//! the flipped LLRs `(-1)^x * λ`.

mod certify;
mod decompose;
mod paths;

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

pub use certify::{
    certify_exact, certify_local_optimality, certify_weights, min_cost_exact,
    screen_min_cost_unanchored, Certificate, CertifyOptions, Verdict,
};
pub use decompose::{
    cycle_to_paths, decompose_to_cycles, decompose_to_deviations, Decomposition, DecompositionTerm,
};
pub use paths::{
    enumerate_deviations, min_cost_path_bruteforce, visit_paths, visit_paths_from,
    BRUTE_FORCE_MAX_EDGES, BRUTE_FORCE_MAX_H,
};

use crate::codes::check_binary;
use crate::error::{Error, Result};
use crate::graph::{Node, TannerGraph};
use crate::numeric::Rational;

/// A backtrackless path: consecutive nodes adjacent, no `u, w, u` pattern.
/// Nodes may repeat once the path is at least as long as the girth.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BacktracklessPath {
    nodes: Vec<Node>,
}

impl BacktracklessPath {
    pub fn new(g: &TannerGraph, nodes: Vec<Node>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidPath("a path needs at least one edge".into()));
        }
        for node in &nodes {
            let in_range = match *node {
                Node::Var(v) => v < g.n_vars(),
                Node::Check(c) => c < g.n_checks(),
            };
            if !in_range {
                return Err(Error::InvalidPath(format!("{node} is not a node of the graph")));
            }
        }
        for pair in nodes.windows(2) {
            if !g.is_adjacent(pair[0], pair[1]) {
                return Err(Error::InvalidPath(format!("{} and {} are not adjacent", pair[0], pair[1])));
            }
        }
        if let Some(t) = nodes.windows(3).find(|t| t[0] == t[2]) {
            return Err(Error::InvalidPath(format!("backtrack at {} {} {}", t[0], t[1], t[2])));
        }
        Ok(BacktracklessPath { nodes })
    }

    pub(crate) fn from_flat(g: &TannerGraph, flat: &[usize]) -> Self {
        BacktracklessPath {
            nodes: flat.iter().map(|&f| g.node(f)).collect(),
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_closed(&self) -> bool {
        self.nodes.first() == self.nodes.last()
    }

    /// Whether no node repeats (closed paths are not simple).
    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.nodes.iter().all(|n| seen.insert(*n))
    }

    /// Variable occurrences, with the endpoint of a closed path counted once.
    pub fn var_multiplicities(&self) -> impl Iterator<Item = usize> + '_ {
        let body = if self.is_closed() {
            &self.nodes[..self.nodes.len() - 1]
        } else {
            &self.nodes[..]
        };
        body.iter().filter_map(|n| match n {
            Node::Var(v) => Some(*v),
            Node::Check(_) => None,
        })
    }

    /// Parses `c3 v0 c0` style text.
    pub fn parse(g: &TannerGraph, text: &str) -> Result<Self> {
        let nodes = text
            .split_whitespace()
            .map(parse_node)
            .collect::<Result<Vec<_>>>()?;
        Self::new(g, nodes)
    }
}

fn parse_node(tok: &str) -> Result<Node> {
    let bad = || Error::parse(format!("path token `{tok}`"), "expected v<index> or c<index>");
    let (kind, idx) = tok.split_at(1.min(tok.len()));
    let idx: usize = idx.parse().map_err(|_| bad())?;
    match kind {
        "v" => Ok(Node::Var(idx)),
        "c" => Ok(Node::Check(idx)),
        _ => Err(bad()),
    }
}

impl FromStr for Node {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_node(s)
    }
}

impl fmt::Display for BacktracklessPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.nodes.iter().map(Node::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// `[χ]_v = multiplicity(v) / deg(v)`, closed-path endpoint counted once.
pub fn characteristic_vector(g: &TannerGraph, p: &BacktracklessPath) -> Vec<Rational> {
    let mut counts = vec![0i128; g.n_vars()];
    for v in p.var_multiplicities() {
        counts[v] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(v, k)| Rational::new(k, g.var_degree(v) as i128))
        .collect()
}

/// A deviation: `χ(p) / (h+1)` together with its path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deviation {
    pub path: BacktracklessPath,
    pub vector: Vec<Rational>,
}

impl Deviation {
    pub fn from_path(g: &TannerGraph, path: BacktracklessPath) -> Self {
        let scale = Rational::from_integer(path.len() as i128 + 1);
        let vector = characteristic_vector(g, &path)
            .into_iter()
            .map(|c| c / scale)
            .collect();
        Deviation { path, vector }
    }
}

/// `(-1)^{x_i} * λ_i`.
pub fn flip_llr<T>(x: &[u8], llr: &[T]) -> Result<Vec<T>>
where
    T: Copy + std::ops::Neg<Output = T>,
{
    check_binary(x, llr.len())?;
    Ok(x.iter()
        .zip(llr)
        .map(|(&b, &l)| if b == 1 { -l } else { l })
        .collect())
}

/// `|x_i - f_i|` for `f` in the unit cube.
pub fn relative_point(x: &[u8], f: &[Rational]) -> Result<Vec<Rational>> {
    check_binary(x, f.len())?;
    let one = Rational::from_integer(1);
    if let Some(bad) = f.iter().find(|v| **v < Rational::zero() || **v > one) {
        return Err(Error::InvalidParameter(format!("entry {bad} is outside [0, 1]")));
    }
    Ok(x.iter()
        .zip(f)
        .map(|(&b, &v)| if b == 1 { one - v } else { v })
        .collect())
}
