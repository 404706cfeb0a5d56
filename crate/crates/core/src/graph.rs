//! Labeled Tanner graphs: construction, girth, progressive-edge-growth
//! generation and M-covers.
//!
//! Variable nodes are `0..n_vars`, checks are `0..n_checks`. The edge label of
//! `(v, C)` is the position of `v` in `C`'s ordered variable list. For graph
//! traversals every node also has a flat id: variables keep their index and
//! check `c` becomes `n_vars + c`.

use std::collections::VecDeque;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::seed::derive_seed;

/// A node of a Tanner graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Var(usize),
    Check(usize),
}

impl Node {
    pub fn is_var(self) -> bool {
        matches!(self, Node::Var(_))
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Var(v) => write!(f, "v{v}"),
            Node::Check(c) => write!(f, "c{c}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TannerGraph {
    n_vars: usize,
    checks: Vec<Vec<usize>>,
    var_checks: Vec<Vec<usize>>,
    adj: Vec<Vec<usize>>,
}

impl TannerGraph {
    /// Builds a graph from ordered check lists. Positions in each list are the
    /// edge labels.
    pub fn new(n_vars: usize, checks: Vec<Vec<usize>>) -> Result<Self> {
        let mut var_checks = vec![Vec::new(); n_vars];
        for (c, list) in checks.iter().enumerate() {
            if list.is_empty() {
                return Err(Error::EmptyCheck(c));
            }
            for (t, &v) in list.iter().enumerate() {
                if v >= n_vars {
                    return Err(Error::IndexOutOfRange {
                        what: "variable",
                        index: v,
                        bound: n_vars,
                    });
                }
                if list[..t].contains(&v) {
                    return Err(Error::DuplicateEdge { check: c, var: v });
                }
                var_checks[v].push(c);
            }
        }
        if let Some(v) = var_checks.iter().position(|cs| cs.is_empty()) {
            return Err(Error::IsolatedVariable(v));
        }

        let mut adj = Vec::with_capacity(n_vars + checks.len());
        for cs in &var_checks {
            adj.push(cs.iter().map(|&c| n_vars + c).collect());
        }
        for list in &checks {
            adj.push(list.clone());
        }

        Ok(TannerGraph {
            n_vars,
            checks,
            var_checks,
            adj,
        })
    }

    /// The cycle `v0 - C0 - v1 - C1 - ... - v_{m-1} - C_{m-1} - v0`, with
    /// check `j` listing `[j, j+1 mod m]`.
    pub fn ring(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter(format!("ring needs m >= 2, got {m}")));
        }
        Self::new(m, (0..m).map(|j| vec![j, (j + 1) % m]).collect())
    }

    /// Cycle code of the complete graph K4: variables are the six edges of K4,
    /// checks are its four vertices.
    pub fn k4_cycle_code() -> Self {
        // edges: 0=01 1=02 2=03 3=12 4=13 5=23
        Self::new(6, vec![vec![0, 1, 2], vec![0, 3, 4], vec![1, 3, 5], vec![2, 4, 5]])
            .expect("K4 cycle code is a valid graph")
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_checks(&self) -> usize {
        self.checks.len()
    }

    pub fn n_nodes(&self) -> usize {
        self.n_vars + self.checks.len()
    }

    pub fn n_edges(&self) -> usize {
        self.checks.iter().map(Vec::len).sum()
    }

    pub fn checks(&self) -> &[Vec<usize>] {
        &self.checks
    }

    pub fn check(&self, c: usize) -> &[usize] {
        &self.checks[c]
    }

    pub fn var_checks(&self, v: usize) -> &[usize] {
        &self.var_checks[v]
    }

    pub fn var_degree(&self, v: usize) -> usize {
        self.var_checks[v].len()
    }

    pub fn check_degree(&self, c: usize) -> usize {
        self.checks[c].len()
    }

    pub fn var_degrees(&self) -> Vec<usize> {
        self.var_checks.iter().map(Vec::len).collect()
    }

    pub fn d_l_min(&self) -> usize {
        self.var_checks.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn d_l_max(&self) -> usize {
        self.var_checks.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn d_r_max(&self) -> usize {
        self.checks.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `d_L^max * d_R^max`.
    pub fn d(&self) -> usize {
        self.d_l_max() * self.d_r_max()
    }

    pub fn flat_id(&self, node: Node) -> usize {
        match node {
            Node::Var(v) => v,
            Node::Check(c) => self.n_vars + c,
        }
    }

    pub fn node(&self, flat: usize) -> Node {
        if flat < self.n_vars {
            Node::Var(flat)
        } else {
            Node::Check(flat - self.n_vars)
        }
    }

    /// Neighbors of a flat node id, as flat ids.
    pub fn flat_neighbors(&self, flat: usize) -> &[usize] {
        &self.adj[flat]
    }

    pub fn is_adjacent(&self, a: Node, b: Node) -> bool {
        match (a, b) {
            (Node::Var(v), Node::Check(c)) | (Node::Check(c), Node::Var(v)) => {
                v < self.n_vars && c < self.checks.len() && self.checks[c].contains(&v)
            }
            _ => false,
        }
    }

    /// Length of the shortest cycle, `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        let n = self.n_nodes();
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for root in 0..n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[root] = 0;
            parent[root] = usize::MAX;
            queue.clear();
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                if let Some(b) = best {
                    if 2 * dist[u] >= b {
                        break;
                    }
                }
                for &w in &self.adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Number of connected components.
    pub fn components(&self) -> usize {
        let n = self.n_nodes();
        let mut seen = vec![false; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    /// Canonical text form: `N J` then one line per check.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n_vars, self.checks.len());
        for list in &self.checks {
            let line: Vec<String> = list.iter().map(usize::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the text form. `#` starts a comment line; blank lines are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (lineno, header) = lines
            .next()
            .ok_or_else(|| Error::parse("line 1", "missing `N J` header"))?;
        let (n, j) = parse_header(lineno, header)?;
        let mut checks = Vec::with_capacity(j);
        for _ in 0..j {
            let (lineno, line) = lines
                .next()
                .ok_or_else(|| Error::parse("end of input", format!("expected {j} check lines")))?;
            checks.push(parse_indices(lineno, line)?);
        }
        if let Some((lineno, line)) = lines.next() {
            return Err(Error::parse(
                format!("line {lineno}"),
                format!("unexpected trailing content `{line}`"),
            ));
        }
        Self::new(n, checks)
    }
}

impl fmt::Display for TannerGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn parse_header(lineno: usize, line: &str) -> Result<(usize, usize)> {
    let nums = parse_indices(lineno, line)?;
    match nums.as_slice() {
        [n, j] => Ok((*n, *j)),
        _ => Err(Error::parse(format!("line {lineno}"), "header must be `N J`")),
    }
}

pub(crate) fn parse_indices(lineno: usize, line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| {
                Error::parse(format!("line {lineno}"), format!("`{tok}` is not an index"))
            })
        })
        .collect()
}

/// Progressive-edge-growth construction of a `(d_l, d_r)`-regular graph with
/// girth at least `girth_target`.
///
/// Each new edge of a variable goes to an available check at maximal current
/// distance from it, then lowest degree, ties broken by a seeded RNG. Failed
/// attempts are retried with a derived seed.
pub fn construct_regular(
    n: usize,
    d_l: usize,
    d_r: usize,
    girth_target: usize,
    seed: u64,
    max_attempts: usize,
) -> Result<TannerGraph> {
    if n == 0 || d_l == 0 || d_r == 0 {
        return Err(Error::InvalidParameter("N, d_L and d_R must be positive".into()));
    }
    if !d_l.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("d_L = {d_l} must be even")));
    }
    if !(n * d_l).is_multiple_of(d_r) {
        return Err(Error::InvalidParameter(format!(
            "N*d_L = {} is not divisible by d_R = {d_r}",
            n * d_l
        )));
    }
    let j = n * d_l / d_r;
    if d_l > j || d_r > n {
        return Err(Error::InvalidParameter(format!(
            "degrees ({d_l}, {d_r}) too large for N = {n}"
        )));
    }

    for attempt in 0..max_attempts {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, attempt as u64));
        if let Some(checks) = peg_attempt(n, d_l, d_r, j, &mut rng) {
            let g = TannerGraph::new(n, checks)?;
            if g.girth().is_none_or(|gi| gi >= girth_target) {
                return Ok(g);
            }
        }
    }
    Err(Error::GirthUnreachable {
        target: girth_target,
        attempts: max_attempts,
    })
}

fn peg_attempt(
    n: usize,
    d_l: usize,
    d_r: usize,
    j: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Vec<usize>>> {
    let mut checks: Vec<Vec<usize>> = vec![Vec::with_capacity(d_r); j];
    let mut var_checks: Vec<Vec<usize>> = vec![Vec::with_capacity(d_l); n];
    // BFS over the partial graph; distances counted in edges from the variable.
    let mut dist_var = vec![usize::MAX; n];
    let mut dist_check = vec![usize::MAX; j];
    let mut queue = VecDeque::new();

    for v in 0..n {
        for _ in 0..d_l {
            dist_var.iter_mut().for_each(|d| *d = usize::MAX);
            dist_check.iter_mut().for_each(|d| *d = usize::MAX);
            queue.clear();
            dist_var[v] = 0;
            queue.push_back(Node::Var(v));
            while let Some(node) = queue.pop_front() {
                match node {
                    Node::Var(u) => {
                        for &c in &var_checks[u] {
                            if dist_check[c] == usize::MAX {
                                dist_check[c] = dist_var[u] + 1;
                                queue.push_back(Node::Check(c));
                            }
                        }
                    }
                    Node::Check(c) => {
                        for &u in &checks[c] {
                            if dist_var[u] == usize::MAX {
                                dist_var[u] = dist_check[c] + 1;
                                queue.push_back(Node::Var(u));
                            }
                        }
                    }
                }
            }

            let candidates: Vec<usize> = (0..j)
                .filter(|&c| checks[c].len() < d_r && !var_checks[v].contains(&c))
                .collect();
            if candidates.is_empty() {
                return None;
            }
            let far = candidates.iter().map(|&c| dist_check[c]).max()?;
            let low = candidates
                .iter()
                .filter(|&&c| dist_check[c] == far)
                .map(|&c| checks[c].len())
                .min()?;
            let best: Vec<usize> = candidates
                .into_iter()
                .filter(|&c| dist_check[c] == far && checks[c].len() == low)
                .collect();
            let c = best[rng.random_range(0..best.len())];
            checks[c].push(v);
            var_checks[v].push(c);
        }
    }
    Some(checks)
}

/// An M-cover of a base graph given by one permutation per base edge.
///
/// Lifted variable `(v, m)` has index `v * M + m` and lifted check `(c, m)`
/// has index `c * M + m`. The base edge `(v, c)` lifts to the edges
/// `(v, m) - (c, perm[m])`.
#[derive(Clone, Debug)]
pub struct CoverGraph {
    base: TannerGraph,
    m: usize,
    /// Indexed by base edge id (check-major, then label).
    permutations: Vec<Vec<usize>>,
    lifted: TannerGraph,
}

impl CoverGraph {
    pub fn from_permutations(
        base: TannerGraph,
        m: usize,
        permutations: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("cover degree M must be >= 1".into()));
        }
        if permutations.len() != base.n_edges() {
            return Err(Error::LengthMismatch {
                expected: base.n_edges(),
                found: permutations.len(),
            });
        }
        let mut inverses = Vec::with_capacity(permutations.len());
        for perm in &permutations {
            inverses.push(invert_permutation(perm, m)?);
        }

        let mut lifted_checks = Vec::with_capacity(base.n_checks() * m);
        let mut edge = 0;
        for c in 0..base.n_checks() {
            let first_edge = edge;
            for copy in 0..m {
                let list = base
                    .check(c)
                    .iter()
                    .enumerate()
                    .map(|(t, &v)| v * m + inverses[first_edge + t][copy])
                    .collect();
                lifted_checks.push(list);
            }
            edge += base.check_degree(c);
        }
        let lifted = TannerGraph::new(base.n_vars() * m, lifted_checks)?;
        Ok(CoverGraph {
            base,
            m,
            permutations,
            lifted,
        })
    }

    pub fn base(&self) -> &TannerGraph {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn permutations(&self) -> &[Vec<usize>] {
        &self.permutations
    }

    pub fn lifted(&self) -> &TannerGraph {
        &self.lifted
    }

    /// Covering map on nodes.
    pub fn project(&self, node: Node) -> Node {
        match node {
            Node::Var(v) => Node::Var(v / self.m),
            Node::Check(c) => Node::Check(c / self.m),
        }
    }

    /// Which copy in its fiber a lifted node is.
    pub fn copy_index(&self, node: Node) -> usize {
        match node {
            Node::Var(v) | Node::Check(v) => v % self.m,
        }
    }
}

fn invert_permutation(perm: &[usize], m: usize) -> Result<Vec<usize>> {
    if perm.len() != m {
        return Err(Error::InvalidPermutation(m));
    }
    let mut inv = vec![usize::MAX; m];
    for (i, &p) in perm.iter().enumerate() {
        if p >= m || inv[p] != usize::MAX {
            return Err(Error::InvalidPermutation(m));
        }
        inv[p] = i;
    }
    Ok(inv)
}

/// Random M-cover with uniformly drawn per-edge permutations.
pub fn m_cover(g: &TannerGraph, m: usize, seed: u64) -> Result<CoverGraph> {
    if m == 0 {
        return Err(Error::InvalidParameter("cover degree M must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let perms = (0..g.n_edges())
        .map(|_| {
            let mut p: Vec<usize> = (0..m).collect();
            p.shuffle(&mut rng);
            p
        })
        .collect();
    CoverGraph::from_permutations(g.clone(), m, perms)
}

/// Replicates each entry `m` times in fiber-major order.
pub fn lift_vector<T: Clone>(values: &[T], n_base: usize, m: usize) -> Result<Vec<T>> {
    if values.len() != n_base {
        return Err(Error::LengthMismatch {
            expected: n_base,
            found: values.len(),
        });
    }
    Ok(values
        .iter()
        .flat_map(|x| std::iter::repeat_n(x.clone(), m))
        .collect())
}
