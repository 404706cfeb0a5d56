//! Exhaustive enumeration of backtrackless paths.

use num_traits::Zero;

use super::{BacktracklessPath, Deviation};
use crate::error::{Error, Result};
use crate::graph::TannerGraph;
use crate::numeric::Rational;

/// Largest `h` accepted by [`min_cost_path_bruteforce`].
pub const BRUTE_FORCE_MAX_H: usize = 10;
/// Largest edge count accepted by [`min_cost_path_bruteforce`].
pub const BRUTE_FORCE_MAX_EDGES: usize = 200;

struct Walker<'a, F> {
    g: &'a TannerGraph,
    h: usize,
    simple_only: bool,
    on_path: Vec<bool>,
    stack: Vec<usize>,
    visit: F,
}

impl<F: FnMut(&[usize])> Walker<'_, F> {
    fn extend(&mut self) {
        if self.stack.len() == self.h + 1 {
            (self.visit)(&self.stack);
            return;
        }
        let last = *self.stack.last().unwrap();
        let prev = (self.stack.len() >= 2).then(|| self.stack[self.stack.len() - 2]);
        for &next in self.g.flat_neighbors(last) {
            if Some(next) == prev || (self.simple_only && self.on_path[next]) {
                continue;
            }
            self.stack.push(next);
            self.on_path[next] = true;
            self.extend();
            self.stack.pop();
            // a node may sit on the stack more than once in non-simple mode
            self.on_path[next] = self.stack.contains(&next);
        }
    }
}

/// Visits every directed backtrackless path of length `h` that starts at the
/// flat node `start`, as a slice of flat ids.
pub fn visit_paths_from<F: FnMut(&[usize])>(
    g: &TannerGraph,
    start: usize,
    h: usize,
    simple_only: bool,
    visit: F,
) {
    if h == 0 {
        return;
    }
    let mut walker = Walker {
        g,
        h,
        simple_only,
        on_path: vec![false; g.n_nodes()],
        stack: vec![start],
        visit,
    };
    walker.on_path[start] = true;
    walker.extend();
}

/// Visits every backtrackless path of length `h` once per undirected path:
/// a sequence is reported only if it is not larger than its reversal.
/// No backtrackless path equals its own reversal, so nothing is lost.
pub fn visit_paths<F: FnMut(&[usize])>(g: &TannerGraph, h: usize, simple_only: bool, mut visit: F) {
    for start in 0..g.n_nodes() {
        visit_paths_from(g, start, h, simple_only, |p| {
            if p.iter().le(p.iter().rev()) {
                visit(p);
            }
        });
    }
}

/// All deviations of length `h`, one per undirected path.
pub fn enumerate_deviations(g: &TannerGraph, h: usize, simple_only: bool) -> Vec<Deviation> {
    let mut out = Vec::new();
    visit_paths(g, h, simple_only, |p| {
        out.push(Deviation::from_path(g, BacktracklessPath::from_flat(g, p)));
    });
    out
}

/// `<w, χ(p)>` for a path given as flat ids.
pub(crate) fn path_cost(g: &TannerGraph, w: &[Rational], flat: &[usize]) -> Rational {
    let closed = flat.first() == flat.last();
    let body = if closed { &flat[..flat.len() - 1] } else { flat };
    body.iter()
        .filter(|&&f| f < g.n_vars())
        .fold(Rational::zero(), |acc, &v| {
            acc + w[v] / Rational::from_integer(g.var_degree(v) as i128)
        })
}

/// Exact minimum of `<w, χ(p)>` over every backtrackless path of length `h`,
/// with a minimizing path. `None` when the graph has no such path.
pub fn min_cost_path_bruteforce(
    g: &TannerGraph,
    w: &[Rational],
    h: usize,
) -> Result<Option<(Rational, BacktracklessPath)>> {
    if w.len() != g.n_vars() {
        return Err(Error::LengthMismatch {
            expected: g.n_vars(),
            found: w.len(),
        });
    }
    if h > BRUTE_FORCE_MAX_H || g.n_edges() > BRUTE_FORCE_MAX_EDGES {
        return Err(Error::GuardExceeded(format!(
            "h = {h}, |E| = {} (limits {BRUTE_FORCE_MAX_H}, {BRUTE_FORCE_MAX_EDGES})",
            g.n_edges()
        )));
    }
    let mut best: Option<(Rational, Vec<usize>)> = None;
    visit_paths(g, h, false, |p| {
        let cost = path_cost(g, w, p);
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, p.to_vec()));
        }
    });
    Ok(best.map(|(c, p)| (c, BacktracklessPath::from_flat(g, &p))))
}
