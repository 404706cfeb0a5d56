//! Minimum-cost backtrackless path search and the local-optimality verdict.

use num_integer::Integer;
use num_traits::Zero;

use super::{flip_llr, BacktracklessPath, Deviation};
use crate::channels::LlrVector;
use crate::error::{Error, Result};
use crate::graph::TannerGraph;
use crate::numeric::{Rational, Weight, TIE_TOLERANCE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Verdict {
    LocallyOptimal,
    NotLocallyOptimal,
    /// Minimum cost within the tie tolerance of zero (or below the margin).
    Boundary,
}

impl Verdict {
    pub fn is_lo(self) -> bool {
        self == Verdict::LocallyOptimal
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::LocallyOptimal => "LO",
            Verdict::NotLocallyOptimal => "NotLO",
            Verdict::Boundary => "Boundary",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifyOptions {
    /// Costs must exceed this to count as locally optimal.
    pub margin: f64,
    /// Costs with absolute value at most this are ties.
    pub tie_tolerance: f64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            margin: 0.0,
            tie_tolerance: TIE_TOLERANCE,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate<T> {
    pub verdict: Verdict,
    /// A minimizing path whenever the verdict is not LO.
    pub witness: Option<Deviation>,
    /// Minimum of `<w, χ(p)>`; `None` when no path of length `h` exists.
    pub min_cost: Option<T>,
}

/// Directed edges of the Tanner graph, indexed contiguously per tail node.
struct DirectedEdges {
    offset: Vec<usize>,
    tail: Vec<usize>,
    head: Vec<usize>,
}

impl DirectedEdges {
    fn new(g: &TannerGraph) -> Self {
        let mut offset = Vec::with_capacity(g.n_nodes() + 1);
        let mut tail = Vec::new();
        let mut head = Vec::new();
        for u in 0..g.n_nodes() {
            offset.push(tail.len());
            for &v in g.flat_neighbors(u) {
                tail.push(u);
                head.push(v);
            }
        }
        offset.push(tail.len());
        DirectedEdges { offset, tail, head }
    }

    fn out(&self, u: usize) -> std::ops::Range<usize> {
        self.offset[u]..self.offset[u + 1]
    }

    fn len(&self) -> usize {
        self.tail.len()
    }
}

/// Runs one relaxation step: extends every reachable walk by one edge
/// without reversing.
fn relax<T: Weight>(
    edges: &DirectedEdges,
    node_w: &[T],
    cur: &[Option<T>],
    next: &mut [Option<T>],
    pred: &mut [usize],
) {
    next.iter_mut().for_each(|x| *x = None);
    for (e, cost) in cur.iter().enumerate() {
        let Some(cost) = *cost else { continue };
        let (u, v) = (edges.tail[e], edges.head[e]);
        for e2 in edges.out(v) {
            let w = edges.head[e2];
            if w == u {
                continue;
            }
            let cand = cost + node_w[w];
            if next[e2].is_none_or(|b| cand < b) {
                next[e2] = Some(cand);
                pred[e2] = e;
            }
        }
    }
}

/// Minimum of the node-weight sum over backtrackless walks of length `h`,
/// counting the start of a closed walk once. Returns the cost and the walk
/// as flat ids.
pub(crate) fn anchored_min<T: Weight>(
    g: &TannerGraph,
    node_w: &[T],
    h: usize,
) -> Option<(T, Vec<usize>)> {
    if h == 0 {
        return None;
    }
    let edges = DirectedEdges::new(g);
    let m = edges.len();
    let mut best: Option<(T, Vec<usize>)> = None;
    let mut layers = vec![vec![None; m]; h];
    let mut preds = vec![vec![usize::MAX; m]; h];
    for s in 0..g.n_nodes() {
        layers[0].iter_mut().for_each(|x| *x = None);
        for e in edges.out(s) {
            layers[0][e] = Some(node_w[s] + node_w[edges.head[e]]);
        }
        for step in 1..h {
            let (done, rest) = layers.split_at_mut(step);
            relax(&edges, node_w, &done[step - 1], &mut rest[0], &mut preds[step]);
        }
        let mut improved = None;
        for (e, cost) in layers[h - 1].iter().enumerate() {
            let Some(mut cost) = *cost else { continue };
            if edges.head[e] == s {
                cost = cost - node_w[s];
            }
            let better = match (&best, improved) {
                (_, Some((b, _))) => cost < b,
                (Some((b, _)), None) => cost < *b,
                (None, None) => true,
            };
            if better {
                improved = Some((cost, e));
            }
        }
        if let Some((cost, mut e)) = improved {
            let mut walk = vec![edges.head[e]];
            for step in (0..h).rev() {
                walk.push(edges.tail[e]);
                if step > 0 {
                    e = preds[step][e];
                }
            }
            walk.reverse();
            best = Some((cost, walk));
        }
    }
    best
}

/// Single-pass minimum over all starts at once. It scores closed walks
/// without the endpoint correction, so it is only a screen: exact when
/// `h` is below the girth.
pub fn screen_min_cost_unanchored<T: Weight>(g: &TannerGraph, node_w: &[T], h: usize) -> Option<T> {
    if h == 0 {
        return None;
    }
    let edges = DirectedEdges::new(g);
    let m = edges.len();
    let mut cur: Vec<Option<T>> = (0..m)
        .map(|e| Some(node_w[edges.tail[e]] + node_w[edges.head[e]]))
        .collect();
    let mut next = vec![None; m];
    let mut pred = vec![0; m];
    for _ in 1..h {
        relax(&edges, node_w, &cur, &mut next, &mut pred);
        std::mem::swap(&mut cur, &mut next);
    }
    cur.into_iter().flatten().fold(None, |acc: Option<T>, c| match acc {
        Some(a) if a <= c => Some(a),
        _ => Some(c),
    })
}

fn check_len(g: &TannerGraph, len: usize) -> Result<()> {
    if len != g.n_vars() {
        return Err(Error::LengthMismatch {
            expected: g.n_vars(),
            found: len,
        });
    }
    Ok(())
}

fn witness(g: &TannerGraph, walk: Vec<usize>) -> Deviation {
    Deviation::from_path(g, BacktracklessPath::from_flat(g, &walk))
}

/// Floating-point certifier: `w = (-1)^x * λ`, weights `w_v / deg(v)`.
pub fn certify_local_optimality(
    g: &TannerGraph,
    x: &[u8],
    l: &LlrVector,
    h: usize,
    opts: CertifyOptions,
) -> Result<Certificate<f64>> {
    check_len(g, l.len())?;
    let w = flip_llr(x, l.values())?;
    certify_weights(g, &w, h, opts)
}

/// Floating-point certifier on already flipped weights.
pub fn certify_weights(
    g: &TannerGraph,
    w: &[f64],
    h: usize,
    opts: CertifyOptions,
) -> Result<Certificate<f64>> {
    check_len(g, w.len())?;
    if h == 0 {
        return Err(Error::InvalidParameter("h must be at least 1".into()));
    }
    let mut node_w = vec![0.0; g.n_nodes()];
    for v in 0..g.n_vars() {
        node_w[v] = w[v] / g.var_degree(v) as f64;
    }
    let Some((cost, walk)) = anchored_min(g, &node_w, h) else {
        return Ok(Certificate {
            verdict: Verdict::LocallyOptimal,
            witness: None,
            min_cost: None,
        });
    };
    let verdict = if cost.abs() <= opts.tie_tolerance {
        Verdict::Boundary
    } else if cost > opts.margin {
        Verdict::LocallyOptimal
    } else if cost < 0.0 {
        Verdict::NotLocallyOptimal
    } else {
        Verdict::Boundary
    };
    Ok(Certificate {
        verdict,
        witness: (!verdict.is_lo()).then(|| witness(g, walk)),
        min_cost: Some(cost),
    })
}

fn lcm_all(mut values: impl Iterator<Item = i128>) -> Option<i128> {
    values.try_fold(1i128, |acc, v| acc.checked_mul(v / acc.gcd(&v)))
}

/// Exact certifier for rational LLRs. Weights are scaled to integers by the
/// least common multiple of all degrees and denominators, so the verdict is
/// strict with no tolerance: a zero minimum is reported as `Boundary`.
pub fn certify_exact(
    g: &TannerGraph,
    x: &[u8],
    llr: &[Rational],
    h: usize,
) -> Result<Certificate<Rational>> {
    check_len(g, llr.len())?;
    if h == 0 {
        return Err(Error::InvalidParameter("h must be at least 1".into()));
    }
    let w = flip_llr(x, llr)?;
    let overflow = || Error::TooLarge {
        what: "exact weight scale",
        size: h,
        limit: 0,
    };
    let deg_lcm = lcm_all((0..g.n_vars()).map(|v| g.var_degree(v) as i128)).ok_or_else(overflow)?;
    let den_lcm = lcm_all(w.iter().map(|r| *r.denom())).ok_or_else(overflow)?;
    let scale = deg_lcm.checked_mul(den_lcm).ok_or_else(overflow)?;
    let limit = i128::MAX / (h as i128 + 2);
    let mut node_w = vec![0i128; g.n_nodes()];
    for v in 0..g.n_vars() {
        let per = scale / (*w[v].denom() * g.var_degree(v) as i128);
        let val = w[v].numer().checked_mul(per).ok_or_else(overflow)?;
        if val.abs() > limit {
            return Err(overflow());
        }
        node_w[v] = val;
    }
    let Some((cost, walk)) = anchored_min(g, &node_w, h) else {
        return Ok(Certificate {
            verdict: Verdict::LocallyOptimal,
            witness: None,
            min_cost: None,
        });
    };
    let verdict = match cost.signum() {
        1 => Verdict::LocallyOptimal,
        0 => Verdict::Boundary,
        _ => Verdict::NotLocallyOptimal,
    };
    Ok(Certificate {
        verdict,
        witness: (!verdict.is_lo()).then(|| witness(g, walk)),
        min_cost: Some(Rational::new(cost, scale)),
    })
}

/// Exact minimum of `<w, χ(p)>` through the dynamic program (`w` unflipped).
pub fn min_cost_exact(g: &TannerGraph, w: &[Rational], h: usize) -> Result<Option<Rational>> {
    let zeros = vec![0u8; w.len()];
    Ok(certify_exact(g, &zeros, w, h)?.min_cost)
}

impl Certificate<Rational> {
    pub fn is_zero_cost(&self) -> bool {
        self.min_cost.is_some_and(|c| c.is_zero())
    }
}
