//! Splitting a codeword into simple cycles of its support subgraph, and the
//! cycles further into length-`h` path segments.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::{characteristic_vector, BacktracklessPath, Deviation};
use crate::codes::check_binary;
use crate::error::{Error, Result};
use crate::graph::{Node, TannerGraph};
use crate::numeric::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionTerm {
    pub path: BacktracklessPath,
    /// `χ(γ)` for a cycle term, the deviation vector for a segment term.
    pub vector: Vec<Rational>,
    /// Probability of this term; the weights sum to one.
    pub weight: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub terms: Vec<DecompositionTerm>,
    pub alpha: Rational,
    /// Simple cycles underlying the terms.
    pub cycles: Vec<BacktracklessPath>,
    /// Segment correction factor per cycle; all ones for a cycle decomposition.
    pub deltas: Vec<Rational>,
}

impl Decomposition {
    /// `alpha * Σ weight * vector`.
    pub fn reconstruct(&self, n: usize) -> Vec<Rational> {
        let mut acc = vec![Rational::zero(); n];
        for t in &self.terms {
            for (a, v) in acc.iter_mut().zip(&t.vector) {
                *a += t.weight * v;
            }
        }
        acc.into_iter().map(|a| a * self.alpha).collect()
    }

    /// Whether the reconstruction equals `x` exactly.
    pub fn reproduces(&self, x: &[u8]) -> bool {
        self.reconstruct(x.len())
            .iter()
            .zip(x)
            .all(|(r, &b)| *r == Rational::from_integer(b as i128))
    }

    pub fn total_weight(&self) -> Rational {
        self.terms.iter().map(|t| t.weight).sum()
    }
}

/// Eulerian circuit of one component of an even subgraph, as flat ids
/// (first equals last). Consumes the used edges from `adj`.
fn hierholzer(adj: &mut HashMap<usize, Vec<usize>>, start: usize) -> Vec<usize> {
    let mut stack = vec![start];
    let mut circuit = Vec::new();
    while let Some(&u) = stack.last() {
        let next = adj.get_mut(&u).and_then(Vec::pop);
        match next {
            Some(v) => {
                if let Some(list) = adj.get_mut(&v) {
                    if let Some(pos) = list.iter().position(|&w| w == u) {
                        list.swap_remove(pos);
                    }
                }
                stack.push(v);
            }
            None => circuit.push(stack.pop().unwrap()),
        }
    }
    circuit
}

/// Cuts a closed walk into edge-disjoint simple cycles.
fn split_simple(circuit: &[usize]) -> Vec<Vec<usize>> {
    let mut cycles = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut pos: HashMap<usize, usize> = HashMap::new();
    for &u in circuit {
        if let Some(&i) = pos.get(&u) {
            let mut cycle: Vec<usize> = stack.drain(i + 1..).collect();
            for w in &cycle {
                pos.remove(w);
            }
            cycle.insert(0, u);
            cycle.push(u);
            cycles.push(cycle);
        } else {
            pos.insert(u, stack.len());
            stack.push(u);
        }
    }
    cycles
}

/// Simple cycles of the subgraph spanned by `supp(x)` and its checks, with
/// uniform weights and `alpha = 2s` for `s` cycles.
pub fn decompose_to_cycles(g: &TannerGraph, x: &[u8]) -> Result<Decomposition> {
    check_binary(x, g.n_vars())?;
    if x.iter().all(|&b| b == 0) {
        return Err(Error::ZeroCodeword);
    }
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for v in (0..g.n_vars()).filter(|&v| x[v] == 1) {
        for &c in g.var_checks(v) {
            let cf = g.flat_id(Node::Check(c));
            adj.entry(v).or_default().push(cf);
            adj.entry(cf).or_default().push(v);
        }
    }
    let mut keys: Vec<usize> = adj.keys().copied().collect();
    keys.sort_unstable();
    for &k in &keys {
        if adj[&k].len() % 2 == 1 {
            return Err(Error::NotEulerian(g.node(k).to_string()));
        }
    }
    for list in adj.values_mut() {
        list.sort_unstable_by(|a, b| b.cmp(a));
    }
    let mut cycles = Vec::new();
    for &k in &keys {
        if adj[&k].is_empty() {
            continue;
        }
        let circuit = hierholzer(&mut adj, k);
        cycles.extend(split_simple(&circuit));
    }
    let s = cycles.len() as i128;
    let weight = Rational::new(1, s);
    let cycles: Vec<BacktracklessPath> = cycles
        .iter()
        .map(|c| BacktracklessPath::from_flat(g, c))
        .collect();
    let terms = cycles
        .iter()
        .map(|c| DecompositionTerm {
            path: c.clone(),
            vector: characteristic_vector(g, c),
            weight,
        })
        .collect();
    Ok(Decomposition {
        terms,
        alpha: Rational::from_integer(2 * s),
        deltas: vec![Rational::one(); cycles.len()],
        cycles,
    })
}

/// The `ℓ` length-`h` segments of a simple cycle of length `ℓ`, one starting
/// at each cycle vertex, and the factor `δ` with
/// `χ(γ) = δ * Σ χ(ψ_i) / (h+1)`.
pub fn cycle_to_paths(
    g: &TannerGraph,
    gamma: &BacktracklessPath,
    h: usize,
) -> Result<(Vec<BacktracklessPath>, Rational)> {
    if h == 0 {
        return Err(Error::InvalidParameter("h must be at least 1".into()));
    }
    let nodes = gamma.nodes();
    if !gamma.is_closed() {
        return Err(Error::InvalidCycle("path is not closed".into()));
    }
    let ring = &nodes[..nodes.len() - 1];
    let mut seen = std::collections::HashSet::new();
    if !ring.iter().all(|n| seen.insert(*n)) {
        return Err(Error::InvalidCycle("cycle repeats a node".into()));
    }
    let l = ring.len();
    if l < 4 {
        return Err(Error::InvalidCycle(format!("length {l} is too short")));
    }
    let segments = (0..l)
        .map(|i| BacktracklessPath::new(g, (0..=h).map(|t| ring[(i + t) % l]).collect()))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::InvalidCycle(e.to_string()))?;
    let delta = if h.is_multiple_of(l) {
        Rational::new(h as i128 + 1, h as i128)
    } else {
        Rational::one()
    };
    Ok((segments, delta))
}

/// Composes the cycle decomposition with the segment split: deviations with
/// weights proportional to `ρ(γ) δ_γ`, normalized to a distribution.
pub fn decompose_to_deviations(g: &TannerGraph, x: &[u8], h: usize) -> Result<Decomposition> {
    let base = decompose_to_cycles(g, x)?;
    let mut raw = Vec::new();
    let mut deltas = Vec::new();
    for term in &base.terms {
        let (segments, delta) = cycle_to_paths(g, &term.path, h)?;
        deltas.push(delta);
        for seg in segments {
            raw.push((Deviation::from_path(g, seg), term.weight * delta));
        }
    }
    let mass: Rational = raw.iter().map(|(_, w)| *w).sum();
    let terms = raw
        .into_iter()
        .map(|(d, w)| DecompositionTerm {
            path: d.path,
            vector: d.vector,
            weight: w / mass,
        })
        .collect();
    Ok(Decomposition {
        terms,
        alpha: base.alpha * mass,
        cycles: base.cycles,
        deltas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring4_single_cycle() {
        let g = TannerGraph::ring(4).unwrap();
        let d = decompose_to_cycles(&g, &[1, 1, 1, 1]).unwrap();
        assert_eq!(d.cycles.len(), 1);
        assert_eq!(d.cycles[0].len(), 8);
        assert_eq!(d.alpha, Rational::from_integer(2));
        assert_eq!(d.terms[0].vector, vec![Rational::new(1, 2); 4]);
        assert!(d.reproduces(&[1, 1, 1, 1]));
    }

    #[test]
    fn k4_triangle() {
        let g = TannerGraph::k4_cycle_code();
        let x = [1, 1, 0, 1, 0, 0];
        let d = decompose_to_cycles(&g, &x).unwrap();
        assert_eq!(d.cycles.len(), 1);
        assert_eq!(d.cycles[0].len(), 6);
        assert_eq!(d.alpha, Rational::from_integer(2));
        assert!(d.reproduces(&x));
    }

    #[test]
    fn zero_and_odd_inputs() {
        let g = TannerGraph::ring(4).unwrap();
        assert!(matches!(decompose_to_cycles(&g, &[0; 4]), Err(Error::ZeroCodeword)));
        assert!(matches!(decompose_to_cycles(&g, &[1, 0, 0, 0]), Err(Error::NotEulerian(_))));
    }

    #[test]
    fn segment_factors() {
        let g = TannerGraph::ring(4).unwrap();
        let cycle = &decompose_to_cycles(&g, &[1; 4]).unwrap().cycles[0];
        for (h, delta) in [(3, Rational::one()), (8, Rational::new(9, 8)), (16, Rational::new(17, 16))] {
            let (segs, d) = cycle_to_paths(&g, cycle, h).unwrap();
            assert_eq!(segs.len(), 8);
            assert_eq!(d, delta);
            let mut sum = vec![Rational::zero(); 4];
            for s in &segs {
                for (a, c) in sum.iter_mut().zip(characteristic_vector(&g, s)) {
                    *a += c;
                }
            }
            let scale = d / Rational::from_integer(h as i128 + 1);
            let lhs: Vec<Rational> = sum.into_iter().map(|s| s * scale).collect();
            assert_eq!(lhs, characteristic_vector(&g, cycle));
        }
    }

    #[test]
    fn deviation_reconstruction() {
        let g = TannerGraph::ring(4).unwrap();
        for h in [3, 8] {
            let d = decompose_to_deviations(&g, &[1; 4], h).unwrap();
            assert_eq!(d.terms.len(), 8);
            assert!(d.alpha > Rational::one());
            assert_eq!(d.total_weight(), Rational::one());
            assert!(d.reproduces(&[1; 4]));
        }
        let k4 = TannerGraph::k4_cycle_code();
        // 4-cycle 0-1-3-2-0 of K4 uses edges 01, 13, 23, 02
        let x = [1, 1, 0, 0, 1, 1];
        let d = decompose_to_deviations(&k4, &x, 5).unwrap();
        assert!(d.reproduces(&x));
    }

    #[test]
    fn rejects_non_cycles() {
        let g = TannerGraph::ring(4).unwrap();
        let open = BacktracklessPath::parse(&g, "c0 v1 c1").unwrap();
        assert!(cycle_to_paths(&g, &open, 3).is_err());
    }
}
