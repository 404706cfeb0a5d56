//! Exact union bound over simple paths for the BSC.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::TannerGraph;
use crate::local_opt::visit_paths;
use crate::numeric::{big_to_f64, big_to_string};

/// Largest number of undirected simple paths the union bound enumerates.
pub const MAX_UNION_PATHS: usize = 5_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnionBoundResult {
    pub h: usize,
    /// Exact `Σ_paths Pr{cost ≤ 0}` as `num/den`.
    pub exact: String,
    #[serde(skip)]
    pub exact_value: BigRational,
    pub exact_f64: f64,
    /// Undirected simple paths of length `h`.
    pub census: usize,
    /// Census split by the number of variable nodes on the path.
    pub census_by_vars: BTreeMap<usize, usize>,
    /// `|V| · D^{h/2}`.
    pub closed_form_count: f64,
    /// `2^{h/2} · p^{hδ/2}`.
    pub per_path_bound: f64,
    /// `|V| · D^{h/2} · 2^{h/2} · p^{hδ/2}`.
    pub closed_form: f64,
    /// Both counting premises hold: the census fits the path count and
    /// every path carries at least `h/2` variable nodes.
    pub census_respects_counting: bool,
    pub discrepancies: Vec<String>,
}

/// Probability that `Σ_i s_i / deg_i ≤ 0`, where each `s_i` is `-1` with
/// probability `p` and `+1` otherwise, for the given variable degrees.
fn failure_probability(degrees: &[usize], p: &BigRational) -> BigRational {
    let lcm = degrees.iter().fold(1usize, |a, &d| a / gcd(a, d) * d) as i64;
    let weights: Vec<i64> = degrees.iter().map(|&d| lcm / d as i64).collect();
    let q = BigRational::one() - p;
    let k = degrees.len();
    let mut total = BigRational::zero();
    for mask in 0u32..(1u32 << k) {
        let cost: i64 = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| if mask >> i & 1 == 1 { -w } else { w })
            .sum();
        if cost <= 0 {
            let flips = mask.count_ones() as usize;
            let mut term = BigRational::one();
            for _ in 0..flips {
                term *= p;
            }
            for _ in flips..k {
                term *= &q;
            }
            total += term;
        }
    }
    total
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Sums the exact failure probability of every simple path of length `h`
/// under BSC sign flips with crossover `p`, and reports the closed-form
/// count-times-per-path bound next to it.
pub fn union_bound_exact(g: &TannerGraph, h: usize, p: f64, delta: f64) -> Result<UnionBoundResult> {
    if !(p > 0.0 && p <= 0.5) {
        return Err(Error::InvalidParameter(format!("p = {p} is outside (0, 1/2]")));
    }
    if h == 0 {
        return Err(Error::InvalidParameter("h must be at least 1".into()));
    }
    if let Some(girth) = g.girth() {
        if h >= girth {
            return Err(Error::GirthViolation { h, girth });
        }
    }
    let p_exact = BigRational::from_float(p).expect("finite p");
    let mut by_degrees: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut census = 0usize;
    let mut overflow = false;
    visit_paths(g, h, true, |path| {
        census += 1;
        if census > MAX_UNION_PATHS {
            overflow = true;
            return;
        }
        let mut degs: Vec<usize> = path
            .iter()
            .filter(|&&f| f < g.n_vars())
            .map(|&v| g.var_degree(v))
            .collect();
        degs.sort_unstable();
        *by_degrees.entry(degs).or_default() += 1;
    });
    if overflow {
        return Err(Error::GuardExceeded(format!(
            "more than {MAX_UNION_PATHS} simple paths of length {h}"
        )));
    }
    let mut exact = BigRational::zero();
    let mut census_by_vars = BTreeMap::new();
    for (degs, count) in &by_degrees {
        exact += failure_probability(degs, &p_exact) * BigRational::from_integer(BigInt::from(*count));
        *census_by_vars.entry(degs.len()).or_default() += count;
    }
    let half = h as f64 / 2.0;
    let closed_form_count = g.n_nodes() as f64 * (g.d() as f64).powf(half);
    let per_path_bound = 2f64.powf(half) * p.powf(half * delta);
    let closed_form = closed_form_count * per_path_bound;
    let mut discrepancies = Vec::new();
    let directed = 2 * census;
    if directed as f64 > closed_form_count {
        discrepancies.push(format!(
            "{directed} directed simple paths exceed |V|·D^(h/2) = {closed_form_count}"
        ));
    }
    let min_vars = census_by_vars.keys().next().copied().unwrap_or(0);
    if census > 0 && (min_vars as f64) < half {
        discrepancies.push(format!("some paths carry {min_vars} variable nodes, fewer than h/2 = {half}"));
    }
    let census_respects_counting = discrepancies.is_empty();
    let exact_f64 = big_to_f64(&exact);
    if census_respects_counting && exact_f64 > closed_form {
        discrepancies.push(format!(
            "exact union bound {exact_f64} exceeds the closed form {closed_form}"
        ));
    }
    Ok(UnionBoundResult {
        h,
        exact: big_to_string(&exact),
        exact_value: exact,
        exact_f64,
        census,
        census_by_vars,
        closed_form_count,
        per_path_bound,
        closed_form,
        census_respects_counting,
        discrepancies,
    })
}

/// `d_L^min / (d_L^min + d_L^max)` of a graph.
pub fn default_delta(g: &TannerGraph) -> f64 {
    let (lo, hi) = (g.d_l_min() as f64, g.d_l_max() as f64);
    lo / (lo + hi)
}
