//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use pathlo::codes::{build_ra_graph, Interleaver, TannerCode};
use pathlo::graph::{construct_regular, TannerGraph};
use pathlo::numeric::Rational;
use rand::Rng;

pub struct DeskCode {
    pub name: String,
    pub code: TannerCode,
}

fn spc(name: &str, g: TannerGraph) -> DeskCode {
    DeskCode {
        name: name.to_string(),
        code: TannerCode::with_spc(g).unwrap(),
    }
}

pub fn peg_12() -> TannerGraph {
    construct_regular(12, 2, 3, 8, 11, 2000).unwrap()
}

pub fn peg_16() -> TannerGraph {
    construct_regular(16, 2, 4, 6, 5, 2000).unwrap()
}

pub fn ra(reps: &[usize], il: Interleaver) -> TannerCode {
    build_ra_graph(reps, il).unwrap()
}

/// Rings, the K4 cycle code, two PEG codes and RA codes.
pub fn desk_codes() -> Vec<DeskCode> {
    let mut out: Vec<DeskCode> = (2..=6)
        .map(|m| spc(&format!("ring{m}"), TannerGraph::ring(m).unwrap()))
        .collect();
    out.push(spc("k4", TannerGraph::k4_cycle_code()));
    out.push(spc("peg12", peg_12()));
    out.push(spc("peg16", peg_16()));
    for (name, reps, il) in [
        ("ra22", vec![2, 2], Interleaver::Identity),
        ("ra222", vec![2, 2, 2], Interleaver::Random(1)),
        ("ra42", vec![4, 2], Interleaver::Random(2)),
        ("ra2222", vec![2, 2, 2, 2], Interleaver::Random(3)),
    ] {
        out.push(DeskCode {
            name: name.to_string(),
            code: ra(&reps, il),
        });
    }
    out
}

/// Random small rational in `[lo, hi]` with denominator up to `max_den`.
pub fn random_rational<R: Rng>(rng: &mut R, lo: i128, hi: i128, max_den: i128) -> Rational {
    let den = rng.random_range(1..=max_den);
    Rational::new(rng.random_range(lo * den..=hi * den), den)
}

/// Random bipartite graph: every variable gets degree 2 or 3, checks are
/// filled at random, then empty checks are dropped.
pub fn random_graph<R: Rng>(rng: &mut R, max_edges: usize) -> TannerGraph {
    loop {
        let n = rng.random_range(2..=15);
        let j = rng.random_range(2..=8);
        let mut checks = vec![Vec::new(); j];
        let mut edges = 0;
        for v in 0..n {
            let deg = rng.random_range(1..=4usize).min(j);
            let mut picked = Vec::new();
            while picked.len() < deg {
                let c = rng.random_range(0..j);
                if !picked.contains(&c) {
                    picked.push(c);
                }
            }
            for c in picked {
                checks[c].push(v);
                edges += 1;
            }
        }
        if edges > max_edges {
            continue;
        }
        checks.retain(|c| !c.is_empty());
        if let Ok(g) = TannerGraph::new(n, checks) {
            return g;
        }
    }
}

/// Composite Simpson rule for `∫_a^b f`.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
    let n = intervals + intervals % 2;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// `Pr{N(0, σ²) ≥ x}` by quadrature of the density over `[x, x + 40σ]`.
pub fn gaussian_tail_quadrature(x: f64, sigma: f64) -> f64 {
    let density = |t: f64| (-(t * t) / (2.0 * sigma * sigma)).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt());
    simpson(density, x, x + 40.0 * sigma, 200_000)
}
