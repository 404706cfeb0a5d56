//! Exit criteria. Each test prints one PASS/FAIL line and then asserts it.

mod common;

use std::time::Instant;

use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{desk_codes, gaussian_tail_quadrature, random_graph, random_rational};
use pathlo::channels::Channel;
use pathlo::codes::{build_ra_graph, punctured_occurrences, Interleaver, TannerCode};
use pathlo::decoders::{LpDecoder, MlDecoder};
use pathlo::experiments::{
    bound_awgn, bound_bsc, default_delta, gaussian_tail, run_trials, union_bound_exact,
    validate_chain, wilson_standard_error, TrialOptions,
};
use pathlo::graph::{lift_vector, m_cover, TannerGraph};
use pathlo::local_opt::{
    certify_exact, decompose_to_deviations, min_cost_exact, min_cost_path_bruteforce, visit_paths,
};
use pathlo::numeric::{to_big, Rational};

fn report(n: u32, name: &str, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("criterion {n:>2} [{name}]: {status} ({detail})");
}

#[test]
fn criterion_01_dp_matches_exhaustive_search() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1);
    let mut checked = 0usize;
    let mut mismatches = 0usize;
    let mut closed_regime = 0usize;
    for _ in 0..500 {
        let g = random_graph(&mut rng, 60);
        let girth = g.girth();
        let w: Vec<Rational> = (0..g.n_vars()).map(|_| random_rational(&mut rng, -3, 3, 2)).collect();
        for h in 1..=8 {
            let dp = min_cost_exact(&g, &w, h).unwrap();
            let bf = min_cost_path_bruteforce(&g, &w, h).unwrap().map(|(c, _)| c);
            checked += 1;
            if girth.is_some_and(|gi| h >= gi) {
                closed_regime += 1;
            }
            if dp != bf {
                mismatches += 1;
                eprintln!("mismatch h={h} dp={dp:?} bf={bf:?}\n{}", g.to_text());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = mismatches == 0 && secs < 300.0;
    report(
        1,
        "dp vs exhaustive",
        pass,
        &format!("{checked} cases over 500 graphs, {closed_regime} with h >= girth, {mismatches} mismatches, {secs:.1}s"),
    );
    assert!(pass);
}

struct CertTrials {
    trials: usize,
    lo: usize,
    ml_counterexamples: usize,
    lp_counterexamples: usize,
}

/// Random codeword, random rational LLRs biased towards that codeword and
/// random `h`; decoders are consulted whenever the certificate holds.
fn cert_trials(trials: usize, seed: u64) -> CertTrials {
    let codes = desk_codes();
    let ml: Vec<MlDecoder> = codes.iter().map(|c| MlDecoder::new(&c.code).unwrap()).collect();
    let lp: Vec<LpDecoder> = codes.iter().map(|c| LpDecoder::new(&c.code).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = CertTrials {
        trials,
        lo: 0,
        ml_counterexamples: 0,
        lp_counterexamples: 0,
    };
    for t in 0..trials {
        let i = t % codes.len();
        let tc = &codes[i].code;
        let words = ml[i].codewords();
        let x = words[rng.random_range(0..words.len())].clone();
        let mut llr: Vec<Rational> = x
            .iter()
            .map(|&b| {
                let w = random_rational(&mut rng, -2, 4, 3);
                if b == 1 {
                    -w
                } else {
                    w
                }
            })
            .collect();
        for &p in tc.puncture() {
            llr[p] = Rational::from_integer(0);
        }
        let h = rng.random_range(2..=8);
        let cert = certify_exact(tc.graph(), &x, &llr, h).unwrap();
        if !cert.verdict.is_lo() {
            continue;
        }
        out.lo += 1;
        let m = ml[i].decode(&llr).unwrap();
        if !(m.unique && m.minimizers[0] == x) {
            out.ml_counterexamples += 1;
            eprintln!("ML counterexample on {} h={h} x={x:?} llr={llr:?}", codes[i].name);
        }
        let big: Vec<BigRational> = llr.iter().map(to_big).collect();
        let s = lp[i].decode(&big).unwrap();
        if !(s.unique && s.word().as_deref() == Some(&x[..])) {
            out.lp_counterexamples += 1;
            eprintln!(
                "LP counterexample on {} h={h} girth={:?} x={x:?} llr={llr:?} integral={} unique={}",
                codes[i].name,
                tc.graph().girth(),
                s.integral,
                s.unique
            );
        }
    }
    out
}

#[test]
fn criterion_02_certificate_implies_unique_ml() {
    let r = cert_trials(10_000, 0xC2);
    let pass = r.ml_counterexamples == 0 && r.lo > 0;
    report(
        2,
        "certificate => unique ML",
        pass,
        &format!("{} trials, {} certified, {} counterexamples", r.trials, r.lo, r.ml_counterexamples),
    );
    assert!(pass);
}

#[test]
fn criterion_03_certificate_implies_unique_lp() {
    let r = cert_trials(10_000, 0xC2);
    let pass = r.lp_counterexamples == 0 && r.lo > 0;
    report(
        3,
        "certificate => unique integral LP",
        pass,
        &format!("{} trials, {} certified, {} counterexamples", r.trials, r.lo, r.lp_counterexamples),
    );
    assert!(pass);
}

fn delta_branch_ok(cycle_len: usize, h: usize, delta: Rational) -> bool {
    let expect = if h.is_multiple_of(cycle_len) {
        Rational::new(h as i128 + 1, h as i128)
    } else {
        Rational::one()
    };
    delta == expect
}

#[test]
fn criterion_04_decompositions_are_exact() {
    let mut cases: Vec<(String, TannerGraph, Vec<Vec<u8>>)> = Vec::new();
    let k4 = TannerCode::with_spc(TannerGraph::k4_cycle_code()).unwrap();
    let words: Vec<Vec<u8>> = k4.enumerate_codewords().unwrap().into_iter().filter(|w| w.contains(&1)).collect();
    assert_eq!(words.len(), 7);
    cases.push(("k4".into(), k4.graph().clone(), words));
    for m in 2..=6 {
        cases.push((format!("ring{m}"), TannerGraph::ring(m).unwrap(), vec![vec![1; m]]));
    }
    for (name, g) in [("peg12", common::peg_12()), ("peg16", common::peg_16())] {
        let tc = TannerCode::with_spc(g.clone()).unwrap();
        let words = tc.enumerate_codewords().unwrap().into_iter().filter(|w| w.contains(&1)).collect();
        cases.push((name.into(), g, words));
    }
    let mut checked = 0;
    let mut failures = 0;
    for (name, g, words) in &cases {
        for x in words {
            for h in [2, 3, 8, 16] {
                let d = decompose_to_deviations(g, x, h).unwrap();
                let deltas_ok = d
                    .cycles
                    .iter()
                    .zip(&d.deltas)
                    .all(|(c, &delta)| delta_branch_ok(c.len(), h, delta));
                checked += 1;
                if !(d.reproduces(x) && d.alpha > Rational::one() && d.total_weight() == Rational::one() && deltas_ok) {
                    failures += 1;
                    eprintln!("decomposition failure on {name} x={x:?} h={h}");
                }
            }
        }
    }
    let pass = failures == 0;
    report(4, "exact decompositions", pass, &format!("{checked} (codeword, h) pairs, {failures} failures"));
    assert!(pass);
}

#[test]
fn criterion_05_verdicts_survive_lifting() {
    let codes = desk_codes();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC5);
    let mut mismatches = 0;
    let mut below_girth = 0;
    let mut mismatches_below_girth = 0;
    let tuples = 240;
    for t in 0..tuples {
        let tc = &codes[t % codes.len()].code;
        let g = tc.graph();
        let words = tc.enumerate_codewords().unwrap();
        let x = words[rng.random_range(0..words.len())].clone();
        let llr: Vec<Rational> = (0..g.n_vars()).map(|_| random_rational(&mut rng, -2, 3, 2)).collect();
        let h = rng.random_range(2..=8);
        let m = rng.random_range(2..=3);
        let cover = m_cover(g, m, rng.random()).unwrap();
        let base = certify_exact(g, &x, &llr, h).unwrap();
        let lifted = certify_exact(
            cover.lifted(),
            &lift_vector(&x, g.n_vars(), m).unwrap(),
            &lift_vector(&llr, g.n_vars(), m).unwrap(),
            h,
        )
        .unwrap();
        let short = g.girth().is_none_or(|gi| h < gi);
        if short {
            below_girth += 1;
        }
        if base.verdict.is_lo() != lifted.verdict.is_lo() {
            mismatches += 1;
            if short {
                mismatches_below_girth += 1;
            }
            eprintln!(
                "lift mismatch: {} h={h} M={m} girth={:?} base={:?} cover={:?}",
                codes[t % codes.len()].name,
                g.girth(),
                base.min_cost,
                lifted.min_cost
            );
        }
    }
    let pass = mismatches == 0;
    report(
        5,
        "verdicts survive lifting",
        pass,
        &format!(
            "{tuples} tuples, {mismatches} mismatches ({mismatches_below_girth} of {below_girth} with h < girth)"
        ),
    );
    assert!(pass);
}

struct ChainInstance {
    name: &'static str,
    code: TannerCode,
    h: usize,
}

fn chain_instances() -> Vec<ChainInstance> {
    let ring = TannerCode::with_spc(TannerGraph::ring(6).unwrap()).unwrap();
    let peg = TannerCode::with_spc(common::peg_12()).unwrap();
    let h_ring = ring.graph().girth().unwrap() - 1;
    let h_peg = peg.graph().girth().unwrap() - 1;
    vec![
        ChainInstance { name: "ring6", code: ring, h: h_ring },
        ChainInstance { name: "peg12", code: peg, h: h_peg },
    ]
}

const CHAIN_PS: [f64; 3] = [0.001, 0.01, 0.05];
const CHAIN_TRIALS: usize = 100_000;

#[test]
fn criterion_06_certificate_failure_bounds_lp_failure() {
    let start = Instant::now();
    let mut violations = 0;
    let mut aggregate_ok = true;
    let mut lines = Vec::new();
    for inst in chain_instances() {
        for p in CHAIN_PS {
            let run = run_trials(&inst.code, Channel::Bsc { p }, inst.h, CHAIN_TRIALS, 0xC6, TrialOptions::default()).unwrap();
            violations += validate_chain(&run.records).violations.len();
            aggregate_ok &= run.summary.rate_lp <= run.summary.rate_lo;
            lines.push(format!("{}@{p}: lo {:.5} lp {:.5}", inst.name, run.summary.rate_lo, run.summary.rate_lp));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = violations == 0 && aggregate_ok && secs < 1800.0;
    report(6, "per-trial chain", pass, &format!("{violations} violations, {secs:.1}s; {}", lines.join("; ")));
    assert!(pass);
}

#[test]
fn criterion_07_union_bound_consistency() {
    let mut pass = true;
    let mut lines = Vec::new();
    let mut discrepancies = Vec::new();
    for inst in chain_instances() {
        let g = inst.code.graph();
        for p in CHAIN_PS {
            let ub = union_bound_exact(g, inst.h, p, default_delta(g)).unwrap();
            let run = run_trials(&inst.code, Channel::Bsc { p }, inst.h, CHAIN_TRIALS, 0xC6, TrialOptions::default()).unwrap();
            let lo = run.summary.lo_failures;
            let se = wilson_standard_error(lo, run.summary.trials);
            let empirical_ok = ub.exact_f64 >= run.summary.rate_lo - 2.0 * se;
            let closed_ok = !ub.census_respects_counting || ub.closed_form >= ub.exact_f64;
            if !ub.census_respects_counting {
                discrepancies.push(format!("{}@{p}: {}", inst.name, ub.discrepancies.join(", ")));
            }
            pass &= empirical_ok && closed_ok;
            lines.push(format!(
                "{}@{p}: exact {:.3e} >= {:.3e} - 2*{:.1e}: {empirical_ok}, closed form {:.3e}: {closed_ok}",
                inst.name, ub.exact_f64, run.summary.rate_lo, se, ub.closed_form
            ));
        }
    }
    for d in &discrepancies {
        println!("counting discrepancy: {d}");
    }
    report(7, "union bound consistency", pass, &lines.join("; "));
    assert!(pass);
}

#[test]
fn criterion_08_bound_specializations() {
    let mut pass = true;
    let mut notes = Vec::new();
    for d in [4.0f64, 6.0, 8.0, 12.0, 20.0] {
        for n in [1e3f64, 1e5, 1e7] {
            let r = bound_bsc(n, d, 3.0, 3.0, 0.5, false).unwrap();
            let closed = 1.0 / (4.0 * d * d * d * d * d * d * d * d);
            let ok = r.regular_threshold == Some(closed)
                && r.regular_bound == Some(1.0 / n.sqrt())
                && ((r.threshold - closed) / closed).abs() < 1e-12;
            pass &= ok;
            let a = bound_awgn(n, d, 0.5, Some(0.2), false).unwrap();
            let threshold = 1.0 / (d.ln() * 8.0);
            let bound = 0.2 / (std::f64::consts::PI * n.ln() / d.ln()).sqrt() * n.powf(-0.5);
            let awgn_ok = ((a.threshold - threshold) / threshold).abs() < 1e-15
                && ((a.bound.unwrap() - bound) / bound).abs() < 1e-14;
            pass &= awgn_ok;
        }
    }
    let two18 = bound_bsc(1e4, 4.0, 2.0, 2.0, 0.5, false).unwrap().regular_threshold;
    pass &= two18 == Some(2f64.powi(-18));
    notes.push(format!("D=4 regular threshold {:?}", two18));
    let d6 = bound_awgn(1e4, 6.0, 0.5, None, false).unwrap().threshold;
    pass &= d6 == 1.0 / (8.0 * 6f64.ln()) && (d6 - 0.069764).abs() < 1e-6;
    notes.push(format!("D=6 AWGN threshold {d6:.6}"));
    report(8, "bound specializations", pass, &notes.join(", "));
    assert!(pass);
}

#[test]
fn criterion_09_gaussian_tail_dominates() {
    let mut worst = f64::INFINITY;
    let mut failures = 0;
    for i in 0..10 {
        let sigma = 0.25 + 0.5 * i as f64;
        for k in 0..10 {
            let ratio = 0.1 + (6.0 - 0.1) * k as f64 / 9.0;
            let x = ratio * sigma;
            let bound = gaussian_tail(x, sigma).unwrap();
            let exact = gaussian_tail_quadrature(x, sigma);
            worst = worst.min(bound / exact);
            if bound < exact {
                failures += 1;
            }
        }
    }
    let pass = failures == 0;
    report(9, "gaussian tail dominance", pass, &format!("100 grid points, {failures} below quadrature, min ratio {worst:.4}"));
    assert!(pass);
}

fn ra_instances() -> Vec<(String, TannerCode)> {
    let mut out = Vec::new();
    for k in 1..=4usize {
        for mask in 0..(1u32 << k) {
            let reps: Vec<usize> = (0..k).map(|i| if mask >> i & 1 == 1 { 4 } else { 2 }).collect();
            for il in [Interleaver::Identity, Interleaver::Random(k as u64 * 100 + mask as u64)] {
                let name = format!("ra{reps:?}/{il:?}");
                out.push((name, build_ra_graph(&reps, il).unwrap()));
            }
        }
    }
    out
}

#[test]
fn criterion_10_ra_puncturing() {
    let mut paths = 0usize;
    let mut over_half = 0usize;
    let mut example = None;
    for (name, tc) in ra_instances() {
        let g = tc.graph();
        for h in 1..=8 {
            visit_paths(g, h, false, |p| {
                paths += 1;
                let nodes: Vec<_> = p.iter().map(|&f| g.node(f)).collect();
                let (punct, total) = punctured_occurrences(&tc, &nodes);
                if 2 * punct > total {
                    over_half += 1;
                    if example.is_none() {
                        let text: Vec<String> = nodes.iter().map(ToString::to_string).collect();
                        example = Some(format!("{name}: {} ({punct} of {total})", text.join(" ")));
                    }
                }
            });
        }
    }
    let tc = build_ra_graph(&[2, 4, 2], Interleaver::Random(9)).unwrap();
    let run = run_trials(&tc, Channel::Bsc { p: 0.02 }, 4, 20_000, 0xCA, TrialOptions::default()).unwrap();
    let chain = validate_chain(&run.records).violations.len();
    let pass = over_half == 0 && chain == 0;
    report(
        10,
        "RA puncturing",
        pass,
        &format!(
            "{paths} paths, {over_half} with more than half of the variable occurrences punctured{}; {chain} chain violations",
            example.map(|e| format!(", e.g. {e}")).unwrap_or_default()
        ),
    );
    assert!(pass);
}
