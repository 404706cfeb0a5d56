//! Monte Carlo harness comparing the local-optimality certificate with LP
//! (and optionally ML) decoding, trial by trial.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channels::{apply_puncture, llr, normalize_bsc_pm1, sample_channel, Channel, ChannelTag};
use crate::codes::{TannerCode, Word};
use crate::decoders::{LpDecoder, MlDecoder};
use crate::error::{Error, Result};
use crate::local_opt::{certify_local_optimality, CertifyOptions, Verdict};
use crate::seed::{derive_seed, mix64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TxMode {
    /// Always transmit the zero codeword.
    AllZero,
    /// Transmit a uniformly drawn codeword (sanity mode).
    RandomCodeword,
}

impl TxMode {
    pub fn name(self) -> &'static str {
        match self {
            TxMode::AllZero => "all-zero",
            TxMode::RandomCodeword => "random-codeword",
        }
    }
}

impl std::str::FromStr for TxMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all-zero" | "zero" => Ok(TxMode::AllZero),
            "random-codeword" | "random" => Ok(TxMode::RandomCodeword),
            _ => Err(Error::parse("tx", format!("unknown transmission mode `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialOptions {
    pub ml: bool,
    pub tx: TxMode,
    pub certify: CertifyOptions,
}

impl Default for TrialOptions {
    fn default() -> Self {
        TrialOptions {
            ml: false,
            tx: TxMode::AllZero,
            certify: CertifyOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub channel: String,
    pub h: usize,
    pub verdict: Verdict,
    /// The transmitted codeword is not `h`-locally optimal.
    pub lo_fail: bool,
    /// LP decoding returned another point, a fractional point, or a tie.
    pub lp_fail: bool,
    pub ml_fail: Option<bool>,
    /// Minimum-cost path when the certificate failed.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialSummary {
    pub trials: usize,
    pub channel: String,
    pub h: usize,
    pub master_seed: u64,
    pub tx: String,
    pub lo_failures: usize,
    pub lp_failures: usize,
    pub ml_failures: Option<usize>,
    pub rate_lo: f64,
    pub rate_lp: f64,
    pub rate_ml: Option<f64>,
    pub wilson_lo: [f64; 2],
    pub wilson_lp: [f64; 2],
    pub wilson_ml: Option<[f64; 2]>,
    pub chain_violations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRun {
    pub records: Vec<TrialRecord>,
    pub summary: TrialSummary,
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(successes: usize, n: usize) -> [f64; 2] {
    if n == 0 {
        return [0.0, 1.0];
    }
    let z = 1.96f64;
    let n_f = n as f64;
    let phat = successes as f64 / n_f;
    let denom = 1.0 + z * z / n_f;
    let center = (phat + z * z / (2.0 * n_f)) / denom;
    let half = z * (phat * (1.0 - phat) / n_f + z * z / (4.0 * n_f * n_f)).sqrt() / denom;
    [(center - half).max(0.0), (center + half).min(1.0)]
}

/// Half-width of the Wilson interval divided by `z = 1.96`.
pub fn wilson_standard_error(successes: usize, n: usize) -> f64 {
    let [lo, hi] = wilson_interval(successes, n);
    (hi - lo) / 2.0 / 1.96
}

fn rate(k: usize, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        k as f64 / n as f64
    }
}

/// LLR bits used as a cache key for discrete channels.
fn key(values: &[f64]) -> Vec<u64> {
    values.iter().map(|v| v.to_bits()).collect()
}

/// Runs `trials` independent trials; trial `i` uses seed
/// `derive_seed(master_seed, i)` so any trial can be replayed alone.
pub fn run_trials(
    tc: &TannerCode,
    channel: Channel,
    h: usize,
    trials: usize,
    master_seed: u64,
    opts: TrialOptions,
) -> Result<TrialRun> {
    channel.validate()?;
    if h == 0 {
        return Err(Error::Validation("h must be at least 1".into()));
    }
    let report = tc.validate_even();
    if !report.is_even() {
        return Err(Error::Validation(format!(
            "code is not even: odd-degree variables {:?}, odd-weight checks {:?}",
            report.odd_degree_vars, report.odd_weight_checks
        )));
    }
    let g = tc.graph();
    let n = tc.n();
    let lp = LpDecoder::new(tc)?;
    let ml = if opts.ml || opts.tx == TxMode::RandomCodeword {
        Some(MlDecoder::new(tc)?)
    } else {
        None
    };
    let mut lp_cache: HashMap<Vec<u64>, (Option<Word>, bool)> = HashMap::new();
    let mut records = Vec::with_capacity(trials);
    let zero = vec![0u8; n];
    for trial in 0..trials {
        let seed = derive_seed(master_seed, trial as u64);
        let tx: Word = match opts.tx {
            TxMode::AllZero => zero.clone(),
            TxMode::RandomCodeword => {
                let words = ml.as_ref().expect("decoder built").codewords();
                let mut rng = ChaCha8Rng::seed_from_u64(mix64(seed));
                words[rng.random_range(0..words.len())].clone()
            }
        };
        let y = sample_channel(&tx, channel, seed)?;
        let mut l = llr(&y, channel)?;
        if l.tag() == ChannelTag::Bsc {
            l = normalize_bsc_pm1(&l)?;
        }
        let l = apply_puncture(&l, tc.puncture())?;
        let cert = certify_local_optimality(g, &tx, &l, h, opts.certify)?;
        let (word, unique) = if channel.is_discrete() {
            let k = key(l.values());
            match lp_cache.get(&k) {
                Some(hit) => hit.clone(),
                None => {
                    let s = lp.decode_f64(l.values())?;
                    let v = (s.word(), s.unique);
                    lp_cache.insert(k, v.clone());
                    v
                }
            }
        } else {
            let s = lp.decode_f64(l.values())?;
            (s.word(), s.unique)
        };
        let lp_fail = !(unique && word.as_deref() == Some(&tx[..]));
        let ml_fail = match (&ml, opts.ml) {
            (Some(dec), true) => {
                let r = dec.decode(l.values())?;
                Some(!(r.unique && r.minimizers[0] == tx))
            }
            _ => None,
        };
        records.push(TrialRecord {
            trial,
            seed,
            channel: channel.to_string(),
            h,
            verdict: cert.verdict,
            lo_fail: !cert.verdict.is_lo(),
            lp_fail,
            ml_fail,
            witness: cert.witness.map(|w| w.path.to_string()),
        });
    }
    let summary = summarize(&records, channel, h, master_seed, opts.tx);
    Ok(TrialRun { records, summary })
}

pub fn summarize(
    records: &[TrialRecord],
    channel: Channel,
    h: usize,
    master_seed: u64,
    tx: TxMode,
) -> TrialSummary {
    let n = records.len();
    let lo = records.iter().filter(|r| r.lo_fail).count();
    let lp = records.iter().filter(|r| r.lp_fail).count();
    let ml = records
        .iter()
        .map(|r| r.ml_fail)
        .collect::<Option<Vec<bool>>>()
        .filter(|v| !v.is_empty())
        .map(|v| v.iter().filter(|&&b| b).count());
    TrialSummary {
        trials: n,
        channel: channel.to_string(),
        h,
        master_seed,
        tx: tx.name().to_string(),
        lo_failures: lo,
        lp_failures: lp,
        ml_failures: ml,
        rate_lo: rate(lo, n),
        rate_lp: rate(lp, n),
        rate_ml: ml.map(|k| rate(k, n)),
        wilson_lo: wilson_interval(lo, n),
        wilson_lp: wilson_interval(lp, n),
        wilson_ml: ml.map(|k| wilson_interval(k, n)),
        chain_violations: validate_chain(records).violations.len(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainViolation {
    pub trial: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub checked: usize,
    pub violations: Vec<ChainViolation>,
}

impl ChainReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Flags every record where the certificate held but LP decoding failed.
pub fn validate_chain(records: &[TrialRecord]) -> ChainReport {
    ChainReport {
        checked: records.len(),
        violations: records
            .iter()
            .filter(|r| !r.lo_fail && r.lp_fail)
            .map(|r| ChainViolation {
                trial: r.trial,
                seed: r.seed,
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TannerGraph;

    fn ring4() -> TannerCode {
        TannerCode::with_spc(TannerGraph::ring(4).unwrap()).unwrap()
    }

    #[test]
    fn low_noise_chain_holds() {
        let run = run_trials(&ring4(), Channel::Bsc { p: 0.001 }, 3, 2000, 7, TrialOptions::default()).unwrap();
        assert_eq!(run.summary.chain_violations, 0);
        assert!(run.summary.rate_lp <= run.summary.rate_lo);
        assert!(run.summary.rate_lo < 0.05);
    }

    #[test]
    fn useless_channel_always_fails() {
        let run = run_trials(&ring4(), Channel::Bsc { p: 0.5 }, 3, 50, 1, TrialOptions::default()).unwrap();
        assert_eq!(run.summary.lo_failures, 50);
    }

    #[test]
    fn zero_trials() {
        let run = run_trials(&ring4(), Channel::Bsc { p: 0.1 }, 3, 0, 1, TrialOptions::default()).unwrap();
        assert!(run.records.is_empty());
        assert_eq!(run.summary.trials, 0);
        assert_eq!(run.summary.ml_failures, None);
    }

    #[test]
    fn reproducible() {
        let opts = TrialOptions {
            ml: true,
            ..TrialOptions::default()
        };
        let a = run_trials(&ring4(), Channel::Awgn { sigma: 0.8 }, 3, 100, 42, opts).unwrap();
        let b = run_trials(&ring4(), Channel::Awgn { sigma: 0.8 }, 3, 100, 42, opts).unwrap();
        assert_eq!(a.records, b.records);
    }

    #[test]
    fn corrupted_record_is_reported() {
        let mut run = run_trials(&ring4(), Channel::Bsc { p: 0.01 }, 3, 10, 3, TrialOptions::default()).unwrap();
        assert!(validate_chain(&run.records).is_clean());
        run.records[4].lo_fail = false;
        run.records[4].lp_fail = true;
        let rep = validate_chain(&run.records);
        assert_eq!(rep.violations, vec![ChainViolation { trial: 4, seed: run.records[4].seed }]);
        assert!(validate_chain(&[]).is_clean());
    }

    #[test]
    fn wilson_contains_estimate() {
        let [lo, hi] = wilson_interval(5, 100);
        assert!(lo < 0.05 && 0.05 < hi);
        assert_eq!(wilson_interval(0, 0), [0.0, 1.0]);
        assert!(wilson_standard_error(0, 1000) > 0.0);
    }
}
