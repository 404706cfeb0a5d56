//! Run configuration, code file formats and result files.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use crate::channels::Channel;
use crate::codes::{parse_word, LocalCode, TannerCode};
use crate::error::{Error, Result};
use crate::experiments::{TrialRecord, TrialSummary, TxMode};
use crate::graph::{content_lines, TannerGraph};

/// Version of the CSV and JSON record layout.
pub const FORMAT_VERSION: u32 = 1;

pub const CSV_HEADER: [&str; 6] = ["trial", "seed", "lo_fail", "lp_fail", "ml_fail", "witness"];

const KEYS: [&str; 12] = [
    "graph", "locals", "channel", "h", "trials", "seed", "ml", "tx", "out", "summary", "max_n",
    "max_paths",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub graph: PathBuf,
    pub locals: Option<PathBuf>,
    pub channel: Channel,
    pub h: usize,
    pub trials: usize,
    pub seed: u64,
    pub ml: bool,
    pub tx: TxMode,
    pub out: Option<PathBuf>,
    pub summary: Option<PathBuf>,
    /// Largest code length accepted for a run.
    pub max_n: usize,
    /// Largest path count accepted by path enumerations.
    pub max_paths: usize,
}

impl RunConfig {
    /// `key = value` text that parses back to the same configuration.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| out.push_str(&format!("{k} = {v}\n"));
        put("graph", self.graph.display().to_string());
        if let Some(l) = &self.locals {
            put("locals", l.display().to_string());
        }
        put("channel", self.channel.to_string());
        put("h", self.h.to_string());
        put("trials", self.trials.to_string());
        put("seed", self.seed.to_string());
        put("ml", self.ml.to_string());
        put("tx", self.tx.name().to_string());
        if let Some(o) = &self.out {
            put("out", o.display().to_string());
        }
        if let Some(s) = &self.summary {
            put("summary", s.display().to_string());
        }
        put("max_n", self.max_n.to_string());
        put("max_paths", self.max_paths.to_string());
        out
    }
}

/// Reads `key = value` lines; `#` lines and blank lines are skipped.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, line) in content_lines(text) {
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(format!("line {lineno}"), "expected `key = value`"))?;
        let k = k.trim();
        if !KEYS.contains(&k) {
            return Err(Error::parse(format!("line {lineno}"), format!("unknown key `{k}`")));
        }
        map.insert(k.to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::parse(format!("key `{key}`"), format!("cannot parse `{value}`")))
}

/// Builds a configuration from an optional file, then `flags` on top.
pub fn parse_config(file: Option<&Path>, flags: &[(String, String)]) -> Result<RunConfig> {
    let mut map = match file {
        Some(p) => parse_config_text(&fs::read_to_string(p)?)?,
        None => BTreeMap::new(),
    };
    for (k, v) in flags {
        if !KEYS.contains(&k.as_str()) {
            return Err(Error::parse(format!("flag --{k}"), format!("unknown key `{k}`")));
        }
        map.insert(k.clone(), v.clone());
    }
    let required = |k: &str| {
        map.get(k)
            .cloned()
            .ok_or_else(|| Error::Validation(format!("missing required key `{k}`")))
    };
    let h: usize = parse_value("h", &required("h")?)?;
    if h == 0 {
        return Err(Error::Validation("h must be at least 1".into()));
    }
    let channel: Channel = required("channel")?.parse()?;
    let graph = PathBuf::from(required("graph")?);
    let locals = map.get("locals").map(PathBuf::from);
    for p in std::iter::once(&graph).chain(locals.as_ref()) {
        if !p.is_file() {
            return Err(Error::Validation(format!("file {} does not exist", p.display())));
        }
    }
    let get = |k: &str| map.get(k).map(String::as_str);
    Ok(RunConfig {
        graph,
        locals,
        channel,
        h,
        trials: parse_value("trials", &required("trials")?)?,
        seed: get("seed").map_or(Ok(0), |v| parse_value("seed", v))?,
        ml: get("ml").map_or(Ok(false), |v| parse_value("ml", v))?,
        tx: get("tx").map_or(Ok(TxMode::AllZero), str::parse)?,
        out: get("out").map(PathBuf::from),
        summary: get("summary").map(PathBuf::from),
        max_n: get("max_n").map_or(Ok(64), |v| parse_value("max_n", v))?,
        max_paths: get("max_paths").map_or(Ok(5_000_000), |v| parse_value("max_paths", v))?,
    })
}

/// Local-code file: one line per check, `spc`, `full`, `zero` or
/// `gen <row> <row> ...`; an optional `puncture i j ...` line anywhere.
/// A single `all <kind>` line applies one kind to every check.
pub fn parse_locals(text: &str, g: &TannerGraph) -> Result<(Vec<LocalCode>, Vec<usize>)> {
    let mut locals = Vec::new();
    let mut puncture = Vec::new();
    let mut all: Option<String> = None;
    for (lineno, line) in content_lines(text) {
        let ctx = || format!("line {lineno}");
        let mut toks = line.split_whitespace();
        let head = toks.next().unwrap_or_default();
        match head {
            "puncture" => {
                for t in toks {
                    puncture.push(parse_value::<usize>("puncture", t).map_err(|_| {
                        Error::parse(ctx(), format!("bad puncture index `{t}`"))
                    })?);
                }
            }
            "all" => {
                let kind = toks.collect::<Vec<_>>().join(" ");
                all = Some(kind);
            }
            _ => locals.push((lineno, line.to_string())),
        }
    }
    let build = |j: usize, spec: &str, lineno: usize| -> Result<LocalCode> {
        let len = g.check_degree(j);
        let mut toks = spec.split_whitespace();
        match toks.next() {
            Some("spc") => LocalCode::spc(len),
            Some("full") => LocalCode::full(len),
            Some("zero") => LocalCode::zero(len),
            Some("gen") => {
                let rows = toks.map(parse_word).collect::<Result<Vec<_>>>()?;
                LocalCode::from_generators(len, &rows)
            }
            other => Err(Error::parse(
                format!("line {lineno}"),
                format!("unknown local code `{}`", other.unwrap_or_default()),
            )),
        }
    };
    let codes = match all {
        Some(kind) => {
            if !locals.is_empty() {
                return Err(Error::parse("locals", "`all` cannot be mixed with per-check lines"));
            }
            (0..g.n_checks()).map(|j| build(j, &kind, 0)).collect::<Result<Vec<_>>>()?
        }
        None => {
            if locals.len() != g.n_checks() {
                return Err(Error::LengthMismatch {
                    expected: g.n_checks(),
                    found: locals.len(),
                });
            }
            locals
                .iter()
                .enumerate()
                .map(|(j, (lineno, spec))| build(j, spec, *lineno))
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok((codes, puncture))
}

/// Text form accepted by [`parse_locals`].
pub fn locals_to_text(tc: &TannerCode) -> String {
    let mut out = String::new();
    for c in tc.locals() {
        let rows: Vec<String> = c.generators().iter().map(|w| crate::codes::word_to_string(w)).collect();
        out.push_str(&format!("gen {}\n", rows.join(" ")).replace("gen \n", "zero\n"));
    }
    if !tc.puncture().is_empty() {
        let idx: Vec<String> = tc.puncture().iter().map(usize::to_string).collect();
        out.push_str(&format!("puncture {}\n", idx.join(" ")));
    }
    out
}

/// Loads a code from a graph file and an optional local-code file; without
/// one every check is a single parity check.
pub fn load_code(graph: &Path, locals: Option<&Path>) -> Result<TannerCode> {
    let g = TannerGraph::from_text(&fs::read_to_string(graph)?)?;
    match locals {
        None => TannerCode::with_spc(g),
        Some(p) => {
            let (codes, puncture) = parse_locals(&fs::read_to_string(p)?, &g)?;
            TannerCode::new(g, codes, puncture)
        }
    }
}

/// Writes the per-trial CSV and the JSON summary; existing files are
/// replaced.
pub fn emit_results(
    records: &[TrialRecord],
    summary: &TrialSummary,
    config: Option<&RunConfig>,
    csv_path: Option<&Path>,
    json_path: Option<&Path>,
) -> Result<()> {
    if let Some(p) = csv_path {
        let mut w = csv::Writer::from_path(p)?;
        w.write_record(CSV_HEADER)?;
        for r in records {
            w.write_record([
                r.trial.to_string(),
                r.seed.to_string(),
                r.lo_fail.to_string(),
                r.lp_fail.to_string(),
                r.ml_fail.map(|b| b.to_string()).unwrap_or_default(),
                r.witness.clone().unwrap_or_default(),
            ])?;
        }
        w.flush()?;
    }
    if let Some(p) = json_path {
        let doc = json!({
            "artifact": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "format_version": FORMAT_VERSION,
            "summary": summary,
            "config": config,
        });
        fs::write(p, serde_json::to_string_pretty(&doc)? + "\n")?;
    }
    Ok(())
}
