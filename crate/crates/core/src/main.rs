use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use pathlo::channels::LlrVector;
use pathlo::codes::{build_ra_graph, parse_word, word_to_string, Interleaver, TannerCode};
use pathlo::config::{emit_results, load_code, locals_to_text, parse_config};
use pathlo::decoders::{decode_ml, LpDecoder};
use pathlo::experiments::{
    bound_awgn, bound_bsc, default_delta, run_trials, union_bound_exact, validate_chain,
    TrialOptions,
};
use pathlo::graph::{construct_regular, lift_vector, m_cover, TannerGraph};
use pathlo::local_opt::{
    certify_exact, certify_local_optimality, decompose_to_cycles, decompose_to_deviations,
    CertifyOptions,
};
use pathlo::numeric::{rational_from_f64, Rational};

#[derive(Parser)]
#[command(name = "pathlo", version = version_string(), about = "Local-optimality certificates, exact ML/LP decoding and error-rate experiments for even Tanner codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn version_string() -> &'static str {
    concat!(env!("CARGO_PKG_VERSION"), " (record format 1)")
}

#[derive(Subcommand)]
enum Command {
    /// Generate a Tanner graph.
    Gen(GenArgs),
    /// Certify local optimality of a codeword.
    Certify(CertifyArgs),
    /// Decode LLRs with the ML or LP decoder.
    Decode(DecodeArgs),
    /// Monte Carlo trials comparing the certificate with LP decoding.
    Simulate(SimulateArgs),
    /// Closed-form failure bounds.
    Bound(BoundArgs),
    /// Exact union bound over simple paths on the BSC.
    Unionbound(UnionArgs),
    /// Compare verdicts on a graph and on a random M-cover.
    Lift(LiftArgs),
    /// Decompose a codeword into cycles and path deviations.
    Decompose(DecomposeArgs),
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
    /// Graph output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Local-code output file for RA codes.
    #[arg(long, global = true)]
    locals_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenKind {
    /// Cycle of m checks and m variables.
    Ring {
        #[arg(long)]
        m: usize,
    },
    /// Cycle code of the complete graph on four vertices.
    K4,
    /// Random (d_l, d_r)-regular graph by progressive edge growth.
    Peg {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dl: usize,
        #[arg(long)]
        dr: usize,
        #[arg(long, default_value_t = 4)]
        girth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        attempts: usize,
    },
    /// Repeat-accumulate code with punctured systematic bits.
    Ra {
        /// Comma-separated even repetition factors.
        #[arg(long, value_delimiter = ',')]
        reps: Vec<usize>,
        /// Interleaver seed; identity when absent.
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args)]
struct CodeArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    locals: Option<PathBuf>,
}

impl CodeArgs {
    fn load(&self) -> Result<TannerCode> {
        load_code(&self.graph, self.locals.as_deref())
            .with_context(|| format!("loading {}", self.graph.display()))
    }
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Codeword as a 0/1 string.
    #[arg(long)]
    x: String,
    /// Comma-separated LLRs; fractions like `-1/2` are accepted.
    #[arg(long, allow_hyphen_values = true)]
    llr: String,
    #[arg(long)]
    h: usize,
    /// Exact rational arithmetic instead of floating point.
    #[arg(long)]
    exact: bool,
    #[arg(long, default_value_t = 0.0)]
    margin: f64,
}

#[derive(Args)]
struct DecodeArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, allow_hyphen_values = true)]
    llr: String,
    #[arg(long, default_value = "lp")]
    method: String,
}

#[derive(Args)]
struct SimulateArgs {
    /// `key = value` configuration file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    locals: Option<String>,
    #[arg(long)]
    channel: Option<String>,
    #[arg(long)]
    h: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    ml: bool,
    #[arg(long)]
    tx: Option<String>,
    /// Per-trial CSV.
    #[arg(long)]
    out: Option<String>,
    /// JSON summary.
    #[arg(long)]
    summary: Option<String>,
}

#[derive(Args)]
struct BoundArgs {
    #[command(subcommand)]
    channel: BoundKind,
}

#[derive(Subcommand)]
enum BoundKind {
    Bsc {
        #[arg(long = "N")]
        n: f64,
        #[arg(long = "D")]
        d: f64,
        #[arg(long)]
        dlmin: f64,
        #[arg(long)]
        dlmax: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        punctured: bool,
    },
    Awgn {
        #[arg(long = "N")]
        n: f64,
        #[arg(long = "D")]
        d: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        punctured: bool,
    },
}

#[derive(Args)]
struct UnionArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    h: usize,
    #[arg(long)]
    p: f64,
    /// Defaults to d_L^min / (d_L^min + d_L^max).
    #[arg(long)]
    delta: Option<f64>,
}

#[derive(Args)]
struct LiftArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long)]
    x: String,
    #[arg(long, allow_hyphen_values = true)]
    llr: String,
    #[arg(long)]
    h: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct DecomposeArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long)]
    x: String,
    /// Segment length; cycles only when absent.
    #[arg(long)]
    h: Option<usize>,
}

fn parse_rational(tok: &str) -> Result<Rational> {
    let tok = tok.trim();
    if let Some((n, d)) = tok.split_once('/') {
        let n: i128 = n.trim().parse().with_context(|| format!("bad numerator in `{tok}`"))?;
        let d: i128 = d.trim().parse().with_context(|| format!("bad denominator in `{tok}`"))?;
        if d == 0 {
            bail!("zero denominator in `{tok}`");
        }
        return Ok(Rational::new(n, d));
    }
    let v: f64 = tok.parse().with_context(|| format!("bad LLR `{tok}`"))?;
    rational_from_f64(v).with_context(|| format!("LLR `{tok}` has no exact i128 fraction"))
}

fn parse_llr(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(parse_rational).collect()
}

fn to_f64(v: &[Rational]) -> Vec<f64> {
    v.iter().map(pathlo::numeric::rational_to_f64).collect()
}

fn write_or_print(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            emit(text)?;
            Ok(())
        }
    }
}

fn gen(args: GenArgs) -> Result<()> {
    let (graph, locals) = match args.kind {
        GenKind::Ring { m } => (TannerGraph::ring(m)?, None),
        GenKind::K4 => (TannerGraph::k4_cycle_code(), None),
        GenKind::Peg { n, dl, dr, girth, seed, attempts } => {
            (construct_regular(n, dl, dr, girth, seed, attempts)?, None)
        }
        GenKind::Ra { reps, seed } => {
            let il = seed.map_or(Interleaver::Identity, Interleaver::Random);
            let tc = build_ra_graph(&reps, il)?;
            (tc.graph().clone(), Some(locals_to_text(&tc)))
        }
    };
    write_or_print(args.out.as_ref(), &graph.to_text())?;
    if let Some(text) = locals {
        match &args.locals_out {
            Some(p) => fs::write(p, text)?,
            None => eprintln!("local codes (use --locals-out to save):\n{text}"),
        }
    }
    Ok(())
}

fn certify(args: CertifyArgs) -> Result<()> {
    let tc = args.code.load()?;
    let x = parse_word(&args.x)?;
    let llr = parse_llr(&args.llr)?;
    if !tc.is_codeword(&x)? {
        eprintln!("warning: {} is not a codeword", args.x);
    }
    let out = if args.exact {
        let c = certify_exact(tc.graph(), &x, &llr, args.h)?;
        json!({
            "verdict": c.verdict.name(),
            "min_cost": c.min_cost.map(|r| r.to_string()),
            "witness": c.witness.map(|w| w.path.to_string()),
        })
    } else {
        let opts = CertifyOptions {
            margin: args.margin,
            ..CertifyOptions::default()
        };
        let c = certify_local_optimality(tc.graph(), &x, &LlrVector::raw(to_f64(&llr)), args.h, opts)?;
        json!({
            "verdict": c.verdict.name(),
            "min_cost": c.min_cost,
            "witness": c.witness.map(|w| w.path.to_string()),
        })
    };
    emit_json(&out)?;
    Ok(())
}

fn decode(args: DecodeArgs) -> Result<()> {
    let tc = args.code.load()?;
    let llr = parse_llr(&args.llr)?;
    match args.method.as_str() {
        "ml" => {
            let r = decode_ml(&tc, &LlrVector::raw(to_f64(&llr)))?;
            let out = json!({
                "minimizers": r.minimizers.iter().map(|w| word_to_string(w)).collect::<Vec<_>>(),
                "objective": r.cost,
                "unique": r.unique,
            });
            emit_json(&out)?;
        }
        "lp" => {
            let big: Vec<_> = llr.iter().map(pathlo::numeric::to_big).collect();
            let s = LpDecoder::new(&tc)?.decode(&big)?;
            emit_json(&s.to_json())?;
        }
        other => bail!("unknown method `{other}` (expected ml or lp)"),
    }
    Ok(())
}

fn simulate(args: SimulateArgs) -> Result<bool> {
    let mut flags = Vec::new();
    let mut put = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            flags.push((k.to_string(), v));
        }
    };
    put("graph", args.graph);
    put("locals", args.locals);
    put("channel", args.channel);
    put("h", args.h);
    put("trials", args.trials);
    put("seed", args.seed);
    put("tx", args.tx);
    put("out", args.out);
    put("summary", args.summary);
    if args.ml {
        put("ml", Some("true".into()));
    }
    let cfg = parse_config(args.config.as_deref(), &flags)?;
    let tc = load_code(&cfg.graph, cfg.locals.as_deref())?;
    if tc.n() > cfg.max_n {
        bail!("code length {} exceeds max_n = {}", tc.n(), cfg.max_n);
    }
    let opts = TrialOptions {
        ml: cfg.ml,
        tx: cfg.tx,
        ..TrialOptions::default()
    };
    let run = run_trials(&tc, cfg.channel, cfg.h, cfg.trials, cfg.seed, opts)?;
    emit_results(&run.records, &run.summary, Some(&cfg), cfg.out.as_deref(), cfg.summary.as_deref())?;
    let chain = validate_chain(&run.records);
    emit_json(&run.summary)?;
    for v in &chain.violations {
        eprintln!("chain violation: trial {} seed {}", v.trial, v.seed);
    }
    Ok(chain.is_clean())
}

fn bound(args: BoundArgs) -> Result<()> {
    let r = match args.channel {
        BoundKind::Bsc { n, d, dlmin, dlmax, eps, punctured } => bound_bsc(n, d, dlmin, dlmax, eps, punctured)?,
        BoundKind::Awgn { n, d, eps, sigma, punctured } => bound_awgn(n, d, eps, sigma, punctured)?,
    };
    emit_json(&r)?;
    Ok(())
}

fn unionbound(args: UnionArgs) -> Result<()> {
    let g = TannerGraph::from_text(&fs::read_to_string(&args.graph)?)?;
    let delta = args.delta.unwrap_or_else(|| default_delta(&g));
    let r = union_bound_exact(&g, args.h, args.p, delta)?;
    for d in &r.discrepancies {
        eprintln!("counting discrepancy: {d}");
    }
    emit_json(&r)?;
    Ok(())
}

fn lift(args: LiftArgs) -> Result<()> {
    let tc = args.code.load()?;
    let g = tc.graph();
    let x = parse_word(&args.x)?;
    let llr = parse_llr(&args.llr)?;
    let cover = m_cover(g, args.m, args.seed)?;
    let base = certify_exact(g, &x, &llr, args.h)?;
    let lx = lift_vector(&x, g.n_vars(), args.m)?;
    let ll = lift_vector(&llr, g.n_vars(), args.m)?;
    let up = certify_exact(cover.lifted(), &lx, &ll, args.h)?;
    let out = json!({
        "base": {"verdict": base.verdict.name(), "min_cost": base.min_cost.map(|r| r.to_string())},
        "cover": {"verdict": up.verdict.name(), "min_cost": up.min_cost.map(|r| r.to_string()),
                  "witness": up.witness.map(|w| w.path.to_string())},
        "agree": base.verdict == up.verdict,
    });
    emit_json(&out)?;
    Ok(())
}

fn decompose(args: DecomposeArgs) -> Result<()> {
    let tc = args.code.load()?;
    let x = parse_word(&args.x)?;
    let d = match args.h {
        Some(h) => decompose_to_deviations(tc.graph(), &x, h)?,
        None => decompose_to_cycles(tc.graph(), &x)?,
    };
    let out = json!({
        "alpha": d.alpha.to_string(),
        "cycles": d.cycles.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "deltas": d.deltas.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "terms": d.terms.iter().map(|t| json!({"path": t.path.to_string(), "weight": t.weight.to_string()})).collect::<Vec<_>>(),
        "exact": d.reproduces(&x),
    });
    emit_json(&out)?;
    Ok(())
}

/// Writes to stdout; a closed pipe downstream is not an error.
fn emit(text: &str) -> Result<()> {
    use std::io::Write;
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn emit_json<T: serde::Serialize + ?Sized>(value: &T) -> Result<()> {
    emit(&(serde_json::to_string_pretty(value)? + "\n"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a).map(|_| true),
        Command::Certify(a) => certify(a).map(|_| true),
        Command::Decode(a) => decode(a).map(|_| true),
        Command::Simulate(a) => simulate(a),
        Command::Bound(a) => bound(a).map(|_| true),
        Command::Unionbound(a) => unionbound(a).map(|_| true),
        Command::Lift(a) => lift(a).map(|_| true),
        Command::Decompose(a) => decompose(a).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
