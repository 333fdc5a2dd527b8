//! Command-line front end.
//!
//! Output is assembled in memory and written once, to stdout or `--out`. Errors
//! print a single JSON line on stderr. Exit codes: 0 success, 2 usage, 3
//! feasibility, 4 internal failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::asymptotics::{regime_report, ReportOptions, DEFAULT_ENUMERATION_BUDGET, DEFAULT_EPS};
use crate::counting::{
    hom_cycles, hom_trace_oracle, mono_cost_estimate, mono_cycles_with, CycleCounts, MonoOptions,
    MonoStrategy, DEFAULT_HORIZON,
};
use crate::error::{Error, Result};
use crate::graph::{build_graph, ExplicitGraph, GraphParams, DEFAULT_MAX_VERTICES};
use crate::spectrum::{
    full_spectrum, validate_spectrum_capped, DEFAULT_NUMERIC_CAP, DEFAULT_TOLERANCE,
};
use crate::walks::{
    conditional_self_intersection, default_mixing_horizon, empirical_mixing_time,
    mixing_time_bound_for, return_frequency, return_probability, transition_row,
    variation_distance, within, MixingOutcome, WalkConfig, DEFAULT_CI_Z, PRNG_ID,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FEASIBILITY: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "grs",
    version,
    about = "Exact spectra, cycle counts and random walks on generalized Johnson graphs G(n,r,s)"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads; 0 uses all available cores. Output does not depend on it.
    #[arg(long, default_value_t = 0, global = true)]
    pub threads: usize,

    /// Largest vertex count an explicit graph may have.
    #[arg(long, env = "GRS_MAX_VERTICES", default_value_t = DEFAULT_MAX_VERTICES, global = true)]
    pub max_vertices: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct GraphArgs {
    #[arg(short = 'n')]
    pub n: u32,
    #[arg(short = 'r')]
    pub r: u32,
    #[arg(short = 's')]
    pub s: u32,
}

#[derive(Args, Debug, Clone)]
pub struct LengthArgs {
    /// Cycle or walk length.
    #[arg(short = 't', conflicts_with = "t_range")]
    pub t: Option<u32>,
    /// Inclusive range of lengths, `a:b`.
    #[arg(long = "t-range", value_name = "A:B")]
    pub t_range: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Auto,
    Backtrack,
    MeetInMiddle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WalkMode {
    /// Monte Carlo return frequency next to the exact return probability.
    Return,
    /// Rejection-sampling estimate of self-intersection given return.
    SelfIntersection,
    /// Mixing-time bound and the exact empirical mixing time.
    Mixing,
    /// Exact distribution of the walk after `t` steps.
    Row,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form eigenvalues and multiplicities.
    Spectrum {
        #[command(flatten)]
        graph: GraphArgs,
        /// Also compare against a numeric eigensolve of the explicit graph.
        #[arg(long)]
        validate: bool,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Closed walks hom(C_t).
    Hom {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        length: LengthArgs,
    },
    /// Injective closed walks mono(C_t) and t-cycle copies.
    Mono {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        length: LengthArgs,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: u32,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
    },
    /// Gap ratio (hom - mono)/hom and its union bound.
    Gap {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        length: LengthArgs,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: u32,
    },
    /// Random-walk statistics, simulated or exact.
    Walk {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value_t = WalkMode::Return)]
        mode: WalkMode,
        /// Walk length (ignored by `mixing`).
        #[arg(short = 't', default_value_t = 2)]
        t: u32,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Distance threshold for `mixing`.
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        /// Starting vertex for exact modes.
        #[arg(long, default_value_t = 0)]
        vertex: usize,
        /// Truncation horizon for `mixing`; default ten times the bound.
        #[arg(long)]
        horizon: Option<u32>,
        /// Normal quantile of the confidence interval.
        #[arg(long, default_value_t = DEFAULT_CI_Z)]
        z: f64,
    },
    /// Exact counts against asymptotic predictions over a range of t.
    Regimes {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        length: LengthArgs,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: u32,
        /// Skip enumeration when the estimated work exceeds this.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: f64,
    },
    /// Cross-check closed forms against brute-force oracles on all small graphs.
    Verify {
        /// Largest vertex count included.
        #[arg(long, default_value_t = 120)]
        scale: u64,
        /// Longest walk length checked.
        #[arg(long, default_value_t = 8)]
        t_max: u32,
    },
    /// Write the explicit graph.
    ExportGraph {
        #[command(flatten)]
        graph: GraphArgs,
    },
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{}", e.render());
                return EXIT_OK;
            }
            let text = e.render().to_string();
            let body = text.split("Usage:").next().unwrap_or_default();
            let first = body
                .split_whitespace()
                .collect::<Vec<_>>()
                .join(" ")
                .trim_start_matches("error: ")
                .to_string();
            emit_error(stderr, "usage", EXIT_USAGE, &first, None);
            return EXIT_USAGE;
        }
    };
    match execute(&config) {
        Ok(output) => match write_output(&config, &output, stdout) {
            Ok(()) => EXIT_OK,
            Err(e) => report(stderr, &e),
        },
        Err(e) => report(stderr, &e),
    }
}

fn write_output(config: &RunConfig, output: &str, stdout: &mut dyn Write) -> Result<()> {
    match &config.out {
        Some(path) => std::fs::write(path, output)?,
        None => {
            stdout.write_all(output.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Validation(_)
        | Error::Range(_)
        | Error::Domain(_)
        | Error::UndefinedRatio(_)
        | Error::NoSpectralGap { .. } => EXIT_USAGE,
        Error::Size { .. } | Error::Feasibility { .. } => EXIT_FEASIBILITY,
        Error::Consistency(_) | Error::Io(_) => EXIT_INTERNAL,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Validation(_) => "validation",
        Error::Range(_) => "range",
        Error::Domain(_) => "domain",
        Error::UndefinedRatio(_) => "undefined_ratio",
        Error::NoSpectralGap { .. } => "no_spectral_gap",
        Error::Size { .. } => "size",
        Error::Feasibility { .. } => "feasibility",
        Error::Consistency(_) => "consistency",
        Error::Io(_) => "io",
    }
}

fn report(stderr: &mut dyn Write, e: &Error) -> i32 {
    let code = exit_code(e);
    let cost = match e {
        Error::Feasibility { estimated_cost, .. } => Some(*estimated_cost),
        _ => None,
    };
    emit_error(stderr, error_kind(e), code, &e.to_string(), cost);
    code
}

fn emit_error(stderr: &mut dyn Write, kind: &str, code: i32, message: &str, cost: Option<f64>) {
    let mut line = json!({ "error": kind, "exit_code": code, "message": message });
    if let Some(c) = cost {
        line["estimated_cost"] = json!(c);
    }
    let _ = writeln!(stderr, "{line}");
}

/// Runs the configured subcommand and returns its full output.
pub fn execute(config: &RunConfig) -> Result<String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::validation(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(config))
}

fn params_of(g: &GraphArgs) -> Result<GraphParams> {
    GraphParams::new(g.n, g.r, g.s)
}

fn lengths(args: &LengthArgs) -> Result<Vec<u32>> {
    let ts = match (&args.t, &args.t_range) {
        (Some(t), None) => vec![*t],
        (None, Some(range)) => {
            let (a, b) = range
                .split_once(':')
                .ok_or_else(|| Error::validation(format!("t-range '{range}' is not a:b")))?;
            let parse = |x: &str| {
                x.trim().parse::<u32>().map_err(|_| {
                    Error::validation(format!("t-range bound '{x}' is not an integer"))
                })
            };
            let (a, b) = (parse(a)?, parse(b)?);
            if a > b {
                return Err(Error::validation(format!("t-range {a}:{b} is empty")));
            }
            (a..=b).collect()
        }
        _ => return Err(Error::validation("one of -t or --t-range is required")),
    };
    if ts.contains(&0) {
        return Err(Error::validation("t must be at least 1"));
    }
    Ok(ts)
}

fn big_json<T: ToString>(x: &T) -> Value {
    Value::String(x.to_string())
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn dispatch(config: &RunConfig) -> Result<String> {
    let fmt = config.format;
    match &config.command {
        Command::Spectrum {
            graph,
            validate,
            tol,
        } => {
            let params = params_of(graph)?;
            if tol.is_nan() || *tol <= 0.0 {
                return Err(Error::validation("tol must be positive"));
            }
            cmd_spectrum(&params, *validate, *tol, config.max_vertices, fmt)
        }
        Command::Hom { graph, length } => {
            let params = params_of(graph)?;
            let ts = lengths(length)?;
            cmd_hom(&params, &ts, fmt)
        }
        Command::Mono {
            graph,
            length,
            horizon,
            strategy,
        } => {
            let params = params_of(graph)?;
            let ts = lengths(length)?;
            let opts = MonoOptions {
                horizon: *horizon,
                strategy: match strategy {
                    StrategyArg::Auto => MonoStrategy::Auto,
                    StrategyArg::Backtrack => MonoStrategy::Backtrack,
                    StrategyArg::MeetInMiddle => MonoStrategy::MeetInMiddle,
                },
                use_transitivity: true,
            };
            cmd_cycles(&params, &ts, &opts, config.max_vertices, fmt, false)
        }
        Command::Gap {
            graph,
            length,
            horizon,
        } => {
            let params = params_of(graph)?;
            let ts = lengths(length)?;
            let opts = MonoOptions {
                horizon: *horizon,
                ..MonoOptions::default()
            };
            cmd_cycles(&params, &ts, &opts, config.max_vertices, fmt, true)
        }
        Command::Walk {
            graph,
            mode,
            t,
            trials,
            seed,
            eps,
            vertex,
            horizon,
            z,
        } => {
            let params = params_of(graph)?;
            let cfg = WalkConfig::new(*t, *trials, *seed)?;
            if !(*eps > 0.0 && *eps <= 1.0) {
                return Err(Error::validation(format!(
                    "eps must lie in (0, 1], got {eps}"
                )));
            }
            if !(*z > 0.0 && z.is_finite()) {
                return Err(Error::validation("z must be positive"));
            }
            let walk = WalkArgs {
                mode: *mode,
                cfg,
                eps: *eps,
                vertex: *vertex,
                horizon: *horizon,
                z: *z,
            };
            cmd_walk(&params, &walk, config.max_vertices, fmt)
        }
        Command::Regimes {
            graph,
            length,
            eps,
            horizon,
            budget,
        } => {
            let params = params_of(graph)?;
            let ts = lengths(length)?;
            if !(*eps > 0.0 && *eps < 1.0) {
                return Err(Error::validation(format!(
                    "eps must lie in (0, 1), got {eps}"
                )));
            }
            let opts = ReportOptions {
                eps: *eps,
                mono: MonoOptions {
                    horizon: *horizon,
                    ..MonoOptions::default()
                },
                enumeration_budget: *budget,
            };
            cmd_regimes(&params, &ts, &opts, config.max_vertices, fmt)
        }
        Command::Verify { scale, t_max } => {
            if *t_max == 0 {
                return Err(Error::validation("t-max must be at least 1"));
            }
            cmd_verify(*scale, *t_max, fmt)
        }
        Command::ExportGraph { graph } => {
            let params = params_of(graph)?;
            cmd_export(&params, config.max_vertices, fmt)
        }
    }
}

fn cmd_spectrum(
    params: &GraphParams,
    validate: bool,
    tol: f64,
    max_vertices: u64,
    fmt: Format,
) -> Result<String> {
    let report = full_spectrum(params);
    let validation = if validate {
        let g = build_graph(params, max_vertices)?;
        let cap = DEFAULT_NUMERIC_CAP.min(usize::try_from(max_vertices).unwrap_or(usize::MAX));
        let v = validate_spectrum_capped(&g, &report, tol, cap)?;
        if !v.passed {
            return Err(Error::Consistency(format!(
                "{params}: numeric spectrum disagrees: {}",
                v.mismatch.unwrap_or_default()
            )));
        }
        Some(v)
    } else {
        None
    };
    let live = report.entries.iter().filter(|e| !e.mult.is_zero());
    Ok(match fmt {
        Format::Json => {
            let mut v = json!({
                "n": params.n(),
                "r": params.r(),
                "s": params.s(),
                "N": big_json(params.vertex_count()),
                "N1": big_json(params.degree()),
                "bipartite": report.bipartite,
                "second_abs_ratio": report.second_abs_ratio.as_ref().map(ToString::to_string),
                "entries": report.to_json(),
            });
            if let Some(val) = &validation {
                v["validation"] = json!({
                    "passed": val.passed,
                    "tolerance": tol,
                    "max_deviation": val.max_deviation,
                });
            }
            render_json(&v)
        }
        Format::Csv => {
            let mut s = String::from("j,lambda,mult\n");
            for e in live {
                s += &format!("{},{},{}\n", e.j, e.lambda, e.mult);
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "{params} N={} N1={}\n",
                params.vertex_count(),
                params.degree()
            );
            for e in live {
                s += &format!("{} {} {}\n", e.j, e.lambda, e.mult);
            }
            if let Some(val) = &validation {
                s += &format!("validated max_deviation={:e}\n", val.max_deviation);
            }
            s
        }
    })
}

fn cmd_hom(params: &GraphParams, ts: &[u32], fmt: Format) -> Result<String> {
    let homs: Vec<_> = ts
        .iter()
        .map(|&t| hom_cycles(params, t).map(|h| (t, h)))
        .collect::<Result<_>>()?;
    Ok(match fmt {
        Format::Json => render_json(&Value::Array(
            homs.iter()
                .map(|(t, h)| {
                    json!({"n": params.n(), "r": params.r(), "s": params.s(), "t": t, "hom": big_json(h)})
                })
                .collect(),
        )),
        Format::Csv => {
            let mut s = String::from("t,hom\n");
            for (t, h) in &homs {
                s += &format!("{t},{h}\n");
            }
            s
        }
        Format::Text => text_rows(homs.iter().map(|(t, h)| (*t, h.to_string())), ts.len() > 1),
    })
}

/// One line per `t`; the value alone for a single length, `t value` otherwise.
fn text_rows(rows: impl Iterator<Item = (u32, String)>, with_t: bool) -> String {
    let mut s = String::new();
    for (t, v) in rows {
        if with_t {
            s += &format!("{t} {v}\n");
        } else {
            s += &format!("{v}\n");
        }
    }
    s
}

fn cmd_cycles(
    params: &GraphParams,
    ts: &[u32],
    opts: &MonoOptions,
    max_vertices: u64,
    fmt: Format,
    gap: bool,
) -> Result<String> {
    for &t in ts {
        if t < 3 {
            return Err(Error::domain(format!(
                "cycle length must be at least 3, got {t}"
            )));
        }
    }
    let g = build_graph(params, max_vertices)?;
    if let Some(&t) = ts.iter().find(|&&t| t > opts.horizon) {
        return Err(Error::Feasibility {
            message: format!(
                "cycle length {t} beyond enumeration horizon {}",
                opts.horizon
            ),
            estimated_cost: mono_cost_estimate(&g, t, opts),
        });
    }
    let mut rows = Vec::with_capacity(ts.len());
    for &t in ts {
        let row = CycleCounts::compute(params, Some(&g), t, opts)?;
        if gap && row.gap_ratio.is_none() {
            return Err(Error::UndefinedRatio(format!("hom(C_{t}) = 0 on {params}")));
        }
        rows.push(row);
    }
    Ok(match fmt {
        Format::Json => render_json(&Value::Array(
            rows.iter().map(|r| r.to_json(params)).collect(),
        )),
        Format::Csv => {
            let mut s = String::from(if gap {
                "t,gap_ratio,gap_upper_bound\n"
            } else {
                "t,hom,mono,copies\n"
            });
            for r in &rows {
                s += &cycle_line(r, gap, ',');
                s.push('\n');
            }
            s
        }
        Format::Text => text_rows(
            rows.iter().map(|r| {
                let line = cycle_line(r, gap, ' ');
                let rest = line
                    .split_once(' ')
                    .map(|x| x.1.to_string())
                    .unwrap_or_default();
                (r.t, rest)
            }),
            ts.len() > 1,
        ),
    })
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(ToString::to_string).unwrap_or_default()
}

fn cycle_line(r: &CycleCounts, gap: bool, sep: char) -> String {
    let fields = if gap {
        vec![r.t.to_string(), opt(&r.gap_ratio), opt(&r.gap_upper_bound)]
    } else {
        vec![
            r.t.to_string(),
            r.hom.to_string(),
            opt(&r.mono),
            opt(&r.copies),
        ]
    };
    fields.join(&sep.to_string())
}

struct WalkArgs {
    mode: WalkMode,
    cfg: WalkConfig,
    eps: f64,
    vertex: usize,
    horizon: Option<u32>,
    z: f64,
}

fn params_json(params: &GraphParams) -> Value {
    json!({"n": params.n(), "r": params.r(), "s": params.s()})
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn flat_csv(v: &Value) -> String {
    let Value::Object(map) = v else {
        return format!("{v}\n");
    };
    let cell = |x: &Value| match x {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    };
    let keys: Vec<&str> = map.keys().map(String::as_str).collect();
    let vals: Vec<String> = map.values().map(cell).collect();
    format!("{}\n{}\n", keys.join(","), vals.join(","))
}

fn flat_text(v: &Value) -> String {
    let Value::Object(map) = v else {
        return format!("{v}\n");
    };
    let mut s = String::new();
    for (k, x) in map {
        let val = match x {
            Value::String(t) => t.clone(),
            Value::Null => "-".to_string(),
            other => other.to_string(),
        };
        s += &format!("{k} {val}\n");
    }
    s
}

fn cmd_walk(params: &GraphParams, w: &WalkArgs, max_vertices: u64, fmt: Format) -> Result<String> {
    let g = build_graph(params, max_vertices)?;
    if w.vertex >= g.vertex_count() {
        return Err(Error::range(format!(
            "vertex {} not in [0, {})",
            w.vertex,
            g.vertex_count()
        )));
    }
    let body = match w.mode {
        WalkMode::Return => {
            let f = return_frequency(&g, &w.cfg)?;
            let exact = return_probability(params, w.cfg.steps)?;
            json!({
                "t": f.t,
                "trials": f.trials,
                "seed": w.cfg.seed,
                "prng": PRNG_ID,
                "returns": f.returns,
                "estimate": f.estimate,
                "std_error": f.std_error,
                "exact": exact.to_string(),
                "exact_value": exact.to_f64(),
            })
        }
        WalkMode::SelfIntersection => {
            let est = conditional_self_intersection(&g, w.cfg.steps, &w.cfg, w.z)?;
            est.to_json(Some(params))
        }
        WalkMode::Mixing => mixing_json(params, &g, w)?,
        WalkMode::Row => {
            let row = transition_row(&g, w.vertex, w.cfg.steps)?;
            if fmt != Format::Json {
                let mut s = String::from(if fmt == Format::Csv {
                    "u,numerator\n"
                } else {
                    ""
                });
                let sep = if fmt == Format::Csv { ',' } else { ' ' };
                if fmt == Format::Text {
                    s += &format!("denominator {}\n", row.denominator);
                }
                for (u, x) in row.numerators.iter().enumerate() {
                    s += &format!("{u}{sep}{x}\n");
                }
                return Ok(s);
            }
            json!({
                "origin": row.origin,
                "t": row.t,
                "denominator": big_json(&row.denominator),
                "numerators": row.numerators.iter().map(big_json).collect::<Vec<_>>(),
            })
        }
    };
    let v = merge(params_json(params), body);
    Ok(match fmt {
        Format::Json => render_json(&v),
        Format::Csv => flat_csv(&v),
        Format::Text => flat_text(&v),
    })
}

fn mixing_json(params: &GraphParams, g: &ExplicitGraph, w: &WalkArgs) -> Result<Value> {
    let bound = mixing_time_bound_for(params, w.eps)?;
    let horizon = w.horizon.unwrap_or_else(|| default_mixing_horizon(bound));
    let at = bound.ceil() as u32;
    let delta = variation_distance(g, w.vertex, at)?;
    let tau = empirical_mixing_time(g, w.vertex, w.eps, horizon)?;
    Ok(json!({
        "eps": w.eps,
        "vertex": w.vertex,
        "bound": bound,
        "bound_steps": at,
        "delta_at_bound": delta.to_string(),
        "delta_at_bound_value": delta.to_f64(),
        "bound_holds": within(&delta, w.eps),
        "horizon": horizon,
        "mixing_time": match tau {
            MixingOutcome::Reached(t) => json!(t),
            MixingOutcome::NotReached => Value::Null,
        },
        "reached": matches!(tau, MixingOutcome::Reached(_)),
    }))
}

fn cmd_regimes(
    params: &GraphParams,
    ts: &[u32],
    opts: &ReportOptions,
    max_vertices: u64,
    fmt: Format,
) -> Result<String> {
    let graph = match build_graph(params, max_vertices) {
        Ok(g) => Some(g),
        Err(Error::Size { .. }) => None,
        Err(e) => return Err(e),
    };
    let report = regime_report(params, graph.as_ref(), ts, opts)?;
    Ok(match fmt {
        Format::Json => render_json(&report.to_json()),
        Format::Csv | Format::Text => {
            let mut buf = Vec::new();
            report.write_csv(&mut buf)?;
            String::from_utf8(buf).expect("ascii output")
        }
    })
}

#[derive(Default)]
struct CheckTally {
    instances: u64,
    failures: Vec<String>,
}

impl CheckTally {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn cmd_verify(scale: u64, t_max: u32, fmt: Format) -> Result<String> {
    let mut spectrum = CheckTally::default();
    let mut hom = CheckTally::default();
    let mut walks = CheckTally::default();
    let mut mono = CheckTally::default();
    for params in GraphParams::all_up_to(scale) {
        let g = build_graph(&params, scale)?;
        let report = full_spectrum(&params);
        if g.vertex_count() <= DEFAULT_NUMERIC_CAP {
            let v = validate_spectrum_capped(&g, &report, DEFAULT_TOLERANCE, DEFAULT_NUMERIC_CAP)?;
            spectrum.record(v.passed, || {
                format!("{params}: {}", v.mismatch.unwrap_or_default())
            });
        }
        for t in 1..=t_max {
            let closed = hom_cycles(&params, t)?;
            let oracle = hom_trace_oracle(&g, t)?;
            hom.record(closed == oracle, || {
                format!("{params} t={t}: {closed} vs {oracle}")
            });
            if !params.is_edgeless() {
                let row = transition_row(&g, 0, t)?;
                let ok = row.sums_to_one() && row.prob(0) == return_probability(&params, t)?;
                walks.record(ok, || format!("{params} t={t}: row diagonal"));
            }
        }
        let d = g.regular_degree().unwrap_or(0);
        for t in 3..=t_max.min(6) {
            if d > 16 {
                break;
            }
            let run = |strategy| {
                mono_cycles_with(
                    &g,
                    t,
                    &MonoOptions {
                        strategy,
                        ..MonoOptions::default()
                    },
                )
            };
            let a = run(MonoStrategy::Backtrack)?;
            let b = run(MonoStrategy::MeetInMiddle)?;
            let h = hom_cycles(&params, t)?;
            let ok = a == b && a <= h && (&a % (2 * t)) == num_bigint::BigUint::default();
            mono.record(ok, || format!("{params} t={t}: {a} vs {b} (hom {h})"));
        }
    }
    let checks = [
        ("spectrum_numeric", &spectrum),
        ("hom_trace", &hom),
        ("walk_diagonal", &walks),
        ("mono_strategies", &mono),
    ];
    let passed = checks.iter().all(|(_, c)| c.failures.is_empty());
    let out = match fmt {
        Format::Json => render_json(&json!({
            "scale": scale,
            "t_max": t_max,
            "passed": passed,
            "checks": checks.iter().map(|(name, c)| json!({
                "name": name,
                "instances": c.instances,
                "failures": c.failures,
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = String::from("check,instances,failures\n");
            for (name, c) in &checks {
                s += &format!("{name},{},{}\n", c.instances, c.failures.len());
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (name, c) in &checks {
                let status = if c.failures.is_empty() {
                    "ok"
                } else {
                    "FAILED"
                };
                s += &format!("{name} {} {status}\n", c.instances);
                for f in &c.failures {
                    s += &format!("  {f}\n");
                }
            }
            s
        }
    };
    if !passed {
        let failed: Vec<&str> = checks
            .iter()
            .filter(|(_, c)| !c.failures.is_empty())
            .map(|(n, _)| *n)
            .collect();
        return Err(Error::Consistency(format!(
            "verification failed: {}; details: {}",
            failed.join(", "),
            out.replace('\n', " ").trim()
        )));
    }
    Ok(out)
}

fn cmd_export(params: &GraphParams, max_vertices: u64, fmt: Format) -> Result<String> {
    let g = build_graph(params, max_vertices)?;
    Ok(match fmt {
        Format::Text => {
            let mut buf = Vec::new();
            g.write_edge_list(&mut buf)?;
            String::from_utf8(buf).expect("ascii output")
        }
        Format::Csv => {
            let mut s = String::from("u,v\n");
            for (u, v) in g.edges() {
                s += &format!("{u},{v}\n");
            }
            s
        }
        Format::Json => {
            let vertices: Vec<Vec<u32>> = (0..g.vertex_count())
                .map(|v| {
                    g.subset(v)
                        .map(|x| x.elements().to_vec())
                        .unwrap_or_default()
                })
                .collect();
            let edges: Vec<[usize; 2]> = g.edges().map(|(u, v)| [u, v]).collect();
            render_json(&json!({
                "n": params.n(),
                "r": params.r(),
                "s": params.s(),
                "N": big_json(params.vertex_count()),
                "N1": big_json(params.degree()),
                "vertices": vertices,
                "edges": edges,
            }))
        }
    })
}
