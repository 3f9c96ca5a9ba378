//! `critdet`: campaigns, point queries, fiber envelopes and term evaluation.
//!
//! Exit status: 0 on success (for `verify`, every leaf proven or
//! excluded), 1 when a campaign leaves indeterminate leaves, 2 on invalid
//! input or configuration, 3 on I/O failure.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use critdet::interval::{set_transcendental_slack_ulps, shortest};
use critdet::program::{eval_term, literal_enclosure, parse_term, Env, Partial, Signature};
use critdet::verifier::{
    envelope_min, point_report, verify, Campaign, EnvelopeOptions, Exclusion, Format, Margins, SigmaSpec, DEFAULT_MAX_DEPTH,
    DEFAULT_P2_MARGIN, DEFAULT_S_MARGIN, DEFAULT_TAU_TOL, THEOREM_D,
};
use critdet::Interval;
use serde::Deserialize;

#[derive(Parser)]
#[command(name = "critdet", version, about = "Interval certification of the critical determinant inequality")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification campaign over p × s and write its certificate.
    Verify(VerifyArgs),
    /// Print enclosures of the moduli quantities at one (p, σ).
    Point(PointArgs),
    /// Print z_min(p) = min over the fiber of Δ(p, ·) as CSV.
    Envelope(EnvelopeArgs),
    /// Evaluate a term over interval bindings.
    Eval(EvalArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// TOML file with any of the keys below (flags take precedence).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    p_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    p_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    s_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    s_max: Option<f64>,
    #[arg(long)]
    max_depth: Option<u32>,
    #[arg(long)]
    tau_tol: Option<f64>,
    /// Exclusion region, repeatable: `theorem`, `theorem:D`, `p2`,
    /// `p2:HALF_WIDTH`, `box:P_LO:P_HI:SIGMA_LO:SIGMA_HI` or `none`.
    /// Without this flag the Theorem's box and the p = 2 band are used.
    #[arg(long)]
    exclude: Vec<String>,
    #[arg(long)]
    s_margin_lo: Option<f64>,
    #[arg(long)]
    s_margin_hi: Option<f64>,
    /// Certificate path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `json` or `csv`.
    #[arg(long)]
    format: Option<String>,
    /// Record the wall time in the summary (makes output non-reproducible).
    #[arg(long)]
    record_time: bool,
    /// Ulp slack applied to exp and ln.
    #[arg(long)]
    slack_ulps: Option<u32>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct CampaignConfig {
    p_min: Option<f64>,
    p_max: Option<f64>,
    s_min: Option<f64>,
    s_max: Option<f64>,
    max_depth: Option<u32>,
    tau_tol: Option<f64>,
    exclude: Option<Vec<String>>,
    s_margin_lo: Option<f64>,
    s_margin_hi: Option<f64>,
    out: Option<PathBuf>,
    format: Option<String>,
    record_time: Option<bool>,
    slack_ulps: Option<u32>,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long)]
    p: f64,
    /// A value in [1, σ_p], or `sigma_p`.
    #[arg(long, default_value = "1")]
    sigma: String,
    #[arg(long, default_value_t = 1e-12)]
    tau_tol: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct EnvelopeArgs {
    /// Values of p.
    #[arg(required = true)]
    p: Vec<f64>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    tau_tol: f64,
    #[arg(long, default_value_t = 200_000)]
    max_boxes: usize,
}

#[derive(Args)]
struct EvalArgs {
    term: String,
    /// Bindings `name=VALUE` or `name=[LO,HI]`.
    bindings: Vec<String>,
}

enum Failure {
    Config(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Point(a) => cmd_point(a),
        Command::Envelope(a) => cmd_envelope(a),
        Command::Eval(a) => cmd_eval(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let (Failure::Config(m) | Failure::Io(m)) = &f;
            eprintln!("critdet: {m}");
            ExitCode::from(f.code())
        }
    }
}

fn parse_exclusion(spec: &str) -> Result<Option<Exclusion>, Failure> {
    let bad = || Failure::Config(format!("invalid exclusion {spec:?}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let mut parts = spec.split(':');
    let kind = parts.next().unwrap_or_default();
    let rest: Vec<&str> = parts.collect();
    let ex = match (kind, rest.as_slice()) {
        ("none", []) => return Ok(None),
        ("theorem", []) => Exclusion::theorem(THEOREM_D),
        ("theorem", [d]) => {
            let d = num(d)?;
            if !(1.0..=2.0).contains(&d) {
                return Err(bad());
            }
            Exclusion::theorem(d)
        }
        ("p2", []) => Exclusion::p2_band(DEFAULT_P2_MARGIN),
        ("p2", [w]) => {
            let w = num(w)?;
            if !(w > 0.0 && w < 1.0) {
                return Err(bad());
            }
            Exclusion::p2_band(w)
        }
        ("box", [a, b, c, d]) => {
            let p = Interval::new(num(a)?, num(b)?).map_err(|_| bad())?;
            let sigma = Interval::new(num(c)?, num(d)?).map_err(|_| bad())?;
            Exclusion { p, sigma }
        }
        _ => return Err(bad()),
    };
    Ok(Some(ex))
}

fn load_config(path: &Path) -> Result<CampaignConfig, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn cmd_verify(a: VerifyArgs) -> Result<u8, Failure> {
    let cfg = match &a.config {
        Some(path) => load_config(path)?,
        None => CampaignConfig::default(),
    };
    let need = |flag: Option<f64>, file: Option<f64>, name: &str| {
        flag.or(file).ok_or_else(|| Failure::Config(format!("missing --{name}")))
    };
    let p_min = need(a.p_min, cfg.p_min, "p-min")?;
    let p_max = need(a.p_max, cfg.p_max, "p-max")?;
    let margins = Margins {
        s_lo: a.s_margin_lo.or(cfg.s_margin_lo).unwrap_or(DEFAULT_S_MARGIN),
        s_hi: a.s_margin_hi.or(cfg.s_margin_hi).unwrap_or(DEFAULT_S_MARGIN),
        p2: DEFAULT_P2_MARGIN,
    };
    let s_min = a.s_min.or(cfg.s_min).unwrap_or(margins.s_lo);
    let s_max = a.s_max.or(cfg.s_max).unwrap_or(1.0 - margins.s_hi);
    let range = |lo: f64, hi: f64, name: &str| {
        Interval::new(lo, hi).map_err(|_| Failure::Config(format!("{name} range [{lo}, {hi}] is not an interval")))
    };
    let p_range = range(p_min, p_max, "p")?;
    let s_range = range(s_min, s_max, "s")?;
    let specs = if a.exclude.is_empty() { cfg.exclude.unwrap_or_default() } else { a.exclude };
    let mut campaign = Campaign::new(p_range, s_range)
        .max_depth(a.max_depth.or(cfg.max_depth).unwrap_or(DEFAULT_MAX_DEPTH))
        .tau_tol(a.tau_tol.or(cfg.tau_tol).unwrap_or(DEFAULT_TAU_TOL))
        .margins(margins);
    if !specs.is_empty() {
        let mut ex = Vec::new();
        for s in &specs {
            ex.extend(parse_exclusion(s)?);
            if let Some(w) = s.strip_prefix("p2:") {
                campaign.margins.p2 = w.trim().parse().expect("checked by parse_exclusion");
            }
        }
        campaign = campaign.exclusions(ex);
    }
    campaign.validate().map_err(|e| Failure::Config(e.to_string()))?;
    let format: Format = a.format.or(cfg.format).as_deref().unwrap_or("json").parse().map_err(Failure::Config)?;
    if let Some(k) = a.slack_ulps.or(cfg.slack_ulps) {
        set_transcendental_slack_ulps(k);
    }

    let start = Instant::now();
    let mut cert = verify(&campaign);
    if a.record_time || cfg.record_time.unwrap_or(false) {
        cert = cert.with_seconds(start.elapsed().as_secs_f64());
    }
    match a.out.or(cfg.out) {
        Some(path) => cert.emit(&path, format).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        None => std::io::stdout().write_all(cert.render(format).as_bytes()).map_err(|e| Failure::Io(e.to_string()))?,
    }
    let s = &cert.summary;
    eprintln!(
        "proven={} indeterminate={} excluded={} min_g_lo={} max_depth={}",
        s.proven,
        s.indeterminate,
        s.excluded,
        s.min_g_lo.map_or("none".to_string(), shortest),
        s.max_depth
    );
    Ok(if cert.is_complete() { 0 } else { 1 })
}

fn cmd_point(a: PointArgs) -> Result<u8, Failure> {
    let sigma = match a.sigma.trim() {
        "sigma_p" => SigmaSpec::SigmaP,
        s => SigmaSpec::Value(s.parse().map_err(|_| Failure::Config(format!("invalid sigma {s:?}")))?),
    };
    let r = point_report(a.p, sigma, a.tau_tol).map_err(|e| Failure::Config(e.to_string()))?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&r).expect("serializable"));
        return Ok(0);
    }
    println!("p = {}", shortest(r.p));
    for (name, v) in [
        ("sigma", r.sigma),
        ("sigma_p", r.sigma_p),
        ("tau_p", r.tau_p),
        ("tau", r.tau),
        ("delta", r.delta),
        ("delta_at_1", r.delta_at_1),
        ("delta_at_sigma_p", r.delta_at_sigma_p),
        ("g", r.g),
    ] {
        println!("{name} = {v}");
    }
    Ok(0)
}

fn cmd_envelope(a: EnvelopeArgs) -> Result<u8, Failure> {
    if !(a.tol > 0.0) {
        return Err(Failure::Config(format!("tol must be positive, got {}", a.tol)));
    }
    let opts = EnvelopeOptions { tol: a.tol, tau_tol: a.tau_tol, max_boxes: a.max_boxes };
    let mut out = String::from("p,zmin_lo,zmin_hi\n");
    for &p in &a.p {
        if !(p.is_finite() && p > 1.0) {
            return Err(Failure::Config(format!("p must be a finite number greater than 1, got {p}")));
        }
        let e = envelope_min(&Interval::point(p), &opts).map_err(|e| Failure::Config(format!("p = {p}: {e}")))?;
        if !e.converged {
            eprintln!("critdet: p = {p}: width target not met after {} boxes", e.boxes);
        }
        out.push_str(&format!("{},{},{}\n", shortest(p), shortest(e.enclosure.lo()), shortest(e.enclosure.hi())));
    }
    std::io::stdout().write_all(out.as_bytes()).map_err(|e| Failure::Io(e.to_string()))?;
    Ok(0)
}

/// `VALUE` or `[LO,HI]`, each endpoint widened to enclose its decimal.
fn parse_binding_value(text: &str) -> Option<Interval> {
    let t = text.trim();
    match t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        Some(inner) => {
            let (lo, hi) = inner.split_once(',')?;
            let (lo, hi) = (literal_enclosure(lo.trim())?, literal_enclosure(hi.trim())?);
            Interval::new(lo.lo(), hi.hi()).ok()
        }
        None => literal_enclosure(t),
    }
}

fn cmd_eval(a: EvalArgs) -> Result<u8, Failure> {
    let term = parse_term(&a.term, &Signature::standard()).map_err(|e| {
        let caret = format!("{}^", " ".repeat(e.position()));
        Failure::Config(format!("{e}\n  {}\n  {caret}", a.term))
    })?;
    let mut env = Env::new();
    for b in &a.bindings {
        let (name, value) = b.split_once('=').ok_or_else(|| Failure::Config(format!("binding {b:?} is not name=value")))?;
        let v = parse_binding_value(value).ok_or_else(|| Failure::Config(format!("invalid value in binding {b:?}")))?;
        env.insert(name.trim().to_string(), v);
    }
    match eval_term(&term, &env).map_err(|e| Failure::Config(e.to_string()))? {
        Partial::Defined(v) => println!("{v} width {}", shortest(v.width())),
        Partial::Undefined => println!("undefined"),
    }
    Ok(0)
}
