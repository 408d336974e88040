//! `seshadri`: command-line front end to the lattice, curve, positivity and
//! Seshadri-constant routines.
//!
//! Output is JSON (or CSV for tables) on stdout. Exit status: 0 on success,
//! 1 when a check or certificate fails, 2 on invalid input.

mod reproduce;

use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use seshadri_core::seshadri::SeshadriError;
use seshadri_core::{
    anticanonical_dot, arithmetic_genus, canonical_class, canonical_dot, check_ample, classify_negative_class,
    compute, enumerate_minus_curves, euler_characteristic, existence, expected_dim, gamma_set, intersect,
    intersect_extended, ncon_forces_nonreduced, strong_shgh_forces_nonreduced, ConfigDocument, DivisorClass,
    ExtendedClass, FatPointSystem, JsonInt, MinusKind, ScanBox, Verdict,
};

#[derive(Parser)]
#[command(name = "seshadri", version, about = "Exact Seshadri constants on blow-ups of the plane")]
struct Cli {
    /// Worker threads for the parallel scans (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Intersection-form arithmetic.
    #[command(subcommand)]
    Picard(PicardOp),
    /// Negative curve classes.
    #[command(subcommand)]
    Curves(CurvesOp),
    /// Ampleness certificates.
    #[command(subcommand)]
    Positivity(PositivityOp),
    /// Seshadri constants.
    #[command(subcommand)]
    Seshadri(SeshadriOp),
    /// Fat-point systems and the SHGH-type predicates.
    #[command(subcommand)]
    Shgh(ShghOp),
    /// Replay a published statement, or all of them.
    Reproduce(ReproduceArgs),
    /// Fast internal consistency run.
    Selftest,
}

#[derive(Subcommand)]
enum PicardOp {
    /// A.B for two classes of the same rank (`d;m1,..` or `d;m1,..;t`).
    Intersect {
        a: String,
        b: String,
    },
    /// K = (-3; -1, ..., -1) on r points.
    Canonical {
        #[arg(long)]
        r: usize,
    },
    /// Euler characteristic chi(D) = 1 + (D^2 - K.D)/2.
    Chi { class: String },
    /// Arithmetic genus p_a(D) = 1 + (D^2 + K.D)/2.
    Genus { class: String },
    /// Square, K.D, chi and p_a together.
    Info { class: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum CurvesOp {
    /// All (-1)- or (-2)-classes on n points.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_kind)]
        kind: MinusKind,
        /// Degree cap; required for n >= 9.
        #[arg(long)]
        cap: Option<u32>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Type of a negative extended class `d;m1,..;t`.
    Classify { class: String },
    /// Candidate Seshadri curves through x with their existence status.
    Gamma {
        #[arg(long)]
        config: String,
        #[arg(long)]
        cap: Option<u32>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Subcommand)]
enum PositivityOp {
    /// Ampleness certificate; exits 1 unless the verdict is ample.
    Check {
        #[arg(long = "L")]
        l: String,
        #[arg(long)]
        config: String,
    },
}

#[derive(Subcommand)]
enum SeshadriOp {
    /// epsilon(X, L, x) as an exact interval with a witness curve.
    Compute {
        #[arg(long = "L")]
        l: String,
        #[arg(long)]
        config: String,
        /// Degree cap for the candidate scan; required for r >= 9.
        #[arg(long)]
        cap: Option<u32>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Subcommand)]
enum ShghOp {
    /// Expected dimension and the non-reducedness predicates.
    Eval {
        /// `{"d": 3, "m": [1,1,1,1,1,1,1,1], "t": 2}`
        #[arg(long, conflicts_with_all = ["d", "m", "t"])]
        system: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        d: Option<String>,
        /// Comma-separated multiplicities.
        #[arg(long, allow_hyphen_values = true)]
        m: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
    },
}

#[derive(Args)]
struct ReproduceArgs {
    /// Target id or alias (see --list).
    target: Option<String>,
    #[arg(long, conflicts_with_all = ["target", "all"])]
    list: bool,
    #[arg(long, conflicts_with = "target")]
    all: bool,
    /// Seed for the sampled ample bundles.
    #[arg(long, default_value_t = reproduce::DEFAULT_SEED)]
    seed: u64,
    /// Sampled bundles per configuration.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    max_e: Option<u32>,
    /// Box for the negative-class scans: max degree, multiplicity, t.
    #[arg(long = "box", value_parser = parse_box)]
    scan_box: Option<ScanBox>,
    /// Restrict the box scans to this many points.
    #[arg(long)]
    r: Option<usize>,
}

fn parse_kind(s: &str) -> Result<MinusKind, String> {
    MinusKind::from_str(s).map_err(|e| e.to_string())
}

fn parse_box(s: &str) -> Result<ScanBox, String> {
    let parts: Vec<u32> = s.split(',').map(|p| p.trim().parse::<u32>()).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    match parts[..] {
        [max_degree, max_multiplicity, max_t] => Ok(ScanBox { max_degree, max_multiplicity, max_t }),
        _ => Err("expected three numbers d,m,t".into()),
    }
}

/// Failure of a subcommand: bad input (exit 2) or a failed check (exit 1).
enum Failure {
    Input { kind: &'static str, message: String },
    Check(String),
}

impl Failure {
    fn input(kind: &'static str, message: impl ToString) -> Self {
        Failure::Input { kind, message: message.to_string() }
    }
}

impl From<SeshadriError> for Failure {
    fn from(e: SeshadriError) -> Self {
        match e {
            SeshadriError::NotAmple { .. } | SeshadriError::Inconsistent(_) | SeshadriError::Hypothesis(_) => {
                Failure::Check(e.to_string())
            }
            SeshadriError::Config(_) => Failure::input("config", e),
            SeshadriError::Picard(_) => Failure::input("class", e),
            SeshadriError::Resource(_) => Failure::input("resource", e),
            _ => Failure::input("domain", e),
        }
    }
}

macro_rules! input_err {
    ($kind:literal) => {
        |e| Failure::input($kind, e)
    };
}

/// What a subcommand produced: text for stdout and whether its checks passed.
struct Output {
    text: String,
    ok: bool,
}

impl Output {
    fn json<T: serde::Serialize + ?Sized>(v: &T) -> Self {
        Output { text: format!("{}\n", serde_json::to_string(v).expect("value serializes")), ok: true }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.to_string();
            let first = message.lines().next().unwrap_or_default().trim_start_matches("error: ");
            return report_failure(Failure::input("usage", first));
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            return report_failure(Failure::input("threads", e));
        }
    }
    match dispatch(cli.command) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            let _ = stdout.write_all(out.text.as_bytes());
            let _ = stdout.flush();
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(f) => report_failure(f),
    }
}

fn report_failure(f: Failure) -> ExitCode {
    let (code, line) = match f {
        Failure::Input { kind, message } => (2, json!({ "error": kind, "message": message })),
        Failure::Check(message) => (1, json!({ "error": "check", "message": message })),
    };
    eprintln!("{line}");
    ExitCode::from(code)
}

fn dispatch(command: Command) -> Result<Output, Failure> {
    match command {
        Command::Picard(op) => picard(op),
        Command::Curves(op) => curves(op),
        Command::Positivity(PositivityOp::Check { l, config }) => positivity_check(&l, &config),
        Command::Seshadri(SeshadriOp::Compute { l, config, cap, format }) => seshadri_compute(&l, &config, cap, format),
        Command::Shgh(ShghOp::Eval { system, d, m, t }) => shgh_eval(system, d, m, t),
        Command::Reproduce(args) => reproduce_cmd(args),
        Command::Selftest => selftest(),
    }
}

fn int(v: BigInt) -> Value {
    serde_json::to_value(JsonInt(v)).expect("integer serializes")
}

fn class(text: &str) -> Result<DivisorClass, Failure> {
    DivisorClass::from_str(text).map_err(input_err!("class"))
}

fn extended(text: &str) -> Result<ExtendedClass, Failure> {
    ExtendedClass::from_str(text).map_err(input_err!("class"))
}

/// A class given as `d;m` or `d;m;t`; the former is read with `t` absent.
enum AnyClass {
    Plain(DivisorClass),
    Extended(ExtendedClass),
}

fn any_class(text: &str) -> Result<AnyClass, Failure> {
    if text.matches(';').count() >= 2 {
        extended(text).map(AnyClass::Extended)
    } else {
        class(text).map(AnyClass::Plain)
    }
}

fn picard(op: PicardOp) -> Result<Output, Failure> {
    let v = match op {
        PicardOp::Intersect { a, b } => {
            let product = match (any_class(&a)?, any_class(&b)?) {
                (AnyClass::Plain(a), AnyClass::Plain(b)) => intersect(&a, &b),
                (AnyClass::Extended(a), AnyClass::Extended(b)) => intersect_extended(&a, &b),
                _ => return Err(Failure::input("class", "both classes must carry t, or neither")),
            }
            .map_err(input_err!("class"))?;
            json!({ "a": a, "b": b, "product": int(product) })
        }
        PicardOp::Canonical { r } => json!({ "r": r, "class": canonical_class(r) }),
        PicardOp::Chi { class: text } => match any_class(&text)? {
            AnyClass::Plain(c) => json!({ "class": c, "chi": int(euler_characteristic(&c)) }),
            AnyClass::Extended(c) => json!({ "class": c, "chi": int(c.euler_characteristic()) }),
        },
        PicardOp::Genus { class: text } => match any_class(&text)? {
            AnyClass::Plain(c) => json!({ "class": c, "genus": int(arithmetic_genus(&c)) }),
            AnyClass::Extended(c) => json!({ "class": c, "genus": int(c.arithmetic_genus()) }),
        },
        PicardOp::Info { class: text } => match any_class(&text)? {
            AnyClass::Plain(c) => json!({
                "class": c,
                "selfint": int(c.self_intersection()),
                "kdot": int(canonical_dot(&c)),
                "antiKdot": int(anticanonical_dot(&c)),
                "chi": int(euler_characteristic(&c)),
                "genus": int(arithmetic_genus(&c)),
            }),
            AnyClass::Extended(c) => json!({
                "class": c,
                "selfint": int(c.self_intersection()),
                "kdot": int(c.canonical_dot()),
                "chi": int(c.euler_characteristic()),
                "genus": int(c.arithmetic_genus()),
            }),
        },
    };
    Ok(Output::json(&v))
}

fn csv_table(header: Vec<String>, rows: Vec<Vec<String>>) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io_err = |e: csv::Error| Failure::input("io", e);
    w.write_record(&header).map_err(io_err)?;
    for row in rows {
        w.write_record(&row).map_err(io_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::input("io", e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

fn curves(op: CurvesOp) -> Result<Output, Failure> {
    match op {
        CurvesOp::Enumerate { n, kind, cap, format } => {
            let set = enumerate_minus_curves(n, kind, cap).map_err(input_err!("curves"))?;
            match format {
                Format::Json => Ok(Output::json(&json!({
                    "n": n,
                    "kind": kind.to_string(),
                    "completeness": set.completeness,
                    "count": set.len(),
                    "classes": set.classes,
                }))),
                Format::Csv => {
                    let mut header = vec!["d".to_string()];
                    header.extend((1..=n).map(|i| format!("m{i}")));
                    header.extend(["selfint".to_string(), "kdot".to_string()]);
                    let rows = set
                        .classes
                        .iter()
                        .map(|c| {
                            let mut row = vec![c.degree().to_string()];
                            row.extend(c.multiplicities().iter().map(ToString::to_string));
                            row.push(c.self_intersection().to_string());
                            row.push(canonical_dot(c).to_string());
                            row
                        })
                        .collect();
                    Ok(Output { text: csv_table(header, rows)?, ok: true })
                }
            }
        }
        CurvesOp::Classify { class: text } => {
            let c = extended(&text)?;
            let kind = classify_negative_class(&c).map_err(input_err!("class"))?;
            Ok(Output::json(&json!({
                "class": c,
                "selfint": int(c.self_intersection()),
                "kdot": int(c.canonical_dot()),
                "type": kind,
                "inRange": kind.is_in_range(),
            })))
        }
        CurvesOp::Gamma { config, cap, format } => {
            let (cfg, x) = load_config(&config)?;
            let set = gamma_set(&cfg, &x, cap).map_err(input_err!("curves"))?;
            let mut rows = Vec::with_capacity(set.len());
            for c in &set.classes {
                let status = existence(&cfg, &x, c).map_err(input_err!("config"))?;
                rows.push((c, status));
            }
            match format {
                Format::Json => Ok(Output::json(&json!({
                    "completeness": set.completeness,
                    "count": set.len(),
                    "candidates": rows.iter().map(|(c, s)| json!({ "class": c, "status": s })).collect::<Vec<_>>(),
                }))),
                Format::Csv => {
                    let mut header = vec!["d".to_string()];
                    header.extend((1..=cfg.r).map(|i| format!("m{i}")));
                    header.extend(["t", "selfint", "kdot", "status"].map(String::from));
                    let rows = rows
                        .iter()
                        .map(|(c, s)| {
                            let mut row = vec![c.base.degree().to_string()];
                            row.extend(c.base.multiplicities().iter().map(ToString::to_string));
                            row.push(c.t.to_string());
                            row.push(c.self_intersection().to_string());
                            row.push(c.canonical_dot().to_string());
                            row.push(serde_json::to_value(s).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default());
                            row
                        })
                        .collect();
                    Ok(Output { text: csv_table(header, rows)?, ok: true })
                }
            }
        }
    }
}

fn load_config(path: &str) -> Result<(seshadri_core::SurfaceConfig, seshadri_core::PointSpec), Failure> {
    let text = if path == "-" {
        io::read_to_string(io::stdin()).map_err(input_err!("io"))?
    } else {
        fs::read_to_string(path).map_err(|e| Failure::input("io", format!("{path}: {e}")))?
    };
    let doc = ConfigDocument::from_json(&text).map_err(input_err!("config"))?;
    doc.split().map_err(input_err!("config"))
}

fn positivity_check(l: &str, config: &str) -> Result<Output, Failure> {
    let l = class(l)?;
    let (cfg, _) = load_config(config)?;
    let cert = check_ample(&l, &cfg).map_err(input_err!("config"))?;
    let (verdict, witness) = match &cert.verdict {
        Verdict::Ample => ("ample", None),
        Verdict::Nef => ("nef", None),
        Verdict::NotNef(w) => ("notNef", w.as_ref()),
        Verdict::NotAmple(w) => ("notAmple", w.as_ref()),
        Verdict::Unknown => ("unknown", None),
    };
    let v = json!({
        "class": l,
        "verdict": verdict,
        "witness": witness,
        "completeness": cert.checked_against.completeness,
        "checkedAgainst": cert.checked_against,
        "assumptions": cert.assumptions,
    });
    Ok(Output { ok: cert.is_ample(), ..Output::json(&v) })
}

fn seshadri_compute(l: &str, config: &str, cap: Option<u32>, format: Format) -> Result<Output, Failure> {
    let l = class(l)?;
    let (cfg, x) = load_config(config)?;
    let res = compute(&l, &cfg, &x, cap)?;
    match format {
        Format::Json => Ok(Output::json(&res)),
        Format::Csv => {
            let header = ["lower", "upper", "exact", "witness", "assumptions"].map(String::from).to_vec();
            let names: Vec<String> = res.assumptions.iter().map(ToString::to_string).collect();
            let row = vec![
                res.lower.to_string(),
                res.upper.to_string(),
                res.exact.to_string(),
                res.witness.as_ref().map(ToString::to_string).unwrap_or_default(),
                names.join(" "),
            ];
            Ok(Output { text: csv_table(header, vec![row])?, ok: true })
        }
    }
}

fn shgh_eval(system: Option<String>, d: Option<String>, m: Option<String>, t: Option<String>) -> Result<Output, Failure> {
    let sys = match system {
        Some(text) => serde_json::from_str::<FatPointSystem>(&text).map_err(input_err!("system"))?,
        None => {
            let big = |s: &str| BigInt::from_str(s.trim()).map_err(|_| Failure::input("system", format!("not an integer: {s:?}")));
            let d = big(d.as_deref().ok_or_else(|| Failure::input("system", "pass --system or --d"))?)?;
            let m = match m.as_deref() {
                None | Some("") => Vec::new(),
                Some(list) => list.split(',').map(big).collect::<Result<_, _>>()?,
            };
            let t = t.as_deref().map(big).transpose()?.unwrap_or_default();
            FatPointSystem::new(d, m, t)
        }
    };
    // a predicate outside its domain is reported as null
    let strong = strong_shgh_forces_nonreduced(&sys).ok();
    let ncon = ncon_forces_nonreduced(&sys).ok();
    Ok(Output::json(&json!({
        "system": sys,
        "virtualSections": int(sys.virtual_sections()),
        "expectedDim": int(expected_dim(&sys)),
        "strongShghNonreduced": strong,
        "nconNonreduced": ncon,
    })))
}

fn reproduce_cmd(args: ReproduceArgs) -> Result<Output, Failure> {
    if args.list {
        let text: String = reproduce::TARGETS.iter().map(|t| format!("{}\t{}\t{}\n", t.id, t.alias, t.summary)).collect();
        return Ok(Output { text, ok: true });
    }
    let mut params = reproduce::Params { seed: args.seed, r: args.r, ..Default::default() };
    if let Some(s) = args.samples {
        params.samples = s;
        params.box_samples = params.box_samples.min(s);
    }
    if let Some(e) = args.max_e {
        params.max_e = e;
    }
    if let Some(b) = args.scan_box {
        params.scan_box = b;
    }
    if args.all {
        let mut text = String::new();
        let mut ok = true;
        let mut first_counterexample = None;
        for target in reproduce::TARGETS {
            let report = reproduce::run(target, &params)?;
            text.push_str(&report.line());
            text.push('\n');
            if !report.pass {
                ok = false;
                first_counterexample.get_or_insert_with(|| json!({ "target": report.target, "counterexample": report.counterexample }));
            }
        }
        let passed = reproduce::TARGETS.len() - text.lines().filter(|l| l.starts_with("FAIL")).count();
        text.push_str(&format!("{passed}/{} targets passed\n", reproduce::TARGETS.len()));
        if let Some(c) = first_counterexample {
            text.push_str(&format!("{}\n", serde_json::to_string(&c).expect("value serializes")));
        }
        return Ok(Output { text, ok });
    }
    let Some(name) = args.target else {
        return Err(Failure::input("usage", "name a target, or pass --list or --all"));
    };
    let target = reproduce::find(&name).ok_or_else(|| Failure::input("usage", format!("unknown target {name:?}")))?;
    let report = reproduce::run(target, &params)?;
    Ok(Output { ok: report.pass, ..Output::json(&report) })
}

fn selftest() -> Result<Output, Failure> {
    let mut text = String::new();
    let mut ok = true;
    for outcome in reproduce::selftest() {
        let report = outcome?;
        ok &= report.pass;
        text.push_str(&report.line());
        text.push('\n');
    }
    Ok(Output { text, ok })
}
