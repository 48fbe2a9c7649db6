//! `waring`: batch front end for the power-sum engine and its oracles.
//!
//! Exit codes: 0 success, 1 parse or validation error, 2 computation error
//! (including a root oracle that could not run during `verify`),
//! 3 verification mismatch.
//!
//! `--gamma g1,...,gn` selects `sigma_{gamma+I}`, the sum over roots of
//! `prod_j w_j^(g_j + 1)`. So `--gamma 0,0` is the sum of `w_1 w_2`.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use waring_core::oracle::{verify_power_sum, VerifyOptions};
use waring_core::transcend::{example2_reference, truncated_sigma, Example2Family, SeriesJob, Shells};
use waring_core::{
    newton_coefficients, power_sum, AnySystem, Error, Exact, Float, Mode, MultiIndex, PowerSumRequest, Scalar,
    SystemDocument, TransformedDocument, TsikhSystem,
};

#[derive(Parser, Debug)]
#[command(name = "waring", version, about = "Power sums of roots of Tsikh-class systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = ReportFormat::Text, global = true)]
    report: ReportFormat,

    /// Include wall-clock timings (makes output nondeterministic).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ShellArg {
    Rectangle,
    Triangle,
}

#[derive(clap::Args, Debug)]
struct SystemArgs {
    /// System document (JSON).
    #[arg(long)]
    system: PathBuf,

    /// Override the document's arithmetic mode.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,

    /// Parameter value `t`, as `p/q`, a decimal, or `re,im`; defaults to the document's.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the hypotheses of a system document.
    Validate {
        #[command(flatten)]
        sys: SystemArgs,
    },
    /// Print the reciprocal-transformed system and its lattice roots.
    Transform {
        #[command(flatten)]
        sys: SystemArgs,
    },
    /// Compute sigma_{gamma+I} with the residue formula.
    PowerSum {
        #[command(flatten)]
        sys: SystemArgs,
        /// Comma-separated gamma; the sum is over w^(gamma+1).
        #[arg(long)]
        gamma: String,
        /// Report every (K, J) term.
        #[arg(long)]
        breakdown: bool,
    },
    /// Compare the engine against the root, quadrature and series oracles.
    Verify {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        gamma: String,
        /// Also compare against the z-side series truncated at |alpha| <= N.
        #[arg(long)]
        trunc_alpha: Option<u32>,
        #[arg(long, default_value_t = 128)]
        quadrature_nodes: usize,
    },
    /// Coefficients b_1..b_N of 1 + b_1 w + ... from the power sums s_i = sigma_(i,...,i).
    Resultant {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        order: usize,
    },
    /// Sum a system given as an infinite product of factors shell by shell.
    SeriesSum {
        #[arg(long, default_value = "example2")]
        family: String,
        /// Family parameters a2,a3,b1,b2,b3.
        #[arg(long, allow_hyphen_values = true)]
        params: String,
        /// Largest factor index per variable.
        #[arg(long)]
        smax: u32,
        #[arg(long, default_value = "0,0")]
        gamma: String,
        #[arg(long, value_enum, default_value_t = ShellArg::Rectangle)]
        shells: ShellArg,
        /// Terms of the outer sum in the closed-form reference.
        #[arg(long, default_value_t = 100_000)]
        reference_terms: u64,
    },
}

enum Failure {
    /// Unreadable input or a system that violates the hypotheses.
    Input(String, Option<Value>),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::InvalidSystem(_) | Error::DimensionMismatch { .. } | Error::Hypothesis(_) => {
                Failure::Input(e.to_string(), None)
            }
            _ => Failure::Compute(e.to_string()),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok,
    /// The root oracle could not run, so nothing was verified.
    Unverified,
    Mismatch,
}

struct Outcome {
    report: Value,
    status: Status,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { report, status: Status::Ok }
    }
}

fn parse_gamma(s: &str, n: usize) -> Result<MultiIndex, Failure> {
    let parts: Result<Vec<u32>, _> = s.split(',').map(|p| p.trim().parse::<u32>()).collect();
    let g = parts.map_err(|_| Failure::Input(format!("bad --gamma `{s}`"), None))?;
    if g.len() != n {
        return Err(Failure::Input(format!("--gamma has {} entries, the system has {n} variables", g.len()), None));
    }
    Ok(MultiIndex::new(g))
}

fn parse_t<F: Scalar>(s: &str) -> Result<F, Failure> {
    let r = match s.split_once(',') {
        Some((re, im)) => F::parse_parts(re, im),
        None => F::parse_parts(s, "0"),
    };
    r.map_err(|e| Failure::Input(format!("bad --t `{s}`: {e}"), None))
}

fn load(args: &SystemArgs) -> Result<AnySystem, Failure> {
    let text = std::fs::read_to_string(&args.system)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", args.system.display()), None))?;
    let doc = SystemDocument::from_json(&text)?;
    let mode = match args.mode {
        Some(ModeArg::Exact) => Mode::Exact,
        Some(ModeArg::Float) => Mode::Float,
        None => doc.mode,
    };
    Ok(match mode {
        Mode::Exact => AnySystem::Exact(doc.build()?),
        Mode::Float => AnySystem::Float(doc.build()?),
    })
}

fn request_echo<F: Scalar>(sys: &TsikhSystem<F>, t: &F) -> Value {
    json!({ "mode": F::MODE.to_string(), "n": sys.n(), "t": report::scalar(t) })
}

fn resolved_t<F: Scalar>(sys: &TsikhSystem<F>, args: &SystemArgs) -> Result<F, Failure> {
    match &args.t {
        Some(s) => parse_t(s),
        None => Ok(sys.t().clone()),
    }
}

fn validate<F: Scalar>(sys: &TsikhSystem<F>) -> Result<Outcome, Failure> {
    let v = sys.validate();
    let report = json!({
        "valid": v.is_valid(),
        "violations": v.violations.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
    });
    if v.is_valid() {
        Ok(Outcome::ok(report))
    } else {
        Err(Failure::Input(format!("invalid system: {v}"), Some(report)))
    }
}

fn transform<F: Scalar>(sys: &TsikhSystem<F>, args: &SystemArgs) -> Result<Outcome, Failure> {
    let t = resolved_t(sys, args)?;
    let ts = sys.with_t(t).transform()?;
    let doc = serde_json::to_value(TransformedDocument::from_transformed(&ts)).expect("documents serialize");
    let roots: Vec<Value> = ts
        .lattice_roots()
        .iter()
        .map(|r| {
            json!({
                "J": r.perm.images().iter().map(|j| j + 1).collect::<Vec<_>>(),
                "sign": r.sign,
                "multiplicity": r.multiplicity,
                "point": r.point.iter().map(report::scalar).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(Outcome::ok(json!({ "transformed": doc, "lattice_roots": roots })))
}

fn power_sum_cmd<F: Scalar>(sys: &TsikhSystem<F>, args: &SystemArgs, gamma: &str, breakdown: bool) -> Result<Outcome, Failure> {
    let gamma = parse_gamma(gamma, sys.n())?;
    let t = resolved_t(sys, args)?;
    let mut req = PowerSumRequest::new(gamma.clone(), t.clone());
    if breakdown {
        req = req.with_breakdown();
    }
    let r = power_sum(sys, &req)?;
    let mut request = request_echo(sys, &t);
    request["gamma"] = report::index(&gamma);
    Ok(Outcome::ok(json!({ "request": request, "result": report::power_sum(&r) })))
}

fn verify_cmd<F: Scalar>(
    sys: &TsikhSystem<F>,
    args: &SystemArgs,
    gamma: &str,
    trunc_alpha: Option<u32>,
    nodes: usize,
) -> Result<Outcome, Failure> {
    let gamma = parse_gamma(gamma, sys.n())?;
    let t = resolved_t(sys, args)?;
    let opts = VerifyOptions {
        quadrature_nodes: nodes,
        trunc_alpha,
        ..VerifyOptions::default()
    };
    let r = verify_power_sum(sys, &gamma, &t, &opts)?;
    let mut request = request_echo(sys, &t);
    request["gamma"] = report::index(&gamma);
    let roots_ran = r.checks.iter().any(|c| c.name == "roots" && c.deviation.is_some());
    let status = if !roots_ran {
        Status::Unverified
    } else if r.passed() {
        Status::Ok
    } else {
        Status::Mismatch
    };
    Ok(Outcome {
        status,
        report: json!({ "request": request, "verification": report::verification(&r) }),
    })
}

fn resultant<F: Scalar>(sys: &TsikhSystem<F>, args: &SystemArgs, order: usize) -> Result<Outcome, Failure> {
    if order == 0 {
        return Err(Failure::Input("--order must be positive".into(), None));
    }
    let t = resolved_t(sys, args)?;
    let n = sys.n();
    let mut sums = Vec::with_capacity(order);
    for i in 1..=order as u32 {
        let gamma = MultiIndex::new(std::iter::repeat(i - 1).take(n));
        sums.push(power_sum(sys, &PowerSumRequest::new(gamma, t.clone()))?.value);
    }
    let b = newton_coefficients(&sums, order)?;
    let mut request = request_echo(sys, &t);
    request["order"] = json!(order);
    Ok(Outcome::ok(json!({
        "request": request,
        "power_sums": sums.iter().map(report::scalar).collect::<Vec<_>>(),
        "coefficients": b.iter().map(report::scalar).collect::<Vec<_>>(),
    })))
}

fn tail(t: &waring_core::transcend::TailEstimate) -> Value {
    json!({
        "last_shell": report::float(t.last_shell),
        "decay_exponent": t.decay_exponent.map(report::float),
        "bound": report::float(t.bound),
    })
}

fn series_sum(family: &str, params: &str, smax: u32, gamma: &str, shells: ShellArg, terms: u64) -> Result<Outcome, Failure> {
    if family != "example2" {
        return Err(Failure::Input(format!("unknown family `{family}`; known: example2"), None));
    }
    let p: Result<Vec<f64>, _> = params.split(',').map(|x| waring_core::scalar::parse_f64(x)).collect();
    let p = p?;
    let [a2, a3, b1, b2, b3] = p[..] else {
        return Err(Failure::Input(format!("--params needs a2,a3,b1,b2,b3, got {} values", p.len()), None));
    };
    if smax == 0 {
        return Err(Failure::Input("--smax must be positive".into(), None));
    }
    let fam = Example2Family { a2, a3, b1, b2, b3 };
    let job = SeriesJob {
        gamma: parse_gamma(gamma, 2)?,
        s_max: vec![smax, smax],
        shells: match shells {
            ShellArg::Rectangle => Shells::Rectangle,
            ShellArg::Triangle => Shells::Triangle,
        },
    };
    let r = truncated_sigma(&fam, &job)?;
    let mut out = json!({
        "request": {
            "family": family,
            "params": p.iter().map(|&x| report::float(x)).collect::<Vec<_>>(),
            "smax": smax,
            "gamma": report::index(&job.gamma),
            "shells": format!("{shells:?}").to_lowercase(),
        },
        "result": {
            "sigma": report::complex(r.value),
            "lattice": report::complex(r.lattice_value),
            "perturbation": report::complex(r.perturbation_value),
            "subsystems": r.subsystems,
            "tail": tail(&r.tail),
            "lattice_tail": tail(&r.lattice_tail),
        },
    });
    if job.gamma.as_slice() == [0, 0] {
        out["reference"] = match example2_reference(a2, a3, b1, b2, terms) {
            Ok(x) => json!({
                "lattice": report::float(x.lattice),
                "k4_closed": report::float(x.k4_closed),
                "k4_direct": report::float(x.k4_direct),
                "coth": report::float(x.coth),
                "sinh": report::float(x.sinh),
                "total": report::float(x.total),
                "tail_bound": report::float(x.tail_bound),
                "terms": x.terms,
            }),
            Err(e) => json!({ "unavailable": e.to_string() }),
        };
    }
    Ok(Outcome::ok(out))
}

fn with_system<R>(
    args: &SystemArgs,
    exact: impl FnOnce(&TsikhSystem<Exact>) -> Result<R, Failure>,
    float: impl FnOnce(&TsikhSystem<Float>) -> Result<R, Failure>,
) -> Result<R, Failure> {
    match load(args)? {
        AnySystem::Exact(s) => exact(&s),
        AnySystem::Float(s) => float(&s),
    }
}

fn dispatch(cmd: &Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Validate { sys } => with_system(sys, validate, validate),
        Command::Transform { sys } => with_system(sys, |s| transform(s, sys), |s| transform(s, sys)),
        Command::PowerSum { sys, gamma, breakdown } => with_system(
            sys,
            |s| power_sum_cmd(s, sys, gamma, *breakdown),
            |s| power_sum_cmd(s, sys, gamma, *breakdown),
        ),
        Command::Verify {
            sys,
            gamma,
            trunc_alpha,
            quadrature_nodes,
        } => with_system(
            sys,
            |s| verify_cmd(s, sys, gamma, *trunc_alpha, *quadrature_nodes),
            |s| verify_cmd(s, sys, gamma, *trunc_alpha, *quadrature_nodes),
        ),
        Command::Resultant { sys, order } => with_system(sys, |s| resultant(s, sys, *order), |s| resultant(s, sys, *order)),
        Command::SeriesSum {
            family,
            params,
            smax,
            gamma,
            shells,
            reference_terms,
        } => series_sum(family, params, *smax, gamma, *shells, *reference_terms),
    }
}

fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Validate { .. } => "validate",
        Command::Transform { .. } => "transform",
        Command::PowerSum { .. } => "power-sum",
        Command::Verify { .. } => "verify",
        Command::Resultant { .. } => "resultant",
        Command::SeriesSum { .. } => "series-sum",
    }
}

fn emit(format: ReportFormat, report: &Value) {
    match format {
        ReportFormat::Json => println!("{}", serde_json::to_string_pretty(report).expect("reports serialize")),
        ReportFormat::Text => print!("{}", report::text(report)),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let command = name(&cli.command);
    let start = Instant::now();
    let outcome = dispatch(&cli.command);
    let elapsed = start.elapsed();
    log::info!("{command} finished in {:.3}s", elapsed.as_secs_f64());

    let (mut report, code, status) = match outcome {
        Ok(o) => match o.status {
            Status::Ok => (o.report, 0, "ok"),
            Status::Unverified => (o.report, 2, "unverified"),
            Status::Mismatch => (o.report, 3, "mismatch"),
        },
        Err(Failure::Input(msg, extra)) => {
            eprintln!("error: {msg}");
            (extra.unwrap_or_else(|| json!({ "error": msg })), 1, "invalid")
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            (json!({ "error": msg }), 2, "failed")
        }
    };
    report["command"] = json!(command);
    report["status"] = json!(status);
    if cli.timing {
        report["timing"] = json!({ "seconds": elapsed.as_secs_f64() });
    }
    emit(cli.report, &report);
    ExitCode::from(code)
}
