use clap::{Args, Parser, Subcommand};
use gwa_rep::suite;
use gwa_rep::wmodule::DescriptorSpec;
use gwa_rep_cli::job::{Backend, PresentationSource, PresetSpec};
use gwa_rep_cli::sweep::{parse_axis, run_sweep};
use gwa_rep_cli::{run, CliError, CommandKind, JobSpec, Outcome, OutputFormat};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "gwa-rep", version, about = "Weight modules over generalized Weyl algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate the orbit of a point.
    Orbit(JobArgs),
    /// Build a module from a descriptor.
    Build(JobArgs),
    /// Validate a descriptor and check the algebra relations.
    Check(JobArgs),
    /// Brute-force dual, predicted dual descriptor, and their comparison.
    Dual(JobArgs),
    /// Search for an isomorphism to the dual or to `--other`.
    Iso(JobArgs),
    /// Decide pseudo-unitarizability.
    DecidePu(JobArgs),
    /// Gram matrix of an admissible form.
    Gram(JobArgs),
    /// Signature of the (symmetrized) form.
    Signature(JobArgs),
    /// Weight diagram as JSON arrows, DOT or ASCII.
    Diagram(JobArgs),
    /// Run the reproduction suite and print a pass/fail table.
    PaperCheck(PaperArgs),
    /// Run one command over a grid of parameter values.
    Sweep(SweepArgs),
}

#[derive(Args, Clone, Default)]
struct JobArgs {
    /// Job file (TOML, or JSON by extension); flags override its fields.
    #[arg(long)]
    job: Option<PathBuf>,
    /// Built-in presentation: cuts, usl2, uqsl2, kleinian, field.
    #[arg(long)]
    preset: Option<String>,
    /// Presentation file (TOML or JSON).
    #[arg(long, conflicts_with = "preset")]
    presentation: Option<PathBuf>,
    /// Preset t (kleinian: polynomial in H; field: a constant).
    #[arg(long)]
    t: Option<String>,
    /// Preset q (uqsl2).
    #[arg(long)]
    q: Option<String>,
    /// Field preset twist exponent (ζ ↦ ζ^tau; -1 is conjugation).
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<i64>,
    /// Orbit base point, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    seed: Option<String>,
    #[arg(long)]
    max_steps: Option<usize>,
    /// Cyclotomic conductor; inferred from the literals when omitted.
    #[arg(long)]
    conductor: Option<u32>,
    /// Use the complex-float backend (tolerance from GWA_REP_PRECISION).
    #[arg(long)]
    approx: bool,
    /// Named parameter, `name=expr`; repeatable.
    #[arg(long = "param", value_name = "NAME=EXPR", allow_hyphen_values = true)]
    params: Vec<String>,
    #[arg(long, allow_hyphen_values = true)]
    a1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Descriptor family: omega, supp, f, iw, wf.
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    word: Option<String>,
    /// Polynomial in x.
    #[arg(long, allow_hyphen_values = true)]
    f: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lo: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    hi: Option<i64>,
    /// Supportive X-break set, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    ix: Vec<i64>,
    /// First-kind break index.
    #[arg(long)]
    index: Option<usize>,
    /// Second descriptor for `iso`, as JSON.
    #[arg(long)]
    other: Option<String>,
    /// Finite window `lo,hi` for infinite-support modules.
    #[arg(long, value_name = "LO,HI", allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Refuse orbits only seen to be acyclic up to the step bound.
    #[arg(long)]
    strict: bool,
    /// Build even when f is not indecomposable.
    #[arg(long)]
    relaxed: bool,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Human-readable tables instead of JSON.
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct PaperArgs {
    /// Run a single criterion.
    #[arg(long)]
    only: Option<u8>,
    /// Emit JSON instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Command to run at each grid point.
    #[arg(long, value_enum)]
    command: CommandKind,
    /// `name=a..b:n` or `name=v1,v2,...`; repeatable.
    #[arg(long = "sweep", required = true, allow_hyphen_values = true)]
    axes: Vec<String>,
    #[command(flatten)]
    job: JobArgs,
}

fn descriptor(a: &JobArgs) -> Result<Option<DescriptorSpec>, CliError> {
    let need = |v: &Option<String>, flag: &str| v.clone().ok_or_else(|| CliError::Spec(format!("--kind needs --{flag}")));
    let Some(kind) = &a.kind else { return Ok(None) };
    let word = |w: &Option<String>| -> Result<gwa_rep::words::Word, CliError> {
        w.as_deref().unwrap_or("").parse().map_err(|e| CliError::Spec(format!("--word: {e}")))
    };
    Ok(Some(match kind.as_str() {
        "omega" => DescriptorSpec::Omega,
        "supp" => DescriptorSpec::Supp { lo: a.lo, hi: a.hi, ix: a.ix.clone() },
        "f" => DescriptorSpec::F { f: need(&a.f, "f")? },
        "iw" => DescriptorSpec::Iw { index: a.index.unwrap_or(0), word: word(&a.word)? },
        "wf" => DescriptorSpec::Wf { word: word(&Some(need(&a.word, "word")?))?, f: need(&a.f, "f")? },
        other => return Err(CliError::Spec(format!("unknown descriptor kind `{other}`"))),
    }))
}

fn job_spec(a: &JobArgs, command: CommandKind) -> Result<JobSpec, CliError> {
    let mut job = match &a.job {
        Some(p) => JobSpec::load(p)?,
        None => JobSpec::default(),
    };
    job.command = command;
    if let Some(name) = &a.preset {
        job.presentation = PresentationSource::Preset(PresetSpec { name: name.clone(), t: a.t.clone(), q: a.q.clone(), tau: a.tau });
    } else if let Some(p) = &a.presentation {
        job.presentation = PresentationSource::File(p.clone());
    } else if let PresentationSource::Preset(p) = &mut job.presentation {
        p.t = a.t.clone().or(p.t.take());
        p.q = a.q.clone().or(p.q.take());
        p.tau = a.tau.or(p.tau);
    }
    for (k, v) in [("a1", &a.a1), ("a2", &a.a2), ("a", &a.a), ("mu", &a.mu), ("alpha", &a.alpha)] {
        if let Some(v) = v {
            job.params.insert(k.into(), v.clone());
        }
    }
    for p in &a.params {
        let (k, v) = p.split_once('=').ok_or_else(|| CliError::Spec(format!("--param `{p}`: expected name=expr")))?;
        job.params.insert(k.trim().into(), v.trim().into());
    }
    job.seed = a.seed.clone().or(job.seed);
    job.max_steps = a.max_steps.or(job.max_steps);
    job.conductor = a.conductor.or(job.conductor);
    if a.approx {
        job.backend = Backend::Approx;
    }
    if let Some(d) = descriptor(a)? {
        job.descriptor = Some(d);
    }
    if let Some(o) = &a.other {
        job.other = Some(serde_json::from_str(o).map_err(|e| CliError::Spec(format!("--other: {e}")))?);
    }
    if let Some(w) = &a.window {
        let bad = || CliError::Spec(format!("--window `{w}`: expected lo,hi"));
        let (lo, hi) = w.split_once(',').ok_or_else(bad)?;
        job.window = Some([lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?]);
    }
    job.lambda = a.lambda.clone().or(job.lambda);
    job.strict |= a.strict;
    job.relaxed |= a.relaxed;
    if let Some(f) = a.format {
        job.format = f;
    }
    if a.pretty {
        job.format = OutputFormat::Pretty;
    }
    Ok(job)
}

fn emit(o: &Outcome, format: OutputFormat) -> ExitCode {
    use std::io::Write;
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = writeln!(std::io::stdout().lock(), "{}", o.render(format).trim_end());
    ExitCode::from(o.code as u8)
}

fn paper_check(a: &PaperArgs) -> ExitCode {
    let results = match a.only {
        Some(id) => match suite::run_criterion(id) {
            Some(r) => vec![r],
            None => return emit(&Outcome::from_error(&CliError::Spec(format!("no criterion {id}"))), OutputFormat::Json),
        },
        None => suite::run_all(),
    };
    let failed = results.iter().any(|r| !r.passed);
    if a.json {
        println!("{}", serde_json::to_string_pretty(&results).expect("results serialize"));
    } else {
        println!("{:<3} {:<4} {:<40} {:>9} {:>9}  detail", "id", "", "criterion", "ms", "budget");
        for r in &results {
            let budget = r.budget_ms.map_or("-".to_string(), |b| b.to_string());
            let status = if r.passed { "PASS" } else { "FAIL" };
            println!("{:<3} {status:<4} {:<40} {:>9} {budget:>9}  {}", r.id, r.name, r.elapsed_ms, r.detail);
        }
        println!("{} of {} passed", results.iter().filter(|r| r.passed).count(), results.len());
    }
    ExitCode::from(u8::from(failed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, command) = match &cli.cmd {
        Cmd::Orbit(a) => (a, CommandKind::Orbit),
        Cmd::Build(a) => (a, CommandKind::Build),
        Cmd::Check(a) => (a, CommandKind::Check),
        Cmd::Dual(a) => (a, CommandKind::Dual),
        Cmd::Iso(a) => (a, CommandKind::Iso),
        Cmd::DecidePu(a) => (a, CommandKind::DecidePu),
        Cmd::Gram(a) => (a, CommandKind::Gram),
        Cmd::Signature(a) => (a, CommandKind::Signature),
        Cmd::Diagram(a) => (a, CommandKind::Diagram),
        Cmd::PaperCheck(p) => return paper_check(p),
        Cmd::Sweep(s) => {
            let job = match job_spec(&s.job, s.command) {
                Ok(j) => j,
                Err(e) => return emit(&Outcome::from_error(&e), OutputFormat::Json),
            };
            let axes = match s.axes.iter().map(|a| parse_axis(a)).collect::<Result<Vec<_>, _>>() {
                Ok(a) => a,
                Err(e) => return emit(&Outcome::from_error(&e), OutputFormat::Json),
            };
            let fmt = if job.format == OutputFormat::Pretty { OutputFormat::Pretty } else { OutputFormat::Json };
            return emit(&run_sweep(&job, &axes), fmt);
        }
    };
    match job_spec(args, command) {
        Ok(job) => emit(&run(&job), job.format),
        Err(e) => emit(&Outcome::from_error(&e), OutputFormat::Json),
    }
}
