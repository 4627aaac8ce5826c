use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use bellkit::bell::{prep_circuit, twist_decomposition};
use bellkit::pauli::BitString;
use bellkit::random::{haar_unitary, random_state, rng};
use bellkit::suites::{run_suite, SuiteParams, DEFAULT_SEED, SUITES};
use bellkit::teleport::{Protocol, ProtocolRun, FIDELITY_TOL, UNIFORMITY_SIGMAS};
use bellkit::verify::BasisGroup;
use bellkit::Tolerance;

#[derive(Parser)]
#[command(name = "bellkit", version, about = "Numerical checks for generalized Bell states and braid teleportation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification suite and emit a JSON report.
    Verify(VerifyArgs),
    /// Simulate the teleportation protocol and summarize the outcomes.
    Teleport(TeleportArgs),
    /// Export a Bell-state preparation or twist circuit as OpenQASM 2.0.
    Circuit(CircuitArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// One of: gram, completeness, basis-theorem, observables, twist, concurrence,
    /// teleport-eq, projective-eq, ybe, braid, tl, braid-teleport, trace-constraint
    suite: String,
    /// qubit, qudit or multi
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Gate for the ybe suite (bell-mp, bell-pm, bell-pp, bell-mm, swap, cnot, twisted, twisted-plain)
    #[arg(long)]
    gate: Option<String>,
    /// Teleportation variant for teleport-eq and projective-eq
    #[arg(long)]
    variant: Option<String>,
    /// Random trials for suites that sample
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = Tolerance::DEFAULT_EPS)]
    tol: f64,
    #[arg(long, env = "BELLKIT_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the report here instead of stdout
    #[arg(long)]
    json: Option<PathBuf>,
    /// Record wall-clock time in the report
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct TeleportArgs {
    /// qudit or nqubit
    #[arg(long, default_value = "qudit")]
    variant: String,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, env = "BELLKIT_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct CircuitArgs {
    #[arg(long, conflicts_with = "twist")]
    n: Option<usize>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    /// Export only the twist decomposition on 2N wires
    #[arg(long)]
    twist: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure(u8, String);

impl From<bellkit::Error> for Failure {
    fn from(e: bellkit::Error) -> Self {
        Failure(2, e.to_string())
    }
}

fn emit(text: &str, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure(2, format!("cannot write {}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn verify(args: VerifyArgs) -> Result<bool, Failure> {
    if !SUITES.contains(&args.suite.as_str()) {
        return Err(Failure(2, format!("unknown suite `{}`; expected one of {}", args.suite, SUITES.join(", "))));
    }
    let params = SuiteParams {
        family: args.family,
        d: args.d,
        n: args.n,
        gate: args.gate,
        variant: args.variant,
        trials: args.trials,
        seed: args.seed,
        tol: args.tol,
    };
    let start = Instant::now();
    let mut report = run_suite(&args.suite, &params)?;
    if args.timing {
        report.wall_ms = Some(start.elapsed().as_millis() as u64);
    }
    emit(&report.to_json(), args.json.as_deref())?;
    let passed = report.passed();
    if args.json.is_some() {
        let failed = report.failures().count();
        println!("{}: {} cases, {} failed", report.suite, report.cases.len(), failed);
    }
    for case in report.failures() {
        eprintln!("FAIL {} residual={:e} bound={:e}", case.id, case.residual, case.bound);
    }
    Ok(passed)
}

#[derive(Serialize)]
struct TeleportSummary {
    schema: &'static str,
    group: String,
    dim: usize,
    resource: String,
    deterministic_min_fidelity: f64,
    run: ProtocolRun,
    pass: bool,
}

fn teleport(args: TeleportArgs) -> Result<bool, Failure> {
    let group = match args.variant.as_str() {
        "qudit" => BasisGroup::Qudit(args.d.unwrap_or(2)),
        "nqubit" => BasisGroup::Qubits(args.n.unwrap_or(2)),
        other => return Err(Failure(2, format!("unknown protocol variant `{other}` (qudit, nqubit)"))),
    };
    let dim = group.local_dim();
    if !(2..=16).contains(&dim) {
        return Err(Failure(2, format!("local dimension {dim} out of range 2..=16")));
    }
    let mut g = rng(args.seed);
    let psi = random_state(dim, &mut g);
    let m = haar_unitary(dim, &mut g);
    let protocol = Protocol::new(&psi, group, &m)?;
    let run = protocol.run(args.samples, args.seed);
    let deterministic = protocol.min_fidelity();
    let pass = 1.0 - deterministic < FIDELITY_TOL
        && (args.samples == 0 || (1.0 - run.min_fidelity < FIDELITY_TOL && run.max_z < UNIFORMITY_SIGMAS));
    let summary = TeleportSummary {
        schema: "bellkit-teleport/1",
        group: group.name(),
        dim,
        resource: protocol.resource.clone(),
        deterministic_min_fidelity: deterministic,
        run,
        pass,
    };
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    emit(&text, args.json.as_deref())?;
    Ok(pass)
}

fn circuit(args: CircuitArgs) -> Result<bool, Failure> {
    let c = if let Some(n) = args.twist {
        twist_decomposition(n)?
    } else {
        let n = args.n.ok_or_else(|| Failure(2, "either --n or --twist is required".into()))?;
        let parse = |s: Option<String>| -> Result<BitString, Failure> {
            match s {
                Some(s) => s.parse().map_err(Failure::from),
                None => Ok(BitString::zeros(n)),
            }
        };
        let (alpha, beta) = (parse(args.alpha)?, parse(args.beta)?);
        prep_circuit(n, &alpha, &beta)?
    };
    let text = c.to_qasm();
    match args.out {
        Some(p) => fs::write(&p, &text).map_err(|e| Failure(2, format!("cannot write {}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Teleport(a) => teleport(a),
        Command::Circuit(a) => circuit(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
