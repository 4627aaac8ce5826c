//! One line per acceptance criterion, written straight to stdout so it shows up
//! in captured test runs too.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use bellkit::bell::{concurrence_suite, twist_check};
use bellkit::braid::{specialization_check, table_mismatches, BellTransformParams, Specialization};
use bellkit::suites::{run_suite, SuiteParams, SUITES};
use bellkit::teleport::{protocol_suite, teleport_eq_suite, Variant};
use bellkit::verify::{
    basis_theorem_suite, completeness_check, gram_check, multiqubit_observable_suite, qudit_observable_suite,
    trace_constraint_solve, BasisFamily, BasisGroup, NONUNITARY_GRAM_FLOOR,
};
use bellkit::{Report, Tolerance};

const TOL: f64 = 1e-12;
const CONCURRENCE_TOL: f64 = 1e-10;
const FIDELITY_TOL: f64 = 1e-10;
const CONTROL_FLOOR: f64 = 1e-6;
const CNOT_FLOOR: f64 = 0.5;
const BELL_BUDGET: Duration = Duration::from_secs(10);
const SEED: u64 = 7;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn tol() -> Tolerance {
    Tolerance::new(TOL).unwrap()
}

fn require(report: &Report, what: &str) -> Result<f64, String> {
    match report.failures().next() {
        None => Ok(report.max_residual()),
        Some(c) => Err(format!("{what}: case {} residual {:e} vs {:e}", c.id, c.residual, c.bound)),
    }
}

fn case(report: &Report, id: &str) -> Result<f64, String> {
    report.case(id).map(|c| c.residual).ok_or_else(|| format!("missing case {id} in {}", report.suite))
}

fn bell_bases() -> Outcome {
    let start = Instant::now();
    let mut families = vec![("qubit".to_string(), BasisFamily::qubit_bell().unwrap())];
    for d in 2..=5 {
        families.push((format!("d={d}"), BasisFamily::qudit_bell(d).unwrap()));
    }
    for n in 1..=3 {
        families.push((format!("n={n}"), BasisFamily::multi_bell(n).unwrap()));
    }
    let mut worst = 0.0f64;
    for (name, fam) in &families {
        worst = worst.max(require(&gram_check(fam, tol()), &format!("gram {name}"))?);
        worst = worst.max(require(&completeness_check(fam, tol()), &format!("completeness {name}"))?);
    }
    let elapsed = start.elapsed();
    if elapsed >= BELL_BUDGET {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("{} families, max residual {worst:.1e}, {} ms", families.len(), elapsed.as_millis()))
}

fn basis_theorem() -> Outcome {
    let groups = [BasisGroup::Qudit(2), BasisGroup::Qudit(3), BasisGroup::Qudit(4), BasisGroup::Qubits(2)];
    let mut least = f64::INFINITY;
    for g in groups {
        let r = basis_theorem_suite(g, 100, SEED, tol()).unwrap();
        require(&r, &g.name())?;
        for side in ["left", "right"] {
            least = least.min(case(&r, &format!("{side}/nonunitary-gram"))?);
            case(&r, &format!("{side}/unitary-gram"))?;
        }
    }
    Ok(format!("4 groups x 2 sides x 100+100 trials, smallest non-unitary Gram gap {least:.3} > {NONUNITARY_GRAM_FLOOR}"))
}

fn twist() -> Outcome {
    for n in 1..=4 {
        let r = twist_check(n, tol()).unwrap();
        require(&r, &format!("n={n}"))?;
        if case(&r, "decomposition")? != 0.0 || case(&r, "swap-count")? != 0.0 {
            return Err(format!("n={n} not exact"));
        }
        if n == 2 && case(&r, "middle-swap")? != 0.0 {
            return Err("tau_4 differs from 1 x SWAP x 1".into());
        }
    }
    Ok("n = 1..4 exact, SWAP counts n(n-1)/2, tau_4 = 1 x SWAP x 1".into())
}

fn observables() -> Outcome {
    let mut worst = 0.0f64;
    for d in 2..=5 {
        let r = qudit_observable_suite(d, 10, SEED, tol()).unwrap();
        worst = worst.max(require(&r, &format!("d={d}"))?);
        if d == 2 {
            case(&r, "OX-(1)/zero")?;
            case(&r, "OZ-(1)/zero")?;
        }
    }
    for n in 1..=3 {
        worst = worst.max(require(&multiqubit_observable_suite(n, tol()).unwrap(), &format!("n={n}"))?);
    }
    Ok(format!("d = 2..5 with 10 conjugations, n = 1..3, max residual {worst:.1e}"))
}

fn trace_constraint() -> Outcome {
    for n in 1..=3 {
        let r = trace_constraint_solve(n, tol()).unwrap();
        require(&r, &format!("n={n}"))?;
        if n == 1 {
            case(&r, "appendix-rows")?;
        }
    }
    Ok("unique solution = identity for n = 1..3, scalar rows reproduced at n = 1".into())
}

fn concurrence() -> Outcome {
    let r = concurrence_suite(2, 100, SEED, tol()).unwrap();
    let agree = case(&r, "oracle-agreement")?;
    require(&r, "n=2")?;
    for n in [1, 3, 4] {
        let r = concurrence_suite(n, 0, SEED, tol()).unwrap();
        require(&r, &format!("n={n}"))?;
    }
    let bound_ok = r.cases.iter().all(|c| c.bound <= CONCURRENCE_TOL);
    if !bound_ok {
        return Err("concurrence bound looser than pinned".into());
    }
    Ok(format!("oracle agreement {agree:.1e} on 100 states, Bell/product/GHZ values for n = 1..4"))
}

fn teleportation() -> Outcome {
    let mut runs = vec![(Variant::Basic2, 2)];
    for d in [2, 3, 5] {
        runs.push((Variant::Qudit11, d));
        runs.push((Variant::Qudit22, d));
    }
    runs.extend([
        (Variant::Qudit11p, 3),
        (Variant::Qudit22p, 3),
        (Variant::NQubit11, 2),
        (Variant::NQubit22, 2),
        (Variant::ProjectiveQudit, 2),
        (Variant::ProjectiveQudit, 3),
        (Variant::ProjectiveNQubit, 2),
    ]);
    let mut worst = 0.0f64;
    for (v, local) in &runs {
        let r = teleport_eq_suite(*v, *local, SEED, tol()).unwrap();
        worst = worst.max(require(&r, &format!("{v} local={local}"))?);
    }
    for g in [BasisGroup::Qudit(2), BasisGroup::Qudit(3), BasisGroup::Qubits(2)] {
        let r = protocol_suite(g, 10_000, SEED, tol()).unwrap();
        require(&r, &g.name())?;
        if case(&r, "infidelity-all-outcomes")? >= FIDELITY_TOL {
            return Err("fidelity".into());
        }
    }
    Ok(format!("{} variant runs, max residual {worst:.1e}; protocol fidelity 1 and 5-sigma uniform over 1e4 samples", runs.len()))
}

fn yang_baxter() -> Outcome {
    let r = run_suite("ybe", &SuiteParams { seed: SEED, tol: TOL, ..SuiteParams::default() }).unwrap();
    require(&r, "ybe")?;
    let cnot = case(&r, "cnot-control")?;
    let plain = case(&r, "twisted-plain-control")?;
    if cnot < CNOT_FLOOR || plain <= CONTROL_FLOOR {
        return Err(format!("controls too weak: cnot {cnot}, plain twisted {plain}"));
    }
    for n in 3..=4 {
        let b = run_suite("braid", &SuiteParams { n: Some(n), tol: TOL, ..SuiteParams::default() }).unwrap();
        require(&b, &format!("braid n={n}"))?;
    }
    Ok(format!("four B(e,h) and twisted bar gate solve YBE; CNOT residual {cnot:.2}, plain twisted {plain:.2}"))
}

fn temperley_lieb() -> Outcome {
    let mut worst_control = f64::INFINITY;
    for n in 2..=4 {
        for d in 2..=3 {
            let p = SuiteParams { n: Some(n), d: Some(d), trials: Some(10), seed: SEED, tol: TOL, ..SuiteParams::default() };
            let r = run_suite("tl", &p).unwrap();
            require(&r, &format!("n={n} d={d}"))?;
            if n >= 3 {
                worst_control = worst_control.min(case(&r, "nonunitary-control")?);
            }
        }
    }
    Ok(format!("n = 2..4, d = 2..3, all labels and 10 unitary M; non-unitary control residual >= {worst_control:.3}"))
}

fn braid_teleport() -> Outcome {
    let mismatches: usize = BellTransformParams::ALL.iter().map(|p| table_mismatches(*p)).sum();
    if mismatches != 0 {
        return Err(format!("{mismatches} table mismatches"));
    }
    let r = run_suite("braid-teleport", &SuiteParams { n: Some(2), tol: TOL, ..SuiteParams::default() }).unwrap();
    require(&r, "braid-teleport")?;
    for form in [Specialization::Same, Specialization::Opposite] {
        require(&specialization_check(2, form, tol()).unwrap(), "worked form")?;
    }
    Ok(format!("64 table entries exact, single and n=2 equations max residual {:.1e}", r.max_residual()))
}

fn determinism() -> Outcome {
    for name in SUITES {
        let p = SuiteParams { seed: 99, ..SuiteParams::default() };
        let a = run_suite(name, &p).unwrap().to_json();
        let b = run_suite(name, &p).unwrap().to_json();
        if a != b {
            return Err(format!("{name} differs between runs"));
        }
    }
    let exe = env!("CARGO_BIN_EXE_bellkit");
    for args in [&["verify", "basis-theorem", "--seed", "5"][..], &["teleport", "--d", "3", "--seed", "5"][..]] {
        let a = Command::new(exe).args(args).output().unwrap();
        let b = Command::new(exe).args(args).output().unwrap();
        if a.stdout != b.stdout || a.stdout.is_empty() {
            return Err(format!("cli {args:?} not byte-identical"));
        }
    }
    Ok(format!("{} suites and two CLI commands byte-identical on rerun", SUITES.len()))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 11] = [
        ("bell-basis suites", bell_bases),
        ("basis theorem", basis_theorem),
        ("twist operator", twist),
        ("observables", observables),
        ("trace constraint", trace_constraint),
        ("concurrence", concurrence),
        ("teleportation equations", teleportation),
        ("yang-baxter and braid", yang_baxter),
        ("temperley-lieb", temperley_lieb),
        ("braid teleportation", braid_teleport),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    let mut out = std::io::stdout().lock();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let line = match &outcome {
            Ok(detail) => format!("[acceptance {:>2}] PASS {name}: {detail}", i + 1),
            Err(why) => format!("[acceptance {:>2}] FAIL {name}: {why}", i + 1),
        };
        writeln!(out, "{line}").unwrap();
        if outcome.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
