//! Named verification suites shared by the command line and the C interface.

use serde::{Deserialize, Serialize};

use crate::bell::{concurrence_suite, twist_check};
use crate::braid::{
    bell_action_check, bell_transform, braid_rep_check, braid_teleport_multi_check, braid_teleport_single_check,
    cnot, conjugate_solution, specialization_check, table_mismatches, tl_generators, tl_relation_check,
    twisted_yb_gates, yang_baxter_check, yang_baxter_residual, BellTransformParams, SignString, Specialization,
    TwistKind,
};
use crate::error::{Error, Result};
use crate::linalg::{permutation_matrix, CMatrix, Tolerance, C64};
use crate::pauli::BitString;
use crate::random::{haar_unitary, rng};
use crate::report::Report;
use crate::teleport::{teleport_eq_suite, Variant};
use crate::verify::{
    basis_theorem_suite, completeness_check, gram_check, multiqubit_observable_suite, qudit_observable_suite,
    trace_constraint_solve, BasisFamily, BasisGroup,
};

pub const SUITES: [&str; 13] = [
    "gram",
    "completeness",
    "basis-theorem",
    "observables",
    "twist",
    "concurrence",
    "teleport-eq",
    "projective-eq",
    "ybe",
    "braid",
    "tl",
    "braid-teleport",
    "trace-constraint",
];

pub const DEFAULT_SEED: u64 = 20240917;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteParams {
    pub family: Option<String>,
    pub d: Option<usize>,
    pub n: Option<usize>,
    pub gate: Option<String>,
    pub variant: Option<String>,
    pub trials: Option<usize>,
    pub seed: u64,
    pub tol: f64,
}

impl Default for SuiteParams {
    fn default() -> Self {
        Self {
            family: None,
            d: None,
            n: None,
            gate: None,
            variant: None,
            trials: None,
            seed: DEFAULT_SEED,
            tol: Tolerance::DEFAULT_EPS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Qubit,
    Qudit,
    Multi,
}

impl SuiteParams {
    fn family(&self, default: Family) -> Result<Family> {
        match self.family.as_deref() {
            None => Ok(default),
            Some("qubit") => Ok(Family::Qubit),
            Some("qudit") => Ok(Family::Qudit),
            Some("multi") => Ok(Family::Multi),
            Some(other) => Err(Error::InvalidParam(format!("unknown family `{other}` (qubit, qudit, multi)"))),
        }
    }

    fn d_or(&self, default: usize) -> usize {
        self.d.unwrap_or(default)
    }

    fn n_or(&self, default: usize) -> usize {
        self.n.unwrap_or(default)
    }

    fn group(&self, default: Family) -> Result<BasisGroup> {
        Ok(match self.family(default)? {
            Family::Qubit => BasisGroup::Qudit(2),
            Family::Qudit => BasisGroup::Qudit(self.d_or(3)),
            Family::Multi => BasisGroup::Qubits(self.n_or(2)),
        })
    }
}

/// Runs a registered suite. Unknown names and out-of-range parameters are errors.
pub fn run_suite(name: &str, params: &SuiteParams) -> Result<Report> {
    let tol = Tolerance::new(params.tol)?;
    if tol.abs_eps < Tolerance::FLOOR {
        return Err(Error::InvalidParam(format!("tolerance {:e} is below the floor {:e}", tol.abs_eps, Tolerance::FLOOR)));
    }
    let seed = params.seed;
    let report = match name {
        "gram" | "completeness" => {
            let fam = BasisFamily::from_group(params.group(Family::Qudit)?)?;
            if name == "gram" {
                gram_check(&fam, tol)
            } else {
                completeness_check(&fam, tol)
            }
        }
        "basis-theorem" => basis_theorem_suite(params.group(Family::Qudit)?, params.trials.unwrap_or(100), seed, tol)?,
        "observables" => match params.family(Family::Qudit)? {
            Family::Multi => multiqubit_observable_suite(params.n_or(2), tol)?,
            Family::Qubit => qudit_observable_suite(2, params.trials.unwrap_or(10), seed, tol)?,
            Family::Qudit => qudit_observable_suite(params.d_or(3), params.trials.unwrap_or(10), seed, tol)?,
        },
        "twist" => twist_check(params.n_or(3), tol)?,
        "concurrence" => concurrence_suite(params.n_or(2), params.trials.unwrap_or(100), seed, tol)?,
        "teleport-eq" | "projective-eq" => {
            let default = if name == "teleport-eq" { "qudit11" } else { "projective_qudit" };
            let variant: Variant = params.variant.as_deref().unwrap_or(default).parse()?;
            if variant.is_projective() != (name == "projective-eq") {
                return Err(Error::InvalidParam(format!("variant `{variant}` does not belong to suite `{name}`")));
            }
            let local = if variant.is_nqubit() { params.n_or(2) } else { params.d_or(3) };
            teleport_eq_suite(variant, local, seed, tol)?
        }
        "ybe" => ybe_suite(params.gate.as_deref(), seed, tol)?,
        "braid" => {
            let n = params.n_or(4);
            let mut report = Report::new("braid", tol.abs_eps).with_param("n", n);
            for p in BellTransformParams::ALL {
                report.absorb(&format!("action{p}"), bell_action_check(p, tol)?);
                report.absorb(&format!("relations{p}"), braid_rep_check(n, p, tol)?);
            }
            report
        }
        "tl" => tl_suite(params.n_or(4), params.d_or(2), params.trials.unwrap_or(10), seed, tol)?,
        "braid-teleport" => braid_teleport_suite(params.n_or(2), tol)?,
        "trace-constraint" => trace_constraint_solve(params.n_or(2), tol)?,
        other => {
            return Err(Error::InvalidParam(format!("unknown suite `{other}`; expected one of {}", SUITES.join(", "))))
        }
    };
    Ok(report)
}

fn named_gate(name: &str) -> Result<(CMatrix, usize)> {
    let two_pairs = |p: BellTransformParams| SignString::uniform(2, p);
    let b = |e, h| BellTransformParams { epsilon: e, eta: h };
    Ok(match name {
        "bell-mp" => (bell_transform(b(-1, 1)), 2),
        "bell-pm" => (bell_transform(b(1, -1)), 2),
        "bell-pp" => (bell_transform(b(1, 1)), 2),
        "bell-mm" => (bell_transform(b(-1, -1)), 2),
        "swap" => (permutation_matrix(&[1, 0], 2)?, 2),
        "cnot" => (cnot(), 2),
        "twisted" => (twisted_yb_gates(&two_pairs(b(-1, 1)), TwistKind::Conjugated)?, 4),
        "twisted-plain" => (twisted_yb_gates(&two_pairs(b(-1, 1)), TwistKind::Plain)?, 4),
        other => {
            return Err(Error::UnknownGate(format!(
                "{other} (bell-mp, bell-pm, bell-pp, bell-mm, swap, cnot, twisted, twisted-plain)"
            )))
        }
    })
}

/// With a gate name, checks only that gate. Without, checks the four Bell transforms,
/// SWAP, the conjugated twisted gate and locally rotated solutions, with CNOT and the
/// plain twisted gate as controls that must fail.
fn ybe_suite(gate: Option<&str>, seed: u64, tol: Tolerance) -> Result<Report> {
    if let Some(name) = gate {
        let (r, local) = named_gate(name)?;
        let mut report = yang_baxter_check(&r, local, tol)?;
        report.params.insert("gate".into(), name.into());
        return Ok(report);
    }
    let mut report = Report::new("ybe", tol.abs_eps).with_seed(seed);
    for name in ["bell-mp", "bell-pm", "bell-pp", "bell-mm", "swap", "twisted"] {
        let (r, local) = named_gate(name)?;
        report.check(name, yang_baxter_residual(&r, local)?);
    }
    let (r, _) = named_gate("cnot")?;
    report.check_above("cnot-control", yang_baxter_residual(&r, 2)?, 0.5 - f64::EPSILON);
    let (r, _) = named_gate("twisted-plain")?;
    report.check_above("twisted-plain-control", yang_baxter_residual(&r, 4)?, 1e-6);
    let mut g = rng(seed);
    let mut rotated = 0.0f64;
    for p in BellTransformParams::ALL {
        let v = haar_unitary(2, &mut g);
        rotated = rotated.max(yang_baxter_residual(&conjugate_solution(&bell_transform(p), &v)?, 2)?);
    }
    report.check("local-rotation", rotated);
    Ok(report)
}

/// Every Bell label, `unitaries` random unitary extensions, and a non-unitary
/// `diag(1, 2, ..)` extension that must break a relation once there are two generators.
fn tl_suite(n: usize, d: usize, unitaries: usize, seed: u64, tol: Tolerance) -> Result<Report> {
    let mut report = Report::new("tl", tol.abs_eps)
        .with_param("n", n)
        .with_param("d", d)
        .with_param("unitaries", unitaries)
        .with_seed(seed);
    for a in 0..d {
        for b in 0..d {
            report.absorb(&format!("label({a},{b})"), tl_relation_check(&tl_generators(n, d, (a, b), None)?, tol)?);
        }
    }
    let mut g = rng(seed);
    let mut worst = 0.0f64;
    for t in 0..unitaries {
        let m = haar_unitary(d, &mut g);
        let label = (t % d, (t / d) % d);
        worst = worst.max(tl_relation_check(&tl_generators(n, d, label, Some(&m))?, tol)?.max_residual());
    }
    if unitaries > 0 {
        report.check("unitary-extensions", worst);
    }
    // a single normalized projector is always idempotent
    if n >= 3 {
        let diag: Vec<C64> = (1..=d).map(|k| C64::new(k as f64, 0.0)).collect();
        let control = tl_relation_check(&tl_generators(n, d, (0, 0), Some(&CMatrix::from_diag(&diag)))?, tol)?;
        report.check_above("nonunitary-control", control.max_residual(), 1e-6);
    }
    Ok(report)
}

/// The correction table, the single-qubit equation for every sign assignment and
/// resource, and the `n`-pair equation for all resources in both gate kinds.
fn braid_teleport_suite(n: usize, tol: Tolerance) -> Result<Report> {
    let mut report = Report::new("braid-teleport", tol.abs_eps).with_param("n", n);
    for p in BellTransformParams::ALL {
        report.check_below(format!("table{p}"), table_mismatches(p) as f64, 0.5);
    }
    let mut single = 0.0f64;
    for l in BellTransformParams::ALL {
        for r in BellTransformParams::ALL {
            for km in 0..4u8 {
                single = single.max(braid_teleport_single_check(l, r, km >> 1, km & 1, tol)?.max_residual());
            }
        }
    }
    report.check("single-all-signs", single);
    for form in [Specialization::Same, Specialization::Opposite] {
        let name = match form {
            Specialization::Same => "form-same",
            Specialization::Opposite => "form-opposite",
        };
        report.absorb(name, specialization_check(n, form, tol)?);
    }
    let left = SignString::new(BitString::from_index(1, n), BitString::from_index((1 << n) - 1, n))?;
    let right = SignString::new(BitString::from_index((1 << n) - 2, n), BitString::from_index(1, n))?;
    for kind in [TwistKind::Plain, TwistKind::Conjugated] {
        let mut worst = 0.0f64;
        for a in BitString::all(n) {
            for b in BitString::all(n) {
                worst = worst.max(braid_teleport_multi_check(&left, &right, &a, &b, kind, tol)?.max_residual());
            }
        }
        report.check(format!("all-resources/{kind}"), worst);
    }
    Ok(report)
}
