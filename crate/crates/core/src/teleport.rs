//! Teleportation equations as residual checks on the triple space `C (x) A (x) B`,
//! projective forms, and a sampled protocol run with Born-rule outcomes.
//!
//! Every register has dimension `D` (`d` for qudits, `2^n` for `n` qubits). In the
//! `n`-qubit layout the sender owns wires `0..2n` (input, then the first half of the
//! resource in blocked order) and the receiver owns wires `2n..3n`.

use std::fmt;
use std::str::FromStr;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::Serialize;

use crate::bell::{bell2, twist, vectorize};
use crate::error::{Error, Result};
use crate::linalg::{dagger, mul, residual, tensor, transpose, CMatrix, Tolerance, C64, ZERO};
use crate::pauli::{GenPauliWord, PauliWord};
use crate::random::{gaussian_matrix, haar_unitary, random_state, rng};
use crate::report::Report;
use crate::verify::BasisGroup;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Basic2,
    Qudit11,
    Qudit22,
    Qudit11p,
    Qudit22p,
    NQubit11,
    NQubit22,
    ProjectiveQudit,
    ProjectiveNQubit,
}

impl Variant {
    pub const ALL: [Variant; 9] = [
        Variant::Basic2,
        Variant::Qudit11,
        Variant::Qudit22,
        Variant::Qudit11p,
        Variant::Qudit22p,
        Variant::NQubit11,
        Variant::NQubit22,
        Variant::ProjectiveQudit,
        Variant::ProjectiveNQubit,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Variant::Basic2 => "basic2",
            Variant::Qudit11 => "qudit11",
            Variant::Qudit22 => "qudit22",
            Variant::Qudit11p => "qudit11p",
            Variant::Qudit22p => "qudit22p",
            Variant::NQubit11 => "nqubit11",
            Variant::NQubit22 => "nqubit22",
            Variant::ProjectiveQudit => "projective_qudit",
            Variant::ProjectiveNQubit => "projective_nqubit",
        }
    }

    pub fn is_nqubit(&self) -> bool {
        matches!(self, Variant::NQubit11 | Variant::NQubit22 | Variant::ProjectiveNQubit)
    }

    pub fn is_projective(&self) -> bool {
        matches!(self, Variant::ProjectiveQudit | Variant::ProjectiveNQubit)
    }

    /// Measurement in `|Omega(a)>` with the resource carrying `M` on the receiver side.
    fn is_eleven(&self) -> bool {
        matches!(self, Variant::Basic2 | Variant::Qudit11 | Variant::Qudit11p | Variant::NQubit11)
    }

    /// Corrections tracked as exact words rather than numeric products.
    fn is_symbolic(&self) -> bool {
        !matches!(self, Variant::Qudit11 | Variant::Qudit22)
    }

    /// Variants whose measurement family is orthonormal only for unitary `M`.
    pub fn requires_unitary(&self) -> bool {
        !matches!(self, Variant::Qudit11 | Variant::Qudit11p | Variant::NQubit11 | Variant::Basic2)
    }

    pub fn group(&self, local: usize) -> BasisGroup {
        if self.is_nqubit() {
            BasisGroup::Qubits(local)
        } else {
            BasisGroup::Qudit(local)
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('-', "_").to_ascii_lowercase();
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == key)
            .ok_or_else(|| Error::InvalidParam(format!("unknown teleportation variant `{s}`")))
    }
}

/// A qudit or qubit Pauli word with exact phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Word {
    Qudit(GenPauliWord),
    Qubits(PauliWord),
}

impl Word {
    pub fn all(group: BasisGroup) -> Result<Vec<Word>> {
        Ok(match group {
            BasisGroup::Qudit(d) => GenPauliWord::all_unphased(d)?.into_iter().map(Word::Qudit).collect(),
            BasisGroup::Qubits(n) => PauliWord::all_unsigned(n).into_iter().map(Word::Qubits).collect(),
        })
    }

    pub fn matrix(&self) -> Result<CMatrix> {
        match self {
            Word::Qudit(w) => Ok(w.matrix()),
            Word::Qubits(w) => w.matrix(),
        }
    }

    pub fn dagger(&self) -> Word {
        match self {
            Word::Qudit(w) => Word::Qudit(w.dagger()),
            Word::Qubits(w) => Word::Qubits(w.dagger()),
        }
    }

    pub fn transpose(&self) -> Word {
        match self {
            Word::Qudit(w) => Word::Qudit(w.transpose()),
            Word::Qubits(w) => Word::Qubits(w.transpose()),
        }
    }

    pub fn mul(&self, other: &Word) -> Result<Word> {
        match (self, other) {
            (Word::Qudit(a), Word::Qudit(b)) => Ok(Word::Qudit(a.mul(b)?)),
            (Word::Qubits(a), Word::Qubits(b)) => Ok(Word::Qubits(a.mul(b)?)),
            _ => Err(Error::InvalidParam("cannot multiply qudit and qubit words".into())),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::Qudit(w) => write!(f, "w^{} Z^{} X^{}", w.gamma, w.alpha, w.beta),
            Word::Qubits(w) => write!(f, "{w}"),
        }
    }
}

/// Largest pair count for `n`-qubit variants; the triple space has `2^(3n)` amplitudes.
pub const MAX_TELEPORT_QUBITS: usize = 3;
/// Largest qudit dimension for qudit variants.
pub const MAX_TELEPORT_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct TeleportEqCase {
    pub variant: Variant,
    /// `d` for qudit variants, `n` for `n`-qubit ones.
    pub local: usize,
    pub m: CMatrix,
    /// Index of the resource label `b` in alpha-major order.
    pub label: usize,
    pub psi: CMatrix,
    /// Optional unitary `V` replacing the basis by `V U_a V^dagger` (`qudit11`, `qudit22`).
    pub frame: Option<CMatrix>,
}

impl TeleportEqCase {
    pub fn new(variant: Variant, local: usize, m: CMatrix, label: usize, psi: CMatrix) -> Result<Self> {
        match variant {
            Variant::Basic2 if local != 2 => return Err(Error::Dimension(local)),
            v if v.is_nqubit() && (local == 0 || local > MAX_TELEPORT_QUBITS) => {
                return Err(Error::SizeLimit { dim: local, limit: MAX_TELEPORT_QUBITS })
            }
            v if !v.is_nqubit() && !(2..=MAX_TELEPORT_DIM).contains(&local) => {
                return Err(Error::Dimension(local))
            }
            _ => {}
        }
        let case = Self { variant, local, m, label, psi, frame: None };
        let dim = case.dim();
        if case.m.shape() != (dim, dim) {
            return Err(Error::ShapeMismatch { op: "teleport M", left: case.m.shape(), right: (dim, dim) });
        }
        if case.psi.shape() != (dim, 1) {
            return Err(Error::ShapeMismatch { op: "teleport input", left: case.psi.shape(), right: (dim, 1) });
        }
        case.psi.ensure_state()?;
        if label >= dim * dim {
            return Err(Error::LabelRange(format!("resource label {label} of {}", dim * dim)));
        }
        if variant == Variant::Basic2 && (label != 0 || residual(&case.m, &CMatrix::identity(2))? > 0.0) {
            return Err(Error::InvalidParam("basic2 uses M = 1 and the label (0,0)".into()));
        }
        if variant.requires_unitary() {
            case.m.ensure_unitary(1e-10)?;
        }
        Ok(case)
    }

    pub fn with_frame(mut self, v: CMatrix) -> Result<Self> {
        if !matches!(self.variant, Variant::Qudit11 | Variant::Qudit22) {
            return Err(Error::InvalidParam(format!("{} uses the Pauli basis", self.variant)));
        }
        let dim = self.dim();
        if v.shape() != (dim, dim) {
            return Err(Error::ShapeMismatch { op: "teleport frame", left: v.shape(), right: (dim, dim) });
        }
        v.ensure_unitary(1e-10)?;
        self.frame = Some(v);
        Ok(self)
    }

    /// A random input and random unitary `M`; `general_m` draws a Gaussian `M` where allowed.
    pub fn random(variant: Variant, local: usize, label: usize, general_m: bool, rng: &mut impl Rng) -> Result<Self> {
        let dim = if variant.is_nqubit() { 1usize << local.min(MAX_TELEPORT_QUBITS) } else { local };
        let psi = random_state(dim, rng);
        let m = if variant == Variant::Basic2 {
            CMatrix::identity(2)
        } else if general_m && !variant.requires_unitary() {
            gaussian_matrix(dim, dim, rng)
        } else {
            haar_unitary(dim, rng)
        };
        Self::new(variant, local, m, label, psi)
    }

    pub fn dim(&self) -> usize {
        if self.variant.is_nqubit() {
            1 << self.local
        } else {
            self.local
        }
    }

    fn group(&self) -> BasisGroup {
        self.variant.group(self.local)
    }

    fn with_psi(&self, psi: CMatrix) -> Self {
        Self { psi, ..self.clone() }
    }

    /// `U_a` for every label, conjugated by the frame when present.
    fn unitaries(&self) -> Result<Vec<CMatrix>> {
        let words = Word::all(self.group())?;
        words
            .iter()
            .map(|w| {
                let u = w.matrix()?;
                match &self.frame {
                    Some(v) => mul(&mul(v, &u)?, &dagger(v)),
                    None => Ok(u),
                }
            })
            .collect()
    }

    /// `U_b^T U_a^dagger` for every outcome `a`.
    fn corrections(&self) -> Result<Vec<CMatrix>> {
        if self.variant.is_symbolic() {
            let words = Word::all(self.group())?;
            let bt = words[self.label].transpose();
            words.iter().map(|a| bt.mul(&a.dagger())?.matrix()).collect()
        } else {
            let us = self.unitaries()?;
            let bt = transpose(&us[self.label]);
            us.iter().map(|a| mul(&bt, &dagger(a))).collect()
        }
    }

    /// Both sides of the equation as vectors on the triple space.
    pub fn sides(&self) -> Result<(CMatrix, CMatrix)> {
        if self.variant.is_projective() {
            return Err(Error::InvalidParam("projective variants are checked per outcome".into()));
        }
        let us = self.unitaries()?;
        let corrections = self.corrections()?;
        let m = &self.m;
        let mt = transpose(m);
        let ub = &us[self.label];
        let dim = self.dim();
        let eleven = self.variant.is_eleven();
        let resource = if eleven { vectorize(&mul(ub, &mt)?) } else { vectorize(&mul(m, ub)?) };
        let lhs = tensor(&self.psi, &resource)?;
        let mut rhs = CMatrix::zeros(dim * dim * dim, 1);
        for (u, c) in us.iter().zip(&corrections) {
            let (e, out) = if eleven {
                (vectorize(u), mul(m, &mul(c, &self.psi)?)?)
            } else {
                (vectorize(&mul(u, &mt)?), mul(c, &self.psi)?)
            };
            rhs = rhs.add(&tensor(&e, &out)?)?;
        }
        Ok((lhs, rhs.scale_real(1.0 / dim as f64)))
    }

    pub fn equation_residual(&self) -> Result<f64> {
        let (lhs, rhs) = self.sides()?;
        residual(&lhs, &rhs)
    }
}

/// `(<e|_CA (x) 1_B) v` for `v` on the triple space.
pub fn contract_sender(e: &CMatrix, v: &CMatrix) -> Result<CMatrix> {
    let pair = e.rows();
    if !v.rows().is_multiple_of(pair) || e.cols() != 1 || v.cols() != 1 {
        return Err(Error::ShapeMismatch { op: "contract_sender", left: e.shape(), right: v.shape() });
    }
    let dim = v.rows() / pair;
    let (ed, vd) = (e.data(), v.data());
    let out = (0..dim)
        .map(|b| (0..pair).map(|ca| ed[ca].conj() * vd[ca * dim + b]).sum())
        .collect();
    Ok(CMatrix::column(out))
}

/// `(<Omega|_CA (x) 1)(psi_C (x) |Omega>_AB)` against `psi_B / d` on random inputs.
pub fn transfer_identity_check(d: usize, samples: usize, seed: u64, tol: Tolerance) -> Result<Report> {
    if !(2..=MAX_TELEPORT_DIM).contains(&d) {
        return Err(Error::Dimension(d));
    }
    let mut report = Report::new("transfer", tol.abs_eps).with_param("d", d).with_seed(seed);
    let w = vectorize(&CMatrix::identity(d));
    let mut g = rng(seed);
    let mut worst = 0.0f64;
    let mut worst_norm = 0.0f64;
    for s in 0..samples.max(1) {
        let psi = if s == 0 { CMatrix::basis_ket(d, 0) } else { random_state(d, &mut g) };
        let out = contract_sender(&w, &tensor(&psi, &w)?)?;
        worst = worst.max(residual(&out, &psi.scale_real(1.0 / d as f64))?);
        worst_norm = worst_norm.max((out.norm() - 1.0 / d as f64).abs());
    }
    report.check("transfer", worst);
    report.check("norm", worst_norm);
    Ok(report)
}

pub fn teleport_eq_check(case: &TeleportEqCase, tol: Tolerance) -> Result<Report> {
    if case.variant.is_projective() {
        return projective_eq_check(case, tol);
    }
    let mut report = Report::new("teleport-eq", tol.abs_eps)
        .with_param("variant", case.variant)
        .with_param("local", case.local)
        .with_param("label", case.label);
    report.check("equation", case.equation_residual()?);

    let phased = case.with_psi(case.psi.scale(C64::from_polar(1.0, 0.7)));
    report.check("global-phase", phased.equation_residual()?);

    if case.variant.is_symbolic() {
        let words = Word::all(case.group())?;
        let us: Vec<CMatrix> = words.iter().map(Word::matrix).collect::<Result<_>>()?;
        let bt = transpose(&us[case.label]);
        let mut worst = 0.0f64;
        for (u, c) in us.iter().zip(case.corrections()?) {
            worst = worst.max(residual(&c, &mul(&bt, &dagger(u))?)?);
        }
        report.check("symbolic-corrections", worst);
    }
    if matches!(case.variant, Variant::Qudit11p | Variant::Qudit22p) {
        let ub = Word::all(case.group())?[case.label].matrix()?;
        if residual(&transpose(&ub), &dagger(&ub))? > 1e-6 {
            // the adjoint in place of the transpose must break the equation
            let (lhs, _) = case.sides()?;
            let rhs = adjoint_corrected_rhs(case)?;
            report.check_above("adjoint-instead-of-transpose", residual(&lhs, &rhs)?, 1e-6);
        }
    }
    Ok(report)
}

fn adjoint_corrected_rhs(case: &TeleportEqCase) -> Result<CMatrix> {
    let words = Word::all(case.group())?;
    let us: Vec<CMatrix> = words.iter().map(Word::matrix).collect::<Result<_>>()?;
    let bd = dagger(&us[case.label]);
    let dim = case.dim();
    let mt = transpose(&case.m);
    let mut rhs = CMatrix::zeros(dim * dim * dim, 1);
    for u in &us {
        let c = mul(&bd, &dagger(u))?;
        let (e, out) = if case.variant.is_eleven() {
            (vectorize(u), mul(&case.m, &mul(&c, &case.psi)?)?)
        } else {
            (vectorize(&mul(u, &mt)?), mul(&c, &case.psi)?)
        };
        rhs = rhs.add(&tensor(&e, &out)?)?;
    }
    Ok(rhs.scale_real(1.0 / dim as f64))
}

/// Outcome-resolved check of one projective form.
struct ProjectiveForm {
    name: &'static str,
    prepared: CMatrix,
    bases: Vec<CMatrix>,
    expected_outputs: Vec<CMatrix>,
    corrections: Vec<CMatrix>,
}

fn projective_forms(case: &TeleportEqCase) -> Result<Vec<ProjectiveForm>> {
    let words = Word::all(case.group())?;
    let us: Vec<CMatrix> = words.iter().map(Word::matrix).collect::<Result<_>>()?;
    let m = &case.m;
    let mt = transpose(m);
    let md = dagger(m);
    let psi = &case.psi;
    let mut forms = Vec::new();

    // resource (1 (x) M)|Omega>, measure |Omega(a)>, correct with U_a M^dagger
    let mut eleven = ProjectiveForm {
        name: "11",
        prepared: tensor(psi, &vectorize(&mt))?,
        bases: Vec::new(),
        expected_outputs: Vec::new(),
        corrections: Vec::new(),
    };
    for (w, u) in words.iter().zip(&us) {
        eleven.bases.push(vectorize(u));
        eleven.expected_outputs.push(mul(m, &mul(&w.dagger().matrix()?, psi)?)?);
        eleven.corrections.push(mul(u, &md)?);
    }
    forms.push(eleven);

    if !case.variant.is_nqubit() {
        // resource |M Omega>, measure |Omega M^T(a)>, correct with U_a
        let mut twenty_two = ProjectiveForm {
            name: "22",
            prepared: tensor(psi, &vectorize(m))?,
            bases: Vec::new(),
            expected_outputs: Vec::new(),
            corrections: Vec::new(),
        };
        for (w, u) in words.iter().zip(&us) {
            twenty_two.bases.push(vectorize(&mul(u, &mt)?));
            twenty_two.expected_outputs.push(mul(&w.dagger().matrix()?, psi)?);
            twenty_two.corrections.push(u.clone());
        }
        forms.push(twenty_two);
    }
    Ok(forms)
}

pub fn projective_eq_check(case: &TeleportEqCase, tol: Tolerance) -> Result<Report> {
    if !case.variant.is_projective() {
        return Err(Error::InvalidParam(format!("{} is not a projective variant", case.variant)));
    }
    let dim = case.dim();
    let outcomes = dim * dim;
    let mut report = Report::new("projective-eq", tol.abs_eps)
        .with_param("variant", case.variant)
        .with_param("local", case.local);
    for form in projective_forms(case)? {
        let mut projection = 0.0f64;
        let mut prob_dev = 0.0f64;
        let mut prob_sum = 0.0f64;
        let mut infidelity = 0.0f64;
        for a in 0..outcomes {
            let e = &form.bases[a];
            let reduced = contract_sender(e, &form.prepared)?;
            let projected = tensor(e, &reduced)?;
            let expected = tensor(e, &form.expected_outputs[a].scale_real(1.0 / dim as f64))?;
            projection = projection.max(residual(&projected, &expected)?);
            let p = reduced.norm().powi(2);
            prob_sum += p;
            prob_dev = prob_dev.max((p - 1.0 / outcomes as f64).abs());
            let out = mul(&form.corrections[a], &reduced)?.normalized();
            infidelity = infidelity.max(1.0 - case.psi.inner(&out)?.norm());
        }
        report.check(format!("{}/projection", form.name), projection);
        report.check(format!("{}/probability", form.name), prob_dev);
        report.check(format!("{}/probability-sum", form.name), (prob_sum - 1.0).abs());
        report.check_below(format!("{}/infidelity", form.name), infidelity, FIDELITY_TOL);
    }
    Ok(report)
}

/// Fidelity bound for corrected outputs.
pub const FIDELITY_TOL: f64 = 1e-10;

/// One resolved measurement branch of a protocol run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub label: String,
    pub probability: f64,
    pub correction: String,
    pub output: CMatrix,
    pub fidelity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolTranscript {
    pub resource: String,
    pub dim: usize,
    pub seed: u64,
    pub outcome: usize,
    pub label: String,
    pub probability: f64,
    pub correction: String,
    pub output: Vec<[f64; 2]>,
    pub fidelity: f64,
}

/// Sender measures `C A` in `|Omega(a)>`, receiver applies `U_a M^dagger`.
#[derive(Debug, Clone)]
pub struct Protocol {
    pub group: BasisGroup,
    pub resource: String,
    pub outcomes: Vec<Outcome>,
}

/// `sum_i s_i |i> (x) M|i>`.
pub fn schmidt_resource(s: &[f64], m: &CMatrix) -> Result<CMatrix> {
    let dim = s.len();
    if m.shape() != (dim, dim) {
        return Err(Error::ShapeMismatch { op: "schmidt_resource", left: m.shape(), right: (dim, dim) });
    }
    let mut amps = vec![ZERO; dim * dim];
    for (r, sr) in s.iter().enumerate() {
        for c in 0..dim {
            amps[r * dim + c] = m[(c, r)] * *sr;
        }
    }
    Ok(CMatrix::column(amps))
}

impl Protocol {
    pub fn new(psi: &CMatrix, group: BasisGroup, m: &CMatrix) -> Result<Self> {
        let dim = group.local_dim();
        let s = vec![1.0 / (dim as f64).sqrt(); dim];
        Self::with_schmidt(psi, group, m, &s, "maximal")
    }

    /// Same measurement and corrections on the resource `sum_i s_i |i> M|i>`.
    pub fn with_schmidt(psi: &CMatrix, group: BasisGroup, m: &CMatrix, s: &[f64], name: &str) -> Result<Self> {
        let dim = group.local_dim();
        if psi.shape() != (dim, 1) {
            return Err(Error::ShapeMismatch { op: "protocol input", left: psi.shape(), right: (dim, 1) });
        }
        psi.ensure_state()?;
        m.ensure_unitary(1e-10)?;
        let resource = schmidt_resource(s, m)?;
        resource.ensure_state()?;
        let prepared = tensor(psi, &resource)?;
        let md = dagger(m);
        let words = Word::all(group)?;
        let labels = group.elements()?;
        let mut outcomes = Vec::with_capacity(words.len());
        for (w, (label, u)) in words.iter().zip(labels) {
            let reduced = contract_sender(&vectorize(&u), &prepared)?;
            let probability = reduced.norm().powi(2);
            let corrected = mul(&w.matrix()?, &mul(&md, &reduced)?)?;
            let (output, fidelity) = if probability > 0.0 {
                let out = corrected.normalized();
                let f = psi.inner(&out)?.norm();
                (out, f)
            } else {
                (CMatrix::zeros(dim, 1), 0.0)
            };
            outcomes.push(Outcome { label, probability, correction: format!("{w} . M^dagger"), output, fidelity });
        }
        Ok(Self { group, resource: name.to_string(), outcomes })
    }

    pub fn dim(&self) -> usize {
        self.group.local_dim()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.outcomes.iter().map(|o| o.probability).collect()
    }

    pub fn min_fidelity(&self) -> f64 {
        self.outcomes.iter().map(|o| o.fidelity).fold(f64::INFINITY, f64::min)
    }

    pub fn sample_index(&self, rng: &mut impl Rng) -> usize {
        WeightedIndex::new(self.probabilities()).expect("probabilities sum to one").sample(rng)
    }

    pub fn transcript(&self, index: usize, seed: u64) -> ProtocolTranscript {
        let o = &self.outcomes[index];
        ProtocolTranscript {
            resource: self.resource.clone(),
            dim: self.dim(),
            seed,
            outcome: index,
            label: o.label.clone(),
            probability: o.probability,
            correction: o.correction.clone(),
            output: o.output.data().iter().map(|a| [a.re, a.im]).collect(),
            fidelity: o.fidelity,
        }
    }

    /// Draws `samples` outcomes from one seeded stream.
    pub fn run(&self, samples: usize, seed: u64) -> ProtocolRun {
        let mut g = rng(seed);
        let mut counts = vec![0usize; self.outcomes.len()];
        let mut min_fidelity = f64::INFINITY;
        for _ in 0..samples {
            let i = self.sample_index(&mut g);
            counts[i] += 1;
            min_fidelity = min_fidelity.min(self.outcomes[i].fidelity);
        }
        let probs = self.probabilities();
        let n = samples as f64;
        let mut chi2 = 0.0;
        let mut max_z = 0.0f64;
        for (&c, &p) in counts.iter().zip(&probs) {
            let expected = n * p;
            if expected > 0.0 {
                chi2 += (c as f64 - expected).powi(2) / expected;
                let sigma = (n * p * (1.0 - p)).sqrt();
                if sigma > 0.0 {
                    max_z = max_z.max((c as f64 - expected).abs() / sigma);
                }
            }
        }
        ProtocolRun {
            seed,
            samples,
            labels: self.outcomes.iter().map(|o| o.label.clone()).collect(),
            counts,
            probabilities: probs,
            min_fidelity,
            chi2,
            max_z,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolRun {
    pub seed: u64,
    pub samples: usize,
    pub labels: Vec<String>,
    pub counts: Vec<usize>,
    pub probabilities: Vec<f64>,
    pub min_fidelity: f64,
    pub chi2: f64,
    pub max_z: f64,
}

pub fn run_protocol(psi: &CMatrix, group: BasisGroup, m: &CMatrix, seed: u64) -> Result<ProtocolTranscript> {
    let p = Protocol::new(psi, group, m)?;
    let i = p.sample_index(&mut rng(seed));
    Ok(p.transcript(i, seed))
}

/// Bound for per-outcome frequency deviations, in standard deviations.
pub const UNIFORMITY_SIGMAS: f64 = 5.0;

/// Deterministic fidelity over every outcome, sampled uniformity, and a
/// Schmidt-skewed resource that must lose fidelity.
pub fn protocol_suite(group: BasisGroup, samples: usize, seed: u64, tol: Tolerance) -> Result<Report> {
    let dim = group.local_dim();
    let mut report = Report::new("protocol", tol.abs_eps)
        .with_param("group", group.name())
        .with_param("samples", samples)
        .with_seed(seed);
    let mut g = rng(seed);
    let psi = random_state(dim, &mut g);
    let m = haar_unitary(dim, &mut g);
    let p = Protocol::new(&psi, group, &m)?;
    let outcomes = p.outcomes.len() as f64;
    report.check_below("infidelity-all-outcomes", 1.0 - p.min_fidelity(), FIDELITY_TOL);
    let dev = p.probabilities().iter().map(|q| (q - 1.0 / outcomes).abs()).fold(0.0, f64::max);
    report.check("probability-uniform", dev);
    report.check("probability-sum", (p.probabilities().iter().sum::<f64>() - 1.0).abs());
    if samples > 0 {
        let run = p.run(samples, seed);
        report.check_below("frequency-max-z", run.max_z, UNIFORMITY_SIGMAS);
        report.check_below("sampled-infidelity", 1.0 - run.min_fidelity, FIDELITY_TOL);
    }
    let raw: Vec<f64> = (1..=dim).map(|i| i as f64).collect();
    let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    let skew: Vec<f64> = raw.iter().map(|x| x / norm).collect();
    let skewed = Protocol::with_schmidt(&psi, group, &m, &skew, "skewed")?;
    report.check_above("skewed-resource-infidelity", 1.0 - skewed.min_fidelity(), 1e-6);
    Ok(report)
}

/// Runs the equation for every resource label with fresh random inputs.
pub fn teleport_eq_suite(variant: Variant, local: usize, seed: u64, tol: Tolerance) -> Result<Report> {
    let mut report = Report::new("teleport-eq", tol.abs_eps)
        .with_param("variant", variant)
        .with_param("local", local)
        .with_seed(seed);
    let mut g = rng(seed);
    if variant.is_projective() {
        let case = TeleportEqCase::random(variant, local, 0, false, &mut g)?;
        report.absorb("unitary-m", projective_eq_check(&case, tol)?);
        let mut plain = case.clone();
        plain.m = CMatrix::identity(case.dim());
        report.absorb("identity-m", projective_eq_check(&plain, tol)?);
        return Ok(report);
    }
    let dim = if variant.is_nqubit() { 1usize << local } else { local };
    let labels = if variant == Variant::Basic2 { 1 } else { dim * dim };
    for label in 0..labels {
        let case = TeleportEqCase::random(variant, local, label, false, &mut g)?;
        report.absorb(&format!("unitary-m/b={label}"), teleport_eq_check(&case, tol)?);
        if !variant.requires_unitary() && variant != Variant::Basic2 {
            let general = TeleportEqCase::random(variant, local, label, true, &mut g)?;
            report.absorb(&format!("general-m/b={label}"), teleport_eq_check(&general, tol)?);
        }
        if matches!(variant, Variant::Qudit11 | Variant::Qudit22) {
            let framed = case.clone().with_frame(haar_unitary(dim, &mut g))?;
            report.absorb(&format!("rotated-basis/b={label}"), teleport_eq_check(&framed, tol)?);
        }
    }
    Ok(report)
}

/// The equation on every computational input implies it on superpositions; a
/// corrupted correction is caught on some basis input. For two qubit pairs the
/// sender register is also checked in interleaved order through the twist.
pub fn linearity_reduction_check(group: BasisGroup, seed: u64, tol: Tolerance) -> Result<Report> {
    let (variant, local) = match group {
        BasisGroup::Qudit(d) => (Variant::Qudit11, d),
        BasisGroup::Qubits(n) => (Variant::NQubit11, n),
    };
    let dim = group.local_dim();
    let mut report = Report::new("linearity", tol.abs_eps)
        .with_param("group", group.name())
        .with_seed(seed);
    let mut g = rng(seed);
    let label = g.random_range(0..dim * dim);
    let template = TeleportEqCase::random(variant, local, label, false, &mut g)?;

    let mut basis_worst = 0.0f64;
    let mut sides = Vec::with_capacity(dim);
    for i in 0..dim {
        let case = template.with_psi(CMatrix::basis_ket(dim, i));
        let (l, r) = case.sides()?;
        basis_worst = basis_worst.max(residual(&l, &r)?);
        sides.push((l, r));
    }
    report.check("basis-inputs", basis_worst);

    let psi = random_state(dim, &mut g);
    let (lhs, rhs) = template.with_psi(psi.clone()).sides()?;
    report.check("superposition", residual(&lhs, &rhs)?);
    let mut lhs_lin = CMatrix::zeros(lhs.rows(), 1);
    let mut rhs_lin = CMatrix::zeros(rhs.rows(), 1);
    for (i, (l, r)) in sides.iter().enumerate() {
        lhs_lin = lhs_lin.add(&l.scale(psi[(i, 0)]))?;
        rhs_lin = rhs_lin.add(&r.scale(psi[(i, 0)]))?;
    }
    report.check("lhs-linear", residual(&lhs, &lhs_lin)?);
    report.check("rhs-linear", residual(&rhs, &rhs_lin)?);

    // swap the corrections of outcomes 0 and 1
    let us = template.unitaries()?;
    let mut corr = template.corrections()?;
    corr.swap(0, 1);
    let mut corrupted_worst = 0.0f64;
    for i in 0..dim {
        let ket = CMatrix::basis_ket(dim, i);
        let (l, _) = template.with_psi(ket.clone()).sides()?;
        let mut r = CMatrix::zeros(l.rows(), 1);
        for (u, c) in us.iter().zip(&corr) {
            r = r.add(&tensor(&vectorize(u), &mul(&template.m, &mul(c, &ket)?)?)?)?;
        }
        corrupted_worst = corrupted_worst.max(residual(&l, &r.scale_real(1.0 / dim as f64))?);
    }
    report.check_above("corrupted-correction", corrupted_worst, 1e-6);

    if group == BasisGroup::Qubits(2) {
        // C1 C2 A1 A2 blocked -> C1 A1 C2 A2 interleaved
        let tw_dag = dagger(&twist(2)?);
        let lift = tensor(&tw_dag, &CMatrix::identity(dim))?;
        let lhs_int = mul(&lift, &lhs)?;
        let words = Word::all(group)?;
        let corrections = template.with_psi(psi.clone()).corrections()?;
        let mut rhs_int = CMatrix::zeros(lhs.rows(), 1);
        for (w, c) in words.iter().zip(&corrections) {
            let Word::Qubits(pw) = w else { unreachable!("qubit group") };
            let (a, b) = (pw.z_exps(), pw.x_exps());
            let pairs = tensor(&bell2(a.get(0), b.get(0))?, &bell2(a.get(1), b.get(1))?)?;
            rhs_int = rhs_int.add(&tensor(&pairs, &mul(&template.m, &mul(c, &psi)?)?)?)?;
        }
        report.check("interleaved-order", residual(&lhs_int, &rhs_int.scale_real(1.0 / dim as f64))?);
    }
    Ok(report)
}
