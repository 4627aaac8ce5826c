//! Orthonormality and completeness of Bell families, the basis theorem,
//! observable eigen-equations and the trace-constraint system.

use std::fmt;

use crate::bell::{multi_bell, vectorize};
use crate::error::{Error, Result};
use crate::linalg::{dagger, mul, rank, residual, solve, tensor, transpose, CMatrix, Tolerance, C64, I, ONE};
use crate::pauli::{gen_x, gen_z, BitString, GenPauliWord, PauliWord};
use crate::random::{gaussian_matrix, haar_unitary, perturbed_nonunitary, rng};
use crate::report::Report;

/// A list of states on a `dim`-dimensional space. Families built from a basis
/// group keep the unitaries `U_a` so they can be extended by `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisFamily {
    pub dim: usize,
    pub states: Vec<CMatrix>,
    pub labels: Vec<String>,
    pub unitaries: Option<Vec<CMatrix>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// The unitary basis groups the crate knows how to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisGroup {
    /// `U_{alpha beta}` in dimension `d`.
    Qudit(usize),
    /// `T_n(alpha beta)` on `n` qubits.
    Qubits(usize),
}

impl BasisGroup {
    pub fn local_dim(&self) -> usize {
        match *self {
            BasisGroup::Qudit(d) => d,
            BasisGroup::Qubits(n) => 1 << n,
        }
    }

    pub fn elements(&self) -> Result<Vec<(String, CMatrix)>> {
        match *self {
            BasisGroup::Qudit(d) => Ok(GenPauliWord::all_unphased(d)?
                .into_iter()
                .map(|w| (format!("({},{})", w.alpha, w.beta), w.matrix()))
                .collect()),
            BasisGroup::Qubits(n) => {
                if n == 0 || n > crate::bell::MAX_PAIRS {
                    return Err(Error::SizeLimit { dim: n, limit: crate::bell::MAX_PAIRS });
                }
                PauliWord::all_unsigned(n)
                    .into_iter()
                    .map(|w| Ok((format!("({},{})", w.z_exps(), w.x_exps()), w.matrix()?)))
                    .collect()
            }
        }
    }

    pub fn name(&self) -> String {
        match *self {
            BasisGroup::Qudit(d) => format!("qudit d={d}"),
            BasisGroup::Qubits(n) => format!("qubits n={n}"),
        }
    }
}

impl BasisFamily {
    pub fn new(states: Vec<CMatrix>, labels: Vec<String>) -> Result<Self> {
        let first = states.first().ok_or_else(|| Error::InvalidParam("empty family".into()))?;
        let dim = first.rows();
        if labels.len() != states.len() {
            return Err(Error::LengthMismatch { expected: states.len(), got: labels.len() });
        }
        for s in &states {
            if s.shape() != (dim, 1) {
                return Err(Error::ShapeMismatch { op: "basis family", left: s.shape(), right: (dim, 1) });
            }
        }
        Ok(Self { dim, states, labels, unitaries: None })
    }

    /// `(U_a (x) 1)|Omega>` for every element of the group.
    pub fn from_group(group: BasisGroup) -> Result<Self> {
        let elements = group.elements()?;
        let states = elements.iter().map(|(_, u)| vectorize(u)).collect();
        let labels = elements.iter().map(|(l, _)| l.clone()).collect();
        let mut fam = Self::new(states, labels)?;
        fam.unitaries = Some(elements.into_iter().map(|(_, u)| u).collect());
        Ok(fam)
    }

    pub fn qubit_bell() -> Result<Self> {
        Self::from_group(BasisGroup::Qudit(2))
    }

    pub fn qudit_bell(d: usize) -> Result<Self> {
        Self::from_group(BasisGroup::Qudit(d))
    }

    /// The `4^n` blocked-order states `|B_2n(alpha beta)>`.
    pub fn multi_bell(n: usize) -> Result<Self> {
        Self::from_group(BasisGroup::Qubits(n))
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn without(&self, index: usize) -> Self {
        let mut out = self.clone();
        out.states.remove(index);
        out.labels.remove(index);
        if let Some(us) = out.unitaries.as_mut() {
            us.remove(index);
        }
        out
    }

    pub fn gram(&self) -> CMatrix {
        let k = self.len();
        let mut g = CMatrix::zeros(k, k);
        for (i, a) in self.states.iter().enumerate() {
            for (j, b) in self.states.iter().enumerate() {
                g[(i, j)] = a.inner(b).expect("same shape");
            }
        }
        g
    }
}

pub fn gram_check(fam: &BasisFamily, tol: Tolerance) -> Report {
    let mut report = Report::new("gram", tol.abs_eps).with_param("states", fam.len()).with_param("dim", fam.dim);
    let g = fam.gram();
    let mut diag = 0.0f64;
    let mut off = 0.0f64;
    for i in 0..fam.len() {
        for j in 0..fam.len() {
            if i == j {
                diag = diag.max((g[(i, j)] - ONE).norm());
            } else {
                off = off.max(g[(i, j)].norm());
            }
        }
    }
    report.check("diagonal", diag);
    report.check("off-diagonal", off);
    report
}

pub fn completeness_check(fam: &BasisFamily, tol: Tolerance) -> Report {
    let mut report =
        Report::new("completeness", tol.abs_eps).with_param("states", fam.len()).with_param("dim", fam.dim);
    let mut sum = CMatrix::zeros(fam.dim, fam.dim);
    for s in &fam.states {
        sum = sum.add(&CMatrix::outer(s, s)).expect("same shape");
    }
    report.check("projector-sum", residual(&sum, &CMatrix::identity(fam.dim)).expect("same shape"));
    if fam.len() != fam.dim {
        report.check("incomplete-family", fam.len().abs_diff(fam.dim) as f64);
    }
    report
}

/// `(M U_a (x) 1)|Omega>` on the left side, `(U_a M (x) 1)|Omega>` on the right.
pub fn extend_basis(fam: &BasisFamily, m: &CMatrix, side: Side) -> Result<BasisFamily> {
    let us = fam
        .unitaries
        .as_ref()
        .ok_or_else(|| Error::InvalidParam("family carries no basis-group unitaries".into()))?;
    let d = us[0].rows();
    if m.shape() != (d, d) {
        return Err(Error::ShapeMismatch { op: "extend_basis", left: m.shape(), right: (d, d) });
    }
    let states = us
        .iter()
        .map(|u| {
            let g = match side {
                Side::Left => mul(m, u),
                Side::Right => mul(u, m),
            }?;
            Ok(vectorize(&g))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = BasisFamily::new(states, fam.labels.clone())?;
    out.unitaries = fam.unitaries.clone();
    Ok(out)
}

/// Gram deviation that separates non-unitary extensions from unitary ones.
pub const NONUNITARY_GRAM_FLOOR: f64 = 1e-3;
/// Minimum `||M^dagger M - I||_2` for sampled non-unitaries.
pub const NONUNITARY_GAP: f64 = 0.1;

fn gram_deviation(fam: &BasisFamily) -> f64 {
    residual(&fam.gram(), &CMatrix::identity(fam.len())).expect("square")
}

/// `(1/d) sum_a U_a M |i><j| M^dagger U_a^dagger - (M^dagger M)_{ji} 1`, maximized over `i, j`.
pub fn reduced_completeness_residual(group: BasisGroup, m: &CMatrix) -> Result<f64> {
    let elements = group.elements()?;
    let d = group.local_dim();
    let mdm = mul(&dagger(m), m)?;
    let mut worst = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            let op = CMatrix::outer(&CMatrix::basis_ket(d, i), &CMatrix::basis_ket(d, j));
            let inner = mul(&mul(m, &op)?, &dagger(m))?;
            let mut sum = CMatrix::zeros(d, d);
            for (_, u) in &elements {
                sum = sum.add(&mul(&mul(u, &inner)?, &dagger(u))?)?;
            }
            let lhs = sum.scale_real(1.0 / d as f64);
            let rhs = CMatrix::identity(d).scale(mdm[(j, i)]);
            worst = worst.max(residual(&lhs, &rhs)?);
        }
    }
    Ok(worst)
}

/// Unitary extensions must stay orthonormal and complete; perturbed non-unitary
/// ones must not. Both sides, `trials` samples each.
pub fn basis_theorem_suite(group: BasisGroup, trials: usize, seed: u64, tol: Tolerance) -> Result<Report> {
    let d = group.local_dim();
    if d > 8 {
        return Err(Error::SizeLimit { dim: d, limit: 8 });
    }
    let base = BasisFamily::from_group(group)?;
    let mut report = Report::new("basis-theorem", tol.abs_eps)
        .with_param("group", group.name())
        .with_param("trials", trials)
        .with_seed(seed);
    let mut g = rng(seed);
    for side in [Side::Left, Side::Right] {
        let mut worst_unitary = 0.0f64;
        let mut worst_complete = 0.0f64;
        let mut least_nonunitary = f64::INFINITY;
        for _ in 0..trials {
            let u = haar_unitary(d, &mut g);
            let fam = extend_basis(&base, &u, side)?;
            worst_unitary = worst_unitary.max(gram_deviation(&fam));
            worst_complete = worst_complete.max(completeness_check(&fam, tol).max_residual());
            let m = perturbed_nonunitary(d, NONUNITARY_GAP, &mut g);
            least_nonunitary = least_nonunitary.min(gram_deviation(&extend_basis(&base, &m, side)?));
        }
        if trials > 0 {
            report.check(format!("{side}/unitary-gram"), worst_unitary);
            report.check(format!("{side}/unitary-completeness"), worst_complete);
            report.check_above(format!("{side}/nonunitary-gram"), least_nonunitary, NONUNITARY_GRAM_FLOOR);
        }
    }
    let m = gaussian_matrix(d, d, &mut g);
    report.check("reduced-completeness", reduced_completeness_residual(group, &m)?);
    Ok(report)
}

/// A Hermitian operator with its closed-form eigenpairs.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableDef {
    pub name: String,
    pub matrix: CMatrix,
    pub eigenpairs: Vec<(String, CMatrix, f64)>,
}

impl ObservableDef {
    pub fn hermiticity_defect(&self) -> f64 {
        residual(&self.matrix, &dagger(&self.matrix)).expect("square")
    }

    /// Largest `|O psi - lambda psi|` over the listed pairs.
    pub fn eigen_residual(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for (_, psi, lambda) in &self.eigenpairs {
            let lhs = mul(&self.matrix, psi)?;
            worst = worst.max(residual(&lhs, &psi.scale_real(*lambda))?);
        }
        Ok(worst)
    }

    fn check_into(&self, report: &mut Report) -> Result<()> {
        report.check(format!("{}/hermitian", self.name), self.hermiticity_defect());
        report.check(format!("{}/eigen", self.name), self.eigen_residual()?);
        Ok(())
    }
}

/// `OX+-(k)` and `OZ+-(k)` from `A(k) = X^k (x) X^k` and `B(k) = Z^k (x) (Z^dagger)^k`.
pub fn qudit_observables(d: usize, k: usize) -> Result<Vec<ObservableDef>> {
    if k == 0 || k >= d {
        return Err(Error::LabelRange(format!("k = {k} for d = {d}")));
    }
    let xk = gen_x(d)?.pow(k)?;
    let zk = gen_z(d)?.pow(k)?;
    let a = tensor(&xk, &xk)?;
    let b = tensor(&zk, &dagger(&zk))?;
    let half = C64::new(0.5, 0.0);
    let ox_plus = a.add(&dagger(&a))?.scale(half);
    let ox_minus = a.sub(&dagger(&a))?.scale(I * 0.5);
    let oz_plus = b.add(&dagger(&b))?.scale(half);
    let oz_minus = b.sub(&dagger(&b))?.scale(-I * 0.5);
    let theta = |x: usize| 2.0 * std::f64::consts::PI * ((k * x) % d) as f64 / d as f64;

    let mut defs = vec![
        (format!("OX+({k})"), ox_plus, Vec::new()),
        (format!("OX-({k})"), ox_minus, Vec::new()),
        (format!("OZ+({k})"), oz_plus, Vec::new()),
        (format!("OZ-({k})"), oz_minus, Vec::new()),
    ];
    for w in GenPauliWord::all_unphased(d)? {
        let psi = vectorize(&w.matrix());
        let label = format!("({},{})", w.alpha, w.beta);
        let values = [
            theta(w.alpha).cos(),
            theta(w.alpha).sin(),
            theta(w.beta).cos(),
            theta(w.beta).sin(),
        ];
        for (def, v) in defs.iter_mut().zip(values) {
            def.2.push((label.clone(), psi.clone(), v));
        }
    }
    Ok(defs
        .into_iter()
        .map(|(name, matrix, eigenpairs)| ObservableDef { name, matrix, eigenpairs })
        .collect())
}

/// `(M (x) 1) O (M^dagger (x) 1)` on the left, `(1 (x) M^T) O (1 (x) M^*)` on the right,
/// with eigenstates carried along.
pub fn conjugated_observable(def: &ObservableDef, m: &CMatrix, side: Side) -> Result<ObservableDef> {
    let defect = m.unitarity_defect();
    if defect > 1e-10 {
        return Err(Error::NotUnitary(defect));
    }
    let d = m.rows();
    let id = CMatrix::identity(d);
    let (w, w_dag) = match side {
        Side::Left => (tensor(m, &id)?, tensor(&dagger(m), &id)?),
        Side::Right => (tensor(&id, &transpose(m))?, tensor(&id, &m.conj())?),
    };
    let matrix = mul(&mul(&w, &def.matrix)?, &w_dag)?;
    let eigenpairs = def
        .eigenpairs
        .iter()
        .map(|(l, psi, v)| Ok((l.clone(), mul(&w, psi)?, *v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ObservableDef { name: format!("{}[{side}]", def.name), matrix, eigenpairs })
}

/// Largest pair count for [`multiqubit_observables`].
pub const MAX_OBSERVABLE_PAIRS: usize = 4;

/// `X_k X_{n+k}` with eigenvalue `(-1)^alpha_k` and `Z_k Z_{n+k}` with `(-1)^beta_k`.
pub fn multiqubit_observables(n: usize) -> Result<Vec<ObservableDef>> {
    if n == 0 || n > MAX_OBSERVABLE_PAIRS {
        return Err(Error::SizeLimit { dim: n, limit: MAX_OBSERVABLE_PAIRS });
    }
    let states: Vec<(BitString, BitString, CMatrix)> = BitString::all(n)
        .flat_map(|a| BitString::all(n).map(move |b| (a.clone(), b)))
        .map(|(a, b)| {
            let s = multi_bell(n, &a, &b)?;
            Ok((a, b, s))
        })
        .collect::<Result<_>>()?;
    let sign = |bit: u8| if bit == 0 { 1.0 } else { -1.0 };
    let mut out = Vec::with_capacity(2 * n);
    for k in 0..n {
        let mut flags = vec![0u8; 2 * n];
        flags[k] = 1;
        flags[n + k] = 1;
        let zero = BitString::zeros(2 * n);
        let mask = BitString::new(flags)?;
        let xx = PauliWord::t(&zero, &mask)?.matrix()?;
        let zz = PauliWord::t(&mask, &zero)?.matrix()?;
        out.push(ObservableDef {
            name: format!("X{}X{}", k + 1, n + k + 1),
            matrix: xx,
            eigenpairs: states
                .iter()
                .map(|(a, b, s)| (format!("({a},{b})"), s.clone(), sign(a.get(k))))
                .collect(),
        });
        out.push(ObservableDef {
            name: format!("Z{}Z{}", k + 1, n + k + 1),
            matrix: zz,
            eigenpairs: states
                .iter()
                .map(|(a, b, s)| (format!("({a},{b})"), s.clone(), sign(b.get(k))))
                .collect(),
        });
    }
    Ok(out)
}

/// Hermiticity and eigen-equations of the qudit observables for every `k`, plus
/// conjugated forms for `unitaries` random `M` on both sides.
pub fn qudit_observable_suite(d: usize, unitaries: usize, seed: u64, tol: Tolerance) -> Result<Report> {
    let mut report = Report::new("observables", tol.abs_eps)
        .with_param("family", "qudit")
        .with_param("d", d)
        .with_param("unitaries", unitaries)
        .with_seed(seed);
    let mut g = rng(seed);
    for k in 1..d {
        let defs = qudit_observables(d, k)?;
        for def in &defs {
            def.check_into(&mut report)?;
        }
        if 2 * k == d {
            // sin(pi alpha) vanishes on every label
            report.check(format!("OX-({k})/zero"), defs[1].matrix.max_abs());
            report.check(format!("OZ-({k})/zero"), defs[3].matrix.max_abs());
        }
        let mut worst = 0.0f64;
        for _ in 0..unitaries {
            let m = haar_unitary(d, &mut g);
            for def in &defs {
                for side in [Side::Left, Side::Right] {
                    let c = conjugated_observable(def, &m, side)?;
                    worst = worst.max(c.eigen_residual()?).max(c.hermiticity_defect());
                }
            }
        }
        if unitaries > 0 {
            report.check(format!("conjugated({k})"), worst);
        }
    }
    Ok(report)
}

pub fn multiqubit_observable_suite(n: usize, tol: Tolerance) -> Result<Report> {
    let mut report = Report::new("observables", tol.abs_eps).with_param("family", "multi").with_param("n", n);
    let defs = multiqubit_observables(n)?;
    for def in &defs {
        def.check_into(&mut report)?;
    }
    let mut comm = 0.0f64;
    for a in &defs {
        for b in &defs {
            let ab = mul(&a.matrix, &b.matrix)?;
            let ba = mul(&b.matrix, &a.matrix)?;
            comm = comm.max(residual(&ab, &ba)?);
        }
    }
    report.check("commutators", comm);
    // joint eigenvalue patterns must separate the labels
    let count = defs[0].eigenpairs.len();
    let mut patterns: Vec<Vec<i8>> = (0..count)
        .map(|i| defs.iter().map(|s| s.eigenpairs[i].2.signum() as i8).collect())
        .collect();
    patterns.sort();
    patterns.dedup();
    report.check("labels-distinct", (count - patterns.len()) as f64);
    Ok(report)
}

/// Coefficient matrix of `tr(X T_n(alpha beta)) / 2^n` in the unknowns `X_ij`
/// (row-major), one row per word in alpha-major order.
pub fn trace_constraint_system(n: usize) -> Result<CMatrix> {
    if n == 0 || n > 3 {
        return Err(Error::SizeLimit { dim: n, limit: 3 });
    }
    let dim = 1usize << n;
    let words = PauliWord::all_unsigned(n);
    let mut a = CMatrix::zeros(words.len(), dim * dim);
    let scale = 1.0 / dim as f64;
    for (r, w) in words.iter().enumerate() {
        let t = w.matrix()?;
        // tr(X T) = sum_ij X_ij T_ji
        for i in 0..dim {
            for j in 0..dim {
                a[(r, i * dim + j)] = t[(j, i)] * scale;
            }
        }
    }
    Ok(a)
}

/// The single-qubit system in the order `1, X, ZX, Z`, without the `1/2`.
pub fn appendix_system() -> CMatrix {
    let a = trace_constraint_system(1).expect("n = 1 is in range");
    // all_unsigned(1) order: 1, X, Z, ZX
    let order = [0usize, 1, 3, 2];
    let mut out = CMatrix::zeros(4, 4);
    for (r, &src) in order.iter().enumerate() {
        for c in 0..4 {
            out[(r, c)] = a[(src, c)] * 2.0;
        }
    }
    out
}

pub fn trace_constraint_solve(n: usize, tol: Tolerance) -> Result<Report> {
    let a = trace_constraint_system(n)?;
    let dim = 1usize << n;
    let unknowns = dim * dim;
    let mut report = Report::new("trace-constraint", tol.abs_eps).with_param("n", n);
    report.check("rank-deficit", (unknowns - rank(&a, 1e-9)) as f64);

    let mut rhs = CMatrix::zeros(unknowns, 1);
    rhs[(0, 0)] = ONE;
    match solve(&a, &rhs) {
        Ok(x) => {
            let m = CMatrix::new(dim, dim, x.into_data())?;
            report.check("solution-is-identity", residual(&m, &CMatrix::identity(dim))?);
        }
        Err(_) => report.check("solution-is-identity", f64::INFINITY),
    }
    match solve(&a, &CMatrix::zeros(unknowns, 1)) {
        Ok(x) => report.check("homogeneous-is-zero", x.max_abs()),
        Err(_) => report.check("homogeneous-is-zero", f64::INFINITY),
    }
    if n == 1 {
        let stated = CMatrix::from_real(4, 4, &[
            1.0, 0.0, 0.0, 1.0, //
            0.0, 1.0, 1.0, 0.0, //
            0.0, -1.0, 1.0, 0.0, //
            1.0, 0.0, 0.0, -1.0,
        ])?;
        report.check("appendix-rows", residual(&appendix_system(), &stated)?);
    }
    Ok(report)
}
