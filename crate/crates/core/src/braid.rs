//! Bell transforms as Yang-Baxter gates, braid and Temperley-Lieb representations,
//! and braid teleportation of one or several qubits.
//!
//! Signs `+1`/`-1` are carried as bits `s = (1 + sign) / 2`, so `1` means `+1`.

use std::fmt;

use crate::bell::{twist, vectorize};
use crate::error::{Error, Result};
use crate::linalg::{dagger, embed, mul, mul_all, residual, tensor, tensor_all, CMatrix, Tolerance};
use crate::pauli::{pauli_gate, BitString, GenPauliWord, PauliWord};
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BellTransformParams {
    pub epsilon: i8,
    pub eta: i8,
}

impl BellTransformParams {
    pub const ALL: [BellTransformParams; 4] = [
        BellTransformParams { epsilon: -1, eta: 1 },
        BellTransformParams { epsilon: 1, eta: -1 },
        BellTransformParams { epsilon: 1, eta: 1 },
        BellTransformParams { epsilon: -1, eta: -1 },
    ];

    pub fn new(epsilon: i8, eta: i8) -> Result<Self> {
        for s in [epsilon, eta] {
            if s != 1 && s != -1 {
                return Err(Error::InvalidParam(format!("sign must be +1 or -1, got {s}")));
            }
        }
        Ok(Self { epsilon, eta })
    }

    pub fn from_bits(e: u8, h: u8) -> Self {
        let sign = |b: u8| if b & 1 == 1 { 1 } else { -1 };
        Self { epsilon: sign(e), eta: sign(h) }
    }

    pub fn bits(&self) -> (u8, u8) {
        (((1 + self.epsilon) / 2) as u8, ((1 + self.eta) / 2) as u8)
    }

    /// Parameters of the adjoint transform.
    pub fn inverse(&self) -> Self {
        Self { epsilon: -self.epsilon, eta: -self.eta }
    }
}

impl fmt::Display for BellTransformParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.epsilon, self.eta)
    }
}

pub fn bell_transform(p: BellTransformParams) -> CMatrix {
    let (e, h) = (p.epsilon as f64, p.eta as f64);
    #[rustfmt::skip]
    let m = CMatrix::from_real(4, 4, &[
        1.0, 0.0, 0.0, h,
        0.0, 1.0, e, 0.0,
        0.0, -e, 1.0, 0.0,
        -h, 0.0, 0.0, 1.0,
    ])
    .expect("4x4");
    m.scale_real(std::f64::consts::FRAC_1_SQRT_2)
}

/// `f(eps, eta, i, j)` with `B(eps, eta)|ij> = (-1)^f |phi(i'j')>`.
pub fn sign_exponent(p: BellTransformParams, i: u8, j: u8) -> u8 {
    let (i, j) = (i & 1, j & 1);
    match (p.epsilon, p.eta) {
        (-1, -1) => i,
        (-1, 1) => i & (j ^ 1),
        (1, -1) => i & j,
        _ => 0,
    }
}

/// The label `(i', j')` of the Bell state reached from `|ij>`.
pub fn bell_relabel(p: BellTransformParams, i: u8, j: u8) -> (u8, u8) {
    let jp = (i ^ j) & 1;
    let skew = ((p.epsilon - p.eta).unsigned_abs() / 2) & jp;
    let (_, h) = p.bits();
    ((i & 1) ^ skew ^ h, jp)
}

/// The unified action formula on all four inputs, and that the relabelling is a bijection.
pub fn bell_action_check(p: BellTransformParams, tol: Tolerance) -> Result<Report> {
    let mut report = Report::new("bell-action", tol.abs_eps).with_param("params", p);
    let b = bell_transform(p);
    report.check("adjoint", residual(&dagger(&b), &bell_transform(p.inverse()))?);
    report.check("unitary", b.unitarity_defect());
    let mut hit = [false; 4];
    for i in 0..2u8 {
        for j in 0..2u8 {
            let (ip, jp) = bell_relabel(p, i, j);
            hit[(ip * 2 + jp) as usize] = true;
            let mut out = mul(&b, &CMatrix::basis_ket(4, (i * 2 + j) as usize))?;
            if sign_exponent(p, i, j) == 1 {
                out = out.scale_real(-1.0);
            }
            report.check(format!("action[{i}{j}]"), residual(&out, &crate::bell::bell2(ip, jp)?)?);
        }
    }
    let missed = hit.iter().filter(|h| !**h).count();
    report.check_below("bijection", missed as f64, 0.5);
    Ok(report)
}

fn check_triple(r: &CMatrix, local_dim: usize) -> Result<()> {
    let d2 = local_dim * local_dim;
    if r.shape() != (d2, d2) {
        return Err(Error::ShapeMismatch { op: "yang_baxter", left: r.shape(), right: (d2, d2) });
    }
    Ok(())
}

/// Max-abs difference between `(R x 1)(1 x R)(R x 1)` and `(1 x R)(R x 1)(1 x R)`.
pub fn yang_baxter_residual(r: &CMatrix, local_dim: usize) -> Result<f64> {
    check_triple(r, local_dim)?;
    let id = CMatrix::identity(local_dim);
    let r1 = tensor(r, &id)?;
    let r2 = tensor(&id, r)?;
    residual(&mul_all(&[&r1, &r2, &r1])?, &mul_all(&[&r2, &r1, &r2])?)
}

pub fn yang_baxter_check(r: &CMatrix, local_dim: usize, tol: Tolerance) -> Result<Report> {
    let mut report = Report::new("ybe", tol.abs_eps).with_param("local_dim", local_dim);
    report.check("yang-baxter", yang_baxter_residual(r, local_dim)?);
    Ok(report)
}

/// `(V x V) R (V x V)^dagger`.
pub fn conjugate_solution(r: &CMatrix, v: &CMatrix) -> Result<CMatrix> {
    let vv = tensor(v, v)?;
    mul_all(&[&vv, r, &dagger(&vv)])
}

/// Controlled-NOT with the control on the first wire.
pub fn cnot() -> CMatrix {
    CMatrix::from_real(
        4,
        4,
        &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0],
    )
    .expect("4x4")
}

pub const MAX_STRANDS: usize = 6;

/// `b_i = 1^(i-1) (x) R (x) 1^(n-i-1)` for `i = 1..n-1`.
pub fn braid_generators(n: usize, r: &CMatrix, local_dim: usize) -> Result<Vec<CMatrix>> {
    if !(2..=MAX_STRANDS).contains(&n) {
        return Err(Error::SizeLimit { dim: n, limit: MAX_STRANDS });
    }
    check_triple(r, local_dim)?;
    (0..n - 1).map(|i| embed(r, &[i, i + 1], n, local_dim)).collect()
}

/// Worst residuals of `b_i b_{i+1} b_i = b_{i+1} b_i b_{i+1}` and of `b_i b_j = b_j b_i`, `|i-j| >= 2`.
fn braid_relation_residuals(gens: &[CMatrix]) -> Result<(f64, f64)> {
    let mut braid = 0.0f64;
    let mut far = 0.0f64;
    for i in 0..gens.len() {
        if i + 1 < gens.len() {
            let (a, b) = (&gens[i], &gens[i + 1]);
            braid = braid.max(residual(&mul_all(&[a, b, a])?, &mul_all(&[b, a, b])?)?);
        }
        for j in i + 2..gens.len() {
            far = far.max(residual(&mul(&gens[i], &gens[j])?, &mul(&gens[j], &gens[i])?)?);
        }
    }
    Ok((braid, far))
}

/// Braid relations for `B(p)` on `n` strands, with CNOT as a control that must break them.
pub fn braid_rep_check(n: usize, p: BellTransformParams, tol: Tolerance) -> Result<Report> {
    let mut report = Report::new("braid", tol.abs_eps).with_param("n", n).with_param("params", p);
    let gens = braid_generators(n, &bell_transform(p), 2)?;
    let (braid, far) = braid_relation_residuals(&gens)?;
    if n >= 3 {
        report.check("braid-relation", braid);
    }
    if n >= 4 {
        report.check("far-commutation", far);
    }
    if n >= 3 {
        let (control, _) = braid_relation_residuals(&braid_generators(3, &cnot(), 2)?)?;
        report.check_above("cnot-control", control, 0.5 - f64::EPSILON);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TLRep {
    pub n: usize,
    pub d: usize,
    pub generators: Vec<CMatrix>,
}

pub const MAX_TL_STRANDS: usize = 5;
pub const MAX_TL_DIM: usize = 4;

/// Projectors onto `|M Omega(a)>` (normalized) on neighbouring strands; `M = 1` when absent.
pub fn tl_generators(n: usize, d: usize, label: (usize, usize), m: Option<&CMatrix>) -> Result<TLRep> {
    if !(2..=MAX_TL_STRANDS).contains(&n) {
        return Err(Error::SizeLimit { dim: n, limit: MAX_TL_STRANDS });
    }
    if !(2..=MAX_TL_DIM).contains(&d) {
        return Err(Error::Dimension(d));
    }
    if label.0 >= d || label.1 >= d {
        return Err(Error::LabelRange(format!("({},{}) for d = {d}", label.0, label.1)));
    }
    let u = GenPauliWord::unphased(d, label.0, label.1)?.matrix();
    let g = match m {
        Some(m) if m.shape() != (d, d) => {
            return Err(Error::ShapeMismatch { op: "tl_generators", left: m.shape(), right: (d, d) })
        }
        Some(m) => mul(m, &u)?,
        None => u,
    };
    let state = vectorize(&g).normalized();
    let proj = CMatrix::outer(&state, &state);
    let generators = (0..n - 1).map(|i| embed(&proj, &[i, i + 1], n, d)).collect::<Result<_>>()?;
    Ok(TLRep { n, d, generators })
}

/// Idempotency, `e_i e_{i+-1} e_i = d^-2 e_i` and far commutation.
pub fn tl_relation_check(rep: &TLRep, tol: Tolerance) -> Result<Report> {
    let mut report = Report::new("tl", tol.abs_eps).with_param("n", rep.n).with_param("d", rep.d);
    let lambda2 = (rep.d * rep.d) as f64;
    let e = &rep.generators;
    let mut idem = 0.0f64;
    let mut adjacent = 0.0f64;
    let mut far = 0.0f64;
    for i in 0..e.len() {
        idem = idem.max(residual(&mul(&e[i], &e[i])?, &e[i])?);
        let target = e[i].scale_real(1.0 / lambda2);
        for j in [i.wrapping_sub(1), i + 1] {
            if j < e.len() {
                adjacent = adjacent.max(residual(&mul_all(&[&e[i], &e[j], &e[i]])?, &target)?);
            }
        }
        for j in i + 2..e.len() {
            far = far.max(residual(&mul(&e[i], &e[j])?, &mul(&e[j], &e[i])?)?);
        }
    }
    report.check("idempotent", idem);
    if e.len() >= 2 {
        report.check("adjacent", adjacent);
    }
    if e.len() >= 3 {
        report.check("far-commutation", far);
    }
    Ok(report)
}

/// Exponents `(a, b, c)` of `U = (-1)^a X^b Z^c` for resource `|km>` and outcome `|ij>`.
pub fn correction_exponents(
    left: BellTransformParams,
    right: BellTransformParams,
    (k, m): (u8, u8),
    (i, j): (u8, u8),
) -> (u8, u8, u8) {
    let (kp, mp) = bell_relabel(left, k, m);
    let (ip, jp) = bell_relabel(right, i, j);
    let a = sign_exponent(left, k, m) ^ sign_exponent(right, i, j) ^ (kp & jp);
    (a, jp ^ mp, ip ^ kp)
}

/// The closed-form row of the correction table for `right = left.inverse()`.
pub fn table_exponents(left: BellTransformParams, (k, m): (u8, u8), (i, j): (u8, u8)) -> (u8, u8, u8) {
    let b = i ^ j ^ k ^ m;
    match (left.epsilon, left.eta) {
        (-1, 1) => ((i & j) ^ ((m ^ 1) & (i ^ j ^ k)), b, j ^ m ^ 1),
        (1, -1) => ((i & (j ^ 1)) ^ (m & (i ^ j ^ k)), b, j ^ m ^ 1),
        (1, 1) => (i ^ ((k ^ 1) & (i ^ j)), b, i ^ k ^ 1),
        _ => (k & (i ^ j ^ 1), b, i ^ k ^ 1),
    }
}

/// Number of `(i, j, k, m)` where the general exponents and the table row disagree.
pub fn table_mismatches(left: BellTransformParams) -> usize {
    let mut bad = 0;
    for bits in 0..16u8 {
        let (i, j, k, m) = (bits >> 3 & 1, bits >> 2 & 1, bits >> 1 & 1, bits & 1);
        if correction_exponents(left, left.inverse(), (k, m), (i, j)) != table_exponents(left, (k, m), (i, j)) {
            bad += 1;
        }
    }
    bad
}

fn single_word(alpha: u8, beta: u8) -> PauliWord {
    PauliWord::t(&BitString::new(vec![alpha]).expect("bit"), &BitString::new(vec![beta]).expect("bit"))
        .expect("one qubit")
}

fn abc_matrix(a: u8, b: u8, c: u8) -> Result<CMatrix> {
    let x = pauli_gate("X")?.pow(b as usize)?;
    let z = pauli_gate("Z")?.pow(c as usize)?;
    let u = mul(&x, &z)?;
    Ok(if a == 1 { u.scale_real(-1.0) } else { u })
}

/// Columns are the images of `|0>`, `|1>` under `psi -> (B(right)^dagger x 1)(1 x B(left))(psi x |km>)`.
fn single_lhs(left: BellTransformParams, right: BellTransformParams, k: u8, m: u8) -> Result<CMatrix> {
    let id2 = CMatrix::identity(2);
    let resource = CMatrix::basis_ket(4, (k * 2 + m) as usize);
    let prepared = tensor(&id2, &resource)?;
    let lifted_left = tensor(&id2, &bell_transform(left))?;
    let lifted_right = tensor(&bell_transform(right.inverse()), &id2)?;
    mul_all(&[&lifted_right, &lifted_left, &prepared])
}

/// `(1/2) sum_ij |ij> (x) U_ij` as an `8 x 2` operator.
fn outcome_sum(n: usize, blocks: &[(usize, CMatrix)]) -> Result<CMatrix> {
    let dim = 1usize << n;
    let out_dim = dim * dim;
    let mut acc = CMatrix::zeros(out_dim * dim, dim);
    for (index, u) in blocks {
        acc = acc.add(&tensor(&CMatrix::basis_ket(out_dim, *index), u)?)?;
    }
    Ok(acc.scale_real(1.0 / dim as f64))
}

/// The single-qubit braid teleportation equation for resource `|km>`, checked as an
/// operator identity on the teleported qubit.
pub fn braid_teleport_single_check(
    left: BellTransformParams,
    right: BellTransformParams,
    k: u8,
    m: u8,
    tol: Tolerance,
) -> Result<Report> {
    if k > 1 || m > 1 {
        return Err(Error::LabelRange(format!("resource |{k}{m}>")));
    }
    let mut report = Report::new("braid-teleport-single", tol.abs_eps)
        .with_param("left", left)
        .with_param("right", right)
        .with_param("resource", format!("{k}{m}"));
    let (kp, mp) = bell_relabel(left, k, m);
    let mut blocks = Vec::with_capacity(4);
    let mut form_gap = 0.0f64;
    for i in 0..2u8 {
        for j in 0..2u8 {
            let (a, b, c) = correction_exponents(left, right, (k, m), (i, j));
            let u = abc_matrix(a, b, c)?;
            let (ip, jp) = bell_relabel(right, i, j);
            let sign = sign_exponent(left, k, m) ^ sign_exponent(right, i, j);
            let word = single_word(kp, mp).dagger().mul(&single_word(ip, jp).dagger())?;
            form_gap = form_gap.max(residual(&word.with_sign(word.sign() ^ sign).matrix()?, &u)?);
            blocks.push(((i * 2 + j) as usize, u));
        }
    }
    report.check("abc-form", form_gap);
    let lhs = single_lhs(left, right, k, m)?;
    report.check("equation", residual(&lhs, &outcome_sum(1, &blocks)?)?);
    if right == left.inverse() {
        report.check_below("table-row", table_mismatches(left) as f64, 0.5);
    }
    Ok(report)
}

/// Per-pair sign strings, each sign stored as `(1 + s) / 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignString {
    pub eps: BitString,
    pub eta: BitString,
}

impl SignString {
    pub fn new(eps: BitString, eta: BitString) -> Result<Self> {
        if eps.len() != eta.len() {
            return Err(Error::LengthMismatch { expected: eps.len(), got: eta.len() });
        }
        Ok(Self { eps, eta })
    }

    pub fn uniform(n: usize, p: BellTransformParams) -> Self {
        let (e, h) = p.bits();
        Self { eps: BitString::new(vec![e; n]).expect("bits"), eta: BitString::new(vec![h; n]).expect("bits") }
    }

    pub fn len(&self) -> usize {
        self.eps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eps.is_empty()
    }

    pub fn params(&self, k: usize) -> BellTransformParams {
        BellTransformParams::from_bits(self.eps.get(k), self.eta.get(k))
    }
}

impl fmt::Display for SignString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.len()).map(|k| self.params(k).to_string()).collect();
        f.write_str(&parts.join(""))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwistKind {
    /// `tau (x)_i B_i`, acting on interleaved pairs.
    Plain,
    /// `tau (x)_i B_i tau^dagger`, acting on blocked registers.
    Conjugated,
}

impl fmt::Display for TwistKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TwistKind::Plain => "plain",
            TwistKind::Conjugated => "conjugated",
        })
    }
}

pub const MAX_TWISTED_PAIRS: usize = 3;

pub fn twisted_yb_gates(signs: &SignString, kind: TwistKind) -> Result<CMatrix> {
    let n = signs.len();
    if n == 0 || n > MAX_TWISTED_PAIRS {
        return Err(Error::SizeLimit { dim: n, limit: MAX_TWISTED_PAIRS });
    }
    let pairs: Vec<CMatrix> = (0..n).map(|k| bell_transform(signs.params(k))).collect();
    let tau = twist(n)?;
    let plain = mul(&tau, &tensor_all(&pairs)?)?;
    match kind {
        TwistKind::Plain => Ok(plain),
        TwistKind::Conjugated => mul(&plain, &dagger(&tau)),
    }
}

/// Index of `(x)_k |x_k y_k>` (interleaved) or `|x>|y>` (blocked).
fn pair_index(x: &BitString, y: &BitString, kind: TwistKind) -> usize {
    let n = x.len();
    match kind {
        TwistKind::Conjugated => (x.to_index() << n) | y.to_index(),
        TwistKind::Plain => (0..n).fold(0, |acc, k| (acc << 2) | ((x.get(k) as usize) << 1) | y.get(k) as usize),
    }
}

fn relabel_strings(signs: &SignString, x: &BitString, y: &BitString) -> (BitString, BitString, u8) {
    let mut xp = Vec::with_capacity(x.len());
    let mut yp = Vec::with_capacity(x.len());
    let mut f = 0u8;
    for k in 0..x.len() {
        let p = signs.params(k);
        let (a, b) = bell_relabel(p, x.get(k), y.get(k));
        xp.push(a);
        yp.push(b);
        f ^= sign_exponent(p, x.get(k), y.get(k));
    }
    (BitString::new(xp).expect("bits"), BitString::new(yp).expect("bits"), f)
}

/// `U = (-1)^(sum f_l + sum f_r) T_n^dagger(a'b') T_n^dagger(alpha'beta')`.
pub fn multi_correction(
    left: &SignString,
    right: &SignString,
    (a, b): (&BitString, &BitString),
    (alpha, beta): (&BitString, &BitString),
) -> Result<PauliWord> {
    let (ap, bp, fl) = relabel_strings(left, a, b);
    let (alp, bep, fr) = relabel_strings(right, alpha, beta);
    let w = PauliWord::t(&ap, &bp)?.dagger().mul(&PauliWord::t(&alp, &bep)?.dagger())?;
    Ok(w.with_sign(w.sign() ^ fl ^ fr))
}

/// Applies `(G_r^dagger x 1)(1 x G_l)` to `psi (x) resource` for every computational `psi`.
fn multi_lhs(gl: &CMatrix, gr_dag: &CMatrix, resource: &CMatrix, n: usize) -> Result<CMatrix> {
    let dim = 1usize << n;
    let id = CMatrix::identity(dim);
    let prepared = tensor(&id, resource)?;
    let after_left = mul(&tensor(&id, gl)?, &prepared)?;
    mul(&tensor(gr_dag, &id)?, &after_left)
}

fn check_multi_args(n: usize, left: &SignString, right: &SignString, a: &BitString, b: &BitString) -> Result<()> {
    if n == 0 || n > MAX_TWISTED_PAIRS {
        return Err(Error::SizeLimit { dim: n, limit: MAX_TWISTED_PAIRS });
    }
    for len in [left.len(), right.len(), a.len(), b.len()] {
        if len != n {
            return Err(Error::LengthMismatch { expected: n, got: len });
        }
    }
    Ok(())
}

/// The n-qubit braid teleportation equation with twisted gates of `kind`, as an
/// operator identity on the teleported register.
pub fn braid_teleport_multi_check(
    left: &SignString,
    right: &SignString,
    a: &BitString,
    b: &BitString,
    kind: TwistKind,
    tol: Tolerance,
) -> Result<Report> {
    let n = left.len();
    check_multi_args(n, left, right, a, b)?;
    let mut report = Report::new("braid-teleport-multi", tol.abs_eps)
        .with_param("n", n)
        .with_param("kind", kind)
        .with_param("left", left)
        .with_param("right", right)
        .with_param("resource", format!("{a}{b}"));
    let gl = twisted_yb_gates(left, kind)?;
    let gr_dag = dagger(&twisted_yb_gates(right, kind)?);
    let resource = CMatrix::basis_ket(1 << (2 * n), pair_index(a, b, kind));
    let lhs = multi_lhs(&gl, &gr_dag, &resource, n)?;
    let mut blocks = Vec::with_capacity(1 << (2 * n));
    for alpha in BitString::all(n) {
        for beta in BitString::all(n) {
            let u = multi_correction(left, right, (a, b), (&alpha, &beta))?.matrix()?;
            blocks.push((pair_index(&alpha, &beta, kind), u));
        }
    }
    report.check("equation", residual(&lhs, &outcome_sum(n, &blocks)?)?);
    Ok(report)
}

/// The two worked forms with resource `|11>^n` and `B(-1,1)` on the left pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Specialization {
    /// Right pairs `(-1,1)`: sign `sum alpha (beta + 1)`, `alpha' = beta + 1`.
    Same,
    /// Right pairs `(1,-1)`: sign `sum alpha beta`, `alpha' = beta`.
    Opposite,
}

impl Specialization {
    pub fn right(&self) -> BellTransformParams {
        match self {
            Specialization::Same => BellTransformParams { epsilon: -1, eta: 1 },
            Specialization::Opposite => BellTransformParams { epsilon: 1, eta: -1 },
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Specialization::Same => "same",
            Specialization::Opposite => "opposite",
        }
    }

    /// Closed-form correction for outcome `|alpha beta>`.
    pub fn correction(&self, alpha: &BitString, beta: &BitString) -> Result<PauliWord> {
        let (prime, sign) = match self {
            Specialization::Same => (beta.complement(), alpha.dot(&beta.complement())?),
            Specialization::Opposite => (beta.clone(), alpha.dot(beta)?),
        };
        let w = PauliWord::t(&prime, &alpha.xor(beta)?)?.dagger();
        Ok(w.with_sign(w.sign() ^ sign))
    }
}

/// Checks a worked form against operators written out explicitly as
/// `B^n(.) tau^dagger` and `tau B^n(-1,1)`, in both gate kinds.
pub fn specialization_check(n: usize, form: Specialization, tol: Tolerance) -> Result<Report> {
    if n == 0 || n > MAX_TWISTED_PAIRS {
        return Err(Error::SizeLimit { dim: n, limit: MAX_TWISTED_PAIRS });
    }
    let mut report = Report::new("braid-teleport-form", tol.abs_eps)
        .with_param("n", n)
        .with_param("form", form.name());
    let b_left = BellTransformParams { epsilon: -1, eta: 1 };
    let left = SignString::uniform(n, b_left);
    let right = SignString::uniform(n, form.right());
    let ones = BitString::new(vec![1; n])?;
    let tau = twist(n)?;
    let left_op = mul(&tau, &tensor_all(&vec![bell_transform(b_left); n])?)?;
    let right_op = mul(&tensor_all(&vec![bell_transform(form.right().inverse()); n])?, &dagger(&tau))?;
    report.check("left-gate", residual(&left_op, &twisted_yb_gates(&left, TwistKind::Plain)?)?);
    report.check("right-gate", residual(&right_op, &dagger(&twisted_yb_gates(&right, TwistKind::Plain)?))?);

    let mut symbolic = 0.0f64;
    let mut blocks = Vec::new();
    for alpha in BitString::all(n) {
        for beta in BitString::all(n) {
            let closed = form.correction(&alpha, &beta)?;
            let general = multi_correction(&left, &right, (&ones, &ones), (&alpha, &beta))?;
            symbolic = symbolic.max(if closed == general { 0.0 } else { 1.0 });
            blocks.push((pair_index(&alpha, &beta, TwistKind::Plain), closed.matrix()?));
        }
    }
    report.check("symbolic-correction", symbolic);
    let resource = CMatrix::basis_ket(1 << (2 * n), pair_index(&ones, &ones, TwistKind::Plain));
    let lhs = multi_lhs(&left_op, &right_op, &resource, n)?;
    report.check("equation", residual(&lhs, &outcome_sum(n, &blocks)?)?);
    report.absorb(
        "conjugated",
        braid_teleport_multi_check(&left, &right, &ones, &ones, TwistKind::Conjugated, tol)?,
    );
    Ok(report)
}
