//! Bell-state families, the twist operator, preparation circuits, Bell-basis
//! expansion and the generalized concurrence.
//!
//! Multi-qubit constructors return blocked order: the first `n` wires are the
//! `i` block, the last `n` the `j` block. [`twist`] maps interleaved order to blocked.

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::{embed, mul, permutation_matrix, residual, tensor_all, CMatrix, Tolerance, C64, ZERO};
use crate::pauli::{BitString, GenPauliWord, PauliWord};
use crate::random::{random_state, rng};
use crate::report::Report;

/// Largest pair count for multi-qubit constructors.
pub const MAX_PAIRS: usize = 6;

fn check_pairs(n: usize) -> Result<()> {
    if n == 0 || n > MAX_PAIRS {
        return Err(Error::SizeLimit { dim: n, limit: MAX_PAIRS });
    }
    Ok(())
}

/// `(1/sqrt d) sum_i |ii>`.
pub fn omega(d: usize) -> Result<CMatrix> {
    if d < 2 {
        return Err(Error::Dimension(d));
    }
    Ok(vectorize(&CMatrix::identity(d)))
}

/// `(U (x) 1)|Omega>`: the amplitude on `|r c>` is `U[r, c] / sqrt d`.
pub fn vectorize(u: &CMatrix) -> CMatrix {
    let d = u.rows();
    let s = 1.0 / (d as f64).sqrt();
    CMatrix::column(u.data().iter().map(|a| a * s).collect())
}

/// `(Z^alpha X^beta (x) 1)|phi>`.
pub fn bell2(alpha: u8, beta: u8) -> Result<CMatrix> {
    if alpha > 1 || beta > 1 {
        return Err(Error::LabelRange(format!("qubit Bell label ({alpha},{beta})")));
    }
    let w = PauliWord::new(BitString::new(vec![alpha])?, BitString::new(vec![beta])?, 0)?;
    Ok(vectorize(&w.matrix()?))
}

/// `(Z^alpha X^beta (x) 1)|Omega>` in dimension `d`.
pub fn qudit_bell(d: usize, alpha: usize, beta: usize) -> Result<CMatrix> {
    Ok(vectorize(&GenPauliWord::unphased(d, alpha, beta)?.matrix()))
}

/// Wire permutation taking interleaved `i1 j1 ... in jn` to blocked `i1..in j1..jn`.
pub fn twist_permutation(n: usize) -> Vec<usize> {
    (0..2 * n).map(|q| if q % 2 == 0 { q / 2 } else { n + q / 2 }).collect()
}

pub fn twist(n: usize) -> Result<CMatrix> {
    check_pairs(n)?;
    permutation_matrix(&twist_permutation(n), 2)
}

/// Adjacent-SWAP circuit for the twist: for `k = n-1` down to `1`, carry the
/// `j_k` wire right past the `i` wires that follow it.
pub fn twist_decomposition(n: usize) -> Result<Circuit> {
    check_pairs(n)?;
    let mut c = Circuit::new(2 * n)?;
    for k in (1..n).rev() {
        for w in (2 * k - 1)..(n + k - 1) {
            c.push(Gate::Swap(w, w + 1))?;
        }
    }
    Ok(c)
}

fn check_label(n: usize, alpha: &BitString, beta: &BitString) -> Result<()> {
    check_pairs(n)?;
    for s in [alpha, beta] {
        if s.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: s.len() });
        }
    }
    Ok(())
}

/// `(T_n(alpha beta) (x) 1)|B_2n>`, blocked order.
pub fn multi_bell(n: usize, alpha: &BitString, beta: &BitString) -> Result<CMatrix> {
    check_label(n, alpha, beta)?;
    Ok(vectorize(&PauliWord::t(alpha, beta)?.matrix()?))
}

/// Hadamards on the first block, a CNOT ladder into the second, then the word on
/// the first block (X before Z on each wire).
pub fn prep_circuit(n: usize, alpha: &BitString, beta: &BitString) -> Result<Circuit> {
    check_label(n, alpha, beta)?;
    let mut c = Circuit::new(2 * n)?;
    for k in 0..n {
        c.push(Gate::H(k))?;
    }
    for k in 0..n {
        c.push(Gate::Cnot { control: k, target: n + k })?;
    }
    for k in 0..n {
        if beta.get(k) == 1 {
            c.push(Gate::X(k))?;
        }
        if alpha.get(k) == 1 {
            c.push(Gate::Z(k))?;
        }
    }
    Ok(c)
}

/// `(|j l> + s |~j ~l>)/sqrt 2` with `s = +1` when `plus`.
pub fn ghz(n: usize, j: &BitString, l: &BitString, plus: bool) -> Result<CMatrix> {
    check_label(n, j, l)?;
    let dim = 1usize << (2 * n);
    let lo = (j.to_index() << n) | l.to_index();
    let hi = (j.complement().to_index() << n) | l.complement().to_index();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![ZERO; dim];
    amps[lo] = C64::new(r, 0.0);
    amps[hi] = C64::new(if plus { r } else { -r }, 0.0);
    Ok(CMatrix::column(amps))
}

/// Amplitudes `d(alpha beta) = <B(alpha beta)|psi>`, indexed by `alpha * 2^n + beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct BellExpansion {
    pub n: usize,
    pub amplitudes: Vec<C64>,
}

impl BellExpansion {
    pub fn amplitude(&self, alpha: &BitString, beta: &BitString) -> C64 {
        self.amplitudes[(alpha.to_index() << self.n) | beta.to_index()]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn reconstruct(&self) -> Result<CMatrix> {
        let n = self.n;
        let dim = 1usize << (2 * n);
        let mut out = CMatrix::zeros(dim, 1);
        for (idx, &d) in self.amplitudes.iter().enumerate() {
            if d == ZERO {
                continue;
            }
            let alpha = BitString::from_index(idx >> n, n);
            let beta = BitString::from_index(idx & ((1 << n) - 1), n);
            out = out.add(&multi_bell(n, &alpha, &beta)?.scale(d))?;
        }
        Ok(out)
    }
}

fn check_state(state: &CMatrix, n: usize) -> Result<()> {
    check_pairs(n)?;
    let dim = 1usize << (2 * n);
    if state.shape() != (dim, 1) {
        return Err(Error::ShapeMismatch { op: "bell expansion", left: state.shape(), right: (dim, 1) });
    }
    state.ensure_state()
}

pub fn expand_in_bell_basis(state: &CMatrix, n: usize) -> Result<BellExpansion> {
    check_state(state, n)?;
    let mut amplitudes = Vec::with_capacity(1 << (2 * n));
    for alpha in BitString::all(n) {
        for beta in BitString::all(n) {
            amplitudes.push(multi_bell(n, &alpha, &beta)?.inner(state)?);
        }
    }
    Ok(BellExpansion { n, amplitudes })
}

/// `|sum (-1)^(sum_k alpha_k xor beta_k) d(alpha beta)^2|`.
pub fn concurrence(state: &CMatrix, n: usize) -> Result<f64> {
    let e = expand_in_bell_basis(state, n)?;
    let mut sum = ZERO;
    for (idx, d) in e.amplitudes.iter().enumerate() {
        let parity = ((idx >> n) ^ (idx & ((1 << n) - 1))).count_ones() & 1;
        let term = d * d;
        sum += if parity == 0 { term } else { -term };
    }
    Ok(sum.norm())
}

/// `|<psi~|psi>|` with `psi~ = (ZX)^(x)2n |psi*>`, evaluated on the computational basis.
pub fn concurrence_oracle(state: &CMatrix, n: usize) -> Result<f64> {
    check_state(state, n)?;
    let dim = 1usize << (2 * n);
    let all = dim - 1;
    let amps = state.data();
    // ZX|b> = (-1)^(1-b) |1-b>
    let mut sum = ZERO;
    for s in 0..dim {
        let flipped = s ^ all;
        let sign = if flipped.count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
        sum += amps[flipped] * amps[s] * sign;
    }
    Ok(sum.norm())
}

/// Adjacent-SWAP decomposition, its gate count, and the twist acting on products of Bell pairs.
pub fn twist_check(n: usize, tol: Tolerance) -> Result<Report> {
    let mut report = Report::new("twist", tol.abs_eps).with_param("n", n);
    let tau = twist(n)?;
    let circuit = twist_decomposition(n)?;
    report.check("decomposition", residual(&circuit.to_matrix()?, &tau)?);
    let expected = n * (n - 1) / 2;
    report.check_below("swap-count", circuit.count("swap").abs_diff(expected) as f64, 0.5);
    let mut worst = 0.0f64;
    for alpha in BitString::all(n) {
        for beta in BitString::all(n) {
            let pairs = (0..n).map(|k| bell2(alpha.get(k), beta.get(k))).collect::<Result<Vec<_>>>()?;
            let twisted = mul(&tau, &tensor_all(&pairs)?)?;
            worst = worst.max(residual(&twisted, &multi_bell(n, &alpha, &beta)?)?);
        }
    }
    report.check("bell-pairs", worst);
    if n == 2 {
        let swap = permutation_matrix(&[1, 0], 2)?;
        report.check("middle-swap", residual(&tau, &embed(&swap, &[1, 2], 4, 2)?)?);
    }
    Ok(report)
}

/// Concurrence against the spin-flip oracle on random states, and its value on
/// Bell states, product kets and GHZ states.
pub fn concurrence_suite(n: usize, samples: usize, seed: u64, tol: Tolerance) -> Result<Report> {
    const BOUND: f64 = 1e-10;
    let mut report = Report::new("concurrence", tol.abs_eps)
        .with_param("n", n)
        .with_param("samples", samples)
        .with_seed(seed);
    check_pairs(n)?;
    let dim = 1usize << (2 * n);
    let mut g = rng(seed);
    let mut agree = 0.0f64;
    for _ in 0..samples {
        let s = random_state(dim, &mut g);
        agree = agree.max((concurrence(&s, n)? - concurrence_oracle(&s, n)?).abs());
    }
    report.check_below("oracle-agreement", agree, BOUND);
    let mut bell = 0.0f64;
    for alpha in BitString::all(n) {
        for beta in BitString::all(n) {
            bell = bell.max((1.0 - concurrence(&multi_bell(n, &alpha, &beta)?, n)?).abs());
        }
    }
    report.check_below("bell-states", bell, BOUND);
    let mut product = 0.0f64;
    for index in [0, dim - 1, dim / 3, dim / 2 + 1] {
        product = product.max(concurrence(&CMatrix::basis_ket(dim, index), n)?);
    }
    report.check_below("product-kets", product, BOUND);
    let mut greenberger = 0.0f64;
    let pattern = BitString::from_index(0b0101_0101 & ((1 << n) - 1), n);
    for (j, l) in [(BitString::zeros(n), BitString::zeros(n)), (pattern.clone(), pattern.complement())] {
        for plus in [true, false] {
            greenberger = greenberger.max((1.0 - concurrence(&ghz(n, &j, &l, plus)?, n)?).abs());
        }
    }
    report.check_below("ghz-states", greenberger, BOUND);
    Ok(report)
}
