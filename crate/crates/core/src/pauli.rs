//! Qubit Pauli gates, clock and shift matrices, and exact phase bookkeeping for
//! Pauli words.
//!
//! A [`PauliWord`] is `(-1)^s Z^a1 X^b1 (x) ... (x) Z^an X^bn`. A [`GenPauliWord`] is
//! `w^g Z^a X^b` for the clock `Z` and shift `X` of dimension `d`, `w = exp(2 pi i / d)`.
//! Products and adjoints are computed on the exponents, so signs never drift.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{dagger, hs_inner, mul, residual, CMatrix, Tolerance, C64, ONE, ZERO};
use crate::report::Report;

/// Fixed-length word over {0,1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    bits: Vec<u8>,
}

impl BitString {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidParam("bit string must be nonempty".into()));
        }
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::LabelRange(format!("bit value {b}")));
        }
        Ok(Self { bits })
    }

    pub fn zeros(n: usize) -> Self {
        Self { bits: vec![0; n.max(1)] }
    }

    /// Big-endian: the first bit is the most significant.
    pub fn from_index(value: usize, n: usize) -> Self {
        Self { bits: (0..n).map(|k| ((value >> (n - 1 - k)) & 1) as u8).collect() }
    }

    pub fn to_index(&self) -> usize {
        self.bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, k: usize) -> u8 {
        self.bits[k]
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        self.same_len(other)?;
        Ok(Self { bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect() })
    }

    /// `a_1 b_1 (+) ... (+) a_n b_n`.
    pub fn dot(&self, other: &BitString) -> Result<u8> {
        self.same_len(other)?;
        Ok(self.bits.iter().zip(&other.bits).fold(0, |acc, (a, b)| acc ^ (a & b)))
    }

    /// Every bit flipped.
    pub fn complement(&self) -> BitString {
        Self { bits: self.bits.iter().map(|b| b ^ 1).collect() }
    }

    /// All `2^n` strings of length `n`, in increasing index order.
    pub fn all(n: usize) -> impl Iterator<Item = BitString> {
        (0..1usize << n).map(move |v| BitString::from_index(v, n))
    }

    fn same_len(&self, other: &BitString) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch { expected: self.len(), got: other.len() });
        }
        Ok(())
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::LabelRange(format!("`{other}` in bit string `{s}`"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        BitString::new(bits)
    }
}

/// `exp(2 pi i k / d)`, evaluated per call from `k mod d`. Quarter turns are exact.
pub fn omega_pow(d: usize, k: i64) -> C64 {
    let d = d as i64;
    let k = k.rem_euclid(d);
    if (4 * k) % d == 0 {
        return match (4 * k) / d {
            0 => ONE,
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    C64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64)
}

/// The 2x2 gates I, X, Z and H.
pub fn pauli_gate(name: &str) -> Result<CMatrix> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let data: [f64; 4] = match name {
        "I" | "i" => [1.0, 0.0, 0.0, 1.0],
        "X" | "x" => [0.0, 1.0, 1.0, 0.0],
        "Z" | "z" => [1.0, 0.0, 0.0, -1.0],
        "H" | "h" => [r, r, r, -r],
        other => return Err(Error::UnknownGate(other.to_string())),
    };
    CMatrix::from_real(2, 2, &data)
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::Dimension(d))
    } else {
        Ok(())
    }
}

/// Shift matrix: `X|i> = |i+1 mod d>`.
pub fn gen_x(d: usize) -> Result<CMatrix> {
    check_dim(d)?;
    let mut m = CMatrix::zeros(d, d);
    for i in 0..d {
        m[((i + 1) % d, i)] = ONE;
    }
    Ok(m)
}

/// Clock matrix: `Z|i> = w^i |i>`.
pub fn gen_z(d: usize) -> Result<CMatrix> {
    check_dim(d)?;
    Ok(CMatrix::from_diag(&(0..d).map(|i| omega_pow(d, i as i64)).collect::<Vec<_>>()))
}

/// `w^gamma Z^alpha X^beta` with all exponents taken mod `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GenPauliWord {
    pub d: usize,
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
}

impl GenPauliWord {
    pub fn new(d: usize, alpha: i64, beta: i64, gamma: i64) -> Result<Self> {
        check_dim(d)?;
        let m = d as i64;
        Ok(Self {
            d,
            alpha: alpha.rem_euclid(m) as usize,
            beta: beta.rem_euclid(m) as usize,
            gamma: gamma.rem_euclid(m) as usize,
        })
    }

    /// `U_{alpha beta}` with no extra phase; labels must already lie in `0..d`.
    pub fn unphased(d: usize, alpha: usize, beta: usize) -> Result<Self> {
        check_dim(d)?;
        if alpha >= d || beta >= d {
            return Err(Error::LabelRange(format!("({alpha},{beta}) for d = {d}")));
        }
        Ok(Self { d, alpha, beta, gamma: 0 })
    }

    pub fn identity(d: usize) -> Result<Self> {
        Self::unphased(d, 0, 0)
    }

    pub fn matrix(&self) -> CMatrix {
        gen_word_matrix(self)
    }

    /// `X^b Z^a = w^(-ab) Z^a X^b` gives the exponent rule for products.
    pub fn mul(&self, other: &GenPauliWord) -> Result<GenPauliWord> {
        if self.d != other.d {
            return Err(Error::LengthMismatch { expected: self.d, got: other.d });
        }
        let (a1, b1, g1) = (self.alpha as i64, self.beta as i64, self.gamma as i64);
        let (a2, b2, g2) = (other.alpha as i64, other.beta as i64, other.gamma as i64);
        GenPauliWord::new(self.d, a1 + a2, b1 + b2, g1 + g2 - b1 * a2)
    }

    /// Adjoint via `w^((d-1) g + (d-1)^3 a b) U_{(d-1)a, (d-1)b}`.
    pub fn dagger(&self) -> GenPauliWord {
        let d = self.d as i64;
        let (a, b, g) = (self.alpha as i64, self.beta as i64, self.gamma as i64);
        let dm1 = (d - 1).rem_euclid(d);
        let cube = (dm1 * dm1 % d) * dm1 % d;
        GenPauliWord::new(self.d, dm1 * a, dm1 * b, dm1 * g + cube * (a * b % d))
            .expect("dimension already validated")
    }

    /// The adjoint from first principles: `w^(-g - ab) Z^(-a) X^(-b)`.
    pub fn dagger_direct(&self) -> GenPauliWord {
        let (a, b, g) = (self.alpha as i64, self.beta as i64, self.gamma as i64);
        GenPauliWord::new(self.d, -a, -b, -g - a * b).expect("dimension already validated")
    }

    /// `(Z^a X^b)^T = X^(-b) Z^a = w^(ab) Z^a X^(-b)`.
    pub fn transpose(&self) -> GenPauliWord {
        let (a, b, g) = (self.alpha as i64, self.beta as i64, self.gamma as i64);
        GenPauliWord::new(self.d, a, -b, g + a * b).expect("dimension already validated")
    }

    /// Position in alpha-major order.
    pub fn index(&self) -> usize {
        self.alpha * self.d + self.beta
    }

    /// All `d^2` unphased words, alpha-major.
    pub fn all_unphased(d: usize) -> Result<Vec<GenPauliWord>> {
        check_dim(d)?;
        Ok((0..d)
            .flat_map(|a| (0..d).map(move |b| GenPauliWord { d, alpha: a, beta: b, gamma: 0 }))
            .collect())
    }

    /// All `d^3` phased words.
    pub fn all_phased(d: usize) -> Result<Vec<GenPauliWord>> {
        check_dim(d)?;
        let mut out = Vec::with_capacity(d * d * d);
        for g in 0..d {
            for a in 0..d {
                for b in 0..d {
                    out.push(GenPauliWord { d, alpha: a, beta: b, gamma: g });
                }
            }
        }
        Ok(out)
    }
}

/// `w^gamma Z^alpha X^beta`: column `i` carries `w^(gamma + alpha (i + beta))` at row `i + beta`.
pub fn gen_word_matrix(w: &GenPauliWord) -> CMatrix {
    let d = w.d;
    let mut m = CMatrix::zeros(d, d);
    for i in 0..d {
        let row = (i + w.beta) % d;
        m[(row, i)] = omega_pow(d, (w.gamma + w.alpha * row) as i64);
    }
    m
}

/// `(-1)^sign (x)_k Z^{z_k} X^{x_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliWord {
    z: BitString,
    x: BitString,
    sign: u8,
}

/// Largest qubit count for which [`word_matrix`] will materialize a matrix.
pub const MAX_WORD_QUBITS: usize = 12;

impl PauliWord {
    pub fn new(z: BitString, x: BitString, sign: u8) -> Result<Self> {
        if z.len() != x.len() {
            return Err(Error::LengthMismatch { expected: z.len(), got: x.len() });
        }
        if sign > 1 {
            return Err(Error::LabelRange(format!("sign exponent {sign}")));
        }
        Ok(Self { z, x, sign })
    }

    /// `T_n(alpha beta)` with no sign.
    pub fn t(alpha: &BitString, beta: &BitString) -> Result<Self> {
        Self::new(alpha.clone(), beta.clone(), 0)
    }

    pub fn identity(n: usize) -> Self {
        Self { z: BitString::zeros(n), x: BitString::zeros(n), sign: 0 }
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn z_exps(&self) -> &BitString {
        &self.z
    }

    pub fn x_exps(&self) -> &BitString {
        &self.x
    }

    pub fn sign(&self) -> u8 {
        self.sign
    }

    pub fn negated(&self) -> Self {
        Self { sign: self.sign ^ 1, ..self.clone() }
    }

    pub fn with_sign(&self, sign: u8) -> Self {
        Self { sign: sign & 1, ..self.clone() }
    }

    pub fn matrix(&self) -> Result<CMatrix> {
        word_matrix(self)
    }

    /// `T^dagger = (-1)^(alpha . beta) T`.
    pub fn dagger(&self) -> Self {
        let flip = self.z.dot(&self.x).expect("equal lengths by construction");
        Self { sign: self.sign ^ flip, ..self.clone() }
    }

    /// Transpose equals the adjoint: every factor is real.
    pub fn transpose(&self) -> Self {
        self.dagger()
    }

    pub fn mul(&self, other: &PauliWord) -> Result<PauliWord> {
        word_mul(self, other)
    }

    /// The `4^n` unsigned words, alpha-major.
    pub fn all_unsigned(n: usize) -> Vec<PauliWord> {
        BitString::all(n)
            .flat_map(|a| BitString::all(n).map(move |b| PauliWord::t(&a, &b).expect("same length")))
            .collect()
    }

    /// The `2 * 4^n` signed words.
    pub fn all_signed(n: usize) -> Vec<PauliWord> {
        let base = Self::all_unsigned(n);
        base.iter().cloned().chain(base.iter().map(PauliWord::negated)).collect()
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.sign == 1 { "-" } else { "+" })?;
        for k in 0..self.n() {
            let s = match (self.z.get(k), self.x.get(k)) {
                (0, 0) => "I",
                (0, 1) => "X",
                (1, 0) => "Z",
                _ => "ZX",
            };
            if k > 0 {
                write!(f, ".")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Matrix of a qubit word. Entries are exactly 0 or +-1.
pub fn word_matrix(w: &PauliWord) -> Result<CMatrix> {
    let n = w.n();
    if n > MAX_WORD_QUBITS {
        return Err(Error::SizeLimit { dim: n, limit: MAX_WORD_QUBITS });
    }
    let dim = 1usize << n;
    let zmask = w.z.to_index();
    let xmask = w.x.to_index();
    let mut m = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        // Z^a X^b |c> = (-1)^{a . (c xor b)} |c xor b>
        let row = col ^ xmask;
        let parity = ((row & zmask).count_ones() as u8 + w.sign) & 1;
        m[(row, col)] = if parity == 0 { ONE } else { -ONE };
    }
    Ok(m)
}

/// `Z^a X^b Z^c X^e = (-1)^(b . c) Z^(a+c) X^(b+e)`, factor by factor.
pub fn word_mul(a: &PauliWord, b: &PauliWord) -> Result<PauliWord> {
    if a.n() != b.n() {
        return Err(Error::LengthMismatch { expected: a.n(), got: b.n() });
    }
    let sign = a.sign ^ b.sign ^ a.x.dot(&b.z)?;
    PauliWord::new(a.z.xor(&b.z)?, a.x.xor(&b.x)?, sign)
}

/// Checks that `elements` form a basis group: unitary members, closure under products
/// and adjoints, and Hilbert-Schmidt orthonormal coset representatives.
pub fn basis_group_check(elements: &[CMatrix], tol: Tolerance) -> Result<Report> {
    let first = elements.first().ok_or_else(|| Error::InvalidParam("empty element set".into()))?;
    let d = first.rows();
    let mut report = Report::new("basis-group", tol.abs_eps)
        .with_param("d", d)
        .with_param("elements", elements.len());
    for e in elements {
        if e.shape() != (d, d) {
            return Err(Error::ShapeMismatch { op: "basis_group_check", left: e.shape(), right: (d, d) });
        }
    }

    let unitarity = elements.iter().map(CMatrix::unitarity_defect).fold(0.0, f64::max);
    report.check("unitary", unitarity);

    let distance_to_set = |m: &CMatrix| -> f64 {
        elements
            .iter()
            .map(|e| residual(e, m).expect("same shape"))
            .fold(f64::INFINITY, f64::min)
    };

    let mut worst = (0.0f64, 0usize, 0usize);
    for (i, a) in elements.iter().enumerate() {
        for (j, b) in elements.iter().enumerate() {
            let dist = distance_to_set(&mul(a, b)?);
            if dist > worst.0 {
                worst = (dist, i, j);
            }
        }
    }
    let id = if tol.accepts(worst.0) { "closure-product".to_string() } else { format!("closure-product({},{})", worst.1, worst.2) };
    report.check(id, worst.0);

    let mut worst_dag = (0.0f64, 0usize);
    for (i, a) in elements.iter().enumerate() {
        let dist = distance_to_set(&dagger(a));
        if dist > worst_dag.0 {
            worst_dag = (dist, i);
        }
    }
    let id = if tol.accepts(worst_dag.0) { "closure-dagger".to_string() } else { format!("closure-dagger({})", worst_dag.1) };
    report.check(id, worst_dag.0);

    // one representative per phase class
    let mut reps: Vec<&CMatrix> = Vec::new();
    for e in elements {
        let norm_e = hs_inner(e, e)?.re.sqrt();
        let duplicate = reps.iter().any(|r| {
            let norm_r = hs_inner(r, r).expect("square").re.sqrt();
            let overlap = hs_inner(r, e).expect("same shape").norm();
            (overlap - norm_r * norm_e).abs() < 1e-9 * (1.0 + norm_r * norm_e)
        });
        if !duplicate {
            reps.push(e);
        }
    }
    let mut gram_dev = 0.0f64;
    for (i, a) in reps.iter().enumerate() {
        for (j, b) in reps.iter().enumerate() {
            let target = if i == j { ONE } else { ZERO };
            gram_dev = gram_dev.max((hs_inner(a, b)? - target).norm());
        }
    }
    report.check("orthonormal-representatives", gram_dev);
    report.params.insert("classes".into(), reps.len().to_string());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{tensor, transpose};

    #[test]
    fn gates_match_definitions() {
        let x = pauli_gate("X").unwrap();
        assert_eq!(x, CMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap());
        let h = pauli_gate("H").unwrap();
        assert!(residual(&mul(&h, &h).unwrap(), &CMatrix::identity(2)).unwrap() < 1e-15);
        let xz = x.add(&pauli_gate("Z").unwrap()).unwrap().scale_real(std::f64::consts::FRAC_1_SQRT_2);
        assert!(residual(&h, &xz).unwrap() < 1e-16);
        assert!(matches!(pauli_gate("Q"), Err(Error::UnknownGate(_))));
    }

    #[test]
    fn clock_and_shift_small_cases() {
        assert_eq!(gen_x(2).unwrap(), pauli_gate("X").unwrap());
        assert_eq!(gen_z(2).unwrap(), pauli_gate("Z").unwrap());
        let x3 = gen_x(3).unwrap();
        assert_eq!(mul(&x3, &CMatrix::basis_ket(3, 2)).unwrap(), CMatrix::basis_ket(3, 0));
        let z3 = gen_z(3).unwrap();
        assert!((z3[(1, 1)] - C64::from_polar(1.0, 2.0 * PI / 3.0)).norm() < 1e-15);
        assert!((dagger(&z3)[(1, 1)] - C64::from_polar(1.0, -2.0 * PI / 3.0)).norm() < 1e-15);
        assert!(matches!(gen_x(1), Err(Error::Dimension(1))));
        assert!(matches!(gen_z(0), Err(Error::Dimension(0))));
    }

    #[test]
    fn order_and_commutation() {
        for d in 2..=8 {
            let x = gen_x(d).unwrap();
            let z = gen_z(d).unwrap();
            assert!(residual(&x.pow(d).unwrap(), &CMatrix::identity(d)).unwrap() < 1e-12);
            assert!(residual(&z.pow(d).unwrap(), &CMatrix::identity(d)).unwrap() < 1e-12);
            let zx = mul(&z, &x).unwrap();
            let wxz = mul(&x, &z).unwrap().scale(omega_pow(d, 1));
            assert!(residual(&zx, &wxz).unwrap() < 1e-12, "d = {d}");
        }
    }

    #[test]
    fn clock_is_not_hermitian_beyond_qubits() {
        for d in 3..=8 {
            let z = gen_z(d).unwrap();
            assert!(residual(&z, &dagger(&z)).unwrap() > 0.5, "d = {d}");
        }
    }

    #[test]
    fn transpose_versus_adjoint_of_shift_and_clock() {
        // The shift matrix is a real permutation: transpose and adjoint agree, and both
        // differ from the shift itself in 6 entries at d = 3.
        let x = gen_x(3).unwrap();
        assert_eq!(transpose(&x), dagger(&x));
        assert_eq!(transpose(&x).count_differences(&x, 1e-12).unwrap(), 6);
        // The clock is diagonal: transpose fixes it, the adjoint does not.
        let z = gen_z(3).unwrap();
        assert_eq!(transpose(&z), z);
        assert_eq!(transpose(&z).count_differences(&dagger(&z), 1e-12).unwrap(), 2);
    }

    #[test]
    fn omega_sums() {
        for d in 2..=12usize {
            for k in -(3 * d as i64)..=(3 * d as i64) {
                let s: C64 = (0..d).map(|i| omega_pow(d, k * i as i64)).sum();
                let expect = if k.rem_euclid(d as i64) == 0 { d as f64 } else { 0.0 };
                assert!((s - C64::new(expect, 0.0)).norm() < 1e-10, "d={d} k={k}");
            }
        }
    }

    #[test]
    fn gen_word_examples() {
        let w = GenPauliWord::new(2, 1, 1, 0).unwrap();
        let zx = mul(&pauli_gate("Z").unwrap(), &pauli_gate("X").unwrap()).unwrap();
        assert_eq!(w.matrix(), zx);
        // matches the power-product definition
        for d in 2..=5 {
            let (z, x) = (gen_z(d).unwrap(), gen_x(d).unwrap());
            for w in GenPauliWord::all_phased(d).unwrap() {
                let direct = mul(&z.pow(w.alpha).unwrap(), &x.pow(w.beta).unwrap())
                    .unwrap()
                    .scale(omega_pow(d, w.gamma as i64));
                assert!(residual(&w.matrix(), &direct).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn gen_words_orthonormal_at_d3() {
        let words = GenPauliWord::all_unphased(3).unwrap();
        for (i, a) in words.iter().enumerate() {
            for (j, b) in words.iter().enumerate() {
                let g = hs_inner(&a.matrix(), &b.matrix()).unwrap();
                let expect = if i == j { ONE } else { ZERO };
                assert!((g - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn qudit_adjoint_exponent_rule() {
        for d in 2..=6 {
            for w in GenPauliWord::all_phased(d).unwrap() {
                let stated = w.dagger();
                assert_eq!(stated, w.dagger_direct(), "symbolic rules disagree at {w:?}");
                assert!(residual(&stated.matrix(), &dagger(&w.matrix())).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn qudit_transpose_rule() {
        for d in 2..=5 {
            for w in GenPauliWord::all_phased(d).unwrap() {
                assert!(residual(&w.transpose().matrix(), &transpose(&w.matrix())).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn gen_word_product_rule() {
        for d in 2..=4 {
            let all = GenPauliWord::all_phased(d).unwrap();
            for a in &all {
                for b in &all {
                    let sym = a.mul(b).unwrap().matrix();
                    let num = mul(&a.matrix(), &b.matrix()).unwrap();
                    assert!(residual(&sym, &num).unwrap() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn word_matrix_examples() {
        let w = PauliWord::t(&"0".parse().unwrap(), &"0".parse().unwrap()).unwrap();
        assert_eq!(w.matrix().unwrap(), CMatrix::identity(2));
        let w = PauliWord::t(&"10".parse().unwrap(), &"01".parse().unwrap()).unwrap();
        let zx = tensor(&pauli_gate("Z").unwrap(), &pauli_gate("X").unwrap()).unwrap();
        assert_eq!(w.matrix().unwrap(), zx);
        let big = PauliWord::identity(13);
        assert!(matches!(big.matrix(), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn word_dagger_rule_exhaustive_n2() {
        for w in PauliWord::all_unsigned(2) {
            assert_eq!(w.dagger().matrix().unwrap(), dagger(&w.matrix().unwrap()));
            assert_eq!(w.transpose().matrix().unwrap(), transpose(&w.matrix().unwrap()));
        }
    }

    #[test]
    fn word_mul_examples_and_closure() {
        let id = PauliWord::identity(1);
        assert_eq!(word_mul(&id, &id).unwrap(), id);
        let z = PauliWord::t(&"1".parse().unwrap(), &"0".parse().unwrap()).unwrap();
        let x = PauliWord::t(&"0".parse().unwrap(), &"1".parse().unwrap()).unwrap();
        let zx = word_mul(&z, &x).unwrap();
        assert_eq!(zx.sign(), 0);
        assert_eq!(zx.matrix().unwrap(), mul(&pauli_gate("Z").unwrap(), &pauli_gate("X").unwrap()).unwrap());

        let all = PauliWord::all_signed(2);
        for a in &all {
            for b in &all {
                let p = word_mul(a, b).unwrap();
                assert!(all.contains(&p));
                assert_eq!(p.matrix().unwrap(), mul(&a.matrix().unwrap(), &b.matrix().unwrap()).unwrap());
            }
        }
        assert!(matches!(word_mul(&PauliWord::identity(1), &PauliWord::identity(2)), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn words_orthonormal_up_to_three_qubits() {
        for n in 1..=3 {
            let mats: Vec<_> = PauliWord::all_unsigned(n).iter().map(|w| w.matrix().unwrap()).collect();
            for (i, a) in mats.iter().enumerate() {
                for (j, b) in mats.iter().enumerate() {
                    let expect = if i == j { ONE } else { ZERO };
                    assert_eq!(hs_inner(a, b).unwrap(), expect);
                }
            }
        }
    }

    #[test]
    fn basis_group_examples() {
        let tol = Tolerance::default();
        let qudit: Vec<_> = GenPauliWord::all_phased(3).unwrap().iter().map(|w| w.matrix()).collect();
        let r = basis_group_check(&qudit, tol).unwrap();
        assert!(r.passed(), "{r:#?}");
        assert_eq!(r.params["classes"], "9");

        let qubit: Vec<_> = PauliWord::all_signed(2).iter().map(|w| w.matrix().unwrap()).collect();
        let r = basis_group_check(&qubit, tol).unwrap();
        assert!(r.passed());
        assert_eq!(r.params["classes"], "16");

        let bad = vec![CMatrix::identity(2), CMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 2.0]).unwrap()];
        let r = basis_group_check(&bad, tol).unwrap();
        assert!(!r.passed());
        assert!(!r.case("unitary").unwrap().pass);
    }

    #[test]
    fn unsigned_words_are_not_closed() {
        let words: Vec<_> = PauliWord::all_unsigned(1).iter().map(|w| w.matrix().unwrap()).collect();
        let r = basis_group_check(&words, Tolerance::default()).unwrap();
        assert!(!r.passed());
        assert!(r.failures().any(|c| c.id.starts_with("closure")));
    }

    #[test]
    fn bitstring_parsing_and_ops() {
        let a: BitString = "1011".parse().unwrap();
        assert_eq!(a.to_index(), 11);
        assert_eq!(BitString::from_index(11, 4), a);
        let b: BitString = "0110".parse().unwrap();
        assert_eq!(a.xor(&b).unwrap().to_string(), "1101");
        assert_eq!(a.dot(&b).unwrap(), 1);
        assert!("10a".parse::<BitString>().is_err());
        assert!("".parse::<BitString>().is_err());
        assert!(a.dot(&"1".parse().unwrap()).is_err());
    }
}
