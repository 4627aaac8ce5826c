//! Gate lists over qubit wires, simulated directly on state vectors, with
//! OpenQASM 2.0 export and import.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};

/// Largest wire count a circuit will simulate.
pub const MAX_WIRES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    Cnot { control: usize, target: usize },
    Swap(usize, usize),
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "h",
            Gate::X(_) => "x",
            Gate::Z(_) => "z",
            Gate::Cnot { .. } => "cx",
            Gate::Swap(..) => "swap",
        }
    }

    pub fn wires(&self) -> Vec<usize> {
        match *self {
            Gate::H(w) | Gate::X(w) | Gate::Z(w) => vec![w],
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Swap(a, b) => vec![a, b],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    wires: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(wires: usize) -> Result<Self> {
        if wires == 0 || wires > MAX_WIRES {
            return Err(Error::SizeLimit { dim: wires, limit: MAX_WIRES });
        }
        Ok(Self { wires, gates: Vec::new() })
    }

    pub fn wires(&self) -> usize {
        self.wires
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn count(&self, name: &str) -> usize {
        self.gates.iter().filter(|g| g.name() == name).count()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let ws = gate.wires();
        if let Some(&w) = ws.iter().find(|&&w| w >= self.wires) {
            return Err(Error::LabelRange(format!("wire {w} on a {}-wire circuit", self.wires)));
        }
        if ws.len() == 2 && ws[0] == ws[1] {
            return Err(Error::InvalidParam(format!("{} needs two distinct wires", gate.name())));
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Applies the gates in order to a state on `2^wires` amplitudes.
    pub fn apply(&self, state: &CMatrix) -> Result<CMatrix> {
        let dim = 1usize << self.wires;
        if state.shape() != (dim, 1) {
            return Err(Error::ShapeMismatch { op: "circuit apply", left: state.shape(), right: (dim, 1) });
        }
        let mut amps = state.data().to_vec();
        for g in &self.gates {
            self.apply_gate(g, &mut amps);
        }
        Ok(CMatrix::column(amps))
    }

    fn mask(&self, wire: usize) -> usize {
        1 << (self.wires - 1 - wire)
    }

    fn apply_gate(&self, gate: &Gate, amps: &mut [C64]) {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        match *gate {
            Gate::H(w) => {
                let m = self.mask(w);
                for i in (0..amps.len()).filter(|i| i & m == 0) {
                    let (a, b) = (amps[i], amps[i | m]);
                    amps[i] = (a + b) * r;
                    amps[i | m] = (a - b) * r;
                }
            }
            Gate::X(w) => {
                let m = self.mask(w);
                for i in (0..amps.len()).filter(|i| i & m == 0) {
                    amps.swap(i, i | m);
                }
            }
            Gate::Z(w) => {
                let m = self.mask(w);
                for (i, a) in amps.iter_mut().enumerate() {
                    if i & m != 0 {
                        *a = -*a;
                    }
                }
            }
            Gate::Cnot { control, target } => {
                let (c, t) = (self.mask(control), self.mask(target));
                for i in (0..amps.len()).filter(|i| i & c != 0 && i & t == 0) {
                    amps.swap(i, i | t);
                }
            }
            Gate::Swap(a, b) => {
                let (ma, mb) = (self.mask(a), self.mask(b));
                for i in (0..amps.len()).filter(|i| i & ma != 0 && i & mb == 0) {
                    amps.swap(i, (i & !ma) | mb);
                }
            }
        }
    }

    /// The composed unitary, last gate leftmost.
    pub fn to_matrix(&self) -> Result<CMatrix> {
        let dim = 1usize << self.wires;
        let mut out = CMatrix::zeros(dim, dim);
        let mut col = vec![C64::new(0.0, 0.0); dim];
        for j in 0..dim {
            col.iter_mut().for_each(|a| *a = C64::new(0.0, 0.0));
            col[j] = C64::new(1.0, 0.0);
            for g in &self.gates {
                self.apply_gate(g, &mut col);
            }
            for (i, a) in col.iter().enumerate() {
                out[(i, j)] = *a;
            }
        }
        Ok(out)
    }

    pub fn to_qasm(&self) -> String {
        let mut s = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
        writeln!(s, "qreg q[{}];", self.wires).unwrap();
        for g in &self.gates {
            let args: Vec<String> = g.wires().iter().map(|w| format!("q[{w}]")).collect();
            writeln!(s, "{} {};", g.name(), args.join(",")).unwrap();
        }
        s
    }

    /// Parses the subset of OpenQASM 2.0 written by [`Circuit::to_qasm`].
    pub fn from_qasm(text: &str) -> Result<Self> {
        let mut circuit: Option<Circuit> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |msg: &str| Error::Qasm { line: line_no, msg: msg.to_string() };
            let line = raw.split("//").next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let stmt = line.strip_suffix(';').ok_or_else(|| err("missing `;`"))?.trim();
            if stmt.starts_with("OPENQASM") {
                if stmt != "OPENQASM 2.0" {
                    return Err(err("only OPENQASM 2.0 is supported"));
                }
                continue;
            }
            if stmt.starts_with("include") {
                continue;
            }
            let (head, rest) = stmt.split_once(char::is_whitespace).ok_or_else(|| err("expected operands"))?;
            if head == "qreg" {
                if circuit.is_some() {
                    return Err(err("only one qreg is supported"));
                }
                let n = parse_operand(rest.trim()).ok_or_else(|| err("bad qreg declaration"))?;
                circuit = Some(Circuit::new(n).map_err(|e| err(&e.to_string()))?);
                continue;
            }
            let c = circuit.as_mut().ok_or_else(|| err("gate before qreg"))?;
            let ws = rest
                .split(',')
                .map(|w| parse_operand(w.trim()))
                .collect::<Option<Vec<usize>>>()
                .ok_or_else(|| err("bad operand"))?;
            let gate = match (head, ws.as_slice()) {
                ("h", [w]) => Gate::H(*w),
                ("x", [w]) => Gate::X(*w),
                ("z", [w]) => Gate::Z(*w),
                ("cx", [a, b]) => Gate::Cnot { control: *a, target: *b },
                ("swap", [a, b]) => Gate::Swap(*a, *b),
                _ => return Err(err(&format!("unsupported statement `{stmt}`"))),
            };
            c.push(gate).map_err(|e| err(&e.to_string()))?;
        }
        circuit.ok_or(Error::Qasm { line: 0, msg: "no qreg declared".into() })
    }
}

fn parse_operand(s: &str) -> Option<usize> {
    s.strip_prefix("q[")?.strip_suffix(']')?.parse().ok()
}
