//! Gate-level circuit representation and metrics.

mod lower;
mod qasm;

pub use lower::{lower, lower_with, AncillaPolicy};
pub use qasm::{export_qasm, parse_qasm};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};

/// Global wire index under a circuit's register layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Qubit(pub usize);

/// A qubit named by register and offset.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QubitId {
    pub register: String,
    pub offset: usize,
}

impl QubitId {
    pub fn new(register: impl Into<String>, offset: usize) -> Self {
        QubitId {
            register: register.into(),
            offset,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    /// Satisfied when the control is 1.
    Positive,
    /// Satisfied when the control is 0.
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Control {
    pub qubit: Qubit,
    pub polarity: Polarity,
}

impl Control {
    pub fn pos(q: Qubit) -> Self {
        Control {
            qubit: q,
            polarity: Polarity::Positive,
        }
    }

    pub fn neg(q: Qubit) -> Self {
        Control {
            qubit: q,
            polarity: Polarity::Negative,
        }
    }

    pub fn is_satisfied(&self, state: u64) -> bool {
        let bit = state >> self.qubit.0 & 1 == 1;
        match self.polarity {
            Polarity::Positive => bit,
            Polarity::Negative => !bit,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    X(Qubit),
    H(Qubit),
    /// Multi-controlled X. One positive control is CX, two are CCX.
    Mcx {
        controls: Vec<Control>,
        target: Qubit,
    },
    Sx(Qubit),
    Rz(Qubit, f64),
    Cz(Qubit, Qubit),
}

impl Gate {
    /// Builds an MCX, collapsing the control-free case to `X`.
    pub fn mcx(controls: Vec<Control>, target: Qubit) -> Gate {
        if controls.is_empty() {
            Gate::X(target)
        } else {
            Gate::Mcx { controls, target }
        }
    }

    pub fn cx(control: Qubit, target: Qubit) -> Gate {
        Gate::Mcx {
            controls: vec![Control::pos(control)],
            target,
        }
    }

    pub fn ccx(a: Qubit, b: Qubit, target: Qubit) -> Gate {
        Gate::Mcx {
            controls: vec![Control::pos(a), Control::pos(b)],
            target,
        }
    }

    /// Every wire the gate acts on, controls first.
    pub fn qubits(&self) -> Vec<Qubit> {
        match self {
            Gate::X(q) | Gate::H(q) | Gate::Sx(q) | Gate::Rz(q, _) => vec![*q],
            Gate::Cz(a, b) => vec![*a, *b],
            Gate::Mcx { controls, target } => controls
                .iter()
                .map(|c| c.qubit)
                .chain(std::iter::once(*target))
                .collect(),
        }
    }

    /// True for gates that map basis states to basis states without phase.
    pub fn is_classical(&self) -> bool {
        matches!(self, Gate::X(_) | Gate::Mcx { .. })
    }

    /// Smallest basis that contains this gate.
    pub fn basis(&self) -> GateBasis {
        match self {
            Gate::X(_) => GateBasis::Elementary,
            Gate::H(_) => GateBasis::Toffoli,
            Gate::Mcx { controls, .. } => {
                if controls.len() <= 2 && controls.iter().all(|c| c.polarity == Polarity::Positive)
                {
                    GateBasis::Toffoli
                } else {
                    GateBasis::Logical
                }
            }
            Gate::Sx(_) | Gate::Rz(..) | Gate::Cz(..) => GateBasis::Elementary,
        }
    }

    fn name(&self) -> String {
        match self {
            Gate::X(_) => "x".into(),
            Gate::H(_) => "h".into(),
            Gate::Sx(_) => "sx".into(),
            Gate::Rz(_, theta) => format!("rz({theta})"),
            Gate::Cz(..) => "cz".into(),
            Gate::Mcx { controls, .. } => match controls.len() {
                1 => "cx".into(),
                2 => "ccx".into(),
                k => format!("mcx{k}"),
            },
        }
    }
}

/// Target gate sets for lowering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateBasis {
    /// X, H and MCX with any number and polarity of controls.
    Logical,
    /// X, H, CX, CCX with positive controls.
    Toffoli,
    /// CZ, Rz, SX, X.
    Elementary,
}

impl GateBasis {
    pub fn name(&self) -> &'static str {
        match self {
            GateBasis::Logical => "logical",
            GateBasis::Toffoli => "toffoli",
            GateBasis::Elementary => "elementary",
        }
    }

    /// Whether a gate of basis `other` is allowed in `self`.
    ///
    /// Bases are not nested: `H` and `CX` belong to toffoli but not to
    /// elementary, while `Rz` and friends belong only to elementary.
    pub fn admits(&self, gate: &Gate) -> bool {
        match self {
            GateBasis::Logical => matches!(gate, Gate::X(_) | Gate::H(_) | Gate::Mcx { .. }),
            GateBasis::Toffoli => {
                matches!(gate, Gate::X(_) | Gate::H(_))
                    || matches!(gate, Gate::Mcx { .. } if gate.basis() == GateBasis::Toffoli)
            }
            GateBasis::Elementary => {
                matches!(gate, Gate::X(_) | Gate::Sx(_) | Gate::Rz(..) | Gate::Cz(..))
            }
        }
    }
}

impl fmt::Display for GateBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for GateBasis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "logical" => Ok(GateBasis::Logical),
            "toffoli" => Ok(GateBasis::Toffoli),
            "elementary" => Ok(GateBasis::Elementary),
            other => Err(Error::Domain(format!("unknown basis {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegisterKind {
    /// Holds measured data (index or parameter values).
    Data,
    /// Workspace that must be returned to zero. Untouched ancilla wires are
    /// not counted by [`Circuit::qubit_count`].
    Ancilla,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Register {
    pub name: String,
    pub width: usize,
    pub kind: RegisterKind,
    pub start: usize,
}

impl Register {
    pub fn wires(&self) -> Range<usize> {
        self.start..self.start + self.width
    }

    pub fn qubit(&self, offset: usize) -> Qubit {
        assert!(
            offset < self.width,
            "offset {offset} outside register {}",
            self.name
        );
        Qubit(self.start + offset)
    }
}

/// An ordered gate list over named registers.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    registers: Vec<Register>,
    gates: Vec<Gate>,
    /// Leading gates that prepare the input superposition.
    prep_len: usize,
    labels: BTreeMap<String, String>,
}

impl Circuit {
    pub fn new() -> Self {
        Circuit::default()
    }

    /// Appends a register and returns its wires.
    pub fn add_register(
        &mut self,
        name: &str,
        width: usize,
        kind: RegisterKind,
    ) -> Result<Range<usize>> {
        if self.registers.iter().any(|r| r.name == name) {
            return Err(Error::Domain(format!("duplicate register {name:?}")));
        }
        let start = self.num_wires();
        self.registers.push(Register {
            name: name.to_string(),
            width,
            kind,
            start,
        });
        Ok(start..start + width)
    }

    /// Widens a register in place; later registers shift up.
    pub(crate) fn grow_register(&mut self, name: &str, extra: usize) -> Result<Range<usize>> {
        let idx = self
            .registers
            .iter()
            .position(|r| r.name == name)
            .ok_or_else(|| Error::Domain(format!("no register {name:?}")))?;
        if idx + 1 != self.registers.len() {
            return Err(Error::Domain(format!(
                "register {name:?} is not the last register"
            )));
        }
        let reg = &mut self.registers[idx];
        let start = reg.start + reg.width;
        reg.width += extra;
        Ok(start..start + extra)
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn register(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name == name)
    }

    pub fn num_wires(&self) -> usize {
        self.registers.iter().map(|r| r.width).sum()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn prep_len(&self) -> usize {
        self.prep_len
    }

    /// Gates after the state-preparation prologue.
    pub fn body(&self) -> &[Gate] {
        &self.gates[self.prep_len..]
    }

    /// Marks everything pushed so far as state preparation.
    pub fn end_prep(&mut self) {
        self.prep_len = self.gates.len();
    }

    pub fn labels(&self) -> &BTreeMap<String, String> {
        &self.labels
    }

    pub fn set_label(&mut self, key: &str, value: impl Into<String>) {
        self.labels.insert(key.to_string(), value.into());
    }

    pub fn resolve(&self, id: &QubitId) -> Result<Qubit> {
        let reg = self
            .register(&id.register)
            .ok_or_else(|| Error::Domain(format!("no register {:?}", id.register)))?;
        if id.offset >= reg.width {
            return Err(Error::Domain(format!(
                "offset {} outside register {:?} of width {}",
                id.offset, reg.name, reg.width
            )));
        }
        Ok(reg.qubit(id.offset))
    }

    /// Appends a gate after checking its wires.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let qubits = gate.qubits();
        let n = self.num_wires();
        if let Some(q) = qubits.iter().find(|q| q.0 >= n) {
            return Err(Error::Domain(format!(
                "wire {} outside circuit of {n} wires",
                q.0
            )));
        }
        for (i, a) in qubits.iter().enumerate() {
            if qubits[i + 1..].contains(a) {
                return Err(Error::Domain(format!("gate uses wire {} twice", a.0)));
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    /// Same registers and labels, no gates.
    pub(crate) fn empty_like(&self) -> Circuit {
        Circuit {
            registers: self.registers.clone(),
            gates: Vec::new(),
            prep_len: 0,
            labels: self.labels.clone(),
        }
    }

    /// Whether every gate belongs to `basis`.
    pub fn is_in_basis(&self, basis: GateBasis) -> bool {
        self.gates.iter().all(|g| basis.admits(g))
    }

    /// Layers under a schedule where each gate occupies one layer on all of
    /// its wires and gates on disjoint wires share layers.
    pub fn depth(&self) -> usize {
        let mut busy = vec![0usize; self.num_wires()];
        let mut depth = 0;
        for gate in &self.gates {
            let qubits = gate.qubits();
            let layer = qubits.iter().map(|q| busy[q.0]).max().unwrap_or(0) + 1;
            for q in qubits {
                busy[q.0] = layer;
            }
            depth = depth.max(layer);
        }
        depth
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Data wires plus ancilla wires that some gate touches.
    pub fn qubit_count(&self) -> usize {
        let mut touched = vec![false; self.num_wires()];
        for gate in &self.gates {
            for q in gate.qubits() {
                touched[q.0] = true;
            }
        }
        self.registers
            .iter()
            .map(|r| match r.kind {
                RegisterKind::Data => r.width,
                RegisterKind::Ancilla => r.wires().filter(|&w| touched[w]).count(),
            })
            .sum()
    }

    /// Wires in data registers.
    pub fn data_width(&self) -> usize {
        self.registers
            .iter()
            .filter(|r| r.kind == RegisterKind::Data)
            .map(|r| r.width)
            .sum()
    }

    pub fn metrics(&self) -> Metrics {
        Metrics {
            depth: self.depth(),
            gates: self.gate_count(),
            qubits: self.qubit_count(),
        }
    }

    /// Gate tally by name, e.g. `cx -> 12`.
    pub fn gate_histogram(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for g in &self.gates {
            *out.entry(g.name()).or_insert(0) += 1;
        }
        out
    }
}

/// Depth, gate count and qubit count of one circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Metrics {
    pub depth: usize,
    pub gates: usize,
    pub qubits: usize,
}

impl Metrics {
    /// Single-line `key=value` record.
    pub fn record(&self, fields: &[(&str, &str)]) -> String {
        let mut parts: Vec<String> = fields.iter().map(|(k, v)| format!("{k}={v}")).collect();
        parts.push(format!("depth={}", self.depth));
        parts.push(format!("gates={}", self.gates));
        parts.push(format!("qubits={}", self.qubits));
        parts.join(" ")
    }

    /// Parses the output of [`Metrics::record`] back into key/value pairs.
    pub fn parse_record(line: &str) -> BTreeMap<String, String> {
        line.split_whitespace()
            .filter_map(|kv| kv.split_once('='))
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }
}

impl fmt::Display for Metrics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "depth: {}", self.depth)?;
        writeln!(f, "gates: {}", self.gates)?;
        writeln!(f, "qubits: {}", self.qubits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circuit(width: usize) -> Circuit {
        let mut c = Circuit::new();
        c.add_register("q", width, RegisterKind::Data).unwrap();
        c
    }

    #[test]
    fn depth_examples() {
        assert_eq!(Circuit::new().depth(), 0);

        let mut c = circuit(2);
        c.push(Gate::X(Qubit(0))).unwrap();
        c.push(Gate::X(Qubit(1))).unwrap();
        assert_eq!(c.depth(), 1);

        let mut c = circuit(2);
        c.push(Gate::X(Qubit(0))).unwrap();
        c.push(Gate::cx(Qubit(0), Qubit(1))).unwrap();
        c.push(Gate::X(Qubit(1))).unwrap();
        assert_eq!(c.depth(), 3);
    }

    #[test]
    fn untouched_ancillas_are_trimmed() {
        let mut c = Circuit::new();
        c.add_register("anc", 5, RegisterKind::Ancilla).unwrap();
        assert_eq!(c.gate_count(), 0);
        assert_eq!(c.qubit_count(), 0);

        let mut c = circuit(2);
        c.add_register("anc", 3, RegisterKind::Ancilla).unwrap();
        c.push(Gate::cx(Qubit(0), Qubit(3))).unwrap();
        assert_eq!(c.qubit_count(), 3);
    }

    #[test]
    fn push_validates_wires() {
        let mut c = circuit(2);
        assert!(c.push(Gate::X(Qubit(2))).is_err());
        assert!(c.push(Gate::cx(Qubit(1), Qubit(1))).is_err());
        let dup = Gate::Mcx {
            controls: vec![Control::pos(Qubit(0)), Control::neg(Qubit(0))],
            target: Qubit(1),
        };
        assert!(c.push(dup).is_err());
    }

    #[test]
    fn resolve_qubit_ids() {
        let mut c = circuit(2);
        c.add_register("anc", 2, RegisterKind::Ancilla).unwrap();
        assert_eq!(c.resolve(&QubitId::new("anc", 1)).unwrap(), Qubit(3));
        assert!(c.resolve(&QubitId::new("anc", 2)).is_err());
        assert!(c.resolve(&QubitId::new("nope", 0)).is_err());
        assert!(c.add_register("anc", 1, RegisterKind::Ancilla).is_err());
    }

    #[test]
    fn basis_membership() {
        let neg = Gate::Mcx {
            controls: vec![Control::neg(Qubit(0))],
            target: Qubit(1),
        };
        assert!(GateBasis::Logical.admits(&neg));
        assert!(!GateBasis::Toffoli.admits(&neg));
        assert!(GateBasis::Toffoli.admits(&Gate::ccx(Qubit(0), Qubit(1), Qubit(2))));
        assert!(!GateBasis::Elementary.admits(&Gate::H(Qubit(0))));
        assert!(GateBasis::Elementary.admits(&Gate::X(Qubit(0))));
        assert_eq!(Gate::mcx(vec![], Qubit(3)), Gate::X(Qubit(3)));
    }

    #[test]
    fn metrics_record_round_trip() {
        let m = Metrics {
            depth: 41,
            gates: 64,
            qubits: 12,
        };
        let line = m.record(&[("mode", "optimized"), ("basis", "toffoli")]);
        assert_eq!(
            line,
            "mode=optimized basis=toffoli depth=41 gates=64 qubits=12"
        );
        let kv = Metrics::parse_record(&line);
        assert_eq!(kv["gates"], "64");
    }

    #[test]
    fn depth_bounds() {
        // Depth is at least the busiest wire's gate count and at most the
        // sum of the depths of two concatenated halves.
        let mut a = circuit(3);
        a.extend([
            Gate::X(Qubit(0)),
            Gate::cx(Qubit(0), Qubit(1)),
            Gate::H(Qubit(2)),
            Gate::ccx(Qubit(0), Qubit(2), Qubit(1)),
        ])
        .unwrap();
        let mut b = circuit(3);
        b.extend([Gate::X(Qubit(2)), Gate::cx(Qubit(2), Qubit(0))])
            .unwrap();
        let mut ab = a.clone();
        ab.extend(b.gates().iter().cloned()).unwrap();
        assert!(ab.depth() <= a.depth() + b.depth());
        let busiest = (0..3)
            .map(|w| {
                ab.gates()
                    .iter()
                    .filter(|g| g.qubits().contains(&Qubit(w)))
                    .count()
            })
            .max()
            .unwrap();
        assert!(ab.depth() >= busiest);
    }
}
