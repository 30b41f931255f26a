//! Lowering to the toffoli and elementary bases.
//!
//! Identities used, each exact on computational basis states up to global
//! phase:
//!
//! - negative control: `X c; MCX; X c`
//! - MCX with `k >= 3` controls: Toffoli V-chain over `k - 2` ancillas
//!   (borrowed wires in any state use the `4(k-2)` gate form, fresh zeroed
//!   wires the `2(k-2)+1` compute/uncompute form)
//! - CCX: six CX with T/T† phases and two H on the target
//! - CX: `H t; CZ; H t`
//! - H: `Rz(π/2) SX Rz(π/2)`
//! - T, T†: `Rz(±π/4)`

use std::f64::consts::FRAC_PI_2;
use std::f64::consts::FRAC_PI_4;

use super::{Circuit, Control, Gate, GateBasis, Polarity, Qubit, RegisterKind};
use crate::error::{Error, Result};

/// Name of the register that holds wires added during lowering.
pub const LOWERING_REGISTER: &str = "lower_anc";

/// Where MCX decompositions take their helper wires from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AncillaPolicy {
    /// Borrow idle wires in whatever state they are in, lowest index first,
    /// and declare fresh wires only for the shortfall.
    #[default]
    BorrowOrAllocate,
    /// Borrow idle wires; fail with a capacity error if too few exist.
    BorrowOnly,
    /// Use a dedicated pool of zeroed wires, shared by all gates.
    Clean,
}

pub fn lower(c: &Circuit, basis: GateBasis) -> Result<Circuit> {
    lower_with(c, basis, AncillaPolicy::default())
}

pub fn lower_with(c: &Circuit, basis: GateBasis, policy: AncillaPolicy) -> Result<Circuit> {
    if c.is_in_basis(basis) {
        return Ok(c.clone());
    }
    let mut out = c.empty_like();
    let mut lowerer = Lowerer {
        circuit: &mut out,
        policy,
        basis,
    };
    let mut prep_len = 0;
    for (i, gate) in c.gates().iter().enumerate() {
        let gates = lowerer.lower_gate(gate)?;
        lowerer.circuit.extend(gates)?;
        if i + 1 == c.prep_len() {
            prep_len = lowerer.circuit.gate_count();
        }
    }
    out.prep_len = prep_len;
    out.set_label("basis", basis.name());
    Ok(out)
}

struct Lowerer<'a> {
    circuit: &'a mut Circuit,
    policy: AncillaPolicy,
    basis: GateBasis,
}

impl Lowerer<'_> {
    fn lower_gate(&mut self, gate: &Gate) -> Result<Vec<Gate>> {
        if self.basis.admits(gate) {
            return Ok(vec![gate.clone()]);
        }
        match self.basis {
            GateBasis::Logical => Err(Error::Domain(format!(
                "gate {gate:?} cannot be raised to the logical basis"
            ))),
            GateBasis::Toffoli => match gate {
                Gate::Mcx { controls, target } => self.expand_mcx(controls, *target),
                _ => Err(Error::Domain(format!(
                    "gate {gate:?} is below the toffoli basis"
                ))),
            },
            GateBasis::Elementary => {
                let toffoli = match gate {
                    Gate::Mcx { controls, target } => self.expand_mcx(controls, *target)?,
                    other => vec![other.clone()],
                };
                let mut out = Vec::new();
                for g in toffoli {
                    to_elementary(&g, &mut out)?;
                }
                Ok(out)
            }
        }
    }

    /// Rewrites an MCX into X, CX and CCX with positive controls.
    fn expand_mcx(&mut self, controls: &[Control], target: Qubit) -> Result<Vec<Gate>> {
        let flips: Vec<Gate> = controls
            .iter()
            .filter(|c| c.polarity == Polarity::Negative)
            .map(|c| Gate::X(c.qubit))
            .collect();
        let positive: Vec<Qubit> = controls.iter().map(|c| c.qubit).collect();

        let core = match positive.len() {
            0 => vec![Gate::X(target)],
            1 => vec![Gate::cx(positive[0], target)],
            2 => vec![Gate::ccx(positive[0], positive[1], target)],
            k => {
                let support: Vec<Qubit> = positive.iter().copied().chain([target]).collect();
                match self.policy {
                    AncillaPolicy::Clean => {
                        let anc = self.clean_ancillas(k - 2)?;
                        clean_chain(&positive, &anc, target)
                    }
                    _ => {
                        let anc = self.borrowed_ancillas(&support, k - 2)?;
                        dirty_chain(&positive, &anc, target)
                    }
                }
            }
        };
        let mut out = flips.clone();
        out.extend(core);
        out.extend(flips);
        Ok(out)
    }

    fn borrowed_ancillas(&mut self, support: &[Qubit], need: usize) -> Result<Vec<Qubit>> {
        let mut free: Vec<Qubit> = (0..self.circuit.num_wires())
            .map(Qubit)
            .filter(|q| !support.contains(q))
            .take(need)
            .collect();
        if free.len() < need {
            let short = need - free.len();
            if self.policy == AncillaPolicy::BorrowOnly {
                return Err(Error::Capacity(format!(
                    "MCX with {} controls needs {need} ancilla wires, only {} idle (short by {short})",
                    support.len() - 1,
                    free.len()
                )));
            }
            free.extend(self.allocate(short)?);
        }
        Ok(free)
    }

    fn clean_ancillas(&mut self, need: usize) -> Result<Vec<Qubit>> {
        let have = self
            .circuit
            .register(LOWERING_REGISTER)
            .map(|r| r.width)
            .unwrap_or(0);
        if have < need {
            self.allocate(need - have)?;
        }
        let reg = self
            .circuit
            .register(LOWERING_REGISTER)
            .expect("allocated above");
        Ok((0..need).map(|i| reg.qubit(i)).collect())
    }

    fn allocate(&mut self, extra: usize) -> Result<Vec<Qubit>> {
        let range = if self.circuit.register(LOWERING_REGISTER).is_some() {
            self.circuit.grow_register(LOWERING_REGISTER, extra)?
        } else {
            self.circuit
                .add_register(LOWERING_REGISTER, extra, RegisterKind::Ancilla)?
        };
        Ok(range.map(Qubit).collect())
    }
}

/// `k`-control Toffoli over `k - 2` wires in arbitrary states, restored
/// afterwards. Uses `4(k - 2)` CCX gates.
fn dirty_chain(c: &[Qubit], a: &[Qubit], t: Qubit) -> Vec<Gate> {
    let k = c.len();
    debug_assert!(k >= 3 && a.len() >= k - 2);
    let ladder_down = |out: &mut Vec<Gate>| {
        for i in (1..=k - 3).rev() {
            out.push(Gate::ccx(c[i + 1], a[i - 1], a[i]));
        }
    };
    let ladder_up = |out: &mut Vec<Gate>| {
        for i in 1..=k - 3 {
            out.push(Gate::ccx(c[i + 1], a[i - 1], a[i]));
        }
    };
    let top = Gate::ccx(c[k - 1], a[k - 3], t);
    let base = Gate::ccx(c[0], c[1], a[0]);

    let mut out = Vec::with_capacity(4 * (k - 2));
    out.push(top.clone());
    ladder_down(&mut out);
    out.push(base.clone());
    ladder_up(&mut out);
    out.push(top);
    ladder_down(&mut out);
    out.push(base);
    ladder_up(&mut out);
    out
}

/// `k`-control Toffoli over `k - 2` zeroed wires: compute the AND chain,
/// hit the target, uncompute. Uses `2(k - 2) + 1` CCX gates.
fn clean_chain(c: &[Qubit], a: &[Qubit], t: Qubit) -> Vec<Gate> {
    let k = c.len();
    debug_assert!(k >= 3 && a.len() >= k - 2);
    let mut compute = vec![Gate::ccx(c[0], c[1], a[0])];
    for i in 1..=k - 3 {
        compute.push(Gate::ccx(c[i + 1], a[i - 1], a[i]));
    }
    let mut out = compute.clone();
    out.push(Gate::ccx(c[k - 1], a[k - 3], t));
    out.extend(compute.into_iter().rev());
    out
}

fn push_h(q: Qubit, out: &mut Vec<Gate>) {
    out.push(Gate::Rz(q, FRAC_PI_2));
    out.push(Gate::Sx(q));
    out.push(Gate::Rz(q, FRAC_PI_2));
}

fn push_cx(c: Qubit, t: Qubit, out: &mut Vec<Gate>) {
    push_h(t, out);
    out.push(Gate::Cz(c, t));
    push_h(t, out);
}

fn to_elementary(gate: &Gate, out: &mut Vec<Gate>) -> Result<()> {
    match gate {
        Gate::X(_) | Gate::Sx(_) | Gate::Rz(..) | Gate::Cz(..) => out.push(gate.clone()),
        Gate::H(q) => push_h(*q, out),
        Gate::Mcx { controls, target }
            if controls.iter().all(|c| c.polarity == Polarity::Positive) =>
        {
            let t = *target;
            match controls.as_slice() {
                [c] => push_cx(c.qubit, t, out),
                [a, b] => {
                    let (a, b) = (a.qubit, b.qubit);
                    let tdg = |q| Gate::Rz(q, -FRAC_PI_4);
                    let tg = |q| Gate::Rz(q, FRAC_PI_4);
                    push_h(t, out);
                    push_cx(b, t, out);
                    out.push(tdg(t));
                    push_cx(a, t, out);
                    out.push(tg(t));
                    push_cx(b, t, out);
                    out.push(tdg(t));
                    push_cx(a, t, out);
                    out.push(tg(b));
                    out.push(tg(t));
                    push_h(t, out);
                    push_cx(a, b, out);
                    out.push(tg(a));
                    out.push(tdg(b));
                    push_cx(a, b, out);
                }
                _ => {
                    return Err(Error::Domain(format!(
                        "MCX with {} controls must be expanded first",
                        controls.len()
                    )))
                }
            }
        }
        Gate::Mcx { .. } => {
            return Err(Error::Domain(
                "negative controls must be expanded first".to_string(),
            ))
        }
    }
    Ok(())
}
