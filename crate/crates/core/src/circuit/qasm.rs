//! OpenQASM 2.0 text export, plus a reader for the same subset.

use std::f64::consts::PI;
use std::fmt::Write;

use super::{Circuit, Gate, Polarity, Qubit, RegisterKind};
use crate::error::{Error, Result};

fn angle(theta: f64) -> String {
    for (den, name) in [(1.0, "pi"), (2.0, "pi/2"), (4.0, "pi/4"), (8.0, "pi/8")] {
        if (theta - PI / den).abs() < 1e-12 {
            return name.to_string();
        }
        if (theta + PI / den).abs() < 1e-12 {
            return format!("-{name}");
        }
    }
    format!("{theta:?}")
}

fn parse_angle(text: &str, line: usize) -> Result<f64> {
    let t = text.trim();
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim()),
        None => (1.0, t),
    };
    let value = if body == "pi" {
        PI
    } else if let Some(den) = body.strip_prefix("pi/") {
        let den: f64 = den
            .trim()
            .parse()
            .map_err(|_| Error::parse(line, format!("bad angle {t:?}")))?;
        PI / den
    } else {
        body.parse()
            .map_err(|_| Error::parse(line, format!("bad angle {t:?}")))?
    };
    Ok(sign * value)
}

/// Renders the circuit as OpenQASM 2.0.
///
/// Negative controls are written as X sandwiches. MCX gates with more than
/// two controls have no `qelib1.inc` counterpart and must be lowered first.
pub fn export_qasm(c: &Circuit) -> Result<String> {
    let name = |q: Qubit| -> String {
        let reg = c
            .registers()
            .iter()
            .find(|r| r.wires().contains(&q.0))
            .expect("gates only reference declared wires");
        format!("{}[{}]", reg.name, q.0 - reg.start)
    };

    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    for reg in c.registers() {
        if reg.width > 0 {
            writeln!(out, "qreg {}[{}];", reg.name, reg.width).unwrap();
        }
    }
    for gate in c.gates() {
        match gate {
            Gate::X(q) => writeln!(out, "x {};", name(*q)).unwrap(),
            Gate::H(q) => writeln!(out, "h {};", name(*q)).unwrap(),
            Gate::Sx(q) => writeln!(out, "sx {};", name(*q)).unwrap(),
            Gate::Rz(q, theta) => writeln!(out, "rz({}) {};", angle(*theta), name(*q)).unwrap(),
            Gate::Cz(a, b) => writeln!(out, "cz {},{};", name(*a), name(*b)).unwrap(),
            Gate::Mcx { controls, target } => {
                let op = match controls.len() {
                    1 => "cx",
                    2 => "ccx",
                    k => {
                        return Err(Error::Unsupported(format!(
                            "MCX with {k} controls; lower to the toffoli basis before export"
                        )))
                    }
                };
                let negated: Vec<Qubit> = controls
                    .iter()
                    .filter(|c| c.polarity == Polarity::Negative)
                    .map(|c| c.qubit)
                    .collect();
                for q in &negated {
                    writeln!(out, "x {};", name(*q)).unwrap();
                }
                let args: Vec<String> = controls
                    .iter()
                    .map(|c| name(c.qubit))
                    .chain([name(*target)])
                    .collect();
                writeln!(out, "{op} {};", args.join(",")).unwrap();
                for q in &negated {
                    writeln!(out, "x {};", name(*q)).unwrap();
                }
            }
        }
    }
    Ok(out)
}

/// Reads the subset of OpenQASM 2.0 produced by [`export_qasm`].
///
/// Registers named `anc` or starting with `lower_anc` are read back as
/// ancillas; all others as data.
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let mut c = Circuit::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split("//").next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let stmt = line
            .strip_suffix(';')
            .ok_or_else(|| Error::parse(line_no, "missing ';'"))?
            .trim();
        if stmt.starts_with("OPENQASM") || stmt.starts_with("include") {
            continue;
        }
        if let Some(decl) = stmt.strip_prefix("qreg") {
            let (name, width) = split_index(decl.trim(), line_no)?;
            let kind = if name == "anc" || name.starts_with("lower_anc") {
                RegisterKind::Ancilla
            } else {
                RegisterKind::Data
            };
            c.add_register(name, width, kind)
                .map_err(|e| Error::parse(line_no, e.to_string()))?;
            continue;
        }

        let (op, args) = stmt
            .split_once(char::is_whitespace)
            .ok_or_else(|| Error::parse(line_no, format!("cannot read {stmt:?}")))?;
        let qubits: Vec<Qubit> = args
            .split(',')
            .map(|a| {
                let (reg, off) = split_index(a.trim(), line_no)?;
                c.resolve(&super::QubitId::new(reg, off))
                    .map_err(|e| Error::parse(line_no, e.to_string()))
            })
            .collect::<Result<_>>()?;
        let arity = |k: usize| -> Result<()> {
            if qubits.len() == k {
                Ok(())
            } else {
                Err(Error::parse(line_no, format!("{op} takes {k} operands")))
            }
        };
        let gate = if let Some(theta) = op.strip_prefix("rz(").and_then(|s| s.strip_suffix(')')) {
            arity(1)?;
            Gate::Rz(qubits[0], parse_angle(theta, line_no)?)
        } else {
            match op {
                "x" => {
                    arity(1)?;
                    Gate::X(qubits[0])
                }
                "h" => {
                    arity(1)?;
                    Gate::H(qubits[0])
                }
                "sx" => {
                    arity(1)?;
                    Gate::Sx(qubits[0])
                }
                "cz" => {
                    arity(2)?;
                    Gate::Cz(qubits[0], qubits[1])
                }
                "cx" => {
                    arity(2)?;
                    Gate::cx(qubits[0], qubits[1])
                }
                "ccx" => {
                    arity(3)?;
                    Gate::ccx(qubits[0], qubits[1], qubits[2])
                }
                other => return Err(Error::parse(line_no, format!("unknown gate {other:?}"))),
            }
        };
        c.push(gate)
            .map_err(|e| Error::parse(line_no, e.to_string()))?;
    }
    Ok(c)
}

fn split_index(text: &str, line: usize) -> Result<(&str, usize)> {
    let (name, rest) = text
        .split_once('[')
        .ok_or_else(|| Error::parse(line, format!("expected name[index], got {text:?}")))?;
    let idx = rest
        .strip_suffix(']')
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| Error::parse(line, format!("bad index in {text:?}")))?;
    Ok((name.trim(), idx))
}
