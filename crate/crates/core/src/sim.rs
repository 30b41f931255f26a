//! Statevector simulation, measurement sampling and histograms.
//!
//! Amplitudes are kept in a map from basis index to value and entries that
//! cancel to zero are dropped. Lookup oracles keep only a handful of basis
//! states populated, so this scales with the support rather than with
//! `2^wires`; [`Statevector::to_dense`] gives the full vector when needed.

use std::collections::BTreeMap;
use std::fmt::Write;

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, Gate, Qubit};
use crate::error::{Error, Result};

/// Largest circuit the simulator accepts.
pub const MAX_WIRES: usize = 24;

/// Entries with squared magnitude below this are treated as exact zeros.
const PRUNE_NORM_SQR: f64 = 1e-24;

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    num_wires: usize,
    amps: BTreeMap<u64, Complex64>,
}

/// Where a simulation starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Initial {
    Zero,
    Basis(u64),
}

impl Statevector {
    pub fn basis(num_wires: usize, index: u64) -> Result<Self> {
        if num_wires > MAX_WIRES {
            return Err(Error::Capacity(format!(
                "{num_wires} wires exceeds the simulator limit of {MAX_WIRES}"
            )));
        }
        if num_wires < 64 && index >> num_wires != 0 {
            return Err(Error::Domain(format!(
                "basis index {index} out of range for {num_wires} wires"
            )));
        }
        Ok(Statevector {
            num_wires,
            amps: BTreeMap::from([(index, Complex64::new(1.0, 0.0))]),
        })
    }

    pub fn num_wires(&self) -> usize {
        self.num_wires
    }

    pub fn amplitude(&self, index: u64) -> Complex64 {
        self.amps.get(&index).copied().unwrap_or_default()
    }

    pub fn probability(&self, index: u64) -> f64 {
        self.amplitude(index).norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(Complex64::norm_sqr).sum()
    }

    /// Basis states with nonzero amplitude and their probabilities, in
    /// increasing index order.
    pub fn support(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.amps.iter().map(|(&i, a)| (i, a.norm_sqr()))
    }

    /// All `2^wires` amplitudes.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); 1usize << self.num_wires];
        for (&i, &a) in &self.amps {
            out[i as usize] = a;
        }
        out
    }

    pub fn apply(&mut self, gate: &Gate) {
        match gate {
            Gate::X(q) => self.permute(|i| i ^ bit(*q)),
            Gate::Mcx { controls, target } => {
                let t = bit(*target);
                self.permute(|i| {
                    if controls.iter().all(|c| c.is_satisfied(i)) {
                        i ^ t
                    } else {
                        i
                    }
                })
            }
            Gate::Cz(a, b) => {
                let mask = bit(*a) | bit(*b);
                for (i, amp) in self.amps.iter_mut() {
                    if i & mask == mask {
                        *amp = -*amp;
                    }
                }
            }
            Gate::Rz(q, theta) => {
                let lo = Complex64::from_polar(1.0, -theta / 2.0);
                let hi = Complex64::from_polar(1.0, theta / 2.0);
                for (i, amp) in self.amps.iter_mut() {
                    *amp *= if i & bit(*q) == 0 { lo } else { hi };
                }
            }
            Gate::H(q) => {
                let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                self.mix(*q, [[s, s], [s, -s]]);
            }
            Gate::Sx(q) => {
                let p = Complex64::new(0.5, 0.5);
                let m = Complex64::new(0.5, -0.5);
                self.mix(*q, [[p, m], [m, p]]);
            }
        }
    }

    fn permute(&mut self, f: impl Fn(u64) -> u64) {
        let amps = std::mem::take(&mut self.amps);
        self.amps = amps.into_iter().map(|(i, a)| (f(i), a)).collect();
    }

    /// Applies a 2x2 unitary `u` (row = output bit, column = input bit).
    fn mix(&mut self, q: Qubit, u: [[Complex64; 2]; 2]) {
        let b = bit(q);
        let mut next: BTreeMap<u64, Complex64> = BTreeMap::new();
        for (&i, &a) in &self.amps {
            let col = usize::from(i & b != 0);
            for (row, target) in [(0, i & !b), (1, i | b)] {
                let v = u[row][col] * a;
                if v != Complex64::default() {
                    *next.entry(target).or_default() += v;
                }
            }
        }
        next.retain(|_, a| a.norm_sqr() >= PRUNE_NORM_SQR);
        self.amps = next;
    }
}

#[inline]
fn bit(q: Qubit) -> u64 {
    1u64 << q.0
}

/// Simulates every gate of `c`.
pub fn run(c: &Circuit, initial: Initial) -> Result<Statevector> {
    let start = match initial {
        Initial::Zero => 0,
        Initial::Basis(i) => i,
    };
    run_gates(c.num_wires(), c.gates(), start)
}

pub fn run_gates(num_wires: usize, gates: &[Gate], input: u64) -> Result<Statevector> {
    let mut sv = Statevector::basis(num_wires, input)?;
    for g in gates {
        sv.apply(g);
    }
    Ok(sv)
}

/// Propagates a basis state through X and MCX gates with plain bit
/// arithmetic. Returns `None` if any other gate appears.
pub fn classical_apply(gates: &[Gate], input: u64) -> Option<u64> {
    let mut state = input;
    for g in gates {
        match g {
            Gate::X(q) => state ^= bit(*q),
            Gate::Mcx { controls, target } => {
                if controls.iter().all(|c| c.is_satisfied(state)) {
                    state ^= bit(*target);
                }
            }
            _ => return None,
        }
    }
    Some(state)
}

/// Measurement outcomes keyed by basis index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    pub shots: u64,
    pub seed: u64,
    pub counts: BTreeMap<u64, u64>,
}

impl Histogram {
    /// Counts keyed by a caller-supplied label. Outcomes that map to the
    /// same label are merged.
    pub fn labeled(&self, label: impl Fn(u64) -> String) -> BTreeMap<String, u64> {
        let mut out = BTreeMap::new();
        for (&k, &v) in &self.counts {
            *out.entry(label(k)).or_insert(0) += v;
        }
        out
    }

    /// CSV with a `# shots=.. seed=..` line, a `label,count` header and one
    /// row per outcome in basis-index order.
    pub fn to_csv(&self, label: impl Fn(u64) -> String) -> Result<String> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Domain(format!("csv: {e}"));
        wtr.write_record(["label", "count"]).map_err(io)?;
        for (&k, &v) in &self.counts {
            wtr.write_record([label(k), v.to_string()]).map_err(io)?;
        }
        let body = wtr
            .into_inner()
            .map_err(|e| Error::Domain(format!("csv: {e}")))?;
        Ok(format!(
            "# shots={} seed={}\n{}",
            self.shots,
            self.seed,
            String::from_utf8(body).expect("csv output is utf-8")
        ))
    }

    /// Horizontal ASCII bars scaled to `width` characters.
    pub fn bar_chart(&self, label: impl Fn(u64) -> String, width: usize) -> String {
        let rows: Vec<(String, u64)> = self.counts.iter().map(|(&k, &v)| (label(k), v)).collect();
        let max = rows.iter().map(|r| r.1).max().unwrap_or(0).max(1);
        let pad = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (name, count) in rows {
            let len = (count as usize * width).div_ceil(max as usize);
            writeln!(out, "{name:<pad$} | {} {count}", "#".repeat(len)).unwrap();
        }
        out
    }
}

/// Draws `shots` outcomes from the Born distribution of `sv` with a seeded
/// ChaCha8 generator.
pub fn sample(sv: &Statevector, shots: u64, seed: u64) -> Histogram {
    let mut counts = BTreeMap::new();
    if shots > 0 {
        let mut outcomes = Vec::new();
        let mut cumulative = Vec::new();
        let mut total = 0.0;
        for (i, p) in sv.support() {
            total += p;
            outcomes.push(i);
            cumulative.push(total);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..shots {
            let r: f64 = rng.random::<f64>() * total;
            let pos = cumulative
                .partition_point(|&c| c <= r)
                .min(outcomes.len() - 1);
            *counts.entry(outcomes[pos]).or_insert(0) += 1;
        }
    }
    Histogram {
        shots,
        seed,
        counts,
    }
}

/// Pearson statistic against a uniform distribution over `k` bins.
///
/// Bins absent from the histogram count as zero observations; more than `k`
/// observed outcomes is an error.
pub fn chi_square_uniform(h: &Histogram, k: usize) -> Result<f64> {
    if k == 0 || h.counts.len() > k {
        return Err(Error::Domain(format!(
            "histogram has {} outcomes, expected at most {k}",
            h.counts.len()
        )));
    }
    let expected = h.shots as f64 / k as f64;
    if expected == 0.0 {
        return Ok(0.0);
    }
    let observed: f64 = h
        .counts
        .values()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let missing = (k - h.counts.len()) as f64 * expected;
    Ok(observed + missing)
}
