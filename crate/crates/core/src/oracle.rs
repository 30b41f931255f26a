//! Scenes of axis-aligned rectangles and the lookup oracles that encode them.
//!
//! An oracle maps a primitive index `i` held in the index register to the
//! rectangle parameters `(m_x, M_x, m_y, M_y)` written into four parameter
//! registers. Every output bit is a Boolean function of the index bits; each
//! function is realized from a sum of products where a product with `t`
//! literals is a `t`-control MCX.

use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::boolean::{SopExpression, TruthTable};
use crate::circuit::{Circuit, Control, Gate, Qubit, RegisterKind};
use crate::error::{Error, Result};
use crate::minimizer::minimize;
use crate::sim::{classical_apply, run_gates};

/// One of the four rectangle parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    MinX,
    MaxX,
    MinY,
    MaxY,
}

impl Param {
    pub const ALL: [Param; 4] = [Param::MinX, Param::MaxX, Param::MinY, Param::MaxY];

    /// Register name, also accepted on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            Param::MinX => "mx",
            Param::MaxX => "Mx",
            Param::MinY => "my",
            Param::MaxY => "My",
        }
    }

    pub fn value(&self, r: &Rect) -> u32 {
        match self {
            Param::MinX => r.min_x,
            Param::MaxX => r.max_x,
            Param::MinY => r.min_y,
            Param::MaxY => r.max_y,
        }
    }

    fn is_x(&self) -> bool {
        matches!(self, Param::MinX | Param::MaxX)
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mx" | "m_x" => Ok(Param::MinX),
            "Mx" | "M_x" => Ok(Param::MaxX),
            "my" | "m_y" => Ok(Param::MinY),
            "My" | "M_y" => Ok(Param::MaxY),
            other => Err(Error::Domain(format!(
                "unknown parameter {other:?}; expected mx, Mx, my or My"
            ))),
        }
    }
}

/// Which parameters an oracle writes, kept in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParamSelector(Vec<Param>);

impl ParamSelector {
    pub fn all() -> Self {
        ParamSelector(Param::ALL.to_vec())
    }

    pub fn new(params: impl IntoIterator<Item = Param>) -> Result<Self> {
        let mut v: Vec<Param> = params.into_iter().collect();
        v.sort();
        v.dedup();
        if v.is_empty() {
            return Err(Error::Domain("parameter selection is empty".into()));
        }
        Ok(ParamSelector(v))
    }

    pub fn params(&self) -> &[Param] {
        &self.0
    }
}

impl Default for ParamSelector {
    fn default() -> Self {
        ParamSelector::all()
    }
}

impl FromStr for ParamSelector {
    type Err = Error;

    /// Comma-separated names, e.g. `mx,Mx`.
    fn from_str(s: &str) -> Result<Self> {
        ParamSelector::new(
            s.split(',')
                .map(str::trim)
                .filter(|p| !p.is_empty())
                .map(Param::from_str)
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

impl fmt::Display for ParamSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.0.iter().map(Param::name).collect();
        f.write_str(&names.join(","))
    }
}

/// Rectangle `{(x, y) | min_x <= x <= max_x, min_y <= y <= max_y}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rect {
    pub min_x: u32,
    pub max_x: u32,
    pub min_y: u32,
    pub max_y: u32,
}

impl Rect {
    pub fn new(min_x: u32, max_x: u32, min_y: u32, max_y: u32) -> Self {
        Rect {
            min_x,
            max_x,
            min_y,
            max_y,
        }
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{})",
            self.min_x, self.max_x, self.min_y, self.max_y
        )
    }
}

/// Integer grid `0 <= x < bound_x`, `0 <= y < bound_y` with an ordered list
/// of rectangles. A rectangle's position in the list is its index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scene {
    bound_x: u32,
    bound_y: u32,
    primitives: Vec<Rect>,
}

fn log2_exact(v: u32) -> u32 {
    v.trailing_zeros()
}

impl Scene {
    pub fn new(bound_x: u32, bound_y: u32, primitives: Vec<Rect>) -> Result<Self> {
        for (name, b) in [("b_x", bound_x), ("b_y", bound_y)] {
            if b < 2 || !b.is_power_of_two() {
                return Err(Error::Validation(format!(
                    "bound {name} = {b} must be a power of two >= 2"
                )));
            }
        }
        if primitives.is_empty() || !primitives.len().is_power_of_two() {
            return Err(Error::Validation(format!(
                "primitive count {} must be a power of two >= 1",
                primitives.len()
            )));
        }
        if primitives.len() > 1 << 20 {
            return Err(Error::Validation("too many primitives".into()));
        }
        for (i, r) in primitives.iter().enumerate() {
            if !(r.min_x <= r.max_x && r.max_x < bound_x) {
                return Err(Error::Validation(format!(
                    "rect {i} {r}: requires 0 <= m_x <= M_x < b_x = {bound_x}"
                )));
            }
            if !(r.min_y <= r.max_y && r.max_y < bound_y) {
                return Err(Error::Validation(format!(
                    "rect {i} {r}: requires 0 <= m_y <= M_y < b_y = {bound_y}"
                )));
            }
        }
        Ok(Scene {
            bound_x,
            bound_y,
            primitives,
        })
    }

    /// Reads the line format:
    ///
    /// ```text
    /// bounds <b_x> <b_y>
    /// rect <m_x> <M_x> <m_y> <M_y>
    /// ```
    ///
    /// `#` starts a comment; blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut bounds: Option<(u32, u32)> = None;
        let mut rects = Vec::new();
        let mut rect_lines = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let keyword = words.next().expect("non-empty line");
            let nums: Vec<u32> = words
                .map(|w| {
                    w.parse::<u32>().map_err(|_| {
                        Error::parse(
                            line_no,
                            format!("expected a non-negative integer, got {w:?}"),
                        )
                    })
                })
                .collect::<Result<_>>()?;
            match keyword {
                "bounds" => {
                    if bounds.is_some() {
                        return Err(Error::parse(line_no, "duplicate bounds line"));
                    }
                    if !rects.is_empty() {
                        return Err(Error::parse(line_no, "bounds must precede rect lines"));
                    }
                    let [bx, by] = nums[..] else {
                        return Err(Error::parse(line_no, "bounds takes 2 values"));
                    };
                    bounds = Some((bx, by));
                }
                "rect" => {
                    if bounds.is_none() {
                        return Err(Error::parse(line_no, "rect before bounds"));
                    }
                    let [a, b, c, d] = nums[..] else {
                        return Err(Error::parse(line_no, "rect takes 4 values"));
                    };
                    rects.push(Rect::new(a, b, c, d));
                    rect_lines.push(line_no);
                }
                other => return Err(Error::parse(line_no, format!("unknown keyword {other:?}"))),
            }
        }
        let (bx, by) = bounds.ok_or_else(|| Error::parse(0, "missing bounds line"))?;
        Scene::new(bx, by, rects.clone()).map_err(|e| match e {
            Error::Validation(msg) => {
                // Point at the offending line when the error names a rect.
                let line = msg
                    .strip_prefix("rect ")
                    .and_then(|s| s.split_whitespace().next())
                    .and_then(|s| s.parse::<usize>().ok())
                    .map(|i| rect_lines[i]);
                match line {
                    Some(l) => Error::Validation(format!("line {l}: {msg}")),
                    None => Error::Validation(msg),
                }
            }
            other => other,
        })
    }

    /// Canonical text form accepted by [`Scene::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("bounds {} {}\n", self.bound_x, self.bound_y);
        for r in &self.primitives {
            out.push_str(&format!(
                "rect {} {} {} {}\n",
                r.min_x, r.max_x, r.min_y, r.max_y
            ));
        }
        out
    }

    /// Short content hash of the canonical text.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.to_text().as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn bound_x(&self) -> u32 {
        self.bound_x
    }

    pub fn bound_y(&self) -> u32 {
        self.bound_y
    }

    pub fn primitives(&self) -> &[Rect] {
        &self.primitives
    }

    pub fn len(&self) -> usize {
        self.primitives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primitives.is_empty()
    }

    /// Index register width. A single-primitive scene still gets one index
    /// wire; both of its values map to that primitive.
    pub fn index_width(&self) -> u32 {
        log2_exact(self.primitives.len() as u32).max(1)
    }

    /// Primitive addressed by an index register value.
    pub fn primitive_at(&self, index: u64) -> &Rect {
        &self.primitives[index as usize % self.primitives.len()]
    }

    pub fn param_width(&self, p: Param) -> u32 {
        if p.is_x() {
            log2_exact(self.bound_x)
        } else {
            log2_exact(self.bound_y)
        }
    }
}

/// Wire assignment of an oracle: index wires first, then each selected
/// parameter register in canonical order, then ancillas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleLayout {
    pub index_width: u32,
    /// `(parameter, first wire, width)` in wire order.
    pub params: Vec<(Param, usize, u32)>,
    pub ancilla_width: usize,
}

impl OracleLayout {
    /// Layout of the data registers; ancilla width is filled in by synthesis.
    pub fn new(scene: &Scene, selector: &ParamSelector) -> Self {
        let index_width = scene.index_width();
        let mut next = index_width as usize;
        let mut params = Vec::new();
        for &p in selector.params() {
            let w = scene.param_width(p);
            params.push((p, next, w));
            next += w as usize;
        }
        OracleLayout {
            index_width,
            params,
            ancilla_width: 0,
        }
    }

    pub fn data_width(&self) -> usize {
        self.index_width as usize + self.params.iter().map(|p| p.2 as usize).sum::<usize>()
    }

    pub fn index_of(&self, basis: u64) -> u64 {
        basis & ((1u64 << self.index_width) - 1)
    }

    pub fn params_of(&self, basis: u64) -> Vec<u64> {
        self.params
            .iter()
            .map(|&(_, start, w)| (basis >> start) & ((1u64 << w) - 1))
            .collect()
    }

    /// Whether every wire above the data registers is zero.
    pub fn ancillas_clear(&self, basis: u64) -> bool {
        basis >> self.data_width() == 0
    }

    /// Basis state the oracle should produce from index `i`.
    pub fn expected_basis(&self, scene: &Scene, index: u64) -> u64 {
        let rect = scene.primitive_at(index);
        self.params.iter().fold(index, |acc, &(p, start, _)| {
            acc | (p.value(rect) as u64) << start
        })
    }

    /// `i : (p, ...)` label for a measured basis state.
    pub fn label(&self, basis: u64) -> String {
        let vals: Vec<String> = self.params_of(basis).iter().map(u64::to_string).collect();
        let mut label = format!("{} : ({})", self.index_of(basis), vals.join(","));
        if !self.ancillas_clear(basis) {
            label.push_str(&format!(" anc={}", basis >> self.data_width()));
        }
        label
    }
}

/// One output bit of one parameter as a function of the index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitFunction {
    pub param: Param,
    pub bit: u32,
    pub table: TruthTable,
}

/// Bit functions ordered parameter-major, bit-minor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitFunctionSet {
    pub functions: Vec<BitFunction>,
}

impl BitFunctionSet {
    pub fn get(&self, param: Param, bit: u32) -> Option<&BitFunction> {
        self.functions
            .iter()
            .find(|f| f.param == param && f.bit == bit)
    }
}

pub fn derive_bit_functions(scene: &Scene, selector: &ParamSelector) -> BitFunctionSet {
    let arity = scene.index_width();
    let rows = 1u64 << arity;
    let mut functions = Vec::new();
    for &param in selector.params() {
        for bit in 0..scene.param_width(param) {
            let on_set = (0..rows)
                .filter(|&i| param.value(scene.primitive_at(i)) >> bit & 1 == 1)
                .map(|i| i as u32);
            functions.push(BitFunction {
                param,
                bit,
                table: TruthTable::new(arity, on_set).expect("index values fit the arity"),
            });
        }
    }
    BitFunctionSet { functions }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// One product per on-set index, OR-ed through ancillas.
    Naive,
    /// Minimized covers.
    Optimized,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Naive => "naive",
            Mode::Optimized => "optimized",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Mode::Naive),
            "optimized" => Ok(Mode::Optimized),
            other => Err(Error::Domain(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SynthOptions {
    /// Put the index register in uniform superposition first.
    pub prologue: bool,
}

impl Default for SynthOptions {
    fn default() -> Self {
        SynthOptions { prologue: true }
    }
}

/// The sum of products an oracle realizes for one bit function.
pub fn cover_for(scene: &Scene, table: &TruthTable, mode: Mode) -> Result<SopExpression> {
    match mode {
        Mode::Optimized => Ok(minimize(table)?.cover),
        Mode::Naive if scene.len() == 1 => {
            // No index bits carry information: the raw form is a constant.
            if table.is_constant_true() {
                SopExpression::new(
                    table.arity(),
                    vec![crate::boolean::Implicant::constant_true(table.arity())?],
                )
            } else {
                SopExpression::constant_false(table.arity())
            }
        }
        Mode::Naive => Ok(SopExpression::from_minterms(table)),
    }
}

/// Whether a cover is OR-ed through ancillas or XOR-ed straight into the
/// output wire. XOR equals OR only when no input hits two products.
fn needs_ancillas(mode: Mode, cover: &SopExpression) -> bool {
    cover.len() > 1 && (mode == Mode::Naive || !cover.is_pairwise_disjoint())
}

fn product_controls(term: &crate::boolean::Implicant) -> Vec<Control> {
    term.literals()
        .map(|(var, plain)| {
            let q = Qubit(var as usize);
            if plain {
                Control::pos(q)
            } else {
                Control::neg(q)
            }
        })
        .collect()
}

pub fn synthesize(scene: &Scene, mode: Mode, selector: &ParamSelector) -> Result<Circuit> {
    synthesize_with(scene, mode, selector, SynthOptions::default())
}

/// Builds the lookup oracle.
///
/// Each bit function's cover is emitted in the minimizer's order. Covers that
/// need an OR compute each product into its own ancilla, set the output by
/// an all-negative-control MCX followed by X (the De Morgan OR), and then
/// recompute the products in reverse to clear the ancillas for the next
/// function.
pub fn synthesize_with(
    scene: &Scene,
    mode: Mode,
    selector: &ParamSelector,
    options: SynthOptions,
) -> Result<Circuit> {
    let mut layout = OracleLayout::new(scene, selector);
    let functions = derive_bit_functions(scene, selector);
    let covers: Vec<SopExpression> = functions
        .functions
        .iter()
        .map(|f| cover_for(scene, &f.table, mode))
        .collect::<Result<_>>()?;
    layout.ancilla_width = covers
        .iter()
        .filter(|c| needs_ancillas(mode, c))
        .map(SopExpression::len)
        .max()
        .unwrap_or(0);

    let mut c = Circuit::new();
    let idx = c.add_register("idx", layout.index_width as usize, RegisterKind::Data)?;
    for &(p, _, w) in &layout.params {
        c.add_register(p.name(), w as usize, RegisterKind::Data)?;
    }
    let anc = if layout.ancilla_width > 0 {
        c.add_register("anc", layout.ancilla_width, RegisterKind::Ancilla)?
    } else {
        0..0
    };

    if options.prologue {
        for w in idx {
            c.push(Gate::H(Qubit(w)))?;
        }
    }
    c.end_prep();

    for (f, cover) in functions.functions.iter().zip(&covers) {
        let (_, start, _) = layout
            .params
            .iter()
            .find(|(p, _, _)| *p == f.param)
            .copied()
            .expect("bit functions follow the selector");
        let out = Qubit(start + f.bit as usize);
        if needs_ancillas(mode, cover) {
            let products: Vec<Gate> = cover
                .terms()
                .iter()
                .zip(anc.clone())
                .map(|(t, a)| Gate::mcx(product_controls(t), Qubit(a)))
                .collect();
            c.extend(products.iter().cloned())?;
            let or_controls = anc
                .clone()
                .take(cover.len())
                .map(|a| Control::neg(Qubit(a)))
                .collect();
            c.push(Gate::mcx(or_controls, out))?;
            c.push(Gate::X(out))?;
            c.extend(products.into_iter().rev())?;
        } else {
            for t in cover.terms() {
                c.push(Gate::mcx(product_controls(t), out))?;
            }
        }
    }

    c.set_label("mode", mode.name());
    c.set_label("params", selector.to_string());
    c.set_label("scene", scene.fingerprint());
    c.set_label("basis", "logical");
    Ok(c)
}

/// Outcome for one index value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexCheck {
    pub index: u64,
    pub expected: Vec<u64>,
    /// `None` when the output is not a single basis state.
    pub actual: Option<Vec<u64>>,
    pub index_preserved: bool,
    pub ancillas_clear: bool,
}

impl IndexCheck {
    pub fn passed(&self) -> bool {
        self.index_preserved && self.ancillas_clear && self.actual.as_ref() == Some(&self.expected)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<IndexCheck>,
    /// Set when the circuit's data registers do not match the scene.
    pub layout_mismatch: Option<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.layout_mismatch.is_none() && self.checks.iter().all(IndexCheck::passed)
    }

    pub fn failed_indices(&self) -> Vec<u64> {
        self.checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.index)
            .collect()
    }

    /// Observed parameter tuples, one per index.
    pub fn outputs(&self) -> Vec<Option<Vec<u64>>> {
        self.checks.iter().map(|c| c.actual.clone()).collect()
    }
}

fn tuple(v: &[u64]) -> String {
    let s: Vec<String> = v.iter().map(u64::to_string).collect();
    format!("({})", s.join(","))
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(msg) = &self.layout_mismatch {
            writeln!(f, "layout mismatch: {msg}")?;
        }
        for c in &self.checks {
            let actual = c
                .actual
                .as_deref()
                .map(tuple)
                .unwrap_or_else(|| "superposition".into());
            write!(
                f,
                "{} : expected {} got {}",
                c.index,
                tuple(&c.expected),
                actual
            )?;
            if !c.index_preserved {
                f.write_str(" index-changed")?;
            }
            if !c.ancillas_clear {
                f.write_str(" ancilla-dirty")?;
            }
            writeln!(f, " {}", if c.passed() { "ok" } else { "FAIL" })?;
        }
        writeln!(f, "result: {}", if self.passed() { "pass" } else { "fail" })
    }
}

/// Runs every index value through the circuit body (state preparation
/// skipped) and compares against the scene.
///
/// Bodies made of X and MCX gates are propagated with bit arithmetic; any
/// other body goes through the statevector simulator.
pub fn verify_oracle(c: &Circuit, scene: &Scene, selector: &ParamSelector) -> VerifyReport {
    let layout = OracleLayout::new(scene, selector);
    let mut layout_mismatch = None;
    if c.data_width() != layout.data_width() {
        layout_mismatch = Some(format!(
            "circuit has {} data wires, scene needs {}",
            c.data_width(),
            layout.data_width()
        ));
    }
    let body = c.body();
    let classical = body.iter().all(Gate::is_classical);

    let checks = (0..1u64 << layout.index_width)
        .map(|index| {
            let expected = layout.params_of(layout.expected_basis(scene, index));
            let out = if layout_mismatch.is_some() {
                None
            } else if classical {
                classical_apply(body, index)
            } else {
                run_gates(c.num_wires(), body, index).ok().and_then(|sv| {
                    let support: Vec<(u64, f64)> = sv.support().collect();
                    match support[..] {
                        [(basis, p)] if (p - 1.0).abs() < 1e-9 => Some(basis),
                        _ => None,
                    }
                })
            };
            IndexCheck {
                index,
                expected,
                actual: out.map(|b| layout.params_of(b)),
                index_preserved: out.is_some_and(|b| layout.index_of(b) == index),
                ancillas_clear: out.is_some_and(|b| layout.ancillas_clear(b)),
            }
        })
        .collect();
    VerifyReport {
        checks,
        layout_mismatch,
    }
}
