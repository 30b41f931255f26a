//! Minterms, implicants, sums of products and single-output truth tables.
//!
//! Variable `x_i` is bit `i` of the input integer, with `x_0` the least
//! significant bit. An implicant is a `(care_mask, pattern)` pair: bit `i` of
//! `care_mask` says whether `x_i` appears in the product, bit `i` of `pattern`
//! gives its required value.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported number of variables.
pub const MAX_ARITY: u32 = 30;

fn check_arity(arity: u32) -> Result<()> {
    if arity == 0 || arity > MAX_ARITY {
        return Err(Error::Domain(format!(
            "arity {arity} outside supported range 1..={MAX_ARITY}"
        )));
    }
    Ok(())
}

fn full_mask(arity: u32) -> u32 {
    if arity >= 32 {
        u32::MAX
    } else {
        (1u32 << arity) - 1
    }
}

/// A product term over `arity` variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Implicant {
    arity: u32,
    care: u32,
    pattern: u32,
}

impl Implicant {
    pub fn new(arity: u32, care_mask: u32, pattern: u32) -> Result<Self> {
        check_arity(arity)?;
        let full = full_mask(arity);
        if care_mask & !full != 0 {
            return Err(Error::Domain(format!(
                "care mask {care_mask:#b} has bits beyond arity {arity}"
            )));
        }
        if pattern & !care_mask != 0 {
            return Err(Error::Domain(format!(
                "pattern {pattern:#b} sets bits outside care mask {care_mask:#b}"
            )));
        }
        Ok(Implicant {
            arity,
            care: care_mask,
            pattern,
        })
    }

    /// The minterm that is true exactly for `index`.
    pub fn minterm(arity: u32, index: u32) -> Result<Self> {
        check_arity(arity)?;
        if index > full_mask(arity) {
            return Err(Error::Domain(format!(
                "minterm index {index} out of range for arity {arity}"
            )));
        }
        Ok(Implicant {
            arity,
            care: full_mask(arity),
            pattern: index,
        })
    }

    /// The product with no literals.
    pub fn constant_true(arity: u32) -> Result<Self> {
        Implicant::new(arity, 0, 0)
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn care_mask(&self) -> u32 {
        self.care
    }

    pub fn pattern(&self) -> u32 {
        self.pattern
    }

    pub fn is_minterm(&self) -> bool {
        self.care == full_mask(self.arity)
    }

    pub fn is_constant_true(&self) -> bool {
        self.care == 0
    }

    /// Number of literals in the product.
    pub fn literal_count(&self) -> u32 {
        self.care.count_ones()
    }

    /// Number of inputs covered.
    pub fn size(&self) -> u64 {
        1u64 << (self.arity - self.care.count_ones())
    }

    /// Literals as `(variable, plain)` pairs, lowest variable first.
    /// `plain == false` means the complemented literal `x_i'`.
    pub fn literals(&self) -> impl Iterator<Item = (u32, bool)> + '_ {
        (0..self.arity)
            .filter(move |i| self.care >> i & 1 == 1)
            .map(move |i| (i, self.pattern >> i & 1 == 1))
    }

    /// Membership test without the range check.
    #[inline]
    pub fn contains(&self, input: u32) -> bool {
        input & self.care == self.pattern
    }

    pub fn covers(&self, input: u32) -> Result<bool> {
        if input > full_mask(self.arity) {
            return Err(Error::Domain(format!(
                "input {input} out of range for arity {}",
                self.arity
            )));
        }
        Ok(self.contains(input))
    }

    /// True when no input satisfies both products.
    pub fn is_disjoint(&self, other: &Implicant) -> bool {
        (self.care & other.care) & (self.pattern ^ other.pattern) != 0
    }

    /// True when every input covered by `other` is covered by `self`.
    pub fn subsumes(&self, other: &Implicant) -> bool {
        self.care & !other.care == 0 && other.pattern & self.care == self.pattern
    }

    /// Merges two products that differ only in the polarity of one variable.
    pub fn try_combine(&self, other: &Implicant) -> Result<Option<Implicant>> {
        if self.arity != other.arity {
            return Err(Error::Domain(format!(
                "cannot combine implicants of arity {} and {}",
                self.arity, other.arity
            )));
        }
        if self.care != other.care {
            return Ok(None);
        }
        let diff = self.pattern ^ other.pattern;
        if diff.count_ones() != 1 {
            return Ok(None);
        }
        Ok(Some(Implicant {
            arity: self.arity,
            care: self.care & !diff,
            pattern: self.pattern & !diff,
        }))
    }

    /// Covered inputs in increasing order.
    pub fn cover_set(&self) -> impl Iterator<Item = u32> + '_ {
        // Enumerate subsets of the free bits.
        let free = full_mask(self.arity) & !self.care;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let sub = next?;
            next = if sub == free {
                None
            } else {
                Some((sub | !free).wrapping_add(1) & free)
            };
            Some(self.pattern | sub)
        })
    }

    /// PLA cube text, most significant variable first: `1`, `0` or `-`.
    pub fn to_pla(&self) -> String {
        (0..self.arity)
            .rev()
            .map(|i| match (self.care >> i & 1, self.pattern >> i & 1) {
                (0, _) => '-',
                (_, 1) => '1',
                _ => '0',
            })
            .collect()
    }

    pub fn from_pla(cube: &str) -> Result<Self> {
        let arity = cube.chars().count() as u32;
        check_arity(arity)?;
        let mut care = 0;
        let mut pattern = 0;
        for (pos, ch) in cube.chars().enumerate() {
            let bit = 1u32 << (arity - 1 - pos as u32);
            match ch {
                '1' => {
                    care |= bit;
                    pattern |= bit;
                }
                '0' => care |= bit,
                '-' => {}
                other => {
                    return Err(Error::Domain(format!(
                        "unexpected character {other:?} in cube {cube:?}"
                    )))
                }
            }
        }
        Implicant::new(arity, care, pattern)
    }

    /// Literal form such as `x_2'x_0`; `1` for the empty product.
    pub fn literal_string(&self) -> String {
        if self.is_constant_true() {
            return "1".to_string();
        }
        let mut out = String::new();
        for i in (0..self.arity).rev() {
            if self.care >> i & 1 == 1 {
                out.push_str(&format!("x_{i}"));
                if self.pattern >> i & 1 == 0 {
                    out.push('\'');
                }
            }
        }
        out
    }
}

/// Ordered by `(pattern, care_mask)`, then arity.
impl Ord for Implicant {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.pattern, self.care, self.arity).cmp(&(other.pattern, other.care, other.arity))
    }
}

impl PartialOrd for Implicant {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `m(i, j, ...)` notation listing the covered inputs.
impl fmt::Display for Implicant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("m(")?;
        for (k, i) in self.cover_set().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str(")")
    }
}

/// A disjunction of products. No terms means constant false.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SopExpression {
    arity: u32,
    terms: Vec<Implicant>,
}

impl SopExpression {
    pub fn new(arity: u32, terms: Vec<Implicant>) -> Result<Self> {
        check_arity(arity)?;
        if let Some(t) = terms.iter().find(|t| t.arity != arity) {
            return Err(Error::Domain(format!(
                "term {} has arity {}, expression has {arity}",
                t.to_pla(),
                t.arity
            )));
        }
        Ok(SopExpression { arity, terms })
    }

    pub fn constant_false(arity: u32) -> Result<Self> {
        SopExpression::new(arity, Vec::new())
    }

    /// One minterm per on-set input, in increasing order.
    pub fn from_minterms(table: &TruthTable) -> Self {
        let terms = table
            .on_set()
            .iter()
            .map(|&i| Implicant {
                arity: table.arity,
                care: full_mask(table.arity),
                pattern: i,
            })
            .collect();
        SopExpression {
            arity: table.arity,
            terms,
        }
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn terms(&self) -> &[Implicant] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn literal_count(&self) -> u32 {
        self.terms.iter().map(Implicant::literal_count).sum()
    }

    /// True when no input is covered by two different terms.
    pub fn is_pairwise_disjoint(&self) -> bool {
        self.terms
            .iter()
            .enumerate()
            .all(|(k, a)| self.terms[k + 1..].iter().all(|b| a.is_disjoint(b)))
    }

    pub fn evaluate(&self, input: u32) -> Result<bool> {
        if input > full_mask(self.arity) {
            return Err(Error::Domain(format!(
                "input {input} out of range for arity {}",
                self.arity
            )));
        }
        Ok(self.terms.iter().any(|t| t.contains(input)))
    }

    pub fn to_table(&self) -> TruthTable {
        let on_set = (0..=full_mask(self.arity))
            .filter(|&i| self.terms.iter().any(|t| t.contains(i)))
            .collect();
        TruthTable {
            arity: self.arity,
            on_set,
        }
    }

    /// One PLA cube per line.
    pub fn to_pla(&self) -> String {
        self.terms
            .iter()
            .map(|t| t.to_pla() + "\n")
            .collect::<String>()
    }

    /// Parses cubes, one per line; blank lines and `#` comments are skipped.
    pub fn from_pla(text: &str) -> Result<Self> {
        let mut arity = None;
        let mut terms = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let term = Implicant::from_pla(line).map_err(|e| Error::parse(n + 1, e.to_string()))?;
            match arity {
                None => arity = Some(term.arity),
                Some(a) if a != term.arity => {
                    return Err(Error::parse(
                        n + 1,
                        format!("cube width {} differs from {a}", term.arity),
                    ))
                }
                _ => {}
            }
            terms.push(term);
        }
        let arity = arity.ok_or_else(|| Error::parse(0, "no cubes found"))?;
        SopExpression::new(arity, terms)
    }
}

impl fmt::Display for SopExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// A single-output Boolean function given by its on-set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    arity: u32,
    on_set: BTreeSet<u32>,
}

impl TruthTable {
    pub fn new(arity: u32, on_set: impl IntoIterator<Item = u32>) -> Result<Self> {
        check_arity(arity)?;
        let on_set: BTreeSet<u32> = on_set.into_iter().collect();
        if let Some(&bad) = on_set.iter().find(|&&i| i > full_mask(arity)) {
            return Err(Error::Domain(format!(
                "on-set element {bad} out of range for arity {arity}"
            )));
        }
        Ok(TruthTable { arity, on_set })
    }

    pub fn from_fn(arity: u32, f: impl Fn(u32) -> bool) -> Result<Self> {
        check_arity(arity)?;
        Ok(TruthTable {
            arity,
            on_set: (0..=full_mask(arity)).filter(|&i| f(i)).collect(),
        })
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn on_set(&self) -> &BTreeSet<u32> {
        &self.on_set
    }

    /// Number of rows, `2^arity`.
    pub fn rows(&self) -> u64 {
        1u64 << self.arity
    }

    pub fn contains(&self, input: u32) -> bool {
        self.on_set.contains(&input)
    }

    pub fn is_constant_false(&self) -> bool {
        self.on_set.is_empty()
    }

    pub fn is_constant_true(&self) -> bool {
        self.on_set.len() as u64 == self.rows()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn imp(arity: u32, care: u32, pattern: u32) -> Implicant {
        Implicant::new(arity, care, pattern).unwrap()
    }

    #[test]
    fn covers_worked_examples() {
        let m01 = imp(3, 0b110, 0b000);
        assert!(m01.covers(0).unwrap());
        assert!(!m01.covers(5).unwrap());
        let m3 = imp(2, 0b11, 0b11);
        assert!(m3.covers(3).unwrap());
        assert!(matches!(m01.covers(8), Err(Error::Domain(_))));
    }

    #[test]
    fn combine_worked_examples() {
        let m1 = Implicant::minterm(3, 1).unwrap();
        let m3 = Implicant::minterm(3, 3).unwrap();
        let merged = m1.try_combine(&m3).unwrap().unwrap();
        assert_eq!(merged, imp(3, 0b101, 0b001));
        assert_eq!(merged.literal_string(), "x_2'x_0");
        assert_eq!(merged.to_string(), "m(1,3)");

        let m01 = imp(3, 0b110, 0b000);
        let m67 = imp(3, 0b110, 0b110);
        assert_eq!(m01.try_combine(&m67).unwrap(), None);
        assert_eq!(m01.try_combine(&m01).unwrap(), None);

        let other = Implicant::minterm(2, 1).unwrap();
        assert!(matches!(m1.try_combine(&other), Err(Error::Domain(_))));
    }

    #[test]
    fn evaluate_sop() {
        let g = SopExpression::new(3, vec![imp(3, 0b101, 0b001), imp(3, 0b011, 0b011)]).unwrap();
        assert_eq!(g.to_string(), "m(1,3) + m(3,7)");
        assert!(g.evaluate(7).unwrap());
        assert!(!g.evaluate(0).unwrap());
        assert!(g.evaluate(8).is_err());
        let empty = SopExpression::constant_false(3).unwrap();
        assert!((0..8).all(|i| !empty.evaluate(i).unwrap()));
        assert_eq!(empty.to_string(), "0");
    }

    #[test]
    fn table_of_sop_examples() {
        let h = SopExpression::new(
            3,
            vec![imp(3, 0b110, 0), imp(3, 0b011, 0b010), imp(3, 0b101, 0b101)],
        )
        .unwrap();
        assert_eq!(
            h.to_table(),
            TruthTable::new(3, [0, 1, 2, 5, 6, 7]).unwrap()
        );
        let five = SopExpression::new(3, vec![Implicant::minterm(3, 5).unwrap()]).unwrap();
        assert_eq!(
            five.to_table().on_set().iter().copied().collect::<Vec<_>>(),
            vec![5]
        );
        let one = SopExpression::new(4, vec![Implicant::constant_true(4).unwrap()]).unwrap();
        assert!(one.to_table().is_constant_true());
    }

    #[test]
    fn pla_text() {
        let m01 = imp(3, 0b110, 0);
        assert_eq!(m01.to_pla(), "00-");
        assert_eq!(Implicant::from_pla("00-").unwrap(), m01);
        assert_eq!(Implicant::from_pla("1-1").unwrap(), imp(3, 0b101, 0b101));
        assert!(Implicant::from_pla("01x").is_err());
        let sop = SopExpression::from_pla("# h\n00-\n-10\n\n1-1\n").unwrap();
        assert_eq!(sop.len(), 3);
        assert!(matches!(
            SopExpression::from_pla("00-\n0-"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn invariants_enforced() {
        assert!(Implicant::new(3, 0b010, 0b001).is_err());
        assert!(Implicant::new(0, 0, 0).is_err());
        assert!(Implicant::new(31, 0, 0).is_err());
        assert!(Implicant::new(2, 0b100, 0).is_err());
        assert!(TruthTable::new(2, [4]).is_err());
        assert!(SopExpression::new(3, vec![Implicant::minterm(2, 0).unwrap()]).is_err());
    }

    #[test]
    fn disjointness_and_subsumption() {
        let x0 = imp(2, 0b01, 0b01);
        let x1 = imp(2, 0b10, 0b10);
        let m3 = Implicant::minterm(2, 3).unwrap();
        assert!(!x0.is_disjoint(&x1));
        assert!(x0.subsumes(&m3));
        assert!(!m3.subsumes(&x0));
        let nx0 = imp(2, 0b01, 0);
        assert!(x0.is_disjoint(&nx0));
    }

    fn arb_implicant(arity: u32) -> impl Strategy<Value = Implicant> {
        let full = full_mask(arity);
        (0..=full, 0..=full)
            .prop_map(move |(care, pat)| Implicant::new(arity, care, pat & care).unwrap())
    }

    fn arb_sop() -> impl Strategy<Value = SopExpression> {
        (1u32..=10).prop_flat_map(|n| {
            proptest::collection::vec(arb_implicant(n), 0..6)
                .prop_map(move |terms| SopExpression::new(n, terms).unwrap())
        })
    }

    proptest! {
        #[test]
        fn evaluate_agrees_with_table(sop in arb_sop()) {
            let table = sop.to_table();
            for i in 0..(1u32 << sop.arity()) {
                prop_assert_eq!(sop.evaluate(i).unwrap(), table.contains(i));
            }
        }

        #[test]
        fn cover_size_matches_free_bits(imp in (1u32..=10).prop_flat_map(arb_implicant)) {
            let brute = (0..(1u32 << imp.arity())).filter(|&i| imp.contains(i)).count() as u64;
            prop_assert_eq!(imp.size(), brute);
            prop_assert_eq!(imp.cover_set().count() as u64, brute);
            prop_assert!(imp.cover_set().all(|i| imp.contains(i)));
        }

        #[test]
        fn merge_is_union(
            (a, b) in (1u32..=10).prop_flat_map(|n| (arb_implicant(n), arb_implicant(n)))
        ) {
            if let Some(c) = a.try_combine(&b).unwrap() {
                for i in 0..(1u32 << a.arity()) {
                    prop_assert_eq!(c.contains(i), a.contains(i) || b.contains(i));
                }
            }
        }

        #[test]
        fn pla_round_trip(imp in (1u32..=12).prop_flat_map(arb_implicant)) {
            prop_assert_eq!(Implicant::from_pla(&imp.to_pla()).unwrap(), imp);
        }
    }
}
