//! Exact two-level minimization.
//!
//! Prime implicants come from the Quine-McCluskey merging passes. A minimum
//! cover is then selected with Petrick's method: one clause per uncovered
//! on-set input listing the primes that cover it, multiplied out into a sum of
//! products with absorption applied after every clause.
//!
//! Petrick products are sets of prime indices, so `AA = A` and `A + A = A`
//! hold structurally and `A + AB = A` is a superset filter.

use std::collections::{BTreeSet, HashSet};

use fixedbitset::FixedBitSet;

use crate::boolean::{Implicant, SopExpression, TruthTable};
use crate::error::{Error, Result};

/// Largest arity accepted by [`brute_force_minimal_cover`].
pub const BRUTE_FORCE_MAX_ARITY: u32 = 4;

/// Expansion size at which Petrick's method gives up and falls back to a
/// greedy cover.
const MAX_PETRICK_PRODUCTS: usize = 20_000;

/// Prime implicants of a single function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSet {
    arity: u32,
    primes: Vec<Implicant>,
}

impl PrimeSet {
    pub fn new(arity: u32, primes: impl IntoIterator<Item = Implicant>) -> Result<Self> {
        let primes: BTreeSet<Implicant> = primes.into_iter().collect();
        if let Some(p) = primes.iter().find(|p| p.arity() != arity) {
            return Err(Error::Domain(format!(
                "prime {} has arity {}, set has {arity}",
                p.to_pla(),
                p.arity()
            )));
        }
        Ok(PrimeSet {
            arity,
            primes: primes.into_iter().collect(),
        })
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    /// Primes sorted by `(pattern, care_mask)`.
    pub fn primes(&self) -> &[Implicant] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn contains(&self, imp: &Implicant) -> bool {
        self.primes.binary_search(imp).is_ok()
    }
}

/// A selected cover and how it was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSolution {
    pub cover: SopExpression,
    /// No cover with fewer products exists.
    pub is_provably_minimal: bool,
    /// How many distinct minimum-cardinality covers were found.
    pub num_candidates_of_same_size: usize,
}

/// Quine-McCluskey merging passes until no new implicant appears.
pub fn prime_implicants(table: &TruthTable) -> PrimeSet {
    let arity = table.arity();
    let mut current: HashSet<Implicant> = table
        .on_set()
        .iter()
        .map(|&i| Implicant::minterm(arity, i).expect("table entries are in range"))
        .collect();
    let mut primes = BTreeSet::new();

    while !current.is_empty() {
        let mut merged_away: HashSet<Implicant> = HashSet::new();
        let mut next: HashSet<Implicant> = HashSet::new();
        for imp in &current {
            // Pair each implicant with its partner that has one more 1 bit.
            for var in 0..arity {
                let bit = 1u32 << var;
                if imp.care_mask() & bit == 0 || imp.pattern() & bit != 0 {
                    continue;
                }
                let partner = Implicant::new(arity, imp.care_mask(), imp.pattern() | bit)
                    .expect("partner keeps the care mask");
                if current.contains(&partner) {
                    let combined = imp
                        .try_combine(&partner)
                        .expect("same arity")
                        .expect("differs in one bit");
                    next.insert(combined);
                    merged_away.insert(*imp);
                    merged_away.insert(partner);
                }
            }
        }
        primes.extend(current.iter().filter(|i| !merged_away.contains(i)).copied());
        current = next;
    }

    PrimeSet {
        arity,
        primes: primes.into_iter().collect(),
    }
}

/// Sort key that decides between covers of equal cardinality: fewer
/// literals first, then lexicographic order of the sorted terms.
fn tie_key(terms: &[Implicant]) -> (usize, u32, Vec<(u32, u32)>) {
    let mut pairs: Vec<(u32, u32)> = terms.iter().map(|t| (t.pattern(), t.care_mask())).collect();
    pairs.sort_unstable();
    let literals = terms.iter().map(Implicant::literal_count).sum();
    (terms.len(), literals, pairs)
}

fn sorted_cover(arity: u32, mut terms: Vec<Implicant>) -> SopExpression {
    terms.sort();
    SopExpression::new(arity, terms).expect("terms share the table arity")
}

/// A set of prime indices.
type IdSet = FixedBitSet;

fn id_set(universe: usize, ids: impl IntoIterator<Item = usize>) -> IdSet {
    let mut s = FixedBitSet::with_capacity(universe);
    s.extend(ids);
    s
}

/// Removes duplicates and every set that is a superset of another
/// (`A + AB = A`). The survivors are ordered by size, then contents.
fn absorb(sets: Vec<IdSet>) -> Vec<IdSet> {
    let mut sets = sets;
    sets.sort_by(|a, b| {
        a.count_ones(..)
            .cmp(&b.count_ones(..))
            .then_with(|| a.cmp(b))
    });
    sets.dedup();
    let mut kept: Vec<IdSet> = Vec::with_capacity(sets.len());
    for p in sets {
        if !kept.iter().any(|k| k.is_subset(&p)) {
            kept.push(p);
        }
    }
    kept
}

/// Multiplies out a product of sums over prime indices.
///
/// Products with more than `bound` primes are dropped as they appear; with
/// `bound` at least the size of some known cover this never loses a minimum
/// one. Returns `None` if the expansion grows past the size cap.
fn expand_clauses(clauses: &[IdSet], universe: usize, bound: usize) -> Option<Vec<IdSet>> {
    let mut products = vec![FixedBitSet::with_capacity(universe)];
    for clause in clauses {
        let mut next = Vec::with_capacity(products.len() * 2);
        for p in &products {
            if !p.is_disjoint(clause) {
                // Already satisfied; every other expansion would be absorbed.
                next.push(p.clone());
                continue;
            }
            if p.count_ones(..) >= bound {
                continue;
            }
            for id in clause.ones() {
                let mut q = p.clone();
                q.insert(id);
                next.push(q);
            }
        }
        if next.len() > 8 * MAX_PETRICK_PRODUCTS {
            return None;
        }
        products = absorb(next);
        if products.len() > MAX_PETRICK_PRODUCTS {
            return None;
        }
    }
    Some(products)
}

fn greedy_cover(primes: &[Implicant], remaining: &BTreeSet<u32>) -> Vec<usize> {
    let mut remaining = remaining.clone();
    let mut chosen = Vec::new();
    while !remaining.is_empty() {
        let best = (0..primes.len())
            .filter(|i| !chosen.contains(i))
            .max_by_key(|&i| {
                let gain = remaining.iter().filter(|&&m| primes[i].contains(m)).count();
                (gain, std::cmp::Reverse(primes[i].literal_count()))
            })
            .expect("primes cover the on-set");
        remaining.retain(|&m| !primes[best].contains(m));
        chosen.push(best);
    }
    chosen
}

/// Petrick's method over the given primes.
pub fn petrick_cover(primes: &PrimeSet, table: &TruthTable) -> Result<CoverSolution> {
    let arity = table.arity();
    if primes.arity() != arity {
        return Err(Error::Domain(format!(
            "prime set arity {} differs from table arity {arity}",
            primes.arity()
        )));
    }
    let list = primes.primes();

    for &m in table.on_set() {
        if !list.iter().any(|p| p.contains(m)) {
            return Err(Error::Inconsistent(format!(
                "on-set input {m} is not covered by any prime"
            )));
        }
    }
    if table.is_constant_false() {
        return Ok(CoverSolution {
            cover: SopExpression::constant_false(arity)?,
            is_provably_minimal: true,
            num_candidates_of_same_size: 1,
        });
    }

    // A single prime equal to the whole on-set is already optimal.
    if let Some(p) = list.iter().find(|p| {
        p.size() == table.on_set().len() as u64 && table.on_set().iter().all(|&m| p.contains(m))
    }) {
        return Ok(CoverSolution {
            cover: sorted_cover(arity, vec![*p]),
            is_provably_minimal: true,
            num_candidates_of_same_size: 1,
        });
    }

    // Essential primes appear in every cover.
    let mut essential: BTreeSet<usize> = BTreeSet::new();
    for &m in table.on_set() {
        let mut covering = (0..list.len()).filter(|&i| list[i].contains(m));
        if let (Some(only), None) = (covering.next(), covering.next()) {
            essential.insert(only);
        }
    }
    let remaining: BTreeSet<u32> = table
        .on_set()
        .iter()
        .copied()
        .filter(|&m| !essential.iter().any(|&i| list[i].contains(m)))
        .collect();

    // A clause that contains another is implied by it: (A + B)(A + B + C) = A + B.
    let clauses = absorb(
        remaining
            .iter()
            .map(|&m| id_set(list.len(), (0..list.len()).filter(|&i| list[i].contains(m))))
            .collect(),
    );
    let greedy = greedy_cover(list, &remaining);

    let to_terms = |ids: &IdSet| -> Vec<Implicant> {
        essential
            .iter()
            .copied()
            .chain(ids.ones())
            .map(|i| list[i])
            .collect()
    };

    match expand_clauses(&clauses, list.len(), greedy.len()) {
        Some(products) => {
            let min_len = products.iter().map(|p| p.count_ones(..)).min().unwrap_or(0);
            let candidates: Vec<Vec<Implicant>> = products
                .iter()
                .filter(|p| p.count_ones(..) == min_len)
                .map(to_terms)
                .collect();
            let count = candidates.len();
            let best = candidates
                .into_iter()
                .min_by_key(|terms| tie_key(terms))
                .expect("at least one product survives expansion");
            Ok(CoverSolution {
                cover: sorted_cover(arity, best),
                is_provably_minimal: true,
                num_candidates_of_same_size: count,
            })
        }
        None => {
            let mut ids: Vec<usize> = essential.iter().copied().collect();
            ids.extend(greedy);
            Ok(CoverSolution {
                cover: sorted_cover(arity, ids.into_iter().map(|i| list[i]).collect()),
                is_provably_minimal: false,
                num_candidates_of_same_size: 1,
            })
        }
    }
}

/// Prime implicants followed by Petrick's method.
pub fn minimize(table: &TruthTable) -> Result<CoverSolution> {
    let primes = prime_implicants(table);
    petrick_cover(&primes, table)
}

/// Exhaustive reference minimizer for small arities.
///
/// Primes are found by enumerating all `3^n` products directly, and covers by
/// trying subsets in increasing cardinality. Shares no code with the
/// Quine-McCluskey and Petrick path beyond the [`Implicant`] type.
pub fn brute_force_minimal_cover(table: &TruthTable) -> Result<CoverSolution> {
    let arity = table.arity();
    if arity > BRUTE_FORCE_MAX_ARITY {
        return Err(Error::Capacity(format!(
            "brute-force cover search supports arity <= {BRUTE_FORCE_MAX_ARITY}, got {arity}"
        )));
    }
    let rows = 1u32 << arity;
    let onset_mask: u32 = table.on_set().iter().fold(0, |acc, &m| acc | 1 << m);

    // Every product as a bitmask over the 2^n rows.
    let mut implicants: Vec<(Implicant, u32)> = Vec::new();
    for care in 0..rows {
        for pattern in 0..rows {
            if pattern & !care != 0 {
                continue;
            }
            let imp = Implicant::new(arity, care, pattern)?;
            let rows_mask = (0..rows)
                .filter(|&i| i & care == pattern)
                .fold(0u32, |acc, i| acc | 1 << i);
            if rows_mask & !onset_mask == 0 {
                implicants.push((imp, rows_mask));
            }
        }
    }
    let primes: Vec<(Implicant, u32)> = implicants
        .iter()
        .filter(|(_, a)| !implicants.iter().any(|(_, b)| a != b && a & b == *a))
        .copied()
        .collect();

    if onset_mask == 0 {
        return Ok(CoverSolution {
            cover: SopExpression::constant_false(arity)?,
            is_provably_minimal: true,
            num_candidates_of_same_size: 1,
        });
    }

    for k in 1..=primes.len() {
        let mut found: Vec<Vec<Implicant>> = Vec::new();
        let mut chosen: Vec<usize> = Vec::with_capacity(k);
        search_subsets(&primes, onset_mask, k, 0, 0, &mut chosen, &mut found);
        if !found.is_empty() {
            let count = found.len();
            let best = found
                .into_iter()
                .min_by_key(|terms| tie_key(terms))
                .expect("non-empty");
            return Ok(CoverSolution {
                cover: sorted_cover(arity, best),
                is_provably_minimal: true,
                num_candidates_of_same_size: count,
            });
        }
    }
    unreachable!("the full prime set always covers the on-set")
}

fn search_subsets(
    primes: &[(Implicant, u32)],
    target: u32,
    k: usize,
    start: usize,
    covered: u32,
    chosen: &mut Vec<usize>,
    found: &mut Vec<Vec<Implicant>>,
) {
    if chosen.len() == k {
        if covered == target {
            found.push(chosen.iter().map(|&i| primes[i].0).collect());
        }
        return;
    }
    let need = k - chosen.len();
    for i in start..primes.len() {
        if primes.len() - i < need {
            break;
        }
        chosen.push(i);
        search_subsets(
            primes,
            target,
            k,
            i + 1,
            covered | primes[i].1,
            chosen,
            found,
        );
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(arity: u32, on: &[u32]) -> TruthTable {
        TruthTable::new(arity, on.iter().copied()).unwrap()
    }

    fn names(sop: &SopExpression) -> Vec<String> {
        sop.terms().iter().map(|t| t.to_string()).collect()
    }

    fn prime_names(p: &PrimeSet) -> BTreeSet<String> {
        p.primes().iter().map(|t| t.to_string()).collect()
    }

    #[test]
    fn primes_of_g() {
        let p = prime_implicants(&table(3, &[1, 3, 7]));
        assert_eq!(
            prime_names(&p),
            ["m(1,3)", "m(3,7)"].iter().map(|s| s.to_string()).collect()
        );
    }

    #[test]
    fn primes_of_h() {
        let p = prime_implicants(&table(3, &[0, 1, 2, 5, 6, 7]));
        let expected: BTreeSet<String> =
            ["m(0,1)", "m(0,2)", "m(1,5)", "m(2,6)", "m(5,7)", "m(6,7)"]
                .iter()
                .map(|s| s.to_string())
                .collect();
        assert_eq!(prime_names(&p), expected);
    }

    #[test]
    fn full_table_has_single_prime() {
        let t = TruthTable::from_fn(4, |_| true).unwrap();
        let p = prime_implicants(&t);
        assert_eq!(p.primes(), &[Implicant::constant_true(4).unwrap()]);
        let c = minimize(&t).unwrap();
        assert_eq!(c.cover.len(), 1);
        assert!(c.cover.terms()[0].is_constant_true());
    }

    #[test]
    fn empty_table() {
        let t = table(3, &[]);
        assert!(prime_implicants(&t).is_empty());
        let c = minimize(&t).unwrap();
        assert!(c.cover.is_empty());
        assert!(c.is_provably_minimal);
    }

    #[test]
    fn petrick_on_h() {
        let t = table(3, &[0, 1, 2, 5, 6, 7]);
        let c = petrick_cover(&prime_implicants(&t), &t).unwrap();
        assert_eq!(c.cover.len(), 3);
        assert_eq!(c.num_candidates_of_same_size, 2);
        assert!(c.is_provably_minimal);
        assert_eq!(c.cover.to_table(), t);
        // Both candidates carry six literals; (pattern, care) order picks this one.
        assert_eq!(names(&c.cover), vec!["m(0,2)", "m(1,5)", "m(6,7)"]);
    }

    #[test]
    fn petrick_single_minterm() {
        let t = table(3, &[5]);
        let c = minimize(&t).unwrap();
        assert_eq!(names(&c.cover), vec!["m(5)"]);
        assert!(c.is_provably_minimal);
    }

    #[test]
    fn petrick_rejects_incomplete_primes() {
        let t = table(3, &[1, 3, 7]);
        let partial = PrimeSet::new(3, [Implicant::new(3, 0b101, 0b001).unwrap()]).unwrap();
        assert!(matches!(
            petrick_cover(&partial, &t),
            Err(Error::Inconsistent(_))
        ));
    }

    #[test]
    fn lookup_bit_functions() {
        // High bit only: x_1.
        let c = minimize(&table(2, &[2, 3])).unwrap();
        assert_eq!(c.cover.terms(), &[Implicant::new(2, 0b10, 0b10).unwrap()]);
        let c = minimize(&table(2, &[3])).unwrap();
        assert_eq!(c.cover.terms(), &[Implicant::minterm(2, 3).unwrap()]);
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(
            brute_force_minimal_cover(&table(3, &[0, 1, 2, 5, 6, 7]))
                .unwrap()
                .cover
                .len(),
            3
        );
        let g = brute_force_minimal_cover(&table(3, &[1, 3, 7])).unwrap();
        assert_eq!(names(&g.cover), vec!["m(1,3)", "m(3,7)"]);
        assert_eq!(g.num_candidates_of_same_size, 1);
        let full = TruthTable::from_fn(3, |_| true).unwrap();
        assert_eq!(brute_force_minimal_cover(&full).unwrap().cover.len(), 1);
        assert!(matches!(
            brute_force_minimal_cover(&table(5, &[1])),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn brute_force_counts_both_h_covers() {
        let c = brute_force_minimal_cover(&table(3, &[0, 1, 2, 5, 6, 7])).unwrap();
        assert_eq!(c.num_candidates_of_same_size, 2);
    }

    #[test]
    fn absorption_reaches_fixpoint() {
        let s = |v: &[usize]| id_set(4, v.iter().copied());
        let out = absorb(vec![
            s(&[0, 1]),
            s(&[0]),
            s(&[0]),
            s(&[2, 3]),
            s(&[1, 2, 3]),
        ]);
        assert_eq!(out, vec![s(&[0]), s(&[2, 3])]);
    }

    #[test]
    fn expansion_of_h_is_irredundant() {
        let t = table(3, &[0, 1, 2, 5, 6, 7]);
        let primes = prime_implicants(&t);
        let list = primes.primes();
        let clauses: Vec<IdSet> = t
            .on_set()
            .iter()
            .map(|&m| id_set(list.len(), (0..list.len()).filter(|&i| list[i].contains(m))))
            .collect();
        let products = expand_clauses(&clauses, list.len(), usize::MAX).unwrap();
        for (i, a) in products.iter().enumerate() {
            for (j, b) in products.iter().enumerate() {
                if i != j {
                    assert!(!a.is_subset(b), "{a:?} absorbs {b:?}");
                }
            }
        }
        // Two covers of size three and three of size four.
        let mut sizes: Vec<usize> = products.iter().map(|p| p.count_ones(..)).collect();
        sizes.sort();
        assert_eq!(sizes, vec![3, 3, 4, 4, 4]);
    }

    #[test]
    fn deterministic() {
        let t = table(4, &[0, 2, 5, 6, 7, 8, 10, 13, 15]);
        assert_eq!(minimize(&t).unwrap(), minimize(&t).unwrap());
    }
}
