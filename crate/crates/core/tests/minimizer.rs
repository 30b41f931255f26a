use proptest::prelude::*;

use rayoracle::boolean::{Implicant, TruthTable};
use rayoracle::minimizer::{brute_force_minimal_cover, minimize, petrick_cover, prime_implicants};

fn table(arity: u32, bits: u32) -> TruthTable {
    TruthTable::from_fn(arity, |x| bits >> x & 1 == 1).unwrap()
}

/// Every implicant of `t` found by enumerating all 3^n products.
fn all_implicants(t: &TruthTable) -> Vec<Implicant> {
    let n = t.arity();
    let mut out = Vec::new();
    for care in 0u32..1 << n {
        for pattern in 0u32..1 << n {
            if pattern & !care != 0 {
                continue;
            }
            let imp = Implicant::new(n, care, pattern).unwrap();
            if imp.cover_set().all(|x| t.contains(x)) {
                out.push(imp);
            }
        }
    }
    out
}

#[test]
fn primes_are_exactly_the_maximal_implicants() {
    for bits in 0u32..1 << 8 {
        let t = table(3, bits);
        let imps = all_implicants(&t);
        let mut maximal: Vec<Implicant> = imps
            .iter()
            .filter(|a| !imps.iter().any(|b| b != *a && b.subsumes(a)))
            .copied()
            .collect();
        maximal.sort();
        assert_eq!(
            prime_implicants(&t).primes(),
            &maximal[..],
            "on-set {:?}",
            t.on_set()
        );
    }
}

#[test]
fn every_three_input_function_is_minimal() {
    for bits in 0u32..1 << 8 {
        let t = table(3, bits);
        let sol = minimize(&t).unwrap();
        let oracle = brute_force_minimal_cover(&t).unwrap();
        assert_eq!(
            sol.cover.len(),
            oracle.cover.len(),
            "on-set {:?}",
            t.on_set()
        );
        assert_eq!(sol.cover.to_table(), t);
        assert!(sol.is_provably_minimal);
    }
}

#[test]
fn cover_terms_are_primes() {
    let t = table(4, 0b1011_0111_1110_1001);
    let primes = prime_implicants(&t);
    let sol = petrick_cover(&primes, &t).unwrap();
    for term in sol.cover.terms() {
        assert!(primes.contains(term), "{term} is not prime");
    }
}

#[test]
fn constant_functions() {
    let sol = minimize(&table(4, 0)).unwrap();
    assert_eq!(sol.cover.len(), 0);
    let sol = minimize(&table(4, 0xffff)).unwrap();
    assert_eq!(sol.cover.len(), 1);
    assert!(sol.cover.terms()[0].is_constant_true());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn four_input_matches_brute_force(bits in 0u32..1 << 16) {
        let t = table(4, bits);
        let sol = minimize(&t).unwrap();
        let oracle = brute_force_minimal_cover(&t).unwrap();
        prop_assert_eq!(sol.cover.len(), oracle.cover.len());
        prop_assert_eq!(sol.cover.literal_count(), oracle.cover.literal_count());
        prop_assert_eq!(sol.cover.to_table(), t);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn wider_covers_reproduce_the_table(bits in any::<u64>(), arity in 5u32..=6) {
        let t = TruthTable::from_fn(arity, |x| bits >> x & 1 == 1).unwrap();
        let sol = minimize(&t).unwrap();
        prop_assert_eq!(sol.cover.to_table(), t);
    }
}
