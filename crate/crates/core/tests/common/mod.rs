//! Helpers shared by the integration suites.

use rand::Rng;

use ncca_core::{Rule, RuleVector, NC_RULES};

/// Number of rule vectors of `n` cells over the nine conserving rules.
pub fn nc_vector_count(n: usize) -> u64 {
    9u64.pow(n as u32)
}

/// Decodes `index` into a vector over the nine conserving rules, digit
/// `j` in base 9 picking the rule of cell `j`.
pub fn nc_vector(index: u64, n: usize) -> RuleVector {
    let mut rules = Vec::with_capacity(n);
    let mut rest = index;
    for _ in 0..n {
        rules.push(NC_RULES[(rest % 9) as usize]);
        rest /= 9;
    }
    RuleVector::new(rules)
}

/// A uniformly random vector over all 256 rules.
pub fn random_vector(rng: &mut impl Rng, n: usize) -> RuleVector {
    RuleVector::new((0..n).map(|_| Rule::new(rng.gen())).collect())
}
