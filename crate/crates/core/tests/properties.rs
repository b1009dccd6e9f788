//! Property tests for the structural invariants.

use proptest::prelude::*;

use ncca_core::{
    brute_force_is_ncca, build_stg, next_config, Configuration, Rule, RuleVector, NC_RULES,
};

fn bits_strategy(max_cells: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..=1, 3..=max_cells)
}

fn rule_vector_strategy(cells: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..=255, cells)
}

fn nc_rule_vector_strategy(
    cells: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..9, cells)
}

proptest! {
    /// Adjacent RMTs of a sequence obey the successor relation, also
    /// across the cyclic wrap.
    #[test]
    fn rmt_sequences_chain(bits in bits_strategy(20)) {
        let seq = Configuration::new(bits).rmt_sequence().unwrap();
        for i in 0..seq.len() {
            prop_assert!(seq[i].successors().contains(&seq[(i + 1) % seq.len()]));
        }
    }

    /// Evolution via the RMT sequence equals evolution via the direct
    /// per-cell neighborhood lookup behind the transition graph.
    #[test]
    fn evolution_routes_agree(rules in rule_vector_strategy(3..=10), state in 0u64..1024) {
        let rv = RuleVector::from_wolfram(&rules);
        let state = state & ((1 << rv.len()) - 1);
        let config = Configuration::from_index(state, rv.len());
        let via_sequence = next_config(&rv, &config).unwrap();
        let via_graph = build_stg(&rv).unwrap().successor(&config);
        prop_assert_eq!(via_sequence, via_graph);
    }

    /// The brute-force verdict is invariant under rotating the vector.
    #[test]
    fn oracle_rotation_invariance(rules in rule_vector_strategy(4..=7)) {
        let rv = RuleVector::from_wolfram(&rules);
        let base = brute_force_is_ncca(&rv).unwrap();
        for k in 0..rv.len() {
            prop_assert_eq!(brute_force_is_ncca(&rv.rotated(k)).unwrap(), base);
        }
    }

    /// When the oracle accepts, every transition preserves the 1-count,
    /// so cycles and transients stay inside one popcount class.
    #[test]
    fn accepted_graphs_preserve_popcount(indices in nc_rule_vector_strategy(4..=6)) {
        let rv = RuleVector::new(indices.iter().map(|&i| NC_RULES[i]).collect());
        if brute_force_is_ncca(&rv).unwrap() {
            let graph = build_stg(&rv).unwrap();
            for state in 0..graph.state_count() {
                prop_assert_eq!(
                    graph.successor_index(state).count_ones(),
                    state.count_ones()
                );
            }
        }
    }

    /// Vectors of conserving rules fix the two homogeneous states.
    #[test]
    fn homogeneous_states_are_fixed(indices in nc_rule_vector_strategy(3..=12)) {
        let rv = RuleVector::new(indices.iter().map(|&i| NC_RULES[i]).collect());
        let n = rv.len();
        prop_assert_eq!(next_config(&rv, &Configuration::zeros(n)).unwrap(), Configuration::zeros(n));
        prop_assert_eq!(next_config(&rv, &Configuration::ones(n)).unwrap(), Configuration::ones(n));
    }

    /// Textual forms round-trip.
    #[test]
    fn text_round_trips(rules in rule_vector_strategy(1..=12), bits in bits_strategy(16)) {
        let rv = RuleVector::from_wolfram(&rules);
        prop_assert_eq!(rv.to_string().parse::<RuleVector>().unwrap(), rv);
        let config = Configuration::new(bits);
        prop_assert_eq!(config.to_string().parse::<Configuration>().unwrap(), config);
    }

    /// On 5 or more cells a non-conserving rule poisons any vector it
    /// appears in, whatever the other cells run.
    #[test]
    fn non_conserving_rules_poison_every_vector(w in 0u8..=255, fill in nc_rule_vector_strategy(4..=6)) {
        let rule = Rule::new(w);
        prop_assume!(!rule.is_number_conserving());
        let mut rules = vec![rule];
        rules.extend(fill.iter().map(|&i| NC_RULES[i]));
        prop_assert!(!brute_force_is_ncca(&RuleVector::new(rules)).unwrap());
    }
}
