//! Ground truth for small lattices: exhaustive number-conservation
//! checks, full state-transition graphs, and rule-vector censuses.
//!
//! Everything here enumerates all 2^n configurations and applies each
//! cell's rule to the neighborhood it sees directly, independent of the
//! RMT-sequence evolution in [`crate::config`] and of the linear
//! decision algorithm in [`crate::decide`]. The other modules are
//! validated against this one.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::Configuration;
use crate::rule::{Rule, RuleVector, NC_RULES};

/// Largest lattice the exhaustive routines accept by default.
pub const DEFAULT_CELL_CAP: usize = 24;

/// Work ceiling for [`count_ncca_vectors_over`], measured in single-cell
/// updates (`alphabet^n * 2^n * n`). Covers every vector census up to
/// n = 7 over the nine conserving rules.
pub const DEFAULT_CENSUS_BUDGET: u128 = 1 << 34;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("brute force needs at least 3 cells (got {n})")]
    TooFewCells { n: usize },
    #[error("{n} cells exceeds the {cap}-cell cap on exhaustive state enumeration")]
    TooManyCells { n: usize, cap: usize },
    #[error("a census needs at least {min} cells (got {n})")]
    CensusTooFewCells { n: usize, min: usize },
    #[error("census over {alphabet} rules at {n} cells needs {work} cell updates, over the budget of {budget}")]
    BudgetExceeded {
        n: usize,
        alphabet: usize,
        work: u128,
        budget: u128,
    },
}

fn check_size(n: usize, cap: usize) -> Result<(), OracleError> {
    if n < 3 {
        Err(OracleError::TooFewCells { n })
    } else if n > cap.min(63) {
        Err(OracleError::TooManyCells { n, cap })
    } else {
        Ok(())
    }
}

/// One synchronous step on a packed state: bit `i` holds cell `i`.
fn step_packed(tables: &[u8], state: u64) -> u64 {
    let n = tables.len();
    let mut next = 0u64;
    for i in 0..n {
        let left = (state >> ((i + n - 1) % n)) & 1;
        let center = (state >> i) & 1;
        let right = (state >> ((i + 1) % n)) & 1;
        let rmt = (left << 2) | (center << 1) | right;
        next |= u64::from((tables[i] >> rmt) & 1) << i;
    }
    next
}

fn is_ncca_tables(tables: &[u8]) -> bool {
    let n = tables.len();
    (0..1u64 << n).all(|state| step_packed(tables, state).count_ones() == state.count_ones())
}

fn tables_of(rv: &RuleVector) -> Vec<u8> {
    rv.iter().map(Rule::wolfram).collect()
}

/// Checks number conservation by evolving every one of the 2^n
/// configurations once and comparing 1-counts.
pub fn brute_force_is_ncca(rv: &RuleVector) -> Result<bool, OracleError> {
    brute_force_is_ncca_capped(rv, DEFAULT_CELL_CAP)
}

pub fn brute_force_is_ncca_capped(rv: &RuleVector, cap: usize) -> Result<bool, OracleError> {
    check_size(rv.len(), cap)?;
    Ok(is_ncca_tables(&tables_of(rv)))
}

/// The complete successor map of a CA over all 2^n states, with the
/// predecessor count of each state. A state is reachable exactly when
/// some state maps to it.
pub struct StateTransitionGraph {
    n: usize,
    successor: Vec<u32>,
    predecessor_count: Vec<u32>,
}

pub fn build_stg(rv: &RuleVector) -> Result<StateTransitionGraph, OracleError> {
    check_size(rv.len(), DEFAULT_CELL_CAP)?;
    let tables = tables_of(rv);
    let n = rv.len();
    let states = 1usize << n;
    let mut successor = vec![0u32; states];
    let mut predecessor_count = vec![0u32; states];
    for state in 0..states {
        let next = step_packed(&tables, state as u64) as usize;
        successor[state] = next as u32;
        predecessor_count[next] += 1;
    }
    Ok(StateTransitionGraph {
        n,
        successor,
        predecessor_count,
    })
}

impl StateTransitionGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn state_count(&self) -> usize {
        self.successor.len()
    }

    pub fn successor_index(&self, state: usize) -> usize {
        self.successor[state] as usize
    }

    pub fn successor(&self, config: &Configuration) -> Configuration {
        assert_eq!(config.len(), self.n);
        Configuration::from_index(self.successor[config.to_index() as usize] as u64, self.n)
    }

    pub fn predecessor_count(&self, state: usize) -> u32 {
        self.predecessor_count[state]
    }

    pub fn is_reachable(&self, state: usize) -> bool {
        self.predecessor_count[state] > 0
    }

    pub fn reachable_states(&self) -> Vec<Configuration> {
        self.states_where(|s| self.is_reachable(s))
    }

    pub fn non_reachable_states(&self) -> Vec<Configuration> {
        self.states_where(|s| !self.is_reachable(s))
    }

    fn states_where(&self, keep: impl Fn(usize) -> bool) -> Vec<Configuration> {
        (0..self.state_count())
            .filter(|&s| keep(s))
            .map(|s| Configuration::from_index(s as u64, self.n))
            .collect()
    }

    /// Graphviz rendering: one edge per state in ascending state order,
    /// nodes named by their bit strings.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph stg {\n");
        for state in 0..self.state_count() {
            let from = Configuration::from_index(state as u64, self.n);
            let to = Configuration::from_index(self.successor[state] as u64, self.n);
            out.push_str(&format!("    \"{from}\" -> \"{to}\";\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Result of enumerating every rule vector over an alphabet and counting
/// the number-conserving ones. The accepted vectors themselves are kept
/// only when there are at most 10,000 of them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub n: usize,
    pub alphabet: Vec<u8>,
    pub count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accepted_vectors: Option<Vec<String>>,
}

const CENSUS_VECTOR_LIMIT: usize = 10_000;

/// Census over the nine conserving rules. `jobs` worker threads split
/// the vector space; the outcome does not depend on `jobs`.
pub fn count_ncca_vectors(n: usize, jobs: usize) -> Result<Census, OracleError> {
    if n < 5 {
        return Err(OracleError::CensusTooFewCells { n, min: 5 });
    }
    count_ncca_vectors_over(&NC_RULES, n, jobs)
}

pub fn count_ncca_vectors_over(
    alphabet: &[Rule],
    n: usize,
    jobs: usize,
) -> Result<Census, OracleError> {
    count_ncca_vectors_budgeted(alphabet, n, jobs, DEFAULT_CENSUS_BUDGET)
}

pub fn count_ncca_vectors_budgeted(
    alphabet: &[Rule],
    n: usize,
    jobs: usize,
    budget: u128,
) -> Result<Census, OracleError> {
    assert!(!alphabet.is_empty(), "census alphabet must not be empty");
    if n < 3 {
        return Err(OracleError::CensusTooFewCells { n, min: 3 });
    }
    let base = alphabet.len() as u128;
    let total = base.pow(n as u32);
    let work = total * (1u128 << n) * n as u128;
    if work > budget {
        return Err(OracleError::BudgetExceeded {
            n,
            alphabet: alphabet.len(),
            work,
            budget,
        });
    }

    let total = total as u64;
    let jobs = jobs.max(1) as u64;
    let ranges: Vec<std::ops::Range<u64>> = (0..jobs)
        .map(|j| (total * j / jobs)..(total * (j + 1) / jobs))
        .collect();
    let alphabet_bytes: Vec<u8> = alphabet.iter().map(|r| r.wolfram()).collect();

    let per_job: Vec<(u64, Vec<String>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|range| {
                let alphabet_bytes = &alphabet_bytes;
                scope.spawn(move || {
                    let mut count = 0u64;
                    let mut accepted = Vec::new();
                    let mut tables = vec![0u8; n];
                    for idx in range {
                        decode_vector(alphabet_bytes, idx, &mut tables);
                        if is_ncca_tables(&tables) {
                            count += 1;
                            if accepted.len() <= CENSUS_VECTOR_LIMIT {
                                accepted.push(render_vector(&tables));
                            }
                        }
                    }
                    (count, accepted)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });

    let count: u64 = per_job.iter().map(|(c, _)| c).sum();
    let accepted_vectors = if count as usize <= CENSUS_VECTOR_LIMIT {
        Some(per_job.into_iter().flat_map(|(_, v)| v).collect())
    } else {
        None
    };
    Ok(Census {
        n,
        alphabet: alphabet_bytes,
        count,
        accepted_vectors,
    })
}

/// Digit `j` of `idx` in base `alphabet.len()` picks the rule of cell `j`.
fn decode_vector(alphabet: &[u8], idx: u64, tables: &mut [u8]) {
    let base = alphabet.len() as u64;
    let mut rest = idx;
    for slot in tables.iter_mut() {
        *slot = alphabet[(rest % base) as usize];
        rest /= base;
    }
}

fn render_vector(tables: &[u8]) -> String {
    tables
        .iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
