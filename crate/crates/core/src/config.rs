//! Global CA configurations, RMT sequences, and one-step evolution.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::rule::{Rmt, RuleVector};

/// One global state of an n-cell CA. Cell 0 is the leftmost bit of the
/// textual form, so `"1110"` has cells 0..=2 set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    bits: Vec<u8>,
}

impl Configuration {
    /// Panics if any element is not 0 or 1.
    pub fn new(bits: Vec<u8>) -> Self {
        assert!(bits.iter().all(|&b| b <= 1), "configuration bits must be 0 or 1");
        Configuration { bits }
    }

    pub fn zeros(n: usize) -> Self {
        Configuration { bits: vec![0; n] }
    }

    pub fn ones(n: usize) -> Self {
        Configuration { bits: vec![1; n] }
    }

    /// Unpacks an integer state: bit `i` of `index` becomes cell `i`.
    pub fn from_index(index: u64, n: usize) -> Self {
        assert!(n <= 64);
        Configuration {
            bits: (0..n).map(|i| ((index >> i) & 1) as u8).collect(),
        }
    }

    /// Packs the cells into an integer, cell `i` at bit `i`.
    pub fn to_index(&self) -> u64 {
        assert!(self.bits.len() <= 64);
        self.bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, cell: usize) -> u8 {
        self.bits[cell]
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Number of 1s, the quantity a number-conserving CA preserves.
    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }

    /// The configuration rewritten as the neighborhood pattern seen by
    /// each cell under periodic boundary. Element `i` encodes
    /// `(bits[i-1], bits[i], bits[i+1])` with cyclic indexing, so
    /// `"1110"` becomes `<3,7,6,5>`.
    pub fn rmt_sequence(&self) -> Result<Vec<Rmt>, EvolveError> {
        let n = self.bits.len();
        if n < 3 {
            return Err(EvolveError::TooFewCells { n });
        }
        Ok((0..n)
            .map(|i| {
                Rmt::from_neighborhood(
                    self.bits[(i + n - 1) % n],
                    self.bits[i],
                    self.bits[(i + 1) % n],
                )
            })
            .collect())
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Configuration({self})")
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseConfigurationError {
    #[error("empty configuration")]
    Empty,
    #[error("invalid character `{0}` in configuration: expected 0 or 1")]
    InvalidBit(char),
}

impl FromStr for Configuration {
    type Err = ParseConfigurationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseConfigurationError::Empty);
        }
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(ParseConfigurationError::InvalidBit(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Configuration { bits })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvolveError {
    #[error("evolution needs at least 3 cells (got {n})")]
    TooFewCells { n: usize },
    #[error("rule vector has {rules} rules but the configuration has {cells} cells")]
    LengthMismatch { rules: usize, cells: usize },
}

/// One synchronous update of the whole configuration: cell `i` applies
/// its own rule to the neighborhood it sees. Computed by scanning the
/// RMT sequence and looking each pattern up in the matching rule.
pub fn next_config(rv: &RuleVector, config: &Configuration) -> Result<Configuration, EvolveError> {
    if rv.len() != config.len() {
        return Err(EvolveError::LengthMismatch {
            rules: rv.len(),
            cells: config.len(),
        });
    }
    let sequence = config.rmt_sequence()?;
    Ok(Configuration::new(
        sequence
            .iter()
            .enumerate()
            .map(|(i, &r)| rv.rule(i).next_state(r))
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(s: &str) -> Configuration {
        s.parse().unwrap()
    }

    fn rv(s: &str) -> RuleVector {
        s.parse().unwrap()
    }

    #[test]
    fn rmt_sequence_examples() {
        let seq: Vec<u8> = cfg("1110").rmt_sequence().unwrap().iter().map(|r| r.value()).collect();
        assert_eq!(seq, [3, 7, 6, 5]);
        let seq: Vec<u8> = cfg("0000").rmt_sequence().unwrap().iter().map(|r| r.value()).collect();
        assert_eq!(seq, [0, 0, 0, 0]);
        let seq: Vec<u8> = cfg("0001").rmt_sequence().unwrap().iter().map(|r| r.value()).collect();
        assert_eq!(seq, [4, 0, 1, 2]);
    }

    #[test]
    fn rmt_sequence_rejects_short_configurations() {
        assert_eq!(
            cfg("10").rmt_sequence(),
            Err(EvolveError::TooFewCells { n: 2 })
        );
    }

    #[test]
    fn successor_relation_holds_with_wraparound() {
        for idx in 0..32u64 {
            let seq = Configuration::from_index(idx, 5).rmt_sequence().unwrap();
            for i in 0..seq.len() {
                let next = seq[(i + 1) % seq.len()];
                assert!(seq[i].successors().contains(&next), "seq {seq:?} breaks at {i}");
            }
        }
    }

    #[test]
    fn next_config_examples() {
        let v = rv("136,252,238,192");
        assert_eq!(next_config(&v, &cfg("1010")).unwrap(), cfg("0110"));
        assert_eq!(next_config(&v, &cfg("0001")).unwrap(), cfg("0010"));
    }

    #[test]
    fn homogeneous_states_are_fixed_under_nc_rules() {
        let v = rv("192,136,184,252,204,238");
        let n = v.len();
        assert_eq!(next_config(&v, &Configuration::zeros(n)).unwrap(), Configuration::zeros(n));
        assert_eq!(next_config(&v, &Configuration::ones(n)).unwrap(), Configuration::ones(n));
    }

    #[test]
    fn next_config_rejects_length_mismatch() {
        assert_eq!(
            next_config(&rv("136,252,238,192"), &cfg("10101")),
            Err(EvolveError::LengthMismatch { rules: 4, cells: 5 })
        );
    }

    #[test]
    fn index_round_trip_and_text_orientation() {
        // cell 0 is the leftmost character but the lowest index bit
        let c = cfg("1010");
        assert_eq!(c.to_index(), 0b0101);
        assert_eq!(Configuration::from_index(0b0101, 4), c);
        assert_eq!(c.count_ones(), 2);
        assert_eq!(c.to_string(), "1010");
    }
}
