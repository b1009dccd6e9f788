//! Wolfram rules, rule min terms (RMTs), and per-cell rule vectors.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A 3-neighborhood binary local rule, identified by its Wolfram number.
///
/// Bit `r` of the number is the next state of a cell whose
/// `(left, self, right)` neighborhood reads `r` as a 3-bit value,
/// left bit most significant. So `Rule::new(136).next_state(Rmt::new(3))`
/// is 1 because bit 3 of 136 is set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule(u8);

impl Rule {
    pub const fn new(wolfram: u8) -> Self {
        Rule(wolfram)
    }

    pub const fn wolfram(self) -> u8 {
        self.0
    }

    /// Next state of a cell whose neighborhood is `r`.
    pub const fn next_state(self, r: Rmt) -> u8 {
        (self.0 >> r.value()) & 1
    }

    /// Whether the rule can take part in a number-conserving rule vector
    /// of 5 or more cells.
    ///
    /// Three conditions together characterize the eligible rules: the
    /// homogeneous states must be fixed (`R[0]=0`, `R[7]=1`), and each of
    /// the RMT quadruples `{0,1,4,5}` and `{2,3,6,7}` must agree either
    /// across equivalent RMTs or across sibling RMTs. Exactly the nine
    /// rules in [`NC_RULES`] qualify.
    ///
    /// On a 4-cell lattice six more rules become usable; see
    /// [`N4_ONLY_NC_RULES`].
    pub const fn is_number_conserving(self) -> bool {
        const fn bit(w: u8, r: u8) -> u8 {
            (w >> r) & 1
        }
        let w = self.0;
        let fixed_ends = bit(w, 0) == 0 && bit(w, 7) == 1;
        let low_half = (bit(w, 0) == bit(w, 4) && bit(w, 1) == bit(w, 5))
            || (bit(w, 0) == bit(w, 1) && bit(w, 4) == bit(w, 5));
        let high_half = (bit(w, 2) == bit(w, 6) && bit(w, 3) == bit(w, 7))
            || (bit(w, 2) == bit(w, 3) && bit(w, 6) == bit(w, 7));
        fixed_ends && low_half && high_half
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rule({})", self.0)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The nine rules eligible for number-conserving rule vectors of size
/// n >= 5.
pub const NC_RULES: [Rule; 9] = [
    Rule::new(136),
    Rule::new(170),
    Rule::new(184),
    Rule::new(192),
    Rule::new(204),
    Rule::new(226),
    Rule::new(238),
    Rule::new(240),
    Rule::new(252),
];

/// Rules that are number conserving only on a 4-cell lattice.
///
/// They fail [`Rule::is_number_conserving`] and must never be fed to the
/// linear decision algorithm or the synthesizer, which assume n >= 5.
/// The brute-force oracle certifies each of them inside some 4-cell
/// number-conserving CA.
pub const N4_ONLY_NC_RULES: [Rule; 6] = [
    Rule::new(160),
    Rule::new(172),
    Rule::new(202),
    Rule::new(216),
    Rule::new(228),
    Rule::new(250),
];

/// A rule min term: one `(left, self, right)` neighborhood pattern,
/// encoded as a 3-bit value 0..=7 with the left bit most significant.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rmt(u8);

impl Rmt {
    /// Number of distinct RMTs for a 3-neighborhood binary rule.
    pub const COUNT: usize = 8;

    pub const fn new(value: u8) -> Self {
        assert!(value < 8);
        Rmt(value)
    }

    pub const fn value(self) -> u8 {
        self.0
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub fn all() -> impl Iterator<Item = Rmt> {
        (0..8).map(Rmt::new)
    }

    pub const fn from_neighborhood(left: u8, center: u8, right: u8) -> Self {
        Rmt::new((left << 2) | (center << 1) | right)
    }

    /// The two RMTs that can follow `self` in an RMT sequence:
    /// `2r mod 8` and `2r+1 mod 8`.
    pub const fn successors(self) -> [Rmt; 2] {
        let even = (self.0 << 1) & 0b110;
        [Rmt::new(even), Rmt::new(even | 1)]
    }

    /// The equivalent partner `(r + 4) mod 8`. Equivalent RMTs contribute
    /// the same pair of successor RMTs.
    pub const fn equivalent(self) -> Rmt {
        Rmt::new(self.0 ^ 4)
    }

    /// The sibling partner sharing `floor(r / 2)`. Siblings descend from a
    /// common predecessor RMT.
    pub const fn sibling(self) -> Rmt {
        Rmt::new(self.0 ^ 1)
    }

    /// The `self` bit of the neighborhood: the cell's own current state.
    pub const fn center_bit(self) -> u8 {
        (self.0 >> 1) & 1
    }
}

impl fmt::Debug for Rmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rmt({})", self.0)
    }
}

impl fmt::Display for Rmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of RMTs, stored as one bit per RMT.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RmtSet(u8);

impl RmtSet {
    pub const EMPTY: RmtSet = RmtSet(0);
    pub const ALL: RmtSet = RmtSet(0xff);

    pub const fn from_mask(mask: u8) -> Self {
        RmtSet(mask)
    }

    pub fn of(rmts: &[u8]) -> Self {
        let mut set = RmtSet::EMPTY;
        for &r in rmts {
            set.insert(Rmt::new(r));
        }
        set
    }

    pub const fn mask(self) -> u8 {
        self.0
    }

    pub fn insert(&mut self, r: Rmt) {
        self.0 |= 1 << r.value();
    }

    pub const fn contains(self, r: Rmt) -> bool {
        (self.0 >> r.value()) & 1 == 1
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn intersect(self, other: RmtSet) -> RmtSet {
        RmtSet(self.0 & other.0)
    }

    pub const fn union(self, other: RmtSet) -> RmtSet {
        RmtSet(self.0 | other.0)
    }

    pub const fn is_subset_of(self, other: RmtSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Rmt> {
        (0..8).filter(move |r| (self.0 >> r) & 1 == 1).map(Rmt::new)
    }
}

impl fmt::Debug for RmtSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut set = f.debug_set();
        for r in self.iter() {
            set.entry(&r.value());
        }
        set.finish()
    }
}

impl fmt::Display for RmtSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, r) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<Rmt> for RmtSet {
    fn from_iter<I: IntoIterator<Item = Rmt>>(iter: I) -> Self {
        let mut set = RmtSet::EMPTY;
        for r in iter {
            set.insert(r);
        }
        set
    }
}

/// The per-cell rule assignment of a non-uniform CA under periodic
/// boundary: cell `i` applies `rules[i]`, and cells 0 and n-1 are
/// neighbors.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RuleVector {
    rules: Vec<Rule>,
}

impl RuleVector {
    /// Panics if `rules` is empty.
    pub fn new(rules: Vec<Rule>) -> Self {
        assert!(!rules.is_empty(), "a rule vector needs at least one rule");
        RuleVector { rules }
    }

    pub fn from_wolfram(numbers: &[u8]) -> Self {
        RuleVector::new(numbers.iter().copied().map(Rule::new).collect())
    }

    pub fn uniform(rule: Rule, n: usize) -> Self {
        RuleVector::new(vec![rule; n])
    }

    /// Number of cells. Never zero.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn rule(&self, cell: usize) -> Rule {
        self.rules[cell]
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn iter(&self) -> impl Iterator<Item = Rule> + '_ {
        self.rules.iter().copied()
    }

    /// The same CA read off starting from cell `k`: element `i` of the
    /// result is `rules[(i + k) mod n]`.
    pub fn rotated(&self, k: usize) -> RuleVector {
        let n = self.rules.len();
        RuleVector::new((0..n).map(|i| self.rules[(i + k) % n]).collect())
    }
}

impl fmt::Display for RuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rules.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRuleVectorError {
    #[error("empty rule vector")]
    Empty,
    #[error("invalid rule number `{0}`: expected a decimal in 0..=255")]
    InvalidRule(String),
}

impl FromStr for RuleVector {
    type Err = ParseRuleVectorError;

    /// Parses comma-separated decimal Wolfram numbers, e.g.
    /// `"192,136,184,252,204,238"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseRuleVectorError::Empty);
        }
        let rules = s
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                tok.parse::<u8>()
                    .map(Rule::new)
                    .map_err(|_| ParseRuleVectorError::InvalidRule(tok.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RuleVector::new(rules))
    }
}
