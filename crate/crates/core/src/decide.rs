//! Linear-time decision of number conservation.
//!
//! Instead of expanding a reachability tree, the decision keeps one
//! super node per level: the union of every level node's four RMT
//! groups, with each RMT's weight. That state has constant size, so one
//! pass over the rule vector settles the question in O(n).
//!
//! Per level the algorithm checks that the next rule is a conserving
//! rule, that each weight sitting at a boundary of its allowed range
//! forces the matching next-state bit (sixteen single-RMT conditions),
//! and that the weight orderings between equivalent RMTs force their
//! bits (six pairwise conditions). The groups shrink twice near the end
//! of the scan, mirroring the restricted node shapes of the last two
//! tree levels, and every weight must return to 0 after the final rule.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

use crate::rule::{Rmt, RmtSet, Rule, RuleVector};
use crate::weight::{Weight, WeightedRmtSet};

/// The four weighted RMT groups summarizing one tree level.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SuperNode {
    groups: [WeightedRmtSet; 4],
}

impl SuperNode {
    /// Level 0: group k holds the sibling pair {2k, 2k+1}, weight 0.
    pub fn root() -> Self {
        SuperNode {
            groups: [
                WeightedRmtSet::root_group(0),
                WeightedRmtSet::root_group(1),
                WeightedRmtSet::root_group(2),
                WeightedRmtSet::root_group(3),
            ],
        }
    }

    pub fn group(&self, k: usize) -> &WeightedRmtSet {
        &self.groups[k]
    }

    pub fn groups(&self) -> &[WeightedRmtSet; 4] {
        &self.groups
    }

    pub fn weight(&self, k: usize, r: Rmt) -> Option<Weight> {
        self.groups[k].weight(r)
    }

    /// Applies `find_next_weight` to all four groups. On conflict,
    /// reports the offending group.
    pub fn advance(&self, rule: Rule) -> Result<SuperNode, GroupConflict> {
        let mut groups = [WeightedRmtSet::empty(); 4];
        for (k, group) in self.groups.iter().enumerate() {
            groups[k] = group
                .advance(rule)
                .map_err(|conflict| GroupConflict { group: k, conflict })?;
        }
        Ok(SuperNode { groups })
    }

    /// Group shapes at the second-to-last level: groups 0 and 1 keep the
    /// even RMTs, groups 2 and 3 the odd ones.
    pub fn restrict_second_last(&mut self) {
        let even = RmtSet::of(&[0, 2, 4, 6]);
        let odd = RmtSet::of(&[1, 3, 5, 7]);
        self.groups[0].restrict(even);
        self.groups[1].restrict(even);
        self.groups[2].restrict(odd);
        self.groups[3].restrict(odd);
    }

    /// Group shapes at the last level: group k keeps {k, k+4}.
    pub fn restrict_last(&mut self) {
        for (k, group) in self.groups.iter_mut().enumerate() {
            group.restrict(RmtSet::of(&[k as u8, k as u8 + 4]));
        }
    }

    pub fn snapshot(&self, level: usize) -> LevelSnapshot {
        LevelSnapshot {
            level,
            groups: self.groups.map(|g| {
                let (rmts, weights) = g.iter().map(|(r, w)| (r.value(), w)).unzip();
                GroupSnapshot { rmts, weights }
            }),
        }
    }
}

/// A weight conflict located in one group of a super node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupConflict {
    pub group: usize,
    pub conflict: crate::weight::WeightConflict,
}

/// Successor RMTs and weights of one group under one rule; the per-group
/// step the whole decision is built from. See
/// [`WeightedRmtSet::advance`] for the conflict condition.
pub fn find_next_weight(
    rule: Rule,
    group: &WeightedRmtSet,
) -> Result<WeightedRmtSet, crate::weight::WeightConflict> {
    group.advance(rule)
}

/// One of the sixteen single-RMT weight conditions, numbered 1..=16.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Step5Condition(pub u8);

/// One of the six pairwise weight-ordering conditions, numbered 1..=6.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Step6Condition(pub u8);

const ROMAN: [&str; 16] = [
    "i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi", "xii", "xiii", "xiv",
    "xv", "xvi",
];

impl fmt::Display for Step5Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", ROMAN[(self.0 - 1) as usize])
    }
}

impl fmt::Display for Step6Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", ROMAN[(self.0 - 1) as usize])
    }
}

/// `(condition id, group, rmt, trigger weight, forced bit)`. A row fires
/// when the RMT is present with exactly the trigger weight; the rule
/// must then map the RMT to the forced bit. Conditions 2, 4, 6, 7, 10,
/// 11, 13 and 15 have two trigger rows each.
const SINGLE_RMT_CONDITIONS: [(u8, usize, u8, Weight, u8); 24] = [
    (1, 0, 2, -1, 0),
    (2, 0, 4, 0, 0),
    (2, 0, 4, 1, 1),
    (3, 0, 5, 1, 1),
    (4, 0, 6, -1, 0),
    (4, 0, 6, 1, 1),
    (5, 1, 2, -1, 0),
    (6, 1, 3, -1, 0),
    (6, 1, 3, 1, 1),
    (7, 1, 4, 0, 0),
    (7, 1, 4, 2, 1),
    (8, 1, 5, 2, 1),
    (9, 2, 2, -2, 0),
    (10, 2, 3, -2, 0),
    (10, 2, 3, 0, 1),
    (11, 2, 4, -1, 0),
    (11, 2, 4, 1, 1),
    (12, 2, 5, 1, 1),
    (13, 3, 1, -1, 0),
    (13, 3, 1, 1, 1),
    (14, 3, 2, -1, 0),
    (15, 3, 3, -1, 0),
    (15, 3, 3, 0, 1),
    (16, 3, 5, 1, 1),
];

/// First violated single-RMT condition, or `None` when all hold.
/// Conditions whose RMT is absent from the group are vacuously true.
pub fn check_step5(node: &SuperNode, rule: Rule) -> Option<Step5Condition> {
    for &(id, k, r, trigger, bit) in &SINGLE_RMT_CONDITIONS {
        let r = Rmt::new(r);
        if node.weight(k, r) == Some(trigger) && rule.next_state(r) != bit {
            return Some(Step5Condition(id));
        }
    }
    None
}

/// First violated pairwise condition with the group it failed in, or
/// `None`. A condition is evaluated only in groups holding both RMTs of
/// its pair.
pub fn check_step6(node: &SuperNode, rule: Rule) -> Option<(Step6Condition, usize)> {
    let bit = |r: u8| rule.next_state(Rmt::new(r));
    for k in 0..4 {
        let w = |r: u8| node.weight(k, Rmt::new(r));
        if let (Some(w4), Some(w0)) = (w(4), w(0)) {
            if w4 == w0 && bit(4) != 0 {
                return Some((Step6Condition(1), k));
            }
            if w4 > w0 && bit(4) != 1 {
                return Some((Step6Condition(2), k));
            }
        }
        if let (Some(w5), Some(w1)) = (w(5), w(1)) {
            if w5 > w1 && !(bit(5) == 1 && bit(1) == 0) {
                return Some((Step6Condition(3), k));
            }
        }
        if let (Some(w3), Some(w7)) = (w(3), w(7)) {
            if w3 == w7 && bit(3) != 1 {
                return Some((Step6Condition(4), k));
            }
            if w3 < w7 && bit(3) != 0 {
                return Some((Step6Condition(5), k));
            }
        }
        if let (Some(w2), Some(w6)) = (w(2), w(6)) {
            if w2 < w6 && !(bit(2) == 0 && bit(6) == 1) {
                return Some((Step6Condition(6), k));
            }
        }
    }
    None
}

/// Outcome of the decision, with the first failed check on rejection.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Accepted,
    /// The rule at `cell` is not a conserving rule.
    NonConservingRule { cell: usize, rule: Rule },
    /// A single-RMT weight condition failed while scanning `cell`.
    Step5Violation { cell: usize, condition: Step5Condition },
    /// A pairwise weight-ordering condition failed in group `group`.
    Step6Violation {
        cell: usize,
        condition: Step6Condition,
        group: usize,
    },
    /// Two parents handed one RMT different weights below `cell`.
    WeightConflict {
        cell: usize,
        group: usize,
        rmt: Rmt,
        weights: (Weight, Weight),
    },
    /// The scan completed but a weight failed to return to 0.
    NonzeroLeafWeight { group: usize, rmt: Rmt, weight: Weight },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accepted => write!(f, "yes"),
            Verdict::NonConservingRule { cell, rule } => {
                write!(f, "no: rule {rule} at cell {cell} is not number conserving")
            }
            Verdict::Step5Violation { cell, condition } => {
                write!(f, "no: weight condition {condition} failed at cell {cell}")
            }
            Verdict::Step6Violation { cell, condition, group } => write!(
                f,
                "no: weight ordering condition {condition} failed in group {group} at cell {cell}"
            ),
            Verdict::WeightConflict { cell, group, rmt, weights } => write!(
                f,
                "no: RMT {rmt} in group {group} received weights {} and {} below cell {cell}",
                weights.0, weights.1
            ),
            Verdict::NonzeroLeafWeight { group, rmt, weight } => write!(
                f,
                "no: leaf RMT {rmt} in group {group} kept weight {weight}"
            ),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecideError {
    #[error("the linear decision needs at least 5 cells (got {n}); use the brute-force oracle for smaller lattices")]
    TooFewCells { n: usize },
}

/// The four groups of one level as plain data, for traces and JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSnapshot {
    pub level: usize,
    pub groups: [GroupSnapshot; 4],
}

/// Parallel arrays: `weights[i]` belongs to `rmts[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSnapshot {
    pub rmts: Vec<u8>,
    pub weights: Vec<Weight>,
}

/// Decides whether the rule vector conserves the number of 1s, in one
/// O(n) scan. Wrong answers are impossible for n >= 5; smaller lattices
/// are refused because extra rules become conserving there.
pub fn decide_ncca(rv: &RuleVector) -> Result<Verdict, DecideError> {
    run(rv, &mut None)
}

/// Same decision, also returning the super node of every level, after
/// the end-of-scan group restrictions where those apply.
pub fn decide_ncca_traced(rv: &RuleVector) -> Result<(Verdict, Vec<LevelSnapshot>), DecideError> {
    let mut trace = Some(Vec::new());
    let verdict = run(rv, &mut trace)?;
    Ok((verdict, trace.unwrap()))
}

fn run(rv: &RuleVector, trace: &mut Option<Vec<LevelSnapshot>>) -> Result<Verdict, DecideError> {
    let n = rv.len();
    if n < 5 {
        return Err(DecideError::TooFewCells { n });
    }
    let mut record = |node: &SuperNode, level: usize| {
        if let Some(t) = trace.as_mut() {
            t.push(node.snapshot(level));
        }
    };

    let mut node = SuperNode::root();
    record(&node, 0);

    let first = rv.rule(0);
    if !first.is_number_conserving() {
        return Ok(Verdict::NonConservingRule { cell: 0, rule: first });
    }
    node = match node.advance(first) {
        Ok(next) => next,
        Err(c) => return Ok(conflict_verdict(0, c)),
    };

    for cell in 1..n {
        let rule = rv.rule(cell);
        if cell <= n - 3 {
            if !rule.is_number_conserving() {
                return Ok(Verdict::NonConservingRule { cell, rule });
            }
            record(&node, cell);
            if let Some(condition) = check_step5(&node, rule) {
                return Ok(Verdict::Step5Violation { cell, condition });
            }
        } else {
            if cell == n - 2 {
                node.restrict_second_last();
            } else {
                node.restrict_last();
            }
            record(&node, cell);
        }
        if let Some((condition, group)) = check_step6(&node, rule) {
            return Ok(Verdict::Step6Violation { cell, condition, group });
        }
        node = match node.advance(rule) {
            Ok(next) => next,
            Err(c) => return Ok(conflict_verdict(cell, c)),
        };
    }
    record(&node, n);

    for (k, group) in node.groups().iter().enumerate() {
        for (r, w) in group.iter() {
            if w != 0 {
                return Ok(Verdict::NonzeroLeafWeight { group: k, rmt: r, weight: w });
            }
        }
    }
    Ok(Verdict::Accepted)
}

fn conflict_verdict(cell: usize, c: GroupConflict) -> Verdict {
    Verdict::WeightConflict {
        cell,
        group: c.group,
        rmt: c.conflict.rmt,
        weights: c.conflict.weights,
    }
}
