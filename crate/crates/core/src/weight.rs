//! RMT weights: the running surplus or deficiency of 1s that a state
//! accumulates against its successor while both are scanned cell by cell.
//!
//! Weights start at 0 and change only when a cell's own bit disagrees
//! with its next state: a 1 that maps to 0 leaves a surplus (+1) behind,
//! a 0 that maps to 1 leaves a deficiency (-1). A CA conserves the number
//! of 1s exactly when every completed scan ends with weight 0.

use crate::rule::{Rmt, RmtSet, Rule};

pub type Weight = i32;

/// Weight handed to both successor RMTs of `r` when rule `rule` fires on
/// an RMT currently weighted `w`.
pub fn child_weight(rule: Rule, r: Rmt, w: Weight) -> Weight {
    match (r.center_bit(), rule.next_state(r)) {
        (1, 0) => w + 1,
        (0, 1) => w - 1,
        _ => w,
    }
}

/// An RMT set in which every member carries a weight. One of these per
/// group index k in 0..4; the root groups are the four sibling pairs.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightedRmtSet {
    rmts: RmtSet,
    weights: [Weight; 8],
}

impl WeightedRmtSet {
    pub fn empty() -> Self {
        WeightedRmtSet {
            rmts: RmtSet::EMPTY,
            weights: [0; 8],
        }
    }

    /// The sibling pair `{2k, 2k+1}` with weight 0, the root content of
    /// group `k`.
    pub fn root_group(k: usize) -> Self {
        assert!(k < 4);
        let mut set = WeightedRmtSet::empty();
        set.insert(Rmt::new(2 * k as u8), 0);
        set.insert(Rmt::new(2 * k as u8 + 1), 0);
        set
    }

    pub fn rmts(&self) -> RmtSet {
        self.rmts
    }

    pub fn contains(&self, r: Rmt) -> bool {
        self.rmts.contains(r)
    }

    pub fn is_empty(&self) -> bool {
        self.rmts.is_empty()
    }

    pub fn weight(&self, r: Rmt) -> Option<Weight> {
        self.rmts.contains(r).then(|| self.weights[r.index()])
    }

    /// Inserts `r` with weight `w`, overwriting any previous weight.
    pub fn insert(&mut self, r: Rmt, w: Weight) {
        self.rmts.insert(r);
        self.weights[r.index()] = w;
    }

    /// Drops every RMT outside `keep`.
    pub fn restrict(&mut self, keep: RmtSet) {
        let dropped = self.rmts;
        self.rmts = self.rmts.intersect(keep);
        for r in dropped.iter() {
            if !self.rmts.contains(r) {
                self.weights[r.index()] = 0;
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Rmt, Weight)> + '_ {
        self.rmts.iter().map(|r| (r, self.weights[r.index()]))
    }

    /// Applies the weight recurrence to every member, collecting the
    /// successor RMTs with their weights. Fails if two parents hand the
    /// same successor different weights, which no number-conserving CA
    /// allows.
    pub fn advance(&self, rule: Rule) -> Result<WeightedRmtSet, WeightConflict> {
        let mut next = WeightedRmtSet::empty();
        for (r, w) in self.iter() {
            let cw = child_weight(rule, r, w);
            for child in r.successors() {
                if let Some(existing) = next.weight(child) {
                    if existing != cw {
                        return Err(WeightConflict {
                            rmt: child,
                            weights: (existing, cw),
                        });
                    }
                }
                next.insert(child, cw);
            }
        }
        Ok(next)
    }
}

impl std::fmt::Debug for WeightedRmtSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, (r, w)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}({w})")?;
        }
        write!(f, "}}")
    }
}

/// Two different weights written to one RMT of one group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightConflict {
    pub rmt: Rmt,
    pub weights: (Weight, Weight),
}

/// The weights an RMT may carry in group `k` of any node of a
/// number-conserving CA. Observing a weight outside this set proves the
/// CA is not number conserving.
pub fn allowed_weights(group: usize, r: Rmt) -> &'static [Weight] {
    const TABLE: [[&[Weight]; 4]; 4] = [
        // sibling pair {0,1}   {2,3}          {4,5}         {6,7}
        [&[0], &[-1, 0], &[0, 1], &[-1, 0, 1]],           // group 0
        [&[0, 1], &[-1, 0, 1], &[0, 1, 2], &[0, 1]],      // group 1
        [&[-1, 0], &[-2, -1, 0], &[-1, 0, 1], &[-1, 0]],  // group 2
        [&[-1, 0, 1], &[-1, 0], &[0, 1], &[0]],           // group 3
    ];
    TABLE[group][r.index() / 2]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recurrence_direction() {
        // surplus: own bit 1 mapped to 0
        assert_eq!(child_weight(Rule::new(192), Rmt::new(2), 0), 1);
        // deficiency: own bit 0 mapped to 1
        assert_eq!(child_weight(Rule::new(238), Rmt::new(1), 0), -1);
        // agreement leaves the weight alone
        assert_eq!(child_weight(Rule::new(204), Rmt::new(5), 2), 2);
        assert_eq!(child_weight(Rule::new(204), Rmt::new(2), -1), -1);
    }

    #[test]
    fn siblings_inherit_a_common_weight() {
        let mut set = WeightedRmtSet::root_group(1);
        set.insert(Rmt::new(2), -1);
        let next = set.advance(Rule::new(204)).unwrap();
        let [a, b] = Rmt::new(2).successors();
        assert_eq!(next.weight(a), next.weight(b));
        assert_eq!(next.weight(a), Some(-1));
    }

    #[test]
    fn advance_detects_conflicting_writes() {
        // equivalent RMTs 0 and 4 share successors; give them weights that
        // the identity rule cannot reconcile
        let mut set = WeightedRmtSet::empty();
        set.insert(Rmt::new(0), 0);
        set.insert(Rmt::new(4), 2);
        let err = set.advance(Rule::new(204)).unwrap_err();
        assert_eq!(err.rmt, Rmt::new(0));
        assert_eq!(err.weights, (0, 2));
    }

    #[test]
    fn restrict_drops_members() {
        let mut set = WeightedRmtSet::empty();
        for r in Rmt::all() {
            set.insert(r, 1);
        }
        set.restrict(RmtSet::of(&[0, 2, 4, 6]));
        assert_eq!(set.rmts(), RmtSet::of(&[0, 2, 4, 6]));
        assert_eq!(set.weight(Rmt::new(1)), None);
        assert_eq!(set.weight(Rmt::new(2)), Some(1));
    }

    #[test]
    fn allowed_weight_table_shape() {
        assert_eq!(allowed_weights(0, Rmt::new(0)), &[0]);
        assert_eq!(allowed_weights(0, Rmt::new(1)), &[0]);
        assert_eq!(allowed_weights(1, Rmt::new(4)), &[0, 1, 2]);
        assert_eq!(allowed_weights(2, Rmt::new(3)), &[-2, -1, 0]);
        assert_eq!(allowed_weights(3, Rmt::new(7)), &[0]);
        // siblings always share a column
        for k in 0..4 {
            for r in Rmt::all() {
                assert_eq!(allowed_weights(k, r), allowed_weights(k, r.sibling()));
            }
        }
    }
}
