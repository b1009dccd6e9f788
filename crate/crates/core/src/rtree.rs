//! Reachability trees: the rooted edge-labeled binary tree whose
//! root-to-leaf paths enumerate the reachable states of a finite CA.
//!
//! Each node is an ordered quadruple of weighted RMT groups. A node's
//! RMTs split over its two outgoing edges by next-state bit (0-edge and
//! 1-edge); each edge contributes the successor RMTs of its label to the
//! child node. Nodes at the last two levels keep only half of the
//! generic RMTs, which is what makes the leaves sibling pairs. The CA
//! conserves 1s exactly when weights stay unique per RMT and group at
//! every level and every leaf weight is 0.
//!
//! A node set-wise contained in a sibling node at the same level adds
//! nothing to that question, so `prune` skips expanding such sub-nodes;
//! the pruned frontier stays below 256 nodes regardless of n.

use thiserror::Error;

use crate::config::Configuration;
use crate::rule::{Rmt, RmtSet, RuleVector};
use crate::weight::{child_weight, Weight, WeightedRmtSet};

/// Cell limit for unpruned trees, which hold all 2^n leaves.
pub const MAX_UNPRUNED_CELLS: usize = 16;
/// Cell limit for pruned trees, whose levels stay narrow.
pub const MAX_PRUNED_CELLS: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("a reachability tree needs at least 3 cells (got {n})")]
    TooFewCells { n: usize },
    #[error("{n} cells exceeds the {max}-cell tree construction guard")]
    TooManyCells { n: usize, max: usize, pruned: bool },
    #[error("the tree decision needs at least 4 cells (got {n})")]
    DecisionTooFewCells { n: usize },
}

/// One tree node: the four weighted RMT groups, plus how it hangs off
/// its parent.
#[derive(Clone, Debug)]
pub struct TreeNode {
    groups: [WeightedRmtSet; 4],
    /// Index of the parent in the previous level and the incoming edge's
    /// next-state bit. `None` only at the root.
    parent: Option<(usize, u8)>,
    /// The incoming edge's label: the parent RMTs that mapped to this
    /// side.
    edge_label: [RmtSet; 4],
    /// When pruning folded this node into a same-level node, its index.
    pruned_into: Option<usize>,
}

impl TreeNode {
    pub fn groups(&self) -> &[WeightedRmtSet; 4] {
        &self.groups
    }

    pub fn group(&self, k: usize) -> &WeightedRmtSet {
        &self.groups[k]
    }

    pub fn weight(&self, k: usize, r: Rmt) -> Option<Weight> {
        self.groups[k].weight(r)
    }

    pub fn parent(&self) -> Option<(usize, u8)> {
        self.parent
    }

    pub fn edge_label(&self) -> &[RmtSet; 4] {
        &self.edge_label
    }

    pub fn is_pruned(&self) -> bool {
        self.pruned_into.is_some()
    }

    pub fn pruned_into(&self) -> Option<usize> {
        self.pruned_into
    }

    fn is_subnode_of(&self, other: &TreeNode) -> bool {
        (0..4).all(|k| {
            self.groups[k]
                .rmts()
                .is_subset_of(other.groups[k].rmts())
        })
    }
}

/// A violated conservation requirement, with full provenance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeViolation {
    /// Two parents wrote different weights to one RMT of one node.
    DuplicateWeight {
        level: usize,
        node: usize,
        group: usize,
        rmt: Rmt,
        weights: (Weight, Weight),
    },
    /// The same RMT carries different weights in two nodes of one level.
    CrossNodeWeight {
        level: usize,
        node: usize,
        group: usize,
        rmt: Rmt,
        weights: (Weight, Weight),
    },
    /// A leaf RMT kept a nonzero weight.
    NonzeroLeafWeight {
        node: usize,
        group: usize,
        rmt: Rmt,
        weight: Weight,
    },
}

/// Tree-side verdict on number conservation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeVerdict {
    Accepted,
    Rejected(TreeViolation),
}

impl TreeVerdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, TreeVerdict::Accepted)
    }
}

/// An edge whose label came out empty on every group: the child state
/// region is not reachable and the subtree is absent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MissingEdge {
    pub level: usize,
    pub parent: usize,
    pub bit: u8,
}

#[derive(Debug)]
pub struct ReachabilityTree {
    rv: RuleVector,
    pruned: bool,
    /// levels[i] holds the nodes of level i in creation order; leaves at
    /// level n. Construction stops after the first level with
    /// violations.
    levels: Vec<Vec<TreeNode>>,
    missing_edges: Vec<MissingEdge>,
    violations: Vec<TreeViolation>,
}

/// Builds the reachability tree of `rv`, with weights assigned from the
/// root down. With `prune`, sub-nodes are recorded but not expanded.
/// Construction stops at the end of the first level that violates
/// weight uniqueness; the recorded violations carry the details.
pub fn build_tree(rv: &RuleVector, prune: bool) -> Result<ReachabilityTree, TreeError> {
    let n = rv.len();
    if n < 3 {
        return Err(TreeError::TooFewCells { n });
    }
    let max = if prune { MAX_PRUNED_CELLS } else { MAX_UNPRUNED_CELLS };
    if n > max {
        return Err(TreeError::TooManyCells { n, max, pruned: prune });
    }
    let mut tree = ReachabilityTree {
        rv: rv.clone(),
        pruned: prune,
        levels: vec![vec![TreeNode {
            groups: [
                WeightedRmtSet::root_group(0),
                WeightedRmtSet::root_group(1),
                WeightedRmtSet::root_group(2),
                WeightedRmtSet::root_group(3),
            ],
            parent: None,
            edge_label: [RmtSet::EMPTY; 4],
            pruned_into: None,
        }]],
        missing_edges: Vec::new(),
        violations: Vec::new(),
    };
    for level in 0..n {
        tree.expand_level(level);
        if !tree.violations.is_empty() {
            break;
        }
        if prune && level + 1 < n {
            tree.prune_level(level + 1);
        }
    }
    Ok(tree)
}

/// Decides number conservation by building the pruned tree and checking
/// weight uniqueness per level plus zero weights at the leaves.
pub fn tree_decide_ncca(rv: &RuleVector) -> Result<TreeVerdict, TreeError> {
    if rv.len() < 4 {
        return Err(TreeError::DecisionTooFewCells { n: rv.len() });
    }
    Ok(build_tree(rv, true)?.verdict())
}

impl ReachabilityTree {
    pub fn n(&self) -> usize {
        self.rv.len()
    }

    pub fn rule_vector(&self) -> &RuleVector {
        &self.rv
    }

    pub fn is_pruned(&self) -> bool {
        self.pruned
    }

    pub fn levels(&self) -> &[Vec<TreeNode>] {
        &self.levels
    }

    pub fn node(&self, level: usize, index: usize) -> &TreeNode {
        &self.levels[level][index]
    }

    pub fn violations(&self) -> &[TreeViolation] {
        &self.violations
    }

    pub fn missing_edges(&self) -> &[MissingEdge] {
        &self.missing_edges
    }

    /// Whether the tree reached its leaves with every weight back at 0.
    pub fn verdict(&self) -> TreeVerdict {
        if let Some(&v) = self.violations.first() {
            return TreeVerdict::Rejected(v);
        }
        for (idx, leaf) in self.levels[self.n()].iter().enumerate() {
            for (k, group) in leaf.groups.iter().enumerate() {
                for (r, w) in group.iter() {
                    if w != 0 {
                        return TreeVerdict::Rejected(TreeViolation::NonzeroLeafWeight {
                            node: idx,
                            group: k,
                            rmt: r,
                            weight: w,
                        });
                    }
                }
            }
        }
        TreeVerdict::Accepted
    }

    fn expand_level(&mut self, level: usize) {
        let rule = self.rv.rule(level);
        let n = self.n();
        let mut children: Vec<TreeNode> = Vec::new();
        for pidx in 0..self.levels[level].len() {
            let parent = &self.levels[level][pidx];
            if parent.is_pruned() {
                continue;
            }
            let parent_groups = parent.groups;
            for bit in 0..2u8 {
                let label: [RmtSet; 4] = std::array::from_fn(|k| {
                    parent_groups[k]
                        .rmts()
                        .iter()
                        .filter(|&r| rule.next_state(r) == bit)
                        .collect()
                });
                if label.iter().all(|s| s.is_empty()) {
                    self.missing_edges.push(MissingEdge { level, parent: pidx, bit });
                    continue;
                }
                let mut groups = [WeightedRmtSet::empty(); 4];
                for k in 0..4 {
                    for r in label[k].iter() {
                        let w = child_weight(rule, r, parent_groups[k].weight(r).unwrap());
                        for child in r.successors() {
                            if let Some(existing) = groups[k].weight(child) {
                                if existing != w {
                                    self.violations.push(TreeViolation::DuplicateWeight {
                                        level: level + 1,
                                        node: children.len(),
                                        group: k,
                                        rmt: child,
                                        weights: (existing, w),
                                    });
                                }
                            }
                            groups[k].insert(child, w);
                        }
                    }
                }
                if level + 1 == n - 2 {
                    let even = RmtSet::of(&[0, 2, 4, 6]);
                    let odd = RmtSet::of(&[1, 3, 5, 7]);
                    groups[0].restrict(even);
                    groups[1].restrict(even);
                    groups[2].restrict(odd);
                    groups[3].restrict(odd);
                } else if level + 1 == n - 1 {
                    for (k, group) in groups.iter_mut().enumerate() {
                        group.restrict(RmtSet::of(&[k as u8, k as u8 + 4]));
                    }
                }
                children.push(TreeNode {
                    groups,
                    parent: Some((pidx, bit)),
                    edge_label: label,
                    pruned_into: None,
                });
            }
        }
        // weight of an RMT in a group must agree across the whole level
        let mut seen: [[Option<Weight>; 8]; 4] = [[None; 8]; 4];
        for (idx, node) in children.iter().enumerate() {
            for (k, group) in node.groups.iter().enumerate() {
                for (r, w) in group.iter() {
                    match seen[k][r.index()] {
                        Some(prev) if prev != w => {
                            self.violations.push(TreeViolation::CrossNodeWeight {
                                level: level + 1,
                                node: idx,
                                group: k,
                                rmt: r,
                                weights: (prev, w),
                            });
                        }
                        Some(_) => {}
                        None => seen[k][r.index()] = Some(w),
                    }
                }
            }
        }
        self.levels.push(children);
    }

    /// Marks every node that is set-wise contained in another node of
    /// the level. Runs only after the level passed the weight checks, so
    /// containment alone is safe to act on.
    fn prune_level(&mut self, level: usize) {
        let nodes = &mut self.levels[level];
        for p in 0..nodes.len() {
            for q in 0..nodes.len() {
                if p == q || nodes[q].pruned_into.is_some() {
                    continue;
                }
                if nodes[p].is_subnode_of(&nodes[q]) {
                    // of two equal nodes, keep the earlier one
                    if nodes[q].is_subnode_of(&nodes[p]) && q > p {
                        continue;
                    }
                    nodes[p].pruned_into = Some(q);
                    break;
                }
            }
        }
    }

    /// All states on root-to-leaf paths, read off the edge bits. Only an
    /// unpruned, fully built tree enumerates them all, so `None`
    /// otherwise.
    pub fn reachable_states(&self) -> Option<Vec<Configuration>> {
        let n = self.n();
        if self.pruned || self.levels.len() != n + 1 {
            return None;
        }
        // children of each node, grouped per level so the walk is linear
        // in the tree size
        let children: Vec<Vec<Vec<(usize, u8)>>> = (0..n)
            .map(|level| {
                let mut per_parent = vec![Vec::new(); self.levels[level].len()];
                for (cidx, node) in self.levels[level + 1].iter().enumerate() {
                    let (p, bit) = node.parent.expect("non-root nodes have parents");
                    per_parent[p].push((cidx, bit));
                }
                per_parent
            })
            .collect();
        let mut states: Vec<u64> = Vec::new();
        let mut stack: Vec<(usize, usize, u64)> = vec![(0, 0, 0)];
        while let Some((level, idx, acc)) = stack.pop() {
            if level == n {
                states.push(acc);
                continue;
            }
            for &(cidx, bit) in &children[level][idx] {
                stack.push((level + 1, cidx, acc | (u64::from(bit) << level)));
            }
        }
        states.sort_unstable();
        states.dedup();
        Some(states.into_iter().map(|s| Configuration::from_index(s, n)).collect())
    }

    /// Weights an RMT sequence picks up along its path, one per level
    /// 0..n. `None` when the path leaves the tree, which cannot happen
    /// on a complete unpruned tree fed a valid sequence.
    pub fn rmt_sequence_weights(&self, sequence: &[Rmt]) -> Option<Vec<Weight>> {
        if sequence.len() != self.n() || self.levels.len() != self.n() + 1 {
            return None;
        }
        // the root groups partition the RMTs, so the group is fixed by
        // the first element and preserved along the path
        let k = (sequence[0].value() / 2) as usize;
        let mut weights = Vec::with_capacity(sequence.len());
        let mut idx = 0usize;
        for (level, &r) in sequence.iter().enumerate() {
            let node = &self.levels[level][idx];
            weights.push(node.weight(k, r)?);
            let bit = self.rv.rule(level).next_state(r);
            idx = self.levels[level + 1]
                .iter()
                .position(|c| c.parent == Some((idx, bit)))?;
        }
        Some(weights)
    }

    /// Graphviz rendering. Nodes show each group as `Γk: {r(w), ...}`,
    /// non-reachable edges are dashed stubs, pruned sub-nodes dotted.
    /// Output is deterministic for a given tree.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        out.push_str("digraph reachability_tree {\n");
        out.push_str("    node [shape=box, fontname=\"monospace\"];\n");
        for (level, nodes) in self.levels.iter().enumerate() {
            for (idx, node) in nodes.iter().enumerate() {
                let mut label = format!("N{level}.{idx}");
                for (k, group) in node.groups.iter().enumerate() {
                    label.push_str(&format!("\\nΓ{k}: {}", group_text(group)));
                }
                let style = if node.is_pruned() {
                    ", style=dotted"
                } else {
                    ""
                };
                out.push_str(&format!("    n{level}_{idx} [label=\"{label}\"{style}];\n"));
                if let Some((p, bit)) = node.parent {
                    out.push_str(&format!(
                        "    n{}_{} -> n{level}_{idx} [label=\"{bit}\"];\n",
                        level - 1,
                        p
                    ));
                }
            }
        }
        for (i, edge) in self.missing_edges.iter().enumerate() {
            out.push_str(&format!(
                "    x{i} [shape=point, label=\"\"];\n    n{}_{} -> x{i} [label=\"{}\", style=dashed];\n",
                edge.level, edge.parent, edge.bit
            ));
        }
        out.push_str("}\n");
        out
    }

    /// The same structure as JSON. `serde_json` keeps object key order,
    /// so the output is deterministic for a given tree.
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        let levels: Vec<Vec<serde_json::Value>> = self
            .levels
            .iter()
            .map(|nodes| {
                nodes
                    .iter()
                    .map(|node| {
                        let groups: Vec<serde_json::Value> = node
                            .groups
                            .iter()
                            .map(|g| {
                                let rmts: Vec<u8> = g.rmts().iter().map(|r| r.value()).collect();
                                let weights: Vec<Weight> = g.iter().map(|(_, w)| w).collect();
                                json!({ "rmts": rmts, "weights": weights })
                            })
                            .collect();
                        json!({
                            "groups": groups,
                            "parent": node.parent.map(|(p, _)| p),
                            "edge_bit": node.parent.map(|(_, b)| b),
                            "pruned_into": node.pruned_into,
                        })
                    })
                    .collect()
            })
            .collect();
        let missing: Vec<serde_json::Value> = self
            .missing_edges
            .iter()
            .map(|e| json!({ "level": e.level, "parent": e.parent, "bit": e.bit }))
            .collect();
        json!({
            "rules": self.rv.to_string(),
            "n": self.n(),
            "pruned": self.pruned,
            "accepted": self.verdict().is_accepted(),
            "levels": levels,
            "missing_edges": missing,
        })
    }
}

fn group_text(group: &WeightedRmtSet) -> String {
    if group.is_empty() {
        return "_".to_string();
    }
    let parts: Vec<String> = group.iter().map(|(r, w)| format!("{r}({w})")).collect();
    format!("{{{}}}", parts.join(", "))
}
