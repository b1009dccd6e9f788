//! Seeded synthesis of number-conserving rule vectors.
//!
//! The synthesizer runs the same super-node scan as the decision
//! algorithm, but instead of checking a given rule at each level it
//! builds one: every RMT whose next state the current weights force is
//! set accordingly, and the remaining sibling pairs are filled from a
//! deterministic choice stream. Cells 1, n-2 and n-1 get special
//! treatment because their groups never hold all eight RMTs, so fewer
//! constraints are visible there and extra conditions must stand in.
//!
//! All randomness flows through [`ChoiceSource`]: either a ChaCha stream
//! seeded by a `u64`, or an explicit script of choices for exact
//! replays. Every free draw is logged in the trace, and a finished
//! vector is re-checked with [`decide_ncca`] before it is returned.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decide::{decide_ncca, SuperNode};
use crate::rule::{Rmt, Rule, RuleVector, NC_RULES};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SynthError {
    #[error("synthesis needs at least 5 cells (got {n})")]
    TooFewCells { n: usize },
    #[error("the choice script ran out after {taken} draws")]
    ChoicesExhausted { taken: usize },
    #[error("rule {0} cannot open a conserving vector; pick one of 136, 170, 184, 192, 204, 226, 238, 240, 252")]
    NotConserving(u8),
    #[error("choices must be 0 or 1 (got {0})")]
    BadChoice(u8),
}

/// Where the synthesizer's free decisions come from.
pub enum ChoiceSource {
    Seeded { seed: u64, rng: ChaCha8Rng },
    Scripted { rule0: Rule, alphas: Vec<u8>, cursor: usize },
}

impl ChoiceSource {
    pub fn seeded(seed: u64) -> Self {
        ChoiceSource::Seeded {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A fixed script: `rule0` opens the vector and `alphas` feeds the
    /// free draws in order. Unused tail entries are fine.
    pub fn scripted(rule0: Rule, alphas: &[u8]) -> Result<Self, SynthError> {
        if !rule0.is_number_conserving() {
            return Err(SynthError::NotConserving(rule0.wolfram()));
        }
        if let Some(&bad) = alphas.iter().find(|&&a| a > 1) {
            return Err(SynthError::BadChoice(bad));
        }
        Ok(ChoiceSource::Scripted {
            rule0,
            alphas: alphas.to_vec(),
            cursor: 0,
        })
    }

    fn pick_rule0(&mut self) -> Rule {
        match self {
            ChoiceSource::Seeded { rng, .. } => NC_RULES[rng.gen_range(0..NC_RULES.len())],
            ChoiceSource::Scripted { rule0, .. } => *rule0,
        }
    }

    fn alpha(&mut self) -> Result<u8, SynthError> {
        match self {
            ChoiceSource::Seeded { rng, .. } => Ok(rng.gen_range(0..2u8)),
            ChoiceSource::Scripted { alphas, cursor, .. } => {
                let a = *alphas
                    .get(*cursor)
                    .ok_or(SynthError::ChoicesExhausted { taken: *cursor })?;
                *cursor += 1;
                Ok(a)
            }
        }
    }

    fn seed(&self) -> Option<u64> {
        match self {
            ChoiceSource::Seeded { seed, .. } => Some(*seed),
            ChoiceSource::Scripted { .. } => None,
        }
    }
}

/// One selected rule with the free draws it consumed and the conditions
/// that pinned its RMTs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selection {
    pub rule: Rule,
    pub alphas: Vec<u8>,
    pub fired: Vec<String>,
}

/// Everything needed to audit or replay one synthesis run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthesisTrace {
    pub n: usize,
    pub seed: Option<u64>,
    pub rules: Vec<u8>,
    /// Every free draw, in consumption order. Feeding these back through
    /// [`synthesize_with_choices`] with `rules[0]` rebuilds the vector.
    pub choices: Vec<u8>,
    pub cells: Vec<CellRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellRecord {
    pub cell: usize,
    pub rule: u8,
    pub alphas: Vec<u8>,
    pub fired: Vec<String>,
}

/// Builds an n-cell number-conserving rule vector from a seed.
pub fn synthesize(n: usize, seed: u64) -> Result<(RuleVector, SynthesisTrace), SynthError> {
    run(n, ChoiceSource::seeded(seed))
}

/// Replays a synthesis from an explicit script instead of a seed.
pub fn synthesize_with_choices(
    n: usize,
    rule0: Rule,
    alphas: &[u8],
) -> Result<(RuleVector, SynthesisTrace), SynthError> {
    run(n, ChoiceSource::scripted(rule0, alphas)?)
}

fn run(n: usize, mut source: ChoiceSource) -> Result<(RuleVector, SynthesisTrace), SynthError> {
    if n < 5 {
        return Err(SynthError::TooFewCells { n });
    }
    let mut cells: Vec<CellRecord> = Vec::with_capacity(n);
    let push = |cells: &mut Vec<CellRecord>, sel: Selection| -> Rule {
        cells.push(CellRecord {
            cell: cells.len(),
            rule: sel.rule.wolfram(),
            alphas: sel.alphas,
            fired: sel.fired,
        });
        sel.rule
    };

    let mut node = SuperNode::root();
    let rule0 = source.pick_rule0();
    push(
        &mut cells,
        Selection {
            rule: rule0,
            alphas: Vec::new(),
            fired: vec!["opening rule drawn from the conserving set".to_string()],
        },
    );
    node = step(node, rule0);

    let rule1 = push(&mut cells, select_r1(&node, &mut source)?);
    node = step(node, rule1);

    for _ in 2..=n - 3 {
        let rule = push(&mut cells, select_generic(&node, &mut source)?);
        node = step(node, rule);
    }

    node.restrict_second_last();
    let rule = push(&mut cells, select_second_last(&node, &mut source)?);
    node = step(node, rule);

    node.restrict_last();
    let rule = push(&mut cells, select_last(&node));
    node = step(node, rule);

    debug_assert!(node
        .groups()
        .iter()
        .all(|g| g.iter().all(|(_, w)| w == 0)));

    let rv = RuleVector::from_wolfram(&cells.iter().map(|c| c.rule).collect::<Vec<_>>());
    let verdict = decide_ncca(&rv).expect("n >= 5 was checked above");
    assert!(
        verdict.is_accepted(),
        "synthesized vector {rv} failed the decision check: {verdict}"
    );

    let trace = SynthesisTrace {
        n,
        seed: source.seed(),
        rules: cells.iter().map(|c| c.rule).collect(),
        choices: cells.iter().flat_map(|c| c.alphas.clone()).collect(),
        cells,
    };
    Ok((rv, trace))
}

fn step(node: SuperNode, rule: Rule) -> SuperNode {
    node.advance(rule)
        .expect("selected rules keep weights consistent")
}

/// Partially filled rule under construction. RMTs 0 and 7 start pinned
/// to 0 and 1, which every conserving rule needs.
struct RuleBits {
    bits: [Option<u8>; 8],
}

impl RuleBits {
    fn conserving_frame() -> Self {
        let mut bits = [None; 8];
        bits[0] = Some(0);
        bits[7] = Some(1);
        RuleBits { bits }
    }

    fn set(&mut self, rmt: u8, bit: u8) {
        self.bits[rmt as usize] = Some(bit);
    }

    fn get(&self, rmt: u8) -> u8 {
        self.bits[rmt as usize].expect("RMT assigned before use")
    }

    fn rule(&self) -> Rule {
        let mut wolfram = 0u8;
        for (r, bit) in self.bits.iter().enumerate() {
            wolfram |= bit.expect("all RMTs assigned") << r;
        }
        Rule::new(wolfram)
    }
}

fn weight_of(node: &SuperNode, k: usize, r: u8) -> i32 {
    node.weight(k, Rmt::new(r))
        .expect("selection consults only RMTs present at this level")
}

/// Picks the rule of cell 1. Level-1 groups hold only half the RMTs, so
/// the generic selection would leave too much unconstrained; this
/// branches on the few weights that exist there (W0[2], W1[4], W1[6],
/// W2[3]) and fills the rest consistently.
pub fn select_r1(node: &SuperNode, source: &mut ChoiceSource) -> Result<Selection, SynthError> {
    let mut bits = RuleBits::conserving_frame();
    let mut alphas = Vec::new();
    let mut fired = Vec::new();
    let draw = |source: &mut ChoiceSource, alphas: &mut Vec<u8>| -> Result<u8, SynthError> {
        let a = source.alpha()?;
        alphas.push(a);
        Ok(a)
    };

    let w02 = weight_of(node, 0, 2);
    let w14 = weight_of(node, 1, 4);
    let w16 = weight_of(node, 1, 6);
    let w23 = weight_of(node, 2, 3);

    if w02 == -1 {
        fired.push("W0[2]=-1 so R[2]=0".to_string());
        bits.set(2, 0);
        if w14 == w16 {
            fired.push("W1[4]=W1[6] fixes R[3],R[4],R[6]".to_string());
            bits.set(3, 0);
            bits.set(4, 0);
            bits.set(6, 1);
            let a = draw(source, &mut alphas)?;
            bits.set(1, a);
            bits.set(5, a);
        } else {
            fired.push("W1[4]!=W1[6] so R[5]=1".to_string());
            bits.set(5, 1);
            let a = draw(source, &mut alphas)?;
            bits.set(4, a);
            bits.set(6, a);
            let other = if bits.get(4) == 0 { 1 } else { 0 };
            bits.set(1, other);
            bits.set(3, other);
        }
    } else {
        let a = draw(source, &mut alphas)?;
        bits.set(2, a);
        if bits.get(2) == 0 {
            if w14 == w16 {
                if w14 == 0 || w23 == 0 {
                    fired.push("W1[4]=0 or W2[3]=0 fixes R[3]=1, R[4]=R[6]=0".to_string());
                    bits.set(3, 1);
                    bits.set(4, 0);
                    bits.set(6, 0);
                } else {
                    let a = draw(source, &mut alphas)?;
                    bits.set(4, a);
                    bits.set(6, a);
                    bits.set(3, if bits.get(6) == 0 { 1 } else { 0 });
                }
                if bits.get(4) == 0 {
                    let a = draw(source, &mut alphas)?;
                    bits.set(1, a);
                    bits.set(5, a);
                } else {
                    bits.set(1, 0);
                    bits.set(5, 1);
                }
            } else {
                fired.push("W1[4]!=W1[6] fixes R[1],R[3],R[4],R[5],R[6]".to_string());
                bits.set(5, 1);
                bits.set(4, 1);
                bits.set(6, 0);
                bits.set(1, 0);
                bits.set(3, 1);
            }
        } else {
            bits.set(3, 1);
            bits.set(6, 1);
            if w14 == w16 {
                fired.push("W1[4]=W1[6] so R[4]=0".to_string());
                bits.set(4, 0);
                let a = draw(source, &mut alphas)?;
                bits.set(1, a);
                bits.set(5, a);
            } else {
                fired.push("W1[4]!=W1[6] so R[4]=R[5]=1".to_string());
                bits.set(5, 1);
                bits.set(4, 1);
                bits.set(1, 0);
            }
        }
    }
    Ok(Selection { rule: bits.rule(), alphas, fired })
}

/// Picks the rule of a generic cell 2..=n-3, where every group holds all
/// eight RMTs. RMTs 4 and 3 follow the weight comparisons against their
/// equivalent partners; the sibling pairs (1,5) and (2,6) follow the
/// surplus and deficiency caps when those fire, otherwise a free draw.
pub fn select_generic(
    node: &SuperNode,
    source: &mut ChoiceSource,
) -> Result<Selection, SynthError> {
    let mut bits = RuleBits::conserving_frame();
    let mut alphas = Vec::new();
    let mut fired = Vec::new();
    let w = |k: usize, r: u8| weight_of(node, k, r);

    if w(0, 4) == w(0, 0) {
        fired.push("W[4]=W[0] so R[4]=0".to_string());
        bits.set(4, 0);
    } else {
        fired.push("W[4]>W[0] so R[4]=1".to_string());
        bits.set(4, 1);
    }
    if bits.get(4) != bits.get(0) {
        bits.set(1, 0);
        bits.set(5, 1);
    } else if w(0, 5) == 1 || w(1, 5) == 2 || w(2, 5) == 1 || w(3, 5) == 1 || w(3, 1) == 1 {
        fired.push("weight cap on RMT 5 or 1 so R[1]=R[5]=1".to_string());
        bits.set(1, 1);
        bits.set(5, 1);
    } else if w(3, 1) == -1 {
        fired.push("W3[1]=-1 so R[1]=R[5]=0".to_string());
        bits.set(1, 0);
        bits.set(5, 0);
    } else {
        let a = source.alpha()?;
        alphas.push(a);
        bits.set(1, a);
        bits.set(5, a);
    }

    if w(0, 3) == w(0, 7) {
        fired.push("W[3]=W[7] so R[3]=1".to_string());
        bits.set(3, 1);
    } else {
        fired.push("W[3]<W[7] so R[3]=0".to_string());
        bits.set(3, 0);
    }
    if bits.get(3) != bits.get(7) {
        bits.set(2, 0);
        bits.set(6, 1);
    } else if w(0, 2) == -1 || w(1, 2) == -1 || w(2, 2) == -2 || w(3, 2) == -1 || w(0, 6) == -1 {
        fired.push("weight floor on RMT 2 or 6 so R[2]=R[6]=0".to_string());
        bits.set(2, 0);
        bits.set(6, 0);
    } else if w(0, 6) == 1 {
        fired.push("W0[6]=1 so R[2]=R[6]=1".to_string());
        bits.set(2, 1);
        bits.set(6, 1);
    } else {
        let a = source.alpha()?;
        alphas.push(a);
        bits.set(2, a);
        bits.set(6, a);
    }
    Ok(Selection { rule: bits.rule(), alphas, fired })
}

/// Picks the rule of cell n-2 on the restricted groups, where only the
/// even RMTs survive in groups 0 and 1 and only the odd ones in groups
/// 2 and 3. Four extra two-sided weight conditions keep the level n-1
/// weights inside the narrow range the final rule can still cancel.
pub fn select_second_last(
    node: &SuperNode,
    source: &mut ChoiceSource,
) -> Result<Selection, SynthError> {
    let mut bits = RuleBits::conserving_frame();
    let mut alphas = Vec::new();
    let mut fired = Vec::new();
    let w = |k: usize, r: u8| weight_of(node, k, r);

    let equal04 = w(0, 4) == w(0, 0);
    debug_assert_eq!(equal04, w(1, 4) == w(1, 0));
    if equal04 {
        fired.push("W[4]=W[0] so R[4]=0".to_string());
        bits.set(4, 0);
    } else {
        fired.push("W[4]>W[0] so R[4]=1".to_string());
        bits.set(4, 1);
    }
    if bits.get(4) != bits.get(0) {
        bits.set(1, 0);
        bits.set(5, 1);
    } else {
        let low = w(2, 1) == -1 && w(2, 5) == -1;
        let high = w(3, 1) == 1 && w(3, 5) == 1;
        debug_assert!(!(low && high));
        if low {
            fired.push("W2[1]=W2[5]=-1 so R[1]=R[5]=0".to_string());
            bits.set(1, 0);
            bits.set(5, 0);
        } else if high {
            fired.push("W3[1]=W3[5]=1 so R[1]=R[5]=1".to_string());
            bits.set(1, 1);
            bits.set(5, 1);
        } else {
            let a = source.alpha()?;
            alphas.push(a);
            bits.set(1, a);
            bits.set(5, a);
        }
    }

    let equal37 = w(2, 3) == w(2, 7);
    debug_assert_eq!(equal37, w(3, 3) == w(3, 7));
    if equal37 {
        fired.push("W[3]=W[7] so R[3]=1".to_string());
        bits.set(3, 1);
    } else {
        fired.push("W[3]<W[7] so R[3]=0".to_string());
        bits.set(3, 0);
    }
    if bits.get(3) != bits.get(7) {
        bits.set(2, 0);
        bits.set(6, 1);
    } else {
        let low = w(0, 2) == -1 && w(0, 6) == -1;
        let high = w(1, 2) == 1 && w(1, 6) == 1;
        debug_assert!(!(low && high));
        if low {
            fired.push("W0[2]=W0[6]=-1 so R[2]=R[6]=0".to_string());
            bits.set(2, 0);
            bits.set(6, 0);
        } else if high {
            fired.push("W1[2]=W1[6]=1 so R[2]=R[6]=1".to_string());
            bits.set(2, 1);
            bits.set(6, 1);
        } else {
            let a = source.alpha()?;
            alphas.push(a);
            bits.set(2, a);
            bits.set(6, a);
        }
    }
    Ok(Selection { rule: bits.rule(), alphas, fired })
}

/// Picks the final rule. Group k holds only {k, k+4} here and every
/// weight is 0 or its one-step neighbor, so each RMT's bit is forced:
/// the rule must cancel exactly the weights still standing.
pub fn select_last(node: &SuperNode) -> Selection {
    let mut bits = RuleBits::conserving_frame();
    let mut fired = Vec::new();
    let w = |k: usize, r: u8| weight_of(node, k, r);

    bits.set(4, if w(0, 4) == 0 { 0 } else { 1 });
    bits.set(3, if w(3, 3) == 0 { 1 } else { 0 });
    for r in [1u8, 5] {
        bits.set(r, if w(1, r) == 0 { 0 } else { 1 });
    }
    for r in [2u8, 6] {
        bits.set(r, if w(2, r) == 0 { 1 } else { 0 });
    }
    fired.push(format!(
        "closing weights W0[4]={} W1[1]={} W1[5]={} W2[2]={} W2[6]={} W3[3]={}",
        w(0, 4),
        w(1, 1),
        w(1, 5),
        w(2, 2),
        w(2, 6),
        w(3, 3)
    ));
    Selection { rule: bits.rule(), alphas: Vec::new(), fired }
}
