//! Acceptance suite. Each test exercises one release criterion at its
//! stated tolerance and prints one pass/fail line; run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

mod common;

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{nc_vector, nc_vector_count, random_vector};
use ncca_core::decide::{decide_ncca, decide_ncca_traced, LevelSnapshot};
use ncca_core::rtree::{build_tree, tree_decide_ncca};
use ncca_core::synth::{synthesize, synthesize_with_choices};
use ncca_core::{
    allowed_weights, brute_force_is_ncca, Rmt, Rule, RuleVector, N4_ONLY_NC_RULES, NC_RULES,
};

struct Criterion {
    id: u8,
    started: Instant,
    budget: Duration,
}

impl Criterion {
    fn start(id: u8, budget_secs: u64) -> Self {
        Criterion {
            id,
            started: Instant::now(),
            budget: Duration::from_secs(budget_secs),
        }
    }

    fn pass(self, detail: &str) {
        let elapsed = self.started.elapsed();
        println!(
            "criterion {} PASS ({:.2?} of {:.0?} budget): {detail}",
            self.id, elapsed, self.budget
        );
        assert!(
            elapsed <= self.budget,
            "criterion {} exceeded its {:?} runtime budget: {:?}",
            self.id,
            self.budget,
            elapsed
        );
    }
}

fn rv(s: &str) -> RuleVector {
    s.parse().unwrap()
}

/// Snapshot weights must all sit in their allowed sets.
fn snapshots_within_allowed(levels: &[LevelSnapshot]) -> bool {
    levels.iter().all(|snapshot| {
        snapshot.groups.iter().enumerate().all(|(k, group)| {
            group
                .rmts
                .iter()
                .zip(&group.weights)
                .all(|(&r, w)| allowed_weights(k, Rmt::new(r)).contains(w))
        })
    })
}

fn assert_trace_allowed(vector: &RuleVector) {
    let (verdict, levels) = decide_ncca_traced(vector).unwrap();
    assert!(verdict.is_accepted());
    assert!(
        snapshots_within_allowed(&levels),
        "weight outside the allowed sets on {vector}"
    );
}

/// Criterion 1: the worked examples answer exactly as published.
#[test]
fn criterion_1_paper_example_regression() {
    let c = Criterion::start(1, 1);
    assert!(decide_ncca(&rv("192,136,184,252,204,238")).unwrap().is_accepted());
    assert!(!decide_ncca(&rv("252,204,192,136,184,238")).unwrap().is_accepted());
    assert!(brute_force_is_ncca(&rv("136,252,238,192")).unwrap());
    assert!(brute_force_is_ncca(&rv("170,240,238,192,204")).unwrap());
    assert!(!brute_force_is_ncca(&rv("170,240,239,192,204")).unwrap());
    c.pass("5 published verdicts reproduced");
}

/// Criterion 2: the rule classifier finds exactly the nine conserving
/// rules, and on 4 cells the oracle certifies each of the six extra
/// rules inside some conserving CA.
#[test]
fn criterion_2_rule_classification() {
    let c = Criterion::start(2, 10);
    let conserving: Vec<u8> = (0..=255u8)
        .filter(|&w| Rule::new(w).is_number_conserving())
        .collect();
    assert_eq!(conserving, vec![136, 170, 184, 192, 204, 226, 238, 240, 252]);

    let alphabet: Vec<Rule> = NC_RULES.iter().chain(N4_ONLY_NC_RULES.iter()).copied().collect();
    let mut usable = [false; 256];
    for index in 0..(alphabet.len() as u64).pow(4) {
        let mut rules = Vec::with_capacity(4);
        let mut rest = index;
        for _ in 0..4 {
            rules.push(alphabet[(rest % alphabet.len() as u64) as usize]);
            rest /= alphabet.len() as u64;
        }
        let vector = RuleVector::new(rules);
        if brute_force_is_ncca(&vector).unwrap() {
            for rule in vector.iter() {
                usable[rule.wolfram() as usize] = true;
            }
        }
    }
    for extra in N4_ONLY_NC_RULES {
        assert!(
            usable[extra.wolfram() as usize],
            "rule {extra} not found in any 4-cell conserving CA"
        );
    }
    c.pass("9-rule set exact; all 6 four-cell extras certified by the oracle");
}

/// Criterion 3: the linear decision equals brute force on all 9^5
/// vectors over the conserving rules.
#[test]
fn criterion_3_exhaustive_oracle_equivalence() {
    let c = Criterion::start(3, 60);
    let mut accepted = 0u64;
    for index in 0..nc_vector_count(5) {
        let vector = nc_vector(index, 5);
        let fast = decide_ncca(&vector).unwrap().is_accepted();
        let truth = brute_force_is_ncca(&vector).unwrap();
        assert_eq!(fast, truth, "disagreement on {vector}");
        accepted += u64::from(truth);
    }
    assert_eq!(accepted, 125);
    c.pass("59049 vectors, zero disagreements, 125 conserving");
}

/// Criterion 4: the linear decision equals brute force on 1000 uniform
/// random vectors over all 256 rules at each of n = 5, 6, 7.
#[test]
fn criterion_4_randomized_oracle_equivalence() {
    let c = Criterion::start(4, 60);
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE);
    for n in [5usize, 6, 7] {
        for _ in 0..1000 {
            let vector = random_vector(&mut rng, n);
            assert_eq!(
                decide_ncca(&vector).unwrap().is_accepted(),
                brute_force_is_ncca(&vector).unwrap(),
                "disagreement on {vector}"
            );
        }
    }
    c.pass("3000 random mixed-alphabet vectors, zero disagreements");
}

/// Criterion 5: the tree decision agrees with the linear decision and
/// the oracle on the criterion 3 and 4 vector sets, in both tree modes.
#[test]
fn criterion_5_tree_agreement() {
    let c = Criterion::start(5, 300);
    for index in 0..nc_vector_count(5) {
        let vector = nc_vector(index, 5);
        let pruned = build_tree(&vector, true).unwrap().verdict().is_accepted();
        let unpruned = build_tree(&vector, false).unwrap().verdict().is_accepted();
        let fast = decide_ncca(&vector).unwrap().is_accepted();
        assert_eq!(pruned, fast, "pruned tree disagrees on {vector}");
        assert_eq!(unpruned, fast, "unpruned tree disagrees on {vector}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE);
    for n in [5usize, 6, 7] {
        for _ in 0..1000 {
            let vector = random_vector(&mut rng, n);
            let truth = brute_force_is_ncca(&vector).unwrap();
            let pruned = tree_decide_ncca(&vector).unwrap().is_accepted();
            let unpruned = build_tree(&vector, false).unwrap().verdict().is_accepted();
            assert_eq!(pruned, truth, "pruned tree disagrees on {vector}");
            assert_eq!(unpruned, truth, "unpruned tree disagrees on {vector}");
        }
    }
    c.pass("62049 vectors through both tree modes, zero disagreements");
}

/// Criterion 6: synthesized vectors always pass the decision and the
/// oracle, and the constrained replay reproduces the worked example.
#[test]
fn criterion_6_synthesis_soundness() {
    let c = Criterion::start(6, 60);
    for n in 5..=12usize {
        for seed in 0..100u64 {
            let (vector, trace) = synthesize(n, seed).unwrap();
            assert_eq!(vector.len(), n);
            assert!(decide_ncca(&vector).unwrap().is_accepted(), "{vector}");
            assert!(brute_force_is_ncca(&vector).unwrap(), "{vector}");
            assert!(vector.iter().all(|r| r.is_number_conserving()));
            assert_eq!(trace.seed, Some(seed));
        }
    }
    let (example, _) = synthesize_with_choices(6, Rule::new(192), &[0, 0, 0, 1, 0]).unwrap();
    assert_eq!(example.to_string(), "192,136,184,252,204,238");
    c.pass("800 seeded syntheses oracle-verified; worked example replayed exactly");
}

/// Criterion 7: every weight of every accepted decision run stays in
/// its allowed set, and the 4-cell example tree carries the published
/// path weights with all-zero leaves.
#[test]
fn criterion_7_weight_domain() {
    let c = Criterion::start(7, 300);
    // accepted runs of the exhaustive suite
    for index in 0..nc_vector_count(5) {
        let vector = nc_vector(index, 5);
        let (verdict, levels) = decide_ncca_traced(&vector).unwrap();
        if verdict.is_accepted() {
            assert!(snapshots_within_allowed(&levels), "{vector}");
        }
    }
    // accepted runs of the randomized suite
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE);
    for n in [5usize, 6, 7] {
        for _ in 0..1000 {
            let vector = random_vector(&mut rng, n);
            let (verdict, levels) = decide_ncca_traced(&vector).unwrap();
            if verdict.is_accepted() {
                assert!(snapshots_within_allowed(&levels), "{vector}");
            }
        }
    }
    // accepted runs of the synthesis suite
    for n in 5..=12usize {
        for seed in 0..100u64 {
            let (vector, _) = synthesize(n, seed).unwrap();
            assert_trace_allowed(&vector);
        }
    }
    // the published tree: path <4012> weighs 0,0,0,-1 and leaves are 0
    let tree = build_tree(&rv("136,252,238,192"), false).unwrap();
    let path: Vec<Rmt> = [4u8, 0, 1, 2].iter().map(|&r| Rmt::new(r)).collect();
    assert_eq!(tree.rmt_sequence_weights(&path), Some(vec![0, 0, 0, -1]));
    assert!(tree.verdict().is_accepted());
    for leaf in &tree.levels()[4] {
        for group in leaf.groups() {
            for (_, w) in group.iter() {
                assert_eq!(w, 0);
            }
        }
    }
    c.pass("zero out-of-domain weights across every accepted run");
}

/// Criterion 8: decision runtime grows linearly and stays under a
/// second at a million cells.
#[test]
fn criterion_8_linear_scaling() {
    let c = Criterion::start(8, 300);
    let sizes = [1_000usize, 10_000, 100_000, 1_000_000];
    let mut medians = Vec::new();
    for &n in &sizes {
        let (vector, _) = synthesize(n, 42).unwrap();
        // batch small sizes so the timer resolution cannot dominate
        let reps = (100_000 / n).max(1);
        let mut samples: Vec<f64> = (0..5)
            .map(|_| {
                let t = Instant::now();
                for _ in 0..reps {
                    assert!(decide_ncca(&vector).unwrap().is_accepted());
                }
                t.elapsed().as_secs_f64() / reps as f64
            })
            .collect();
        samples.sort_by(f64::total_cmp);
        medians.push(samples[2]);
    }
    let t_million = medians[3];
    assert!(
        t_million < 1.0,
        "decision at n=1e6 took {t_million:.3}s, over the 1s bound"
    );

    // least-squares fit t = a*n + b over the medians
    let xs: Vec<f64> = sizes.iter().map(|&n| n as f64).collect();
    let mean_x = xs.iter().sum::<f64>() / 4.0;
    let mean_t = medians.iter().sum::<f64>() / 4.0;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    let sxt: f64 = xs
        .iter()
        .zip(&medians)
        .map(|(x, t)| (x - mean_x) * (t - mean_t))
        .sum();
    let slope = sxt / sxx;
    let intercept = mean_t - slope * mean_x;
    let ss_res: f64 = xs
        .iter()
        .zip(&medians)
        .map(|(x, t)| (t - (slope * x + intercept)).powi(2))
        .sum();
    let ss_tot: f64 = medians.iter().map(|t| (t - mean_t).powi(2)).sum();
    let r_squared = 1.0 - ss_res / ss_tot;
    assert!(
        r_squared >= 0.99,
        "linear fit R^2 = {r_squared:.4} below 0.99; medians {medians:?}"
    );
    c.pass(&format!(
        "t(1e6) = {:.1}ms, linear fit R^2 = {:.4}",
        t_million * 1e3,
        r_squared
    ));
}

/// Criterion 9: the decision is invariant under every rotation of every
/// vector in the exhaustive 5-cell suite.
#[test]
fn criterion_9_rotation_invariance() {
    let c = Criterion::start(9, 300);
    for index in 0..nc_vector_count(5) {
        let vector = nc_vector(index, 5);
        let base = decide_ncca(&vector).unwrap().is_accepted();
        for k in 1..5 {
            assert_eq!(
                decide_ncca(&vector.rotated(k)).unwrap().is_accepted(),
                base,
                "rotation {k} of {vector}"
            );
        }
    }
    c.pass("59049 vectors invariant under all 5 rotations");
}
