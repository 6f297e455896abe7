//! Exact joint law of (root value, leaf sum) for balanced trees with i.i.d.
//! Bernoulli(p) leaves, and the two ceilings it determines:
//!
//! * the Bayes-optimal accuracy of any predictor that sees only the leaf sum,
//!   `Σ_s max(P(v=0, s), P(v=1, s))`;
//! * the permuted-oracle score, `Σ_s P(s)·(q_s² + (1−q_s)²)` with
//!   `q_s = P(v=1 | s)`. Given the sum, a uniformly shuffled input is uniform
//!   over strings with that sum and independent of the original root, so the
//!   true evaluator on the shuffled input agrees with the original label with
//!   exactly that probability.
//!
//! Everything is held in `f64`; counts are never materialized.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::trees::{Assignment, PrereqTree, RuleSpec};
use crate::{Error, Result};

/// Tolerance on total mass.
pub const NORMALIZATION_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug)]
pub struct DpLimits {
    pub max_leaves: usize,
}

impl Default for DpLimits {
    /// `3^7` leaves.
    fn default() -> Self {
        DpLimits { max_leaves: 2187 }
    }
}

/// `mass[v][s] = P(root = v ∧ leaf sum = s)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SumValueDist {
    pub k: usize,
    pub d: usize,
    pub p: f64,
    pub rule_spec: RuleSpec,
    mass0: Vec<f64>,
    mass1: Vec<f64>,
}

impl SumValueDist {
    pub fn leaves(&self) -> usize {
        self.mass0.len() - 1
    }

    pub fn mass(&self, value: bool) -> &[f64] {
        if value {
            &self.mass1
        } else {
            &self.mass0
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.mass0.iter().chain(&self.mass1).sum()
    }

    pub fn sum_mass(&self, s: usize) -> f64 {
        self.mass0[s] + self.mass1[s]
    }

    /// `P(root = 1 | sum = s)`, 0 where the sum has no mass.
    pub fn q(&self, s: usize) -> f64 {
        let t = self.sum_mass(s);
        if t > 0.0 {
            self.mass1[s] / t
        } else {
            0.0
        }
    }

    pub fn root_one_probability(&self) -> f64 {
        self.mass1.iter().sum()
    }

    /// Bayes decision for sum `s` (ties go to 1).
    pub fn bayes_decision(&self, s: usize) -> bool {
        self.mass1[s] >= self.mass0[s]
    }
}

/// Majority trees, i.e. `joint_distribution(k, d, p, RuleSpec::Majority, default limits)`.
pub fn joint_sum_value_distribution(k: usize, d: usize, p: f64) -> Result<SumValueDist> {
    joint_distribution(k, d, p, RuleSpec::Majority, DpLimits::default())
}

pub fn joint_distribution(
    k: usize,
    d: usize,
    p: f64,
    rule_spec: RuleSpec,
    limits: DpLimits,
) -> Result<SumValueDist> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Config(format!("p={p} is not a probability")));
    }
    if k == 0 {
        return Err(Error::Config("arity k must be at least 1".into()));
    }
    let n = crate::trees::leaf_count(k, d)?;
    if n > limits.max_leaves {
        return Err(Error::SizeLimit(format!(
            "k^d = {n} leaves exceeds the DP limit of {}",
            limits.max_leaves
        )));
    }

    let mut mass0 = vec![1.0 - p, 0.0];
    let mut mass1 = vec![0.0, p];
    for height in 1..=d {
        let rule = rule_spec
            .rule_at(d - height, k)
            .ok_or_else(|| Error::Unsupported("DP needs a per-level rule spec".into()))?;
        rule.check_fanin(k)?;
        let pow1 = convolution_powers(&mass1, k);
        let pow0 = convolution_powers(&mass0, k);
        let width = (mass0.len() - 1) * k + 1;
        let mut next0 = vec![0.0; width];
        let mut next1 = vec![0.0; width];
        // Child-value patterns grouped by how many children are 1; the
        // rules are symmetric so each group shares one output value.
        let mut binom = 1.0f64;
        for ones in 0..=k {
            let part = convolve(&pow1[ones], &pow0[k - ones]);
            let target = if rule.fires(ones, k) { &mut next1 } else { &mut next0 };
            for (t, v) in target.iter_mut().zip(&part) {
                *t += binom * v;
            }
            binom = binom * (k - ones) as f64 / (ones + 1) as f64;
        }
        mass0 = next0;
        mass1 = next1;
    }
    Ok(SumValueDist {
        k,
        d,
        p,
        rule_spec,
        mass0,
        mass1,
    })
}

fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (o, &y) in out[i..].iter_mut().zip(b) {
            *o += x * y;
        }
    }
    out
}

/// `[δ_0, m, m*m, ...]` up to the `k`-th convolution power.
fn convolution_powers(m: &[f64], k: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(k + 1);
    out.push(vec![1.0]);
    for j in 1..=k {
        let next = convolve(&out[j - 1], m);
        out.push(next);
    }
    out
}

/// Best accuracy of any predictor that only sees the leaf sum.
pub fn bayes_sum_accuracy(dist: &SumValueDist) -> f64 {
    dist.mass0
        .iter()
        .zip(&dist.mass1)
        .map(|(a, b)| a.max(*b))
        .sum()
}

/// Probability that the true evaluator on uniformly permuted leaves matches
/// the original root value.
pub fn permuted_oracle_score(dist: &SumValueDist) -> f64 {
    (0..=dist.leaves())
        .map(|s| {
            let q = dist.q(s);
            dist.sum_mass(s) * (q * q + (1.0 - q) * (1.0 - q))
        })
        .sum()
}

/// Accuracy of always predicting the more likely root value.
pub fn majority_class_accuracy(dist: &SumValueDist) -> f64 {
    let one = dist.root_one_probability();
    one.max(1.0 - one)
}

/// One row of `ktree stats`; accuracies are fractions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Ceilings {
    pub k: usize,
    pub depth: usize,
    pub leaves: usize,
    pub p: f64,
    pub bayes_sum: f64,
    pub permuted_oracle: f64,
    pub majority_class: f64,
}

pub fn ceilings(k: usize, d: usize, p: f64) -> Result<Ceilings> {
    let dist = joint_sum_value_distribution(k, d, p)?;
    Ok(Ceilings {
        k,
        depth: d,
        leaves: dist.leaves(),
        p,
        bayes_sum: bayes_sum_accuracy(&dist),
        permuted_oracle: permuted_oracle_score(&dist),
        majority_class: majority_class_accuracy(&dist),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    BayesSum,
    PermutedOracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
    /// Fewer than two samples: the standard error carries no information.
    pub degenerate: bool,
}

/// Seeded Monte Carlo estimate of either ceiling, for cross-checking the DP.
pub fn monte_carlo_check(
    tree: &PrereqTree,
    p: f64,
    estimator: Estimator,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    if samples == 0 {
        return Err(Error::Config("need at least one sample".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Config(format!("p={p} is not a probability")));
    }
    let n = tree.input_count();
    let dist = match estimator {
        Estimator::BayesSum => {
            let k = tree.arity().ok_or_else(|| {
                Error::Unsupported("Bayes-sum estimate needs a balanced tree".into())
            })?;
            Some(joint_distribution(
                k,
                tree.depth(),
                p,
                tree.rule_spec(),
                DpLimits { max_leaves: n.max(1) },
            )?)
        }
        Estimator::PermutedOracle => None,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    let mut bits = vec![false; n];
    for _ in 0..samples {
        for b in bits.iter_mut() {
            *b = rng.random_bool(p);
        }
        let x = Assignment::new(bits.clone());
        let label = tree.evaluate_root(&x)?;
        let guess = match &dist {
            Some(dist) => dist.bayes_decision(x.ones()),
            None => {
                let mut shuffled = x.into_bits();
                shuffled.shuffle(&mut rng);
                tree.evaluate_root(&Assignment::new(shuffled))?
            }
        };
        hits += usize::from(guess == label);
    }
    let mean = hits as f64 / samples as f64;
    Ok(McEstimate {
        mean,
        stderr: (mean * (1.0 - mean) / samples as f64).sqrt(),
        samples,
        degenerate: samples < 2,
    })
}
