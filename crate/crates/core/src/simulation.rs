//! Random pattern sequences and the expected number of wins.
//!
//! For a time-homogeneous distribution `v(x)` over the universe, the expected
//! number of steps out of `n` on which `A` is strictly faster than `B` is
//! `n · Σ_x v(x) · sg(T(B, x) ∸ T(A, x))`. Under the uniform distribution this
//! is `n · V(A, B) / |U|`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::patterns::{Pattern, Universe};
use crate::recognizers::{time_profile, DecisionTree};

/// Truncated subtraction: `a - b` when `a ≥ b`, else 0.
pub fn monus(a: i64, b: i64) -> i64 {
    if a >= b {
        a - b
    } else {
        0
    }
}

/// 1 for positive arguments, 0 otherwise.
pub fn sg(a: i64) -> i64 {
    (a > 0) as i64
}

const WEIGHT_TOLERANCE: f64 = 1e-12;

/// Probability of drawing each pattern at every step.
#[derive(Clone, Debug)]
pub struct SequenceDistribution {
    /// Exact weights, by pattern ordinal.
    weights: Vec<BigRational>,
    sampler: Sampler,
}

#[derive(Clone, Debug)]
enum Sampler {
    Uniform(usize),
    Weighted(WeightedIndex<f64>),
}

impl SequenceDistribution {
    pub fn uniform(u: &Universe) -> Self {
        let n = u.len();
        let w = BigRational::new(BigInt::from(1), BigInt::from(n));
        SequenceDistribution {
            weights: vec![w; n],
            sampler: Sampler::Uniform(n),
        }
    }

    /// Weights for listed patterns; unlisted patterns get probability 0.
    /// Weights must be finite, nonnegative and sum to 1 within 1e-12.
    pub fn from_weights(u: &Universe, weights: &[(Pattern, f64)]) -> Result<Self> {
        let mut dense = vec![0.0f64; u.len()];
        for (x, w) in weights {
            if !w.is_finite() || *w < 0.0 {
                return Err(Error::domain(format!("invalid weight {w} for pattern {x}")));
            }
            let o = u
                .ordinal(x)
                .ok_or_else(|| Error::domain(format!("pattern {x} is not in the universe")))?;
            dense[o] += w;
        }
        Self::from_dense(dense)
    }

    fn from_dense(dense: Vec<f64>) -> Result<Self> {
        let sum: f64 = dense.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::domain(format!("weights sum to {sum}, not 1")));
        }
        let weights = dense
            .iter()
            .map(|&w| BigRational::from_float(w).expect("finite weight"))
            .collect();
        let sampler = WeightedIndex::new(&dense)
            .map_err(|e| Error::domain(format!("unusable weights: {e}")))?;
        Ok(SequenceDistribution {
            weights,
            sampler: Sampler::Weighted(sampler),
        })
    }

    /// Accepts one weight vector per step, as long as every step uses the
    /// same weights.
    pub fn from_step_weights(u: &Universe, steps: &[Vec<(Pattern, f64)>]) -> Result<Self> {
        let first = steps
            .first()
            .ok_or_else(|| Error::domain("no step weights given"))?;
        let dist = Self::from_weights(u, first)?;
        for (t, step) in steps.iter().enumerate().skip(1) {
            let other = Self::from_weights(u, step)?;
            if other.weights != dist.weights {
                return Err(Error::domain(format!(
                    "step {} uses different weights; only time-homogeneous sequences are supported",
                    t + 1
                )));
            }
        }
        Ok(dist)
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    fn check_universe(&self, u: &Universe) -> Result<()> {
        if self.weights.len() != u.len() {
            return Err(Error::domain(format!(
                "distribution covers {} patterns, universe has {}",
                self.weights.len(),
                u.len()
            )));
        }
        Ok(())
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match &self.sampler {
            Sampler::Uniform(n) => rng.random_range(0..*n),
            Sampler::Weighted(w) => w.sample(rng),
        }
    }
}

/// Exact expected number of steps out of `steps` on which `a` beats `b`.
pub fn expected_wins(
    a: &DecisionTree,
    b: &DecisionTree,
    u: &Universe,
    dist: &SequenceDistribution,
    steps: u64,
) -> Result<BigRational> {
    if steps == 0 {
        return Err(Error::domain("a sequence needs at least one step"));
    }
    dist.check_universe(u)?;
    let (ta, tb) = (time_profile(a, u)?, time_profile(b, u)?);
    let per_step = ta
        .per_pattern
        .iter()
        .zip(&tb.per_pattern)
        .zip(dist.weights())
        .filter(|((&x, &y), _)| sg(monus(y as i64, x as i64)) == 1)
        .fold(BigRational::zero(), |acc, (_, w)| acc + w);
    Ok(per_step * BigRational::from_integer(BigInt::from(steps)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationReport {
    pub steps: u64,
    pub trials: u64,
    pub seed: u64,
    /// Total steps on which the first algorithm was strictly faster.
    pub wins: u64,
    pub empirical_win_fraction: f64,
    /// Exact expected wins per trial, as a reduced fraction.
    pub exact_expectation: String,
    /// Exact expected wins per step.
    pub exact_win_fraction: f64,
    pub standard_error: f64,
}

impl SimulationReport {
    pub fn to_text(&self) -> String {
        format!(
            "steps {}\ntrials {}\nseed {}\nwins {}\nempirical win fraction {:.6}\nexact expectation {} per trial ({:.6} per step)\nstandard error {:.6}\n",
            self.steps,
            self.trials,
            self.seed,
            self.wins,
            self.empirical_win_fraction,
            self.exact_expectation,
            self.exact_win_fraction,
            self.standard_error
        )
    }
}

/// Generator for one trial: ChaCha8 seeded from `seed`, on stream `trial`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Runs `trials` independent sequences of `steps` draws and counts the steps
/// on which `a` is strictly faster than `b`.
pub fn simulate(
    a: &DecisionTree,
    b: &DecisionTree,
    u: &Universe,
    dist: &SequenceDistribution,
    steps: u64,
    trials: u64,
    seed: u64,
) -> Result<SimulationReport> {
    if trials == 0 {
        return Err(Error::domain("at least one trial is required"));
    }
    let exact = expected_wins(a, b, u, dist, steps)?;
    let (ta, tb) = (time_profile(a, u)?, time_profile(b, u)?);
    let wins_at: Vec<bool> = ta
        .per_pattern
        .iter()
        .zip(&tb.per_pattern)
        .map(|(x, y)| x < y)
        .collect();

    let wins: u64 = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            (0..steps).filter(|_| wins_at[dist.draw(&mut rng)]).count() as u64
        })
        .sum();

    let draws = (steps * trials) as f64;
    let fraction = wins as f64 / draws;
    let per_step = &exact / BigRational::from_integer(BigInt::from(steps));
    Ok(SimulationReport {
        steps,
        trials,
        seed,
        wins,
        empirical_win_fraction: fraction,
        exact_expectation: exact.to_string(),
        exact_win_fraction: per_step.to_f64().unwrap_or(f64::NAN),
        standard_error: (fraction * (1.0 - fraction) / draws).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::theorem1_universe;
    use crate::recognizers::builtin::*;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn monus_and_sg() {
        assert_eq!(monus(3, 1), 2);
        assert_eq!(monus(1, 3), 0);
        assert_eq!(monus(4, 4), 0);
        assert_eq!(sg(2), 1);
        assert_eq!(sg(0), 0);
        assert_eq!(sg(-5), 0);
    }

    #[test]
    fn comparator_is_strict_win() {
        for p in -6..=6 {
            for q in -6..=6 {
                assert_eq!(sg(monus(p, q)) == 1, p > q);
            }
        }
    }

    #[test]
    fn uniform_expectations() {
        let u = theorem1_universe();
        let d = SequenceDistribution::uniform(&u);
        let (a, b) = (algorithm_a(), algorithm_b());
        assert_eq!(expected_wins(&a, &b, &u, &d, 100).unwrap(), ratio(64, 1));
        assert_eq!(expected_wins(&b, &a, &u, &d, 25).unwrap(), ratio(8, 1));
        assert_eq!(expected_wins(&a, &a, &u, &d, 7).unwrap(), ratio(0, 1));
        assert_eq!(expected_wins(&a, &b, &u, &d, 1).unwrap(), ratio(16, 25));
        assert!(expected_wins(&a, &b, &u, &d, 0).is_err());
    }

    #[test]
    fn weighted_distribution() {
        let u = theorem1_universe();
        // all mass on the lone all-zero pattern: every recognizer ties there
        let zero: Pattern = "000000000".parse().unwrap();
        let d = SequenceDistribution::from_weights(&u, &[(zero, 1.0)]).unwrap();
        let (a, b) = (algorithm_a(), algorithm_b());
        assert!(expected_wins(&a, &b, &u, &d, 10).unwrap().is_zero());

        // half on an a0 pattern (A wins), half on an a2 pattern (B wins)
        let x0 = u.images()[0].patterns[0];
        let x2 = u.images()[2].patterns[0];
        let d = SequenceDistribution::from_weights(&u, &[(x0, 0.5), (x2, 0.5)]).unwrap();
        assert_eq!(expected_wins(&a, &b, &u, &d, 10).unwrap(), ratio(5, 1));
        let one = expected_wins(&a, &b, &u, &d, 1).unwrap();
        let many = expected_wins(&a, &b, &u, &d, 37).unwrap();
        assert_eq!(many, one * ratio(37, 1));
    }

    #[test]
    fn invalid_distributions() {
        let u = theorem1_universe();
        let x = u.patterns()[0];
        assert!(SequenceDistribution::from_weights(&u, &[(x, 0.5)]).is_err());
        assert!(
            SequenceDistribution::from_weights(&u, &[(x, -1.0), (u.patterns()[1], 2.0)]).is_err()
        );
        let outside: Pattern = "111111111".parse().unwrap();
        assert!(SequenceDistribution::from_weights(&u, &[(outside, 1.0)]).is_err());
        let y = u.patterns()[1];
        let varying = vec![vec![(x, 1.0)], vec![(y, 1.0)]];
        assert!(SequenceDistribution::from_step_weights(&u, &varying).is_err());
        let steady = vec![vec![(x, 1.0)], vec![(x, 1.0)]];
        assert!(SequenceDistribution::from_step_weights(&u, &steady).is_ok());
    }

    #[test]
    fn simulation_is_deterministic_and_near_exact() {
        let u = theorem1_universe();
        let d = SequenceDistribution::uniform(&u);
        let (a, b) = (algorithm_a(), algorithm_b());
        let r1 = simulate(&a, &b, &u, &d, 10_000, 1, 42).unwrap();
        let r2 = simulate(&a, &b, &u, &d, 10_000, 1, 42).unwrap();
        assert_eq!(r1, r2);
        assert!((r1.empirical_win_fraction - 0.64).abs() <= 0.0144);
        assert_eq!(r1.exact_expectation, "6400");
        assert!((r1.exact_win_fraction - 0.64).abs() < 1e-15);

        let same = simulate(&a, &a, &u, &d, 50, 3, 1).unwrap();
        assert_eq!(same.empirical_win_fraction, 0.0);
        assert!(simulate(&a, &b, &u, &d, 10, 0, 1).is_err());
    }
}
