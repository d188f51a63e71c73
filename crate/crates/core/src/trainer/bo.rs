//! Bayesian optimization of the nine weights over their box.
//!
//! All work happens in the unit cube (see [`ThetaParams::to_unit`]). The
//! initial design is a Latin hypercube; each further point maximizes expected
//! improvement under a GP fitted to every evaluation so far.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::gp::{expected_improvement, GaussianProcess, Kernel};
use crate::error::{Error, Result};
use crate::graph::ThetaParams;

const DIM: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Acquisition {
    #[default]
    ExpectedImprovement,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BoConfig {
    pub n_initial: usize,
    pub n_iterations: usize,
    pub kernel: Kernel,
    pub length_scale: f64,
    pub noise: f64,
    pub acquisition: Acquisition,
    /// Local-search starts when maximizing the acquisition.
    pub acq_restarts: usize,
    /// Random candidates scored before choosing the starts.
    pub acq_samples: usize,
    pub seed: u64,
}

impl Default for BoConfig {
    fn default() -> Self {
        BoConfig {
            n_initial: 10,
            n_iterations: 50,
            kernel: Kernel::Matern52,
            length_scale: 0.3,
            noise: 1e-4,
            acquisition: Acquisition::ExpectedImprovement,
            acq_restarts: 5,
            acq_samples: 1000,
            seed: 0,
        }
    }
}

impl BoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_initial < 2 {
            return Err(Error::Config("n_initial must be at least 2".into()));
        }
        if self.acq_restarts == 0 {
            return Err(Error::Config("acq_restarts must be positive".into()));
        }
        if !(self.length_scale > 0.0) || !(self.noise >= 0.0) {
            return Err(Error::Config("length_scale must be positive and noise nonnegative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    #[serde(flatten)]
    pub theta: ThetaParams,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoTrace {
    pub evaluations: Vec<Evaluation>,
    /// First evaluation reaching the maximum.
    pub best: Option<Evaluation>,
}

impl BoTrace {
    pub fn new() -> Self {
        BoTrace {
            evaluations: Vec::new(),
            best: None,
        }
    }

    pub fn push(&mut self, eval: Evaluation) {
        if self.best.is_none_or(|b| eval.accuracy > b.accuracy) {
            self.best = Some(eval);
        }
        self.evaluations.push(eval);
    }

    pub fn len(&self) -> usize {
        self.evaluations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.evaluations.is_empty()
    }

    /// One JSON object per evaluation: the nine parameters plus `accuracy`.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for e in &self.evaluations {
            serde_json::to_writer(&mut out, e)?;
            out.write_all(b"\n").map_err(|err| Error::io("<trace>", err))?;
        }
        Ok(())
    }
}

impl Default for BoTrace {
    fn default() -> Self {
        Self::new()
    }
}

/// `n` points in the unit cube, one per stratum in every dimension.
pub fn latin_hypercube(n: usize, rng: &mut impl Rng) -> Vec<[f64; DIM]> {
    let mut points = vec![[0.0; DIM]; n];
    for d in 0..DIM {
        let mut strata: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            strata.swap(i, rng.random_range(0..=i));
        }
        for (p, s) in points.iter_mut().zip(strata) {
            p[d] = (s as f64 + rng.random::<f64>()) / n as f64;
        }
    }
    points
}

fn random_point(rng: &mut impl Rng) -> [f64; DIM] {
    std::array::from_fn(|_| rng.random::<f64>())
}

fn proposal_rng(cfg: &BoConfig, step: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed ^ (step as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Coordinate pattern search on `f`, staying inside the unit cube.
fn polish(start: [f64; DIM], start_value: f64, f: &impl Fn(&[f64; DIM]) -> f64) -> ([f64; DIM], f64) {
    let (mut x, mut fx) = (start, start_value);
    let mut step = 0.1;
    while step >= 1e-3 {
        let mut improved = false;
        for d in 0..DIM {
            for dir in [1.0, -1.0] {
                let mut cand = x;
                cand[d] = (cand[d] + dir * step).clamp(0.0, 1.0);
                if cand[d] == x[d] {
                    continue;
                }
                let fc = f(&cand);
                if fc > fx {
                    x = cand;
                    fx = fc;
                    improved = true;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    (x, fx)
}

/// Next parameters to evaluate: the expected-improvement maximizer under a GP
/// fitted to `trace`. Deterministic in `(trace, cfg)`.
pub fn propose_next(trace: &BoTrace, cfg: &BoConfig) -> Result<ThetaParams> {
    if trace.is_empty() {
        return Err(Error::Config("cannot propose from an empty trace".into()));
    }
    let points: Vec<Vec<f64>> = trace.evaluations.iter().map(|e| e.theta.to_unit().to_vec()).collect();
    let values: Vec<f64> = trace.evaluations.iter().map(|e| e.accuracy).collect();
    let gp = GaussianProcess::fit(&points, &values, cfg.kernel, cfg.length_scale, cfg.noise)?;
    let incumbent = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let acquisition = |x: &[f64; DIM]| {
        let (m, v) = gp.predict(x);
        expected_improvement(m, v, incumbent)
    };

    let mut rng = proposal_rng(cfg, trace.len());
    let mut scored: Vec<([f64; DIM], f64)> = (0..cfg.acq_samples.max(cfg.acq_restarts))
        .map(|_| {
            let x = random_point(&mut rng);
            (x, acquisition(&x))
        })
        .collect();
    // Local perturbations of the incumbent help once EI concentrates there.
    let best_unit = trace.best.expect("nonempty trace has a best").theta.to_unit();
    for _ in 0..cfg.acq_samples / 10 {
        let x: [f64; DIM] = std::array::from_fn(|d| (best_unit[d] + 0.1 * (rng.random::<f64>() - 0.5)).clamp(0.0, 1.0));
        scored.push((x, acquisition(&x)));
    }
    scored.sort_by(|a, b| b.1.total_cmp(&a.1));

    let mut best = scored[0];
    for &(start, value) in scored.iter().take(cfg.acq_restarts) {
        let polished = polish(start, value, &acquisition);
        if polished.1 > best.1 {
            best = polished;
        }
    }
    Ok(ThetaParams::from_unit(&best.0))
}

/// Runs the full loop on an arbitrary objective with values in `[0, 1]`.
pub fn optimize<F>(mut objective: F, cfg: &BoConfig) -> Result<BoTrace>
where
    F: FnMut(&ThetaParams) -> Result<f64>,
{
    cfg.validate()?;
    let mut trace = BoTrace::new();
    let mut evaluate = |theta: ThetaParams, trace: &mut BoTrace| -> Result<()> {
        let value = objective(&theta)?;
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::Config(format!("objective value {value} outside [0, 1]")));
        }
        trace.push(Evaluation { theta, accuracy: value });
        Ok(())
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for u in latin_hypercube(cfg.n_initial, &mut rng) {
        evaluate(ThetaParams::from_unit(&u), &mut trace)?;
    }
    for _ in 0..cfg.n_iterations {
        let theta = propose_next(&trace, cfg)?;
        evaluate(theta, &mut trace)?;
    }
    Ok(trace)
}

/// Uniform random search with the same bookkeeping, as a baseline.
pub fn random_search<F>(mut objective: F, budget: usize, seed: u64) -> Result<BoTrace>
where
    F: FnMut(&ThetaParams) -> Result<f64>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trace = BoTrace::new();
    for _ in 0..budget {
        let theta = ThetaParams::from_unit(&random_point(&mut rng));
        let accuracy = objective(&theta)?;
        trace.push(Evaluation { theta, accuracy });
    }
    Ok(trace)
}
