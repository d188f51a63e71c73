//! Gaussian-process regression with a constant prior mean.
//!
//! Observed values are standardized (prior mean = their mean, prior variance
//! = their variance, or 1 when they are all equal), so the posterior falls
//! back to the sample mean and variance far from the data.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Diagonal jitter added on top of the configured noise.
const JITTER: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    SquaredExponential,
    #[default]
    Matern52,
}

impl Kernel {
    /// Unit-variance correlation at distance `r`.
    pub fn correlation(&self, r: f64, length_scale: f64) -> f64 {
        let s = r / length_scale;
        match self {
            Kernel::SquaredExponential => (-0.5 * s * s).exp(),
            Kernel::Matern52 => {
                let a = 5f64.sqrt() * s;
                (1.0 + a + a * a / 3.0) * (-a).exp()
            }
        }
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

#[derive(Debug, Clone)]
pub struct GaussianProcess {
    points: Vec<Vec<f64>>,
    kernel: Kernel,
    length_scale: f64,
    mean: f64,
    scale: f64,
    chol: nalgebra::Cholesky<f64, nalgebra::Dyn>,
    alpha: DVector<f64>,
}

impl GaussianProcess {
    pub fn fit(points: &[Vec<f64>], values: &[f64], kernel: Kernel, length_scale: f64, noise: f64) -> Result<Self> {
        let n = points.len();
        if n == 0 || n != values.len() {
            return Err(Error::Config("GP needs matching, nonempty points and values".into()));
        }
        if !(length_scale > 0.0) || !(noise >= 0.0) {
            return Err(Error::Config(format!("invalid GP settings: length_scale={length_scale}, noise={noise}")));
        }
        if noise == 0.0 {
            for i in 0..n {
                for j in (i + 1)..n {
                    if distance(&points[i], &points[j]) == 0.0 && values[i] != values[j] {
                        return Err(Error::SingularKernel(format!(
                            "points {i} and {j} coincide with different values and zero noise"
                        )));
                    }
                }
            }
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
        let scale = if var > 1e-24 { var.sqrt() } else { 1.0 };

        let k = DMatrix::from_fn(n, n, |i, j| {
            let c = kernel.correlation(distance(&points[i], &points[j]), length_scale);
            if i == j {
                c + noise + JITTER
            } else {
                c
            }
        });
        let chol = k
            .cholesky()
            .ok_or_else(|| Error::SingularKernel("kernel matrix is not positive definite".into()))?;
        let centered = DVector::from_iterator(n, values.iter().map(|v| (v - mean) / scale));
        let alpha = chol.solve(&centered);
        Ok(GaussianProcess {
            points: points.to_vec(),
            kernel,
            length_scale,
            mean,
            scale,
            chol,
            alpha,
        })
    }

    /// Posterior mean and variance of the latent function at `x`.
    pub fn predict(&self, x: &[f64]) -> (f64, f64) {
        let kx = DVector::from_iterator(
            self.points.len(),
            self.points
                .iter()
                .map(|p| self.kernel.correlation(distance(p, x), self.length_scale)),
        );
        let mean = self.mean + self.scale * kx.dot(&self.alpha);
        let mut v = kx.clone();
        self.chol.l_dirty().solve_lower_triangular_mut(&mut v);
        let reduced = (1.0 - v.norm_squared()).max(0.0);
        (mean, reduced * self.scale * self.scale)
    }

    pub fn prior_mean(&self) -> f64 {
        self.mean
    }

    pub fn prior_variance(&self) -> f64 {
        self.scale * self.scale
    }
}

/// Fits a GP to `observations` and predicts at `query`.
pub fn gp_fit_predict(
    observations: &[(Vec<f64>, f64)],
    query: &[f64],
    kernel: Kernel,
    length_scale: f64,
    noise: f64,
) -> Result<(f64, f64)> {
    let points: Vec<Vec<f64>> = observations.iter().map(|(p, _)| p.clone()).collect();
    let values: Vec<f64> = observations.iter().map(|(_, v)| *v).collect();
    Ok(GaussianProcess::fit(&points, &values, kernel, length_scale, noise)?.predict(query))
}

/// Expected improvement over `best` for a Gaussian with the given mean and
/// variance.
pub fn expected_improvement(mean: f64, variance: f64, best: f64) -> f64 {
    use statrs::function::erf::erfc;
    let sigma = variance.max(0.0).sqrt();
    let gap = mean - best;
    if sigma < 1e-12 {
        return gap.max(0.0);
    }
    let z = gap / sigma;
    let cdf = 0.5 * erfc(-z / std::f64::consts::SQRT_2);
    let pdf = (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
    (gap * cdf + sigma * pdf).max(0.0)
}
