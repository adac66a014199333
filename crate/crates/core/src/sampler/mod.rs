//! Thresholded correlated-Gaussian random graphs.
//!
//! A realization draws `omega ~ N(0, I_E)`, forms `u = Sigma^(1/2) omega`
//! with the structured matvec, and keeps edge `i` iff `u_i > x`.
//!
//! Realization `k` of a run with seed `s` uses ChaCha20 seeded from `s` with
//! stream number `k`, so every realization can be generated independently
//! and the ensemble does not depend on thread count or scheduling.

mod matvec;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

pub use matvec::{dense_cap, StructuredOperator, DENSE_CAP_ENV, DENSE_MATVEC_CAP};

use crate::algebra::{AlgebraElement, IntersectionAlgebra};
use crate::error::{Error, Result};
use crate::scheme::{Edge, SchemeDescriptor};

/// Threshold `x` with `P(N(0, variance) > x) = p`.
pub fn threshold_for_probability(p: f64, variance: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "edge probability must lie in (0, 1), got {p}"
        )));
    }
    if !(variance > 0.0 && variance.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "variance must be positive, got {variance}"
        )));
    }
    // Lower-tail quantile of p rather than upper of 1 - p, which loses
    // digits for small p.
    let z = -Normal::standard().inverse_cdf(p);
    Ok(z * variance.sqrt())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub cov: AlgebraElement,
    pub edge_probability: f64,
    pub seed: u64,
    pub realizations: usize,
}

/// One thresholded realization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSample {
    pub scheme: String,
    pub n: usize,
    pub index: usize,
    pub seed: u64,
    /// Presence bit per enumerated edge.
    pub present: Vec<bool>,
}

impl GraphSample {
    pub fn empty(scheme: &SchemeDescriptor) -> Self {
        GraphSample {
            scheme: scheme.name().to_string(),
            n: scheme.n(),
            index: 0,
            seed: 0,
            present: vec![false; scheme.edge_count()],
        }
    }

    pub fn from_present(scheme: &SchemeDescriptor, present: Vec<bool>) -> Result<Self> {
        if present.len() != scheme.edge_count() {
            return Err(Error::LengthMismatch {
                expected: scheme.edge_count(),
                found: present.len(),
            });
        }
        Ok(GraphSample {
            present,
            ..GraphSample::empty(scheme)
        })
    }

    pub fn present_count(&self) -> usize {
        self.present.iter().filter(|&&b| b).count()
    }

    /// Positions of present edges.
    pub fn present_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.present.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn present_edges<'a>(&'a self, scheme: &'a SchemeDescriptor) -> impl Iterator<Item = Edge> + 'a {
        let edges = scheme.edges();
        self.present_indices().map(move |i| edges[i])
    }
}

/// A validated sampling setup: square root and threshold computed once.
#[derive(Clone, Debug)]
pub struct Sampler {
    scheme: SchemeDescriptor,
    config: SamplerConfig,
    beta: AlgebraElement,
    threshold: f64,
    operator: StructuredOperator,
}

impl Sampler {
    pub fn new(algebra: &IntersectionAlgebra, config: SamplerConfig) -> Result<Self> {
        algebra.check_element(&config.cov)?;
        let scheme = algebra.scheme().clone();
        let variance = config.cov.coeff(scheme.reference_identity());
        let threshold = threshold_for_probability(config.edge_probability, variance)?;
        let beta = algebra.sqrt_in_algebra(&config.cov)?;
        let operator = StructuredOperator::new(&scheme)?;
        Ok(Sampler {
            scheme,
            config,
            beta,
            threshold,
            operator,
        })
    }

    pub fn scheme(&self) -> &SchemeDescriptor {
        &self.scheme
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.config
    }

    /// Coefficients of `Sigma^(1/2)`.
    pub fn sqrt_element(&self) -> &AlgebraElement {
        &self.beta
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// The pre-threshold Gaussian field `u` of realization `index`.
    pub fn gaussian_field(&self, index: usize) -> Vec<f64> {
        let e = self.scheme.edge_count();
        let mut rng = ChaCha20Rng::seed_from_u64(self.config.seed);
        rng.set_stream(index as u64);
        let omega: Vec<f64> = (0..e).map(|_| StandardNormal.sample(&mut rng)).collect();
        self.operator
            .apply(&self.beta.coeffs, &omega)
            .expect("operator built for this scheme")
    }

    pub fn sample(&self, index: usize) -> GraphSample {
        let u = self.gaussian_field(index);
        GraphSample {
            scheme: self.scheme.name().to_string(),
            n: self.scheme.n(),
            index,
            seed: self.config.seed,
            present: u.iter().map(|&x| x > self.threshold).collect(),
        }
    }

    /// Realizations `0..config.realizations` in index order. `threads == 0`
    /// uses rayon's default pool.
    pub fn sample_ensemble(&self, threads: usize) -> Result<Vec<GraphSample>> {
        let count = self.config.realizations;
        in_pool(threads, || Ok((0..count).into_par_iter().map(|i| self.sample(i)).collect()))
    }

    /// Generates every realization and hands it to `f` on the worker that
    /// produced it, without holding the ensemble in memory. Stops at the
    /// first error.
    pub fn try_for_each_realization<F>(&self, threads: usize, f: F) -> Result<()>
    where
        F: Fn(GraphSample) -> Result<()> + Sync,
    {
        let count = self.config.realizations;
        in_pool(threads, || (0..count).into_par_iter().try_for_each(|i| f(self.sample(i))))
    }
}

fn in_pool<T: Send>(threads: usize, run: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    if threads == 0 {
        return run();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot build thread pool: {e}")))?;
    pool.install(run)
}

/// Convenience wrapper: one realization from a config.
pub fn sample_graph(
    algebra: &IntersectionAlgebra,
    config: &SamplerConfig,
    index: usize,
) -> Result<GraphSample> {
    Ok(Sampler::new(algebra, config.clone())?.sample(index))
}

pub fn sample_ensemble(
    algebra: &IntersectionAlgebra,
    config: &SamplerConfig,
    threads: usize,
) -> Result<Vec<GraphSample>> {
    Sampler::new(algebra, config.clone())?.sample_ensemble(threads)
}
