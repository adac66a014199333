use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use serde::Serialize;

use super::spectrum::{cluster, johnson_eigenvalues, pd_margin};
use super::{AlgebraElement, IntersectionAlgebra};
use crate::error::{Error, Result};
use crate::scheme::{RelationId, SchemeKind};

/// Conditioning limit on the eigenvector matrix before falling back to Newton.
const COND_LIMIT: f64 = 1e8;
const NEWTON_MAX_STEPS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SqrtMethod {
    /// Eigendecomposition of the intersection matrix, Gram pull-back.
    Eigen,
    /// Newton iteration on `beta * beta = alpha`.
    Newton,
}

#[derive(Clone, Debug, Serialize)]
pub struct SqrtReport {
    pub beta: AlgebraElement,
    pub method: SqrtMethod,
    /// Max-norm of `beta * beta - alpha` over coefficients.
    pub residual: f64,
    pub newton_steps: usize,
}

impl IntersectionAlgebra {
    /// Principal square root of a symmetric positive semidefinite element,
    /// computed entirely in the `(d+1)`-dimensional algebra.
    pub fn sqrt_in_algebra(&self, cov: &AlgebraElement) -> Result<AlgebraElement> {
        self.sqrt_with_report(cov).map(|r| r.beta)
    }

    pub fn sqrt_with_report(&self, cov: &AlgebraElement) -> Result<SqrtReport> {
        self.require_symmetric(cov)?;
        let alpha = &cov.coeffs;
        let s = self.dimension();
        let eig = self.symmetrized_rho(alpha).symmetric_eigen();
        let margin = pd_margin(alpha);
        let offending: Vec<f64> = eig.eigenvalues.iter().copied().filter(|&l| l < -margin).collect();
        if !offending.is_empty() {
            return Err(Error::NotAdmissible(cluster(&offending)));
        }

        // Supported on identity relations only: the root is elementwise.
        let identities = self.scheme().identity_relations();
        let diagonal = alpha
            .iter()
            .enumerate()
            .all(|(k, &c)| c == 0.0 || identities.contains(&RelationId(k)));
        if diagonal {
            let beta = self.element(alpha.iter().map(|c| c.max(0.0).sqrt()).collect())?;
            let residual = self.residual(&beta.coeffs, alpha);
            return Ok(SqrtReport {
                beta,
                method: SqrtMethod::Eigen,
                residual,
                newton_steps: 0,
            });
        }

        let w = self.weights();
        let (wmin, wmax) = w
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        let cond = (wmax / wmin).sqrt();
        let (beta, method) = if cond <= COND_LIMIT {
            // rho(cov) = U L U^-1 with U = W^(-1/2) Q.
            let q = &eig.eigenvectors;
            let root = DVector::from_iterator(s, eig.eigenvalues.iter().map(|l| l.max(0.0).sqrt()));
            let half = q * DMatrix::from_diagonal(&root) * q.transpose();
            let varsigma = DMatrix::from_fn(s, s, |p, r| half[(p, r)] * (w[r] / w[p]).sqrt());
            (self.gram_solve(&varsigma)?.as_slice().to_vec(), SqrtMethod::Eigen)
        } else {
            log::warn!("eigenvector conditioning {cond:.3e} too large, using Newton iteration");
            (self.newton_start(alpha), SqrtMethod::Newton)
        };

        let limit = if method == SqrtMethod::Eigen { 3 } else { NEWTON_MAX_STEPS };
        let (beta, steps) = self.newton_polish(beta, alpha, limit);
        let beta = self.symmetrize(&beta);
        let residual = self.residual(&beta, alpha);
        if method == SqrtMethod::Newton {
            let tol = 1e-9 * alpha.iter().fold(1.0f64, |m, c| m.max(c.abs()));
            if residual > tol {
                return Err(Error::Numerical(format!(
                    "Newton iteration did not converge (residual {residual:.3e})"
                )));
            }
            let min = self
                .symmetrized_rho(&beta)
                .symmetric_eigenvalues()
                .min();
            if min < -1e-8 {
                return Err(Error::Numerical(
                    "Newton iteration converged to a non-principal root".into(),
                ));
            }
        }
        Ok(SqrtReport {
            beta: self.element(beta)?,
            method,
            residual,
            newton_steps: steps,
        })
    }

    fn symmetrize(&self, beta: &[f64]) -> Vec<f64> {
        (0..beta.len())
            .map(|k| 0.5 * (beta[k] + beta[self.scheme().adjoint(RelationId(k)).0]))
            .collect()
    }

    fn residual(&self, beta: &[f64], alpha: &[f64]) -> f64 {
        self.product(beta, beta)
            .iter()
            .zip(alpha)
            .fold(0.0f64, |m, (p, a)| m.max((p - a).abs()))
    }

    /// Identity coefficients start at their square roots; every other
    /// coefficient at `alpha_k / (sqrt(a_src) + sqrt(a_tgt))`, the first-order
    /// term of the expansion about the diagonal.
    fn newton_start(&self, alpha: &[f64]) -> Vec<f64> {
        (0..alpha.len())
            .map(|k| {
                let id = RelationId(k);
                let (src, tgt) = (self.source_identity(id).0, self.target_identity(id).0);
                if src == k {
                    alpha[k].max(0.0).sqrt()
                } else {
                    let denom = alpha[src].max(0.0).sqrt() + alpha[tgt].max(0.0).sqrt();
                    if denom > 0.0 {
                        alpha[k] / denom
                    } else {
                        0.0
                    }
                }
            })
            .collect()
    }

    /// Newton steps on `F(beta) = beta * beta - alpha` with Jacobian
    /// `rho(beta) + B`, `B[i][k] = sum_j beta_j rho[k][i][j]`. A step is kept
    /// only if it lowers the residual.
    fn newton_polish(&self, mut beta: Vec<f64>, alpha: &[f64], max_steps: usize) -> (Vec<f64>, usize) {
        let s = self.dimension();
        let rho = self.structure_constants();
        let scale = alpha.iter().fold(1.0f64, |m, c| m.max(c.abs()));
        let mut res = self.residual(&beta, alpha);
        let mut steps = 0;
        while steps < max_steps && res > 1e-15 * scale {
            let f = DVector::from_iterator(
                s,
                self.product(&beta, &beta).iter().zip(alpha).map(|(p, a)| p - a),
            );
            let mut jac = self.rho_of(&beta);
            for i in 0..s {
                for k in 0..s {
                    let mut acc = 0.0;
                    for (j, &bj) in beta.iter().enumerate() {
                        acc += rho.get(k, i, j) as f64 * bj;
                    }
                    jac[(i, k)] += acc;
                }
            }
            let Ok(delta) = jac.svd(true, true).solve(&f, 1e-14 * scale) else {
                break;
            };
            let candidate: Vec<f64> = beta.iter().zip(delta.iter()).map(|(b, d)| b - d).collect();
            let next = self.residual(&candidate, alpha);
            steps += 1;
            if !(next < res) {
                break;
            }
            beta = candidate;
            res = next;
        }
        (beta, steps)
    }
}

/// Solves the Johnson square-root system directly: the eigenvalues of the
/// root are `signs[i] * sqrt(lambda_i)` and the coefficients follow from the
/// 3x3 eigenvalue map. `signs` entries must be `1` or `-1`.
pub fn johnson_sqrt_closed_form(
    alpha1: f64,
    alpha2: f64,
    alpha0: f64,
    n: usize,
    signs: [i8; 3],
) -> Result<AlgebraElement> {
    if n < SchemeKind::Johnson.min_vertices() {
        return Err(Error::TooFewVertices {
            scheme: SchemeKind::Johnson,
            minimum: SchemeKind::Johnson.min_vertices(),
            n,
        });
    }
    if signs.iter().any(|s| s.abs() != 1) {
        return Err(Error::InvalidArgument(format!("signs must be +1 or -1, got {signs:?}")));
    }
    let coeffs = [alpha0, alpha1, alpha2];
    let lambda = johnson_eigenvalues(&coeffs, n);
    let margin = pd_margin(&coeffs);
    let negative: Vec<f64> = lambda.iter().copied().filter(|&l| l < -margin).collect();
    if !negative.is_empty() {
        return Err(Error::NotAdmissible(negative));
    }
    let nf = n as f64;
    let m = Matrix3::new(
        1.0,
        2.0 * (nf - 2.0),
        (nf - 2.0) * (nf - 3.0) / 2.0,
        1.0,
        nf - 4.0,
        -(nf - 3.0),
        1.0,
        -2.0,
        1.0,
    );
    let rhs = Vector3::from_fn(|i, _| f64::from(signs[i]) * lambda[i].max(0.0).sqrt());
    let beta = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("eigenvalue map is singular".into()))?;
    Ok(AlgebraElement {
        scheme: SchemeKind::Johnson.name().to_string(),
        n,
        coeffs: beta.as_slice().to_vec(),
    })
}
