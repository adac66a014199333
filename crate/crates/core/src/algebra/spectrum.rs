use nalgebra::DMatrix;
use serde::Serialize;

use super::{AlgebraElement, IntersectionAlgebra};
use crate::error::{Error, Result};
use crate::scheme::{johnson, nz, SchemeKind};

/// Largest E for which multiplicities are read off a dense eigendecomposition.
pub const MULTIPLICITY_EDGE_CAP: usize = 1000;

/// Relative tolerance for merging numerically coincident eigenvalues.
const MERGE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralEntry {
    pub value: f64,
    /// Multiplicity as an eigenvalue of the lifted E x E matrix.
    pub multiplicity: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralSummary {
    /// Distinct eigenvalues in ascending order.
    pub entries: Vec<SpectralEntry>,
    pub positive_definite: bool,
    /// No eigenvalue below `-1e-12 * max(1, max|alpha|)`; the square root
    /// accepts exactly these elements.
    pub admissible: bool,
}

impl SpectralSummary {
    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.value).collect()
    }

    pub fn distinct_count(&self) -> usize {
        self.entries.len()
    }

    pub fn min(&self) -> f64 {
        self.entries.first().map_or(f64::NAN, |e| e.value)
    }

    pub fn multiplicities(&self) -> Option<Vec<usize>> {
        self.entries.iter().map(|e| e.multiplicity).collect()
    }

    fn from_labelled(pairs: &[(f64, usize)], margin: f64) -> Self {
        let mut sorted = pairs.to_vec();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let scale = sorted.iter().fold(1.0f64, |m, p| m.max(p.0.abs()));
        let mut entries: Vec<SpectralEntry> = Vec::new();
        for (value, mult) in sorted {
            match entries.last_mut() {
                Some(last) if (value - last.value).abs() <= MERGE_TOL * scale => {
                    last.multiplicity = last.multiplicity.map(|m| m + mult);
                }
                _ => entries.push(SpectralEntry {
                    value,
                    multiplicity: Some(mult),
                }),
            }
        }
        let positive_definite = entries.iter().all(|e| e.value > margin);
        let admissible = entries.iter().all(|e| e.value >= -margin);
        SpectralSummary {
            entries,
            positive_definite,
            admissible,
        }
    }
}

pub(crate) fn pd_margin(coeffs: &[f64]) -> f64 {
    1e-12 * coeffs.iter().fold(1.0f64, |m, c| m.max(c.abs()))
}

/// Sorts and merges eigenvalues within the relative merge tolerance.
pub(crate) fn cluster(values: &[f64]) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let scale = sorted.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut out: Vec<(f64, usize)> = Vec::new();
    for v in sorted {
        match out.last_mut() {
            Some((mean, count)) if (v - *mean).abs() <= MERGE_TOL * scale => {
                *mean = (*mean * *count as f64 + v) / (*count + 1) as f64;
                *count += 1;
            }
            _ => out.push((v, 1)),
        }
    }
    out.into_iter().map(|(v, _)| v).collect()
}

impl IntersectionAlgebra {
    /// `W^(1/2) rho(a) W^(-1/2)` with `W` the relation pair counts; symmetric
    /// whenever `a` is, because left multiplication by a symmetric matrix is
    /// self-adjoint for the Frobenius inner product, in which the relation
    /// matrices are orthogonal with squared norms `W`.
    pub(crate) fn symmetrized_rho(&self, coeffs: &[f64]) -> DMatrix<f64> {
        let m = self.rho_of(coeffs);
        let w = self.weights();
        let s = self.dimension();
        let sym = DMatrix::from_fn(s, s, |p, q| m[(p, q)] * (w[p] / w[q]).sqrt());
        (&sym + sym.transpose()) * 0.5
    }

    /// Eigenvalues of `a` computed from its `(d+1) x (d+1)` image.
    pub fn spectrum_via_rho(&self, a: &AlgebraElement) -> Result<SpectralSummary> {
        self.check_element(a)?;
        let symmetric = self.is_symmetric(a);
        let raw: Vec<f64> = if symmetric {
            self.symmetrized_rho(&a.coeffs)
                .symmetric_eigenvalues()
                .iter()
                .copied()
                .collect()
        } else {
            let m = self.rho_of(&a.coeffs);
            let scale = m.amax().max(1.0);
            let complex = m.complex_eigenvalues();
            if let Some(z) = complex.iter().find(|z| z.im.abs() > 1e-9 * scale) {
                return Err(Error::Numerical(format!(
                    "element has complex eigenvalue {} + {}i",
                    z.re, z.im
                )));
            }
            complex.iter().map(|z| z.re).collect()
        };
        let values = cluster(&raw);
        let margin = pd_margin(&a.coeffs);
        let multiplicities = if symmetric && self.scheme().edge_count() <= MULTIPLICITY_EDGE_CAP {
            self.dense_multiplicities(a, &values)?
        } else {
            None
        };
        let entries = values
            .iter()
            .enumerate()
            .map(|(i, &value)| SpectralEntry {
                value,
                multiplicity: multiplicities.as_ref().map(|m| m[i]),
            })
            .collect();
        Ok(SpectralSummary {
            entries,
            positive_definite: values.iter().all(|&v| v > margin),
            admissible: values.iter().all(|&v| v >= -margin),
        })
    }

    /// Counts the dense eigenvalues nearest each clustered value; `None` if
    /// any dense eigenvalue is not close to one of them.
    fn dense_multiplicities(&self, a: &AlgebraElement, values: &[f64]) -> Result<Option<Vec<usize>>> {
        let dense = self.scheme().dense_combination_with_cap(&a.coeffs, MULTIPLICITY_EDGE_CAP)?;
        let eig = dense.symmetric_eigenvalues();
        let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let mut counts = vec![0usize; values.len()];
        for &lambda in eig.iter() {
            let (best, dist) = values
                .iter()
                .enumerate()
                .map(|(i, v)| (i, (v - lambda).abs()))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .expect("non-empty spectrum");
            if dist > 1e-7 * scale {
                log::warn!("dense eigenvalue {lambda} not matched by the algebra spectrum");
                return Ok(None);
            }
            counts[best] += 1;
        }
        Ok(Some(counts))
    }
}

/// The five closed-form Nykamp-Zhao eigenvalues, in the order
/// `lambda1..lambda5` with multiplicities
/// `1, (N-1)(N-2)/2, N(N-3)/2, N-1, N-1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NzEigenvalues {
    pub lambda: [f64; 5],
    pub tau: f64,
}

impl NzEigenvalues {
    pub fn multiplicities(n: usize) -> [usize; 5] {
        [1, (n - 1) * (n - 2) / 2, n * (n - 3) / 2, n - 1, n - 1]
    }
}

/// Closed-form eigenvalues of a symmetric Nykamp-Zhao element given by its
/// coefficient vector (the `chain` coefficient is used for `anti` too).
pub fn nz_eigenvalues(coeffs: &[f64], n: usize) -> NzEigenvalues {
    let c = |k: crate::scheme::RelationId| coeffs[k.0];
    let nf = n as f64;
    let (a0, recip, div, chain, conv, disj) = (
        c(nz::ID),
        c(nz::RECIP),
        c(nz::DIV),
        c(nz::CHAIN),
        c(nz::CONV),
        c(nz::DISJ),
    );
    let l1 = a0 + recip + (nf - 2.0) * (conv + div + 2.0 * chain) + (nf - 2.0) * (nf - 3.0) * disj;
    let l2 = a0 - recip - conv + 2.0 * chain - div;
    let l3 = a0 + recip - conv - 2.0 * chain - div + 2.0 * disj;
    let tau_sq = nf * (nf - 2.0) * (conv - div).powi(2)
        + (conv + div - 2.0 * (nf - 3.0) * (chain - disj) - 2.0 * recip).powi(2);
    let tau = tau_sq.sqrt();
    let mid = a0 + (nf - 3.0) / 2.0 * (conv + div) - chain - (nf - 3.0) * disj;
    NzEigenvalues {
        lambda: [l1, l2, l3, mid + tau / 2.0, mid - tau / 2.0],
        tau,
    }
}

/// Johnson eigenvalues `lambda0, lambda1, lambda2` with multiplicities
/// `1, N-1, N(N-3)/2`.
pub fn johnson_eigenvalues(coeffs: &[f64], n: usize) -> [f64; 3] {
    let nf = n as f64;
    let (a0, a1, a2) = (coeffs[johnson::ID.0], coeffs[johnson::ADJ.0], coeffs[johnson::DISJ.0]);
    let c2 = (nf - 2.0) * (nf - 3.0) / 2.0;
    [
        a0 + 2.0 * (nf - 2.0) * a1 + c2 * a2,
        a0 + (nf - 4.0) * a1 - (nf - 3.0) * a2,
        a0 - 2.0 * a1 + a2,
    ]
}

fn require_kind(a: &AlgebraElement, kind: SchemeKind) -> Result<()> {
    if a.scheme != kind.name() {
        return Err(Error::SchemeMismatch {
            expected: kind.name().to_string(),
            found: a.scheme.clone(),
        });
    }
    if a.n < kind.min_vertices() {
        return Err(Error::TooFewVertices {
            scheme: kind,
            minimum: kind.min_vertices(),
            n: a.n,
        });
    }
    let expected = if kind == SchemeKind::Johnson { 3 } else { 7 };
    if a.coeffs.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            found: a.coeffs.len(),
        });
    }
    Ok(())
}

pub fn eigenvalues_closed_form_nz(a: &AlgebraElement) -> Result<SpectralSummary> {
    require_kind(a, SchemeKind::NykampZhao)?;
    let (chain, anti) = (a.coeff(nz::CHAIN), a.coeff(nz::ANTI));
    if (chain - anti).abs() > 1e-12 * a.max_abs().max(1.0) {
        return Err(Error::NotSymmetric {
            relation: "chain".into(),
            adjoint: "anti".into(),
        });
    }
    let ev = nz_eigenvalues(&a.coeffs, a.n);
    let mult = NzEigenvalues::multiplicities(a.n);
    let pairs: Vec<(f64, usize)> = ev.lambda.iter().copied().zip(mult).collect();
    Ok(SpectralSummary::from_labelled(&pairs, pd_margin(&a.coeffs)))
}

pub fn eigenvalues_closed_form_johnson(a: &AlgebraElement) -> Result<SpectralSummary> {
    require_kind(a, SchemeKind::Johnson)?;
    let n = a.n;
    let ev = johnson_eigenvalues(&a.coeffs, n);
    let pairs = [(ev[0], 1), (ev[1], n - 1), (ev[2], n * (n - 3) / 2)];
    Ok(SpectralSummary::from_labelled(&pairs, pd_margin(&a.coeffs)))
}
