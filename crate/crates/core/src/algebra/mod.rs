//! The intersection algebra of a scheme: the span of its relation matrices,
//! represented faithfully by `(d+1) x (d+1)` intersection matrices.

mod spectrum;
mod sqrt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

pub use spectrum::{
    eigenvalues_closed_form_johnson, eigenvalues_closed_form_nz, johnson_eigenvalues,
    nz_eigenvalues, NzEigenvalues, SpectralEntry, SpectralSummary, MULTIPLICITY_EDGE_CAP,
};
pub use sqrt::{johnson_sqrt_closed_form, SqrtMethod, SqrtReport};

use crate::error::{Error, Result};
use crate::scheme::{
    closed_form, compute_structure_constants, compute_structure_constants_validated, dv,
    johnson, nz, verify_axioms, RelationId, SchemeDescriptor, SchemeKind, StructureConstants,
};

/// An element `sum_k coeffs[k] R^(k)` of the algebra of a particular scheme.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraElement {
    pub scheme: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub coeffs: Vec<f64>,
}

impl AlgebraElement {
    pub fn coeff(&self, k: RelationId) -> f64 {
        self.coeffs[k.0]
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// `sum_k alpha_k rho^(k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionMatrix(pub DMatrix<f64>);

/// `G[i][j] = tr(rho^(i)^T rho^(j))`, kept in exact integers alongside the
/// floating-point copy used for solves.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    pub exact: Vec<Vec<i128>>,
    pub matrix: DMatrix<f64>,
}

#[derive(Clone, Debug)]
pub struct IntersectionAlgebra {
    scheme: SchemeDescriptor,
    rho: StructureConstants,
    rho_mats: Vec<DMatrix<f64>>,
    gram: GramMatrix,
    unit: Vec<f64>,
    source: Vec<usize>,
    target: Vec<usize>,
    valency: Vec<u64>,
    /// Pair counts |R^(k)| up to a common factor.
    weights: Vec<f64>,
}

impl IntersectionAlgebra {
    /// Builds the algebra of `scheme`. Johnson and Nykamp-Zhao constants come
    /// from closed forms, other built-ins are brute-forced, and custom schemes
    /// are checked against the axioms first.
    pub fn new(scheme: &SchemeDescriptor) -> Result<Self> {
        let rho = match scheme.kind() {
            SchemeKind::Custom => {
                let report = verify_axioms(scheme)?;
                if !report.is_coherent() {
                    return Err(Error::Axioms(report.failures().join("; ")));
                }
                compute_structure_constants_validated(scheme)?
            }
            kind => {
                scheme.require_complete()?;
                match kind {
                    SchemeKind::Johnson => closed_form::johnson(scheme.n()),
                    SchemeKind::NykampZhao => closed_form::nykamp_zhao(scheme.n()),
                    _ => compute_structure_constants(scheme)?,
                }
            }
        };
        Self::from_structure_constants(scheme.clone(), rho)
    }

    pub fn for_kind(kind: SchemeKind, n: usize) -> Result<Self> {
        Self::new(&SchemeDescriptor::new(kind, n)?)
    }

    /// Builds the algebra from precomputed constants without re-checking them.
    pub fn from_structure_constants(
        scheme: SchemeDescriptor,
        rho: StructureConstants,
    ) -> Result<Self> {
        let s = scheme.relation_count();
        if rho.size() != s {
            return Err(Error::LengthMismatch {
                expected: s,
                found: rho.size(),
            });
        }
        let rho_mats: Vec<_> = (0..s).map(|k| rho.matrix(k)).collect();
        let identities = scheme.identity_relations();
        let mut unit = vec![0.0; s];
        for e in &identities {
            unit[e.0] = 1.0;
        }
        // Source fiber e of R^(k) satisfies R^(e) R^(k) = R^(k); target fiber
        // satisfies R^(k) R^(e) = R^(k).
        let find = |k: usize, left: bool| {
            identities
                .iter()
                .map(|e| e.0)
                .find(|&e| if left { rho.get(e, k, k) == 1 } else { rho.get(k, k, e) == 1 })
                .ok_or_else(|| Error::Axioms(format!("relation {k} has no identity fiber")))
        };
        let source = (0..s).map(|k| find(k, true)).collect::<Result<Vec<_>>>()?;
        let target = (0..s).map(|k| find(k, false)).collect::<Result<Vec<_>>>()?;
        let valency: Vec<u64> = (0..s)
            .map(|k| rho.get(k, source[k], scheme.adjoint(RelationId(k)).0))
            .collect();

        // Fiber sizes up to scale: |X_a| v(a->b) = |X_b| v(b->a).
        let mut fiber_size = vec![f64::NAN; s];
        if let Some(first) = identities.first() {
            fiber_size[first.0] = 1.0;
        }
        for _ in 0..identities.len() {
            for k in 0..s {
                let (a, b) = (source[k], target[k]);
                let back = scheme.adjoint(RelationId(k)).0;
                if fiber_size[a].is_finite() && !fiber_size[b].is_finite() && valency[back] > 0 {
                    fiber_size[b] = fiber_size[a] * valency[k] as f64 / valency[back] as f64;
                }
            }
        }
        let weights: Vec<f64> = (0..s)
            .map(|k| fiber_size[source[k]] * valency[k] as f64)
            .collect();
        if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(Error::Axioms("disconnected fibers or empty relation".into()));
        }

        let mut exact = vec![vec![0i128; s]; s];
        for i in 0..s {
            for j in i..s {
                let mut sum = 0i128;
                for p in 0..s {
                    for q in 0..s {
                        sum += rho.get(i, p, q) as i128 * rho.get(j, p, q) as i128;
                    }
                }
                exact[i][j] = sum;
                exact[j][i] = sum;
            }
        }
        let matrix = DMatrix::from_fn(s, s, |i, j| exact[i][j] as f64);
        Ok(IntersectionAlgebra {
            scheme,
            rho,
            rho_mats,
            gram: GramMatrix { exact, matrix },
            unit,
            source,
            target,
            valency,
            weights,
        })
    }

    pub fn scheme(&self) -> &SchemeDescriptor {
        &self.scheme
    }

    pub fn structure_constants(&self) -> &StructureConstants {
        &self.rho
    }

    /// Dimension d+1.
    pub fn dimension(&self) -> usize {
        self.rho.size()
    }

    pub fn n(&self) -> usize {
        self.scheme.n()
    }

    /// Intersection matrix of a basis relation.
    pub fn rho_basis(&self, k: RelationId) -> &DMatrix<f64> {
        &self.rho_mats[k.0]
    }

    /// Identity fiber in which pairs of `R^(k)` start.
    pub fn source_identity(&self, k: RelationId) -> RelationId {
        RelationId(self.source[k.0])
    }

    pub fn target_identity(&self, k: RelationId) -> RelationId {
        RelationId(self.target[k.0])
    }

    /// Number of `z` with `(x, z)` in `R^(k)`, for `x` in the source fiber.
    pub fn valency(&self, k: RelationId) -> u64 {
        self.valency[k.0]
    }

    pub(crate) fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn element(&self, coeffs: Vec<f64>) -> Result<AlgebraElement> {
        if coeffs.len() != self.dimension() {
            return Err(Error::LengthMismatch {
                expected: self.dimension(),
                found: coeffs.len(),
            });
        }
        if let Some(c) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite coefficient {c}")));
        }
        Ok(AlgebraElement {
            scheme: self.scheme.name().to_string(),
            n: self.scheme.n(),
            coeffs,
        })
    }

    pub fn zero(&self) -> AlgebraElement {
        self.element(vec![0.0; self.dimension()]).expect("valid length")
    }

    pub fn basis(&self, k: RelationId) -> AlgebraElement {
        let mut c = vec![0.0; self.dimension()];
        c[k.0] = 1.0;
        self.element(c).expect("valid length")
    }

    /// The unit: the sum of the identity relations.
    pub fn identity_element(&self) -> AlgebraElement {
        self.element(self.unit.clone()).expect("valid length")
    }

    pub fn check_element(&self, a: &AlgebraElement) -> Result<()> {
        if a.scheme != self.scheme.name() || a.n != self.scheme.n() {
            return Err(Error::SchemeMismatch {
                expected: format!("{} N={}", self.scheme.name(), self.scheme.n()),
                found: format!("{} N={}", a.scheme, a.n),
            });
        }
        if a.coeffs.len() != self.dimension() {
            return Err(Error::LengthMismatch {
                expected: self.dimension(),
                found: a.coeffs.len(),
            });
        }
        Ok(())
    }

    pub fn rho_map(&self, a: &AlgebraElement) -> Result<IntersectionMatrix> {
        self.check_element(a)?;
        Ok(IntersectionMatrix(self.rho_of(&a.coeffs)))
    }

    pub(crate) fn rho_of(&self, coeffs: &[f64]) -> DMatrix<f64> {
        let s = self.dimension();
        let mut m = DMatrix::zeros(s, s);
        for (k, &c) in coeffs.iter().enumerate() {
            if c != 0.0 {
                m += &self.rho_mats[k] * c;
            }
        }
        m
    }

    /// `c_i = sum_{k,j} a_k b_j rho[k][i][j]`.
    pub fn multiply_elements(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_element(a)?;
        self.check_element(b)?;
        let c = self.product(&a.coeffs, &b.coeffs);
        self.element(c)
    }

    pub(crate) fn product(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let s = self.dimension();
        let mut c = vec![0.0; s];
        for (k, &ak) in a.iter().enumerate() {
            if ak == 0.0 {
                continue;
            }
            for (i, ci) in c.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (j, &bj) in b.iter().enumerate() {
                    acc += self.rho.get(k, i, j) as f64 * bj;
                }
                *ci += ak * acc;
            }
        }
        c
    }

    /// Element with `coeffs[k]` moved to the adjoint relation (the transpose).
    pub fn transpose(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_element(a)?;
        let mut c = vec![0.0; self.dimension()];
        for (k, &v) in a.coeffs.iter().enumerate() {
            c[self.scheme.adjoint(RelationId(k)).0] = v;
        }
        self.element(c)
    }

    pub fn is_symmetric(&self, a: &AlgebraElement) -> bool {
        self.symmetry_violation(a).is_none()
    }

    fn symmetry_violation(&self, a: &AlgebraElement) -> Option<(usize, usize)> {
        let tol = 1e-12 * a.max_abs().max(1.0);
        (0..self.dimension()).find_map(|k| {
            let adj = self.scheme.adjoint(RelationId(k)).0;
            ((a.coeffs[k] - a.coeffs[adj]).abs() > tol).then_some((k, adj))
        })
    }

    pub fn require_symmetric(&self, a: &AlgebraElement) -> Result<()> {
        self.check_element(a)?;
        match self.symmetry_violation(a) {
            None => Ok(()),
            Some((k, adj)) => Err(Error::NotSymmetric {
                relation: self.scheme.relation_name(RelationId(k)).to_string(),
                adjoint: self.scheme.relation_name(RelationId(adj)).to_string(),
            }),
        }
    }

    pub fn gram_matrix(&self) -> &GramMatrix {
        &self.gram
    }

    /// Solves `G alpha = t`, `t_i = tr(rho^(i)^T m)`, and checks that the
    /// reconstruction reproduces `m`.
    pub fn recover_coefficients(&self, m: &IntersectionMatrix) -> Result<AlgebraElement> {
        let s = self.dimension();
        if m.0.nrows() != s || m.0.ncols() != s {
            return Err(Error::LengthMismatch {
                expected: s,
                found: m.0.nrows(),
            });
        }
        let alpha = self.gram_solve(&m.0)?;
        let back = self.rho_of(alpha.as_slice());
        let norm = m.0.norm();
        let residual = (&back - &m.0).norm();
        if residual > 1e-9 * norm.max(f64::MIN_POSITIVE) {
            return Err(Error::OutOfSpan(residual / norm.max(f64::MIN_POSITIVE)));
        }
        self.element(alpha.as_slice().to_vec())
    }

    /// Least-squares projection onto the span of the `rho^(k)`, via a
    /// Jacobi-scaled Gram solve.
    pub(crate) fn gram_solve(&self, m: &DMatrix<f64>) -> Result<DVector<f64>> {
        let s = self.dimension();
        let g = &self.gram.matrix;
        let d: Vec<f64> = (0..s).map(|i| g[(i, i)].sqrt()).collect();
        let scaled = DMatrix::from_fn(s, s, |i, j| g[(i, j)] / (d[i] * d[j]));
        let rhs = DVector::from_fn(s, |i, _| self.rho_mats[i].dot(m) / d[i]);
        let chol = scaled
            .cholesky()
            .ok_or_else(|| Error::Numerical("Gram matrix is not positive definite".into()))?;
        let y = chol.solve(&rhs);
        Ok(DVector::from_fn(s, |i, _| y[i] / d[i]))
    }

    /// Row sums of the lifted matrix, one per identity fiber. The all-ones
    /// vector is an eigenvector iff these agree.
    pub fn row_sums(&self, a: &AlgebraElement) -> Result<Vec<(RelationId, f64)>> {
        self.check_element(a)?;
        Ok(self
            .scheme
            .identity_relations()
            .into_iter()
            .map(|e| {
                let sum = (0..self.dimension())
                    .filter(|&k| self.source[k] == e.0)
                    .map(|k| a.coeffs[k] * self.valency[k] as f64)
                    .sum();
                (e, sum)
            })
            .collect())
    }

    /// Replaces the disjoint coefficient(s) so that the all-ones vector is an
    /// eigenvector with eigenvalue `target`.
    pub fn balance_disjoint(&self, a: &AlgebraElement, target: f64) -> Result<AlgebraElement> {
        self.check_element(a)?;
        let mut c = a.coeffs.clone();
        let partial = |c: &[f64], fiber: RelationId, skip: &[RelationId]| -> f64 {
            (0..self.dimension())
                .filter(|&k| self.source[k] == fiber.0 && !skip.contains(&RelationId(k)))
                .map(|k| c[k] * self.valency[k] as f64)
                .sum()
        };
        match self.scheme.kind() {
            SchemeKind::NykampZhao | SchemeKind::Johnson => {
                let (id, disj) = if self.scheme.kind() == SchemeKind::Johnson {
                    (johnson::ID, johnson::DISJ)
                } else {
                    (nz::ID, nz::DISJ)
                };
                let rest = partial(&c, id, &[disj]);
                c[disj.0] = (target - rest) / self.valency[disj.0] as f64;
            }
            SchemeKind::DistinguishedVertex => {
                // The second fiber fixes the shared cross-fiber disjoint
                // coefficient, then the first fiber fixes disj11.
                let rest2 = partial(&c, dv::ID22, &[dv::DISJ21]);
                let cross = (target - rest2) / self.valency[dv::DISJ21.0] as f64;
                c[dv::DISJ21.0] = cross;
                c[dv::DISJ12.0] = cross;
                let rest1 = partial(&c, dv::ID11, &[dv::DISJ11]);
                c[dv::DISJ11.0] = (target - rest1) / self.valency[dv::DISJ11.0] as f64;
            }
            kind => {
                return Err(Error::Unsupported {
                    operation: "balance_disjoint",
                    scheme: kind,
                })
            }
        }
        self.element(c)
    }

    /// Dense `E x E` matrix of an element (bounded by the dense cap).
    pub fn lift(&self, a: &AlgebraElement) -> Result<DMatrix<f64>> {
        self.check_element(a)?;
        self.scheme.dense_combination(&a.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::compute_structure_constants;

    fn nz_alg(n: usize) -> IntersectionAlgebra {
        IntersectionAlgebra::for_kind(SchemeKind::NykampZhao, n).unwrap()
    }

    #[test]
    fn rho_of_identity_is_identity() {
        for kind in SchemeKind::BUILT_IN {
            let alg = IntersectionAlgebra::for_kind(kind, 6).unwrap();
            let m = alg.rho_map(&alg.identity_element()).unwrap();
            assert_eq!(m.0, DMatrix::identity(alg.dimension(), alg.dimension()), "{kind}");
        }
    }

    #[test]
    fn nz_disj_last_row() {
        let n = 9.0;
        let alg = nz_alg(9);
        let m = alg.rho_map(&alg.basis(nz::DISJ)).unwrap().0;
        let expected = [
            (n - 3.0) * (n - 2.0),
            (n - 3.0) * (n - 2.0),
            (n - 4.0) * (n - 3.0),
            (n - 4.0) * (n - 3.0),
            (n - 4.0) * (n - 3.0),
            (n - 4.0) * (n - 3.0),
            (n - 5.0) * (n - 4.0),
        ];
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(m[(i, 6)], *e);
        }
    }

    #[test]
    fn johnson_adj_matrix() {
        let alg = IntersectionAlgebra::for_kind(SchemeKind::Johnson, 7).unwrap();
        let m = alg.rho_map(&alg.basis(johnson::ADJ)).unwrap().0;
        // printed rows are our columns
        assert_eq!(m.column(0).as_slice(), &[0.0, 1.0, 0.0]);
        assert_eq!(m.column(1).as_slice(), &[10.0, 5.0, 4.0]);
        assert_eq!(m.column(2).as_slice(), &[0.0, 4.0, 6.0]);
    }

    #[test]
    fn chain_times_anti() {
        let alg = nz_alg(8);
        let p = alg
            .multiply_elements(&alg.basis(nz::CHAIN), &alg.basis(nz::ANTI))
            .unwrap();
        assert_eq!(p.coeffs, vec![6.0, 0.0, 0.0, 0.0, 0.0, 5.0, 0.0]);
    }

    #[test]
    fn scheme_mismatch_rejected() {
        let a = nz_alg(6);
        let b = nz_alg(7);
        let err = a.multiply_elements(&a.basis(nz::ID), &b.basis(nz::ID)).unwrap_err();
        assert!(matches!(err, Error::SchemeMismatch { .. }));
    }

    #[test]
    fn gram_entries() {
        for n in 5..=12 {
            let alg = nz_alg(n);
            let closed = closed_form::nykamp_zhao_gram(n);
            for i in 0..7 {
                for j in 0..7 {
                    assert_eq!(alg.gram_matrix().exact[i][j], closed[i][j]);
                }
            }
        }
        let alg = nz_alg(10);
        assert_eq!(alg.gram_matrix().exact[0][2], 20);
    }

    #[test]
    fn johnson_gram_is_spd() {
        let alg = IntersectionAlgebra::for_kind(SchemeKind::Johnson, 5).unwrap();
        let g = &alg.gram_matrix().matrix;
        assert_eq!(g, &g.transpose());
        assert!(g.clone().cholesky().is_some());
    }

    #[test]
    fn recover_basis_and_reject_all_ones() {
        let alg = nz_alg(6);
        let back = alg
            .recover_coefficients(&IntersectionMatrix(alg.rho_basis(nz::CHAIN).clone()))
            .unwrap();
        for (k, c) in back.coeffs.iter().enumerate() {
            let want = if k == nz::CHAIN.0 { 1.0 } else { 0.0 };
            assert!((c - want).abs() < 1e-12);
        }
        let err = alg
            .recover_coefficients(&IntersectionMatrix(DMatrix::from_element(7, 7, 1.0)))
            .unwrap_err();
        assert!(matches!(err, Error::OutOfSpan(_)));
    }

    #[test]
    fn valencies_and_fibers() {
        let alg = IntersectionAlgebra::for_kind(SchemeKind::DistinguishedVertex, 7).unwrap();
        assert_eq!(alg.valency(dv::ADJ11), 10);
        assert_eq!(alg.valency(dv::ADJ12), 2);
        assert_eq!(alg.valency(dv::ADJ21), 6);
        assert_eq!(alg.valency(dv::DISJ21), 15);
        assert_eq!(alg.source_identity(dv::ADJ21), dv::ID22);
        assert_eq!(alg.target_identity(dv::ADJ21), dv::ID11);
        // |X1| / |X2| = 21 / 7
        let w = alg.weights();
        assert!((w[dv::ID11.0] / w[dv::ID22.0] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn nz_balance_example() {
        let alg = nz_alg(100);
        let mut c = vec![0.0; 7];
        c[0] = 1.0;
        c[nz::RECIP.0] = 0.75;
        let a = alg.element(c).unwrap();
        let b = alg.balance_disjoint(&a, 0.0).unwrap();
        assert!((b.coeffs[nz::DISJ.0] + 1.75 / (98.0 * 97.0)).abs() < 1e-16);
    }

    #[test]
    fn johnson_balance_examples() {
        let alg = IntersectionAlgebra::for_kind(SchemeKind::Johnson, 100).unwrap();
        let a = alg.element(vec![1.0, 0.0, 0.3]).unwrap();
        let b = alg.balance_disjoint(&a, 1.0).unwrap();
        assert_eq!(b.coeffs[2], 0.0);
        let a = alg.element(vec![1.0, 0.2, 0.0]).unwrap();
        let b = alg.balance_disjoint(&a, 0.0).unwrap();
        assert!((b.coeffs[2] + 40.2 / 4753.0).abs() < 1e-15);
        let l = johnson_eigenvalues(&b.coeffs, 100);
        assert!(l[0].abs() < 1e-12);
    }

    #[test]
    fn dv_balance_makes_all_ones_an_eigenvector() {
        let n = 7;
        let alg = IntersectionAlgebra::for_kind(SchemeKind::DistinguishedVertex, n).unwrap();
        let mut c = vec![0.0; 9];
        c[dv::ID11.0] = 1.0;
        c[dv::ID22.0] = 1.0;
        c[dv::ADJ11.0] = 0.05;
        c[dv::ADJ12.0] = 0.1;
        c[dv::ADJ21.0] = 0.1;
        c[dv::ADJ22.0] = -0.02;
        let a = alg.element(c).unwrap();
        let b = alg.balance_disjoint(&a, 0.25).unwrap();
        assert!(alg.is_symmetric(&b));
        let dense = alg.lift(&b).unwrap();
        let ones = DVector::from_element(dense.nrows(), 1.0);
        let image = &dense * &ones;
        for v in image.iter() {
            assert!((v - 0.25).abs() < 1e-12, "{v}");
        }
    }

    #[test]
    fn line_graph_uses_brute_force_constants() {
        let s = SchemeDescriptor::johnson_line_graph(6).unwrap();
        let alg = IntersectionAlgebra::new(&s).unwrap();
        assert_eq!(alg.structure_constants(), &compute_structure_constants(&s).unwrap());
        let err = alg.balance_disjoint(&alg.identity_element(), 0.0).unwrap_err();
        assert!(matches!(err, Error::Unsupported { .. }));
    }

    #[test]
    fn element_json_shape() {
        let alg = nz_alg(6);
        let json = serde_json::to_string(&alg.basis(nz::RECIP)).unwrap();
        assert_eq!(
            json,
            r#"{"scheme":"nykamp-zhao","N":6,"coeffs":[0.0,1.0,0.0,0.0,0.0,0.0,0.0]}"#
        );
    }
}
