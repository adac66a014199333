use nalgebra::DMatrix;
use proptest::prelude::*;

use sonets::algebra::{johnson_eigenvalues, johnson_sqrt_closed_form, nz_eigenvalues};
use sonets::scheme::nz;
use sonets::{AlgebraElement, IntersectionAlgebra, RelationId, SchemeKind, StructuredOperator};

fn algebra(kind: SchemeKind) -> IntersectionAlgebra {
    let n = if kind == SchemeKind::JohnsonLineGraph { 6 } else { 5 };
    IntersectionAlgebra::for_kind(kind, n).unwrap()
}

fn kinds() -> impl Strategy<Value = SchemeKind> {
    prop::sample::select(SchemeKind::BUILT_IN.to_vec())
}

fn coeffs(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, len)
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn symmetric(alg: &IntersectionAlgebra, raw: &[f64]) -> AlgebraElement {
    let mut c = raw.to_vec();
    for k in 0..c.len() {
        let adj = alg.scheme().adjoint(RelationId(k)).0;
        c[adj] = c[k.min(adj)];
    }
    alg.element(c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_associative_and_bilinear(
        kind in kinds(), a in coeffs(12), b in coeffs(12), c in coeffs(12), t in -2.0f64..2.0,
    ) {
        let alg = algebra(kind);
        let s = alg.dimension();
        let el = |v: &[f64]| alg.element(v[..s].to_vec()).unwrap();
        let (a, b, c) = (el(&a), el(&b), el(&c));
        let ab_c = alg.multiply_elements(&alg.multiply_elements(&a, &b).unwrap(), &c).unwrap();
        let a_bc = alg.multiply_elements(&a, &alg.multiply_elements(&b, &c).unwrap()).unwrap();
        prop_assert!(max_diff(&ab_c.coeffs, &a_bc.coeffs) < 1e-9);

        let combo: Vec<f64> = b.coeffs.iter().zip(&c.coeffs).map(|(x, y)| t * x + y).collect();
        let lhs = alg.multiply_elements(&a, &alg.element(combo).unwrap()).unwrap();
        let ab = alg.multiply_elements(&a, &b).unwrap();
        let ac = alg.multiply_elements(&a, &c).unwrap();
        let rhs: Vec<f64> = ab.coeffs.iter().zip(&ac.coeffs).map(|(x, y)| t * x + y).collect();
        prop_assert!(max_diff(&lhs.coeffs, &rhs) < 1e-9);
    }

    #[test]
    fn rho_is_a_homomorphism(kind in kinds(), a in coeffs(12), b in coeffs(12)) {
        let alg = algebra(kind);
        let s = alg.dimension();
        let a = alg.element(a[..s].to_vec()).unwrap();
        let b = alg.element(b[..s].to_vec()).unwrap();
        let ab = alg.multiply_elements(&a, &b).unwrap();
        let lhs = alg.rho_map(&ab).unwrap().0;
        let rhs = alg.rho_map(&a).unwrap().0 * alg.rho_map(&b).unwrap().0;
        prop_assert!((lhs - rhs).amax() < 1e-9);
    }

    #[test]
    fn product_matches_dense_matrices(kind in kinds(), a in coeffs(12), b in coeffs(12)) {
        let alg = algebra(kind);
        let s = alg.dimension();
        let a = alg.element(a[..s].to_vec()).unwrap();
        let b = alg.element(b[..s].to_vec()).unwrap();
        let ab = alg.lift(&alg.multiply_elements(&a, &b).unwrap()).unwrap();
        let dense = alg.lift(&a).unwrap() * alg.lift(&b).unwrap();
        prop_assert!((ab - dense).amax() < 1e-9);
    }

    #[test]
    fn transpose_matches_dense(kind in kinds(), a in coeffs(12)) {
        let alg = algebra(kind);
        let a = alg.element(a[..alg.dimension()].to_vec()).unwrap();
        let t = alg.lift(&alg.transpose(&a).unwrap()).unwrap();
        prop_assert!((t - alg.lift(&a).unwrap().transpose()).amax() == 0.0);
    }

    #[test]
    fn coefficients_recovered_from_rho(a in coeffs(7)) {
        let alg = IntersectionAlgebra::for_kind(SchemeKind::NykampZhao, 50).unwrap();
        let a = alg.element(a).unwrap();
        let back = alg.recover_coefficients(&alg.rho_map(&a).unwrap()).unwrap();
        prop_assert!(max_diff(&back.coeffs, &a.coeffs) < 1e-9);
    }

    #[test]
    fn nz_discriminant_is_nonnegative(a in coeffs(7), n in 4usize..500) {
        let mut c = a;
        c[nz::ANTI.0] = c[nz::CHAIN.0];
        let ev = nz_eigenvalues(&c, n);
        prop_assert!(ev.tau >= 0.0 && ev.tau.is_finite());
    }

    #[test]
    fn matvec_is_linear_and_symmetric(
        kind in kinds(), raw in coeffs(12), x in coeffs(60), y in coeffs(60), t in -2.0f64..2.0,
    ) {
        let alg = algebra(kind);
        let e = alg.scheme().edge_count();
        let a = symmetric(&alg, &raw[..alg.dimension()]);
        let op = StructuredOperator::new(alg.scheme()).unwrap();
        let (x, y) = (&x[..e], &y[..e]);
        let combo: Vec<f64> = x.iter().zip(y).map(|(p, q)| t * p + q).collect();
        let lhs = op.apply(&a.coeffs, &combo).unwrap();
        let ax = op.apply(&a.coeffs, x).unwrap();
        let ay = op.apply(&a.coeffs, y).unwrap();
        let rhs: Vec<f64> = ax.iter().zip(&ay).map(|(p, q)| t * p + q).collect();
        prop_assert!(max_diff(&lhs, &rhs) < 1e-12);
        let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(p, q)| p * q).sum::<f64>();
        prop_assert!((dot(&ax, y) - dot(x, &ay)).abs() < 1e-12);
    }

    #[test]
    fn symmetric_square_roots_square_back(raw in coeffs(7), target in 0.0f64..2.0) {
        let alg = IntersectionAlgebra::for_kind(SchemeKind::NykampZhao, 6).unwrap();
        let mut c: Vec<f64> = raw.iter().map(|x| 0.3 * x).collect();
        c[nz::ID.0] = 1.0;
        let a = alg.balance_disjoint(&symmetric(&alg, &c), target).unwrap();
        let ev = nz_eigenvalues(&a.coeffs, 6);
        prop_assume!(ev.lambda.iter().all(|&l| l > 1e-6));
        let beta = alg.sqrt_in_algebra(&a).unwrap();
        prop_assert!(alg.is_symmetric(&beta));
        let sq = alg.multiply_elements(&beta, &beta).unwrap();
        prop_assert!(max_diff(&sq.coeffs, &a.coeffs) < 1e-10);
    }
}

#[test]
fn johnson_sign_branches_all_square_to_target() {
    let n = 9;
    let alg = IntersectionAlgebra::for_kind(SchemeKind::Johnson, n).unwrap();
    let (a0, a1, a2) = (1.0, 0.15, 0.02);
    let lambda = johnson_eigenvalues(&[a0, a1, a2], n);
    assert!(lambda.iter().all(|&l| l > 0.0));
    let mut roots = Vec::new();
    for bits in 0..8 {
        let signs = [0, 1, 2].map(|i| if bits >> i & 1 == 1 { -1i8 } else { 1 });
        let beta = johnson_sqrt_closed_form(a1, a2, a0, n, signs).unwrap();
        let sq = alg.multiply_elements(&beta, &beta).unwrap();
        assert!(max_diff(&sq.coeffs, &[a0, a1, a2]) < 1e-12, "{signs:?}: {:?}", sq.coeffs);
        let ev = johnson_eigenvalues(&beta.coeffs, n);
        for i in 0..3 {
            assert!((ev[i] - f64::from(signs[i]) * lambda[i].sqrt()).abs() < 1e-12);
        }
        roots.push(beta.coeffs);
    }
    // Eight distinct roots.
    for i in 0..8 {
        for j in 0..i {
            assert!(max_diff(&roots[i], &roots[j]) > 1e-6);
        }
    }
}

#[test]
fn dense_root_oracle_for_every_scheme() {
    for kind in SchemeKind::BUILT_IN {
        let alg = algebra(kind);
        let s = alg.dimension();
        // Identity plus a small symmetric perturbation stays positive definite.
        let raw: Vec<f64> = (0..s).map(|k| 0.05 * ((k * 7 % 5) as f64 - 2.0)).collect();
        let mut a = symmetric(&alg, &raw);
        for id in alg.scheme().identity_relations() {
            a.coeffs[id.0] = 1.0;
        }
        let beta = alg.sqrt_in_algebra(&a).unwrap();
        let eig = alg.lift(&a).unwrap().symmetric_eigen();
        assert!(eig.eigenvalues.min() > 0.0, "{kind}");
        let root = eig.eigenvalues.map(f64::sqrt);
        let oracle = &eig.eigenvectors * DMatrix::from_diagonal(&root) * eig.eigenvectors.transpose();
        let diff = (alg.lift(&beta).unwrap() - oracle).amax();
        assert!(diff < 1e-10, "{kind}: {diff:e}");
    }
}
