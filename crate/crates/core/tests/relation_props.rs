//! Property tests of the relation calculus against independent oracles.

use linrel::models::{complex_gaussian, random_relation, seeded_rng};
use linrel::scalar::{cplx, CMat};
use linrel::{LinearRelation, Subspace, Tolerance};
use proptest::prelude::*;

type Rel = LinearRelation<f64>;

fn tol() -> Tolerance<f64> {
    Tolerance::default()
}

fn blocks(t: &Rel) -> (CMat<f64>, CMat<f64>) {
    let n = t.space_dim();
    let g = t.graph().basis();
    (g.rows(0, n).into_owned(), g.rows(n, n).into_owned())
}

fn stack(parts: &[&CMat<f64>]) -> CMat<f64> {
    let cols = parts[0].ncols();
    let rows: usize = parts.iter().map(|p| p.nrows()).sum();
    let mut out = CMat::zeros(rows, cols);
    let mut at = 0;
    for p in parts {
        out.view_mut((at, 0), (p.nrows(), cols)).copy_from(p);
        at += p.nrows();
    }
    out
}

fn join(a: &CMat<f64>, b: &CMat<f64>) -> CMat<f64> {
    let mut out = CMat::zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out
}

/// `T + S` through `{(x, f, g) : (x, f) ∈ T, (x, g) ∈ S} ⊆ C^{3n}`.
fn sum_by_product(t: &Rel, s: &Rel) -> Rel {
    let n = t.space_dim();
    let (gx, gf) = blocks(t);
    let (hx, hf) = blocks(s);
    let z = |k: usize| CMat::<f64>::zeros(n, k);
    let id = CMat::<f64>::identity(n, n);
    let lift_t = join(
        &stack(&[&gx, &gf, &z(gx.ncols())]),
        &stack(&[&z(n), &z(n), &id]),
    );
    let lift_s = join(
        &stack(&[&hx, &z(hx.ncols()), &hf]),
        &stack(&[&z(n), &id, &z(n)]),
    );
    let ut = Subspace::orthonormalize(&lift_t, &tol()).unwrap();
    let us = Subspace::orthonormalize(&lift_s, &tol()).unwrap();
    let w = ut.intersect(&us, &tol()).unwrap();
    let b = w.basis();
    let xs = b.rows(0, n).into_owned();
    let fs = b.rows(n, n) + b.rows(2 * n, n);
    if b.ncols() == 0 {
        return Rel::trivial(n);
    }
    Rel::from_pairs(&xs, &fs, &tol()).unwrap()
}

fn relation() -> impl Strategy<Value = Rel> {
    (any::<u64>(), 1usize..=6, 0.0f64..=1.0).prop_map(|(seed, n, frac)| {
        let dim = ((2 * n) as f64 * frac).round() as usize;
        random_relation::<f64>(seed, n, dim).unwrap()
    })
}

fn pair() -> impl Strategy<Value = (Rel, Rel)> {
    (any::<u64>(), 1usize..=5, 0usize..=10, 0usize..=10).prop_map(|(seed, n, d1, d2)| {
        (
            random_relation::<f64>(seed, n, d1.min(2 * n)).unwrap(),
            random_relation::<f64>(seed ^ 0x9e37_79b9, n, d2.min(2 * n)).unwrap(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn adjoint_is_an_involution(t in relation()) {
        prop_assert!(t.adjoint().adjoint().equals(&t, &tol()).unwrap());
    }

    #[test]
    fn adjoint_dimension_is_dual(t in relation()) {
        prop_assert_eq!(t.adjoint().dim(), 2 * t.space_dim() - t.dim());
    }

    #[test]
    fn shifting_commutes_with_adjoint(t in relation(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let lambda = cplx(re, im);
        let lhs = t.shift(lambda, &tol()).adjoint();
        let rhs = t.adjoint().shift(lambda.conj(), &tol());
        prop_assert!(lhs.equals(&rhs, &tol()).unwrap());
    }

    #[test]
    fn sum_matches_the_product_construction((t, s) in pair()) {
        let fast = t.sum(&s, &tol()).unwrap();
        let slow = sum_by_product(&t, &s);
        prop_assert!(fast.equals(&slow, &tol()).unwrap(), "dims {} vs {}", fast.dim(), slow.dim());
    }

    #[test]
    fn sum_with_an_operator_matches_the_product_construction(
        t in relation(),
        seed in any::<u64>(),
        left in any::<bool>(),
    ) {
        let n = t.space_dim();
        let mut rng = seeded_rng(seed, 0);
        let a = Rel::operator(&complex_gaussian::<f64>(&mut rng, n, n)).unwrap();
        let (p, q) = if left { (&a, &t) } else { (&t, &a) };
        let fast = p.sum(q, &tol()).unwrap();
        let slow = sum_by_product(p, q);
        prop_assert!(fast.equals(&slow, &tol()).unwrap(), "dims {} vs {}", fast.dim(), slow.dim());
    }

    #[test]
    fn domain_and_mul_part_of_a_sum((t, s) in pair()) {
        let sum = t.sum(&s, &tol()).unwrap();
        let dom = t.domain(&tol()).intersect(&s.domain(&tol()), &tol()).unwrap();
        prop_assert!(sum.domain(&tol()).equals(&dom, &tol()).unwrap());
        let mul = t.mul_part(&tol()).sum(&s.mul_part(&tol()), &tol()).unwrap();
        prop_assert!(sum.mul_part(&tol()).equals(&mul, &tol()).unwrap());
    }

    #[test]
    fn decomposition_reconstructs(t in relation()) {
        if let Ok(dec) = t.decompose(&tol()) {
            prop_assert!(dec.reconstruction_residual(&t).unwrap() <= 1e-9);
        }
    }
}
