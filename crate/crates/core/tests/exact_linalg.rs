mod common;

use common::{q, random_invertible, random_matrix, rng};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;
use solvext::matrix::{is_nilpotent, kernel, rank_of_rows, solve_linear, trace_power, Echelon};
use solvext::poly::{count_real_roots, rational_roots, real_root_exists, univariate_gcd};
use solvext::{Error, Matrix, Poly, Scalar, Q, QI};

fn m4() -> Matrix<Q> {
    Matrix::from_i64(&[&[2, -1, 0, 3], &[1, 1, -2, 0], &[0, 4, 1, -1], &[3, 0, 1, 2]])
}

// values below were computed with sympy
#[test]
fn determinant_and_inverse_of_a_fixed_matrix() {
    let m = m4();
    assert_eq!(m.det(), Q::from_i64(-46));
    let inv = m.inverse().unwrap();
    assert_eq!(inv[(0, 0)], q(-19, 46));
    assert_eq!(inv[(0, 3)], q(25, 46));
    assert_eq!(inv[(3, 0)], q(31, 46));
    assert_eq!(m.dot(&inv), Matrix::identity(4));
}

#[test]
fn singular_inverse_is_an_error() {
    let m: Matrix<Q> = Matrix::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
    assert_eq!(m.inverse(), Err(Error::Singular));
    assert_eq!(m.rank(), 2);
    let k = kernel(&m);
    assert_eq!(k.dim(), 1);
    assert!(k.contains(&[Q::from_i64(-1), Q::from_i64(-1), Q::from_i64(1)]));
}

#[test]
fn dimension_mismatch_is_reported() {
    let a: Matrix<Q> = Matrix::zeros(2, 3);
    assert!(matches!(a.mul(&a), Err(Error::Dimension(_))));
    assert!(matches!(is_nilpotent(&a), Err(Error::Dimension(_))));
    assert!(matches!(solve_linear(&a, &[Q::zero()]), Err(Error::Dimension(_))));
}

#[test]
fn inconsistent_system_has_no_particular_solution() {
    let a: Matrix<Q> = Matrix::from_i64(&[&[1, 1], &[2, 2]]);
    let (x, ker) = solve_linear(&a, &[Q::one(), Q::zero()]).unwrap();
    assert!(x.is_none());
    assert_eq!(ker.dim(), 1);
    let (x, _) = solve_linear(&a, &[Q::one(), Q::from_i64(2)]).unwrap();
    assert_eq!(a.apply(&x.unwrap()), vec![Q::one(), Q::from_i64(2)]);
}

#[test]
fn gaussian_rational_determinant() {
    let i = QI::i();
    let one = QI::one();
    let b = Matrix::from_rows(vec![
        vec![one.clone() + i.clone(), QI::from_i64(2)],
        vec![i.clone(), QI::from_i64(3) - i.clone()],
    ])
    .unwrap();
    assert_eq!(b.det(), QI::from_i64(4));
}

#[test]
fn nilpotency_of_fixed_matrices() {
    let jordan: Matrix<Q> = Matrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
    assert!(is_nilpotent(&jordan).unwrap());
    // traceless but not nilpotent
    let rot: Matrix<Q> = Matrix::from_i64(&[&[0, -1], &[1, 0]]);
    assert!(!is_nilpotent(&rot).unwrap());
    assert_eq!(trace_power(&rot, 2).unwrap(), Q::from_i64(-2));
    assert_eq!(trace_power(&rot, 0).unwrap(), Q::from_i64(2));
    let empty: Matrix<Q> = Matrix::zeros(0, 0);
    assert!(is_nilpotent(&empty).unwrap());
}

#[test]
fn polynomial_gcd_and_roots() {
    // (t-1)^2 (t+2)(t^2+1) and (t-1)(t^2+1)(t-3): gcd t^3 - t^2 + t - 1
    let p: Poly<Q> = Poly::from_i64(&[2, -3, 2, -2, 0, 1]);
    let r: Poly<Q> = Poly::from_i64(&[3, -4, 4, -4, 1]);
    assert_eq!(univariate_gcd(&p, &r).unwrap(), Poly::from_i64(&[-1, 1, -1, 1]));
    assert_eq!(univariate_gcd(&Poly::<Q>::zero(), &Poly::zero()), Err(Error::ZeroPolynomial));
    assert_eq!(count_real_roots(&Poly::from_i64(&[5, -2, 0, 1])).unwrap(), 1);
    assert_eq!(count_real_roots(&Poly::from_i64(&[4, 0, -5, 0, 1])).unwrap(), 4);
    assert!(!real_root_exists(&Poly::from_i64(&[1, 0, 0, 0, 1])).unwrap());
    // (t-1)^3 (t+1): two distinct roots
    let rep: Poly<Q> = Poly::from_i64(&[-1, 1]).pow(3).mul(&Poly::from_i64(&[1, 1]));
    assert_eq!(count_real_roots(&rep).unwrap(), 2);
    let mut roots = rational_roots(&Poly::from_i64(&[4, 0, -5, 0, 1])).unwrap();
    roots.sort();
    assert_eq!(roots, [-2, -1, 1, 2].map(Q::from_i64).to_vec());
}

#[test]
fn minimal_polynomial_of_a_jordan_block() {
    let a: Matrix<Q> = Matrix::from_i64(&[&[2, 1, 0], &[0, 2, 0], &[0, 0, 3]]);
    // characteristic polynomial (t-2)^2 (t-3), and the 2-block is not diagonalizable
    assert_eq!(solvext::lie::minimal_polynomial(&a), Poly::from_i64(&[-12, 16, -7, 1]));
    let d: Matrix<Q> = Matrix::from_i64(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
    assert_eq!(solvext::lie::minimal_polynomial(&d), Poly::from_i64(&[6, -5, 1]));
}

#[test]
fn rank_of_a_catalog_b_matrix() {
    // diag(1, 1, 0, 2, 1) + E(1, 2): the third row vanishes, so the rank is 4
    let b = common::entry("T3.L5").b.eval::<Q>(&Default::default()).unwrap();
    assert_eq!(b.rank(), 4);
    assert_eq!(kernel(&b).dim(), 1);
}

#[test]
fn rank_of_a_wide_system_with_large_entries() {
    // rows 3 and 4 are combinations of rows 1 and 2 with huge coefficients
    let big = Q::from_i64(1 << 40) * Q::from_i64(1 << 40);
    let r1: Vec<Q> = (0..30).map(|i| Q::from_i64(i * i - 7)).collect();
    let r2: Vec<Q> = (0..30).map(|i| q(i + 1, 3)).collect();
    let comb = |a: &Q, b: &Q| -> Vec<Q> { r1.iter().zip(&r2).map(|(x, y)| a.clone() * x.clone() + b.clone() * y.clone()).collect() };
    let rows = vec![r1.clone(), r2.clone(), comb(&big, &q(-5, 7)), comb(&q(1, 1 << 30), &big)];
    assert_eq!(rank_of_rows(30, &rows), 2);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn determinant_is_multiplicative(seed in any::<u64>(), n in 1usize..5) {
        let mut r = rng(seed);
        let a = random_matrix(&mut r, n, -3, 3);
        let b = random_matrix(&mut r, n, -3, 3);
        prop_assert_eq!(a.dot(&b).det(), a.det() * b.det());
    }

    #[test]
    fn rank_agrees_between_integer_and_rational_elimination(seed in any::<u64>(), rows in 1usize..9, cols in 1usize..9, k in 0usize..4) {
        // a product of an rows×k and a k×cols matrix has rank at most k
        let mut r = rng(seed);
        let u = Matrix::from_fn(rows, k, |_, _| q(r.gen_range(-9..=9), r.gen_range(1..=4)));
        let v = Matrix::from_fn(k, cols, |_, _| q(r.gen_range(-9..=9), r.gen_range(1..=4)));
        let m = u.mul(&v).unwrap_or_else(|_| Matrix::zeros(rows, cols));
        let mut e = Echelon::new(cols);
        for row in m.to_rows() {
            e.insert(row);
        }
        prop_assert!(e.rank() <= k);
        prop_assert_eq!(rank_of_rows(cols, &m.to_rows()), e.rank());
        prop_assert_eq!(m.rank(), e.rank());
    }

    #[test]
    fn kernel_vectors_are_annihilated(seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let m = random_matrix(&mut r, n, -1, 1);
        let k = kernel(&m);
        prop_assert_eq!(k.dim() + m.rank(), n);
        for v in k.basis() {
            prop_assert!(m.apply(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn conjugated_strict_triangles_are_nilpotent(seed in any::<u64>(), n in 1usize..6, shift in any::<bool>()) {
        // half the cases add the identity, which is never nilpotent
        let mut r = rng(seed);
        let t = Matrix::from_fn(n, n, |i, j| if i < j { Q::from_i64(r.gen_range(-3..=3)) } else { Q::zero() });
        let t = if shift { t.add(&Matrix::identity(n)) } else { t };
        let p = random_invertible(&mut r, n);
        let m = p.dot(&t).dot(&p.inverse().unwrap());
        prop_assert_eq!(is_nilpotent(&m).unwrap(), !shift);
        prop_assert_eq!(trace_power(&m, 1).unwrap().is_zero(), !shift);
    }
}
