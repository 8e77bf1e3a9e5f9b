//! Reference algebras and matrices used for isomorphism replay.

use crate::lie::LieAlgebra;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// The one-parameter family `[7, [6, 5], 1, 3]` with nilradical `g1 + g5,1`:
/// `[e3,e5] = e2`, `[e4,e6] = e2`, `[e1,e7] = a e1`, `[e3,e7] = -e3`,
/// `[e4,e7] = -a e4`, `[e5,e7] = e5`, `[e6,e7] = -e1 + a e6`.
pub fn parry_family<F: Scalar>(a: &F) -> LieAlgebra<F> {
    let one = F::one();
    let br = vec![
        (2, 4, vec![(1, one.clone())]),
        (3, 5, vec![(1, one.clone())]),
        (0, 6, vec![(0, a.clone())]),
        (2, 6, vec![(2, -one.clone())]),
        (3, 6, vec![(3, -a.clone())]),
        (4, 6, vec![(4, one.clone())]),
        (5, 6, vec![(0, -one.clone()), (5, a.clone())]),
    ];
    let names = (1..=7).map(|i| format!("e{i}")).collect();
    LieAlgebra::from_brackets(7, format!("[7,[6,5],1,3]@a={}", crate::scalar::fmt_scalar(a)), &br).with_names(names)
}

/// Printed isomorphism between the members `a` and `-a` of
/// [`parry_family`] (off-diagonal zeros omitted in print).
pub fn parry_certificate<F: Scalar>() -> Matrix<F> {
    Matrix::from_i64(&[
        &[-1, 0, 0, 0, 0, 0, 0],
        &[0, 1, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 1, 0, 0],
        &[0, 0, 0, 1, 0, 0, 0],
        &[0, 0, -1, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 1, 0],
        &[0, 0, 0, 0, 0, 0, -1],
    ])
}

/// The 7×7 matrix printed for `(a, b) ~ (-a/b, 1/b)` in the g5,2 family L4,
/// exactly as printed.
pub fn printed_l4_matrix<F: Scalar>(a: &F, b: &F) -> Matrix<F> {
    let mut m = Matrix::from_i64(&[
        &[-1, 0, 0, 0, 0, -1, 0],
        &[0, 0, -1, 0, 0, 0, 0],
        &[0, -1, 0, 0, 0, 0, 1],
        &[0, 0, 1, 0, 1, 0, 0],
        &[1, 1, 0, 1, 0, 1, 0],
        &[0, 0, 0, 0, 0, 1, 0],
        &[0, 0, 0, 0, 0, 0, 0],
    ]);
    m[(6, 5)] = a.clone();
    m[(6, 6)] = b.clone();
    m
}

/// The 7×7 matrix printed for `a ~ 1/a` in the g5,2 family L10, exactly as
/// printed.
pub fn printed_l10_matrix<F: Scalar>(a: &F) -> Matrix<F> {
    let inv = a.inv().expect("parameter must be nonzero");
    let mut m = Matrix::zeros(7, 7);
    m[(0, 0)] = inv.clone();
    m[(0, 6)] = -inv.clone();
    m[(1, 2)] = a.clone();
    m[(2, 1)] = a.clone();
    m[(3, 4)] = F::one();
    m[(4, 3)] = F::one();
    m[(5, 5)] = a.clone();
    m[(5, 6)] = F::one();
    m[(6, 6)] = inv;
    m
}
