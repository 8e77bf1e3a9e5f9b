//! Shared helpers and frozen oracle tables for the integration tests.
#![allow(dead_code)]

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use solvext::catalog::{builtin_tables, parse_assignment, CatalogEntry};
use solvext::extension::assemble;
use solvext::{LieAlgebra, Matrix, Scalar, Q};

/// Lower central series dims of the nine nilpotent algebras of dimension 5,
/// enumerated by hand and cross-checked with sympy.
pub const NILPOTENT_LCS: [(&str, &[usize]); 9] = [
    ("g1_5", &[5, 0]),
    ("g1g1g3", &[5, 1, 0]),
    ("g1g4", &[5, 2, 1, 0]),
    ("g51", &[5, 1, 0]),
    ("g52", &[5, 2, 0]),
    ("g53", &[5, 2, 1, 0]),
    ("g54", &[5, 3, 2, 0]),
    ("g55", &[5, 3, 2, 1, 0]),
    ("g56", &[5, 3, 2, 1, 0]),
];

/// `(id, derived dims, center, derivations, centroid)` for the same nine.
pub const NILPOTENT_INVARIANTS: [(&str, &[usize], usize, usize, usize); 9] = [
    ("g1_5", &[5, 0], 5, 25, 25),
    ("g1g1g3", &[5, 1, 0], 3, 16, 13),
    ("g1g4", &[5, 2, 0], 2, 11, 7),
    ("g51", &[5, 1, 0], 1, 15, 5),
    ("g52", &[5, 2, 0], 2, 13, 7),
    ("g53", &[5, 2, 0], 1, 10, 5),
    ("g54", &[5, 3, 0], 2, 10, 5),
    ("g55", &[5, 3, 0], 1, 9, 3),
    ("g56", &[5, 3, 0], 1, 8, 3),
];

/// Fingerprints `(derived, lower central, center, centroid, Killing rank,
/// derivations)` computed with an independent sympy implementation.
pub const FINGERPRINTS_AT_2_3: &[(&str, &[usize], &[usize], usize, usize, usize, usize)] = &[
    ("T2.L1", &[7, 5, 2, 0], &[7, 5], 1, 3, 2, 8),
    ("T2.L2", &[7, 5, 2, 0], &[7, 5, 4], 1, 3, 2, 8),
    ("T2.L3", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T2.L4", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T2.L5", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T2.L6", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T2.L7", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T2.L8", &[7, 4, 0], &[7, 4], 0, 1, 2, 8),
    ("T2.L9", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T2.L10", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T2.L11", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T2.L12", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T3.L1", &[7, 5, 2, 0], &[7, 5], 1, 3, 2, 8),
    ("T3.L2", &[7, 4, 1, 0], &[7, 4], 0, 2, 2, 8),
    ("T3.L3", &[7, 4, 0], &[7, 4], 0, 1, 2, 9),
    ("T3.L4", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T3.L5", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T3.L6", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T3.L7", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T3.L8", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T3.L9", &[7, 4, 0], &[7, 4], 0, 1, 2, 8),
    ("T3.L10", &[7, 4, 0], &[7, 4], 0, 1, 2, 8),
    ("T3.L11", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T3.L12", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T3.R13", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T3.R14", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T3.R15", &[7, 4, 0], &[7, 4], 0, 1, 2, 8),
    ("T3.R16", &[7, 4, 0], &[7, 4], 0, 1, 2, 8),
    ("T4.L1", &[7, 5, 3, 0], &[7, 5], 0, 1, 2, 7),
    ("G53.L1", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 7),
    ("G55.L1", &[7, 5, 3, 0], &[7, 5], 0, 1, 2, 7),
];

pub const FINGERPRINTS_AT_1_M2: &[(&str, &[usize], &[usize], usize, usize, usize, usize)] = &[
    ("T2.L1", &[7, 5, 2, 0], &[7, 5], 1, 3, 2, 8),
    ("T2.L2", &[7, 5, 2, 0], &[7, 5, 4], 1, 3, 2, 8),
    ("T2.L3", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 9),
    ("T2.L4", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T2.L5", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T2.L6", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T2.L7", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T2.L8", &[7, 4, 0], &[7, 4], 0, 1, 2, 8),
    ("T2.L9", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T2.L10", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T2.L11", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T2.L12", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T3.L1", &[7, 5, 2, 0], &[7, 5], 1, 3, 2, 8),
    ("T3.L2", &[7, 4, 1, 0], &[7, 4], 0, 2, 2, 8),
    ("T3.L3", &[7, 4, 0], &[7, 4], 0, 1, 2, 9),
    ("T3.L4", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T3.L5", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T3.L6", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T3.L7", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T3.L8", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T3.L9", &[7, 4, 0], &[7, 4], 0, 1, 2, 8),
    ("T3.L10", &[7, 4, 0], &[7, 4], 0, 1, 2, 8),
    ("T3.L11", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T3.L12", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T3.R13", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T3.R14", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 8),
    ("T3.R15", &[7, 4, 0], &[7, 4], 0, 1, 2, 8),
    ("T3.R16", &[7, 4, 0], &[7, 4], 0, 1, 2, 8),
    ("T4.L1", &[7, 5, 3, 0], &[7, 5], 0, 1, 2, 7),
    ("G53.L1", &[7, 5, 2, 0], &[7, 5], 0, 1, 2, 7),
    ("G55.L1", &[7, 5, 3, 0], &[7, 5], 0, 1, 2, 7),
];

/// Parameter point used for the oracle tables: `a`, `b` as given, `s = 1`,
/// `d = 1`.
pub fn oracle_point(entry: &CatalogEntry, a: i64, b: i64) -> String {
    entry
        .params
        .iter()
        .map(|p| match p.as_str() {
            "a" => format!("a={a}"),
            "b" => format!("b={b}"),
            other => format!("{other}=1"),
        })
        .collect::<Vec<_>>()
        .join(",")
}

pub fn entry(name: &str) -> CatalogEntry {
    builtin_tables().into_iter().find(|e| e.name == name).unwrap_or_else(|| panic!("no entry {name}"))
}

/// Assemble a builtin entry at `a=2,b=3`-style parameters, ignoring the
/// normalization constraints.
pub fn algebra<F: Scalar>(name: &str, params: &str) -> LieAlgebra<F> {
    let e = entry(name);
    let env = parse_assignment::<F>(params).unwrap();
    assemble(&e.instantiate_unchecked(&env).unwrap()).unwrap().with_label(e.point_label(&env))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Q {
    Q::from_frac(n, d)
}

/// Square matrix with entries drawn from `lo..=hi`.
pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> Matrix<Q> {
    Matrix::from_fn(n, n, |_, _| Q::from_i64(rng.gen_range(lo..=hi)))
}

/// Random invertible integer matrix with entries in `-2..=2`.
pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Q> {
    loop {
        let m = random_matrix(rng, n, -2, 2);
        if !m.det().is_zero() {
            return m;
        }
    }
}
