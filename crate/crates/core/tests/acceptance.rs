//! Acceptance criteria, one PASS/FAIL line each.

mod common;

use std::time::Instant;

use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use common::*;
use solvext::catalog::{builtin_nilradical, builtin_tables, counts_by_nilradical, sample_params, FieldScope};
use solvext::extension::{
    apply_inner_modification, apply_nilradical_automorphism, apply_xy_change, assemble, check_compatibility, nil_independent,
    ExtensionSpec, Semantics, XYChange,
};
use solvext::fixtures::{parry_certificate, parry_family, printed_l10_matrix, printed_l4_matrix};
use solvext::isomorphism::{builtin_certificate, check_equivalence_claims, search_isomorphism, verify_certificate};
use solvext::matrix::{is_nilpotent, trace_power};
use solvext::report::verify_catalog;
use solvext::{LieAlgebra, Matrix, Scalar, Q};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn catalog_verification() -> Outcome {
    let start = Instant::now();
    let entries = builtin_tables();
    let mut failures = Vec::new();
    let mut checked = 0;
    for field in [FieldScope::R, FieldScope::C] {
        let report = verify_catalog(&entries, field, 5, 0, false);
        for e in report.entries() {
            checked += 1;
            let available = sample_params::<Q>(entries.iter().find(|x| x.name == e.name).unwrap(), field, 5, 0).points.len();
            if !e.passed() || e.samples.len() != available.min(5) || e.samples.is_empty() {
                failures.push(format!("{}/{}", e.name, field.as_str()));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = failures.is_empty() && checked == 31 + 27 && secs < 60.0;
    outcome(ok, format!("{checked} entry/field runs, failures {failures:?}, {secs:.1} s"))
}

fn count_reproduction() -> Outcome {
    let entries = builtin_tables();
    let want_r = [("g1g4", 12), ("g52", 16), ("g53", 1), ("g54", 1), ("g55", 1), ("g56", 0)];
    let want_c = [("g1g4", 12), ("g52", 12), ("g53", 1), ("g54", 1), ("g55", 1), ("g56", 0)];
    let r = counts_by_nilradical(&entries, FieldScope::R);
    let c = counts_by_nilradical(&entries, FieldScope::C);
    let get = |m: &std::collections::BTreeMap<String, usize>, k: &str| m.get(k).copied().unwrap_or(0);
    let ok = want_r.iter().all(|(k, v)| get(&r, k) == *v) && want_c.iter().all(|(k, v)| get(&c, k) == *v);
    let shown: Vec<String> = want_r.iter().map(|(k, _)| format!("{k} {}/{}", get(&r, k), get(&c, k))).collect();
    outcome(ok, shown.join(", "))
}

fn either_direction(l1: &LieAlgebra<Q>, l2: &LieAlgebra<Q>, g: &Matrix<Q>) -> bool {
    verify_certificate(l1, l2, g).unwrap_or(false) || verify_certificate(l2, l1, g).unwrap_or(false)
}

fn certificate_replay() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    // diagonal certificates, replayed through the declared equivalences
    for name in ["T3.L1", "T3.R13", "T3.R14", "T3.R16"] {
        let e = entry(name);
        let r = check_equivalence_claims::<Q>(&e, 5, 0, 0, &builtin_certificate).unwrap();
        let good = r.results.iter().filter(|c| c.outcome == "certificate verified").count();
        ok &= r.passed() && good == r.results.len() && good > 0;
        notes.push(format!("{name} {good}/{}", r.results.len()));
    }
    // the 7x7 matrices exactly as printed
    for (a, b) in [(1, 2), (2, -1)] {
        let (a, b) = (Q::from_i64(a), Q::from_i64(b));
        let l1 = algebra::<Q>("T3.L4", &format!("a={a},b={b}"));
        let (a2, b2) = (-a.clone() / b.clone(), Q::from_i64(1) / b.clone());
        let l2 = algebra::<Q>("T3.L4", &format!("a={a2},b={b2}"));
        let good = either_direction(&l1, &l2, &printed_l4_matrix(&a, &b));
        ok &= good;
        notes.push(format!("L4 printed ({a},{b}) {}", if good { "ok" } else { "fails" }));
    }
    for a in [q(2, 1), q(1, 2)] {
        let l1 = algebra::<Q>("T3.L10", &format!("a={a}"));
        let l2 = algebra::<Q>("T3.L10", &format!("a={}", Q::from_i64(1) / a.clone()));
        let good = either_direction(&l1, &l2, &printed_l10_matrix(&a));
        ok &= good;
        notes.push(format!("L10 printed a={a} {}", if good { "ok" } else { "fails" }));
    }
    let mut parry_ok = true;
    for a in [q(1, 1), q(2, 1), q(1, 3)] {
        parry_ok &= verify_certificate(&parry_family(&a), &parry_family(&-a.clone()), &parry_certificate()).unwrap();
    }
    ok &= parry_ok;
    notes.push(format!("[7,[6,5],1,3] family {}", if parry_ok { "ok" } else { "fails" }));
    outcome(ok, notes.join("; "))
}

fn distinctness() -> Outcome {
    let l2 = algebra::<Q>("T3.L2", "");
    let l3 = algebra::<Q>("T3.L3", "");
    let l4 = algebra::<Q>("T3.L4", "a=2,b=3");
    let (f2, f3, f4) = (l2.fingerprint(), l3.fingerprint(), l4.fingerprint());
    let mut ok = f2.derived == [7, 4, 1, 0] && f3.derived == [7, 4, 0] && f4.derived == [7, 5, 2, 0];
    ok &= f2 != f3 && f3 != f4 && f2 != f4;
    for s in [0, 1] {
        let l1 = algebra::<Q>("T3.L1", &format!("s={s}"));
        ok &= [&f2, &f3, &f4].iter().all(|f| **f != l1.fingerprint());
    }
    let groups: [&[&str]; 8] = [
        &["T3.L1"],
        &["T3.L2", "T3.L3", "T3.L4"],
        &["T3.L5", "T3.L6"],
        &["T3.L7", "T3.L8"],
        &["T3.L9", "T3.L10"],
        &["T3.L11", "T3.L12"],
        &["T3.R13", "T3.R14"],
        &["T3.R15", "T3.R16"],
    ];
    let mut confirmed = Vec::new();
    let (mut refuted, mut unknown) = (0, 0);
    for g in groups {
        for (i, x) in g.iter().enumerate() {
            for y in &g[i + 1..] {
                let lx = algebra::<Q>(x, &oracle_point(&entry(x), 2, 3));
                let ly = algebra::<Q>(y, &oracle_point(&entry(y), 2, 3));
                match search_isomorphism(&lx, &ly, 2000) {
                    v if v.is_isomorphic() => confirmed.push(format!("{x}~{y}")),
                    v if v.is_refuted() => refuted += 1,
                    _ => unknown += 1,
                }
            }
        }
    }
    ok &= confirmed.is_empty();
    outcome(
        ok,
        format!(
            "derived {:?}/{:?}/{:?}; group pairs: {refuted} refuted, {unknown} unknown, confirmed {confirmed:?}",
            f2.derived, f3.derived, f4.derived
        ),
    )
}

fn nilpotent_suite() -> Outcome {
    let mut bad = Vec::new();
    for (id, lcs) in NILPOTENT_LCS {
        let n: LieAlgebra<Q> = builtin_nilradical(id).unwrap();
        let good = n.jacobi_check().is_empty() && n.is_nilpotent_algebra() && n.lower_central_series().dims() == lcs;
        if !good {
            bad.push(id);
        }
    }
    outcome(bad.is_empty(), format!("{} algebras, mismatches {bad:?}", NILPOTENT_LCS.len()))
}

fn fingerprint_invariance(cases: u32) -> Result<(), String> {
    let mut rng = rng(6);
    for e in builtin_tables() {
        let env = sample_params::<Q>(&e, FieldScope::R, 1, 0).points.remove(0);
        let l = assemble(&e.instantiate(&env, FieldScope::R).unwrap()).unwrap();
        let base = l.fingerprint();
        for _ in 0..cases {
            let p = random_invertible(&mut rng, 7);
            let moved = l.change_basis(&p).unwrap();
            if moved.fingerprint() != base {
                return Err(format!("{} under {:?}", e.name, p.to_rows()));
            }
        }
    }
    Ok(())
}

/// Square matrices with entries in -2..=2; half of them nilpotent by
/// construction (strictly triangular conjugated by an invertible matrix).
fn matrix_strategy() -> impl Strategy<Value = Matrix<Q>> {
    (1usize..=5, any::<bool>(), any::<u64>()).prop_map(|(n, nil, seed)| {
        let mut r = rng(seed);
        let m = random_matrix(&mut r, n, -2, 2);
        if !nil {
            return m;
        }
        let u = Matrix::from_fn(n, n, |i, j| if i < j { m[(i, j)].clone() } else { Q::from_i64(0) });
        let p = random_invertible(&mut r, n);
        p.dot(&u).dot(&p.inverse().unwrap())
    })
}

fn nilpotency_agreement(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&matrix_strategy(), |m| {
            let by_power = is_nilpotent(&m).unwrap();
            let by_traces = (1..=m.rows()).all(|k| trace_power(&m, k).unwrap().is_zero());
            prop_assert_eq!(by_power, by_traces);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Pencil `(P A P⁻¹, P B P⁻¹)` with `A`, `B` upper triangular; a nilpotent
/// combination exists exactly when the diagonals are dependent.
fn pencil_strategy() -> impl Strategy<Value = (Matrix<Q>, Matrix<Q>, bool)> {
    (any::<u64>(), 0u8..3).prop_map(|(seed, kind)| {
        let mut r = rng(seed);
        let tri = |r: &mut rand_chacha::ChaCha8Rng, d: &[i64]| {
            let m = random_matrix(r, 5, -2, 2);
            Matrix::from_fn(5, 5, |i, j| match i.cmp(&j) {
                std::cmp::Ordering::Less => m[(i, j)].clone(),
                std::cmp::Ordering::Equal => Q::from_i64(d[i]),
                _ => Q::from_i64(0),
            })
        };
        use rand::Rng;
        let da: Vec<i64> = (0..5).map(|_| r.gen_range(-2..=2)).collect();
        let db: Vec<i64> = match kind {
            // dependent diagonals: db = c·da
            0 => {
                let c = r.gen_range(-2..=2);
                da.iter().map(|x| c * x).collect()
            }
            _ => (0..5).map(|_| r.gen_range(-2..=2)).collect(),
        };
        let dependent = (0..5).all(|i| (0..5).all(|j| da[i] * db[j] == da[j] * db[i]));
        let p = random_invertible(&mut r, 5);
        let pi = p.inverse().unwrap();
        let a = p.dot(&tri(&mut r, &da)).dot(&pi);
        let b = p.dot(&tri(&mut r, &db)).dot(&pi);
        (a, b, !dependent)
    })
}

fn pencil_cross_check(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&pencil_strategy(), |(a, b, independent)| {
            for sem in [Semantics::RealLike, Semantics::ComplexLike] {
                prop_assert_eq!(nil_independent(&a, &b, sem), independent);
            }
            if independent {
                // 41×41 grid of (α, β) = (i/10, j/10)
                for i in -20i64..=20 {
                    for j in -20i64..=20 {
                        if i == 0 && j == 0 {
                            continue;
                        }
                        let m = a.scale(&q(i, 10)).add(&b.scale(&q(j, 10)));
                        prop_assert!(!is_nilpotent(&m).unwrap(), "nilpotent at ({}, {})", i, j);
                    }
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn exp_nilpotent(m: &Matrix<Q>) -> Matrix<Q> {
    let n = m.rows();
    let mut out = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=n {
        term = term.dot(m).scale(&q(1, k as i64));
        out = out.add(&term);
    }
    out
}

fn transform_once(spec: &ExtensionSpec<Q>, op: u8, r: &mut rand_chacha::ChaCha8Rng) -> Result<(), TestCaseError> {
    use rand::Rng;
    let small = |r: &mut rand_chacha::ChaCha8Rng| Q::from_i64(r.gen_range(-2..=2));
    let t = match op {
        0 => {
            let x: Vec<Q> = (0..5).map(|_| small(r)).collect();
            let m = exp_nilpotent(&spec.nilradical.ad(&x));
            apply_nilradical_automorphism(spec, &m.transpose())
        }
        1 => {
            let alpha: Vec<Q> = (0..5).map(|_| small(r)).collect();
            let beta: Vec<Q> = (0..5).map(|_| small(r)).collect();
            apply_inner_modification(spec, &alpha, &beta)
        }
        _ => {
            let mix = loop {
                let t = random_matrix(r, 2, -2, 2);
                if !t.det().is_zero() {
                    break t;
                }
            };
            let s = Matrix::from_fn(2, 5, |_, _| small(r));
            apply_xy_change(spec, &XYChange::new(mix, s))
        }
    }
    .map_err(|e| TestCaseError::fail(format!("op {op}: {e}")))?;
    prop_assert!(check_compatibility(&t.spec).passed());
    let before = assemble(spec).unwrap();
    let after = assemble(&t.spec).unwrap();
    prop_assert!(verify_certificate(&before, &after, &t.certificate()).unwrap());
    prop_assert_eq!(before.fingerprint(), after.fingerprint());
    Ok(())
}

fn transformation_soundness(cases: u32) -> Result<(), String> {
    let entries = builtin_tables();
    let n = entries.len();
    runner(cases)
        .run(&(0..n, 0u8..3, any::<u64>()), |(k, op, seed)| {
            let e = &entries[k];
            let env = sample_params::<Q>(e, FieldScope::R, 1, 0).points.remove(0);
            let spec = e.instantiate(&env, FieldScope::R).unwrap();
            transform_once(&spec, op, &mut rng(seed))
        })
        .map_err(|e| e.to_string())
}

fn property_suites() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut ok = true;
    let suites: [(&str, fn(u32) -> Result<(), String>, u32); 4] = [
        ("fingerprint invariance x100 per algebra", fingerprint_invariance, 100),
        ("nilpotency criteria x200", nilpotency_agreement, 200),
        ("nil-independence grid x50", pencil_cross_check, 50),
        ("transformation soundness x50", transformation_soundness, 50),
    ];
    for (name, f, cases) in suites {
        let t = Instant::now();
        match f(cases) {
            Ok(()) => parts.push(format!("{name} ok ({:.1} s)", t.elapsed().as_secs_f64())),
            Err(e) => {
                ok = false;
                parts.push(format!("{name} FAILED: {e}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 120.0;
    outcome(ok, format!("{}; total {secs:.1} s", parts.join("; ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 6] = [
        ("1 catalog verification", catalog_verification),
        ("2 count reproduction", count_reproduction),
        ("3 certificate replay", certificate_replay),
        ("4 distinctness", distinctness),
        ("5 nilpotent algebra suite", nilpotent_suite),
        ("6 property suites", property_suites),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let o = f();
        println!("{} criterion {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        if !o.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", 6 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
