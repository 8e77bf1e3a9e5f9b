mod common;

use common::*;
use proptest::prelude::*;
use solvext::catalog::*;
use solvext::{Error, LieAlgebra, Scalar, Q};

fn parse_err(text: &str) -> ParseError {
    parse_catalog(text).expect_err("should not parse")
}

#[test]
fn builtin_counts_per_nilradical() {
    let t = builtin_tables();
    assert_eq!(t.len(), 31);
    let r = counts_by_nilradical(&t, FieldScope::R);
    let c = counts_by_nilradical(&t, FieldScope::C);
    assert_eq!(r.get("g1g4"), Some(&12));
    assert_eq!(r.get("g52"), Some(&16));
    assert_eq!(c.get("g52"), Some(&12));
    for id in ["g53", "g55"] {
        assert_eq!(r.get(id), Some(&1), "{id}");
        assert_eq!(c.get(id), Some(&1), "{id}");
    }
}

#[test]
fn builtin_round_trips_through_the_printer() {
    let t = builtin_tables();
    let printed = print_catalog(&t);
    let again = parse_catalog(&printed).unwrap();
    assert_eq!(again, t);
    assert_eq!(print_catalog(&again), printed);
}

#[test]
fn parse_errors_carry_positions() {
    let e = parse_err("algebra S.L1 nilradical g52 field RC\n  A = diag(0, 1, 1, 1)\n  B = diag(1, 0, 1, 2, 0)\n");
    assert_eq!((e.line, e.col), (2, 7));
    assert_eq!(e.msg, "diag has 4 slots, expected 5");
    assert_eq!(e.to_string(), "line 2, column 7: diag has 4 slots, expected 5");

    let e = parse_err("algebra S.L1 nilradical g99 field RC\n  A = diag(0, 0, 0, 0, 1)\n  B = diag(1, 0, 0, 0, 0)\n");
    assert_eq!((e.line, e.col), (1, 25));
    assert_eq!(e.msg, "unknown nilradical 'g99'");

    let e = parse_err("algebra S.L1 nilradical g52 field RC\n  A = diag(0, 0, 0, 0, a)\n  B = diag(1, 0, 0, 0, 0)\n");
    assert_eq!(e.msg, "undeclared parameter 'a' in S.L1");

    let e = parse_err("algebra S.L1 nilradical g52 field RQ\n");
    assert!(e.msg.starts_with("expected R, C or RC"), "{}", e.msg);
    assert_eq!(e.line, 1);

    let e = parse_err("algebra S.L1 nilradical g52 field RC\n  A = diag(0, 0, 0, 0, 0) + E(6, 1)\n  B = diag(1, 0, 0, 0, 0)\n");
    assert_eq!(e.msg, "E(6, 1) out of range");

    let one = "algebra S.L1 nilradical g52 field RC\n  A = diag(1, 0, 0, 1, 1)\n  B = diag(0, 0, 1, 0, 1)\n";
    let e = parse_err(&format!("{one}{one}"));
    assert_eq!((e.line, e.msg.as_str()), (4, "duplicate algebra name 'S.L1'"));
}

#[test]
fn rotation_blocks_fill_two_slots() {
    let text = "algebra R.L1 nilradical g52 field R\n  A = diag(a, S(0, 1), S(a, 1))\n  B = diag(1, 0, 0, 0, 0) + E(2, 5)\n  params a\n";
    let e = &parse_catalog(text).unwrap()[0];
    let env = parse_assignment::<Q>("a=3").unwrap();
    let a = e.a.eval(&env).unwrap();
    let want: solvext::Matrix<Q> =
        solvext::Matrix::from_i64(&[&[3, 0, 0, 0, 0], &[0, 0, 1, 0, 0], &[0, -1, 0, 0, 0], &[0, 0, 0, 3, 1], &[0, 0, 0, -1, 3]]);
    assert_eq!(a, want);
    let b = e.b.eval(&env).unwrap();
    assert_eq!(b[(1, 4)], q(1, 1));
    assert_eq!(b[(0, 0)], q(1, 1));
}

#[test]
fn expressions_evaluate_exactly() {
    let env = parse_assignment::<Q>("a=1/2,b=-3").unwrap();
    let e = parse_expr("(1 + a)^2 - b/4").unwrap();
    assert_eq!(e.eval(&env).unwrap(), q(3, 1));
    let e = parse_expr("1/(a - 1/2)").unwrap();
    assert!(matches!(e.eval(&env), Err(Error::Eval(_))));
    let e = parse_expr("c + 1").unwrap();
    assert!(e.eval(&env).is_err());
    assert!(parse_expr("1 +").is_err());
    assert!(parse_assignment::<Q>("a").is_err());
}

#[test]
fn constraints_are_scoped_by_field() {
    let t28 = entry("T2.L8");
    let at = |d: i64| parse_assignment::<Q>(&format!("a=1,d={d}")).unwrap();
    assert!(t28.check_assignment(&at(1), FieldScope::R).is_ok());
    assert!(t28.check_assignment(&at(-1), FieldScope::R).is_ok());
    assert!(t28.check_assignment(&at(-1), FieldScope::C).is_err());
    assert!(matches!(t28.instantiate(&at(2), FieldScope::R), Err(Error::Constraint(_))));
    assert!(t28.instantiate_unchecked(&at(2)).is_ok());

    let t34 = entry("T3.L4");
    let bad = parse_assignment::<Q>("a=-1,b=0").unwrap();
    assert!(t34.check_assignment(&bad, FieldScope::R).is_err());
    assert!(t34.check_assignment(&parse_assignment::<Q>("a=-1,b=1").unwrap(), FieldScope::R).is_ok());
    let missing = parse_assignment::<Q>("a=1").unwrap();
    assert!(t34.check_assignment(&missing, FieldScope::R).is_err());
}

#[test]
fn point_labels_follow_parameter_order() {
    let e = entry("T3.L4");
    let env = parse_assignment::<Q>("b=3,a=-1/2").unwrap();
    assert_eq!(e.point_label(&env), "T3.L4@a=-1/2,b=3");
    assert_eq!(entry("T2.L1").point_label(&env), "T2.L1");
}

#[test]
fn relabeled_nilradicals_resolve() {
    let g53: LieAlgebra<Q> = resolve_nilradical(&entry("G53.L1").nilradical).unwrap();
    assert!(g53.jacobi_check().is_empty());
    assert_eq!(g53.lower_central_series().dims(), [5, 2, 1, 0]);
    assert_eq!(entry("G53.L1").nilradical.to_string(), "g53[5,3,4,1,2]");
    let plain: LieAlgebra<Q> = builtin_nilradical("g53").unwrap();
    assert_eq!(g53.fingerprint(), plain.fingerprint());
    assert_ne!(g53.tensor(), plain.tensor());
}

#[test]
fn sampling_is_deterministic_and_respects_constraints() {
    for e in builtin_tables() {
        for field in [FieldScope::R, FieldScope::C] {
            if !e.field.includes(field) {
                continue;
            }
            let s1 = sample_params::<Q>(&e, field, 5, 0);
            assert_eq!(s1, sample_params::<Q>(&e, field, 5, 0));
            for p in &s1.points {
                assert!(e.check_assignment(p, field).is_ok(), "{} {}", e.name, fmt_assignment(p));
            }
            let distinct: std::collections::BTreeSet<String> = s1.points.iter().map(fmt_assignment).collect();
            assert_eq!(distinct.len(), s1.points.len());
        }
    }
    // no parameters: one point only
    let s = sample_params::<Q>(&entry("T2.L1"), FieldScope::R, 5, 0);
    assert_eq!((s.points.len(), s.short), (1, true));
    // discrete constraint: s in {0, 1}
    let s = sample_params::<Q>(&entry("T3.L1"), FieldScope::R, 5, 0);
    assert_eq!(s.points.len(), 2);
}

#[test]
fn boundary_neighbour_is_sampled() {
    // a >= 0 has boundary 0, so 1/3 is offered next to the pool values
    let s = sample_params::<Q>(&entry("T3.R13"), FieldScope::R, 5, 0);
    assert_eq!(s.points.len(), 5);
    assert!(s.points.iter().any(|p| p["a"] == q(1, 3)), "{:?}", s.points);
    assert!(s.points.iter().all(|p| p["a"] >= q(0, 1)));
}

#[test]
fn equivalence_samples_satisfy_their_guard() {
    let e = entry("T3.L4");
    let eq = &e.equivs[0];
    let pts = sample_equivalence::<Q>(&e, eq, 5, 0);
    assert_eq!(pts.len(), 5);
    for (env, lhs, rhs) in pts {
        assert_ne!(env["b"], q(0, 1));
        assert_eq!(lhs, env);
        assert_eq!(rhs["a"], -env["a"].clone() / env["b"].clone());
        assert_eq!(rhs["b"], q(1, 1) / env["b"].clone());
    }
}

/// Random expression text together with its value at `a = 2/3, b = -5/4`,
/// computed alongside. Division is kept away from zero by construction.
fn expr_strategy() -> impl Strategy<Value = (String, Q)> {
    let leaf = prop_oneof![
        (-9i64..=9).prop_map(|v| (format!("{v}"), Q::from_i64(v))),
        Just(("a".to_string(), q(2, 3))),
        Just(("b".to_string(), q(-5, 4))),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|((x, u), (y, v))| (format!("({x} + {y})"), u + v)),
            (inner.clone(), inner.clone()).prop_map(|((x, u), (y, v))| (format!("({x} - {y})"), u - v)),
            (inner.clone(), inner.clone()).prop_map(|((x, u), (y, v))| (format!("{x}*{y}"), u * v)),
            (inner.clone(), 1i64..=7).prop_map(|((x, u), d)| (format!("({x})/{d}"), u / Q::from_i64(d))),
            inner.clone().prop_map(|(x, u)| (format!("-({x})"), -u)),
            inner.prop_map(|(x, u)| (format!("({x})^2"), u.clone() * u)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn expressions_round_trip_through_display((text, value) in expr_strategy()) {
        let env = parse_assignment::<Q>("a=2/3,b=-5/4").unwrap();
        let e = parse_expr(&text).unwrap();
        prop_assert_eq!(e.eval(&env).unwrap(), value.clone());
        let shown = e.to_string();
        let again = parse_expr(&shown).unwrap();
        prop_assert_eq!(again.eval(&env).unwrap(), value);
        prop_assert_eq!(again.to_string(), shown);
    }

    #[test]
    fn reseeded_samples_still_satisfy_constraints(seed in 1u64..10_000, idx in 0usize..31) {
        let e = &builtin_tables()[idx];
        let s = sample_params::<Q>(e, FieldScope::R, 5, seed);
        for p in &s.points {
            prop_assert!(e.check_assignment(p, FieldScope::R).is_ok());
        }
        prop_assert!(s.points.len() == 5 || s.short);
    }
}
