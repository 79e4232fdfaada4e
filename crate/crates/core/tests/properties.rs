//! Property-based invariants of the basis, the operators and the CSV format.

use proptest::prelude::*;
use skl::expr::Expr;
use skl::numerics::binomial_f64;
use skl::table::{fmt_sig, quantize};
use skl::{
    apply, apply_bi, binomial, BasisParams, BivariateConfig, BivariateTarget, OperatorConfig,
    Polynomial, TargetFunction,
};

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(-3.0f64..3.0, 1..5).prop_map(Polynomial::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn binomial_symmetry(n in 0i64..200, k in 0i64..200) {
        prop_assume!(k <= n);
        let a = binomial(n, k).unwrap().to_f64();
        let b = binomial(n, n - k).unwrap().to_f64();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        prop_assert_eq!(binomial_f64(n, k + n + 1), 0.0);
    }

    #[test]
    fn partition_of_unity(m in 2u32..=100, q in 0u32..=10, lambda in 0.0f64..=1.0, y in 0.0f64..=1.0) {
        let row = BasisParams::new(m, q, lambda).unwrap().basis_row(y).unwrap();
        prop_assert_eq!(row.len() as u32, m + q + 1);
        prop_assert!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!(row.iter().all(|&w| w >= -1e-14));
    }

    #[test]
    fn basis_is_affine_in_lambda(m in 2u32..=60, q in 0u32..=6, lambda in 0.0f64..=1.0, y in 0.0f64..=1.0) {
        let at = |l: f64| BasisParams::new(m, q, l).unwrap().basis_row(y).unwrap();
        let (p0, p1, pl) = (at(0.0), at(1.0), at(lambda));
        for i in 0..pl.len() {
            let mixed = (1.0 - lambda) * p0[i] + lambda * p1[i];
            prop_assert!((pl[i] - mixed).abs() <= 1e-13);
        }
    }

    #[test]
    fn operator_is_linear(
        m in 2u32..=30, q in 0u32..=4, lambda in 0.0f64..=1.0, rho in 0.2f64..3.0,
        u in 0.0f64..=1.0, a in -2.0f64..2.0, b in -2.0f64..2.0, f in poly(), g in poly(),
    ) {
        let cfg = OperatorConfig::new(m, q, lambda, rho).unwrap();
        let (f2, g2) = (f.clone(), g.clone());
        let combo = TargetFunction::custom(move |y| a * f2.eval(y) + b * g2.eval(y));
        let lhs = apply(&cfg, &combo, u).unwrap();
        let rhs = a * apply(&cfg, &f.into(), u).unwrap() + b * apply(&cfg, &g.into(), u).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-11);
    }

    #[test]
    fn operator_is_positive(
        m in 2u32..=30, q in 0u32..=4, lambda in 0.0f64..=1.0, rho in 0.2f64..3.0,
        u in 0.0f64..=1.0, c in 0.0f64..=1.2,
    ) {
        let cfg = OperatorConfig::new(m, q, lambda, rho).unwrap();
        let f = TargetFunction::custom(move |y| (y - c).abs());
        prop_assert!(apply(&cfg, &f, u).unwrap() >= -1e-14);
    }

    #[test]
    fn bivariate_is_symmetric_under_swap(
        m1 in 2u32..=12, m2 in 2u32..=12, q in 0u32..=3, l1 in 0.0f64..=1.0, l2 in 0.0f64..=1.0,
        y1 in 0.0f64..=1.0, y2 in 0.0f64..=1.0, f in poly(), g in poly(),
    ) {
        let cfg = BivariateConfig::new(
            OperatorConfig::new(m1, q, l1, 1.0).unwrap(),
            OperatorConfig::new(m2, q, l2, 1.0).unwrap(),
        ).unwrap();
        let target = BivariateTarget::separable(f.into(), g.into());
        let direct = apply_bi(&cfg, &target, y1, y2).unwrap();
        let swapped = apply_bi(&cfg.swapped(), &target.transposed(), y2, y1).unwrap();
        prop_assert!((direct - swapped).abs() <= 1e-12 * direct.abs().max(1.0));
    }

    #[test]
    fn csv_numbers_round_trip(v in prop::num::f64::NORMAL) {
        let text = fmt_sig(v);
        let back: f64 = text.parse().unwrap();
        prop_assert!((back - v).abs() <= 1e-11 * v.abs());
        prop_assert_eq!(quantize(back), back);
    }

    #[test]
    fn polynomial_expressions_match_horner(c in prop::collection::vec(-5i32..5, 1..5), y in -2.0f64..2.0) {
        let text = c
            .iter()
            .enumerate()
            .map(|(k, a)| format!("({a})*y^{k}"))
            .collect::<Vec<_>>()
            .join(" + ");
        let e = Expr::parse(&text).unwrap();
        let p = Polynomial::new(c.iter().map(|&a| a as f64).collect());
        prop_assert!((e.eval([y, 0.0]) - p.eval(y)).abs() <= 1e-12 * p.eval(y).abs().max(1.0));
        let reparsed = Expr::parse(&e.to_string()).unwrap();
        prop_assert_eq!(reparsed.eval([y, 0.0]), e.eval([y, 0.0]));
    }
}
