//! Randomized properties over dyadic inputs.
//!
//! Generators quantize values to multiples of 1/256 and keep node
//! counts at powers of two plus one, so grid coordinates, dual nodes,
//! and their products stay exactly representable. Zero-tolerance
//! assertions below rely on that: with exact candidates, ties are
//! exact and both transform routes must pick the same index.

use proptest::prelude::*;

use rooftop_core::expr::{self, BinOp, Expr, Func, Var};
use rooftop_core::field::sup_distance;
use rooftop_core::legendre::{
    convexify, inf_convolution, legendre_brute, legendre_classical, neg_legendre,
    neg_legendre_back, DualAxis,
};
use rooftop_core::obstacle::{solve_psor, RooftopObstacle};
use rooftop_core::rooftop::tilted_envelope;
use rooftop_core::{Axis, ScalarField};

fn dyadic_value() -> impl Strategy<Value = f64> {
    (-2048i32..=2048).prop_map(|k| k as f64 / 256.0)
}

fn dyadic_field() -> impl Strategy<Value = ScalarField> {
    (2u32..=8)
        .prop_flat_map(|e| {
            let n = (1usize << e) + 1;
            prop::collection::vec(dyadic_value(), n)
        })
        .prop_map(|values| {
            let axis = Axis::new(-1.0, 1.0, values.len()).unwrap();
            ScalarField::new(vec![axis], values).unwrap()
        })
}

fn dyadic_field_pair() -> impl Strategy<Value = (ScalarField, ScalarField)> {
    (2u32..=7)
        .prop_flat_map(|e| {
            let n = (1usize << e) + 1;
            (
                prop::collection::vec(dyadic_value(), n),
                prop::collection::vec(dyadic_value(), n),
            )
        })
        .prop_map(|(a, b)| {
            let axis = Axis::new(-1.0, 1.0, a.len()).unwrap();
            (
                ScalarField::new(vec![axis], a).unwrap(),
                ScalarField::new(vec![axis], b).unwrap(),
            )
        })
}

fn expr_tree() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0i32..=2048).prop_map(|k| Expr::Num(k as f64 / 256.0)),
        prop_oneof![Just(Var::X), Just(Var::Y), Just(Var::S)].prop_map(Expr::Var),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (
                prop_oneof![
                    Just(BinOp::Add),
                    Just(BinOp::Sub),
                    Just(BinOp::Mul),
                    Just(BinOp::Div)
                ],
                inner.clone(),
                inner.clone()
            )
                .prop_map(|(op, a, b)| Expr::Bin(op, Box::new(a), Box::new(b))),
            (inner.clone(), 0u32..=4).prop_map(|(e, k)| Expr::Pow(Box::new(e), k)),
            (
                prop_oneof![Just(Func::Min), Just(Func::Max)],
                inner.clone(),
                inner.clone()
            )
                .prop_map(|(f, a, b)| Expr::Call(f, vec![a, b])),
            (prop_oneof![Just(Func::Abs), Just(Func::Exp)], inner)
                .prop_map(|(f, a)| Expr::Call(f, vec![a])),
        ]
    })
}

proptest! {
    #[test]
    fn fast_transform_matches_the_brute_oracle(f in dyadic_field()) {
        let dual = DualAxis::covering(&f).unwrap();
        let fast = legendre_classical(&f, &dual).unwrap();
        let brute = legendre_brute(&f, &dual).unwrap();
        prop_assert_eq!(fast.values(), brute.values());
    }

    #[test]
    fn conjugation_reverses_order(pair in dyadic_field_pair()) {
        let (f, bump) = pair;
        let g = f
            .values()
            .iter()
            .zip(bump.values())
            .map(|(&a, &b)| a + b.abs())
            .collect::<Vec<_>>();
        let g = ScalarField::new(f.axes().to_vec(), g).unwrap();
        let dual = DualAxis::covering_pair(&f, &g).unwrap();
        let lf = legendre_classical(&f, &dual).unwrap();
        let lg = legendre_classical(&g, &dual).unwrap();
        for (a, b) in lf.values().iter().zip(lg.values()) {
            prop_assert!(a >= b);
        }
    }

    #[test]
    fn convexify_is_a_minorant_idempotent_and_lipschitz(f in dyadic_field()) {
        let hull = convexify(&f).unwrap();
        for (h, v) in hull.values().iter().zip(f.values()) {
            prop_assert!(h <= v);
        }
        let again = convexify(&hull).unwrap();
        for (a, h) in again.values().iter().zip(hull.values()) {
            prop_assert!(a <= h);
        }
        prop_assert!(sup_distance(&again, &hull).unwrap() <= 1e-12);
        prop_assert!(hull.lipschitz_seminorm() <= f.lipschitz_seminorm());
        let (violation, _) = hull.convexity_violation();
        prop_assert!(violation <= 1e-12);
    }

    #[test]
    fn double_conjugation_brackets_the_hull(f in dyadic_field()) {
        let axis = f.axes()[0];
        let dual = DualAxis::covering(&f).unwrap();
        let star = neg_legendre(&f, &dual).unwrap();
        let back = neg_legendre_back(&star, &axis).unwrap();
        let hull = convexify(&f).unwrap();
        let bound = 2.0 * dual.axis().h() * (axis.max() - axis.min());
        for i in 0..f.len() {
            prop_assert!(back.at(i) <= hull.at(i) + 1e-12);
            prop_assert!(back.at(i) >= hull.at(i) - bound - 1e-12);
        }
    }

    #[test]
    fn refinement_coarsens_back_exactly(f in dyadic_field()) {
        let fine = f.refine();
        let round_trip = fine.coarsen().unwrap();
        prop_assert_eq!(round_trip.values(), f.values());
        prop_assert!(fine.lipschitz_seminorm() <= f.lipschitz_seminorm() + 1e-9);
    }

    #[test]
    fn inf_convolution_is_dominated_by_the_blend(
        pair in dyadic_field_pair(),
        sixteenths in 0u32..=16,
    ) {
        let (f, g) = pair;
        let s = sixteenths as f64 / 16.0;
        let conv = inf_convolution(&f, &g, s).unwrap();
        for i in 0..f.len() {
            let blend = (1.0 - s) * f.at(i) + s * g.at(i);
            prop_assert!(conv.at(i) <= blend);
        }
    }

    #[test]
    fn tilted_envelope_is_monotone_in_the_tilt(
        pair in dyadic_field_pair(),
        lo in -64i32..=64,
        step in 0i32..=64,
    ) {
        let (f, g) = pair;
        let sigma = lo as f64 / 16.0;
        let higher = (lo + step) as f64 / 16.0;
        let a = tilted_envelope(&f, &g, sigma).unwrap();
        let b = tilted_envelope(&f, &g, higher).unwrap();
        for i in 0..a.len() {
            prop_assert!(b.at(i) <= a.at(i) + 1e-12);
        }
    }

    #[test]
    fn printed_expressions_parse_back_to_the_same_tree(e in expr_tree()) {
        let text = e.to_string();
        let parsed = expr::parse(&text).unwrap();
        prop_assert_eq!(parsed, e);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn psor_flattens_random_rooftops_to_the_hull(
        pair in dyadic_field_pair(),
    ) {
        let (b0, b1) = pair;
        let obs = RooftopObstacle::new(b0, b1).unwrap();
        let tol = 1e-8;
        let sol = solve_psor(&obs, tol, 200_000, 1.7).unwrap();
        let g = obs.min();
        let hull = convexify(&g).unwrap();
        for i in 0..g.len() {
            prop_assert!(sol.u.at(i) <= g.at(i) + 1e-12);
        }
        prop_assert!(sol.residual_complementarity <= 10.0 * tol);
        prop_assert!(sup_distance(&sol.u, &hull).unwrap() <= 100.0 * tol);
    }
}
