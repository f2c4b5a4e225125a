//! Acceptance battery. Each test pins one contract of the workspace
//! with explicit tolerances and runtime budgets and prints a one-line
//! verdict; together they are the release gate for both crates.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use rooftop_cli::format::RunReport;
use rooftop_core::field::sup_distance;
use rooftop_core::fixtures::{convex_field, joint_grid, jointly_convex_field, lipschitz_field};
use rooftop_core::geodesic::{
    bremermann_dual, fiberwise_lipschitz_check, geodesic_infconv, geodesic_rooftop,
    geodesic_semmes, required_sigma_window, GeodesicSolution,
};
use rooftop_core::legendre::{convexify, legendre_brute, legendre_classical, DualAxis};
use rooftop_core::obstacle::{
    berman_convexify_1d, solve_penalty, solve_psor, verify_c11, verify_cushion,
    verify_family_laplacian, verify_quadratic_growth, RooftopObstacle,
};
use rooftop_core::report::CheckStatus;
use rooftop_core::rooftop::{compose_check, partial_min, tilted_envelope, RooftopFamily};
use rooftop_core::{Axis, ScalarField};

fn field_1d(min: f64, max: f64, n: usize, f: impl Fn(f64) -> f64) -> ScalarField {
    ScalarField::from_fn_1d(Axis::new(min, max, n).unwrap(), f).unwrap()
}

fn unit_strip(n: usize) -> Axis {
    Axis::new(0.0, 1.0, n).unwrap()
}

fn within_budget(name: &str, start: Instant, budget_s: f64) {
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        elapsed < budget_s,
        "{name} took {elapsed:.2} s, budget {budget_s} s"
    );
}

#[test]
fn a01_fast_transform_equals_the_brute_oracle() {
    let start = Instant::now();
    let axis = Axis::new(-1.0, 1.0, 1025).unwrap();
    for seed in 0..50 {
        let f = lipschitz_field(seed, axis);
        let dual = DualAxis::covering(&f).unwrap();
        let fast = legendre_classical(&f, &dual).unwrap();
        let brute = legendre_brute(&f, &dual).unwrap();
        assert_eq!(fast.values(), brute.values(), "seed {seed}");
    }
    within_budget("a01", start, 1.0);
    println!("a01 conjugate-oracle-equivalence: PASS (fast == brute bitwise, 50 seeds, n = 1025)");
}

#[test]
fn a02_double_conjugation_stays_in_its_budget() {
    let start = Instant::now();
    let axis = Axis::new(-1.0, 1.0, 257).unwrap();
    let dual = DualAxis::new(Axis::new(-4.0, 4.0, 129).unwrap());
    let budget = 2.0 * dual.axis().h() * (axis.max() - axis.min());
    let mut worst = 0.0f64;
    for seed in 0..20 {
        let f = convex_field(seed, axis);
        let star = legendre_classical(&f, &dual).unwrap();
        let back = legendre_classical(&star, &DualAxis::new(axis)).unwrap();
        let d = sup_distance(&back, &f).unwrap();
        assert!(d <= budget, "seed {seed}: {d:e} > {budget:e}");
        worst = worst.max(d);
    }
    let p = field_1d(-4.0, 4.0, 257, |x| 0.5 * x * x);
    let pd = DualAxis::new(Axis::new(-4.0, 4.0, 257).unwrap());
    let star = legendre_classical(&p, &pd).unwrap();
    let back = legendre_classical(&star, &DualAxis::new(p.axes()[0])).unwrap();
    let exact = sup_distance(&back, &p).unwrap();
    assert!(exact <= 1e-9, "matched parabola: {exact:e} > 1e-9");
    within_budget("a02", start, 1.0);
    println!(
        "a02 double-conjugation: PASS (seeded worst {worst:.3e} <= {budget:.3e}, \
         matched parabola {exact:.1e} <= 1e-9)"
    );
}

fn parabola_routes(
    x_axis: Axis,
    s_axis: Axis,
    sigma_axis: Axis,
) -> [GeodesicSolution; 3] {
    let psi0 = ScalarField::from_fn_1d(x_axis, |x| x * x).unwrap();
    let psi1 = ScalarField::from_fn_1d(x_axis, |x| (x - 1.0) * (x - 1.0)).unwrap();
    [
        geodesic_semmes(&psi0, &psi1, s_axis).unwrap(),
        geodesic_infconv(&psi0, &psi1, s_axis).unwrap(),
        geodesic_rooftop(&psi0, &psi1, s_axis, sigma_axis).unwrap(),
    ]
}

#[test]
fn a03_three_geodesic_routes_agree_and_match_the_closed_form() {
    let start = Instant::now();
    let x_axis = Axis::new(-2.0, 3.0, 512).unwrap();
    let s_axis = unit_strip(65);
    let sigma_axis = Axis::new(-6.0, 6.0, 513).unwrap();
    let tol = 5.0 * (x_axis.h() + sigma_axis.h());

    let routes = parabola_routes(x_axis, s_axis, sigma_axis);
    let mut pairwise = 0.0f64;
    for i in 0..3 {
        for j in i + 1..3 {
            pairwise =
                pairwise.max(sup_distance(&routes[i].field, &routes[j].field).unwrap());
        }
    }
    assert!(pairwise <= tol, "pairwise {pairwise:e} > {tol:e}");

    // The window truncates the optimal splittings near its edges, so
    // all routes compute the window-constrained geodesic there. The
    // closed form is the unconstrained one; the comparison therefore
    // runs on a window padded by the maximal splitting shift (one
    // unit) at the same spacing and reads off the original nodes.
    let pad = (1.0 / x_axis.h()).ceil() as usize + 2;
    let pad_axis = Axis::new(
        x_axis.min() - pad as f64 * x_axis.h(),
        x_axis.max() + pad as f64 * x_axis.h(),
        x_axis.len() + 2 * pad,
    )
    .unwrap();
    let p0 = ScalarField::from_fn_1d(pad_axis, |x| x * x).unwrap();
    let p1 = ScalarField::from_fn_1d(pad_axis, |x| (x - 1.0) * (x - 1.0)).unwrap();
    let (lo, hi) = required_sigma_window(&p0, &p1).unwrap();
    let n_sigma = ((hi - lo) / sigma_axis.h()).ceil() as usize + 1;
    let pad_sigma = Axis::new(lo, hi, n_sigma).unwrap();
    let padded = [
        geodesic_semmes(&p0, &p1, s_axis).unwrap(),
        geodesic_infconv(&p0, &p1, s_axis).unwrap(),
        geodesic_rooftop(&p0, &p1, s_axis, pad_sigma).unwrap(),
    ];
    let mut closed = 0.0f64;
    for g in &padded {
        let inner = g
            .field
            .restrict(&[0, pad], &[s_axis.len() - 1, pad + x_axis.len() - 1]);
        let (sa, xa) = (inner.axes()[0], inner.axes()[1]);
        let mut worst = 0.0f64;
        for k in 0..sa.len() {
            let s = sa.node(k);
            for i in 0..xa.len() {
                let x = xa.node(i);
                worst = worst.max((inner.at2(k, i) - (x - s) * (x - s)).abs());
            }
        }
        assert!(
            worst <= tol,
            "{} vs closed form: {worst:e} > {tol:e}",
            g.method.name()
        );
        closed = closed.max(worst);
    }
    within_budget("a03", start, 30.0);
    println!(
        "a03 three-route-agreement: PASS (pairwise {pairwise:.3e}, closed form {closed:.3e}, \
         tol {tol:.3e})"
    );
}

#[test]
fn a04_bremermann_dual_reproduces_the_tilted_envelopes() {
    let start = Instant::now();
    let x_axis = Axis::new(-2.0, 3.0, 512).unwrap();
    let s_axis = unit_strip(65);
    let sigma_axis = Axis::new(-6.0, 6.0, 513).unwrap();
    let psi0 = ScalarField::from_fn_1d(x_axis, |x| x * x).unwrap();
    let psi1 = ScalarField::from_fn_1d(x_axis, |x| (x - 1.0) * (x - 1.0)).unwrap();
    let tol = 5.0 * (x_axis.h() + sigma_axis.h());
    let g = geodesic_rooftop(&psi0, &psi1, s_axis, sigma_axis).unwrap();
    let dual = bremermann_dual(&g, sigma_axis).unwrap();
    let mut parabola_worst = 0.0f64;
    for j in 0..sigma_axis.len() {
        let env = tilted_envelope(&psi0, &psi1, sigma_axis.node(j)).unwrap();
        let d = sup_distance(&dual.row(j).unwrap(), &env).unwrap();
        assert!(d <= tol, "parabola tilt node {j}: {d:e} > {tol:e}");
        parabola_worst = parabola_worst.max(d);
    }

    let axis = Axis::new(-1.0, 1.0, 129).unwrap();
    let mut seeded_worst = 0.0f64;
    for seed in 0..10 {
        let f0 = convex_field(seed, axis);
        let f1 = convex_field(seed + 100, axis);
        let (lo, hi) = required_sigma_window(&f0, &f1).unwrap();
        let sig = Axis::new(lo, hi, 129).unwrap();
        let stol = 5.0 * (axis.h() + sig.h());
        let g = geodesic_rooftop(&f0, &f1, unit_strip(33), sig).unwrap();
        let dual = bremermann_dual(&g, sig).unwrap();
        for j in 0..sig.len() {
            let env = tilted_envelope(&f0, &f1, sig.node(j)).unwrap();
            let d = sup_distance(&dual.row(j).unwrap(), &env).unwrap();
            assert!(d <= stol, "seed {seed}, tilt node {j}: {d:e} > {stol:e}");
            seeded_worst = seeded_worst.max(d);
        }
    }
    within_budget("a04", start, 30.0);
    println!(
        "a04 dual-identity: PASS (parabola worst {parabola_worst:.3e} <= {tol:.3e}, \
         10 seeded pairs worst {seeded_worst:.3e})"
    );
}

#[test]
fn a05_partial_minimum_preserves_convexity() {
    let start = Instant::now();
    for seed in 0..20 {
        let psi = jointly_convex_field(seed);
        let m = partial_min(&psi).unwrap();
        let (v, loc) = m.convexity_violation();
        assert!(v <= 0.0, "seed {seed}: violation {v:e} at {loc:?}");
    }
    let (s_axis, x_axis) = joint_grid();
    let saddle = ScalarField::from_fn_2d(s_axis, x_axis, |s, x| -s * x).unwrap();
    let (v, _) = partial_min(&saddle).unwrap().convexity_violation();
    assert!(v > 0.0, "the saddle must fail the convexity test, got {v:e}");
    within_budget("a05", start, 2.0);
    println!(
        "a05 kiselman-convexity: PASS (20 seeds convex at zero tolerance, \
         saddle flagged with violation {v:.3e})"
    );
}

#[test]
fn a06_obstacle_solvers_agree_with_the_oracles() {
    let start = Instant::now();
    let tol = 1e-8;

    let b0 = field_1d(-1.0, 2.0, 97, |x| x * x);
    let b1 = field_1d(-1.0, 2.0, 97, |x| (x - 1.0) * (x - 1.0));
    let obs = RooftopObstacle::new(b0, b1).unwrap();
    let sol = solve_psor(&obs, tol, 200_000, 1.9).unwrap();
    let mid = sol.u.axes()[0].nearest(0.5);
    let at_half = sol.u.at(mid).abs();
    assert!(at_half <= 10.0 * tol, "u(0.5) = {at_half:e} > 10 tol");
    let hull = convexify(&obs.min()).unwrap();
    let to_hull = sup_distance(&sol.u, &hull).unwrap();
    assert!(to_hull <= 10.0 * tol, "hull distance {to_hull:e} > 10 tol");
    assert!(sol.residual_complementarity <= tol);

    let a0 = Axis::new(-1.0, 2.0, 129).unwrap();
    let a1 = Axis::new(-1.0, 1.0, 97).unwrap();
    let c0 = ScalarField::from_fn_2d(a0, a1, |x, y| x * x + y * y).unwrap();
    let c1 = ScalarField::from_fn_2d(a0, a1, |x, y| (x - 1.0) * (x - 1.0) + y * y).unwrap();
    let obs2 = RooftopObstacle::new(c0, c1).unwrap();
    let psor = solve_psor(&obs2, tol, 400_000, 1.9).unwrap();
    let pen = solve_penalty(&obs2, 1e4, tol, 400_000).unwrap();
    let bound = 1e-3 * (1.0 + obs2.min().sup_norm());
    let gap = sup_distance(&psor.u, &pen.u).unwrap();
    assert!(gap <= bound, "psor vs penalty: {gap:e} > {bound:e}");
    assert!(psor.residual_complementarity <= tol);
    within_budget("a06", start, 30.0);
    println!(
        "a06 obstacle-solvers: PASS (u(0.5) {at_half:.1e}, hull {to_hull:.1e}, \
         2d psor-penalty gap {gap:.3e} <= {bound:.3e})"
    );
}

fn ridge_fixtures() -> Vec<(&'static str, RooftopObstacle)> {
    let a0 = Axis::new(-1.0, 2.0, 49).unwrap();
    let a1 = Axis::new(-1.0, 1.0, 33).unwrap();
    let pair = |b0: fn(f64, f64) -> f64, b1: fn(f64, f64) -> f64| {
        RooftopObstacle::new(
            ScalarField::from_fn_2d(a0, a1, b0).unwrap(),
            ScalarField::from_fn_2d(a0, a1, b1).unwrap(),
        )
        .unwrap()
    };
    vec![
        ("straight-ridge", pair(|x, y| x * x + y * y, |x, y| (x - 1.0) * (x - 1.0) + y * y)),
        (
            "slanted-ridge",
            pair(
                |x, y| x * x + y * y,
                |x, y| (x - 1.0) * (x - 1.0) + (y - 0.25) * (y - 0.25),
            ),
        ),
        (
            "anisotropic-ridge",
            pair(
                |x, y| x * x + 2.0 * y * y,
                |x, y| (x - 1.0) * (x - 1.0) + 2.0 * y * y,
            ),
        ),
    ]
}

#[test]
fn a07_cushion_constants_are_positive_and_stable() {
    let start = Instant::now();
    let b0 = field_1d(-1.0, 2.0, 97, |x| x * x);
    let b1 = field_1d(-1.0, 2.0, 97, |x| (x - 1.0) * (x - 1.0));
    let obs = RooftopObstacle::new(b0, b1).unwrap();
    let sol = solve_psor(&obs, 1e-9, 200_000, 1.9).unwrap();
    let r = verify_cushion(&sol, &obs, 0.5).unwrap();
    assert!(r.pass, "{r}");
    let c = r.metric("c_emp").unwrap();
    let cell = sol.u.axes()[0].h();
    assert!((c - 0.25).abs() <= cell, "c_emp = {c}, expected 0.25 within {cell}");

    let mut factors = Vec::new();
    for (tag, obs2) in ridge_fixtures() {
        let sol2 = solve_psor(&obs2, 1e-8, 200_000, 1.9).unwrap();
        let r2 = verify_cushion(&sol2, &obs2, 0.5).unwrap();
        assert!(r2.pass, "{tag}: {r2}");
        assert!(r2.metric("c_emp").unwrap() > 0.0, "{tag}: c_emp not positive");
        assert!(
            r2.worst_violation <= 2.0,
            "{tag}: refinement factor {} > 2",
            r2.worst_violation
        );
        factors.push(r2.worst_violation);
    }
    within_budget("a07", start, 60.0);
    println!(
        "a07 cushion-ball: PASS (1d c_emp {c:.4} = 0.25 +- {cell}, \
         2d refinement factors {factors:?})"
    );
}

#[test]
fn a08_quadratic_growth_is_bounded_and_stable() {
    let start = Instant::now();
    let b0 = field_1d(-1.0, 2.0, 97, |x| x * x);
    let b1 = field_1d(-1.0, 2.0, 97, |x| (x - 1.0) * (x - 1.0));
    let obs = RooftopObstacle::new(b0, b1).unwrap();
    let sol = solve_psor(&obs, 1e-9, 200_000, 1.9).unwrap();
    let r = verify_quadratic_growth(&sol, &obs).unwrap();
    assert!(r.pass, "{r}");
    let q = r.metric("q_max").unwrap();
    assert!((q - 1.0).abs() <= 0.1, "1d q_max = {q}, expected 1 within 10%");

    let mut q2d = Vec::new();
    for (tag, obs2) in ridge_fixtures() {
        let sol2 = solve_psor(&obs2, 1e-8, 200_000, 1.9).unwrap();
        let r2 = verify_quadratic_growth(&sol2, &obs2).unwrap();
        assert!(r2.pass, "{tag}: {r2}");
        let coarse = r2.metric("q_max").unwrap();
        let fine = r2.metric("q_refined").unwrap();
        assert!(coarse.is_finite(), "{tag}: q_max not finite");
        assert!(
            fine <= 2.0 * coarse + 1e-12,
            "{tag}: q grew {coarse} -> {fine} under refinement"
        );
        q2d.push(coarse);
    }
    within_budget("a08", start, 60.0);
    println!("a08 quadratic-growth: PASS (1d q_max {q:.3}, 2d q_max {q2d:?})");
}

#[test]
fn a09_interior_c11_matches_the_obstacle_curvature() {
    let start = Instant::now();
    let b0 = field_1d(-1.0, 2.0, 97, |x| x * x);
    let b1 = field_1d(-1.0, 2.0, 97, |x| (x - 1.0) * (x - 1.0));
    let obs = RooftopObstacle::new(b0, b1).unwrap();
    let sol = solve_psor(&obs, 1e-9, 200_000, 1.9).unwrap();
    let r = verify_c11(&sol, &obs).unwrap();
    assert!(r.pass, "{r}");
    let s = r.metric("seminorm").unwrap();
    assert!((s - 2.0).abs() <= 0.2, "1d seminorm = {s}, expected 2 within 10%");

    let mut s2d = Vec::new();
    for (tag, obs2) in ridge_fixtures() {
        let sol2 = solve_psor(&obs2, 1e-8, 200_000, 1.9).unwrap();
        let r2 = verify_c11(&sol2, &obs2).unwrap();
        assert!(r2.pass, "{tag}: {r2}");
        let sem = r2.metric("seminorm").unwrap();
        let cap = 1.25 * obs2.b0().c11_seminorm().unwrap().max(obs2.b1().c11_seminorm().unwrap())
            + 0.1;
        assert!(sem <= cap, "{tag}: seminorm {sem} > {cap}");
        assert!(
            r2.metric("drift").unwrap() <= 0.25,
            "{tag}: drift {} > 25%",
            r2.metric("drift").unwrap()
        );
        s2d.push(sem);
    }
    within_budget("a09", start, 60.0);
    println!("a09 interior-c11: PASS (1d seminorm {s:.3}, 2d seminorms {s2d:?})");
}

#[test]
fn a10_convexification_preserves_lipschitz_budgets() {
    let start = Instant::now();
    let axis = Axis::new(-1.0, 1.0, 257).unwrap();
    for seed in 0..50 {
        let v = lipschitz_field(seed, axis);
        let hull = convexify(&v).unwrap();
        assert!(
            hull.lipschitz_seminorm() <= v.lipschitz_seminorm(),
            "seed {seed}: hull seminorm grew"
        );
    }

    let x_small = Axis::new(-2.0, 3.0, 129).unwrap();
    let s_axis = unit_strip(33);
    let mut pairs: Vec<(ScalarField, ScalarField)> = vec![
        (
            ScalarField::from_fn_1d(x_small, |x| x * x).unwrap(),
            ScalarField::from_fn_1d(x_small, |x| x * x).unwrap(),
        ),
        (
            ScalarField::from_fn_1d(x_small, |x| x * x).unwrap(),
            ScalarField::from_fn_1d(x_small, |x| x * x + 0.75).unwrap(),
        ),
        (
            ScalarField::from_fn_1d(x_small, |x| x * x).unwrap(),
            ScalarField::from_fn_1d(x_small, |x| (x - 1.0) * (x - 1.0)).unwrap(),
        ),
    ];
    let seeded_axis = Axis::new(-1.0, 1.0, 129).unwrap();
    for seed in 0..5 {
        pairs.push((
            convex_field(seed, seeded_axis),
            convex_field(seed + 50, seeded_axis),
        ));
    }
    let mut checked = 0;
    for (psi0, psi1) in &pairs {
        let (lo, hi) = required_sigma_window(psi0, psi1).unwrap();
        let sigma = Axis::new(lo, hi, psi0.len()).unwrap();
        for g in [
            geodesic_semmes(psi0, psi1, s_axis).unwrap(),
            geodesic_infconv(psi0, psi1, s_axis).unwrap(),
            geodesic_rooftop(psi0, psi1, s_axis, sigma).unwrap(),
        ] {
            let r = fiberwise_lipschitz_check(&g).unwrap();
            assert!(r.pass, "{} on pair {checked}: {r}", g.method.name());
            checked += 1;
        }
    }
    within_budget("a10", start, 5.0);
    println!(
        "a10 lipschitz-preservation: PASS (50 hulls within budget, \
         fiberwise check on {checked} geodesic runs)"
    );
}

#[test]
fn a11_beta_scheme_scales_and_descends() {
    let start = Instant::now();
    let v = field_1d(-1.0, 1.0, 257, |x| x * x);
    let v_budget = v.lipschitz_seminorm() + 1.0;
    let mut ratios = Vec::new();
    for beta in [1e2, 1e3, 1e4] {
        let u1 = berman_convexify_1d(&v, beta, 1e-10).unwrap();
        let u2 = berman_convexify_1d(&v, 2.0 * beta, 1e-10).unwrap();
        assert!(u1.lipschitz_seminorm() <= v_budget, "beta {beta}");
        assert!(u2.lipschitz_seminorm() <= v_budget, "beta {}", 2.0 * beta);
        let ratio = sup_distance(&u2, &v).unwrap() / sup_distance(&u1, &v).unwrap();
        assert!(
            (0.4..=0.6).contains(&ratio),
            "beta {beta}: doubling ratio {ratio} outside [0.4, 0.6]"
        );
        ratios.push(ratio);
    }

    let w = field_1d(-1.0, 2.0, 257, |x| (x * x).min((x - 1.0) * (x - 1.0)));
    let hull = convexify(&w).unwrap();
    let w_budget = w.lipschitz_seminorm() + 1.0;
    let errs: Vec<f64> = [10.0, 1e2, 1e3]
        .iter()
        .map(|&beta| {
            let u = berman_convexify_1d(&w, beta, 1e-10).unwrap();
            assert!(u.lipschitz_seminorm() <= w_budget, "rooftop beta {beta}");
            sup_distance(&u, &hull).unwrap()
        })
        .collect();
    assert!(
        errs[0] > errs[1] && errs[1] > errs[2],
        "hull distance not strictly decreasing: {errs:?}"
    );
    within_budget("a11", start, 30.0);
    println!("a11 beta-scheme: PASS (doubling ratios {ratios:?}, rooftop descent {errs:?})");
}

#[test]
fn a12_composition_and_family_checks_hold() {
    let start = Instant::now();
    let trio = RooftopFamily::new(vec![
        field_1d(-2.0, 2.0, 65, |x| x * x),
        field_1d(-2.0, 2.0, 65, |x| (x - 1.0) * (x - 1.0)),
        field_1d(-2.0, 2.0, 65, |x| (x + 1.0) * (x + 1.0)),
    ])
    .unwrap();
    let r = compose_check(&trio).unwrap();
    assert!(r.pass && r.worst_violation <= 1e-9, "parabola trio: {r}");
    let walk_axis = Axis::new(-1.0, 1.0, 129).unwrap();
    for seed in [7u64, 11] {
        let fam = RooftopFamily::new(vec![
            lipschitz_field(seed, walk_axis),
            lipschitz_field(seed + 1, walk_axis),
            lipschitz_field(seed + 2, walk_axis),
        ])
        .unwrap();
        let r = compose_check(&fam).unwrap();
        assert!(r.pass && r.worst_violation <= 1e-9, "seed {seed}: {r}");
    }

    let axis = Axis::new(-1.0, 1.0, 65).unwrap();
    let shifts: Vec<ScalarField> = (0..5)
        .map(|k| ScalarField::from_fn_1d(axis, |x| x * x + 0.25 * k as f64).unwrap())
        .collect();
    let r = verify_family_laplacian(&shifts, 2.0).unwrap();
    assert!(r.pass && r.status == CheckStatus::Checked, "shift family: {r}");

    let a_axis = Axis::new(-1.0, 1.0, 201).unwrap();
    let sweep: Vec<ScalarField> = (0..a_axis.len())
        .map(|k| {
            let a = a_axis.node(k);
            ScalarField::from_fn_1d(axis, |x| (x - a) * (x - a) + a * a).unwrap()
        })
        .collect();
    let r = verify_family_laplacian(&sweep, 2.0).unwrap();
    assert!(r.pass && r.status == CheckStatus::Checked, "parabola sweep: {r}");

    let dip = vec![
        ScalarField::from_fn_1d(axis, |x| x * x).unwrap(),
        ScalarField::from_fn_1d(axis, |x| 1.0 - x * x).unwrap(),
    ];
    let r = verify_family_laplacian(&dip, 2.0).unwrap();
    assert_eq!(r.status, CheckStatus::HypothesisNotMet, "dip family: {r}");
    within_budget("a12", start, 5.0);
    println!(
        "a12 composition-and-family: PASS (three compose fixtures <= 1e-9, \
         two sweeps accepted, dip reported as hypothesis not met)"
    );
}

#[test]
fn a13_selftest_runs_are_byte_identical() {
    let base = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance_selftest");
    let dirs = [base.join("run1"), base.join("run2")];
    for dir in &dirs {
        std::fs::create_dir_all(dir).unwrap();
        let out = Command::new(env!("CARGO_BIN_EXE_rooftop"))
            .args(["selftest", "--out-dir", dir.to_str().unwrap()])
            .output()
            .expect("selftest should spawn");
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let listing = |dir: &PathBuf| -> Vec<String> {
        let mut names: Vec<String> = std::fs::read_dir(dir)
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        names.sort();
        names
    };
    let names = listing(&dirs[0]);
    assert_eq!(names, listing(&dirs[1]), "artifact sets differ");
    let mut fields = 0;
    for name in &names {
        if name == "report.json" {
            continue;
        }
        let a = std::fs::read(dirs[0].join(name)).unwrap();
        let b = std::fs::read(dirs[1].join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between runs");
        fields += 1;
    }
    let report = |dir: &PathBuf| -> RunReport {
        let mut r: RunReport =
            serde_json::from_slice(&std::fs::read(dir.join("report.json")).unwrap()).unwrap();
        r.wall_time_ms = 0;
        r
    };
    assert_eq!(report(&dirs[0]), report(&dirs[1]), "reports differ modulo wall time");
    println!(
        "a13 selftest-determinism: PASS ({fields} field artifacts byte-identical, \
         reports equal modulo wall_time_ms)"
    );
}
