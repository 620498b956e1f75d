mod common;

use common::{frac_int_legendre, End, TanhSinh};
use fracspec::assembly::{trial_function, vk_coefficient, AssemblyOptions, SchemeId, TestVariant};
use fracspec::experiments::{interior_grid, solution_error, solve_problem};
use fracspec::fraccalc::Side;
use fracspec::problems::{catalog_problem, getoor_exact, mfet_problem, CATALOG_LABELS};

/// `v_k = (1+x) I_R^{α/2} L_k` expanded in the left trial basis. The right-end
/// singularity of `v_k` limits the decay of the coefficients, so the partial
/// sums converge algebraically.
#[test]
fn test_function_expansion_converges() {
    let alpha = 1.5;
    let rule = TanhSinh::inner();
    for k in 0..=5 {
        let coeffs: Vec<f64> = (0..=k + 192).map(|m| vk_coefficient(TestVariant::Scheme1, k, m, alpha).unwrap()).collect();
        let basis: Vec<_> = (0..=k + 192).map(|m| trial_function(Side::Left, alpha / 2.0, m).unwrap()).collect();
        for i in 0..10 {
            let x = -0.9 + 0.2 * i as f64;
            let want = (1.0 + x) * frac_int_legendre(End::Right, alpha / 2.0, k, 1.0 - x, &rule)[k];
            let partial = |top: usize| -> f64 { (0..=top).map(|m| coeffs[m] * basis[m].eval(x).unwrap()).sum() };
            let short = (partial(k + 12) - want).abs();
            let long = (partial(k + 192) - want).abs();
            assert!(short < 5e-3, "k={k} x={x}: {short:e}");
            assert!(long < 1e-5, "k={k} x={x}: {long:e}");
        }
    }
}

#[test]
fn catalog_errors_decrease() {
    for label in CATALOG_LABELS {
        let alpha = if label == "example1" { 1.5 } else { 0.7 };
        let p = catalog_problem(label, alpha).unwrap();
        if p.exact.is_none() {
            continue;
        }
        let scheme = p.designated.unwrap_or(SchemeId::Mixed3);
        let err = |n| {
            let (_, sol) = solve_problem(scheme, &p, n, AssemblyOptions::default()).unwrap();
            solution_error(&p, &sol).unwrap()
        };
        let (coarse, fine) = (err(12), err(48));
        assert!(fine < coarse, "{label}: {coarse:e} -> {fine:e}");
    }
}

#[test]
fn low_order_manufactured_errors_decrease() {
    let p = catalog_problem("manufactured-u3", 0.2).unwrap();
    for scheme in SchemeId::ALL {
        let errs: Vec<f64> = [8, 16, 32, 64]
            .iter()
            .map(|&n| solution_error(&p, &solve_problem(scheme, &p, n, AssemblyOptions::default()).unwrap().1).unwrap())
            .collect();
        assert!(errs.iter().all(|e| e.is_finite() && *e > 0.0));
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "scheme {scheme}: {errs:?}");
    }
}

#[test]
fn exit_time_at_center() {
    let p = mfet_problem(0.5, 0.0).unwrap();
    let (_, sol) = solve_problem(SchemeId::Mixed3, &p, 64, AssemblyOptions::default()).unwrap();
    let want = getoor_exact(0.5).eval(0.0);
    assert!((sol.eval(0.0) - want).abs() <= 1e-3, "{} vs {want}", sol.eval(0.0));
}

#[test]
fn exit_times_are_nonnegative() {
    for alpha in [0.2, 0.7, 1.3, 1.8] {
        for d in [0.0, (std::f64::consts::PI * alpha / 2.0).cos()] {
            let p = mfet_problem(alpha, d).unwrap();
            let (_, sol) = solve_problem(SchemeId::Mixed3, &p, 64, AssemblyOptions::default()).unwrap();
            for x in interior_grid(201) {
                assert!(sol.eval(x) >= 0.0, "alpha {alpha} d {d} x {x}: {}", sol.eval(x));
            }
        }
    }
}
