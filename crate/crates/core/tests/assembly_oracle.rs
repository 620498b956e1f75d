mod common;

use approx::assert_relative_eq;
use common::*;
use fracspec::assembly::{assemble, assemble_a, collocation_nodes, AssemblyOptions, Blocks, SchemeId};
use fracspec::fraccalc::{DiffusionSpec, Evaluable, Piece};
use fracspec::numerics::solve_system;

fn smooth_h(x: f64) -> f64 {
    (3.0 * x).cos() + x
}

fn spec(alpha: f64) -> DiffusionSpec<f64> {
    DiffusionSpec { alpha, p: 0.5, q: 0.5, d: 1.0 }
}

fn check_petrov(scheme: SchemeId, alpha: f64, n: usize, h: &Evaluable<f64>, hf: &dyn Fn(f64) -> f64, breaks: &[f64], tol: f64) {
    let sys = assemble(scheme, spec(alpha), h, n, AssemblyOptions::default()).unwrap();
    let Blocks::Petrov(b) = &sys.blocks else { panic!("expected petrov blocks") };
    let rho = match scheme {
        SchemeId::Galerkin1 => alpha / 2.0,
        _ => (alpha + 1.0) / 2.0,
    };
    let o = petrov_oracle(alpha, scheme.trial_order(alpha), rho, &sys.nodes, n, hf, breaks);
    let tag = format!("scheme {scheme}, alpha {alpha}");
    assert!(max_abs_diff(&b.a_l, &o.a_l) < tol, "A^L {tag}");
    assert!(max_abs_diff(&b.a_r, &o.a_r) < tol, "A^R {tag}");
    assert!(max_abs_diff(&b.m_l, &o.m_l) < tol, "M^L {tag}");
    assert!(max_abs_diff(&b.m_r, &o.m_r) < tol, "M^R {tag}");
    assert!(max_abs_diff(&b.m_c, &o.m_c) < tol, "M^C {tag}");
    assert!((&sys.load - &o.load).amax() < tol, "load {tag}");
}

#[test]
fn scheme1_blocks_against_oracle() {
    let h = Evaluable::from_piece(Piece::new(-1.0, 1.0, 0.0, 0.0, smooth_h));
    for alpha in [0.7, 1.5] {
        check_petrov(SchemeId::Galerkin1, alpha, 8, &h, &smooth_h, &[], 1e-9);
    }
}

#[test]
fn scheme2_blocks_against_oracle() {
    let h = Evaluable::from_piece(Piece::new(-1.0, 1.0, 0.0, 0.0, smooth_h));
    check_petrov(SchemeId::PetrovGalerkin2, 1.3, 8, &h, &smooth_h, &[], 1e-9);
}

#[test]
fn loads_with_singular_and_kinked_sources() {
    let sing = |x: f64| (1.0 + x).powf(0.3) * (1.0 - x).powf(0.6) * x.exp();
    let h = Evaluable::from_piece(Piece::new(-1.0, 1.0, 0.3, 0.6, |x: f64| x.exp()));
    check_petrov(SchemeId::Galerkin1, 0.7, 6, &h, &sing, &[], 1e-9);
    check_petrov(SchemeId::PetrovGalerkin2, 1.6, 6, &h, &sing, &[], 1e-9);

    let kinked = |x: f64| if x > 0.0 { x.powf(1.7) * (1.0 + x) } else { 0.0 };
    let h = Evaluable::from_piece(Piece::new(0.0, 1.0, 1.7, 0.0, |x: f64| 1.0 + x));
    check_petrov(SchemeId::Galerkin1, 1.4, 6, &h, &kinked, &[0.0], 1e-9);
    let sys = assemble(SchemeId::Mixed3, spec(1.4), &h, 6, AssemblyOptions::default()).unwrap();
    let o = mixed_oracle(0.2, &sys.nodes, 6, &kinked, &[0.0]);
    assert!((&sys.load - &o.load).amax() < 1e-9);
}

#[test]
fn mixed_flux_matrix_against_oracle() {
    let h = Evaluable::from_piece(Piece::new(-1.0, 1.0, 0.0, 0.0, smooth_h));
    let sys = assemble(SchemeId::Mixed3, spec(1.5), &h, 6, AssemblyOptions::default()).unwrap();
    let Blocks::Mixed(b) = &sys.blocks else { panic!() };
    let o = mixed_oracle(0.25, &sys.nodes, 6, &smooth_h, &[]);
    assert!(max_abs_diff(&b.l_beta, &o.l_beta) < 1e-11);
    assert!(max_abs_diff(&b.r_beta, &o.r_beta) < 1e-11);
    assert!(max_abs_diff(&b.m_c, &o.m_c) < 1e-11);
    assert!(max_abs_diff(&b.a_l, &o.a_l) < 1e-11);
    assert!((&sys.load - &o.load).amax() < 1e-11);
}

#[test]
fn first_row_of_left_block() {
    let h = Evaluable::zero();
    for alpha in [0.4, 1.5, 1.8] {
        let sys = assemble(SchemeId::Galerkin1, spec(alpha), &h, 3, AssemblyOptions::default()).unwrap();
        let Blocks::Petrov(b) = &sys.blocks else { panic!() };
        assert_relative_eq!(b.m_l[(0, 0)], 2.0 - alpha, epsilon = 1e-14);
        assert_relative_eq!(b.m_l[(0, 1)], (2.0 + alpha) / 3.0, epsilon = 1e-14);
        assert_eq!(b.m_l[(0, 2)], 0.0);
        let sys = assemble(SchemeId::PetrovGalerkin2, spec(alpha), &h, 3, AssemblyOptions::default()).unwrap();
        let Blocks::Petrov(b) = &sys.blocks else { panic!() };
        assert_relative_eq!(b.m_l[(0, 0)], 1.0 - alpha, epsilon = 1e-14);
        assert_relative_eq!(b.m_l[(0, 1)], (alpha + 3.0) / 3.0, epsilon = 1e-14);
    }
}

#[test]
fn collocation_matrices() {
    assert_eq!(collocation_nodes::<f64>(1), vec![0.0]);
    let nodes = collocation_nodes::<f64>(6);
    for alpha in [0.5, 1.5] {
        let (al, ar) = assemble_a(SchemeId::Galerkin1, alpha, &nodes);
        for i in 0..6 {
            let x = nodes[i];
            assert_relative_eq!(al[(i, 0)], (1.0 + x).powf(alpha / 2.0) * rgamma(1.0 + alpha / 2.0), max_relative = 1e-14);
            // the right basis mirrors the left one up to the parity of L_j
            for j in 0..6 {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                assert!((al[(i, j)] - sign * ar[(5 - i, j)]).abs() < 1e-13);
            }
        }
    }
    let (al, ar) = assemble_a(SchemeId::Mixed3, 1.5, &[0.0]);
    assert!(al[(0, 0)] > 0.0 && ar[(0, 0)] > 0.0);
}

#[test]
fn one_sided_stiffness_is_left_block() {
    let s = DiffusionSpec { alpha: 1.4, p: 1.0, q: 0.0, d: 0.0 };
    let sys = assemble(SchemeId::Galerkin1, s, &Evaluable::constant(1.0), 10, AssemblyOptions::default()).unwrap();
    let Blocks::Petrov(b) = &sys.blocks else { panic!() };
    assert!(b.transfer.is_none());
    assert_eq!(sys.stiffness, -&b.m_l);
}

#[test]
fn assembly_is_bit_identical() {
    let h = Evaluable::from_piece(Piece::new(-1.0, 1.0, 0.2, 0.0, smooth_h));
    for scheme in SchemeId::ALL {
        let a = assemble(scheme, spec(1.3), &h, 12, AssemblyOptions::default()).unwrap();
        let b = assemble(scheme, spec(1.3), &h, 12, AssemblyOptions::default()).unwrap();
        assert_eq!(a.stiffness, b.stiffness);
        assert_eq!(a.load, b.load);
    }
}

/// The trial space is one-sided, so `u_N(x) - u_N(-x)` is pure discretization
/// error: it must shrink with `N` rather than vanish.
#[test]
fn symmetric_problem_symmetry_defect_shrinks() {
    let h = Evaluable::from_piece(Piece::new(-1.0, 1.0, 0.0, 0.0, |x: f64| 1.0 + x * x));
    let defect = |scheme, alpha, n| {
        let s = DiffusionSpec { alpha, p: 0.5, q: 0.5, d: 0.0 };
        let sol = solve_system(&assemble(scheme, s, &h, n, AssemblyOptions::default()).unwrap()).unwrap();
        (1..=20)
            .map(|i| 0.045 * i as f64)
            .map(|x| (sol.eval(x) - sol.eval(-x)).abs())
            .fold(0.0, f64::max)
    };
    for alpha in [0.6, 1.5] {
        for scheme in SchemeId::ALL {
            let coarse = defect(scheme, alpha, 16);
            let fine = defect(scheme, alpha, 128);
            assert!(fine < coarse / 4.0 && fine < 1e-2, "scheme {scheme} alpha {alpha}: {coarse:e} -> {fine:e}");
        }
    }
}

#[test]
fn oracle_reproduces_closed_forms() {
    let rule = TanhSinh::inner();
    for (s, d) in [(0.3, 0.7), (-0.4, 0.7), (1.6, 1.9), (-1.3, 0.2)] {
        let v = frac_int_legendre(End::Left, s, 1, d, &rule);
        assert_relative_eq!(v[0], d.powf(s) * rgamma(1.0 + s), max_relative = 1e-13);
        // I^s (1+x) - I^s 1 with L_1 = (1+x) - 1
        let want = d.powf(s + 1.0) * rgamma(2.0 + s) - d.powf(s) * rgamma(1.0 + s);
        assert_relative_eq!(v[1], want, max_relative = 1e-12, epsilon = 1e-14);
        let r = frac_int_legendre(End::Right, s, 1, d, &rule);
        assert_relative_eq!(r[1], d.powf(s) * rgamma(1.0 + s) - d.powf(s + 1.0) * rgamma(2.0 + s), max_relative = 1e-12, epsilon = 1e-14);
    }
    let outer = TanhSinh::outer();
    let beta_fn = outer.integrate_pm1(&[], |_, a, b| a.powf(-0.9) * b.powf(0.4));
    let want = 2f64.powf(0.5) * statrs::function::beta::beta(0.1, 1.4);
    assert_relative_eq!(beta_fn, want, max_relative = 1e-12);
}
