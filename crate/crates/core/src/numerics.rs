//! Dense solves, conditioning, solution evaluation, error norms and rate fits.

use nalgebra::{DMatrix, DVector};

use crate::assembly::{basis_row, AssembledSystem, SchemeId};
use crate::error::{Error, Result};
use crate::fraccalc::{Evaluable, FracOrder, Side};
use crate::orthopoly::gauss_jacobi_rule;
use crate::scalar::Real;

/// Smallest singular value, used for diagnostics.
pub fn smallest_singular_value<T: Real>(a: &DMatrix<T>) -> T {
    let sv = a.clone().singular_values();
    sv.iter().copied().fold(T::infinity(), |m, v| if v < m { v } else { m })
}

fn singular<T: Real>(a: &DMatrix<T>, what: &str) -> Error {
    Error::SingularMatrix {
        what: what.to_string(),
        sigma_min: smallest_singular_value(a).as_f64(),
    }
}

/// `A^{-1} B` by LU with partial pivoting.
pub fn solve_matrix<T: Real>(a: &DMatrix<T>, b: &DMatrix<T>, what: &str) -> Result<DMatrix<T>> {
    if !a.is_square() || a.nrows() != b.nrows() {
        return Err(Error::domain(format!("{what}: dimension mismatch")));
    }
    let x = a.clone().lu().solve(b).ok_or_else(|| singular(a, what))?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(singular(a, what));
    }
    Ok(x)
}

/// Solves `A x = b` by LU with partial pivoting.
pub fn solve_dense<T: Real>(a: &DMatrix<T>, b: &DVector<T>) -> Result<DVector<T>> {
    if !a.is_square() || a.nrows() != b.len() {
        return Err(Error::domain("solve_dense: dimension mismatch"));
    }
    if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
        return Err(Error::domain("solve_dense: non-finite input"));
    }
    let x = a.clone().lu().solve(b).ok_or_else(|| singular(a, "system matrix"))?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(singular(a, "system matrix"));
    }
    Ok(x)
}

/// `‖Ax - b‖₂ / ‖b‖₂`, or `‖Ax‖₂` when `b = 0`.
pub fn relative_residual<T: Real>(a: &DMatrix<T>, x: &DVector<T>, b: &DVector<T>) -> T {
    let r = (a * x - b).norm();
    let nb = b.norm();
    if nb > T::zero() {
        r / nb
    } else {
        r
    }
}

/// 2-norm condition number `σ_max / σ_min`; infinite for singular input.
pub fn condition_number<T: Real>(a: &DMatrix<T>) -> T {
    let sv = a.clone().singular_values();
    let mut lo = T::infinity();
    let mut hi = T::zero();
    for &v in sv.iter() {
        if v < lo {
            lo = v;
        }
        if v > hi {
            hi = v;
        }
    }
    if lo <= T::zero() {
        T::infinity()
    } else {
        hi / lo
    }
}

/// Coefficients `u^L` of a solve together with what is needed to evaluate them.
#[derive(Debug, Clone)]
pub struct NumericalSolution<T: Real> {
    pub scheme: SchemeId,
    pub alpha: T,
    pub n: usize,
    pub coeffs: Vec<T>,
    pub trial_order: FracOrder<T>,
    /// Relative residual of the linear solve.
    pub residual: T,
}

impl<T: Real> NumericalSolution<T> {
    /// `Σ c_n φ^L_n(x)`. Infinite at `x = -1` when the trial order is negative.
    pub fn eval(&self, x: T) -> T {
        basis_row(Side::Left, self.trial_order.value(), self.n, x)
            .into_iter()
            .zip(&self.coeffs)
            .fold(T::zero(), |acc, (p, &c)| acc + p * c)
    }

    /// As [`eval`](Self::eval), rejecting the singular left endpoint.
    pub fn try_eval(&self, x: T) -> Result<T> {
        if x <= -T::one() && self.trial_order.value() < T::zero() {
            return Err(Error::Singularity(
                "left endpoint value of a negative-order trial basis".into(),
            ));
        }
        Ok(self.eval(x))
    }

    /// `|u_N(1)|`; the right boundary condition is only enforced weakly.
    pub fn boundary_residual(&self) -> T {
        self.eval(T::one()).abs()
    }
}

pub fn eval_solution<T: Real>(sol: &NumericalSolution<T>, x: T) -> T {
    sol.eval(x)
}

/// Solves an assembled system.
pub fn solve_system<T: Real>(sys: &AssembledSystem<T>) -> Result<NumericalSolution<T>> {
    let x = solve_dense(&sys.stiffness, &sys.load)?;
    let residual = relative_residual(&sys.stiffness, &x, &sys.load);
    Ok(NumericalSolution {
        scheme: sys.scheme,
        alpha: sys.alpha,
        n: sys.n,
        coeffs: x.iter().copied().collect(),
        trial_order: sys.trial_order,
        residual,
    })
}

/// Quadrature points per subinterval for an L2 error at resolution `n`.
pub fn l2_points(n: usize) -> usize {
    4 * n + 64
}

/// `(∫ (f - g)²)^{1/2}` for arbitrary pointwise functions.
///
/// `[-1, 1]` is split at zero and at `breaks`; the outermost pieces use a
/// Gauss–Jacobi weight `(1+x)^{left}` / `(1-x)^{right}` that is divided back
/// out, so negative exponents absorb integrable endpoint singularities.
pub fn l2_distance<T: Real>(
    f: impl Fn(T) -> T,
    g: impl Fn(T) -> T,
    breaks: &[T],
    singular_exponents: (T, T),
    m: usize,
) -> Result<T> {
    let one = T::one();
    let two = T::of(2.0);
    let mut cuts = vec![-one, T::zero(), one];
    cuts.extend(breaks.iter().copied().filter(|&x| x > -one && x < one));
    cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoint"));
    cuts.dedup_by(|a, b| (*a - *b).abs() <= T::of(1e-14));
    let (el, er) = singular_exponents;
    let mut total = T::zero();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let eta = if lo <= -one { el } else { T::zero() };
        let sigma = if hi >= one { er } else { T::zero() };
        let rule = gauss_jacobi_rule(sigma, eta, m)?;
        let half = (hi - lo) / two;
        for (&t, &wt) in rule.nodes.iter().zip(&rule.weights) {
            let x = lo + half * (one + t);
            let d = f(x) - g(x);
            let mut v = d * d;
            if eta != T::zero() {
                v /= (one + t).powf(eta);
            }
            if sigma != T::zero() {
                v /= (one - t).powf(sigma);
            }
            total += wt * half * v;
        }
    }
    Ok(total.sqrt())
}

/// L2 distance between a numerical solution and an exact one.
pub fn l2_error<T: Real>(sol: &NumericalSolution<T>, exact: &Evaluable<T>, singular_exponents: (T, T)) -> Result<T> {
    l2_distance(
        |x| sol.eval(x),
        |x| exact.eval(x),
        &exact.kinks(),
        singular_exponents,
        l2_points(sol.n),
    )
}

/// Outcome of a log-log least-squares fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    /// Decay order (negated slope) or growth exponent (slope).
    pub value: f64,
    /// Samples used after filtering.
    pub used: usize,
    /// Nonpositive or non-finite samples discarded.
    pub filtered: usize,
    /// Whether the smallest `N` was dropped as pre-asymptotic.
    pub dropped_first: bool,
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}

fn log_samples(ns: &[usize], vals: &[f64]) -> (Vec<f64>, Vec<f64>, usize) {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut filtered = 0;
    for (&n, &v) in ns.iter().zip(vals) {
        if v > 0.0 && v.is_finite() && n > 0 {
            xs.push((n as f64).ln());
            ys.push(v.ln());
        } else {
            filtered += 1;
        }
    }
    (xs, ys, filtered)
}

/// Algebraic decay order of `errs` against `ns`.
///
/// The smallest `N` is dropped when its residual against the fit of the
/// remaining samples exceeds three times that fit's RMS residual.
pub fn fit_rate_detailed(ns: &[usize], errs: &[f64]) -> Result<RateFit> {
    let (mut xs, ys, filtered) = log_samples(ns, errs);
    if xs.len() < 3 {
        return Err(Error::domain("rate fit needs at least three positive samples"));
    }
    let value_all = -least_squares(&xs, &ys).0;
    let first = xs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite"))
        .map(|(i, _)| i)
        .unwrap_or(0);
    // Judge the smallest N against the fit of the others; with a handful of
    // points a residual can never reach 3x the RMS of a set containing it.
    let mut dropped_first = false;
    let mut value = value_all;
    if xs.len() > 3 {
        let (x0, y0) = (xs[first], ys[first]);
        let mut rx = xs.clone();
        let mut ry = ys.clone();
        rx.remove(first);
        ry.remove(first);
        let (slope, icpt) = least_squares(&rx, &ry);
        let rms = (rx
            .iter()
            .zip(&ry)
            .map(|(x, y)| (y - icpt - slope * x).powi(2))
            .sum::<f64>()
            / rx.len() as f64)
            .sqrt();
        if (y0 - icpt - slope * x0).abs() > 3.0 * rms.max(1e-12) {
            xs = rx;
            value = -slope;
            dropped_first = true;
        }
    }
    Ok(RateFit {
        value,
        used: xs.len(),
        filtered,
        dropped_first,
    })
}

pub fn fit_rate(ns: &[usize], errs: &[f64]) -> Result<f64> {
    fit_rate_detailed(ns, errs).map(|f| f.value)
}

/// Growth exponent of `vals` against `ns` (plain least squares, ≥ 2 samples).
pub fn fit_growth(ns: &[usize], vals: &[f64]) -> Result<f64> {
    let (xs, ys, _) = log_samples(ns, vals);
    if xs.len() < 2 {
        return Err(Error::domain("growth fit needs at least two positive samples"));
    }
    Ok(least_squares(&xs, &ys).0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn dense_solves() {
        let a = DMatrix::<f64>::identity(3, 3);
        let b = DVector::from_vec(vec![1.0, -2.0, 3.0]);
        assert_eq!(solve_dense(&a, &b).unwrap(), b);
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 4.0]));
        let x = solve_dense(&a, &DVector::from_vec(vec![2.0, 8.0])).unwrap();
        assert_relative_eq!(x[0], 1.0);
        assert_relative_eq!(x[1], 2.0);
        let s = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(
            solve_dense(&s, &DVector::from_vec(vec![1.0, 1.0])),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn conditioning() {
        assert_relative_eq!(condition_number(&DMatrix::<f64>::identity(4, 4)), 1.0, epsilon = 1e-14);
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 10.0]));
        assert_relative_eq!(condition_number(&d), 10.0, max_relative = 1e-14);
        let h = DMatrix::from_fn(4, 4, |i, j| 1.0 / (i + j + 1) as f64);
        // independent value from a high-precision eigen-decomposition of the Hilbert matrix
        assert_relative_eq!(condition_number(&h), 15_513.738_738_932_588, max_relative = 1e-9);
        assert!(condition_number(&DMatrix::<f64>::zeros(2, 2)).is_infinite());
    }

    #[test]
    fn rate_fits() {
        let ns = [8, 16, 32, 64];
        let errs: Vec<f64> = ns.iter().map(|&n| 3.0 * (n as f64).powi(-2)).collect();
        assert_relative_eq!(fit_rate(&ns, &errs).unwrap(), 2.0, epsilon = 1e-10);
        assert_relative_eq!(fit_rate(&ns, &[1e-3; 4]).unwrap(), 0.0, epsilon = 1e-12);
        let f = fit_rate_detailed(&[4, 8, 16, 32], &[1.0, -1.0, 0.25, 0.0625]).unwrap();
        assert_eq!(f.filtered, 1);
        assert!(fit_rate(&[8, 16], &[1.0, 0.5]).is_err());
        assert_relative_eq!(fit_growth(&[8, 16], &[2.0, 8.0]).unwrap(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn pre_asymptotic_point_is_dropped() {
        let ns = [4, 8, 16, 32, 64, 128];
        let mut errs: Vec<f64> = ns.iter().map(|&n| (n as f64).powi(-3)).collect();
        errs[0] *= 1e4;
        let f = fit_rate_detailed(&ns, &errs).unwrap();
        assert!(f.dropped_first);
        assert_relative_eq!(f.value, 3.0, epsilon = 1e-10);
    }

    #[test]
    fn l2_of_known_function() {
        // ‖(1+x)^{1/2}/Γ(3/2)‖ = sqrt(8/π)
        let g = crate::scalar::gamma(1.5_f64);
        let e = l2_distance(|x: f64| (1.0 + x).sqrt() / g, |_| 0.0, &[], (0.0, 0.0), 40).unwrap();
        assert_relative_eq!(e, (8.0 / std::f64::consts::PI).sqrt(), max_relative = 1e-12);
        // singular integrand absorbed by the weight: ∫ (1+x)^{-0.6} = 2^{0.4}/0.4
        let e = l2_distance(|x: f64| (1.0 + x).powf(-0.3), |_| 0.0, &[], (-0.6, 0.0), 20).unwrap();
        assert_relative_eq!(e * e, 2f64.powf(0.4) / 0.4, max_relative = 1e-12);
    }
}
