//! Jacobi and Legendre polynomials and Gauss quadrature.
//!
//! Jacobi polynomials use the Rodrigues normalization, `J_n^{σ,η}(1) = C(n+σ, n)`,
//! with `σ` attached to `(1-x)` and `η` to `(1+x)`.

use crate::error::{Error, Result};
use crate::scalar::{beta, gamma_ratio, Real};

/// Weight function a rule integrates against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightKind<T> {
    /// Unit weight (Gauss–Legendre).
    Plain,
    /// `(1-x)^sigma (1+x)^eta`.
    Jacobi { sigma: T, eta: T },
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    pub kind: WeightKind<T>,
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    pub exactness_degree: usize,
}

impl<T: Real> QuadratureRule<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_i f(x_i)`.
    pub fn integrate(&self, mut f: impl FnMut(T) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&x, &w)| acc + w * f(x))
    }

    /// Exponents `(σ, η)` of the weight.
    pub fn exponents(&self) -> (T, T) {
        match self.kind {
            WeightKind::Plain => (T::zero(), T::zero()),
            WeightKind::Jacobi { sigma, eta } => (sigma, eta),
        }
    }
}

fn check_params<T: Real>(sigma: T, eta: T) -> Result<()> {
    let m1 = -T::one();
    if sigma > m1 && eta > m1 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "Jacobi parameters must exceed -1, got ({sigma}, {eta})"
        )))
    }
}

/// `C(z, k)` for real `z` and integer `k ≥ 0`.
fn binomial<T: Real>(z: T, k: usize) -> T {
    let mut r = T::one();
    for j in 0..k {
        r = r * (z - T::of_usize(j)) / T::of_usize(j + 1);
    }
    r
}

/// Explicit sum form, used when the recurrence hits a vanishing denominator.
fn jacobi_explicit<T: Real>(a: T, b: T, n: usize, x: T) -> T {
    let two = T::of(2.0);
    let xm = (x - T::one()) / two;
    let xp = (x + T::one()) / two;
    let nn = T::of_usize(n);
    let mut acc = T::zero();
    for s in 0..=n {
        acc += binomial(nn + a, n - s)
            * binomial(nn + b, s)
            * xm.powi(s as i32)
            * xp.powi((n - s) as i32);
    }
    acc
}

/// `J_0..=J_max_n` at `x`, without parameter validation.
///
/// Parameters at or below `-1` are allowed; the polynomials are still well
/// defined, they just lose orthogonality.
pub fn jacobi_values<T: Real>(sigma: T, eta: T, max_n: usize, x: T) -> Vec<T> {
    let (a, b) = (sigma, eta);
    let two = T::of(2.0);
    let mut out = Vec::with_capacity(max_n + 1);
    out.push(T::one());
    if max_n == 0 {
        return out;
    }
    out.push(((a - b) + (a + b + two) * x) / two);
    let ab = a + b;
    let tiny = T::of(1e-13);
    for n in 2..=max_n {
        let nn = T::of_usize(n);
        let c = two * nn + ab;
        let den = two * nn * (nn + ab) * (c - two);
        if den.abs() < tiny {
            out.push(jacobi_explicit(a, b, n, x));
            continue;
        }
        let p1 = out[n - 1];
        let p2 = out[n - 2];
        let v = ((c - T::one()) * (c * (c - two) * x + a * a - b * b) * p1
            - two * (nn + a - T::one()) * (nn + b - T::one()) * c * p2)
            / den;
        out.push(v);
    }
    out
}

/// `J_n^{σ,η}(x)`.
pub fn jacobi_eval<T: Real>(sigma: T, eta: T, n: usize, x: T) -> Result<T> {
    check_params(sigma, eta)?;
    Ok(jacobi_values(sigma, eta, n, x)[n])
}

/// `d/dx J_n^{σ,η}(x) = (n+σ+η+1)/2 · J_{n-1}^{σ+1,η+1}(x)`.
pub fn jacobi_derivative<T: Real>(sigma: T, eta: T, n: usize, x: T) -> T {
    if n == 0 {
        return T::zero();
    }
    let scale = (T::of_usize(n) + sigma + eta + T::one()) / T::of(2.0);
    scale * jacobi_values(sigma + T::one(), eta + T::one(), n - 1, x)[n - 1]
}

/// `L_0..=L_max_n` at `x`.
pub fn legendre_values<T: Real>(max_n: usize, x: T) -> Vec<T> {
    let mut out = Vec::with_capacity(max_n + 1);
    out.push(T::one());
    if max_n == 0 {
        return out;
    }
    out.push(x);
    for n in 2..=max_n {
        let nn = T::of_usize(n);
        let v = ((T::of(2.0) * nn - T::one()) * x * out[n - 1] - (nn - T::one()) * out[n - 2]) / nn;
        out.push(v);
    }
    out
}

pub fn legendre_eval<T: Real>(n: usize, x: T) -> T {
    legendre_values(n, x)[n]
}

/// `L_n'(x)` via the derivative recurrence `L'_{n+1} = L'_{n-1} + (2n+1) L_n`.
pub fn legendre_derivative<T: Real>(n: usize, x: T) -> T {
    if n == 0 {
        return T::zero();
    }
    let l = legendre_values(n, x);
    let mut d = vec![T::zero(); n + 1];
    d[1] = T::one();
    for k in 1..n {
        d[k + 1] = d[k - 1] + T::of_usize(2 * k + 1) * l[k];
    }
    d[n]
}

/// `γ_n = ‖L_n‖² = 2/(2n+1)`.
pub fn legendre_norm<T: Real>(n: usize) -> T {
    T::of(2.0) / T::of_usize(2 * n + 1)
}

/// Rule size giving two points of slack over exactness for degree `d` integrands.
pub fn default_rule_size(degree: usize) -> usize {
    (degree + 2) / 2 + 2
}

/// m-point Gauss–Legendre rule.
pub fn gauss_rule<T: Real>(m: usize) -> Result<QuadratureRule<T>> {
    let mut r = gauss_jacobi_rule(T::zero(), T::zero(), m)?;
    r.kind = WeightKind::Plain;
    Ok(r)
}

/// m-point Gauss–Jacobi rule for the weight `(1-x)^σ (1+x)^η`.
pub fn gauss_jacobi_rule<T: Real>(sigma: T, eta: T, m: usize) -> Result<QuadratureRule<T>> {
    check_params(sigma, eta)?;
    if m == 0 {
        return Err(Error::domain("quadrature rule needs at least one point"));
    }
    let (a, b) = (sigma, eta);
    let one = T::one();
    let two = T::of(2.0);
    let ab = a + b;
    let mass = two.powf(ab + one) * beta(a + one, b + one);

    let mut diag = vec![T::zero(); m];
    let mut off = vec![T::zero(); m];
    diag[0] = (b - a) / (ab + two);
    for (n, d) in diag.iter_mut().enumerate().skip(1) {
        let c = two * T::of_usize(n) + ab;
        *d = (b * b - a * a) / (c * (c + two));
    }
    for n in 1..m {
        let nn = T::of_usize(n);
        let c = two * nn + ab;
        let b2 = if n == 1 {
            T::of(4.0) * (one + a) * (one + b) / ((ab + two).powi(2) * (ab + T::of(3.0)))
        } else {
            T::of(4.0) * nn * (nn + a) * (nn + b) * (nn + ab) / (c * c * (c + one) * (c - one))
        };
        off[n - 1] = b2.sqrt();
    }

    let mut first = tridiagonal_eigen(&mut diag, &mut off);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));
    let mut nodes: Vec<T> = order.iter().map(|&i| diag[i]).collect();
    first = order.iter().map(|&i| first[i]).collect();

    if m == 1 {
        return Ok(QuadratureRule {
            kind: WeightKind::Jacobi { sigma, eta },
            nodes,
            weights: vec![mass],
            exactness_degree: 1,
        });
    }

    // Newton polish plus the closed-form weight.
    let mf = T::of_usize(m);
    let cst = two.powf(ab + one)
        * gamma_ratio(mf + a + one, mf + one)
        * gamma_ratio(mf + b + one, mf + ab + one);
    let mut weights = Vec::with_capacity(m);
    for (i, x) in nodes.iter_mut().enumerate() {
        for _ in 0..3 {
            let p = jacobi_values(a, b, m, *x)[m];
            let dp = jacobi_derivative(a, b, m, *x);
            let step = p / dp;
            let nx = *x - step;
            if nx > -one && nx < one {
                *x = nx;
            }
            if step.abs() <= T::eps() * T::of(4.0) {
                break;
            }
        }
        let dp = jacobi_derivative(a, b, m, *x);
        let w = cst / ((one - *x * *x) * dp * dp);
        weights.push(if w.is_finite() { w } else { mass * first[i] * first[i] });
    }
    Ok(QuadratureRule {
        kind: WeightKind::Jacobi { sigma, eta },
        nodes,
        weights,
        exactness_degree: 2 * m - 1,
    })
}

/// Implicit QL on a symmetric tridiagonal matrix.
///
/// On return `diag` holds the eigenvalues; the result holds the first
/// component of each normalized eigenvector.
fn tridiagonal_eigen<T: Real>(diag: &mut [T], off: &mut [T]) -> Vec<T> {
    let n = diag.len();
    let mut z = vec![T::zero(); n];
    z[0] = T::one();
    if n == 1 {
        return z;
    }
    let e = off;
    e[n - 1] = T::zero();
    let two = T::of(2.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if e[m].abs() <= T::eps() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                break;
            }
            let mut g = (diag[l + 1] - diag[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = diag[m] - diag[l] + e[l] / (g + if g >= T::zero() { r } else { -r });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    diag[i + 1] -= p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + two * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    z
}
