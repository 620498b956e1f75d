//! Independent reference implementations for the integration tests.
//!
//! Nothing here calls into the library's quadrature, Jacobi or Gamma code.
//! Fractional integrals of any order `s > -3` are computed from the Taylor form
//!
//! ```text
//! I^s f(x) = Σ_{j<m} f^{(j)}(-1) (1+x)^{s+j} / Γ(s+j+1) + I^{s+m} f^{(m)}(x)
//! ```
//!
//! with `m` chosen so that the remaining kernel is bounded, and all integrals
//! use tanh-sinh quadrature with endpoint distances carried exactly.

#![allow(dead_code)]

use statrs::function::gamma::gamma;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum End {
    Left,
    Right,
}

/// `1/Γ(z)`, exactly zero at the poles.
pub fn rgamma(z: f64) -> f64 {
    if z <= 0.0 && (z - z.round()).abs() < 1e-13 {
        0.0
    } else {
        1.0 / gamma(z)
    }
}

/// Tanh-sinh nodes on `[0, 1]` as `(σ, 1-σ, weight)`.
pub struct TanhSinh {
    pts: Vec<(f64, f64, f64)>,
}

impl TanhSinh {
    pub fn new(h: f64, tmax: f64) -> Self {
        let half_pi = std::f64::consts::FRAC_PI_2;
        let k = (tmax / h).floor() as i64;
        let pts = (-k..=k)
            .map(|i| {
                let t = i as f64 * h;
                let u = half_pi * t.sinh();
                // σ = (1 + tanh u)/2 and its complement, both without cancellation
                let s = 1.0 / (1.0 + (-2.0 * u).exp());
                let c = 1.0 / (1.0 + (2.0 * u).exp());
                let w = h * half_pi * t.cosh() / (2.0 * u.cosh().powi(2));
                (s, c, w)
            })
            .collect();
        TanhSinh { pts }
    }

    /// Fine rule for outer integrals with strong endpoint singularities.
    pub fn outer() -> Self {
        Self::new(1.0 / 32.0, 5.5)
    }

    /// Rule for bounded integrands.
    pub fn inner() -> Self {
        Self::new(1.0 / 16.0, 3.6)
    }

    /// `∫_a^b f(x, x-a, b-x) dx`.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64, f64, f64) -> f64) -> f64 {
        let len = b - a;
        let mut acc = 0.0;
        for &(s, c, w) in &self.pts {
            if w == 0.0 {
                continue;
            }
            let da = len * s;
            let db = len * c;
            let x = if s < 0.5 { a + da } else { b - db };
            acc += w * len * f(x, da, db);
        }
        acc
    }

    /// `∫_{-1}^{1} f(x, 1+x, 1-x) dx`, split at `breaks`.
    pub fn integrate_pm1(&self, breaks: &[f64], mut f: impl FnMut(f64, f64, f64) -> f64) -> f64 {
        let mut cuts = vec![-1.0];
        cuts.extend(breaks.iter().copied().filter(|b| b.abs() < 1.0));
        cuts.push(1.0);
        let mut acc = 0.0;
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            acc += self.integrate(a, b, |x, da, db| {
                let opx = if a == -1.0 { da } else { 1.0 + x };
                let omx = if b == 1.0 { db } else { 1.0 - x };
                f(x, opx, omx)
            });
        }
        acc
    }
}

/// `L_n^{(j)}(x)` for `n = 0..=nmax`, from the differentiated Bonnet recurrence.
pub fn legendre_deriv(nmax: usize, j: usize, x: f64) -> Vec<f64> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(j + 1);
    for d in 0..=j {
        let mut v = vec![0.0; nmax + 1];
        v[0] = if d == 0 { 1.0 } else { 0.0 };
        if nmax >= 1 {
            v[1] = match d {
                0 => x,
                1 => 1.0,
                _ => 0.0,
            };
        }
        for n in 1..nmax {
            let nf = n as f64;
            let lower = if d == 0 { 0.0 } else { d as f64 * rows[d - 1][n] };
            v[n + 1] = ((2.0 * nf + 1.0) * (lower + x * v[n]) - nf * v[n - 1]) / (nf + 1.0);
        }
        rows.push(v);
    }
    rows.pop().unwrap()
}

/// `I^s_{end} L_n(x)` for `n = 0..=nmax`; negative `s` differentiates.
///
/// `dist` is the distance from `x` to the anchoring endpoint (`1+x` or `1-x`).
pub fn frac_int_legendre(end: End, s: f64, nmax: usize, dist: f64, rule: &TanhSinh) -> Vec<f64> {
    assert!(s > -3.0);
    let m = if s >= 1.0 { 0 } else { (1.0 - s).ceil() as usize };
    let t = s + m as f64;
    let sign = |j: usize| if end == End::Right && j % 2 == 1 { -1.0 } else { 1.0 };
    let anchor = if end == End::Left { -1.0 } else { 1.0 };
    let mut out = vec![0.0; nmax + 1];
    for j in 0..m {
        let c = sign(j) * dist.powf(s + j as f64) * rgamma(s + j as f64 + 1.0);
        if c == 0.0 {
            continue;
        }
        for (o, d) in out.iter_mut().zip(legendre_deriv(nmax, j, anchor)) {
            *o += c * d;
        }
    }
    // I^t g(x) = dist^t / Γ(t) ∫_0^1 (1-σ)^{t-1} g(anchor ± dist σ) dσ
    let acc = weighted_vector(rule, m, t, end, dist, nmax);
    let c = sign(m) * dist.powf(t) * rgamma(t);
    for (o, a) in out.iter_mut().zip(acc) {
        *o += c * a;
    }
    out
}

fn weighted_vector(rule: &TanhSinh, m: usize, t: f64, end: End, dist: f64, nmax: usize) -> Vec<f64> {
    let mut acc = vec![0.0; nmax + 1];
    for &(s, c, w) in &rule.pts {
        let y = if end == End::Left { -1.0 + dist * s } else { 1.0 - dist * s };
        let k = w * c.powf(t - 1.0);
        for (a, g) in acc.iter_mut().zip(legendre_deriv(nmax, m, y)) {
            *a += k * g;
        }
    }
    acc
}

impl TanhSinh {
    /// Points of `integrate_pm1` as `(x, 1+x, 1-x, weight)`.
    pub fn points_pm1(&self, breaks: &[f64]) -> Vec<(f64, f64, f64, f64)> {
        let mut cuts = vec![-1.0];
        cuts.extend(breaks.iter().copied().filter(|b| b.abs() < 1.0));
        cuts.push(1.0);
        let mut out = Vec::new();
        for win in cuts.windows(2) {
            let (a, b) = (win[0], win[1]);
            let len = b - a;
            for &(s, c, w) in &self.pts {
                if w == 0.0 {
                    continue;
                }
                let (da, db) = (len * s, len * c);
                let x = if s < 0.5 { a + da } else { b - db };
                let opx = if a == -1.0 { da } else { 1.0 + x };
                let omx = if b == 1.0 { db } else { 1.0 - x };
                out.push((x, opx, omx, w * len));
            }
        }
        out
    }
}

pub type Mat = nalgebra::DMatrix<f64>;
pub type Vector = nalgebra::DVector<f64>;

/// Blocks of the Petrov-Galerkin schemes from their defining inner products.
///
/// Trial `φ_n = I_L^β L_n`, test `v_k = (1+x) I_R^ρ L_k`:
/// `M^L = (D^α φ_n, v_k)`, `M^R = (D^{α*} I_R^β L_n, v_k)`, `M^C = (φ_n', v_k)`,
/// `f = (h, v_k)`.
pub struct PetrovOracle {
    pub a_l: Mat,
    pub a_r: Mat,
    pub m_l: Mat,
    pub m_r: Mat,
    pub m_c: Mat,
    pub load: Vector,
}

pub fn petrov_oracle(alpha: f64, beta: f64, rho: f64, nodes: &[f64], n: usize, h: &dyn Fn(f64) -> f64, breaks: &[f64]) -> PetrovOracle {
    let inner = TanhSinh::inner();
    let top = n.saturating_sub(1);
    let mut a_l = Mat::zeros(nodes.len(), n);
    let mut a_r = Mat::zeros(nodes.len(), n);
    for (i, &x) in nodes.iter().enumerate() {
        let l = frac_int_legendre(End::Left, beta, top, 1.0 + x, &inner);
        let r = frac_int_legendre(End::Right, beta, top, 1.0 - x, &inner);
        for j in 0..n {
            a_l[(i, j)] = l[j];
            a_r[(i, j)] = r[j];
        }
    }
    let mut m_l = Mat::zeros(n, n);
    let mut m_r = Mat::zeros(n, n);
    let mut m_c = Mat::zeros(n, n);
    let mut load = Vector::zeros(n);
    for (x, opx, omx, w) in TanhSinh::outer().points_pm1(breaks) {
        let dl = frac_int_legendre(End::Left, beta - alpha, top, opx, &inner);
        let dr = frac_int_legendre(End::Right, beta - alpha, top, omx, &inner);
        let dc = frac_int_legendre(End::Left, beta - 1.0, top, opx, &inner);
        let v: Vec<f64> = frac_int_legendre(End::Right, rho, top, omx, &inner)
            .into_iter()
            .map(|t| opx * t)
            .collect();
        let hx = h(x);
        for k in 0..n {
            let wv = w * v[k];
            load[k] += wv * hx;
            for j in 0..n {
                m_l[(k, j)] += wv * dl[j];
                m_r[(k, j)] += wv * dr[j];
                m_c[(k, j)] += wv * dc[j];
            }
        }
    }
    PetrovOracle { a_l, a_r, m_l, m_r, m_c, load }
}

/// Blocks of the mixed scheme from their defining inner products.
///
/// `L^β = (L_n + L_{n+1}, I_R^β L_k)`, `R^β = (L_n - L_{n+1}, I_L^β L_k)`,
/// `M^C = (2k+1)(I_L^β L_n, L_k)` for `k = 1..=N`, `f = (h, L_{k-1} - L_{k+1})`.
pub struct MixedOracle {
    pub a_l: Mat,
    pub a_r: Mat,
    pub l_beta: Mat,
    pub r_beta: Mat,
    pub m_c: Mat,
    pub load: Vector,
}

pub fn mixed_oracle(beta: f64, nodes: &[f64], n: usize, h: &dyn Fn(f64) -> f64, breaks: &[f64]) -> MixedOracle {
    let inner = TanhSinh::inner();
    let top = n.saturating_sub(1);
    let mut a_l = Mat::zeros(nodes.len(), n);
    let mut a_r = Mat::zeros(nodes.len(), n);
    for (i, &x) in nodes.iter().enumerate() {
        let l = frac_int_legendre(End::Left, beta, top, 1.0 + x, &inner);
        let r = frac_int_legendre(End::Right, beta, top, 1.0 - x, &inner);
        for j in 0..n {
            a_l[(i, j)] = l[j];
            a_r[(i, j)] = r[j];
        }
    }
    let mut l_beta = Mat::zeros(n, n);
    let mut r_beta = Mat::zeros(n, n);
    let mut m_c = Mat::zeros(n, n);
    let mut load = Vector::zeros(n);
    for (x, opx, omx, w) in TanhSinh::outer().points_pm1(breaks) {
        let leg = legendre_deriv(n + 1, 0, x);
        let il = frac_int_legendre(End::Left, beta, top, opx, &inner);
        let ir = frac_int_legendre(End::Right, beta, top, omx, &inner);
        let hx = h(x);
        for r in 0..n {
            let k = r + 1;
            load[r] += w * hx * (leg[k - 1] - leg[k + 1]);
            for j in 0..n {
                l_beta[(r, j)] += w * ir[r] * (leg[j] + leg[j + 1]);
                r_beta[(r, j)] += w * il[r] * (leg[j] - leg[j + 1]);
                m_c[(r, j)] += w * (2 * k + 1) as f64 * leg[k] * il[j];
            }
        }
    }
    MixedOracle { a_l, a_r, l_beta, r_beta, m_c, load }
}

/// Largest absolute entrywise difference.
pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
