//! Schemes 1 and 2: trial functions `I_L^β L_n`, test functions `(1+x) I_R^ρ L_k`.
//!
//! Scheme 1 has `β = ρ = α/2`; scheme 2 has `β = (α-1)/2` and `ρ = β + 1`.

use nalgebra::{DMatrix, DVector};

use super::{assemble_a, basis_coeff, collocation_nodes, right_to_left};
use crate::error::Result;
use crate::fraccalc::{DiffusionSpec, Evaluable};
use crate::orthopoly::{gauss_jacobi_rule, gauss_rule, jacobi_values, legendre_norm};
use crate::scalar::{gamma_ratio, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestVariant {
    Scheme1,
    Scheme2,
}

impl TestVariant {
    /// `(β, ρ)`: trial order and test integral order.
    pub fn orders<T: Real>(self, alpha: T) -> (T, T) {
        let two = T::of(2.0);
        match self {
            TestVariant::Scheme1 => (alpha / two, alpha / two),
            TestVariant::Scheme2 => ((alpha - T::one()) / two, (alpha + T::one()) / two),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PetrovBlocks<T: Real> {
    pub variant: TestVariant,
    pub a_l: DMatrix<T>,
    pub a_r: DMatrix<T>,
    /// `(A^R)^{-1} A^L`, present when the right operator is active.
    pub transfer: Option<DMatrix<T>>,
    pub m_l: DMatrix<T>,
    pub m_r: DMatrix<T>,
    pub m_c: DMatrix<T>,
}

impl<T: Real> PetrovBlocks<T> {
    /// `-p̄ M^L - q̄ M^R (A^R)^{-1} A^L + d̄ M^C`.
    pub fn stiffness(&self, spec: &DiffusionSpec<T>) -> Result<DMatrix<T>> {
        let mut k = &self.m_l * (-spec.p);
        if spec.q != T::zero() {
            let t = match &self.transfer {
                Some(t) => t.clone(),
                None => right_to_left(&self.a_l, &self.a_r)?,
            };
            k -= (&self.m_r * t) * spec.q;
        }
        if spec.d != T::zero() {
            k += &self.m_c * spec.d;
        }
        Ok(k)
    }
}

/// `(L_n, (1+x) L_k + ρ/(2k+1) (L_{k+1} - L_{k-1}))` with `L_{-1} := 1`, in closed form.
fn m_left<T: Real>(rho: T, n: usize) -> DMatrix<T> {
    let g = |j: usize| legendre_norm::<T>(j);
    let one = T::one();
    let mut m = DMatrix::zeros(n, n);
    if n == 0 {
        return m;
    }
    // row 0: (1 - ρ) + (1 + ρ) x
    m[(0, 0)] = (one - rho) * g(0);
    if n > 1 {
        m[(0, 1)] = (one + rho) * g(1);
    }
    for k in 1..n {
        let kk = T::of_usize(k);
        let d = T::of_usize(2 * k + 1);
        m[(k, k)] = g(k);
        if k + 1 < n {
            m[(k, k + 1)] = (kk + one + rho) / d * g(k + 1);
        }
        m[(k, k - 1)] = (kk - rho) / d * g(k - 1);
    }
    m
}

/// Unweighted Legendre-rule values of `J_k^{ρ,-ρ}` and `J_m^{-ρ,ρ}` for the `M^R` integrals.
fn m_right<T: Real>(rho: T, n: usize) -> Result<DMatrix<T>> {
    let rule = gauss_rule::<T>(n + 2)?;
    let one = T::one();
    let mut m = DMatrix::zeros(n, n);
    if n == 0 {
        return Ok(m);
    }
    let pk: Vec<Vec<T>> = rule.nodes.iter().map(|&x| jacobi_values(rho, -rho, n - 1, x)).collect();
    let pm: Vec<Vec<T>> = rule.nodes.iter().map(|&x| jacobi_values(-rho, rho, n - 1, x)).collect();
    for k in 0..n {
        let ck = basis_coeff(k, rho);
        for j in 0..n {
            let mut ip = T::zero();
            for (i, (&x, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
                ip += w * (one + x) * pk[i][k] * pm[i][j];
            }
            let jj = T::of_usize(j);
            let v = (jj + T::of(0.5)) * ck * gamma_ratio(jj + one, jj + one - rho) * ip;
            m[(k, j)] = v * legendre_norm::<T>(j);
        }
    }
    Ok(m)
}

/// Expansion coefficient `(v_k)_m` of `v_k = (1+x) I_R^ρ L_k` in the left trial basis.
pub fn vk_coefficient<T: Real>(variant: TestVariant, k: usize, m: usize, alpha: T) -> Result<T> {
    let (_, rho) = variant.orders(alpha);
    let rule = gauss_rule::<T>(crate::orthopoly::default_rule_size(k + m + 1))?;
    let one = T::one();
    let ip = rule.integrate(|x| {
        (one + x) * jacobi_values(rho, -rho, k, x)[k] * jacobi_values(-rho, rho, m, x)[m]
    });
    let mm = T::of_usize(m);
    Ok((mm + T::of(0.5)) * basis_coeff(k, rho) * gamma_ratio(mm + one, mm + one - rho) * ip)
}

/// Drift block `(φ^L_n, -D v_k)`.
fn m_drift<T: Real>(variant: TestVariant, beta: T, n: usize) -> Result<DMatrix<T>> {
    let one = T::one();
    let mut m = DMatrix::zeros(n, n);
    if n == 0 {
        return Ok(m);
    }
    match variant {
        TestVariant::Scheme1 => {
            // -D v_k = (1+x) I_R^{β-1} L_k - I_R^β L_k
            let rule = gauss_jacobi_rule(beta - one, beta, n + 2)?;
            for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                let pn = jacobi_values(-beta, beta, n - 1, x);
                let pk1 = jacobi_values(beta - one, one - beta, n - 1, x);
                let pk = jacobi_values(beta, -beta, n - 1, x);
                for k in 0..n {
                    let kk = T::of_usize(k);
                    let t = (one + x) * gamma_ratio(kk + one, kk + beta) * pk1[k]
                        - (one - x) * basis_coeff(k, beta) * pk[k];
                    for j in 0..n {
                        m[(k, j)] += w * basis_coeff(j, beta) * pn[j] * t;
                    }
                }
            }
        }
        TestVariant::Scheme2 => {
            let rule = gauss_jacobi_rule(beta, beta, n + 2)?;
            for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                let pn = jacobi_values(-beta, beta, n - 1, x);
                let pk = jacobi_values(beta, -beta, n - 1, x);
                let pk1 = jacobi_values(one + beta, -one - beta, n - 1, x);
                for k in 0..n {
                    let kk = T::of_usize(k);
                    let t = (one + x) * pk[k] - (one - x) / (kk + beta + one) * pk1[k];
                    let t = t * basis_coeff(k, beta);
                    for j in 0..n {
                        m[(k, j)] += w * basis_coeff(j, beta) * pn[j] * t;
                    }
                }
            }
        }
    }
    Ok(m)
}

/// All blocks of scheme 1 or 2 at resolution `n`.
pub fn petrov_blocks<T: Real>(variant: TestVariant, alpha: T, n: usize, with_transfer: bool) -> Result<PetrovBlocks<T>> {
    let (beta, rho) = variant.orders(alpha);
    let scheme = match variant {
        TestVariant::Scheme1 => super::SchemeId::Galerkin1,
        TestVariant::Scheme2 => super::SchemeId::PetrovGalerkin2,
    };
    let (a_l, a_r) = assemble_a(scheme, alpha, &collocation_nodes::<T>(n));
    let transfer = if with_transfer {
        Some(right_to_left(&a_l, &a_r)?)
    } else {
        None
    };
    Ok(PetrovBlocks {
        variant,
        m_l: m_left(rho, n),
        m_r: m_right(rho, n)?,
        m_c: m_drift(variant, beta, n)?,
        a_l,
        a_r,
        transfer,
    })
}

/// `f_k = Γ(k+1)/Γ(k+1+ρ) ∫ (1-x)^ρ (1+x) h J_k^{ρ,-ρ}`.
pub(super) fn load<T: Real>(variant: TestVariant, alpha: T, h: &Evaluable<T>, n: usize, m: usize) -> Result<DVector<T>> {
    let (_, rho) = variant.orders(alpha);
    let pts = h.weighted_points(T::one(), rho, m)?;
    let mut f = DVector::zeros(n);
    for (x, w) in pts {
        for (k, p) in jacobi_values(rho, -rho, n - 1, x).into_iter().enumerate() {
            f[k] += w * p;
        }
    }
    for k in 0..n {
        f[k] *= basis_coeff(k, rho);
    }
    Ok(f)
}
