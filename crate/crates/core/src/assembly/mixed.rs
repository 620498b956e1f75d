//! Scheme 3: the flux variables `l = p̄ D^β u` and `r = q̄ D^{β*} u` are
//! expanded in `L_n ± L_{n+1}` and eliminated, leaving a system for `u^L`.

use nalgebra::{DMatrix, DVector};

use super::{assemble_a, basis_coeff, collocation_nodes, right_to_left, SchemeId};
use crate::error::Result;
use crate::fraccalc::{DiffusionSpec, Evaluable};
use crate::numerics::solve_matrix;
use crate::orthopoly::{gauss_jacobi_rule, jacobi_values, legendre_norm, legendre_values};
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct MixedBlocks<T: Real> {
    pub a_l: DMatrix<T>,
    pub a_r: DMatrix<T>,
    pub transfer: Option<DMatrix<T>>,
    /// `(L_n + L_{n+1}, I_R^β L_k)`.
    pub l_beta: DMatrix<T>,
    /// `(L_n - L_{n+1}, I_L^β L_k)`.
    pub r_beta: DMatrix<T>,
    /// `diag(γ_k)`.
    pub b: DMatrix<T>,
    pub c_l: DMatrix<T>,
    pub c_r: DMatrix<T>,
    /// `(2k+1) (φ^L_n, L_k)` for `k = 1..=N`.
    pub m_c: DMatrix<T>,
}

impl<T: Real> MixedBlocks<T> {
    /// `M^L = C^L (L^{(β)})^{-1} B`.
    pub fn m_left(&self) -> Result<DMatrix<T>> {
        Ok(&self.c_l * solve_matrix(&self.l_beta, &self.b, "flux matrix L^(beta)")?)
    }

    /// `M^R = C^R (R^{(β)})^{-1} B`.
    pub fn m_right(&self) -> Result<DMatrix<T>> {
        Ok(&self.c_r * solve_matrix(&self.r_beta, &self.b, "flux matrix R^(beta)")?)
    }

    /// `-p̄ M^L + q̄ M^R (A^R)^{-1} A^L + d̄ M^C`.
    ///
    /// The right flux enters with a plus sign: eliminating `r` from its defining
    /// equation and the balance equation yields `+q̄` once the adjoint derivative
    /// is moved onto the test function.
    pub fn stiffness(&self, spec: &DiffusionSpec<T>) -> Result<DMatrix<T>> {
        let n = self.b.nrows();
        let mut k = DMatrix::zeros(n, n);
        if spec.p != T::zero() {
            k -= self.m_left()? * spec.p;
        }
        if spec.q != T::zero() {
            let t = match &self.transfer {
                Some(t) => t.clone(),
                None => right_to_left(&self.a_l, &self.a_r)?,
            };
            k += self.m_right()? * t * spec.q;
        }
        if spec.d != T::zero() {
            k += &self.m_c * spec.d;
        }
        Ok(k)
    }
}

fn band<T: Real>(n: usize, sign: T) -> DMatrix<T> {
    // rows k = 1..=N, column n+1 for n = 0..N-1: 2(δ_{k,n} ± δ_{k,n+1})
    let two = T::of(2.0);
    DMatrix::from_fn(n, n, |r, c| {
        let k = r + 1;
        let mut v = T::zero();
        if k == c {
            v += two;
        }
        if k == c + 1 {
            v += sign * two;
        }
        v
    })
}

pub fn mixed_blocks<T: Real>(alpha: T, n: usize, with_transfer: bool) -> Result<MixedBlocks<T>> {
    let beta = SchemeId::Mixed3.trial_order(alpha);
    let (a_l, a_r) = assemble_a(SchemeId::Mixed3, alpha, &collocation_nodes::<T>(n));
    let transfer = if with_transfer {
        Some(right_to_left(&a_l, &a_r)?)
    } else {
        None
    };
    let m = n + 2;
    let mut l_beta = DMatrix::zeros(n, n);
    let mut r_beta = DMatrix::zeros(n, n);
    let mut m_c = DMatrix::zeros(n, n);

    let rule = gauss_jacobi_rule(beta, T::zero(), m)?;
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let l = legendre_values(n, x);
        let pk = jacobi_values(beta, -beta, n - 1, x);
        for k in 0..n {
            let t = w * basis_coeff(k, beta) * pk[k];
            for j in 0..n {
                l_beta[(k, j)] += t * (l[j] + l[j + 1]);
            }
        }
    }
    let rule = gauss_jacobi_rule(T::zero(), beta, m)?;
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let l = legendre_values(n, x);
        let pk = jacobi_values(-beta, beta, n - 1, x);
        for k in 0..n {
            let t = w * basis_coeff(k, beta) * pk[k];
            for j in 0..n {
                r_beta[(k, j)] += t * (l[j] - l[j + 1]);
            }
        }
        for r in 0..n {
            let k = r + 1;
            let t = w * T::of_usize(2 * k + 1) * l[k];
            for j in 0..n {
                m_c[(r, j)] += t * basis_coeff(j, beta) * pk[j];
            }
        }
    }
    let b = DMatrix::from_diagonal(&DVector::from_fn(n, |k, _| legendre_norm::<T>(k)));
    Ok(MixedBlocks {
        a_l,
        a_r,
        transfer,
        l_beta,
        r_beta,
        b,
        c_l: band(n, T::one()),
        c_r: band(n, -T::one()),
        m_c,
    })
}

/// `f_k = (h, L_{k-1} - L_{k+1})`, `k = 1..=N`.
pub(super) fn load<T: Real>(h: &Evaluable<T>, n: usize, m: usize) -> Result<DVector<T>> {
    let pts = h.weighted_points(T::zero(), T::zero(), m)?;
    let mut f = DVector::zeros(n);
    for (x, w) in pts {
        let l = legendre_values(n + 1, x);
        for r in 0..n {
            f[r] += w * (l[r] - l[r + 2]);
        }
    }
    Ok(f)
}
