//! Dense linear systems of the three spectral schemes.
//!
//! Every scheme expands the solution in the left trial basis
//! `φ^L_n = I_L^β L_n = Γ(n+1)/Γ(n+1+β) (1+x)^β J_n^{-β,β}` and couples it to the
//! mirrored right basis through collocation at Gauss–Legendre nodes.

mod mixed;
mod petrov;

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

pub use mixed::{mixed_blocks, MixedBlocks};
pub use petrov::{petrov_blocks, vk_coefficient, PetrovBlocks, TestVariant};

use crate::error::{Error, Result};
use crate::fraccalc::{apply_signed, DiffusionSpec, Evaluable, FracOrder, Gjf, Side};
use crate::numerics::solve_matrix;
use crate::orthopoly::{gauss_rule, jacobi_values};
use crate::scalar::{gamma_ratio, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeId {
    Galerkin1,
    PetrovGalerkin2,
    Mixed3,
}

impl SchemeId {
    pub const ALL: [SchemeId; 3] = [SchemeId::Galerkin1, SchemeId::PetrovGalerkin2, SchemeId::Mixed3];

    /// Order of the fractional integral generating the trial basis.
    pub fn trial_order<T: Real>(self, alpha: T) -> T {
        match self {
            SchemeId::Galerkin1 => alpha / T::of(2.0),
            _ => (alpha - T::one()) / T::of(2.0),
        }
    }

    pub fn number(self) -> u8 {
        match self {
            SchemeId::Galerkin1 => 1,
            SchemeId::PetrovGalerkin2 => 2,
            SchemeId::Mixed3 => 3,
        }
    }

    pub fn from_number(n: u8) -> Option<SchemeId> {
        match n {
            1 => Some(SchemeId::Galerkin1),
            2 => Some(SchemeId::PetrovGalerkin2),
            3 => Some(SchemeId::Mixed3),
            _ => None,
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let n = match t.as_str() {
            "1" | "galerkin1" | "galerkin" => 1,
            "2" | "petrovgalerkin2" | "petrov-galerkin" => 2,
            "3" | "mixed3" | "mixed" => 3,
            _ => 0,
        };
        SchemeId::from_number(n).ok_or_else(|| Error::domain(format!("unknown scheme `{s}`")))
    }
}

/// Knobs of the assembly that are not part of the mathematical problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AssemblyOptions {
    /// Load integrals use `N + load_slack` points per piece of the source.
    pub load_slack: usize,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        AssemblyOptions { load_slack: 32 }
    }
}

/// Every intermediate matrix of an assembly, kept for inspection and testing.
#[derive(Debug, Clone)]
pub enum Blocks<T: Real> {
    Petrov(PetrovBlocks<T>),
    Mixed(MixedBlocks<T>),
}

#[derive(Debug, Clone)]
pub struct AssembledSystem<T: Real> {
    pub scheme: SchemeId,
    pub alpha: T,
    pub n: usize,
    pub stiffness: DMatrix<T>,
    pub load: DVector<T>,
    pub trial_order: FracOrder<T>,
    pub nodes: Vec<T>,
    pub blocks: Blocks<T>,
}

/// `N` Gauss–Legendre nodes, increasing.
pub fn collocation_nodes<T: Real>(n: usize) -> Vec<T> {
    gauss_rule::<T>(n.max(1)).map(|r| r.nodes).unwrap_or_default()
}

/// Trial function `I^β L_n` anchored on `side`; a negative `β` differentiates.
pub fn trial_function<T: Real>(side: Side, beta: T, n: usize) -> Result<Gjf<T>> {
    apply_signed(&Gjf::legendre(side, n), FracOrder::new(beta)?)
}

/// `Γ(n+1)/Γ(n+1+β)`, the coefficient of `I^β L_n` in GJF form.
pub(crate) fn basis_coeff<T: Real>(n: usize, beta: T) -> T {
    let a = T::of_usize(n + 1);
    gamma_ratio(a, a + beta)
}

/// Values of `φ_0..φ_{N-1}` anchored on `side` at `x`.
pub(crate) fn basis_row<T: Real>(side: Side, beta: T, n: usize, x: T) -> Vec<T> {
    if n == 0 {
        return Vec::new();
    }
    let (s, e) = match side {
        Side::Left => (-beta, beta),
        Side::Right => (beta, -beta),
    };
    let w = side.distance(x).powf(beta);
    jacobi_values(s, e, n - 1, x)
        .into_iter()
        .enumerate()
        .map(|(k, p)| basis_coeff(k, beta) * w * p)
        .collect()
}

/// Collocation matrices `A^L_{ij} = φ^L_{j}(x_i)` and `A^R_{ij} = φ^R_{j}(x_i)`.
pub fn assemble_a<T: Real>(scheme: SchemeId, alpha: T, nodes: &[T]) -> (DMatrix<T>, DMatrix<T>) {
    let beta = scheme.trial_order(alpha);
    let n = nodes.len();
    let mut al = DMatrix::zeros(n, n);
    let mut ar = DMatrix::zeros(n, n);
    for (i, &x) in nodes.iter().enumerate() {
        for (j, v) in basis_row(Side::Left, beta, n, x).into_iter().enumerate() {
            al[(i, j)] = v;
        }
        for (j, v) in basis_row(Side::Right, beta, n, x).into_iter().enumerate() {
            ar[(i, j)] = v;
        }
    }
    (al, ar)
}

pub(crate) fn check_spec<T: Real>(spec: &DiffusionSpec<T>) -> Result<()> {
    let a = spec.alpha;
    if !(a > T::zero() && a < T::of(2.0)) || a == T::one() {
        return Err(Error::domain(format!("alpha = {a} must lie in (0, 2) without 1")));
    }
    if spec.p < T::zero() || spec.q < T::zero() {
        return Err(Error::domain("diffusion weights must be nonnegative"));
    }
    if spec.p > T::zero() && spec.q > T::zero() && (spec.p + spec.q - T::one()).abs() > T::of(1e-12) {
        return Err(Error::domain(format!(
            "two-sided weights must sum to one, got {} + {}",
            spec.p, spec.q
        )));
    }
    Ok(())
}

/// `(A^R)^{-1} A^L` by a pivoted solve.
pub(crate) fn right_to_left<T: Real>(a_l: &DMatrix<T>, a_r: &DMatrix<T>) -> Result<DMatrix<T>> {
    solve_matrix(a_r, a_l, "collocation matrix A^R")
}

pub fn assemble_scheme1<T: Real>(spec: DiffusionSpec<T>, h: &Evaluable<T>, n: usize) -> Result<AssembledSystem<T>> {
    assemble(SchemeId::Galerkin1, spec, h, n, AssemblyOptions::default())
}

pub fn assemble_scheme2<T: Real>(spec: DiffusionSpec<T>, h: &Evaluable<T>, n: usize) -> Result<AssembledSystem<T>> {
    assemble(SchemeId::PetrovGalerkin2, spec, h, n, AssemblyOptions::default())
}

pub fn assemble_scheme3<T: Real>(spec: DiffusionSpec<T>, h: &Evaluable<T>, n: usize) -> Result<AssembledSystem<T>> {
    assemble(SchemeId::Mixed3, spec, h, n, AssemblyOptions::default())
}

/// Assembles stiffness and load of `scheme` at resolution `n`.
pub fn assemble<T: Real>(
    scheme: SchemeId,
    spec: DiffusionSpec<T>,
    h: &Evaluable<T>,
    n: usize,
    opts: AssemblyOptions,
) -> Result<AssembledSystem<T>> {
    check_spec(&spec)?;
    if n == 0 {
        return Err(Error::domain("resolution N must be positive"));
    }
    let alpha = spec.alpha;
    let nodes = collocation_nodes::<T>(n);
    let m = n + opts.load_slack;
    let (stiffness, load, blocks) = match scheme {
        SchemeId::Mixed3 => {
            let b = mixed_blocks(alpha, n, spec.q != T::zero())?;
            let load = mixed::load(h, n, m)?;
            let k = b.stiffness(&spec)?;
            (k, load, Blocks::Mixed(b))
        }
        _ => {
            let variant = if scheme == SchemeId::Galerkin1 {
                TestVariant::Scheme1
            } else {
                TestVariant::Scheme2
            };
            let b = petrov_blocks(variant, alpha, n, spec.q != T::zero())?;
            let load = petrov::load(variant, alpha, h, n, m)?;
            let k = b.stiffness(&spec)?;
            (k, load, Blocks::Petrov(b))
        }
    };
    if stiffness.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularMatrix {
            what: "stiffness (non-finite entries)".into(),
            sigma_min: f64::NAN,
        });
    }
    Ok(AssembledSystem {
        scheme,
        alpha,
        n,
        stiffness,
        load,
        trial_order: FracOrder::new(scheme.trial_order(alpha))?,
        nodes,
        blocks,
    })
}
