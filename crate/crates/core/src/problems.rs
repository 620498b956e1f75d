//! Problem catalog.
//!
//! Every problem is stored in the normalized form
//! `-(p D^α u + q D^{α*} u) + d u' = rhs`.

use crate::assembly::SchemeId;
use crate::error::{Error, Result};
use crate::fraccalc::{manufactured_rhs, DiffusionSpec, Evaluable, Piece};
use crate::scalar::{gamma, Real};

#[derive(Debug, Clone)]
pub struct ProblemSpec<T: Real> {
    pub alpha: T,
    pub p: T,
    pub q: T,
    pub d: T,
    pub rhs: Evaluable<T>,
    pub exact: Option<Evaluable<T>>,
    pub label: String,
    /// Scheme the problem was designed for, if any.
    pub designated: Option<SchemeId>,
}

impl<T: Real> ProblemSpec<T> {
    pub fn new(label: impl Into<String>, spec: DiffusionSpec<T>, rhs: Evaluable<T>, exact: Option<Evaluable<T>>) -> Result<Self> {
        let p = ProblemSpec {
            alpha: spec.alpha,
            p: spec.p,
            q: spec.q,
            d: spec.d,
            rhs,
            exact,
            label: label.into(),
            designated: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn diffusion(&self) -> DiffusionSpec<T> {
        DiffusionSpec {
            alpha: self.alpha,
            p: self.p,
            q: self.q,
            d: self.d,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        crate::assembly::check_spec(&self.diffusion())
    }

    fn designated(mut self, s: SchemeId) -> Self {
        self.designated = Some(s);
        self
    }
}

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha < T::of(2.0) && alpha != T::one() {
        Ok(())
    } else if alpha == T::one() {
        Err(Error::DegenerateReduction)
    } else {
        Err(Error::domain(format!("alpha = {alpha} outside (0, 2)")))
    }
}

/// `(-Δ)^{α/2} u = h` rewritten as `-(D^α u + D^{α*} u)/2 = -cos(πα/2) h`.
pub fn laplacian_problem<T: Real>(alpha: T, h: Evaluable<T>) -> Result<ProblemSpec<T>> {
    check_alpha(alpha)?;
    let half = T::of(0.5);
    let c = -(T::pi() * alpha * half).cos();
    let spec = DiffusionSpec { alpha, p: half, q: half, d: T::zero() };
    ProblemSpec::new("laplacian", spec, h.scaled(c), None)
}

/// Exact solution of `(-Δ)^{α/2} u = 1` on `(-1, 1)` with `u = 0` outside.
pub fn getoor_exact<T: Real>(alpha: T) -> Evaluable<T> {
    let one = T::one();
    let two = T::of(2.0);
    let half = T::of(0.5);
    let c = two.powf(-alpha) * T::pi().sqrt() / (gamma((one + alpha) * half) * gamma(one + alpha * half));
    let e = alpha * half;
    Evaluable::from_piece(Piece::constant(-one, one, e, e, c))
}

/// `-(1+x)^s + 2 x_+^s`, scaled by `c`.
fn kinked_power<T: Real>(s: T, c: T) -> Evaluable<T> {
    let one = T::one();
    Evaluable::from_pieces(vec![
        Piece::constant(-one, one, s, T::zero(), -c),
        Piece::constant(T::zero(), one, s, T::zero(), T::of(2.0) * c),
    ])
}

/// One-sided problem `D^α u = h` with a solution whose third derivative jumps at 0.
pub fn example1_problem<T: Real>(alpha: T) -> Result<ProblemSpec<T>> {
    if !(alpha > T::one() && alpha < T::of(2.0)) {
        return Err(Error::domain(format!("example 1 needs alpha in (1, 2), got {alpha}")));
    }
    let half = alpha / T::of(2.0);
    let three = T::of(3.0);
    let one = T::one();
    let s = three + half;
    let sh = three - half;
    let exact = kinked_power(s, one / gamma(s + one));
    // D^α u = h  ⇔  -(1·D^α u) = -h
    let rhs = kinked_power(sh, -one / gamma(sh + one));
    let spec = DiffusionSpec { alpha, p: one, q: T::zero(), d: T::zero() };
    ProblemSpec::new("example1", spec, rhs, Some(exact))
}

/// `u = (1+x)^a (1-x)^b` with the matching right-hand side.
pub fn manufactured_problem<T: Real>(a: T, b: T, spec: DiffusionSpec<T>) -> Result<ProblemSpec<T>> {
    check_alpha(spec.alpha)?;
    let rhs = manufactured_rhs(a, b, spec)?;
    let one = T::one();
    let exact = Evaluable::from_piece(Piece::constant(-one, one, a, b, one));
    ProblemSpec::new(format!("manufactured({a},{b})"), spec, rhs, Some(exact))
}

/// Mean first exit time `T` of the process generated by `-(-Δ)^{α/2}` plus drift.
///
/// The source is `-cos(πα/2)`, i.e. `(-Δ)^{α/2} T = 1` after the reduction,
/// so exit times come out nonnegative. With `d = cos(πα/2)` the equation is
/// `(-Δ)^{α/2} T - T' = 1`.
pub fn mfet_problem<T: Real>(alpha: T, d: T) -> Result<ProblemSpec<T>> {
    let mut p = laplacian_problem(alpha, Evaluable::constant(T::one()))?;
    p.d = d;
    p.label = "mfet".into();
    if d == T::zero() {
        p.exact = Some(getoor_exact(alpha));
    }
    Ok(p.designated(SchemeId::Mixed3))
}

/// Catalog labels accepted by [`catalog_problem`].
pub const CATALOG_LABELS: [&str; 9] = [
    "example1",
    "laplacian-const",
    "example3-s1",
    "example3-s2",
    "manufactured-u1",
    "manufactured-u2",
    "manufactured-u3",
    "mfet",
    "mfet-drift",
];

fn drifted<T: Real>(alpha: T) -> DiffusionSpec<T> {
    let half = T::of(0.5);
    DiffusionSpec { alpha, p: half, q: half, d: T::one() }
}

/// Looks a problem up by label.
pub fn catalog_problem<T: Real>(label: &str, alpha: T) -> Result<ProblemSpec<T>> {
    let five = T::of(5.0);
    let two = T::of(2.0);
    let mut p = match label {
        "example1" => example1_problem(alpha)?,
        "laplacian-const" => {
            let mut p = laplacian_problem(alpha, Evaluable::constant(T::one()))?;
            p.exact = Some(getoor_exact(alpha));
            p
        }
        "example3-s1" => manufactured_problem(five + alpha / two, five, drifted(alpha))?.designated(SchemeId::Galerkin1),
        "example3-s2" => manufactured_problem(five + (alpha - T::one()) / two, five, drifted(alpha))?
            .designated(SchemeId::PetrovGalerkin2),
        "manufactured-u1" => manufactured_problem(T::of(4.0), T::of(3.0), drifted(alpha))?,
        "manufactured-u2" => manufactured_problem(T::of(2.0), T::of(4.0), drifted(alpha))?,
        "manufactured-u3" => manufactured_problem(T::of(4.0), T::of(4.0), drifted(alpha))?,
        "mfet" => mfet_problem(alpha, T::zero())?,
        "mfet-drift" => mfet_problem(alpha, (T::pi() * alpha / two).cos())?,
        other => return Err(Error::UnknownProblem(other.to_string())),
    };
    p.label = label.to_string();
    Ok(p)
}
