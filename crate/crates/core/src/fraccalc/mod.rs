//! Fractional integrals and derivatives in closed form.
//!
//! Two representations are closed under the operators: weighted Jacobi terms
//! ([`Gjf`]) and finite power sums ([`PowerSum`]). [`Evaluable`] is the
//! general piecewise-singular function used for sources and exact solutions.

mod function;
mod gjf;
mod power;

pub use function::{hyp2f1, manufactured_rhs, DiffusionSpec, Evaluable, Piece};
pub use gjf::{apply_signed, frac_derive_gjf, frac_integrate_gjf, Gjf};
pub use power::{frac_integrate_power, mixed_power_to_side, rl_derivative_power, PowerSum};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Endpoint a one-sided operator or weight is anchored at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// Anchored at `-1`, weight `(1+x)`.
    Left,
    /// Anchored at `+1`, weight `(1-x)`.
    Right,
}

impl Side {
    /// `1+x` on the left, `1-x` on the right.
    #[inline]
    pub fn distance<T: Real>(self, x: T) -> T {
        match self {
            Side::Left => T::one() + x,
            Side::Right => T::one() - x,
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Signed fractional order: positive integrates, negative differentiates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder<T>(T);

impl<T: Real> FracOrder<T> {
    pub const CAP: f64 = 4.0;

    pub fn new(value: T) -> Result<Self> {
        if value.is_finite() && value.abs() < T::of(Self::CAP) {
            Ok(FracOrder(value))
        } else {
            Err(Error::domain(format!("fractional order {value} outside (-4, 4)")))
        }
    }

    pub fn value(self) -> T {
        self.0
    }
}
