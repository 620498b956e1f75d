use super::{FracOrder, Side};
use crate::error::{Error, Result};
use crate::orthopoly::jacobi_values;
use crate::scalar::{gamma_ratio, Real};

/// `coeff · (1±x)^mu · J_n^{sigma,eta}(x)`, with `+` on the left side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gjf<T> {
    pub side: Side,
    pub coeff: T,
    pub mu: T,
    pub sigma: T,
    pub eta: T,
    pub n: usize,
}

const COMPAT_TOL: f64 = 1e-12;

impl<T: Real> Gjf<T> {
    pub fn new(side: Side, coeff: T, mu: T, sigma: T, eta: T, n: usize) -> Result<Self> {
        if mu <= -T::one() {
            return Err(Error::Singularity(format!(
                "boundary exponent {mu} is not integrable"
            )));
        }
        Ok(Gjf { side, coeff, mu, sigma, eta, n })
    }

    /// `L_n` viewed as a GJF anchored on `side`.
    pub fn legendre(side: Side, n: usize) -> Self {
        Gjf {
            side,
            coeff: T::one(),
            mu: T::zero(),
            sigma: T::zero(),
            eta: T::zero(),
            n,
        }
    }

    /// Whether the closed-form integral and derivative rules apply.
    pub fn is_compatible(&self) -> bool {
        let p = match self.side {
            Side::Left => self.eta,
            Side::Right => self.sigma,
        };
        (p - self.mu).abs() <= T::of(COMPAT_TOL)
    }

    /// Value at `x`; endpoints are rejected when the weight is singular there.
    pub fn eval(&self, x: T) -> Result<T> {
        if self.mu < T::zero() && self.side.distance(x) <= T::zero() {
            return Err(Error::Singularity(format!(
                "negative exponent {} at the {:?} endpoint",
                self.mu, self.side
            )));
        }
        Ok(self.eval_unchecked(x))
    }

    pub fn eval_unchecked(&self, x: T) -> T {
        let p = jacobi_values(self.sigma, self.eta, self.n, x)[self.n];
        self.coeff * self.side.distance(x).powf(self.mu) * p
    }
}

fn require_compatible<T: Real>(g: &Gjf<T>) -> Result<()> {
    if g.is_compatible() {
        Ok(())
    } else {
        Err(Error::Structural(format!(
            "{:?} GJF with mu = {} and parameters ({}, {})",
            g.side, g.mu, g.sigma, g.eta
        )))
    }
}

/// Fractional integral of order `rho > 0` on the GJF's own side.
pub fn frac_integrate_gjf<T: Real>(g: &Gjf<T>, rho: T) -> Result<Gjf<T>> {
    if rho <= T::zero() {
        return Err(Error::domain(format!("integration order {rho} must be positive")));
    }
    require_compatible(g)?;
    let nn = T::of_usize(g.n);
    let one = T::one();
    let factor = gamma_ratio(nn + g.mu + one, nn + g.mu + rho + one);
    let (sigma, eta) = match g.side {
        Side::Left => (g.sigma - rho, g.eta + rho),
        Side::Right => (g.sigma + rho, g.eta - rho),
    };
    Ok(Gjf {
        coeff: g.coeff * factor,
        mu: g.mu + rho,
        sigma,
        eta,
        ..*g
    })
}

/// Fractional derivative of order `rho > 0` on the GJF's own side.
pub fn frac_derive_gjf<T: Real>(g: &Gjf<T>, rho: T) -> Result<Gjf<T>> {
    if rho <= T::zero() {
        return Err(Error::domain(format!("derivative order {rho} must be positive")));
    }
    require_compatible(g)?;
    let mu = g.mu - rho;
    if mu <= -T::one() {
        return Err(Error::Singularity(format!(
            "derivative of order {rho} leaves boundary exponent {mu}"
        )));
    }
    let nn = T::of_usize(g.n);
    let one = T::one();
    let factor = gamma_ratio(nn + g.mu + one, nn + mu + one);
    let (sigma, eta) = match g.side {
        Side::Left => (g.sigma + rho, g.eta - rho),
        Side::Right => (g.sigma - rho, g.eta + rho),
    };
    Ok(Gjf {
        coeff: g.coeff * factor,
        mu,
        sigma,
        eta,
        ..*g
    })
}

/// Integrates for positive orders, differentiates for negative ones.
pub fn apply_signed<T: Real>(g: &Gjf<T>, order: FracOrder<T>) -> Result<Gjf<T>> {
    let v = order.value();
    if v > T::zero() {
        frac_integrate_gjf(g, v)
    } else if v < T::zero() {
        frac_derive_gjf(g, -v)
    } else {
        Ok(*g)
    }
}
