use super::Side;
use crate::error::{Error, Result};
use crate::scalar::{gamma_ratio, near_integer, Real};

/// `Σ c_i (1±x)^{s_i}`, with `+` on the left side.
///
/// Terms are kept sorted by exponent with duplicates merged.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSum<T> {
    pub side: Side,
    terms: Vec<(T, T)>,
}

const MERGE_TOL: f64 = 1e-12;

impl<T: Real> PowerSum<T> {
    /// Builds a power sum from `(coefficient, exponent)` pairs.
    pub fn new(side: Side, terms: impl IntoIterator<Item = (T, T)>) -> Result<Self> {
        let mut v: Vec<(T, T)> = terms.into_iter().collect();
        if let Some(&(_, s)) = v.iter().find(|&&(_, s)| s <= -T::one()) {
            return Err(Error::Singularity(format!("exponent {s} is not integrable")));
        }
        v.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite exponent"));
        let mut out: Vec<(T, T)> = Vec::with_capacity(v.len());
        for (c, s) in v {
            match out.last_mut() {
                Some(last) if (last.1 - s).abs() <= T::of(MERGE_TOL) => last.0 += c,
                _ => out.push((c, s)),
            }
        }
        out.retain(|&(c, _)| c != T::zero());
        Ok(PowerSum { side, terms: out })
    }

    pub fn zero(side: Side) -> Self {
        PowerSum { side, terms: Vec::new() }
    }

    pub fn terms(&self) -> &[(T, T)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(mut self, c: T) -> Self {
        for t in &mut self.terms {
            t.0 *= c;
        }
        self.terms.retain(|&(c, _)| c != T::zero());
        self
    }

    pub fn eval(&self, x: T) -> Result<T> {
        let d = self.side.distance(x);
        let mut acc = T::zero();
        for &(c, s) in &self.terms {
            if d <= T::zero() && s < T::zero() {
                return Err(Error::Singularity(format!(
                    "negative exponent {s} at the {:?} endpoint",
                    self.side
                )));
            }
            acc += c * d.powf(s);
        }
        Ok(acc)
    }

    /// Classical derivative in the side's own variable `(1±x)`.
    fn derive_in_distance(&self) -> Vec<(T, T)> {
        self.terms
            .iter()
            .filter(|&&(_, s)| s != T::zero())
            .map(|&(c, s)| (c * s, s - T::one()))
            .collect()
    }
}

/// Fractional integral of order `rho` applied termwise.
pub fn frac_integrate_power<T: Real>(p: &PowerSum<T>, rho: T) -> Result<PowerSum<T>> {
    if rho <= T::zero() {
        return Err(Error::domain(format!("integration order {rho} must be positive")));
    }
    let one = T::one();
    PowerSum::new(
        p.side,
        p.terms
            .iter()
            .map(|&(c, s)| (c * gamma_ratio(s + one, s + one + rho), s + rho)),
    )
}

/// The operator `D I^{n-α} D^{n-1}`, `n = ⌈α⌉`, on the power sum's own side.
///
/// On the right side `D` stands for `-d/dx`, which is the derivative in the
/// variable `1-x`; either way the rule is `(1±x)^s ↦ Γ(s+1)/Γ(s+1-α) (1±x)^{s-α}`
/// except that constants are annihilated when `α > 1`.
pub fn rl_derivative_power<T: Real>(p: &PowerSum<T>, alpha: T) -> Result<PowerSum<T>> {
    let one = T::one();
    if !(alpha > T::zero() && alpha < T::of(2.0)) {
        return Err(Error::domain(format!("order {alpha} outside (0, 2)")));
    }
    if alpha == one {
        return Err(Error::domain("order 1 is the classical derivative"));
    }
    let inner = if alpha > one {
        PowerSum::new(p.side, p.derive_in_distance())?
    } else {
        p.clone()
    };
    let n = if alpha > one { T::of(2.0) } else { one };
    let integrated = frac_integrate_power(&inner, n - alpha)?;
    let out = integrated.derive_in_distance();
    if let Some(&(_, s)) = out.iter().find(|&&(c, s)| c != T::zero() && s <= -one) {
        return Err(Error::Singularity(format!(
            "derivative of order {alpha} produces exponent {s}"
        )));
    }
    PowerSum::new(p.side, out)
}

/// `c (1+x)^a (1-x)^b` rewritten as a power sum anchored on `target`.
///
/// The exponent on the other side must be a nonnegative integer.
pub fn mixed_power_to_side<T: Real>(c: T, a_exp: T, b_exp: T, target: Side) -> Result<PowerSum<T>> {
    let (own, other) = match target {
        Side::Left => (a_exp, b_exp),
        Side::Right => (b_exp, a_exp),
    };
    let k = match near_integer(other, T::of(1e-12)) {
        Some(k) if k >= 0 => k as usize,
        _ => {
            return Err(Error::UnsupportedShape(format!(
                "exponent {other} opposite the {target:?} side is not a nonnegative integer"
            )))
        }
    };
    // (1∓x)^k = (2 - (1±x))^k
    let two = T::of(2.0);
    let mut terms = Vec::with_capacity(k + 1);
    let mut binom = T::one();
    for j in 0..=k {
        let sign = if j % 2 == 0 { T::one() } else { -T::one() };
        terms.push((c * sign * binom * two.powi((k - j) as i32), own + T::of_usize(j)));
        binom = binom * T::of_usize(k - j) / T::of_usize(j + 1);
    }
    PowerSum::new(target, terms)
}
