use std::fmt;
use std::sync::Arc;

use super::power::{mixed_power_to_side, rl_derivative_power, PowerSum};
use super::Side;
use crate::error::{Error, Result};
use crate::orthopoly::gauss_jacobi_rule;
use crate::scalar::{gamma_ratio, near_integer, Real};

type Smooth<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// `scale · (x-lo)^{lo_exp} (hi-x)^{hi_exp} · smooth(x)` on `[lo, hi]`, zero elsewhere.
#[derive(Clone)]
pub struct Piece<T> {
    pub lo: T,
    pub hi: T,
    pub lo_exp: T,
    pub hi_exp: T,
    pub scale: T,
    smooth: Smooth<T>,
}

impl<T: Real> Piece<T> {
    pub fn new(lo: T, hi: T, lo_exp: T, hi_exp: T, smooth: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Piece {
            lo,
            hi,
            lo_exp,
            hi_exp,
            scale: T::one(),
            smooth: Arc::new(smooth),
        }
    }

    pub fn constant(lo: T, hi: T, lo_exp: T, hi_exp: T, c: T) -> Self {
        let mut p = Piece::new(lo, hi, lo_exp, hi_exp, |_| T::one());
        p.scale = c;
        p
    }

    fn eval(&self, x: T) -> T {
        if x < self.lo || x > self.hi {
            return T::zero();
        }
        let mut v = self.scale * (self.smooth)(x);
        if self.lo_exp != T::zero() {
            v *= (x - self.lo).powf(self.lo_exp);
        }
        if self.hi_exp != T::zero() {
            v *= (self.hi - x).powf(self.hi_exp);
        }
        v
    }
}

impl<T: fmt::Debug> fmt::Debug for Piece<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Piece")
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .field("lo_exp", &self.lo_exp)
            .field("hi_exp", &self.hi_exp)
            .field("scale", &self.scale)
            .finish_non_exhaustive()
    }
}

/// A sum of [`Piece`]s: piecewise smooth with declared endpoint singularities.
#[derive(Clone, Debug, Default)]
pub struct Evaluable<T> {
    pieces: Vec<Piece<T>>,
}

impl<T: Real> Evaluable<T> {
    pub fn zero() -> Self {
        Evaluable { pieces: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::from_piece(Piece::constant(-T::one(), T::one(), T::zero(), T::zero(), c))
    }

    pub fn from_piece(p: Piece<T>) -> Self {
        Evaluable { pieces: vec![p] }
    }

    pub fn from_pieces(pieces: Vec<Piece<T>>) -> Self {
        Evaluable { pieces }
    }

    /// Power sum on `[-1, 1]`. Exponents sharing a fractional part share one piece.
    pub fn from_power_sum(p: &PowerSum<T>) -> Self {
        let mut groups: Vec<(T, Vec<(T, i32)>)> = Vec::new();
        for &(c, s) in p.terms() {
            let slot = groups.iter_mut().find(|(base, _)| {
                near_integer(s - *base, T::of(1e-9)).is_some()
            });
            match slot {
                Some((base, items)) => {
                    let k = near_integer(s - *base, T::of(1e-9)).unwrap_or(0) as i32;
                    items.push((c, k));
                }
                None => groups.push((s, vec![(c, 0)])),
            }
        }
        let side = p.side;
        let pieces = groups
            .into_iter()
            .map(|(base, items)| {
                // keep the smallest exponent outside so the smooth part is a polynomial
                let kmin = items.iter().map(|&(_, k)| k).min().unwrap_or(0);
                let exp = base + T::from_i32(kmin).expect("small integer");
                let poly: Vec<(T, i32)> = items.into_iter().map(|(c, k)| (c, k - kmin)).collect();
                let smooth = move |x: T| {
                    let d = side.distance(x);
                    poly.iter().fold(T::zero(), |acc, &(c, k)| acc + c * d.powi(k))
                };
                match side {
                    Side::Left => Piece::new(-T::one(), T::one(), exp, T::zero(), smooth),
                    Side::Right => Piece::new(-T::one(), T::one(), T::zero(), exp, smooth),
                }
            })
            .collect();
        Evaluable { pieces }
    }

    pub fn pieces(&self) -> &[Piece<T>] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn eval(&self, x: T) -> T {
        self.pieces.iter().fold(T::zero(), |acc, p| acc + p.eval(x))
    }

    pub fn scaled(mut self, c: T) -> Self {
        for p in &mut self.pieces {
            p.scale *= c;
        }
        self
    }

    pub fn plus(mut self, other: Evaluable<T>) -> Self {
        self.pieces.extend(other.pieces);
        self
    }

    /// Interior breakpoints, sorted.
    pub fn kinks(&self) -> Vec<T> {
        let mut k: Vec<T> = self
            .pieces
            .iter()
            .flat_map(|p| [p.lo, p.hi])
            .filter(|&x| x > -T::one() && x < T::one())
            .collect();
        k.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoint"));
        k.dedup_by(|a, b| (*a - *b).abs() <= T::of(1e-14));
        k
    }

    /// Quadrature points `(x_i, W_i)` with
    /// `Σ W_i g(x_i) ≈ ∫ self(x) (1+x)^a (1-x)^b g(x) dx` for smooth `g`.
    ///
    /// Every piece gets its own Gauss–Jacobi rule of `m` points whose weight
    /// absorbs the piece's endpoint exponents together with `a` and `b`.
    pub fn weighted_points(&self, a: T, b: T, m: usize) -> Result<Vec<(T, T)>> {
        let one = T::one();
        let two = T::of(2.0);
        let mut out = Vec::with_capacity(self.pieces.len() * m);
        for p in &self.pieces {
            let at_left = p.lo <= -one;
            let at_right = p.hi >= one;
            let eta = p.lo_exp + if at_left { a } else { T::zero() };
            let sigma = p.hi_exp + if at_right { b } else { T::zero() };
            if eta <= -one || sigma <= -one {
                return Err(Error::Singularity(format!(
                    "integrand exponents ({eta}, {sigma}) on [{}, {}]",
                    p.lo, p.hi
                )));
            }
            let rule = gauss_jacobi_rule(sigma, eta, m)?;
            let half = (p.hi - p.lo) / two;
            let jac = half.powf(one + sigma + eta);
            for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
                let x = p.lo + half * (one + t);
                let mut v = w * jac * p.scale * (p.smooth)(x);
                if !at_left && a != T::zero() {
                    v *= (one + x).powf(a);
                }
                if !at_right && b != T::zero() {
                    v *= (one - x).powf(b);
                }
                out.push((x, v));
            }
        }
        Ok(out)
    }
}

/// Gauss hypergeometric series `₂F₁(a, b; c; z)` for `0 ≤ z ≤ 1`.
///
/// Terminates exactly when `a` or `b` is a nonpositive integer. Otherwise the
/// series is summed until the terms stall below rounding level, which requires
/// `c - a - b > 0` at `z = 1`.
pub fn hyp2f1<T: Real>(a: T, b: T, c: T, z: T) -> T {
    const MAX_TERMS: usize = 20_000;
    let mut sum = T::one();
    let mut term = T::one();
    let mut small = 0;
    for k in 0..MAX_TERMS {
        let kk = T::of_usize(k);
        term = term * (a + kk) * (b + kk) / ((c + kk) * (kk + T::one())) * z;
        if term == T::zero() {
            break;
        }
        sum += term;
        if term.abs() <= T::eps() * T::of(0.25) * sum.abs() {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    sum
}

/// Coefficients `(α, p̄, q̄, d̄)` of `-(p̄ D^α u + q̄ D^{α*} u) + d̄ u' = h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionSpec<T> {
    pub alpha: T,
    pub p: T,
    pub q: T,
    pub d: T,
}

/// One-sided fractional derivative of `(1+x)^a (1-x)^b` anchored on `side`.
fn one_sided<T: Real>(a: T, b: T, alpha: T, side: Side) -> Result<Evaluable<T>> {
    if let Ok(ps) = mixed_power_to_side(T::one(), a, b, side) {
        return Ok(Evaluable::from_power_sum(&rl_derivative_power(&ps, alpha)?));
    }
    // Non-integer opposite exponent: the derivative is a non-terminating
    // hypergeometric series in the side's own variable.
    let (own, other) = match side {
        Side::Left => (a, b),
        Side::Right => (b, a),
    };
    let one = T::one();
    let two = T::of(2.0);
    let exp = own - alpha;
    if exp <= -one {
        return Err(Error::Singularity(format!(
            "derivative of order {alpha} of exponent {own}"
        )));
    }
    let pref = two.powf(other) * gamma_ratio(own + one, own + one - alpha);
    let smooth = move |x: T| pref * hyp2f1(-other, own + one, own + one - alpha, side.distance(x) / two);
    Ok(Evaluable::from_piece(match side {
        Side::Left => Piece::new(-one, one, exp, T::zero(), smooth),
        Side::Right => Piece::new(-one, one, T::zero(), exp, smooth),
    }))
}

/// `u'` for `u = (1+x)^a (1-x)^b`.
fn classical_derivative<T: Real>(a: T, b: T) -> Evaluable<T> {
    let one = T::one();
    let zero = T::zero();
    let mut pieces = Vec::new();
    if a != zero {
        pieces.push(Piece::constant(-one, one, a - one, b, a));
    }
    if b != zero {
        pieces.push(Piece::constant(-one, one, a, b - one, -b));
    }
    Evaluable::from_pieces(pieces)
}

/// Right-hand side `h = -(p̄ D^α u + q̄ D^{α*} u) + d̄ u'` for `u = (1+x)^a (1-x)^b`.
///
/// When the exponent opposite an operator's anchor is a nonnegative integer the
/// result is an exact power sum; otherwise the hypergeometric series is used.
pub fn manufactured_rhs<T: Real>(a: T, b: T, spec: DiffusionSpec<T>) -> Result<Evaluable<T>> {
    if a < T::zero() || b < T::zero() {
        return Err(Error::UnsupportedShape(format!(
            "exponents ({a}, {b}) must be nonnegative"
        )));
    }
    let mut h = Evaluable::zero();
    if spec.p != T::zero() {
        h = h.plus(one_sided(a, b, spec.alpha, Side::Left)?.scaled(-spec.p));
    }
    if spec.q != T::zero() {
        h = h.plus(one_sided(a, b, spec.alpha, Side::Right)?.scaled(-spec.q));
    }
    if spec.d != T::zero() {
        h = h.plus(classical_derivative(a, b).scaled(spec.d));
    }
    Ok(h)
}
