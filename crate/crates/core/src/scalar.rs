//! Scalar abstraction and the Gamma-function family.
//!
//! Everything in the crate is generic over [`Real`], implemented for `f32`
//! and `f64`. Tolerances quoted in the tests assume `f64`.

use std::fmt::{Debug, Display, LowerExp};

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Floating point scalar usable by every solver in the crate.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Default
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("integer representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Machine epsilon of the underlying type.
    fn eps() -> Self;

    fn infinity() -> Self;
}

impl Real for f32 {
    fn eps() -> Self {
        f32::EPSILON
    }
    fn infinity() -> Self {
        f32::INFINITY
    }
}

impl Real for f64 {
    fn eps() -> Self {
        f64::EPSILON
    }
    fn infinity() -> Self {
        f64::INFINITY
    }
}

// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Lanczos series `A(z)` such that `Γ(z+1) = √(2π) t^{z+½} e^{-t} A(z)`, `t = z + g + ½`.
fn lanczos_series<T: Real>(z: T) -> T {
    let mut acc = T::of(LANCZOS[0]);
    for (i, &p) in LANCZOS.iter().enumerate().skip(1) {
        acc += T::of(p) / (z + T::of_usize(i));
    }
    acc
}

/// True when `x` is a pole of Γ (zero or a negative integer).
pub fn is_gamma_pole<T: Real>(x: T) -> bool {
    x <= T::zero() && x == x.round()
}

/// `ln|Γ(x)|` together with the sign of `Γ(x)`.
///
/// Returns `(+∞, 1)` at the poles.
pub fn ln_gamma_signed<T: Real>(x: T) -> (T, T) {
    if is_gamma_pole(x) {
        return (T::infinity(), T::one());
    }
    let half = T::of(0.5);
    if x < half {
        // Γ(x)Γ(1-x) = π / sin(πx)
        let s = (T::pi() * x).sin();
        let (lg, _) = ln_gamma_signed(T::one() - x);
        let sign = if s < T::zero() { -T::one() } else { T::one() };
        return ((T::pi() / s.abs()).ln() - lg, sign);
    }
    let z = x - T::one();
    let t = z + T::of(LANCZOS_G) + half;
    let ln_sqrt_2pi = T::of(0.918_938_533_204_672_8);
    (
        ln_sqrt_2pi + (z + half) * t.ln() - t + lanczos_series(z).ln(),
        T::one(),
    )
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma<T: Real>(x: T) -> T {
    ln_gamma_signed(x).0
}

/// Γ(x) on the whole real line; infinite at the poles.
pub fn gamma<T: Real>(x: T) -> T {
    let (lg, sign) = ln_gamma_signed(x);
    sign * lg.exp()
}

/// `ln|Γ(a)/Γ(b)|` and its sign, for `a, b ≥ ½`.
///
/// The large Stirling-like pieces are differenced through `ln_1p` so the ratio
/// keeps its relative accuracy when `a` and `b` are both large.
fn ln_gamma_ratio_positive<T: Real>(a: T, b: T) -> T {
    let half = T::of(0.5);
    let g = T::of(LANCZOS_G);
    let za = a - T::one();
    let zb = b - T::one();
    let tb = zb + g + half;
    let d = a - b;
    (za + half) * (d / tb).ln_1p() + d * tb.ln() - d
        + (lanczos_series(za) / lanczos_series(zb)).ln()
}

/// `Γ(a) / Γ(b)` evaluated without forming either factor.
///
/// A pole in the denominator gives `0`; a pole in the numerator alone gives an
/// infinite result.
pub fn gamma_ratio<T: Real>(a: T, b: T) -> T {
    let a_pole = is_gamma_pole(a);
    let b_pole = is_gamma_pole(b);
    match (a_pole, b_pole) {
        (false, true) => return T::zero(),
        (true, false) => return T::infinity(),
        (true, true) => {
            // Γ(-m)/Γ(-k) as a limit along a + ε, b + ε.
            let m = (-a).as_f64() as i64;
            let k = (-b).as_f64() as i64;
            let mut r = T::one();
            // Γ(-m+ε)/Γ(-k+ε) → (-1)^{m-k} k!/m!
            let (lo, hi) = if m > k { (k, m) } else { (m, k) };
            for j in (lo + 1)..=hi {
                r *= T::from_i64(j).expect("small integer");
            }
            let sign = if (m - k) % 2 == 0 { T::one() } else { -T::one() };
            return if m > k { sign / r } else { sign * r };
        }
        (false, false) => {}
    }
    let half = T::of(0.5);
    if a >= half && b >= half {
        return ln_gamma_ratio_positive(a, b).exp();
    }
    let (la, sa) = ln_gamma_signed(a);
    let (lb, sb) = ln_gamma_signed(b);
    sa * sb * (la - lb).exp()
}

/// Euler Beta function `B(a, b)` for positive arguments.
pub fn beta<T: Real>(a: T, b: T) -> T {
    (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()
}

/// Integer check with an absolute tolerance.
pub(crate) fn near_integer<T: Real>(x: T, tol: T) -> Option<i64> {
    let r = x.round();
    if (x - r).abs() <= tol {
        r.to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_at_known_points() {
        assert_relative_eq!(gamma(1.0_f64), 1.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(5.0_f64), 24.0, max_relative = 1e-14);
        assert_relative_eq!(
            gamma(1.5_f64),
            std::f64::consts::PI.sqrt() / 2.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            gamma(-0.5_f64),
            -2.0 * std::f64::consts::PI.sqrt(),
            max_relative = 1e-13
        );
        assert!(gamma(-2.0_f64).is_infinite());
    }

    #[test]
    fn ratio_matches_factorials_for_large_arguments() {
        // Γ(n+1)/Γ(n) = n
        for n in [10.0, 200.0, 2000.0_f64] {
            assert_relative_eq!(gamma_ratio(n + 1.0, n), n, max_relative = 1e-13);
        }
        // Γ(2001.25)/Γ(2000.25) = 2000.25 with both arguments far outside f64 range for Γ
        assert_relative_eq!(
            gamma_ratio(2001.25_f64, 2000.25),
            2000.25,
            max_relative = 1e-13
        );
    }

    #[test]
    fn ratio_handles_negative_arguments_and_poles() {
        // Γ(0.5)/Γ(-0.5) = -1/2
        assert_relative_eq!(gamma_ratio(0.5_f64, -0.5), -0.5, max_relative = 1e-13);
        assert_eq!(gamma_ratio(2.5_f64, 0.0), 0.0);
        assert_eq!(gamma_ratio(2.5_f64, -3.0), 0.0);
        assert!(gamma_ratio(-1.0_f64, 2.0).is_infinite());
        // Γ(-2+ε)/Γ(-1+ε) → 1/(-2)
        assert_relative_eq!(gamma_ratio(-2.0_f64, -1.0), -0.5, max_relative = 1e-15);
    }

    #[test]
    fn beta_of_halves() {
        assert_relative_eq!(
            beta(1.5_f64, 1.5),
            std::f64::consts::PI / 8.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn single_precision_is_usable() {
        assert!((gamma(4.0_f32) - 6.0).abs() < 1e-4);
    }
}
