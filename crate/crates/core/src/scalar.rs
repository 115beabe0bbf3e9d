//! Scalar abstraction: everything numeric in this crate is generic over a
//! floating-point type implementing [`Real`]. Concrete aliases for `f64`
//! live at the crate root.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar usable throughout the crate.
///
/// Implemented for `f32` and `f64` via the blanket impl below.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + NumAssign
        + Debug
        + Display
        + LowerExp
        + Send
        + Sync
        + 'static
{
}

/// Complex number over the crate scalar.
pub type C<T> = Complex<T>;

/// Convert an `f64` literal into the scalar type.
#[inline]
pub fn real<T: Real>(x: f64) -> T {
    T::from(x).expect("f64 literal must convert into the scalar type")
}

/// Convert an integer index into the scalar type (exact for n < 2^53).
#[inline]
pub fn from_index<T: Real>(n: u64) -> T {
    T::from_u64(n).expect("index must convert into the scalar type")
}

/// Natural log of an integer index.
#[inline]
pub fn ln_index<T: Real>(n: u64) -> T {
    from_index::<T>(n).ln()
}

/// n^{-s} for a positive integer index, computed as exp(-s ln n).
#[inline]
pub fn index_pow_neg<T: Real>(n: u64, s: C<T>) -> C<T> {
    if n == 1 {
        return C::new(T::one(), T::zero());
    }
    (-s * ln_index::<T>(n)).exp()
}

/// e^{i theta} on the unit circle.
#[inline]
pub fn cis<T: Real>(theta: T) -> C<T> {
    C::new(theta.cos(), theta.sin())
}

/// Gamma function via the Lanczos approximation (g = 7, 9 terms), with the
/// reflection formula for arguments below 1/2. Relative accuracy ~1e-14 in
/// f64 over the range used here (positive arguments up to a few tens).
pub fn gamma<T: Real>(x: T) -> T {
    const COEFFS: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    let half = real::<T>(0.5);
    if x < half {
        // Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return T::PI() / ((T::PI() * x).sin() * gamma(T::one() - x));
    }
    let x = x - T::one();
    let mut acc = real::<T>(COEFFS[0]);
    for (i, &c) in COEFFS.iter().enumerate().skip(1) {
        acc = acc + real::<T>(c) / (x + from_index::<T>(i as u64));
    }
    let g = real::<T>(7.5);
    let t = x + g;
    let two_pi = T::PI() + T::PI();
    two_pi.sqrt() * t.powf(x + half) * (-t).exp() * acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_matches_known_values() {
        assert!((gamma(1.0f64) - 1.0).abs() < 1e-13);
        assert!((gamma(2.0f64) - 1.0).abs() < 1e-13);
        assert!((gamma(3.0f64) - 2.0).abs() < 1e-13);
        assert!((gamma(5.0f64) - 24.0).abs() < 1e-12);
        assert!((gamma(0.5f64) - std::f64::consts::PI.sqrt()).abs() < 1e-13);
        // reflection branch
        let g14 = gamma(0.25f64);
        let g34 = gamma(0.75f64);
        let expect = std::f64::consts::PI / (std::f64::consts::FRAC_PI_4).sin();
        assert!((g14 * g34 - expect).abs() < 1e-11);
    }

    #[test]
    fn index_pow_matches_direct() {
        let s = C::new(2.0f64, -1.0);
        let v = index_pow_neg(6, s);
        let direct = C::new(6.0f64, 0.0).powc(-s);
        assert!((v - direct).norm() < 1e-14);
    }
}
