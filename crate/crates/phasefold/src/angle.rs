//! Z-rotation angles: exact rational multiples of π with a radian fallback.
//!
//! Keeping angles exact whenever possible makes the elimination test
//! (θ ≡ 0 mod 2π) decidable, so a chain of merges that sums to a full turn
//! drops out of the circuit instead of leaving an `rz(6.28…)` behind.

use std::f64::consts::PI;
use std::ops::{Add, AddAssign, Neg};

/// Zero test tolerance for [`Angle::Approx`] values, in radians.
pub const ANGLE_TOLERANCE: f64 = 1e-10;

/// Largest denominator the π-rational snap will consider when converting a
/// radian value to an [`Angle::Exact`].
pub const MAX_SNAP_DENOMINATOR: i64 = 1 << 16;

/// Tolerance on θ/π for the rational snap.
const SNAP_TOLERANCE: f64 = 1e-12;

const TAU: f64 = 2.0 * PI;

/// A rotation angle, always normalized into [0, 2π).
///
/// `Exact { num, den }` denotes θ = (num/den)·π in lowest terms with
/// `0 <= num/den < 2`, so `Exact { num: 0, den: 1 }` is the unique
/// representation of zero. `Approx` carries a radian value in [0, 2π).
///
/// Build values through [`Angle::exact`], [`Angle::approx`] or
/// [`Angle::from_radians`]; those normalize, and the arithmetic here assumes
/// normalized inputs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Angle {
    Exact { num: i64, den: i64 },
    Approx(f64),
}

/// Coarse classification of a rotation by fault-tolerance cost.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TClass {
    /// Odd multiple of π/4 (T-like; needs magic-state distillation).
    TGate,
    /// Multiple of π/2, including zero (implementable as S/Z Cliffords).
    Clifford,
    /// Anything else.
    Other,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Angle {
    pub const ZERO: Angle = Angle::Exact { num: 0, den: 1 };

    /// θ = (num/den)·π, reduced and normalized modulo 2π.
    ///
    /// Panics if `den <= 0`.
    pub fn exact(num: i64, den: i64) -> Angle {
        assert!(den > 0, "angle denominator must be positive, got {den}");
        Self::exact_i128(num as i128, den as i128)
    }

    /// Raw radian angle, normalized into [0, 2π). No rational snapping.
    pub fn approx(radians: f64) -> Angle {
        assert!(radians.is_finite(), "angle must be finite, got {radians}");
        Angle::Approx(radians.rem_euclid(TAU))
    }

    /// Convert a radian value, snapping to `Exact` when θ/π is within
    /// [`SNAP_TOLERANCE`] of a rational with denominator at most
    /// [`MAX_SNAP_DENOMINATOR`]. Falls back to [`Angle::approx`].
    pub fn from_radians(radians: f64) -> Angle {
        assert!(radians.is_finite(), "angle must be finite, got {radians}");
        let ratio = (radians / PI).rem_euclid(2.0);
        if let Some((num, den)) = snap_to_rational(ratio) {
            Angle::exact(num, den)
        } else {
            Angle::approx(radians)
        }
    }

    fn exact_i128(num: i128, den: i128) -> Angle {
        debug_assert!(den > 0);
        let g = gcd(num, den).max(1);
        let (mut num, den) = (num / g, den / g);
        num = num.rem_euclid(2 * den);
        // A second reduction: the fold into [0, 2) can introduce a common
        // factor, e.g. 4/2 -> 0/2.
        let g = gcd(num, den).max(1);
        let (num, den) = (num / g, den / g);
        if let (Ok(num), Ok(den)) = (i64::try_from(num), i64::try_from(den)) {
            Angle::Exact { num, den }
        } else {
            // Denominator blew past i64 (takes dozens of coprime input
            // denominators); degrade to radians rather than overflow.
            Angle::approx((num as f64) / (den as f64) * PI)
        }
    }

    /// Angle in radians, in [0, 2π).
    pub fn radians(self) -> f64 {
        match self {
            Angle::Exact { num, den } => num as f64 * PI / den as f64,
            Angle::Approx(r) => r,
        }
    }

    /// True iff the angle is ≡ 0 (mod 2π): exactly for `Exact`, within
    /// [`ANGLE_TOLERANCE`] for `Approx`.
    pub fn is_zero(self) -> bool {
        match self {
            Angle::Exact { num, .. } => num == 0,
            Angle::Approx(r) => r < ANGLE_TOLERANCE || TAU - r < ANGLE_TOLERANCE,
        }
    }

    /// Classify the rotation (see [`TClass`]).
    pub fn t_class(self) -> TClass {
        match self {
            // Lowest terms: den == 4 forces num odd.
            Angle::Exact { den: 4, .. } => TClass::TGate,
            Angle::Exact { den: 1, .. } | Angle::Exact { den: 2, .. } => TClass::Clifford,
            _ => TClass::Other,
        }
    }

    /// The additive inverse modulo 2π.
    pub fn negate(self) -> Angle {
        match self {
            Angle::Exact { num, den } => Self::exact_i128(-(num as i128), den as i128),
            Angle::Approx(r) => Angle::approx(-r),
        }
    }
}

impl Add for Angle {
    type Output = Angle;

    fn add(self, rhs: Angle) -> Angle {
        match (self, rhs) {
            (Angle::Exact { num: n1, den: d1 }, Angle::Exact { num: n2, den: d2 }) => {
                let (n1, d1, n2, d2) = (n1 as i128, d1 as i128, n2 as i128, d2 as i128);
                Self::exact_i128(n1 * d2 + n2 * d1, d1 * d2)
            }
            // Mixed arithmetic demotes to radians.
            _ => Angle::approx(self.radians() + rhs.radians()),
        }
    }
}

impl AddAssign for Angle {
    fn add_assign(&mut self, rhs: Angle) {
        *self = *self + rhs;
    }
}

impl Neg for Angle {
    type Output = Angle;

    fn neg(self) -> Angle {
        self.negate()
    }
}

/// Best rational approximation of `x` ∈ [0, 2) by continued fractions,
/// accepted only if it lands within [`SNAP_TOLERANCE`].
fn snap_to_rational(x: f64) -> Option<(i64, i64)> {
    let (mut p_prev, mut q_prev) = (1i64, 0i64);
    let (mut p, mut q) = (x.floor() as i64, 1i64);
    let mut frac = x - x.floor();
    loop {
        if q <= MAX_SNAP_DENOMINATOR && (p as f64 / q as f64 - x).abs() <= SNAP_TOLERANCE {
            return Some((p, q));
        }
        if q > MAX_SNAP_DENOMINATOR || frac <= f64::EPSILON {
            return None;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        if a > MAX_SNAP_DENOMINATOR as f64 {
            return None;
        }
        frac = inv - a;
        let a = a as i64;
        let p_next = a.checked_mul(p)?.checked_add(p_prev)?;
        let q_next = a.checked_mul(q)?.checked_add(q_prev)?;
        (p_prev, q_prev) = (p, q);
        (p, q) = (p_next, q_next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn add_t_plus_t_is_s() {
        assert_eq!(
            Angle::exact(1, 4) + Angle::exact(1, 4),
            Angle::Exact { num: 1, den: 2 }
        );
    }

    #[test]
    fn add_t_plus_tdg_is_zero() {
        assert_eq!(Angle::exact(1, 4) + Angle::exact(7, 4), Angle::ZERO);
    }

    #[test]
    fn add_wraps_modulo_two_pi() {
        // 3/2 + 3/4 = 9/4, and 9/4 mod 2 = 1/4.
        assert_eq!(
            Angle::exact(3, 2) + Angle::exact(3, 4),
            Angle::Exact { num: 1, den: 4 }
        );
    }

    #[test]
    fn zero_tests() {
        assert!(Angle::ZERO.is_zero());
        assert!(!Angle::exact(1, 4).is_zero());
        assert!(Angle::approx(6.283185307179586).is_zero());
        assert!(Angle::approx(1e-12).is_zero());
        assert!(!Angle::approx(1e-3).is_zero());
    }

    #[test]
    fn t_classification() {
        assert_eq!(Angle::exact(1, 4).t_class(), TClass::TGate);
        assert_eq!(Angle::exact(7, 4).t_class(), TClass::TGate);
        assert_eq!(Angle::exact(1, 2).t_class(), TClass::Clifford);
        assert_eq!(Angle::exact(1, 1).t_class(), TClass::Clifford);
        assert_eq!(Angle::ZERO.t_class(), TClass::Clifford);
        assert_eq!(Angle::exact(1, 3).t_class(), TClass::Other);
        assert_eq!(Angle::approx(0.5).t_class(), TClass::Other);
    }

    #[test]
    fn normalization_reduces_and_wraps() {
        assert_eq!(Angle::exact(2, 4), Angle::Exact { num: 1, den: 2 });
        assert_eq!(Angle::exact(9, 4), Angle::Exact { num: 1, den: 4 });
        assert_eq!(Angle::exact(-1, 4), Angle::Exact { num: 7, den: 4 });
        assert_eq!(Angle::exact(4, 2), Angle::ZERO);
    }

    #[test]
    fn snap_recovers_simple_fractions() {
        assert_eq!(
            Angle::from_radians(PI / 2.0),
            Angle::Exact { num: 1, den: 2 }
        );
        assert_eq!(
            Angle::from_radians(3.0 * PI / 4.0),
            Angle::Exact { num: 3, den: 4 }
        );
        assert_eq!(
            Angle::from_radians(-PI / 4.0),
            Angle::Exact { num: 7, den: 4 }
        );
        assert_eq!(
            Angle::from_radians(PI / 1024.0),
            Angle::Exact { num: 1, den: 1024 }
        );
        // 1.0 rad is not a small rational multiple of pi.
        assert_eq!(Angle::from_radians(1.0), Angle::Approx(1.0));
    }

    #[test]
    fn mixed_addition_demotes() {
        let sum = Angle::exact(1, 4) + Angle::approx(0.5);
        assert!(matches!(sum, Angle::Approx(_)));
        assert!((sum.radians() - (PI / 4.0 + 0.5)).abs() < 1e-12);
    }

    /// Exhaustive float-route oracle over the dense small-denominator grid:
    /// compare the rational sum against complex exponentials, which are
    /// insensitive to the 2π wrap.
    #[test]
    fn exact_addition_matches_float_route() {
        let grid: Vec<Angle> = [1, 2, 4, 8]
            .into_iter()
            .flat_map(|den| (0..2 * den).map(move |num| Angle::exact(num, den)))
            .collect();
        for &a in &grid {
            for &b in &grid {
                let sum = a + b;
                assert!(matches!(sum, Angle::Exact { .. }));
                let expect = (a.radians() + b.radians()).rem_euclid(TAU);
                let diff = ((sum.radians() - expect).sin()).abs();
                assert!(diff < 1e-9, "{a:?} + {b:?} = {sum:?}, expected {expect}");
            }
        }
    }

    fn exact_angle() -> impl Strategy<Value = Angle> {
        (prop_oneof![Just(1i64), Just(2), Just(4), Just(8)], 0..16i64)
            .prop_map(|(den, num)| Angle::exact(num % (2 * den), den))
    }

    proptest! {
        #[test]
        fn addition_commutes(a in exact_angle(), b in exact_angle()) {
            prop_assert_eq!(a + b, b + a);
        }

        #[test]
        fn addition_associates(a in exact_angle(), b in exact_angle(), c in exact_angle()) {
            prop_assert_eq!((a + b) + c, a + (b + c));
        }

        #[test]
        fn negation_cancels(a in exact_angle()) {
            prop_assert!((a + a.negate()).is_zero());
        }
    }
}
