//! Double-double arithmetic: unevaluated sums `hi + lo` of two f64,
//! carrying roughly 32 significant decimal digits.
//!
//! Used where f64 cancellation is the binding constraint: high-degree
//! Krawtchouk evaluation and the badly conditioned scheme linear programs.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd {
        hi: s,
        lo: (a - (s - bb)) + (b - bb),
    }
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd {
        hi: s,
        lo: b - (s - a),
    }
}

#[inline]
fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    Dd {
        hi: p,
        lo: a.mul_add(b, -p),
    }
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    /// Product of two plain f64 values, exactly.
    #[inline]
    pub fn prod(a: f64, b: f64) -> Dd {
        two_prod(a, b)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        let s = two_sum(self.hi, rhs.hi);
        let t = two_sum(self.lo, rhs.lo);
        let s2 = quick_two_sum(s.hi, s.lo + t.hi);
        quick_two_sum(s2.hi, s2.lo + t.lo)
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        let p = two_prod(self.hi, rhs.hi);
        quick_two_sum(p.hi, p.lo + self.hi * rhs.lo + self.lo * rhs.hi)
    }
}

impl Div for Dd {
    type Output = Dd;
    #[inline]
    fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * Dd::from(q1);
        let q2 = r.hi / rhs.hi;
        let r2 = r - rhs * Dd::from(q2);
        let q3 = r2.hi / rhs.hi;
        let s = quick_two_sum(q1, q2);
        quick_two_sum(s.hi, s.lo + q3)
    }
}

impl Div<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn div(self, rhs: f64) -> Dd {
        self / Dd::from(rhs)
    }
}

impl Mul<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: f64) -> Dd {
        self * Dd::from(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_keeps_extra_bits() {
        // (1 + 2^-60) round-trips through add/sub
        let tiny = (2.0_f64).powi(-60);
        let x = Dd::from(1.0) + Dd::from(tiny);
        assert_eq!(x.hi, 1.0);
        assert_eq!(x.lo, tiny);
        let back = x - Dd::from(1.0);
        assert_eq!(back.value(), tiny);
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = Dd::from(std::f64::consts::PI);
        let b = Dd::from(std::f64::consts::E);
        let q = a / b;
        let r = q * b - a;
        assert!(r.value().abs() < 1e-30);
    }

    #[test]
    fn exact_products() {
        let p = Dd::prod(1.0 + 2.0_f64.powi(-30), 1.0 + 2.0_f64.powi(-30));
        let expect_lo = 2.0_f64.powi(-60);
        assert!((p.value() - (1.0 + 2.0_f64.powi(-29) + expect_lo)).abs() < 1e-32);
    }
}
