//! Double-double real and complex arithmetic for the extended LU path.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64 as C64;

/// Unevaluated sum hi + lo with |lo| ≤ ulp(hi)/2.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: e }
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

#[inline]
fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    Dd { hi: p, lo: a.mul_add(b, -p) }
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn recip(self) -> Self {
        // one Newton step on the f64 reciprocal
        let q = 1.0 / self.hi;
        let r = Dd::new(1.0) - self * Dd::new(q);
        Dd::new(q) + Dd::new(q * r.hi)
    }

    /// ln(self) for self > 0.
    pub fn ln(self) -> f64 {
        self.hi.ln() + self.lo / self.hi
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.hi, o.hi);
        let t = two_sum(self.lo, o.lo);
        let s = quick_two_sum(s.hi, s.lo + t.hi);
        quick_two_sum(s.hi, s.lo + t.lo)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = two_prod(self.hi, o.hi);
        let lo = self.hi.mul_add(o.lo, p.lo);
        let lo = self.lo.mul_add(o.hi, lo);
        quick_two_sum(p.hi, lo)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexDd {
    pub re: Dd,
    pub im: Dd,
}

impl From<C64> for ComplexDd {
    fn from(z: C64) -> Self {
        Self { re: Dd::new(z.re), im: Dd::new(z.im) }
    }
}

impl ComplexDd {
    pub fn to_c64(self) -> C64 {
        C64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn norm_sqr(self) -> Dd {
        self.re * self.re + self.im * self.im
    }

    pub fn norm_f64(&self) -> f64 {
        self.re.hi.hypot(self.im.hi)
    }

    pub fn ln_norm(self) -> f64 {
        // scale first so the square cannot underflow
        let s = self.norm_f64();
        if s == 0.0 {
            return f64::NEG_INFINITY;
        }
        let k = s.log2().floor();
        let scale = Dd::new((-k).exp2());
        let z = ComplexDd { re: self.re * scale, im: self.im * scale };
        0.5 * z.norm_sqr().ln() + k * std::f64::consts::LN_2
    }

    pub fn inv(self) -> Self {
        let s = self.norm_f64();
        let k = s.log2().floor();
        let scale = Dd::new((-k).exp2());
        let z = ComplexDd { re: self.re * scale, im: self.im * scale };
        let r = z.norm_sqr().recip() * scale;
        ComplexDd { re: z.re * r, im: -(z.im * r) }
    }
}

impl Add for ComplexDd {
    type Output = ComplexDd;
    fn add(self, o: ComplexDd) -> ComplexDd {
        ComplexDd { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for ComplexDd {
    type Output = ComplexDd;
    fn sub(self, o: ComplexDd) -> ComplexDd {
        ComplexDd { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for ComplexDd {
    type Output = ComplexDd;
    fn mul(self, o: ComplexDd) -> ComplexDd {
        ComplexDd { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn captures_rounding_error() {
        let a = Dd::new(1.0) + Dd::new(1e-20);
        assert_eq!(a.hi, 1.0);
        assert_eq!(a.lo, 1e-20);
        let b = a - Dd::new(1.0);
        assert_eq!(b.to_f64(), 1e-20);
    }

    #[test]
    fn third_times_three() {
        let third = Dd::new(3.0).recip();
        let one = third * Dd::new(3.0);
        assert!((one - Dd::new(1.0)).to_f64().abs() < 1e-31);
    }

    #[test]
    fn complex_inverse() {
        let z = ComplexDd::from(C64::new(3e-200, -4e-200));
        let w = z * z.inv();
        assert!((w.re - Dd::new(1.0)).to_f64().abs() < 1e-30);
        assert!(w.im.to_f64().abs() < 1e-30);
        assert!((z.ln_norm() - (5e-200f64).ln()).abs() < 1e-13);
    }
}
