//! Gamma, Barnes G and the g̃ function used by the asymptotic constants.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::quadrature::CompositeRule;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// G(1/2), recorded from a high-order evaluation of the product formula.
pub const BARNES_G_HALF: f64 = 0.603_244_281_209_446_2;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Number of explicit factors kept in the infinite products.
const PRODUCT_TERMS: usize = 1024;

/// B_{2n} / (2n (2n-1)) for the Stirling series.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Natural log of Γ(z). The imaginary part is some branch of arg Γ(z).
pub fn ln_gamma(z: C64) -> C64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return C64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(1.0 - z);
    }
    let mut z = z;
    let mut shift = C64::new(0.0, 0.0);
    while z.re < 15.0 {
        shift += z.ln();
        z += 1.0;
    }
    let zi = z.inv();
    let zi2 = zi * zi;
    let mut series = C64::new(0.0, 0.0);
    let mut p = zi;
    for c in STIRLING {
        series += p * c;
        p *= zi2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * LN_2PI + series - shift
}

pub fn gamma(z: C64) -> C64 {
    ln_gamma(z).exp()
}

/// Σ_{n > k} n^{-s} by Euler-Maclaurin.
fn zeta_tail(s: u32, k: f64) -> f64 {
    let s = s as f64;
    let mut poch = s;
    let mut total = k.powf(1.0 - s) / (s - 1.0) - 0.5 * k.powf(-s);
    let coef = [1.0 / 12.0, -1.0 / 720.0, 1.0 / 30_240.0, -1.0 / 1_209_600.0];
    for (j, c) in coef.iter().enumerate() {
        let order = 2 * j + 1;
        total += c * poch * k.powf(-s - order as f64);
        poch *= (s + order as f64) * (s + order as f64 + 1.0);
    }
    total
}

/// ln(1+t) - t + t²/2, accurate for small t.
fn log1p_cubic(t: C64) -> C64 {
    if t.norm() < 0.25 {
        let mut sum = C64::new(0.0, 0.0);
        let mut p = t * t * t;
        for j in 3..80 {
            let term = p / j as f64;
            sum += if j % 2 == 1 { term } else { -term };
            if term.norm() < 1e-18 * sum.norm() {
                break;
            }
            p *= t;
        }
        sum
    } else {
        (1.0 + t).ln() - t + 0.5 * t * t
    }
}

/// ln(1+u) - u, accurate for small u.
fn log1p_quadratic(u: C64) -> C64 {
    if u.norm() < 0.25 {
        let mut sum = C64::new(0.0, 0.0);
        let mut p = u * u;
        for j in 2..80 {
            let term = p / j as f64;
            sum += if j % 2 == 1 { term } else { -term };
            if term.norm() < 1e-18 * sum.norm() {
                break;
            }
            p *= u;
        }
        sum
    } else {
        (1.0 + u).ln() - u
    }
}

/// ln G(1+w) from the product formula, for |Re w| <= 1/2.
fn ln_g_product(w: C64) -> C64 {
    let mut s = w * 0.5 * LN_2PI - w * (w + 1.0) * 0.5 - w * w * (0.5 * EULER_GAMMA);
    for k in 1..=PRODUCT_TERMS {
        let kf = k as f64;
        s += log1p_cubic(w / kf) * kf;
    }
    // remaining factors: Σ_{j>=3} (-1)^{j+1} w^j / j · Σ_{k>K} k^{1-j}
    let kk = PRODUCT_TERMS as f64;
    let mut p = w * w * w;
    let mut tail = C64::new(0.0, 0.0);
    for j in 3..200u32 {
        let term = p * (zeta_tail(j - 1, kk) / j as f64);
        tail += if j % 2 == 1 { term } else { -term };
        if term.norm() < 1e-18 * (1.0 + tail.norm()) {
            break;
        }
        p *= w;
    }
    s + tail
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarnesGValue {
    pub z: C64,
    pub log_g: C64,
}

impl BarnesGValue {
    pub fn value(&self) -> C64 {
        self.log_g.exp()
    }
}

/// Barnes G(z): shift into the strip around Re z = 1 with
/// G(z+1) = Γ(z) G(z), then sum the product formula.
pub fn barnes_g(z: C64) -> Result<BarnesGValue> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite argument {z}")));
    }
    let nearest = z.re.round();
    if nearest <= 0.0 && (z - nearest).norm() < 1e-12 {
        return Err(Error::PoleArgument { re: z.re, im: z.im });
    }
    let w = z - 1.0;
    let n = w.re.round() as i64;
    let mut log_g = ln_g_product(w - n as f64);
    if n > 0 {
        for j in 0..n {
            log_g += ln_gamma(w - j as f64);
        }
    } else {
        for j in 1..=(-n) {
            log_g -= ln_gamma(w + j as f64);
        }
    }
    Ok(BarnesGValue { z, log_g })
}

/// G(1+z) G(1-z).
pub fn barnes_pair(z: C64) -> Result<C64> {
    let a = barnes_g(1.0 + z)?;
    let b = barnes_g(1.0 - z)?;
    Ok((a.log_g + b.log_g).exp())
}

/// g̃(λ) = e^{(1+γ)λ²} Π_k (1+λ²/k²)^k e^{-λ²/k}, which equals
/// G(1+z)G(1-z) at λ = iz.
pub fn g_tilde(lambda: C64) -> C64 {
    let l2 = lambda * lambda;
    let mut s = l2 * (1.0 + EULER_GAMMA);
    for k in 1..=PRODUCT_TERMS {
        let kf = k as f64;
        let u = l2 / (kf * kf);
        if (1.0 + u).norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        s += log1p_quadratic(u) * kf;
    }
    let kk = PRODUCT_TERMS as f64;
    let mut p = l2 * l2;
    let mut tail = C64::new(0.0, 0.0);
    for j in 2..200u32 {
        let term = p * (zeta_tail(2 * j - 1, kk) / j as f64);
        tail += if j % 2 == 1 { term } else { -term };
        if term.norm() < 1e-18 * (1.0 + tail.norm()) {
            break;
        }
        p *= l2;
    }
    (s + tail).exp()
}

/// ln[G(1+λ)G(1-λ)] from its integral representation
/// ∫_0^∞ dt/t [λ² e^{-t} - sinh²(λt/2)/sinh²(t/2)], valid for |λ| < 1.
pub fn ln_g_integral(lambda: f64) -> f64 {
    let l = lambda.abs();
    if l >= 1.0 {
        return f64::NAN;
    }
    if l == 0.0 {
        return 0.0;
    }
    let l2 = l * l;
    // below delta the integrand is replaced by its Taylor polynomial
    let delta = 1e-3;
    let c1 = 0.5 - (l2 - 1.0) / 12.0;
    let head = l2 * (-delta + c1 * delta * delta / 2.0 - delta.powi(3) / 18.0);

    let upper = 37.0 / (1.0 - l) + 10.0;
    let panels = ((upper - delta) / 0.5).ceil() as usize;
    let rule = CompositeRule::new(16);
    let body = rule.integrate(delta, upper, panels, |t| {
        // sinh(lt/2)/sinh(t/2) without overflow
        let ratio = (-(-l * t).exp_m1()) / (-(-t).exp_m1()) * ((l - 1.0) * t / 2.0).exp();
        (l2 * (-t).exp() - ratio * ratio) / t
    });
    head + body
}
