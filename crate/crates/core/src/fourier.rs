//! Fourier data of symbols: Toeplitz coefficients c_k, log-coefficients
//! l_k and Wiener-Hopf factor values.
//!
//! Convention: c_k = ∫ dx/2π e^{ikx} f(x), so c_k multiplies z^{-k}.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use crate::symbol::{wrap_angle, Factor, FhSingularity, Orientation, Symbol, UNIT_TOL};

pub const DEFAULT_QUAD_POINTS: usize = 1 << 14;
pub const DEFAULT_LOG_TOL: f64 = 1e-12;
pub const MAX_LOG_ORDER: usize = 100_000;

/// Coefficients with magnitude below this fraction of the largest one in
/// the Nyquist band mark an under-resolved grid.
const NYQUIST_TOL: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzCoefficients {
    n_max: usize,
    c: Vec<C64>,
}

impl ToeplitzCoefficients {
    /// Builds from c_{-n}, ..., c_n.
    pub fn from_vec(c: Vec<C64>) -> Result<Self> {
        if c.len() % 2 == 0 {
            return Err(Error::InvalidInput("coefficient list must have odd length".into()));
        }
        Ok(Self { n_max: c.len() / 2, c })
    }

    pub fn from_fn<F: Fn(i64) -> C64>(n_max: usize, f: F) -> Self {
        let n = n_max as i64;
        Self { n_max, c: (-n..=n).map(f).collect() }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn get(&self, k: i64) -> C64 {
        let idx = k + self.n_max as i64;
        if idx < 0 || idx as usize >= self.c.len() {
            C64::new(0.0, 0.0)
        } else {
            self.c[idx as usize]
        }
    }

    pub fn in_range(&self, k: i64) -> bool {
        k.unsigned_abs() as usize <= self.n_max
    }

    /// c_k ↔ c_{-k}, the symbol of the transposed matrix.
    pub fn transpose(&self) -> Self {
        let mut c = self.c.clone();
        c.reverse();
        Self { n_max: self.n_max, c }
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.c
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierData {
    k_max: usize,
    l: Vec<C64>,
    /// Σ_k [k l_k l_{-k} - (Σ_r λ_r²)/k], complete including the exact
    /// jump-jump tail; equals Σ k l_k l_{-k} without jumps.
    pub szego_sum: C64,
    /// Bound on the truncation error of the smooth series.
    pub tail_estimate: f64,
    factors: Vec<Factor>,
    jumps: Vec<(f64, C64)>,
}

impl FourierData {
    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// l_k for |k| ≤ K, zero outside.
    pub fn l(&self, k: i64) -> C64 {
        let idx = k + self.k_max as i64;
        if idx < 0 || idx as usize >= self.l.len() {
            C64::new(0.0, 0.0)
        } else {
            self.l[idx as usize]
        }
    }

    pub fn l0(&self) -> C64 {
        self.l(0)
    }

    pub fn has_jumps(&self) -> bool {
        !self.jumps.is_empty()
    }
}

/// Rejects singularities, on-circle or outside factors, non-periodic
/// jumps and nonzero winding.
fn check_log_input(sym: &Symbol) -> Result<()> {
    if !sym.singularities().is_empty() {
        return Err(Error::NotJumpForm { reason: "symbol has Fisher-Hartwig singularities".into() });
    }
    if let Some(f) = sym.factors().iter().find(|f| f.lambda.norm() >= 1.0 - UNIT_TOL) {
        return Err(Error::NotJumpForm {
            reason: format!("factor with |λ| = {} is not strictly inside the unit disk", f.lambda.norm()),
        });
    }
    let total: C64 = sym.jumps().iter().map(|j| j.lambda).sum();
    if total.re.abs() > 1e-9 || (total.im - total.im.round()).abs() > 1e-9 {
        return Err(Error::NotPeriodic { total: format!("{total}") });
    }
    let w = sym.winding_number();
    if w != 0 {
        return Err(Error::WindingNonzero { winding: w });
    }
    if sym.constant_value().norm() == 0.0 {
        return Err(Error::VanishingSymbol { reason: "zero constant".into() });
    }
    Ok(())
}

fn smooth_bound(factors: &[Factor]) -> (f64, f64) {
    let weight: f64 = factors.iter().map(|f| f.exponent.abs()).sum();
    let r = factors.iter().map(|f| f.lambda.norm()).fold(0.0, f64::max);
    (weight, r)
}

fn tail_bound(factors: &[Factor], jump_weight: f64, k: usize) -> f64 {
    let (w, r) = smooth_bound(factors);
    if w == 0.0 || r == 0.0 {
        return 0.0;
    }
    let k1 = (k + 1) as f64;
    let rk = r.powf(k1);
    let smooth = w * w * rk * rk / ((1.0 - r * r) * k1);
    let cross = 2.0 * w * jump_weight * rk / (k1 * (1.0 - r));
    let series = w * rk / (k1 * (1.0 - r));
    smooth + cross + series
}

/// Σ_{k > K} e^{ikθ}/k for θ ≠ 0 mod 2π.
fn log_series_tail(theta: f64, k: usize) -> C64 {
    let e = C64::from_polar(1.0, theta);
    let full = -(1.0 - e).ln();
    let mut partial = C64::new(0.0, 0.0);
    for j in 1..=k {
        partial += C64::from_polar(1.0, j as f64 * theta) / j as f64;
    }
    full - partial
}

/// l_k of ln f for |k| ≤ K. The symbol may carry a power and jumps as long
/// as the total winding vanishes; ln f is then the piecewise-continuous
/// logarithm fixed by the jump parameters.
pub fn log_coefficients(sym: &Symbol, k_max: usize) -> Result<FourierData> {
    check_log_input(sym)?;
    let k = k_max as i64;
    let factors = sym.factors().to_vec();
    let jumps: Vec<(f64, C64)> = sym.jumps().iter().map(|j| (j.angle, j.lambda)).collect();

    let mut l = vec![C64::new(0.0, 0.0); 2 * k_max + 1];
    let mut l0 = sym.constant_value().ln();
    for &(x, lam) in &jumps {
        l0 += lam * (PI - x);
    }
    l[k_max] = l0;

    for f in &factors {
        // p ln(1 - λ z) = -p Σ λ^m z^m / m feeds l_{-m}; the 1/z version l_m
        let sign: i64 = match f.orientation {
            Orientation::Z => -1,
            Orientation::InvZ => 1,
        };
        let mut pw = C64::new(1.0, 0.0);
        for m in 1..=k {
            pw *= f.lambda;
            let idx = (k + sign * m) as usize;
            l[idx] -= pw * (f.exponent / m as f64);
        }
    }
    for &(x, lam) in &jumps {
        // ∫_{x_r}^{π} e^{ikx} dx/2π · 2π λ with the (-1)^k parts cancelled
        // by the zero winding
        for m in 1..=k {
            for s in [-m, m] {
                let ks = s as f64;
                l[(k + s) as usize] -= lam * C64::from_polar(1.0, ks * x) / C64::new(0.0, ks);
            }
        }
    }

    let lambda_sq: C64 = jumps.iter().map(|&(_, lam)| lam * lam).sum();
    let mut szego = C64::new(0.0, 0.0);
    for m in 1..=k {
        let mf = m as f64;
        szego += l[(k + m) as usize] * l[(k - m) as usize] * mf - lambda_sq / mf;
    }
    for (r, &(xr, lr)) in jumps.iter().enumerate() {
        for (s, &(xs, ls)) in jumps.iter().enumerate() {
            if r != s {
                szego += lr * ls * log_series_tail(xr - xs, k_max);
            }
        }
    }
    let jump_weight: f64 = jumps.iter().map(|&(_, lam)| lam.norm()).sum();
    let tail_estimate = tail_bound(&factors, jump_weight, k_max);
    Ok(FourierData { k_max, l, szego_sum: szego, tail_estimate, factors, jumps })
}

/// Doubles K from 64 until the tail bound drops below `tol`.
pub fn log_coefficients_converged(sym: &Symbol, tol: f64) -> Result<FourierData> {
    check_log_input(sym)?;
    let jump_weight: f64 = sym.jumps().iter().map(|j| j.lambda.norm()).sum();
    let mut k = 64;
    while tail_bound(sym.factors(), jump_weight, k) >= tol {
        if k >= MAX_LOG_ORDER {
            return Err(Error::SlowConvergence { tolerance: tol, cap: MAX_LOG_ORDER });
        }
        k = (2 * k).min(MAX_LOG_ORDER);
    }
    log_coefficients(sym, k)
}

/// f_+(x) and f_-(x) with ln f_+ = Σ_{k>0} l_{-k} e^{ikx} and
/// ln f_- = Σ_{k>0} l_k e^{-ikx}.
pub fn wiener_hopf_values(fd: &FourierData, x: f64) -> Result<(C64, C64)> {
    let (p, m) = wiener_hopf_logs(fd, x)?;
    Ok((p.exp(), m.exp()))
}

/// ln f_+(x) and ln f_-(x) as analytic series values, free of branch
/// choices.
pub fn wiener_hopf_logs(fd: &FourierData, x: f64) -> Result<(C64, C64)> {
    let k = fd.k_max as i64;
    let mut plus = C64::new(0.0, 0.0);
    let mut minus = C64::new(0.0, 0.0);
    let mut plus_late = C64::new(0.0, 0.0);
    let mut minus_late = C64::new(0.0, 0.0);
    let late = (3 * k) / 4;
    for m in 1..=k {
        let e = C64::from_polar(1.0, m as f64 * x);
        let tp = fd.l(-m) * e;
        let tm = fd.l(m) * e.conj();
        plus += tp;
        minus += tm;
        if m > late {
            plus_late += tp;
            minus_late += tm;
        }
    }
    let spread = plus_late.norm().max(minus_late.norm());
    if !(spread <= 1e-6) {
        return Err(Error::SeriesDiverged { spread });
    }
    if fd.has_jumps() {
        return Ok((plus, minus));
    }
    let z = C64::from_polar(1.0, x);
    let mut closed_plus = C64::new(0.0, 0.0);
    let mut closed_minus = C64::new(0.0, 0.0);
    for f in &fd.factors {
        match f.orientation {
            Orientation::Z => closed_plus += (1.0 - f.lambda * z).ln() * f.exponent,
            Orientation::InvZ => closed_minus += (1.0 - f.lambda / z).ln() * f.exponent,
        }
    }
    let spread = (closed_plus - plus).norm().max((closed_minus - minus).norm());
    if spread > 1e-8_f64.max(10.0 * fd.tail_estimate) {
        return Err(Error::SeriesDiverged { spread });
    }
    Ok((closed_plus, closed_minus))
}

/// Trapezoid coefficients on the half-shifted grid x_j = -π + 2π(j+½)/Q,
/// returned for |k| < Q/2 together with a Nyquist-band check.
fn grid_coefficients<F: FnMut(f64) -> Result<C64>>(q: usize, mut f: F) -> Result<Vec<C64>> {
    let step = 2.0 * PI / q as f64;
    let mut buf = Vec::with_capacity(q);
    for j in 0..q {
        let x = -PI + step * (j as f64 + 0.5);
        buf.push(f(x)?);
    }
    if buf.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::QuadratureUnderResolved { reason: "non-finite symbol value on the grid".into() });
    }
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_inverse(q).process(&mut buf);
    let half = q / 2;
    // c_k for k = -(half-1) ..= half-1 stored at k + half - 1
    let mut out = vec![C64::new(0.0, 0.0); 2 * half - 1];
    for kk in -(half as i64 - 1)..=(half as i64 - 1) {
        let raw = buf[kk.rem_euclid(q as i64) as usize];
        let phase = C64::from_polar(1.0 / q as f64, kk as f64 * (step / 2.0 - PI));
        out[(kk + half as i64 - 1) as usize] = raw * phase;
    }
    let peak = out.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let band_start = 3 * q / 8;
    let band = out
        .iter()
        .enumerate()
        .filter(|(i, _)| (*i as i64 - half as i64 + 1).unsigned_abs() as usize >= band_start)
        .map(|(_, c)| c.norm())
        .fold(0.0, f64::max);
    if band > NYQUIST_TOL * peak.max(f64::MIN_POSITIVE) {
        return Err(Error::QuadratureUnderResolved {
            reason: format!("Nyquist band holds {:.3e} of the peak coefficient", band / peak),
        });
    }
    Ok(out)
}

/// ∫_{lo}^{hi} e^{iωx} dx / 2π.
fn interval_integral(omega: C64, lo: f64, hi: f64) -> C64 {
    let h = hi - lo;
    let mid = 0.5 * (lo + hi);
    let phase = (C64::i() * omega * mid).exp();
    if omega.norm() * h < 1e-8 {
        phase * (h / (2.0 * PI))
    } else {
        phase * (omega * (h / 2.0)).sin() / (omega * PI)
    }
}

/// Exact coefficients of Π_r e^{ib_r(y_r - π sgn y_r)} for |k| ≤ n,
/// integrating the piecewise exponential between singular angles.
fn saw_product_coefficients(sings: &[FhSingularity], n: i64) -> Vec<C64> {
    let mut cuts: Vec<f64> = sings.iter().map(|s| s.angle).collect();
    cuts.sort_by(f64::total_cmp);
    let mut edges = vec![-PI];
    edges.extend(cuts.iter().copied().filter(|&a| a > -PI && a < PI));
    edges.push(PI);
    let b_total: C64 = sings.iter().map(|s| s.b).sum();

    let mut pieces = Vec::new();
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi - lo <= 0.0 {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let value: C64 = sings
            .iter()
            .map(|s| {
                let y = wrap_angle(mid - s.angle);
                (C64::i() * s.b * (y - PI * y.signum())).exp()
            })
            .product();
        // on (lo, hi) the product is value · e^{iB(x - mid)}
        pieces.push((lo, hi, value * (-C64::i() * b_total * mid).exp()));
    }
    (-n..=n)
        .map(|k| {
            let omega = b_total + k as f64;
            pieces.iter().map(|&(lo, hi, amp)| amp * interval_integral(omega, lo, hi)).sum()
        })
        .collect()
}

/// Toeplitz coefficients c_k, |k| ≤ n_max. Symbols whose singularities all
/// have a = 0 are integrated exactly around the jumps; the smooth part uses
/// the trapezoid rule with `quad_points` nodes.
/// Angles where the symbol fails to be smooth, with the local power a of
/// |x - angle|^{2a}.
fn singular_angles(sym: &Symbol) -> Vec<(f64, f64)> {
    let mut angles: Vec<(f64, f64)> =
        sym.factors().iter().filter(|f| f.on_circle()).map(|f| (f.circle_angle(), f.exponent / 2.0)).collect();
    angles.extend(sym.jumps().iter().map(|j| (j.angle, 0.0)));
    angles.extend(sym.singularities().iter().map(|s| (s.angle, s.a)));
    angles.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (x, a) in angles {
        match merged.last_mut() {
            Some(last) if (last.0 - x).abs() < 1e-12 => last.1 += a,
            _ => merged.push((x, a)),
        }
    }
    merged
}

/// Geometric refinement ratio toward each singular angle, and the distance
/// below which the integrand is replaced by its leading power law.
const GRADING_RATIO: f64 = 0.15;
const GRADING_FLOOR: f64 = 1e-9;

/// Fourier coefficients by composite Gauss-Legendre quadrature on the arcs
/// between singular angles, with panels graded geometrically toward each
/// endpoint so algebraic singularities integrate to rounding level.
fn graded_coefficients(sym: &Symbol, n_max: usize, breaks: &[(f64, f64)]) -> Result<ToeplitzCoefficients> {
    let (gx, gw) = gauss_legendre(16);
    let h_max = (2.0 / n_max.max(1) as f64).min(0.1);
    let mut nodes: Vec<(f64, f64)> = Vec::new();
    let panel = |lo: f64, hi: f64, nodes: &mut Vec<(f64, f64)>| {
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        for (x, w) in gx.iter().zip(&gw) {
            nodes.push((mid + half * x, half * w));
        }
    };
    for (i, &(u, au)) in breaks.iter().enumerate() {
        let (v, av) = if i + 1 < breaks.len() { breaks[i + 1] } else { (breaks[0].0 + 2.0 * PI, breaks[0].1) };
        let len = v - u;
        let m = ((len / h_max).ceil() as usize).max(3);
        let h = len / m as f64;
        for p in 1..m - 1 {
            panel(u + p as f64 * h, u + (p + 1) as f64 * h, &mut nodes);
        }
        let mut outer = h;
        while outer > GRADING_FLOOR {
            let inner = (outer * GRADING_RATIO).max(GRADING_FLOOR);
            panel(u + inner, u + outer, &mut nodes);
            panel(v - outer, v - inner, &mut nodes);
            outer = inner;
        }
        // ∫_0^δ C d^{2a} dd = C δ^{2a} δ/(1 + 2a), sampled at the edge
        for (edge, x, a) in [(u, u + GRADING_FLOOR, au), (v, v - GRADING_FLOOR, av)] {
            if 1.0 + 2.0 * a <= 0.0 {
                return Err(Error::QuadratureUnderResolved { reason: format!("non-integrable power at angle {edge}") });
            }
            nodes.push((x, GRADING_FLOOR / (1.0 + 2.0 * a)));
        }
    }
    let mut acc = vec![C64::new(0.0, 0.0); 2 * n_max + 1];
    for (x, w) in nodes {
        let f = sym.eval(x).map_err(|e| Error::QuadratureUnderResolved { reason: e.to_string() })? * (w / (2.0 * PI));
        let step = C64::from_polar(1.0, x);
        let mut up = f;
        let mut down = f;
        acc[n_max] += f;
        for k in 1..=n_max {
            up *= step;
            down /= step;
            acc[n_max + k] += up;
            acc[n_max - k] += down;
        }
    }
    ToeplitzCoefficients::from_vec(acc)
}

pub fn symbol_coefficients(sym: &Symbol, n_max: usize, quad_points: usize) -> Result<ToeplitzCoefficients> {
    if !quad_points.is_power_of_two() || quad_points < 8 * n_max.max(1) {
        return Err(Error::QuadratureUnderResolved {
            reason: format!("need a power of two ≥ {} quadrature points, got {quad_points}", 8 * n_max.max(1)),
        });
    }
    let half = (quad_points / 2) as i64;
    let n = n_max as i64;

    let sf = match sym.singular_form() {
        Ok(sf) if sf.singularities.iter().all(|s| s.a == 0.0) => sf,
        Ok(_) | Err(Error::NonCanonicalFactor { .. }) => {
            let breaks = singular_angles(sym);
            if !breaks.is_empty() {
                return graded_coefficients(sym, n_max, &breaks);
            }
            // quadrature of the symbol as written
            let grid = grid_coefficients(quad_points, |x| {
                sym.eval(x).map_err(|e| Error::QuadratureUnderResolved { reason: e.to_string() })
            })?;
            return Ok(ToeplitzCoefficients::from_fn(n_max, |k| grid[(k + half - 1) as usize]));
        }
        Err(e) => return Err(e),
    };

    let smooth = Symbol::constant(sf.constant);
    let smooth = sf.smooth.iter().fold(smooth, |s, f| s.with_factor(f.lambda, f.orientation, f.exponent));
    let grid = grid_coefficients(quad_points, |x| smooth.eval(x))?;
    let smooth_at = |j: i64| -> C64 {
        if j.abs() < half {
            grid[(j + half - 1) as usize]
        } else {
            C64::new(0.0, 0.0)
        }
    };
    let w = sf.winding as i64;

    if sf.singularities.is_empty() {
        if n + w.abs() >= half {
            return Err(Error::QuadratureUnderResolved { reason: "power exceeds grid range".into() });
        }
        return Ok(ToeplitzCoefficients::from_fn(n_max, |k| smooth_at(k + w)));
    }

    let peak = grid.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let reach = (1..half)
        .rev()
        .find(|&j| smooth_at(j).norm().max(smooth_at(-j).norm()) > 1e-18 * peak)
        .unwrap_or(0);
    let span = n + w.abs() + reach;
    let saw = saw_product_coefficients(&sf.singularities, span);
    let saw_at = |k: i64| saw[(k + span) as usize];
    Ok(ToeplitzCoefficients::from_fn(n_max, |k| {
        let mut acc = C64::new(0.0, 0.0);
        for j in -reach..=reach {
            acc += smooth_at(j) * saw_at(k + w - j);
        }
        acc
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn identity_coefficients() {
        let t = symbol_coefficients(&Symbol::identity(), 16, 256).unwrap();
        for k in -16..=16 {
            let expected = if k == 0 { 1.0 } else { 0.0 };
            assert!((t.get(k) - expected).norm() < 1e-15);
        }
    }

    #[test]
    fn sign_symbol_coefficients() {
        // value 1 outside |x| < π/2 and -1 inside
        let s = Symbol::three_interval(PI / 2.0, [c(0.0), C64::new(0.0, PI), c(0.0)]);
        let t = symbol_coefficients(&s, 40, 1024).unwrap();
        assert!(t.get(0).norm() < 1e-15);
        for k in 1..=40i64 {
            let expected = -2.0 * (k as f64 * PI / 2.0).sin() / (PI * k as f64);
            assert!((t.get(k) - expected).norm() < 1e-14, "k = {k}");
            assert!((t.get(-k) - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn phase_jump_coefficients() {
        let (p, alpha) = (1.1, 0.9);
        let s = Symbol::three_interval(p, [c(0.0), C64::new(0.0, alpha), c(0.0)]);
        let t = symbol_coefficients(&s, 20, 256).unwrap();
        let d = C64::from_polar(1.0, alpha) - 1.0;
        assert!((t.get(0) - (1.0 + d * p / PI)).norm() < 1e-14);
        for k in 1..=20i64 {
            let expected = d * (k as f64 * p).sin() / (PI * k as f64);
            assert!((t.get(k) - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn too_few_points() {
        let err = symbol_coefficients(&Symbol::identity(), 64, 256).unwrap_err();
        assert!(matches!(err, Error::QuadratureUnderResolved { .. }));
    }

    #[test]
    fn log_coefficients_of_constant() {
        let fd = log_coefficients(&Symbol::constant(c(2.5)), 8).unwrap();
        assert!((fd.l0() - 2.5f64.ln()).norm() < 1e-15);
        for k in 1..=8 {
            assert_eq!(fd.l(k), c(0.0));
            assert_eq!(fd.l(-k), c(0.0));
        }
        let (p, m) = wiener_hopf_values(&fd, 0.3).unwrap();
        assert_eq!((p, m), (c(1.0), c(1.0)));
    }

    #[test]
    fn log_coefficients_of_factor_pair() {
        let a = 0.4;
        let s = Symbol::identity()
            .with_factor(c(a), Orientation::InvZ, 0.5)
            .with_factor(c(a), Orientation::Z, -0.5);
        let fd = log_coefficients(&s, 30).unwrap();
        for k in 1..=30i32 {
            let v = a.powi(k) / (2.0 * k as f64);
            assert!((fd.l(k as i64) + v).norm() < 1e-15);
            assert!((fd.l(-(k as i64)) - v).norm() < 1e-15);
        }
    }

    #[test]
    fn log_coefficients_of_phase_jump() {
        let (p, alpha) = (0.8, 1.3);
        let s = Symbol::three_interval(p, [c(0.0), C64::new(0.0, alpha), c(0.0)]);
        let fd = log_coefficients(&s, 12).unwrap();
        assert!((fd.l0() - C64::new(0.0, alpha * p / PI)).norm() < 1e-14);
        for k in 1..=12i64 {
            let v = C64::new(0.0, alpha * (k as f64 * p).sin() / (PI * k as f64));
            assert!((fd.l(k) - v).norm() < 1e-14);
            assert!((fd.l(-k) - v).norm() < 1e-14);
        }
    }

    #[test]
    fn wiener_hopf_single_factor() {
        let a = 1.0 / 3.0;
        let s = Symbol::identity().with_factor(c(a), Orientation::Z, -0.5);
        let fd = log_coefficients_converged(&s, DEFAULT_LOG_TOL).unwrap();
        let (p, m) = wiener_hopf_values(&fd, 0.0).unwrap();
        assert!((m - 1.0).norm() < 1e-15);
        assert!((p - (1.0 - a).powf(-0.5)).norm() < 1e-14);
    }

    #[test]
    fn winding_is_rejected() {
        let s = Symbol::identity().with_power(1);
        assert!(matches!(log_coefficients(&s, 4), Err(Error::WindingNonzero { winding: 1 })));
    }

    #[test]
    fn slow_convergence_is_reported() {
        let s = Symbol::identity().with_factor(c(1.0 - 2e-9), Orientation::Z, 0.5);
        assert!(log_coefficients_converged(&s, 1e-12).is_err());
        let s = Symbol::identity().with_factor(c(0.9999), Orientation::Z, 0.5);
        assert!(matches!(log_coefficients_converged(&s, 1e-12), Err(Error::SlowConvergence { .. })));
    }

    fn factor_symbol() -> impl Strategy<Value = Symbol> {
        prop::collection::vec((0.0f64..0.9, -PI..PI, any::<bool>(), -1.5f64..1.5), 1..4).prop_map(|fs| {
            fs.into_iter().fold(Symbol::constant(c(1.7)), |s, (r, t, o, p)| {
                let orient = if o { Orientation::Z } else { Orientation::InvZ };
                s.with_factor(C64::from_polar(r, t), orient, p)
            })
        })
    }

    proptest! {
        #[test]
        fn analytic_and_quadrature_log_coefficients_agree(s in factor_symbol()) {
            let fd = log_coefficients(&s, 32).unwrap();
            let log_sym = |x: f64| -> Result<C64> {
                let z = C64::from_polar(1.0, x);
                let mut v = s.constant_value().ln();
                for f in s.factors() {
                    let base = match f.orientation {
                        Orientation::Z => 1.0 - f.lambda * z,
                        Orientation::InvZ => 1.0 - f.lambda / z,
                    };
                    v += base.ln() * f.exponent;
                }
                Ok(v)
            };
            let q = 4096;
            let grid = grid_coefficients(q, log_sym).unwrap();
            for k in -32i64..=32 {
                let g = grid[(k + q as i64 / 2 - 1) as usize];
                prop_assert!((fd.l(k) - g).norm() < 1e-10, "k = {k}");
            }
        }

        #[test]
        fn contour_identity(r1 in 0.0f64..0.6, r2 in 0.0f64..0.6, rho in 0.8f64..1.25) {
            let s = Symbol::constant(c(1.2))
                .with_power(1)
                .with_factor(c(r1), Orientation::Z, 0.5)
                .with_factor(C64::new(0.1, r2), Orientation::InvZ, -0.5);
            let g = s.contour_rescale(rho).unwrap();
            let cf = symbol_coefficients(&s, 24, 4096).unwrap();
            let cg = symbol_coefficients(&g, 24, 4096).unwrap();
            for k in -24i64..=24 {
                prop_assert!((cf.get(k) - cg.get(k) * rho.powi(k as i32)).norm() < 1e-10);
            }
        }

        #[test]
        fn szego_sum_real_for_real_log(r in 0.0f64..0.9, p in -1.0f64..1.0) {
            let s = Symbol::constant(c(2.0))
                .with_factor(c(r), Orientation::Z, p)
                .with_factor(c(r), Orientation::InvZ, p);
            let fd = log_coefficients_converged(&s, DEFAULT_LOG_TOL).unwrap();
            prop_assert!(fd.szego_sum.im.abs() < 1e-12);
            prop_assert!((fd.szego_sum.re + p * p * (1.0 - r * r).ln()).abs() < 1e-10);
        }
    }
}
