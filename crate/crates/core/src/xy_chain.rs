//! XY and XX spin chain correlators: parameters and regimes, generating
//! functions, closed-form asymptotics and exact determinant values.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fh_engine::{basor_asymptotics, fh_asymptotics, AsymptoticResult};
use crate::fourier::{symbol_coefficients, DEFAULT_QUAD_POINTS};
use crate::quadrature::CompositeRule;
use crate::specfun::{barnes_pair, BARNES_G_HALF};
use crate::symbol::{Orientation, Symbol};
use crate::toeplitz::{log_det_auto, log_det_with, Precision, ToeplitzInstance};

/// Distance from a regime boundary treated as on the boundary.
const REGIME_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// h² + γ² < 1
    R1Disk,
    /// h² + γ² > 1, h < 1
    R2Band,
    /// h = 1
    R3Line,
    /// h > 1
    R4High,
    /// h² + γ² = 1, double root
    BCircle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XyParams {
    pub gamma: f64,
    pub h: f64,
    pub lambda1: C64,
    pub lambda2: C64,
    /// (1 - γ)/(1 + γ) = λ1 λ2
    pub a: f64,
    pub regime: Regime,
    /// arg of the upper-half-plane root in regime R1, in (0, π).
    pub phi: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XxParams {
    pub p_f: f64,
    pub alpha: f64,
}

impl XxParams {
    pub fn new(p_f: f64, alpha: f64) -> Result<Self> {
        if !(p_f > 0.0 && p_f < PI) {
            return Err(Error::OutOfDomain { reason: format!("Fermi momentum {p_f} outside (0, π)") });
        }
        if !alpha.is_finite() {
            return Err(Error::OutOfDomain { reason: "α must be finite".into() });
        }
        Ok(Self { p_f, alpha })
    }

    /// α reduced to (-π, π].
    pub fn reduced_alpha(&self) -> f64 {
        crate::symbol::wrap_angle(self.alpha)
    }

    /// Field h = cos p_F.
    pub fn field(&self) -> f64 {
        self.p_f.cos()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dispersion {
    pub gamma: f64,
    pub h: f64,
}

impl Dispersion {
    pub fn eps(&self, k: f64) -> f64 {
        k.cos() - self.h
    }

    pub fn delta(&self, k: f64) -> f64 {
        self.gamma * k.sin()
    }

    pub fn energy(&self, k: f64) -> f64 {
        self.eps(k).hypot(self.delta(k))
    }

    /// (ε + iδ)/E, the phase whose Fourier coefficients give BA(x).
    pub fn sign(&self, k: f64) -> C64 {
        let e = self.energy(k);
        C64::new(self.eps(k) / e, self.delta(k) / e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelatorKind {
    Gxx,
    Gyy,
    /// ⟨S⁺_x S⁻_0⟩ = Gxx + Gyy
    Gpm,
    GAlpha,
    GPi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ExactOracle,
    FhAsymptotic,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChainParams {
    Xy(XyParams),
    Xx(XxParams),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorValue {
    pub kind: CorrelatorKind,
    pub x: f64,
    pub value: C64,
    pub method: Method,
    pub conjectural: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    F1,
    F2,
}

pub fn make_params(gamma: f64, h: f64) -> Result<XyParams> {
    if !gamma.is_finite() || !h.is_finite() {
        return Err(Error::OutOfDomain { reason: "parameters must be finite".into() });
    }
    if gamma <= 0.0 {
        return Err(Error::OutOfDomain { reason: "γ = 0 is the XX chain; use the XX correlators".into() });
    }
    if gamma > 1.0 {
        return Err(Error::OutOfDomain { reason: format!("γ = {gamma} outside (0, 1]") });
    }
    let h = h.abs();
    let a = (1.0 - gamma) / (1.0 + gamma);
    let d = h * h + gamma * gamma - 1.0;
    let g1 = 1.0 + gamma;

    if h < REGIME_TOL && (gamma - 1.0).abs() < REGIME_TOL {
        let zero = C64::new(0.0, 0.0);
        return Ok(XyParams { gamma, h, lambda1: zero, lambda2: zero, a, regime: Regime::R1Disk, phi: Some(PI / 2.0) });
    }
    if (h - 1.0).abs() < REGIME_TOL {
        return Ok(XyParams {
            gamma,
            h,
            lambda1: C64::new(a, 0.0),
            lambda2: C64::new(1.0, 0.0),
            a,
            regime: Regime::R3Line,
            phi: None,
        });
    }
    if d.abs() < REGIME_TOL {
        let l = C64::new(h / g1, 0.0);
        return Ok(XyParams { gamma, h, lambda1: l, lambda2: l, a, regime: Regime::BCircle, phi: None });
    }
    if d < 0.0 {
        let s = (-d).sqrt();
        let lambda1 = C64::new(h, -s) / g1;
        let lambda2 = C64::new(h, s) / g1;
        return Ok(XyParams { gamma, h, lambda1, lambda2, a, regime: Regime::R1Disk, phi: Some(lambda2.arg()) });
    }
    let s = d.sqrt();
    let lambda1 = C64::new((h - s) / g1, 0.0);
    let lambda2 = C64::new((h + s) / g1, 0.0);
    let regime = if h < 1.0 { Regime::R2Band } else { Regime::R4High };
    Ok(XyParams { gamma, h, lambda1, lambda2, a, regime, phi: None })
}

/// Generating functions f1 (for ⟨SˣSˣ⟩) and f2 (for ⟨SʸSʸ⟩):
/// f1 = Π_j ((1 - λ_j/z)/(1 - λ_j z))^{1/2}, f2 = z² f1. For h > 1 the root
/// λ2 > 1 is inverted so every factor is canonical.
pub fn correlator_symbols(p: &XyParams) -> (Symbol, Symbol) {
    let half_pair = |s: Symbol, l: C64| {
        s.with_factor(l, Orientation::InvZ, 0.5).with_factor(l, Orientation::Z, -0.5)
    };
    let f1 = match p.regime {
        Regime::R4High => {
            // ((1 - λ2/z)/(1 - λ2 z))^{1/2} = -z^{-1} ((1 - μz)/(1 - μ/z))^{1/2}
            // with μ = 1/λ2; the sign is fixed by f1(0) = -1
            let mu = p.lambda2.inv();
            let s = Symbol::constant(C64::new(-1.0, 0.0)).with_power(-1);
            let s = half_pair(s, p.lambda1);
            s.with_factor(mu, Orientation::Z, 0.5).with_factor(mu, Orientation::InvZ, -0.5)
        }
        _ => {
            let s = half_pair(Symbol::identity(), p.lambda1);
            if p.lambda2 == C64::new(0.0, 0.0) {
                s
            } else {
                half_pair(s, p.lambda2)
            }
        }
    };
    let f1 = if p.lambda1 == C64::new(0.0, 0.0) && p.regime != Regime::R4High {
        Symbol::identity()
    } else {
        f1
    };
    let f2 = f1.clone().with_power(2);
    (f1, f2)
}

/// The contour radius that puts the relevant singularities on the unit
/// circle, or 1 when no deformation is needed.
pub fn contour_radius(p: &XyParams, which: Which) -> Result<f64> {
    match (p.regime, which) {
        (Regime::BCircle, Which::F2) => Err(Error::BoundaryRegime),
        (Regime::R1Disk, Which::F2) => {
            if p.a == 0.0 {
                return Err(Error::OutOfDomain { reason: "a = 0: the ⟨SʸSʸ⟩ determinant vanishes identically".into() });
            }
            Ok(p.a.sqrt())
        }
        (Regime::R2Band, Which::F2) => Ok(p.lambda2.re),
        (Regime::R4High, Which::F1) => Ok(p.lambda2.re),
        (Regime::R4High, Which::F2) => Ok(1.0 / p.lambda2.re),
        _ => Ok(1.0),
    }
}

pub fn prepare_contour(sym: &Symbol, p: &XyParams, which: Which) -> Result<Symbol> {
    sym.contour_rescale(contour_radius(p, which)?)
}

/// The XX spin pair: f1 pairs with ⟨SˣSˣ⟩, f2 with ⟨SʸSʸ⟩.
pub fn xx_spin_symbols(p_f: f64) -> (Symbol, Symbol) {
    let ipi = C64::new(0.0, PI);
    let zero = C64::new(0.0, 0.0);
    let f1 = Symbol::three_interval(p_f, [-ipi, zero, ipi]).with_power(-1);
    let f2 = Symbol::three_interval(p_f, [ipi, zero, -ipi]).with_power(1);
    (f1, f2)
}

/// The (1, e^{iα}, 1) symbol with α reduced to (-π, π].
pub fn xx_alpha_symbol(xp: &XxParams) -> Symbol {
    let alpha = xp.reduced_alpha();
    Symbol::three_interval(xp.p_f, [C64::new(0.0, 0.0), C64::new(0.0, alpha), C64::new(0.0, 0.0)])
}

/// Symbols whose determinants give the correlator, with their weights.
pub fn kind_symbols(kind: CorrelatorKind, params: &ChainParams) -> Result<Vec<(Symbol, f64)>> {
    let (f1, f2) = match params {
        ChainParams::Xy(p) => correlator_symbols(p),
        ChainParams::Xx(xp) => xx_spin_symbols(xp.p_f),
    };
    Ok(match (kind, params) {
        (CorrelatorKind::Gxx, _) => vec![(f1, 0.25)],
        (CorrelatorKind::Gyy, _) => vec![(f2, 0.25)],
        (CorrelatorKind::Gpm, _) => vec![(f1, 0.25), (f2, 0.25)],
        (CorrelatorKind::GAlpha, ChainParams::Xx(xp)) => vec![(xx_alpha_symbol(xp), 1.0)],
        (CorrelatorKind::GPi, ChainParams::Xx(xp)) => {
            vec![(xx_alpha_symbol(&XxParams { p_f: xp.p_f, alpha: PI }), 1.0)]
        }
        _ => {
            return Err(Error::OutOfDomain {
                reason: "exponential correlators are only available for the XX chain".into(),
            })
        }
    })
}

fn real_by_symmetry(kind: CorrelatorKind) -> bool {
    !matches!(kind, CorrelatorKind::GAlpha)
}

fn tidy(kind: CorrelatorKind, v: C64) -> C64 {
    // drop rounding-level imaginary parts of real correlators
    if real_by_symmetry(kind) && v.im.abs() < 1e-9 * v.norm() {
        C64::new(v.re, 0.0)
    } else {
        v
    }
}

/// Determinant-based value. `precision` None picks double precision and
/// switches to extended precision when |D| < 1e-8.
pub fn exact_correlator_with(
    kind: CorrelatorKind,
    params: &ChainParams,
    x: usize,
    quad_points: usize,
    precision: Option<Precision>,
) -> Result<CorrelatorValue> {
    if x == 0 {
        return Err(Error::InvalidInput("separation x must be at least 1".into()));
    }
    let q = quad_points.max((8 * x).next_power_of_two());
    let mut value = C64::new(0.0, 0.0);
    for (sym, weight) in kind_symbols(kind, params)? {
        let coeffs = symbol_coefficients(&sym, x, q)?;
        let inst = ToeplitzInstance::new(coeffs, x, 0)?;
        let d = match precision {
            None => log_det_auto(&inst)?,
            Some(pr) => log_det_with(&inst, pr)?,
        };
        value += d.value() * weight;
    }
    Ok(CorrelatorValue { kind, x: x as f64, value: tidy(kind, value), method: Method::ExactOracle, conjectural: false })
}

pub fn exact_correlator(kind: CorrelatorKind, params: &ChainParams, x: usize) -> Result<CorrelatorValue> {
    exact_correlator_with(kind, params, x, DEFAULT_QUAD_POINTS, None)
}

/// Asymptotic result for one generating function, after the contour
/// deformation its regime requires.
pub fn symbol_asymptotics(params: &ChainParams, which: Which) -> Result<AsymptoticResult> {
    match params {
        ChainParams::Xy(p) => {
            let (f1, f2) = correlator_symbols(p);
            let sym = if which == Which::F1 { f1 } else { f2 };
            fh_asymptotics(&prepare_contour(&sym, p, which)?)
        }
        ChainParams::Xx(xp) => {
            let (f1, f2) = xx_spin_symbols(xp.p_f);
            fh_asymptotics(if which == Which::F1 { &f1 } else { &f2 })
        }
    }
}

/// Leading asymptotics from the Fisher-Hartwig engine.
pub fn asymptotic_correlator(kind: CorrelatorKind, params: &ChainParams, x: f64) -> Result<CorrelatorValue> {
    let mut value = C64::new(0.0, 0.0);
    let mut conjectural = false;
    let parts: Vec<Which> = match kind {
        CorrelatorKind::Gxx => vec![Which::F1],
        CorrelatorKind::Gyy => vec![Which::F2],
        CorrelatorKind::Gpm => vec![Which::F1, Which::F2],
        CorrelatorKind::GAlpha | CorrelatorKind::GPi => {
            let ChainParams::Xx(xp) = params else {
                return Err(Error::OutOfDomain {
                    reason: "exponential correlators are only available for the XX chain".into(),
                });
            };
            let alpha = if kind == CorrelatorKind::GPi { PI } else { xp.reduced_alpha() };
            let sym = xx_alpha_symbol(&XxParams { p_f: xp.p_f, alpha });
            let r = if alpha.abs() < PI { basor_asymptotics(&sym)? } else { fh_asymptotics(&sym)? };
            return Ok(CorrelatorValue {
                kind,
                x,
                value: tidy(kind, r.evaluate(x)),
                method: Method::FhAsymptotic,
                conjectural: r.conjectural,
            });
        }
    };
    for which in parts {
        let r = symbol_asymptotics(params, which)?;
        conjectural |= r.conjectural;
        value += r.evaluate(x) * 0.25;
    }
    Ok(CorrelatorValue { kind, x, value: tidy(kind, value), method: Method::FhAsymptotic, conjectural })
}

fn closed(kind: CorrelatorKind, x: f64, value: f64) -> CorrelatorValue {
    CorrelatorValue { kind, x, value: C64::new(value, 0.0), method: Method::ClosedForm, conjectural: false }
}

/// √π G(1/2)², the value of G(1+z)G(1-z) at z = 1/2.
fn g_half() -> f64 {
    PI.sqrt() * BARNES_G_HALF * BARNES_G_HALF
}

pub fn closed_form_gxx(p: &XyParams, x: f64) -> Result<CorrelatorValue> {
    let (l1, l2) = (p.lambda1.re, p.lambda2.re);
    let v = match p.regime {
        Regime::BCircle => return Err(Error::BoundaryRegime),
        Regime::R1Disk | Regime::R2Band => 0.25 * (1.0 - p.a * p.a).sqrt() * (1.0 - p.h * p.h).powf(0.25),
        Regime::R3Line => x.powf(-0.25) * p.gamma.powf(0.75) / (2.0 * (1.0 + p.gamma)) * g_half(),
        Regime::R4High => {
            x.powf(-0.5) * l2.powf(-x) / (4.0 * PI.sqrt())
                * (1.0 - l1 * l1).powf(0.25)
                * (1.0 - l2.powi(-2)).powf(-0.25)
                * (1.0 - l1 * l2).sqrt()
        }
    };
    Ok(closed(CorrelatorKind::Gxx, x, v))
}

pub fn closed_form_gyy(p: &XyParams, x: f64) -> Result<CorrelatorValue> {
    let (l1, l2) = (p.lambda1.re, p.lambda2.re);
    let a = p.a;
    let v = match p.regime {
        Regime::BCircle => return Err(Error::BoundaryRegime),
        Regime::R1Disk => {
            let phi = p.phi.unwrap_or(PI / 2.0);
            a.powf(x) / x / (2.0 * PI)
                * phi.sin()
                * (1.0 - a).powf(-0.5)
                * (1.0 + a * a - 2.0 * a * (2.0 * phi).cos()).powf(-0.25)
        }
        Regime::R2Band => {
            -x.powi(-3) * l2.powf(2.0 * x) / (8.0 * PI)
                * (1.0 - l1 * l1).powf(0.25)
                * (1.0 - l2 * l2).powf(-0.75)
                * (1.0 - l1 * l2).powf(-0.5)
                / (1.0 - l1 / l2)
        }
        Regime::R3Line => {
            -x.powf(-2.25) * PI.sqrt() / 32.0 * p.gamma.powf(-1.25) * (1.0 + p.gamma) * BARNES_G_HALF.powi(2)
        }
        Regime::R4High => {
            -x.powf(-1.5) * l2.powf(-x) / (8.0 * PI.sqrt())
                * (1.0 - l1 * l1).powf(0.25)
                * (1.0 - l2.powi(-2)).powf(0.75)
                / (1.0 - l1 / l2)
                * (1.0 - l1 * l2).powf(-0.5)
        }
    };
    Ok(closed(CorrelatorKind::Gyy, x, v))
}

/// ⟨e^{iαN(x)}⟩ from the closed forms: the half-filling formula for α ≠ π,
/// the Basor formula at other fillings, and the two-term sum at α = π.
pub fn xx_exponential_correlator(xp: &XxParams, x: usize) -> Result<CorrelatorValue> {
    let alpha = xp.reduced_alpha();
    let xf = x as f64;
    let kind = CorrelatorKind::GAlpha;
    if alpha == 0.0 {
        return Ok(closed(kind, xf, 1.0));
    }
    if alpha.abs() == PI {
        let v = 2.0 * (xp.p_f * xf).cos() * xf.powf(-0.5) * xp.p_f.sin().powf(-0.5) / 2f64.sqrt() * g_half().powi(2);
        return Ok(closed(CorrelatorKind::GPi, xf, v));
    }
    if (xp.p_f - PI / 2.0).abs() < 1e-15 {
        let lam = alpha / (2.0 * PI);
        let g = barnes_pair(C64::new(lam, 0.0))?;
        let e = 2.0 * lam * lam;
        let v = C64::from_polar(1.0, alpha * xf / 2.0) * xf.powf(-e) * 2f64.powf(-e) * g * g;
        return Ok(CorrelatorValue { kind, x: xf, value: v, method: Method::ClosedForm, conjectural: false });
    }
    let r = basor_asymptotics(&xx_alpha_symbol(xp))?;
    Ok(CorrelatorValue { kind, x: xf, value: r.evaluate(xf), method: Method::FhAsymptotic, conjectural: r.conjectural })
}

/// ⟨S⁺_x S⁻_0⟩ ≈ x^{-1/2} (sin p_F)^{1/2} g(1/2)² / √2.
pub fn xx_spin_correlator(xp: &XxParams, x: f64) -> CorrelatorValue {
    let v = x.powf(-0.5) * xp.p_f.sin().sqrt() / 2f64.sqrt() * g_half().powi(2);
    closed(CorrelatorKind::Gpm, x, v)
}

/// ⟨a†_x a_0⟩, ⟨a†_x a†_0⟩ and BA(x) by quadrature over the Brillouin
/// zone, refined once to confirm convergence.
pub fn fermion_averages(d: &Dispersion, x: i64) -> Result<(f64, C64, C64)> {
    let xf = x as f64;
    let kf = if d.h.abs() < 1.0 { Some(d.h.acos()) } else { None };
    let integrate = |panels: usize, f: &dyn Fn(f64) -> f64| -> f64 {
        let rule = CompositeRule::new(16);
        match kf {
            Some(k) => rule.integrate(0.0, k, panels, f) + rule.integrate(k, PI, panels, f),
            None => rule.integrate(0.0, PI, 2 * panels, f),
        }
    };
    let occupation = |k: f64| {
        let e = d.energy(k);
        let ratio = if e == 0.0 { 0.0 } else { d.eps(k) / e };
        (xf * k).cos() * (0.5 + 0.5 * ratio) / PI
    };
    let pairing = |k: f64| {
        let e = d.energy(k);
        if e == 0.0 {
            0.0
        } else {
            -(xf * k).sin() * d.delta(k) / e / (2.0 * PI)
        }
    };
    let ba = |k: f64| {
        let e = d.energy(k);
        if e == 0.0 {
            0.0
        } else {
            ((xf * k).cos() * d.eps(k) - (xf * k).sin() * d.delta(k)) / e / PI
        }
    };
    let mut out = [0.0; 3];
    let fs: [&dyn Fn(f64) -> f64; 3] = [&occupation, &pairing, &ba];
    let panels = 64 + 2 * x.unsigned_abs() as usize;
    for (slot, f) in out.iter_mut().zip(fs) {
        let coarse = integrate(panels, f);
        let fine = integrate(2 * panels, f);
        if (coarse - fine).abs() > 1e-10 {
            return Err(Error::QuadratureUnderResolved {
                reason: format!("fermion average changes by {:.2e} under refinement", (coarse - fine).abs()),
            });
        }
        *slot = fine;
    }
    Ok((out[0], C64::new(out[1], 0.0), C64::new(out[2], 0.0)))
}
