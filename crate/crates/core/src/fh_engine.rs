//! Leading asymptotics of Toeplitz determinants: strong Szegő, the
//! Fisher-Hartwig sum over maximal representations, and the Basor formula
//! for pure jump symbols.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fourier::{log_coefficients_converged, wiener_hopf_logs, FourierData, DEFAULT_LOG_TOL};
use crate::specfun::{barnes_g, g_tilde};
use crate::symbol::{FhRepresentation, Symbol, DEFAULT_MAX_SHIFT};

/// Representations whose exponents differ by less than this are degenerate.
const DEGENERACY_TOL: f64 = 1e-9;

/// One term e^{l0 N} N^{power} E.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticTerm {
    pub l0: C64,
    pub power: C64,
    pub e: C64,
    pub representation: FhRepresentation,
}

impl AsymptoticTerm {
    pub fn evaluate(&self, n: f64) -> C64 {
        (self.l0 * n + self.power * n.ln()).exp() * self.e
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticResult {
    pub terms: Vec<AsymptoticTerm>,
    /// Set when some |Re b_r| reaches 1/2, outside the proven range.
    pub conjectural: bool,
}

impl AsymptoticResult {
    /// Coherent sum over all terms.
    pub fn evaluate(&self, n: f64) -> C64 {
        self.terms.iter().map(|t| t.evaluate(n)).sum()
    }

    pub fn power(&self) -> C64 {
        self.terms.first().map_or(C64::new(0.0, 0.0), |t| t.power)
    }
}

pub fn check_excluded(rep: &FhRepresentation) -> bool {
    rep.singularities.iter().any(|s| s.is_excluded())
}

fn smooth_representation(f0: &Symbol) -> FhRepresentation {
    FhRepresentation {
        f0: f0.clone(),
        singularities: Vec::new(),
        exponent: C64::new(0.0, 0.0),
        excluded: false,
    }
}

pub fn szego_asymptotics(f0: &Symbol) -> Result<AsymptoticTerm> {
    if !f0.jumps().is_empty() || !f0.singularities().is_empty() {
        return Err(Error::NotJumpForm { reason: "Szegő asymptotics needs a smooth symbol".into() });
    }
    let fd = log_coefficients_converged(f0, DEFAULT_LOG_TOL)?;
    Ok(AsymptoticTerm {
        l0: fd.l0(),
        power: C64::new(0.0, 0.0),
        e: fd.szego_sum.exp(),
        representation: smooth_representation(f0),
    })
}

/// The constant E of one representation; `fd` must hold the
/// log-coefficients of `rep.f0`.
pub fn fh_constant_e(rep: &FhRepresentation, fd: &FourierData) -> Result<C64> {
    if let Some(s) = rep.singularities.iter().find(|s| s.is_excluded()) {
        return Err(Error::ExcludedCase { a: s.a, b: format!("{}", s.b) });
    }
    let mut log_e = fd.szego_sum;
    for s in &rep.singularities {
        let (lp, lm) = wiener_hopf_logs(fd, s.angle)?;
        log_e += lp * (s.b - s.a) - lm * (s.b + s.a);
    }
    for (r, sr) in rep.singularities.iter().enumerate() {
        for (q, sq) in rep.singularities.iter().enumerate() {
            if r == q {
                continue;
            }
            let base = 1.0 - C64::from_polar(1.0, sq.angle - sr.angle);
            log_e -= (sr.b + sr.a) * (sq.a - sq.b) * base.ln();
        }
    }
    for s in &rep.singularities {
        let plus = barnes_g(1.0 + s.a + s.b)?;
        let minus = barnes_g(1.0 + s.a - s.b)?;
        let both = barnes_g(C64::new(1.0 + 2.0 * s.a, 0.0))?;
        log_e += plus.log_g + minus.log_g - both.log_g;
    }
    Ok(log_e.exp())
}

/// Sum over the admissible representations of maximal exponent.
pub fn fh_asymptotics(sym: &Symbol) -> Result<AsymptoticResult> {
    fh_asymptotics_with(sym, DEFAULT_MAX_SHIFT)
}

pub fn fh_asymptotics_with(sym: &Symbol, max_shift: i32) -> Result<AsymptoticResult> {
    let reps: Vec<FhRepresentation> =
        sym.enumerate_representations(max_shift)?.into_iter().filter(|r| !r.excluded).collect();
    let Some(best) = reps.first().map(|r| r.exponent.re) else {
        return Err(Error::NoAdmissibleRepresentation);
    };
    let mut terms = Vec::new();
    let mut conjectural = false;
    for rep in reps.into_iter().filter(|r| r.exponent.re > best - DEGENERACY_TOL) {
        let fd = log_coefficients_converged(&rep.f0, DEFAULT_LOG_TOL)?;
        let e = fh_constant_e(&rep, &fd)?;
        conjectural |= rep.singularities.iter().any(|s| s.b.re.abs() >= 0.5 - 1e-12);
        terms.push(AsymptoticTerm { l0: fd.l0(), power: rep.exponent, e, representation: rep });
    }
    Ok(AsymptoticResult { terms, conjectural })
}

/// D(N) ≈ e^{l0 N} N^{Σ λ_r²} E for symbols with jumps only, using the jump
/// parameters as given.
pub fn basor_asymptotics(sym: &Symbol) -> Result<AsymptoticResult> {
    if !sym.singularities().is_empty() {
        return Err(Error::NotJumpForm { reason: "Basor formula takes jump symbols only".into() });
    }
    if sym.constant_value().norm() == 0.0 {
        return Err(Error::VanishingSymbol { reason: "zero constant".into() });
    }
    let fd = log_coefficients_converged(sym, DEFAULT_LOG_TOL)?;
    let mut power = C64::new(0.0, 0.0);
    let mut log_e = fd.szego_sum;
    let mut conjectural = false;
    for j in sym.jumps() {
        power += j.lambda * j.lambda;
        let g = g_tilde(j.lambda);
        if g.norm() == 0.0 {
            return Err(Error::VanishingSymbol { reason: format!("g̃ vanishes at λ = {}", j.lambda) });
        }
        log_e += g.ln();
        conjectural |= j.lambda.norm() >= 0.5 - 1e-12;
    }
    let sf = sym.singular_form()?;
    let representation = FhRepresentation {
        f0: Symbol::constant(sf.constant),
        singularities: sf.singularities,
        exponent: power,
        excluded: false,
    };
    Ok(AsymptoticResult {
        terms: vec![AsymptoticTerm { l0: fd.l0(), power, e: log_e.exp(), representation }],
        conjectural,
    })
}
