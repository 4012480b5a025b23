//! Symbols on the unit circle: smooth factors, jumps and Fisher-Hartwig
//! singularities, plus the representations used by the asymptotic sum.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Two singular angles closer than this are treated as one point.
pub const ANGLE_TOL: f64 = 1e-9;
/// Factors with | |λ| - 1 | below this sit on the unit circle.
pub const UNIT_TOL: f64 = 1e-9;
/// Distance from a singular angle at which evaluation refuses.
const EVAL_TOL: f64 = 1e-12;

pub const DEFAULT_MAX_SHIFT: i32 = 2;

/// Maps an angle into (-π, π].
pub fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

fn same_angle(x: f64, y: f64) -> bool {
    wrap_angle(x - y).abs() < ANGLE_TOL
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// (1 - λ z)^p
    Z,
    /// (1 - λ / z)^p
    InvZ,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Factor {
    pub lambda: C64,
    pub orientation: Orientation,
    pub exponent: f64,
}

impl Factor {
    pub fn new(lambda: C64, orientation: Orientation, exponent: f64) -> Self {
        Self { lambda, orientation, exponent }
    }

    fn base(&self, z: C64) -> C64 {
        match self.orientation {
            Orientation::Z => 1.0 - self.lambda * z,
            Orientation::InvZ => 1.0 - self.lambda / z,
        }
    }

    pub fn eval(&self, z: C64) -> C64 {
        (self.base(z).ln() * self.exponent).exp()
    }

    pub fn on_circle(&self) -> bool {
        (self.lambda.norm() - 1.0).abs() < UNIT_TOL
    }

    /// Angle of the branch point when the factor sits on the circle.
    pub fn circle_angle(&self) -> f64 {
        match self.orientation {
            Orientation::Z => wrap_angle(-self.lambda.arg()),
            Orientation::InvZ => wrap_angle(self.lambda.arg()),
        }
    }

    /// On the circle, (1 - e^{-iθ} z)^p has a = p/2, b = p/2 at θ and
    /// (1 - e^{iθ}/z)^p has a = p/2, b = -p/2.
    fn to_singularity(self) -> FhSingularity {
        let half = 0.5 * self.exponent;
        let b = match self.orientation {
            Orientation::Z => half,
            Orientation::InvZ => -half,
        };
        FhSingularity::new(self.circle_angle(), half, C64::new(b, 0.0))
    }
}

/// A jump of ln f by 2πλ at `angle`, going counter-clockwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump {
    pub angle: f64,
    pub lambda: C64,
}

/// e^{ib(y - π sgn y)} (2 - 2cos y)^a with y = x - angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FhSingularity {
    pub angle: f64,
    pub a: f64,
    pub b: C64,
}

impl FhSingularity {
    pub fn new(angle: f64, a: f64, b: C64) -> Self {
        Self { angle: wrap_angle(angle), a, b }
    }

    pub fn eval(&self, x: f64) -> C64 {
        let y = wrap_angle(x - self.angle);
        let saw = (C64::i() * self.b * (y - PI * y.signum())).exp();
        let modulus = if self.a == 0.0 { 1.0 } else { (2.0 - 2.0 * y.cos()).powf(self.a) };
        saw * modulus
    }

    /// True when a + b or a - b is a negative integer.
    pub fn is_excluded(&self) -> bool {
        if self.b.im.abs() > 1e-12 {
            return false;
        }
        [self.a + self.b.re, self.a - self.b.re]
            .iter()
            .any(|&v| v < -0.5 && (v - v.round()).abs() < 1e-9)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    constant: C64,
    power: i32,
    factors: Vec<Factor>,
    jumps: Vec<Jump>,
    singularities: Vec<FhSingularity>,
}

impl Default for Symbol {
    fn default() -> Self {
        Self::identity()
    }
}

impl Symbol {
    pub fn identity() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    pub fn constant(c: C64) -> Self {
        Self { constant: c, power: 0, factors: Vec::new(), jumps: Vec::new(), singularities: Vec::new() }
    }

    pub fn with_power(mut self, m: i32) -> Self {
        self.power += m;
        self
    }

    pub fn with_factor(mut self, lambda: C64, orientation: Orientation, exponent: f64) -> Self {
        self.push_factor(Factor::new(lambda, orientation, exponent));
        self
    }

    pub fn with_jump(mut self, angle: f64, lambda: C64) -> Self {
        self.push_jump(Jump { angle: wrap_angle(angle), lambda });
        self
    }

    pub fn with_singularity(mut self, angle: f64, a: f64, b: C64) -> Self {
        push_singularity(&mut self.singularities, FhSingularity::new(angle, a, b));
        self
    }

    /// Piecewise symbol with value e^{logs[0]} on (-π, -p), e^{logs[1]} on
    /// (-p, p) and e^{logs[2]} on (p, π). The logs fix the argument.
    pub fn three_interval(p: f64, logs: [C64; 3]) -> Self {
        let two_pi = 2.0 * PI;
        Self::constant(logs[0].exp())
            .with_jump(-p, (logs[1] - logs[0]) / two_pi)
            .with_jump(p, (logs[2] - logs[1]) / two_pi)
    }

    pub fn constant_value(&self) -> C64 {
        self.constant
    }

    pub fn power(&self) -> i32 {
        self.power
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    pub fn singularities(&self) -> &[FhSingularity] {
        &self.singularities
    }

    /// No jumps, no singularities and every factor strictly inside the
    /// canonical region.
    pub fn is_smooth(&self) -> bool {
        self.jumps.is_empty()
            && self.singularities.is_empty()
            && self.factors.iter().all(|f| f.lambda.norm() < 1.0 - UNIT_TOL)
    }

    fn push_factor(&mut self, f: Factor) {
        if let Some(g) = self.factors.iter_mut().find(|g| {
            g.orientation == f.orientation && (g.lambda - f.lambda).norm() <= 1e-14 * g.lambda.norm().max(1.0)
        }) {
            g.exponent += f.exponent;
        } else {
            self.factors.push(f);
        }
        self.factors.retain(|g| g.exponent != 0.0);
    }

    fn push_jump(&mut self, j: Jump) {
        if let Some(k) = self.jumps.iter_mut().find(|k| same_angle(k.angle, j.angle)) {
            k.lambda += j.lambda;
        } else {
            self.jumps.push(j);
        }
    }

    fn singular_angles(&self) -> impl Iterator<Item = f64> + '_ {
        self.jumps
            .iter()
            .map(|j| j.angle)
            .chain(self.singularities.iter().map(|s| s.angle))
            .chain(self.factors.iter().filter(|f| f.on_circle()).map(|f| f.circle_angle()))
    }

    /// ln of the jump part, 2π Σ λ_r [x > x_r] on (-π, π].
    fn jump_log(&self, x: f64) -> C64 {
        self.jumps
            .iter()
            .filter(|j| x > j.angle)
            .map(|j| j.lambda * (2.0 * PI))
            .sum()
    }

    pub fn eval(&self, x: f64) -> Result<C64> {
        let x = wrap_angle(x);
        if let Some(angle) = self.singular_angles().find(|&a| wrap_angle(x - a).abs() < EVAL_TOL) {
            return Err(Error::EvaluationAtSingularity { angle });
        }
        let z = C64::from_polar(1.0, x);
        let mut v = self.constant * C64::from_polar(1.0, self.power as f64 * x);
        for f in &self.factors {
            v *= f.eval(z);
        }
        v *= self.jump_log(x).exp();
        for s in &self.singularities {
            v *= s.eval(x);
        }
        Ok(v)
    }

    pub fn multiply(&self, other: &Symbol) -> Symbol {
        let mut out = self.clone();
        out.constant *= other.constant;
        out.power += other.power;
        for f in &other.factors {
            out.push_factor(*f);
        }
        for j in &other.jumps {
            out.push_jump(*j);
        }
        for s in &other.singularities {
            push_singularity(&mut out.singularities, *s);
        }
        out
    }

    /// Returns g with g(x) = f(ρ e^{ix}). The symbol must be analytic in
    /// the closed annulus between radii 1 and ρ except on its boundary.
    pub fn contour_rescale(&self, rho: f64) -> Result<Symbol> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::InvalidInput(format!("rescale radius must be positive, got {rho}")));
        }
        if rho == 1.0 {
            return Ok(self.clone());
        }
        if !self.jumps.is_empty() || !self.singularities.is_empty() {
            return Err(Error::AnnulusViolation { rho, modulus: 1.0 });
        }
        let mut out = self.clone();
        out.constant *= rho.powi(self.power);
        for f in &mut out.factors {
            let modulus = f.lambda.norm();
            let scaled = match f.orientation {
                Orientation::Z => f.lambda * rho,
                Orientation::InvZ => f.lambda / rho,
            };
            // singular radius is 1/|λ| for Z and |λ| for InvZ; it may lie on
            // either boundary circle but not strictly between them
            if modulus > 1.0 + UNIT_TOL || scaled.norm() > 1.0 + UNIT_TOL {
                let radius = match f.orientation {
                    Orientation::Z => 1.0 / modulus,
                    Orientation::InvZ => modulus,
                };
                return Err(Error::AnnulusViolation { rho, modulus: radius });
            }
            f.lambda = scaled;
        }
        Ok(out)
    }

    /// Net winding of arg f: the explicit power plus the jump total in
    /// units of 2πi. Factors inside the canonical region do not wind.
    pub fn winding_number(&self) -> i32 {
        let total: C64 = self.jumps.iter().map(|j| j.lambda).sum();
        self.power + total.im.round() as i32
    }

    /// Rewrites the symbol as constant · z^w · Π smooth factors ·
    /// Π FH singularities, moving jumps and on-circle factors into the
    /// singularity list.
    pub fn singular_form(&self) -> Result<SingularForm> {
        for f in &self.factors {
            if f.lambda.norm() > 1.0 + UNIT_TOL {
                return Err(Error::NonCanonicalFactor { modulus: f.lambda.norm() });
            }
        }
        let total: C64 = self.jumps.iter().map(|j| j.lambda).sum();
        if total.re.abs() > 1e-9 || (total.im - total.im.round()).abs() > 1e-9 {
            return Err(Error::NotPeriodic { total: format!("{total}") });
        }
        let k_jump = total.im.round() as i32;

        // exp(jump log) = Π saw(iλ_r) · z^{k} · e^{-Σ λ_r x_r} · (-1)^k
        let mut constant = self.constant;
        let shift: C64 = self.jumps.iter().map(|j| j.lambda * j.angle).sum();
        constant *= (-shift).exp() * sign_power(k_jump);

        let mut singularities = self.singularities.clone();
        for j in &self.jumps {
            push_singularity(&mut singularities, FhSingularity::new(j.angle, 0.0, C64::i() * j.lambda));
        }
        let mut smooth = Vec::new();
        for f in &self.factors {
            if f.on_circle() {
                push_singularity(&mut singularities, f.to_singularity());
            } else {
                smooth.push(*f);
            }
        }
        singularities.retain(|s| s.a.abs() > 1e-15 || s.b.norm() > 1e-15);
        singularities.sort_by(|p, q| p.angle.total_cmp(&q.angle));
        Ok(SingularForm { constant, winding: self.power + k_jump, smooth, singularities })
    }

    /// All Fisher-Hartwig representations reachable by integer shifts of
    /// the b_r, bounded by `max_shift` around the normalized strip
    /// Re b in [-1/2, 1/2). Sorted by descending Re(exponent).
    pub fn enumerate_representations(&self, max_shift: i32) -> Result<Vec<FhRepresentation>> {
        let sf = self.singular_form()?;
        let smooth_part = |c: C64| Symbol {
            constant: c,
            power: 0,
            factors: sf.smooth.clone(),
            jumps: Vec::new(),
            singularities: Vec::new(),
        };
        if sf.singularities.is_empty() {
            if sf.winding != 0 {
                return Err(Error::NotJumpForm {
                    reason: format!("smooth part has winding {}", sf.winding),
                });
            }
            return Ok(vec![FhRepresentation {
                f0: smooth_part(sf.constant),
                singularities: Vec::new(),
                exponent: C64::new(0.0, 0.0),
                excluded: false,
            }]);
        }

        let base_shift: Vec<i32> = sf
            .singularities
            .iter()
            .map(|s| (s.b.re + 0.5).floor() as i32)
            .collect();
        let target = sf.winding + base_shift.iter().sum::<i32>();
        let mut reps = Vec::new();
        let mut shifts = vec![0i32; sf.singularities.len()];
        let mut visit = |s: &[i32]| {
            let mut phase = 0.0;
            let mut singularities = Vec::with_capacity(s.len());
            let mut exponent = C64::new(0.0, 0.0);
            for ((orig, &k), &sr) in sf.singularities.iter().zip(&base_shift).zip(s) {
                let n = sr - k;
                let sing = FhSingularity { angle: orig.angle, a: orig.a, b: orig.b + n as f64 };
                phase += n as f64 * orig.angle;
                exponent += sing.a * sing.a - sing.b * sing.b;
                singularities.push(sing);
            }
            let constant = sf.constant * C64::from_polar(1.0, phase) * sign_power(sf.winding);
            let excluded = singularities.iter().any(|s| s.is_excluded());
            reps.push(FhRepresentation { f0: smooth_part(constant), singularities, exponent, excluded });
        };
        for_each_shift(&mut shifts, 0, target, max_shift, &mut visit);
        if reps.is_empty() {
            return Err(Error::NoAdmissibleRepresentation);
        }
        reps.sort_by(|p, q| q.exponent.re.total_cmp(&p.exponent.re));
        Ok(reps)
    }
}

fn push_singularity(list: &mut Vec<FhSingularity>, s: FhSingularity) {
    if let Some(t) = list.iter_mut().find(|t| same_angle(t.angle, s.angle)) {
        t.a += s.a;
        t.b += s.b;
    } else {
        list.push(s);
    }
}

fn sign_power(k: i32) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Visits every shift vector with entries in [-m, m] summing to `target`,
/// in lexicographic order.
fn for_each_shift<F: FnMut(&[i32])>(s: &mut Vec<i32>, pos: usize, target: i32, m: i32, visit: &mut F) {
    let remaining = (s.len() - pos) as i32;
    if pos == s.len() {
        if target == 0 {
            visit(s);
        }
        return;
    }
    for v in -m..=m {
        let rest = target - v;
        if rest.abs() <= m * (remaining - 1) {
            s[pos] = v;
            for_each_shift(s, pos + 1, rest, m, visit);
        }
    }
}

/// Output of [`Symbol::singular_form`].
#[derive(Debug, Clone, PartialEq)]
pub struct SingularForm {
    pub constant: C64,
    pub winding: i32,
    pub smooth: Vec<Factor>,
    pub singularities: Vec<FhSingularity>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FhRepresentation {
    /// Smooth zero-winding part: constant and off-circle factors only.
    pub f0: Symbol,
    pub singularities: Vec<FhSingularity>,
    /// Σ_r (a_r² - b_r²).
    pub exponent: C64,
    pub excluded: bool,
}

impl FhRepresentation {
    pub fn reconstruct(&self, x: f64) -> Result<C64> {
        let mut v = self.f0.eval(x)?;
        for s in &self.singularities {
            if wrap_angle(x - s.angle).abs() < EVAL_TOL {
                return Err(Error::EvaluationAtSingularity { angle: s.angle });
            }
            v *= s.eval(x);
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn i(im: f64) -> C64 {
        C64::new(0.0, im)
    }

    #[test]
    fn identity_evaluates_to_one() {
        for x in [-3.0, 0.0, 1.0, PI] {
            assert_eq!(Symbol::identity().eval(x).unwrap(), c(1.0));
        }
    }

    #[test]
    fn three_interval_middle_value() {
        let s = Symbol::three_interval(PI / 2.0, [c(0.0), i(PI), c(0.0)]);
        assert!((s.eval(0.0).unwrap() + 1.0).norm() < 1e-15);
        assert!((s.eval(2.0).unwrap() - 1.0).norm() < 1e-15);
        assert!((s.eval(-2.0).unwrap() - 1.0).norm() < 1e-15);
        assert!(matches!(s.eval(PI / 2.0), Err(Error::EvaluationAtSingularity { .. })));
    }

    #[test]
    fn square_root_factor() {
        let s = Symbol::identity().with_factor(c(0.5), Orientation::Z, 0.5);
        assert!((s.eval(0.0).unwrap() - 0.5f64.sqrt()).norm() < 1e-15);
    }

    #[test]
    fn exponents_add_on_multiply() {
        let s = Symbol::identity().with_factor(c(0.3), Orientation::Z, 0.5);
        let p = s.multiply(&s);
        assert_eq!(p.factors().len(), 1);
        assert_eq!(p.factors()[0].exponent, 1.0);
        assert_eq!(s.multiply(&Symbol::identity()), s);
    }

    #[test]
    fn rescale_moves_factor_to_circle_and_back() {
        let s = Symbol::constant(c(2.0))
            .with_power(1)
            .with_factor(c(0.5), Orientation::Z, 0.5)
            .with_factor(c(0.25), Orientation::InvZ, -0.5);
        let g = s.contour_rescale(2.0).unwrap();
        assert!(g.factors()[0].on_circle());
        assert!((g.constant_value() - 4.0).norm() < 1e-15);
        assert!(matches!(s.contour_rescale(2.5), Err(Error::AnnulusViolation { .. })));
        assert!(matches!(s.contour_rescale(0.2), Err(Error::AnnulusViolation { .. })));
        let back = g.contour_rescale(0.5).unwrap();
        for (p, q) in back.factors().iter().zip(s.factors()) {
            assert!((p.lambda - q.lambda).norm() < 1e-12);
        }
        assert!((back.constant_value() - s.constant_value()).norm() < 1e-12);
    }

    #[test]
    fn winding_counts_power_and_jumps() {
        assert_eq!(Symbol::identity().winding_number(), 0);
        let f3 = Symbol::three_interval(1.0, [i(-PI), c(0.0), i(PI)]).with_power(-1);
        assert_eq!(f3.winding_number(), 0);
        assert_eq!(Symbol::identity().with_power(2).winding_number(), 2);
    }

    #[test]
    fn smooth_symbol_has_single_representation() {
        let s = Symbol::constant(c(3.0)).with_factor(c(0.2), Orientation::InvZ, 1.5);
        let reps = s.enumerate_representations(DEFAULT_MAX_SHIFT).unwrap();
        assert_eq!(reps.len(), 1);
        assert!(reps[0].singularities.is_empty());
        let bad = s.with_power(1);
        assert!(matches!(bad.enumerate_representations(2), Err(Error::NotJumpForm { .. })));
    }

    #[test]
    fn half_filling_pi_symbol_has_two_leading_representations() {
        let s = Symbol::three_interval(PI / 2.0, [c(0.0), i(PI), c(0.0)]);
        let reps = s.enumerate_representations(DEFAULT_MAX_SHIFT).unwrap();
        let top: Vec<_> = reps.iter().filter(|r| (r.exponent.re + 0.5).abs() < 1e-12).collect();
        assert_eq!(top.len(), 2);
        let mut found = Vec::new();
        for r in &top {
            let b: Vec<f64> = r.singularities.iter().map(|s| s.b.re).collect();
            found.push((b[0], b[1], r.f0.constant_value()));
        }
        // singularity at -π/2 first; f0 = e^{±iπ/2}
        found.sort_by(|p, q| p.0.total_cmp(&q.0));
        assert_eq!((found[0].0, found[0].1), (-0.5, 0.5));
        assert!((found[0].2 - i(1.0)).norm() < 1e-12);
        assert_eq!((found[1].0, found[1].1), (0.5, -0.5));
        assert!((found[1].2 - i(-1.0)).norm() < 1e-12);
    }

    #[test]
    fn quarter_phase_symbol_has_unique_leading_representation() {
        let alpha = PI / 2.0;
        let s = Symbol::three_interval(PI / 2.0, [c(0.0), i(alpha), c(0.0)]);
        let reps = s.enumerate_representations(DEFAULT_MAX_SHIFT).unwrap();
        let lead = reps[0].exponent.re;
        assert!((lead + alpha * alpha / (2.0 * PI * PI)).abs() < 1e-12);
        assert!(reps[1].exponent.re < lead - 1e-6);
        let b: Vec<f64> = reps[0].singularities.iter().map(|s| s.b.re).collect();
        assert!((b[0] + alpha / (2.0 * PI)).abs() < 1e-12 && (b[1] - alpha / (2.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn jump_and_fh_parameters_square_to_opposites() {
        let s = Symbol::three_interval(0.7, [c(0.0), i(1.1), c(0.0)]);
        let sf = s.singular_form().unwrap();
        for (j, f) in s.jumps().iter().zip(&sf.singularities) {
            assert!((j.lambda * j.lambda + f.b * f.b).norm() < 1e-15);
        }
    }

    #[test]
    fn excluded_cases() {
        assert!(!FhSingularity::new(0.0, 0.25, c(-0.75)).is_excluded());
        assert!(!FhSingularity::new(0.0, -0.25, c(1.25)).is_excluded());
        assert!(FhSingularity::new(0.0, 0.25, c(1.25)).is_excluded());
        assert!(FhSingularity::new(0.0, -0.25, c(-0.75)).is_excluded());
    }

    #[test]
    fn non_periodic_jumps_are_rejected() {
        let s = Symbol::identity().with_jump(0.3, i(0.2));
        assert!(matches!(s.singular_form(), Err(Error::NotPeriodic { .. })));
    }

    fn sample_symbol() -> impl Strategy<Value = Symbol> {
        let factor = (0.0f64..0.9, -PI..PI, any::<bool>(), -1.5f64..1.5);
        let sing = (-PI..PI, -0.4f64..1.0, -1.2f64..1.2);
        (
            prop::collection::vec(factor, 0..3),
            prop::collection::vec(sing, 0..3),
            -0.5f64..0.5,
            -PI..PI,
            -2i32..3,
        )
            .prop_map(|(factors, sings, alpha, p, power)| {
                let mut s = Symbol::constant(C64::new(1.3, -0.4)).with_power(power);
                for (r, t, o, e) in factors {
                    let orient = if o { Orientation::Z } else { Orientation::InvZ };
                    s = s.with_factor(C64::from_polar(r, t), orient, e);
                }
                for (x, a, b) in sings {
                    s = s.with_singularity(x, a, C64::new(b, 0.0));
                }
                if alpha != 0.0 {
                    let p = p.abs().max(0.1);
                    s = s.multiply(&Symbol::three_interval(p, [c(0.0), i(2.0 * PI * alpha), c(0.0)]));
                }
                s
            })
    }

    proptest! {
        #[test]
        fn representations_reconstruct_symbol(s in sample_symbol(), seed in 0u64..1000) {
            let reps = match s.enumerate_representations(DEFAULT_MAX_SHIFT) {
                Ok(r) => r,
                Err(Error::NotJumpForm { .. }) | Err(Error::NoAdmissibleRepresentation) => return Ok(()),
                Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
            };
            for rep in reps.iter().take(4) {
                for j in 0..64 {
                    let x = -PI + 2.0 * PI * ((j as f64 + 0.37 + seed as f64 * 1e-3) / 64.0);
                    let (Ok(v), Ok(w)) = (s.eval(x), rep.reconstruct(x)) else { continue };
                    prop_assert!((v - w).norm() < 1e-10 * v.norm().max(1.0), "x = {x}: {v} vs {w}");
                }
            }
        }

        #[test]
        fn multiply_commutes_and_associates(a in sample_symbol(), b in sample_symbol(), c3 in sample_symbol(), x in -PI..PI) {
            let ab = a.multiply(&b);
            let ba = b.multiply(&a);
            let abc = ab.multiply(&c3);
            let a_bc = a.multiply(&b.multiply(&c3));
            if let (Ok(p), Ok(q), Ok(r), Ok(t)) = (ab.eval(x), ba.eval(x), abc.eval(x), a_bc.eval(x)) {
                prop_assert!((p - q).norm() < 1e-12 * p.norm().max(1.0));
                prop_assert!((r - t).norm() < 1e-12 * r.norm().max(1.0));
            }
        }

        #[test]
        fn rescale_round_trip(r1 in 0.0f64..0.8, r2 in 0.0f64..0.8, rho in 0.85f64..1.2) {
            let s = Symbol::constant(c(0.7))
                .with_power(1)
                .with_factor(c(r1), Orientation::Z, 0.5)
                .with_factor(C64::new(0.0, r2), Orientation::InvZ, -0.5);
            let back = s.contour_rescale(rho).unwrap().contour_rescale(1.0 / rho).unwrap();
            for (p, q) in back.factors().iter().zip(s.factors()) {
                prop_assert!((p.lambda - q.lambda).norm() < 1e-12);
            }
            prop_assert!((back.constant_value() - s.constant_value()).norm() < 1e-12);
        }
    }
}
