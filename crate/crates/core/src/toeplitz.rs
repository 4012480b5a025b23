//! Finite Toeplitz determinants by LU with partial pivoting, carried as
//! log-modulus and phase.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fourier::{symbol_coefficients, ToeplitzCoefficients};
use crate::symbol::Symbol;

mod dd;

pub use dd::{ComplexDd, Dd};

/// Pivots below this magnitude mark a structurally zero determinant.
pub const PIVOT_FLOOR: f64 = 1e-300;

/// Below this |D| the correlator paths switch to extended precision.
pub const EXTENDED_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    Double,
    Extended,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzInstance {
    coefficients: ToeplitzCoefficients,
    n: usize,
    offset: i64,
}

impl ToeplitzInstance {
    /// M_{ij} = c_{i-j+offset} for 0 ≤ i, j < n.
    pub fn new(coefficients: ToeplitzCoefficients, n: usize, offset: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("matrix dimension must be at least 1".into()));
        }
        let reach = n as i64 - 1 + offset.abs();
        if !coefficients.in_range(reach) || !coefficients.in_range(-reach) {
            return Err(Error::InvalidInput(format!(
                "need coefficients up to |k| = {reach}, have {}",
                coefficients.n_max()
            )));
        }
        Ok(Self { coefficients, n, offset })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn coefficients(&self) -> &ToeplitzCoefficients {
        &self.coefficients
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.coefficients.get(i as i64 - j as i64 + self.offset)
    }

    pub fn dense(&self) -> Vec<Vec<C64>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.entry(i, j)).collect()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDet {
    pub log_modulus: f64,
    /// In (-π, π].
    pub phase: f64,
    pub sign_exact_zero: bool,
}

impl LogDet {
    fn zero() -> Self {
        Self { log_modulus: f64::NEG_INFINITY, phase: 0.0, sign_exact_zero: true }
    }

    pub fn value(&self) -> C64 {
        if self.sign_exact_zero {
            C64::new(0.0, 0.0)
        } else {
            C64::from_polar(self.log_modulus.exp(), self.phase)
        }
    }
}

fn wrap_phase(p: f64) -> f64 {
    let y = p.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Row index of the largest |a_ik| for i ≥ k; the lowest index wins ties.
fn pivot_row<T, F: Fn(&T) -> f64>(col: impl Iterator<Item = T>, norm: F) -> (usize, f64) {
    let mut best = (0, -1.0);
    for (i, v) in col.enumerate() {
        let m = norm(&v);
        if m > best.1 {
            best = (i, m);
        }
    }
    best
}

pub fn log_det(inst: &ToeplitzInstance) -> Result<LogDet> {
    let n = inst.n;
    let mut a = inst.dense();
    let mut log_modulus = 0.0;
    let mut phase = 0.0;
    for k in 0..n {
        let (off, mag) = pivot_row((k..n).map(|i| a[i][k]), |v| v.norm());
        let p = k + off;
        if mag < PIVOT_FLOOR {
            return Ok(LogDet::zero());
        }
        if p != k {
            a.swap(p, k);
            phase += PI;
        }
        let pivot = a[k][k];
        log_modulus += mag.ln();
        phase += pivot.arg();
        let inv = pivot.inv();
        let (top, rest) = a.split_at_mut(k + 1);
        let row_k = &top[k];
        for row in rest.iter_mut() {
            let factor = row[k] * inv;
            if factor == C64::new(0.0, 0.0) {
                continue;
            }
            for j in k + 1..n {
                row[j] -= factor * row_k[j];
            }
        }
    }
    Ok(LogDet { log_modulus, phase: wrap_phase(phase), sign_exact_zero: false })
}

/// Same contract as [`log_det`] with elimination carried in double-double
/// complex arithmetic.
pub fn high_precision_log_det(inst: &ToeplitzInstance) -> Result<LogDet> {
    let n = inst.n;
    let mut a: Vec<Vec<ComplexDd>> = inst
        .dense()
        .into_iter()
        .map(|row| row.into_iter().map(ComplexDd::from).collect())
        .collect();
    let mut log_modulus = 0.0;
    let mut phase = 0.0;
    for k in 0..n {
        let (off, mag) = pivot_row((k..n).map(|i| a[i][k]), |v| v.norm_f64());
        let p = k + off;
        if mag < PIVOT_FLOOR {
            return Ok(LogDet::zero());
        }
        if p != k {
            a.swap(p, k);
            phase += PI;
        }
        let pivot = a[k][k];
        log_modulus += pivot.ln_norm();
        phase += pivot.to_c64().arg();
        let inv = pivot.inv();
        let (top, rest) = a.split_at_mut(k + 1);
        let row_k = &top[k];
        for row in rest.iter_mut() {
            let factor = row[k] * inv;
            for j in k + 1..n {
                row[j] = row[j] - factor * row_k[j];
            }
        }
    }
    Ok(LogDet { log_modulus, phase: wrap_phase(phase), sign_exact_zero: false })
}

pub fn log_det_with(inst: &ToeplitzInstance, precision: Precision) -> Result<LogDet> {
    match precision {
        Precision::Double => log_det(inst),
        Precision::Extended => high_precision_log_det(inst),
    }
}

/// Double precision first, extended when |D| falls below
/// [`EXTENDED_THRESHOLD`].
pub fn log_det_auto(inst: &ToeplitzInstance) -> Result<LogDet> {
    let d = log_det(inst)?;
    if !d.sign_exact_zero && d.log_modulus < EXTENDED_THRESHOLD.ln() {
        high_precision_log_det(inst)
    } else {
        Ok(d)
    }
}

/// Log-determinants of the N×N sections for every N in `ns`, sharing one
/// coefficient computation.
pub fn det_sweep(
    sym: &Symbol,
    offset: i64,
    ns: &[usize],
    quad_points: usize,
    precision: Precision,
) -> Result<Vec<(usize, LogDet)>> {
    let Some(&n_top) = ns.iter().max() else {
        return Ok(Vec::new());
    };
    let reach = n_top.saturating_sub(1) + offset.unsigned_abs() as usize;
    let coefficients = symbol_coefficients(sym, reach, quad_points)?;
    ns.iter()
        .map(|&n| {
            let inst = ToeplitzInstance::new(coefficients.clone(), n, offset)?;
            Ok((n, log_det_with(&inst, precision)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cofactor(m: &[Vec<C64>]) -> C64 {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        let mut total = C64::new(0.0, 0.0);
        for j in 0..n {
            let minor: Vec<Vec<C64>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect()).collect();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            total += m[0][j] * cofactor(&minor) * sign;
        }
        total
    }

    fn coeffs(v: &[(f64, f64)]) -> ToeplitzCoefficients {
        ToeplitzCoefficients::from_vec(v.iter().map(|&(r, i)| C64::new(r, i)).collect()).unwrap()
    }

    #[test]
    fn identity_determinants() {
        let sweep = det_sweep(&Symbol::identity(), 0, &(1..=8).collect::<Vec<_>>(), 1024, Precision::Double).unwrap();
        for (_, d) in sweep {
            assert!((d.value() - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn one_by_one_uses_offset() {
        let c = coeffs(&[(1.0, 0.0), (2.0, 0.0), (3.0, 1.0)]);
        let d = log_det(&ToeplitzInstance::new(c, 1, 1).unwrap()).unwrap();
        assert!((d.value() - C64::new(3.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn two_by_two() {
        let c = coeffs(&[(0.3, -0.2), (1.1, 0.4), (-0.7, 0.5)]);
        let (cm, c0, cp) = (c.get(-1), c.get(0), c.get(1));
        let inst = ToeplitzInstance::new(c, 2, 0).unwrap();
        let expected = c0 * c0 - cp * cm;
        assert!((log_det(&inst).unwrap().value() - expected).norm() < 1e-14);
        assert!((high_precision_log_det(&inst).unwrap().value() - expected).norm() < 1e-14);
    }

    #[test]
    fn structural_zero_is_flagged() {
        let c = coeffs(&[(1.0, 0.0), (1.0, 0.0), (1.0, 0.0)]);
        let d = log_det(&ToeplitzInstance::new(c, 2, 0).unwrap()).unwrap();
        assert!(d.sign_exact_zero);
        assert_eq!(d.value(), C64::new(0.0, 0.0));
    }

    #[test]
    fn range_is_checked() {
        let c = coeffs(&[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0)]);
        assert!(ToeplitzInstance::new(c.clone(), 3, 0).is_err());
        assert!(ToeplitzInstance::new(c, 1, 2).is_err());
    }

    fn random_coeffs(n: usize) -> impl Strategy<Value = ToeplitzCoefficients> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2 * n - 1).prop_map(|v| coeffs(&v))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn lu_matches_cofactor(n in 1usize..=6, c in random_coeffs(6)) {
            let inst = ToeplitzInstance::new(c, n, 0).unwrap();
            let exact = cofactor(&inst.dense());
            let d = log_det(&inst).unwrap().value();
            prop_assert!((d - exact).norm() <= 1e-12 * exact.norm().max(1e-3));
            let e = high_precision_log_det(&inst).unwrap().value();
            prop_assert!((e - exact).norm() <= 1e-12 * exact.norm().max(1e-3));
        }

        #[test]
        fn transpose_invariance(n in 1usize..=12, c in random_coeffs(12)) {
            let a = log_det(&ToeplitzInstance::new(c.clone(), n, 0).unwrap()).unwrap().value();
            let b = log_det(&ToeplitzInstance::new(c.transpose(), n, 0).unwrap()).unwrap().value();
            prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-300));
        }

        #[test]
        fn hermitian_symbols_give_real_determinants(n in 1usize..=12, c in random_coeffs(12)) {
            let h = ToeplitzCoefficients::from_fn(11, |k| {
                if k > 0 { c.get(k) } else if k < 0 { c.get(-k).conj() } else { C64::new(c.get(0).re + 3.0, 0.0) }
            });
            let d = log_det(&ToeplitzInstance::new(h, n, 0).unwrap()).unwrap();
            let v = d.value();
            prop_assert!(v.im.abs() <= 1e-10 * d.log_modulus.exp());
        }

        #[test]
        fn extended_agrees_with_double(n in 1usize..=20, c in random_coeffs(20)) {
            let h = ToeplitzCoefficients::from_fn(19, |k| if k == 0 { c.get(0) + 4.0 } else { c.get(k) * 0.5f64.powi(k.abs() as i32) });
            let inst = ToeplitzInstance::new(h, n, 0).unwrap();
            let a = log_det(&inst).unwrap();
            let b = high_precision_log_det(&inst).unwrap();
            prop_assert!((a.value() - b.value()).norm() <= 1e-12 * a.value().norm());
        }
    }
}
