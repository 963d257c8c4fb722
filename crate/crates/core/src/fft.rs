//! Discrete Fourier layer.
//!
//! The continuous convention is `f^(xi) = int f(x) e^{-i x xi} dx` with
//! inverse `(1/2pi) int f^(xi) e^{i x xi} dxi`. On the centered grid the
//! analysis transform is `dx`-scaled (and carries the centering phase
//! `(-1)^m`), so that the discrete coefficients approximate the continuous
//! transform and `(1/L) sum |f^_k|^2 = dx sum |f_j|^2` (Parseval).
//!
//! Multipliers with odd symbols vanish at the unpaired Nyquist mode; the
//! cubic group phase is folded to its cosine there so real fields evolve to
//! real fields.

use crate::error::{Error, Result};
use crate::field::{Field, FieldTag};
use crate::grid::Grid1D;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

struct PlanCache {
    forward: HashMap<usize, Arc<dyn Fft<f64>>>,
    inverse: HashMap<usize, Arc<dyn Fft<f64>>>,
}

fn plans() -> &'static Mutex<PlanCache> {
    static PLANS: OnceLock<Mutex<PlanCache>> = OnceLock::new();
    PLANS.get_or_init(|| {
        Mutex::new(PlanCache {
            forward: HashMap::new(),
            inverse: HashMap::new(),
        })
    })
}

fn forward_plan(n: usize) -> Arc<dyn Fft<f64>> {
    let mut cache = plans().lock().unwrap();
    cache
        .forward
        .entry(n)
        .or_insert_with(|| FftPlanner::new().plan_fft_forward(n))
        .clone()
}

fn inverse_plan(n: usize) -> Arc<dyn Fft<f64>> {
    let mut cache = plans().lock().unwrap();
    cache
        .inverse
        .entry(n)
        .or_insert_with(|| FftPlanner::new().plan_fft_inverse(n))
        .clone()
}

/// Spectral coefficients of a field: `f^_k = dx (-1)^{m_k} DFT(f)_k`.
pub fn spectrum(f: &Field) -> Vec<Complex64> {
    let grid = f.grid();
    let n = grid.n_points();
    let mut buf: Vec<Complex64> = f.values().to_vec();
    forward_plan(n).process(&mut buf);
    let dx = grid.dx();
    for (k, z) in buf.iter_mut().enumerate() {
        let sign = if grid.mode_number(k) % 2 == 0 { 1.0 } else { -1.0 };
        *z *= dx * sign;
    }
    buf
}

/// Reassemble a field from spectral coefficients.
pub fn field_from_spectrum(
    grid: &Arc<Grid1D>,
    mut coeffs: Vec<Complex64>,
    tag: FieldTag,
) -> Field {
    let n = grid.n_points();
    assert_eq!(coeffs.len(), n, "coefficient count must match the grid");
    for (k, z) in coeffs.iter_mut().enumerate() {
        let sign = if grid.mode_number(k) % 2 == 0 { 1.0 } else { -1.0 };
        *z *= sign;
    }
    inverse_plan(n).process(&mut coeffs);
    let scale = 1.0 / (n as f64 * grid.dx());
    for z in &mut coeffs {
        *z *= scale;
    }
    Field::new(grid.clone(), coeffs, tag).expect("length matches by construction")
}

/// How a multiplier treats the unpaired Nyquist mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NyquistRule {
    /// Even real symbol: evaluate as everywhere else.
    Keep,
    /// Odd symbol: zero the unpaired mode.
    Zero,
}

/// Apply a Fourier multiplier `m(xi)`.
///
/// `preserves_real` marks symbols with `m(-xi) = conj(m(xi))` and a real
/// Nyquist value, which map real-tagged fields to real-tagged fields.
pub fn apply_multiplier(
    f: &Field,
    m: impl Fn(f64) -> Complex64,
    rule: NyquistRule,
    preserves_real: bool,
) -> Field {
    let grid = f.grid().clone();
    let nyq = grid.nyquist_index();
    let mut coeffs = spectrum(f);
    for (k, z) in coeffs.iter_mut().enumerate() {
        if k == nyq && rule == NyquistRule::Zero {
            *z = Complex64::new(0.0, 0.0);
        } else {
            *z *= m(grid.frequencies()[k]);
        }
    }
    let tag = if preserves_real && f.tag() == FieldTag::Real {
        FieldTag::Real
    } else {
        FieldTag::Complex
    };
    field_from_spectrum(&grid, coeffs, tag)
}

/// Homogeneous derivative `D^s`: multiplier `|xi|^s` (even symbol).
pub fn fractional_derivative(f: &Field, s: f64) -> Result<Field> {
    if s < 0.0 {
        return Err(Error::Parameter(format!(
            "fractional derivative order must be >= 0, got {s}"
        )));
    }
    f.check_finite("fractional_derivative input")?;
    if s == 0.0 {
        return Ok(f.clone());
    }
    Ok(apply_multiplier(
        f,
        |xi| Complex64::new(xi.abs().powf(s), 0.0),
        NyquistRule::Keep,
        true,
    ))
}

/// Bessel potential `J^s`: multiplier `(1 + xi^2)^{s/2}` (even symbol).
pub fn bessel_potential(f: &Field, s: f64) -> Result<Field> {
    f.check_finite("bessel_potential input")?;
    if s == 0.0 {
        return Ok(f.clone());
    }
    Ok(apply_multiplier(
        f,
        |xi| Complex64::new((1.0 + xi * xi).powf(0.5 * s), 0.0),
        NyquistRule::Keep,
        true,
    ))
}

/// Spatial derivative: multiplier `i xi`, zeroed at Nyquist.
pub fn derivative(f: &Field) -> Field {
    apply_multiplier(
        f,
        |xi| Complex64::new(0.0, xi),
        NyquistRule::Zero,
        true,
    )
}

/// Zero-pad spectral coefficients from `n` to `factor * n` modes.
///
/// Mode layout is `(0..n/2-1, -n/2..-1)`; the old Nyquist entry keeps its
/// (negative) frequency on the finer set.
pub fn pad_spectrum(coeffs: &[Complex64], factor: usize) -> Vec<Complex64> {
    let n = coeffs.len();
    let m = n * factor;
    let half = n / 2;
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    out[..half].copy_from_slice(&coeffs[..half]);
    out[m - half..].copy_from_slice(&coeffs[half..]);
    out
}

/// Inverse of [`pad_spectrum`]: keep the lowest `n` of `factor * n` modes.
pub fn truncate_spectrum(coeffs: &[Complex64], n: usize) -> Vec<Complex64> {
    let m = coeffs.len();
    let half = n / 2;
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    out[..half].copy_from_slice(&coeffs[..half]);
    out[half..].copy_from_slice(&coeffs[m - half..]);
    out
}
