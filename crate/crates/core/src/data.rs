//! Explicit focusing initial data: the chirped algebraic datum for the
//! Schrodinger component and the Gaussian-weighted sum of backward Airy
//! evolutions for the KdV component.

use crate::error::{Error, Result};
use crate::field::{Field, FieldTag};
use crate::grid::Grid1D;
use crate::groups::{evolve, GroupKind};
use crate::norms::boundary_contamination;
use num_complex::Complex64;
use std::sync::Arc;

/// Margin fraction used by the datum contamination checks.
pub const DATUM_MARGIN: f64 = 0.05;

/// Chirped algebraic datum `u0(x) = e^{-i alpha (x - x0)^2} / (1+x^2)^{5/4}`.
///
/// The linear flow refocuses the chirp at `(x*, t*) = (x0, 1/(4 alpha))`.
#[derive(Debug, Clone, Copy)]
pub struct SchrodingerDatumParams {
    /// Chirp rate (> 0).
    pub alpha: f64,
    /// Focus location.
    pub x0: f64,
    /// Largest admissible boundary contamination for the sampled datum.
    /// The algebraic tails decay like `|x|^{-5/2}`, so the gate scales with
    /// the box; the default admits the standard production boxes.
    pub contamination_gate: f64,
}

impl SchrodingerDatumParams {
    pub fn new(alpha: f64, x0: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::Parameter(format!(
                "chirp rate must be positive, got {alpha}"
            )));
        }
        Ok(SchrodingerDatumParams {
            alpha,
            x0,
            contamination_gate: 1e-3,
        })
    }

    /// Predicted linear focus time `t* = 1 / (4 alpha)`.
    pub fn focus_time(&self) -> f64 {
        1.0 / (4.0 * self.alpha)
    }
}

pub fn schrodinger_datum(params: &SchrodingerDatumParams, grid: &Arc<Grid1D>) -> Result<Field> {
    let alpha = params.alpha;
    let x0 = params.x0;
    let f = Field::from_complex_fn(grid.clone(), |x| {
        let amp = (1.0 + x * x).powf(-1.25);
        let phase = -alpha * (x - x0) * (x - x0);
        Complex64::from_polar(amp, phase)
    });
    let contamination = boundary_contamination(&f, DATUM_MARGIN)?;
    if contamination >= params.contamination_gate {
        return Err(Error::DomainTooSmall(format!(
            "schrodinger datum contamination {contamination:.3e} >= gate {:.1e}; widen the box",
            params.contamination_gate
        )));
    }
    Ok(f)
}

/// `phi(x) = e^{-2|x|}`, the seed profile for the KdV datum.
pub fn phi(grid: &Arc<Grid1D>) -> Field {
    Field::from_real_fn(grid.clone(), |x| (-2.0 * x.abs()).exp())
}

/// Parameters of the KdV datum `v0 = sum_j lambda_j V(-alpha j) phi` with
/// `lambda_j = c e^{-alpha^2 j^2}`. The linear flow refocuses the kink of
/// `phi` at every `t in alpha * {1, 2, ...}`.
#[derive(Debug, Clone, Copy)]
pub struct KdvDatumParams {
    /// Spacing of the focusing times (> 0).
    pub alpha: f64,
    /// Overall amplitude (> 0, small keeps the nonlinear run contractive).
    pub c: f64,
    /// Series truncation; `None` selects the smallest truncation whose
    /// neglected tail satisfies `sum_{j > j_max} lambda_j ||phi||_2 < 1e-14`.
    pub j_max: Option<usize>,
    /// Per-term contamination gate for the backward evolutions, whose
    /// dispersive tails decay only algebraically.
    pub contamination_gate: f64,
}

/// L2 norm of `phi` on the line: `(int e^{-4|x|})^{1/2} = (1/2)^{1/2}`.
pub const PHI_L2: f64 = std::f64::consts::FRAC_1_SQRT_2;

const TAIL_BOUND: f64 = 1e-14;

impl KdvDatumParams {
    pub fn new(alpha: f64, c: f64) -> Result<Self> {
        if !(alpha > 0.0 && c > 0.0) || !alpha.is_finite() || !c.is_finite() {
            return Err(Error::Parameter(format!(
                "kdv datum needs alpha > 0 and c > 0, got alpha = {alpha}, c = {c}"
            )));
        }
        Ok(KdvDatumParams {
            alpha,
            c,
            j_max: None,
            contamination_gate: 0.2,
        })
    }

    pub fn lambda(&self, j: usize) -> f64 {
        self.c * (-self.alpha * self.alpha * (j * j) as f64).exp()
    }

    /// Neglected-tail bound `sum_{j > j_max} lambda_j ||phi||_2`.
    pub fn tail_bound(&self, j_max: usize) -> f64 {
        let mut acc = 0.0;
        for j in j_max + 1.. {
            let term = self.lambda(j) * PHI_L2;
            acc += term;
            if term < 1e-30 || j > j_max + 1000 {
                break;
            }
        }
        acc
    }

    /// Smallest truncation meeting the tail invariant.
    pub fn auto_j_max(&self) -> Result<usize> {
        for j in 1..=10_000 {
            if self.tail_bound(j) < TAIL_BOUND {
                return Ok(j);
            }
        }
        Err(Error::Truncation(format!(
            "tail bound {TAIL_BOUND:.0e} needs more than 10000 terms (alpha = {}, c = {})",
            self.alpha, self.c
        )))
    }
}

pub fn kdv_datum(params: &KdvDatumParams, grid: &Arc<Grid1D>) -> Result<Field> {
    let j_max = match params.j_max {
        Some(j) => {
            let tail = params.tail_bound(j);
            if tail >= TAIL_BOUND {
                return Err(Error::Truncation(format!(
                    "j_max = {j} leaves tail {tail:.3e} >= {TAIL_BOUND:.0e}; need j_max >= {}",
                    params.auto_j_max()?
                )));
            }
            j
        }
        None => params.auto_j_max()?,
    };
    let seed = phi(grid);
    let mut acc = Field::zeros(grid.clone(), FieldTag::Real);
    let lambda_1 = params.lambda(1);
    for j in 1..=j_max {
        // weights below relative machine scale contribute nothing but
        // would still be contamination-gated; drop them
        if params.lambda(j) < 1e-15 * lambda_1 {
            continue;
        }
        let term = evolve(&seed, -params.alpha * j as f64, GroupKind::Airy)?;
        let contamination = boundary_contamination(&term, DATUM_MARGIN)?;
        if contamination >= params.contamination_gate {
            return Err(Error::DomainTooSmall(format!(
                "backward evolution term j = {j} has contamination {contamination:.3e} >= gate {:.1e}; widen the box",
                params.contamination_gate
            )));
        }
        let lambda = params.lambda(j);
        for (a, t) in acc.values_mut().iter_mut().zip(term.values()) {
            *a += lambda * t;
        }
    }
    Ok(acc)
}
