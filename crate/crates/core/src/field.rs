//! Grid-sampled fields and time-indexed stacks of them.

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use num_complex::Complex64;
use std::sync::Arc;

/// Tolerance factor for the realness invariant: a real-tagged field keeps
/// `max |Im| <= REAL_TOL * max |Re|` through every realness-preserving
/// operation.
pub const REAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldTag {
    Complex,
    Real,
}

/// A complex- or real-valued function sampled on a [`Grid1D`].
///
/// Real fields are stored as complex samples whose imaginary parts stay
/// below [`REAL_TOL`] relative to the real peak; the tag records the intent.
#[derive(Debug, Clone)]
pub struct Field {
    grid: Arc<Grid1D>,
    values: Vec<Complex64>,
    tag: FieldTag,
}

impl Field {
    pub fn new(grid: Arc<Grid1D>, values: Vec<Complex64>, tag: FieldTag) -> Result<Field> {
        if values.len() != grid.n_points() {
            return Err(Error::Parameter(format!(
                "field length {} does not match grid size {}",
                values.len(),
                grid.n_points()
            )));
        }
        Ok(Field { grid, values, tag })
    }

    pub fn zeros(grid: Arc<Grid1D>, tag: FieldTag) -> Field {
        let n = grid.n_points();
        Field {
            grid,
            values: vec![Complex64::new(0.0, 0.0); n],
            tag,
        }
    }

    /// Sample a real-valued function of x.
    pub fn from_real_fn(grid: Arc<Grid1D>, f: impl Fn(f64) -> f64) -> Field {
        let values = grid
            .points()
            .map(|x| Complex64::new(f(x), 0.0))
            .collect();
        Field {
            grid,
            values,
            tag: FieldTag::Real,
        }
    }

    /// Sample a complex-valued function of x.
    pub fn from_complex_fn(grid: Arc<Grid1D>, f: impl Fn(f64) -> Complex64) -> Field {
        let values = grid.points().map(f).collect();
        Field {
            grid,
            values,
            tag: FieldTag::Complex,
        }
    }

    pub fn grid(&self) -> &Arc<Grid1D> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn tag(&self) -> FieldTag {
        self.tag
    }

    pub fn set_tag(&mut self, tag: FieldTag) {
        self.tag = tag;
    }

    pub fn is_real(&self) -> bool {
        self.tag == FieldTag::Real
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.values
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn check_finite(&self, what: &str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NanField(what.to_string()))
        }
    }

    /// Verifies the realness invariant for real-tagged fields.
    pub fn check_real_invariant(&self) -> Result<()> {
        if self.tag == FieldTag::Complex {
            return Ok(());
        }
        let max_re = self.values.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
        let max_im = self.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        if max_im <= REAL_TOL * max_re.max(f64::MIN_POSITIVE) {
            Ok(())
        } else {
            Err(Error::Internal(format!(
                "realness violated: max|Im| = {max_im:.3e}, max|Re| = {max_re:.3e}"
            )))
        }
    }

    pub fn scale(&mut self, a: Complex64) {
        for z in &mut self.values {
            *z *= a;
        }
        if self.tag == FieldTag::Real && a.im != 0.0 {
            self.tag = FieldTag::Complex;
        }
    }

    pub fn scaled(&self, a: Complex64) -> Field {
        let mut out = self.clone();
        out.scale(a);
        out
    }

    /// Pointwise difference on a shared grid.
    pub fn sub(&self, other: &Field) -> Result<Field> {
        if !Arc::ptr_eq(&self.grid, &other.grid) && self.grid != other.grid {
            return Err(Error::Parameter("fields live on different grids".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        let tag = if self.tag == FieldTag::Real && other.tag == FieldTag::Real {
            FieldTag::Real
        } else {
            FieldTag::Complex
        };
        Ok(Field {
            grid: self.grid.clone(),
            values,
            tag,
        })
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        let mut out = self.sub(&other.scaled(Complex64::new(-1.0, 0.0)))?;
        if !(self.tag == FieldTag::Real && other.tag == FieldTag::Real) {
            out.tag = FieldTag::Complex;
        }
        Ok(out)
    }

    /// Multiply pointwise by the centered-box weight `|x|^r`.
    pub fn weighted_abs(&self, r: f64) -> Field {
        let mut out = self.clone();
        for (j, z) in out.values.iter_mut().enumerate() {
            let x = self.grid.point(j);
            *z *= x.abs().powf(r);
        }
        out
    }

    /// Multiply pointwise by the bracket weight `(1 + x^2)^{r/2}`.
    pub fn weighted_bracket(&self, r: f64) -> Field {
        let mut out = self.clone();
        for (j, z) in out.values.iter_mut().enumerate() {
            let x = self.grid.point(j);
            *z *= (1.0 + x * x).powf(0.5 * r);
        }
        out
    }
}

/// A function of space and time held as one [`Field`] per stored time.
#[derive(Debug, Clone)]
pub struct SpaceTimeField {
    grid: Arc<Grid1D>,
    times: Vec<f64>,
    slices: Vec<Field>,
}

impl SpaceTimeField {
    pub fn new(times: Vec<f64>, slices: Vec<Field>) -> Result<SpaceTimeField> {
        if times.is_empty() || slices.len() != times.len() {
            return Err(Error::Parameter(
                "space-time field needs one slice per time, at least one".into(),
            ));
        }
        if !times.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::Parameter(
                "snapshot times must be strictly increasing".into(),
            ));
        }
        let grid = slices[0].grid().clone();
        for s in &slices {
            if *s.grid() != grid {
                return Err(Error::Parameter("slices live on different grids".into()));
            }
        }
        Ok(SpaceTimeField {
            grid,
            times,
            slices,
        })
    }

    pub fn grid(&self) -> &Arc<Grid1D> {
        &self.grid
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn slices(&self) -> &[Field] {
        &self.slices
    }

    pub fn slice(&self, i: usize) -> &Field {
        &self.slices[i]
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Index of the stored time nearest to `t`.
    pub fn nearest_index(&self, t: f64) -> usize {
        let mut best = 0;
        let mut dist = f64::INFINITY;
        for (i, &s) in self.times.iter().enumerate() {
            let d = (s - t).abs();
            if d < dist {
                dist = d;
                best = i;
            }
        }
        best
    }

    /// Composite-trapezoid weights on the stored times.
    pub fn time_weights(&self) -> Vec<f64> {
        trapezoid_weights(&self.times)
    }
}

/// Composite-trapezoid quadrature weights for a sorted node set.
pub fn trapezoid_weights(times: &[f64]) -> Vec<f64> {
    let n = times.len();
    if n == 1 {
        return vec![1.0];
    }
    let mut w = vec![0.0; n];
    for i in 0..n - 1 {
        let h = 0.5 * (times[i + 1] - times[i]);
        w[i] += h;
        w[i + 1] += h;
    }
    w
}
