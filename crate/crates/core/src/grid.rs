//! Uniform periodic grid on the centered box `[-L/2, L/2)` and its discrete
//! frequency set.

use crate::error::{Error, Result};
use std::f64::consts::PI;
use std::sync::Arc;

/// A uniform periodic spatial grid together with its discrete frequencies.
///
/// Points are `x_j = -L/2 + j dx` for `j = 0..n`, `dx = L/n`. Frequencies
/// follow the standard two-sided ordering `(0, 1, ..., n/2-1, -n/2, ..., -1)`
/// scaled by `2 pi / L`; the single unpaired entry is the Nyquist mode
/// `-n/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    n_points: usize,
    length: f64,
    dx: f64,
    frequencies: Vec<f64>,
}

impl Grid1D {
    pub fn new(n_points: usize, length: f64) -> Result<Arc<Grid1D>> {
        if n_points == 0 || n_points % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "n_points must be a positive even integer, got {n_points}"
            )));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "length must be a positive real, got {length}"
            )));
        }
        let dx = length / n_points as f64;
        let scale = 2.0 * PI / length;
        let half = n_points / 2;
        let frequencies = (0..n_points)
            .map(|k| {
                let m = if k < half {
                    k as i64
                } else {
                    k as i64 - n_points as i64
                };
                m as f64 * scale
            })
            .collect();
        Ok(Arc::new(Grid1D {
            n_points,
            length,
            dx,
            frequencies,
        }))
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Frequencies in the two-sided discrete ordering.
    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    /// Signed integer mode number of spectral index `k`.
    pub fn mode_number(&self, k: usize) -> i64 {
        if k < self.n_points / 2 {
            k as i64
        } else {
            k as i64 - self.n_points as i64
        }
    }

    /// Index of the unpaired Nyquist mode.
    pub fn nyquist_index(&self) -> usize {
        self.n_points / 2
    }

    /// Largest paired frequency magnitude, `2 pi / L * (n/2)`.
    pub fn max_frequency(&self) -> f64 {
        PI * self.n_points as f64 / self.length
    }

    /// Grid point `x_j` on the centered box.
    pub fn point(&self, j: usize) -> f64 {
        -0.5 * self.length + j as f64 * self.dx
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(|j| self.point(j))
    }

    /// Grid refined by an integer factor (same box, `factor * n` points).
    pub fn refine(&self, factor: usize) -> Result<Arc<Grid1D>> {
        Grid1D::new(self.n_points * factor, self.length)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frequency_ordering_matches_convention() {
        let g = Grid1D::new(8, 2.0 * PI).unwrap();
        let expect = [0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0];
        for (a, b) in g.frequencies().iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
        }
        assert!((g.dx() - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn scaled_frequencies() {
        let g = Grid1D::new(4, 4.0 * PI).unwrap();
        let expect = [0.0, 0.5, -1.0, -0.5];
        for (a, b) in g.frequencies().iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid1D::new(7, 1.0).is_err());
        assert!(Grid1D::new(0, 1.0).is_err());
        assert!(Grid1D::new(8, 0.0).is_err());
        assert!(Grid1D::new(8, -2.0).is_err());
    }

    #[test]
    fn invariants() {
        let g = Grid1D::new(16, 5.0).unwrap();
        assert!((g.dx() * g.n_points() as f64 - g.length()).abs() < 1e-14);
        assert_eq!(g.frequencies().len(), 16);
        assert_eq!(g.frequencies()[0], 0.0);
        // closed under negation except the Nyquist mode
        for k in 1..16 {
            if k == g.nyquist_index() {
                continue;
            }
            let xi = g.frequencies()[k];
            assert!(g.frequencies().iter().any(|&e| (e + xi).abs() < 1e-13));
        }
    }
}
