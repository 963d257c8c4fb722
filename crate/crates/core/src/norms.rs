//! Norm evaluation: Sobolev and homogeneous norms through the spectrum,
//! polynomial-weight norms on the grid, and mixed space-time norms with
//! composite-trapezoid time quadrature.

use crate::error::{Error, Result};
use crate::fft::spectrum;
use crate::field::{Field, SpaceTimeField};

/// Order of the two exponents in a mixed norm, named as written: `XThenT`
/// is `L^p_x L^q_T` (x-norm outermost), `TThenX` is `L^q_T L^p_x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixedOrder {
    XThenT,
    TThenX,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormSpec {
    /// `( (1/L) sum (1+xi^2)^s |f^|^2 )^{1/2}`; `sobolev(0)` is the plain
    /// discrete L2 norm.
    Sobolev(f64),
    /// Homogeneous counterpart with `|xi|^{2s}`.
    Homogeneous(f64),
    /// `( dx sum (1+x^2)^r |f|^2 )^{1/2}`.
    WeightedBracket(f64),
    /// `( dx sum |x|^{2r} |f|^2 )^{1/2}`.
    WeightedAbs(f64),
}

impl NormSpec {
    fn validate(&self) -> Result<()> {
        let (name, s) = match self {
            NormSpec::Sobolev(s) => ("sobolev", *s),
            NormSpec::Homogeneous(s) => ("homogeneous", *s),
            NormSpec::WeightedBracket(r) => ("weighted_bracket", *r),
            NormSpec::WeightedAbs(r) => ("weighted_abs", *r),
        };
        if s < 0.0 || !s.is_finite() {
            return Err(Error::Parameter(format!(
                "{name} norm needs a finite order >= 0, got {s}"
            )));
        }
        Ok(())
    }
}

/// Evaluate a [`NormSpec`] on a field.
pub fn norm(f: &Field, spec: NormSpec) -> Result<f64> {
    spec.validate()?;
    f.check_finite("norm input")?;
    let grid = f.grid();
    match spec {
        NormSpec::Sobolev(s) => {
            if s == 0.0 {
                return Ok(l2(f));
            }
            let coeffs = spectrum(f);
            let mut acc = 0.0;
            for (k, z) in coeffs.iter().enumerate() {
                let xi = grid.frequencies()[k];
                acc += (1.0 + xi * xi).powf(s) * z.norm_sqr();
            }
            Ok((acc / grid.length()).sqrt())
        }
        NormSpec::Homogeneous(s) => {
            let coeffs = spectrum(f);
            let mut acc = 0.0;
            for (k, z) in coeffs.iter().enumerate() {
                let xi = grid.frequencies()[k];
                acc += xi.abs().powf(2.0 * s) * z.norm_sqr();
            }
            Ok((acc / grid.length()).sqrt())
        }
        NormSpec::WeightedBracket(r) => {
            let mut acc = 0.0;
            for (j, z) in f.values().iter().enumerate() {
                let x = grid.point(j);
                acc += (1.0 + x * x).powf(r) * z.norm_sqr();
            }
            Ok((acc * grid.dx()).sqrt())
        }
        NormSpec::WeightedAbs(r) => {
            let mut acc = 0.0;
            for (j, z) in f.values().iter().enumerate() {
                let x = grid.point(j);
                acc += x.abs().powf(2.0 * r) * z.norm_sqr();
            }
            Ok((acc * grid.dx()).sqrt())
        }
    }
}

/// Plain discrete L2 norm, `(dx sum |f_j|^2)^{1/2}`.
pub fn l2(f: &Field) -> f64 {
    let acc: f64 = f.values().iter().map(|z| z.norm_sqr()).sum();
    (acc * f.grid().dx()).sqrt()
}

/// Discrete Lp norm in x; `p = inf` is the grid maximum.
pub fn lp(f: &Field, p: f64) -> f64 {
    if p.is_infinite() {
        return f.max_abs();
    }
    let acc: f64 = f.values().iter().map(|z| z.norm().powf(p)).sum();
    (acc * f.grid().dx()).powf(1.0 / p)
}

fn check_exponent(p: f64, name: &str) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::Parameter(format!(
            "{name} must lie in [1, inf], got {p}"
        )));
    }
    Ok(())
}

/// Mixed space-time norm of a stored evolution.
///
/// `XThenT` computes `|| ||F||_{L^q_T} ||_{L^p_x}`; `TThenX` the reverse.
/// Time integrals use the composite trapezoid rule on the stored times.
pub fn mixed_norm(field: &SpaceTimeField, p: f64, q: f64, order: MixedOrder) -> Result<f64> {
    check_exponent(p, "p")?;
    check_exponent(q, "q")?;
    let w = field.time_weights();
    let dx = field.grid().dx();
    let n = field.grid().n_points();
    match order {
        MixedOrder::XThenT => {
            // inner norm over t at each x, then Lp in x
            let mut inner = vec![0.0f64; n];
            if q.is_infinite() {
                for s in field.slices() {
                    for (j, z) in s.values().iter().enumerate() {
                        inner[j] = inner[j].max(z.norm());
                    }
                }
            } else {
                for (i, s) in field.slices().iter().enumerate() {
                    for (j, z) in s.values().iter().enumerate() {
                        inner[j] += w[i] * z.norm().powf(q);
                    }
                }
                for v in &mut inner {
                    *v = v.powf(1.0 / q);
                }
            }
            if p.is_infinite() {
                Ok(inner.iter().copied().fold(0.0, f64::max))
            } else {
                let acc: f64 = inner.iter().map(|v| v.powf(p)).sum();
                Ok((acc * dx).powf(1.0 / p))
            }
        }
        MixedOrder::TThenX => {
            // inner norm over x at each t, then Lq in t
            let inner: Vec<f64> = field.slices().iter().map(|s| lp(s, p)).collect();
            if q.is_infinite() {
                Ok(inner.iter().copied().fold(0.0, f64::max))
            } else {
                let acc: f64 = inner
                    .iter()
                    .zip(&w)
                    .map(|(v, wi)| wi * v.powf(q))
                    .sum();
                Ok(acc.powf(1.0 / q))
            }
        }
    }
}

/// Ratio of the field maximum over the outer `margin_fraction` of the box to
/// the overall maximum. Flags wrap-around of dispersive tails; zero fields
/// report 0.
pub fn boundary_contamination(f: &Field, margin_fraction: f64) -> Result<f64> {
    if !(margin_fraction > 0.0 && margin_fraction < 0.5) {
        return Err(Error::Parameter(format!(
            "margin fraction must lie in (0, 0.5), got {margin_fraction}"
        )));
    }
    let grid = f.grid();
    let cutoff = (1.0 - margin_fraction) * 0.5 * grid.length();
    let mut outer: f64 = 0.0;
    let mut overall: f64 = 0.0;
    for (j, z) in f.values().iter().enumerate() {
        let a = z.norm();
        overall = overall.max(a);
        if grid.point(j).abs() >= cutoff {
            outer = outer.max(a);
        }
    }
    if overall == 0.0 {
        Ok(0.0)
    } else {
        Ok(outer / overall)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid1D;
    use num_complex::Complex64;
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn sin_field() -> Field {
        let grid = Grid1D::new(256, 2.0 * PI).unwrap();
        Field::from_real_fn(grid, |x| x.sin())
    }

    #[test]
    fn sine_l2_and_h1() {
        // int sin^2 = pi over one period; (1+1) * pi for the H^1 norm.
        let f = sin_field();
        let n0 = norm(&f, NormSpec::Sobolev(0.0)).unwrap();
        assert!((n0 - PI.sqrt()).abs() < 1e-12, "{n0}");
        let n1 = norm(&f, NormSpec::Sobolev(1.0)).unwrap();
        assert!((n1 - (2.0 * PI).sqrt()).abs() < 1e-12, "{n1}");
    }

    #[test]
    fn parseval() {
        let grid = Grid1D::new(512, 30.0).unwrap();
        let f = Field::from_complex_fn(grid, |x| {
            Complex64::new((-x * x / 4.0).exp() * (2.0 * x).cos(), 0.3 * (-x * x / 9.0).exp())
        });
        let direct = l2(&f);
        let spectral = norm(&f, NormSpec::Sobolev(0.0)).unwrap();
        assert!((direct - spectral).abs() <= 1e-12 * direct);
    }

    #[test]
    fn weighted_bracket_matches_quadrature() {
        // int (1+x^2) e^{-2x^2} dx = (5/4) sqrt(pi/2) by direct quadrature.
        let grid = Grid1D::new(1 << 12, 40.0).unwrap();
        let f = Field::from_real_fn(grid, |x| (-x * x).exp());
        let got = norm(&f, NormSpec::WeightedBracket(1.0)).unwrap();

        let m = 200_000usize;
        let a = 20.0;
        let h = 2.0 * a / m as f64;
        let mut acc = 0.0;
        for i in 0..=m {
            let x = -a + i as f64 * h;
            let w = if i == 0 || i == m { 0.5 } else { 1.0 };
            acc += w * (1.0 + x * x) * (-2.0 * x * x).exp();
        }
        let oracle = (acc * h).sqrt();
        assert!((got - oracle).abs() < 1e-8, "{got} vs {oracle}");
    }

    #[test]
    fn mixed_norm_separable() {
        let grid = Grid1D::new(256, 20.0).unwrap();
        let g = Field::from_real_fn(grid.clone(), |x| (-x * x).exp());
        let times: Vec<f64> = (0..101).map(|i| i as f64 * 0.01).collect();
        let slices = vec![g.clone(); times.len()];
        let st = SpaceTimeField::new(times, slices).unwrap();
        let got = mixed_norm(&st, 2.0, 4.0, MixedOrder::XThenT).unwrap();
        let expect = 1.0f64.powf(0.25) * lp(&g, 2.0); // T = 1
        assert!((got - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn mixed_norm_fubini() {
        let grid = Grid1D::new(128, 10.0).unwrap();
        let times: Vec<f64> = (0..33).map(|i| i as f64 * 0.03).collect();
        let slices: Vec<Field> = times
            .iter()
            .map(|&t| {
                Field::from_complex_fn(grid.clone(), move |x| {
                    Complex64::new((-x * x).exp() * (t + 0.3).cos(), (x - t).sin() * 0.2)
                })
            })
            .collect();
        let st = SpaceTimeField::new(times, slices).unwrap();
        let a = mixed_norm(&st, 2.0, 2.0, MixedOrder::XThenT).unwrap();
        let b = mixed_norm(&st, 2.0, 2.0, MixedOrder::TThenX).unwrap();
        assert!((a - b).abs() <= 1e-10 * a.max(1e-300));
    }

    #[test]
    fn mixed_norm_2d_quadrature_oracle() {
        // F = e^{-x^2} e^{-t}, p = 2, q = 4 on T = 1: nested trapezoid.
        let grid = Grid1D::new(1 << 11, 40.0).unwrap();
        let times: Vec<f64> = (0..257).map(|i| i as f64 / 256.0).collect();
        let slices: Vec<Field> = times
            .iter()
            .map(|&t| Field::from_real_fn(grid.clone(), move |x| (-x * x).exp() * (-t).exp()))
            .collect();
        let st = SpaceTimeField::new(times.clone(), slices).unwrap();
        let got = mixed_norm(&st, 2.0, 4.0, MixedOrder::XThenT).unwrap();

        // Oracle: separable integrand, trapezoid on the stored times for t
        // (the declared time rule) and independent dense quadrature for x.
        let mut tacc = 0.0;
        for (i, &t) in times.iter().enumerate() {
            let w = if i == 0 || i == times.len() - 1 {
                0.5
            } else {
                1.0
            };
            tacc += w * (1.0 / 256.0) * (-4.0 * t).exp();
        }
        let m = 100_000usize;
        let mut xacc = 0.0;
        let a = 20.0;
        let h = 2.0 * a / m as f64;
        for i in 0..=m {
            let x = -a + i as f64 * h;
            let w = if i == 0 || i == m { 0.5 } else { 1.0 };
            xacc += w * ((-x * x).exp() * tacc.powf(0.25)).powi(2);
        }
        let oracle = (xacc * h).sqrt();
        let rel = (got - oracle).abs() / oracle;
        assert!(rel < 1e-6, "rel {rel}");
    }

    #[test]
    fn mixed_norm_rejects_bad_exponents() {
        let grid = Grid1D::new(16, 1.0).unwrap();
        let f = Field::zeros(grid, crate::field::FieldTag::Real);
        let st = SpaceTimeField::new(vec![0.0, 1.0], vec![f.clone(), f]).unwrap();
        assert!(mixed_norm(&st, 0.5, 2.0, MixedOrder::XThenT).is_err());
        assert!(mixed_norm(&st, 2.0, f64::NAN, MixedOrder::XThenT).is_err());
    }

    #[test]
    fn contamination_gaussian_and_constant() {
        let grid = Grid1D::new(1 << 10, 40.0).unwrap();
        let f = Field::from_real_fn(grid.clone(), |x| (-x * x).exp());
        assert!(boundary_contamination(&f, 0.1).unwrap() < 1e-10);
        let c = Field::from_real_fn(grid.clone(), |_| 2.0);
        assert!((boundary_contamination(&c, 0.1).unwrap() - 1.0).abs() < 1e-15);
        let z = Field::zeros(grid, crate::field::FieldTag::Real);
        assert_eq!(boundary_contamination(&z, 0.1).unwrap(), 0.0);
    }

    #[test]
    fn refinement_consistency_of_norms() {
        // all norms of a fixed analytic function move by < 1e-8 relative
        // under grid doubling
        let coarse = Grid1D::new(1 << 10, 30.0).unwrap();
        let fine = coarse.refine(2).unwrap();
        let func = |x: f64| (-x * x / 2.0).exp() * (1.7 * x).cos();
        let fc = Field::from_real_fn(coarse.clone(), func);
        let ff = Field::from_real_fn(fine.clone(), func);
        for spec in [
            NormSpec::Sobolev(0.0),
            NormSpec::Sobolev(1.25),
            NormSpec::Homogeneous(0.5),
            NormSpec::WeightedBracket(1.0),
            NormSpec::WeightedAbs(1.0),
        ] {
            let a = norm(&fc, spec).unwrap();
            let b = norm(&ff, spec).unwrap();
            assert!(
                (a - b).abs() <= 1e-8 * b,
                "{spec:?}: {a} vs {b}"
            );
        }
        // a fractional |x|^{2r} weight is singular at the origin; it stays
        // refinement-stable once the integrand vanishes there
        let gc = Field::from_real_fn(coarse, |x| x * x * func(x));
        let gf = Field::from_real_fn(fine, |x| x * x * func(x));
        let a = norm(&gc, NormSpec::WeightedAbs(0.75)).unwrap();
        let b = norm(&gf, NormSpec::WeightedAbs(0.75)).unwrap();
        assert!((a - b).abs() <= 1e-8 * b, "{a} vs {b}");
    }

    #[test]
    fn sub_on_mismatched_grids_fails() {
        let a = Field::zeros(Grid1D::new(16, 1.0).unwrap(), crate::field::FieldTag::Real);
        let b = Field::zeros(Grid1D::new(32, 1.0).unwrap(), crate::field::FieldTag::Real);
        assert!(a.sub(&b).is_err());
        let c = Field::zeros(Grid1D::new(16, 1.0).unwrap(), crate::field::FieldTag::Real);
        assert!(a.sub(&c).is_ok());
        let _ = Arc::strong_count(a.grid());
    }
}
