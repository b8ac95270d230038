//! Sampled transverse field profiles and their overlap integrals.
//!
//! Fields are real (lossless guides) and sampled on uniform grids with
//! positions in micrometres. Two-dimensional fields are separable,
//! `U(x, y) = X(x) Y(y)`, so every 2-D integral factors into a product of
//! 1-D trapezoidal integrals.

use crate::error::{Error, Result};

/// Uniform 1-D sampling grid, positions in micrometres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1d {
    start: f64,
    step: f64,
    len: usize,
}

impl Grid1d {
    pub fn new(start: f64, step: f64, len: usize) -> Result<Self> {
        if !(step > 0.0) || len < 2 || !start.is_finite() {
            return Err(Error::Contract(format!(
                "grid needs step > 0 and at least two samples (start {start}, step {step}, len {len})"
            )));
        }
        Ok(Self { start, step, len })
    }

    /// Grid symmetric about zero covering `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, step: f64) -> Result<Self> {
        if !(half_width > 0.0) || !(step > 0.0) {
            return Err(Error::Contract(format!(
                "symmetric grid needs positive half width and step, got {half_width}, {step}"
            )));
        }
        let half = (half_width / step).round() as usize;
        Self::new(-(half as f64) * step, step, 2 * half + 1)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn position(&self, i: usize) -> f64 {
        self.start + self.step * i as f64
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(move |i| self.position(i))
    }
}

/// Trapezoidal integral of uniformly spaced samples.
pub fn trapezoid(values: &[f64], step: f64) -> f64 {
    match values {
        [] | [_] => 0.0,
        [first, inner @ .., last] => step * (0.5 * (first + last) + inner.iter().sum::<f64>()),
    }
}

/// Real field samples on a 1-D grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile1d {
    grid: Grid1d,
    values: Vec<f64>,
}

impl Profile1d {
    pub fn new(grid: Grid1d, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Contract(format!(
                "{} samples for a grid of {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid1d, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.positions().map(f).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid1d {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `∫ |U|² dy` on the grid.
    pub fn norm_sq(&self) -> f64 {
        let sq: Vec<f64> = self.values.iter().map(|v| v * v).collect();
        trapezoid(&sq, self.grid.step)
    }

    /// Rescales the samples so that `∫ |U|² dy = 1` on this grid.
    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm_sq();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Contract("cannot normalize a null profile".into()));
        }
        let scale = norm.sqrt().recip();
        self.values.iter_mut().for_each(|v| *v *= scale);
        Ok(self)
    }

    fn check_same_grid(&self, other: &Profile1d) -> Result<()> {
        let (a, b) = (&self.grid, &other.grid);
        let same = a.len == b.len
            && (a.step - b.step).abs() <= 1e-12 * a.step
            && (a.start - b.start).abs() <= 1e-9 * a.step;
        if same {
            Ok(())
        } else {
            Err(Error::Contract(
                "overlap integrals need profiles on a common grid".into(),
            ))
        }
    }

    /// `∫ a b dy`.
    pub fn overlap(&self, other: &Profile1d) -> Result<f64> {
        self.check_same_grid(other)?;
        let prod: Vec<f64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        Ok(trapezoid(&prod, self.grid.step))
    }

    /// `∫ a b c dy`.
    pub fn triple_overlap(a: &Profile1d, b: &Profile1d, c: &Profile1d) -> Result<f64> {
        a.check_same_grid(b)?;
        a.check_same_grid(c)?;
        let prod: Vec<f64> = a
            .values
            .iter()
            .zip(&b.values)
            .zip(&c.values)
            .map(|((a, b), c)| a * b * c)
            .collect();
        Ok(trapezoid(&prod, a.grid.step))
    }

    /// Fraction of `∫|U|²` contained in `|y| <= half_width`.
    pub fn power_fraction_within(&self, half_width: f64) -> f64 {
        let inside: Vec<f64> = self
            .grid
            .positions()
            .zip(&self.values)
            .map(|(y, v)| {
                if y.abs() <= half_width + 1e-12 {
                    v * v
                } else {
                    0.0
                }
            })
            .collect();
        trapezoid(&inside, self.grid.step) / self.norm_sq()
    }
}

/// Separable 2-D field `U(x, y) = X(x) Y(y)`; `x` lateral, `y` vertical.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableProfile {
    pub x: Profile1d,
    pub y: Profile1d,
}

impl SeparableProfile {
    pub fn new(x: Profile1d, y: Profile1d) -> Self {
        Self { x, y }
    }

    pub fn normalized(self) -> Result<Self> {
        Ok(Self {
            x: self.x.normalized()?,
            y: self.y.normalized()?,
        })
    }

    /// `∫∫ |U|² dx dy`.
    pub fn norm_sq(&self) -> f64 {
        self.x.norm_sq() * self.y.norm_sq()
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.x.values[ix] * self.y.values[iy]
    }

    /// `∫∫ U V dx dy` (fields are real, so conjugation is a no-op).
    pub fn overlap(&self, other: &SeparableProfile) -> Result<f64> {
        Ok(self.x.overlap(&other.x)? * self.y.overlap(&other.y)?)
    }

    /// `∫∫ U_a U_b U_c dx dy`.
    pub fn triple_overlap(
        a: &SeparableProfile,
        b: &SeparableProfile,
        c: &SeparableProfile,
    ) -> Result<f64> {
        Ok(Profile1d::triple_overlap(&a.x, &b.x, &c.x)?
            * Profile1d::triple_overlap(&a.y, &b.y, &c.y)?)
    }
}
