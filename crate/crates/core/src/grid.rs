//! Two-sided step-function paths on a finite time grid.
//!
//! A [`CadlagGrid`] holds a path observed at finitely many times
//! `t_0 < ... < t_m` with `0` among them and value `0` there. Between grid
//! points the path is a step function with the orientation used throughout
//! the crate: looking right of the origin the path is right-continuous
//! (`Z(x)` is the value at the largest grid time `<= x`), looking left it is
//! left-continuous (`Z(x)` is the value at the smallest grid time `>= x`).
//! Functionals over windows `[0, a]` and `[-a, 0]` therefore see exactly the
//! grid values inside the window, with no interpolation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("grid must contain at least the origin")]
    Empty,
    #[error("times and values differ in length")]
    LengthMismatch,
    #[error("times must be strictly increasing")]
    NotIncreasing,
    #[error("grid must contain time 0 with value 0")]
    MissingOrigin,
    #[error("query {0} outside the grid span")]
    OutOfSpan(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CadlagGrid {
    times: Vec<f64>,
    values: Vec<f64>,
    zero: usize,
}

impl CadlagGrid {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self, GridError> {
        if times.is_empty() {
            return Err(GridError::Empty);
        }
        if times.len() != values.len() {
            return Err(GridError::LengthMismatch);
        }
        if times.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(GridError::NotIncreasing);
        }
        let zero = times
            .iter()
            .position(|&t| t == 0.0)
            .ok_or(GridError::MissingOrigin)?;
        if values[zero] != 0.0 {
            return Err(GridError::MissingOrigin);
        }
        Ok(Self {
            times,
            values,
            zero,
        })
    }

    /// Forward-only path from increments on a uniform grid of spacing `dt`:
    /// observation times `0, dt, 2 dt, ...` and cumulative-sum values.
    pub fn from_forward_increments(dt: f64, increments: &[f64]) -> Self {
        assert!(dt > 0.0, "grid spacing must be positive");
        let mut times = Vec::with_capacity(increments.len() + 1);
        let mut values = Vec::with_capacity(increments.len() + 1);
        let mut v = 0.0;
        times.push(0.0);
        values.push(0.0);
        for (i, inc) in increments.iter().enumerate() {
            v += inc;
            times.push((i + 1) as f64 * dt);
            values.push(v);
        }
        Self {
            times,
            values,
            zero: 0,
        }
    }

    /// Two-sided path on a uniform grid. `increments_neg[k]` is the step
    /// taken moving away from the origin on the left side:
    /// `Z(-(k+1) dt) = Z(-k dt) + increments_neg[k]`.
    pub fn two_sided(dt: f64, increments_pos: &[f64], increments_neg: &[f64]) -> Self {
        assert!(dt > 0.0, "grid spacing must be positive");
        let n = increments_neg.len();
        let m = increments_pos.len();
        let mut times = Vec::with_capacity(n + m + 1);
        let mut values = Vec::with_capacity(n + m + 1);
        let mut left = vec![0.0; n + 1];
        for k in 0..n {
            left[k + 1] = left[k] + increments_neg[k];
        }
        for k in (1..=n).rev() {
            times.push(-(k as f64) * dt);
            values.push(left[k]);
        }
        times.push(0.0);
        values.push(0.0);
        let mut v = 0.0;
        for (i, inc) in increments_pos.iter().enumerate() {
            v += inc;
            times.push((i + 1) as f64 * dt);
            values.push(v);
        }
        Self {
            times,
            values,
            zero: n,
        }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn zero_index(&self) -> usize {
        self.zero
    }

    /// `(t_min, t_max)` of the observed window.
    pub fn span(&self) -> (f64, f64) {
        (self.times[0], *self.times.last().unwrap())
    }

    /// Step-function evaluation with the two-sided orientation described on
    /// the type.
    pub fn value_at(&self, x: f64) -> Result<f64, GridError> {
        let (lo, hi) = self.span();
        if !(lo <= x && x <= hi) {
            return Err(GridError::OutOfSpan(x));
        }
        if x >= 0.0 {
            // last index with t <= x
            let i = self.times.partition_point(|&t| t <= x) - 1;
            Ok(self.values[i])
        } else {
            // first index with t >= x
            let i = self.times.partition_point(|&t| t < x);
            Ok(self.values[i])
        }
    }

    /// Inclusive index range of grid points in `[0, a]`.
    pub fn forward_indices(&self, a: f64) -> Result<(usize, usize), GridError> {
        if !(a >= 0.0) || a > self.span().1 {
            return Err(GridError::OutOfSpan(a));
        }
        let hi = self.times.partition_point(|&t| t <= a) - 1;
        Ok((self.zero, hi))
    }

    /// Inclusive index range of grid points in `[-a, 0]`.
    pub fn backward_indices(&self, a: f64) -> Result<(usize, usize), GridError> {
        if !(a >= 0.0) || -a < self.span().0 {
            return Err(GridError::OutOfSpan(a));
        }
        let lo = self.times.partition_point(|&t| t < -a);
        Ok((lo, self.zero))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_two_sided() -> CadlagGrid {
        // values at times -2,-1,0,1,2 are 3,-1,0,1,-1
        CadlagGrid::new(
            vec![-2.0, -1.0, 0.0, 1.0, 2.0],
            vec![3.0, -1.0, 0.0, 1.0, -1.0],
        )
        .unwrap()
    }

    #[test]
    fn construction_validates() {
        assert_eq!(
            CadlagGrid::new(vec![], vec![]).unwrap_err(),
            GridError::Empty
        );
        assert_eq!(
            CadlagGrid::new(vec![0.0, 1.0], vec![0.0]).unwrap_err(),
            GridError::LengthMismatch
        );
        assert_eq!(
            CadlagGrid::new(vec![0.0, 0.0], vec![0.0, 1.0]).unwrap_err(),
            GridError::NotIncreasing
        );
        assert_eq!(
            CadlagGrid::new(vec![1.0, 2.0], vec![0.0, 1.0]).unwrap_err(),
            GridError::MissingOrigin
        );
        assert_eq!(
            CadlagGrid::new(vec![0.0, 1.0], vec![0.5, 1.0]).unwrap_err(),
            GridError::MissingOrigin
        );
    }

    #[test]
    fn forward_evaluation_is_right_continuous() {
        let g = CadlagGrid::from_forward_increments(1.0, &[1.0, -2.0, 3.0]);
        assert_eq!(g.value_at(0.0).unwrap(), 0.0);
        assert_eq!(g.value_at(0.9).unwrap(), 0.0);
        assert_eq!(g.value_at(1.0).unwrap(), 1.0);
        assert_eq!(g.value_at(1.5).unwrap(), 1.0);
        assert_eq!(g.value_at(3.0).unwrap(), 2.0);
        assert!(g.value_at(3.1).is_err());
        assert!(g.value_at(-0.1).is_err());
    }

    #[test]
    fn backward_evaluation_is_left_continuous() {
        let g = toy_two_sided();
        assert_eq!(g.value_at(-0.5).unwrap(), 0.0);
        assert_eq!(g.value_at(-1.0).unwrap(), -1.0);
        assert_eq!(g.value_at(-1.5).unwrap(), -1.0);
        assert_eq!(g.value_at(-2.0).unwrap(), 3.0);
        assert!(g.value_at(-2.5).is_err());
    }

    #[test]
    fn two_sided_increment_convention() {
        // increments_neg: Z(-1) = 0 + 2 = 2, Z(-2) = 2 + (-5) = -3
        let g = CadlagGrid::two_sided(1.0, &[1.0], &[2.0, -5.0]);
        assert_eq!(g.value_at(-1.0).unwrap(), 2.0);
        assert_eq!(g.value_at(-2.0).unwrap(), -3.0);
        assert_eq!(g.value_at(1.0).unwrap(), 1.0);
        assert_eq!(g.zero_index(), 2);
    }

    #[test]
    fn window_index_ranges() {
        let g = toy_two_sided();
        assert_eq!(g.forward_indices(1.5).unwrap(), (2, 3));
        assert_eq!(g.forward_indices(2.0).unwrap(), (2, 4));
        assert_eq!(g.forward_indices(0.0).unwrap(), (2, 2));
        assert_eq!(g.backward_indices(1.0).unwrap(), (1, 2));
        assert_eq!(g.backward_indices(2.0).unwrap(), (0, 2));
        assert!(g.forward_indices(2.5).is_err());
        assert!(g.backward_indices(3.0).is_err());
    }
}
