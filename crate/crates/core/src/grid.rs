use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Uniform node-centred grid on `[x_left, x_right]` with `n` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    x_left: f64,
    x_right: f64,
    n: usize,
}

impl Grid1D {
    pub const MIN_NODES: usize = 16;

    pub fn new(x_left: f64, x_right: f64, n: usize) -> Result<Self> {
        if n < Self::MIN_NODES {
            return Err(Error::InvalidScenario(format!(
                "grid needs at least {} nodes, got {n}",
                Self::MIN_NODES
            )));
        }
        if !(x_left.is_finite() && x_right.is_finite() && x_left < x_right) {
            return Err(Error::InvalidScenario(format!(
                "grid bounds must satisfy x_left < x_right, got [{x_left}, {x_right}]"
            )));
        }
        Ok(Self { x_left, x_right, n })
    }

    /// Symmetric grid on `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, n: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_left(&self) -> f64 {
        self.x_left
    }

    pub fn x_right(&self) -> f64 {
        self.x_right
    }

    pub fn dx(&self) -> f64 {
        (self.x_right - self.x_left) / (self.n - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i == self.n - 1 {
            self.x_right
        } else {
            self.x_left + i as f64 * self.dx()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }
}
