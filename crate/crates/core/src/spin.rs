//! Spin-S angular momentum operators in the `M = +S, ..., -S` basis.

use num_complex::Complex64 as C64;

use crate::error::{invalid, Result};
use crate::operator::{c, ComplexOperator, IM};

#[derive(Clone, Debug)]
pub struct SpinOperators {
    twice_s: usize,
}

impl SpinOperators {
    /// `twice_s = 2S`, so spin 1 is `new(2)`.
    pub fn new(twice_s: usize) -> Result<Self> {
        if twice_s == 0 {
            return Err(invalid("spin must be at least 1/2"));
        }
        Ok(Self { twice_s })
    }

    pub fn spin_one() -> Self {
        Self { twice_s: 2 }
    }

    pub fn dim(&self) -> usize {
        self.twice_s + 1
    }

    pub fn s(&self) -> f64 {
        self.twice_s as f64 / 2.0
    }

    /// Magnetic quantum number of basis index `i`.
    pub fn m(&self, i: usize) -> f64 {
        self.s() - i as f64
    }

    pub fn z(&self) -> ComplexOperator {
        let d: Vec<f64> = (0..self.dim()).map(|i| self.m(i)).collect();
        ComplexOperator::from_real_diagonal(&d)
    }

    /// Raising operator: `S+|M⟩ = √(S(S+1) − M(M+1)) |M+1⟩`.
    pub fn plus(&self) -> ComplexOperator {
        let s = self.s();
        ComplexOperator::from_fn(self.dim(), |i, j| {
            if j == i + 1 {
                let m = self.m(j);
                c((s * (s + 1.0) - m * (m + 1.0)).sqrt())
            } else {
                C64::default()
            }
        })
    }

    pub fn minus(&self) -> ComplexOperator {
        self.plus().adjoint()
    }

    pub fn x(&self) -> ComplexOperator {
        (self.plus() + self.minus()) * 0.5
    }

    pub fn y(&self) -> ComplexOperator {
        (self.plus() - self.minus()) * (-0.5 * IM)
    }
}
