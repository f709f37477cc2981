#![allow(dead_code)]

use auxsync_core::{ComplexOperator, DensityMatrix, LindbladTerm};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

pub fn complex_matrix(dim: usize, scale: f64) -> impl Strategy<Value = ComplexOperator> {
    prop::collection::vec((-scale..scale, -scale..scale), dim * dim).prop_map(move |v| {
        ComplexOperator::from_fn(dim, |i, j| {
            let (re, im) = v[i * dim + j];
            C64::new(re, im)
        })
    })
}

pub fn hermitian(dim: usize, scale: f64) -> impl Strategy<Value = ComplexOperator> {
    complex_matrix(dim, scale).prop_map(|m| m.hermitian_part())
}

/// `A A† / Tr(A A†)`, a full-rank density matrix almost surely.
pub fn density(dim: usize) -> impl Strategy<Value = DensityMatrix> {
    complex_matrix(dim, 1.0)
        .prop_filter("non-degenerate", |a| a.max_abs() > 1e-3)
        .prop_map(|a| {
            let p = &a * &a.adjoint();
            let tr = p.trace().re;
            DensityMatrix::from_operator((p * (1.0 / tr)).hermitian_part()).unwrap()
        })
}

pub fn terms(dim: usize, count: usize) -> impl Strategy<Value = Vec<LindbladTerm>> {
    prop::collection::vec(
        (complex_matrix(dim, 1.0), 0.0..3.0f64, any::<bool>()),
        count,
    )
    .prop_map(|v| {
        v.into_iter()
            .map(|(op, rate, absorbed)| {
                if absorbed {
                    LindbladTerm::absorbed(op)
                } else {
                    LindbladTerm::with_rate(op, rate).unwrap()
                }
            })
            .collect()
    })
}

pub fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
    assert!((a - b).abs() <= tol, "{what}: {a} vs {b} (tol {tol})");
}
