//! Deterministic random generators shared by the property suites.

#![allow(dead_code)]

use brink_core::{ProbabilityVector, RngStream, SymmetricMatrix};

pub fn rng(tag: u64) -> RngStream {
    RngStream::new(0x5EED_CAFE, tag)
}

pub fn uniform_in(r: &mut RngStream, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * r.next_f64()
}

/// Strictly interior probability vector by normalized exponentials, with
/// every cell at least `floor` after renormalization.
pub fn interior_probs(r: &mut RngStream, cells: usize, floor: f64) -> ProbabilityVector {
    loop {
        let raw: Vec<f64> = (0..cells).map(|_| -r.next_f64().max(1e-12).ln()).collect();
        let total: f64 = raw.iter().sum();
        let probs: Vec<f64> = raw.iter().map(|v| v / total).collect();
        if probs.iter().all(|&p| p > floor) {
            return ProbabilityVector::new(&probs).unwrap();
        }
    }
}

pub fn random_symmetric(r: &mut RngStream, dim: usize, scale: f64) -> SymmetricMatrix {
    let entries: Vec<f64> = (0..dim * dim)
        .map(|_| uniform_in(r, -scale, scale))
        .collect();
    SymmetricMatrix::from_fn(dim, |i, j| {
        if i <= j {
            entries[i * dim + j]
        } else {
            entries[j * dim + i]
        }
    })
}

/// Random SPD matrix A'A + eps·I.
pub fn random_spd(r: &mut RngStream, dim: usize, eps: f64) -> SymmetricMatrix {
    let a: Vec<f64> = (0..dim * dim).map(|_| uniform_in(r, -1.0, 1.0)).collect();
    SymmetricMatrix::from_fn(dim, |i, j| {
        let dot: f64 = (0..dim).map(|k| a[k * dim + i] * a[k * dim + j]).sum();
        dot + if i == j { eps } else { 0.0 }
    })
}
