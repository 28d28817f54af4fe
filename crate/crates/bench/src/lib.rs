//! Inputs shared by the benchmarks.

use shadowcover::linalg::Vector;
use shadowcover::polytope::{random_polytope, reflected_scaled, regular_simplex};
use shadowcover::Body;

/// Seeded point clouds for hull timing.
pub fn cloud(n: usize, m: usize, seed: u64) -> Vec<Vector> {
    random_polytope(n, m.max(n + 1), seed)
        .expect("random polytope")
        .vertices()
        .to_vec()
}

/// Regular simplex and its reflected double in `R^n`.
pub fn simplex_pair(n: usize) -> (Body, Body) {
    let d = regular_simplex(n).expect("simplex");
    let l = reflected_scaled(&d, 2.0).expect("reflection");
    (d, l)
}
