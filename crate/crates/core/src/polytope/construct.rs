//! Named bodies.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Body;
use crate::error::{Error, Result};
use crate::linalg::{complement_basis, random_unit, unit, Vector};

/// Constructor selector for [`make_body`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum BodyKind {
    /// Coordinate simplex on `{o, e_1, …, e_n}`.
    StandardSimplex,
    /// Regular simplex with unit edges, centroid at the origin.
    RegularSimplex,
    /// Unit cube `[0,1]^n`.
    Cube,
    /// Convex hull of `±e_i`.
    CrossPolytope,
    /// Hull of the coordinate simplex and `p = (1/(n-1), …, 1/(n-1))`.
    CapBody,
    /// `Ξ_{e_i} + [o, e_i]` for the given zero-based axis.
    Prism { axis: usize },
    /// Random points on the unit sphere.
    Ball { vertices: usize },
    /// Hull of random points in the unit cube.
    Random { vertices: usize },
}

pub fn make_body(kind: BodyKind, n: usize, seed: u64) -> Result<Body> {
    match kind {
        BodyKind::StandardSimplex => standard_simplex(n),
        BodyKind::RegularSimplex => regular_simplex(n),
        BodyKind::Cube => cube(n),
        BodyKind::CrossPolytope => cross_polytope(n),
        BodyKind::CapBody => cap_body(n),
        BodyKind::Prism { axis } => prism(n, axis),
        BodyKind::Ball { vertices } => ball_approx(n, vertices, seed),
        BodyKind::Random { vertices } => random_polytope(n, vertices, seed),
    }
}

fn need_dim(n: usize, min: usize) -> Result<()> {
    if n < min || n > 8 {
        return Err(Error::BadParameter(format!(
            "dimension {n} outside supported range {min}..=8"
        )));
    }
    Ok(())
}

pub fn standard_simplex(n: usize) -> Result<Body> {
    need_dim(n, 1)?;
    let mut pts = vec![Vector::zeros(n)];
    pts.extend((0..n).map(|i| unit(n, i)));
    Ok(Body::full(n, pts)?.with_name(format!("standard-simplex-{n}")))
}

pub fn regular_simplex(n: usize) -> Result<Body> {
    need_dim(n, 1)?;
    // e_i / √2 in R^{n+1} have unit pairwise distances; express them in an
    // orthonormal frame of the hyperplane Σx = const.
    let m = n + 1;
    let ones = Vector::from_element(m, 1.0);
    let frame = complement_basis(m, &[ones])?;
    let centroid = Vector::from_element(m, 1.0 / (m as f64 * 2f64.sqrt()));
    let pts = (0..m)
        .map(|i| frame.coords(&(unit(m, i) / 2f64.sqrt() - &centroid)))
        .collect();
    Ok(Body::full(n, pts)?.with_name(format!("regular-simplex-{n}")))
}

pub fn cube(n: usize) -> Result<Body> {
    need_dim(n, 1)?;
    let pts = (0..1usize << n)
        .map(|mask| Vector::from_fn(n, |i, _| ((mask >> i) & 1) as f64))
        .collect();
    Ok(Body::full(n, pts)?.with_name(format!("cube-{n}")))
}

pub fn cross_polytope(n: usize) -> Result<Body> {
    need_dim(n, 1)?;
    let pts = (0..n).flat_map(|i| [unit(n, i), -unit(n, i)]).collect();
    Ok(Body::full(n, pts)?.with_name(format!("cross-polytope-{n}")))
}

/// The point `p` with all coordinates `1/(n-1)`.
pub fn cap_point(n: usize) -> Vector {
    Vector::from_element(n, 1.0 / (n as f64 - 1.0))
}

pub fn cap_body(n: usize) -> Result<Body> {
    need_dim(n, 2)?;
    let xi = standard_simplex(n)?;
    let mut pts = xi.vertices().to_vec();
    pts.push(cap_point(n));
    Ok(Body::full(n, pts)?.with_name(format!("cap-body-{n}")))
}

/// `w_i`: all ones except a zero in coordinate `i`.
pub fn cap_normal(n: usize, i: usize) -> Vector {
    let mut w = Vector::from_element(n, 1.0);
    w[i] = 0.0;
    w
}

/// Prism `C_i = Ξ_{e_i} + E_i` with `E_i` the segment `[o, e_i]`.
pub fn prism(n: usize, axis: usize) -> Result<Body> {
    need_dim(n, 2)?;
    if axis >= n {
        return Err(Error::BadParameter(format!("axis {axis} out of range for dimension {n}")));
    }
    let mut base = vec![Vector::zeros(n)];
    base.extend((0..n).filter(|&j| j != axis).map(|j| unit(n, j)));
    let base = Body::from_points(n, base)?;
    let segment = Body::from_points(n, vec![Vector::zeros(n), unit(n, axis)])?;
    Ok(base.minkowski_sum(&segment)?.with_name(format!("prism-{n}-{axis}")))
}

/// `λ(-B)`.
pub fn reflected_scaled(b: &Body, factor: f64) -> Result<Body> {
    if factor.is_nan() || factor <= 0.0 {
        return Err(Error::BadParameter(format!("reflection scale {factor} must be positive")));
    }
    b.reflected().scaled(factor)
}

/// Polytope inscribed in the unit ball: `m` seeded points on the sphere
/// (evenly spaced on the circle when `n = 2`). The outer radius is exactly
/// one; the inner radius is the smallest facet offset, see [`inner_radius`].
pub fn ball_approx(n: usize, m: usize, seed: u64) -> Result<Body> {
    need_dim(n, 2)?;
    if m < n + 1 {
        return Err(Error::BadParameter(format!("need at least {} vertices, got {m}", n + 1)));
    }
    let pts: Vec<Vector> = if n == 2 {
        (0..m)
            .map(|i| {
                let th = std::f64::consts::TAU * i as f64 / m as f64;
                Vector::from_column_slice(&[th.cos(), th.sin()])
            })
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..m).map(|_| random_unit(n, &mut rng)).collect()
    };
    Ok(Body::full(n, pts)?.with_name(format!("ball-{n}-{m}")))
}

/// Radius of the largest origin-centred ball inside `b`.
pub fn inner_radius(b: &Body) -> f64 {
    b.hrep().facets.iter().map(|f| f.offset).fold(f64::INFINITY, f64::min)
}

/// Hull of `m` seeded uniform points in `[0,1]^n`.
pub fn random_polytope(n: usize, m: usize, seed: u64) -> Result<Body> {
    need_dim(n, 1)?;
    if m < n + 1 {
        return Err(Error::BadParameter(format!("need at least {} points, got {m}", n + 1)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = (0..m)
        .map(|_| Vector::from_fn(n, |_, _| rng.random::<f64>()))
        .collect();
    Ok(Body::full(n, pts)?.with_name(format!("random-{n}-{m}-{seed}")))
}
