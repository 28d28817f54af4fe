//! Translate containment `K + x ⊆ L`.
//!
//! For a polytope `L = {y : a_j·y ≤ b_j}` the translate `K + x` lies in `L`
//! exactly when `h_K(a_j) + a_j·x ≤ b_j` for every facet. Each decision below
//! is a small LP over those facet inequalities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{complement_basis, unit, Matrix, Vector};
use crate::lp::{self, LinearProgram, LpStatus, Sense};
use crate::mixedvol;
use crate::polytope::{cap_normal, standard_simplex, Body};
use crate::shadow;
use crate::tol;

/// Facet of `L` overshot by `deficit` at the placement that minimizes the
/// largest overshoot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolatedFacet {
    pub normal: Vector,
    pub deficit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContainmentWitness {
    pub feasible: bool,
    /// Placement maximizing the smallest facet slack; present when feasible.
    pub translation: Option<Vector>,
    /// Largest achievable minimum slack over facets of `L` (negative when
    /// no translate fits).
    pub margin: f64,
    pub violated_facet: Option<ViolatedFacet>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleResult {
    pub alpha: f64,
    pub translation: Vector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DilateResult {
    pub lambda: f64,
    pub translation: Vector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HideWitness {
    /// Corner-normalizing translation; `K + translation ⊆ D` when `inside_cap_body`.
    pub translation: Vector,
    pub inside_cap_body: bool,
}

fn same_dim(k: &Body, l: &Body) -> Result<()> {
    if k.dim() != l.dim() {
        return Err(Error::DimensionMismatch {
            expected: l.dim(),
            got: k.dim(),
        });
    }
    Ok(())
}

fn target_facets(l: &Body) -> Result<(Matrix, Vector)> {
    if !l.is_full_dimensional() {
        return Err(Error::DegenerateInput(format!(
            "containing body has affine dimension {} < {}",
            l.affine_dim(),
            l.dim()
        )));
    }
    Ok(l.hrep().system())
}

/// Decides whether some translate of `k` fits inside `l`.
pub fn translate_into(k: &Body, l: &Body) -> Result<ContainmentWitness> {
    same_dim(k, l)?;
    let (a, b) = target_facets(l)?;
    let hk = Vector::from_fn(a.nrows(), |r, _| k.h(&a.row(r).transpose()));
    let rhs = &b - &hk;
    let (x, margin) = lp::max_min_slack(&a, &rhs)?;
    let tol = tol::get().feasibility * l.scale().max(1.0);
    if margin >= -tol {
        Ok(ContainmentWitness {
            feasible: true,
            translation: Some(x),
            margin,
            violated_facet: None,
        })
    } else {
        let slacks = &rhs - &a * &x;
        let worst = slacks.argmin().0;
        Ok(ContainmentWitness {
            feasible: false,
            translation: None,
            margin,
            violated_facet: Some(ViolatedFacet {
                normal: a.row(worst).transpose(),
                deficit: -slacks[worst],
            }),
        })
    }
}

/// Largest `α` such that `α K + x ⊆ L` for some `x`.
pub fn max_scale(k: &Body, l: &Body) -> Result<ScaleResult> {
    same_dim(k, l)?;
    if k.is_point() {
        return Err(Error::PointBody);
    }
    let (a, b) = target_facets(l)?;
    let n = k.dim();
    let m = a.nrows();
    let mut big = Matrix::zeros(m + 1, n + 1);
    let mut rhs = Vector::zeros(m + 1);
    for r in 0..m {
        let nr = a.row(r).transpose();
        for c in 0..n {
            big[(r, c)] = nr[c];
        }
        big[(r, n)] = k.h(&nr);
        rhs[r] = b[r];
    }
    big[(m, n)] = -1.0;
    let mut c = Vector::zeros(n + 1);
    c[n] = 1.0;
    let out = lp::solve(&LinearProgram::new(big, rhs, c, Sense::Maximize)?)?;
    match out.status {
        LpStatus::Optimal => {
            let z = out.x.expect("optimal");
            Ok(ScaleResult {
                alpha: z[n],
                translation: z.rows(0, n).into_owned(),
            })
        }
        LpStatus::Infeasible => Err(Error::DegenerateInput("containing body is empty".into())),
        LpStatus::Unbounded => Err(Error::NumericalFailure("unbounded inscribed scale".into())),
    }
}

/// Smallest `λ ≥ 0` such that `K + x ⊆ λL` for some `x`, with `λL` the
/// dilate about the origin. The free translation makes the answer
/// independent of where the origin sits relative to `L`.
pub fn min_cover_dilate(k: &Body, l: &Body) -> Result<DilateResult> {
    same_dim(k, l)?;
    let (a, b) = target_facets(l)?;
    let n = k.dim();
    let m = a.nrows();
    let mut big = Matrix::zeros(m + 1, n + 1);
    let mut rhs = Vector::zeros(m + 1);
    for r in 0..m {
        let nr = a.row(r).transpose();
        for c in 0..n {
            big[(r, c)] = nr[c];
        }
        big[(r, n)] = -b[r];
        rhs[r] = -k.h(&nr);
    }
    big[(m, n)] = -1.0;
    let mut c = Vector::zeros(n + 1);
    c[n] = 1.0;
    let out = lp::solve(&LinearProgram::new(big, rhs, c, Sense::Minimize)?)?;
    match out.status {
        LpStatus::Optimal => {
            let z = out.x.expect("optimal");
            Ok(DilateResult {
                lambda: z[n],
                translation: z.rows(0, n).into_owned(),
            })
        }
        other => Err(Error::NumericalFailure(format!("cover dilate LP ended {other:?}"))),
    }
}

/// Simplex containment through mixed volumes: `T` contains a translate of
/// `K` iff `V_{n-1,1}(T, K) ≤ V_n(T)`.
pub fn lutwak_simplex_contains(simplex: &Body, k: &Body) -> Result<bool> {
    same_dim(k, simplex)?;
    let n = simplex.dim();
    if !simplex.is_full_dimensional() || simplex.vertices().len() != n + 1 {
        return Err(Error::NotASimplex {
            dim: n,
            vertices: simplex.vertices().len(),
        });
    }
    let mixed = mixedvol::base_height_mixed(simplex, k)?;
    let vol = simplex.volume()?;
    Ok(mixed <= vol + 1e-9)
}

/// Translation that pushes `k` into the positive orthant corner:
/// `(h_K(-e_1), …, h_K(-e_n))`.
pub fn corner_shift(k: &Body) -> Vector {
    let n = k.dim();
    Vector::from_fn(n, |i, _| k.h(&(-unit(n, i))))
}

/// `k` translated so that `h_K(-e_i) = 0` for every `i`.
pub fn corner_normalize(k: &Body) -> Body {
    let shift = corner_shift(k);
    let moved = k.translated(&shift);
    // Snap the touching coordinates so the support values are exactly zero.
    let pts: Vec<Vector> = moved
        .vertices()
        .iter()
        .map(|v| v.map(|c| if c.abs() < 1e-14 { 0.0 } else { c }))
        .collect();
    Body::from_points(k.dim(), pts).unwrap_or(moved)
}

/// Places `k` inside the cap body `D` of the coordinate simplex.
///
/// Requires that each coordinate shadow `Ξ_{e_i}` covers `K_{e_i}` (those
/// are the only directions the placement argument uses); the first axis
/// where that fails is reported as `PreconditionFailed`.
pub fn hide_behind_simplex_witness(k: &Body) -> Result<HideWitness> {
    let n = k.dim();
    let xi = standard_simplex(n)?;
    for i in 0..n {
        let e = unit(n, i);
        let frame = complement_basis(n, std::slice::from_ref(&e))?;
        if !shadow::covering_verdict(k, &xi, &frame)?.covered {
            return Err(Error::PreconditionFailed { direction: e });
        }
    }
    let shift = corner_shift(k);
    let placed = k.translated(&shift);
    let eps = tol::get().feasibility * placed.scale().max(1.0);
    let inside = (0..n).all(|i| {
        let w = cap_normal(n, i);
        placed
            .vertices()
            .iter()
            .all(|y| y.iter().all(|c| *c >= -eps) && y[i] <= 1.0 + eps && w.dot(y) <= 1.0 + eps)
    });
    Ok(HideWitness {
        translation: shift,
        inside_cap_body: inside,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{cap_body, cube, random_polytope, reflected_scaled, regular_simplex};

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    fn reverify(k: &Body, l: &Body, w: &ContainmentWitness) {
        let x = w.translation.as_ref().unwrap();
        for f in &l.hrep().facets {
            assert!(k.h(&f.normal) + f.normal.dot(x) <= f.offset + 1e-8);
        }
    }

    #[test]
    fn boxes() {
        let k = cube(2).unwrap();
        let l = cube(2).unwrap().scaled(2.0).unwrap();
        let w = translate_into(&k, &l).unwrap();
        assert!(w.feasible);
        reverify(&k, &l, &w);
        let x = w.translation.unwrap();
        assert!((x - v(&[0.5, 0.5])).norm() < 1e-12);
        // The translation set is [0,1]^2: its corners fit, points just outside do not.
        for (cx, cy) in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)] {
            assert!(l.contains_body(&k.translated(&v(&[cx, cy])), 1e-12));
        }
        assert!(!l.contains_body(&k.translated(&v(&[1.01, 0.0])), 1e-12));
    }

    #[test]
    fn identity_placement() {
        let xi = standard_simplex(3).unwrap();
        let w = translate_into(&xi, &xi).unwrap();
        assert!(w.feasible);
        assert!(w.translation.unwrap().norm() < 1e-9);
        assert!(w.margin.abs() < 1e-12);
    }

    #[test]
    fn triangle_into_reflection_fails_on_grid() {
        let d = regular_simplex(2).unwrap();
        let nd = d.reflected();
        let w = translate_into(&d, &nd).unwrap();
        assert!(!w.feasible);
        let vf = w.violated_facet.unwrap();
        assert!(vf.deficit > 0.1);

        // Brute force: 200×200 translations over a box that contains every
        // candidate (any fitting x keeps the centroids within the diameter).
        let h = nd.hrep();
        let mut any = false;
        for i in 0..200 {
            for j in 0..200 {
                let x = v(&[-1.0 + 2.0 * i as f64 / 199.0, -1.0 + 2.0 * j as f64 / 199.0]);
                if d.vertices().iter().all(|p| h.contains(&(p + &x), 1e-9)) {
                    any = true;
                }
            }
        }
        assert!(!any);
    }

    #[test]
    fn max_scale_examples() {
        let k = cube(2).unwrap();
        let l = cube(2).unwrap().scaled(1.5).unwrap();
        assert!((max_scale(&k, &l).unwrap().alpha - 1.5).abs() < 1e-9);

        // Triangle into its reflection: cross-check the LP against bisection
        // on translate_into.
        let d = regular_simplex(2).unwrap();
        let nd = d.reflected();
        let alpha = max_scale(&d, &nd).unwrap().alpha;
        let (mut lo, mut hi) = (0.0, 2.0);
        while hi - lo > 1e-9 {
            let mid = 0.5 * (lo + hi);
            if translate_into(&d.scaled(mid).unwrap(), &nd).unwrap().feasible {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((alpha - lo).abs() < 1e-6, "{alpha} vs {lo}");

        let xi = standard_simplex(3).unwrap();
        assert!(max_scale(&xi, &cap_body(3).unwrap()).unwrap().alpha >= 1.0 - 1e-12);

        let pt = Body::from_points(2, vec![v(&[1.0, 1.0])]).unwrap();
        assert!(matches!(max_scale(&pt, &l), Err(Error::PointBody)));
    }

    #[test]
    fn cover_dilate_examples() {
        for n in 2..=3 {
            let d = regular_simplex(n).unwrap();
            let lam = min_cover_dilate(&d, &d.reflected()).unwrap().lambda;
            assert!((lam - n as f64).abs() < 1e-6);
        }
        let c = cube(3).unwrap();
        assert!((min_cover_dilate(&c, &c).unwrap().lambda - 1.0).abs() < 1e-9);

        let d3 = regular_simplex(3).unwrap();
        let l = reflected_scaled(&d3, 2.0).unwrap();
        assert!((min_cover_dilate(&d3, &l).unwrap().lambda - 1.5).abs() < 1e-6);

        // The origin may sit outside L.
        let far = c.translated(&v(&[10.0, -4.0, 3.0]));
        assert!((min_cover_dilate(&c, &far).unwrap().lambda - 1.0).abs() < 1e-6);
    }

    #[test]
    fn lutwak_examples() {
        let xi = standard_simplex(3).unwrap();
        let tiny = cube(3).unwrap().scaled(0.01).unwrap();
        assert!(lutwak_simplex_contains(&xi, &tiny).unwrap());
        assert!(!lutwak_simplex_contains(&xi, &xi.scaled(2.0).unwrap()).unwrap());
        assert!(matches!(
            lutwak_simplex_contains(&cube(3).unwrap(), &tiny),
            Err(Error::NotASimplex { .. })
        ));
    }

    #[test]
    fn lutwak_matches_lp_on_random_pairs() {
        for seed in 0..40u64 {
            let n = 2 + (seed % 2) as usize;
            let t = random_polytope(n, n + 1, seed).unwrap();
            if t.vertices().len() != n + 1 {
                continue;
            }
            let k = random_polytope(n, 6, seed + 1000).unwrap().scaled(0.2 + 0.02 * seed as f64).unwrap();
            let lp = translate_into(&k, &t).unwrap().feasible;
            assert_eq!(lutwak_simplex_contains(&t, &k).unwrap(), lp, "seed {seed}");
        }
    }

    #[test]
    fn corner_examples() {
        let c = cube(3).unwrap();
        let moved = c.translated(&v(&[5.0, 5.0, 5.0]));
        assert!(corner_normalize(&moved).vertex_hausdorff(&c).unwrap() < 1e-12);
        let xi = standard_simplex(3).unwrap();
        assert!(corner_normalize(&xi).vertex_hausdorff(&xi).unwrap() == 0.0);
        let r = random_polytope(3, 9, 4).unwrap().translated(&v(&[-2.0, 0.3, 7.0]));
        let rc = corner_normalize(&r);
        for i in 0..3 {
            assert!(rc.h(&(-unit(3, i))).abs() < 1e-12);
        }
    }

    #[test]
    fn hide_behind_examples() {
        let xi = standard_simplex(3).unwrap();
        let w = hide_behind_simplex_witness(&xi).unwrap();
        assert!(w.inside_cap_body);
        assert!(w.translation.norm() < 1e-15);

        // D's coordinate shadows equal Ξ's; check that by LP first.
        let d = cap_body(3).unwrap();
        for i in 0..3 {
            let frame = complement_basis(3, &[unit(3, i)]).unwrap();
            let w = translate_into(&d.project(&frame).unwrap(), &xi.project(&frame).unwrap()).unwrap();
            assert!(w.feasible);
        }
        assert!(hide_behind_simplex_witness(&d).unwrap().inside_cap_body);

        let big = xi.scaled(1.01).unwrap();
        assert!(matches!(
            hide_behind_simplex_witness(&big),
            Err(Error::PreconditionFailed { .. })
        ));
    }
}
