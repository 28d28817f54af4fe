//! Convex polytope kernel.
//!
//! [`Body`] is the working representation: an irredundant vertex list plus,
//! for full-dimensional bodies, the facet structure produced by the hull.
//! Lower-dimensional bodies (points, segments, flat projections) are allowed;
//! they carry their affine dimension and report zero measure, but volume and
//! facet queries reject them.

mod construct;
pub mod hull;
mod io;

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

pub use construct::*;
pub use io::BodyJson;

use crate::error::{Error, Result};
use crate::linalg::{complement_basis, AffineMap, Basis, Matrix, Vector};
use crate::lp;
use crate::tol;
use hull::{affine_span, eps_for, Hull};

/// Vertex description of a polytope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VPolytope {
    pub dim: usize,
    pub vertices: Vec<Vector>,
}

/// One inequality `normal · x ≤ offset`, normal of unit length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vector,
    pub offset: f64,
}

impl Halfspace {
    /// Normalizes `normal` to unit length, scaling `offset` with it.
    pub fn new(normal: Vector, offset: f64) -> Result<Halfspace> {
        let nrm = normal.norm();
        if nrm <= 1e-300 || !nrm.is_finite() || !offset.is_finite() {
            return Err(Error::BadParameter("halfspace normal must be nonzero and finite".into()));
        }
        Ok(Halfspace {
            normal: normal / nrm,
            offset: offset / nrm,
        })
    }

    pub fn slack(&self, x: &Vector) -> f64 {
        self.offset - self.normal.dot(x)
    }
}

/// Facet description of a polytope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HPolytope {
    pub dim: usize,
    pub facets: Vec<Halfspace>,
}

impl HPolytope {
    pub fn new(dim: usize, facets: Vec<Halfspace>) -> Result<HPolytope> {
        if let Some(h) = facets.iter().find(|h| h.normal.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: h.normal.len(),
            });
        }
        Ok(HPolytope { dim, facets })
    }

    pub fn contains(&self, x: &Vector, eps: f64) -> bool {
        self.facets.iter().all(|h| h.slack(x) >= -eps)
    }

    /// Constraint matrix and right-hand side.
    pub fn system(&self) -> (Matrix, Vector) {
        let m = self.facets.len();
        let a = Matrix::from_fn(m, self.dim, |r, c| self.facets[r].normal[c]);
        let b = Vector::from_fn(m, |r, _| self.facets[r].offset);
        (a, b)
    }

    /// Intersection: the union of both inequality lists (possibly redundant).
    pub fn intersect(&self, other: &HPolytope) -> Result<HPolytope> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut facets = self.facets.clone();
        facets.extend(other.facets.iter().cloned());
        Ok(HPolytope {
            dim: self.dim,
            facets,
        })
    }

    /// Drops inequalities implied by the others (LP check per row).
    pub fn remove_redundant(&self) -> Result<HPolytope> {
        let eps = tol::get().vertex;
        let mut keep: Vec<Halfspace> = self.facets.clone();
        let mut i = 0;
        while i < keep.len() {
            let others: Vec<&Halfspace> = keep
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, h)| h)
                .collect();
            let redundant = if others.is_empty() {
                false
            } else {
                let a = Matrix::from_fn(others.len(), self.dim, |r, c| others[r].normal[c]);
                let b = Vector::from_fn(others.len(), |r, _| others[r].offset);
                let lp = lp::LinearProgram::new(a, b, keep[i].normal.clone(), lp::Sense::Maximize)?;
                let out = lp::solve(&lp)?;
                out.status == lp::LpStatus::Optimal
                    && out.objective <= keep[i].offset + eps * (1.0 + keep[i].offset.abs())
            };
            if redundant {
                keep.remove(i);
            } else {
                i += 1;
            }
        }
        Ok(HPolytope {
            dim: self.dim,
            facets: keep,
        })
    }
}

/// Facet record of a full-dimensional body.
#[derive(Debug, Clone)]
pub struct FacetInfo {
    pub normal: Vector,
    pub offset: f64,
    /// Indices into [`Body::vertices`].
    pub vertices: Vec<usize>,
}

#[derive(Debug)]
struct Structure {
    hull: Hull,
}

/// A convex polytope.
///
/// Immutable once built; the H-representation is derived on first use.
#[derive(Debug, Clone)]
pub struct Body {
    dim: usize,
    vertices: Vec<Vector>,
    affine_dim: usize,
    structure: Option<Arc<Structure>>,
    hrep: Arc<OnceLock<HPolytope>>,
    name: Option<String>,
}

/// Strict hull: the input must affinely span `R^dim`.
pub fn hull(points: &[Vector], dim: usize) -> Result<VPolytope> {
    let h = Hull::build(points, dim)?;
    Ok(VPolytope {
        dim,
        vertices: h.vertices,
    })
}

/// Facet description of a full-dimensional V-polytope.
pub fn to_hrep(p: &VPolytope) -> Result<HPolytope> {
    Ok(Body::full(p.dim, p.vertices.clone())?.hrep().clone())
}

/// Vertex enumeration by polarity about a Chebyshev center.
///
/// With `c` strictly inside, each facet `a·x ≤ b` maps to the polar point
/// `a / (b - a·c)`; facets of the polar hull map back to vertices.
pub fn to_vrep(h: &HPolytope) -> Result<VPolytope> {
    let n = h.dim;
    if h.facets.len() <= n {
        return Err(Error::Unbounded);
    }
    let (a, b) = h.system();
    let (center, margin) = lp::max_min_slack(&a, &b)?;
    if margin <= tol::get().vertex * (1.0 + b.amax()) {
        return Err(Error::DegenerateInput(
            "H-polytope is empty or not full-dimensional".into(),
        ));
    }
    let polar: Vec<Vector> = h
        .facets
        .iter()
        .map(|f| &f.normal / (f.offset - f.normal.dot(&center)))
        .collect();
    let ph = match Hull::build(&polar, n) {
        Ok(ph) => ph,
        Err(Error::DegenerateInput(_)) => return Err(Error::Unbounded),
        Err(e) => return Err(e),
    };
    let mut vertices = Vec::with_capacity(ph.facets.len());
    for f in &ph.facets {
        if f.offset <= ph.eps {
            return Err(Error::Unbounded);
        }
        vertices.push(&center + &f.normal / f.offset);
    }
    Ok(VPolytope { dim: n, vertices })
}

impl Body {
    /// Builds a body from any finite point set in `R^dim`; lower-dimensional
    /// inputs are accepted and recorded as such.
    pub fn from_points(dim: usize, points: Vec<Vector>) -> Result<Body> {
        if dim == 0 {
            return Err(Error::BadParameter("dimension must be positive".into()));
        }
        if points.is_empty() {
            return Err(Error::DegenerateInput("a body needs at least one point".into()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.len(),
            });
        }
        if points.iter().any(|p| p.iter().any(|c| !c.is_finite())) {
            return Err(Error::DegenerateInput("non-finite coordinate".into()));
        }
        let eps = eps_for(&points);
        let span = affine_span(&points, eps);
        let k = span.directions.len();
        if k == dim {
            let hull = Hull::build(&points, dim)?;
            return Ok(Body {
                dim,
                vertices: hull.vertices.clone(),
                affine_dim: dim,
                structure: Some(Arc::new(Structure { hull })),
                hrep: Arc::new(OnceLock::new()),
                name: None,
            });
        }
        let vertices = if k == 0 {
            vec![points[span.origin].clone()]
        } else {
            let origin = &points[span.origin];
            let coords: Vec<Vector> = points
                .iter()
                .map(|p| {
                    let d = p - origin;
                    Vector::from_iterator(k, span.directions.iter().map(|q| q.dot(&d)))
                })
                .collect();
            let sub = Hull::build(&coords, k)?;
            sub.vertices
                .iter()
                .map(|c| {
                    let mut x = origin.clone();
                    for (ci, q) in c.iter().zip(&span.directions) {
                        x.axpy(*ci, q, 1.0);
                    }
                    x
                })
                .collect()
        };
        Ok(Body {
            dim,
            vertices,
            affine_dim: k,
            structure: None,
            hrep: Arc::new(OnceLock::new()),
            name: None,
        })
    }

    /// Like [`Body::from_points`] but rejects lower-dimensional input.
    pub fn full(dim: usize, points: Vec<Vector>) -> Result<Body> {
        let b = Body::from_points(dim, points)?;
        if !b.is_full_dimensional() {
            return Err(Error::DegenerateInput(format!(
                "affine hull has dimension {} < {}",
                b.affine_dim, dim
            )));
        }
        Ok(b)
    }

    pub fn from_vpolytope(p: &VPolytope) -> Result<Body> {
        Body::from_points(p.dim, p.vertices.clone())
    }

    pub fn from_hpolytope(h: &HPolytope) -> Result<Body> {
        Body::from_vpolytope(&to_vrep(h)?)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Body {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.dim
    }

    pub fn is_point(&self) -> bool {
        self.affine_dim == 0
    }

    pub fn to_vpolytope(&self) -> VPolytope {
        VPolytope {
            dim: self.dim,
            vertices: self.vertices.clone(),
        }
    }

    /// Vertex centroid; strictly interior for full-dimensional bodies.
    pub fn interior_point(&self) -> Vector {
        let mut c = Vector::zeros(self.dim);
        for v in &self.vertices {
            c += v;
        }
        c / self.vertices.len() as f64
    }

    /// Largest vertex distance from the centroid.
    pub fn scale(&self) -> f64 {
        hull::scale_of(&self.vertices)
    }

    /// Absolute plane tolerance for this body.
    pub fn eps(&self) -> f64 {
        tol::get().vertex * self.scale().max(1.0)
    }

    fn structure(&self) -> Result<&Structure> {
        self.structure.as_deref().ok_or_else(|| {
            Error::DegenerateInput(format!(
                "body has affine dimension {} < {}",
                self.affine_dim, self.dim
            ))
        })
    }

    /// `n`-dimensional volume.
    pub fn volume(&self) -> Result<f64> {
        Ok(self.structure()?.hull.volume())
    }

    /// Volume, or zero for lower-dimensional bodies.
    pub fn measure(&self) -> f64 {
        self.structure.as_ref().map_or(0.0, |s| s.hull.volume())
    }

    /// `h_B(v) = max_x x·v` with the argmax vertex set (within `1e-9`).
    pub fn support(&self, v: &Vector) -> Result<(f64, Vec<usize>)> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        if v.amax() == 0.0 {
            return Err(Error::ZeroDirection);
        }
        let h = self.h(v);
        let eps = tol::get().vertex * v.norm() * self.scale().max(1.0);
        let arg = (0..self.vertices.len())
            .filter(|&i| self.vertices[i].dot(v) >= h - eps)
            .collect();
        Ok((h, arg))
    }

    /// Support function value without the argmax bookkeeping.
    pub fn h(&self, v: &Vector) -> f64 {
        self.vertices
            .iter()
            .map(|x| x.dot(v))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Merged facets (full-dimensional bodies only).
    pub fn facets(&self) -> Result<Vec<FacetInfo>> {
        let s = self.structure()?;
        Ok(s
            .hull
            .facets
            .iter()
            .map(|f| FacetInfo {
                normal: f.normal.clone(),
                offset: f.offset,
                vertices: f.vertices.clone(),
            })
            .collect())
    }

    /// H-representation, derived once and cached.
    pub fn hrep(&self) -> &HPolytope {
        self.hrep.get_or_init(|| {
            let facets = match &self.structure {
                Some(s) => s
                    .hull
                    .facets
                    .iter()
                    .map(|f| Halfspace {
                        normal: f.normal.clone(),
                        offset: f.offset,
                    })
                    .collect(),
                None => Vec::new(),
            };
            HPolytope {
                dim: self.dim,
                facets,
            }
        })
    }

    /// `(n-1)`-volume of each facet, measured by projecting the facet into
    /// its own hyperplane and taking the hull volume there.
    pub fn facet_measures(&self) -> Result<Vec<(Vector, f64)>> {
        let s = self.structure()?;
        let n = self.dim;
        s.hull
            .facets
            .iter()
            .map(|f| {
                let area = if n == 1 {
                    1.0
                } else {
                    let frame = complement_basis(n, std::slice::from_ref(&f.normal))?;
                    let pts: Vec<Vector> = f.vertices.iter().map(|&i| frame.coords(&self.vertices[i])).collect();
                    Hull::build(&pts, n - 1)?.volume()
                };
                Ok((f.normal.clone(), area))
            })
            .collect()
    }

    /// Simplicial boundary pieces (vertex index lists), for diagnostics.
    pub fn boundary_simplices(&self) -> Result<Vec<Vec<usize>>> {
        Ok(self.structure()?.hull.simplices.iter().map(|s| s.vertices.clone()).collect())
    }

    fn check_dim(&self, other: &Body) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }

    /// `A + B`: hull of all pairwise vertex sums.
    pub fn minkowski_sum(&self, other: &Body) -> Result<Body> {
        self.check_dim(other)?;
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(a + b);
            }
        }
        Body::from_points(self.dim, pts)
    }

    /// `a·A + b·B` for nonnegative coefficients.
    pub fn combination(&self, a: f64, other: &Body, b: f64) -> Result<Body> {
        if a < 0.0 || b < 0.0 {
            return Err(Error::BadParameter("Minkowski coefficients must be nonnegative".into()));
        }
        self.scaled(a)?.minkowski_sum(&other.scaled(b)?)
    }

    /// `λ·B` about the origin, `λ ≥ 0`.
    pub fn scaled(&self, factor: f64) -> Result<Body> {
        if !factor.is_finite() || factor < 0.0 {
            return Err(Error::BadParameter(format!("scale factor {factor} must be finite and ≥ 0")));
        }
        if factor == 0.0 {
            return Body::from_points(self.dim, vec![Vector::zeros(self.dim)]);
        }
        Ok(self.map_vertices(|x| x * factor))
    }

    /// `B + x`.
    pub fn translated(&self, x: &Vector) -> Body {
        self.map_vertices(|v| v + x)
    }

    /// `-B`.
    pub fn reflected(&self) -> Body {
        self.map_vertices(|v| -v)
    }

    /// Image under a map that keeps the vertices in convex position.
    fn map_vertices<F: Fn(&Vector) -> Vector>(&self, f: F) -> Body {
        let pts: Vec<Vector> = self.vertices.iter().map(f).collect();
        // Points remain in convex position, so rebuilding cannot fail.
        let mut b = Body::from_points(self.dim, pts).expect("image of a valid body");
        b.name = None;
        b
    }

    /// `ψ(B)` for nonsingular affine `ψ`.
    pub fn affine_image(&self, psi: &AffineMap) -> Result<Body> {
        if psi.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: psi.dim(),
            });
        }
        let det = psi.det();
        if det.abs() <= tol::get().det {
            return Err(Error::SingularMap { det });
        }
        Body::from_points(self.dim, self.vertices.iter().map(|v| psi.apply(v)).collect())
    }

    /// Orthogonal projection onto the subspace spanned by `basis`, returned
    /// in the basis coordinates.
    pub fn project(&self, basis: &Basis) -> Result<Body> {
        if basis.ambient() != self.dim {
            return Err(Error::BadBasis(format!(
                "basis lives in R^{} but body in R^{}",
                basis.ambient(),
                self.dim
            )));
        }
        if basis.dim() == 0 || basis.dim() >= self.dim {
            return Err(Error::BadBasis(format!(
                "subspace dimension {} must lie in 1..{}",
                basis.dim(),
                self.dim
            )));
        }
        let pts = self.vertices.iter().map(|v| basis.coords(v)).collect();
        Body::from_points(basis.dim(), pts)
    }

    /// Convex hull of the union of two bodies.
    pub fn hull_with(&self, other: &Body) -> Result<Body> {
        self.check_dim(other)?;
        let mut pts = self.vertices.clone();
        pts.extend(other.vertices.iter().cloned());
        Body::from_points(self.dim, pts)
    }

    /// Intersection of two full-dimensional bodies.
    pub fn intersection(&self, other: &Body) -> Result<Body> {
        self.check_dim(other)?;
        Body::from_hpolytope(&self.hrep().intersect(other.hrep())?)
    }

    /// Whether every vertex of `other` satisfies this body's facets.
    pub fn contains_body(&self, other: &Body, eps: f64) -> bool {
        let h = self.hrep();
        other.vertices.iter().all(|v| h.contains(v, eps))
    }

    /// Hausdorff distance between the two vertex sets. It bounds the
    /// Hausdorff distance between the bodies from above and is zero exactly
    /// when they coincide.
    pub fn vertex_hausdorff(&self, other: &Body) -> Result<f64> {
        self.check_dim(other)?;
        Ok(vertex_hausdorff(&self.vertices, &other.vertices))
    }
}

/// Hausdorff distance between two finite point sets.
pub fn vertex_hausdorff(a: &[Vector], b: &[Vector]) -> f64 {
    let one_way = |x: &[Vector], y: &[Vector]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}
