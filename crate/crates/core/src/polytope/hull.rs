//! Incremental beneath-beyond convex hull in arbitrary (small) dimension.
//!
//! The hull is kept as a simplicial complex of boundary facets with neighbor
//! links across ridges. Points are inserted farthest-first from the interior
//! of the starting simplex; a point beyond at least one facet replaces the
//! visible region by the cone from the point over the horizon ridges.
//!
//! Plane tests use a single absolute epsilon, `vertex tolerance × scale`,
//! where `scale` is the largest distance from the point centroid. After
//! construction coplanar simplices are merged into true facets and points
//! that are not extreme (for example on an edge of a merged facet) are
//! pruned by re-running the hull on the survivors.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{gram_schmidt, Matrix, Vector};
use crate::tol;

/// A merged facet `normal · x ≤ offset` with unit normal.
#[derive(Debug, Clone)]
pub struct Facet {
    pub normal: Vector,
    pub offset: f64,
    /// Indices of the hull vertices lying on this facet.
    pub vertices: Vec<usize>,
    /// Indices into [`Hull::simplices`] triangulating the facet.
    pub simplices: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Simplex {
    pub vertices: Vec<usize>,
    pub normal: Vector,
    pub offset: f64,
}

/// Full-dimensional hull of a point set.
#[derive(Debug, Clone)]
pub struct Hull {
    pub dim: usize,
    pub vertices: Vec<Vector>,
    pub simplices: Vec<Simplex>,
    pub facets: Vec<Facet>,
    pub eps: f64,
}

/// Result of the affine-span analysis of a point set.
pub(crate) struct AffineSpan {
    /// Index of the base point.
    pub origin: usize,
    /// Indices chosen greedily as affinely independent.
    pub chosen: Vec<usize>,
    /// Orthonormal directions spanning the affine hull.
    pub directions: Vec<Vector>,
}

pub(crate) fn scale_of(points: &[Vector]) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let n = points[0].len();
    let mut c = Vector::zeros(n);
    for p in points {
        c += p;
    }
    c /= points.len() as f64;
    points.iter().map(|p| (p - &c).norm()).fold(0.0, f64::max)
}

pub(crate) fn eps_for(points: &[Vector]) -> f64 {
    tol::get().vertex * scale_of(points).max(1e-300)
}

/// Greedy choice of affinely independent points, farthest-from-span first.
pub(crate) fn affine_span(points: &[Vector], eps: f64) -> AffineSpan {
    let origin = (0..points.len())
        .min_by(|&a, &b| {
            points[a]
                .iter()
                .zip(points[b].iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .expect("non-empty point set");
    let n = points[origin].len();
    let mut chosen = vec![origin];
    let mut dirs: Vec<Vector> = Vec::new();
    while dirs.len() < n {
        let mut best = (0usize, -1.0f64, Vector::zeros(n));
        for (i, p) in points.iter().enumerate() {
            let mut r = p - &points[origin];
            for _ in 0..2 {
                for q in &dirs {
                    let c = q.dot(&r);
                    r.axpy(-c, q, 1.0);
                }
            }
            let d = r.norm();
            if d > best.1 {
                best = (i, d, r);
            }
        }
        if best.1 <= eps {
            break;
        }
        chosen.push(best.0);
        dirs.push(best.2 / best.1);
    }
    AffineSpan {
        origin,
        chosen,
        directions: dirs,
    }
}

/// Unit normal of the hyperplane through `pts` (exactly `n` points in `R^n`),
/// by cofactor expansion of the difference matrix.
pub(crate) fn hyperplane_normal(pts: &[&Vector]) -> Option<Vector> {
    let n = pts[0].len();
    debug_assert_eq!(pts.len(), n);
    if n == 1 {
        return Some(Vector::from_element(1, 1.0));
    }
    let diffs = Matrix::from_fn(n - 1, n, |r, c| pts[r + 1][c] - pts[0][c]);
    let mut normal = Vector::zeros(n);
    for j in 0..n {
        let minor = diffs.clone().remove_column(j);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        normal[j] = sign * minor.determinant();
    }
    let norm = normal.norm();
    if norm == 0.0 || !norm.is_finite() {
        return None;
    }
    Some(normal / norm)
}

struct Face {
    verts: Vec<usize>,
    /// `neighbors[t]` is the face across the ridge that omits `verts[t]`.
    neighbors: Vec<usize>,
    normal: Vector,
    offset: f64,
    alive: bool,
}

impl Hull {
    /// Hull of a full-dimensional point set in `R^dim`.
    pub fn build(points: &[Vector], dim: usize) -> Result<Hull> {
        if points.is_empty() {
            return Err(Error::DegenerateInput("empty point set".into()));
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
        let eps = eps_for(points);
        let first = Self::build_once(points, dim, eps)?;
        let extreme = first.extreme_mask();
        if extreme.iter().all(|e| *e) {
            return Ok(first);
        }
        let kept: Vec<Vector> = first
            .vertices
            .iter()
            .zip(&extreme)
            .filter(|(_, e)| **e)
            .map(|(v, _)| v.clone())
            .collect();
        Self::build_once(&kept, dim, eps)
    }

    fn build_once(points: &[Vector], n: usize, eps: f64) -> Result<Hull> {
        if n == 1 {
            return Self::build_interval(points, eps);
        }
        let span = affine_span(points, eps);
        if span.directions.len() < n {
            return Err(Error::DegenerateInput(format!(
                "affine hull has dimension {} < {}",
                span.directions.len(),
                n
            )));
        }
        let init = span.chosen.clone();
        let mut interior = Vector::zeros(n);
        for &i in &init {
            interior += &points[i];
        }
        interior /= (n + 1) as f64;

        let mut faces: Vec<Face> = Vec::new();
        // Face j omits init[j]; neighbor across the ridge omitting init[l] is face l.
        for j in 0..=n {
            let verts: Vec<usize> = (0..=n).filter(|&l| l != j).map(|l| init[l]).collect();
            let neighbors: Vec<usize> = (0..=n).filter(|&l| l != j).collect();
            let (normal, offset) = oriented_plane(points, &verts, &interior)
                .ok_or_else(|| Error::DegenerateInput("flat initial simplex".into()))?;
            faces.push(Face {
                verts,
                neighbors,
                normal,
                offset,
                alive: true,
            });
        }

        let mut in_init = vec![false; points.len()];
        for &i in &init {
            in_init[i] = true;
        }
        let mut order: Vec<usize> = (0..points.len()).filter(|&i| !in_init[i]).collect();
        let dist: Vec<f64> = points.iter().map(|p| (p - &interior).norm()).collect();
        order.sort_by(|&a, &b| dist[b].total_cmp(&dist[a]).then(a.cmp(&b)));

        let mut visible = Vec::new();
        let mut is_visible: Vec<bool> = Vec::new();
        for &pi in &order {
            let p = &points[pi];
            visible.clear();
            is_visible.clear();
            is_visible.resize(faces.len(), false);
            for (fi, f) in faces.iter().enumerate() {
                if f.alive && f.normal.dot(p) - f.offset > eps {
                    visible.push(fi);
                    is_visible[fi] = true;
                }
            }
            if visible.is_empty() {
                continue;
            }

            let mut ridge_map: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
            let mut created: Vec<usize> = Vec::new();
            for &fi in &visible {
                for t in 0..n {
                    let g = faces[fi].neighbors[t];
                    if is_visible[g] {
                        continue;
                    }
                    let mut verts: Vec<usize> = faces[fi]
                        .verts
                        .iter()
                        .enumerate()
                        .filter(|(s, _)| *s != t)
                        .map(|(_, v)| *v)
                        .collect();
                    verts.push(pi);
                    let (normal, offset) = oriented_plane(points, &verts, &interior)
                        .ok_or_else(|| Error::NumericalFailure("degenerate cone facet".into()))?;
                    let new_id = faces.len();
                    let mut neighbors = vec![usize::MAX; n];
                    // The apex sits last, so the ridge opposite it is the horizon ridge.
                    neighbors[n - 1] = g;
                    if let Some(slot) = faces[g].neighbors.iter().position(|&h| h == fi) {
                        faces[g].neighbors[slot] = new_id;
                    }
                    faces.push(Face {
                        verts,
                        neighbors,
                        normal,
                        offset,
                        alive: true,
                    });
                    is_visible.push(false);
                    created.push(new_id);
                }
            }
            for &fi in &visible {
                faces[fi].alive = false;
            }
            // Link the new faces to each other along ridges through the apex.
            for &nf in &created {
                for t in 0..n - 1 {
                    let mut key: Vec<usize> = faces[nf]
                        .verts
                        .iter()
                        .enumerate()
                        .filter(|(s, _)| *s != t)
                        .map(|(_, v)| *v)
                        .collect();
                    key.sort_unstable();
                    match ridge_map.remove(&key) {
                        Some((other, ot)) => {
                            faces[nf].neighbors[t] = other;
                            faces[other].neighbors[ot] = nf;
                        }
                        None => {
                            ridge_map.insert(key, (nf, t));
                        }
                    }
                }
            }
            if !ridge_map.is_empty() {
                return Err(Error::NumericalFailure(
                    "inconsistent horizon during hull construction".into(),
                ));
            }
        }

        // Compact to used vertices.
        let alive: Vec<usize> = (0..faces.len()).filter(|&f| faces[f].alive).collect();
        let mut remap = vec![usize::MAX; points.len()];
        let mut vertices = Vec::new();
        for &f in &alive {
            for &v in &faces[f].verts {
                if remap[v] == usize::MAX {
                    remap[v] = vertices.len();
                    vertices.push(points[v].clone());
                }
            }
        }
        let mut face_index = vec![usize::MAX; faces.len()];
        let mut simplices = Vec::with_capacity(alive.len());
        for (k, &f) in alive.iter().enumerate() {
            face_index[f] = k;
            simplices.push(Simplex {
                vertices: faces[f].verts.iter().map(|&v| remap[v]).collect(),
                normal: faces[f].normal.clone(),
                offset: faces[f].offset,
            });
        }

        // Union coplanar neighbors.
        let mut parent: Vec<usize> = (0..alive.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (k, &f) in alive.iter().enumerate() {
            for &g in &faces[f].neighbors {
                let kg = face_index[g];
                if kg == usize::MAX || kg <= k {
                    continue;
                }
                let coplanar = faces[f].normal.dot(&faces[g].normal) > 0.0
                    && faces[g]
                        .verts
                        .iter()
                        .all(|&v| (faces[f].normal.dot(&points[v]) - faces[f].offset).abs() <= eps)
                    && faces[f]
                        .verts
                        .iter()
                        .all(|&v| (faces[g].normal.dot(&points[v]) - faces[g].offset).abs() <= eps);
                if coplanar {
                    let (a, b) = (find(&mut parent, k), find(&mut parent, kg));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut group_of: HashMap<usize, usize> = HashMap::new();
        for k in 0..alive.len() {
            let root = find(&mut parent, k);
            let gi = *group_of.entry(root).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[gi].push(k);
        }

        let facets = groups
            .into_iter()
            .map(|members| {
                let mut normal = Vector::zeros(n);
                for &s in &members {
                    let w = simplex_measure(&vertices, &simplices[s].vertices).max(1e-300);
                    normal.axpy(w, &simplices[s].normal, 1.0);
                }
                normal /= normal.norm();
                let mut verts: Vec<usize> = members
                    .iter()
                    .flat_map(|&s| simplices[s].vertices.iter().copied())
                    .collect();
                verts.sort_unstable();
                verts.dedup();
                let offset = verts
                    .iter()
                    .map(|&v| normal.dot(&vertices[v]))
                    .fold(f64::NEG_INFINITY, f64::max);
                Facet {
                    normal,
                    offset,
                    vertices: verts,
                    simplices: members,
                }
            })
            .collect();

        Ok(Hull {
            dim: n,
            vertices,
            simplices,
            facets,
            eps,
        })
    }

    fn build_interval(points: &[Vector], eps: f64) -> Result<Hull> {
        let (mut lo, mut hi) = (0, 0);
        for (i, p) in points.iter().enumerate() {
            if p[0] < points[lo][0] {
                lo = i;
            }
            if p[0] > points[hi][0] {
                hi = i;
            }
        }
        let (a, b) = (points[lo][0], points[hi][0]);
        if b - a <= eps {
            return Err(Error::DegenerateInput(
                "affine hull has dimension 0 < 1".into(),
            ));
        }
        let vertices = vec![points[lo].clone(), points[hi].clone()];
        let simplices = vec![
            Simplex {
                vertices: vec![0],
                normal: Vector::from_element(1, -1.0),
                offset: -a,
            },
            Simplex {
                vertices: vec![1],
                normal: Vector::from_element(1, 1.0),
                offset: b,
            },
        ];
        let facets = simplices
            .iter()
            .enumerate()
            .map(|(i, s)| Facet {
                normal: s.normal.clone(),
                offset: s.offset,
                vertices: vec![i],
                simplices: vec![i],
            })
            .collect();
        Ok(Hull {
            dim: 1,
            vertices,
            simplices,
            facets,
            eps,
        })
    }

    /// A vertex is extreme when the normals of the facets through it have full rank.
    fn extreme_mask(&self) -> Vec<bool> {
        let n = self.dim;
        self.vertices
            .iter()
            .map(|v| {
                let normals: Vec<Vector> = self
                    .facets
                    .iter()
                    .filter(|f| (f.normal.dot(v) - f.offset).abs() <= self.eps)
                    .map(|f| f.normal.clone())
                    .collect();
                normals.len() >= n && gram_schmidt(&normals).len() >= n
            })
            .collect()
    }

    /// Signed-fan volume about the vertex centroid.
    pub fn volume(&self) -> f64 {
        let n = self.dim;
        let mut c = Vector::zeros(n);
        for v in &self.vertices {
            c += v;
        }
        c /= self.vertices.len() as f64;
        let fact: f64 = (1..=n).map(|i| i as f64).product();
        self.simplices
            .iter()
            .map(|s| {
                let m = Matrix::from_fn(n, n, |r, col| self.vertices[s.vertices[r]][col] - c[col]);
                m.determinant().abs()
            })
            .sum::<f64>()
            / fact
    }
}

/// `(n-1)`-volume of the simplex on the given vertex indices, via the Gram determinant.
pub(crate) fn simplex_measure(vertices: &[Vector], idx: &[usize]) -> f64 {
    let k = idx.len() - 1;
    if k == 0 {
        return 1.0;
    }
    let base = &vertices[idx[0]];
    let diffs: Vec<Vector> = idx[1..].iter().map(|&i| &vertices[i] - base).collect();
    let gram = Matrix::from_fn(k, k, |r, c| diffs[r].dot(&diffs[c]));
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    gram.determinant().max(0.0).sqrt() / fact
}

fn oriented_plane(points: &[Vector], verts: &[usize], interior: &Vector) -> Option<(Vector, f64)> {
    let pts: Vec<&Vector> = verts.iter().map(|&v| &points[v]).collect();
    let mut normal = hyperplane_normal(&pts)?;
    let mut offset = normal.dot(pts[0]);
    if normal.dot(interior) > offset {
        normal = -normal;
        offset = -offset;
    }
    Some((normal, offset))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn square_with_center_and_edge_points() {
        let pts = vec![
            v(&[0.5, 0.0]),
            v(&[0.0, 0.0]),
            v(&[1.0, 0.0]),
            v(&[1.0, 1.0]),
            v(&[0.0, 1.0]),
            v(&[0.5, 0.5]),
            v(&[0.0, 0.25]),
        ];
        let h = Hull::build(&pts, 2).unwrap();
        assert_eq!(h.vertices.len(), 4);
        assert_eq!(h.facets.len(), 4);
        assert!((h.volume() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cube_faces_merge() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push(v(&[(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64]));
        }
        pts.push(v(&[0.5, 0.5, 1.0]));
        pts.push(v(&[0.5, 0.5, 0.5]));
        let h = Hull::build(&pts, 3).unwrap();
        assert_eq!(h.vertices.len(), 8);
        assert_eq!(h.facets.len(), 6);
        assert!((h.volume() - 1.0).abs() < 1e-14);
        for f in &h.facets {
            assert_eq!(f.vertices.len(), 4);
        }
    }

    #[test]
    fn tesseract() {
        let pts: Vec<Vector> = (0..16)
            .map(|i| Vector::from_fn(4, |c, _| ((i >> c) & 1) as f64))
            .collect();
        let h = Hull::build(&pts, 4).unwrap();
        assert_eq!(h.vertices.len(), 16);
        assert_eq!(h.facets.len(), 8);
        assert!((h.volume() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn flat_input_rejected() {
        let pts = vec![v(&[0.0, 0.0, 0.0]), v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0]), v(&[1.0, 1.0, 0.0])];
        assert!(matches!(Hull::build(&pts, 3), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn interval() {
        let pts = vec![v(&[0.3]), v(&[-1.0]), v(&[2.0])];
        let h = Hull::build(&pts, 1).unwrap();
        assert_eq!(h.vertices.len(), 2);
        assert!((h.volume() - 3.0).abs() < 1e-15);
    }
}
