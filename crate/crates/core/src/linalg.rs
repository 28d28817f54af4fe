//! Dense small-dimension linear algebra.
//!
//! Everything here works on `nalgebra` dynamic vectors and matrices; the
//! dimensions this crate cares about are at most around ten.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// An orthonormal frame spanning a linear subspace of `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Basis {
    ambient: usize,
    vectors: Vec<Vector>,
}

impl Basis {
    /// Wraps `vectors` after checking they are orthonormal in `R^ambient`.
    pub fn new(ambient: usize, vectors: Vec<Vector>) -> Result<Basis> {
        let b = Basis { ambient, vectors };
        b.check()?;
        Ok(b)
    }

    fn check(&self) -> Result<()> {
        // Orthonormality is checked loosely here; producers in this module
        // guarantee the tight 1e-12 bound.
        let eps = 1e-9;
        for (i, v) in self.vectors.iter().enumerate() {
            if v.len() != self.ambient {
                return Err(Error::BadBasis(format!(
                    "vector {i} has length {} in ambient dimension {}",
                    v.len(),
                    self.ambient
                )));
            }
            for (j, w) in self.vectors.iter().enumerate().skip(i) {
                let expect = if i == j { 1.0 } else { 0.0 };
                if (v.dot(w) - expect).abs() > eps {
                    return Err(Error::BadBasis(format!("<v{i}, v{j}> = {}", v.dot(w))));
                }
            }
        }
        Ok(())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    /// Coordinates of the orthogonal projection of `x` with respect to this frame.
    pub fn coords(&self, x: &Vector) -> Vector {
        Vector::from_iterator(self.dim(), self.vectors.iter().map(|b| b.dot(x)))
    }

    /// Embeds subspace coordinates back into `R^n`.
    pub fn lift(&self, w: &Vector) -> Vector {
        let mut x = Vector::zeros(self.ambient);
        for (c, b) in w.iter().zip(&self.vectors) {
            x.axpy(*c, b, 1.0);
        }
        x
    }

    /// Orthogonal projector `Q Qᵀ` onto the subspace.
    pub fn projector(&self) -> Matrix {
        let mut p = Matrix::zeros(self.ambient, self.ambient);
        for b in &self.vectors {
            p += b * b.transpose();
        }
        p
    }

    /// Frame vectors as the columns of an `n × k` matrix.
    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_columns(&self.vectors)
    }
}

/// `x ↦ matrix · x + shift`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub matrix: Matrix,
    pub shift: Vector,
}

impl AffineMap {
    pub fn new(matrix: Matrix, shift: Vector) -> Result<AffineMap> {
        if !matrix.is_square() || matrix.nrows() != shift.len() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                got: shift.len(),
            });
        }
        Ok(AffineMap { matrix, shift })
    }

    pub fn linear(matrix: Matrix) -> AffineMap {
        let n = matrix.nrows();
        AffineMap {
            matrix,
            shift: Vector::zeros(n),
        }
    }

    pub fn identity(n: usize) -> AffineMap {
        AffineMap::linear(Matrix::identity(n, n))
    }

    pub fn scaling(n: usize, factor: f64) -> AffineMap {
        AffineMap::linear(Matrix::identity(n, n) * factor)
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn det(&self) -> f64 {
        self.matrix.determinant()
    }

    pub fn is_singular(&self) -> bool {
        self.det().abs() <= tol::get().det
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        &self.matrix * x + &self.shift
    }

    /// Applies only the linear part (directions transform without the shift).
    pub fn apply_linear(&self, v: &Vector) -> Vector {
        &self.matrix * v
    }
}

/// Modified Gram–Schmidt with one re-orthogonalization pass.
///
/// Vectors whose residual after projection falls below the rank tolerance
/// (relative to their own length when that exceeds one) are dropped.
pub fn gram_schmidt(vs: &[Vector]) -> Vec<Vector> {
    let eps = tol::get().rank;
    let mut out: Vec<Vector> = Vec::with_capacity(vs.len());
    for v in vs {
        let scale = v.norm().max(1.0);
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &out {
                let c = q.dot(&r);
                r.axpy(-c, q, 1.0);
            }
        }
        let norm = r.norm();
        if norm > eps * scale {
            out.push(r / norm);
        }
    }
    out
}

/// Orthonormal basis of the span of `vs`, as a [`Basis`].
pub fn span_basis(ambient: usize, vs: &[Vector]) -> Result<Basis> {
    if let Some(v) = vs.iter().find(|v| v.len() != ambient) {
        return Err(Error::DimensionMismatch {
            expected: ambient,
            got: v.len(),
        });
    }
    Ok(Basis {
        ambient,
        vectors: gram_schmidt(vs),
    })
}

/// Orthonormal basis of the orthogonal complement of `span(vs)`.
///
/// The inputs must be linearly independent. The result is deterministic: the
/// complement is completed from the standard basis in index order.
pub fn complement_basis(ambient: usize, vs: &[Vector]) -> Result<Basis> {
    if let Some(v) = vs.iter().find(|v| v.len() != ambient) {
        return Err(Error::DimensionMismatch {
            expected: ambient,
            got: v.len(),
        });
    }
    let k = vs.len();
    let span = gram_schmidt(vs);
    if span.len() < k {
        return Err(Error::RankDeficient);
    }
    let mut all = span;
    for i in 0..ambient {
        if all.len() == ambient {
            break;
        }
        let mut r = Vector::zeros(ambient);
        r[i] = 1.0;
        for _ in 0..2 {
            for q in &all {
                let c = q.dot(&r);
                r.axpy(-c, q, 1.0);
            }
        }
        let norm = r.norm();
        // A coordinate axis always keeps at least 1/sqrt(n) of its length
        // against some subspace; 1e-6 only rejects axes already in the span.
        if norm > 1e-6 {
            all.push(r / norm);
        }
    }
    Ok(Basis {
        ambient,
        vectors: all.split_off(k),
    })
}

/// Seeded rotation: a standard-normal matrix orthonormalized by QR, with
/// column signs fixed so `R` has a positive diagonal and `det Q = +1`.
pub fn random_rotation(n: usize, seed: u64) -> AffineMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_rotation_with(n, &mut rng)
}

pub(crate) fn random_rotation_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> AffineMap {
    assert!(n >= 1, "rotation dimension must be positive");
    let g = Matrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    AffineMap::linear(q)
}

pub(crate) fn random_unit<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vector {
    loop {
        let v = Vector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = v.norm();
        if norm > 1e-6 {
            return v / norm;
        }
    }
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn solve_linear(a: &Matrix, b: &Vector) -> Result<Vector> {
    let m = a.nrows();
    if !a.is_square() || b.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: b.len(),
        });
    }
    let mut aug = a.clone();
    let mut rhs = b.clone();
    let threshold = tol::get().pivot;
    for col in 0..m {
        let (piv_row, piv) = (col..m)
            .map(|r| (r, aug[(r, col)].abs()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if piv < threshold {
            return Err(Error::Singular { pivot: piv });
        }
        aug.swap_rows(col, piv_row);
        rhs.swap_rows(col, piv_row);
        for r in col + 1..m {
            let f = aug[(r, col)] / aug[(col, col)];
            if f != 0.0 {
                for c in col..m {
                    aug[(r, c)] -= f * aug[(col, c)];
                }
                rhs[r] -= f * rhs[col];
            }
        }
    }
    let mut x = Vector::zeros(m);
    for r in (0..m).rev() {
        let mut s = rhs[r];
        for c in r + 1..m {
            s -= aug[(r, c)] * x[c];
        }
        x[r] = s / aug[(r, r)];
    }
    Ok(x)
}

/// 2-norm condition number estimate from the singular values.
pub fn condition_estimate(a: &Matrix) -> f64 {
    let sv = a.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Numerical rank of a set of vectors (number kept by Gram–Schmidt).
pub fn rank(vs: &[Vector]) -> usize {
    gram_schmidt(vs).len()
}

/// Unit coordinate vector `e_i` in `R^n`.
pub fn unit(n: usize, i: usize) -> Vector {
    let mut e = Vector::zeros(n);
    e[i] = 1.0;
    e
}
