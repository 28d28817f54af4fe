//! Steiner polynomials and mixed volumes.
//!
//! `V(K + sL) = Σ_i C(n,i) s^i V_{n-i,i}(K, L)` is fitted from exact volumes at
//! the nodes `s = 0..n`. The first mixed volume is also available through the
//! facet formula `V_{n-1,1}(P, K) = (1/n) Σ_u h_K(u) V_{n-1}(P^u)`, which
//! gives an independent cross-check.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{solve_linear, Matrix, Vector};
use crate::polytope::Body;

/// Largest dimension where the Vandermonde fit stays well conditioned.
pub const MAX_FIT_DIM: usize = 6;

const RESIDUAL_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteinerCoefficients {
    pub n: usize,
    /// `values[i] = V_{n-i,i}(K, L)`; `values[0] = V(K)`, `values[n] = V(L)`.
    pub values: Vec<f64>,
    /// Relative mismatch at the extra node `s = n + 1`.
    pub residual: f64,
}

impl SteinerCoefficients {
    /// `V(K + sL)` from the fitted coefficients.
    pub fn eval(&self, s: f64) -> f64 {
        let n = self.n;
        (0..=n)
            .map(|i| binom(n, i) * s.powi(i as i32) * self.values[i])
            .sum()
    }
}

pub(crate) fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

fn sum_measure(k: &Body, l: &Body, s: f64) -> Result<f64> {
    if s == 0.0 {
        return Ok(k.measure());
    }
    Ok(k.minkowski_sum(&l.scaled(s)?)?.measure())
}

/// Fits the Steiner polynomial of `(k, l)` and validates it at one extra node.
pub fn steiner_fit(k: &Body, l: &Body) -> Result<SteinerCoefficients> {
    let n = k.dim();
    if l.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: l.dim() });
    }
    if n > MAX_FIT_DIM {
        return Err(Error::IllConditioned(n));
    }
    let ys = (0..=n + 1)
        .into_par_iter()
        .map(|s| sum_measure(k, l, s as f64))
        .collect::<Result<Vec<f64>>>()?;

    let vand = Matrix::from_fn(n + 1, n + 1, |r, c| (r as f64).powi(c as i32));
    let rhs = Vector::from_iterator(n + 1, ys[..=n].iter().copied());
    let coef = solve_linear(&vand, &rhs)?;
    let values: Vec<f64> = (0..=n).map(|i| coef[i] / binom(n, i)).collect();

    let check = ys[n + 1];
    let predicted: f64 = (0..=n).map(|i| coef[i] * ((n + 1) as f64).powi(i as i32)).sum();
    let residual = (predicted - check).abs() / check.abs().max(f64::MIN_POSITIVE);
    let residual = if check == 0.0 && predicted.abs() < 1e-300 { 0.0 } else { residual };
    if residual > RESIDUAL_TOL {
        return Err(Error::NumericalFailure(format!(
            "Steiner fit residual {residual:.3e} exceeds {RESIDUAL_TOL:e}"
        )));
    }
    Ok(SteinerCoefficients { n, values, residual })
}

/// `V_{n-1,1}(P, K)` by summing `h_K` against facet areas of `P`.
pub fn base_height_mixed(p: &Body, k: &Body) -> Result<f64> {
    let n = p.dim();
    if k.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: k.dim() });
    }
    let total: f64 = p
        .facet_measures()?
        .iter()
        .map(|(u, area)| k.h(u) * area)
        .sum();
    Ok(total / n as f64)
}

/// Dense polynomial, coefficients in increasing degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| i as f64 * c)
                .collect(),
        )
    }

    fn scale(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    fn degree(&self, eps: f64) -> Option<usize> {
        self.0.iter().rposition(|c| c.abs() > eps)
    }

    /// Real roots in `[a, b]`, isolated between critical points and
    /// refined by bisection.
    pub fn roots_in(&self, a: f64, b: f64) -> Vec<f64> {
        let eps = 1e-13 * self.scale().max(f64::MIN_POSITIVE);
        let Some(deg) = self.degree(eps) else {
            return Vec::new();
        };
        if deg == 0 {
            return Vec::new();
        }
        if deg == 1 {
            let r = -self.0[0] / self.0[1];
            return if (a..=b).contains(&r) { vec![r] } else { Vec::new() };
        }
        let mut knots = vec![a];
        knots.extend(self.derivative().roots_in(a, b).into_iter().filter(|&c| c > a && c < b));
        knots.push(b);

        let mut roots: Vec<f64> = Vec::new();
        for w in knots.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let (flo, fhi) = (self.eval(lo), self.eval(hi));
            if flo.abs() <= eps {
                roots.push(lo);
            }
            if flo * fhi < 0.0 && fhi.abs() > eps {
                roots.push(self.bisect(lo, hi));
            }
        }
        if self.eval(b).abs() <= eps {
            roots.push(b);
        }
        roots.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
        roots
    }

    fn bisect(&self, mut lo: f64, mut hi: f64) -> f64 {
        let slo = self.eval(lo).signum();
        while hi - lo > 1e-15 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eval(mid).signum() == slo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// `f(t) = V((1-t)K + tT)` as a polynomial in `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpFamily {
    pub steiner: SteinerCoefficients,
    pub poly: Poly,
}

impl InterpFamily {
    pub fn new(k: &Body, t: &Body) -> Result<InterpFamily> {
        let steiner = steiner_fit(k, t)?;
        Ok(InterpFamily::from_steiner(steiner))
    }

    /// Expands `Σ_i C(n,i) (1-t)^{n-i} t^i V_{n-i,i}` into monomials.
    pub fn from_steiner(steiner: SteinerCoefficients) -> InterpFamily {
        let n = steiner.n;
        let mut coef = vec![0.0; n + 1];
        for i in 0..=n {
            let w = binom(n, i) * steiner.values[i];
            for j in 0..=n - i {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                coef[i + j] += w * binom(n - i, j) * sign;
            }
        }
        InterpFamily { steiner, poly: Poly(coef) }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.poly.eval(t)
    }

    pub fn deriv(&self, t: f64) -> f64 {
        self.poly.derivative().eval(t)
    }

    /// `f'(1) = n V(T) - n V_{1,n-1}(K, T)`.
    pub fn f_prime_one(&self) -> f64 {
        let n = self.steiner.n;
        n as f64 * (self.steiner.values[n] - self.steiner.values[n - 1])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpOptimum {
    pub t: f64,
    pub value: f64,
    pub family: InterpFamily,
}

/// Maximizes `V((1-t)K + tT)` over `t ∈ [0, 1]`.
///
/// Ties within `1e-12` relative go to `t = 1`, so a flat family reports the
/// target body itself.
pub fn optimize_interp(k: &Body, t: &Body) -> Result<InterpOptimum> {
    let family = InterpFamily::new(k, t)?;
    let mut cands = vec![0.0, 1.0];
    cands.extend(family.poly.derivative().roots_in(0.0, 1.0));
    let best = cands
        .iter()
        .map(|&c| (c, family.eval(c)))
        .fold((f64::NAN, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b });
    let at_one = family.eval(1.0);
    let (t_star, value) = if at_one >= best.1 - 1e-12 * best.1.abs().max(1.0) {
        (1.0, at_one)
    } else {
        best
    };
    Ok(InterpOptimum { t: t_star, value, family })
}

/// `V((1-t)K + tL)^{1/n} - (1-t)V(K)^{1/n} - t V(L)^{1/n}`, nonnegative by
/// Brunn–Minkowski.
pub fn brunn_minkowski_gap(k: &Body, l: &Body, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::BadParameter(format!("t = {t} outside [0, 1]")));
    }
    if t == 0.0 || t == 1.0 {
        return Ok(0.0);
    }
    let n = k.dim() as f64;
    let mix = k.combination(1.0 - t, l, t)?.measure();
    Ok(mix.powf(1.0 / n) - (1.0 - t) * k.measure().powf(1.0 / n) - t * l.measure().powf(1.0 / n))
}

/// `V(K - K) / V(K)`.
pub fn rogers_shephard_ratio(k: &Body) -> Result<f64> {
    let vol = k.measure();
    if vol <= 0.0 {
        return Err(Error::ZeroVolume);
    }
    Ok(k.minkowski_sum(&k.reflected())?.measure() / vol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit;
    use crate::polytope::{cross_polytope, cube, random_polytope, reflected_scaled, regular_simplex, standard_simplex};
    use proptest::prelude::*;

    fn segment(n: usize, i: usize) -> Body {
        Body::from_points(n, vec![Vector::zeros(n), unit(n, i)]).unwrap()
    }

    #[test]
    fn square_and_segment() {
        let s = steiner_fit(&cube(2).unwrap(), &segment(2, 0)).unwrap();
        assert!((s.values[0] - 1.0).abs() < 1e-12);
        assert!((s.values[1] - 0.5).abs() < 1e-12);
        assert!(s.values[2].abs() < 1e-12);
    }

    #[test]
    fn cube_with_itself() {
        let c = cube(3).unwrap();
        let s = steiner_fit(&c, &c).unwrap();
        for v in &s.values {
            assert!((v - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn too_many_dimensions() {
        let c = cube(7).unwrap();
        assert!(matches!(steiner_fit(&c, &c), Err(Error::IllConditioned(7))));
    }

    #[test]
    fn tetrahedron_difference_body() {
        // V(Δ - Δ) = 20 V(Δ) and the Steiner expansion is symmetric, so
        // V_{2,1}(Δ, -Δ) = V_{1,2}(Δ, -Δ) = 3 V(Δ).
        let d = regular_simplex(3).unwrap();
        let v = d.volume().unwrap();
        let s = steiner_fit(&d, &d.reflected()).unwrap();
        assert!((s.values[1] / v - 3.0).abs() < 1e-8);
        assert!((s.values[2] / v - 3.0).abs() < 1e-8);
        assert!((rogers_shephard_ratio(&d).unwrap() - 20.0).abs() < 1e-8);
    }

    #[test]
    fn facet_formula_agrees() {
        let k = cube(3).unwrap();
        let l = cross_polytope(3).unwrap();
        let s = steiner_fit(&k, &l).unwrap();
        let b = base_height_mixed(&k, &l).unwrap();
        assert!((s.values[1] - b).abs() <= 1e-8 * b.abs());
        // Cross-polytope vs square cube: each face contributes h = 1.
        assert!((b - 2.0).abs() < 1e-10);
    }

    #[test]
    fn facet_formula_own_volume() {
        let c = cube(3).unwrap();
        assert!((base_height_mixed(&c, &c).unwrap() - 1.0).abs() < 1e-12);
        for n in 2..=4 {
            let d = regular_simplex(n).unwrap();
            let v = d.volume().unwrap();
            assert!((base_height_mixed(&d, &d).unwrap() - v).abs() < 1e-12 * v.max(1.0));
        }
    }

    #[test]
    fn interp_tetrahedron_case() {
        // K = Δ, T = -2Δ: f(t) ∝ (1 + 15t + 3t² - 11t³) with maximizer
        // (1 + √56)/11.
        let d = regular_simplex(3).unwrap();
        let l = reflected_scaled(&d, 2.0).unwrap();
        let opt = optimize_interp(&d, &l).unwrap();
        let expected = (1.0 + 56f64.sqrt()) / 11.0;
        assert!((opt.t - expected).abs() < 1e-9, "{}", opt.t);
        let v = d.volume().unwrap();
        for t in [0.0, 0.3, 0.7, 1.0] {
            let poly = v * (1.0 + 15.0 * t + 3.0 * t * t - 11.0 * t * t * t);
            assert!((opt.family.eval(t) - poly).abs() < 1e-9 * poly);
        }
        // f'(1) = 15 + 6 - 33 = -12, in units of V(Δ).
        assert!((opt.family.f_prime_one() / v + 12.0).abs() < 1e-8);
    }

    #[test]
    fn interp_ties_go_to_target() {
        let c = cube(2).unwrap();
        let opt = optimize_interp(&c, &c).unwrap();
        assert_eq!(opt.t, 1.0);
    }

    #[test]
    fn interp_matches_direct_volume() {
        let k = random_polytope(3, 7, 3).unwrap();
        let t = standard_simplex(3).unwrap();
        let fam = InterpFamily::new(&k, &t).unwrap();
        for tt in [0.1, 0.5, 0.9] {
            let direct = k.combination(1.0 - tt, &t, tt).unwrap().measure();
            assert!((fam.eval(tt) - direct).abs() < 1e-9 * direct);
        }
        let h = 1e-5;
        let fd = (fam.eval(1.0) - fam.eval(1.0 - h)) / h;
        assert!((fam.f_prime_one() - fam.deriv(1.0)).abs() < 1e-9 * fam.f_prime_one().abs().max(1.0));
        assert!((fd - fam.deriv(1.0)).abs() < 1e-3 * fam.deriv(1.0).abs().max(1.0));
    }

    #[test]
    fn poly_roots() {
        // (t - 0.2)(t - 0.5)(t - 0.9)
        let p = Poly(vec![-0.09, 0.73, -1.6, 1.0]);
        let r = p.roots_in(0.0, 1.0);
        assert_eq!(r.len(), 3);
        for (got, want) in r.iter().zip([0.2, 0.5, 0.9]) {
            assert!((got - want).abs() < 1e-12);
        }
        // Double root at 0.5.
        let q = Poly(vec![0.25, -1.0, 1.0]);
        let r = q.roots_in(0.0, 1.0);
        assert_eq!(r.len(), 1);
        assert!((r[0] - 0.5).abs() < 1e-12);
        assert!(Poly(vec![0.0, 0.0]).roots_in(0.0, 1.0).is_empty());
    }

    #[test]
    fn gap_examples() {
        let c = cube(2).unwrap();
        assert!(brunn_minkowski_gap(&c, &c, 0.5).unwrap().abs() < 1e-12);
        assert_eq!(brunn_minkowski_gap(&c, &c, 0.0).unwrap(), 0.0);
        assert!(matches!(brunn_minkowski_gap(&c, &c, 1.5), Err(Error::BadParameter(_))));
    }

    #[test]
    fn rs_examples() {
        let c = cube(3).unwrap();
        assert!((rogers_shephard_ratio(&c).unwrap() - 8.0).abs() < 1e-10);
        let t = regular_simplex(2).unwrap();
        assert!((rogers_shephard_ratio(&t).unwrap() - 6.0).abs() < 1e-10);
        let seg = segment(2, 0);
        assert!(matches!(rogers_shephard_ratio(&seg), Err(Error::ZeroVolume)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn steiner_symmetry(seed in 0u64..10_000) {
            let k = random_polytope(3, 6, seed).unwrap();
            let l = random_polytope(3, 6, seed ^ 0x5a5a).unwrap();
            let a = steiner_fit(&k, &l).unwrap();
            let b = steiner_fit(&l, &k).unwrap();
            for i in 0..=3 {
                prop_assert!((a.values[i] - b.values[3 - i]).abs() <= 1e-8 * a.values[i].abs().max(1e-3));
            }
        }

        #[test]
        fn brunn_minkowski_holds(seed in 0u64..10_000, t in 0.0f64..=1.0) {
            let k = random_polytope(3, 6, seed).unwrap();
            let l = random_polytope(3, 6, seed + 7).unwrap();
            prop_assert!(brunn_minkowski_gap(&k, &l, t).unwrap() >= -1e-9);
        }

        #[test]
        fn rs_between_bounds(seed in 0u64..10_000) {
            let k = random_polytope(3, 7, seed).unwrap();
            let r = rogers_shephard_ratio(&k).unwrap();
            prop_assert!((8.0 - 1e-9..=20.0 + 1e-9).contains(&r));
        }
    }
}
