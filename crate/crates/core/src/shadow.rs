//! Shadow covering: does every projection of `L` contain a translate of the
//! matching projection of `K`?
//!
//! Covering is checked on finite samples of directions (codimension 1) or of
//! subspaces (higher codimension). A passing sweep is a certificate at the
//! sampled resolution, nothing more.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::containment::{self, ContainmentWitness};
use crate::error::{Error, Result};
use crate::linalg::{complement_basis, random_rotation, random_rotation_with, random_unit, AffineMap, Basis, Vector};
use crate::polytope::Body;
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Golden-angle spiral on `S²`, rotated by a seeded rotation.
    Fibonacci,
    Gaussian,
    /// Facet normals and vertex differences of the bodies under test.
    Informed,
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Strategy> {
        match s {
            "fibonacci" => Ok(Strategy::Fibonacci),
            "gaussian" => Ok(Strategy::Gaussian),
            "informed" => Ok(Strategy::Informed),
            other => Err(Error::BadStrategy(other.to_string())),
        }
    }
}

/// Strategy used when the caller does not pick one.
pub fn default_strategy(n: usize) -> Strategy {
    if n == 3 {
        Strategy::Fibonacci
    } else {
        Strategy::Gaussian
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSample {
    pub strategy: Strategy,
    pub seed: u64,
    pub directions: Vec<Vector>,
}

/// Seeded unit directions in `R^n`.
///
/// In the plane the directions are evenly spaced angles in `[0, π)`
/// (a direction and its negative give the same projection).
pub fn sample_directions(n: usize, count: usize, strategy: Strategy, seed: u64) -> Result<DirectionSample> {
    if count == 0 {
        return Err(Error::BadParameter("direction count must be positive".into()));
    }
    if n < 2 {
        return Err(Error::BadParameter(format!("no proper projections in dimension {n}")));
    }
    let directions = match (n, strategy) {
        (_, Strategy::Informed) => {
            return Err(Error::BadStrategy("informed directions need bodies; use informed_directions".into()))
        }
        (2, _) => (0..count)
            .map(|i| {
                let a = std::f64::consts::PI * i as f64 / count as f64;
                Vector::from_column_slice(&[a.cos(), a.sin()])
            })
            .collect(),
        (3, Strategy::Fibonacci) => {
            let rot = random_rotation(3, seed);
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|i| {
                    let z = 1.0 - (2 * i + 1) as f64 / count as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let phi = golden * i as f64;
                    rot.apply_linear(&Vector::from_column_slice(&[r * phi.cos(), r * phi.sin(), z]))
                })
                .collect()
        }
        (_, Strategy::Fibonacci) => {
            return Err(Error::BadStrategy(format!("fibonacci sampling is only defined on S^2, not n = {n}")))
        }
        (_, Strategy::Gaussian) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| random_unit(n, &mut rng)).collect()
        }
    };
    Ok(DirectionSample {
        strategy,
        seed,
        directions,
    })
}

fn canonical_sign(mut u: Vector) -> Vector {
    if let Some(c) = u.iter().find(|c| c.abs() > 1e-12) {
        if *c < 0.0 {
            u.neg_mut();
        }
    }
    u
}

fn push_unique(out: &mut Vec<Vector>, u: Vector) -> bool {
    let norm = u.norm();
    if norm < 1e-12 {
        return false;
    }
    let u = canonical_sign(u / norm);
    if out.iter().any(|w| w.dot(&u).abs() > 1.0 - 1e-12) {
        return false;
    }
    out.push(u);
    true
}

/// Facet normals of both bodies followed by up to `cap` vertex-difference
/// directions, deduplicated up to sign.
pub fn informed_directions(k: &Body, l: &Body, cap: usize) -> Result<DirectionSample> {
    let mut out = Vec::new();
    for body in [k, l] {
        if body.is_full_dimensional() {
            for f in &body.hrep().facets {
                push_unique(&mut out, f.normal.clone());
            }
        }
    }
    let mut added = 0;
    'outer: for body in [k, l] {
        let vs = body.vertices();
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                if added >= cap {
                    break 'outer;
                }
                if push_unique(&mut out, &vs[j] - &vs[i]) {
                    added += 1;
                }
            }
        }
    }
    Ok(DirectionSample {
        strategy: Strategy::Informed,
        seed: 0,
        directions: out,
    })
}

/// Seeded orthonormal frames of `(n - d)`-dimensional subspaces.
pub fn sample_subspaces(n: usize, d: usize, count: usize, seed: u64) -> Result<Vec<Basis>> {
    if d == 0 || d >= n {
        return Err(Error::BadCodimension { n, d });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let q = random_rotation_with(n, &mut rng).matrix;
            Basis::new(n, (0..n - d).map(|j| q.column(j).into_owned()).collect())
        })
        .collect()
}

/// Outcome of one projected containment check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    /// Projection direction (codimension 1 only).
    pub direction: Option<Vec<f64>>,
    /// Orthonormal frame of the image subspace.
    pub frame: Vec<Vec<f64>>,
    pub covered: bool,
    pub margin: f64,
    /// Translation in frame coordinates placing `K_ξ` inside `L_ξ`.
    pub translation: Option<Vec<f64>>,
    pub violated_normal: Option<Vec<f64>>,
    pub deficit: Option<f64>,
}

impl Verdict {
    fn from_witness(direction: Option<&Vector>, frame: &Basis, w: ContainmentWitness) -> Verdict {
        Verdict {
            direction: direction.map(|u| u.as_slice().to_vec()),
            frame: frame.vectors().iter().map(|v| v.as_slice().to_vec()).collect(),
            covered: w.feasible,
            margin: w.margin,
            translation: w.translation.map(|x| x.as_slice().to_vec()),
            violated_normal: w.violated_facet.as_ref().map(|f| f.normal.as_slice().to_vec()),
            deficit: w.violated_facet.map(|f| f.deficit),
        }
    }
}

/// Does `L_ξ` contain a translate of `K_ξ`, for the subspace spanned by `frame`?
pub fn covering_verdict(k: &Body, l: &Body, frame: &Basis) -> Result<Verdict> {
    let n = k.dim();
    if l.dim() != n || frame.ambient() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: if l.dim() != n { l.dim() } else { frame.ambient() },
        });
    }
    let w = containment::translate_into(&k.project(frame)?, &l.project(frame)?)?;
    Ok(Verdict::from_witness(None, frame, w))
}

fn direction_verdict(k: &Body, l: &Body, u: &Vector) -> Result<Verdict> {
    let frame = complement_basis(k.dim(), std::slice::from_ref(u))?;
    let mut v = covering_verdict(k, l, &frame)?;
    v.direction = Some(u.as_slice().to_vec());
    Ok(v)
}

/// Deepest refinement level of a codimension-1 sweep.
pub const MAX_REFINE_DEPTH: usize = 6;
const REFINE_WIDTH: usize = 32;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringReport {
    pub n: usize,
    pub d: usize,
    /// Number of sampled directions or frames, before informed and refined ones.
    pub count: usize,
    pub seed: u64,
    pub strategy: Strategy,
    pub refine: bool,
    pub refinement_depth: usize,
    pub all_covered: bool,
    pub worst_margin: f64,
    pub tolerance: f64,
    pub verdicts: Vec<Verdict>,
    pub note: String,
}

impl CoveringReport {
    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.covered)
    }

    /// One row per verdict: direction (or flattened frame), covered,
    /// margin, translation.
    pub fn to_csv(&self) -> String {
        let k = self.n - self.d;
        let mut head: Vec<String> = if self.d == 1 {
            (0..self.n).map(|i| format!("u{i}")).collect()
        } else {
            (0..k)
                .flat_map(|r| (0..self.n).map(move |c| format!("f{r}_{c}")))
                .collect()
        };
        head.push("covered".into());
        head.push("margin".into());
        head.extend((0..k).map(|i| format!("x{i}")));
        let mut out = head.join(",");
        out.push('\n');
        for v in &self.verdicts {
            let mut row: Vec<String> = match &v.direction {
                Some(u) if self.d == 1 => u.iter().map(|c| format!("{c:.12e}")).collect(),
                _ => v.frame.iter().flatten().map(|c| format!("{c:.12e}")).collect(),
            };
            row.push(v.covered.to_string());
            row.push(format!("{:.12e}", v.margin));
            match &v.translation {
                Some(x) => row.extend(x.iter().map(|c| format!("{c:.12e}"))),
                None => row.extend((0..k).map(|_| String::new())),
            }
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub strategy: Option<Strategy>,
    pub refine: bool,
    /// Cap on vertex-difference directions added to a codimension-1 sweep.
    pub informed_cap: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            strategy: None,
            refine: true,
            informed_cap: 256,
        }
    }
}

/// Sweeps projections of codimension `d` with default options.
pub fn covering_sweep(k: &Body, l: &Body, d: usize, count: usize, seed: u64) -> Result<CoveringReport> {
    covering_sweep_with(k, l, d, count, seed, SweepOptions::default())
}

pub fn covering_sweep_with(
    k: &Body,
    l: &Body,
    d: usize,
    count: usize,
    seed: u64,
    opts: SweepOptions,
) -> Result<CoveringReport> {
    let n = k.dim();
    if l.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: l.dim() });
    }
    if d == 0 || d >= n {
        return Err(Error::BadCodimension { n, d });
    }
    let strategy = opts.strategy.unwrap_or_else(|| default_strategy(n));
    let tolerance = tol::get().feasibility * l.scale().max(1.0);

    let mut verdicts: Vec<Verdict>;
    let mut depth = 0;
    if d == 1 {
        let mut dirs = if strategy == Strategy::Informed {
            Vec::new()
        } else {
            sample_directions(n, count, strategy, seed)?.directions
        };
        dirs.extend(informed_directions(k, l, opts.informed_cap)?.directions);
        verdicts = dirs
            .par_iter()
            .map(|u| direction_verdict(k, l, u))
            .collect::<Result<_>>()?;
        if opts.refine {
            depth = refine(k, l, &mut dirs, &mut verdicts, tolerance)?;
        }
    } else {
        let frames = sample_subspaces(n, d, count, seed)?;
        verdicts = frames
            .par_iter()
            .map(|f| covering_verdict(k, l, f))
            .collect::<Result<_>>()?;
    }

    let all_covered = verdicts.iter().all(|v| v.covered);
    let worst_margin = verdicts.iter().map(|v| v.margin).fold(f64::INFINITY, f64::min);
    let note = format!(
        "sampled certificate over {} projections; unsampled projections are not checked",
        verdicts.len()
    );
    Ok(CoveringReport {
        n,
        d,
        count,
        seed,
        strategy,
        refine: opts.refine && d == 1,
        refinement_depth: depth,
        all_covered,
        worst_margin,
        tolerance,
        verdicts,
        note,
    })
}

/// Bisects between low-margin directions and their nearest neighbours.
/// Stops at `MAX_REFINE_DEPTH` or once a level neither uncovers a new
/// failure nor lowers the worst margin.
fn refine(k: &Body, l: &Body, dirs: &mut Vec<Vector>, verdicts: &mut Vec<Verdict>, tolerance: f64) -> Result<usize> {
    let low_margin = |vs: &[Verdict], offset: usize| -> Vec<usize> {
        let mut idx: Vec<usize> = (0..vs.len()).filter(|&i| vs[i].margin < 10.0 * tolerance).collect();
        idx.sort_by(|&a, &b| vs[a].margin.total_cmp(&vs[b].margin));
        idx.truncate(REFINE_WIDTH);
        idx.into_iter().map(|i| i + offset).collect()
    };
    let mut frontier = low_margin(verdicts, 0);
    let mut depth = 0;
    while depth < MAX_REFINE_DEPTH && !frontier.is_empty() {
        let worst_before = verdicts.iter().map(|v| v.margin).fold(f64::INFINITY, f64::min);

        let mut fresh: Vec<Vector> = Vec::new();
        for &i in &frontier {
            let u = &dirs[i];
            let mut near: Vec<(f64, usize)> = (0..dirs.len())
                .filter(|&j| j != i)
                .map(|j| (u.dot(&dirs[j]).abs(), j))
                .collect();
            near.sort_by(|a, b| b.0.total_cmp(&a.0));
            for &(_, j) in near.iter().take(2) {
                let v = &dirs[j];
                let mid = u + v * u.dot(v).signum();
                let mut pool: Vec<Vector> = dirs.iter().chain(fresh.iter()).cloned().collect();
                let before = pool.len();
                if push_unique(&mut pool, mid) && pool.len() > before {
                    fresh.push(pool.pop().unwrap());
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        let new_verdicts: Vec<Verdict> = fresh
            .par_iter()
            .map(|u| direction_verdict(k, l, u))
            .collect::<Result<_>>()?;
        let offset = verdicts.len();
        depth += 1;
        let worst_new = new_verdicts.iter().map(|v| v.margin).fold(f64::INFINITY, f64::min);
        let new_failures = new_verdicts.iter().filter(|v| !v.covered).count();
        frontier = low_margin(&new_verdicts, offset);
        dirs.extend(fresh);
        verdicts.extend(new_verdicts);
        if new_failures == 0 && worst_new >= worst_before - tolerance {
            break;
        }
    }
    Ok(depth)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportPair {
    pub original: Verdict,
    pub transported: Verdict,
}

impl TransportPair {
    pub fn agree(&self) -> bool {
        self.original.covered == self.transported.covered
    }
}

/// Covering along `u` for `(K, L)` against covering along `ψu` for
/// `(ψK, ψL)`; the two agree for every invertible affine `ψ`.
pub fn transport_verdict(k: &Body, l: &Body, psi: &AffineMap, u: &Vector) -> Result<TransportPair> {
    if psi.is_singular() {
        return Err(Error::SingularMap { det: psi.det() });
    }
    let norm = u.norm();
    if norm == 0.0 {
        return Err(Error::ZeroDirection);
    }
    let u = u / norm;
    let original = direction_verdict(k, l, &u)?;
    let mapped = psi.apply_linear(&u);
    let mapped = &mapped / mapped.norm();
    let transported = direction_verdict(&k.affine_image(psi)?, &l.affine_image(psi)?, &mapped)?;
    Ok(TransportPair { original, transported })
}

/// `n / (n - d)`.
pub fn dilate_factor(n: usize, d: usize) -> Result<f64> {
    if d == 0 || d >= n {
        return Err(Error::BadCodimension { n, d });
    }
    Ok(n as f64 / (n - d) as f64)
}

/// `∏_{j=1..d} (n-j+1)/(n-j)`, the factor from stacking one-step bounds;
/// it telescopes to `n / (n - d)`.
pub fn iterated_factor(n: usize, d: usize) -> Result<f64> {
    if d == 0 || d >= n {
        return Err(Error::BadCodimension { n, d });
    }
    Ok((1..=d).map(|j| (n - j + 1) as f64 / (n - j) as f64).product())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DilateCertificate {
    pub n: usize,
    pub d: usize,
    pub factor: f64,
    /// Whether the supplied sweep covered every sampled projection.
    pub sweep_all_covered: bool,
    pub sweep_projections: usize,
    pub sweep_seed: u64,
    pub witness: ContainmentWitness,
}

/// Checks `K + x ⊆ (n/(n-d)) L`, which every body with covering
/// codimension-`d` shadows satisfies.
///
/// A sweep that passed while the dilate fails means the sample missed the
/// failing projection: that is reported as `SweepInconclusive`.
pub fn dilate_cover_certificate(k: &Body, l: &Body, d: usize, sweep: &CoveringReport) -> Result<DilateCertificate> {
    let n = k.dim();
    let factor = dilate_factor(n, d)?;
    let witness = containment::translate_into(k, &l.scaled(factor)?)?;
    if !witness.feasible && sweep.all_covered {
        return Err(Error::SweepInconclusive {
            deficit: witness.violated_facet.as_ref().map_or(-witness.margin, |f| f.deficit),
        });
    }
    Ok(DilateCertificate {
        n,
        d,
        factor,
        sweep_all_covered: sweep.all_covered,
        sweep_projections: sweep.verdicts.len(),
        sweep_seed: sweep.seed,
        witness,
    })
}

/// Upper bound on `V(K)/V(L)` in codimension 1, valid in every dimension.
pub const UNIVERSAL_RATIO: f64 = 2.942;

/// Sharp planar constant for codimension 1.
pub const PLANAR_RATIO: f64 = 1.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub d: usize,
    /// `n / (n - d)`: smallest dilate of `L` guaranteed to hold a translate of `K`.
    pub dilate_bound: f64,
    /// `(n / (n - d))^n` on `V(K)/V(L)`.
    pub volume_bound: f64,
    /// `2^{-n} C(2n, n)`, the Rogers–Shephard based bound for codimension 1.
    pub rs_bound: Option<f64>,
    /// `1.1696 √n`, the ball-comparison bound for codimension 1.
    pub ball_bound: Option<f64>,
    /// `e^d`, the limit of the volume bound as `n → ∞`.
    pub asymptote: f64,
    /// Dimension-free codimension-1 bound.
    pub universal: Option<f64>,
    /// `n / (n - 1)`: the bound when `L` is a simplex (codimension 1).
    pub simplex_bound: Option<f64>,
    /// Planar sharp constant (only for `n = 2, d = 1`).
    pub planar_sharp: Option<f64>,
}

pub fn bound_report(n: usize, d: usize) -> Result<BoundReport> {
    let dilate_bound = dilate_factor(n, d)?;
    let one = d == 1;
    let rs = (1..=n).fold(1.0, |acc, j| acc * (n + j) as f64 / j as f64) / 2f64.powi(n as i32);
    Ok(BoundReport {
        n,
        d,
        dilate_bound,
        volume_bound: dilate_bound.powi(n as i32),
        rs_bound: one.then_some(rs),
        ball_bound: one.then(|| 1.1696 * (n as f64).sqrt()),
        asymptote: (d as f64).exp(),
        universal: one.then_some(UNIVERSAL_RATIO),
        simplex_bound: one.then(|| n as f64 / (n - 1) as f64),
        planar_sharp: (n == 2 && one).then_some(PLANAR_RATIO),
    })
}

/// Running tally of observed `V(K)/V(L)` ratios for codimension-1 covering
/// pairs, compared against the simplex bound `n/(n-1)` and the proven
/// `(n/(n-1))^n`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RatioProbe {
    pub observations: Vec<RatioObservation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioObservation {
    pub n: usize,
    pub ratio: f64,
    pub label: String,
    /// Ratio exceeds `n/(n-1)`.
    pub exceeds_simplex_bound: bool,
    /// Ratio exceeds `(n/(n-1))^n`; this would contradict a proven bound.
    pub exceeds_proven: bool,
}

impl RatioProbe {
    pub fn record(&mut self, n: usize, ratio: f64, label: impl Into<String>) -> &RatioObservation {
        let s = n as f64 / (n - 1) as f64;
        self.observations.push(RatioObservation {
            n,
            ratio,
            label: label.into(),
            exceeds_simplex_bound: ratio > s + 1e-9,
            exceeds_proven: ratio > s.powi(n as i32) + 1e-6,
        });
        self.observations.last().unwrap()
    }

    pub fn max_ratio(&self, n: usize) -> Option<f64> {
        self.observations
            .iter()
            .filter(|o| o.n == n)
            .map(|o| o.ratio)
            .reduce(f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit;
    use crate::polytope::{cap_body, cube, random_polytope, reflected_scaled, regular_simplex, standard_simplex};
    use proptest::prelude::{prop_assert_eq, proptest, ProptestConfig};

    #[test]
    fn planar_directions_evenly_spaced() {
        let s = sample_directions(2, 4, Strategy::Gaussian, 9).unwrap();
        let want = [[1.0, 0.0], [0.5f64.sqrt(), 0.5f64.sqrt()], [0.0, 1.0], [-(0.5f64.sqrt()), 0.5f64.sqrt()]];
        for (u, w) in s.directions.iter().zip(want) {
            assert!((u[0] - w[0]).abs() < 1e-15 && (u[1] - w[1]).abs() < 1e-15);
        }
    }

    #[test]
    fn directions_are_unit_and_seeded() {
        for strat in [Strategy::Fibonacci, Strategy::Gaussian] {
            let a = sample_directions(3, 200, strat, 5).unwrap();
            let b = sample_directions(3, 200, strat, 5).unwrap();
            assert_eq!(a.directions, b.directions);
            for u in &a.directions {
                assert!((u.norm() - 1.0).abs() < 1e-14);
            }
        }
        let a = sample_directions(3, 10, Strategy::Gaussian, 1).unwrap();
        let b = sample_directions(3, 10, Strategy::Gaussian, 2).unwrap();
        assert_ne!(a.directions, b.directions);
    }

    #[test]
    fn direction_errors() {
        assert!(matches!(sample_directions(3, 0, Strategy::Gaussian, 0), Err(Error::BadParameter(_))));
        assert!(matches!(sample_directions(4, 10, Strategy::Fibonacci, 0), Err(Error::BadStrategy(_))));
        assert!(matches!(sample_directions(3, 10, Strategy::Informed, 0), Err(Error::BadStrategy(_))));
        assert!(matches!("spiral".parse::<Strategy>(), Err(Error::BadStrategy(_))));
    }

    fn cap_discrepancy(dirs: &[Vector], caps: &[(Vector, f64)]) -> f64 {
        caps.iter()
            .map(|(c, h)| {
                let inside = dirs.iter().filter(|u| u.dot(c) >= *h).count() as f64 / dirs.len() as f64;
                (inside - (1.0 - h) / 2.0).abs()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn fibonacci_beats_gaussian() {
        let fib = sample_directions(3, 1000, Strategy::Fibonacci, 3).unwrap().directions;
        let gau = sample_directions(3, 1000, Strategy::Gaussian, 3).unwrap().directions;
        let mut min_angle = f64::INFINITY;
        for i in 0..fib.len() {
            for j in i + 1..fib.len() {
                min_angle = min_angle.min(fib[i].dot(&fib[j]).clamp(-1.0, 1.0).acos());
            }
        }
        assert!(min_angle > 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let caps: Vec<(Vector, f64)> = (0..300)
            .map(|i| (random_unit(3, &mut rng), -0.9 + 1.8 * (i as f64 / 299.0)))
            .collect();
        assert!(cap_discrepancy(&fib, &caps) < cap_discrepancy(&gau, &caps));
    }

    #[test]
    fn subspaces_are_orthonormal() {
        let frames = sample_subspaces(5, 2, 20, 11).unwrap();
        assert_eq!(frames.len(), 20);
        for f in &frames {
            assert_eq!(f.dim(), 3);
            let m = f.to_matrix();
            let g = m.transpose() * &m;
            assert!((g - crate::linalg::Matrix::identity(3, 3)).amax() < 1e-12);
        }
        assert!(matches!(sample_subspaces(3, 3, 1, 0), Err(Error::BadCodimension { .. })));
        assert!(matches!(sample_subspaces(3, 0, 1, 0), Err(Error::BadCodimension { .. })));
    }

    #[test]
    fn informed_contains_facet_normals() {
        let c = cube(3).unwrap();
        let s = informed_directions(&c, &c, 0).unwrap();
        assert_eq!(s.directions.len(), 3);
        let t = regular_simplex(3).unwrap();
        let s = informed_directions(&t, &t, 100).unwrap();
        // 4 facet normals plus 6 edge directions.
        assert_eq!(s.directions.len(), 10);
    }

    #[test]
    fn verdict_examples() {
        // Unit square vs a thin rectangle, projected onto the x-axis.
        let sq = cube(2).unwrap();
        let rect = Body::full(
            2,
            vec![
                Vector::from_column_slice(&[0.0, 0.0]),
                Vector::from_column_slice(&[2.0, 0.0]),
                Vector::from_column_slice(&[2.0, 0.1]),
                Vector::from_column_slice(&[0.0, 0.1]),
            ],
        )
        .unwrap();
        let xaxis = Basis::new(2, vec![unit(2, 0)]).unwrap();
        assert!(covering_verdict(&sq, &rect, &xaxis).unwrap().covered);
        let yaxis = Basis::new(2, vec![unit(2, 1)]).unwrap();
        let v = covering_verdict(&sq, &rect, &yaxis).unwrap();
        assert!(!v.covered);
        // Height 1 into height 0.1: the best placement overshoots both ends by 0.45.
        assert!((v.deficit.unwrap() - 0.45).abs() < 1e-9);
    }

    #[test]
    fn triangle_shadows_covered_by_reflection() {
        // Widths of a triangle and its reflection agree in every direction.
        let t = regular_simplex(2).unwrap();
        let r = covering_sweep(&t, &t.reflected(), 1, 720, 0).unwrap();
        assert!(r.all_covered);
        assert!(r.worst_margin.abs() < 1e-9);
    }

    #[test]
    fn sweep_catches_scaled_simplex() {
        let xi = standard_simplex(3).unwrap();
        let r = covering_sweep(&xi.scaled(1.05).unwrap(), &xi, 1, 200, 4).unwrap();
        assert!(!r.all_covered);
        assert!(r.failures().count() > 0);
    }

    #[test]
    fn sweep_is_seeded() {
        let k = random_polytope(3, 8, 1).unwrap();
        let l = random_polytope(3, 8, 2).unwrap().scaled(1.5).unwrap();
        let a = covering_sweep(&k, &l, 1, 150, 8).unwrap();
        let b = covering_sweep(&k, &l, 1, 150, 8).unwrap();
        assert_eq!(a, b);
        assert!(a.to_csv().lines().count() == a.verdicts.len() + 1);
    }

    #[test]
    fn refinement_is_bounded() {
        let t = regular_simplex(3).unwrap();
        let l = reflected_scaled(&t, 2.0).unwrap();
        let r = covering_sweep(&t, &l, 1, 300, 1).unwrap();
        assert!(r.all_covered);
        assert!(r.refinement_depth <= MAX_REFINE_DEPTH);
    }

    #[test]
    fn higher_codimension() {
        let t = regular_simplex(4).unwrap();
        let r = covering_sweep(&t, &reflected_scaled(&t, 2.0).unwrap(), 2, 60, 3).unwrap();
        assert!(r.all_covered);
        assert_eq!(r.verdicts.len(), 60);
        assert!(matches!(covering_sweep(&t, &t, 4, 10, 0), Err(Error::BadCodimension { .. })));
    }

    #[test]
    fn transport_examples() {
        let k = regular_simplex(3).unwrap();
        let l = reflected_scaled(&k, 2.0).unwrap();
        let u = unit(3, 2);
        let pair = transport_verdict(&k, &l, &AffineMap::identity(3), &u).unwrap();
        assert!(pair.agree());
        assert_eq!(pair.original.covered, pair.transported.covered);
        let sing = AffineMap::linear(crate::linalg::Matrix::zeros(3, 3));
        assert!(matches!(transport_verdict(&k, &l, &sing, &u), Err(Error::SingularMap { .. })));
    }

    #[test]
    fn factors() {
        assert!((iterated_factor(5, 2).unwrap() - 5.0 / 3.0).abs() < 1e-15);
        for n in 2..9 {
            for d in 1..n {
                assert!((iterated_factor(n, d).unwrap() - dilate_factor(n, d).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn certificate_examples() {
        let t = regular_simplex(3).unwrap();
        let l = reflected_scaled(&t, 2.0).unwrap();
        let sweep = covering_sweep(&t, &l, 1, 200, 0).unwrap();
        let cert = dilate_cover_certificate(&t, &l, 1, &sweep).unwrap();
        assert!(cert.witness.feasible);
        assert!((cert.factor - 1.5).abs() < 1e-15);
    }

    #[test]
    fn certificate_flags_bad_sweep() {
        // A fabricated passing sweep for a pair that cannot fit.
        let xi = standard_simplex(3).unwrap();
        let big = xi.scaled(3.0).unwrap();
        let mut sweep = covering_sweep(&xi, &xi, 1, 10, 0).unwrap();
        sweep.all_covered = true;
        assert!(matches!(
            dilate_cover_certificate(&big, &xi, 1, &sweep),
            Err(Error::SweepInconclusive { .. })
        ));
    }

    #[test]
    fn bounds_in_three_dimensions() {
        let b = bound_report(3, 1).unwrap();
        assert!((b.dilate_bound - 1.5).abs() < 1e-15);
        assert!((b.volume_bound - 3.375).abs() < 1e-12);
        assert!((b.rs_bound.unwrap() - 2.5).abs() < 1e-12);
        assert!((b.ball_bound.unwrap() - 2.0258).abs() < 1e-4);
        assert_eq!(b.universal, Some(2.942));
        assert!(bound_report(2, 1).unwrap().planar_sharp == Some(1.5));
        assert!(bound_report(3, 2).unwrap().rs_bound.is_none());
        assert!(matches!(bound_report(3, 3), Err(Error::BadCodimension { .. })));
    }

    #[test]
    fn probe_flags() {
        let mut p = RatioProbe::default();
        assert!(!p.record(3, 1.2, "a").exceeds_simplex_bound);
        assert!(p.record(3, 1.6, "b").exceeds_simplex_bound);
        assert!(p.record(3, 3.5, "c").exceeds_proven);
        assert_eq!(p.max_ratio(3), Some(3.5));
        assert_eq!(p.max_ratio(4), None);
    }

    #[test]
    fn cap_body_shadows() {
        let d = cap_body(3).unwrap();
        let xi = standard_simplex(3).unwrap();
        for i in 0..3 {
            let pair = direction_verdict(&d, &xi, &unit(3, i)).unwrap();
            assert!(pair.covered);
        }
    }

    #[test]
    fn informed_for_cap_body_has_diagonal() {
        let s = informed_directions(&standard_simplex(3).unwrap(), &cap_body(3).unwrap(), 64).unwrap();
        let diag = Vector::from_element(3, 1.0 / 3f64.sqrt());
        assert!(s.directions.iter().any(|u| (u - &diag).norm() < 1e-12));
    }

    #[test]
    fn reflection_fails_along_vertex_direction() {
        let t = regular_simplex(3).unwrap();
        let u = &t.vertices()[0] / t.vertices()[0].norm();
        assert!(!direction_verdict(&t, &t.reflected(), &u).unwrap().covered);
    }

    #[test]
    fn permutation_transport_on_interpolated_pair() {
        let t = regular_simplex(3).unwrap();
        let l = reflected_scaled(&t, 2.0).unwrap();
        let ts = (1.0 + 56f64.sqrt()) / 11.0;
        let k = t.combination(1.0 - ts, &l, ts).unwrap();
        let perm = crate::linalg::Matrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0]);
        let psi = AffineMap::linear(perm);
        let dirs = sample_directions(3, 40, Strategy::Gaussian, 12).unwrap();
        for u in &dirs.directions {
            assert!(transport_verdict(&k, &l, &psi, u).unwrap().agree());
        }
    }

    #[test]
    fn self_cover_any_codimension() {
        let k = random_polytope(4, 9, 21).unwrap();
        for d in 1..4 {
            let sweep = covering_sweep(&k, &k, d, 20, 1).unwrap();
            assert!(sweep.all_covered);
            let cert = dilate_cover_certificate(&k, &k, d, &sweep).unwrap();
            assert!(cert.witness.feasible);
        }
        let w = crate::containment::translate_into(&k, &k).unwrap();
        assert!(w.translation.unwrap().norm() < 1e-9);
    }

    #[test]
    fn iterated_certificates_match_direct() {
        // (n, d) = (4, 2) with L = 2(-Δ): the direct factor n/(n-d) and
        // the product of one-step factors both equal the minimal dilate.
        let t = regular_simplex(4).unwrap();
        let l = reflected_scaled(&t, 2.0).unwrap();
        let lam = crate::containment::min_cover_dilate(&t, &l).unwrap().lambda;
        assert!((iterated_factor(4, 2).unwrap() - lam).abs() < 1e-6);
        assert!((dilate_factor(4, 2).unwrap() - lam).abs() < 1e-6);
    }

    #[test]
    fn more_directions_never_rescue_a_failure() {
        // Gaussian samples with one seed are prefixes of each other.
        let opts = SweepOptions { strategy: Some(Strategy::Gaussian), refine: false, informed_cap: 0 };
        for seed in 0..10u64 {
            let k = random_polytope(3, 7, seed).unwrap();
            let l = random_polytope(3, 7, seed + 100).unwrap().scaled(1.2).unwrap();
            let small = covering_sweep_with(&k, &l, 1, 40, seed, opts).unwrap();
            let large = covering_sweep_with(&k, &l, 1, 160, seed, opts).unwrap();
            assert_eq!(&large.verdicts[..40], &small.verdicts[..40]);
            assert!(small.all_covered || !large.all_covered);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn translation_invariance(seed in 0u64..10_000, sx in -3.0f64..3.0, sy in -3.0f64..3.0, sz in -3.0f64..3.0) {
            let k = random_polytope(3, 6, seed).unwrap();
            let l = random_polytope(3, 6, seed + 1).unwrap().scaled(1.3).unwrap();
            let shift = Vector::from_column_slice(&[sx, sy, sz]);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = random_unit(3, &mut rng);
            let a = direction_verdict(&k, &l, &u).unwrap();
            let b = direction_verdict(&k.translated(&shift), &l, &u).unwrap();
            if a.margin.abs() > 1e-7 {
                prop_assert_eq!(a.covered, b.covered);
            }
        }
    }
}
