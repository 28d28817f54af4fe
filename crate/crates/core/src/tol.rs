//! Shared tolerance record.
//!
//! Every geometric predicate in the crate reads its epsilon from here so the
//! whole pipeline agrees on what "on the boundary" means.

use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Rank decisions for independence checks.
    pub rank: f64,
    /// Orthonormality of produced bases.
    pub orthonormal: f64,
    /// Minimum admissible pivot in dense elimination.
    pub pivot: f64,
    /// Slack allowed on LP constraints and containment inequalities.
    pub feasibility: f64,
    /// Vertex dedup and plane-distance tolerance, relative to body scale.
    pub vertex: f64,
    /// Nonsingularity threshold for affine maps.
    pub det: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        rank: 1e-10,
        orthonormal: 1e-12,
        pivot: 1e-13,
        feasibility: 1e-8,
        vertex: 1e-9,
        det: 1e-12,
    };

    /// Defaults, with the feasibility tolerance replaced by `SHADOWCOVER_TOL`
    /// when that variable holds a positive number.
    pub fn from_env() -> Tolerances {
        let mut t = Tolerances::DEFAULT;
        if let Some(v) = std::env::var("SHADOWCOVER_TOL")
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|v| v.is_finite() && *v > 0.0)
        {
            t.feasibility = v;
        }
        t
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances::DEFAULT
    }
}

static GLOBAL: OnceLock<Tolerances> = OnceLock::new();

/// Install the process-wide tolerance record. Only the first call wins;
/// returns `false` if a record was already installed.
pub fn install(t: Tolerances) -> bool {
    GLOBAL.set(t).is_ok()
}

/// The active tolerance record.
pub fn get() -> &'static Tolerances {
    GLOBAL.get().unwrap_or(&Tolerances::DEFAULT)
}
