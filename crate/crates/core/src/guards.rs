//! Resource guards. Defaults can be overridden through environment variables,
//! read once per process.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const ENV_MAX_CONE_POINTS: &str = "SPINOR_FORMS_MAX_CONE_POINTS";
pub const ENV_MAX_DIMENSION: &str = "SPINOR_FORMS_MAX_DIMENSION";
pub const ENV_MAX_GROUP_ORDER: &str = "SPINOR_FORMS_MAX_GROUP_ORDER";

/// Largest rank accepted anywhere.
pub const MAX_RANK: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guards {
    /// Bound on the number of lattice points of depth ≤ D in a weight cone.
    pub max_cone_points: u64,
    /// Bound on the dimension of a finite-dimensional module handled by Freudenthal.
    pub max_dimension: u64,
    /// Bound on the order of a Weyl (sub)group built by closure.
    pub max_group_order: u64,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_cone_points: 200_000,
            max_dimension: 1_000_000,
            max_group_order: 1_000_000,
        }
    }
}

impl Guards {
    pub fn from_env() -> Self {
        let read = |key: &str, fallback: u64| {
            std::env::var(key)
                .ok()
                .and_then(|v| v.trim().parse().ok())
                .unwrap_or(fallback)
        };
        let d = Guards::default();
        Guards {
            max_cone_points: read(ENV_MAX_CONE_POINTS, d.max_cone_points),
            max_dimension: read(ENV_MAX_DIMENSION, d.max_dimension),
            max_group_order: read(ENV_MAX_GROUP_ORDER, d.max_group_order),
        }
    }

    pub fn current() -> Guards {
        static GUARDS: OnceLock<Guards> = OnceLock::new();
        *GUARDS.get_or_init(Guards::from_env)
    }

    /// Number of `c ∈ ℕ₀^l` with `Σc ≤ depth`, i.e. `C(depth + l, l)`.
    pub fn cone_points(rank: usize, depth: u32) -> u64 {
        let mut acc: u128 = 1;
        for k in 1..=rank as u128 {
            acc = acc * (depth as u128 + k) / k;
        }
        acc.min(u64::MAX as u128) as u64
    }

    pub fn check_cone(&self, rank: usize, depth: u32) -> Result<()> {
        let points = Self::cone_points(rank, depth);
        if points > self.max_cone_points {
            return Err(Error::Resource(format!(
                "depth {depth} at rank {rank} spans {points} cone points (limit {}, set {ENV_MAX_CONE_POINTS})",
                self.max_cone_points
            )));
        }
        Ok(())
    }
}

pub fn check_rank(rank: usize) -> Result<()> {
    if rank == 0 || rank > MAX_RANK {
        return Err(Error::Resource(format!(
            "rank {rank} outside the supported range 1..={MAX_RANK}"
        )));
    }
    Ok(())
}
