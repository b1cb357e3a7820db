//! Enumeration limits.
//!
//! Defaults can be overridden process-wide through the `CSL_CAPACITY`
//! environment variable, a comma list of `key=value` pairs, for example
//! `CSL_CAPACITY=min_cover=400,brute_rep=5000000`.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const ENV_VAR: &str = "CSL_CAPACITY";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capacity {
    /// Largest target set accepted by the exact minimum-cover search.
    pub min_cover: usize,
    /// Largest number of tuples the brute-force representation enumerator visits.
    pub brute_rep: u128,
    /// Largest number of singleton pieces produced when refining bounded pieces.
    pub refine_pieces: u128,
    /// Largest number of points visited while enumerating a structured set in a window.
    pub window_points: usize,
    /// Largest dense span (in integers) used by the bitset sumset path.
    pub dense_span: usize,
}

impl Default for Capacity {
    fn default() -> Self {
        Capacity {
            min_cover: 200,
            brute_rep: 1_000_000,
            refine_pieces: 10_000,
            window_points: 20_000_000,
            dense_span: 1 << 26,
        }
    }
}

impl Capacity {
    /// Parses a `key=value,...` override list on top of the defaults.
    pub fn parse_overrides(spec: &str) -> Result<Self> {
        let mut cap = Capacity::default();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item.split_once('=').ok_or_else(|| {
                Error::structural(format!("capacity entry `{item}` is not key=value"))
            })?;
            let value: u128 = value.trim().parse().map_err(|_| {
                Error::structural(format!("capacity value `{value}` is not an integer"))
            })?;
            let as_usize = || {
                usize::try_from(value).map_err(|_| Error::structural("capacity value too large"))
            };
            match key.trim() {
                "min_cover" => cap.min_cover = as_usize()?,
                "brute_rep" => cap.brute_rep = value,
                "refine_pieces" | "refine" => cap.refine_pieces = value,
                "window_points" | "window" => cap.window_points = as_usize()?,
                "dense_span" => cap.dense_span = as_usize()?,
                other => return Err(Error::structural(format!("unknown capacity key `{other}`"))),
            }
        }
        Ok(cap)
    }

    /// Defaults with `CSL_CAPACITY` applied. Malformed overrides are ignored here;
    /// front ends that want to report them should call [`Capacity::parse_overrides`].
    pub fn from_env() -> Self {
        std::env::var(ENV_VAR)
            .ok()
            .and_then(|s| Capacity::parse_overrides(&s).ok())
            .unwrap_or_default()
    }

    /// Process-wide limits, read once from the environment.
    pub fn global() -> &'static Capacity {
        static GLOBAL: OnceLock<Capacity> = OnceLock::new();
        GLOBAL.get_or_init(Capacity::from_env)
    }
}
