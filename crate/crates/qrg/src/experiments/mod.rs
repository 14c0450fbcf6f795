//! The headline experiments. Each returns an [`ExperimentOutput`]: a report
//! plus the CSV profiles every reported statistic is computed from.
//!
//! Trials run in parallel on the current rayon pool; each trial draws from
//! its own seed stream, and results are gathered in trial order, so outputs
//! do not depend on the worker count.

mod mixing;
mod nonempty;
mod productfree;
mod triangle;

pub use mixing::{mixing_decay, MixingParams, MixingRow, MixingSummary, MixingTrialRow, ValueKind};
pub use nonempty::{nonempty_returns, NonemptyParams, NonemptyRow, NonemptySummary};
pub use productfree::{
    gowers_threshold, is_product_free, productfree, ProductFreeParams, ProductFreeSummary, Strategy,
};
pub use triangle::{triangle_law, ThresholdBasis, TriangleLawParams, TriangleLawSummary, TriangleTrial};

use qrg_core::{GroupSpec, GroupTable};

use crate::cache::CacheDir;

/// Where experiments get their groups from.
#[derive(Debug, Clone, Default)]
pub struct Env {
    pub cache: Option<CacheDir>,
}

impl Env {
    pub fn with_cache(cache: CacheDir) -> Self {
        Env { cache: Some(cache) }
    }

    pub fn group(&self, spec: &GroupSpec) -> anyhow::Result<GroupTable> {
        match &self.cache {
            Some(c) => c.load(spec),
            None => Ok(spec.build()?),
        }
    }
}

pub fn shape_name(shape: qrg_core::patterns::TriangleShape) -> &'static str {
    match shape {
        qrg_core::patterns::TriangleShape::Correlation => "correlation",
        qrg_core::patterns::TriangleShape::Literal => "literal",
    }
}

pub fn parse_shape(s: &str) -> anyhow::Result<qrg_core::patterns::TriangleShape> {
    use qrg_core::patterns::TriangleShape;
    match s {
        "correlation" => Ok(TriangleShape::Correlation),
        "literal" => Ok(TriangleShape::Literal),
        _ => anyhow::bail!("unknown triangle shape {s:?} (expected correlation or literal)"),
    }
}
