//! Cube transport in a flat chart complex.
//!
//! Each chart carries a scaled copy of the lattice cover. Cubes of one
//! colour are grouped into components, components get a height (the
//! highest chart they reach) and are saturated top-down. The planner then
//! translates every colour class rigidly into the target disc (height 0)
//! and the annuli around it (height `h`), and an independent simulator
//! replays the plan and checks it.

mod cells;
mod cover;
mod decompose;
mod driver;
mod graph;
mod index;
mod plan;
mod scenario;
mod simulate;

pub mod fixtures;
pub mod svg;

pub use cover::{build_colored_cover, cover_residual, ColoredCubeSet, PlacedCube};
pub use graph::{build_neighbour_graph, GraphVertex, NeighbourGraph};
pub use driver::{plan_scenario, replay, RecordedRun, RunRecord, ScenarioRun};
pub use decompose::{decompose_colors, saturate, ColorClassDecomposition, ComponentInfo, TransportObject};
pub use plan::{plan_color, CellAssignment, Move, Phase, PlanStats, TransportPlan};
pub use simulate::{simulate_plan, SimReport, Violation};
pub use scenario::{CapacityBudget, ChartSpec, Scenario, TargetSpec, World, Zone};

use thiserror::Error;

use crate::geometry::GeomError;
use crate::lattice_cover::CoverError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransportError {
    #[error("invalid scenario: {0}")]
    BadScenario(String),
    #[error("scale too large: colour {color} in chart {chart} uses {ratio} of its budget")]
    ScaleTooLarge { chart: usize, color: usize, ratio: String },
    #[error("ratios too large: {detail} (shrink d_{chart})")]
    RatiosTooLarge { chart: usize, detail: String },
    /// `chart` is set when the shortfall comes from the grid alone (the
    /// objects' area fits the target), so a finer scale may cure it.
    #[error("capacity: {detail}")]
    Capacity { chart: Option<usize>, detail: String },
    #[error("disconnected graph: {detail}")]
    Disconnected { chart: usize, detail: String },
    #[error("gate too small: no pilot cell fits gate {gate}")]
    GateTooSmall { chart: usize, gate: usize },
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

impl TransportError {
    /// Chart whose scale should be halved before retrying, if the error is
    /// one a smaller scale can cure.
    pub fn retry_chart(&self) -> Option<usize> {
        match self {
            TransportError::ScaleTooLarge { chart, .. }
            | TransportError::RatiosTooLarge { chart, .. }
            | TransportError::Disconnected { chart, .. }
            | TransportError::GateTooSmall { chart, .. } => Some(*chart),
            TransportError::Capacity { chart, .. } => *chart,
            _ => None,
        }
    }
}
