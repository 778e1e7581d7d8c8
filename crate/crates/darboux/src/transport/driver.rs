use serde::{Deserialize, Serialize};

use super::cover::{build_colored_cover, cover_residual, ColoredCubeSet};
use super::decompose::{decompose_colors, ColorClassDecomposition};
use super::plan::{plan_color, TransportPlan};
use super::scenario::{Scenario, World};
use super::simulate::{simulate_plan, SimReport};
use super::TransportError;
use crate::geometry::{serde_rat, serde_rat_vec, Rat};
use crate::lattice_cover::build_cover;
use crate::par::Exec;

/// Everything produced by one successful attempt.
#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub world: World,
    pub cubes: ColoredCubeSet,
    pub decompositions: Vec<ColorClassDecomposition>,
    pub plans: Vec<TransportPlan>,
    pub reports: Vec<SimReport>,
    pub scales: Vec<Rat>,
    /// 1 when the scenario's own scales worked.
    pub attempts: usize,
    pub residual: Rat,
}

/// Serializable record of a run: enough to rebuild the world and replay.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord<'a> {
    pub scenario: &'a Scenario,
    #[serde(with = "serde_rat_vec")]
    pub scales: Vec<Rat>,
    pub attempts: usize,
    #[serde(with = "serde_rat")]
    pub residual: Rat,
    pub plans: &'a [TransportPlan],
    pub reports: &'a [SimReport],
}

/// The part of a [`RunRecord`] needed to replay it.
#[derive(Debug, Clone, Deserialize)]
pub struct RecordedRun {
    pub scenario: Scenario,
    #[serde(with = "serde_rat_vec")]
    pub scales: Vec<Rat>,
    pub plans: Vec<TransportPlan>,
}

impl ScenarioRun {
    pub fn record<'a>(&'a self, scenario: &'a Scenario) -> RunRecord<'a> {
        RunRecord {
            scenario,
            scales: self.scales.clone(),
            attempts: self.attempts,
            residual: self.residual,
            plans: &self.plans,
            reports: &self.reports,
        }
    }

    pub fn all_valid(&self) -> bool {
        self.reports.iter().all(|r| r.valid)
    }
}

fn attempt(s: &Scenario, scales: &[Rat], exec: Exec) -> Result<ScenarioRun, TransportError> {
    let world = World::build(s, scales)?;
    let cover = build_cover(1, s.k)?;
    let cubes = build_colored_cover(&world, &cover)?;
    let colors: Vec<usize> = (1..=s.k).collect();
    let decompositions = exec
        .map(&colors, |&j| decompose_colors(&world, &cubes, j))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let plans = exec
        .map(&decompositions, |d| plan_color(&world, d))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let reports = exec.map(&plans, |p| simulate_plan(&world, &cubes, p));
    let residual = cover_residual(&world, &cubes);
    Ok(ScenarioRun {
        world,
        cubes,
        decompositions,
        plans,
        reports,
        scales: scales.to_vec(),
        attempts: 0,
        residual,
    })
}

/// Plan every colour, halving the scale of the chart an error blames and
/// retrying up to the scenario's bound.
pub fn plan_scenario(s: &Scenario, exec: Exec) -> Result<ScenarioRun, TransportError> {
    let mut scales = s.scales();
    let mut last = None;
    for n in 1..=s.retry_bound.max(1) {
        match attempt(s, &scales, exec) {
            Ok(mut run) => {
                run.attempts = n;
                return Ok(run);
            }
            Err(e) => match e.retry_chart() {
                Some(c) if c < scales.len() => {
                    scales[c] /= Rat::from_integer(2);
                    last = Some(e);
                }
                _ => return Err(e),
            },
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Rebuild the world at the recorded scales and simulate the given plans.
pub fn replay(s: &Scenario, scales: &[Rat], plans: &[TransportPlan], exec: Exec) -> Result<Vec<SimReport>, TransportError> {
    let world = World::build(s, scales)?;
    let cubes = build_colored_cover(&world, &build_cover(1, s.k)?)?;
    for p in plans {
        if p.color == 0 || p.color > s.k {
            return Err(TransportError::BadScenario(format!("plan for colour {} but k = {}", p.color, s.k)));
        }
    }
    Ok(exec.map(plans, |p| simulate_plan(&world, &cubes, p)))
}
