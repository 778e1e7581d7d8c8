//! Covering the model by displaceable sets: the cube transport planner is
//! rerun with `2n+1` colours and rectangular targets inside `U`, and each
//! colour's final position is one displaceable region.

use serde::Serialize;

use super::displacement::{build_displacement, DisplacementGadget, Shear};
use super::HamError;
use crate::geometry::{fmt_rat, int, rat, Aabb, Point, Rat, RectilinearRegion};
use crate::par::Exec;
use crate::transport::{plan_scenario, ChartSpec, Scenario, ScenarioRun, TargetSpec, TransportError};

pub struct DisplaceableCover {
    pub gadget: DisplacementGadget,
    pub scenario: Scenario,
    pub run: ScenarioRun,
    /// One region per colour: the union of that colour's cubes after transport.
    pub regions: Vec<RectilinearRegion>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegionCheck {
    pub color: usize,
    pub area: String,
    pub inside_u: bool,
    pub displaced: bool,
}

impl DisplaceableCover {
    pub fn checks(&self) -> Vec<RegionCheck> {
        self.regions
            .iter()
            .enumerate()
            .map(|(j, r)| RegionCheck {
                color: j + 1,
                area: fmt_rat(&r.area()),
                inside_u: self.gadget.u_under.contains_region(r),
                displaced: self.gadget.sheared_disjoint(r),
            })
            .collect()
    }
}

/// Cover the unit-area model (`k = 1`, `d = 2/3`, `δ = 1/12`) by three
/// regions, each displaced by the ridge shear. `target_fraction` is the share
/// of the area the packing targets must be able to hold; it has to beat
/// `1/(2n+1)` or the colours cannot all fit.
pub fn displaceable_cover_scenario(
    n: usize,
    target_fraction: Rat,
    cube_scale: Rat,
    exec: Exec,
) -> Result<DisplaceableCover, HamError> {
    if n != 1 {
        return Err(HamError::BadGadget(format!("only the planar model is built, got n = {n}")));
    }
    let colors = 2 * n + 1;
    let floor = rat(1, colors as i128);
    if target_fraction <= floor {
        return Err(TransportError::Capacity {
            chart: None,
            detail: format!(
                "target fraction {} does not exceed 1/{colors}",
                fmt_rat(&target_fraction)
            ),
        }
        .into());
    }
    let (d, delta, nu) = (rat(2, 3), rat(1, 12), rat(1, 1000));
    let eps = rat(1, 100);
    let (gadget, report) = build_displacement(1, d, delta, nu, target_fraction, eps, Shear::Ridge)?;
    if !report.displaced || !report.shear_ok {
        return Err(HamError::BadGadget("the shear does not displace U".into()));
    }
    if !report.area_ok {
        return Err(TransportError::Capacity {
            chart: None,
            detail: format!("U has area {} below {}", fmt_rat(&report.area_u), fmt_rat(&report.area_target)),
        }
        .into());
    }
    let zones: Vec<Aabb> = (0..2)
        .map(|j| Aabb::rect(int(2 * j) * d + nu, nu, int(2 * j + 1) * d - nu, d / int(2) - nu).expect("positive"))
        .collect();
    let zone_area: Rat = zones.iter().map(Aabb::volume).sum();
    if zone_area <= floor * gadget.model_area() {
        return Err(TransportError::Capacity {
            chart: None,
            detail: format!("zones hold {}, not enough for one colour", fmt_rat(&zone_area)),
        }
        .into());
    }
    debug_assert!(zones.iter().all(|z| gadget.u_under.contains_box(z)));
    let scenario = Scenario {
        name: "displaceable-cover".into(),
        k: colors,
        eps: rat(1, 50),
        charts: vec![ChartSpec {
            region: gadget.n_region.clone(),
            core: None,
            parent: None,
            gate: None,
            scale: cube_scale,
            nu: None,
        }],
        ball_center: Point::xy(d / int(2), d / int(4)),
        target: TargetSpec::Zones { zones },
        retry_bound: 4,
        disjoint_cores: Vec::new(),
    };
    let run = plan_scenario(&scenario, exec)?;
    if !run.all_valid() {
        return Err(HamError::BadGadget("a transport plan failed simulation".into()));
    }
    let regions: Vec<RectilinearRegion> = run
        .plans
        .iter()
        .map(|p| {
            let mut off = vec![Point::origin(2); p.objects.len()];
            for m in &p.moves {
                off[m.object] = off[m.object].add(&m.translation);
            }
            let cells: Vec<Aabb> = p
                .objects
                .iter()
                .enumerate()
                .flat_map(|(o, obj)| obj.body.translate(&off[o]).cells().to_vec())
                .collect();
            RectilinearRegion::union_of(&cells)
        })
        .collect();
    Ok(DisplaceableCover {
        gadget,
        scenario,
        run,
        regions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn third_is_too_little() {
        let e = displaceable_cover_scenario(1, rat(1, 3), rat(1, 48), Exec::Sequential).err().unwrap();
        assert!(e.to_string().starts_with("capacity"), "{e}");
    }

    #[test]
    fn three_displaced_regions() {
        let c = displaceable_cover_scenario(1, rat(49, 100), rat(1, 64), Exec::default()).unwrap();
        assert_eq!(c.regions.len(), 3);
        for ch in c.checks() {
            assert!(ch.inside_u && ch.displaced, "{ch:?}");
        }
    }
}
