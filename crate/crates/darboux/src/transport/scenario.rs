use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::TransportError;
use crate::geometry::{
    box_distance_sq, int, neighborhood, pi_hi, pi_lo, rat, serde_rat, serde_rat_opt, serde_rat_vec, sqrt_floor,
    Aabb, Point, Rat, RectilinearRegion,
};
use crate::lattice_cover::build_cover;

/// Radii are rounded down to this denominator.
const RADIUS_DEN: i128 = 1000;

fn default_retry() -> usize {
    4
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartSpec {
    pub region: RectilinearRegion,
    /// Defaults to the whole chart.
    #[serde(default)]
    pub core: Option<RectilinearRegion>,
    #[serde(default)]
    pub parent: Option<usize>,
    #[serde(default)]
    pub gate: Option<Aabb>,
    #[serde(with = "serde_rat")]
    pub scale: Rat,
    /// Envelope ratio `ν`; required for every chart but the root.
    #[serde(default, with = "serde_rat_opt")]
    pub nu: Option<Rat>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TargetSpec {
    /// Pack height 0 into the disc `r_0` and height `h` into the annulus
    /// `(r_{h-1}, r_h)` about `ball_center`.
    #[default]
    Disc,
    /// Pack into rectangles instead of a disc (single chart only). Each
    /// zone is the compression domain; cells must keep a margin of two
    /// cube sides from its boundary.
    Zones { zones: Vec<Aabb> },
}

/// Input file of the transport planner.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub k: usize,
    #[serde(with = "serde_rat")]
    pub eps: Rat,
    pub charts: Vec<ChartSpec>,
    pub ball_center: Point,
    #[serde(default)]
    pub target: TargetSpec,
    #[serde(default = "default_retry")]
    pub retry_bound: usize,
    /// Pairs `(g, h)`, `g < h`, whose core `U_g'` must miss `V_h`.
    #[serde(default)]
    pub disjoint_cores: Vec<(usize, usize)>,
}

impl Scenario {
    pub fn scales(&self) -> Vec<Rat> {
        self.charts.iter().map(|c| c.scale).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Zone {
    pub final_box: Aabb,
    pub compress_box: Aabb,
}

/// Area bookkeeping: per-chart budgets `A_h = (|V_h| + (k-1)/(l+1)·ε)/k`
/// and rational lower bounds on the target areas.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CapacityBudget {
    pub k: usize,
    #[serde(with = "serde_rat")]
    pub eps: Rat,
    #[serde(with = "serde_rat_vec")]
    pub chart_areas: Vec<Rat>,
    #[serde(with = "serde_rat_vec")]
    pub budgets: Vec<Rat>,
    /// Lower bound on the area of each target (disc, then annuli; or the
    /// total zone area).
    #[serde(with = "serde_rat_vec")]
    pub target_areas: Vec<Rat>,
}

/// The flat chart complex with its target discs fixed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct World {
    pub k: usize,
    #[serde(with = "serde_rat")]
    pub delta: Rat,
    pub charts: Vec<RectilinearRegion>,
    pub cores: Vec<RectilinearRegion>,
    pub gates: Vec<Option<Aabb>>,
    pub parents: Vec<Option<usize>>,
    #[serde(with = "serde_rat_vec")]
    pub scales: Vec<Rat>,
    #[serde(with = "serde_rat_vec")]
    pub nus: Vec<Rat>,
    pub ball_center: Point,
    #[serde(with = "serde_rat_vec")]
    pub radii: Vec<Rat>,
    /// Radius of the closed disc in which interior cubes are compressed.
    #[serde(with = "serde_rat")]
    pub compress_radius: Rat,
    pub zones: Vec<Zone>,
    pub budget: CapacityBudget,
    #[serde(skip)]
    pub union: RectilinearRegion,
}

fn bad(msg: impl Into<String>) -> TransportError {
    TransportError::BadScenario(msg.into())
}

/// Cells of `pad \ region` for a pad box around the region.
fn outside_cells(region: &RectilinearRegion, margin: &Rat) -> RectilinearRegion {
    let bb = region.bbox().expect("nonempty region");
    let pad = neighborhood(&bb, margin).expect("nonnegative");
    RectilinearRegion::from_box(pad).difference(region)
}

impl World {
    pub fn build(s: &Scenario, scales: &[Rat]) -> Result<World, TransportError> {
        let levels = s.charts.len();
        if levels == 0 {
            return Err(bad("no charts"));
        }
        if scales.len() != levels {
            return Err(bad("one scale per chart"));
        }
        let cover = build_cover(1, s.k)?;
        let delta = cover.delta;
        if !s.eps.is_positive() {
            return Err(bad("ε must be positive"));
        }
        if s.ball_center.dim() != 2 {
            return Err(bad("the planner works in the plane"));
        }
        let mut parents = Vec::with_capacity(levels);
        let mut gates = Vec::with_capacity(levels);
        let mut nus = Vec::with_capacity(levels);
        let mut charts = Vec::with_capacity(levels);
        let mut cores = Vec::with_capacity(levels);
        for (i, c) in s.charts.iter().enumerate() {
            if c.region.is_empty() || c.region.cells().iter().any(|b| b.dim() != 2) {
                return Err(bad(format!("chart {i} must be a nonempty planar region")));
            }
            if !scales[i].is_positive() {
                return Err(bad(format!("chart {i} scale must be positive")));
            }
            let core = c.core.clone().unwrap_or_else(|| c.region.clone());
            if !c.region.contains_region(&core) {
                return Err(bad(format!("core {i} is not inside its chart")));
            }
            if i == 0 {
                if c.parent.is_some() || c.gate.is_some() {
                    return Err(bad("chart 0 is the root and has no parent or gate"));
                }
                nus.push(Rat::zero());
            } else {
                let p = c.parent.ok_or_else(|| bad(format!("chart {i} needs a parent")))?;
                if p >= i {
                    return Err(bad(format!("parent of chart {i} must have a smaller index")));
                }
                let g = c.gate.clone().ok_or_else(|| bad(format!("chart {i} needs a gate")))?;
                if !c.region.contains_box(&g) || !s.charts[p].region.contains_box(&g) {
                    return Err(bad(format!("gate {i} must lie in chart {i} and its parent {p}")));
                }
                let nu = c.nu.ok_or_else(|| bad(format!("chart {i} needs ν")))?;
                if !nu.is_positive() || nu * int(2) >= delta {
                    return Err(bad(format!("ν of chart {i} must lie in ]0, δ/2[")));
                }
                gates.push(Some(g));
                parents.push(Some(p));
                nus.push(nu);
                charts.push(c.region.clone());
                cores.push(core);
                continue;
            }
            gates.push(None);
            parents.push(None);
            charts.push(c.region.clone());
            cores.push(core);
        }
        for &(g, h) in &s.disjoint_cores {
            if g >= h || h >= levels {
                return Err(bad(format!("bad core pair ({g}, {h})")));
            }
            if cores[g].overlaps(&charts[h]) {
                return Err(bad(format!("core {g} meets chart {h}")));
            }
        }
        let union = charts
            .iter()
            .skip(1)
            .fold(charts[0].clone(), |acc, c| acc.union(c));

        let k = s.k;
        let chart_areas: Vec<Rat> = charts.iter().map(RectilinearRegion::area).collect();
        let slack = int(k as i128 - 1) / int(levels as i128) * s.eps;
        let budgets: Vec<Rat> = chart_areas.iter().map(|a| (a + slack) / int(k as i128)).collect();

        let center = s.ball_center.clone();
        let mut radii = Vec::with_capacity(levels);
        let mut r2 = Rat::zero();
        for b in &budgets {
            r2 += b / pi_hi();
            let r = sqrt_floor(&r2, RADIUS_DEN);
            r2 = r * r;
            radii.push(r);
        }
        // squared distance from the center to the outside of V_0
        let mut fit_sq: Option<Rat> = None;
        let margin = scales.iter().max().copied().expect("nonempty") + int(1);
        for cell in outside_cells(&charts[0], &margin).cells() {
            let d = cell.dist_sq_to_point(&center);
            fit_sq = Some(fit_sq.map_or(d, |f: Rat| f.min(d)));
        }
        let fit_sq = fit_sq.expect("padding leaves an outside");
        let mut free_sq = fit_sq;
        for chart in charts.iter().skip(1) {
            for cell in chart.cells() {
                free_sq = free_sq.min(cell.dist_sq_to_point(&center));
            }
        }

        let mut zones = Vec::new();
        let compress_radius;
        let target_areas;
        match &s.target {
            TargetSpec::Disc => {
                let rl = radii[levels - 1];
                if rl * rl > fit_sq {
                    return Err(bad("the outer target disc does not fit in chart 0"));
                }
                let r0 = radii[0];
                let free = sqrt_floor(&free_sq, RADIUS_DEN);
                compress_radius = (rat(2 * k as i128, 5) * r0).min((r0 + free) / int(2));
                let mut areas = vec![pi_lo() * radii[0] * radii[0]];
                for h in 1..levels {
                    areas.push(pi_lo() * (radii[h] * radii[h] - radii[h - 1] * radii[h - 1]));
                }
                target_areas = areas;
            }
            TargetSpec::Zones { zones: zs } => {
                if levels != 1 {
                    return Err(bad("zone targets need a single chart"));
                }
                let m = scales[0] * int(2);
                for z in zs {
                    if !charts[0].contains_box(z) {
                        return Err(bad("zones must lie in chart 0"));
                    }
                    let lo = Point::xy(z.lo().at(0) + m, z.lo().at(1) + m);
                    let hi = Point::xy(z.hi().at(0) - m, z.hi().at(1) - m);
                    let final_box = Aabb::new(lo, hi).map_err(|_| bad("zone thinner than four cube sides"))?;
                    zones.push(Zone {
                        final_box,
                        compress_box: z.clone(),
                    });
                }
                if zones.is_empty() {
                    return Err(bad("no zones"));
                }
                compress_radius = Rat::zero();
                target_areas = vec![zones.iter().map(|z| z.final_box.volume()).sum()];
            }
        }
        Ok(World {
            k,
            delta,
            charts,
            cores,
            gates,
            parents,
            scales: scales.to_vec(),
            nus,
            ball_center: center,
            radii,
            compress_radius,
            zones,
            budget: CapacityBudget {
                k,
                eps: s.eps,
                chart_areas,
                budgets,
                target_areas,
            },
            union,
        })
    }

    pub fn levels(&self) -> usize {
        self.charts.len()
    }

    pub fn is_disc(&self) -> bool {
        self.zones.is_empty()
    }

    /// Charts from `h` up the tree to the root.
    pub fn chart_path(&self, h: usize) -> Vec<usize> {
        let mut out = vec![h];
        let mut c = h;
        while let Some(p) = self.parents[c] {
            out.push(p);
            c = p;
        }
        out
    }

    /// Side of an object of height `h`: the cube, or its `ν_h d_h` envelope.
    pub fn object_side(&self, h: usize) -> Rat {
        self.scales[h] * (int(1) + int(2) * self.nus[h])
    }

    /// Target grid side `(1 + 2ν_h)d_h + ε_h` with `ε_h = d_h/100`.
    pub fn cell_side(&self, h: usize) -> Rat {
        self.object_side(h) + self.scales[h] / int(100)
    }

    /// Centers of the height-0 target domains.
    pub fn domain_centers(&self) -> Vec<Point> {
        if self.is_disc() {
            vec![self.ball_center.clone()]
        } else {
            self.zones.iter().map(|z| z.final_box.center()).collect()
        }
    }

    /// The closed box lies in the open height-`h` target.
    pub fn in_final(&self, h: usize, b: &Aabb) -> bool {
        if !self.is_disc() {
            return h == 0 && self.zones.iter().any(|z| z.final_box.contains(b));
        }
        let c = &self.ball_center;
        let r = self.radii[h];
        if b.max_dist_sq_to_point(c) >= r * r {
            return false;
        }
        h == 0 || b.dist_sq_to_point(c) > self.radii[h - 1] * self.radii[h - 1]
    }

    /// Which height-0 domain the closed box sits in, if any.
    pub fn final_domain_of(&self, b: &Aabb) -> Option<usize> {
        if self.is_disc() {
            self.in_final(0, b).then_some(0)
        } else {
            self.zones.iter().position(|z| z.final_box.contains(b))
        }
    }

    /// The closed box meets the closed height-0 target.
    pub fn meets_final_closed(&self, b: &Aabb) -> bool {
        if self.is_disc() {
            let r = self.radii[0];
            b.dist_sq_to_point(&self.ball_center) <= r * r
        } else {
            self.zones.iter().any(|z| z.final_box.intersects(b))
        }
    }

    /// The closed box meets the open height-0 target.
    pub fn meets_final_open(&self, b: &Aabb) -> bool {
        if self.is_disc() {
            let r = self.radii[0];
            b.dist_sq_to_point(&self.ball_center) < r * r
        } else {
            self.zones.iter().any(|z| z.final_box.interiors_overlap(b))
        }
    }

    /// Index of a compression domain containing the closed box.
    pub fn compress_domain_of(&self, b: &Aabb) -> Option<usize> {
        if self.is_disc() {
            let r = self.compress_radius;
            (b.max_dist_sq_to_point(&self.ball_center) <= r * r).then_some(0)
        } else {
            self.zones.iter().position(|z| z.compress_box.contains(b))
        }
    }

    /// The closed box misses the open disc `r_{h-1}` (vacuous for `h = 0`).
    pub fn avoids_lower_disc(&self, h: usize, b: &Aabb) -> bool {
        if h == 0 || !self.is_disc() {
            return true;
        }
        let r = self.radii[h - 1];
        b.dist_sq_to_point(&self.ball_center) >= r * r
    }

    pub fn in_world(&self, b: &Aabb) -> bool {
        self.union.contains_box(b)
    }
}

/// `dist(a, b)^2` for two boxes of the same dimension.
pub(crate) fn dist_sq(a: &Aabb, b: &Aabb) -> Rat {
    box_distance_sq(a, b).expect("planar boxes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transport::fixtures::{single_chart, two_chart};

    #[test]
    fn single_chart_radii_fit_budget() {
        let s = single_chart(rat(1, 32), rat(1, 10));
        let w = World::build(&s, &s.scales()).unwrap();
        let r0 = w.radii[0];
        assert!(pi_hi() * r0 * r0 <= w.budget.budgets[0]);
        assert!(pi_hi() * (r0 + rat(1, RADIUS_DEN)) * (r0 + rat(1, RADIUS_DEN)) > w.budget.budgets[0]);
        assert_eq!(w.budget.budgets[0], rat(2, 5));
        assert!(w.compress_radius > r0);
    }

    #[test]
    fn two_chart_radii() {
        let s = two_chart();
        let w = World::build(&s, &s.scales()).unwrap();
        assert_eq!(w.chart_path(1), vec![1, 0]);
        assert!(w.radii[0] < w.radii[1]);
        assert!(w.radii[1] < rat(1, 2));
        let a = w.budget.target_areas[1];
        assert!(a > Rat::zero());
    }

    #[test]
    fn rejects_bad_gate() {
        let mut s = two_chart();
        s.charts[1].gate = Some(Aabb::rect(int(2), int(2), int(3), int(3)).unwrap());
        assert!(matches!(World::build(&s, &s.scales()), Err(TransportError::BadScenario(_))));
    }

    #[test]
    fn scenario_json_round_trip() {
        let s = two_chart();
        let text = serde_json::to_string(&s).unwrap();
        let back: Scenario = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }
}
