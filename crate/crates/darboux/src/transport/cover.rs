use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::scenario::{dist_sq, World};
use super::TransportError;
use crate::geometry::{fmt_rat, int, neighborhood, Aabb, Rat, RectilinearRegion};
use crate::lattice_cover::{enumerate_cubes, DimensionCover};

/// A cube of chart `chart`'s scaled cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacedCube {
    pub id: usize,
    pub chart: usize,
    pub color: usize,
    pub index: Vec<i64>,
    pub bbox: Aabb,
}

#[derive(Debug, Clone)]
pub struct ColoredCubeSet {
    pub cubes: Vec<PlacedCube>,
    /// `areas[i][j-1]`: total area of colour `j` in chart `i`.
    pub areas: Vec<Vec<Rat>>,
    by_color: Vec<Vec<usize>>,
}

impl ColoredCubeSet {
    pub fn of_color(&self, j: usize) -> impl Iterator<Item = &PlacedCube> {
        self.by_color[j - 1].iter().map(move |&i| &self.cubes[i])
    }

    pub fn ids_of_color(&self, j: usize) -> &[usize] {
        &self.by_color[j - 1]
    }

    pub fn k(&self) -> usize {
        self.by_color.len()
    }
}

/// Every cube of scale `d_i` whose box lies in `V_i` at distance at least
/// `d_i` from `∂V_i`, for every chart and colour. Fails when some colour's
/// area in a chart exceeds that chart's budget.
pub fn build_colored_cover(world: &World, cover: &DimensionCover) -> Result<ColoredCubeSet, TransportError> {
    let k = cover.k();
    let mut cubes = Vec::new();
    let mut by_color = vec![Vec::new(); k];
    let mut areas = Vec::with_capacity(world.levels());
    for (i, chart) in world.charts.iter().enumerate() {
        let d = world.scales[i];
        let bb = chart.bbox().expect("nonempty chart");
        let pad = neighborhood(&bb, &(d * int(2))).expect("nonnegative");
        let outside = RectilinearRegion::from_box(pad).difference(chart);
        let d2 = d * d;
        let mut row = vec![Rat::zero(); k];
        for j in 1..=k {
            for c in enumerate_cubes(cover, j, &bb, &d)? {
                let b = c.bbox();
                if !bb.contains(&b) || !chart.contains_box(&b) {
                    continue;
                }
                if outside.cells().iter().any(|o| dist_sq(&b, o) < d2) {
                    continue;
                }
                row[j - 1] += b.volume();
                let id = cubes.len();
                by_color[j - 1].push(id);
                cubes.push(PlacedCube {
                    id,
                    chart: i,
                    color: j,
                    index: c.index,
                    bbox: b,
                });
            }
        }
        for (j, a) in row.iter().enumerate() {
            let budget = world.budget.budgets[i];
            if *a > budget {
                return Err(TransportError::ScaleTooLarge {
                    chart: i,
                    color: j + 1,
                    ratio: fmt_rat(&(a / budget)),
                });
            }
        }
        areas.push(row);
    }
    Ok(ColoredCubeSet { cubes, areas, by_color })
}

/// Area of the charts' union not covered by any cube.
pub fn cover_residual(world: &World, cubes: &ColoredCubeSet) -> Rat {
    let boxes: Vec<Aabb> = cubes.cubes.iter().map(|c| c.bbox.clone()).collect();
    world.union.difference(&RectilinearRegion::union_of(&boxes)).area()
}
