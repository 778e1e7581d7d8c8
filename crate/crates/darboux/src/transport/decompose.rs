use std::collections::HashMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::cover::ColoredCubeSet;
use super::scenario::World;
use super::TransportError;
use crate::geometry::{complement_components, neighborhood, Aabb, Rat, RectilinearRegion};

/// One rigid block moved by the planner: a single cube at height 0, or a
/// saturated component carried inside the envelope `C^{ν_h d_h}` of its
/// unique `h`-cube.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransportObject {
    pub id: usize,
    pub height: usize,
    /// The component's unique cube from chart `height`.
    pub lead: usize,
    pub members: Vec<usize>,
    pub body: RectilinearRegion,
    pub envelope: Aabb,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentInfo {
    pub members: Vec<usize>,
    pub height: usize,
}

#[derive(Debug, Clone)]
pub struct ColorClassDecomposition {
    pub color: usize,
    pub components: Vec<ComponentInfo>,
    /// `saturated[h]` is `𝒮_h`.
    pub saturated: Vec<RectilinearRegion>,
    pub objects: Vec<TransportObject>,
}

/// `A` together with the bounded components of `universe \ A`.
pub fn saturate(region: &RectilinearRegion, universe: &Aabb) -> RectilinearRegion {
    let holes: Vec<Aabb> = complement_components(region, universe)
        .expect("region inside universe")
        .into_iter()
        .filter(|c| c.bounded)
        .flat_map(|c| c.region.cells().to_vec())
        .collect();
    if holes.is_empty() {
        return region.clone();
    }
    let mut all = region.cells().to_vec();
    all.extend(holes);
    RectilinearRegion::union_of(&all)
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = x;
        while self.0[c] != r {
            let n = self.0[c];
            self.0[c] = r;
            c = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Components of colour `j` (cubes joined when they overlap or share a
/// facet), their heights, the saturated families and the movable objects.
pub fn decompose_colors(
    world: &World,
    cubes: &ColoredCubeSet,
    color: usize,
) -> Result<ColorClassDecomposition, TransportError> {
    let ids: Vec<usize> = cubes.ids_of_color(color).to_vec();
    let levels = world.levels();
    let side = world.scales.iter().max().copied().expect("charts");
    let key = |x: &Rat| (x / side).floor().to_integer() as i64;
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (pos, &id) in ids.iter().enumerate() {
        let b = &cubes.cubes[id].bbox;
        for x in key(b.lo().at(0))..=key(b.hi().at(0)) {
            for y in key(b.lo().at(1))..=key(b.hi().at(1)) {
                buckets.entry((x, y)).or_default().push(pos);
            }
        }
    }
    let mut dsu = Dsu((0..ids.len()).collect());
    for v in buckets.values() {
        for (a, &p) in v.iter().enumerate() {
            for &q in &v[a + 1..] {
                let (bp, bq) = (&cubes.cubes[ids[p]].bbox, &cubes.cubes[ids[q]].bbox);
                if bp.interiors_overlap(bq) || bp.facet_adjacent(bq) {
                    dsu.union(p, q);
                }
            }
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for p in 0..ids.len() {
        let r = dsu.find(p);
        groups.entry(r).or_default().push(ids[p]);
    }
    let mut components: Vec<ComponentInfo> = groups
        .into_values()
        .map(|mut members| {
            members.sort_unstable();
            let height = members.iter().map(|&m| cubes.cubes[m].chart).max().expect("nonempty");
            ComponentInfo { members, height }
        })
        .collect();
    components.sort_by_key(|c| c.members[0]);

    for c in &components {
        let leads = c.members.iter().filter(|&&m| cubes.cubes[m].chart == c.height).count();
        if c.height > 0 && leads != 1 {
            return Err(TransportError::RatiosTooLarge {
                chart: c.height - 1,
                detail: format!("a height-{} component of colour {color} holds {leads} cubes of chart {}", c.height, c.height),
            });
        }
    }

    let universe = {
        let bb = world.union.bbox().expect("nonempty");
        neighborhood(&bb, &(side * Rat::from_integer(2))).expect("nonnegative")
    };
    let mut saturated = vec![RectilinearRegion::empty(); levels];
    let mut higher = RectilinearRegion::empty();
    let mut objects = Vec::new();
    let mut absorbed = vec![false; cubes.cubes.len()];
    for h in (1..levels).rev() {
        let boxes: Vec<Aabb> = components
            .iter()
            .filter(|c| c.height == h)
            .flat_map(|c| c.members.iter().map(|&m| cubes.cubes[m].bbox.clone()))
            .collect();
        let a = RectilinearRegion::union_of(&boxes).difference(&higher);
        let s = saturate(&a, &universe);
        for piece in s.connected_pieces() {
            let inside: Vec<usize> = ids
                .iter()
                .copied()
                .filter(|&m| !absorbed[m] && piece.overlaps_box(&cubes.cubes[m].bbox))
                .collect();
            let leads: Vec<usize> = inside.iter().copied().filter(|&m| cubes.cubes[m].chart == h).collect();
            if leads.len() != 1 {
                return Err(TransportError::RatiosTooLarge {
                    chart: h - 1,
                    detail: format!("a saturated piece of height {h} holds {} cubes of chart {h}", leads.len()),
                });
            }
            let lead = leads[0];
            let envelope = neighborhood(&cubes.cubes[lead].bbox, &(world.scales[h] * world.nus[h])).expect("ν ≥ 0");
            if !RectilinearRegion::from_box(envelope.clone()).contains_region(&piece) {
                return Err(TransportError::RatiosTooLarge {
                    chart: h - 1,
                    detail: format!("height-{h} component of colour {color} escapes its ν-envelope"),
                });
            }
            for &m in &inside {
                if !piece.contains_box(&cubes.cubes[m].bbox) {
                    return Err(TransportError::RatiosTooLarge {
                        chart: h - 1,
                        detail: format!("cube {m} straddles a height-{h} saturation"),
                    });
                }
                absorbed[m] = true;
            }
            objects.push(TransportObject {
                id: 0,
                height: h,
                lead,
                members: inside,
                body: piece,
                envelope,
            });
        }
        higher = higher.union(&s);
        saturated[h] = s;
    }
    // height 0: cubes of the same colour never touch, so each one is its
    // own saturated piece
    let mut zero = Vec::new();
    for c in components.iter().filter(|c| c.height == 0) {
        for &m in &c.members {
            if absorbed[m] {
                continue;
            }
            let b = &cubes.cubes[m].bbox;
            if higher.overlaps_box(b) {
                return Err(TransportError::RatiosTooLarge {
                    chart: 0,
                    detail: format!("cube {m} straddles a higher saturation"),
                });
            }
            zero.push(TransportObject {
                id: 0,
                height: 0,
                lead: m,
                members: vec![m],
                body: RectilinearRegion::from_box(b.clone()),
                envelope: b.clone(),
            });
        }
    }
    let zero_boxes: Vec<Aabb> = zero.iter().map(|o| o.envelope.clone()).collect();
    let s0 = RectilinearRegion::union_of(&zero_boxes);
    let total: Rat = zero_boxes.iter().map(Aabb::volume).sum();
    debug_assert_eq!(s0.area(), total);
    if !zero_boxes.is_empty() && saturate(&s0, &universe).area() != total {
        return Err(TransportError::RatiosTooLarge {
            chart: 0,
            detail: "height-0 cubes enclose a hole".into(),
        });
    }
    saturated[0] = if total.is_zero() { RectilinearRegion::empty() } else { s0 };
    let mut all = zero;
    all.extend(objects);
    for (i, o) in all.iter_mut().enumerate() {
        o.id = i;
    }
    Ok(ColorClassDecomposition {
        color,
        components,
        saturated,
        objects: all,
    })
}
