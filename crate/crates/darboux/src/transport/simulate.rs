use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::cover::ColoredCubeSet;
use super::plan::{Phase, TransportPlan};
use super::scenario::World;
use crate::geometry::{int, neighborhood, Aabb, Point, Rat, RectilinearRegion};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// One of "axis-parallel", "swept box", "outside world", "compress
    /// domain", "final domain", "lower disc", "sweep collision", "detour
    /// magnitude", "detour restore", "tree order", "cell collision",
    /// "containment", "bodies".
    pub kind: String,
    pub step: Option<usize>,
    pub object: Option<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    pub final_containment: bool,
    pub area_preserved: bool,
    pub moves: usize,
}

/// Shapes keyed by their left edge, for sweep queries.
struct Sweep {
    by_x: BTreeMap<(Rat, usize, usize), Aabb>,
    keys: Vec<Vec<(Rat, usize, usize)>>,
    widest: Rat,
}

impl Sweep {
    fn new(n: usize) -> Self {
        Sweep {
            by_x: BTreeMap::new(),
            keys: vec![Vec::new(); n],
            widest: Rat::from_integer(0),
        }
    }

    fn set(&mut self, o: usize, shapes: Vec<Aabb>) {
        for k in std::mem::take(&mut self.keys[o]) {
            self.by_x.remove(&k);
        }
        for (i, s) in shapes.into_iter().enumerate() {
            let k = (*s.lo().at(0), o, i);
            self.widest = self.widest.max(s.width(0));
            self.keys[o].push(k);
            self.by_x.insert(k, s);
        }
    }

    fn hits(&self, b: &Aabb, skip: usize) -> Vec<usize> {
        let lo = (b.lo().at(0) - self.widest, 0, 0);
        let hi = (*b.hi().at(0), 0, 0);
        let mut out: Vec<usize> = self
            .by_x
            .range(lo..hi)
            .filter(|((_, o, _), s)| *o != skip && s.interiors_overlap(b))
            .map(|((_, o, _), _)| *o)
            .collect();
        out.dedup();
        out
    }
}

/// Replay a plan move by move and check it against the world.
pub fn simulate_plan(world: &World, cubes: &ColoredCubeSet, plan: &TransportPlan) -> SimReport {
    let objs = &plan.objects;
    let n = objs.len();
    let mut out: Vec<Violation> = Vec::new();
    let mut flag = |kind: &str, step: Option<usize>, object: Option<usize>, detail: String| {
        out.push(Violation {
            kind: kind.into(),
            step,
            object,
            detail,
        });
    };

    // bodies and envelopes as declared
    let ids: HashSet<usize> = cubes.ids_of_color(plan.color).iter().copied().collect();
    let mut seen: HashSet<usize> = HashSet::new();
    for (o, obj) in objs.iter().enumerate() {
        let h = obj.height;
        if h >= world.levels() || !obj.members.contains(&obj.lead) {
            flag("bodies", None, Some(o), "bad height or lead".into());
            continue;
        }
        let lead = &cubes.cubes[obj.lead];
        let env = neighborhood(&lead.bbox, &(world.scales[h] * world.nus[h])).expect("ν ≥ 0");
        if lead.chart != h || env != obj.envelope {
            flag("bodies", None, Some(o), "envelope is not the lead's neighbourhood".into());
        }
        if !RectilinearRegion::from_box(obj.envelope.clone()).contains_region(&obj.body) {
            flag("bodies", None, Some(o), "body leaves the envelope".into());
        }
        for &m in &obj.members {
            if !ids.contains(&m) || !seen.insert(m) || !obj.body.contains_box(&cubes.cubes[m].bbox) {
                flag("bodies", None, Some(o), format!("member {m} misplaced"));
            }
        }
    }
    if seen.len() != ids.len() {
        flag("bodies", None, None, format!("{} of {} cubes belong to objects", seen.len(), ids.len()));
    }

    let assigned: HashMap<usize, &super::plan::CellAssignment> = plan.assignment.iter().map(|a| (a.object, a)).collect();
    let mut off: Vec<Point> = vec![Point::origin(2); n];
    let env = |o: usize, off: &[Point]| objs[o].envelope.translate(&off[o]);
    let shapes = |o: usize, phase: usize, off: &[Point]| -> Vec<Aabb> {
        if objs[o].height <= phase {
            vec![env(o, off)]
        } else {
            objs[o].body.translate(&off[o]).cells().to_vec()
        }
    };
    let mut phase = usize::MAX;
    let mut sweep = Sweep::new(n);
    let mut open: Vec<(usize, Point)> = Vec::new();
    let mut routed: HashSet<usize> = HashSet::new();
    let half = world.delta * world.scales[0] / int(2);
    for (step, mv) in plan.moves.iter().enumerate() {
        let o = mv.object;
        if o >= n {
            flag("bodies", Some(step), None, format!("unknown object {o}"));
            continue;
        }
        let h = objs[o].height;
        if h != phase {
            phase = h;
            sweep = Sweep::new(n);
            for p in 0..n {
                sweep.set(p, shapes(p, phase, &off));
            }
        }
        let t = &mv.translation;
        let cur = env(o, &off);
        if t.dim() != 2 || t.axis().is_none() {
            flag("axis-parallel", Some(step), Some(o), "translation is zero or diagonal".into());
            continue;
        }
        let hull = cur.hull(&cur.translate(t));
        if hull != mv.swept {
            flag("swept box", Some(step), Some(o), "declared sweep differs from the hull".into());
        }
        if !world.in_world(&hull) {
            flag("outside world", Some(step), Some(o), String::new());
        }
        match mv.phase {
            Phase::CompressInterior if world.compress_domain_of(&hull).is_none() => {
                flag("compress domain", Some(step), Some(o), String::new());
            }
            Phase::RouteTreeLeg if h == 0 && world.meets_final_open(&hull) => {
                flag("final domain", Some(step), Some(o), String::new());
            }
            _ => {}
        }
        if !world.avoids_lower_disc(h, &hull) {
            flag("lower disc", Some(step), Some(o), String::new());
        }
        let hits = sweep.hits(&hull, o);
        if !hits.is_empty() {
            flag("sweep collision", Some(step), Some(o), format!("crosses {hits:?}"));
        }
        match mv.phase {
            Phase::DetourDisplace => {
                if h != 0 || t.norm_sq() > half * half {
                    flag("detour magnitude", Some(step), Some(o), String::new());
                }
                open.push((o, t.clone()));
            }
            Phase::DetourRestore => match open.pop() {
                Some((p, d)) if p == o && d.add(t).is_zero() => {}
                _ => flag("detour restore", Some(step), Some(o), "no matching displacement".into()),
            },
            Phase::RouteTreeLeg if routed.insert(o) => {
                if let Some(p) = plan.tree_parent.get(o).copied().flatten() {
                    let arrived = p < n && assigned.get(&p).is_some_and(|a| a.cell_box.contains(&env(p, &off)));
                    if !arrived {
                        flag("tree order", Some(step), Some(o), format!("ancestor {p} has not arrived"));
                    }
                }
            }
            _ => {}
        }
        off[o] = off[o].add(t);
        sweep.set(o, shapes(o, phase, &off));
    }
    if !open.is_empty() {
        flag("detour restore", None, None, format!("{} displacements left open", open.len()));
    }

    // final state
    let mut containment = true;
    let mut cells: HashSet<(usize, [i64; 2])> = HashSet::new();
    for a in &plan.assignment {
        if !cells.insert((a.height, a.cell)) {
            flag("cell collision", None, Some(a.object), format!("cell {:?} reused", a.cell));
        }
    }
    for o in 0..n {
        let e = env(o, &off);
        let h = objs[o].height;
        let ok = assigned
            .get(&o)
            .is_some_and(|a| a.height == h && a.cell_box.contains(&e) && world.in_final(h, &a.cell_box))
            && world.in_final(h, &e);
        if !ok {
            containment = false;
            flag("containment", None, Some(o), "object is not inside its target cell".into());
        }
    }
    let mut finals: Vec<(Aabb, usize)> = (0..n).map(|o| (env(o, &off), o)).collect();
    finals.sort_by(|a, b| a.0.lo().at(0).cmp(b.0.lo().at(0)));
    for i in 0..finals.len() {
        for j in i + 1..finals.len() {
            if finals[j].0.lo().at(0) >= finals[i].0.hi().at(0) {
                break;
            }
            if finals[i].0.interiors_overlap(&finals[j].0) {
                flag(
                    "cell collision",
                    None,
                    Some(finals[j].1),
                    format!("overlaps object {}", finals[i].1),
                );
            }
        }
    }
    let area_preserved = (0..n).all(|o| {
        let b = &objs[o].body;
        b.translate(&off[o]).area() == b.area()
            && objs[o].members.iter().all(|&m| {
                let c = &cubes.cubes[m].bbox;
                c.translate(&off[o]).widths() == c.widths()
            })
    });
    SimReport {
        valid: out.is_empty(),
        final_containment: containment,
        area_preserved,
        moves: plan.moves.len(),
        violations: out,
    }
}
