use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::cells::{astar, corners, creates_hole, reachable, Cell, CellGrid, STEPS};
use super::decompose::{ColorClassDecomposition, TransportObject};
use super::graph::graph_over;
use super::index::BucketIndex;
use super::scenario::World;
use super::TransportError;
use crate::geometry::{int, serde_rat_vec, Aabb, Point, Rat, RectilinearRegion};

const TURN_PENALTY: u64 = 4;
const SNAP_RING: i64 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    CompressInterior,
    RouteTreeLeg,
    DetourDisplace,
    DetourRestore,
    GateHop,
    PackIntoCell,
}

/// Rigid translation of one object. `swept` is the hull of the object's
/// envelope before and after.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub object: usize,
    pub phase: Phase,
    pub translation: Point,
    pub swept: Aabb,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellAssignment {
    pub object: usize,
    pub height: usize,
    pub cell: [i64; 2],
    pub cell_box: Aabb,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PlanStats {
    pub interior: usize,
    pub loose: usize,
    pub exterior: usize,
    /// Interior cubes that could not be compressed in place.
    pub demoted: usize,
    pub tree_roots: usize,
    pub detours: usize,
    pub gate_hops: usize,
    pub third_cube_hits: usize,
    /// Per compression domain, the cells filled by compression form one
    /// edge-connected piece without holes.
    pub compressed_connected: bool,
    pub compressed_hole_free: bool,
    /// Every height-0 target cell was chosen without enclosing a free cell.
    pub packed_contractible: bool,
    #[serde(with = "serde_rat_vec")]
    pub packed_area: Vec<Rat>,
    #[serde(with = "serde_rat_vec")]
    pub target_areas: Vec<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransportPlan {
    pub color: usize,
    pub objects: Vec<TransportObject>,
    pub moves: Vec<Move>,
    pub assignment: Vec<CellAssignment>,
    /// Nearest ancestor object in the routing tree, for exterior cubes.
    pub tree_parent: Vec<Option<usize>>,
    pub stats: PlanStats,
}

struct State<'a> {
    world: &'a World,
    objs: &'a [TransportObject],
    offset: Vec<Point>,
    done: Vec<bool>,
    index: BucketIndex,
    moves: Vec<Move>,
    phase: usize,
}

impl<'a> State<'a> {
    fn env(&self, o: usize) -> Aabb {
        self.objs[o].envelope.translate(&self.offset[o])
    }

    /// Obstacle rule: in phase `h`, objects of height at most `h` occupy
    /// their envelope, taller ones only their body.
    fn shapes(&self, o: usize) -> Vec<Aabb> {
        if self.objs[o].height <= self.phase {
            vec![self.env(o)]
        } else {
            self.objs[o].body.translate(&self.offset[o]).cells().to_vec()
        }
    }

    fn reindex(&mut self, h: usize) {
        self.phase = h;
        let side = self.world.cell_side(h) * int(2);
        self.index = BucketIndex::new(side, self.objs.len());
        for o in 0..self.objs.len() {
            let s = self.shapes(o);
            self.index.set(o, s);
        }
    }

    fn shift(&mut self, o: usize, t: Point, phase: Phase) {
        if t.is_zero() {
            return;
        }
        let cur = self.env(o);
        let swept = cur.hull(&cur.translate(&t));
        self.offset[o] = self.offset[o].add(&t);
        let s = self.shapes(o);
        self.index.set(o, s);
        self.moves.push(Move {
            object: o,
            phase,
            translation: t,
            swept,
        });
    }

    fn fill(&self, grid: &mut CellGrid, skip: &HashSet<usize>) {
        for o in 0..self.objs.len() {
            if !skip.contains(&o) {
                for s in self.index.shapes(o) {
                    grid.add(s);
                }
            }
        }
    }

    fn lift(&self, grid: &mut CellGrid, o: usize) {
        for s in self.index.shapes(o) {
            grid.remove(s);
        }
    }
}

fn min_dist_sq(p: &Point, centers: &[Point]) -> Rat {
    centers
        .iter()
        .map(|c| p.sub(c).norm_sq())
        .min()
        .expect("at least one domain")
}

/// Height-0 target bookkeeping: free cells, the packed set and its frontier.
struct Targets<'a> {
    world: &'a World,
    grid: CellGrid,
    centers: Vec<Point>,
    inside: HashMap<Cell, bool>,
    finals: HashMap<Cell, Option<usize>>,
    packed: HashSet<Cell>,
    frontier: BTreeSet<(Rat, Cell)>,
}

impl<'a> Targets<'a> {
    fn key(&self, c: Cell) -> Rat {
        min_dist_sq(&self.grid.cell_box(c).center(), &self.centers)
    }

    fn domain(&mut self, c: Cell) -> Option<usize> {
        if let Some(&v) = self.finals.get(&c) {
            return v;
        }
        let v = self.world.final_domain_of(&self.grid.cell_box(c));
        self.finals.insert(c, v);
        v
    }

    fn pack(&mut self, c: Cell) {
        self.packed.insert(c);
        let k = self.key(c);
        self.frontier.remove(&(k, c));
        for d in STEPS {
            let n = (c.0 + d.0, c.1 + d.1);
            if !self.packed.contains(&n) && self.domain(n).is_some() {
                let k = self.key(n);
                self.frontier.insert((k, n));
            }
        }
    }

    /// Every final cell, closest to a domain center first.
    fn all_finals(&mut self) -> Vec<(Rat, Cell)> {
        let mut out = Vec::new();
        let boxes: Vec<Aabb> = if self.world.is_disc() {
            let r = self.world.radii[0];
            let c = &self.world.ball_center;
            vec![Aabb::rect(c.at(0) - r, c.at(1) - r, c.at(0) + r, c.at(1) + r).expect("r > 0")]
        } else {
            self.world.zones.iter().map(|z| z.final_box.clone()).collect()
        };
        for b in boxes {
            let (i0, i1, j0, j1) = self.grid.range(&b);
            for i in i0..=i1 {
                for j in j0..=j1 {
                    if self.domain((i, j)).is_some() {
                        out.push((self.key((i, j)), (i, j)));
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn seed(&mut self) {
        let mut seeded = vec![false; self.centers.len()];
        for &c in &self.packed {
            if let Some(d) = self.finals.get(&c).copied().flatten() {
                seeded[d] = true;
            }
        }
        for (d, s) in seeded.iter().enumerate() {
            if *s {
                continue;
            }
            let c = self.grid.cell_of(&self.centers[d]);
            if self.domain(c).is_some() && !self.packed.contains(&c) {
                let k = self.key(c);
                self.frontier.insert((k, c));
            }
        }
    }
}

/// Capacity error, retryable when the height-`h` envelopes would fit the
/// target by area.
fn shortage(st: &State, h: usize, detail: String) -> TransportError {
    let area: Rat = st.objs.iter().filter(|o| o.height == h).map(|o| o.envelope.volume()).sum();
    let fits = area < st.world.budget.target_areas[h.min(st.world.budget.target_areas.len() - 1)];
    TransportError::Capacity {
        chart: fits.then_some(h),
        detail,
    }
}

/// Plan the transport of one colour class.
pub fn plan_color(world: &World, dec: &ColorClassDecomposition) -> Result<TransportPlan, TransportError> {
    let objs = &dec.objects;
    let levels = world.levels();
    let mut plan = TransportPlan {
        color: dec.color,
        objects: objs.clone(),
        moves: Vec::new(),
        assignment: Vec::new(),
        tree_parent: vec![None; objs.len()],
        stats: PlanStats {
            compressed_connected: true,
            compressed_hole_free: true,
            packed_contractible: true,
            packed_area: vec![Rat::zero(); levels],
            target_areas: world.budget.target_areas.clone(),
            ..PlanStats::default()
        },
    };
    if objs.is_empty() {
        return Ok(plan);
    }
    let mut st = State {
        world,
        objs,
        offset: vec![Point::origin(2); objs.len()],
        done: vec![false; objs.len()],
        index: BucketIndex::new(world.cell_side(0), 0),
        moves: Vec::new(),
        phase: 0,
    };
    phase_zero(&mut st, &mut plan)?;
    for h in 1..levels {
        phase_high(&mut st, &mut plan, h)?;
    }
    plan.moves = st.moves;
    plan.stats.gate_hops = plan.moves.iter().filter(|m| m.phase == Phase::GateHop).count();
    plan.stats.detours = plan.moves.iter().filter(|m| m.phase == Phase::DetourDisplace).count();
    Ok(plan)
}

struct Layout {
    steps: Vec<(usize, Point)>,
    cells: Vec<(usize, Cell)>,
    misfits: Vec<usize>,
}

/// Stack each anchor column on the domain's center row, then each row on
/// the center column.
fn compress_layout(st: &State, grid: &CellGrid, active: &[usize]) -> Layout {
    let w = st.world;
    let side = w.object_side(0);
    let centers = w.domain_centers();
    let mut by_dom: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &o in active {
        let dom = w.compress_domain_of(&st.env(o)).expect("interior");
        by_dom.entry(dom).or_default().push(o);
    }
    let mut vert = Vec::new();
    let mut horiz = Vec::new();
    let mut cells = Vec::new();
    let mut misfits = Vec::new();
    for (dom, members) in by_dom {
        let (ic, jc) = grid.cell_of(&centers[dom]);
        let mut cols: BTreeMap<Rat, Vec<(Rat, usize)>> = BTreeMap::new();
        for &o in &members {
            let e = st.env(o);
            cols.entry(*e.lo().at(0)).or_default().push((*e.lo().at(1), o));
        }
        let mut rows: BTreeMap<i64, Vec<(Rat, usize)>> = BTreeMap::new();
        let mut down = Vec::new();
        let mut up = Vec::new();
        for col in cols.values_mut() {
            col.sort();
            let c = col.len() as i64;
            for (t, &(y, o)) in col.iter().enumerate() {
                let row = jc - c / 2 + t as i64;
                let ty = grid.place((ic, row), side).lo().at(1) - y;
                let mid = st.env(o).translate(&Point::xy(Rat::zero(), ty));
                if w.compress_domain_of(&mid) != Some(dom) {
                    misfits.push(o);
                }
                rows.entry(row).or_default().push((*mid.lo().at(0), o));
                if ty < Rat::zero() {
                    down.push((y, o, ty));
                } else if ty > Rat::zero() {
                    up.push((y, o, ty));
                }
            }
        }
        down.sort_by_key(|a| (a.0, a.1));
        up.sort_by(|a, b| (b.0, b.1).cmp(&(a.0, a.1)));
        vert.extend(down.into_iter().chain(up).map(|(_, o, ty)| (o, Point::xy(Rat::zero(), ty))));
        let mut left = Vec::new();
        let mut right = Vec::new();
        for (row, mut r) in rows {
            r.sort();
            let c = r.len() as i64;
            for (t, &(x, o)) in r.iter().enumerate() {
                let cell = (ic - c / 2 + t as i64, row);
                if w.final_domain_of(&grid.cell_box(cell)) != Some(dom) {
                    misfits.push(o);
                }
                let tx = grid.place(cell, side).lo().at(0) - x;
                cells.push((o, cell));
                if tx < Rat::zero() {
                    left.push((x, o, tx));
                } else if tx > Rat::zero() {
                    right.push((x, o, tx));
                }
            }
        }
        left.sort_by_key(|a| (a.0, a.1));
        right.sort_by(|a, b| (b.0, b.1).cmp(&(a.0, a.1)));
        horiz.extend(left.into_iter().chain(right).map(|(_, o, tx)| (o, Point::xy(tx, Rat::zero()))));
    }
    misfits.sort_unstable();
    misfits.dedup();
    vert.extend(horiz);
    Layout {
        steps: vert,
        cells,
        misfits,
    }
}

/// Objects whose compression sweep would cut through something.
fn dry_run(st: &State, steps: &[(usize, Point)]) -> Vec<usize> {
    let mut index = st.index.clone();
    let mut off = st.offset.clone();
    let mut bad = BTreeSet::new();
    for (o, t) in steps {
        let cur = st.objs[*o].envelope.translate(&off[*o]);
        let next = cur.translate(t);
        if index.blocked(&cur.hull(&next), *o) {
            bad.insert(*o);
        }
        off[*o] = off[*o].add(t);
        index.set(*o, vec![next]);
    }
    bad.into_iter().collect()
}

fn phase_zero(st: &mut State, plan: &mut TransportPlan) -> Result<(), TransportError> {
    let w = st.world;
    st.reindex(0);
    let zero: Vec<usize> = (0..st.objs.len()).filter(|&o| st.objs[o].height == 0).collect();
    let origin = if w.is_disc() {
        w.ball_center.clone()
    } else {
        w.zones[0].final_box.center()
    };
    let mut tg = Targets {
        world: w,
        grid: CellGrid::new(&origin, w.cell_side(0)),
        centers: w.domain_centers(),
        inside: HashMap::new(),
        finals: HashMap::new(),
        packed: HashSet::new(),
        frontier: BTreeSet::new(),
    };
    let finals = tg.all_finals();
    if finals.len() < zero.len() {
        return Err(shortage(
            st,
            0,
            format!("{} height-0 objects but only {} target cells", zero.len(), finals.len()),
        ));
    }

    // compression
    let interior: Vec<usize> = zero
        .iter()
        .copied()
        .filter(|&o| w.compress_domain_of(&st.env(o)).is_some())
        .collect();
    let mut demoted: BTreeSet<usize> = BTreeSet::new();
    let layout = loop {
        let active: Vec<usize> = interior.iter().copied().filter(|o| !demoted.contains(o)).collect();
        let layout = compress_layout(st, &tg.grid, &active);
        if !layout.misfits.is_empty() {
            demoted.extend(layout.misfits);
            continue;
        }
        let bad = dry_run(st, &layout.steps);
        if bad.is_empty() {
            break layout;
        }
        demoted.extend(bad);
    };
    for (o, t) in layout.steps {
        st.shift(o, t, Phase::CompressInterior);
    }
    let mut by_dom: BTreeMap<usize, Vec<Aabb>> = BTreeMap::new();
    for &(o, c) in &layout.cells {
        let cb = tg.grid.cell_box(c);
        by_dom.entry(tg.domain(c).expect("checked")).or_default().push(cb.clone());
        tg.pack(c);
        st.done[o] = true;
        plan.stats.packed_area[0] += cb.volume();
        plan.assignment.push(CellAssignment {
            object: o,
            height: 0,
            cell: [c.0, c.1],
            cell_box: cb,
        });
    }
    for boxes in by_dom.values() {
        let r = RectilinearRegion::union_of(boxes);
        plan.stats.compressed_connected &= r.is_connected();
        plan.stats.compressed_hole_free &= r.is_hole_free();
    }
    plan.stats.interior = layout.cells.len();
    plan.stats.demoted = demoted.len();
    st.fill(&mut tg.grid, &HashSet::new());
    tg.seed();

    // loose cubes: demoted, or meeting the target without being interior
    let interior_set: HashSet<usize> = interior.iter().copied().collect();
    let mut loose: Vec<usize> = demoted.iter().copied().collect();
    loose.extend(
        zero.iter()
            .copied()
            .filter(|o| !interior_set.contains(o) && w.meets_final_closed(&st.env(*o))),
    );
    let centers = tg.centers.clone();
    let key = |o: usize, st: &State| min_dist_sq(&st.env(o).center(), &centers);
    loose.sort_by_cached_key(|&o| (key(o, st), o));
    plan.stats.loose = loose.len();
    let loose_set: HashSet<usize> = loose.iter().copied().collect();
    for o in loose {
        st.lift(&mut tg.grid, o);
        pack_zero(st, &mut tg, plan, o, &finals)?;
    }

    // exterior cubes along a spanning forest of the neighbour graph
    let ext: Vec<usize> = zero
        .iter()
        .copied()
        .filter(|o| !interior_set.contains(o) && !loose_set.contains(o))
        .collect();
    plan.stats.exterior = ext.len();
    if ext.is_empty() {
        return Ok(());
    }
    let tall: Vec<Aabb> = (0..st.objs.len())
        .filter(|&o| st.objs[o].height > 0)
        .flat_map(|o| st.objs[o].body.cells().to_vec())
        .collect();
    let forbidden = RectilinearRegion::union_of(&tall);
    let members: Vec<(usize, Aabb)> = ext.iter().map(|&o| (o, st.env(o))).collect();
    let g = graph_over(&members, w.scales[0], |h| {
        w.charts[0].contains_box(h) && !forbidden.overlaps_box(h) && !w.meets_final_closed(h)
    });
    plan.stats.third_cube_hits = g.third_cube_hits;
    let adj = g.adjacency();
    let n = g.vertices.len();
    let mut comp = vec![usize::MAX; n];
    let mut roots = Vec::new();
    for s in 0..members.len() {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = roots.len();
        let mut stack = vec![s];
        comp[s] = id;
        let mut best = (key(members[s].0, st), s);
        while let Some(v) = stack.pop() {
            if v < members.len() {
                best = best.min((key(members[v].0, st), v));
            }
            for &u in &adj[v] {
                if comp[u] == usize::MAX {
                    comp[u] = id;
                    stack.push(u);
                }
            }
        }
        roots.push(best.1);
    }
    plan.stats.tree_roots = roots.len();
    let mut parent = vec![None; n];
    let mut depth = vec![None; n];
    for &r in &roots {
        let (p, d) = g.bfs_tree(r);
        for v in 0..n {
            if d[v].is_some() {
                parent[v] = p[v];
                depth[v] = d[v];
            }
        }
    }
    let mut order: Vec<usize> = (0..members.len()).collect();
    order.sort_by_key(|&v| (depth[v].expect("every component has a root"), v));
    for &v in &order {
        let mut a = parent[v];
        while let Some(u) = a {
            if g.vertices[u].cube.is_some() {
                plan.tree_parent[members[v].0] = Some(members[u].0);
                break;
            }
            a = parent[u];
        }
    }
    let delta_half = w.delta * w.scales[0] / int(2);
    for v in order {
        let o = members[v].0;
        st.lift(&mut tg.grid, o);
        let mut a = v;
        while let Some(p) = parent[a] {
            let t = g.vertices[p].bbox.lo().sub(g.vertices[a].bbox.lo());
            tree_leg(st, o, t, &delta_half);
            a = p;
        }
        pack_zero(st, &mut tg, plan, o, &finals)?;
    }
    Ok(())
}

/// One tree edge, pushing aside resting cubes that touch the sweep.
fn tree_leg(st: &mut State, o: usize, t: Point, delta_half: &Rat) {
    let cur = st.env(o);
    let hull = cur.hull(&cur.translate(&t));
    let mut pushed = Vec::new();
    for p in st.index.touching(&hull) {
        if p == o || st.done[p] || st.objs[p].height != 0 {
            continue;
        }
        let pb = st.env(p);
        if pb.interiors_overlap(&hull) {
            continue;
        }
        let Some(dt) = (0..2).find_map(|m| {
            if pb.hi().at(m) == hull.lo().at(m) {
                Some(Point::unit(2, m, -delta_half))
            } else if pb.lo().at(m) == hull.hi().at(m) {
                Some(Point::unit(2, m, *delta_half))
            } else {
                None
            }
        }) else {
            continue;
        };
        let sweep = pb.hull(&pb.translate(&dt));
        if st.world.charts[0].contains_box(&sweep) && !st.index.blocked(&sweep, p) {
            st.shift(p, dt.clone(), Phase::DetourDisplace);
            pushed.push((p, dt));
        }
    }
    st.shift(o, t, Phase::RouteTreeLeg);
    for (p, dt) in pushed.into_iter().rev() {
        st.shift(p, dt.scale(&int(-1)), Phase::DetourRestore);
    }
}

/// Move `o` onto the grid with at most two axis-parallel legs.
fn snap(
    st: &mut State,
    grid: &CellGrid,
    o: usize,
    mut cell_ok: impl FnMut(Cell) -> bool,
    region_ok: impl Fn(&Aabb) -> bool,
    label: impl Fn(&Aabb) -> Phase,
) -> Option<Cell> {
    let side = st.world.object_side(st.objs[o].height);
    let cur = st.env(o);
    let cc = grid.cell_of(&cur.center());
    let mut cands = Vec::new();
    for di in -SNAP_RING..=SNAP_RING {
        for dj in -SNAP_RING..=SNAP_RING {
            let c = (cc.0 + di, cc.1 + dj);
            if grid.is_free(c) && cell_ok(c) {
                let t = grid.place(c, side).lo().sub(cur.lo());
                cands.push((t.norm_sq(), c, t));
            }
        }
    }
    cands.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
    for (_, c, t) in cands {
        let legs = [
            [Point::xy(*t.at(0), Rat::zero()), Point::xy(Rat::zero(), *t.at(1))],
            [Point::xy(Rat::zero(), *t.at(1)), Point::xy(*t.at(0), Rat::zero())],
        ];
        for pair in legs {
            let mid = cur.translate(&pair[0]);
            let end = mid.translate(&pair[1]);
            let ok = [cur.hull(&mid), mid.hull(&end)]
                .iter()
                .all(|s| region_ok(s) && !st.index.blocked(s, o));
            if ok {
                for leg in pair {
                    let ph = label(&st.env(o));
                    st.shift(o, leg, ph);
                }
                return Some(c);
            }
        }
    }
    None
}

/// Follow a cell path with one move per straight run.
fn drive(st: &mut State, grid: &CellGrid, o: usize, path: &[Cell], label: impl Fn(&Aabb) -> Phase) {
    let side = st.world.object_side(st.objs[o].height);
    for w in corners(path).windows(2) {
        let t = grid.place(w[1], side).lo().sub(grid.place(w[0], side).lo());
        let ph = label(&st.env(o));
        st.shift(o, t, ph);
    }
}

fn pack_zero(
    st: &mut State,
    tg: &mut Targets,
    plan: &mut TransportPlan,
    o: usize,
    finals: &[(Rat, Cell)],
) -> Result<(), TransportError> {
    let w = st.world;
    let grid = &tg.grid;
    let inside = &mut tg.inside;
    let chart = &w.charts[0];
    let mut ok = |c: Cell| *inside.entry(c).or_insert_with(|| chart.contains_box(&grid.cell_box(c)));
    let start = snap(st, grid, o, &mut ok, |s| chart.contains_box(s), |_| Phase::PackIntoCell).ok_or_else(|| TransportError::Disconnected {
        chart: 0,
        detail: format!("object {o} cannot reach the grid"),
    })?;
    let reach = reachable(start, |c| grid.is_free(c) && ok(c));
    let mut target = None;
    let mut first = None;
    let front: Vec<Cell> = tg.frontier.iter().map(|(_, c)| *c).collect();
    for c in front {
        if !grid.is_free(c) || !reach.contains(&c) {
            continue;
        }
        first.get_or_insert(c);
        if !creates_hole(&tg.packed, c) {
            target = Some(c);
            break;
        }
    }
    if target.is_none() {
        if let Some(c) = first {
            plan.stats.packed_contractible = false;
            target = Some(c);
        }
    }
    if target.is_none() {
        let free: Vec<Cell> = finals
            .iter()
            .map(|(_, c)| *c)
            .filter(|c| grid.is_free(*c) && !tg.packed.contains(c))
            .collect();
        if free.is_empty() {
            return Err(shortage(st, 0, format!("no free target cell for object {o}")));
        }
        target = free.iter().copied().find(|c| reach.contains(c));
        if target.is_some() {
            plan.stats.packed_contractible = false;
        }
    }
    let target = target.ok_or_else(|| TransportError::Disconnected {
        chart: 0,
        detail: format!("object {o} cannot reach a free target cell"),
    })?;
    let path = astar(start, target, TURN_PENALTY, |c| grid.is_free(c) && ok(c)).expect("target is reachable");
    drive(st, grid, o, &path, |_| Phase::PackIntoCell);
    let placed = grid.place(target, w.object_side(0));
    let cb = grid.cell_box(target);
    tg.grid.add(&placed);
    tg.pack(target);
    st.done[o] = true;
    plan.stats.packed_area[0] += cb.volume();
    plan.assignment.push(CellAssignment {
        object: o,
        height: 0,
        cell: [target.0, target.1],
        cell_box: cb,
    });
    Ok(())
}

fn phase_high(st: &mut State, plan: &mut TransportPlan, h: usize) -> Result<(), TransportError> {
    let w = st.world;
    st.reindex(h);
    let movers: Vec<usize> = {
        let mut v: Vec<(Rat, usize)> = (0..st.objs.len())
            .filter(|&o| st.objs[o].height == h)
            .map(|o| (st.env(o).center().sub(&w.ball_center).norm_sq(), o))
            .collect();
        v.sort();
        v.into_iter().map(|(_, o)| o).collect()
    };
    if movers.is_empty() {
        return Ok(());
    }
    let (origin, annulus) = annulus_grid(w, h);
    let mut grid = CellGrid::new(&origin, w.cell_side(h));
    st.fill(&mut grid, &HashSet::new());
    let side = w.object_side(h);
    if annulus.len() < movers.len() {
        return Err(shortage(
            st,
            h,
            format!("{} height-{h} objects but only {} annulus cells", movers.len(), annulus.len()),
        ));
    }
    let mut inside: Vec<HashMap<Cell, bool>> = vec![HashMap::new(); w.levels()];
    let mut ok = |chart: usize, c: Cell, g: &CellGrid| -> bool {
        *inside[chart].entry(c).or_insert_with(|| {
            let cb = g.cell_box(c);
            w.charts[chart].contains_box(&cb) && w.avoids_lower_disc(h, &cb)
        })
    };
    let label = |b: &Aabb| {
        if w.cores[0].contains_box(b) {
            Phase::PackIntoCell
        } else {
            Phase::GateHop
        }
    };
    let mut used: HashSet<Cell> = HashSet::new();
    for o in movers {
        st.lift(&mut grid, o);
        let frame = grid.clone();
        let start = snap(
            st,
            &frame,
            o,
            |c| ok(h, c, &frame),
            |s| w.charts[h].contains_box(s) && w.avoids_lower_disc(h, s),
            label,
        )
        .ok_or_else(|| TransportError::Disconnected {
            chart: h,
            detail: format!("object {o} cannot reach the grid"),
        })?;
        let mut cur = start;
        let path = w.chart_path(h);
        for pair in path.windows(2) {
            let c = pair[0];
            let gate = w.gates[c].clone().expect("non-root chart has a gate");
            let (i0, i1, j0, j1) = frame.range(&gate);
            let mut pilots = Vec::new();
            for i in i0..=i1 {
                for j in j0..=j1 {
                    if gate.contains(&frame.cell_box((i, j))) && ok(c, (i, j), &frame) {
                        pilots.push((i, j));
                    }
                }
            }
            if pilots.is_empty() {
                return Err(TransportError::GateTooSmall { chart: h, gate: c });
            }
            let reach = reachable(cur, |x| frame.is_free(x) && ok(c, x, &frame));
            let pilot = pilots
                .into_iter()
                .filter(|p| frame.is_free(*p) && reach.contains(p))
                .min_by_key(|p| ((p.0 - cur.0).abs() + (p.1 - cur.1).abs(), *p))
                .ok_or_else(|| TransportError::Disconnected {
                    chart: h,
                    detail: format!("object {o} cannot reach gate {c}"),
                })?;
            let route = astar(cur, pilot, TURN_PENALTY, |x| frame.is_free(x) && ok(c, x, &frame)).expect("reachable");
            drive(st, &frame, o, &route, label);
            cur = pilot;
        }
        let reach = reachable(cur, |x| frame.is_free(x) && ok(0, x, &frame));
        let free: Vec<Cell> = annulus
            .iter()
            .copied()
            .filter(|c| !used.contains(c) && frame.is_free(*c))
            .collect();
        if free.is_empty() {
            return Err(shortage(st, h, format!("no free annulus cell for object {o}")));
        }
        let target = free
            .into_iter()
            .find(|c| reach.contains(c))
            .ok_or_else(|| TransportError::Disconnected {
                chart: h,
                detail: format!("object {o} cannot reach the annulus"),
            })?;
        let route = astar(cur, target, TURN_PENALTY, |x| frame.is_free(x) && ok(0, x, &frame)).expect("reachable");
        drive(st, &frame, o, &route, label);
        used.insert(target);
        grid.add(&frame.place(target, side));
        st.done[o] = true;
        let cb = frame.cell_box(target);
        plan.stats.packed_area[h] += cb.volume();
        plan.assignment.push(CellAssignment {
            object: o,
            height: h,
            cell: [target.0, target.1],
            cell_box: cb,
        });
    }
    Ok(())
}

/// Annulus cells of a grid, closest to the inner circle first.
fn annulus_cells(w: &World, h: usize, grid: &CellGrid) -> Vec<Cell> {
    let r = w.radii[h];
    let c = &w.ball_center;
    let b = Aabb::rect(c.at(0) - r, c.at(1) - r, c.at(0) + r, c.at(1) + r).expect("r > 0");
    let (i0, i1, j0, j1) = grid.range(&b);
    let mut v = Vec::new();
    for i in i0..=i1 {
        for j in j0..=j1 {
            let cb = grid.cell_box((i, j));
            if w.in_final(h, &cb) {
                v.push((cb.dist_sq_to_point(c), (i, j)));
            }
        }
    }
    v.sort();
    v.into_iter().map(|(_, c)| c).collect()
}

/// Grid origin for height `h` holding the most annulus cells. Candidates
/// are quarter-cell shifts of the ball center and the shift that centres
/// one cell radially in the annulus on the positive x axis.
fn annulus_grid(w: &World, h: usize) -> (Point, Vec<Cell>) {
    let s = w.cell_side(h);
    let c = &w.ball_center;
    let mut shifts = Vec::new();
    let gap = w.radii[h] - w.radii[h - 1];
    if gap > s {
        let a = w.radii[h - 1] + (gap - s) / int(2) + s / int(2);
        shifts.push(Point::xy(a, Rat::zero()));
    }
    for i in 0..4 {
        for j in 0..4 {
            shifts.push(Point::xy(s * Rat::new(i, 4), s * Rat::new(j, 4)));
        }
    }
    let mut best: Option<(Point, Vec<Cell>)> = None;
    for t in shifts {
        let origin = c.add(&t);
        let cells = annulus_cells(w, h, &CellGrid::new(&origin, s));
        if best.as_ref().is_none_or(|b| cells.len() > b.1.len()) {
            best = Some((origin, cells));
        }
    }
    best.expect("candidates")
}
