use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};

use crate::geometry::{int, rat, Aabb, Point, Rat};

pub(crate) type Cell = (i64, i64);

pub(crate) const STEPS: [Cell; 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

/// Square grid of side `s` centred on a point, with a count of obstacle
/// shapes whose interior meets each cell.
#[derive(Debug, Clone)]
pub(crate) struct CellGrid {
    cx: Rat,
    cy: Rat,
    side: Rat,
    counts: HashMap<Cell, u32>,
}

impl CellGrid {
    pub fn new(center: &Point, side: Rat) -> Self {
        CellGrid {
            cx: *center.at(0),
            cy: *center.at(1),
            side,
            counts: HashMap::new(),
        }
    }

    pub fn cell_box(&self, (i, j): Cell) -> Aabb {
        let h = rat(1, 2);
        let s = self.side;
        Aabb::rect(
            self.cx + (int(i as i128) - h) * s,
            self.cy + (int(j as i128) - h) * s,
            self.cx + (int(i as i128) + h) * s,
            self.cy + (int(j as i128) + h) * s,
        )
        .expect("positive side")
    }

    /// A box of side `w` centred in the cell.
    pub fn place(&self, c: Cell, w: Rat) -> Aabb {
        let b = self.cell_box(c);
        let m = (self.side - w) / int(2);
        Aabb::rect(b.lo().at(0) + m, b.lo().at(1) + m, b.hi().at(0) - m, b.hi().at(1) - m).expect("w > 0")
    }

    /// The cell whose half-open box holds `p`.
    pub fn cell_of(&self, p: &Point) -> Cell {
        let f = |x: &Rat, c: &Rat| ((x - c) / self.side + rat(1, 2)).floor().to_integer() as i64;
        (f(p.at(0), &self.cx), f(p.at(1), &self.cy))
    }

    /// Cells whose interior meets the interior of `b`.
    pub fn range(&self, b: &Aabb) -> (i64, i64, i64, i64) {
        let h = rat(1, 2);
        let lo = |a: &Rat, c: &Rat| ((a - c) / self.side - h).floor().to_integer() as i64 + 1;
        let hi = |a: &Rat, c: &Rat| ((a - c) / self.side + h).ceil().to_integer() as i64 - 1;
        (
            lo(b.lo().at(0), &self.cx),
            hi(b.hi().at(0), &self.cx),
            lo(b.lo().at(1), &self.cy),
            hi(b.hi().at(1), &self.cy),
        )
    }

    pub fn add(&mut self, b: &Aabb) {
        let (i0, i1, j0, j1) = self.range(b);
        for i in i0..=i1 {
            for j in j0..=j1 {
                *self.counts.entry((i, j)).or_insert(0) += 1;
            }
        }
    }

    pub fn remove(&mut self, b: &Aabb) {
        let (i0, i1, j0, j1) = self.range(b);
        for i in i0..=i1 {
            for j in j0..=j1 {
                let n = self.counts.get_mut(&(i, j)).expect("shape was added");
                *n -= 1;
                if *n == 0 {
                    self.counts.remove(&(i, j));
                }
            }
        }
    }

    pub fn is_free(&self, c: Cell) -> bool {
        !self.counts.contains_key(&c)
    }
}

fn add(a: Cell, b: Cell) -> Cell {
    (a.0 + b.0, a.1 + b.1)
}

/// Cells reachable from `start` through passable cells.
pub(crate) fn reachable(start: Cell, mut passable: impl FnMut(Cell) -> bool) -> HashSet<Cell> {
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        for d in STEPS {
            let n = add(c, d);
            if !seen.contains(&n) && passable(n) {
                seen.insert(n);
                queue.push_back(n);
            }
        }
    }
    seen
}

/// Cheapest 4-connected path with a penalty per turn. The start cell is
/// not tested for passability.
pub(crate) fn astar(start: Cell, goal: Cell, turn: u64, mut passable: impl FnMut(Cell) -> bool) -> Option<Vec<Cell>> {
    if start == goal {
        return Some(vec![start]);
    }
    let h = |c: Cell| (c.0 - goal.0).unsigned_abs() + (c.1 - goal.1).unsigned_abs();
    // state: (cell, heading index or 4 for "none")
    let mut best: HashMap<(Cell, usize), u64> = HashMap::new();
    let mut prev: HashMap<(Cell, usize), (Cell, usize)> = HashMap::new();
    let mut heap = BinaryHeap::new();
    best.insert((start, 4), 0);
    heap.push(Reverse((h(start), 0u64, start, 4usize)));
    let mut ok: HashMap<Cell, bool> = HashMap::new();
    while let Some(Reverse((_, g, c, dir))) = heap.pop() {
        if best.get(&(c, dir)).is_some_and(|&b| b < g) {
            continue;
        }
        if c == goal {
            let mut path = vec![c];
            let mut s = (c, dir);
            while let Some(&p) = prev.get(&s) {
                path.push(p.0);
                s = p;
            }
            path.reverse();
            return Some(path);
        }
        for (nd, d) in STEPS.iter().enumerate() {
            let n = add(c, *d);
            let pass = *ok.entry(n).or_insert_with(|| passable(n));
            if !pass {
                continue;
            }
            let cost = g + 1 + if dir != 4 && dir != nd { turn } else { 0 };
            if best.get(&(n, nd)).is_none_or(|&b| cost < b) {
                best.insert((n, nd), cost);
                prev.insert((n, nd), (c, dir));
                heap.push(Reverse((cost + h(n), cost, n, nd)));
            }
        }
    }
    None
}

/// Turning points of a 4-connected path, endpoints included.
pub(crate) fn corners(path: &[Cell]) -> Vec<Cell> {
    let mut out = vec![path[0]];
    for w in path.windows(3) {
        let d0 = (w[1].0 - w[0].0, w[1].1 - w[0].1);
        let d1 = (w[2].0 - w[1].0, w[2].1 - w[1].1);
        if d0 != d1 {
            out.push(w[1]);
        }
    }
    if path.len() > 1 {
        out.push(*path.last().expect("nonempty"));
    }
    out
}

/// Adding `t` to `packed` would enclose some unpacked cell.
pub(crate) fn creates_hole(packed: &HashSet<Cell>, t: Cell) -> bool {
    let (mut i0, mut i1, mut j0, mut j1) = (t.0, t.0, t.1, t.1);
    for &(i, j) in packed {
        i0 = i0.min(i);
        i1 = i1.max(i);
        j0 = j0.min(j);
        j1 = j1.max(j);
    }
    let outside = |c: Cell| c.0 < i0 || c.0 > i1 || c.1 < j0 || c.1 > j1;
    let blocked = |c: Cell| c == t || packed.contains(&c);
    let mut escaped: HashSet<Cell> = HashSet::new();
    for d in STEPS {
        let n = add(t, d);
        if blocked(n) || outside(n) || escaped.contains(&n) {
            continue;
        }
        let mut seen = HashSet::from([n]);
        let mut queue = VecDeque::from([n]);
        let mut free = false;
        'bfs: while let Some(c) = queue.pop_front() {
            for e in STEPS {
                let m = add(c, e);
                if outside(m) || escaped.contains(&m) {
                    free = true;
                    break 'bfs;
                }
                if !blocked(m) && seen.insert(m) {
                    queue.push_back(m);
                }
            }
        }
        if !free {
            return true;
        }
        escaped.extend(seen);
    }
    false
}
