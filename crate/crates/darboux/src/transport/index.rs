use std::collections::HashMap;

use crate::geometry::{Aabb, Rat};

/// Uniform bucket hash over object shapes, keyed by `floor(x / side)`.
#[derive(Debug, Clone)]
pub(crate) struct BucketIndex {
    side: Rat,
    buckets: HashMap<(i64, i64), Vec<usize>>,
    shapes: Vec<Vec<Aabb>>,
}

impl BucketIndex {
    pub fn new(side: Rat, len: usize) -> Self {
        BucketIndex {
            side,
            buckets: HashMap::new(),
            shapes: vec![Vec::new(); len],
        }
    }

    fn range(&self, b: &Aabb) -> (i64, i64, i64, i64) {
        let f = |x: &Rat| (x / self.side).floor().to_integer() as i64;
        (f(b.lo().at(0)), f(b.hi().at(0)), f(b.lo().at(1)), f(b.hi().at(1)))
    }

    pub fn set(&mut self, id: usize, shapes: Vec<Aabb>) {
        self.clear(id);
        for s in &shapes {
            let (x0, x1, y0, y1) = self.range(s);
            for x in x0..=x1 {
                for y in y0..=y1 {
                    let v = self.buckets.entry((x, y)).or_default();
                    if v.last() != Some(&id) {
                        v.push(id);
                    }
                }
            }
        }
        self.shapes[id] = shapes;
    }

    pub fn clear(&mut self, id: usize) {
        let old = std::mem::take(&mut self.shapes[id]);
        for s in &old {
            let (x0, x1, y0, y1) = self.range(s);
            for x in x0..=x1 {
                for y in y0..=y1 {
                    if let Some(v) = self.buckets.get_mut(&(x, y)) {
                        v.retain(|&o| o != id);
                    }
                }
            }
        }
    }

    pub fn shapes(&self, id: usize) -> &[Aabb] {
        &self.shapes[id]
    }

    /// Ids with a shape meeting the closed box, ascending.
    pub fn touching(&self, b: &Aabb) -> Vec<usize> {
        let (x0, x1, y0, y1) = self.range(b);
        let mut out = Vec::new();
        for x in x0..=x1 {
            for y in y0..=y1 {
                if let Some(v) = self.buckets.get(&(x, y)) {
                    out.extend(v.iter().copied());
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out.retain(|&id| self.shapes[id].iter().any(|s| s.intersects(b)));
        out
    }

    /// A shape of `id` meets the interior of `b` in an open set.
    pub fn blocked_by(&self, id: usize, b: &Aabb) -> bool {
        self.shapes[id].iter().any(|s| s.interiors_overlap(b))
    }

    /// Some object other than `skip` has a shape whose interior meets `b`.
    pub fn blocked(&self, b: &Aabb, skip: usize) -> bool {
        self.touching(b)
            .into_iter()
            .any(|id| id != skip && self.blocked_by(id, b))
    }
}
