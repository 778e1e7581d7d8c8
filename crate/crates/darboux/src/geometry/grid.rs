use super::{Aabb, Point, Rat};

/// Coordinate-compressed grid over a universe box. Every box handed to
/// [`CompressedGrid::new`] is a union of grid cells after clipping, so set
/// operations on such boxes reduce to boolean masks over cells.
///
/// Cell indices run with axis 0 fastest.
#[derive(Debug, Clone)]
pub struct CompressedGrid {
    breaks: Vec<Vec<Rat>>,
    strides: Vec<usize>,
    len: usize,
}

impl CompressedGrid {
    pub fn new<'a>(universe: &Aabb, boxes: impl IntoIterator<Item = &'a Aabb>) -> Self {
        let dim = universe.dim();
        let mut breaks: Vec<Vec<Rat>> = (0..dim)
            .map(|m| vec![*universe.lo().at(m), *universe.hi().at(m)])
            .collect();
        for b in boxes {
            let Some(c) = b.intersection(universe) else { continue };
            for (m, br) in breaks.iter_mut().enumerate() {
                br.push(*c.lo().at(m));
                br.push(*c.hi().at(m));
            }
        }
        for br in &mut breaks {
            br.sort_unstable();
            br.dedup();
        }
        let mut strides = Vec::with_capacity(dim);
        let mut len = 1usize;
        for br in &breaks {
            strides.push(len);
            len = len.checked_mul(br.len() - 1).expect("grid too large");
        }
        CompressedGrid { breaks, strides, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dim(&self) -> usize {
        self.breaks.len()
    }

    pub fn breaks(&self, m: usize) -> &[Rat] {
        &self.breaks[m]
    }

    /// Number of cells along axis `m`.
    pub fn extent(&self, m: usize) -> usize {
        self.breaks[m].len() - 1
    }

    pub fn multi_index(&self, idx: usize) -> Vec<usize> {
        (0..self.dim()).map(|m| (idx / self.strides[m]) % self.extent(m)).collect()
    }

    pub fn flat_index(&self, mi: &[usize]) -> usize {
        mi.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    pub fn cell_box(&self, idx: usize) -> Aabb {
        let mi = self.multi_index(idx);
        let lo = mi.iter().enumerate().map(|(m, &i)| self.breaks[m][i]).collect();
        let hi = mi.iter().enumerate().map(|(m, &i)| self.breaks[m][i + 1]).collect();
        Aabb::new(Point::new(lo).expect("even"), Point::new(hi).expect("even")).expect("cells are proper")
    }

    pub fn cell_volume(&self, idx: usize) -> Rat {
        self.multi_index(idx)
            .iter()
            .enumerate()
            .map(|(m, &i)| self.breaks[m][i + 1] - self.breaks[m][i])
            .product()
    }

    /// Per-axis half-open index ranges of the cells inside `b` (clipped to
    /// the universe). `b` must have been one of the construction boxes, or
    /// at least have grid breakpoints as bounds.
    pub fn index_ranges(&self, b: &Aabb) -> Option<Vec<(usize, usize)>> {
        let mut out = Vec::with_capacity(self.dim());
        for m in 0..self.dim() {
            let br = &self.breaks[m];
            let i0 = br.partition_point(|x| x < b.lo().at(m));
            let i1 = br.partition_point(|x| x < b.hi().at(m)).min(br.len() - 1);
            if i0 >= i1 {
                return None;
            }
            out.push((i0, i1));
        }
        Some(out)
    }

    /// Flat indices of all cells inside `b`.
    pub fn cells_in(&self, b: &Aabb) -> Vec<usize> {
        let Some(ranges) = self.index_ranges(b) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        let mut mi: Vec<usize> = ranges.iter().map(|r| r.0).collect();
        'outer: loop {
            out.push(self.flat_index(&mi));
            for m in 0..mi.len() {
                mi[m] += 1;
                if mi[m] < ranges[m].1 {
                    continue 'outer;
                }
                mi[m] = ranges[m].0;
            }
            break;
        }
        out
    }

    /// Edge-adjacent neighbours (cells sharing a facet).
    pub fn neighbours(&self, idx: usize) -> Vec<usize> {
        let mi = self.multi_index(idx);
        let mut out = Vec::with_capacity(2 * self.dim());
        for m in 0..self.dim() {
            if mi[m] > 0 {
                out.push(idx - self.strides[m]);
            }
            if mi[m] + 1 < self.extent(m) {
                out.push(idx + self.strides[m]);
            }
        }
        out
    }

    /// The cell has a facet on the universe boundary.
    pub fn on_boundary(&self, idx: usize) -> bool {
        let mi = self.multi_index(idx);
        (0..self.dim()).any(|m| mi[m] == 0 || mi[m] + 1 == self.extent(m))
    }

    /// Edge-connected components of the cells where `mask` is set.
    pub fn components(&self, mask: &[bool]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len];
        let mut comps = Vec::new();
        for start in 0..self.len {
            if !mask[start] || seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(c) = stack.pop() {
                comp.push(c);
                for nb in self.neighbours(c) {
                    if mask[nb] && !seen[nb] {
                        seen[nb] = true;
                        stack.push(nb);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Boxes covering exactly the masked cells, merging runs along axis 0.
    pub fn boxes_of(&self, mask: &[bool]) -> Vec<Aabb> {
        let row = self.extent(0);
        let mut out = Vec::new();
        for base in (0..self.len).step_by(row) {
            let mut i = 0;
            while i < row {
                if !mask[base + i] {
                    i += 1;
                    continue;
                }
                let start = i;
                while i < row && mask[base + i] {
                    i += 1;
                }
                let first = self.cell_box(base + start);
                let last = self.cell_box(base + i - 1);
                out.push(first.hull(&last));
            }
        }
        out
    }

    pub fn mask_of<'a>(&self, boxes: impl IntoIterator<Item = &'a Aabb>) -> Vec<bool> {
        let mut mask = vec![false; self.len];
        for b in boxes {
            for c in self.cells_in(b) {
                mask[c] = true;
            }
        }
        mask
    }
}
