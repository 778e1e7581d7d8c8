use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{Aabb, CompressedGrid, GeomError, Point, Rat};

/// Finite union of interior-disjoint boxes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Aabb>", into = "Vec<Aabb>")]
pub struct RectilinearRegion {
    cells: Vec<Aabb>,
}

impl TryFrom<Vec<Aabb>> for RectilinearRegion {
    type Error = GeomError;
    fn try_from(cells: Vec<Aabb>) -> Result<Self, GeomError> {
        RectilinearRegion::new(cells)
    }
}

impl From<RectilinearRegion> for Vec<Aabb> {
    fn from(r: RectilinearRegion) -> Self {
        r.cells
    }
}

impl RectilinearRegion {
    /// Checked constructor: all cells share one dimension and their
    /// interiors are pairwise disjoint.
    pub fn new(cells: Vec<Aabb>) -> Result<Self, GeomError> {
        if let Some(first) = cells.first() {
            for c in &cells {
                if c.dim() != first.dim() {
                    return Err(GeomError::DimensionMismatch(first.dim(), c.dim()));
                }
            }
        }
        if first_overlap(&cells).is_some() {
            return Err(GeomError::OverlappingCells);
        }
        Ok(RectilinearRegion { cells })
    }

    pub(crate) fn from_disjoint(cells: Vec<Aabb>) -> Self {
        debug_assert!(first_overlap(&cells).is_none());
        RectilinearRegion { cells }
    }

    pub fn empty() -> Self {
        RectilinearRegion { cells: Vec::new() }
    }

    pub fn from_box(b: Aabb) -> Self {
        RectilinearRegion { cells: vec![b] }
    }

    /// Union of arbitrary (possibly overlapping) boxes.
    pub fn union_of(boxes: &[Aabb]) -> Self {
        let Some(bb) = bbox_of(boxes) else {
            return Self::empty();
        };
        let g = CompressedGrid::new(&bb, boxes);
        let mask = g.mask_of(boxes);
        RectilinearRegion::from_disjoint(g.boxes_of(&mask))
    }

    pub fn cells(&self) -> &[Aabb] {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn area(&self) -> Rat {
        self.cells.iter().map(Aabb::volume).sum()
    }

    pub fn bbox(&self) -> Option<Aabb> {
        bbox_of(&self.cells)
    }

    pub fn translate(&self, v: &Point) -> Self {
        RectilinearRegion {
            cells: self.cells.iter().map(|c| c.translate(v)).collect(),
        }
    }

    pub fn union(&self, other: &RectilinearRegion) -> Self {
        let mut all = self.cells.clone();
        all.extend(other.cells.iter().cloned());
        Self::union_of(&all)
    }

    pub fn difference(&self, other: &RectilinearRegion) -> Self {
        let Some(bb) = self.bbox() else {
            return Self::empty();
        };
        let relevant: Vec<&Aabb> = other.cells.iter().filter(|c| c.interiors_overlap(&bb)).collect();
        if relevant.is_empty() {
            return self.clone();
        }
        let g = CompressedGrid::new(&bb, self.cells.iter().chain(relevant.iter().copied()));
        let mut mask = g.mask_of(&self.cells);
        for c in relevant {
            for idx in g.cells_in(c) {
                mask[idx] = false;
            }
        }
        RectilinearRegion::from_disjoint(g.boxes_of(&mask))
    }

    pub fn subtract_box(&self, b: &Aabb) -> Self {
        self.difference(&RectilinearRegion::from_box(b.clone()))
    }

    pub fn intersection(&self, other: &RectilinearRegion) -> Self {
        let mut cells = Vec::new();
        for a in &self.cells {
            for b in &other.cells {
                if let Some(c) = a.intersection(b) {
                    cells.push(c);
                }
            }
        }
        RectilinearRegion::from_disjoint(cells)
    }

    pub fn intersect_box(&self, b: &Aabb) -> Self {
        RectilinearRegion::from_disjoint(self.cells.iter().filter_map(|c| c.intersection(b)).collect())
    }

    /// Area of `self ∩ b`.
    pub fn intersection_area(&self, b: &Aabb) -> Rat {
        self.cells
            .iter()
            .filter_map(|c| c.intersection(b))
            .map(|c| c.volume())
            .sum()
    }

    /// `b ⊆ self`, decided by area since the cells are interior-disjoint and
    /// both sides are closed.
    pub fn contains_box(&self, b: &Aabb) -> bool {
        self.intersection_area(b) == b.volume()
    }

    pub fn contains_region(&self, other: &RectilinearRegion) -> bool {
        other.cells.iter().all(|c| self.contains_box(c))
    }

    /// Some cell has an interior point in common with `b`.
    pub fn overlaps_box(&self, b: &Aabb) -> bool {
        self.cells.iter().any(|c| c.interiors_overlap(b))
    }

    pub fn overlaps(&self, other: &RectilinearRegion) -> bool {
        self.cells.iter().any(|c| other.overlaps_box(c))
    }

    /// Cells are edge-connected as a whole.
    pub fn is_connected(&self) -> bool {
        let Some(bb) = self.bbox() else {
            return true;
        };
        let g = CompressedGrid::new(&bb, &self.cells);
        let mask = g.mask_of(&self.cells);
        g.components(&mask).len() <= 1
    }

    /// No bounded component in the complement.
    pub fn is_hole_free(&self) -> bool {
        let Some(bb) = self.bbox() else {
            return true;
        };
        // pad by one unit of the box's own size so the outside is one component
        let pad = bb.widths().into_iter().max().unwrap_or_else(Rat::zero);
        let universe = super::neighborhood(&bb, &pad).expect("nonnegative pad");
        complement_components(self, &universe)
            .expect("region inside its padded box")
            .iter()
            .all(|c| !c.bounded)
    }

    /// Edge-connected pieces.
    pub fn connected_pieces(&self) -> Vec<RectilinearRegion> {
        let Some(bb) = self.bbox() else {
            return Vec::new();
        };
        let g = CompressedGrid::new(&bb, &self.cells);
        let mask = g.mask_of(&self.cells);
        g.components(&mask)
            .into_iter()
            .map(|comp| {
                let mut m = vec![false; g.len()];
                for c in comp {
                    m[c] = true;
                }
                RectilinearRegion::from_disjoint(g.boxes_of(&m))
            })
            .collect()
    }
}

fn bbox_of(boxes: &[Aabb]) -> Option<Aabb> {
    let mut it = boxes.iter();
    let first = it.next()?.clone();
    Some(it.fold(first, |acc, b| acc.hull(b)))
}

/// Index pair of two cells with overlapping interiors, found by a sweep
/// along axis 0.
pub(crate) fn first_overlap(cells: &[Aabb]) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..cells.len()).collect();
    order.sort_by(|&a, &b| cells[a].lo().at(0).cmp(cells[b].lo().at(0)));
    for (pos, &a) in order.iter().enumerate() {
        for &b in &order[pos + 1..] {
            if cells[b].lo().at(0) >= cells[a].hi().at(0) {
                break;
            }
            if cells[a].interiors_overlap(&cells[b]) {
                return Some((a.min(b), a.max(b)));
            }
        }
    }
    None
}

/// A connected piece of `universe \ region`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub region: RectilinearRegion,
    /// False when the piece meets the universe boundary.
    pub bounded: bool,
}

pub fn complement_components(
    region: &RectilinearRegion,
    universe: &Aabb,
) -> Result<Vec<Component>, GeomError> {
    for c in region.cells() {
        if c.dim() != universe.dim() {
            return Err(GeomError::DimensionMismatch(universe.dim(), c.dim()));
        }
        if !universe.contains(c) {
            return Err(GeomError::NotInUniverse);
        }
    }
    let g = CompressedGrid::new(universe, region.cells());
    let occupied = g.mask_of(region.cells());
    let free: Vec<bool> = occupied.iter().map(|o| !o).collect();
    Ok(g.components(&free)
        .into_iter()
        .map(|comp| {
            let bounded = !comp.iter().any(|&c| g.on_boundary(c));
            let mut m = vec![false; g.len()];
            for c in comp {
                m[c] = true;
            }
            Component {
                region: RectilinearRegion::from_disjoint(g.boxes_of(&m)),
                bounded,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::int;

    fn r(x0: i128, y0: i128, x1: i128, y1: i128) -> Aabb {
        Aabb::rect(int(x0), int(y0), int(x1), int(y1)).unwrap()
    }

    fn annulus() -> RectilinearRegion {
        RectilinearRegion::new(vec![r(1, 1, 4, 2), r(1, 3, 4, 4), r(1, 2, 2, 3), r(3, 2, 4, 3)]).unwrap()
    }

    #[test]
    fn empty_region_one_outer_component() {
        let u = r(0, 0, 5, 5);
        let comps = complement_components(&RectilinearRegion::empty(), &u).unwrap();
        assert_eq!(comps.len(), 1);
        assert!(!comps[0].bounded);
        assert_eq!(comps[0].region.area(), int(25));
    }

    #[test]
    fn hollow_square_has_inner_hole() {
        let u = r(0, 0, 5, 5);
        let comps = complement_components(&annulus(), &u).unwrap();
        assert_eq!(comps.len(), 2);
        let inner: Vec<_> = comps.iter().filter(|c| c.bounded).collect();
        assert_eq!(inner.len(), 1);
        assert_eq!(inner[0].region.area(), int(1));
        assert!(!annulus().is_hole_free());
        assert!(annulus().is_connected());
    }

    #[test]
    fn full_universe_has_no_complement() {
        let u = r(0, 0, 5, 5);
        let full = RectilinearRegion::from_box(u.clone());
        assert!(complement_components(&full, &u).unwrap().is_empty());
    }

    #[test]
    fn region_outside_universe_rejected() {
        let u = r(0, 0, 2, 2);
        let reg = RectilinearRegion::from_box(r(1, 1, 3, 3));
        assert_eq!(complement_components(&reg, &u), Err(GeomError::NotInUniverse));
    }

    #[test]
    fn overlapping_cells_rejected() {
        assert_eq!(
            RectilinearRegion::new(vec![r(0, 0, 2, 2), r(1, 1, 3, 3)]),
            Err(GeomError::OverlappingCells)
        );
        let u = RectilinearRegion::union_of(&[r(0, 0, 2, 2), r(1, 1, 3, 3)]);
        assert_eq!(u.area(), int(7));
    }

    #[test]
    fn difference_and_containment() {
        let a = RectilinearRegion::from_box(r(0, 0, 4, 4));
        let d = a.subtract_box(&r(1, 1, 2, 2));
        assert_eq!(d.area(), int(15));
        assert!(!d.contains_box(&r(0, 0, 2, 2)));
        assert!(d.contains_box(&r(2, 0, 4, 4)));
        assert!(!d.is_hole_free());
    }
}
