//! Exact rational points, axis-aligned boxes and rectilinear regions.
//!
//! Nothing in here touches floating point except the `to_f64` helpers used
//! for rendering and broad-phase bucketing.

mod grid;
mod rat;
mod region;

pub use grid::CompressedGrid;
pub use rat::{
    fmt_rat, int, lcm_denoms, parse_rat, pi_hi, pi_lo, rat, serde_rat, serde_rat_opt,
    serde_rat_vec, sqrt_exact, sqrt_floor, to_f64, Rat,
};
pub use region::{complement_components, Component, RectilinearRegion};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("dimension must be even and at least 2, got {0}")]
    BadDimension(usize),
    #[error("degenerate box: zero or negative width on axis {0}")]
    Degenerate(usize),
    #[error("negative neighbourhood radius {0}")]
    NegativeRadius(String),
    #[error("region cells have overlapping interiors")]
    OverlappingCells,
    #[error("region is not contained in the universe box")]
    NotInUniverse,
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

/// A point (or translation vector) of R^{2n}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    coords: Vec<Rat>,
}

impl Point {
    pub fn new(coords: Vec<Rat>) -> Result<Self, GeomError> {
        if coords.len() < 2 || !coords.len().is_multiple_of(2) {
            return Err(GeomError::BadDimension(coords.len()));
        }
        Ok(Point { coords })
    }

    pub fn origin(dim: usize) -> Self {
        Point::new(vec![Rat::zero(); dim]).expect("even dimension")
    }

    pub fn xy(x: Rat, y: Rat) -> Self {
        Point { coords: vec![x, y] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn at(&self, m: usize) -> &Rat {
        &self.coords[m]
    }

    pub fn add(&self, other: &Point) -> Point {
        debug_assert_eq!(self.dim(), other.dim());
        Point {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Point) -> Point {
        debug_assert_eq!(self.dim(), other.dim());
        Point {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> Point {
        Point {
            coords: self.coords.iter().map(|a| a * s).collect(),
        }
    }

    pub fn norm_sq(&self) -> Rat {
        self.coords.iter().map(|a| a * a).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Index of the single nonzero coordinate, if the vector is axis-parallel.
    pub fn axis(&self) -> Option<usize> {
        let nz: Vec<usize> = (0..self.dim()).filter(|&m| !self.coords[m].is_zero()).collect();
        (nz.len() == 1).then(|| nz[0])
    }

    pub fn unit(dim: usize, m: usize, len: Rat) -> Point {
        let mut p = Point::origin(dim);
        p.coords[m] = len;
        p
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(to_f64).collect()
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serde_rat_vec::serialize(&self.coords, s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let c = serde_rat_vec::deserialize(d)?;
        Point::new(c).map_err(serde::de::Error::custom)
    }
}

/// A closed axis-aligned box `[lo, hi]` with positive width on every axis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Aabb {
    lo: Point,
    hi: Point,
}

impl Aabb {
    pub fn new(lo: Point, hi: Point) -> Result<Self, GeomError> {
        if lo.dim() != hi.dim() {
            return Err(GeomError::DimensionMismatch(lo.dim(), hi.dim()));
        }
        for m in 0..lo.dim() {
            if lo.coords[m] >= hi.coords[m] {
                return Err(GeomError::Degenerate(m));
            }
        }
        Ok(Aabb { lo, hi })
    }

    pub fn from_bounds(bounds: &[(Rat, Rat)]) -> Result<Self, GeomError> {
        let lo = Point::new(bounds.iter().map(|b| b.0).collect())?;
        let hi = Point::new(bounds.iter().map(|b| b.1).collect())?;
        Aabb::new(lo, hi)
    }

    /// Planar rectangle `[x0, x1] x [y0, y1]`.
    pub fn rect(x0: Rat, y0: Rat, x1: Rat, y1: Rat) -> Result<Self, GeomError> {
        Aabb::new(Point::xy(x0, y0), Point::xy(x1, y1))
    }

    /// Cube `anchor + [0, side]^{2n}`.
    pub fn cube(anchor: Point, side: Rat) -> Result<Self, GeomError> {
        let hi = Point {
            coords: anchor.coords.iter().map(|a| a + side).collect(),
        };
        Aabb::new(anchor, hi)
    }

    pub fn lo(&self) -> &Point {
        &self.lo
    }

    pub fn hi(&self) -> &Point {
        &self.hi
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    pub fn width(&self, m: usize) -> Rat {
        self.hi.coords[m] - self.lo.coords[m]
    }

    pub fn widths(&self) -> Vec<Rat> {
        (0..self.dim()).map(|m| self.width(m)).collect()
    }

    pub fn volume(&self) -> Rat {
        (0..self.dim()).map(|m| self.width(m)).product()
    }

    pub fn center(&self) -> Point {
        let half = rat(1, 2);
        Point {
            coords: (0..self.dim())
                .map(|m| (self.lo.coords[m] + self.hi.coords[m]) * half)
                .collect(),
        }
    }

    pub fn translate(&self, v: &Point) -> Aabb {
        Aabb {
            lo: self.lo.add(v),
            hi: self.hi.add(v),
        }
    }

    /// Closed boxes share at least one point.
    pub fn intersects(&self, o: &Aabb) -> bool {
        (0..self.dim()).all(|m| self.lo.coords[m] <= o.hi.coords[m] && o.lo.coords[m] <= self.hi.coords[m])
    }

    /// Open interiors share a point (positive-measure overlap).
    pub fn interiors_overlap(&self, o: &Aabb) -> bool {
        (0..self.dim()).all(|m| self.lo.coords[m] < o.hi.coords[m] && o.lo.coords[m] < self.hi.coords[m])
    }

    /// The closed boxes meet in a set of dimension at least `dim - 1`
    /// (overlap or a shared facet of positive measure).
    pub fn facet_adjacent(&self, o: &Aabb) -> bool {
        let mut touching = 0;
        for m in 0..self.dim() {
            let (a0, a1, b0, b1) = (&self.lo.coords[m], &self.hi.coords[m], &o.lo.coords[m], &o.hi.coords[m]);
            if a0 < b1 && b0 < a1 {
                continue;
            }
            if a1 == b0 || b1 == a0 {
                touching += 1;
            } else {
                return false;
            }
        }
        touching <= 1
    }

    pub fn contains(&self, o: &Aabb) -> bool {
        (0..self.dim()).all(|m| self.lo.coords[m] <= o.lo.coords[m] && o.hi.coords[m] <= self.hi.coords[m])
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        (0..self.dim()).all(|m| self.lo.coords[m] <= p.coords[m] && p.coords[m] <= self.hi.coords[m])
    }

    /// Positive-measure intersection.
    pub fn intersection(&self, o: &Aabb) -> Option<Aabb> {
        let lo: Vec<Rat> = (0..self.dim()).map(|m| self.lo.coords[m].max(o.lo.coords[m])).collect();
        let hi: Vec<Rat> = (0..self.dim()).map(|m| self.hi.coords[m].min(o.hi.coords[m])).collect();
        Aabb::new(Point { coords: lo }, Point { coords: hi }).ok()
    }

    pub fn hull(&self, o: &Aabb) -> Aabb {
        let lo = (0..self.dim()).map(|m| self.lo.coords[m].min(o.lo.coords[m])).collect();
        let hi = (0..self.dim()).map(|m| self.hi.coords[m].max(o.hi.coords[m])).collect();
        Aabb {
            lo: Point { coords: lo },
            hi: Point { coords: hi },
        }
    }

    /// `self \ o` as interior-disjoint boxes (slab decomposition).
    pub fn subtract(&self, o: &Aabb) -> Vec<Aabb> {
        let Some(cut) = self.intersection(o) else {
            return vec![self.clone()];
        };
        let mut out = Vec::new();
        let mut rest = self.clone();
        for m in 0..self.dim() {
            if rest.lo.coords[m] < cut.lo.coords[m] {
                let mut piece = rest.clone();
                piece.hi.coords[m] = cut.lo.coords[m];
                out.push(piece);
                rest.lo.coords[m] = cut.lo.coords[m];
            }
            if cut.hi.coords[m] < rest.hi.coords[m] {
                let mut piece = rest.clone();
                piece.lo.coords[m] = cut.hi.coords[m];
                out.push(piece);
                rest.hi.coords[m] = cut.hi.coords[m];
            }
        }
        out
    }

    /// Squared distance from a point to the closed box.
    pub fn dist_sq_to_point(&self, p: &Point) -> Rat {
        (0..self.dim())
            .map(|m| {
                let g = gap(&self.lo.coords[m], &self.hi.coords[m], &p.coords[m], &p.coords[m]);
                g * g
            })
            .sum()
    }

    /// Squared distance from `p` to the farthest point of the box.
    pub fn max_dist_sq_to_point(&self, p: &Point) -> Rat {
        (0..self.dim())
            .map(|m| {
                let a = (self.lo.coords[m] - p.coords[m]).abs();
                let b = (self.hi.coords[m] - p.coords[m]).abs();
                let g = a.max(b);
                g * g
            })
            .sum()
    }

    pub fn to_f64(&self) -> (Vec<f64>, Vec<f64>) {
        (self.lo.to_f64(), self.hi.to_f64())
    }
}

impl Serialize for Aabb {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Box", 2)?;
        st.serialize_field("lo", &self.lo)?;
        st.serialize_field("hi", &self.hi)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Aabb {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            lo: Point,
            hi: Point,
        }
        let r = Raw::deserialize(d)?;
        Aabb::new(r.lo, r.hi).map_err(serde::de::Error::custom)
    }
}

/// Gap between closed intervals `[a0, a1]` and `[b0, b1]` (zero if they meet).
pub(crate) fn gap(a0: &Rat, a1: &Rat, b0: &Rat, b1: &Rat) -> Rat {
    if a1 < b0 {
        b0 - a1
    } else if b1 < a0 {
        a0 - b1
    } else {
        Rat::zero()
    }
}

/// Squared Euclidean distance between two closed boxes.
pub fn box_distance_sq(a: &Aabb, b: &Aabb) -> Result<Rat, GeomError> {
    if a.dim() != b.dim() {
        return Err(GeomError::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok((0..a.dim())
        .map(|m| {
            let g = gap(&a.lo.coords[m], &a.hi.coords[m], &b.lo.coords[m], &b.hi.coords[m]);
            g * g
        })
        .sum())
}

/// Smallest closed box containing the `nu`-neighbourhood of `b`.
pub fn neighborhood(b: &Aabb, nu: &Rat) -> Result<Aabb, GeomError> {
    if nu.is_negative() {
        return Err(GeomError::NegativeRadius(fmt_rat(nu)));
    }
    Ok(Aabb {
        lo: Point {
            coords: b.lo.coords.iter().map(|a| a - nu).collect(),
        },
        hi: Point {
            coords: b.hi.coords.iter().map(|a| a + nu).collect(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x0: i128, y0: i128, x1: i128, y1: i128) -> Aabb {
        Aabb::rect(int(x0), int(y0), int(x1), int(y1)).unwrap()
    }

    #[test]
    fn distance_examples() {
        assert_eq!(box_distance_sq(&r(0, 0, 1, 1), &r(0, 0, 1, 1)).unwrap(), int(0));
        let b = Aabb::rect(rat(3, 2), int(0), rat(5, 2), int(1)).unwrap();
        assert_eq!(box_distance_sq(&r(0, 0, 1, 1), &b).unwrap(), rat(1, 4));
        assert_eq!(box_distance_sq(&r(0, 0, 1, 1), &r(2, 2, 3, 3)).unwrap(), int(2));
    }

    #[test]
    fn distance_rejects_mixed_dimensions() {
        let b4 = Aabb::cube(Point::origin(4), int(1)).unwrap();
        assert!(matches!(
            box_distance_sq(&r(0, 0, 1, 1), &b4),
            Err(GeomError::DimensionMismatch(2, 4))
        ));
    }

    #[test]
    fn neighborhood_examples() {
        let unit = r(0, 0, 1, 1);
        assert_eq!(neighborhood(&unit, &int(0)).unwrap(), unit);
        let fat = neighborhood(&unit, &rat(1, 4)).unwrap();
        assert_eq!(fat, Aabb::rect(rat(-1, 4), rat(-1, 4), rat(5, 4), rat(5, 4)).unwrap());
        let two = neighborhood(&r(0, 0, 2, 2), &rat(1, 2)).unwrap();
        assert_eq!(two, Aabb::rect(rat(-1, 2), rat(-1, 2), rat(5, 2), rat(5, 2)).unwrap());
        assert!(neighborhood(&unit, &rat(-1, 3)).is_err());
    }

    #[test]
    fn degenerate_boxes_rejected() {
        assert_eq!(Aabb::rect(int(0), int(0), int(0), int(1)), Err(GeomError::Degenerate(0)));
        assert!(Point::new(vec![int(1)]).is_err());
        assert!(Point::new(vec![int(1), int(2), int(3)]).is_err());
    }

    #[test]
    fn subtract_partitions() {
        let a = r(0, 0, 4, 4);
        let b = r(1, 1, 2, 5);
        let parts = a.subtract(&b);
        let area: Rat = parts.iter().map(Aabb::volume).sum();
        assert_eq!(area, int(16) - int(3));
        for (i, p) in parts.iter().enumerate() {
            assert!(!p.interiors_overlap(&b));
            for q in &parts[i + 1..] {
                assert!(!p.interiors_overlap(q));
            }
        }
    }

    #[test]
    fn facet_adjacency_excludes_corners() {
        assert!(r(0, 0, 1, 1).facet_adjacent(&r(1, 0, 2, 1)));
        assert!(!r(0, 0, 1, 1).facet_adjacent(&r(1, 1, 2, 2)));
        assert!(r(0, 0, 2, 2).facet_adjacent(&r(1, 1, 3, 3)));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(fmt_rat(&rat(4, 8)), "1/2");
        assert_eq!(fmt_rat(&int(3)), "3");
        assert!(parse_rat("1/0").is_err());
        assert_eq!(sqrt_exact(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(sqrt_exact(&rat(2, 1)), None);
        let s = sqrt_floor(&int(2), 1000);
        assert!(s * s <= int(2) && (s + rat(1, 1000)) * (s + rat(1, 1000)) > int(2));
    }
}
