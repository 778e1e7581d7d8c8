//! The k-coloured lattice cube cover of R^{2n} and its brute-force
//! verification on finite windows.
//!
//! Colour `j` (1-based) is the lattice `d·(M·v + (j-1)e_1) + [0,d]^{2n}`,
//! `v ∈ Z^{2n}`, for the upper bidiagonal matrix `M(2n,k)`. Axes are 0-based
//! in this module: `periods()[0]` is the colour period `k`.

use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::geometry::{
    self, fmt_rat, int, lcm_denoms, rat, serde_rat, serde_rat_opt, sqrt_exact, Aabb, CompressedGrid, GeomError,
    Point, Rat,
};
use crate::par::Exec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoverError {
    #[error("no positive gap: k = {k} must exceed 2n = {}", 2 * .n)]
    NoPositiveGap { n: usize, k: usize },
    #[error("half dimension must be positive")]
    ZeroDimension,
    #[error("colour {0} out of range 1..={1}")]
    BadColor(usize, usize),
    #[error("axis {0} out of range for dimension {1}")]
    AxisOutOfRange(usize, usize),
    #[error("scale must be positive, got {0}")]
    BadScale(String),
    #[error("window too small: {0} cube(s) of the colour fit inside")]
    WindowTooSmall(usize),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverMatrix {
    pub n: usize,
    pub k: usize,
    #[serde(serialize_with = "ser_matrix")]
    pub entries: Vec<Vec<Rat>>,
}

fn ser_matrix<S: serde::Serializer>(m: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for row in m {
        seq.serialize_element(&row.iter().map(fmt_rat).collect::<Vec<_>>())?;
    }
    seq.end()
}

impl CoverMatrix {
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn diag(&self, m: usize) -> Rat {
        self.entries[m][m]
    }

    pub fn superdiag(&self, m: usize) -> Rat {
        if m + 1 < self.dim() {
            self.entries[m][m + 1]
        } else {
            Rat::zero()
        }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<Rat> {
        (0..self.dim())
            .map(|m| {
                let mut a = self.diag(m) * int(v[m] as i128);
                if m + 1 < self.dim() {
                    a += self.superdiag(m) * int(v[m + 1] as i128);
                }
                a
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionCover {
    pub matrix: CoverMatrix,
    #[serde(with = "serde_rat")]
    pub delta: Rat,
    pub periods: Vec<usize>,
}

/// One cube of the cover. `anchor` is its lower corner.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LatticeCube {
    pub color: usize,
    pub index: Vec<i64>,
    #[serde(with = "serde_rat")]
    pub scale: Rat,
    pub anchor: Point,
}

impl LatticeCube {
    pub fn bbox(&self) -> Aabb {
        Aabb::cube(self.anchor.clone(), self.scale).expect("positive scale")
    }
}

pub fn build_cover(n: usize, k: usize) -> Result<DimensionCover, CoverError> {
    if n == 0 {
        return Err(CoverError::ZeroDimension);
    }
    let dim = 2 * n;
    if k <= dim {
        return Err(CoverError::NoPositiveGap { n, k });
    }
    let mut entries = vec![vec![Rat::zero(); dim]; dim];
    entries[0][0] = int(k as i128);
    for (m, row) in entries.iter_mut().enumerate().skip(1) {
        row[m] = Rat::one();
    }
    entries[0][1] = rat(k as i128, dim as i128);
    // rows 2..2n-1 (1-based) carry (2n-i+2)/(2n-i+1)
    for i in 2..dim {
        let top = (dim + 2 - i) as i128;
        entries[i - 1][i] = rat(top, top - 1);
    }
    let delta = rat((k - dim) as i128, dim as i128).min(rat(1, dim as i128 - 1));
    let mut periods = vec![k];
    periods.extend((2..=dim).map(|m| dim - m + 2));
    Ok(DimensionCover {
        matrix: CoverMatrix { n, k, entries },
        delta,
        periods,
    })
}

impl DimensionCover {
    pub fn n(&self) -> usize {
        self.matrix.n
    }

    pub fn k(&self) -> usize {
        self.matrix.k
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    fn check_color(&self, j: usize) -> Result<(), CoverError> {
        if j == 0 || j > self.k() {
            return Err(CoverError::BadColor(j, self.k()));
        }
        Ok(())
    }

    /// Anchor of cube `(j, v)` at scale `d`.
    pub fn anchor(&self, j: usize, v: &[i64], d: &Rat) -> Point {
        let mut a = self.matrix.apply(v);
        a[0] += int(j as i128 - 1);
        Point::new(a.into_iter().map(|x| x * d).collect()).expect("even dimension")
    }

    pub fn cube(&self, j: usize, v: &[i64], d: &Rat) -> LatticeCube {
        LatticeCube {
            color: j,
            index: v.to_vec(),
            scale: *d,
            anchor: self.anchor(j, v, d),
        }
    }
}

fn check_scale(d: &Rat) -> Result<(), CoverError> {
    if !d.is_positive() {
        return Err(CoverError::BadScale(fmt_rat(d)));
    }
    Ok(())
}

fn ceil_div(a: &Rat, b: &Rat) -> i64 {
    (a / b).ceil().to_integer() as i64
}

fn floor_div(a: &Rat, b: &Rat) -> i64 {
    (a / b).floor().to_integer() as i64
}

/// Cubes of colour `j` whose closed box meets the closed window, ordered
/// lexicographically by index.
pub fn enumerate_cubes(
    cover: &DimensionCover,
    j: usize,
    window: &Aabb,
    scale: &Rat,
) -> Result<Vec<LatticeCube>, CoverError> {
    cover.check_color(j)?;
    check_scale(scale)?;
    if window.dim() != cover.dim() {
        return Err(GeomError::DimensionMismatch(cover.dim(), window.dim()).into());
    }
    let dim = cover.dim();
    // in lattice units the anchor must satisfy lo/d - 1 <= a_m <= hi/d
    let lo: Vec<Rat> = (0..dim).map(|m| window.lo().at(m) / scale - Rat::one()).collect();
    let hi: Vec<Rat> = (0..dim).map(|m| window.hi().at(m) / scale).collect();
    let mut out = Vec::new();
    let mut v = vec![0i64; dim];
    descend(cover, j, dim - 1, &lo, &hi, &mut v, &mut out);
    out.sort();
    Ok(out.into_iter().map(|v| cover.cube(j, &v, scale)).collect())
}

fn descend(
    cover: &DimensionCover,
    j: usize,
    m: usize,
    lo: &[Rat],
    hi: &[Rat],
    v: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    let mut c = if m + 1 < cover.dim() {
        cover.matrix.superdiag(m) * int(v[m + 1] as i128)
    } else {
        Rat::zero()
    };
    if m == 0 {
        c += int(j as i128 - 1);
    }
    let diag = cover.matrix.diag(m);
    let a = ceil_div(&(lo[m] - c), &diag);
    let b = floor_div(&(hi[m] - c), &diag);
    for x in a..=b {
        v[m] = x;
        if m == 0 {
            out.push(v.clone());
        } else {
            descend(cover, j, m - 1, lo, hi, v, out);
        }
    }
}

/// Cubes of colour `j` lying entirely inside the window.
pub fn cubes_inside(
    cover: &DimensionCover,
    j: usize,
    window: &Aabb,
    scale: &Rat,
) -> Result<Vec<LatticeCube>, CoverError> {
    Ok(enumerate_cubes(cover, j, window, scale)?
        .into_iter()
        .filter(|c| window.contains(&c.bbox()))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapReport {
    pub color: usize,
    pub cubes: usize,
    #[serde(with = "serde_rat")]
    pub delta: Rat,
    #[serde(with = "serde_rat")]
    pub expected_gap: Rat,
    #[serde(with = "serde_rat")]
    pub min_gap_sq: Rat,
    /// Present when the minimum distance is rational.
    #[serde(with = "serde_rat_opt")]
    pub min_gap: Option<Rat>,
    pub pass: bool,
}

/// Integer image of a family of cubes: anchors times a common denominator.
struct IntCubes {
    lo: Vec<Vec<i128>>,
    side: i128,
    den: i128,
}

impl IntCubes {
    fn new(cubes: &[LatticeCube]) -> Self {
        let scale = cubes[0].scale;
        let den = lcm_denoms(cubes.iter().flat_map(|c| c.anchor.coords()).chain([&scale]));
        let to_int = |r: &Rat| (r * int(den)).to_integer();
        IntCubes {
            lo: cubes.iter().map(|c| c.anchor.coords().iter().map(to_int).collect()).collect(),
            side: to_int(&scale),
            den,
        }
    }

    fn dist_sq(&self, a: usize, b: usize) -> i128 {
        self.lo[a]
            .iter()
            .zip(&self.lo[b])
            .map(|(x, y)| {
                let g = if x + self.side < *y {
                    y - x - self.side
                } else if y + self.side < *x {
                    x - y - self.side
                } else {
                    0
                };
                g * g
            })
            .sum()
    }

    /// Buckets of side `3·side`: two cubes at distance at most `side` land in
    /// buckets differing by at most one per axis.
    fn buckets(&self, width: i128) -> HashMap<Vec<i128>, Vec<usize>> {
        let mut map: HashMap<Vec<i128>, Vec<usize>> = HashMap::new();
        for (i, lo) in self.lo.iter().enumerate() {
            map.entry(lo.iter().map(|x| x.div_euclid(width)).collect())
                .or_default()
                .push(i);
        }
        map
    }

    fn near(&self, map: &HashMap<Vec<i128>, Vec<usize>>, width: i128, i: usize) -> Vec<usize> {
        let key: Vec<i128> = self.lo[i].iter().map(|x| x.div_euclid(width)).collect();
        let dim = key.len();
        let mut out = Vec::new();
        let mut off = vec![-1i128; dim];
        'outer: loop {
            let k: Vec<i128> = key.iter().zip(&off).map(|(a, b)| a + b).collect();
            if let Some(list) = map.get(&k) {
                out.extend(list.iter().copied().filter(|&o| o != i));
            }
            for o in off.iter_mut() {
                *o += 1;
                if *o <= 1 {
                    continue 'outer;
                }
                *o = -1;
            }
            break;
        }
        out
    }
}

/// Exact minimum distance between distinct same-colour cubes inside the
/// window, compared against `δ·scale`.
pub fn verify_gap(
    cover: &DimensionCover,
    j: usize,
    window: &Aabb,
    scale: &Rat,
) -> Result<GapReport, CoverError> {
    verify_gap_with(cover, j, window, scale, Exec::default())
}

pub fn verify_gap_with(
    cover: &DimensionCover,
    j: usize,
    window: &Aabb,
    scale: &Rat,
    exec: Exec,
) -> Result<GapReport, CoverError> {
    let cubes = cubes_inside(cover, j, window, scale)?;
    if cubes.len() < 2 {
        return Err(CoverError::WindowTooSmall(cubes.len()));
    }
    let ic = IntCubes::new(&cubes);
    let width = 3 * ic.side;
    let map = ic.buckets(width);
    let bound = ic.side * ic.side;
    let local = exec.min_range(0..cubes.len(), |i| {
        ic.near(&map, width, i).into_iter().map(|o| ic.dist_sq(i, o)).min()
    });
    let best = match local {
        Some(b) if b <= bound => b,
        // nothing within one side length: every pair is a candidate
        _ => exec
            .min_range(0..cubes.len(), |i| {
                (i + 1..cubes.len()).map(|o| ic.dist_sq(i, o)).min()
            })
            .expect("at least two cubes"),
    };
    let min_gap_sq = Rat::new(best, ic.den * ic.den);
    let expected_gap = cover.delta * scale;
    Ok(GapReport {
        color: j,
        cubes: cubes.len(),
        delta: cover.delta,
        expected_gap,
        min_gap_sq,
        min_gap: sqrt_exact(&min_gap_sq),
        pass: min_gap_sq == expected_gap * expected_gap,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub covered: bool,
    pub interior_overlap_pairs: usize,
    #[serde(with = "serde_rat")]
    pub remainder_area: Rat,
    pub cubes: usize,
}

pub fn verify_covering_and_disjointness(cover: &DimensionCover, window: &Aabb) -> Result<CoverReport, CoverError> {
    verify_covering_with(cover, window, &Rat::one(), Exec::default())
}

/// Covering is decided by exact subtraction: the window is cut into the
/// coordinate-compressed grid of all cube faces and every cell must lie in
/// some cube. Overlaps are counted over all enumerated cubes of all colours.
pub fn verify_covering_with(
    cover: &DimensionCover,
    window: &Aabb,
    scale: &Rat,
    exec: Exec,
) -> Result<CoverReport, CoverError> {
    let mut cubes = Vec::new();
    for j in 1..=cover.k() {
        cubes.extend(enumerate_cubes(cover, j, window, scale)?);
    }
    let boxes: Vec<Aabb> = cubes.iter().map(LatticeCube::bbox).collect();
    let grid = CompressedGrid::new(window, &boxes);
    let mask = grid.mask_of(&boxes);
    let remainder_area: Rat = (0..grid.len())
        .filter(|&c| !mask[c])
        .map(|c| grid.cell_volume(c))
        .sum();

    let interior_overlap_pairs = if cubes.is_empty() {
        0
    } else {
        let ic = IntCubes::new(&cubes);
        let width = 3 * ic.side;
        let map = ic.buckets(width);
        exec.sum_range(0..cubes.len(), |i| {
            ic.near(&map, width, i)
                .into_iter()
                .filter(|&o| o > i && boxes[i].interiors_overlap(&boxes[o]))
                .count()
        })
    };
    Ok(CoverReport {
        covered: remainder_area.is_zero(),
        interior_overlap_pairs,
        remainder_area,
        cubes: cubes.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CylinderReport {
    pub axis: usize,
    pub period: usize,
    pub found: usize,
    pub expected: usize,
    pub pass: bool,
    /// Same comparison with the cylinder over the interior of `C` on every
    /// axis. In dimension four the δ-neighbourhood form picks up cubes that
    /// merely touch a facet of `C` transversally to `axis`, while this form
    /// still holds.
    pub interior_found: usize,
    pub interior_pass: bool,
}

/// Checks that the colour-`j` cubes inside the window that meet the
/// cylinder over `C` along `axis` are exactly the translates of `C` by
/// multiples of `periods[axis]·d` along that axis.
///
/// Along axis 0 the cylinder is over the interior of `C`; along the other
/// axes it is over the open `δd`-neighbourhood of `C`.
pub fn verify_cylinder_law(
    cover: &DimensionCover,
    j: usize,
    cube: &LatticeCube,
    axis: usize,
    window: &Aabb,
) -> Result<CylinderReport, CoverError> {
    cover.check_color(j)?;
    if axis >= cover.dim() {
        return Err(CoverError::AxisOutOfRange(axis, cover.dim()));
    }
    if cube.color != j {
        return Err(CoverError::BadColor(cube.color, cover.k()));
    }
    let d = cube.scale;
    let c = cube.bbox();
    let reach = cover.delta * d;
    let reach_sq = reach * reach;
    let meets_interior = |b: &Aabb| -> bool {
        (0..cover.dim())
            .filter(|&m| m != axis)
            .all(|m| b.lo().at(m) < c.hi().at(m) && c.lo().at(m) < b.hi().at(m))
    };
    let meets = |b: &Aabb| -> bool {
        if axis == 0 {
            meets_interior(b)
        } else {
            let proj: Rat = (0..cover.dim())
                .filter(|&m| m != axis)
                .map(|m| {
                    let g = geometry::gap(b.lo().at(m), b.hi().at(m), c.lo().at(m), c.hi().at(m));
                    g * g
                })
                .sum();
            proj < reach_sq
        }
    };
    let inside: Vec<Aabb> = cubes_inside(cover, j, window, &d)?.iter().map(LatticeCube::bbox).collect();
    let found: BTreeSet<Aabb> = inside.iter().filter(|b| meets(b)).cloned().collect();
    let interior_found: BTreeSet<Aabb> = inside.iter().filter(|b| meets_interior(b)).cloned().collect();

    let period = cover.periods[axis];
    let step = int(period as i128) * d;
    let lo = window.lo().at(axis);
    let hi = window.hi().at(axis);
    let a = c.lo().at(axis);
    let l_min = ceil_div(&(lo - a), &step);
    let l_max = floor_div(&(hi - d - a), &step);
    let expected: BTreeSet<Aabb> = (l_min..=l_max)
        .map(|l| c.translate(&Point::unit(cover.dim(), axis, step * int(l as i128))))
        .filter(|b| window.contains(b))
        .collect();
    Ok(CylinderReport {
        axis,
        period,
        found: found.len(),
        expected: expected.len(),
        pass: found == expected,
        interior_found: interior_found.len(),
        interior_pass: interior_found == expected,
    })
}

/// Cube window `[lo, lo + side]^{2n}`.
pub fn cube_window(dim: usize, lo: Rat, side: Rat) -> Aabb {
    Aabb::cube(Point::new(vec![lo; dim]).expect("even dimension"), side).expect("positive side")
}

/// Window spanning `reps` periods of the cover along every axis at scale `d`,
/// starting at the origin.
pub fn period_window(cover: &DimensionCover, reps: usize, d: &Rat) -> Aabb {
    let bounds: Vec<(Rat, Rat)> = cover
        .periods
        .iter()
        .map(|&p| (Rat::zero(), int((p * reps) as i128) * d))
        .collect();
    Aabb::from_bounds(&bounds).expect("positive periods")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::box_distance_sq;

    #[test]
    fn matrices_match_known_instances() {
        let c = build_cover(1, 3).unwrap();
        assert_eq!(c.matrix.entries, vec![vec![int(3), rat(3, 2)], vec![int(0), int(1)]]);
        assert_eq!(c.delta, rat(1, 2));
        let c = build_cover(1, 4).unwrap();
        assert_eq!(c.matrix.entries, vec![vec![int(4), int(2)], vec![int(0), int(1)]]);
        assert_eq!(c.delta, int(1));
        let c = build_cover(2, 5).unwrap();
        let z = int(0);
        assert_eq!(
            c.matrix.entries,
            vec![
                vec![int(5), rat(5, 4), z, z],
                vec![z, int(1), rat(4, 3), z],
                vec![z, z, int(1), rat(3, 2)],
                vec![z, z, z, int(1)],
            ]
        );
        assert_eq!(c.delta, rat(1, 4));
        assert_eq!(c.periods, vec![5, 4, 3, 2]);
        assert!(matches!(build_cover(1, 2), Err(CoverError::NoPositiveGap { .. })));
    }

    #[test]
    fn enumeration_examples() {
        let c = build_cover(1, 3).unwrap();
        let one = int(1);
        let w = Aabb::rect(int(0), int(0), int(1), int(1)).unwrap();
        let cubes = enumerate_cubes(&c, 1, &w, &one).unwrap();
        assert!(cubes.iter().any(|q| q.index == vec![0, 0] && q.anchor == Point::origin(2)));
        let w = Aabb::rect(int(1), int(0), int(2), int(1)).unwrap();
        let cubes = enumerate_cubes(&c, 2, &w, &one).unwrap();
        assert!(cubes.iter().any(|q| q.index == vec![0, 0] && q.anchor == Point::xy(int(1), int(0))));
        let w = Aabb::rect(int(4), int(0), int(6), int(2)).unwrap();
        let cubes = enumerate_cubes(&c, 1, &w, &one).unwrap();
        assert!(cubes.iter().any(|q| q.index == vec![1, 1] && q.anchor == Point::xy(rat(9, 2), int(1))));
        let mut sorted = cubes.clone();
        sorted.sort_by(|a, b| a.index.cmp(&b.index));
        assert_eq!(sorted, cubes);
    }

    #[test]
    fn gap_examples() {
        let one = int(1);
        let r = verify_gap(&build_cover(1, 3).unwrap(), 1, &cube_window(2, int(0), int(12)), &one).unwrap();
        assert_eq!(r.min_gap, Some(rat(1, 2)));
        assert!(r.pass);
        let r = verify_gap(&build_cover(1, 4).unwrap(), 2, &cube_window(2, int(0), int(16)), &one).unwrap();
        assert_eq!(r.min_gap, Some(int(1)));
        assert!(r.pass);
        let r = verify_gap(&build_cover(2, 5).unwrap(), 1, &cube_window(4, int(0), int(10)), &one).unwrap();
        assert_eq!(r.min_gap, Some(rat(1, 4)));
        assert!(r.pass);
        let tiny = cube_window(2, int(0), int(1));
        assert!(matches!(
            verify_gap(&build_cover(1, 3).unwrap(), 1, &tiny, &one),
            Err(CoverError::WindowTooSmall(_))
        ));
    }

    #[test]
    fn covering_examples() {
        let r = verify_covering_and_disjointness(&build_cover(1, 3).unwrap(), &cube_window(2, int(0), int(9))).unwrap();
        assert!(r.covered);
        assert_eq!(r.interior_overlap_pairs, 0);
        let r = verify_covering_and_disjointness(&build_cover(1, 4).unwrap(), &cube_window(2, int(-4), int(8))).unwrap();
        assert!(r.covered);
        assert_eq!(r.interior_overlap_pairs, 0);
        let r = verify_covering_and_disjointness(&build_cover(2, 5).unwrap(), &cube_window(4, int(0), int(6))).unwrap();
        assert!(r.covered);
        assert_eq!(r.interior_overlap_pairs, 0);
    }

    #[test]
    fn cylinder_examples() {
        let c = build_cover(1, 3).unwrap();
        let one = int(1);
        let c0 = c.cube(1, &[0, 0], &one);
        let w = Aabb::rect(int(-1), int(-8), int(2), int(8)).unwrap();
        let r = verify_cylinder_law(&c, 1, &c0, 1, &w).unwrap();
        assert_eq!(r.period, 2);
        assert!(r.pass && r.found >= 4, "{r:?}");
        let w = Aabb::rect(int(-10), int(-1), int(10), int(2)).unwrap();
        let r = verify_cylinder_law(&c, 1, &c0, 0, &w).unwrap();
        assert_eq!(r.period, 3);
        assert!(r.pass && r.found >= 4, "{r:?}");
        let c4 = build_cover(2, 5).unwrap();
        let q = c4.cube(1, &[0, 0, 0, 0], &one);
        let w = Aabb::from_bounds(&[(int(-2), int(3)), (int(-2), int(3)), (int(-7), int(8)), (int(-2), int(3))]).unwrap();
        let r = verify_cylinder_law(&c4, 1, &q, 2, &w).unwrap();
        assert_eq!(r.period, 3);
        assert!(r.interior_pass && r.expected >= 3, "{r:?}");
        // v = (0,0,0,1) touches C across the x_4 facet and lies in the
        // cylinder over the δ-neighbourhood
        assert!(!r.pass);
        let touching = c4.cube(1, &[0, 0, 0, 1], &one).bbox();
        assert_eq!(touching.lo().coords(), &[int(0), int(0), rat(3, 2), int(1)]);
        assert_eq!(box_distance_sq(&touching, &q.bbox()).unwrap(), rat(1, 4));
        assert!(verify_cylinder_law(&c, 1, &c0, 2, &w).is_err());
    }
}
