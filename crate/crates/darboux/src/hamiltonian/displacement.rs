//! Planar model of the displaceable set: a row of `k+1` squares joined by a
//! thin corridor, the upper half `N⁺`, its inner parallel set `U`, and the
//! shear `(x, y) ↦ (x, y - t·f(x))` that pushes `U` off itself.
//!
//! `U` is the set of points of `N⁺` at Euclidean distance more than `ν`
//! from its boundary. It is never built exactly; the L∞ inner parallel
//! sets at distances `ν` and `ν' = ν·70/99 < ν/√2` bracket it, and every
//! set check runs on the side that keeps the answer conservative.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::HamError;
use crate::geometry::{fmt_rat, int, neighborhood, rat, serde_rat, Aabb, RectilinearRegion, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shear {
    /// The ridge function described in the module docs.
    Ridge,
    /// `f ≡ 0`: a shear that moves nothing.
    Zero,
}

/// Piecewise-smoothstep ridge over `[0, (2k+1)d]`: low over corridor gaps,
/// high over squares, ramps of width `ν'` inside the squares.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ridge {
    pub shear: Shear,
    #[serde(with = "serde_rat")]
    pub low: Rat,
    #[serde(with = "serde_rat")]
    pub high: Rat,
    #[serde(with = "serde_rat")]
    pub ramp: Rat,
    k: usize,
    #[serde(with = "serde_rat")]
    d: Rat,
}

fn smoothstep(t: Rat) -> Rat {
    t * t * t * (int(10) - int(15) * t + int(6) * t * t)
}

impl Ridge {
    pub fn value(&self, x: &Rat) -> Rat {
        if self.shear == Shear::Zero {
            return Rat::zero();
        }
        let d = self.d;
        let len = int(2 * self.k as i128 + 1) * d;
        let x = (*x).max(Rat::zero()).min(len);
        let col = (x / d).floor().to_integer().min(2 * self.k as i128);
        if col % 2 == 1 && x > int(col) * d {
            return self.low;
        }
        // x lies over square j = col/2 (or on the left edge of a gap)
        let j = if col % 2 == 1 { (col - 1) / 2 } else { col / 2 };
        let left = int(2 * j) * d;
        let right = left + d;
        let span = self.high - self.low;
        if j > 0 && x < left + self.ramp {
            return self.low + span * smoothstep((x - left) / self.ramp);
        }
        if (j as usize) < self.k && x > right - self.ramp {
            return self.low + span * smoothstep((right - x) / self.ramp);
        }
        self.high
    }

    /// Points where the ridge changes monotonicity or formula.
    pub fn breaks(&self) -> Vec<Rat> {
        let mut out = Vec::new();
        for j in 0..=self.k as i128 {
            let left = int(2 * j) * self.d;
            let right = left + self.d;
            out.extend([left, left + self.ramp, right - self.ramp, right]);
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct DisplacementGadget {
    pub k: usize,
    pub d: Rat,
    pub delta: Rat,
    pub nu: Rat,
    pub nu_over: Rat,
    /// Closures of the open boxes whose union is `N`.
    pub pieces: Vec<Aabb>,
    pub n_region: RectilinearRegion,
    pub n_plus: RectilinearRegion,
    /// Contains `U`; used for every emptiness check.
    pub u_over: RectilinearRegion,
    /// Contained in `U`; used for the area bound and as a transport target.
    pub u_under: RectilinearRegion,
    pub ridge: Ridge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DisplacementReport {
    #[serde(with = "serde_rat")]
    pub area_u: Rat,
    #[serde(with = "serde_rat")]
    pub area_u_over: Rat,
    #[serde(with = "serde_rat")]
    pub model_area: Rat,
    #[serde(with = "serde_rat")]
    pub area_target: Rat,
    pub area_ok: bool,
    pub u_connected: bool,
    pub shear_ok: bool,
    pub displaced: bool,
}

/// L∞ inner parallel set of `s` at distance `r`.
fn erode(s: &RectilinearRegion, r: &Rat) -> RectilinearRegion {
    let bb = s.bbox().expect("nonempty region");
    let pad = neighborhood(&bb, &(*r + Rat::one())).expect("nonnegative");
    let outside = RectilinearRegion::from_box(pad).difference(s);
    let grown: Vec<Aabb> = outside
        .cells()
        .iter()
        .map(|c| neighborhood(c, r).expect("nonnegative"))
        .collect();
    s.difference(&RectilinearRegion::union_of(&grown))
}

pub fn build_displacement(
    k: usize,
    d: Rat,
    delta: Rat,
    nu: Rat,
    target_fraction: Rat,
    eps: Rat,
    shear: Shear,
) -> Result<(DisplacementGadget, DisplacementReport), HamError> {
    if k == 0 || !d.is_positive() || !delta.is_positive() || !nu.is_positive() {
        return Err(HamError::BadGadget("k, d, δ and ν must be positive".into()));
    }
    if delta >= d {
        return Err(HamError::BadGadget(format!("δ = {} must be below d = {}", fmt_rat(&delta), fmt_rat(&d))));
    }
    if nu * int(2) >= delta {
        return Err(HamError::NuTooLarge(fmt_rat(&nu), fmt_rat(&delta)));
    }
    let half = d / int(2);
    let len = int(2 * k as i128 + 1) * d;
    let mut pieces: Vec<Aabb> = (0..=k as i128)
        .map(|j| Aabb::rect(int(2 * j) * d, -half, int(2 * j + 1) * d, half).expect("positive"))
        .collect();
    pieces.push(Aabb::rect(Rat::zero(), -delta, len, delta).expect("positive"));
    let n_region = RectilinearRegion::union_of(&pieces);
    let upper = Aabb::rect(-Rat::one(), Rat::zero(), len + Rat::one(), d).expect("positive");
    let n_plus = n_region.intersect_box(&upper);
    let n_plus = RectilinearRegion::union_of(n_plus.cells());
    let nu_over = nu * rat(70, 99);
    let u_over = erode(&n_plus, &nu_over);
    let u_under = erode(&n_plus, &nu);
    let ridge = Ridge {
        shear,
        low: delta - nu_over / int(2),
        high: half - nu_over / int(2),
        ramp: nu_over,
        k,
        d,
    };
    let gadget = DisplacementGadget {
        k,
        d,
        delta,
        nu,
        nu_over,
        pieces,
        n_region,
        n_plus,
        u_over,
        u_under,
        ridge,
    };
    let model_area = gadget.n_region.area();
    let area_u = gadget.u_under.area();
    let area_target = target_fraction * model_area - eps;
    let times: Vec<Rat> = (0..=8).map(|i| rat(i, 8)).collect();
    let shear_ok = times.iter().all(|t| gadget.shear_contained(&gadget.u_over, t));
    let displaced = gadget.sheared_disjoint(&gadget.u_over);
    let report = DisplacementReport {
        area_u,
        area_u_over: gadget.u_over.area(),
        model_area,
        area_ok: area_u > area_target,
        area_target,
        u_connected: gadget.u_under.is_connected(),
        shear_ok,
        displaced,
    };
    Ok((gadget, report))
}

/// A vertical slice of the plane: an open strip `a < x < b` or a line `x = a`.
#[derive(Debug, Clone, Copy)]
enum Slice {
    Strip(Rat, Rat),
    Line(Rat),
}

impl DisplacementGadget {
    pub fn model_area(&self) -> Rat {
        self.n_region.area()
    }

    fn slices(&self, region: &RectilinearRegion) -> Vec<Slice> {
        let mut xs: Vec<Rat> = self.ridge.breaks();
        for c in region.cells().iter().chain(self.pieces.iter()) {
            xs.push(*c.lo().at(0));
            xs.push(*c.hi().at(0));
        }
        xs.sort();
        xs.dedup();
        let mut out: Vec<Slice> = xs.iter().map(|&x| Slice::Line(x)).collect();
        out.extend(xs.windows(2).map(|w| Slice::Strip(w[0], w[1])));
        out
    }

    /// y-intervals (closed) of the region's cells above the slice.
    fn region_column(region: &RectilinearRegion, s: Slice) -> Vec<(Rat, Rat)> {
        region
            .cells()
            .iter()
            .filter(|c| match s {
                Slice::Strip(a, b) => *c.lo().at(0) <= a && b <= *c.hi().at(0),
                Slice::Line(a) => *c.lo().at(0) <= a && a <= *c.hi().at(0),
            })
            .map(|c| (*c.lo().at(1), *c.hi().at(1)))
            .collect()
    }

    /// Open y-intervals of `N` over the whole slice, merged.
    fn model_column(&self, s: Slice) -> Vec<(Rat, Rat)> {
        let mut iv: Vec<(Rat, Rat)> = self
            .pieces
            .iter()
            .filter(|p| match s {
                Slice::Strip(a, b) => *p.lo().at(0) <= a && b <= *p.hi().at(0),
                Slice::Line(a) => *p.lo().at(0) < a && a < *p.hi().at(0),
            })
            .map(|p| (*p.lo().at(1), *p.hi().at(1)))
            .collect();
        iv.sort();
        let mut merged: Vec<(Rat, Rat)> = Vec::new();
        for (lo, hi) in iv {
            match merged.last_mut() {
                Some(last) if lo < last.1 => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        merged
    }

    fn ridge_range(&self, s: Slice) -> (Rat, Rat) {
        match s {
            Slice::Strip(a, b) => {
                let (fa, fb) = (self.ridge.value(&a), self.ridge.value(&b));
                (fa.min(fb), fa.max(fb))
            }
            Slice::Line(a) => {
                let f = self.ridge.value(&a);
                (f, f)
            }
        }
    }

    /// `φ_t(region) ⊆ N`, checked slice by slice with the ridge bounded by
    /// its values at the slice ends (it is monotone between breaks).
    pub fn shear_contained(&self, region: &RectilinearRegion, t: &Rat) -> bool {
        self.slices(region).into_iter().all(|s| {
            let col = Self::region_column(region, s);
            if col.is_empty() {
                return true;
            }
            let (fmin, fmax) = self.ridge_range(s);
            let model = self.model_column(s);
            col.iter().all(|&(lo, hi)| {
                let (slo, shi) = (lo - *t * fmax, hi - *t * fmin);
                model.iter().any(|&(a, b)| a <= slo && shi <= b)
            })
        })
    }

    /// `φ_1(region) ∩ region = ∅` for the open interior of `region`.
    pub fn sheared_disjoint(&self, region: &RectilinearRegion) -> bool {
        self.slices(region).into_iter().all(|s| {
            let col = Self::region_column(region, s);
            let (fmin, fmax) = self.ridge_range(s);
            col.iter().all(|&(lo, hi)| {
                col.iter()
                    .all(|&(lo2, hi2)| hi - fmin <= lo2 || lo - fmax >= hi2)
            })
        })
    }

    /// Area of `φ_1(region)`, summed column by column. Each column moves
    /// rigidly, so this equals the area of `region`.
    pub fn sheared_area(&self, region: &RectilinearRegion) -> Rat {
        self.slices(region)
            .into_iter()
            .filter_map(|s| match s {
                Slice::Strip(a, b) => Some((a, b, s)),
                Slice::Line(_) => None,
            })
            .map(|(a, b, s)| {
                let f = self.ridge.value(&a);
                let len: Rat = Self::region_column(region, s)
                    .iter()
                    .map(|&(lo, hi)| (hi - f) - (lo - f))
                    .sum();
                (b - a) * len
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(nu: Rat, shear: Shear) -> (DisplacementGadget, DisplacementReport) {
        build_displacement(1, rat(2, 3), rat(1, 12), nu, rat(49, 100), rat(1, 50), shear).unwrap()
    }

    #[test]
    fn unit_model_has_area_one() {
        let (g, r) = unit(rat(1, 1000), Shear::Ridge);
        assert_eq!(r.model_area, int(1));
        assert_eq!(g.n_plus.area(), rat(1, 2));
        assert!(r.displaced && r.shear_ok && r.area_ok && r.u_connected, "{r:?}");
        assert!(g.u_over.contains_region(&g.u_under));
    }

    #[test]
    fn zero_shear_is_contained_but_not_displacing() {
        let (_, r) = unit(rat(1, 1000), Shear::Zero);
        assert!(r.shear_ok);
        assert!(!r.displaced);
    }

    #[test]
    fn nu_near_half_delta() {
        let (_, small) = unit(rat(1, 1000), Shear::Ridge);
        let (_, big) = unit(rat(1, 25), Shear::Ridge);
        assert!(big.area_u < small.area_u);
        assert!(big.displaced && big.shear_ok);
        assert!(matches!(
            build_displacement(1, rat(2, 3), rat(1, 12), rat(1, 24), int(0), int(0), Shear::Ridge),
            Err(HamError::NuTooLarge(..))
        ));
    }

    #[test]
    fn ridge_values() {
        let (g, _) = unit(rat(1, 1000), Shear::Ridge);
        let r = &g.ridge;
        assert_eq!(r.value(&rat(1, 3)), r.high);
        assert_eq!(r.value(&int(1)), r.low);
        assert_eq!(r.value(&rat(4, 3)), r.low);
        assert_eq!(r.value(&(rat(4, 3) + r.ramp)), r.high);
        assert_eq!(r.value(&Rat::zero()), r.high);
        assert_eq!(g.sheared_area(&g.u_over), g.u_over.area());
    }
}
