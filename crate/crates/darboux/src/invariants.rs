//! Covering-number calculus: ball capacity `γ`, the volume bound `Γ`,
//! `λ = max{B, Γ}`, the case split that turns `λ` into a value or range for
//! `S_B`, the category rules, and Singhof's bound. Gromov widths come as
//! intervals and everything downstream is interval-valued.

use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::geometry::{fmt_rat, int, serde_rat, serde_rat_opt, Rat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantError {
    #[error("nonpositive input: {0}")]
    Nonpositive(String),
    #[error("inconsistent descriptor: {0}")]
    Inconsistent(String),
    #[error("inconsistent flags: {0}")]
    Flags(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

/// Closed integer interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntInterval {
    pub lo: i64,
    pub hi: i64,
}

impl IntInterval {
    pub fn new(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        IntInterval { lo, hi }
    }

    pub fn exact(v: i64) -> Self {
        IntInterval { lo: v, hi: v }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn max(&self, other: &IntInterval) -> IntInterval {
        IntInterval::new(self.lo.max(other.lo), self.hi.max(other.hi))
    }

    pub fn contains(&self, v: i64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

impl fmt::Display for IntInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

/// Interval of Gromov widths. `hi = None` means no upper bound is known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthInterval {
    #[serde(with = "serde_rat")]
    pub lo: Rat,
    #[serde(with = "serde_rat_opt", default)]
    pub hi: Option<Rat>,
}

impl WidthInterval {
    pub fn exact(w: Rat) -> Self {
        WidthInterval { lo: w, hi: Some(w) }
    }
}

/// What is known about a closed symplectic `2n`-manifold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldDescriptor {
    pub half_dim: usize,
    #[serde(with = "serde_rat")]
    pub volume: Rat,
    pub gromov_width: WidthInterval,
    pub b_of_m: IntInterval,
    pub cat: IntInterval,
    pub cup_length: IntInterval,
    pub simply_connected: bool,
    pub omega_aspherical: bool,
    /// Number of charts in an explicit covering construction.
    #[serde(default)]
    pub ball_cover_upper: Option<i64>,
    /// Field name to source.
    #[serde(default)]
    pub citations: Vec<(String, String)>,
}

impl ManifoldDescriptor {
    pub fn validate(&self) -> Result<(), InvariantError> {
        let n = self.half_dim as i64;
        let bad = |m: String| Err(InvariantError::Inconsistent(m));
        if n == 0 {
            return bad("half dimension must be positive".into());
        }
        if !self.volume.is_positive() {
            return Err(InvariantError::Nonpositive(format!("volume {}", fmt_rat(&self.volume))));
        }
        let w = &self.gromov_width;
        if !w.lo.is_positive() {
            return Err(InvariantError::Nonpositive(format!("width {}", fmt_rat(&w.lo))));
        }
        if w.hi.is_some_and(|h| h < w.lo) {
            return bad("width interval is empty".into());
        }
        for (name, iv) in [("B", self.b_of_m), ("cat", self.cat), ("cup length", self.cup_length)] {
            if iv.lo > iv.hi {
                return bad(format!("{name} interval is empty"));
            }
        }
        if self.cup_length.lo < n || self.cup_length.lo + 1 > self.cat.lo {
            return bad(format!(
                "need n+1 <= cl+1 <= cat, got n = {n}, cl = {}, cat = {}",
                self.cup_length, self.cat
            ));
        }
        if self.cat.hi > self.b_of_m.hi || self.b_of_m.hi > 2 * n + 1 || self.b_of_m.lo < self.cat.lo {
            return bad(format!("need cat <= B <= 2n+1, got cat = {}, B = {}", self.cat, self.b_of_m));
        }
        Ok(())
    }
}

fn factorial(n: usize) -> Result<i128, InvariantError> {
    (1..=n as i128).try_fold(1i128, |acc, i| acc.checked_mul(i)).ok_or_else(|| InvariantError::Overflow(format!("{n}!")))
}

fn checked_pow(w: &Rat, n: usize) -> Result<Rat, InvariantError> {
    let overflow = || InvariantError::Overflow(format!("({})^{n}", fmt_rat(w)));
    let (mut p, mut q) = (1i128, 1i128);
    for _ in 0..n {
        p = p.checked_mul(*w.numer()).ok_or_else(overflow)?;
        q = q.checked_mul(*w.denom()).ok_or_else(overflow)?;
    }
    Ok(Rat::new(p, q))
}

/// Volume of the largest ball of capacity `width`: `widthⁿ / n!`.
pub fn gamma_capacity(width: &Rat, n: usize) -> Result<Rat, InvariantError> {
    if !width.is_positive() || n == 0 {
        return Err(InvariantError::Nonpositive(format!("width {} in dimension 2·{n}", fmt_rat(width))));
    }
    Ok(checked_pow(width, n)? / int(factorial(n)?))
}

fn floor_plus_one(x: Rat) -> Result<i64, InvariantError> {
    i64::try_from(x.floor().to_integer() + 1).map_err(|_| InvariantError::Overflow(format!("Γ = {}", fmt_rat(&x))))
}

/// `⌊volume / γ⌋ + 1`: the fewest balls of capacity `width` whose total
/// volume exceeds `volume`.
pub fn big_gamma(volume: &Rat, width: &Rat, n: usize) -> Result<i64, InvariantError> {
    if !volume.is_positive() {
        return Err(InvariantError::Nonpositive(format!("volume {}", fmt_rat(volume))));
    }
    floor_plus_one(*volume / gamma_capacity(width, n)?)
}

/// `Γ` over a width interval; the wide end gives the small count.
pub fn big_gamma_interval(volume: &Rat, width: &WidthInterval, n: usize) -> Result<IntInterval, InvariantError> {
    let hi = big_gamma(volume, &width.lo, n)?;
    let lo = match &width.hi {
        Some(w) => big_gamma(volume, w, n)?,
        None => 1,
    };
    Ok(IntInterval::new(lo, hi))
}

pub fn lambda_value(b: &IntInterval, gamma: &IntInterval) -> IntInterval {
    b.max(gamma)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SbKind {
    Exact,
    Range,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SbResult {
    pub kind: SbKind,
    pub lo: i64,
    pub hi: i64,
    /// Which rules fired, in order.
    pub notes: Vec<String>,
}

impl SbResult {
    pub fn interval(&self) -> IntInterval {
        IntInterval::new(self.lo, self.hi)
    }

    pub fn members(&self) -> Vec<i64> {
        (self.lo..=self.hi).collect()
    }
}

impl fmt::Display for SbResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SbKind::Exact => write!(f, "{}", self.lo),
            SbKind::Range => {
                let m: Vec<String> = self.members().iter().map(i64::to_string).collect();
                write!(f, "{{{}}}", m.join(","))
            }
        }
    }
}

/// Turn `λ` into what is known about `S_B`: `λ` itself once it reaches
/// `2n+1`, otherwise the range up to `2n+1`, cut by an explicit chart count
/// when there is one.
pub fn theorem1(lambda: &IntInterval, n: usize, upper: Option<i64>) -> Result<SbResult, InvariantError> {
    let top = 2 * n as i64 + 1;
    if lambda.lo < n as i64 + 1 {
        return Err(InvariantError::Inconsistent(format!("λ = {lambda} is below n+1 = {}", n + 1)));
    }
    let mut notes = Vec::new();
    let (lo, mut hi) = if lambda.lo >= top && lambda.is_exact() {
        notes.push(format!("λ = {} >= 2n+1 = {top}: S_B = λ", lambda.lo));
        (lambda.lo, lambda.lo)
    } else if lambda.hi < top {
        notes.push(format!("λ = {lambda} < 2n+1 = {top}: λ <= S_B <= 2n+1"));
        (lambda.lo, top)
    } else {
        notes.push(format!("λ = {lambda} straddles 2n+1 = {top}"));
        (lambda.lo, lambda.hi.max(top))
    };
    if let Some(u) = upper {
        if u < lo {
            return Err(InvariantError::Inconsistent(format!("cover by {u} charts but S_B >= {lo}")));
        }
        if u < hi {
            notes.push(format!("explicit cover by {u} charts"));
            hi = u;
        }
    }
    let kind = if lo == hi { SbKind::Exact } else { SbKind::Range };
    Ok(SbResult { kind, lo, hi, notes })
}

/// Category and ball-cover bounds from the topology flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CategoryBounds {
    pub cat: IntInterval,
    pub b: IntInterval,
    /// `B > cat` is possible only as `(cat, B) = (n+1, n+2)`.
    pub exception: Option<(i64, i64)>,
}

impl CategoryBounds {
    pub fn admissible(&self, cat: i64, b: i64) -> bool {
        self.cat.contains(cat) && self.b.contains(b) && (cat == b || self.exception == Some((cat, b)))
    }
}

pub fn proposition1(simply_connected: bool, omega_aspherical: bool, n: usize) -> Result<CategoryBounds, InvariantError> {
    let n = n as i64;
    if n < 1 {
        return Err(InvariantError::Flags("half dimension must be positive".into()));
    }
    if simply_connected && omega_aspherical {
        // π₂ ≅ H₂ by Hurewicz, so ω would vanish on H₂ and [ω]ⁿ = 0
        return Err(InvariantError::Flags("simply connected and ω-aspherical".into()));
    }
    Ok(if simply_connected {
        CategoryBounds {
            cat: IntInterval::exact(n + 1),
            b: IntInterval::exact(n + 1),
            exception: None,
        }
    } else if omega_aspherical {
        CategoryBounds {
            cat: IntInterval::exact(2 * n + 1),
            b: IntInterval::exact(2 * n + 1),
            exception: None,
        }
    } else {
        CategoryBounds {
            cat: IntInterval::new(n + 1, 2 * n + 1),
            b: IntInterval::new(n + 1, 2 * n + 1),
            exception: Some((n + 1, n + 2)),
        }
    })
}

/// `B` from a known category: equal to it unless `cat = n+1`, where
/// `n+2` is also possible.
pub fn b_from_cat(cat: &IntInterval, n: usize) -> IntInterval {
    let n = n as i64;
    let hi = if cat.lo == n + 1 { cat.hi.max(n + 2) } else { cat.hi };
    IntInterval::new(cat.lo, hi.min(2 * n + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SinghofBound {
    Exact(i64),
    AtMost(i64),
}

/// Ball covers of an `m`-manifold that is `p`-connected: `B = cat` once
/// `cat ≥ (m+p+4)/(2(p+1))`, otherwise `B` is at most the ceiling.
pub fn singhof_bound(m: i64, p: i64, cat: i64) -> SinghofBound {
    let threshold = Rat::new((m + p + 4) as i128, (2 * (p + 1)) as i128);
    if int(cat as i128) >= threshold {
        SinghofBound::Exact(cat)
    } else {
        SinghofBound::AtMost(threshold.ceil().to_integer() as i64)
    }
}

/// The equal-radii variant: same value when `λ ≥ 2n+1`, same range
/// otherwise with equality conditional on connected embedding spaces.
pub fn equal_ball_report(result: &SbResult, lambda_exact_and_large: bool) -> String {
    match result.kind {
        SbKind::Exact if lambda_exact_and_large => format!("S_B^= = {}", result.lo),
        SbKind::Exact => format!("S_B^= >= {}; S_B^= bound not implied", result.lo),
        SbKind::Range => format!(
            "S_B^= ∈ [{}, {}]; equality with S_B conditional on path-connected ball embedding spaces",
            result.lo, result.hi
        ),
    }
}

/// Everything the calculus derives from a descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Analysis {
    /// `γ` at the two ends of the width interval; `None` for an open end.
    #[serde(with = "serde_rat_opt")]
    pub gamma_lo: Option<Rat>,
    #[serde(with = "serde_rat_opt")]
    pub gamma_hi: Option<Rat>,
    #[serde(rename = "Gamma")]
    pub big_gamma: IntInterval,
    pub lambda: IntInterval,
    #[serde(rename = "SB")]
    pub sb: SbResult,
    pub equal_balls: String,
    pub provenance: Vec<String>,
}

pub fn analyze(d: &ManifoldDescriptor) -> Result<Analysis, InvariantError> {
    d.validate()?;
    let n = d.half_dim;
    let mut provenance = Vec::new();
    let big = big_gamma_interval(&d.volume, &d.gromov_width, n)?;
    provenance.push(format!("Γ = {big} from volume and width"));
    let lambda = lambda_value(&d.b_of_m, &big);
    provenance.push(format!("λ = max(B = {}, Γ = {big}) = {lambda}", d.b_of_m));
    let sb = theorem1(&lambda, n, d.ball_cover_upper)?;
    provenance.extend(sb.notes.iter().cloned());
    let large = lambda.is_exact() && lambda.lo > 2 * n as i64;
    Ok(Analysis {
        gamma_lo: Some(gamma_capacity(&d.gromov_width.lo, n)?),
        gamma_hi: d.gromov_width.hi.as_ref().map(|w| gamma_capacity(w, n)).transpose()?,
        big_gamma: big,
        lambda,
        equal_balls: equal_ball_report(&sb, large),
        sb,
        provenance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat;

    #[test]
    fn capacities() {
        assert_eq!(gamma_capacity(&int(1), 2).unwrap(), rat(1, 2));
        assert_eq!(gamma_capacity(&int(2), 1).unwrap(), int(2));
        assert_eq!(gamma_capacity(&int(1), 3).unwrap(), rat(1, 6));
        assert!(gamma_capacity(&int(0), 2).is_err());
    }

    #[test]
    fn volume_counts() {
        for n in 1..=6usize {
            let v = rat(1, factorial(n).unwrap());
            assert_eq!(big_gamma(&v, &int(1), n).unwrap(), 2);
        }
        for k in 1..=6 {
            assert_eq!(big_gamma(&int(k), &int(1), 2).unwrap(), 2 * k as i64 + 1);
        }
        assert_eq!(big_gamma(&rat(1, 3), &int(1), 2).unwrap(), 1);
    }

    #[test]
    fn lambda_is_the_interval_max() {
        let l = lambda_value(&IntInterval::exact(3), &IntInterval::exact(7));
        assert_eq!(l, IntInterval::exact(7));
        assert_eq!(lambda_value(&IntInterval::exact(4), &IntInterval::new(2, 3)), IntInterval::exact(4));
        assert_eq!(lambda_value(&IntInterval::new(3, 5), &IntInterval::exact(4)), IntInterval::new(4, 5));
    }

    #[test]
    fn case_split() {
        let r = theorem1(&IntInterval::exact(7), 2, None).unwrap();
        assert_eq!((r.kind, r.lo, r.hi), (SbKind::Exact, 7, 7));
        let r = theorem1(&IntInterval::exact(3), 2, None).unwrap();
        assert_eq!((r.kind, r.lo, r.hi), (SbKind::Range, 3, 5));
        let r = theorem1(&IntInterval::exact(15), 8, Some(15)).unwrap();
        assert_eq!((r.kind, r.lo, r.hi), (SbKind::Exact, 15, 15));
        assert!(theorem1(&IntInterval::exact(2), 2, None).is_err());
        assert!(theorem1(&IntInterval::exact(5), 2, Some(4)).is_err());
    }

    #[test]
    fn category_rules() {
        let c = proposition1(true, false, 3).unwrap();
        assert_eq!((c.cat, c.b), (IntInterval::exact(4), IntInterval::exact(4)));
        let c = proposition1(false, true, 1).unwrap();
        assert_eq!((c.cat, c.b), (IntInterval::exact(3), IntInterval::exact(3)));
        let c = proposition1(false, false, 2).unwrap();
        assert_eq!((c.cat, c.b), (IntInterval::new(3, 5), IntInterval::new(3, 5)));
        assert!(c.admissible(3, 4) && !c.admissible(4, 5) && c.admissible(4, 4));
        assert!(proposition1(true, true, 2).is_err());
        assert_eq!(b_from_cat(&IntInterval::exact(4), 2), IntInterval::exact(4));
        assert_eq!(b_from_cat(&IntInterval::exact(3), 2), IntInterval::new(3, 4));
    }

    #[test]
    fn singhof() {
        assert_eq!(singhof_bound(4, 1, 3), SinghofBound::Exact(3));
        assert_eq!(singhof_bound(8, 1, 5), SinghofBound::Exact(5));
        assert_eq!(singhof_bound(4, 0, 2), SinghofBound::AtMost(4));
    }

    #[test]
    fn equal_balls() {
        let r = theorem1(&IntInterval::exact(7), 2, None).unwrap();
        assert_eq!(equal_ball_report(&r, true), "S_B^= = 7");
        let r = theorem1(&IntInterval::exact(3), 2, None).unwrap();
        assert!(equal_ball_report(&r, false).starts_with("S_B^= ∈ [3, 5]"));
        let r = theorem1(&IntInterval::exact(4), 3, Some(4)).unwrap();
        assert!(equal_ball_report(&r, false).contains("not implied"));
    }

    #[test]
    fn descriptor_round_trip() {
        let d = ManifoldDescriptor {
            half_dim: 2,
            volume: int(3),
            gromov_width: WidthInterval::exact(int(1)),
            b_of_m: IntInterval::exact(3),
            cat: IntInterval::exact(3),
            cup_length: IntInterval::exact(2),
            simply_connected: true,
            omega_aspherical: false,
            ball_cover_upper: None,
            citations: Vec::new(),
        };
        let s = serde_json::to_string(&d).unwrap();
        assert!(s.contains(r#""volume":"3""#), "{s}");
        let back: ManifoldDescriptor = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
        let a = analyze(&d).unwrap();
        assert_eq!(a.sb.to_string(), "7");
    }
}
