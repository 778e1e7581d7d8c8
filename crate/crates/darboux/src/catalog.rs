//! Manifold families with known invariants. Each family becomes a
//! [`ManifoldDescriptor`]; the `S_B` values are then derived by the
//! invariants pipeline, never stored.
//!
//! Literature inputs are kept apart from derived values: every descriptor
//! carries a citation per quoted field.

use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{fmt_rat, int, rat, sqrt_floor, Rat};
use crate::invariants::{
    analyze, b_from_cat, proposition1, IntInterval, InvariantError, ManifoldDescriptor, SbKind, SbResult,
    WidthInterval,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("invalid family: {0}")]
    Invalid(String),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilySpec {
    /// Closed surface of genus `g` and area `a`.
    Surface {
        g: u32,
        #[serde(with = "crate::geometry::serde_rat")]
        a: Rat,
    },
    /// `Σ_g(a) × S²(b)`.
    TrivialBundle {
        g: u32,
        #[serde(with = "crate::geometry::serde_rat")]
        a: Rat,
        #[serde(with = "crate::geometry::serde_rat")]
        b: Rat,
    },
    /// The nontrivial `S²`-bundle over `Σ_g` with the form dual to `aF + bB`.
    NontrivialBundle {
        g: u32,
        #[serde(with = "crate::geometry::serde_rat")]
        a: Rat,
        #[serde(with = "crate::geometry::serde_rat")]
        b: Rat,
    },
    /// `Σ_g(a) × Σ_h(b)` with `g, h ≥ 1`.
    ProductSurfaces {
        g: u32,
        h: u32,
        #[serde(with = "crate::geometry::serde_rat")]
        a: Rat,
        #[serde(with = "crate::geometry::serde_rat")]
        b: Rat,
    },
    /// `CPⁿ` with the Fubini–Study form giving lines area 1.
    ProjectiveSpace { n: u32 },
    /// `k`-planes in `Cⁿ`, Kähler form dual to the generator of `H₂`.
    Grassmannian { k: u32, n: u32 },
}

/// Denominator for rational square-root brackets.
const SQRT_DEN: i128 = 1 << 20;

fn cite(out: &mut Vec<(String, String)>, field: &str, source: &str) {
    out.push((field.to_string(), source.to_string()));
}

fn binomial(n: u32, k: u32) -> i128 {
    (0..k as i128).fold(1, |acc, i| acc * (n as i128 - i) / (i + 1))
}

/// Exponent of the prime `q` in `m!`.
fn legendre(m: u32, q: u32) -> i64 {
    let (mut e, mut p) = (0i64, q as u64);
    while p <= m as u64 {
        e += (m as u64 / p) as i64;
        p *= q as u64;
    }
    e
}

/// Degree of the Plücker embedding of `G(k,n)`:
/// `(k-1)!⋯1!·(k(n-k))! / ((n-1)!⋯(n-k)!)`, evaluated by prime exponents so
/// no factorial is ever formed.
pub fn plucker_degree(k: u32, n: u32) -> Result<i128, CatalogError> {
    if k < 1 || 2 * k > n {
        return Err(CatalogError::Invalid(format!("need 1 <= k <= n/2, got k = {k}, n = {n}")));
    }
    let top = k * (n - k);
    let mut num: Vec<u32> = (1..k).collect();
    num.push(top);
    let den: Vec<u32> = (n - k..n).collect();
    let big = top.max(n);
    let mut out: i128 = 1;
    for q in (2..=big).filter(|&q| (2..q).take_while(|d| d * d <= q).all(|d| q % d != 0)) {
        let e: i64 = num.iter().map(|&m| legendre(m, q)).sum::<i64>() - den.iter().map(|&m| legendre(m, q)).sum::<i64>();
        if e < 0 {
            return Err(CatalogError::Invalid(format!("p_{{{k},{n}}} is not an integer at prime {q}")));
        }
        for _ in 0..e {
            out = out
                .checked_mul(q as i128)
                .ok_or_else(|| CatalogError::Invariant(InvariantError::Overflow(format!("p_{{{k},{n}}}"))))?;
        }
    }
    Ok(out)
}

fn factorial(n: u32) -> Result<i128, CatalogError> {
    (1..=n as i128)
        .try_fold(1i128, |acc, i| acc.checked_mul(i))
        .ok_or_else(|| CatalogError::Invariant(InvariantError::Overflow(format!("{n}!"))))
}

fn positive(name: &str, x: &Rat) -> Result<(), CatalogError> {
    if x.is_positive() {
        Ok(())
    } else {
        Err(CatalogError::Invalid(format!("{name} = {} must be positive", fmt_rat(x))))
    }
}

/// Rational bracket strictly inside `(√lo_sq, √hi_sq]`.
fn sqrt_bracket(lo_sq: &Rat, hi_sq: &Rat) -> Result<WidthInterval, CatalogError> {
    let lo = sqrt_floor(lo_sq, SQRT_DEN) + rat(1, SQRT_DEN);
    let hi = sqrt_floor(hi_sq, SQRT_DEN);
    if hi < lo {
        return Err(CatalogError::Invalid("areas too small for the width bracket".into()));
    }
    Ok(WidthInterval { lo, hi: Some(hi) })
}

/// Lower bound on the width of `Σ_1(t) × Σ_h(s)`: `t·(√(4s/t + 1) − 1)/2`.
fn torus_width(t: &Rat, s: &Rat) -> Rat {
    let root = sqrt_floor(&(int(4) * *s / *t + Rat::one()), SQRT_DEN);
    *t * (root - Rat::one()) / int(2)
}

/// Normalise to the representative with the conventions of each family.
fn normalize(spec: &FamilySpec) -> Result<FamilySpec, CatalogError> {
    use FamilySpec::*;
    Ok(match spec.clone() {
        Surface { g, a } => {
            positive("a", &a)?;
            Surface { g, a }
        }
        TrivialBundle { g, a, b } => {
            positive("a", &a)?;
            positive("b", &b)?;
            // S²(a) × S²(b) is symmetric in a and b
            if g == 0 && a < b {
                TrivialBundle { g, a: b, b: a }
            } else {
                TrivialBundle { g, a, b }
            }
        }
        NontrivialBundle { g, a, b } => {
            positive("a", &a)?;
            positive("b", &b)?;
            if g == 0 && a * int(2) <= b {
                return Err(CatalogError::Invalid(format!(
                    "the nontrivial bundle over S² needs a > b/2, got a = {}, b = {}",
                    fmt_rat(&a),
                    fmt_rat(&b)
                )));
            }
            NontrivialBundle { g, a, b }
        }
        ProductSurfaces { g, h, a, b } => {
            positive("a", &a)?;
            positive("b", &b)?;
            if g == 0 || h == 0 {
                return Err(CatalogError::Invalid("genus 0 factors are S²-bundles".into()));
            }
            ProductSurfaces { g, h, a, b }
        }
        ProjectiveSpace { n } => {
            if n == 0 {
                return Err(CatalogError::Invalid("CP^0 is a point".into()));
            }
            ProjectiveSpace { n }
        }
        Grassmannian { k, n } => {
            if k == 0 || k >= n {
                return Err(CatalogError::Invalid(format!("need 0 < k < n, got k = {k}, n = {n}")));
            }
            Grassmannian { k: k.min(n - k), n }
        }
    })
}

pub fn describe(spec: &FamilySpec) -> Result<ManifoldDescriptor, CatalogError> {
    use FamilySpec::*;
    let mut c = Vec::new();
    let d = match normalize(spec)? {
        Surface { g, a } => {
            let sc = g == 0;
            let cb = proposition1(sc, !sc, 1)?;
            cite(&mut c, "gromov_width", "discs of equal area are symplectomorphic (Greene–Shiohama)");
            cite(&mut c, "ball_cover_upper", "smooth disc covers are Darboux covers (Greene–Shiohama)");
            ManifoldDescriptor {
                half_dim: 1,
                volume: a,
                gromov_width: WidthInterval::exact(a),
                b_of_m: cb.b,
                cat: cb.cat,
                cup_length: IntInterval::exact(if sc { 1 } else { 2 }),
                simply_connected: sc,
                omega_aspherical: !sc,
                ball_cover_upper: Some(cb.b.hi),
                citations: c,
            }
        }
        TrivialBundle { g, a, b } | NontrivialBundle { g, a, b } => {
            let trivial = matches!(spec, TrivialBundle { .. });
            // both forms have volume ab: F² = B² = 0, F·B = 1 for the
            // nontrivial bundle
            let volume = a * b;
            let (cat, b_of_m, cl, sc) = if g == 0 {
                let cb = proposition1(true, false, 2)?;
                (cb.cat, cb.b, IntInterval::exact(2), true)
            } else {
                cite(
                    &mut c,
                    "cat",
                    if trivial {
                        "cat(X×Y) < cat X + cat Y (James)"
                    } else {
                        "cat <= 4 from a section (Singhof)"
                    },
                );
                let cat = IntInterval::exact(4);
                (cat, b_from_cat(&cat, 2), IntInterval::exact(3), false)
            };
            let width = if g == 0 || a * int(2) >= b {
                cite(
                    &mut c,
                    "gromov_width",
                    if g == 0 && trivial {
                        "Gromov nonsqueezing"
                    } else {
                        "Γ = ⌊max(1, 2a/b)⌋ + 1 (Biran; Schlenk)"
                    },
                );
                WidthInterval::exact(b)
            } else {
                // Γ = 2 puts γ in (ab/2, ab]
                cite(&mut c, "gromov_width", "Γ = 2 (Biran; Schlenk), bracketed rationally");
                sqrt_bracket(&volume, &(int(2) * volume))?
            };
            cite(&mut c, "volume", "½∫ω², intersection form on F, B");
            ManifoldDescriptor {
                half_dim: 2,
                volume,
                gromov_width: width,
                b_of_m,
                cat,
                cup_length: cl,
                simply_connected: sc,
                omega_aspherical: false,
                ball_cover_upper: None,
                citations: c,
            }
        }
        ProductSurfaces { g, h, a, b } => {
            let cb = proposition1(false, true, 2)?;
            let mut lo = a.min(b);
            cite(&mut c, "gromov_width.lo", "B⁴(min(a,b)) ⊂ B²(a)×B²(b) (Greene–Shiohama)");
            if g == 1 {
                lo = lo.max(torus_width(&a, &b));
            }
            if h == 1 {
                lo = lo.max(torus_width(&b, &a));
            }
            if g == 1 || h == 1 {
                cite(&mut c, "gromov_width.lo", "linear torus embedding (Jiang)");
            }
            let hi = sqrt_floor(&(int(2) * a * b), SQRT_DEN) + rat(1, SQRT_DEN);
            cite(&mut c, "gromov_width.hi", "ball volume at most the total volume");
            ManifoldDescriptor {
                half_dim: 2,
                volume: a * b,
                gromov_width: WidthInterval { lo, hi: Some(hi.max(lo)) },
                b_of_m: cb.b,
                cat: cb.cat,
                cup_length: IntInterval::exact(4),
                simply_connected: false,
                omega_aspherical: true,
                ball_cover_upper: None,
                citations: c,
            }
        }
        ProjectiveSpace { n } => {
            let cb = proposition1(true, false, n as usize)?;
            cite(&mut c, "gromov_width", "Γ = 2 with lines of area 1");
            cite(&mut c, "ball_cover_upper", "affine charts [z : √(1-|z|²)]");
            ManifoldDescriptor {
                half_dim: n as usize,
                volume: Rat::new(1, factorial(n)?),
                gromov_width: WidthInterval::exact(Rat::one()),
                b_of_m: cb.b,
                cat: cb.cat,
                cup_length: IntInterval::exact(n as i64),
                simply_connected: true,
                omega_aspherical: false,
                ball_cover_upper: Some(n as i64 + 1),
                citations: c,
            }
        }
        Grassmannian { k, n } => {
            let dim = k * (n - k);
            let cb = proposition1(true, false, dim as usize)?;
            cite(&mut c, "volume", "degree of the Plücker embedding (Fulton)");
            cite(&mut c, "gromov_width", "Gr = 1 (Karshon–Tolman; Lu)");
            let p = plucker_degree(k, n)?;
            let charts = binomial(n, k);
            // C(n,k) unit balls hold volume C(n,k)/dim!, so the chart count
            // can only bound S_B while it exceeds p
            let upper = if charts > p {
                cite(&mut c, "ball_cover_upper", "C(n,k) coordinate charts (Lu)");
                Some(charts as i64)
            } else {
                cite(&mut c, "ball_cover_upper", "C(n,k) charts below the volume count p+1; not applied");
                None
            };
            ManifoldDescriptor {
                half_dim: dim as usize,
                volume: Rat::new(p, factorial(dim)?),
                gromov_width: WidthInterval::exact(Rat::one()),
                b_of_m: cb.b,
                cat: cb.cat,
                cup_length: IntInterval::exact(dim as i64),
                simply_connected: true,
                omega_aspherical: false,
                ball_cover_upper: upper,
                citations: c,
            }
        }
    };
    d.validate()?;
    Ok(d)
}

pub fn sb_of(spec: &FamilySpec) -> Result<SbResult, CatalogError> {
    let mut sb = analyze(&describe(spec)?)?.sb;
    if let FamilySpec::ProductSurfaces { .. } = spec {
        if sb.kind == SbKind::Range {
            sb.notes.push("no sharper literature bound; growth like C(h)·r/log²r is known only asymptotically".into());
        }
    }
    if let FamilySpec::ProjectiveSpace { n: 2 } = spec {
        sb.notes.push("every symplectic form on CP² is a multiple of this one (Taubes)".into());
    }
    Ok(sb)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Figure {
    TrivialG0,
    TrivialG1,
    NontrivialG0,
    NontrivialG1,
}

impl std::str::FromStr for Figure {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "trivial-g0" => Figure::TrivialG0,
            "trivial-g1" => Figure::TrivialG1,
            "nontrivial-g0" => Figure::NontrivialG0,
            "nontrivial-g1" => Figure::NontrivialG1,
            _ => return Err(CatalogError::Invalid(format!("unknown figure {s}"))),
        })
    }
}

impl Figure {
    pub fn spec(self, ratio: Rat) -> FamilySpec {
        let (a, b) = (ratio, Rat::one());
        match self {
            Figure::TrivialG0 => FamilySpec::TrivialBundle { g: 0, a, b },
            Figure::TrivialG1 => FamilySpec::TrivialBundle { g: 1, a, b },
            Figure::NontrivialG0 => FamilySpec::NontrivialBundle { g: 0, a, b },
            Figure::NontrivialG1 => FamilySpec::NontrivialBundle { g: 1, a, b },
        }
    }
}

/// CSV step table `ratio,sb_min,sb_max,exact_flag` over the ratio grid `a/b`.
pub fn figure_table(figure: Figure, grid: &[Rat]) -> Result<String, CatalogError> {
    let mut out = String::from("ratio,sb_min,sb_max,exact_flag\n");
    for r in grid {
        let sb = sb_of(&figure.spec(*r))?;
        out.push_str(&format!("{},{},{},{}\n", fmt_rat(r), sb.lo, sb.hi, sb.kind == SbKind::Exact));
    }
    Ok(out)
}

/// Which affine chart of `CPⁿ` holds `[u]`: the first coordinate with
/// `|u_i|² ≥ |u|²/(n+1)`. `None` for the zero vector.
pub fn cpn_chart_of(u: &[(f64, f64)]) -> Option<usize> {
    let norm: f64 = u.iter().map(|(x, y)| x * x + y * y).sum();
    if norm == 0.0 || !norm.is_finite() {
        return None;
    }
    let bound = norm / u.len() as f64;
    u.iter().position(|(x, y)| x * x + y * y >= bound)
}

/// Ball point `z` with `f_i(z) = [u]`, and the residual of the round trip.
fn cpn_preimage(u: &[(f64, f64)], i: usize) -> (Vec<(f64, f64)>, f64) {
    let norm = u.iter().map(|(x, y)| x * x + y * y).sum::<f64>().sqrt();
    let (ux, uy) = u[i];
    let m = (ux * ux + uy * uy).sqrt();
    // rotate so that u_i is real and positive, then scale to the unit sphere
    let (cx, cy) = (ux / m, -uy / m);
    let v: Vec<(f64, f64)> = u.iter().map(|&(x, y)| ((x * cx - y * cy) / norm, (x * cy + y * cx) / norm)).collect();
    let z: Vec<(f64, f64)> = v.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| *p).collect();
    let zz: f64 = z.iter().map(|(x, y)| x * x + y * y).sum();
    let mut back = z.clone();
    back.insert(i, ((1.0 - zz).max(0.0).sqrt(), 0.0));
    let err = back.iter().zip(&v).map(|(a, b)| (a.0 - b.0).abs() + (a.1 - b.1).abs()).fold(0.0, f64::max);
    (z, if zz < 1.0 { err } else { f64::INFINITY })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CpnCoverReport {
    pub n: u32,
    pub charts: u32,
    pub samples: usize,
    pub covered: bool,
    pub max_residual: f64,
}

/// Sample points of `CPⁿ` and check each lies in the image of one of the
/// `n+1` standard ball charts.
pub fn cpn_chart_cover_check(n: u32, samples: usize, seed: u64) -> CpnCoverReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut covered = samples > 0;
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let u: Vec<(f64, f64)> = (0..=n).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        match cpn_chart_of(&u) {
            Some(i) => worst = worst.max(cpn_preimage(&u, i).1),
            None => covered = false,
        }
    }
    CpnCoverReport {
        n,
        charts: n + 1,
        samples,
        covered: covered && worst < 1e-9,
        max_residual: worst,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plucker_small() {
        assert_eq!(plucker_degree(2, 4).unwrap(), 2);
        assert_eq!(plucker_degree(2, 5).unwrap(), 5);
        assert_eq!(plucker_degree(2, 6).unwrap(), 14);
        assert_eq!(plucker_degree(3, 6).unwrap(), 42);
        assert_eq!(plucker_degree(1, 7).unwrap(), 1);
        assert!(plucker_degree(4, 6).is_err());
    }

    #[test]
    fn surfaces() {
        let d = describe(&FamilySpec::Surface { g: 2, a: int(5) }).unwrap();
        assert_eq!(d.volume, int(5));
        assert_eq!(d.gromov_width, WidthInterval::exact(int(5)));
        assert!(d.omega_aspherical);
        assert_eq!(sb_of(&FamilySpec::Surface { g: 0, a: int(3) }).unwrap().to_string(), "2");
        assert_eq!(sb_of(&FamilySpec::Surface { g: 4, a: rat(1, 7) }).unwrap().to_string(), "3");
    }

    #[test]
    fn grassmannian_descriptor() {
        let d = describe(&FamilySpec::Grassmannian { k: 2, n: 5 }).unwrap();
        assert_eq!(d.volume, rat(5, 720));
        assert_eq!(d.b_of_m, IntInterval::exact(7));
        assert_eq!(d.ball_cover_upper, Some(10));
        assert_eq!(sb_of(&FamilySpec::Grassmannian { k: 3, n: 5 }).unwrap().to_string(), "{7,8,9,10}");
    }

    #[test]
    fn thin_bundles_use_a_bracket() {
        let s = FamilySpec::TrivialBundle { g: 2, a: rat(1, 5), b: int(1) };
        let d = describe(&s).unwrap();
        assert!(d.gromov_width.hi.is_some());
        assert_eq!(analyze(&d).unwrap().big_gamma, IntInterval::exact(2));
        assert_eq!(sb_of(&s).unwrap().to_string(), "{4,5}");
    }

    #[test]
    fn invalid_specs() {
        assert!(describe(&FamilySpec::NontrivialBundle { g: 0, a: int(1), b: int(2) }).is_err());
        assert!(describe(&FamilySpec::ProductSurfaces { g: 0, h: 1, a: int(1), b: int(1) }).is_err());
        assert!(describe(&FamilySpec::Surface { g: 0, a: int(0) }).is_err());
    }

    #[test]
    fn cpn_charts() {
        assert_eq!(cpn_chart_of(&[(0.0, 0.0), (0.0, 0.0)]), None);
        assert_eq!(cpn_chart_of(&[(0.0, 0.0), (0.0, 2.0)]), Some(1));
        let r = cpn_chart_cover_check(1, 100, 7);
        assert!(r.covered && r.charts == 2);
    }

    #[test]
    fn spec_json() {
        let s: FamilySpec = serde_json::from_str(r#"{"family":"trivial-bundle","g":0,"a":"3","b":"1"}"#).unwrap();
        assert_eq!(sb_of(&s).unwrap().to_string(), "7");
    }
}
