//! Randomized property suites shared by `properties` (one test per suite)
//! and `acceptance` (criterion 8 runs them all).

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use darboux::catalog::{describe, plucker_degree, sb_of, FamilySpec};
use darboux::geometry::{
    box_distance_sq, complement_components, int, neighborhood, rat, Aabb, Point, Rat, RectilinearRegion,
};
use darboux::hamiltonian::{build_displacement, translate_flow, Shear, TranslationField};
use darboux::invariants::{
    analyze, big_gamma, proposition1, theorem1, IntInterval, SbKind,
};
use darboux::lattice_cover::{build_cover, enumerate_cubes, period_window, verify_covering_with, verify_gap_with};
use darboux::transport::{plan_scenario, ChartSpec, Scenario, TargetSpec};
use darboux::Exec;

pub const CASES: u32 = 1000;
const SEED: [u8; 32] = *b"darboux-chart-cover-fixed-seed!!";

pub type SuiteResult = Result<(), String>;

pub fn runner() -> TestRunner {
    let config = Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED))
}

fn report<T: std::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<T>>) -> SuiteResult {
    r.map_err(|e| e.to_string())
}

fn scaled(b: &Aabb, d: &Rat) -> Aabb {
    Aabb::new(b.lo().scale(d), b.hi().scale(d)).unwrap()
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-24i128..=24, 1i128..=6).prop_map(|(p, q)| rat(p, q))
}

fn pos_rat() -> impl Strategy<Value = Rat> {
    (1i128..=40, 1i128..=8).prop_map(|(p, q)| rat(p, q))
}

fn boxes(dim: usize) -> impl Strategy<Value = Aabb> {
    (prop::collection::vec(small_rat(), dim), prop::collection::vec(pos_rat(), dim)).prop_map(|(lo, w)| {
        let hi: Vec<Rat> = lo.iter().zip(&w).map(|(a, b)| a + b).collect();
        Aabb::new(Point::new(lo).unwrap(), Point::new(hi).unwrap()).unwrap()
    })
}

pub fn plucker_by_factorials(k: u128, n: u128) -> u128 {
    let fact = |m: u128| (1..=m).product::<u128>();
    let num: u128 = (1..k).map(fact).product::<u128>() * fact(k * (n - k));
    let den: u128 = (n - k..n).map(fact).product();
    assert_eq!(num % den, 0, "p({k},{n}) not integral");
    num / den
}

/// Standard Young tableaux of the `k × (n-k)` rectangle, counted by a
/// row-profile dynamic program rather than any closed formula.
pub fn syt_rectangle(k: usize, cols: usize) -> u128 {
    use std::collections::HashMap;
    let mut layer: HashMap<Vec<usize>, u128> = HashMap::from([(vec![0; k], 1)]);
    for _ in 0..k * cols {
        let mut next: HashMap<Vec<usize>, u128> = HashMap::new();
        for (shape, count) in layer {
            for r in 0..k {
                let fits = shape[r] < cols && (r == 0 || shape[r - 1] > shape[r]);
                if fits {
                    let mut s = shape.clone();
                    s[r] += 1;
                    *next.entry(s).or_default() += count;
                }
            }
        }
        layer = next;
    }
    layer.values().sum()
}

// ---- geometry

pub fn geometry_distance() -> SuiteResult {
    let strat = (0usize..2).prop_flat_map(|h| (boxes(2 * h + 2), boxes(2 * h + 2)));
    report(runner().run(&strat, |(a, b)| {
        let ab = box_distance_sq(&a, &b).unwrap();
        prop_assert_eq!(ab, box_distance_sq(&b, &a).unwrap());
        prop_assert_eq!(ab == int(0), a.intersects(&b));
        prop_assert!(ab >= int(0));
        Ok(())
    }))
}

pub fn geometry_neighborhood() -> SuiteResult {
    let strat = (boxes(4), (0i128..=12, 1i128..=5));
    report(runner().run(&strat, |(b, (p, q))| {
        let nu = rat(p, q);
        let g = neighborhood(&b, &nu).unwrap();
        for m in 0..4 {
            prop_assert_eq!(g.width(m), b.width(m) + nu * int(2));
        }
        prop_assert!(g.contains(&b));
        Ok(())
    }))
}

pub fn geometry_complement() -> SuiteResult {
    let cell = (0i128..6, 0i128..6, 1i128..=3, 1i128..=3)
        .prop_map(|(x, y, w, h)| Aabb::rect(int(x), int(y), int((x + w).min(6)), int((y + h).min(6))).unwrap());
    let strat = prop::collection::vec(cell, 0..8);
    report(runner().run(&strat, |cells| {
        let universe = Aabb::rect(int(0), int(0), int(6), int(6)).unwrap();
        let region = RectilinearRegion::union_of(&cells);
        let comps = complement_components(&region, &universe).unwrap();
        let total: Rat = comps.iter().map(|c| c.region.area()).sum::<Rat>() + region.area();
        prop_assert_eq!(total, universe.volume());
        for (i, a) in comps.iter().enumerate() {
            prop_assert!(!a.region.overlaps(&region));
            for b in &comps[i + 1..] {
                prop_assert!(!a.region.overlaps(&b.region));
            }
        }
        // a piece is unbounded exactly when it reaches the universe boundary
        for c in &comps {
            let inner = Aabb::rect(rat(1, 1000), rat(1, 1000), rat(5999, 1000), rat(5999, 1000)).unwrap();
            let touches = c.region.cells().iter().any(|b| !inner.contains(b));
            prop_assert_eq!(touches, !c.bounded);
        }
        Ok(())
    }))
}

// ---- lattice cover

fn cover_case() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=2).prop_flat_map(|n| (Just(n), 2 * n + 1..=2 * n + 4))
}

pub fn lattice_translation() -> SuiteResult {
    let strat = cover_case().prop_flat_map(|(n, k)| {
        let dim = 2 * n;
        (
            Just((n, k)),
            1..=k,
            prop::collection::vec((-6i128..6, 1i128..=4), dim),
            prop::collection::vec(-3i64..=3, dim),
            (1i128..=3, 1i128..=4),
        )
    });
    report(runner().run(&strat, |((n, k), j, win, w, (p, q))| {
        let cover = build_cover(n, k).unwrap();
        let d = rat(p, q);
        let bounds: Vec<(Rat, Rat)> = win.iter().map(|&(lo, len)| (int(lo), int(lo + len))).collect();
        let window = Aabb::from_bounds(&bounds).unwrap();
        let shift = Point::new(cover.matrix.apply(&w).into_iter().map(|c| c * d).collect()).unwrap();
        let base = enumerate_cubes(&cover, j, &scaled(&window, &d), &d).unwrap();
        let moved = enumerate_cubes(&cover, j, &scaled(&window, &d).translate(&shift), &d).unwrap();
        prop_assert_eq!(base.len(), moved.len());
        for (a, b) in base.iter().zip(&moved) {
            let v: Vec<i64> = a.index.iter().zip(&w).map(|(x, y)| x + y).collect();
            prop_assert_eq!(&v, &b.index);
            prop_assert_eq!(a.anchor.add(&shift), b.anchor.clone());
        }
        Ok(())
    }))
}

pub fn lattice_scale() -> SuiteResult {
    let strat = cover_case().prop_flat_map(|(n, k)| {
        (
            Just((n, k)),
            1..=k,
            prop::collection::vec((-8i128..8, 1i128..=5), 2 * n),
            (1i128..=5, 1i128..=7),
        )
    });
    report(runner().run(&strat, |((n, k), j, win, (p, q))| {
        let cover = build_cover(n, k).unwrap();
        let d = rat(p, q);
        let one = Rat::from_integer(1);
        let bounds: Vec<(Rat, Rat)> = win.iter().map(|&(lo, len)| (int(lo), int(lo + len))).collect();
        let window = Aabb::from_bounds(&bounds).unwrap();
        let unit = enumerate_cubes(&cover, j, &window, &one).unwrap();
        let at_d = enumerate_cubes(&cover, j, &scaled(&window, &d), &d).unwrap();
        prop_assert_eq!(unit.len(), at_d.len());
        for (a, b) in unit.iter().zip(&at_d) {
            prop_assert_eq!(&a.index, &b.index);
            prop_assert_eq!(a.anchor.scale(&d), b.anchor.clone());
        }
        if n == 1 && unit.len() >= 2 {
            let g1 = verify_gap_with(&cover, j, &window, &one, Exec::Sequential);
            let gd = verify_gap_with(&cover, j, &scaled(&window, &d), &d, Exec::Sequential);
            if let (Ok(g1), Ok(gd)) = (g1, gd) {
                prop_assert_eq!(g1.min_gap_sq * d * d, gd.min_gap_sq);
            }
        }
        Ok(())
    }))
}

/// Gap and covering on four-period windows for every `2n+1 ≤ k ≤ 2n+4`,
/// `n ∈ {1, 2}`. Deterministic: the family is finite.
pub fn lattice_gap_and_cover() -> SuiteResult {
    for n in 1..=2 {
        for k in 2 * n + 1..=2 * n + 4 {
            let cover = build_cover(n, k).map_err(|e| e.to_string())?;
            let one = Rat::from_integer(1);
            let window = period_window(&cover, 4, &one);
            for j in 1..=k {
                let r = verify_gap_with(&cover, j, &window, &one, Exec::Parallel).map_err(|e| e.to_string())?;
                if !r.pass {
                    return Err(format!("gap fails for (n={n}, k={k}, j={j}): {:?}", r.min_gap_sq));
                }
            }
            let c = verify_covering_with(&cover, &window, &one, Exec::Parallel).map_err(|e| e.to_string())?;
            if !c.covered || c.interior_overlap_pairs != 0 {
                return Err(format!("cover fails for (n={n}, k={k}): {c:?}"));
            }
        }
    }
    Ok(())
}

// ---- transport

fn small_scenario() -> impl Strategy<Value = Scenario> {
    (12i128..=16, 12i128..=16, -2i128..=2, -2i128..=2, prop_oneof![Just(8i128), Just(10), Just(12)], 3usize..=4)
        .prop_map(|(w, h, cx, cy, den, k)| Scenario {
            name: "random".into(),
            k,
            eps: rat(1, 10),
            charts: vec![ChartSpec {
                region: RectilinearRegion::from_box(Aabb::rect(int(0), int(0), rat(w, 16), rat(h, 16)).unwrap()),
                core: None,
                parent: None,
                gate: None,
                scale: rat(1, den),
                nu: None,
            }],
            ball_center: Point::xy(rat(w, 32) + rat(cx, 64), rat(h, 32) + rat(cy, 64)),
            target: TargetSpec::Disc,
            retry_bound: 4,
            disjoint_cores: Vec::new(),
        })
}

pub fn transport_plans() -> SuiteResult {
    report(runner().run(&small_scenario(), |s| {
        let run = match plan_scenario(&s, Exec::Sequential) {
            Ok(r) => r,
            // an honest refusal is allowed; a wrong plan is not
            Err(e) => {
                prop_assert!(e.to_string().contains("capacity"), "unexpected error {}", e);
                return Ok(());
            }
        };
        prop_assert_eq!(run.plans.len(), s.k);
        for (plan, rep) in run.plans.iter().zip(&run.reports) {
            prop_assert!(rep.valid, "violations {:?}", rep.violations);
            prop_assert!(rep.final_containment && rep.area_preserved);
            prop_assert!(!rep.violations.iter().any(|v| v.kind == "tree order"));
            for (a, t) in plan.stats.packed_area.iter().zip(&plan.stats.target_areas) {
                prop_assert!(a < t);
            }
            for m in &plan.moves {
                let o = &plan.objects.iter().find(|o| o.id == m.object).expect("moved object exists").body;
                prop_assert_eq!(o.translate(&m.translation).area(), o.area());
            }
        }
        for dec in &run.decompositions {
            for (i, a) in dec.saturated.iter().enumerate() {
                for b in &dec.saturated[i + 1..] {
                    prop_assert!(!a.overlaps(b));
                }
            }
        }
        // points at distance >= 2d from the boundary lie in a kept cube
        let chart = s.charts[0].region.bbox().unwrap();
        let d = run.scales[0];
        let (w, h) = (chart.width(0), chart.width(1));
        let bound = w * h - (w - int(4) * d) * (h - int(4) * d);
        prop_assert!(run.residual <= bound, "residual {} above {}", run.residual, bound);
        let union = RectilinearRegion::union_of(&run.cubes.cubes.iter().map(|c| c.bbox.clone()).collect::<Vec<_>>());
        prop_assert_eq!(run.residual, w * h - union.area());
        Ok(())
    }))
}

// ---- hamiltonian

pub fn flow_translates_k() -> SuiteResult {
    let strat = (
        (-4i128..4, -4i128..4, 1i128..=4, 1i128..=4),
        (-6i128..=6, -6i128..=6),
        (0i128..=16, 0i128..=16),
        (1i128..=4),
    );
    report(runner().run(&strat, |((x, y, w, h), (qx, qy), (s, t), margin)| {
        let k = Aabb::rect(rat(x, 2), rat(y, 2), rat(x + w, 2), rat(y + h, 2)).unwrap();
        let q = Point::xy(rat(qx, 2), rat(qy, 2));
        let field = TranslationField::new(&k, &q, rat(margin, 2)).unwrap();
        let z = [
            (x as f64 + w as f64 * s as f64 / 16.0) / 2.0,
            (y as f64 + h as f64 * t as f64 / 16.0) / 2.0,
        ];
        let p = translate_flow(&field, &z, 1000);
        prop_assert!((p[0] - z[0] - qx as f64 / 2.0).abs() < 1e-6);
        prop_assert!((p[1] - z[1] - qy as f64 / 2.0).abs() < 1e-6);
        Ok(())
    }))
}

pub fn flow_identity_off_support() -> SuiteResult {
    let strat = ((-3i128..3, -3i128..3, 1i128..=3, 1i128..=3), (-4i128..=4, -4i128..=4), (-400i32..400, -400i32..400));
    report(runner().run(&strat, |((x, y, w, h), (qx, qy), (a, b))| {
        let k = Aabb::rect(int(x), int(y), int(x + w), int(y + h)).unwrap();
        let field = TranslationField::new(&k, &Point::xy(int(qx), int(qy)), rat(1, 2)).unwrap();
        let z = [a as f64 / 37.0, b as f64 / 41.0];
        let (lo, hi) = field.support.to_f64();
        let outside = (0..2).any(|m| z[m] <= lo[m] || z[m] >= hi[m]);
        if outside {
            prop_assert_eq!(translate_flow(&field, &z, 1000), z.to_vec());
        }
        Ok(())
    }))
}

/// Exact vertical columns of the open interior of `region` over `x`.
fn column(region: &RectilinearRegion, x: &Rat) -> Vec<(Rat, Rat)> {
    region
        .cells()
        .iter()
        .filter(|c| c.lo().at(0) < x && x < c.hi().at(0))
        .map(|c| (*c.lo().at(1), *c.hi().at(1)))
        .collect()
}

pub fn displacement_exact() -> SuiteResult {
    let strat = (1usize..=3, 3i128..=8, 6i128..=14, 2i128..=6, prop::collection::vec((0i128..1000, 1i128..=997), 8));
    report(runner().run(&strat, |(k, dq, delta_q, nu_q, xs)| {
        let d = rat(2, dq);
        let delta = d / int(delta_q);
        let nu = delta / int(2 * nu_q + 1);
        let (g, rep) = build_displacement(k, d, delta, nu, rat(1, 2), rat(1, 10), Shear::Ridge).unwrap();
        prop_assert!(rep.displaced && rep.shear_ok);
        prop_assert_eq!(g.sheared_area(&g.u_over), g.u_over.area());
        let u = &g.u_over;
        let bb = u.bbox().unwrap();
        let mut probes: Vec<Rat> = u.cells().iter().flat_map(|c| [*c.lo().at(0), *c.hi().at(0)]).collect();
        probes.extend(g.ridge.breaks());
        probes.sort();
        probes.dedup();
        let mut samples: Vec<Rat> = probes.windows(2).map(|w| (w[0] + w[1]) / int(2)).collect();
        let span = bb.width(0);
        samples.extend(xs.iter().map(|&(p, q)| *bb.lo().at(0) + span * rat(p % q, q)));
        for x in samples {
            let f = g.ridge.value(&x);
            let col = column(u, &x);
            for &(lo, hi) in &col {
                for &(lo2, hi2) in &col {
                    prop_assert!(hi - f <= lo2 || lo - f >= hi2, "overlap over x = {}", x);
                }
            }
        }
        Ok(())
    }))
}

// ---- invariants

pub fn gamma_monotone() -> SuiteResult {
    let strat = (1usize..=4, pos_rat(), pos_rat(), pos_rat(), pos_rat());
    report(runner().run(&strat, |(n, v1, v2, w1, w2)| {
        let (vl, vh) = (v1.min(v2), v1.max(v2));
        let (wl, wh) = (w1.min(w2), w1.max(w2));
        prop_assert!(big_gamma(&vl, &wh, n).unwrap() <= big_gamma(&vl, &wl, n).unwrap());
        prop_assert!(big_gamma(&vl, &wl, n).unwrap() <= big_gamma(&vh, &wl, n).unwrap());
        Ok(())
    }))
}

pub fn gamma_scaling() -> SuiteResult {
    let strat = (1usize..=3, pos_rat(), pos_rat(), (1i128..=9, 1i128..=9));
    report(runner().run(&strat, |(n, v, w, (p, q))| {
        let t = rat(p, q);
        let tn = (0..n).fold(Rat::from_integer(1), |acc, _| acc * t);
        prop_assert_eq!(big_gamma(&(tn * v), &(t * w), n).unwrap(), big_gamma(&v, &w, n).unwrap());
        Ok(())
    }))
}

pub fn theorem1_bounds() -> SuiteResult {
    let strat = (1usize..=6).prop_flat_map(|n| {
        let lo = n as i64 + 1;
        (Just(n), lo..=3 * n as i64 + 4, 0i64..=4, prop::option::of(0i64..=8))
    });
    report(runner().run(&strat, |(n, lo, extra, up)| {
        let lambda = IntInterval::new(lo, lo + extra);
        let upper = up.map(|u| lo + u);
        let r = theorem1(&lambda, n, upper).unwrap();
        let top = 2 * n as i64 + 1;
        prop_assert!((n as i64) < r.lo && r.lo <= r.hi);
        prop_assert!(r.hi <= lambda.hi.max(top));
        if let Some(u) = upper {
            prop_assert!(r.hi <= u);
        }
        if lambda.is_exact() && lambda.lo >= top {
            prop_assert_eq!(r.kind, SbKind::Exact);
            prop_assert_eq!(r.lo, lambda.lo);
        }
        Ok(())
    }))
}

pub fn proposition1_order() -> SuiteResult {
    let strat = (any::<bool>(), any::<bool>(), 1usize..=8);
    report(runner().run(&strat, |(sc, asph, n)| {
        match proposition1(sc, asph, n) {
            Err(_) => prop_assert!(sc && asph),
            Ok(c) => {
                let top = 2 * n as i64 + 1;
                prop_assert!(c.cat.hi <= c.b.hi && c.b.hi <= top);
                prop_assert!(c.cat.lo <= c.b.lo && c.cat.lo > n as i64);
                for cat in c.cat.lo..=c.cat.hi {
                    for b in c.b.lo..=c.b.hi {
                        if c.admissible(cat, b) {
                            prop_assert!(cat <= b);
                        }
                    }
                }
            }
        }
        Ok(())
    }))
}

// ---- catalog

pub fn plucker_exhaustive() -> SuiteResult {
    for n in 2..=12u32 {
        for k in 1..=n / 2 {
            let p = plucker_degree(k, n).map_err(|e| e.to_string())?;
            let oracle = syt_rectangle(k as usize, (n - k) as usize);
            if p as u128 != oracle {
                return Err(format!("p({k},{n}) = {p}, tableaux count {oracle}"));
            }
        }
    }
    Ok(())
}

pub fn grassmannian_consistency() -> SuiteResult {
    for n in 6..=12u32 {
        for k in 3..=n / 2 {
            let spec = FamilySpec::Grassmannian { k, n };
            // the volume p/(k(n-k))! needs the factorial in i128
            if k * (n - k) > 33 {
                if sb_of(&spec).is_ok() {
                    return Err(format!("G({k},{n}) should report overflow"));
                }
                continue;
            }
            let p = plucker_degree(k, n).map_err(|e| e.to_string())?;
            let sb = sb_of(&spec).map_err(|e| e.to_string())?;
            let a = analyze(&describe(&spec).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            let n2 = (k * (n - k)) as i64;
            if sb.kind != SbKind::Exact || sb.lo as i128 != p + 1 || a.lambda.lo < 2 * n2 + 1 {
                return Err(format!("G({k},{n}): SB {sb}, p = {p}, λ = {}", a.lambda));
            }
        }
    }
    for k in 2..=4i128 {
        let sb = sb_of(&FamilySpec::TrivialBundle { g: 0, a: int(k), b: int(1) }).map_err(|e| e.to_string())?;
        if sb.kind != SbKind::Exact || sb.lo as i128 != 2 * k + 1 {
            return Err(format!("S2(1)xS2({k}): SB {sb}"));
        }
    }
    Ok(())
}

pub fn pipeline_honesty() -> SuiteResult {
    let strat = ((1i128..=30, 1i128..=6), (2i128..=40, 1i128..=8));
    report(runner().run(&strat, |((bp, bq), (rp, rq))| {
        let b = rat(bp, bq);
        let ratio = rat(rp, rq).max(int(2));
        let a = b * ratio;
        let sb = sb_of(&FamilySpec::TrivialBundle { g: 0, a, b }).unwrap();
        prop_assert_eq!(sb.kind, SbKind::Exact);
        prop_assert_eq!(sb.lo, big_gamma(&(a * b), &b, 2).unwrap());
        Ok(())
    }))
}

fn family() -> impl Strategy<Value = FamilySpec> {
    let r = pos_rat;
    prop_oneof![
        (0u32..=6, r()).prop_map(|(g, a)| FamilySpec::Surface { g, a }),
        (0u32..=3, r(), r()).prop_map(|(g, a, b)| FamilySpec::TrivialBundle { g, a, b }),
        (0u32..=3, r(), r()).prop_map(|(g, a, b)| FamilySpec::NontrivialBundle { g, a, b }),
        (1u32..=3, 1u32..=3, r(), r()).prop_map(|(g, h, a, b)| FamilySpec::ProductSurfaces { g, h, a, b }),
        (1u32..=8).prop_map(|n| FamilySpec::ProjectiveSpace { n }),
        (4u32..=12).prop_flat_map(|n| (1..=n / 2).prop_map(move |k| FamilySpec::Grassmannian { k, n })),
    ]
}

/// Every catalog answer lies in `[n+1, max(λ.hi, 2n+1)]`.
pub fn catalog_ranges() -> SuiteResult {
    report(runner().run(&family(), |spec| {
        let desc = match describe(&spec) {
            Ok(d) => d,
            Err(_) => return Ok(()),
        };
        let a = analyze(&desc).unwrap();
        let n = desc.half_dim as i64;
        prop_assert!(a.sb.lo > n);
        prop_assert!(a.sb.hi <= a.lambda.hi.max(2 * n + 1));
        let sb = sb_of(&spec).unwrap();
        prop_assert_eq!((a.sb.kind, a.sb.lo, a.sb.hi), (sb.kind, sb.lo, sb.hi));
        Ok(())
    }))
}

pub fn run_all_suites() -> Vec<(&'static str, SuiteResult)> {
    let suites: [(&'static str, fn() -> SuiteResult); 18] = [
        ("geometry_distance", geometry_distance),
        ("geometry_neighborhood", geometry_neighborhood),
        ("geometry_complement", geometry_complement),
        ("lattice_translation", lattice_translation),
        ("lattice_scale", lattice_scale),
        ("lattice_gap_and_cover", lattice_gap_and_cover),
        ("transport_plans", transport_plans),
        ("flow_translates_k", flow_translates_k),
        ("flow_identity_off_support", flow_identity_off_support),
        ("displacement_exact", displacement_exact),
        ("gamma_monotone", gamma_monotone),
        ("gamma_scaling", gamma_scaling),
        ("theorem1_bounds", theorem1_bounds),
        ("proposition1_order", proposition1_order),
        ("plucker_exhaustive", plucker_exhaustive),
        ("grassmannian_consistency", grassmannian_consistency),
        ("pipeline_honesty", pipeline_honesty),
        ("catalog_ranges", catalog_ranges),
    ];
    suites.iter().map(|(name, f)| (*name, f())).collect()
}
