//! Ready-made scenarios used by tests, the CLI and the benches.

use crate::geometry::{int, rat, Aabb, Point, Rat, RectilinearRegion};

use super::{ChartSpec, Scenario, TargetSpec};

fn square(lo: Rat, hi: Rat) -> Aabb {
    Aabb::rect(lo, lo, hi, hi).expect("proper square")
}

/// `V = [0,1]^2`, `k = 3`, ball centred in the middle.
pub fn single_chart(d: Rat, eps: Rat) -> Scenario {
    Scenario {
        name: "single-chart".into(),
        k: 3,
        eps,
        charts: vec![ChartSpec {
            region: RectilinearRegion::from_box(square(int(0), int(1))),
            core: None,
            parent: None,
            gate: None,
            scale: d,
            nu: None,
        }],
        ball_center: Point::xy(rat(1, 2), rat(1, 2)),
        target: TargetSpec::Disc,
        retry_bound: 4,
        disjoint_cores: Vec::new(),
    }
}

/// Unit square plus a small chart over its upper right corner, joined by
/// the gate `[7/8, 1]^2`. Chart 1 is large enough for exactly one cube of
/// each colour at scale `1/24`.
pub fn two_chart() -> Scenario {
    Scenario {
        name: "two-chart".into(),
        k: 3,
        eps: rat(3, 5),
        charts: vec![
            ChartSpec {
                region: RectilinearRegion::from_box(square(int(0), int(1))),
                core: Some(RectilinearRegion::from_box(square(int(0), rat(5, 6)))),
                parent: None,
                gate: None,
                scale: rat(1, 144),
                nu: None,
            },
            ChartSpec {
                region: RectilinearRegion::from_box(square(rat(21, 24), rat(25, 24))),
                core: None,
                parent: Some(0),
                gate: Some(square(rat(7, 8), int(1))),
                scale: rat(1, 24),
                nu: Some(rat(6, 25)),
            },
        ],
        ball_center: Point::xy(rat(1, 2), rat(1, 2)),
        target: TargetSpec::Disc,
        retry_bound: 4,
        disjoint_cores: vec![(0, 1)],
    }
}
