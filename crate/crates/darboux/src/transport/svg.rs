//! SVG snapshots of a plan: initial layout, after compression, final packing.

use std::fmt::Write;

use super::plan::{Phase, TransportPlan};
use super::scenario::World;
use crate::geometry::{to_f64, Aabb, Point};

const PANEL: f64 = 360.0;
const PAD: f64 = 12.0;
const FILLS: [&str; 4] = ["#3b6ea8", "#c4572a", "#4f8f3a", "#8a5fb0"];

struct Frame {
    x0: f64,
    y1: f64,
    scale: f64,
}

impl Frame {
    fn x(&self, x: f64, panel: usize) -> f64 {
        panel as f64 * (PANEL + PAD) + PAD + (x - self.x0) * self.scale
    }

    fn y(&self, y: f64) -> f64 {
        PAD + (self.y1 - y) * self.scale
    }

    fn rect(&self, out: &mut String, b: &Aabb, panel: usize, style: &str) {
        let (lo, hi) = (b.lo().to_f64(), b.hi().to_f64());
        let _ = writeln!(
            out,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" {style}/>"#,
            self.x(lo[0], panel),
            self.y(hi[1]),
            (hi[0] - lo[0]) * self.scale,
            (hi[1] - lo[1]) * self.scale,
        );
    }
}

fn positions(plan: &TransportPlan, upto: usize) -> Vec<Point> {
    let mut off = vec![Point::origin(2); plan.objects.len()];
    for m in &plan.moves[..upto] {
        off[m.object] = off[m.object].add(&m.translation);
    }
    off
}

/// Three panels side by side.
pub fn render_svg(world: &World, plan: &TransportPlan) -> String {
    let bb = world.union.bbox().expect("nonempty world");
    let (lo, hi) = (bb.lo().to_f64(), bb.hi().to_f64());
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let f = Frame {
        x0: lo[0],
        y1: hi[1],
        scale: PANEL / span,
    };
    let compressed = plan
        .moves
        .iter()
        .rposition(|m| m.phase == Phase::CompressInterior)
        .map_or(0, |i| i + 1);
    let stages = [
        ("initial", 0),
        ("compressed", compressed),
        ("final", plan.moves.len()),
    ];
    let width = 3.0 * (PANEL + PAD) + PAD;
    let height = PANEL + 2.0 * PAD + 16.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (panel, (name, upto)) in stages.iter().enumerate() {
        for chart in &world.charts {
            for c in chart.cells() {
                f.rect(&mut out, c, panel, r##"fill="#eeeeee" stroke="#999999" stroke-width="0.5""##);
            }
        }
        for g in world.gates.iter().flatten() {
            f.rect(&mut out, g, panel, r##"fill="none" stroke="#444444" stroke-dasharray="3 2""##);
        }
        if world.is_disc() {
            let c = world.ball_center.to_f64();
            for r in &world.radii {
                let _ = writeln!(
                    out,
                    r##"<circle cx="{:.3}" cy="{:.3}" r="{:.3}" fill="none" stroke="#222222" stroke-width="0.8"/>"##,
                    f.x(c[0], panel),
                    f.y(c[1]),
                    to_f64(r) * f.scale
                );
            }
        } else {
            for z in &world.zones {
                f.rect(&mut out, &z.final_box, panel, r##"fill="none" stroke="#222222""##);
            }
        }
        let off = positions(plan, *upto);
        for (o, obj) in plan.objects.iter().enumerate() {
            let fill = FILLS[obj.height % FILLS.len()];
            for c in obj.body.translate(&off[o]).cells() {
                f.rect(&mut out, c, panel, &format!(r#"fill="{fill}" fill-opacity="0.8""#));
            }
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12">{name} (colour {})</text>"#,
            f.x(lo[0], panel),
            PANEL + 2.0 * PAD + 8.0,
            plan.color
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat;
    use crate::lattice_cover::build_cover;
    use crate::transport::fixtures::single_chart;
    use crate::transport::{build_colored_cover, decompose_colors, plan_color};

    #[test]
    fn three_panels() {
        let s = single_chart(rat(1, 12), rat(1, 10));
        let w = World::build(&s, &s.scales()).unwrap();
        let set = build_colored_cover(&w, &build_cover(1, 3).unwrap()).unwrap();
        let plan = plan_color(&w, &decompose_colors(&w, &set, 1).unwrap()).unwrap();
        let svg = render_svg(&w, &plan);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<text").count(), 3);
        assert_eq!(svg.matches("<circle").count(), 3);
    }
}
