//! `darboux`: command-line front end.
//!
//! Exit status is 0 when every check passes, 1 when a check or a plan
//! fails, 2 on usage or input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use darboux::catalog::{cpn_chart_cover_check, describe, figure_table, sb_of, FamilySpec, Figure};
use darboux::geometry::{fmt_rat, int, parse_rat, rat, Aabb, Point, Rat};
use darboux::hamiltonian::{build_displacement, displaceable_cover_scenario, translate_flow, Shear, TranslationField};
use darboux::invariants::{analyze, ManifoldDescriptor};
use darboux::lattice_cover::{
    build_cover, cubes_inside, period_window, verify_covering_with, verify_cylinder_law, verify_gap_with,
};
use darboux::transport::{fixtures, plan_scenario, replay, svg::render_svg, RecordedRun, Scenario};
use darboux::Exec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "darboux", version, about = "Darboux-chart covers: lattice covers, cube transport, invariants")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Run data-parallel kernels sequentially.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    Matrix,
    Gap,
    Cover,
    Cylinder,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fixture {
    SingleChart,
    TwoChart,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShearArg {
    Ridge,
    Zero,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Surface,
    Trivial,
    Nontrivial,
    Product,
    Cpn,
    Grassmannian,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the cube cover of R^{2n} with k colours and verify it.
    Cover {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "matrix")]
        check: Check,
        /// Periods per axis in the test window.
        #[arg(long, default_value_t = 4)]
        reps: usize,
        #[arg(long, value_parser = rat_arg, default_value = "1")]
        scale: Rat,
    },
    /// Plan and simulate cube transport, or replay a recorded run.
    Transport {
        #[arg(long, conflicts_with_all = ["fixture", "replay"])]
        scenario: Option<PathBuf>,
        #[arg(long, value_enum, conflicts_with = "replay")]
        fixture: Option<Fixture>,
        /// Cube scale for the single-chart fixture.
        #[arg(long, value_parser = rat_arg, default_value = "1/48")]
        d: Rat,
        #[arg(long)]
        replay: Option<PathBuf>,
        /// Directory for one SVG per colour.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Build the displacing shear of the squares-and-corridor model.
    Displace {
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_parser = rat_arg, default_value = "2/3")]
        d: Rat,
        #[arg(long, value_parser = rat_arg, default_value = "1/12")]
        delta: Rat,
        #[arg(long, value_parser = rat_arg, default_value = "1/1000")]
        nu: Rat,
        #[arg(long, value_parser = rat_arg, default_value = "49/100")]
        target_fraction: Rat,
        #[arg(long, value_parser = rat_arg, default_value = "1/50")]
        eps: Rat,
        #[arg(long, value_enum, default_value = "ridge")]
        shear: ShearArg,
        /// Also cover the model by three displaced regions.
        #[arg(long)]
        cover: bool,
        #[arg(long, value_parser = rat_arg, default_value = "1/64")]
        cube_scale: Rat,
    },
    /// Trajectories of the box-translating flow as CSV.
    Translate {
        #[arg(long, required = true)]
        demo: bool,
        #[arg(long, default_value_t = 8)]
        samples: usize,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long, default_value_t = 100)]
        stride: usize,
    },
    /// Γ, λ and S_B for a manifold descriptor.
    Invariants {
        #[arg(long)]
        descriptor: PathBuf,
    },
    /// Look up a manifold family, print a figure table, or sample CP^n charts.
    Catalog {
        #[arg(long, value_enum, required_unless_present_any = ["figure", "cpn_check"])]
        family: Option<Family>,
        #[arg(long)]
        figure: Option<String>,
        /// Comma-separated ratios a/b for --figure.
        #[arg(long, default_value = "1,3/2,2,3")]
        grid: String,
        #[arg(long)]
        cpn_check: bool,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long)]
        g: Option<u32>,
        #[arg(long)]
        h: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, value_parser = rat_arg)]
        a: Option<Rat>,
        #[arg(long, value_parser = rat_arg)]
        b: Option<Rat>,
    },
}

fn rat_arg(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

enum Failure {
    /// A check or plan failed; the payload still gets written.
    Check(Option<String>, String),
    Usage(String),
}

type Outcome = Result<String, Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn check(e: impl std::fmt::Display) -> Failure {
    Failure::Check(None, e.to_string())
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Payload written either way; failure when `ok` is false.
fn verdict(payload: String, ok: bool, what: &str) -> Outcome {
    if ok {
        Ok(payload)
    } else {
        Err(Failure::Check(Some(payload), what.to_string()))
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn cover_cmd(n: usize, k: usize, which: Check, reps: usize, scale: Rat, exec: Exec) -> Outcome {
    let cover = build_cover(n, k).map_err(usage)?;
    let window = period_window(&cover, reps, &scale);
    let mut out = json!({
        "n": n,
        "k": k,
        "delta": fmt_rat(&cover.delta),
        "periods": cover.periods,
    });
    let ok = match which {
        Check::Matrix => {
            out["matrix"] = serde_json::to_value(&cover.matrix).expect("serializable");
            true
        }
        Check::Gap => {
            let reports = (1..=k)
                .map(|j| verify_gap_with(&cover, j, &window, &scale, exec))
                .collect::<Result<Vec<_>, _>>()
                .map_err(check)?;
            let min = reports.iter().map(|r| r.min_gap_sq).min().expect("k >= 1");
            let min_gap = reports.iter().find(|r| r.min_gap_sq == min).and_then(|r| r.min_gap);
            out["min_gap"] = min_gap.map_or(Value::Null, |g| Value::String(fmt_rat(&g)));
            let ok = reports.iter().all(|r| r.pass);
            out["colors"] = serde_json::to_value(&reports).expect("serializable");
            ok
        }
        Check::Cover => {
            let r = verify_covering_with(&cover, &window, &scale, exec).map_err(check)?;
            let ok = r.covered && r.interior_overlap_pairs == 0;
            out["report"] = serde_json::to_value(&r).expect("serializable");
            ok
        }
        Check::Cylinder => {
            let mut reports = Vec::new();
            for j in 1..=k {
                let cubes = cubes_inside(&cover, j, &window, &scale).map_err(check)?;
                let c = cubes.get(cubes.len() / 2).ok_or_else(|| check("window holds no cube"))?;
                for axis in 0..2 * n {
                    let r = verify_cylinder_law(&cover, j, c, axis, &window).map_err(check)?;
                    reports.push(json!({ "color": j, "report": r }));
                }
            }
            let ok = reports.iter().all(|r| r["report"]["pass"] == Value::Bool(true));
            out["cylinders"] = Value::Array(reports);
            ok
        }
    };
    out["pass"] = Value::Bool(ok);
    verdict(pretty(&out), ok, "cover check failed")
}

fn transport_cmd(
    scenario: Option<PathBuf>,
    fixture: Option<Fixture>,
    d: Rat,
    replay_path: Option<PathBuf>,
    svg: Option<PathBuf>,
    exec: Exec,
) -> Outcome {
    if let Some(p) = replay_path {
        let rec: RecordedRun = serde_json::from_str(&read(&p)?).map_err(usage)?;
        let reports = replay(&rec.scenario, &rec.scales, &rec.plans, exec).map_err(check)?;
        let ok = reports.iter().all(|r| r.valid);
        return verdict(pretty(&json!({ "valid": ok, "reports": reports })), ok, "replay found violations");
    }
    let s: Scenario = match (scenario, fixture) {
        (Some(p), _) => serde_json::from_str(&read(&p)?).map_err(usage)?,
        (None, Some(Fixture::SingleChart)) => fixtures::single_chart(d, rat(1, 10)),
        (None, Some(Fixture::TwoChart)) => fixtures::two_chart(),
        (None, None) => return Err(usage("give --scenario, --fixture or --replay")),
    };
    let run = plan_scenario(&s, exec).map_err(check)?;
    if let Some(dir) = svg {
        fs::create_dir_all(&dir).map_err(usage)?;
        for plan in &run.plans {
            let path = dir.join(format!("colour-{}.svg", plan.color));
            fs::write(&path, render_svg(&run.world, plan)).map_err(usage)?;
        }
    }
    let ok = run.all_valid();
    verdict(pretty(&run.record(&s)), ok, "simulation found violations")
}

#[allow(clippy::too_many_arguments)]
fn displace_cmd(
    k: usize,
    d: Rat,
    delta: Rat,
    nu: Rat,
    target: Rat,
    eps: Rat,
    shear: ShearArg,
    cover: bool,
    cube_scale: Rat,
    exec: Exec,
) -> Outcome {
    let shear = match shear {
        ShearArg::Ridge => Shear::Ridge,
        ShearArg::Zero => Shear::Zero,
    };
    let (_, report) = build_displacement(k, d, delta, nu, target, eps, shear).map_err(check)?;
    let mut ok = report.displaced && report.area_ok && report.shear_ok;
    let mut out = json!({ "report": report });
    if cover {
        let c = displaceable_cover_scenario(1, target, cube_scale, exec).map_err(check)?;
        let checks = c.checks();
        ok &= checks.iter().all(|r| r.inside_u && r.displaced);
        out["regions"] = serde_json::to_value(&checks).expect("serializable");
        out["scales"] = Value::Array(c.run.scales.iter().map(|s| Value::String(fmt_rat(s))).collect());
    }
    verdict(pretty(&out), ok, "the shear does not displace U")
}

fn translate_cmd(samples: usize, steps: usize, stride: usize, seed: u64) -> Outcome {
    if steps == 0 || stride == 0 {
        return Err(usage("--steps and --stride must be positive"));
    }
    let k = Aabb::rect(int(0), int(0), int(1), int(1)).expect("unit square");
    let field = TranslationField::new(&k, &Point::xy(int(0), int(2)), rat(1, 2)).map_err(check)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts: Vec<[f64; 2]> = vec![[0.0, 0.0], [1.0, 1.0], [0.5, 0.5]];
    starts.extend((0..samples).map(|_| [rng.gen_range(-1.0..2.0), rng.gen_range(-1.0..4.0)]));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["sample", "step", "x", "y"]).map_err(usage)?;
    for (i, z) in starts.iter().enumerate() {
        let traj = field.trajectory(z, steps);
        for (t, p) in traj.iter().enumerate().filter(|(t, _)| t % stride == 0 || *t == steps) {
            w.write_record([i.to_string(), t.to_string(), format!("{:.9}", p[0]), format!("{:.9}", p[1])])
                .map_err(usage)?;
        }
        debug_assert_eq!(traj[steps], translate_flow(&field, z, steps));
    }
    let bytes = w.into_inner().map_err(usage)?;
    Ok(String::from_utf8(bytes).expect("ascii"))
}

fn invariants_cmd(path: &Path) -> Outcome {
    let d: ManifoldDescriptor = serde_json::from_str(&read(path)?).map_err(usage)?;
    let a = analyze(&d).map_err(check)?;
    Ok(pretty(&a))
}

#[allow(clippy::too_many_arguments)]
fn catalog_cmd(
    family: Option<Family>,
    figure: Option<String>,
    grid: &str,
    cpn: bool,
    samples: usize,
    (g, h, n, k): (Option<u32>, Option<u32>, Option<u32>, Option<u32>),
    (a, b): (Option<Rat>, Option<Rat>),
    seed: u64,
) -> Outcome {
    if let Some(f) = figure {
        let fig: Figure = f.parse().map_err(usage)?;
        let ratios = grid.split(',').map(rat_arg).collect::<Result<Vec<_>, _>>().map_err(usage)?;
        return figure_table(fig, &ratios).map_err(check);
    }
    if cpn {
        let n = n.ok_or_else(|| usage("--cpn-check needs --n"))?;
        let r = cpn_chart_cover_check(n, samples, seed);
        let ok = r.covered;
        return verdict(pretty(&r), ok, "a sample missed every chart");
    }
    let need = |v: Option<u32>, name: &str| v.ok_or_else(|| usage(format!("this family needs --{name}")));
    let need_r = |v: Option<Rat>, name: &str| v.ok_or_else(|| usage(format!("this family needs --{name}")));
    let spec = match family.expect("clap enforces a family") {
        Family::Surface => FamilySpec::Surface { g: need(g, "g")?, a: need_r(a, "a")? },
        Family::Trivial => FamilySpec::TrivialBundle { g: need(g, "g")?, a: need_r(a, "a")?, b: need_r(b, "b")? },
        Family::Nontrivial => FamilySpec::NontrivialBundle { g: need(g, "g")?, a: need_r(a, "a")?, b: need_r(b, "b")? },
        Family::Product => FamilySpec::ProductSurfaces {
            g: need(g, "g")?,
            h: need(h, "h")?,
            a: need_r(a, "a")?,
            b: need_r(b, "b")?,
        },
        Family::Cpn => FamilySpec::ProjectiveSpace { n: need(n, "n")? },
        Family::Grassmannian => FamilySpec::Grassmannian { k: need(k, "k")?, n: need(n, "n")? },
    };
    let descriptor = describe(&spec).map_err(check)?;
    let sb = sb_of(&spec).map_err(check)?;
    Ok(pretty(&json!({
        "spec": spec,
        "descriptor": descriptor,
        "SB": sb.to_string(),
        "sb_result": sb,
    })))
}

fn run(cli: Cli) -> Outcome {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    match cli.cmd {
        Cmd::Cover { n, k, check, reps, scale } => cover_cmd(n, k, check, reps, scale, exec),
        Cmd::Transport { scenario, fixture, d, replay, svg } => transport_cmd(scenario, fixture, d, replay, svg, exec),
        Cmd::Displace { k, d, delta, nu, target_fraction, eps, shear, cover, cube_scale } => {
            displace_cmd(k, d, delta, nu, target_fraction, eps, shear, cover, cube_scale, exec)
        }
        Cmd::Translate { demo: _, samples, steps, stride } => translate_cmd(samples, steps, stride, cli.seed),
        Cmd::Invariants { descriptor } => invariants_cmd(&descriptor),
        Cmd::Catalog { family, figure, grid, cpn_check, samples, g, h, n, k, a, b } => {
            catalog_cmd(family, figure, &grid, cpn_check, samples, (g, h, n, k), (a, b), cli.seed)
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let out = cli.out.clone();
    match run(cli) {
        Ok(text) => match emit(&out, &text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err(Failure::Check(payload, msg)) => {
            if let Some(p) = payload {
                let _ = emit(&out, &p);
            }
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
