mod render;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use onecurrent::currents::{Molecule, PolyhedralCurrent};
use onecurrent::cyclefill::{check_flat, check_lifted, fill_flat, fill_lifted};
use onecurrent::decompose::{check_decomposition, smirnov_decompose};
use onecurrent::geometry::{kuratowski_embed, AmbientSpace, FiniteMetric, Norm, VectorSpace};
use onecurrent::primitives::{optimal_primitive, tent_primitive};
use onecurrent::report::Report;
use onecurrent::sbv::{area_check, normalize_intervals, sbv_represent, transport_param, MonotoneCadlag};
use onecurrent::transport::{kr_norm, solve_plan};
use onecurrent::{fixtures, io as json, tol};
use rand::rngs::StdRng;
use rand::SeedableRng;
use rayon::prelude::*;
use render::Scene;

type Res<T> = Result<T, String>;

#[derive(Parser)]
#[command(name = "onecurrent", version, about = "Computations with polyhedral metric 1-currents")]
struct Cli {
    /// Run the full postcondition suite; exit 2 if any check fails.
    #[arg(long, global = true)]
    check: bool,
    /// Write a 2-D figure of the main result.
    #[arg(long, global = true, value_name = "FILE")]
    svg: Option<PathBuf>,
    /// Seed for randomized fixtures.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// KR norm of a molecule, with optional dual potential and transport plan.
    Kr(KrArgs),
    /// Optimal (or tent) primitive of a molecule.
    Primitive(PrimitiveArgs),
    /// Fill the boundary of a current to a cycle, flat or lifted.
    Fill(FillArgs),
    /// Split a current into weighted paths and loops.
    Decompose(DecomposeArgs),
    /// Weighted SBV curves representing a current.
    Represent(RepresentArgs),
    /// Transport parametrization of a finite union of intervals.
    Param(ParamArgs),
    /// Evaluate a current on a metric form, or a monotone map at points.
    Eval(EvalArgs),
    /// Write a named fixture as JSON.
    Demo {
        /// Output file (stdout if absent).
        #[arg(long, global = true)]
        out: Option<PathBuf>,
        #[command(subcommand)]
        fixture: Fixture,
    },
}

#[derive(Args)]
struct KrArgs {
    /// Molecule JSON (`-` or absent for stdin).
    #[arg(long)]
    molecule: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    dual_out: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    plan_out: Option<PathBuf>,
    /// Process every `*.json` molecule in a directory.
    #[arg(long, value_name = "DIR", conflicts_with_all = ["molecule", "dual_out", "plan_out"])]
    batch: Option<PathBuf>,
}

#[derive(Args)]
struct PrimitiveArgs {
    #[arg(long)]
    molecule: Option<PathBuf>,
    /// Build the lifted tent primitive with this ε instead.
    #[arg(long, value_name = "EPS")]
    tent: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FillArgs {
    /// Current JSON (`-` or absent for stdin).
    #[arg(long)]
    current: Option<PathBuf>,
    /// Fill in `X ⊕ R` with tents of excess ε.
    #[arg(long, value_name = "EPS")]
    lift: Option<f64>,
    #[arg(long, value_name = "FILE")]
    cycle_out: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    rect_out: Option<PathBuf>,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    current: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RepresentArgs {
    #[arg(long)]
    current: Option<PathBuf>,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ParamArgs {
    /// A JSON file, or an inline list such as `[0,0.3],[0.6,1]`.
    #[arg(long)]
    intervals: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Current JSON to integrate against `--form`.
    #[arg(long, requires = "form", conflicts_with = "param")]
    current: Option<PathBuf>,
    /// Metric form `{"f": …, "pi": …}`, as a file or inline.
    #[arg(long)]
    form: Option<String>,
    /// Monotone map JSON as written by `param`.
    #[arg(long)]
    param: Option<PathBuf>,
    /// Points at which to evaluate the map.
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    at: Vec<f64>,
    /// Coefficients `g0,g1,g2` of `g(s) = g0 + g1 s + g2 s²` for the area formula.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    area: Option<Vec<f64>>,
    /// Window `lo,hi` for the area formula.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_value = "0,1")]
    window: Vec<f64>,
}

#[derive(Subcommand)]
enum Fixture {
    /// Inscribed polygon of the upper unit semicircle.
    Semicircle {
        #[arg(long, default_value_t = 256)]
        n: usize,
    },
    /// `m_j`, or the tail `m_k − m_j` when `k` is given.
    InfiniteDipoles { j: usize, k: Option<usize> },
    /// Two collinear unit-weight segments.
    CollinearPair {
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Unit square loop.
    SquareLoop,
    /// Fat Cantor interval union.
    FatCantor {
        depth: usize,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
    },
    /// Isometric image of a finite metric space in (R^n, ‖·‖∞).
    Kuratowski {
        /// Distance matrix as a file or inline JSON; random points if absent.
        matrix: Option<String>,
        #[arg(long, default_value_t = 6)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
    },
    /// Seeded random current.
    RandomCurrent {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 10)]
        segments: usize,
        #[arg(long, default_value = "euclidean")]
        norm: String,
    },
    /// Seeded random balanced molecule.
    RandomMolecule {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 6)]
        atoms: usize,
        #[arg(long, default_value = "euclidean")]
        norm: String,
    },
}

/// Twelve significant digits, trailing zeros dropped.
fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let trim = |s: String| if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim(format!("{x:.decimals$}"))
    } else {
        let s = format!("{x:.11e}");
        let (mantissa, e) = s.split_once('e').expect("exponent form");
        format!("{}e{e}", trim(mantissa.to_string()))
    }
}

/// Reads a file, or stdin for `None` and `-`.
fn read_input(path: Option<&Path>) -> Res<String> {
    match path {
        None => read_stdin(),
        Some(p) if p == Path::new("-") => read_stdin(),
        Some(p) => fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display())),
    }
}

fn read_stdin() -> Res<String> {
    let mut s = String::new();
    io::stdin().read_to_string(&mut s).map_err(|e| format!("stdin: {e}"))?;
    Ok(s)
}

/// An argument that is either a path to an existing file or literal content.
fn file_or_inline(arg: &str) -> Res<String> {
    let p = Path::new(arg);
    if p.is_file() {
        fs::read_to_string(p).map_err(|e| format!("{arg}: {e}"))
    } else {
        Ok(arg.to_string())
    }
}

fn label(path: Option<&Path>) -> String {
    path.map_or_else(|| "stdin".into(), |p| p.display().to_string())
}

fn load_current(path: Option<&Path>) -> Res<PolyhedralCurrent> {
    json::current_from_json(&read_input(path)?).map_err(|e| format!("{}: {e}", label(path)))
}

fn load_molecule(path: Option<&Path>) -> Res<Molecule> {
    json::molecule_from_json(&read_input(path)?).map_err(|e| format!("{}: {e}", label(path)))
}

fn write_file(path: &Path, body: &str) -> Res<()> {
    fs::write(path, body).map_err(|e| format!("{}: {e}", path.display()))
}

/// Writes a JSON artifact to `out`, or to stdout when absent. Returns the
/// stream for human-readable lines, which must not mix with JSON on stdout.
fn emit(body: &str, out: Option<&Path>) -> Res<Console> {
    match out {
        Some(p) => {
            write_file(p, body)?;
            Ok(Console { to_stderr: false })
        }
        None => {
            println!("{body}");
            Ok(Console { to_stderr: true })
        }
    }
}

struct Console {
    to_stderr: bool,
}

impl Console {
    fn line(&self, s: impl AsRef<str>) {
        if self.to_stderr {
            eprintln!("{}", s.as_ref());
        } else {
            println!("{}", s.as_ref());
        }
    }
}

fn parse_norm(s: &str) -> Res<Norm> {
    match s.to_ascii_lowercase().as_str() {
        "euclidean" | "l2" => Ok(Norm::Euclidean),
        "l1" => Ok(Norm::L1),
        "linf" => Ok(Norm::LInf),
        other => Err(format!("unknown norm {other:?} (expected euclidean, l1 or linf)")),
    }
}

struct Ctx {
    check: bool,
    svg: Option<PathBuf>,
    seed: u64,
}

impl Ctx {
    /// Prints the report to stderr when checking and maps failures to exit 2.
    fn finish(&self, report: impl FnOnce() -> Res<Report>) -> Res<u8> {
        if !self.check {
            return Ok(0);
        }
        let r = report()?;
        eprint!("{r}");
        Ok(if r.passed() { 0 } else { 2 })
    }

    fn draw(&self, f: impl FnOnce(&mut Scene) -> Res<()>) -> Res<()> {
        if let Some(path) = &self.svg {
            let mut scene = Scene::new();
            f(&mut scene)?;
            scene.save(path)?;
        }
        Ok(())
    }
}

fn kr(ctx: &Ctx, a: &KrArgs) -> Res<u8> {
    if let Some(dir) = &a.batch {
        return kr_batch(ctx, dir);
    }
    let m = load_molecule(a.molecule.as_deref())?;
    let plan = solve_plan(&m).map_err(|e| e.to_string())?;
    println!("{}", num(plan.cost));
    if let Some(p) = &a.dual_out {
        write_file(p, &json::potentials_to_json(&plan))?;
    }
    if let Some(p) = &a.plan_out {
        write_file(p, &json::plan_to_json(&plan))?;
    }
    ctx.draw(|s| s.molecule(&m))?;
    ctx.finish(|| Ok(plan.verify()))
}

fn kr_batch(ctx: &Ctx, dir: &Path) -> Res<u8> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let results: Vec<Res<(f64, bool)>> = files
        .par_iter()
        .map(|p| {
            let m = load_molecule(Some(p))?;
            let plan = solve_plan(&m).map_err(|e| format!("{}: {e}", p.display()))?;
            Ok((plan.cost, !ctx.check || plan.verify().passed()))
        })
        .collect();
    let (mut parse_failed, mut check_failed) = (false, false);
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for (p, r) in files.iter().zip(results) {
        let name = p.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
        match r {
            Ok((cost, ok)) => {
                let _ = writeln!(out, "{name}\t{}", num(cost));
                if !ok {
                    eprintln!("FAIL {name}: transport certificate");
                    check_failed = true;
                }
            }
            Err(e) => {
                eprintln!("onecurrent: error: {}", one_line(&e));
                parse_failed = true;
            }
        }
    }
    Ok(if parse_failed { 1 } else if check_failed { 2 } else { 0 })
}

fn primitive(ctx: &Ctx, a: &PrimitiveArgs) -> Res<u8> {
    let m = load_molecule(a.molecule.as_deref())?;
    let r = match a.tent {
        Some(eps) => tent_primitive(&m, eps),
        None => optimal_primitive(&m),
    }
    .map_err(|e| e.to_string())?;
    let console = emit(&json::current_to_json(&r), a.out.as_deref())?;
    let kr = kr_norm(&m).map_err(|e| e.to_string())?;
    console.line(format!("KR(m) = {}", num(kr)));
    console.line(format!("M(R) = {}", num(r.mass_total())));
    ctx.draw(|s| {
        s.current(&r, a.tent.is_some());
        s.molecule(&m)
    })?;
    ctx.finish(|| {
        let tau = tol();
        let mut rep = Report::new();
        let target = match a.tent {
            Some(_) => m.lift().map_err(|e| e.to_string())?,
            None => m.clone(),
        };
        rep.push("boundary of R equals m", r.boundary().approx_eq(&target), format!("{} atoms", m.atoms().len()));
        let mass = r.mass_total();
        match a.tent {
            Some(eps) => {
                rep.at_most("KR(m) <= M(R)", kr, mass + tau * (1.0 + kr));
                rep.at_most("M(R) <= KR(m) + eps", mass, kr + eps + tau * (1.0 + kr));
            }
            None => rep.close("M(R) = KR(m)", mass, kr, tau * (1.0 + kr)),
        }
        Ok(rep)
    })
}

fn fill(ctx: &Ctx, a: &FillArgs) -> Res<u8> {
    let t = load_current(a.current.as_deref())?;
    let f = match a.lift {
        Some(eps) => fill_lifted(&t, eps),
        None => fill_flat(&t),
    }
    .map_err(|e| e.to_string())?;
    if let Some(p) = &a.cycle_out {
        write_file(p, &json::current_to_json(&f.cycle))?;
    }
    if let Some(p) = &a.rect_out {
        write_file(p, &json::current_to_json(&f.rect))?;
    }
    let kr = t.kr_norm_of_boundary().map_err(|e| e.to_string())?;
    println!("M(T) = {}", num(t.mass_total()));
    println!("KR(dT) = {}", num(kr));
    println!("M(R) = {}", num(f.rect.mass_total()));
    println!("M(C) = {}", num(f.cycle.mass_total()));
    if let Some(b) = f.cycle.support_bounds() {
        let fmt = |v: &[f64]| v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(", ");
        println!("support hull of C: [{}] to [{}]", fmt(&b.lo), fmt(&b.hi));
    }
    ctx.draw(|s| {
        s.current(&f.cycle, a.lift.is_some());
        Ok(())
    })?;
    ctx.finish(|| {
        match a.lift {
            Some(eps) => check_lifted(&t, &f, eps),
            None => check_flat(&t, &f),
        }
        .map_err(|e| e.to_string())
    })
}

fn decompose(ctx: &Ctx, a: &DecomposeArgs) -> Res<u8> {
    let t = load_current(a.current.as_deref())?.canonicalize();
    let curves = smirnov_decompose(&t);
    let console = emit(&json::curves_to_json(&curves), a.out.as_deref())?;
    let loops = curves.iter().filter(|c| c.closed).count();
    console.line(format!("{} curves: {} paths, {} loops", curves.len(), curves.len() - loops, loops));
    let total: f64 = curves.iter().map(|c| c.weight * c.length(t.space())).sum();
    console.line(format!("sum of w * length = {}", num(total)));
    ctx.draw(|s| {
        s.current(&t, false);
        Ok(())
    })?;
    ctx.finish(|| check_decomposition(&t, &curves).map_err(|e| e.to_string()))
}

fn represent(ctx: &Ctx, a: &RepresentArgs) -> Res<u8> {
    let t = load_current(a.current.as_deref())?;
    let rep = sbv_represent(&t, a.eps).map_err(|e| e.to_string())?;
    let console = emit(&json::representation_to_json(&rep.entries, a.eps), a.out.as_deref())?;
    console.line(format!("{} curves from {} loops", rep.entries.len(), rep.loops.len()));
    console.line(format!("M(T) = {}", num(t.mass_total())));
    console.line(format!("sum of w * length = {}", num(rep.weighted_length())));
    console.line(format!("sum of w * jumps = {}", num(rep.weighted_jumps())));
    ctx.draw(|s| {
        s.current(&rep.filling.cycle, true);
        Ok(())
    })?;
    ctx.finish(|| rep.verify().map_err(|e| e.to_string()))
}

fn param_report(k: &[(f64, f64)], u: &MonotoneCadlag) -> Report {
    let tau = tol();
    let mut r = Report::new();
    let measure: f64 = k.iter().map(|(a, b)| b - a).sum();
    let gaps: f64 = k.windows(2).map(|w| w[1].0 - w[0].1).sum();
    r.close("u(0) = min K", u.eval(0.0), k[0].0, tau);
    r.close("u(1) = max K", u.eval(1.0), k[k.len() - 1].1, tau);
    r.close("absolutely continuous variation = |K|", u.absolutely_continuous_variation(), measure, tau);
    r.close("jump variation = gaps of K", u.jump_variation(), gaps, tau);
    r.push("one jump per gap", u.jumps().len() == k.len() - 1, format!("{} jumps", u.jumps().len()));
    let outside = (0..=1000)
        .map(|i| u.eval(i as f64 / 1000.0))
        .filter(|v| !k.iter().any(|(a, b)| *v >= a - tau && *v <= b + tau))
        .count();
    r.push("image lies in K", outside == 0, format!("{outside} of 1001 samples outside"));
    let (lhs, rhs) = area_check(u, [1.0, -0.5, 0.25], (k[0].0, k[k.len() - 1].1));
    r.close("area formula", lhs, rhs, 1e-10 * (1.0 + lhs.abs()));
    r
}

fn param(ctx: &Ctx, a: &ParamArgs) -> Res<u8> {
    let raw = json::intervals_from_str(&file_or_inline(&a.intervals)?).map_err(|e| e.to_string())?;
    let k = normalize_intervals(&raw).map_err(|e| e.to_string())?;
    let u = transport_param(&k).map_err(|e| e.to_string())?;
    let console = emit(&json::cadlag_to_json(&u), a.out.as_deref())?;
    console.line(format!("|K| = {}", num(k.iter().map(|(a, b)| b - a).sum())));
    for j in u.jumps() {
        console.line(format!("jump at t = {}: {} -> {}", num(j.t), num(j.left), num(j.right)));
    }
    ctx.finish(|| Ok(param_report(&k, &u)))
}

fn eval(ctx: &Ctx, a: &EvalArgs) -> Res<u8> {
    if let Some(form) = &a.form {
        let t = load_current(a.current.as_deref())?;
        let form: onecurrent::currents::MetricForm =
            serde_json::from_str(&file_or_inline(form)?).map_err(|e| format!("form: {e}"))?;
        form.check_dim(t.space().dim).map_err(|e| format!("form: {e}"))?;
        let v = t.evaluate(&form);
        println!("{}", num(v));
        return ctx.finish(|| {
            let mut r = Report::new();
            let c = t.canonicalize();
            r.close("invariant under canonicalization", v, c.evaluate(&form), 1e-8);
            let bound = form.lipschitz_pi(t.space()) * t.abs_integral(&form);
            r.at_most("|T(f dpi)| <= Lip(pi) * int |f| d||T||", v.abs(), bound + 1e-8);
            Ok(r)
        });
    }
    let Some(path) = &a.param else {
        return Err("eval needs --current with --form, or --param".into());
    };
    let u = json::cadlag_from_json(&read_input(Some(path))?).map_err(|e| format!("{}: {e}", path.display()))?;
    for t in &a.at {
        if !(0.0..=1.0).contains(t) {
            return Err(format!("--at {t} lies outside [0, 1]"));
        }
        println!("u({}) = {}  u({}-) = {}", num(*t), num(u.eval(*t)), num(*t), num(u.left_limit(*t)));
    }
    if a.area.as_ref().is_some_and(|g| g.len() != 3) || a.window.len() != 2 {
        return Err("--area takes three coefficients and --window two bounds".into());
    }
    let area = a.area.as_ref().map(|g| {
        let (lo, hi) = (a.window[0], a.window[1]);
        (area_check(&u, [g[0], g[1], g[2]], (lo, hi)), lo, hi)
    });
    if let Some(((lhs, rhs), lo, hi)) = area {
        if lo > hi {
            return Err(format!("empty window [{lo}, {hi}]"));
        }
        println!("int_U g = {}", num(lhs));
        println!("int g(u) du' over u^-1(U) = {}", num(rhs));
    }
    ctx.finish(|| {
        let mut r = Report::new();
        let jumps = u.jumps();
        r.push("jumps are upward", jumps.iter().all(|j| j.right >= j.left), format!("{} jumps", jumps.len()));
        if let Some(((lhs, rhs), ..)) = area {
            r.close("area formula", lhs, rhs, 1e-10 * (1.0 + lhs.abs()));
        }
        Ok(r)
    })
}

fn isometry_report(fm: &FiniteMetric, points: &[Vec<f64>], space: &VectorSpace) -> Report {
    let tau = tol();
    let mut worst = 0.0f64;
    for i in 0..fm.len() {
        for j in 0..fm.len() {
            worst = worst.max((space.dist(&points[i], &points[j]) - fm.dist(i, j)).abs());
        }
    }
    let mut r = Report::new();
    r.at_most("embedding is isometric", worst, tau);
    r
}

fn demo(ctx: &Ctx, out: Option<&Path>, fixture: &Fixture) -> Res<u8> {
    let mut rng = StdRng::seed_from_u64(ctx.seed);
    match fixture {
        Fixture::Semicircle { n } => current_demo(ctx, out, &fixtures::semicircle(*n)),
        Fixture::CollinearPair { dim } => current_demo(ctx, out, &fixtures::collinear_pair(*dim)),
        Fixture::SquareLoop => current_demo(ctx, out, &fixtures::square_loop()),
        Fixture::RandomCurrent { dim, segments, norm } => {
            let space = VectorSpace::new(*dim, parse_norm(norm)?).map_err(|e| e.to_string())?;
            current_demo(ctx, out, &fixtures::random_current(&mut rng, space, *segments))
        }
        Fixture::InfiniteDipoles { j, k } => {
            let m = match k {
                Some(k) if k <= j => return Err(format!("need j < k, got j = {j}, k = {k}")),
                Some(k) => fixtures::infinite_dipoles_tail(*j, *k),
                None => fixtures::infinite_dipoles(*j),
            };
            molecule_demo(ctx, out, &m)
        }
        Fixture::RandomMolecule { dim, atoms, norm } => {
            let space = VectorSpace::new(*dim, parse_norm(norm)?).map_err(|e| e.to_string())?;
            molecule_demo(ctx, out, &fixtures::random_molecule(&mut rng, space, *atoms))
        }
        Fixture::FatCantor { depth, alpha } => {
            if !(*alpha > 0.0 && *alpha <= 1.0) {
                return Err(format!("alpha must lie in (0, 1], got {alpha}"));
            }
            let k = fixtures::fat_cantor(*depth, *alpha);
            let body = serde_json::to_string_pretty(&serde_json::json!({ "v": 1, "intervals": k }))
                .map_err(|e| e.to_string())?;
            emit(&body, out)?;
            Ok(0)
        }
        Fixture::Kuratowski { matrix, points, basepoint } => {
            let fm = match matrix {
                Some(m) => {
                    let rows: Vec<Vec<f64>> =
                        serde_json::from_str(&file_or_inline(m)?).map_err(|e| format!("matrix: {e}"))?;
                    FiniteMetric::new(rows).map_err(|e| e.to_string())?
                }
                None => fixtures::random_metric_space(&mut rng, (*points).max(1), 2, Norm::Euclidean),
            };
            let e = kuratowski_embed(&fm, *basepoint).map_err(|e| e.to_string())?;
            let space: AmbientSpace = e.space.into();
            let body = serde_json::to_string_pretty(&serde_json::json!({
                "v": 1,
                "space": space,
                "basepoint": basepoint,
                "matrix": fm.matrix(),
                "points": e.points,
            }))
            .map_err(|e| e.to_string())?;
            emit(&body, out)?;
            ctx.finish(|| Ok(isometry_report(&fm, &e.points, &e.space)))
        }
    }
}

fn current_demo(ctx: &Ctx, out: Option<&Path>, t: &PolyhedralCurrent) -> Res<u8> {
    emit(&json::current_to_json(t), out)?;
    ctx.draw(|s| {
        s.current(t, false);
        Ok(())
    })?;
    Ok(0)
}

fn molecule_demo(ctx: &Ctx, out: Option<&Path>, m: &Molecule) -> Res<u8> {
    emit(&json::molecule_to_json(m), out)?;
    ctx.draw(|s| s.molecule(m))?;
    Ok(0)
}

fn apply_tolerance() -> Res<()> {
    if let Ok(s) = std::env::var("ONECURRENT_TOL") {
        let v: f64 = s.trim().parse().map_err(|_| format!("ONECURRENT_TOL: not a number: {s:?}"))?;
        if !(v.is_finite() && v > 0.0) {
            return Err(format!("ONECURRENT_TOL must be positive, got {s}"));
        }
        onecurrent::set_tol(v);
    }
    Ok(())
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn run(cli: Cli) -> Res<u8> {
    apply_tolerance()?;
    let ctx = Ctx { check: cli.check, svg: cli.svg, seed: cli.seed };
    match &cli.command {
        Command::Kr(a) => kr(&ctx, a),
        Command::Primitive(a) => primitive(&ctx, a),
        Command::Fill(a) => fill(&ctx, a),
        Command::Decompose(a) => decompose(&ctx, a),
        Command::Represent(a) => represent(&ctx, a),
        Command::Param(a) => param(&ctx, a),
        Command::Eval(a) => eval(&ctx, a),
        Command::Demo { out, fixture } => demo(&ctx, out.as_deref(), fixture),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let msg = e.to_string();
            eprintln!("onecurrent: {}", one_line(msg.lines().next().unwrap_or("invalid arguments")));
            return ExitCode::from(1);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("onecurrent: error: {}", one_line(&e));
            ExitCode::from(1)
        }
    }
}
