use std::time::Instant;

use flatsurf::count::{count_growth, generalized_diagonals, saddle_connections};
use flatsurf::flow::{
    billiard, discrepancy, illuminates, linear_flow, FlatPolygons, FlowOptions, Illumination,
    Termination, Trajectory,
};
use flatsurf::format::emit_surface;
use flatsurf::gl2::{self, FieldMatrix};
use flatsurf::moves::{canonicalize, equivalent};
use flatsurf::scalar::Scalar;
use flatsurf::svg::{emit_svg, Drawable, Scene};
use flatsurf::unfold::{unfold_bounded, RationalPolygon};
use flatsurf::windtree::{self, ensemble, random_configs, WindTreeConfig};
use flatsurf::{AlgNum, TranslationSurface};

use crate::input::{
    parse_floats, parse_nums, parse_vec, read_document, read_polygon, read_surface, Document,
};
use crate::report::{f, RunReport};
use crate::{Command, Failure};

pub fn dispatch(cmd: Command) -> Result<(), Failure> {
    let t0 = Instant::now();
    let report = match cmd {
        Command::Validate { files } => return validate(&files),
        Command::Info { file } => return info(&file),
        Command::Unfold {
            check_octagon: true,
            ..
        } => return check_octagon(),
        Command::Unfold { file, bound, .. } => {
            return unfold_cmd(file.as_deref().unwrap_or("-"), bound)
        }
        Command::Canonicalize { file } => {
            let s = read_surface(&file)?;
            let mut c = canonicalize(&s)?.to_surface();
            if let Some(n) = &s.name {
                c = c.with_name(format!("{n} (canonical)"));
            }
            print!("{}", emit_surface(&c));
            return Ok(());
        }
        Command::Equiv { a, b } => return equiv(&a, &b),
        Command::Apply { file, matrix } => {
            let s = read_surface(&file)?;
            let m = parse_nums(&matrix, 4)?;
            let g = FieldMatrix::new(m[0].clone(), m[1].clone(), m[2].clone(), m[3].clone())?;
            print!("{}", emit_surface(&gl2::apply(&g, &s)));
            return Ok(());
        }
        Command::Render { file, out } => return render(&file, out.as_deref()),
        Command::GtOrbit {
            file,
            t_max,
            dt,
            eps,
        } => gt_orbit(&file, t_max, dt, eps)?,
        Command::Billiard {
            file,
            start,
            dir,
            length,
            float,
            svg,
        } => billiard_cmd(&file, &start, &dir, length, float, svg.as_deref())?,
        Command::Flow {
            file,
            polygon,
            start,
            dir,
            lengths,
            grid,
            float,
            svg,
        } => flow_cmd(
            &file,
            polygon.as_deref(),
            &start,
            &dir,
            &lengths,
            grid,
            float,
            svg.as_deref(),
        )?,
        Command::Illuminate {
            file,
            from,
            to,
            length,
        } => illuminate(&file, &from, &to, length)?,
        Command::Count { file, length, svg } => count(&file, length, svg.as_deref())?,
        Command::Growth { file, lengths } => growth(&file, &lengths)?,
        Command::Diagonals { file, length } => diagonals(&file, length)?,
        Command::Windtree {
            a,
            b,
            t_total,
            runs,
            seed,
            window,
            svg,
            svg_length,
        } => windtree_cmd(
            a,
            b,
            t_total,
            runs,
            seed,
            window,
            svg.as_deref(),
            svg_length,
        )?,
    };
    let mut report = report;
    report.elapsed = t0.elapsed();
    print!("{}", report.render());
    eprintln!("# elapsed: {:.3} s", report.elapsed.as_secs_f64());
    Ok(())
}

fn write_out(path: Option<&str>, text: &str) -> Result<(), Failure> {
    match path {
        None | Some("-") => {
            print!("{text}");
            Ok(())
        }
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::error(format!("{p}: {e}"))),
    }
}

fn validate(files: &[String]) -> Result<(), Failure> {
    if files.is_empty() {
        return Err(Failure::error("no files given"));
    }
    for path in files {
        match read_document(path)? {
            Document::Surface(s) => println!(
                "{path}: ok: surface, {} polygons, {}",
                s.polygons().len(),
                s.stratum()
            ),
            Document::Polygon(p, _) => println!("{path}: ok: polygon, {} vertices", p.len()),
        }
    }
    Ok(())
}

/// `pπ/q` for display.
fn pi_multiple(p: u32, q: u32) -> String {
    let num = if p == 1 {
        "π".to_string()
    } else {
        format!("{p}π")
    };
    if q == 1 {
        num
    } else {
        format!("{num}/{q}")
    }
}

fn exact_and_float(x: &AlgNum) -> String {
    match x.to_rational() {
        Some(r) => r.to_string(),
        None => format!("{x} ≈ {:.12}", x.to_f64()),
    }
}

fn info(path: &str) -> Result<(), Failure> {
    match read_document(path)? {
        Document::Surface(s) => info_surface(&s),
        Document::Polygon(p, name) => info_polygon(&p, name.as_deref()),
    }
    Ok(())
}

fn info_surface(s: &TranslationSurface) {
    let st = s.stratum();
    println!("name: {}", s.name.as_deref().unwrap_or("-"));
    println!("polygons: {}", s.polygons().len());
    println!("field level: {}", s.level());
    println!("area: {}", exact_and_float(&s.area()));
    println!("genus: {}", st.genus);
    println!("stratum: {st}");
    println!("dimension: {}", st.dimension);
    println!("marked points: {}", st.extra_marked_points);
    let cones = s.cone_points();
    println!("vertex classes: {}", cones.len());
    for (i, c) in cones.iter().enumerate() {
        println!(
            "vertex {i}: angle {}, order {}, {} corners",
            pi_multiple(2 * c.angle_multiple, 1),
            c.order(),
            c.corners.len()
        );
    }
}

fn info_polygon(p: &RationalPolygon, name: Option<&str>) {
    println!("name: {}", name.unwrap_or("-"));
    println!("vertices: {}", p.len());
    println!("area: {}", exact_and_float(&p.area()));
    let angles: Vec<String> = p.angles().iter().map(|&(a, b)| pi_multiple(a, b)).collect();
    println!("angles: {}", angles.join(", "));
    println!("reflection group order: {}", p.expected_group_order());
}

fn unfold_cmd(path: &str, bound: usize) -> Result<(), Failure> {
    let (p, name) = read_polygon(path)?;
    let u = unfold_bounded(&p, bound)?;
    let label = name.unwrap_or_else(|| path.to_string());
    let s = u.surface.with_name(format!("unfolding of {label}"));
    println!("# {} copies", u.group.order());
    print!("{}", emit_surface(&s));
    Ok(())
}

fn check_octagon() -> Result<(), Failure> {
    let u = flatsurf::unfold::unfold(&flatsurf::corpus::triangle_pi8())?;
    let octagon = flatsurf::corpus::regular_octagon_apothem1();
    let e = equivalent(&u.surface, &octagon)?;
    println!("copies: {}", u.group.order());
    println!("stratum: {}", u.surface.stratum());
    if e.equivalent {
        println!("unfolding of the π/8 triangle is the regular octagon");
        Ok(())
    } else {
        Err(Failure::no(
            "unfolding of the π/8 triangle is not the regular octagon",
        ))
    }
}

fn equiv(a: &str, b: &str) -> Result<(), Failure> {
    let (sa, sb) = (read_surface(a)?, read_surface(b)?);
    let e = equivalent(&sa, &sb)?;
    if e.equivalent {
        println!("equivalent");
        Ok(())
    } else {
        Err(Failure::no(format!(
            "not equivalent: {} differs",
            e.reason.unwrap_or_else(|| "presentation".into())
        )))
    }
}

fn render(path: &str, out: Option<&str>) -> Result<(), Failure> {
    let svg = match read_document(path)? {
        Document::Surface(s) => emit_svg(&Drawable::Surface(&s))?,
        Document::Polygon(p, _) => {
            let outline = p
                .vertices()
                .iter()
                .map(|v| [v.x.to_f64(), v.y.to_f64()])
                .collect();
            emit_svg(&Drawable::Scene(Scene {
                outlines: vec![outline],
                paths: Vec::new(),
            }))?
        }
    };
    write_out(out, &svg)
}

fn gt_orbit(path: &str, t_max: f64, dt: f64, eps: f64) -> Result<RunReport, Failure> {
    let s = read_surface(path)?;
    let fs = gl2::to_float(&s, eps)?;
    let d = gl2::gt_orbit_diagnostics(&fs, t_max, dt)?;
    let mut r = RunReport::new("gt-orbit");
    r.config("input", path)
        .config("t_max", t_max)
        .config("dt", dt)
        .config("eps", eps);
    r.columns(&["t", "systole", "holonomy_x", "holonomy_y"]);
    for x in &d.samples {
        r.row(vec![f(x.t), f(x.systole), f(x.holonomy.x), f(x.holonomy.y)]);
    }
    r.summary("divergence_suspected", d.divergence_suspected);
    Ok(r)
}

fn termination(t: &Termination) -> String {
    match t {
        Termination::LengthBudget => "length".into(),
        Termination::VertexHit(v) => format!("vertex {v}"),
        Termination::PeriodClosed => "periodic".into(),
        Termination::SegmentCap => "segment cap".into(),
    }
}

fn segment_rows<S: Scalar>(r: &mut RunReport, t: &Trajectory<S>) {
    r.columns(&["segment", "carrier", "start_x", "start_y", "end_x", "end_y"]);
    for (i, s) in t.segments.iter().enumerate() {
        let (a, b) = (s.start.to_f64(), s.end.to_f64());
        r.row(vec![
            i.to_string(),
            s.carrier.to_string(),
            f(a.x),
            f(a.y),
            f(b.x),
            f(b.y),
        ]);
    }
    r.summary("termination", termination(&t.termination));
    r.summary("length", f(t.length()));
    r.summary("segments", t.segments.len());
    r.summary("periods", t.periods);
    if t.termination == Termination::SegmentCap {
        r.flag("segment cap reached");
    }
}

fn billiard_cmd(
    path: &str,
    start: &str,
    dir: &str,
    length: f64,
    float: bool,
    svg: Option<&str>,
) -> Result<RunReport, Failure> {
    let (p, _) = read_polygon(path)?;
    let (x, d) = (parse_vec(start)?, parse_vec(dir)?);
    let opts = FlowOptions::default();
    let mut r = RunReport::new("billiard");
    r.config("input", path)
        .config("start", start)
        .config("dir", dir)
        .config("length", length);
    r.config("arithmetic", if float { "float" } else { "exact" });
    let poly = FlatPolygons {
        polygons: vec![p.vertices().to_vec()],
        partner: vec![],
    };
    if float {
        let pf = poly.to_f64();
        let t = billiard(&pf.polygons[0], &x.to_f64(), &d.to_f64(), length, &opts)?;
        segment_rows(&mut r, &t);
        if let Some(out) = svg {
            write_out(Some(out), &emit_svg(&Drawable::trajectory(&pf, &t))?)?;
        }
    } else {
        let t = billiard(p.vertices(), &x, &d, length, &opts)?;
        segment_rows(&mut r, &t);
        if let Some(out) = svg {
            write_out(Some(out), &emit_svg(&Drawable::trajectory(&poly, &t))?)?;
        }
    }
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn flow_cmd(
    path: &str,
    polygon: Option<&str>,
    start: &str,
    dir: &str,
    lengths: &str,
    grid: usize,
    float: bool,
    svg: Option<&str>,
) -> Result<RunReport, Failure> {
    let s = read_surface(path)?;
    let pi = match polygon {
        Some(l) => s
            .polygon_index(l)
            .ok_or_else(|| Failure::error(format!("no polygon labelled '{l}'")))?,
        None => 0,
    };
    let (x, d) = (parse_vec(start)?, parse_vec(dir)?);
    let ls = parse_floats(lengths)?;
    let opts = FlowOptions {
        stop_at_period: false,
        ..FlowOptions::default()
    };
    let mut r = RunReport::new("flow");
    r.config("input", path)
        .config("polygon", s.polygon(pi).label.clone());
    r.config("start", start)
        .config("dir", dir)
        .config("grid", grid);
    r.config("arithmetic", if float { "float" } else { "exact" });
    r.columns(&["length", "discrepancy", "segments", "termination"]);
    let exact = FlatPolygons::from_surface(&s);
    let fl = exact.to_f64();
    for (i, &l) in ls.iter().enumerate() {
        let (disc, n, term) = if float {
            let t = linear_flow(&fl, pi, &x.to_f64(), &d.to_f64(), l, &opts)?;
            if i == 0 {
                if let Some(out) = svg {
                    write_out(Some(out), &emit_svg(&Drawable::trajectory(&fl, &t))?)?;
                }
            }
            (discrepancy(&t, &fl, grid)?, t.segments.len(), t.termination)
        } else {
            let t = linear_flow(&exact, pi, &x, &d, l, &opts)?;
            if i == 0 {
                if let Some(out) = svg {
                    write_out(Some(out), &emit_svg(&Drawable::trajectory(&exact, &t))?)?;
                }
            }
            (
                discrepancy(&t, &exact, grid)?,
                t.segments.len(),
                t.termination,
            )
        };
        if term == Termination::SegmentCap {
            r.flag(format!("segment cap reached at length {l}"));
        }
        r.row(vec![f(l), f(disc), n.to_string(), termination(&term)]);
    }
    Ok(r)
}

fn illuminate(path: &str, from: &str, to: &str, length: f64) -> Result<RunReport, Failure> {
    let (p, _) = read_polygon(path)?;
    let (y, x) = (parse_vec(from)?, parse_vec(to)?);
    match illuminates(&p, &x, &y, length)? {
        Illumination::FoundTrajectory(t) => {
            let mut r = RunReport::new("illuminate");
            r.config("input", path)
                .config("from", from)
                .config("to", to)
                .config("length", length);
            segment_rows(&mut r, &t);
            Ok(r)
        }
        Illumination::NotFoundWithinBound => {
            Err(Failure::no(format!("not found within length {length}")))
        }
    }
}

fn count(path: &str, length: f64, svg: Option<&str>) -> Result<RunReport, Failure> {
    let s = read_surface(path)?;
    let list = saddle_connections(&s, length)?;
    let mut r = RunReport::new("count");
    r.config("input", path).config("length", length);
    r.columns(&["holonomy_x", "holonomy_y", "length", "source", "target"]);
    for c in &list {
        let h = c.holonomy.to_f64();
        r.row(vec![
            f(h.x),
            f(h.y),
            f(c.length()),
            c.source.to_string(),
            c.target.to_string(),
        ]);
    }
    r.summary("count", list.len());
    if let Some(out) = svg {
        write_out(Some(out), &emit_svg(&Drawable::Connections(&list))?)?;
    }
    Ok(r)
}

fn growth(path: &str, lengths: &str) -> Result<RunReport, Failure> {
    let s = read_surface(path)?;
    let ls = parse_floats(lengths)?;
    let table = count_growth(&s, &ls)?;
    let mut r = RunReport::new("growth");
    r.config("input", path).config("lengths", lengths);
    r.columns(&["l", "count", "ratio", "cesaro"]);
    for row in &table.rows {
        r.row(vec![
            f(row.l),
            row.count.to_string(),
            f(row.ratio),
            f(row.cesaro),
        ]);
    }
    Ok(r)
}

fn diagonals(path: &str, length: f64) -> Result<RunReport, Failure> {
    let (p, _) = read_polygon(path)?;
    let list = generalized_diagonals(&p, length)?;
    let mut r = RunReport::new("diagonals");
    r.config("input", path).config("length", length);
    r.columns(&[
        "diagonal", "start_x", "start_y", "end_x", "end_y", "length", "bounces",
    ]);
    for (i, t) in list.iter().enumerate() {
        let a = t.segments[0].start.to_f64();
        let b = t.end().expect("diagonals are nonempty").to_f64();
        r.row(vec![
            i.to_string(),
            f(a.x),
            f(a.y),
            f(b.x),
            f(b.y),
            f(t.length()),
            (t.segments.len() - 1).to_string(),
        ]);
    }
    r.summary("count", list.len());
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn windtree_cmd(
    a: f64,
    b: f64,
    t_total: f64,
    runs: usize,
    seed: u64,
    window: f64,
    svg: Option<&str>,
    svg_length: f64,
) -> Result<RunReport, Failure> {
    if runs == 0 {
        return Err(Failure::error("runs must be positive"));
    }
    let cfgs = random_configs(a, b, t_total, runs, seed);
    let e = ensemble(&cfgs, window)?;
    let mut r = RunReport::new("windtree");
    r.config("a", a).config("b", b).config("T", t_total);
    r.config("runs", runs)
        .config("seed", seed)
        .config("window", window);
    r.columns(&["run", "t", "max_displacement"]);
    for (i, s) in e.runs.iter().enumerate() {
        for x in &s.samples {
            r.row(vec![i.to_string(), f(x.t), f(x.max_displacement)]);
        }
    }
    let drift = e.runs.iter().map(|s| s.speed_drift).fold(0.0, f64::max);
    let events: u64 = e.runs.iter().map(|s| s.events).sum();
    r.summary("exponent", f(e.exponent.estimate));
    r.summary(
        "exponent_ci",
        format!("{} {}", f(e.exponent.ci.0), f(e.exponent.ci.1)),
    );
    r.summary("events", events);
    r.summary("speed_drift", format!("{drift:e}"));
    r.summary("corner_hits", e.corner_hits);
    if e.corner_hits > 0 {
        r.flag(format!(
            "{} runs stopped on a scatterer corner",
            e.corner_hits
        ));
    }
    if let Some(out) = svg {
        let first = WindTreeConfig {
            t_total: svg_length,
            ..cfgs[0].clone()
        };
        write_out(Some(out), &windtree_svg(&first)?)?;
    }
    Ok(r)
}

fn windtree_svg(cfg: &WindTreeConfig) -> Result<String, Failure> {
    let (_, pts) = windtree::trace(cfg)?;
    let path: Vec<[f64; 2]> = pts.iter().map(|&(x, y)| [x, y]).collect();
    let (lo, hi) = path.iter().fold(
        ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]),
        |(lo, hi), p| {
            (
                [lo[0].min(p[0]), lo[1].min(p[1])],
                [hi[0].max(p[0]), hi[1].max(p[1])],
            )
        },
    );
    let (x0, x1) = ((1.0 - cfg.a) / 2.0, (1.0 + cfg.a) / 2.0);
    let (y0, y1) = ((1.0 - cfg.b) / 2.0, (1.0 + cfg.b) / 2.0);
    let mut outlines = Vec::new();
    for i in (lo[0].floor() as i64 - 1)..=(hi[0].ceil() as i64) {
        for j in (lo[1].floor() as i64 - 1)..=(hi[1].ceil() as i64) {
            let (fi, fj) = (i as f64, j as f64);
            outlines.push(vec![
                [fi + x0, fj + y0],
                [fi + x1, fj + y0],
                [fi + x1, fj + y1],
                [fi + x0, fj + y1],
            ]);
        }
    }
    Ok(emit_svg(&Drawable::Scene(Scene {
        outlines,
        paths: vec![path],
    }))?)
}
