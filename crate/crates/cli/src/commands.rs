use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use pwldepth::bridge::{
    check_semiring_homomorphism, compile_polytope_expr, newton_polytope, poly_depth_consistency,
    support_function, SupportFn,
};
use pwldepth::cpwl::{evaluate, CpwlExpr, MaxAffine};
use pwldepth::depth::{
    assumed_interval, generate_max_example, interval_from_construction, replay_certificate,
    rule_affine_max, rule_max, rule_sum, DepthInterval, GenOptions, MnBound,
};
use pwldepth::geom::{convex_hull, graph, max_clique, minkowski_sum, Polytope};
use pwldepth::io::{
    cpwl_from_json, cpwl_to_json, network_from_json, network_to_json, point_to_json,
    polytope_expr_from_json, polytope_expr_to_json, polytope_from_json, polytope_to_json,
    rational_to_json,
};
use pwldepth::polydepth::{
    asymmetric_two_face, bipyramid, cyclic, cyclic_standard, depth_bounds_with,
    depth_upper_vertex_split, generic_zonotope, is_zonotope, octahedron, polygon_decompose, prism,
    pyramid, realize, simplex, triangular_bipyramid, zonotope, BoundsOptions, PolytopeExpr,
    Provenance, Tagged,
};
use pwldepth::relu::{compile_expr, depth_bound, eval_net, ReluNetwork};
use pwldepth::sample::{find_disagreement, sample_set};
use pwldepth::verify::{run_criterion, VerifyOptions};
use pwldepth::{rational, Point};

use crate::args::*;
use crate::output::*;

pub fn run(cli: &Cli) -> Result<()> {
    let mut out = Out::new(&cli.global);
    match &cli.command {
        Command::Cpwl(c) => cpwl(c, &mut out)?,
        Command::Net(c) => net(c, &mut out)?,
        Command::Depth(c) => depth(c, &mut out)?,
        Command::Gen(c) => gen(c, &mut out)?,
        Command::Poly(c) => poly(c, &mut out)?,
        Command::Bridge(c) => bridge(c, &mut out)?,
        Command::Verify(c) => verify(c, &mut out)?,
    }
    out.finish()
}

fn input(g: &Global) -> Result<Value> {
    read_json(g.input.as_deref())
}

fn input_polytope(g: &Global) -> Result<(Polytope, Provenance)> {
    polytope_arg(&input(g)?)
}

/// Accepts `vertices` or `points` for the point list.
fn polytope_arg(v: &Value) -> Result<(Polytope, Provenance)> {
    let mut v = v.clone();
    if let Some(obj) = v.as_object_mut() {
        if !obj.contains_key("vertices") {
            if let Some(p) = obj.remove("points") {
                obj.insert("vertices".into(), p);
            }
        }
        if !obj.contains_key("dim") {
            let d = obj
                .get("vertices")
                .and_then(Value::as_array)
                .and_then(|a| a.first())
                .and_then(Value::as_array)
                .map(Vec::len)
                .ok_or_else(|| anyhow!("polytope input needs \"dim\" or a nonempty point list"))?;
            obj.insert("dim".into(), json!(d));
        }
    }
    Ok(polytope_from_json(&v)?)
}

fn read_polytope_file(path: &std::path::Path) -> Result<(Polytope, Provenance)> {
    polytope_arg(&read_json(Some(path))?)
}

fn eval_points(points: &Points, n: usize, g: &Global) -> Result<Vec<Point>> {
    if points.at.is_empty() {
        return Ok(sample_set(n, g.samples, g.seed, &[]));
    }
    let pts = points.at.iter().map(|s| parse_point(s)).collect::<Result<Vec<_>>>()?;
    for p in &pts {
        if p.dim() != n {
            bail!("point {p} has dimension {}, expected {n}", p.dim());
        }
    }
    Ok(pts)
}

fn values_report(out: &mut Out, pts: &[Point], vals: &[pwldepth::Rational]) -> Result<()> {
    let v = Value::Array(
        pts.iter()
            .zip(vals)
            .map(|(p, y)| json!({"point": point_to_json(p), "value": rational_to_json(y)}))
            .collect(),
    );
    out.report(&v, |o| {
        for (p, y) in pts.iter().zip(vals) {
            o.line(format!("{p} -> {}", rational::format(y)));
        }
    })
}

fn cpwl(c: &CpwlCmd, out: &mut Out) -> Result<()> {
    let g = out.g;
    let f = cpwl_from_json(&input(g)?)?;
    let n = f.dim()?;
    match c {
        CpwlCmd::Eval(points) => {
            let pts = eval_points(points, n, g)?;
            let vals = pts.iter().map(|x| evaluate(&f, x)).collect::<pwldepth::Result<Vec<_>>>()?;
            values_report(out, &pts, &vals)
        }
        CpwlCmd::Compile => {
            let net = compile_expr(&f)?;
            let pts = sample_set(n, g.samples, g.seed, &[]);
            if let Some(x) = find_disagreement(&pts, |x| eval_net(&net, x).unwrap(), |x| evaluate(&f, x).unwrap()) {
                return Err(Failure(format!("compiled network disagrees with the expression at {x}")).into());
            }
            out.note(format!(
                "compiled to {} hidden layers; agrees with the expression at {} points",
                net.hidden_depth(),
                pts.len()
            ));
            out.json(&network_to_json(&net))
        }
    }
}

fn net_info(net: &ReluNetwork) -> Value {
    json!({
        "input_dim": net.input_dim(),
        "output_dim": net.output_dim(),
        "hidden_depth": net.hidden_depth(),
        "hidden_widths": net.hidden_widths(),
        "neurons": net.hidden_widths().iter().sum::<usize>(),
    })
}

fn net(c: &NetCmd, out: &mut Out) -> Result<()> {
    let g = out.g;
    let net = network_from_json(&input(g)?)?;
    match c {
        NetCmd::Eval(points) => {
            let pts = eval_points(points, net.input_dim(), g)?;
            let vals = pts.iter().map(|x| eval_net(&net, x)).collect::<pwldepth::Result<Vec<_>>>()?;
            values_report(out, &pts, &vals)
        }
        NetCmd::Info => {
            let info = net_info(&net);
            out.report(&info, |o| {
                o.line(format!("input dimension: {}", net.input_dim()));
                o.line(format!("output dimension: {}", net.output_dim()));
                o.line(format!("hidden layers: {}", net.hidden_depth()));
                o.line(format!("hidden widths: {:?}", net.hidden_widths()));
            })
        }
    }
}

fn depth(c: &DepthCmd, out: &mut Out) -> Result<()> {
    let g = out.g;
    match c {
        DepthCmd::Sum { i1, i2 } => {
            let a = assumed_interval(parse_bounds(i1)?)?;
            let b = assumed_interval(parse_bounds(i2)?)?;
            interval_report(out, "sum", &rule_sum(&a, &b)?)
        }
        DepthCmd::Max { i1, i2, n } => {
            let mn = MnBound::new(*n, g.assume_conjecture)?;
            let a = assumed_interval(parse_bounds(i1)?)?;
            let b = assumed_interval(parse_bounds(i2)?)?;
            interval_report(out, "max", &rule_max(&a, &b, &mn)?)
        }
        DepthCmd::AffineMax { p, n, dependent } => {
            let mn = MnBound::new(*n, g.assume_conjecture)?;
            interval_report(out, "affine max", &rule_affine_max(*p, !dependent, &mn)?)
        }
        DepthCmd::Interval => {
            let v = input(g)?;
            if v.get("certificate").is_some() {
                let claimed: DepthInterval =
                    serde_json::from_value(v).context("reading a depth interval with certificate")?;
                let replayed = replay_certificate(&claimed.certificate)?;
                if replayed != claimed.bounds() {
                    return Err(Failure(format!(
                        "certificate yields {replayed}, interval claims {}",
                        claimed.bounds()
                    ))
                    .into());
                }
                out.note("certificate replayed");
                interval_report(out, "replayed", &claimed)
            } else {
                let f = cpwl_from_json(&v)?;
                let i = interval_from_construction(depth_bound(&f)?, f.dim()?)?;
                interval_report(out, "expression", &i)
            }
        }
    }
}

fn emit_tagged(out: &mut Out, t: &Tagged) -> Result<()> {
    out.note(format!(
        "{} in R^{} with {} vertices",
        t.provenance.name(),
        t.polytope.dim(),
        t.polytope.num_vertices()
    ));
    out.json(&polytope_to_json(&t.polytope, &t.provenance))
}

/// A base read from the input, lifted by one coordinate when full-dimensional.
fn base_from_input(g: &Global) -> Result<Option<Polytope>> {
    if g.input.is_none() && std::io::IsTerminal::is_terminal(&std::io::stdin()) {
        return Ok(None);
    }
    let text = read_text(g.input.as_deref())?;
    if text.trim().is_empty() {
        return Ok(None);
    }
    let (p, _) = polytope_arg(&pwldepth::io::parse_json(&text)?)?;
    if p.intrinsic_dim() == p.dim() {
        let lifted: Vec<Point> = p.vertices().iter().map(|v| v.lift(1)).collect();
        return Ok(Some(convex_hull(&lifted)?));
    }
    Ok(Some(p))
}

fn base_or_simplex(g: &Global, n: Option<usize>) -> Result<Polytope> {
    if let Some(b) = base_from_input(g)? {
        return Ok(b);
    }
    let n = n.ok_or_else(|| anyhow!("give a base on the input or --n"))?;
    if n < 1 {
        bail!("--n must be at least 1");
    }
    let s = simplex(n - 1)?.polytope;
    let lifted: Vec<Point> = s.vertices().iter().map(|v| v.lift(1)).collect();
    Ok(convex_hull(&lifted)?)
}

fn last_unit(n: usize) -> Point {
    Point::unit(n, n - 1)
}

fn gen(c: &GenCmd, out: &mut Out) -> Result<()> {
    let g = out.g;
    match c {
        GenCmd::Simplex { n } => emit_tagged(out, &simplex(*n)?),
        GenCmd::Cyclic { n, p, params } => {
            let t = match params {
                Some(s) => {
                    let ts = parse_point(s)?;
                    cyclic(*n, ts.coords())?
                }
                None => cyclic_standard(*n, p.expect("clap requires --p"))?,
            };
            emit_tagged(out, &t)
        }
        GenCmd::Zonotope { n, p, generators } => {
            let t = match generators {
                Some(s) => {
                    let gens = parse_points(s)?;
                    if let Some(bad) = gens.iter().find(|v| v.dim() != *n) {
                        bail!("generator {bad} is not in R^{n}");
                    }
                    zonotope(&gens)?
                }
                None => generic_zonotope(*n, p.expect("clap requires --p"), g.seed)?,
            };
            emit_tagged(out, &t)
        }
        GenCmd::Bipyramid { base, apex1, apex2 } => {
            let t = match base_from_input(g)? {
                Some(b) => {
                    let n = b.dim();
                    let centre = b.centroid_of_vertices();
                    let a1 = match apex1 {
                        Some(s) => parse_point(s)?,
                        None => &centre + &last_unit(n),
                    };
                    let a2 = match apex2 {
                        Some(s) => parse_point(s)?,
                        None => &centre - &last_unit(n),
                    };
                    bipyramid(&b, &a1, &a2)?
                }
                None => match base {
                    BuiltinBase::Square => octahedron()?,
                    BuiltinBase::Triangle => triangular_bipyramid()?,
                },
            };
            emit_tagged(out, &t)
        }
        GenCmd::Prism { n, direction } => {
            let b = base_or_simplex(g, *n)?;
            let d = match direction {
                Some(s) => parse_point(s)?,
                None => last_unit(b.dim()),
            };
            emit_tagged(out, &prism(&b, &d)?)
        }
        GenCmd::Pyramid { n, apex } => {
            let b = base_or_simplex(g, *n)?;
            let a = match apex {
                Some(s) => parse_point(s)?,
                None => &b.centroid_of_vertices() + &last_unit(b.dim()),
            };
            emit_tagged(out, &pyramid(&b, &a)?)
        }
        GenCmd::MaxExample { n, m1, m2, m_star } => {
            let opts = GenOptions {
                conjecture: g.assume_conjecture,
                samples: g.samples,
                seed: g.seed,
            };
            let ex = generate_max_example(*m1, *m2, *m_star, *n, &opts)?;
            out.note(format!(
                "{}; max(f1, f2) = f3 checked at {} points",
                ex.case.describe(),
                ex.points_checked
            ));
            let mut v = json!({
                "n": ex.n,
                "depths": [ex.depths.0, ex.depths.1, ex.depths.2],
                "case": ex.case.describe(),
                "f1": cpwl_to_json(&ex.f1)?,
                "f2": cpwl_to_json(&ex.f2)?,
                "f3": cpwl_to_json(&ex.f3)?,
                "intervals": {
                    "f1": serde_json::to_value(&ex.i1)?,
                    "f2": serde_json::to_value(&ex.i2)?,
                    "f3": serde_json::to_value(&ex.i3)?,
                    "max": serde_json::to_value(&ex.max_interval)?,
                },
                "conditional": ex.is_conditional(),
                "points_checked": ex.points_checked,
            });
            if let Some((lo, hi)) = &ex.zero_pair {
                v["zero_pair"] = json!([cpwl_to_json(lo)?, cpwl_to_json(hi)?]);
            }
            out.json(&v)
        }
    }
}

fn index_sets(p: &Polytope, k: usize) -> Vec<Vec<usize>> {
    p.lattice().faces(k).to_vec()
}

fn poly(c: &PolyCmd, out: &mut Out) -> Result<()> {
    let g = out.g;
    let (p, prov) = input_polytope(g)?;
    match c {
        PolyCmd::Hull => {
            out.note(format!("{} vertices, {} facets", p.num_vertices(), p.facets().len()));
            out.json(&polytope_to_json(&p, &prov))
        }
        PolyCmd::Minksum { other } => {
            let (q, qprov) = read_polytope_file(other)?;
            let s = minkowski_sum(&p, &q)?;
            let sprov = match (&prov, &qprov) {
                (Provenance::FromExpr(a), Provenance::FromExpr(b)) => {
                    Provenance::FromExpr(PolytopeExpr::sum(vec![a.clone(), b.clone()]))
                }
                (Provenance::Zonotope { generators: a }, Provenance::Zonotope { generators: b })
                    if s.eq_up_to_translation(&zonotope(&[a.clone(), b.clone()].concat())?.polytope) =>
                {
                    zonotope(&[a.clone(), b.clone()].concat())?.provenance
                }
                _ => Provenance::Raw,
            };
            out.note(format!("sum has {} vertices", s.num_vertices()));
            let s = match sprov.rebuild()? {
                Some(r) => r,
                None => s,
            };
            out.json(&polytope_to_json(&s, &sprov))
        }
        PolyCmd::Faces { k } => {
            let f = p.lattice().f_vector();
            let ks: Vec<usize> = match k {
                Some(k) if *k > p.intrinsic_dim() => bail!("no faces of dimension {k}"),
                Some(k) => vec![*k],
                None => (0..=p.intrinsic_dim()).collect(),
            };
            let mut by_dim = serde_json::Map::new();
            for &k in &ks {
                by_dim.insert(k.to_string(), json!(index_sets(&p, k)));
            }
            let v = json!({"f_vector": f, "faces": by_dim});
            out.report(&v, |o| {
                o.line(format!("f-vector: {f:?}"));
                for &k in &ks {
                    o.line(format!("{k}-faces:"));
                    for face in index_sets(&p, k) {
                        o.line(format!("  {face:?}"));
                    }
                }
            })
        }
        PolyCmd::Graph => {
            let gr = graph(&p);
            let clique = max_clique(&gr);
            let v = json!({
                "vertices": p.num_vertices(),
                "edges": gr.edges(),
                "complete": gr.is_complete(),
                "max_clique": clique,
            });
            out.report(&v, |o| {
                o.line(format!("{} vertices, {} edges", p.num_vertices(), gr.num_edges()));
                o.line(format!("complete: {}", gr.is_complete()));
                o.line(format!("maximum clique ({}): {clique:?}", clique.len()));
            })
        }
        PolyCmd::IsZonotope => {
            let gens = is_zonotope(&p);
            let v = match &gens {
                Some(gs) => json!({
                    "zonotope": true,
                    "generators": gs.iter().map(point_to_json).collect::<Vec<_>>(),
                }),
                None => json!({"zonotope": false, "asymmetric_face": asymmetric_two_face(&p)}),
            };
            out.report(&v, |o| match &gens {
                Some(gs) => {
                    o.line(format!("zonotope with {} generators", gs.len()));
                    for g in gs {
                        o.line(format!("  {g}"));
                    }
                }
                None => o.line(format!(
                    "not a zonotope; 2-face without central symmetry: {:?}",
                    asymmetric_two_face(&p).unwrap_or_default()
                )),
            })
        }
        PolyCmd::Bounds { no_known, consistency } => {
            let opts = BoundsOptions { known_results: !no_known };
            let b = depth_bounds_with(&p, &prov, &opts);
            let mut v = serde_json::to_value(&b)?;
            v["vertices"] = json!(p.num_vertices());
            let mut extra = vec![format!("vertices: {}", p.num_vertices())];
            let mut failed = None;
            if *consistency {
                let r = poly_depth_consistency(&p, &prov, g.assume_conjecture, g.samples, g.seed)?;
                extra.push(format!("support function interval: {}", r.function));
                extra.push(format!("transferred interval: {}", r.transferred));
                for ch in &r.checks {
                    let mark = if ch.passed { "ok" } else { "FAILED" };
                    extra.push(format!("  {mark} {}: {}", ch.name, ch.detail));
                }
                if !r.is_consistent() {
                    failed = Some("polytope and function intervals are inconsistent");
                }
                v["consistency"] = serde_json::to_value(&r)?;
            }
            out.report(&v, |o| {
                o.line(format!("depth: {b}"));
                for e in extra {
                    o.line(e);
                }
            })?;
            if !g.json {
                poly_certificate_lines(out, &b.certificate)?;
            }
            match failed {
                Some(m) => Err(Failure(m.into()).into()),
                None => Ok(()),
            }
        }
        PolyCmd::Decompose { split } => {
            if p.intrinsic_dim() == 2 && !split {
                let parts = polygon_decompose(&p)?;
                out.note(format!("{} summands, each a segment or triangle", parts.len()));
                out.json(&json!({
                    "kind": "polygon",
                    "depth_upper": 2,
                    "summands": parts
                        .iter()
                        .map(|s| polytope_to_json(s, &Provenance::Raw))
                        .collect::<Vec<_>>(),
                }))
            } else {
                let (d, e) = depth_upper_vertex_split(&p);
                out.note(format!("vertex split tree of depth {d}"));
                out.json(&json!({
                    "kind": "vertex_split",
                    "depth_upper": d,
                    "expression": polytope_expr_to_json(&e),
                }))
            }
        }
    }
}

fn bridge(c: &BridgeCmd, out: &mut Out) -> Result<()> {
    let g = out.g;
    match c {
        BridgeCmd::Support => {
            let (p, _) = input_polytope(g)?;
            let f = support_function(&p);
            out.note(format!("max of {} linear functions", f.as_max_affine().len()));
            out.json(&cpwl_to_json(&CpwlExpr::from_max_affine(f.as_max_affine()))?)
        }
        BridgeCmd::Newton => {
            let e = cpwl_from_json(&input(g)?)?;
            let args = match e {
                CpwlExpr::Affine(l) => vec![l],
                CpwlExpr::Max(ts) => ts
                    .into_iter()
                    .map(|t| match t {
                        CpwlExpr::Affine(l) => Ok(l),
                        _ => Err(anyhow!("expected a max of affine functions")),
                    })
                    .collect::<Result<Vec<_>>>()?,
                _ => bail!("expected a max of linear functions"),
            };
            let f = SupportFn::new(MaxAffine::new(args)?)?;
            let p = newton_polytope(&f)?;
            out.note(format!("{} vertices", p.num_vertices()));
            out.json(&polytope_to_json(&p, &Provenance::Raw))
        }
        BridgeCmd::CheckHomomorphism { other } => {
            let (p, _) = input_polytope(g)?;
            let (q, _) = read_polytope_file(other)?;
            let r = check_semiring_homomorphism(&p, &q, g.samples, g.seed)?;
            let v = serde_json::to_value(&r)?;
            out.report(&v, |o| {
                let verdict = if r.holds { "holds" } else { "FAILS" };
                o.line(format!("homomorphism {verdict} at {} directions", r.directions_checked));
                if let (Some(id), Some(w)) = (&r.failed_identity, &r.witness) {
                    o.line(format!("  {id:?} identity fails at {w}"));
                }
            })?;
            if !r.holds {
                return Err(Failure("support function identities do not hold".into()).into());
            }
            Ok(())
        }
        BridgeCmd::Compile => {
            let v = input(g)?;
            let e = if v.get("op").is_some() {
                polytope_expr_from_json(&v)?
            } else {
                let (p, prov) = polytope_arg(&v)?;
                match prov {
                    Provenance::FromExpr(e) => e,
                    _ => depth_upper_vertex_split(&p).1,
                }
            };
            let net = compile_polytope_expr(&e)?;
            let f = support_function(&realize(&e)?);
            let pts = sample_set(e.dim()?, g.samples, g.seed, &[]);
            if let Some(x) = find_disagreement(&pts, |x| eval_net(&net, x).unwrap(), |x| f.eval(x)) {
                return Err(Failure(format!("network disagrees with the support function at {x}")).into());
            }
            out.note(format!(
                "{} hidden layers for a tree of depth {}; matches the support function at {} points",
                net.hidden_depth(),
                e.structural_depth(),
                pts.len()
            ));
            out.json(&network_to_json(&net))
        }
    }
}

fn verify(c: &VerifyCmd, out: &mut Out) -> Result<()> {
    let g = out.g;
    let VerifyCmd::All { only } = c;
    let ids: Vec<usize> = if only.is_empty() { (1..=10).collect() } else { only.clone() };
    if let Some(bad) = ids.iter().find(|i| !(1..=10).contains(*i)) {
        bail!("no criterion {bad}; criteria are numbered 1 to 10");
    }
    let opts = VerifyOptions {
        seed: g.seed,
        samples: g.samples,
    };
    let reports: Vec<_> = ids.iter().map(|&i| run_criterion(i, &opts)).collect();
    let passed = reports.iter().filter(|r| r.passed).count();
    let v = json!({"passed": passed, "total": reports.len(), "criteria": reports});
    out.report(&v, |o| {
        for r in &reports {
            o.line(r.line());
        }
        o.line(format!("{passed} of {} criteria passed", reports.len()));
    })?;
    if passed != reports.len() {
        return Err(Failure(format!("{} criteria failed", reports.len() - passed)).into());
    }
    Ok(())
}
