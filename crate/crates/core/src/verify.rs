//! The acceptance suite as a library: ten end-to-end checks, each returning
//! a pass/fail line with details.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::bridge::{
    check_semiring_homomorphism, compile_polytope_expr, newton_polytope, support_function,
};
use crate::cpwl::{evaluate, AffineFn, MaxAffine, WangSunForm};
use crate::depth::{
    assumed_interval, constructible_triples, generate_max_example, perturbed_sum, rule_sum,
    zero_max_pair, Bounds, GenOptions, MnBound,
};
use crate::error::Result;
use crate::geom::{convex_hull, graph, minkowski_sum_all, Polytope};
use crate::point::Point;
use crate::polydepth::{
    cyclic_standard, depth_bounds, depth_bounds_with, generic_zonotope, octahedron,
    polygon_decompose, realize, simplex, triangular_bipyramid, vertex_split_expr,
    zonotope_vertex_count, BoundsOptions, PolyRule, PolytopeExpr,
};
use crate::rational::{ceil_log2, int, ratio, Rational};
use crate::relu::{compile_wang_sun, eval_net};
use crate::sample::{sample_set, Sampler, DEFAULT_SAMPLES, DEFAULT_SEED};

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "{} criterion {:>2} ({}): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail
        )
    }
}

pub const TITLES: [&str; 10] = [
    "compiler depth bound",
    "sum rule",
    "max-example families",
    "zonotope vertex count",
    "polygon decomposition",
    "simplex depth",
    "cyclic polytopes",
    "special solids",
    "tropical bridge",
    "perturbation and non-closedness",
];

type Outcome = Result<std::result::Result<String, String>>;

fn fail<T>(msg: String) -> std::result::Result<T, String> {
    Err(msg)
}

pub fn run_criterion(id: usize, opts: &VerifyOptions) -> CriterionReport {
    let outcome: Outcome = match id {
        1 => compiler_depth(opts),
        2 => sum_rule(opts),
        3 => max_families(opts),
        4 => zonotope_counts(opts),
        5 => polygons(opts),
        6 => simplices(),
        7 => cyclic(),
        8 => solids(),
        9 => bridge(opts),
        10 => perturbation(opts),
        _ => Ok(Err(format!("no criterion {id}"))),
    };
    let (passed, detail) = match outcome {
        Ok(Ok(d)) => (true, d),
        Ok(Err(d)) => (false, d),
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionReport {
        id,
        title: TITLES.get(id.wrapping_sub(1)).copied().unwrap_or("unknown"),
        passed,
        detail,
    }
}

pub fn run_all(opts: &VerifyOptions) -> Vec<CriterionReport> {
    (1..=10).map(|id| run_criterion(id, opts)).collect()
}

/// Random form with at most four terms of at most `n + 1` arguments.
pub fn random_wang_sun(s: &mut Sampler, n: usize) -> Result<WangSunForm> {
    let terms = (0..s.int(1, 4))
        .map(|_| {
            let p = s.int(1, n as i64 + 1) as usize;
            let args = (0..p)
                .map(|_| AffineFn::new(s.int_point(n, -3, 3), s.rational(-2, 2)))
                .collect();
            Ok((s.rational(-3, 3), MaxAffine::new(args)?))
        })
        .collect::<Result<Vec<_>>>()?;
    WangSunForm::new(n, terms, s.rational(-2, 2))
}

fn compiler_depth(opts: &VerifyOptions) -> Outcome {
    let mut s = Sampler::new(opts.seed);
    let mut instances = 0;
    for n in 1..=7 {
        for k in 0..3u64 {
            let form = random_wang_sun(&mut s, n)?;
            let net = compile_wang_sun(&form)?;
            let bound = ceil_log2(n + 1) as usize;
            if net.hidden_depth() > bound {
                return Ok(fail(format!("n = {n}: depth {} > {bound}", net.hidden_depth())));
            }
            let pts = sample_set(n, opts.samples, opts.seed ^ (n as u64 * 31 + k), &[]);
            for x in &pts {
                if eval_net(&net, x)? != form.eval(x)? {
                    return Ok(fail(format!("n = {n}: network differs at {x}")));
                }
            }
            instances += 1;
        }
    }
    Ok(Ok(format!(
        "{instances} forms, n = 1..7, {} points each",
        opts.samples
    )))
}

/// Depths the sum of functions of depths in `a` and `b` may take.
pub fn permitted_sum_depths(a: Bounds, b: Bounds) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for m1 in a.lower..=a.upper {
        for m2 in b.lower..=b.upper {
            if m1 == m2 {
                out.extend(0..=m1);
            } else {
                out.insert(m1.max(m2));
            }
        }
    }
    out
}

fn sum_rule(opts: &VerifyOptions) -> Outcome {
    let exact = |m| assumed_interval(Bounds::exact(m));
    let a = rule_sum(&exact(2)?, &exact(3)?)?;
    let b = rule_sum(&exact(2)?, &exact(2)?)?;
    if a.bounds() != Bounds::exact(3) || b.bounds() != Bounds::new(0, 2) {
        return Ok(fail(format!("examples gave {} and {}", a.bounds(), b.bounds())));
    }
    if a.replay()? != a.bounds() || b.replay()? != b.bounds() {
        return Ok(fail("replay mismatch".into()));
    }
    let mut s = Sampler::new(opts.seed);
    for _ in 0..100 {
        let mut draw = || {
            let l = s.int(0, 4) as usize;
            Bounds::new(l, l + s.int(0, 2) as usize)
        };
        let (x, y) = (draw(), draw());
        let r = rule_sum(&assumed_interval(x)?, &assumed_interval(y)?)?;
        if let Some(m) = permitted_sum_depths(x, y).into_iter().find(|&m| !r.contains(m)) {
            return Ok(fail(format!("{x} + {y} gave {} missing {m}", r.bounds())));
        }
        if r.replay()? != r.bounds() {
            return Ok(fail(format!("replay mismatch for {x} + {y}")));
        }
    }
    Ok(Ok("[3,3] and [0,2] reproduced; 100 random pairs sound".into()))
}

fn max_families(opts: &VerifyOptions) -> Outcome {
    let gen = GenOptions {
        conjecture: false,
        samples: opts.samples,
        seed: opts.seed,
    };
    let triples = constructible_triples(2, &gen)?;
    for required in [(1, 1, 2), (2, 2, 0), (2, 2, 1), (2, 2, 2), (1, 2, 1), (1, 2, 2)] {
        if !triples.contains(&required) {
            return Ok(fail(format!("triple {required:?} not constructible")));
        }
    }
    let mut points = 0;
    for &(m1, m2, ms) in &triples {
        let ex = generate_max_example(m1, m2, ms, 2, &gen)?;
        let pts = sample_set(2, opts.samples, opts.seed, &crate::depth::probe_points(2));
        for x in &pts {
            let lhs = evaluate(&ex.f1, x)?.max(evaluate(&ex.f2, x)?);
            if lhs != evaluate(&ex.f3, x)? {
                return Ok(fail(format!("max identity fails for {:?} at {x}", (m1, m2, ms))));
            }
        }
        if (ex.i1.bounds(), ex.i2.bounds(), ex.max_interval.bounds())
            != (Bounds::exact(m1), Bounds::exact(m2), Bounds::exact(ms))
        {
            return Ok(fail(format!("intervals not exact for {:?}", (m1, m2, ms))));
        }
        points += pts.len();
    }
    let mn = MnBound::new(2, false)?;
    let pair = zero_max_pair(1, 2, &mn)?;
    for x in sample_set(2, opts.samples, opts.seed, &crate::depth::probe_points(2)) {
        let v = evaluate(&pair.low, &x)?.max(evaluate(&pair.high, &x)?);
        if v != int(0) {
            return Ok(fail(format!("zero-max pair gives {v} at {x}")));
        }
    }
    Ok(Ok(format!(
        "{} triples, {points} point checks, zero-max pair (1,2) holds",
        triples.len()
    )))
}

fn zonotope_counts(opts: &VerifyOptions) -> Outcome {
    let mut cases = Vec::new();
    for p in 2..=6 {
        cases.push((2, p));
    }
    for p in 3..=6 {
        cases.push((3, p));
    }
    for &(n, p) in &cases {
        let z = generic_zonotope(n, p, opts.seed)?;
        let expect = zonotope_vertex_count(n, p)?;
        if z.polytope.num_vertices() as u128 != expect {
            return Ok(fail(format!(
                "(n, p) = ({n}, {p}): {} vertices, expected {expect}",
                z.polytope.num_vertices()
            )));
        }
    }
    Ok(Ok(format!("{} cases, (3,5) has 22 vertices", cases.len())))
}

/// Hull of `k` random integer points in `[−r, r]ⁿ`.
pub fn random_polytope(s: &mut Sampler, n: usize, k: usize, r: i64) -> Result<Polytope> {
    let pts: Vec<Point> = (0..k).map(|_| s.int_point(n, -r, r)).collect();
    convex_hull(&pts)
}

fn polygons(opts: &VerifyOptions) -> Outcome {
    let mut s = Sampler::new(opts.seed);
    let mut done = 0;
    let mut summands = 0;
    while done < 100 {
        let k = s.int(3, 12) as usize;
        let p = random_polytope(&mut s, 2, k, 10)?;
        if p.intrinsic_dim() != 2 || p.num_vertices() > 12 {
            continue;
        }
        let parts = polygon_decompose(&p)?;
        if parts.iter().any(|q| q.num_vertices() > 3) {
            return Ok(fail("summand with more than three vertices".into()));
        }
        if !minkowski_sum_all(&parts)?.eq_up_to_translation(&p) {
            return Ok(fail(format!("re-sum differs for polygon {done}")));
        }
        let b = depth_bounds(&p);
        if b.upper > 2 {
            return Ok(fail(format!("polygon upper bound {}", b.upper)));
        }
        summands += parts.len();
        done += 1;
    }
    Ok(Ok(format!("100 polygons, {summands} summands re-summed exactly")))
}

fn rule_bound(i: &crate::polydepth::PolyDepthInterval, pick: fn(&PolyRule) -> bool, lower: bool) -> Option<usize> {
    i.certificate
        .iter()
        .find(|a| pick(&a.rule))
        .and_then(|a| if lower { a.lower } else { a.upper })
}

fn simplices() -> Outcome {
    for n in 1..=7 {
        let s = simplex(n)?;
        let i = depth_bounds(&s.polytope);
        let m = ceil_log2(n + 1) as usize;
        if i.bounds() != Bounds::exact(m) {
            return Ok(fail(format!("{n}-simplex gave {i}, expected [{m}, {m}]")));
        }
        let clique = rule_bound(&i, |r| matches!(r, PolyRule::Clique { .. }), true);
        let vertex = rule_bound(&i, |r| matches!(r, PolyRule::VertexSplit { .. }), false);
        if clique != Some(m) || vertex != Some(m) {
            return Ok(fail(format!("{n}-simplex: clique {clique:?}, vertex {vertex:?}")));
        }
        i.replay()?;
    }
    Ok(Ok("n = 1..7 exact with clique and vertex rules agreeing".into()))
}

fn cyclic() -> Outcome {
    let mut depths = Vec::new();
    for p in 5..=10 {
        let c = cyclic_standard(4, p)?;
        let g = graph(&c.polytope);
        if c.polytope.num_vertices() != p || g.num_edges() != p * (p - 1) / 2 {
            return Ok(fail(format!("C(4,{p}) graph has {} edges", g.num_edges())));
        }
        let i = depth_bounds(&c.polytope);
        let m = ceil_log2(p) as usize;
        if i.bounds() != Bounds::exact(m) {
            return Ok(fail(format!("C(4,{p}) gave {i}, expected [{m}, {m}]")));
        }
        depths.push(m);
    }
    Ok(Ok(format!("p = 5..10 complete graphs, depths {depths:?}")))
}

fn solids() -> Outcome {
    let o = octahedron()?;
    let io = depth_bounds_with(&o.polytope, &o.provenance, &BoundsOptions::default());
    let tb = triangular_bipyramid()?;
    let with = depth_bounds_with(&tb.polytope, &tb.provenance, &BoundsOptions::default());
    let without = depth_bounds_with(
        &tb.polytope,
        &tb.provenance,
        &BoundsOptions {
            known_results: false,
        },
    );
    for i in [&io, &with, &without] {
        i.replay()?;
    }
    let got = (io.bounds(), with.bounds(), without.bounds());
    if got != (Bounds::exact(2), Bounds::exact(3), Bounds::new(2, 3)) {
        return Ok(fail(format!("octahedron {io}, bipyramid {with} / {without}")));
    }
    Ok(Ok("octahedron [2,2]; triangular bipyramid [3,3], [2,3] without table".into()))
}

/// Random construction tree of depth at most `depth` in ℝⁿ.
pub fn random_polytope_expr(s: &mut Sampler, n: usize, depth: usize) -> PolytopeExpr {
    if depth == 0 || s.int(0, 3) == 0 {
        return PolytopeExpr::point(s.int_point(n, -3, 3));
    }
    let k = s.int(2, 3) as usize;
    let children = (0..k).map(|_| random_polytope_expr(s, n, depth - 1)).collect();
    if s.coin() {
        PolytopeExpr::conv(children)
    } else {
        PolytopeExpr::sum(children)
    }
}

fn bridge(opts: &VerifyOptions) -> Outcome {
    let mut s = Sampler::new(opts.seed);
    let net_points = opts.samples.min(200);
    for k in 0..50 {
        let n = s.int(1, 4) as usize;
        let (kp, kq) = (s.int(1, 7) as usize, s.int(1, 7) as usize);
        let p = random_polytope(&mut s, n, kp, 4)?;
        let q = random_polytope(&mut s, n, kq, 4)?;
        let h = check_semiring_homomorphism(&p, &q, 200, opts.seed + k)?;
        if !h.holds {
            return Ok(fail(format!("pair {k}: {:?} fails at {:?}", h.failed_identity, h.witness)));
        }
        for poly in [&p, &q] {
            if newton_polytope(&support_function(poly))? != *poly {
                return Ok(fail(format!("pair {k}: Newton round trip differs")));
            }
        }
        let trees = [
            vertex_split_expr(p.vertices())?,
            random_polytope_expr(&mut s, n, 3),
        ];
        for e in &trees {
            let net = compile_polytope_expr(e)?;
            let f = support_function(&realize(e)?);
            if net.hidden_depth() != e.structural_depth() {
                return Ok(fail(format!("pair {k}: network depth differs from tree depth")));
            }
            for x in s.points(n, net_points) {
                if eval_net(&net, &x)? != f.eval(&x) {
                    return Ok(fail(format!("pair {k}: network differs at {x}")));
                }
            }
        }
    }
    Ok(Ok(format!(
        "50 pairs, homomorphisms and round trips exact, networks checked at {net_points} points"
    )))
}

fn perturbation(opts: &VerifyOptions) -> Outcome {
    let gen = GenOptions {
        conjecture: false,
        samples: opts.samples,
        seed: opts.seed,
    };
    let alphas: [Rational; 3] = [int(2), ratio(1, 2), ratio(101, 100)];
    for a in &alphas {
        let ps = perturbed_sum(2, 1, a, &gen)?;
        if ps.interval.bounds() != Bounds::exact(1) {
            return Ok(fail(format!("alpha = {a}: {}", ps.interval.bounds())));
        }
    }
    let one = perturbed_sum(2, 1, &int(1), &gen)?;
    if one.interval.bounds() != Bounds::exact(0) {
        return Ok(fail(format!("alpha = 1: {}", one.interval.bounds())));
    }
    Ok(Ok("alpha in {2, 1/2, 101/100} gives [1,1]; alpha = 1 gives [0,0]".into()))
}
