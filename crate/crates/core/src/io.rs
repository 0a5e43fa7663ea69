//! JSON formats for polytopes, construction trees, CPWL expressions and
//! networks. Rationals are written as `"p"` or `"p/q"` strings; integer
//! JSON numbers are accepted on input.

use serde::Serializer;
use serde_json::{json, Map, Value};

use crate::cpwl::{AffineFn, CpwlExpr};
use crate::error::{check_dim, Error, Result};
use crate::geom::{convex_hull, Polytope};
use crate::matrix::Matrix;
use crate::point::Point;
use crate::polydepth::{PolytopeExpr, Provenance};
use crate::rational::{self, Rational};
use crate::relu::{Activation, Layer, ReluNetwork};

fn malformed(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| malformed(format!("missing field {key:?}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| malformed(format!("{what} must be an array")))
}

fn usize_field(v: &Value, key: &str) -> Result<usize> {
    field(v, key)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| malformed(format!("{key:?} must be a nonnegative integer")))
}

fn str_field<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    field(v, key)?
        .as_str()
        .ok_or_else(|| malformed(format!("{key:?} must be a string")))
}

pub fn rational_to_json(q: &Rational) -> Value {
    Value::String(rational::format(q))
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => rational::parse(s),
        Value::Number(n) if n.is_i64() => Ok(rational::int(n.as_i64().expect("checked"))),
        _ => Err(malformed(format!("expected a rational string, found {v}"))),
    }
}

pub fn point_to_json(p: &Point) -> Value {
    Value::Array(p.0.iter().map(rational_to_json).collect())
}

pub fn point_from_json(v: &Value) -> Result<Point> {
    Ok(Point(
        array(v, "point")?
            .iter()
            .map(rational_from_json)
            .collect::<Result<_>>()?,
    ))
}

fn points_to_json(ps: &[Point]) -> Value {
    Value::Array(ps.iter().map(point_to_json).collect())
}

fn points_from_json(v: &Value) -> Result<Vec<Point>> {
    array(v, "point list")?.iter().map(point_from_json).collect()
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(
        m.row_vectors()
            .iter()
            .map(|r| Value::Array(r.iter().map(rational_to_json).collect()))
            .collect(),
    )
}

pub fn matrix_from_json(v: &Value, cols: usize) -> Result<Matrix> {
    let rows = array(v, "matrix")?
        .iter()
        .map(|r| point_from_json(r).map(|p| p.0))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows, cols)
}

pub(crate) fn ser_opt_point<S: Serializer>(p: &Option<Point>, s: S) -> Result<S::Ok, S::Error> {
    match p {
        Some(p) => s.serialize_some(&point_to_json(p)),
        None => s.serialize_none(),
    }
}

pub fn provenance_to_json(p: &Provenance) -> Value {
    match p {
        Provenance::Raw => json!({"kind": "raw"}),
        Provenance::Simplex { n } => json!({"kind": "simplex", "n": n}),
        Provenance::Cyclic { n, params } => json!({
            "kind": "cyclic",
            "n": n,
            "params": Value::Array(params.iter().map(rational_to_json).collect()),
        }),
        Provenance::Zonotope { generators } => {
            json!({"kind": "zonotope", "generators": points_to_json(generators)})
        }
        Provenance::Pyramid { base, apex } => {
            json!({"kind": "pyramid", "base": points_to_json(base), "apex": point_to_json(apex)})
        }
        Provenance::Prism { base, direction } => json!({
            "kind": "prism",
            "base": points_to_json(base),
            "direction": point_to_json(direction),
        }),
        Provenance::Bipyramid { base, apices } => json!({
            "kind": "bipyramid",
            "base": points_to_json(base),
            "apices": points_to_json(apices),
        }),
        Provenance::FromExpr(e) => json!({"kind": "expression", "expr": polytope_expr_to_json(e)}),
    }
}

pub fn provenance_from_json(v: &Value) -> Result<Provenance> {
    Ok(match str_field(v, "kind")? {
        "raw" => Provenance::Raw,
        "simplex" => Provenance::Simplex {
            n: usize_field(v, "n")?,
        },
        "cyclic" => Provenance::Cyclic {
            n: usize_field(v, "n")?,
            params: array(field(v, "params")?, "params")?
                .iter()
                .map(rational_from_json)
                .collect::<Result<_>>()?,
        },
        "zonotope" => Provenance::Zonotope {
            generators: points_from_json(field(v, "generators")?)?,
        },
        "pyramid" => Provenance::Pyramid {
            base: points_from_json(field(v, "base")?)?,
            apex: point_from_json(field(v, "apex")?)?,
        },
        "prism" => Provenance::Prism {
            base: points_from_json(field(v, "base")?)?,
            direction: point_from_json(field(v, "direction")?)?,
        },
        "bipyramid" => {
            let apices = points_from_json(field(v, "apices")?)?;
            let [a, b]: [Point; 2] = apices
                .try_into()
                .map_err(|_| malformed("a bipyramid has two apices"))?;
            Provenance::Bipyramid {
                base: points_from_json(field(v, "base")?)?,
                apices: [a, b],
            }
        }
        "expression" => Provenance::FromExpr(polytope_expr_from_json(field(v, "expr")?)?),
        other => return Err(malformed(format!("unknown provenance kind {other:?}"))),
    })
}

/// `{"dim", "vertices", "provenance"?}` with sorted canonical vertices.
pub fn polytope_to_json(p: &Polytope, prov: &Provenance) -> Value {
    let mut m = Map::new();
    m.insert("dim".into(), json!(p.dim()));
    m.insert("vertices".into(), points_to_json(p.vertices()));
    if !matches!(prov, Provenance::Raw) {
        m.insert("provenance".into(), provenance_to_json(prov));
    }
    Value::Object(m)
}

/// Reads a polytope; the listed points need not be in convex position.
pub fn polytope_from_json(v: &Value) -> Result<(Polytope, Provenance)> {
    let dim = usize_field(v, "dim")?;
    let pts = points_from_json(field(v, "vertices")?)?;
    for p in &pts {
        check_dim(dim, p.dim())?;
    }
    let poly = convex_hull(&pts)?;
    let prov = match v.get("provenance") {
        Some(p) => provenance_from_json(p)?,
        None => Provenance::Raw,
    };
    Ok((poly, prov))
}

pub fn polytope_expr_to_json(e: &PolytopeExpr) -> Value {
    match e {
        PolytopeExpr::Point(p) => json!({"op": "point", "coords": point_to_json(p)}),
        PolytopeExpr::Conv(cs) => json!({
            "op": "conv",
            "args": Value::Array(cs.iter().map(polytope_expr_to_json).collect()),
        }),
        PolytopeExpr::Sum(cs) => json!({
            "op": "sum",
            "args": Value::Array(cs.iter().map(polytope_expr_to_json).collect()),
        }),
    }
}

pub fn polytope_expr_from_json(v: &Value) -> Result<PolytopeExpr> {
    let args = || -> Result<Vec<PolytopeExpr>> {
        array(field(v, "args")?, "args")?
            .iter()
            .map(polytope_expr_from_json)
            .collect()
    };
    let e = match str_field(v, "op")? {
        "point" => PolytopeExpr::Point(point_from_json(field(v, "coords")?)?),
        "conv" => PolytopeExpr::Conv(args()?),
        "sum" => PolytopeExpr::Sum(args()?),
        other => return Err(malformed(format!("unknown polytope op {other:?}"))),
    };
    e.dim()?;
    Ok(e)
}

fn cpwl_node_to_json(f: &CpwlExpr) -> Value {
    match f {
        CpwlExpr::Affine(l) => json!({
            "op": "affine",
            "coeffs": point_to_json(&l.coeffs),
            "constant": rational_to_json(&l.constant),
        }),
        CpwlExpr::Sum(ts) => json!({
            "op": "sum",
            "args": Value::Array(ts.iter().map(cpwl_node_to_json).collect()),
        }),
        CpwlExpr::Max(ts) => json!({
            "op": "max",
            "args": Value::Array(ts.iter().map(cpwl_node_to_json).collect()),
        }),
        CpwlExpr::Scale(a, e) => json!({
            "op": "scale",
            "factor": rational_to_json(a),
            "arg": cpwl_node_to_json(e),
        }),
        CpwlExpr::Compose {
            inner,
            matrix,
            offset,
        } => json!({
            "op": "compose",
            "matrix": matrix_to_json(matrix),
            "offset": point_to_json(offset),
            "arg": cpwl_node_to_json(inner),
        }),
    }
}

/// Root node carries `"dim"`.
pub fn cpwl_to_json(f: &CpwlExpr) -> Result<Value> {
    let dim = f.dim()?;
    let mut v = cpwl_node_to_json(f);
    v.as_object_mut()
        .expect("nodes are objects")
        .insert("dim".into(), json!(dim));
    Ok(v)
}

fn cpwl_node_from_json(v: &Value, dim: usize) -> Result<CpwlExpr> {
    let args = || -> Result<Vec<CpwlExpr>> {
        array(field(v, "args")?, "args")?
            .iter()
            .map(|a| cpwl_node_from_json(a, dim))
            .collect()
    };
    Ok(match str_field(v, "op")? {
        "affine" => {
            let coeffs = point_from_json(field(v, "coeffs")?)?;
            check_dim(dim, coeffs.dim())?;
            let constant = match v.get("constant") {
                Some(c) => rational_from_json(c)?,
                None => rational::int(0),
            };
            CpwlExpr::Affine(AffineFn::new(coeffs, constant))
        }
        "sum" => CpwlExpr::Sum(args()?),
        "max" => CpwlExpr::Max(args()?),
        "scale" => CpwlExpr::scale(
            rational_from_json(field(v, "factor")?)?,
            cpwl_node_from_json(field(v, "arg")?, dim)?,
        ),
        "compose" => {
            let matrix = matrix_from_json(field(v, "matrix")?, dim)?;
            let offset = point_from_json(field(v, "offset")?)?;
            let inner = cpwl_node_from_json(field(v, "arg")?, matrix.rows())?;
            CpwlExpr::compose(inner, matrix, offset)
        }
        other => return Err(malformed(format!("unknown expression op {other:?}"))),
    })
}

pub fn cpwl_from_json(v: &Value) -> Result<CpwlExpr> {
    let dim = usize_field(v, "dim")?;
    let f = cpwl_node_from_json(v, dim)?;
    check_dim(dim, f.dim()?)?;
    Ok(f)
}

pub fn network_to_json(net: &ReluNetwork) -> Value {
    let layers: Vec<Value> = net
        .layers()
        .iter()
        .map(|l| {
            json!({
                "weights": matrix_to_json(&l.weights),
                "bias": point_to_json(&l.bias),
                "activation": match l.activation {
                    Activation::Relu => "relu",
                    Activation::None => "none",
                },
            })
        })
        .collect();
    json!({"input_dim": net.input_dim(), "layers": layers})
}

pub fn network_from_json(v: &Value) -> Result<ReluNetwork> {
    let input_dim = usize_field(v, "input_dim")?;
    let mut width = input_dim;
    let mut layers = Vec::new();
    for l in array(field(v, "layers")?, "layers")? {
        let weights = matrix_from_json(field(l, "weights")?, width)?;
        let bias = point_from_json(field(l, "bias")?)?;
        let activation = match str_field(l, "activation")? {
            "relu" => Activation::Relu,
            "none" => Activation::None,
            other => return Err(malformed(format!("unknown activation {other:?}"))),
        };
        width = weights.rows();
        layers.push(Layer::new(weights, bias, activation)?);
    }
    ReluNetwork::new(input_dim, layers)
}

pub fn parse_json(text: &str) -> Result<Value> {
    Ok(serde_json::from_str(text)?)
}
