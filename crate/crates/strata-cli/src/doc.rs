//! The JSON document format: parsing with positions, canonical serialization.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, ToPrimitive, Zero};
use serde_json::{Map, Number, Value};
use strata::augment::{AugmentedGraph, Decoration};
use strata::config::{Component, Configuration, PointRef, SpecialPoint};
use strata::geom::{HomologyClass, TargetGeometry};
use strata::graph::{PrestableGraph, Vertex, VertexId};
use strata::simplify::{CoverDescriptor, GlueDescriptor, GlueTarget};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocError {
    pub message: String,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at line {} column {}", self.message, self.line, self.column)
    }
}

impl std::error::Error for DocError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Descriptor {
    Cover(CoverDescriptor),
    Glue(GlueDescriptor),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub context: TargetGeometry,
    pub graph: Option<PrestableGraph>,
    pub augmentation: Option<AugmentedGraph>,
    pub configuration: Option<Configuration>,
    pub descriptor: Option<Descriptor>,
}

impl Document {
    pub fn new(context: TargetGeometry) -> Self {
        Document {
            context,
            graph: None,
            augmentation: None,
            configuration: None,
            descriptor: None,
        }
    }

    pub fn with_augmented(context: TargetGeometry, g: AugmentedGraph) -> Self {
        Document {
            graph: Some(g.graph.clone()),
            augmentation: Some(g),
            ..Document::new(context)
        }
    }
}

type R<T> = Result<T, String>;

/// 1-based (line, column) of the first occurrence of `"key"`, or (1, 1).
pub fn locate(text: &str, key: &str) -> (usize, usize) {
    let Some(off) = text.find(&format!("\"{key}\"")) else {
        return (1, 1);
    };
    let before = &text[..off];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map(|s| s.chars().count()).unwrap_or(0) + 1;
    (line, column)
}

fn err_at(text: &str, key: &str, message: impl Into<String>) -> DocError {
    let (line, column) = locate(text, key);
    DocError {
        message: message.into(),
        line,
        column,
    }
}

/// Parses raw JSON, reporting syntax errors with their position.
pub fn parse_json(text: &str) -> Result<Value, DocError> {
    serde_json::from_str(text).map_err(|e| DocError {
        message: e.to_string(),
        line: e.line(),
        column: e.column(),
    })
}

pub fn big(v: &Value) -> R<BigInt> {
    match v {
        Value::Number(n) => BigInt::from_str(&n.to_string()).map_err(|_| format!("expected an integer, found {n}")),
        other => Err(format!("expected an integer, found {other}")),
    }
}

fn small<T: TryFrom<u64>>(v: &Value) -> R<T> {
    let b = big(v)?;
    b.to_u64()
        .and_then(|x| T::try_from(x).ok())
        .ok_or_else(|| format!("integer {b} out of range"))
}

pub fn rational(v: &Value) -> R<BigRational> {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(format!("expected a rational \"p/q\", found {other}")),
    };
    parse_rational(&s)
}

pub fn parse_rational(s: &str) -> R<BigRational> {
    let bad = || format!("malformed rational {s:?}");
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p = BigInt::from_str(p).map_err(|_| bad())?;
    let q = BigInt::from_str(q).map_err(|_| bad())?;
    if q.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(BigRational::new(p, q))
}

fn arr<'a>(v: &'a Value, what: &str) -> R<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| format!("{what} must be an array"))
}

fn obj<'a>(v: &'a Value, what: &str) -> R<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| format!("{what} must be an object"))
}

fn get<'a>(o: &'a Map<String, Value>, key: &str, what: &str) -> R<&'a Value> {
    o.get(key).ok_or_else(|| format!("{what} is missing \"{key}\""))
}

fn list<T>(v: &Value, what: &str, f: impl Fn(&Value) -> R<T>) -> R<Vec<T>> {
    arr(v, what)?.iter().map(f).collect()
}

fn class(v: &Value) -> R<HomologyClass> {
    Ok(HomologyClass::new(list(v, "class", big)?))
}

pub fn parse_context(v: &Value) -> R<TargetGeometry> {
    let o = obj(v, "context")?;
    let r = big(get(o, "r", "context")?)?
        .to_i64()
        .ok_or("r out of range")?;
    let basis = list(get(o, "basis", "context")?, "basis", |x| {
        x.as_str().map(str::to_string).ok_or_else(|| "basis labels must be strings".to_string())
    })?;
    let c1 = list(get(o, "c1", "context")?, "c1", big)?;
    let omega = list(get(o, "omega", "context")?, "omega", rational)?;
    let gens = match o.get("positivity_generators") {
        Some(g) => list(g, "positivity_generators", class)?,
        None => (0..basis.len()).map(|i| HomologyClass::basis(basis.len(), i)).collect(),
    };
    TargetGeometry::new(r, basis, c1, omega, gens).map_err(|e| e.to_string())
}

fn parse_graph(v: &Value) -> R<PrestableGraph> {
    let o = obj(v, "graph")?;
    let vertices = list(get(o, "vertices", "graph")?, "vertices", |x| {
        let vo = obj(x, "vertex")?;
        Ok(Vertex {
            id: small(get(vo, "id", "vertex")?)?,
            genus: small(get(vo, "genus", "vertex")?)?,
        })
    })?;
    let edges = list(get(o, "edges", "graph")?, "edges", pair)?;
    let mk = obj(get(o, "markings", "graph")?, "markings")?;
    let p = list(get(mk, "p", "markings")?, "p", small)?;
    let pp = list(get(mk, "p_prime", "markings")?, "p_prime", small)?;
    Ok(PrestableGraph {
        vertices,
        edges,
        markings_p: p,
        markings_p_prime: pp,
    })
}

fn pair(x: &Value) -> R<(VertexId, VertexId)> {
    let a = arr(x, "pair")?;
    if a.len() != 2 {
        return Err("pairs must have two entries".into());
    }
    Ok((small(&a[0])?, small(&a[1])?))
}

fn parse_augmentation(v: &Value, graph: &PrestableGraph) -> R<AugmentedGraph> {
    let o = obj(v, "augmentation")?;
    let order = list(get(o, "order", "augmentation")?, "order", small)?;
    let m: Vec<u64> = list(get(o, "m", "augmentation")?, "m", small)?;
    let d: Vec<u64> = list(get(o, "d", "augmentation")?, "d", small)?;
    let a = list(get(o, "A", "augmentation")?, "A", class)?;
    let nv = graph.vertices.len();
    if m.len() != nv || d.len() != nv || a.len() != nv {
        return Err(format!("m, d and A must each have {nv} entries, one per vertex"));
    }
    let mut h = BTreeMap::new();
    for t in arr(get(o, "h", "augmentation")?, "h")? {
        let t = arr(t, "h entry")?;
        if t.len() != 3 {
            return Err("h entries are [alpha, beta, value]".into());
        }
        h.insert((small(&t[0])?, small(&t[1])?), small(&t[2])?);
    }
    let deco = m
        .into_iter()
        .zip(d)
        .zip(a)
        .map(|((m, d), class)| Decoration { m, d, class })
        .collect();
    Ok(AugmentedGraph {
        graph: graph.clone(),
        order,
        deco,
        h,
    })
}

fn point_ref(x: &Value) -> R<PointRef> {
    let (comp, point) = pair(x)?;
    Ok(PointRef { comp, point })
}

fn parse_configuration(v: &Value) -> R<Configuration> {
    let o = obj(v, "configuration")?;
    let components = list(get(o, "components", "configuration")?, "components", |x| {
        let c = obj(x, "component")?;
        Ok(Component {
            id: small(get(c, "id", "component")?)?,
            genus: small(get(c, "genus", "component")?)?,
            m: small(get(c, "m", "component")?)?,
            d: small(get(c, "d", "component")?)?,
            class: class(get(c, "A", "component")?)?,
            points: list(get(c, "points", "component")?, "points", small)?,
        })
    })?;
    let junctions = list(get(o, "junctions", "configuration")?, "junctions", |j| list(j, "junction", point_ref))?;
    let mk = obj(get(o, "markings", "configuration")?, "markings")?;
    let h = list(get(o, "h", "configuration")?, "h", pair)?;
    Ok(Configuration {
        components,
        junctions,
        markings_p: list(get(mk, "p", "markings")?, "p", point_ref)?,
        markings_p_prime: list(get(mk, "p_prime", "markings")?, "p_prime", point_ref)?,
        order: list(get(o, "order", "configuration")?, "order", small)?,
        h: h.into_iter().collect::<BTreeSet<_>>(),
    })
}

fn special_point(v: &Value) -> R<SpecialPoint> {
    let o = obj(v, "special point")?;
    if o.len() != 1 {
        return Err("a special point has exactly one of edge, p, p_prime".into());
    }
    if let Some(e) = o.get("edge") {
        let e = arr(e, "edge point")?;
        if e.len() != 2 {
            return Err("edge points are [edge, end]".into());
        }
        return Ok(SpecialPoint::Edge {
            edge: small(&e[0])?,
            end: small(&e[1])?,
        });
    }
    if let Some(i) = o.get("p") {
        return Ok(SpecialPoint::P(small(i)?));
    }
    if let Some(j) = o.get("p_prime") {
        return Ok(SpecialPoint::Pp(small(j)?));
    }
    Err("unknown special point kind".into())
}

pub fn parse_descriptor(v: &Value) -> R<Descriptor> {
    let o = obj(v, "descriptor")?;
    if let Some(c) = o.get("cover") {
        let c = obj(c, "cover")?;
        return Ok(Descriptor::Cover(CoverDescriptor {
            vertex: small(get(c, "vertex", "cover")?)?,
            genus: small(get(c, "genus", "cover")?)?,
            blocks: list(get(c, "blocks", "cover")?, "blocks", |b| list(b, "block", special_point))?,
        }));
    }
    if let Some(g) = o.get("glue") {
        let g = obj(g, "glue")?;
        let map = list(get(g, "map", "glue")?, "map", |x| {
            let e = arr(x, "map entry")?;
            if e.len() != 2 {
                return Err("map entries are [point, target]".into());
            }
            let target = match &e[1] {
                Value::String(s) if s == "fresh" => GlueTarget::Fresh,
                t => GlueTarget::Existing(special_point(t)?),
            };
            Ok((special_point(&e[0])?, target))
        })?;
        return Ok(Descriptor::Glue(GlueDescriptor {
            alpha: small(get(g, "alpha", "glue")?)?,
            beta: small(get(g, "beta", "glue")?)?,
            map,
        }));
    }
    Err("descriptor must hold \"cover\" or \"glue\"".into())
}

pub fn parse_document(text: &str) -> Result<Document, DocError> {
    let v = parse_json(text)?;
    let o = v.as_object().ok_or_else(|| err_at(text, "", "a document must be a JSON object"))?;
    match o.get("format_version") {
        Some(fv) if big(fv).ok() == Some(BigInt::from(FORMAT_VERSION)) => {}
        Some(fv) => return Err(err_at(text, "format_version", format!("unsupported format_version {fv}"))),
        None => return Err(err_at(text, "", "missing format_version")),
    }
    let section = |key: &str| o.get(key);
    let ctx = section("context").ok_or_else(|| err_at(text, "", "missing context"))?;
    let context = parse_context(ctx).map_err(|m| err_at(text, "context", m))?;
    let graph = section("graph")
        .map(|g| parse_graph(g).map_err(|m| err_at(text, "graph", m)))
        .transpose()?;
    let augmentation = match (section("augmentation"), &graph) {
        (Some(a), Some(g)) => Some(parse_augmentation(a, g).map_err(|m| err_at(text, "augmentation", m))?),
        (Some(_), None) => return Err(err_at(text, "augmentation", "augmentation requires a graph")),
        (None, _) => None,
    };
    let configuration = section("configuration")
        .map(|c| parse_configuration(c).map_err(|m| err_at(text, "configuration", m)))
        .transpose()?;
    let descriptor = section("descriptor")
        .map(|d| parse_descriptor(d).map_err(|m| err_at(text, "descriptor", m)))
        .transpose()?;
    let rank = context.rank();
    if let Some(a) = &augmentation {
        if a.deco.iter().any(|d| d.class.rank() != rank) {
            return Err(err_at(text, "augmentation", "class rank differs from the basis"));
        }
    }
    if let Some(c) = &configuration {
        if c.components.iter().any(|x| x.class.rank() != rank) {
            return Err(err_at(text, "configuration", "class rank differs from the basis"));
        }
        if let Some(g) = &graph {
            if g.n() != c.n() || g.markings_p_prime.len() != c.markings_p_prime.len() {
                return Err(err_at(text, "configuration", "marking counts differ from the graph"));
            }
        }
    }
    Ok(Document {
        context,
        graph,
        augmentation,
        configuration,
        descriptor,
    })
}

pub fn num(x: impl ToString) -> Value {
    Value::Number(Number::from_str(&x.to_string()).expect("integer literal"))
}

pub fn rat(q: &BigRational) -> Value {
    Value::String(format!("{}/{}", q.numer(), q.denom()))
}

fn class_json(a: &HomologyClass) -> Value {
    Value::Array(a.coeffs.iter().map(num).collect())
}

fn obj_of(entries: Vec<(&str, Value)>) -> Value {
    Value::Object(entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}

pub fn context_json(c: &TargetGeometry) -> Value {
    obj_of(vec![
        ("r", num(c.r)),
        ("basis", Value::Array(c.basis_labels.iter().map(|s| Value::String(s.clone())).collect())),
        ("c1", Value::Array(c.c1.iter().map(num).collect())),
        ("omega", Value::Array(c.omega.iter().map(rat).collect())),
        (
            "positivity_generators",
            Value::Array(c.positivity_generators.iter().map(class_json).collect()),
        ),
    ])
}

fn pair_json((a, b): (VertexId, VertexId)) -> Value {
    Value::Array(vec![num(a), num(b)])
}

pub fn graph_json(g: &PrestableGraph) -> Value {
    obj_of(vec![
        (
            "vertices",
            Value::Array(
                g.vertices
                    .iter()
                    .map(|v| obj_of(vec![("id", num(v.id)), ("genus", num(v.genus))]))
                    .collect(),
            ),
        ),
        ("edges", Value::Array(g.edges.iter().copied().map(pair_json).collect())),
        (
            "markings",
            obj_of(vec![
                ("p", Value::Array(g.markings_p.iter().map(num).collect())),
                ("p_prime", Value::Array(g.markings_p_prime.iter().map(num).collect())),
            ]),
        ),
    ])
}

pub fn augmentation_json(g: &AugmentedGraph) -> Value {
    obj_of(vec![
        ("order", Value::Array(g.order.iter().map(num).collect())),
        ("m", Value::Array(g.deco.iter().map(|d| num(d.m)).collect())),
        ("d", Value::Array(g.deco.iter().map(|d| num(d.d)).collect())),
        ("A", Value::Array(g.deco.iter().map(|d| class_json(&d.class)).collect())),
        (
            "h",
            Value::Array(
                g.h.iter()
                    .map(|(&(a, b), &v)| Value::Array(vec![num(a), num(b), num(v)]))
                    .collect(),
            ),
        ),
    ])
}

fn point_ref_json(p: &PointRef) -> Value {
    pair_json((p.comp, p.point))
}

pub fn configuration_json(c: &Configuration) -> Value {
    obj_of(vec![
        (
            "components",
            Value::Array(
                c.components
                    .iter()
                    .map(|x| {
                        obj_of(vec![
                            ("id", num(x.id)),
                            ("genus", num(x.genus)),
                            ("m", num(x.m)),
                            ("d", num(x.d)),
                            ("A", class_json(&x.class)),
                            ("points", Value::Array(x.points.iter().map(num).collect())),
                        ])
                    })
                    .collect(),
            ),
        ),
        (
            "junctions",
            Value::Array(
                c.junctions
                    .iter()
                    .map(|j| Value::Array(j.iter().map(point_ref_json).collect()))
                    .collect(),
            ),
        ),
        (
            "markings",
            obj_of(vec![
                ("p", Value::Array(c.markings_p.iter().map(point_ref_json).collect())),
                ("p_prime", Value::Array(c.markings_p_prime.iter().map(point_ref_json).collect())),
            ]),
        ),
        ("order", Value::Array(c.order.iter().map(num).collect())),
        ("h", Value::Array(c.h.iter().copied().map(pair_json).collect())),
    ])
}

pub fn special_point_json(sp: &SpecialPoint) -> Value {
    match *sp {
        SpecialPoint::Edge { edge, end } => obj_of(vec![("edge", Value::Array(vec![num(edge), num(end)]))]),
        SpecialPoint::P(i) => obj_of(vec![("p", num(i))]),
        SpecialPoint::Pp(j) => obj_of(vec![("p_prime", num(j))]),
    }
}

pub fn descriptor_json(d: &Descriptor) -> Value {
    match d {
        Descriptor::Cover(c) => obj_of(vec![(
            "cover",
            obj_of(vec![
                ("vertex", num(c.vertex)),
                ("genus", num(c.genus)),
                (
                    "blocks",
                    Value::Array(
                        c.blocks
                            .iter()
                            .map(|b| Value::Array(b.iter().map(special_point_json).collect()))
                            .collect(),
                    ),
                ),
            ]),
        )]),
        Descriptor::Glue(g) => obj_of(vec![(
            "glue",
            obj_of(vec![
                ("alpha", num(g.alpha)),
                ("beta", num(g.beta)),
                (
                    "map",
                    Value::Array(
                        g.map
                            .iter()
                            .map(|(sp, t)| {
                                let t = match t {
                                    GlueTarget::Fresh => Value::String("fresh".into()),
                                    GlueTarget::Existing(x) => special_point_json(x),
                                };
                                Value::Array(vec![special_point_json(sp), t])
                            })
                            .collect(),
                    ),
                ),
            ]),
        )]),
    }
}

pub fn document_json(doc: &Document) -> Value {
    let mut o = Map::new();
    o.insert("format_version".into(), num(FORMAT_VERSION));
    o.insert("context".into(), context_json(&doc.context));
    let graph = doc.graph.as_ref().or(doc.augmentation.as_ref().map(|a| &a.graph));
    if let Some(g) = graph {
        o.insert("graph".into(), graph_json(g));
    }
    if let Some(a) = &doc.augmentation {
        o.insert("augmentation".into(), augmentation_json(a));
    }
    if let Some(c) = &doc.configuration {
        o.insert("configuration".into(), configuration_json(c));
    }
    if let Some(d) = &doc.descriptor {
        o.insert("descriptor".into(), descriptor_json(d));
    }
    Value::Object(o)
}

/// Canonical text: sorted keys, compact unless `pretty`.
pub fn to_text(v: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(v).expect("serializable")
    } else {
        serde_json::to_string(v).expect("serializable")
    }
}

pub fn serialize(doc: &Document) -> String {
    to_text(&document_json(doc), false)
}
