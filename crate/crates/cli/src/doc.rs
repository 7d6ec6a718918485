//! Input documents: JSON with a top-level `kind`, nested documents inline or
//! by relative path. Cells and simplices are addressed by name.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Map, Value};
use stackcoh::arith::{format_circle, format_rational, int, parse_rational};
use stackcoh::cech::{cech_groupoid, CechGroupoid};
use stackcoh::extension::ExtensionGroupoid;
use stackcoh::groupoid::{Arrow, GroupoidMorphism};
use stackcoh::simplicial::{Cover, SimplicialComplex};
use stackcoh::{fixtures, Cochain, Coeff, FiniteGroupoid, FormComplex, Rational, TotalCochain};

use crate::report::CliError;

pub const KINDS: [&str; 6] = ["groupoid", "complex", "cover", "cochain", "morphism", "job"];
pub const VERSION: u64 = 1;

/// A document with every nested reference replaced by its contents.
#[derive(Debug, Clone)]
pub struct Doc {
    pub kind: String,
    pub body: Value,
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::schema(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::schema(format!("{}: {e}", path.display())))
}

pub fn load(path: &Path) -> Result<Doc, CliError> {
    let v = read_json(path)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    resolve(&v, &base)
}

/// Inlines a reference (path string or object) relative to `base`.
pub fn resolve(v: &Value, base: &Path) -> Result<Doc, CliError> {
    let (obj, base) = match v {
        Value::String(p) => {
            let path: PathBuf = base.join(p);
            let inner = read_json(&path)?;
            let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
            match inner {
                Value::Object(o) => (o, base),
                _ => return Err(CliError::schema(format!("{p}: document must be a JSON object"))),
            }
        }
        Value::Object(o) => (o.clone(), base.to_path_buf()),
        _ => return Err(CliError::schema("expected a document or a path to one")),
    };
    let kind = obj.get("kind").and_then(Value::as_str).ok_or_else(|| CliError::schema("document has no `kind`"))?.to_string();
    if !KINDS.contains(&kind.as_str()) {
        return Err(CliError::schema(format!("unknown document kind `{kind}`")));
    }
    if let Some(ver) = obj.get("version") {
        if ver.as_u64() != Some(VERSION) {
            return Err(CliError::schema(format!("unsupported schema version {ver}")));
        }
    }
    let mut body = obj;
    body.remove("kind");
    body.remove("version");
    let refs: &[&str] = match kind.as_str() {
        "cover" => &["complex"],
        "cochain" => &["space"],
        "morphism" => &["source", "target"],
        _ => &[],
    };
    for key in refs {
        if let Some(r) = body.get(*key).cloned() {
            body.insert(key.to_string(), resolve(&r, &base)?.to_value());
        }
    }
    if kind == "job" {
        if let Some(Value::Array(items)) = body.get("inputs").cloned() {
            let inputs = items.iter().map(|r| resolve(r, &base).map(|d| d.to_value())).collect::<Result<Vec<_>, _>>()?;
            body.insert("inputs".into(), Value::Array(inputs));
        }
    }
    Ok(Doc { kind, body: Value::Object(body) })
}

impl Doc {
    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("kind".into(), json!(self.kind));
        m.insert("version".into(), json!(VERSION));
        if let Value::Object(b) = &self.body {
            m.extend(b.clone());
        }
        Value::Object(m)
    }

    pub fn from_value(v: &Value) -> Result<Doc, CliError> {
        resolve(v, Path::new("."))
    }

    fn parse<T: DeserializeOwned>(&self) -> Result<T, CliError> {
        serde_json::from_value(self.body.clone()).map_err(|e| CliError::schema(format!("{} document: {e}", self.kind)))
    }

    pub fn expect(&self, kinds: &[&str]) -> Result<(), CliError> {
        if kinds.contains(&self.kind.as_str()) {
            Ok(())
        } else {
            Err(CliError::schema(format!("expected a {} document, got {}", kinds.join(" or "), self.kind)))
        }
    }
}

// ---- groupoids ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupTable {
    elements: Vec<String>,
    table: Vec<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrowDoc {
    name: String,
    source: String,
    target: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupoidDoc {
    builtin: Option<String>,
    group: Option<GroupTable>,
    objects: Option<Vec<String>>,
    arrows: Option<Vec<ArrowDoc>>,
    /// Triples `[g, h, g then h]`.
    compose: Option<Vec<[String; 3]>>,
}

fn lookup(names: &[String], name: &str, what: &str) -> Result<usize, CliError> {
    names.iter().position(|n| n == name).ok_or_else(|| CliError::schema(format!("unknown {what} `{name}`")))
}

fn unique(names: &[String], what: &str) -> Result<(), CliError> {
    let mut seen = std::collections::BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(CliError::schema(format!("duplicate {what} `{n}`")));
        }
    }
    Ok(())
}

fn builtin_groupoid(name: &str) -> Result<FiniteGroupoid, CliError> {
    if let Some((_, g)) = fixtures::groupoids().into_iter().find(|(n, _)| *n == name) {
        return Ok(g);
    }
    let sized = |prefix: &str| name.strip_prefix(prefix).and_then(|n| n.parse::<usize>().ok()).filter(|&n| n >= 1);
    if let Some(n) = sized("cyclic:") {
        return Ok(FiniteGroupoid::cyclic(n));
    }
    if let Some(n) = sized("pair:") {
        return Ok(FiniteGroupoid::pair_groupoid(n));
    }
    Err(CliError::schema(format!("unknown builtin groupoid `{name}`")))
}

/// Raw tables; axioms are checked by the caller (`validate` reports them).
pub fn groupoid(doc: &Doc) -> Result<FiniteGroupoid, CliError> {
    doc.expect(&["groupoid"])?;
    let g: GroupoidDoc = doc.parse()?;
    let given = [g.builtin.is_some(), g.group.is_some(), g.objects.is_some()].iter().filter(|&&b| b).count();
    if given != 1 {
        return Err(CliError::schema("groupoid needs exactly one of `builtin`, `group`, `objects`"));
    }
    if let Some(name) = g.builtin {
        return builtin_groupoid(&name);
    }
    if let Some(t) = g.group {
        unique(&t.elements, "element")?;
        let table = t
            .table
            .iter()
            .map(|row| row.iter().map(|x| lookup(&t.elements, x, "element")).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(FiniteGroupoid::from_group_table(t.elements, &table)?);
    }
    let objects = g.objects.unwrap_or_default();
    let arrow_docs = g.arrows.ok_or_else(|| CliError::schema("groupoid with `objects` needs `arrows`"))?;
    unique(&objects, "object")?;
    let names: Vec<String> = arrow_docs.iter().map(|a| a.name.clone()).collect();
    unique(&names, "arrow")?;
    let arrows = arrow_docs
        .iter()
        .map(|a| {
            Ok(Arrow {
                name: a.name.clone(),
                source: lookup(&objects, &a.source, "object")?,
                target: lookup(&objects, &a.target, "object")?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let m = arrows.len();
    let mut compose = vec![None; m * m];
    for [g, h, gh] in g.compose.unwrap_or_default() {
        let (g, h, gh) = (lookup(&names, &g, "arrow")?, lookup(&names, &h, "arrow")?, lookup(&names, &gh, "arrow")?);
        if compose[g * m + h].replace(gh).is_some() {
            return Err(CliError::schema(format!("composite of `{}` and `{}` given twice", names[g], names[h])));
        }
    }
    // identities and inverses are read off the composition table
    let identity = (0..objects.len())
        .map(|x| {
            (0..m)
                .find(|&e| arrows[e].source == x && arrows[e].target == x && compose[e * m + e] == Some(e))
                .ok_or_else(|| CliError::schema(format!("object `{}` has no identity arrow", objects[x])))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let inverse = (0..m)
        .map(|a| {
            let id_s = identity[arrows[a].source];
            (0..m).find(|&b| compose[a * m + b] == Some(id_s)).unwrap_or(a)
        })
        .collect();
    Ok(FiniteGroupoid::from_tables(objects, arrows, compose, identity, inverse)?)
}

pub fn groupoid_value(g: &FiniteGroupoid) -> Value {
    let names: Vec<&str> = g.arrows().iter().map(|a| a.name.as_str()).collect();
    let arrows: Vec<Value> =
        g.arrows().iter().map(|a| json!({"name": a.name, "source": g.objects()[a.source], "target": g.objects()[a.target]})).collect();
    let mut compose = Vec::new();
    for x in 0..g.num_arrows() {
        for y in 0..g.num_arrows() {
            if let Some(z) = g.compose(x, y) {
                compose.push(json!([names[x], names[y], names[z]]));
            }
        }
    }
    json!({"kind": "groupoid", "version": VERSION, "objects": g.objects(), "arrows": arrows, "compose": compose})
}

// ---- complexes and covers ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexDoc {
    builtin: Option<String>,
    vertices: Option<Vec<String>>,
    facets: Option<Vec<Vec<String>>>,
}

pub fn complex(doc: &Doc) -> Result<SimplicialComplex, CliError> {
    doc.expect(&["complex"])?;
    let c: ComplexDoc = doc.parse()?;
    match (c.builtin, c.vertices) {
        (Some(name), None) => match name.as_str() {
            "point" => Ok(SimplicialComplex::point()),
            "triangle" => Ok(fixtures::triangle()),
            "tetrahedron" => Ok(fixtures::tetrahedron()),
            "pentachoron" => Ok(fixtures::pentachoron()),
            _ => Err(CliError::schema(format!("unknown builtin complex `{name}`"))),
        },
        (None, Some(vertices)) => {
            unique(&vertices, "vertex")?;
            let facets = c
                .facets
                .unwrap_or_default()
                .iter()
                .map(|f| f.iter().map(|v| lookup(&vertices, v, "vertex")).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SimplicialComplex::from_facets(vertices, &facets)?)
        }
        _ => Err(CliError::schema("complex needs exactly one of `builtin`, `vertices`")),
    }
}

fn simplex_ids(k: &SimplicialComplex, names: &[String]) -> Result<(usize, usize), CliError> {
    let mut ids = names.iter().map(|v| lookup(k.vertices(), v, "vertex")).collect::<Result<Vec<_>, _>>()?;
    ids.sort_unstable();
    let dim = ids.len().checked_sub(1).ok_or_else(|| CliError::schema("empty simplex"))?;
    let id = k.index_of(&ids).ok_or_else(|| CliError::schema(format!("{names:?} is not a simplex")))?;
    Ok((dim, id))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PatchDoc {
    name: String,
    simplices: Vec<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoverDoc {
    complex: Value,
    builtin: Option<String>,
    patches: Option<Vec<PatchDoc>>,
}

pub fn cover(doc: &Doc) -> Result<(SimplicialComplex, Cover), CliError> {
    doc.expect(&["cover"])?;
    let c: CoverDoc = doc.parse()?;
    let k = complex(&Doc::from_value(&c.complex)?)?;
    let cover = match (c.builtin, c.patches) {
        (Some(name), None) => match name.as_str() {
            "facets" => Cover::by_facets(&k),
            "stars" => Cover::by_closed_stars(&k),
            "single" => Cover::single(&k),
            _ => return Err(CliError::schema(format!("unknown builtin cover `{name}`"))),
        },
        (None, Some(patches)) => {
            let names: Vec<String> = patches.iter().map(|p| p.name.clone()).collect();
            unique(&names, "patch")?;
            let gens = patches
                .iter()
                .map(|p| {
                    let simplices = p
                        .simplices
                        .iter()
                        .map(|s| simplex_ids(&k, s).map(|(d, id)| k.simplices(d)[id].clone()))
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok((p.name.clone(), simplices))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Cover::from_generators(&k, &gens)?
        }
        _ => return Err(CliError::schema("cover needs exactly one of `builtin`, `patches`")),
    };
    Ok((k, cover))
}

pub fn cover_value(k: &SimplicialComplex, cover: &Cover) -> Value {
    let vertices = k.vertices();
    let facets: Vec<Vec<&str>> = k.facets().iter().map(|f| f.iter().map(|&v| vertices[v].as_str()).collect()).collect();
    let patches: Vec<Value> = cover
        .names
        .iter()
        .zip(&cover.patches)
        .map(|(name, p)| {
            let simplices: Vec<Vec<&str>> = (0..=k.dim())
                .flat_map(|d| p.of_dim(d).iter().map(move |&id| (d, id)))
                .map(|(d, id)| k.simplices(d)[id].iter().map(|&v| vertices[v].as_str()).collect())
                .collect();
            json!({"name": name, "simplices": simplices})
        })
        .collect();
    json!({
        "kind": "cover", "version": VERSION,
        "complex": {"kind": "complex", "version": VERSION, "vertices": vertices, "facets": facets},
        "patches": patches,
    })
}

// ---- spaces ----

/// What a cochain lives on: a finite groupoid or the Čech groupoid of a cover.
#[derive(Debug, Clone)]
pub enum Space {
    Groupoid(FiniteGroupoid),
    Cech(CechGroupoid),
}

pub fn space(doc: &Doc) -> Result<Space, CliError> {
    match doc.kind.as_str() {
        "groupoid" => Ok(Space::Groupoid(groupoid(doc)?)),
        "cover" => {
            let (k, c) = cover(doc)?;
            Ok(Space::Cech(cech_groupoid(&k, &c)?))
        }
        other => Err(CliError::schema(format!("a {other} document is not a space (groupoid or cover)"))),
    }
}

impl Space {
    pub fn complex(&self, max_degree: usize, cap: usize) -> Result<FormComplex, CliError> {
        Ok(match self {
            Space::Groupoid(g) => FormComplex::of_groupoid(g, max_degree, cap)?,
            Space::Cech(cg) => FormComplex::of_cech(cg, max_degree, cap)?,
        })
    }

    pub fn value(&self) -> Value {
        match self {
            Space::Groupoid(g) => groupoid_value(g),
            Space::Cech(cg) => cover_value(&cg.complex, &cg.cover),
        }
    }

    /// Names of the nerve cell `c` at level `p`.
    pub fn cell_names(&self, fc: &FormComplex, p: usize, c: usize) -> Vec<String> {
        let cell = &fc.model().nerve.levels[p].cells[c];
        match self {
            Space::Groupoid(g) if p == 0 => vec![g.objects()[cell[0]].clone()],
            Space::Groupoid(g) => cell.iter().map(|&a| g.arrows()[a].name.clone()).collect(),
            Space::Cech(cg) => cell.iter().map(|&a| cg.cover.names[a].clone()).collect(),
        }
    }

    fn cell_index(&self, fc: &FormComplex, p: usize, names: &[String]) -> Result<usize, CliError> {
        let ids = match self {
            Space::Groupoid(g) if p == 0 => vec![lookup(g.objects(), names.first().map_or("", String::as_str), "object")?],
            Space::Groupoid(g) => {
                let arrows: Vec<String> = g.arrows().iter().map(|a| a.name.clone()).collect();
                names.iter().map(|n| lookup(&arrows, n, "arrow")).collect::<Result<_, _>>()?
            }
            Space::Cech(cg) => names.iter().map(|n| lookup(&cg.cover.names, n, "patch")).collect::<Result<_, _>>()?,
        };
        let level = fc.model().nerve.levels.get(p).ok_or_else(|| CliError::schema(format!("level {p} is not materialized")))?;
        level.position(&ids).ok_or_else(|| CliError::schema(format!("{names:?} is not a cell at level {p}")))
    }
}

// ---- cochains ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryDoc {
    p: Option<usize>,
    #[serde(default)]
    cell: Vec<String>,
    simplex: Option<Vec<String>>,
    value: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CochainDoc {
    space: Value,
    coeff: Option<String>,
    bidegree: Option<[usize; 2]>,
    degree: Option<usize>,
    values: Vec<Value>,
}

/// A parsed cochain: single bidegree, total degree, or simplicial (on a complex).
#[derive(Debug, Clone)]
pub enum Shape {
    Block(usize, usize),
    Total(usize),
    Simplicial(usize),
}

/// `(p, cell, simplex, value)` as read from the document.
type Entry = (Option<usize>, Vec<String>, Option<Vec<String>>, Rational);

#[derive(Debug, Clone)]
pub struct CochainInput {
    pub space_doc: Doc,
    pub coeff: Coeff,
    pub shape: Shape,
    entries: Vec<Entry>,
}

fn parse_value(v: &Value) -> Result<(Rational, bool), CliError> {
    match v {
        Value::Number(n) => {
            let i = n.as_i64().ok_or_else(|| CliError::schema(format!("not an integer: {n}")))?;
            Ok((int(i as i128), false))
        }
        Value::String(s) => Ok(parse_rational(s)?),
        _ => Err(CliError::schema(format!("not a value: {v}"))),
    }
}

pub fn cochain(doc: &Doc) -> Result<CochainInput, CliError> {
    doc.expect(&["cochain"])?;
    let c: CochainDoc = doc.parse()?;
    let space_doc = Doc::from_value(&c.space)?;
    let shape = match (c.bidegree, c.degree, space_doc.kind.as_str()) {
        (None, Some(n), "complex") => Shape::Simplicial(n),
        (Some([p, k]), None, "groupoid" | "cover") => Shape::Block(p, k),
        (None, Some(n), "groupoid" | "cover") => Shape::Total(n),
        _ => {
            return Err(CliError::schema(
                "cochain needs `bidegree` or `degree` (only `degree` on a complex) and a groupoid, cover or complex space",
            ))
        }
    };
    let mut circle = false;
    let mut entries = Vec::new();
    for e in &c.values {
        let e: EntryDoc = serde_json::from_value(e.clone()).map_err(|err| CliError::schema(format!("cochain entry: {err}")))?;
        let (q, is_circle) = parse_value(&e.value)?;
        circle |= is_circle;
        entries.push((e.p, e.cell, e.simplex, q));
    }
    let coeff = match c.coeff {
        Some(s) => Coeff::parse(&s)?,
        None if circle => Coeff::QModZ,
        None => Coeff::Q,
    };
    if circle && coeff != Coeff::QModZ {
        return Err(CliError::schema("`mod 1` values need coefficient QmodZ"));
    }
    if let Some(bad) = entries.iter().find(|e| !coeff.admits(&e.3)) {
        return Err(CliError::schema(format!("value {} is not admissible over {coeff}", format_rational(&bad.3))));
    }
    Ok(CochainInput { space_doc, coeff, shape, entries })
}

impl CochainInput {
    pub fn space(&self) -> Result<Space, CliError> {
        space(&self.space_doc)
    }

    /// Smallest total degree the complex must materialize for this cochain.
    pub fn degree(&self) -> usize {
        match self.shape {
            Shape::Block(p, k) => p + k,
            Shape::Total(n) | Shape::Simplicial(n) => n,
        }
    }

    fn position(
        &self,
        space: &Space,
        fc: &FormComplex,
        p: usize,
        k: usize,
        cell: &[String],
        simplex: &Option<Vec<String>>,
    ) -> Result<usize, CliError> {
        if !fc.has_block(p, k) {
            return Err(CliError::schema(format!("bidegree ({p},{k}) does not exist on this space")));
        }
        let c = space.cell_index(fc, p, cell)?;
        let ambient = &fc.model().ambient;
        let s = match (simplex, space) {
            (None, Space::Groupoid(_)) => 0,
            (None, Space::Cech(_)) => return Err(CliError::schema("entries on a cover need a `simplex`")),
            (Some(names), _) => {
                let (dim, id) = simplex_ids(ambient, names)?;
                if dim != k {
                    return Err(CliError::schema(format!("simplex {names:?} has dimension {dim}, expected {k}")));
                }
                id
            }
        };
        fc.basis_index(p, k, c, s).ok_or_else(|| CliError::schema(format!("{cell:?}|{simplex:?} is not a basis element at ({p},{k})")))
    }

    pub fn block(&self, space: &Space, fc: &FormComplex) -> Result<Cochain, CliError> {
        let Shape::Block(p, k) = self.shape else {
            return Err(CliError::schema("expected a cochain of a single bidegree"));
        };
        let mut c = fc.zero(p, k, self.coeff);
        for (ep, cell, simplex, q) in &self.entries {
            if ep.is_some_and(|ep| ep != p) {
                return Err(CliError::schema("entry `p` disagrees with the bidegree"));
            }
            let i = self.position(space, fc, p, k, cell, simplex)?;
            c.values[i] = self.coeff.reduce(q);
        }
        Ok(c)
    }

    /// A block cochain at the expected bidegree.
    pub fn block_at(&self, space: &Space, fc: &FormComplex, p: usize, k: usize, what: &str) -> Result<Cochain, CliError> {
        match self.shape {
            Shape::Block(bp, bk) if (bp, bk) == (p, k) => self.block(space, fc),
            _ => Err(CliError::schema(format!("{what} must be a cochain of bidegree ({p},{k})"))),
        }
    }

    pub fn total(&self, space: &Space, fc: &FormComplex) -> Result<TotalCochain, CliError> {
        let n = match self.shape {
            Shape::Total(n) => n,
            Shape::Block(p, k) => {
                return Ok(fc.embed(&self.block(space, fc)?)?.with_coeff(self.coeff)).inspect(|t| {
                    debug_assert_eq!(t.degree, p + k);
                })
            }
            Shape::Simplicial(_) => return Err(CliError::schema("expected a cochain on a groupoid or cover")),
        };
        let layout = fc.total_layout(n);
        let mut t = fc.zero_total(n, self.coeff);
        for (ep, cell, simplex, q) in &self.entries {
            let p = ep.ok_or_else(|| CliError::schema("entries of a total cochain need `p`"))?;
            let &(_, k, off, _) =
                layout.iter().find(|b| b.0 == p).ok_or_else(|| CliError::schema(format!("column p = {p} does not occur in degree {n}")))?;
            let i = self.position(space, fc, p, k, cell, simplex)?;
            t.values[off + i] = self.coeff.reduce(q);
        }
        Ok(t)
    }

    /// Values on the simplices of dimension `degree` of a complex.
    pub fn simplicial(&self) -> Result<(SimplicialComplex, Vec<Rational>), CliError> {
        let Shape::Simplicial(n) = self.shape else {
            return Err(CliError::schema("expected a cochain on a complex"));
        };
        let k = complex(&self.space_doc)?;
        let mut values = vec![Rational::from_integer(0); k.count(n)];
        for (p, cell, simplex, q) in &self.entries {
            if p.is_some() || !cell.is_empty() {
                return Err(CliError::schema("simplicial entries have only `simplex` and `value`"));
            }
            let names = simplex.as_ref().ok_or_else(|| CliError::schema("simplicial entries need `simplex`"))?;
            let (dim, id) = simplex_ids(&k, names)?;
            if dim != n {
                return Err(CliError::schema(format!("simplex {names:?} has dimension {dim}, expected {n}")));
            }
            values[id] = self.coeff.reduce(q);
        }
        Ok((k, values))
    }
}

fn value_json(coeff: Coeff, q: &Rational) -> Value {
    match coeff {
        Coeff::QModZ => json!(format_circle(q)),
        _ if q.is_integer() => match i64::try_from(*q.numer()) {
            Ok(i) => json!(i),
            Err(_) => json!(format_rational(q)),
        },
        _ => json!(format_rational(q)),
    }
}

fn entry_json(space: &Space, fc: &FormComplex, (p, k, i): (usize, usize, usize), coeff: Coeff, q: &Rational, with_p: bool) -> Value {
    let (c, s) = fc.basis(p, k)[i];
    let ambient = &fc.model().ambient;
    let mut m = Map::new();
    if with_p {
        m.insert("p".into(), json!(p));
    }
    m.insert("cell".into(), json!(space.cell_names(fc, p, c)));
    if let Space::Cech(_) = space {
        let simplex: Vec<&str> = ambient.simplices(k)[s].iter().map(|&v| ambient.vertices()[v].as_str()).collect();
        m.insert("simplex".into(), json!(simplex));
    }
    m.insert("value".into(), value_json(coeff, q));
    Value::Object(m)
}

/// A cochain document (nonzero entries in basis order) that reads back to `c`.
pub fn block_value(space: &Space, fc: &FormComplex, c: &Cochain) -> Value {
    let values: Vec<Value> = c
        .values
        .iter()
        .enumerate()
        .filter(|(_, q)| !c.coeff.is_zero(q))
        .map(|(i, q)| entry_json(space, fc, (c.p, c.k, i), c.coeff, q, false))
        .collect();
    json!({"kind": "cochain", "version": VERSION, "space": space.value(), "coeff": c.coeff.to_string(), "bidegree": [c.p, c.k], "values": values})
}

pub fn total_value(space: &Space, fc: &FormComplex, t: &TotalCochain) -> Value {
    let mut values = Vec::new();
    for (p, k, off, len) in fc.total_layout(t.degree) {
        for i in 0..len {
            let q = &t.values[off + i];
            if !t.coeff.is_zero(q) {
                values.push(entry_json(space, fc, (p, k, i), t.coeff, q, true));
            }
        }
    }
    json!({"kind": "cochain", "version": VERSION, "space": space.value(), "coeff": t.coeff.to_string(), "degree": t.degree, "values": values})
}

// ---- morphisms ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FiberDoc {
    order: u64,
    /// Action of the generator `1/N` on every arrow of the total groupoid.
    generator: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MorphismDoc {
    source: Value,
    target: Value,
    object_map: Option<BTreeMap<String, String>>,
    arrow_map: Option<BTreeMap<String, String>>,
    assignment: Option<BTreeMap<String, String>>,
    fiber: Option<FiberDoc>,
    section: Option<BTreeMap<String, String>>,
}

#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum MorphismInput {
    Groupoid(GroupoidMorphism),
    Refinement { fine: CechGroupoid, coarse: CechGroupoid, assignment: Vec<usize> },
    Extension { ext: ExtensionGroupoid, section: Option<Vec<usize>> },
}

fn total_map(map: &BTreeMap<String, String>, from: &[String], to: &[String], what: &str) -> Result<Vec<usize>, CliError> {
    for k in map.keys() {
        lookup(from, k, what)?;
    }
    from.iter()
        .map(|n| {
            let image = map.get(n).ok_or_else(|| CliError::schema(format!("{what} `{n}` has no image")))?;
            lookup(to, image, what)
        })
        .collect()
}

pub fn morphism(doc: &Doc) -> Result<MorphismInput, CliError> {
    doc.expect(&["morphism"])?;
    let m: MorphismDoc = doc.parse()?;
    let (source, target) = (Doc::from_value(&m.source)?, Doc::from_value(&m.target)?);
    if let Some(assignment) = m.assignment {
        if m.object_map.is_some() || m.arrow_map.is_some() || m.fiber.is_some() || m.section.is_some() {
            return Err(CliError::schema("a refinement has only `source`, `target` and `assignment`"));
        }
        let (Space::Cech(fine), Space::Cech(coarse)) = (space(&source)?, space(&target)?) else {
            return Err(CliError::schema("a refinement maps a cover to a cover"));
        };
        let assignment = total_map(&assignment, &fine.cover.names, &coarse.cover.names, "patch")?;
        return Ok(MorphismInput::Refinement { fine, coarse, assignment });
    }
    let (s, t) = (groupoid(&source)?, groupoid(&target)?);
    let object_map = total_map(&m.object_map.unwrap_or_default(), s.objects(), t.objects(), "object")?;
    let s_arrows: Vec<String> = s.arrows().iter().map(|a| a.name.clone()).collect();
    let t_arrows: Vec<String> = t.arrows().iter().map(|a| a.name.clone()).collect();
    let arrow_map = total_map(&m.arrow_map.unwrap_or_default(), &s_arrows, &t_arrows, "arrow")?;
    match m.fiber {
        None => {
            if m.section.is_some() {
                return Err(CliError::schema("`section` needs `fiber`"));
            }
            let f = GroupoidMorphism { source: s, target: t, object_map, arrow_map };
            Ok(MorphismInput::Groupoid(f))
        }
        Some(fiber) => {
            if object_map.iter().enumerate().any(|(x, &y)| x != y) || s.num_objects() != t.num_objects() {
                return Err(CliError::schema("an extension is the identity on objects"));
            }
            let generator = total_map(&fiber.generator, &s_arrows, &s_arrows, "arrow")?;
            let n = fiber.order as usize;
            if n == 0 {
                return Err(CliError::schema("fiber order must be positive"));
            }
            let mut action = vec![(0..s.num_arrows()).collect::<Vec<_>>()];
            for u in 1..n {
                let prev: &Vec<usize> = &action[u - 1];
                action.push(prev.iter().map(|&a| generator[a]).collect());
            }
            let section = m.section.map(|sec| total_map(&sec, &t_arrows, &s_arrows, "arrow")).transpose()?;
            let ext = ExtensionGroupoid { base: t, total: s, order: fiber.order, projection: arrow_map, action };
            Ok(MorphismInput::Extension { ext, section })
        }
    }
}

pub fn extension_value(ext: &ExtensionGroupoid, section: &[usize]) -> Value {
    let t = &ext.total;
    let b = &ext.base;
    let name = |a: usize| t.arrows()[a].name.clone();
    let object_map: BTreeMap<String, String> = t.objects().iter().map(|o| (o.clone(), o.clone())).collect();
    let arrow_map: BTreeMap<String, String> = (0..t.num_arrows()).map(|a| (name(a), b.arrows()[ext.projection[a]].name.clone())).collect();
    let generator: BTreeMap<String, String> = match ext.action.get(1) {
        Some(g) => (0..t.num_arrows()).map(|a| (name(a), name(g[a]))).collect(),
        None => (0..t.num_arrows()).map(|a| (name(a), name(a))).collect(),
    };
    let section: BTreeMap<String, String> = section.iter().enumerate().map(|(g, &a)| (b.arrows()[g].name.clone(), name(a))).collect();
    json!({
        "kind": "morphism", "version": VERSION,
        "source": groupoid_value(t), "target": groupoid_value(b),
        "object_map": object_map, "arrow_map": arrow_map,
        "fiber": {"order": ext.order, "generator": generator},
        "section": section,
    })
}

// ---- jobs ----

#[derive(Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
pub struct JobOptions {
    pub coeff: Option<String>,
    pub max_degree: Option<usize>,
    pub fiber_order: Option<u64>,
    pub cell_cap: Option<usize>,
    #[serde(rename = "loop")]
    pub loop_: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JobDoc {
    command: String,
    inputs: Vec<Value>,
    #[serde(default)]
    options: JobOptions,
}

pub fn job(doc: &Doc) -> Result<(String, Vec<Doc>, JobOptions), CliError> {
    doc.expect(&["job"])?;
    let j: JobDoc = doc.parse()?;
    let inputs = j.inputs.iter().map(Doc::from_value).collect::<Result<Vec<_>, _>>()?;
    Ok((j.command, inputs, j.options))
}
