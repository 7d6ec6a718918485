//! One function per subcommand. Each takes resolved documents and returns a report.

use serde_json::{json, Value};
use stackcoh::arith::{common_denominator, format_circle, format_rational};
use stackcoh::bundles::{chern_class, chern_cocycle, pseudo_curvature, realize_bundle, validate_bundle, BundleCocycle, PseudoConnection};
use stackcoh::cech::cech_groupoid;
use stackcoh::cohomology::integer_kernel;
use stackcoh::complex::Regime;
use stackcoh::extension::{cocycle_from_extension, extension_from_cocycle, has_homomorphic_section, ExtensionGroupoid};
use stackcoh::gerbes::{
    connective_check, curvature, dd_class, dd_cocycle, enumerate_extension_classes, find_curving, holonomy, is_flat, is_holonomy_free,
    pseudo_curvature_gerbe, tensor, validate_extension_cocycle, Curving, ExtensionCocycle, GerbeConnection,
};
use stackcoh::groupoid::GroupoidMorphism;
use stackcoh::homalg::Presentation;
use stackcoh::morita::{
    pullback_map, pullback_total, refine, refinement_morphism, validate_morita, verify_invariance, CochainMap, MoritaMorphism, Verdict,
};
use stackcoh::{Cochain, Coeff, FormComplex, Rational};

use crate::doc::{self, block_value, extension_value, total_value, CochainInput, Doc, MorphismInput, Shape, Space};
use crate::report::{CliError, Report, EXIT_MATH};

pub const COMMANDS: [&str; 22] = [
    "validate",
    "nerve",
    "cohomology",
    "homology",
    "pair",
    "integrality",
    "chern",
    "pseudo-curvature",
    "realize-bundle",
    "extension-build",
    "extension-cocycle",
    "tensor",
    "pullback",
    "dd-class",
    "gerbe-curvature",
    "curving",
    "flat-check",
    "holonomy",
    "enumerate-extensions",
    "morita-validate",
    "morita-verify",
    "refine",
];

#[derive(Debug, Clone)]
pub struct Options {
    pub coeff: Option<Coeff>,
    pub max_degree: Option<usize>,
    pub fiber_order: Option<u64>,
    pub cell_cap: usize,
    pub loop_: Option<Vec<String>>,
}

impl Options {
    /// The requested degree bound, at least `need`.
    fn degree(&self, default: usize, need: usize) -> usize {
        self.max_degree.unwrap_or(default).max(need)
    }
}

type Outcome = Result<Report, CliError>;

pub fn run(command: &str, inputs: &[Doc], opts: &Options) -> Outcome {
    let arity = match command {
        "pseudo-curvature" | "tensor" | "pullback" => 2,
        "gerbe-curvature" | "flat-check" => 3,
        _ if COMMANDS.contains(&command) => 1,
        _ => return Err(CliError::schema(format!("unknown command `{command}`"))),
    };
    if inputs.len() != arity {
        return Err(CliError::schema(format!("`{command}` takes {arity} input document(s), got {}", inputs.len())));
    }
    let d = inputs;
    match command {
        "validate" => validate(&d[0], opts),
        "nerve" => nerve(&d[0], opts),
        "cohomology" => cohomology(&d[0], opts),
        "homology" => homology(&d[0], opts),
        "pair" => pair(&d[0], opts),
        "integrality" => integrality(&d[0], opts),
        "chern" => chern(&d[0], opts),
        "pseudo-curvature" => bundle_curvature(&d[0], &d[1], opts),
        "realize-bundle" => realize(&d[0], opts),
        "extension-build" => extension_build(&d[0], opts),
        "extension-cocycle" => extension_cocycle(&d[0], opts),
        "tensor" => tensor_product(&d[0], &d[1], opts),
        "pullback" => pullback(&d[0], &d[1], opts),
        "dd-class" => dd(&d[0], opts),
        "gerbe-curvature" => gerbe_curvature(&d[0], &d[1], &d[2], opts),
        "curving" => curving(&d[0], opts),
        "flat-check" => flat_check(&d[0], &d[1], &d[2], opts),
        "holonomy" => holonomy_report(&d[0], opts),
        "enumerate-extensions" => enumerate(&d[0], opts),
        "morita-validate" => morita_validate(&d[0]),
        "morita-verify" => morita_verify(&d[0], opts),
        _ => refine_cover(&d[0], opts),
    }
}

fn presentation_json(p: &Presentation) -> Value {
    json!({"rank": p.rank, "torsion": p.torsion.iter().map(|&t| t as i64).collect::<Vec<_>>()})
}

fn rationals(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn ints(v: &[i128]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn violations(kind: &str, list: Vec<String>) -> CliError {
    CliError::math(kind, list.join("; "), json!(list))
}

/// A cochain with its space and the complex it was read on.
struct Loaded {
    input: CochainInput,
    space: Space,
    fc: FormComplex,
}

fn load_cochain(d: &Doc, opts: &Options, need: usize) -> Result<Loaded, CliError> {
    let input = doc::cochain(d)?;
    let space = input.space()?;
    let fc = space.complex(opts.degree(need, need.max(input.degree())), opts.cell_cap)?;
    Ok(Loaded { input, space, fc })
}

/// A second cochain read on the same space as `first`.
fn same_space(first: &Loaded, d: &Doc) -> Result<CochainInput, CliError> {
    let input = doc::cochain(d)?;
    if input.space_doc.to_value() != first.input.space_doc.to_value() {
        return Err(CliError::schema("input cochains live on different spaces"));
    }
    Ok(input)
}

fn extension_cocycle_input(l: &Loaded) -> Result<ExtensionCocycle, CliError> {
    let sigma = ExtensionCocycle::new(l.input.block_at(&l.space, &l.fc, 2, 0, "an extension cocycle")?)?;
    let report = validate_extension_cocycle(&l.fc, &sigma);
    if !report.is_empty() {
        return Err(violations("InvalidExtension", report));
    }
    Ok(sigma)
}

fn circle(c: &Cochain) -> Cochain {
    c.with_coeff(Coeff::QModZ)
}

// ---- validate / nerve / cohomology ----

fn validate(d: &Doc, opts: &Options) -> Outcome {
    let mut r = Report::new("validate", &["check", "value"]);
    r.set("kind", json!(d.kind));
    let problems: Vec<String> = match d.kind.as_str() {
        "groupoid" => {
            let g = doc::groupoid(d)?;
            r.set("objects", json!(g.num_objects())).set("arrows", json!(g.num_arrows()));
            r.row(vec!["objects".into(), g.num_objects().to_string()]).row(vec!["arrows".into(), g.num_arrows().to_string()]);
            let problems = g.validate();
            if problems.is_empty() {
                r.set("components", json!(g.components().len()));
                r.row(vec!["components".into(), g.components().len().to_string()]);
            }
            problems
        }
        "complex" => {
            let k = doc::complex(d)?;
            let counts: Vec<usize> = (0..=k.dim()).map(|i| k.count(i)).collect();
            r.set("dimension", json!(k.dim())).set("simplices", json!(counts));
            r.row(vec!["dimension".into(), k.dim().to_string()]).row(vec!["simplices".into(), format!("{counts:?}")]);
            Vec::new()
        }
        "cover" => {
            let (k, c) = doc::cover(d)?;
            let cg = cech_groupoid(&k, &c)?;
            r.set("patches", json!(c.len()))
                .set("double_intersections", json!(cg.nonempty_double_intersections()))
                .set("banal", json!(cg.is_banal()));
            r.row(vec!["patches".into(), c.len().to_string()])
                .row(vec!["double intersections".into(), cg.nonempty_double_intersections().to_string()])
                .row(vec!["banal".into(), cg.is_banal().to_string()]);
            Vec::new()
        }
        "cochain" => {
            let input = doc::cochain(d)?;
            r.set("coeff", json!(input.coeff.to_string()));
            match input.shape {
                Shape::Simplicial(n) => {
                    let (_, values) = input.simplicial()?;
                    r.set("degree", json!(n)).set("length", json!(values.len()));
                    r.row(vec!["degree".into(), n.to_string()]).row(vec!["length".into(), values.len().to_string()]);
                }
                Shape::Block(p, k) => {
                    let l = load_cochain(d, opts, 0)?;
                    let c = l.input.block(&l.space, &l.fc)?;
                    r.set("bidegree", json!([p, k])).set("length", json!(c.values.len()));
                    r.row(vec!["bidegree".into(), format!("({p},{k})")]).row(vec!["length".into(), c.values.len().to_string()]);
                }
                Shape::Total(_) => {
                    let l = load_cochain(d, opts, 0)?;
                    let t = l.input.total(&l.space, &l.fc)?;
                    let closed = l.fc.is_closed(&t)?;
                    r.set("degree", json!(t.degree)).set("length", json!(t.values.len())).set("closed", json!(closed));
                    r.row(vec!["degree".into(), t.degree.to_string()])
                        .row(vec!["length".into(), t.values.len().to_string()])
                        .row(vec!["closed".into(), closed.to_string()]);
                }
            }
            Vec::new()
        }
        "morphism" => match doc::morphism(d)? {
            MorphismInput::Groupoid(f) => f.validate(),
            MorphismInput::Refinement { fine, coarse, assignment } => match refinement_morphism(&fine, &coarse, &assignment) {
                Ok(_) => Vec::new(),
                Err(e) => vec![e.to_string()],
            },
            MorphismInput::Extension { ext, section } => {
                let mut p = ext.validate();
                if let Some(s) = section {
                    if s.iter().enumerate().any(|(g, &a)| ext.projection[a] != g) {
                        p.push("section is not a section of the projection".into());
                    }
                }
                p
            }
        },
        _ => {
            let (command, inputs, _) = doc::job(d)?;
            if !COMMANDS.contains(&command.as_str()) {
                return Err(CliError::schema(format!("unknown command `{command}`")));
            }
            r.set("command", json!(command)).set("inputs", json!(inputs.len()));
            r.row(vec!["command".into(), command]);
            Vec::new()
        }
    };
    r.set("valid", json!(problems.is_empty())).set("violations", json!(problems));
    r.row(vec!["valid".into(), problems.is_empty().to_string()]);
    for p in &problems {
        r.row(vec!["violation".into(), p.clone()]);
    }
    if !problems.is_empty() {
        r.code = EXIT_MATH;
        r.error = Some(violations("Invalid", problems));
    }
    Ok(r)
}

fn space_of(d: &Doc) -> Result<Space, CliError> {
    doc::space(d)
}

fn nerve(d: &Doc, opts: &Options) -> Outcome {
    let space = space_of(d)?;
    let md = opts.degree(3, 0);
    let fc = space.complex(md, opts.cell_cap)?;
    let nerve = &fc.model().nerve;
    let mut r = Report::new("nerve", &["level", "cells"]);
    let mut levels = Vec::new();
    for (p, level) in nerve.levels.iter().enumerate() {
        let mut entry = json!({"level": p, "cells": level.len()});
        if level.len() <= 64 {
            let names: Vec<Vec<String>> = (0..level.len()).map(|c| space.cell_names(&fc, p, c)).collect();
            entry["names"] = json!(names);
        }
        levels.push(entry);
        r.row(vec![p.to_string(), level.len().to_string()]);
    }
    let identities = nerve.check_simplicial_identities();
    r.set("levels", json!(levels)).set("simplicial_identities", json!(identities.is_empty()));
    r.row(vec!["identities".into(), if identities.is_empty() { "hold" } else { "fail" }.into()]);
    let complex_identities = fc.check_identities()?;
    r.set("double_complex_identities", json!(complex_identities.is_empty()));
    if !identities.is_empty() || !complex_identities.is_empty() {
        r.code = EXIT_MATH;
        r.error = Some(violations("IdentityFailure", identities.into_iter().chain(complex_identities).collect()));
    }
    Ok(r)
}

fn cohomology(d: &Doc, opts: &Options) -> Outcome {
    let space = space_of(d)?;
    let coeff = opts.coeff.unwrap_or(Coeff::Z);
    let md = opts.degree(4, 0);
    let fc = space.complex(md, opts.cell_cap)?;
    let banal = matches!(space, Space::Cech(_)) && coeff == Coeff::Z;
    let header: &[&str] = if banal { &["degree", "group", "simplicial"] } else { &["degree", "group"] };
    let mut r = Report::new("cohomology", header);
    let mut degrees = Vec::new();
    for n in 0..=md {
        let h = fc.cohomology(n, coeff)?;
        let mut entry = json!({"degree": n, "group": presentation_json(&h), "label": h.label(coeff)});
        let mut row = vec![n.to_string(), h.label(coeff)];
        if let (true, Space::Cech(cg)) = (banal, &space) {
            let s = if n <= cg.complex.dim() { cg.complex.integral_cohomology(n)? } else { Presentation::zero() };
            entry["simplicial"] = presentation_json(&s);
            row.push(s.label(Coeff::Z));
        }
        degrees.push(entry);
        r.row(row);
    }
    r.set("coeff", json!(coeff.to_string())).set("degrees", json!(degrees));
    Ok(r)
}

fn homology(d: &Doc, opts: &Options) -> Outcome {
    let space = space_of(d)?;
    let md = opts.degree(4, 0);
    let fc = space.complex(md, opts.cell_cap)?;
    let mut r = Report::new("homology", &["degree", "group"]);
    let mut degrees = Vec::new();
    for n in 0..=md {
        let h = fc.homology(n)?;
        degrees.push(json!({"degree": n, "group": presentation_json(&h), "label": h.label(Coeff::Z)}));
        r.row(vec![n.to_string(), h.label(Coeff::Z)]);
    }
    r.set("degrees", json!(degrees));
    Ok(r)
}

// ---- pairing and integrality ----

fn pair(d: &Doc, opts: &Options) -> Outcome {
    let l = load_cochain(d, opts, 0)?;
    let omega = l.input.total(&l.space, &l.fc)?;
    let report = l.fc.integrality_by_pairing(&omega)?;
    let mut r = Report::new("pair", &["generator", "pairing"]);
    for (i, q) in report.pairings.iter().enumerate() {
        r.row(vec![format!("free[{i}]"), format_rational(q)]);
    }
    r.set("degree", json!(omega.degree)).set("pairings", json!(rationals(&report.pairings))).set("integral", json!(report.integral));
    if let (Space::Cech(cg), true) = (&l.space, omega.degree == l.fc.model().ambient.dim()) {
        if cg.complex.dim() == omega.degree {
            if let Ok(gamma) = l.fc.fundamental_cycle() {
                let q = l.fc.pair(&gamma, &omega.with_coeff(Coeff::Q))?;
                r.set("fundamental", json!(format_rational(&q)));
                r.row(vec!["fundamental".into(), format_rational(&q)]);
            }
        }
    }
    r.row(vec!["integral".into(), report.integral.to_string()]);
    Ok(r)
}

fn integrality(d: &Doc, opts: &Options) -> Outcome {
    let l = load_cochain(d, opts, 0)?;
    let omega = l.input.total(&l.space, &l.fc)?;
    let w = l.fc.is_integer_class(&omega)?;
    let mut r = Report::new("integrality", &["check", "value"]);
    r.set("integral", json!(w.integral));
    r.row(vec!["integral".into(), w.integral.to_string()]);
    if let (Some(z), Some(b)) = (&w.z, &w.b) {
        r.set("integral_representative", total_value(&l.space, &l.fc, z)).set("correction", total_value(&l.space, &l.fc, b));
    } else if let Some(z) = &w.z {
        r.set("integral_representative", total_value(&l.space, &l.fc, z));
    }
    Ok(r)
}

// ---- bundles ----

fn bundle_input(l: &Loaded) -> Result<BundleCocycle, CliError> {
    let c = BundleCocycle::new(l.input.block_at(&l.space, &l.fc, 1, 0, "a bundle cocycle lift")?)?;
    let problems = validate_bundle(&l.fc, &c);
    if !problems.is_empty() {
        return Err(violations("InvalidBundle", problems));
    }
    Ok(c)
}

fn class_json(c: &stackcoh::cohomology::CohomologyClass) -> Value {
    json!({
        "degree": c.degree,
        "group": presentation_json(&c.group),
        "coordinates": c.coordinates.iter().map(|&x| x as i64).collect::<Vec<_>>(),
        "zero": c.is_zero(),
    })
}

fn chern(d: &Doc, opts: &Options) -> Outcome {
    let l = load_cochain(d, opts, 2)?;
    let c = bundle_input(&l)?;
    let class = chern_class(&l.fc, &c)?;
    let mut r = Report::new("chern", &["group", "coordinates"]);
    r.set("class", class_json(&class)).set("representative", total_value(&l.space, &l.fc, &class.representative));
    r.row(vec![class.group.label(Coeff::Z), format!("{:?}", class.coordinates)]);
    Ok(r)
}

fn bundle_curvature(d1: &Doc, d2: &Doc, opts: &Options) -> Outcome {
    let l = load_cochain(d1, opts, 2)?;
    let c = bundle_input(&l)?;
    let a = PseudoConnection::new(same_space(&l, d2)?.block_at(&l.space, &l.fc, 0, 1, "a pseudo-connection")?)?;
    let k = pseudo_curvature(&l.fc, &c, &a)?;
    let total = k.total(&l.fc)?;
    let matches = l.fc.cohomologous(&total, &chern_cocycle(&l.fc, &c)?.with_coeff(Coeff::Q))?;
    let mut r = Report::new("pseudo-curvature", &["check", "value"]);
    r.set("curvature", total_value(&l.space, &l.fc, &total)).set("matches_chern", json!(matches));
    r.row(vec!["matches chern class".into(), matches.to_string()]);
    Ok(r)
}

fn realize(d: &Doc, opts: &Options) -> Outcome {
    let l = load_cochain(d, opts, 2)?;
    let x = l.input.total(&l.space, &l.fc)?;
    let (c, a) = realize_bundle(&l.fc, &x)?;
    let class = chern_class(&l.fc, &c)?;
    let mut r = Report::new("realize-bundle", &["output", "value"]);
    r.set("bundle", block_value(&l.space, &l.fc, &c.lift))
        .set("circle_values", block_value(&l.space, &l.fc, &circle(&c.lift)))
        .set("connection", block_value(&l.space, &l.fc, &a.a))
        .set("chern", class_json(&class));
    r.row(vec!["chern class".into(), format!("{:?}", class.coordinates)]);
    Ok(r)
}

// ---- extensions and gerbes ----

fn extension_summary(r: &mut Report, ext: &ExtensionGroupoid) {
    let problems = ext.validate();
    r.set("objects", json!(ext.total.num_objects()))
        .set("arrows", json!(ext.total.num_arrows()))
        .set("valid", json!(problems.is_empty()))
        .set("abelian", json!(ext.is_abelian()))
        .set("split", json!(has_homomorphic_section(ext)));
    r.row(vec!["arrows".into(), ext.total.num_arrows().to_string()])
        .row(vec!["valid".into(), problems.is_empty().to_string()])
        .row(vec!["abelian".into(), ext.is_abelian().to_string()])
        .row(vec!["split".into(), has_homomorphic_section(ext).to_string()]);
    if !problems.is_empty() {
        r.code = EXIT_MATH;
        r.error = Some(violations("InvalidExtension", problems));
    }
}

fn fiber_order(opts: &Options, values: &[Rational]) -> u64 {
    opts.fiber_order.unwrap_or_else(|| common_denominator(values).max(1) as u64)
}

fn extension_build(d: &Doc, opts: &Options) -> Outcome {
    let l = load_cochain(d, opts, 2)?;
    if l.fc.model().regime != Regime::Finite {
        return Err(CliError::schema("extensions are built over finite groupoids"));
    }
    let sigma = l.input.block_at(&l.space, &l.fc, 2, 0, "an extension cocycle")?;
    let n = fiber_order(opts, &sigma.values);
    let ext = extension_from_cocycle(&l.fc, &sigma, n)?;
    let mut r = Report::new("extension-build", &["property", "value"]);
    r.set("fiber_order", json!(n)).set("extension", extension_value(&ext, &ext.default_section()));
    extension_summary(&mut r, &ext);
    Ok(r)
}

fn extension_cocycle(d: &Doc, opts: &Options) -> Outcome {
    let MorphismInput::Extension { ext, section } = doc::morphism(d)? else {
        return Err(CliError::schema("expected a morphism with a `fiber`"));
    };
    let space = Space::Groupoid(ext.base.clone());
    let fc = space.complex(opts.degree(3, 3), opts.cell_cap)?;
    let section = section.unwrap_or_else(|| ext.default_section());
    let sigma = cocycle_from_extension(&fc, &ext, &section)?;
    let class = dd_class(&fc, &ExtensionCocycle::new(sigma.clone())?)?;
    let mut r = Report::new("extension-cocycle", &["output", "value"]);
    r.set("cocycle", block_value(&space, &fc, &sigma)).set("dd_class", class_json(&class));
    r.row(vec!["dd class".into(), format!("{:?}", class.coordinates)]);
    Ok(r)
}

fn tensor_product(d1: &Doc, d2: &Doc, opts: &Options) -> Outcome {
    let l = load_cochain(d1, opts, 3)?;
    let s1 = extension_cocycle_input(&l)?;
    let other = Loaded { input: same_space(&l, d2)?, space: l.space.clone(), fc: l.space.complex(opts.degree(3, 3), opts.cell_cap)? };
    let s2 = extension_cocycle_input(&other)?;
    let s = tensor(&l.fc, &s1, &s2)?;
    let class = dd_class(&l.fc, &s)?;
    let mut r = Report::new("tensor", &["output", "value"]);
    r.set("cocycle", block_value(&l.space, &l.fc, &circle(&s.lift))).set("dd_class", class_json(&class));
    r.row(vec!["dd class".into(), format!("{:?}", class.coordinates)]);
    Ok(r)
}

/// The cochain map of a morphism document and the source space, given the target complex.
fn morphism_map(
    m: &MorphismInput,
    target: &Space,
    coarse: &FormComplex,
    degree: usize,
    cap: usize,
) -> Result<(Space, FormComplex, CochainMap), CliError> {
    let plain = |f: &GroupoidMorphism| -> Result<(Space, FormComplex, CochainMap), CliError> {
        match target {
            Space::Groupoid(g) if *g == f.target => {}
            _ => return Err(CliError::schema("the cochain does not live on the morphism's target")),
        }
        let source = Space::Groupoid(f.source.clone());
        let fine = source.complex(degree, cap)?;
        let map = pullback_map(f, None, &fine, coarse)?;
        Ok((source, fine, map))
    };
    match m {
        MorphismInput::Groupoid(f) => plain(f),
        MorphismInput::Extension { ext, .. } => {
            let objects = (0..ext.total.num_objects()).collect();
            plain(&GroupoidMorphism::new(ext.total.clone(), ext.base.clone(), objects, ext.projection.clone())?)
        }
        MorphismInput::Refinement { fine, coarse: coarse_cg, assignment } => {
            match target {
                Space::Cech(cg) if cg == coarse_cg => {}
                _ => return Err(CliError::schema("the cochain does not live on the coarse cover")),
            }
            let f = refinement_morphism(fine, coarse_cg, assignment)?;
            let source = Space::Cech(fine.clone());
            let fine_fc = source.complex(degree, cap)?;
            let map = f.pullback_map(&fine_fc, coarse)?;
            Ok((source, fine_fc, map))
        }
    }
}

fn pullback(dm: &Doc, dc: &Doc, opts: &Options) -> Outcome {
    let m = doc::morphism(dm)?;
    let l = load_cochain(dc, opts, 0)?;
    let degree = opts.degree(l.input.degree(), l.input.degree());
    let (source, fine, map) = morphism_map(&m, &l.space, &l.fc, degree, opts.cell_cap)?;
    let mut r = Report::new("pullback", &["output", "value"]);
    match l.input.shape {
        Shape::Block(..) => {
            let c = l.input.block(&l.space, &l.fc)?;
            let out = map.apply_block(&c)?;
            let out = Cochain::new(out.p, out.k, out.coeff, out.values.iter().map(|v| out.coeff.reduce(v)).collect());
            r.row(vec!["bidegree".into(), format!("({},{})", out.p, out.k)]);
            r.set("cochain", block_value(&source, &fine, &out));
        }
        _ => {
            let t = l.input.total(&l.space, &l.fc)?;
            let out = pullback_total(&map, &t)?;
            r.row(vec!["degree".into(), out.degree.to_string()]);
            r.set("cochain", total_value(&source, &fine, &out));
        }
    }
    Ok(r)
}

fn dd(d: &Doc, opts: &Options) -> Outcome {
    let l = load_cochain(d, opts, 3)?;
    let sigma = extension_cocycle_input(&l)?;
    let class = dd_class(&l.fc, &sigma)?;
    let mut r = Report::new("dd-class", &["group", "coordinates", "zero"]);
    r.set("class", class_json(&class)).set("representative", total_value(&l.space, &l.fc, &class.representative));
    r.row(vec![class.group.label(Coeff::Z), format!("{:?}", class.coordinates), class.is_zero().to_string()]);
    Ok(r)
}

fn gerbe_connection(l: &Loaded, da: &Doc, db: &Doc) -> Result<GerbeConnection, CliError> {
    let a = same_space(l, da)?.block_at(&l.space, &l.fc, 1, 1, "the connection A")?;
    let b = same_space(l, db)?.block_at(&l.space, &l.fc, 0, 2, "the curving B")?;
    Ok(GerbeConnection::new(a, b)?)
}

fn gerbe_curvature(ds: &Doc, da: &Doc, db: &Doc, opts: &Options) -> Outcome {
    let l = load_cochain(ds, opts, 3)?;
    let sigma = extension_cocycle_input(&l)?;
    let conn = gerbe_connection(&l, da, db)?;
    let k = pseudo_curvature_gerbe(&l.fc, &sigma, &conn)?;
    let total = k.total(&l.fc)?;
    let connective = connective_check(&l.fc, &sigma, &conn.a)?;
    let matches = l.fc.cohomologous(&total, &dd_cocycle(&l.fc, &sigma)?.with_coeff(Coeff::Q))?;
    let mut r = Report::new("gerbe-curvature", &["check", "value"]);
    r.set("eta", block_value(&l.space, &l.fc, &k.eta))
        .set("omega", block_value(&l.space, &l.fc, &k.omega))
        .set("big_omega", block_value(&l.space, &l.fc, &k.big_omega))
        .set("curvature", total_value(&l.space, &l.fc, &total))
        .set("connective", json!(connective))
        .set("matches_dd", json!(matches));
    r.row(vec!["connective".into(), connective.to_string()]).row(vec!["matches dd class".into(), matches.to_string()]);
    Ok(r)
}

fn curving(d: &Doc, opts: &Options) -> Outcome {
    let l = load_cochain(d, opts, 3)?;
    let a = l.input.block_at(&l.space, &l.fc, 1, 1, "the connection A")?;
    match find_curving(&l.fc, &a)? {
        Curving::Found(b) => {
            let (omega, descends) = curvature(&l.fc, &b)?;
            let mut r = Report::new("curving", &["check", "value"]);
            r.set("curving", block_value(&l.space, &l.fc, &b))
                .set("curvature", block_value(&l.space, &l.fc, &omega))
                .set("descends", json!(descends));
            r.row(vec!["curving found".into(), "true".into()]).row(vec!["curvature descends".into(), descends.to_string()]);
            Ok(r)
        }
        Curving::Obstructed(obstruction) => Err(CliError::math(
            "CurvingObstructed",
            "dA is not in the image of the horizontal differential",
            block_value(&l.space, &l.fc, &obstruction),
        )),
    }
}

fn flat_check(ds: &Doc, da: &Doc, db: &Doc, opts: &Options) -> Outcome {
    let l = load_cochain(ds, opts, 3)?;
    let sigma = extension_cocycle_input(&l)?;
    let conn = gerbe_connection(&l, da, db)?;
    let connective = connective_check(&l.fc, &sigma, &conn.a)?;
    let curving = l.fc.apply_d(&conn.a) == l.fc.apply_del(&conn.b);
    let closed = l.fc.apply_d(&conn.b).is_zero();
    let flat = is_flat(&l.fc, &sigma, &conn)?;
    let mut r = Report::new("flat-check", &["equation", "holds"]);
    r.set("connective", json!(connective)).set("curving", json!(curving)).set("curvature_zero", json!(closed)).set("flat", json!(flat));
    r.row(vec!["del A = d sigma".into(), connective.to_string()])
        .row(vec!["d A = del B".into(), curving.to_string()])
        .row(vec!["d B = 0".into(), closed.to_string()])
        .row(vec!["flat".into(), flat.to_string()]);
    Ok(r)
}

fn holonomy_report(d: &Doc, opts: &Options) -> Outcome {
    let input = doc::cochain(d)?;
    if !matches!(input.shape, Shape::Simplicial(1)) {
        return Err(CliError::schema("holonomy takes a 1-cochain on a complex"));
    }
    let (k, a) = input.simplicial()?;
    let free = is_holonomy_free(&k, &a)?;
    let mut r = Report::new("holonomy", &["loop", "holonomy"]);
    let boundary = k.coboundary(0).transpose();
    let mut loops = Vec::new();
    for (i, z) in integer_kernel(&boundary)?.iter().enumerate() {
        let h = holonomy(&k, &a, z)?;
        loops.push(json!({"cycle": z.iter().map(|&x| x as i64).collect::<Vec<_>>(), "holonomy": format_circle(&h)}));
        r.row(vec![format!("basis[{i}]"), format_circle(&h)]);
    }
    r.set("holonomy_free", json!(free)).set("basis_loops", json!(loops));
    if let Some(path) = &opts.loop_ {
        let z = loop_cycle(&k, path)?;
        let h = holonomy(&k, &a, &z)?;
        r.set("loop", json!({"vertices": path, "holonomy": format_circle(&h)}));
        r.row(vec![path.join("-"), format_circle(&h)]);
    }
    r.row(vec!["holonomy free".into(), free.to_string()]);
    Ok(r)
}

/// The 1-cycle of a closed vertex path `v0, v1, …, v0`.
fn loop_cycle(k: &stackcoh::simplicial::SimplicialComplex, path: &[String]) -> Result<Vec<i128>, CliError> {
    let ids = path
        .iter()
        .map(|v| k.vertices().iter().position(|x| x == v).ok_or_else(|| CliError::schema(format!("unknown vertex `{v}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    if ids.len() < 2 || ids.first() != ids.last() {
        return Err(CliError::schema("a loop lists its vertices and returns to the first one"));
    }
    let mut z = vec![0i128; k.count(1)];
    for w in ids.windows(2) {
        let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
        let e = k.index_of(&[a, b]).ok_or_else(|| CliError::schema(format!("no edge {}-{}", path[0], path[1])))?;
        z[e] += if w[0] < w[1] { 1 } else { -1 };
    }
    Ok(z)
}

fn enumerate(d: &Doc, opts: &Options) -> Outcome {
    let space = space_of(d)?;
    if !matches!(space, Space::Groupoid(_)) {
        return Err(CliError::schema("enumeration takes a groupoid"));
    }
    let n = opts.fiber_order.unwrap_or(2);
    let fc = space.complex(opts.degree(3, 3), opts.cell_cap)?;
    let classes = enumerate_extension_classes(&fc, n)?;
    let mut r = Report::new("enumerate-extensions", &["class", "dd coordinates", "abelian", "split"]);
    let mut out = Vec::new();
    for (i, sigma) in classes.iter().enumerate() {
        let class = dd_class(&fc, sigma)?;
        let ext = extension_from_cocycle(&fc, &circle(&sigma.lift), n)?;
        out.push(json!({
            "cocycle": block_value(&space, &fc, &circle(&sigma.lift)),
            "dd_class": class_json(&class),
            "abelian": ext.is_abelian(),
            "split": has_homomorphic_section(&ext),
        }));
        r.row(vec![
            i.to_string(),
            format!("{:?}", class.coordinates),
            ext.is_abelian().to_string(),
            has_homomorphic_section(&ext).to_string(),
        ]);
    }
    r.set("fiber_order", json!(n)).set("count", json!(classes.len())).set("classes", json!(out));
    Ok(r)
}

// ---- Morita ----

fn as_morita(m: &MorphismInput) -> Result<(GroupoidMorphism, Option<Vec<usize>>), CliError> {
    match m {
        MorphismInput::Groupoid(f) => Ok((f.clone(), None)),
        MorphismInput::Extension { ext, .. } => {
            let objects = (0..ext.total.num_objects()).collect();
            Ok((
                GroupoidMorphism {
                    source: ext.total.clone(),
                    target: ext.base.clone(),
                    object_map: objects,
                    arrow_map: ext.projection.clone(),
                },
                None,
            ))
        }
        MorphismInput::Refinement { fine, coarse, assignment } => {
            let f = refinement_morphism(fine, coarse, assignment)?;
            Ok((f.morphism, f.assignment))
        }
    }
}

fn morita_validate(d: &Doc) -> Outcome {
    let m = doc::morphism(d)?;
    let problems = match as_morita(&m) {
        Ok((f, _)) => validate_morita(&f),
        Err(e) if e.kind == "NotARefinement" => vec![e.message],
        Err(e) => return Err(e),
    };
    let mut r = Report::new("morita-validate", &["check", "value"]);
    r.set("morita", json!(problems.is_empty())).set("violations", json!(problems));
    r.row(vec!["morita".into(), problems.is_empty().to_string()]);
    for p in &problems {
        r.row(vec!["violation".into(), p.clone()]);
    }
    if !problems.is_empty() {
        r.code = EXIT_MATH;
        r.error = Some(violations("NotMorita", problems));
    }
    Ok(r)
}

fn morita_verify(d: &Doc, opts: &Options) -> Outcome {
    let m = doc::morphism(d)?;
    let (f, assignment) = as_morita(&m)?;
    let problems = validate_morita(&f);
    if !problems.is_empty() {
        return Err(violations("NotMorita", problems));
    }
    let coeff = opts.coeff.unwrap_or(Coeff::Z);
    let md = opts.degree(3, 0);
    let (fine, coarse) = match &m {
        MorphismInput::Refinement { fine, coarse, .. } => (Space::Cech(fine.clone()), Space::Cech(coarse.clone())),
        _ => (Space::Groupoid(f.source.clone()), Space::Groupoid(f.target.clone())),
    };
    let (ffc, cfc) = (fine.complex(md + 1, opts.cell_cap)?, coarse.complex(md + 1, opts.cell_cap)?);
    let report = verify_invariance(&MoritaMorphism { morphism: f, assignment }, &ffc, &cfc, coeff, md)?;
    let mut r = Report::new("morita-verify", &["degree", "coarse", "fine", "verdict"]);
    let mut degrees = Vec::new();
    for v in &report.degrees {
        let verdict = format!("{:?}", v.verdict);
        degrees.push(json!({
            "degree": v.degree,
            "coarse": presentation_json(&v.coarse),
            "fine": presentation_json(&v.fine),
            "verdict": verdict,
            "matrix": v.matrix.iter().map(|row| ints(row)).collect::<Vec<_>>(),
        }));
        r.row(vec![v.degree.to_string(), v.coarse.label(coeff), v.fine.label(coeff), verdict]);
    }
    r.set("coeff", json!(coeff.to_string())).set("degrees", json!(degrees)).set("all_iso", json!(report.all_iso()));
    if report.degrees.iter().any(|v| v.verdict == Verdict::NotIso) {
        r.code = EXIT_MATH;
        r.error = Some(CliError::math("NotInvariant", "some degree is not an isomorphism", Value::Null));
    }
    Ok(r)
}

fn refine_cover(d: &Doc, opts: &Options) -> Outcome {
    let MorphismInput::Refinement { fine, coarse, assignment } = doc::morphism(d)? else {
        return Err(CliError::schema("refine takes a morphism between covers with an `assignment`"));
    };
    let (refined, f) = refine(&coarse, &fine.cover, &assignment)?;
    let md = opts.degree(2, 0);
    let fine_fc = Space::Cech(refined.clone()).complex(md + 1, opts.cell_cap)?;
    let coarse_fc = Space::Cech(coarse.clone()).complex(md + 1, opts.cell_cap)?;
    let verdicts = verify_invariance(&f, &fine_fc, &coarse_fc, Coeff::Z, md)?;
    let mut r = Report::new("refine", &["property", "value"]);
    r.set("cover", doc::cover_value(&refined.complex, &refined.cover))
        .set("patches", json!(refined.cover.len()))
        .set("objects", json!(refined.groupoid.num_objects()))
        .set("arrows", json!(refined.groupoid.num_arrows()))
        .set("banal", json!(refined.is_banal()))
        .set("morita", json!(validate_morita(&f.morphism).is_empty()))
        .set("iso_through_degree", json!(md))
        .set("all_iso", json!(verdicts.all_iso()));
    r.row(vec!["patches".into(), refined.cover.len().to_string()])
        .row(vec!["objects".into(), refined.groupoid.num_objects().to_string()])
        .row(vec!["arrows".into(), refined.groupoid.num_arrows().to_string()])
        .row(vec!["banal".into(), refined.is_banal().to_string()])
        .row(vec!["isomorphic cohomology".into(), verdicts.all_iso().to_string()]);
    Ok(r)
}
