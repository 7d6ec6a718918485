//! Acceptance run: one PASS/FAIL line per criterion. All comparisons are exact.
//!
//! A criterion passes when every one of its checks holds. The process fails
//! only on a FAIL that is not listed in `KNOWN`, or when a listed failure
//! stops reproducing for the stated reason.

use std::path::{Path, PathBuf};
use std::process::Command;

use num::Signed;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use stackcoh::arith::{int, rat, Coeff, Rational};
use stackcoh::bundles::*;
use stackcoh::cech::{cech_groupoid, CechGroupoid};
use stackcoh::cycles::orientation_cycle;
use stackcoh::extension::{extension_from_cocycle, ExtensionGroupoid};
use stackcoh::fixtures;
use stackcoh::gerbes::*;
use stackcoh::homalg::{invariant_factors, IntMatrix, Presentation};
use stackcoh::morita::*;
use stackcoh::simplicial::{Cover, SimplicialComplex};
use stackcoh::{Cochain, FiniteGroupoid, FormComplex, TotalCochain, DEFAULT_CELL_CAP};

/// Checks that cannot hold: criterion, the exact failing checks, and why.
const KNOWN: [(&str, &[&str], &str); 2] = [
    ("7", &["Z/2 dd_class is nonzero torsion"], "H^3(Z/2;Z) = H^2(Z/2;Q/Z) = 0, so every class over Z/2 is zero"),
    ("9", &["Z2: |H^2(Q/Z)| = 2", "Z2: 2 flat classes"], "|H^2(Z/2;Q/Z)| = 1, so there is exactly one flat class over Z/2"),
];

type Checks = Vec<(String, bool)>;
type Criterion = (&'static str, &'static str, fn() -> Checks);

fn check(out: &mut Checks, label: impl Into<String>, ok: bool) {
    out.push((label.into(), ok));
}

fn finite(g: &FiniteGroupoid, n: usize) -> FormComplex {
    FormComplex::of_groupoid(g, n, DEFAULT_CELL_CAP).unwrap()
}

fn cech(cg: &CechGroupoid, n: usize) -> FormComplex {
    FormComplex::of_cech(cg, n, DEFAULT_CELL_CAP).unwrap()
}

fn groupoid(name: &str) -> FiniteGroupoid {
    fixtures::groupoids().into_iter().find(|g| g.0 == name).unwrap().1
}

fn random_block(fc: &FormComplex, p: usize, k: usize, rng: &mut StdRng) -> Cochain {
    Cochain::new(p, k, Coeff::Q, (0..fc.block_len(p, k)).map(|_| rat(rng.gen_range(-12..=12), rng.gen_range(1..=6))).collect())
}

/// Class coordinates reduced into the torsion orders of `group`.
fn reduce(group: &Presentation, coords: &[i128]) -> Vec<i128> {
    coords
        .iter()
        .enumerate()
        .map(|(i, &x)| match group.torsion.get(i) {
            Some(&t) => x.rem_euclid(t),
            None => x,
        })
        .collect()
}

// ---- 1 ----

fn complex_identities() -> Checks {
    let mut out = Checks::new();
    for name in ["trivial", "Z2", "Z4", "V4", "S3"] {
        let fc = finite(&groupoid(name), 3);
        check(&mut out, format!("{name} double complex"), fc.check_identities().unwrap().is_empty());
        check(&mut out, format!("{name} nerve"), fc.model().nerve.check_simplicial_identities().is_empty());
    }
    let covers = [
        ("triangle", fixtures::triangle_cech()),
        ("tetrahedron", fixtures::tetrahedron_cech()),
        ("triangle refined", fixtures::triangle_refined().0),
        ("tetrahedron refined", fixtures::tetrahedron_refined().0),
    ];
    for (name, cg) in covers {
        let fc = cech(&cg, 3);
        check(&mut out, format!("{name} double complex"), fc.check_identities().unwrap().is_empty());
        check(&mut out, format!("{name} nerve"), fc.model().nerve.check_simplicial_identities().is_empty());
    }
    out
}

// ---- 2 ----

/// Inhomogeneous bar coboundary of a group with multiplication `table`;
/// p-tuples are encoded in base |G|.
fn bar_coboundary(table: &[Vec<usize>], p: usize) -> IntMatrix {
    let g = table.len();
    let decode = |mut x: usize, len: usize| {
        let mut t = vec![0; len];
        for slot in t.iter_mut().rev() {
            *slot = x % g;
            x /= g;
        }
        t
    };
    let encode = |t: &[usize]| t.iter().fold(0, |acc, &x| acc * g + x);
    let mut triplets = Vec::new();
    for row in 0..g.pow(p as u32 + 1) {
        let t = decode(row, p + 1);
        triplets.push((row, encode(&t[1..]), 1));
        for i in 1..=p {
            let mut s = t[..i - 1].to_vec();
            s.push(table[t[i - 1]][t[i]]);
            s.extend_from_slice(&t[i + 1..]);
            triplets.push((row, encode(&s), if i % 2 == 0 { 1 } else { -1 }));
        }
        triplets.push((row, encode(&t[..p]), if p.is_multiple_of(2) { -1 } else { 1 }));
    }
    IntMatrix::from_triplets(g.pow(p as u32 + 1), g.pow(p as u32), triplets)
}

fn bar_cohomology(table: &[Vec<usize>], n: usize) -> Presentation {
    let next = invariant_factors(&bar_coboundary(table, n)).unwrap();
    let prev = if n == 0 { Vec::new() } else { invariant_factors(&bar_coboundary(table, n - 1)).unwrap() };
    let rank = table.len().pow(n as u32) - next.len() - prev.len();
    Presentation::from_cyclic(rank, &prev).unwrap()
}

fn group_oracle() -> Checks {
    let mut out = Checks::new();
    for n in [2usize, 3, 4] {
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let fc = finite(&FiniteGroupoid::cyclic(n), 4);
        for k in 0..=4 {
            let got = fc.cohomology(k, Coeff::Z).unwrap();
            let pattern = match k {
                0 => Presentation::free(1),
                k if k % 2 == 1 => Presentation::zero(),
                _ => Presentation { rank: 0, torsion: vec![n as i128] },
            };
            check(&mut out, format!("Z/{n} H^{k} = bar oracle"), got == bar_cohomology(&table, k));
            check(&mut out, format!("Z/{n} H^{k} pattern"), got == pattern);
        }
    }
    out
}

// ---- 3 ----

/// Groupoid axioms checked directly on the composition table.
fn axioms_hold(g: &FiniteGroupoid) -> bool {
    let n = g.num_arrows();
    for a in 0..n {
        let (s, t) = (g.source(a), g.target(a));
        if g.compose(g.identity(s), a) != Some(a) || g.compose(a, g.identity(t)) != Some(a) {
            return false;
        }
        if g.compose(a, g.inverse(a)) != Some(g.identity(s)) || g.compose(g.inverse(a), a) != Some(g.identity(t)) {
            return false;
        }
        for b in 0..n {
            let ab = g.compose(a, b);
            if ab.is_some() != (t == g.source(b)) {
                return false;
            }
            for c in 0..n {
                let left = ab.and_then(|x| g.compose(x, c));
                let right = g.compose(b, c).and_then(|y| g.compose(a, y));
                if left != right {
                    return false;
                }
            }
        }
    }
    true
}

fn schur_multiplier() -> Checks {
    let mut out = Checks::new();
    let fc = finite(&groupoid("V4"), 3);
    check(&mut out, "|H^2(V4;Q/Z)| = 2", fc.cohomology(2, Coeff::QModZ).unwrap().order() == Some(2));
    let classes = enumerate_extension_classes(&fc, 2).unwrap();
    check(&mut out, "two classes", classes.len() == 2);
    let nontrivial: Vec<ExtensionGroupoid> =
        classes.iter().filter(|s| !dd_class(&fc, s).unwrap().is_zero()).map(|s| extension_from_cocycle(&fc, &s.lift, 2).unwrap()).collect();
    check(&mut out, "one nontrivial class", nontrivial.len() == 1);
    if let Some(ext) = nontrivial.first() {
        check(&mut out, "order 8", ext.total.num_arrows() == 8);
        check(&mut out, "nonabelian", !ext.is_abelian());
        check(&mut out, "groupoid axioms", axioms_hold(&ext.total) && ext.total.validate().is_empty());
        check(&mut out, "extension axioms", ext.validate().is_empty());
    }
    out
}

// ---- 4 ----

fn morita_invariance() -> Checks {
    let mut out = Checks::new();
    let circle = [Presentation::free(1), Presentation::free(1), Presentation::zero()];
    let sphere = [Presentation::free(1), Presentation::zero(), Presentation::free(1)];
    let spaces = [
        ("triangle", fixtures::triangle(), fixtures::triangle_cech(), fixtures::triangle_refined(), &circle),
        ("tetrahedron", fixtures::tetrahedron(), fixtures::tetrahedron_cech(), fixtures::tetrahedron_refined(), &sphere),
    ];
    for (name, k, coarse_cg, (fine_cg, assignment), expected) in spaces {
        let coarse = cech(&coarse_cg, 4);
        let fine = cech(&fine_cg, 4);
        for (n, expected) in expected.iter().enumerate() {
            let simplicial = k.integral_cohomology(n).unwrap();
            check(&mut out, format!("{name} simplicial H^{n}"), simplicial == *expected);
            check(&mut out, format!("{name} cover H^{n}"), coarse.cohomology(n, Coeff::Z).unwrap() == simplicial);
            check(&mut out, format!("{name} refined H^{n}"), fine.cohomology(n, Coeff::Z).unwrap() == simplicial);
        }
        let f = refinement_morphism(&fine_cg, &coarse_cg, &assignment).unwrap();
        check(&mut out, format!("{name} refinement is Morita"), validate_morita(&f.morphism).is_empty());
        check(&mut out, format!("{name} refinement iso"), verify_invariance(&f, &fine, &coarse, Coeff::Z, 3).unwrap().all_iso());
    }
    let k = fixtures::triangle();
    let stars = cech_groupoid(&k, &Cover::by_closed_stars(&k)).unwrap();
    let (halves, assignment) = fixtures::triangle_half_stars();
    let (halves_cg, f) = refine(&stars, &halves, &assignment).unwrap();
    check(&mut out, "half-stars iso", verify_invariance(&f, &cech(&halves_cg, 4), &cech(&stars, 4), Coeff::Z, 3).unwrap().all_iso());
    for (name, m) in fixtures::morphisms() {
        if !validate_morita(&m).is_empty() {
            continue;
        }
        let fine = finite(&m.source, 4);
        let coarse = finite(&m.target, 4);
        let f = MoritaMorphism::new(m).unwrap();
        check(&mut out, format!("{name} iso"), verify_invariance(&f, &fine, &coarse, Coeff::Z, 3).unwrap().all_iso());
    }
    out
}

// ---- 5, 6, 10 ----

fn sphere() -> FormComplex {
    cech(&fixtures::tetrahedron_cech(), 2)
}

/// The generator of H^2 of the sphere as a closed form with no (2,0) part.
fn generator(fc: &FormComplex) -> TotalCochain {
    without_top_component(fc, &fc.free_cocycles(2).unwrap().remove(0)).unwrap()
}

fn chern_correspondence() -> Checks {
    let mut out = Checks::new();
    let fc = sphere();
    let (c, _) = realize_bundle(&fc, &generator(&fc)).unwrap();
    let chern = chern_cocycle(&fc, &c).unwrap();
    let gamma = fc.fundamental_cycle().unwrap();
    check(&mut out, "pairing is +-1", fc.pair(&gamma, &chern).unwrap().abs() == int(1));
    let mut rng = StdRng::seed_from_u64(5);
    let mut all = true;
    for _ in 0..20 {
        let a = PseudoConnection::new(random_block(&fc, 0, 1, &mut rng)).unwrap();
        let k = pseudo_curvature(&fc, &c, &a).unwrap().total(&fc).unwrap();
        all &= fc.is_closed(&k).unwrap() && fc.cohomologous(&chern.with_coeff(Coeff::Q), &k).unwrap();
    }
    check(&mut out, "20 random pseudo-connections", all);
    out
}

fn realization_torsor() -> Checks {
    let mut out = Checks::new();
    let fc = sphere();
    let x = generator(&fc);
    let (c, a) = realize_bundle(&fc, &x).unwrap();
    check(&mut out, "round trip", pseudo_curvature(&fc, &c, &a).unwrap().total(&fc).unwrap() == x);
    check(&mut out, "valid bundle", validate_bundle(&fc, &c).is_empty());

    let fc = finite(&groupoid("Z2"), 3);
    let base = realize_bundle(&fc, &fc.zero_total(2, Coeff::Q)).unwrap();
    let order = fc.cohomology(1, Coeff::QModZ).unwrap().order();
    check(&mut out, "|H^1(Z/2;Q/Z)| = 2", order == Some(2));
    let sols: Vec<_> = fc.circle_classes(1, 2).unwrap().iter().map(|y| twist(&fc, (&base.0, &base.1), y).unwrap()).collect();
    let same = |i: usize, j: usize| {
        let d = difference_class(&fc, (&sols[i].0, &sols[i].1), (&sols[j].0, &sols[j].1)).unwrap();
        is_trivial_difference(&fc, &d).unwrap()
    };
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..sols.len() {
        if !reps.iter().any(|&r| same(i, r)) {
            reps.push(i);
        }
    }
    check(&mut out, "twists span 2 classes", Some(reps.len() as i128) == order);
    let curv = |s: &(BundleCocycle, PseudoConnection)| pseudo_curvature(&fc, &s.0, &s.1).unwrap().total(&fc).unwrap();
    check(&mut out, "equal curvature", sols.iter().all(|s| curv(s) == curv(&base)));
    check(&mut out, "difference separates", (0..sols.len()).all(|i| (0..sols.len()).all(|j| same(i, j) == (i == j))));
    out
}

fn integrality_criterion() -> Checks {
    let mut out = Checks::new();
    let fc = sphere();
    let z = fc.free_cocycles(2).unwrap().remove(0).with_coeff(Coeff::Q);
    for (label, s, integral) in
        [("generator", int(1), true), ("negative", int(-1), true), ("double", int(2), true), ("half", rat(1, 2), false)]
    {
        let w = z.scale(s);
        let exact = fc.is_integer_class(&w).unwrap().integral;
        let pairing = fc.integrality_by_pairing(&w).unwrap();
        check(&mut out, format!("{label}: exact test"), exact == integral);
        check(&mut out, format!("{label}: pairing test"), pairing.integral == integral);
        if !integral {
            check(&mut out, "half pairs to 1/2", pairing.pairings.iter().any(|q| q.abs() == rat(1, 2)));
        }
    }
    out
}

// ---- 7, 8, 9 ----

/// σ(1,1) = 1/2 on Z/2: the cocycle of the non-split extension Z/4.
fn z4_cocycle(fc: &FormComplex) -> ExtensionCocycle {
    ExtensionCocycle::new(fc.cochain_from_fn(2, 0, Coeff::Q, |cell, _| if cell == [1, 1] { rat(1, 2) } else { int(0) })).unwrap()
}

fn dd_correspondence() -> Checks {
    let mut out = Checks::new();
    let v4 = finite(&groupoid("V4"), 3);
    let v4_sigma = enumerate_extension_classes(&v4, 2).unwrap().into_iter().find(|s| !dd_class(&v4, s).unwrap().is_zero());
    let z2 = finite(&groupoid("Z2"), 3);
    let z2_sigma = z4_cocycle(&z2);
    check(
        &mut out,
        "Z/2 sigma is a non-split extension",
        !stackcoh::extension::has_homomorphic_section(&extension_from_cocycle(&z2, &z2_sigma.lift, 2).unwrap()),
    );
    let mut rng = StdRng::seed_from_u64(9);
    for (name, fc, sigma) in [("V4", &v4, v4_sigma), ("Z/2", &z2, Some(z2_sigma))] {
        let Some(sigma) = sigma else {
            check(&mut out, format!("{name} nontrivial sigma"), false);
            continue;
        };
        let dd = dd_class(fc, &sigma).unwrap();
        let dd_q = dd_cocycle(fc, &sigma).unwrap().with_coeff(Coeff::Q);
        let reference = pseudo_curvature_gerbe(fc, &sigma, &GerbeConnection::zero(fc)).unwrap().total(fc).unwrap();
        let mut constant = true;
        for _ in 0..20 {
            let conn = GerbeConnection::new(random_block(fc, 1, 1, &mut rng), random_block(fc, 0, 2, &mut rng)).unwrap();
            let k = pseudo_curvature_gerbe(fc, &sigma, &conn).unwrap().total(fc).unwrap();
            constant &= fc.is_closed(&k).unwrap() && fc.cohomologous(&k, &reference).unwrap();
        }
        check(&mut out, format!("{name} curvature class constant over 20 (A,B)"), constant);
        check(&mut out, format!("{name} curvature = Q-image of dd"), fc.cohomologous(&reference, &dd_q).unwrap());
        let zero = fc.zero_total(3, Coeff::Q);
        check(
            &mut out,
            format!("{name} both rationally trivial"),
            fc.cohomologous(&reference, &zero).unwrap() && fc.cohomologous(&dd_q, &zero).unwrap(),
        );
        check(&mut out, format!("{name} dd_class is nonzero torsion"), !dd.is_zero() && dd.group.rank == 0);
    }
    // the same correspondence with nonempty connection blocks
    let fc = cech(&fixtures::tetrahedron_cech(), 3);
    let sigma = ExtensionCocycle::new(fc.apply_del(&random_block(&fc, 1, 0, &mut rng))).unwrap();
    let reference = pseudo_curvature_gerbe(&fc, &sigma, &GerbeConnection::zero(&fc)).unwrap().total(&fc).unwrap();
    let dd_q = dd_cocycle(&fc, &sigma).unwrap().with_coeff(Coeff::Q);
    let mut constant = true;
    for _ in 0..20 {
        let conn = GerbeConnection::new(random_block(&fc, 1, 1, &mut rng), random_block(&fc, 0, 2, &mut rng)).unwrap();
        let k = pseudo_curvature_gerbe(&fc, &sigma, &conn).unwrap().total(&fc).unwrap();
        constant &= fc.cohomologous(&k, &reference).unwrap();
    }
    check(&mut out, "sphere curvature class constant over 20 (A,B)", constant);
    check(&mut out, "sphere curvature = Q-image of dd", fc.cohomologous(&reference, &dd_q).unwrap());
    out
}

fn tensor_and_pullback() -> Checks {
    let mut out = Checks::new();
    for (name, g) in fixtures::groupoids() {
        let fc = finite(&g, 3);
        let mut sigmas = enumerate_extension_classes(&fc, 2).unwrap();
        if name == "Z2" {
            sigmas.push(z4_cocycle(&fc));
        }
        let group = fc.cohomology(3, Coeff::Z).unwrap();
        let mut additive = true;
        for s1 in &sigmas {
            for s2 in &sigmas {
                let c1 = dd_class(&fc, s1).unwrap().coordinates;
                let c2 = dd_class(&fc, s2).unwrap().coordinates;
                let sum: Vec<i128> = c1.iter().zip(&c2).map(|(a, b)| a + b).collect();
                let got = dd_class(&fc, &tensor(&fc, s1, s2).unwrap()).unwrap().coordinates;
                additive &= reduce(&group, &got) == reduce(&group, &sum);
            }
        }
        check(&mut out, format!("{name} tensor additive"), additive);
    }
    for (name, f) in fixtures::morphisms() {
        let (fine, coarse) = (finite(&f.source, 4), finite(&f.target, 4));
        let map = pullback_map(&f, None, &fine, &coarse).unwrap();
        let mut natural = true;
        for sigma in enumerate_extension_classes(&coarse, 2).unwrap() {
            let lhs = dd_cocycle(&fine, &pullback_extension(&map, &sigma).unwrap()).unwrap();
            let rhs = pullback_total(&map, &dd_cocycle(&coarse, &sigma).unwrap()).unwrap();
            natural &= fine.cohomologous(&lhs, &rhs).unwrap();
        }
        check(&mut out, format!("{name} pullback natural"), natural);
    }
    let coarse_cg = fixtures::tetrahedron_cech();
    let (fine_cg, assignment) = fixtures::tetrahedron_refined();
    let f = refinement_morphism(&fine_cg, &coarse_cg, &assignment).unwrap();
    let (fine, coarse) = (cech(&fine_cg, 3), cech(&coarse_cg, 3));
    let map = f.pullback_map(&fine, &coarse).unwrap();
    let mut rng = StdRng::seed_from_u64(3);
    let sigma = ExtensionCocycle::new(coarse.apply_del(&random_block(&coarse, 1, 0, &mut rng))).unwrap();
    let lhs = dd_cocycle(&fine, &pullback_extension(&map, &sigma).unwrap()).unwrap();
    let rhs = pullback_total(&map, &dd_cocycle(&coarse, &sigma).unwrap()).unwrap();
    check(&mut out, "sphere refinement pullback natural", fine.cohomologous(&lhs, &rhs).unwrap());
    out
}

fn flat_classification() -> Checks {
    let mut out = Checks::new();
    for (name, expected) in [("Z2", 2usize), ("V4", 2)] {
        let fc = finite(&groupoid(name), 3);
        let flats = flat_classes(&fc, 2).unwrap();
        let order = fc.cohomology(2, Coeff::QModZ).unwrap().order();
        if name == "Z2" {
            check(&mut out, format!("{name}: |H^2(Q/Z)| = {expected}"), order == Some(expected as i128));
            check(&mut out, format!("{name}: {expected} flat classes"), flats.len() == expected);
        }
        check(&mut out, format!("{name}: flat classes = |H^2(Q/Z)|"), Some(flats.len() as i128) == order);
        let base = realize_gerbe(&fc, &fc.zero_total(3, Coeff::Q)).unwrap();
        let sols: Vec<GerbeDatum> = flats.iter().map(|f| add_data(&fc, &base, f).unwrap()).collect();
        let mut transitive = true;
        for (i, s) in sols.iter().enumerate() {
            for (j, t) in sols.iter().enumerate() {
                let d = difference_flat(&fc, s, t).unwrap();
                transitive &= is_flat(&fc, &d.sigma, &d.connection).unwrap();
                transitive &= add_data(&fc, t, &d).unwrap() == *s;
                transitive &= isomorphic(&fc, s, t).unwrap() == (i == j);
            }
        }
        check(&mut out, format!("{name}: difference_flat simply transitive"), transitive);
    }
    out
}

// ---- 11 ----

fn boundary_cycles(k: &SimplicialComplex) -> Vec<Vec<i128>> {
    if k.dim() < 2 {
        return Vec::new();
    }
    let bd = k.coboundary(1).transpose();
    (0..k.count(2)).map(|t| bd.mul_vec_int(&(0..k.count(2)).map(|i| i128::from(i == t)).collect::<Vec<_>>()).unwrap()).collect()
}

fn holonomy_checker() -> Checks {
    let mut out = Checks::new();
    let mut rng = StdRng::seed_from_u64(13);
    for (name, k) in [("triangle", fixtures::triangle()), ("tetrahedron", fixtures::tetrahedron()), ("3-sphere", fixtures::pentachoron())] {
        let f: Vec<Rational> = (0..k.count(0)).map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=5))).collect();
        let a = k.coboundary(0).mul_vec_rat(&f);
        let zero = boundary_cycles(&k).iter().all(|b| holonomy(&k, &a, b).unwrap() == int(0));
        check(&mut out, format!("{name}: zero on all boundaries"), zero);
        check(&mut out, format!("{name}: exact forms are holonomy free"), is_holonomy_free(&k, &a).unwrap());
    }
    let k = fixtures::triangle();
    let half: Vec<Rational> = (0..k.count(1)).map(|e| if e == 0 { rat(1, 2) } else { int(0) }).collect();
    let h = holonomy(&k, &half, &orientation_cycle(&k).unwrap()).unwrap();
    check(&mut out, "triangle: half-weight loop holonomy is 1/2", h.abs() == rat(1, 2));
    check(&mut out, "triangle: half-weight is not holonomy free", !is_holonomy_free(&k, &half).unwrap());
    out
}

// ---- 12 ----

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// Every subcommand on the fixture set.
pub const RUNS: [&[&str]; 33] = [
    &["validate", "z2.json"],
    &["validate", "circle_refinement.json"],
    &["validate", "sphere_bundle.json"],
    &["nerve", "v4.json", "--max-degree", "2"],
    &["nerve", "circle_facets.json", "--max-degree", "2"],
    &["cohomology", "z2.json", "--coeff", "Z", "--max-degree", "4"],
    &["cohomology", "v4.json", "--coeff", "QmodZ", "--max-degree", "3"],
    &["cohomology", "sphere_facets.json", "--max-degree", "2"],
    &["cohomology", "circle_refined.json", "--coeff", "Zmod:3", "--max-degree", "2"],
    &["homology", "z2.json", "--max-degree", "3"],
    &["pair", "sphere_half_area.json"],
    &["integrality", "sphere_area.json"],
    &["chern", "sphere_bundle.json"],
    &["pseudo-curvature", "sphere_bundle.json", "sphere_connection.json"],
    &["realize-bundle", "sphere_area.json"],
    &["realize-bundle", "sphere_half_area.json"],
    &["extension-build", "v4_sigma.json"],
    &["extension-cocycle", "v4_extension.json"],
    &["tensor", "v4_sigma.json", "v4_sigma.json"],
    &["pullback", "v4_to_z2.json", "z2_sigma.json"],
    &["pullback", "circle_refinement.json", "circle_one_form.json"],
    &["dd-class", "v4_sigma.json"],
    &["gerbe-curvature", "v4_sigma.json", "v4_a.json", "v4_b.json"],
    &["curving", "v4_a.json"],
    &["flat-check", "v4_sigma.json", "v4_a.json", "v4_b.json"],
    &["holonomy", "circle_half_flat.json", "--loop", "0,1,2,0"],
    &["enumerate-extensions", "v4.json", "--fiber-order", "2"],
    &["morita-validate", "v4_to_z2.json"],
    &["morita-verify", "circle_refinement.json"],
    &["morita-verify", "pair2_to_pt.json", "--coeff", "QmodZ"],
    &["refine", "circle_refinement.json"],
    &["run", "job_z2_cohomology.json"],
    &["run", "job_v4_dd.json"],
];

fn run_cli(args: &[&str], out: &Path, format: &str) -> (Vec<u8>, Vec<u8>, Option<i32>) {
    let o = Command::new(env!("CARGO_BIN_EXE_stackcoh"))
        .current_dir(fixture_dir())
        .args(args)
        .args(["--format", format, "--out"])
        .arg(out)
        .output()
        .unwrap();
    (o.stdout, std::fs::read(out).unwrap_or_default(), o.status.code())
}

fn determinism() -> Checks {
    let mut out = Checks::new();
    let dir = tempfile::tempdir().unwrap();
    for (i, args) in RUNS.iter().enumerate() {
        let (a, b) = (dir.path().join(format!("{i}a.json")), dir.path().join(format!("{i}b.json")));
        let first = run_cli(args, &a, "json");
        let second = run_cli(args, &b, "json");
        let table = (run_cli(args, &a, "table").0, run_cli(args, &b, "table").0);
        let same = first == second && table.0 == table.1 && first.0 == first.1 && !first.1.is_empty();
        check(&mut out, args.join(" "), same);
    }
    out
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("1", "complex identities", complex_identities),
        ("2", "group cohomology oracle", group_oracle),
        ("3", "Schur multiplier of V4", schur_multiplier),
        ("4", "banal and Morita invariance", morita_invariance),
        ("5", "Chern correspondence", chern_correspondence),
        ("6", "bundle realization torsor", realization_torsor),
        ("7", "DD correspondence", dd_correspondence),
        ("8", "tensor additivity and pullback naturality", tensor_and_pullback),
        ("9", "flat classification", flat_classification),
        ("10", "integrality criterion", integrality_criterion),
        ("11", "holonomy checker", holonomy_checker),
        ("12", "CLI determinism", determinism),
    ];
    let mut unexpected = Vec::new();
    for (id, title, run) in criteria {
        let start = std::time::Instant::now();
        let checks = run();
        let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0.as_str()).collect();
        let secs = start.elapsed().as_secs_f64();
        let known = KNOWN.iter().find(|k| k.0 == id);
        if failed.is_empty() {
            println!("PASS {id:>2} {title} ({} checks, exact, {secs:.1}s)", checks.len());
            if known.is_some() {
                unexpected.push(format!("{id}: listed as failing but passed"));
            }
        } else {
            println!("FAIL {id:>2} {title} ({}/{} checks failed, exact, {secs:.1}s)", failed.len(), checks.len());
            for f in &failed {
                println!("       failed: {f}");
            }
            match known {
                Some((_, labels, why)) if failed == *labels => println!("       reason: {why}"),
                _ => unexpected.push(format!("{id}: {}", failed.join(", "))),
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected acceptance results: {unexpected:?}");
        std::process::exit(1);
    }
}
