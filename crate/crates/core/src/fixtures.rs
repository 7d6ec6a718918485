//! Small groupoids, complexes and covers used throughout tests, examples and
//! the command line front-end.

use crate::cech::{cech_groupoid, CechGroupoid};
use crate::groupoid::{FiniteGroupoid, GroupoidMorphism};
use crate::simplicial::{Cover, SimplicialComplex, Subcomplex};

pub fn trivial() -> FiniteGroupoid {
    FiniteGroupoid::trivial()
}

pub fn cyclic(n: usize) -> FiniteGroupoid {
    FiniteGroupoid::cyclic(n)
}

pub fn klein_four() -> FiniteGroupoid {
    FiniteGroupoid::klein_four()
}

pub fn symmetric3() -> FiniteGroupoid {
    FiniteGroupoid::symmetric3()
}

/// The finite groupoid fixtures by name.
pub fn groupoids() -> Vec<(&'static str, FiniteGroupoid)> {
    vec![("trivial", trivial()), ("Z2", cyclic(2)), ("Z3", cyclic(3)), ("Z4", cyclic(4)), ("V4", klein_four()), ("S3", symmetric3())]
}

/// `∂Δ²`, a circle.
pub fn triangle() -> SimplicialComplex {
    SimplicialComplex::sphere_boundary(2)
}

/// `∂Δ³`, a 2-sphere.
pub fn tetrahedron() -> SimplicialComplex {
    SimplicialComplex::sphere_boundary(3)
}

/// `∂Δ⁴`, a 3-sphere.
pub fn pentachoron() -> SimplicialComplex {
    SimplicialComplex::sphere_boundary(4)
}

/// Adds every vertex as its own patch; each vertex patch is assigned to the
/// first original patch containing it. Returns the fine cover and the
/// assignment fine patch → coarse patch.
pub fn refine_with_vertices(k: &SimplicialComplex, cover: &Cover) -> (Cover, Vec<usize>) {
    let mut names = cover.names.clone();
    let mut patches = cover.patches.clone();
    let mut assignment: Vec<usize> = (0..cover.len()).collect();
    for v in 0..k.count(0) {
        let vid = k.index_of(&[v]).expect("vertex");
        let owner = cover.patches.iter().position(|p| p.contains(0, vid)).expect("cover contains every vertex");
        names.push(format!("{}@{}", cover.names[owner], k.vertices()[v]));
        patches.push(Subcomplex { simplices: vec![vec![vid]] });
        assignment.push(owner);
    }
    (Cover::new(k, names, patches).expect("refinement still covers"), assignment)
}

pub fn triangle_cech() -> CechGroupoid {
    let k = triangle();
    cech_groupoid(&k, &Cover::by_facets(&k)).expect("facet cover")
}

pub fn tetrahedron_cech() -> CechGroupoid {
    let k = tetrahedron();
    cech_groupoid(&k, &Cover::by_facets(&k)).expect("facet cover")
}

/// Refined facet cover of the triangle with its assignment to the facet cover.
pub fn triangle_refined() -> (CechGroupoid, Vec<usize>) {
    let k = triangle();
    let (fine, assignment) = refine_with_vertices(&k, &Cover::by_facets(&k));
    (cech_groupoid(&k, &fine).expect("refined cover"), assignment)
}

pub fn tetrahedron_refined() -> (CechGroupoid, Vec<usize>) {
    let k = tetrahedron();
    let (fine, assignment) = refine_with_vertices(&k, &Cover::by_facets(&k));
    (cech_groupoid(&k, &fine).expect("refined cover"), assignment)
}

pub fn single_piece(k: &SimplicialComplex) -> CechGroupoid {
    cech_groupoid(k, &Cover::single(k)).expect("single piece")
}

pub fn pentachoron_facets() -> CechGroupoid {
    let k = pentachoron();
    cech_groupoid(&k, &Cover::by_facets(&k)).expect("facet cover")
}

/// Named fixture morphisms between finite groupoids, Morita or not.
pub fn morphisms() -> Vec<(&'static str, GroupoidMorphism)> {
    let hom = |s: FiniteGroupoid, t: FiniteGroupoid, objects: Vec<usize>, arrows: Vec<usize>| {
        GroupoidMorphism::new(s, t, objects, arrows).expect("fixture morphism")
    };
    vec![
        ("id_Z2", GroupoidMorphism::identity(&cyclic(2))),
        ("id_V4", GroupoidMorphism::identity(&klein_four())),
        ("e->Z2", hom(trivial(), cyclic(2), vec![0], vec![0])),
        ("Z2->Z4", hom(cyclic(2), cyclic(4), vec![0], vec![0, 2])),
        ("Z4->Z2", hom(cyclic(4), cyclic(2), vec![0], vec![0, 1, 0, 1])),
        ("Z2->V4", hom(cyclic(2), klein_four(), vec![0], vec![0, 1])),
        ("V4->Z2", hom(klein_four(), cyclic(2), vec![0], vec![0, 1, 0, 1])),
        ("S3->Z2", hom(symmetric3(), cyclic(2), vec![0], vec![0, 1, 1, 1, 0, 0])),
        ("pair2->pt", hom(FiniteGroupoid::pair_groupoid(2), trivial(), vec![0, 0], vec![0; 4])),
    ]
}

/// The closed-star cover of the triangle split into half-stars: one patch
/// per (vertex, edge at that vertex), each assigned to the star of its vertex.
pub fn triangle_half_stars() -> (Cover, Vec<usize>) {
    let k = triangle();
    let mut names = Vec::new();
    let mut patches = Vec::new();
    let mut assignment = Vec::new();
    for v in 0..k.count(0) {
        for e in k.simplices(1).iter().filter(|e| e.contains(&v)) {
            names.push(format!("st{}/{}{}", k.vertices()[v], k.vertices()[e[0]], k.vertices()[e[1]]));
            patches.push(k.closure(std::slice::from_ref(e)).expect("edge closure"));
            assignment.push(v);
        }
    }
    (Cover::new(&k, names, patches).expect("half-stars cover"), assignment)
}
