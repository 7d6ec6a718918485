//! Čech groupoids of covers: the banal groupoid `∐U_αβ ⇉ ∐U_α` over a simplicial complex.

use crate::error::{Error, Result};
use crate::groupoid::{Arrow, FiniteGroupoid};
use crate::simplicial::{Cover, SimplicialComplex};

/// Čech groupoid of a cover together with its simplicial carrier.
///
/// `groupoid` is the vertex-level banal groupoid: objects are pairs
/// `(α, v)` with `v` a vertex of `U_α`, arrows are triples `(α, β, v)` with
/// `v ∈ U_α ∩ U_β`, going from `(α, v)` to `(β, v)`. Diagonal arrows
/// `(α, α, v)` are the identities. The simplicial carrier of the nerve (patch
/// tuples with their iterated intersections) is built by
/// [`crate::complex::SimplicialModel::of_cech`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CechGroupoid {
    pub complex: SimplicialComplex,
    pub cover: Cover,
    pub groupoid: FiniteGroupoid,
    pub object_points: Vec<(usize, usize)>,
    pub arrow_points: Vec<(usize, usize, usize)>,
}

pub fn cech_groupoid(complex: &SimplicialComplex, cover: &Cover) -> Result<CechGroupoid> {
    // re-validate: every simplex must lie in some patch
    let cover = Cover::new(complex, cover.names.clone(), cover.patches.clone())?;
    let vertex_in = |a: usize, v: usize| cover.patches[a].contains(0, v);
    let n_patch = cover.len();
    let n_vert = complex.count(0);

    let object_points: Vec<(usize, usize)> =
        (0..n_patch).flat_map(|a| (0..n_vert).map(move |v| (a, v))).filter(|&(a, v)| vertex_in(a, v)).collect();
    let arrow_points: Vec<(usize, usize, usize)> = (0..n_patch)
        .flat_map(|a| (0..n_patch).flat_map(move |b| (0..n_vert).map(move |v| (a, b, v))))
        .filter(|&(a, b, v)| vertex_in(a, v) && vertex_in(b, v))
        .collect();

    let obj = |a: usize, v: usize| object_points.binary_search(&(a, v)).expect("object point");
    let arr = |a: usize, b: usize, v: usize| arrow_points.binary_search(&(a, b, v)).ok();

    let objects = object_points.iter().map(|&(a, v)| format!("{}@{}", cover.names[a], complex.vertices()[v])).collect();
    let arrows: Vec<Arrow> = arrow_points
        .iter()
        .map(|&(a, b, v)| Arrow {
            name: format!("{}{}@{}", cover.names[a], cover.names[b], complex.vertices()[v]),
            source: obj(a, v),
            target: obj(b, v),
        })
        .collect();
    let m = arrows.len();
    let mut compose = vec![None; m * m];
    for (g, &(a, b, v)) in arrow_points.iter().enumerate() {
        for (h, &(b2, c, w)) in arrow_points.iter().enumerate() {
            if b == b2 && v == w {
                compose[g * m + h] = arr(a, c, v);
            }
        }
    }
    let identity = object_points.iter().map(|&(a, v)| arr(a, a, v).expect("diagonal arrow")).collect();
    let inverse = arrow_points.iter().map(|&(a, b, v)| arr(b, a, v).expect("reversed arrow")).collect();
    let groupoid = FiniteGroupoid::from_tables(objects, arrows, compose, identity, inverse)?;
    let report = groupoid.validate();
    if !report.is_empty() {
        return Err(Error::InvalidGroupoid(report.join("; ")));
    }
    Ok(CechGroupoid { complex: complex.clone(), cover, groupoid, object_points, arrow_points })
}

impl CechGroupoid {
    /// Fibered-product property: `(s, t)` is injective and hits exactly the
    /// pairs of objects lying over the same vertex.
    pub fn is_banal(&self) -> bool {
        let g = &self.groupoid;
        let n = g.num_objects();
        let mut hits = vec![0usize; n * n];
        for a in g.arrows() {
            hits[a.source * n + a.target] += 1;
        }
        (0..n).all(|x| {
            (0..n).all(|y| {
                let same_point = self.object_points[x].1 == self.object_points[y].1;
                hits[x * n + y] == usize::from(same_point)
            })
        })
    }

    /// Number of ordered patch pairs `(α, β)` with `α ≠ β` and `U_α ∩ U_β` nonempty.
    pub fn nonempty_double_intersections(&self) -> usize {
        let n = self.cover.len();
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| a != b && !self.cover.intersection(&[a, b]).is_empty()).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_cover() {
        let k = SimplicialComplex::sphere_boundary(2);
        let cg = cech_groupoid(&k, &Cover::by_facets(&k)).unwrap();
        assert_eq!(cg.cover.len(), 3);
        assert_eq!(cg.nonempty_double_intersections(), 6);
        assert!(cg.is_banal());
        assert!(cg.groupoid.is_valid());
    }

    #[test]
    fn single_piece_is_trivial_banal() {
        let k = SimplicialComplex::sphere_boundary(3);
        let cg = cech_groupoid(&k, &Cover::single(&k)).unwrap();
        assert_eq!(cg.groupoid.num_objects(), 4);
        assert_eq!(cg.groupoid.num_arrows(), 4);
        assert!(cg.is_banal());
    }
}
