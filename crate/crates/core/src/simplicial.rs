//! Finite simplicial complexes with a global vertex order, subcomplexes and covers.
//!
//! A simplex is a strictly increasing list of vertex indices; orientation is
//! the one induced by the vertex order.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::homalg::{invariant_factors, IntMatrix, Presentation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl SimplicialComplex {
    /// Downward closure of the given simplices (vertex lists in any order).
    pub fn from_facets(vertices: Vec<String>, facets: &[Vec<usize>]) -> Result<Self> {
        let mut by_dim: Vec<BTreeSet<Vec<usize>>> = Vec::new();
        for f in facets {
            let mut s = f.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != f.len() || s.is_empty() {
                return Err(Error::InvalidComplex(format!("degenerate simplex {f:?}")));
            }
            if s.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::InvalidComplex(format!("simplex {f:?} uses an unknown vertex")));
            }
            // all nonempty subsets
            let n = s.len();
            for mask in 1u64..(1u64 << n) {
                let face: Vec<usize> = (0..n).filter(|b| mask & (1 << b) != 0).map(|b| s[b]).collect();
                let d = face.len() - 1;
                if by_dim.len() <= d {
                    by_dim.resize(d + 1, BTreeSet::new());
                }
                by_dim[d].insert(face);
            }
        }
        // isolated vertices still count as simplices
        if by_dim.is_empty() {
            by_dim.push(BTreeSet::new());
        }
        for v in 0..vertices.len() {
            by_dim[0].insert(vec![v]);
        }
        let simplices: Vec<Vec<Vec<usize>>> = by_dim.into_iter().map(|s| s.into_iter().collect()).collect();
        let index = simplices.iter().map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
        Ok(SimplicialComplex { vertices, simplices, index })
    }

    /// Boundary of the standard `n`-simplex (a simplicial `(n-1)`-sphere).
    pub fn sphere_boundary(n: usize) -> Self {
        let vertices = (0..=n).map(|v| v.to_string()).collect();
        let facets: Vec<Vec<usize>> = (0..=n).map(|skip| (0..=n).filter(|&v| v != skip).collect()).collect();
        SimplicialComplex::from_facets(vertices, &facets).expect("sphere facets")
    }

    /// A single point.
    pub fn point() -> Self {
        SimplicialComplex::from_facets(vec!["pt".into()], &[vec![0]]).expect("point")
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.simplices.len() - 1
    }

    /// `k`-simplices in lexicographic order (empty beyond the dimension).
    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.simplices.get(k).map_or(&[], |v| v.as_slice())
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices(k).len()
    }

    pub fn index_of(&self, simplex: &[usize]) -> Option<usize> {
        self.index.get(simplex.len().checked_sub(1)?)?.get(simplex).copied()
    }

    /// Maximal simplices, sorted by dimension then lexicographically.
    pub fn facets(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for k in 0..self.simplices.len() {
            for s in &self.simplices[k] {
                let is_face = self.simplices(k + 1).iter().any(|t| s.iter().all(|v| t.contains(v)));
                if !is_face {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    /// Coboundary `C^k → C^{k+1}`: `(dc)(τ) = Σ_j (-1)^j c(τ \ τ_j)`.
    pub fn coboundary(&self, k: usize) -> IntMatrix {
        let rows = self.simplices(k + 1);
        let triplets = rows.iter().enumerate().flat_map(|(r, tau)| {
            (0..tau.len()).map(move |j| {
                let mut face = tau.clone();
                face.remove(j);
                let sign = if j % 2 == 0 { 1 } else { -1 };
                (r, j, face, sign)
            })
        });
        let triplets: Vec<(usize, usize, i128)> =
            triplets.map(|(r, _, face, sign)| (r, self.index_of(&face).expect("closed under faces"), sign)).collect();
        IntMatrix::from_triplets(rows.len(), self.count(k), triplets)
    }

    /// Integral simplicial cohomology `H^k(K; Z)`.
    pub fn integral_cohomology(&self, k: usize) -> Result<Presentation> {
        let out = invariant_factors(&self.coboundary(k))?;
        let inc = if k == 0 { Vec::new() } else { invariant_factors(&self.coboundary(k - 1))? };
        let rank = self.count(k) - out.len() - inc.len();
        Presentation::from_cyclic(rank, &inc)
    }

    pub fn full(&self) -> Subcomplex {
        Subcomplex { simplices: (0..self.simplices.len()).map(|k| (0..self.count(k)).collect()).collect() }
    }

    /// Closure of a set of simplices (given by vertex lists).
    pub fn closure(&self, generators: &[Vec<usize>]) -> Result<Subcomplex> {
        let mut by_dim: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.simplices.len()];
        for g in generators {
            let mut s = g.clone();
            s.sort_unstable();
            if self.index_of(&s).is_none() {
                return Err(Error::InvalidComplex(format!("{g:?} is not a simplex of the complex")));
            }
            let n = s.len();
            for mask in 1u64..(1u64 << n) {
                let face: Vec<usize> = (0..n).filter(|b| mask & (1 << b) != 0).map(|b| s[b]).collect();
                by_dim[face.len() - 1].insert(self.index_of(&face).expect("face"));
            }
        }
        Ok(Subcomplex { simplices: by_dim.into_iter().map(|s| s.into_iter().collect()).collect() })
    }

    /// Closed star of a vertex: closure of all simplices containing it.
    pub fn closed_star(&self, v: usize) -> Subcomplex {
        let gens: Vec<Vec<usize>> = self.simplices.iter().flatten().filter(|s| s.contains(&v)).cloned().collect();
        self.closure(&gens).expect("simplices of the complex")
    }
}

/// Subcomplex given by sorted simplex indices per dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subcomplex {
    pub simplices: Vec<Vec<usize>>,
}

impl Subcomplex {
    pub fn is_empty(&self) -> bool {
        self.simplices.iter().all(Vec::is_empty)
    }

    pub fn of_dim(&self, k: usize) -> &[usize] {
        self.simplices.get(k).map_or(&[], |v| v.as_slice())
    }

    pub fn contains(&self, k: usize, id: usize) -> bool {
        self.of_dim(k).binary_search(&id).is_ok()
    }

    pub fn intersect(&self, other: &Subcomplex) -> Subcomplex {
        let n = self.simplices.len().max(other.simplices.len());
        let simplices = (0..n)
            .map(|k| {
                let b = other.of_dim(k);
                self.of_dim(k).iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
            })
            .collect();
        Subcomplex { simplices }
    }

    pub fn is_subset_of(&self, other: &Subcomplex) -> bool {
        (0..self.simplices.len()).all(|k| self.of_dim(k).iter().all(|&x| other.contains(k, x)))
    }

    pub fn size(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }
}

/// Named subcomplexes of a complex whose union is the complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    pub names: Vec<String>,
    pub patches: Vec<Subcomplex>,
}

impl Cover {
    pub fn new(k: &SimplicialComplex, names: Vec<String>, patches: Vec<Subcomplex>) -> Result<Cover> {
        if names.len() != patches.len() || patches.is_empty() {
            return Err(Error::NotACover("need one name per patch and at least one patch".into()));
        }
        for d in 0..=k.dim() {
            for id in 0..k.count(d) {
                if !patches.iter().any(|p| p.contains(d, id)) {
                    return Err(Error::NotACover(format!("simplex {:?} lies in no patch", k.simplices(d)[id])));
                }
            }
        }
        Ok(Cover { names, patches })
    }

    /// Patches generated by lists of simplices (each patch is the closure).
    pub fn from_generators(k: &SimplicialComplex, patches: &[(String, Vec<Vec<usize>>)]) -> Result<Cover> {
        let subs = patches.iter().map(|(_, g)| k.closure(g)).collect::<Result<Vec<_>>>()?;
        Cover::new(k, patches.iter().map(|(n, _)| n.clone()).collect(), subs)
    }

    /// The cover by the single piece `K`.
    pub fn single(k: &SimplicialComplex) -> Cover {
        Cover { names: vec!["K".into()], patches: vec![k.full()] }
    }

    /// One closed patch per maximal simplex.
    pub fn by_facets(k: &SimplicialComplex) -> Cover {
        let facets = k.facets();
        let names = facets.iter().map(|f| f.iter().map(|&v| k.vertices()[v].as_str()).collect::<Vec<_>>().join("")).collect();
        let patches = facets.iter().map(|f| k.closure(std::slice::from_ref(f)).expect("facet")).collect();
        Cover { names, patches }
    }

    /// Closed vertex stars.
    pub fn by_closed_stars(k: &SimplicialComplex) -> Cover {
        let names = k.vertices().iter().map(|v| format!("st{v}")).collect();
        let patches = (0..k.vertices().len()).map(|v| k.closed_star(v)).collect();
        Cover { names, patches }
    }

    pub fn len(&self) -> usize {
        self.patches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patches.is_empty()
    }

    /// `U_{α_0} ∩ … ∩ U_{α_p}`.
    pub fn intersection(&self, tuple: &[usize]) -> Subcomplex {
        let mut acc = self.patches[tuple[0]].clone();
        for &a in &tuple[1..] {
            acc = acc.intersect(&self.patches[a]);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spheres() {
        let s1 = SimplicialComplex::sphere_boundary(2);
        assert_eq!((s1.count(0), s1.count(1)), (3, 3));
        assert_eq!(s1.integral_cohomology(0).unwrap(), Presentation::free(1));
        assert_eq!(s1.integral_cohomology(1).unwrap(), Presentation::free(1));
        let s2 = SimplicialComplex::sphere_boundary(3);
        assert_eq!(s2.integral_cohomology(1).unwrap(), Presentation::zero());
        assert_eq!(s2.integral_cohomology(2).unwrap(), Presentation::free(1));
        assert!(s2.coboundary(1).mul(&s2.coboundary(0)).unwrap().is_zero());
    }

    #[test]
    fn facet_cover_of_tetrahedron_boundary() {
        let k = SimplicialComplex::sphere_boundary(3);
        let c = Cover::by_facets(&k);
        assert_eq!(c.len(), 4);
        for a in 0..4 {
            for b in 0..4 {
                assert!(!c.intersection(&[a, b]).is_empty());
                for d in 0..4 {
                    assert!(!c.intersection(&[a, b, d]).is_empty());
                }
            }
        }
        assert!(c.intersection(&[0, 1, 2, 3]).is_empty());
    }

    #[test]
    fn closed_stars_of_tetrahedron_boundary_meet_in_the_one_skeleton() {
        let k = SimplicialComplex::sphere_boundary(3);
        let c = Cover::by_closed_stars(&k);
        let all = c.intersection(&[0, 1, 2, 3]);
        assert_eq!((all.of_dim(0).len(), all.of_dim(1).len(), all.of_dim(2).len()), (4, 6, 0));
    }

    #[test]
    fn non_cover_rejected() {
        let k = SimplicialComplex::sphere_boundary(2);
        let r = Cover::from_generators(&k, &[("a".into(), vec![vec![0, 1]]), ("b".into(), vec![vec![1, 2]])]);
        assert!(matches!(r, Err(Error::NotACover(_))));
    }
}
