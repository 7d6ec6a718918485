//! Nerves: levels of composable tuples with their face maps, and maps between nerves.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::groupoid::{FiniteGroupoid, GroupoidMorphism};

/// Level `p` of a nerve.
///
/// For a groupoid nerve, `cells` are composable `p`-tuples of arrows
/// (`p = 0`: one-element tuples holding the object). For a Čech nerve they are
/// `(p+1)`-tuples of patch indices. `faces[i][c]` is the index of `d_i(c)` at
/// level `p - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NerveLevel {
    pub p: usize,
    pub cells: Vec<Vec<usize>>,
    pub faces: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl NerveLevel {
    pub fn new(p: usize, cells: Vec<Vec<usize>>, faces: Vec<Vec<usize>>) -> Self {
        let index = cells.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        NerveLevel { p, cells, faces, index }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn position(&self, cell: &[usize]) -> Option<usize> {
        self.index.get(cell).copied()
    }
}

/// Levels `0..=p_max` of a simplicial set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nerve {
    pub levels: Vec<NerveLevel>,
}

impl Nerve {
    /// Nerve of a (valid) finite groupoid up to level `p_max`.
    ///
    /// `d_0` drops the first arrow, `d_p` the last, and an inner `d_i` composes
    /// the arrows at positions `i` and `i+1`. On arrows, `d_0 = target` and
    /// `d_1 = source`.
    pub fn of_groupoid(g: &FiniteGroupoid, p_max: usize, cap: usize) -> Result<Nerve> {
        let mut levels = vec![NerveLevel::new(0, (0..g.num_objects()).map(|x| vec![x]).collect(), Vec::new())];
        let from = g.arrows_from();
        let mut total = g.num_objects();
        for p in 1..=p_max {
            let prev = &levels[p - 1];
            let cells: Vec<Vec<usize>> = if p == 1 {
                (0..g.num_arrows()).map(|a| vec![a]).collect()
            } else {
                prev.cells
                    .iter()
                    .flat_map(|c| {
                        let last = *c.last().expect("nonempty tuple");
                        from[g.target(last)].iter().map(move |&a| {
                            let mut next = c.clone();
                            next.push(a);
                            next
                        })
                    })
                    .collect()
            };
            total += cells.len();
            if total > cap {
                return Err(Error::SizeGuard { cells: total, cap });
            }
            let mut faces = vec![Vec::with_capacity(cells.len()); p + 1];
            for c in &cells {
                for (i, face) in faces.iter_mut().enumerate() {
                    let image = groupoid_face(g, c, i);
                    face.push(prev.position(&image).expect("face of a composable tuple is composable"));
                }
            }
            levels.push(NerveLevel::new(p, cells, faces));
        }
        Ok(Nerve { levels })
    }

    pub fn p_max(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, p: usize) -> &NerveLevel {
        &self.levels[p]
    }

    /// Violations of `d_i d_j = d_{j-1} d_i` (`i < j`), checked cell by cell.
    pub fn check_simplicial_identities(&self) -> Vec<String> {
        let mut report = Vec::new();
        for p in 2..self.levels.len() {
            let (lvl, below) = (&self.levels[p], &self.levels[p - 1]);
            for c in 0..lvl.len() {
                for j in 1..=p {
                    for i in 0..j {
                        let lhs = below.faces[i][lvl.faces[j][c]];
                        let rhs = below.faces[j - 1][lvl.faces[i][c]];
                        if lhs != rhs {
                            report.push(format!("level {p}, cell {c}: d_{i} d_{j} != d_{} d_{i}", j - 1));
                        }
                    }
                }
            }
        }
        report
    }
}

/// `d_i` of a composable tuple (as a tuple at the level below).
pub fn groupoid_face(g: &FiniteGroupoid, cell: &[usize], i: usize) -> Vec<usize> {
    let p = cell.len();
    assert!(i <= p);
    if p == 1 {
        let a = cell[0];
        return vec![if i == 0 { g.target(a) } else { g.source(a) }];
    }
    if i == 0 {
        cell[1..].to_vec()
    } else if i == p {
        cell[..p - 1].to_vec()
    } else {
        let mut out = cell[..i - 1].to_vec();
        out.push(g.compose(cell[i - 1], cell[i]).expect("composable"));
        out.extend_from_slice(&cell[i + 1..]);
        out
    }
}

/// A simplicial map between nerves: `cell_maps[p][c]` is the image of cell `c` at level `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NerveMap {
    pub cell_maps: Vec<Vec<usize>>,
}

impl NerveMap {
    pub fn identity(n: &Nerve) -> Self {
        NerveMap { cell_maps: n.levels.iter().map(|l| (0..l.len()).collect()).collect() }
    }

    /// The map induced on nerves by a groupoid morphism.
    pub fn of_morphism(f: &GroupoidMorphism, source: &Nerve, target: &Nerve) -> Result<Self> {
        let p_max = source.p_max().min(target.p_max());
        let mut cell_maps = Vec::with_capacity(p_max + 1);
        for p in 0..=p_max {
            let map = source.levels[p]
                .cells
                .iter()
                .map(|c| {
                    let image: Vec<usize> = if p == 0 { vec![f.object_map[c[0]]] } else { c.iter().map(|&a| f.arrow_map[a]).collect() };
                    target.levels[p].position(&image).ok_or_else(|| Error::InvalidMorphism("image tuple is not a nerve cell".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            cell_maps.push(map);
        }
        Ok(NerveMap { cell_maps })
    }

    /// Whether the map commutes with all face maps.
    pub fn commutes_with_faces(&self, source: &Nerve, target: &Nerve) -> bool {
        (1..self.cell_maps.len()).all(|p| {
            (0..=p).all(|i| {
                (0..source.levels[p].len()).all(|c| {
                    let down = self.cell_maps[p - 1][source.levels[p].faces[i][c]];
                    let across = target.levels[p].faces[i][self.cell_maps[p][c]];
                    down == across
                })
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: usize = 1_000_000;

    #[test]
    fn z2_level_two() {
        let n = Nerve::of_groupoid(&FiniteGroupoid::cyclic(2), 2, CAP).unwrap();
        assert_eq!(n.level(2).len(), 4);
        assert!(n.check_simplicial_identities().is_empty());
    }

    #[test]
    fn pair_groupoid_arrows() {
        let n = Nerve::of_groupoid(&FiniteGroupoid::pair_groupoid(3), 3, CAP).unwrap();
        assert_eq!(n.level(1).len(), 9);
        // composable p-tuples of the pair groupoid are sequences of p+1 objects
        assert_eq!(n.level(3).len(), 81);
        assert!(n.check_simplicial_identities().is_empty());
    }

    #[test]
    fn face_conventions() {
        let g = FiniteGroupoid::pair_groupoid(3);
        // (0,1) then (1,2)
        let cell = vec![1, 5];
        assert_eq!(groupoid_face(&g, &cell, 0), vec![5]);
        assert_eq!(groupoid_face(&g, &cell, 1), vec![2]);
        assert_eq!(groupoid_face(&g, &cell, 2), vec![1]);
        assert_eq!(groupoid_face(&g, &[5], 0), vec![2]);
        assert_eq!(groupoid_face(&g, &[5], 1), vec![1]);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(Nerve::of_groupoid(&FiniteGroupoid::cyclic(4), 6, 100), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn morphism_induces_simplicial_map() {
        let e = FiniteGroupoid::trivial();
        let z2 = FiniteGroupoid::cyclic(2);
        let f = GroupoidMorphism::new(e.clone(), z2.clone(), vec![0], vec![0]).unwrap();
        let (ne, nz) = (Nerve::of_groupoid(&e, 3, CAP).unwrap(), Nerve::of_groupoid(&z2, 3, CAP).unwrap());
        let m = NerveMap::of_morphism(&f, &ne, &nz).unwrap();
        assert!(m.commutes_with_faces(&ne, &nz));
    }
}
