//! Finite groupoids, their standard constructions, and groupoid morphisms.
//!
//! Composition is diagrammatic: `compose(g, h)` is "g then h" and is defined
//! exactly when `target(g) == source(h)`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    compose: Vec<Option<usize>>,
    identity: Vec<usize>,
    inverse: Vec<usize>,
}

impl FiniteGroupoid {
    /// Assembles a groupoid from raw tables without checking any axiom;
    /// run [`FiniteGroupoid::validate`] before using the result.
    ///
    /// `compose[g * arrows.len() + h]` is the composite "g then h".
    pub fn from_tables(
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        compose: Vec<Option<usize>>,
        identity: Vec<usize>,
        inverse: Vec<usize>,
    ) -> Result<Self> {
        let n = arrows.len();
        if compose.len() != n * n || identity.len() != objects.len() || inverse.len() != n {
            return Err(Error::InvalidGroupoid("table sizes do not match object/arrow counts".into()));
        }
        let in_range = arrows.iter().all(|a| a.source < objects.len() && a.target < objects.len())
            && compose.iter().flatten().all(|&c| c < n)
            && identity.iter().all(|&i| i < n)
            && inverse.iter().all(|&i| i < n);
        if !in_range {
            return Err(Error::InvalidGroupoid("table entry out of range".into()));
        }
        Ok(FiniteGroupoid { objects, arrows, compose, identity, inverse })
    }

    /// A one-object groupoid from a multiplication table (`table[g][h]` = g then h).
    ///
    /// Identity and inverses are searched for; when absent, placeholders are
    /// used so that validation reports the failure.
    pub fn from_group_table(names: Vec<String>, table: &[Vec<usize>]) -> Result<Self> {
        let n = names.len();
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidGroupoid("multiplication table is not square over the element set".into()));
        }
        let e = (0..n).find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x)).unwrap_or(0);
        let inverse = (0..n).map(|g| (0..n).find(|&h| table[g][h] == e && table[h][g] == e).unwrap_or(g)).collect();
        let arrows = names.into_iter().map(|name| Arrow { name, source: 0, target: 0 }).collect();
        let compose = table.iter().flat_map(|r| r.iter().map(|&x| Some(x))).collect();
        FiniteGroupoid::from_tables(vec!["*".into()], arrows, compose, vec![e], inverse)
    }

    /// The point: one object, one identity arrow.
    pub fn trivial() -> Self {
        FiniteGroupoid::from_group_table(vec!["e".into()], &[vec![0]]).expect("trivial table")
    }

    /// Cyclic group Z/n on one object; arrow `k` is the residue k.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroupoid::from_group_table((0..n).map(|k| k.to_string()).collect(), &table).expect("cyclic table")
    }

    /// Klein four-group Z/2 × Z/2; arrow `2a + b` is `(a, b)`.
    pub fn klein_four() -> Self {
        let table: Vec<Vec<usize>> = (0..4).map(|x| (0..4).map(|y| x ^ y).collect()).collect();
        let names = ["e", "a", "b", "ab"].iter().map(|s| s.to_string()).collect();
        FiniteGroupoid::from_group_table(names, &table).expect("klein table")
    }

    /// Symmetric group S3 acting on {0,1,2}; "g then h" is the permutation `h∘g`.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("closed");
        let table: Vec<Vec<usize>> = perms.iter().map(|g| perms.iter().map(|h| index([h[g[0]], h[g[1]], h[g[2]]])).collect()).collect();
        let names = ["e", "(01)", "(12)", "(02)", "(012)", "(021)"].iter().map(|s| s.to_string()).collect();
        FiniteGroupoid::from_group_table(names, &table).expect("S3 table")
    }

    /// Pair groupoid on `n` objects: one arrow `(i, j)` from `i` to `j` for every pair.
    /// Arrow `(i, j)` has index `i * n + j`.
    pub fn pair_groupoid(n: usize) -> Self {
        let objects = (0..n).map(|i| i.to_string()).collect();
        let arrows = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| Arrow { name: format!("({i},{j})"), source: i, target: j })
            .collect::<Vec<_>>();
        let m = arrows.len();
        let mut compose = vec![None; m * m];
        for (g, a) in arrows.iter().enumerate() {
            for (h, b) in arrows.iter().enumerate() {
                if a.target == b.source {
                    compose[g * m + h] = Some(a.source * n + b.target);
                }
            }
        }
        let identity = (0..n).map(|i| i * n + i).collect();
        let inverse = arrows.iter().map(|a| a.target * n + a.source).collect();
        FiniteGroupoid::from_tables(objects, arrows, compose, identity, inverse).expect("pair groupoid tables")
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn source(&self, g: usize) -> usize {
        self.arrows[g].source
    }

    pub fn target(&self, g: usize) -> usize {
        self.arrows[g].target
    }

    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        self.compose[g * self.arrows.len() + h]
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identity[x]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    /// Arrows leaving each object, in increasing arrow order.
    pub fn arrows_from(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.objects.len()];
        for (g, a) in self.arrows.iter().enumerate() {
            out[a.source].push(g);
        }
        out
    }

    /// Lists every violated axiom (empty iff the tables define a groupoid).
    pub fn validate(&self) -> Vec<String> {
        let mut report = Vec::new();
        let n = self.arrows.len();
        let note = |report: &mut Vec<String>, msg: String| {
            if report.len() < 64 {
                report.push(msg);
            }
        };
        for g in 0..n {
            for h in 0..n {
                let composable = self.target(g) == self.source(h);
                match (composable, self.compose(g, h)) {
                    (true, None) => note(&mut report, format!("composition undefined on composable pair ({g},{h})")),
                    (false, Some(_)) => note(&mut report, format!("composition defined on non-composable pair ({g},{h})")),
                    (true, Some(gh)) => {
                        if self.source(gh) != self.source(g) || self.target(gh) != self.target(h) {
                            note(&mut report, format!("composite of ({g},{h}) has wrong source/target"));
                        }
                    }
                    (false, None) => {}
                }
            }
        }
        if !report.is_empty() {
            return report;
        }
        'assoc: for g in 0..n {
            for h in 0..n {
                let Some(gh) = self.compose(g, h) else { continue };
                for k in 0..n {
                    let Some(hk) = self.compose(h, k) else { continue };
                    if self.compose(gh, k) != self.compose(g, hk) {
                        note(&mut report, format!("associativity violated on ({g},{h},{k})"));
                        break 'assoc;
                    }
                }
            }
        }
        for (x, &e) in self.identity.iter().enumerate() {
            if self.source(e) != x || self.target(e) != x {
                note(&mut report, format!("identity of object {x} is not a loop at {x}"));
                continue;
            }
            for g in 0..n {
                if self.source(g) == x && self.compose(e, g) != Some(g) {
                    note(&mut report, format!("left identity law violated at arrow {g}"));
                }
                if self.target(g) == x && self.compose(g, e) != Some(g) {
                    note(&mut report, format!("right identity law violated at arrow {g}"));
                }
            }
        }
        for g in 0..n {
            let inv = self.inverse[g];
            let left = self.compose(g, inv) == Some(self.identity[self.source(g)]);
            let right = self.compose(inv, g) == Some(self.identity[self.target(g)]);
            if !(left && right) {
                note(&mut report, format!("inverse law violated at arrow {g}"));
            }
        }
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Connected components, each as a sorted list of objects.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.objects.len()];
        let mut out = Vec::new();
        for start in 0..self.objects.len() {
            if seen[start] {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(x) = stack.pop() {
                comp.insert(x);
                for a in &self.arrows {
                    for (u, v) in [(a.source, a.target), (a.target, a.source)] {
                        if u == x && !seen[v] {
                            seen[v] = true;
                            stack.push(v);
                        }
                    }
                }
            }
            out.push(comp.into_iter().collect());
        }
        out
    }

    /// Arrows from `x` to itself.
    pub fn isotropy(&self, x: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&g| self.source(g) == x && self.target(g) == x).collect()
    }
}

/// Transformation groupoid of a left action of a one-object groupoid on a finite set.
///
/// `action[h][x]` is `h·x`. Arrows are `(h, x)` with index `h * |X| + x`,
/// from `x` to `h·x`; "(h,x) then (k,h·x)" is `(k·h, x)`.
pub fn action_groupoid(group: &FiniteGroupoid, points: &[String], action: &[Vec<usize>]) -> Result<FiniteGroupoid> {
    if group.num_objects() != 1 {
        return Err(Error::InvalidAction("acting groupoid must have exactly one object".into()));
    }
    let report = group.validate();
    if !report.is_empty() {
        return Err(Error::InvalidAction(format!("acting group is invalid: {}", report.join("; "))));
    }
    let nh = group.num_arrows();
    let nx = points.len();
    if action.len() != nh || action.iter().any(|r| r.len() != nx || r.iter().any(|&y| y >= nx)) {
        return Err(Error::InvalidAction("action table has the wrong shape".into()));
    }
    let e = group.identity(0);
    if (0..nx).any(|x| action[e][x] != x) {
        return Err(Error::InvalidAction("identity does not act trivially".into()));
    }
    // "h then k" in the group table is the product k·h of a left action
    for h in 0..nh {
        for k in 0..nh {
            let kh = group.compose(h, k).expect("one-object groupoid");
            if (0..nx).any(|x| action[kh][x] != action[k][action[h][x]]) {
                return Err(Error::InvalidAction(format!(
                    "compatibility fails for elements {} and {}",
                    group.arrows()[h].name,
                    group.arrows()[k].name
                )));
            }
        }
    }
    let arrows: Vec<Arrow> = (0..nh)
        .flat_map(|h| (0..nx).map(move |x| (h, x)))
        .map(|(h, x)| Arrow { name: format!("({},{})", group.arrows()[h].name, points[x]), source: x, target: action[h][x] })
        .collect();
    let m = arrows.len();
    let mut compose = vec![None; m * m];
    for h in 0..nh {
        for x in 0..nx {
            let y = action[h][x];
            for k in 0..nh {
                let kh = group.compose(h, k).expect("one-object groupoid");
                compose[(h * nx + x) * m + (k * nx + y)] = Some(kh * nx + x);
            }
        }
    }
    let identity = (0..nx).map(|x| e * nx + x).collect();
    let inverse = (0..nh).flat_map(|h| (0..nx).map(move |x| (h, x))).map(|(h, x)| group.inverse(h) * nx + action[h][x]).collect();
    FiniteGroupoid::from_tables(points.to_vec(), arrows, compose, identity, inverse)
}

/// A functor between finite groupoids, given by its object and arrow maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidMorphism {
    pub source: FiniteGroupoid,
    pub target: FiniteGroupoid,
    pub object_map: Vec<usize>,
    pub arrow_map: Vec<usize>,
}

impl GroupoidMorphism {
    pub fn new(source: FiniteGroupoid, target: FiniteGroupoid, object_map: Vec<usize>, arrow_map: Vec<usize>) -> Result<Self> {
        let f = GroupoidMorphism { source, target, object_map, arrow_map };
        let report = f.validate();
        if report.is_empty() {
            Ok(f)
        } else {
            Err(Error::InvalidMorphism(report.join("; ")))
        }
    }

    pub fn identity(g: &FiniteGroupoid) -> Self {
        GroupoidMorphism {
            source: g.clone(),
            target: g.clone(),
            object_map: (0..g.num_objects()).collect(),
            arrow_map: (0..g.num_arrows()).collect(),
        }
    }

    /// Violations of functoriality (empty iff `self` is a morphism).
    pub fn validate(&self) -> Vec<String> {
        let (s, t) = (&self.source, &self.target);
        let mut report = Vec::new();
        if self.object_map.len() != s.num_objects() || self.arrow_map.len() != s.num_arrows() {
            report.push("map sizes do not match the source groupoid".into());
            return report;
        }
        if self.object_map.iter().any(|&x| x >= t.num_objects()) || self.arrow_map.iter().any(|&g| g >= t.num_arrows()) {
            report.push("map values out of range".into());
            return report;
        }
        for g in 0..s.num_arrows() {
            let fg = self.arrow_map[g];
            if t.source(fg) != self.object_map[s.source(g)] || t.target(fg) != self.object_map[s.target(g)] {
                report.push(format!("arrow {g} does not commute with source/target"));
            }
        }
        for x in 0..s.num_objects() {
            if self.arrow_map[s.identity(x)] != t.identity(self.object_map[x]) {
                report.push(format!("identity at object {x} not preserved"));
            }
        }
        for g in 0..s.num_arrows() {
            for h in 0..s.num_arrows() {
                if let Some(gh) = s.compose(g, h) {
                    if t.compose(self.arrow_map[g], self.arrow_map[h]) != Some(self.arrow_map[gh]) {
                        report.push(format!("composition not preserved on ({g},{h})"));
                    }
                }
            }
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_groups_are_valid() {
        for g in [
            FiniteGroupoid::trivial(),
            FiniteGroupoid::cyclic(2),
            FiniteGroupoid::cyclic(4),
            FiniteGroupoid::klein_four(),
            FiniteGroupoid::symmetric3(),
            FiniteGroupoid::pair_groupoid(3),
        ] {
            assert!(g.validate().is_empty(), "{:?}", g.validate());
        }
        assert_eq!(FiniteGroupoid::pair_groupoid(3).num_arrows(), 9);
    }

    #[test]
    fn broken_z2_reports_inverse_law() {
        let g = FiniteGroupoid::from_group_table(vec!["0".into(), "1".into()], &[vec![0, 1], vec![1, 1]]).unwrap();
        let report = g.validate();
        assert!(report.iter().any(|m| m.contains("inverse law violated")), "{report:?}");
    }

    #[test]
    fn s3_is_nonabelian() {
        let g = FiniteGroupoid::symmetric3();
        let n = g.num_arrows();
        assert!((0..n).any(|a| (0..n).any(|b| g.compose(a, b) != g.compose(b, a))));
    }

    #[test]
    fn action_groupoids() {
        let z2 = FiniteGroupoid::cyclic(2);
        let pt = action_groupoid(&z2, &["x".into()], &[vec![0], vec![0]]).unwrap();
        assert!(pt.is_valid());
        assert_eq!((pt.num_objects(), pt.num_arrows()), (1, 2));

        let pts = ["a".to_string(), "b".to_string()];
        let swap = action_groupoid(&z2, &pts, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(swap.is_valid());
        assert_eq!(swap.components().len(), 1);
        assert_eq!(swap.isotropy(0).len(), 1);

        let triv = action_groupoid(&z2, &pts, &[vec![0, 1], vec![0, 1]]).unwrap();
        assert_eq!(triv.components().len(), 2);
        assert!(triv.components().iter().all(|c| triv.isotropy(c[0]).len() == 2));

        assert!(action_groupoid(&z2, &pts, &[vec![1, 0], vec![1, 0]]).is_err());
    }

    #[test]
    fn morphism_checks() {
        let z2 = FiniteGroupoid::cyclic(2);
        let e = FiniteGroupoid::trivial();
        assert!(GroupoidMorphism::new(e.clone(), z2.clone(), vec![0], vec![0]).is_ok());
        assert!(GroupoidMorphism::new(e, z2.clone(), vec![0], vec![1]).is_err());
        assert!(GroupoidMorphism::identity(&z2).validate().is_empty());
    }
}
