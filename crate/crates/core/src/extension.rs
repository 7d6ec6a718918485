//! Central extensions of a finite groupoid by a finite cyclic fiber `Z/N`,
//! viewed inside the circle as `(1/N)Z/Z`, as honest groupoids with a fiber
//! action.

use crate::arith::{frac, Coeff, Rational};
use crate::complex::{Cochain, FormComplex};
use crate::error::{Error, Result};
use crate::groupoid::{Arrow, FiniteGroupoid};

/// A groupoid `total` over `base` with projection `π` on arrows and a free,
/// fiberwise transitive action of `Z/order`: `action[u][x] = u·x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionGroupoid {
    pub base: FiniteGroupoid,
    pub total: FiniteGroupoid,
    pub order: u64,
    pub projection: Vec<usize>,
    pub action: Vec<Vec<usize>>,
}

/// Value of a (2,0) cochain of a finite groupoid's complex on the pair `(g, h)`.
fn value_on_pair(fc: &FormComplex, c: &Cochain, g: usize, h: usize) -> Option<Rational> {
    let cell = fc.model().nerve.levels[2].position(&[g, h])?;
    let i = fc.basis_index(2, 0, cell, 0)?;
    Some(c.values[i])
}

fn fiber_coordinate(v: &Rational, order: u64) -> Result<u64> {
    let scaled = frac(v) * Rational::from_integer(order as i128);
    if !scaled.is_integer() {
        return Err(Error::OutsideFiber(order));
    }
    Ok(scaled.to_integer() as u64)
}

/// Builds the twisted product `Γ × Z/N` with `(g,s)(h,t) = (gh, s + t + Nσ(g,h))`.
///
/// Arrow `(g, s)` has index `g·N + s`. Fails unless `σ` is a circle 2-cocycle
/// with values in `(1/N)Z/Z`.
pub fn extension_from_cocycle(fc: &FormComplex, sigma: &Cochain, order: u64) -> Result<ExtensionGroupoid> {
    let residual = fc.apply_del(&sigma.with_coeff(Coeff::QModZ));
    if !residual.is_zero() {
        return Err(Error::InvalidExtension("σ is not a 2-cocycle mod Z".into()));
    }
    build_extension(fc, sigma, order)
}

/// As [`extension_from_cocycle`] but without the cocycle check, so that
/// non-cocycles produce a groupoid whose validation reports the failure.
pub fn build_extension(fc: &FormComplex, sigma: &Cochain, order: u64) -> Result<ExtensionGroupoid> {
    let base = groupoid_of(fc)?;
    if (sigma.p, sigma.k) != (2, 0) || sigma.values.len() != fc.block_len(2, 0) {
        return Err(Error::DimensionMismatch("extension cocycle must live at (2,0)".into()));
    }
    let n = order as usize;
    let arrows_base = base.num_arrows();
    let arrows: Vec<Arrow> = (0..arrows_base)
        .flat_map(|g| {
            let a = &base.arrows()[g];
            (0..n).map(move |s| Arrow { name: format!("({},{s})", a.name), source: a.source, target: a.target })
        })
        .collect();
    let total_arrows = arrows.len();
    let mut compose = vec![None; total_arrows * total_arrows];
    for g in 0..arrows_base {
        for h in 0..arrows_base {
            let Some(gh) = base.compose(g, h) else { continue };
            let twist = fiber_coordinate(&value_on_pair(fc, sigma, g, h).expect("composable pair is a 2-cell"), order)? as usize;
            for s in 0..n {
                for t in 0..n {
                    compose[(g * n + s) * total_arrows + h * n + t] = Some(gh * n + (s + t + twist) % n);
                }
            }
        }
    }
    let identity: Vec<usize> = (0..base.num_objects())
        .map(|x| {
            let e = base.identity(x);
            let twist = fiber_coordinate(&value_on_pair(fc, sigma, e, e).expect("identity pair"), order)? as usize;
            Ok(e * n + (n - twist) % n)
        })
        .collect::<Result<_>>()?;
    let inverse: Vec<usize> = (0..total_arrows)
        .map(|a| {
            let src = arrows[a].source;
            (0..total_arrows).find(|&b| compose[a * total_arrows + b] == Some(identity[src])).unwrap_or(a)
        })
        .collect();
    let total = FiniteGroupoid::from_tables(base.objects().to_vec(), arrows, compose, identity, inverse)?;
    let projection = (0..total_arrows).map(|a| a / n).collect();
    let action = (0..n).map(|u| (0..total_arrows).map(|a| (a / n) * n + (a % n + u) % n).collect()).collect();
    Ok(ExtensionGroupoid { base, total, order, projection, action })
}

/// Recovers the underlying finite groupoid of a finite-regime complex.
fn groupoid_of(fc: &FormComplex) -> Result<FiniteGroupoid> {
    fc.groupoid().cloned().ok_or_else(|| Error::InvalidExtension("extensions are built over finite groupoids".into()))
}

impl ExtensionGroupoid {
    /// Violations of the extension axioms (empty when valid): groupoid laws,
    /// `π` a surjective morphism, the fiber action free and transitive on
    /// fibers, and centrality `(u·x)(v·y) = (u+v)·(xy)`.
    pub fn validate(&self) -> Vec<String> {
        let mut report: Vec<String> = self.total.validate();
        let n = self.order as usize;
        let (b, t) = (&self.base, &self.total);
        if self.projection.len() != t.num_arrows() || self.action.len() != n {
            report.push("projection or action has the wrong size".into());
            return report;
        }
        for a in 0..t.num_arrows() {
            let g = self.projection[a];
            if b.source(g) != t.source(a) || b.target(g) != t.target(a) {
                report.push(format!("projection does not preserve endpoints of {}", t.arrows()[a].name));
            }
        }
        for a in 0..t.num_arrows() {
            for c in 0..t.num_arrows() {
                if let Some(ac) = t.compose(a, c) {
                    if b.compose(self.projection[a], self.projection[c]) != Some(self.projection[ac]) {
                        report.push("projection is not multiplicative".into());
                    }
                }
            }
        }
        let mut hit = vec![false; b.num_arrows()];
        for &g in &self.projection {
            hit[g] = true;
        }
        if hit.iter().any(|h| !h) {
            report.push("projection is not surjective".into());
        }
        for a in 0..t.num_arrows() {
            let mut orbit: Vec<usize> = (0..n).map(|u| self.action[u][a]).collect();
            if orbit.iter().any(|&x| self.projection[x] != self.projection[a]) {
                report.push("fiber action leaves the fiber".into());
            }
            orbit.sort_unstable();
            orbit.dedup();
            if orbit.len() != n {
                report.push("fiber action is not free".into());
            }
            let fiber = self.projection.iter().filter(|&&g| g == self.projection[a]).count();
            if fiber != n {
                report.push("fiber action is not transitive".into());
            }
            for u in 0..n {
                for v in 0..n {
                    if self.action[u][self.action[v][a]] != self.action[(u + v) % n][a] {
                        report.push("fiber action is not a group action".into());
                    }
                }
            }
        }
        for x in 0..t.num_arrows() {
            for y in 0..t.num_arrows() {
                let Some(xy) = t.compose(x, y) else { continue };
                for u in 0..n {
                    for v in 0..n {
                        if t.compose(self.action[u][x], self.action[v][y]) != Some(self.action[(u + v) % n][xy]) {
                            report.push("fiber action is not central".into());
                        }
                    }
                }
            }
        }
        report.sort();
        report.dedup();
        report
    }

    /// The section picking fiber coordinate 0 for built extensions.
    pub fn default_section(&self) -> Vec<usize> {
        (0..self.base.num_arrows())
            .map(|g| (0..self.total.num_arrows()).find(|&a| self.projection[a] == g).expect("surjective projection"))
            .collect()
    }

    /// Whether the arrow set is a commutative group (one object only).
    pub fn is_abelian(&self) -> bool {
        let t = &self.total;
        (0..t.num_arrows()).all(|a| (0..t.num_arrows()).all(|b| t.compose(a, b) == t.compose(b, a)))
    }
}

/// The circle cocycle `σ(g,h) = u/N` where `s(g)s(h) = u·s(gh)`.
pub fn cocycle_from_extension(fc: &FormComplex, ext: &ExtensionGroupoid, section: &[usize]) -> Result<Cochain> {
    let base = &ext.base;
    if section.len() != base.num_arrows() || section.iter().enumerate().any(|(g, &a)| a >= ext.projection.len() || ext.projection[a] != g) {
        return Err(Error::NotASection);
    }
    let n = ext.order as usize;
    let mut sigma = fc.zero(2, 0, Coeff::QModZ);
    for (cell, pair) in fc.model().nerve.levels[2].cells.iter().enumerate() {
        let (g, h) = (pair[0], pair[1]);
        let gh = base.compose(g, h).ok_or_else(|| Error::InvalidExtension("nerve cell is not composable".into()))?;
        let prod = ext.total.compose(section[g], section[h]).ok_or_else(|| Error::InvalidExtension("lifts do not compose".into()))?;
        let u = (0..n)
            .find(|&u| ext.action[u][section[gh]] == prod)
            .ok_or_else(|| Error::InvalidExtension("fiber action is not transitive".into()))?;
        let i = fc.basis_index(2, 0, cell, 0).expect("finite regime cell");
        sigma.values[i] = Rational::new(u as i128, n as i128);
    }
    Ok(sigma)
}

/// Whether some section is a groupoid homomorphism (the extension splits),
/// by exhaustive search over all sections.
pub fn has_homomorphic_section(ext: &ExtensionGroupoid) -> bool {
    let base = &ext.base;
    let fibers: Vec<Vec<usize>> =
        (0..base.num_arrows()).map(|g| (0..ext.total.num_arrows()).filter(|&a| ext.projection[a] == g).collect()).collect();
    let mut choice = vec![0usize; base.num_arrows()];
    loop {
        let section: Vec<usize> = choice.iter().enumerate().map(|(g, &i)| fibers[g][i]).collect();
        let hom = (0..base.num_arrows()).all(|g| {
            (0..base.num_arrows()).all(|h| match base.compose(g, h) {
                Some(gh) => ext.total.compose(section[g], section[h]) == Some(section[gh]),
                None => true,
            })
        });
        if hom {
            return true;
        }
        let mut i = 0;
        loop {
            if i == choice.len() {
                return false;
            }
            choice[i] += 1;
            if choice[i] < fibers[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}
