//! Morita morphisms between finite and Čech groupoids, the cochain maps they
//! induce, and exact checks that the induced maps on cohomology are
//! isomorphisms.

use serde::Serialize;

use crate::arith::Coeff;
use crate::cech::{cech_groupoid, CechGroupoid};
use crate::complex::{Cochain, FormComplex, Regime, TotalCochain};
use crate::error::{Error, Result};
use crate::groupoid::GroupoidMorphism;
use crate::homalg::{invariant_factors, IntMatrix, Presentation};
use crate::nerve::NerveMap;
use crate::simplicial::Cover;

/// A groupoid morphism `f: Γ′ → Γ`, together with the patch assignment when
/// it comes from a refinement of covers (then `f` acts on the vertex-level
/// Čech groupoids).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoritaMorphism {
    pub morphism: GroupoidMorphism,
    pub assignment: Option<Vec<usize>>,
}

impl MoritaMorphism {
    /// Validates `f` as a Morita morphism.
    pub fn new(morphism: GroupoidMorphism) -> Result<Self> {
        let report = validate_morita(&morphism);
        if !report.is_empty() {
            return Err(Error::InvalidMorphism(report.join("; ")));
        }
        Ok(MoritaMorphism { morphism, assignment: None })
    }

    pub fn identity(g: &crate::groupoid::FiniteGroupoid) -> Self {
        MoritaMorphism { morphism: GroupoidMorphism::identity(g), assignment: None }
    }

    /// The cochain map `C(target) → C(source)` between complexes built on the
    /// target (`coarse`) and source (`fine`) groupoids.
    pub fn pullback_map(&self, fine: &FormComplex, coarse: &FormComplex) -> Result<CochainMap> {
        pullback_map(&self.morphism, self.assignment.as_deref(), fine, coarse)
    }
}

/// Violations of the Morita conditions (empty when `f` is Morita): `f` is a
/// morphism, surjective on objects, and the square with `(s, t)` is cartesian,
/// i.e. for all objects `x, y` of the source, `f` maps the arrows `x → y`
/// bijectively onto the arrows `f(x) → f(y)`.
pub fn validate_morita(f: &GroupoidMorphism) -> Vec<String> {
    let mut report = f.validate();
    if !report.is_empty() {
        return report;
    }
    let (s, t) = (&f.source, &f.target);
    let mut hit = vec![false; t.num_objects()];
    for &y in &f.object_map {
        hit[y] = true;
    }
    if let Some(y) = hit.iter().position(|h| !h) {
        report.push(format!("object {} is not in the image", t.objects()[y]));
    }
    let n = s.num_objects();
    let mut arrows_between: Vec<Vec<usize>> = vec![Vec::new(); n * n];
    for g in 0..s.num_arrows() {
        arrows_between[s.source(g) * n + s.target(g)].push(g);
    }
    let m = t.num_objects();
    let mut target_between: Vec<Vec<usize>> = vec![Vec::new(); m * m];
    for g in 0..t.num_arrows() {
        target_between[t.source(g) * m + t.target(g)].push(g);
    }
    for x in 0..n {
        for y in 0..n {
            let mut images: Vec<usize> = arrows_between[x * n + y].iter().map(|&g| f.arrow_map[g]).collect();
            images.sort_unstable();
            let distinct = {
                let mut d = images.clone();
                d.dedup();
                d.len()
            };
            let expected = &target_between[f.object_map[x] * m + f.object_map[y]];
            if distinct != images.len() || images.len() != expected.len() {
                report.push(format!(
                    "not cartesian over ({}, {}): {} arrows against {} below",
                    s.objects()[x],
                    s.objects()[y],
                    images.len(),
                    expected.len()
                ));
            }
        }
    }
    report
}

/// The Morita morphism `[∐U′_αβ ⇉ ∐U′_α] → [∐U_αβ ⇉ ∐U_α]` of a refinement,
/// where `assignment[α′]` names a coarse patch containing `U′_α′`.
pub fn refinement_morphism(fine: &CechGroupoid, coarse: &CechGroupoid, assignment: &[usize]) -> Result<MoritaMorphism> {
    if fine.complex != coarse.complex {
        return Err(Error::NotARefinement("covers live on different complexes".into()));
    }
    if assignment.len() != fine.cover.len() {
        return Err(Error::NotARefinement(format!("assignment has {} entries for {} patches", assignment.len(), fine.cover.len())));
    }
    for (a, &b) in assignment.iter().enumerate() {
        if b >= coarse.cover.len() {
            return Err(Error::NotARefinement(format!("patch index {b} out of range")));
        }
        if !fine.cover.patches[a].is_subset_of(&coarse.cover.patches[b]) {
            return Err(Error::NotARefinement(format!("{} is not contained in {}", fine.cover.names[a], coarse.cover.names[b])));
        }
    }
    let object_map = fine
        .object_points
        .iter()
        .map(|&(a, v)| coarse.object_points.binary_search(&(assignment[a], v)).expect("refined point lies in the coarse patch"))
        .collect();
    let arrow_map = fine
        .arrow_points
        .iter()
        .map(|&(a, b, v)| {
            coarse.arrow_points.binary_search(&(assignment[a], assignment[b], v)).expect("refined arrow lies over a coarse arrow")
        })
        .collect();
    let morphism = GroupoidMorphism::new(fine.groupoid.clone(), coarse.groupoid.clone(), object_map, arrow_map)?;
    let report = validate_morita(&morphism);
    if !report.is_empty() {
        return Err(Error::NotARefinement(report.join("; ")));
    }
    Ok(MoritaMorphism { morphism, assignment: Some(assignment.to_vec()) })
}

/// Refines a cover and returns both Čech groupoids with the refinement morphism.
pub fn refine(cg: &CechGroupoid, fine_cover: &Cover, assignment: &[usize]) -> Result<(CechGroupoid, MoritaMorphism)> {
    let fine = cech_groupoid(&cg.complex, fine_cover)?;
    let f = refinement_morphism(&fine, cg, assignment)?;
    Ok((fine, f))
}

/// Degreewise pullback `f^♯: C(coarse) → C(fine)`: `matrices[n]` has one row
/// per total basis element of `fine` and one column per element of `coarse`.
#[derive(Debug, Clone)]
pub struct CochainMap {
    pub cells: NerveMap,
    pub blocks: Vec<Vec<IntMatrix>>,
    pub matrices: Vec<IntMatrix>,
}

impl CochainMap {
    pub fn top_degree(&self) -> usize {
        self.matrices.len() - 1
    }

    pub fn apply(&self, c: &TotalCochain) -> Result<TotalCochain> {
        let m = self.matrices.get(c.degree).ok_or(Error::DegreeOutOfRange { degree: c.degree, max: self.top_degree() })?;
        if c.values.len() != m.cols() {
            return Err(Error::DimensionMismatch("cochain does not belong to the target complex".into()));
        }
        let values = m.mul_vec_rat(&c.values);
        Ok(TotalCochain::new(c.degree, c.coeff, values))
    }

    pub fn apply_block(&self, c: &Cochain) -> Result<Cochain> {
        let m = self.blocks.get(c.p).and_then(|row| row.get(c.k)).ok_or(Error::BidegreeOutOfRange { p: c.p, k: c.k })?;
        if c.values.len() != m.cols() {
            return Err(Error::DimensionMismatch("cochain does not belong to the target complex".into()));
        }
        Ok(Cochain::new(c.p, c.k, c.coeff, m.mul_vec_rat(&c.values)))
    }
}

/// The map on nerve cells underlying `f`: tuple-wise through the patch
/// assignment in the Čech regime, through `f` on arrows in the finite regime.
pub fn nerve_map(f: &GroupoidMorphism, assignment: Option<&[usize]>, fine: &FormComplex, coarse: &FormComplex) -> Result<NerveMap> {
    let (fm, cm) = (fine.model(), coarse.model());
    match (fm.regime, cm.regime, assignment) {
        (Regime::Finite, Regime::Finite, None) => {
            if fine.groupoid() != Some(&f.source) || coarse.groupoid() != Some(&f.target) {
                return Err(Error::DimensionMismatch("complexes are not built on the morphism's groupoids".into()));
            }
            NerveMap::of_morphism(f, &fm.nerve, &cm.nerve)
        }
        (Regime::Cech, Regime::Cech, Some(assignment)) => {
            if fm.ambient != cm.ambient {
                return Err(Error::DimensionMismatch("covers live on different complexes".into()));
            }
            let p_max = fm.p_max().min(cm.p_max());
            let cell_maps = (0..=p_max)
                .map(|p| {
                    fm.nerve.levels[p]
                        .cells
                        .iter()
                        .map(|cell| {
                            let image: Vec<usize> = cell.iter().map(|&a| assignment.get(a).copied().unwrap_or(usize::MAX)).collect();
                            cm.nerve.levels[p]
                                .position(&image)
                                .ok_or_else(|| Error::NotARefinement("assignment does not match the covers".into()))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(NerveMap { cell_maps })
        }
        _ => Err(Error::DimensionMismatch("morphism and complexes are of different kinds".into())),
    }
}

/// Pullback along `f` (plain or Morita), checked to be a chain map for `d`,
/// `∂` and `δ`.
pub fn pullback_map(f: &GroupoidMorphism, assignment: Option<&[usize]>, fine: &FormComplex, coarse: &FormComplex) -> Result<CochainMap> {
    let cells = nerve_map(f, assignment, fine, coarse)?;
    let p_max = fine.p_max().min(coarse.p_max());
    let k_max = fine.k_max().min(coarse.k_max());
    let (fm, cm) = (fine.model(), coarse.model());
    let mut blocks = Vec::new();
    for p in 0..=p_max {
        let mut row = Vec::new();
        for k in 0..=k_max {
            let mut triplets = Vec::new();
            for (i, &(cell, s)) in fine.basis(p, k).iter().enumerate() {
                let image = cells.cell_maps[p][cell];
                let j = coarse.basis_index(p, k, image, s).ok_or_else(|| {
                    Error::NotARefinement(format!(
                        "carrier of {:?} is not inside the carrier of {:?}",
                        fm.nerve.levels[p].cells[cell], cm.nerve.levels[p].cells[image]
                    ))
                })?;
                triplets.push((i, j, 1));
            }
            row.push(IntMatrix::from_triplets(fine.block_len(p, k), coarse.block_len(p, k), triplets));
        }
        blocks.push(row);
    }
    let top = p_max;
    let mut matrices = Vec::new();
    for n in 0..=top {
        let (fl, cl) = (fine.total_layout(n), coarse.total_layout(n));
        let mut triplets = Vec::new();
        for &(p, k, off, _) in &fl {
            if p > p_max || k > k_max {
                continue;
            }
            let Some(&(_, _, coff, _)) = cl.iter().find(|b| b.0 == p) else { continue };
            triplets.extend(blocks[p][k].triplets().map(|(i, j, v)| (off + i, coff + j, v)));
        }
        matrices.push(IntMatrix::from_triplets(fine.total_len(n), coarse.total_len(n), triplets));
    }
    let map = CochainMap { cells, blocks, matrices };
    let broken = chain_map_failures(&map, fine, coarse)?;
    if !broken.is_empty() {
        return Err(Error::InvalidMorphism(broken.join("; ")));
    }
    Ok(map)
}

/// Bidegrees and total degrees at which `f^♯` fails to commute with `d`, `∂`, `δ`.
pub fn chain_map_failures(map: &CochainMap, fine: &FormComplex, coarse: &FormComplex) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let p_max = map.blocks.len() - 1;
    let k_max = map.blocks[0].len() - 1;
    for p in 0..=p_max {
        for k in 0..=k_max {
            let here = &map.blocks[p][k];
            if p < p_max {
                let lhs = map.blocks[p + 1][k].mul(coarse.del_matrix(p, k))?;
                let rhs = fine.del_matrix(p, k).mul(here)?;
                if lhs != rhs {
                    out.push(format!("∂ at ({p},{k})"));
                }
            }
            if k < k_max {
                let lhs = map.blocks[p][k + 1].mul(coarse.d_matrix(p, k))?;
                let rhs = fine.d_matrix(p, k).mul(here)?;
                if lhs != rhs {
                    out.push(format!("d at ({p},{k})"));
                }
            }
        }
    }
    for n in 0..map.top_degree() {
        let lhs = map.matrices[n + 1].mul(coarse.total_differential(n)?)?;
        let rhs = fine.total_differential(n)?.mul(&map.matrices[n])?;
        if lhs != rhs {
            out.push(format!("δ in degree {n}"));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Iso,
    NotIso,
    Undetermined,
}

/// Verdict for one degree: both groups and, over Z, the matrix of `f*` from
/// coarse class coordinates (columns) to fine class coordinates (rows).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeVerdict {
    pub degree: usize,
    pub coarse: Presentation,
    pub fine: Presentation,
    pub verdict: Verdict,
    pub matrix: Vec<Vec<i128>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub coeff: Coeff,
    pub degrees: Vec<DegreeVerdict>,
}

impl InvarianceReport {
    pub fn all_iso(&self) -> bool {
        self.degrees.iter().all(|d| d.verdict == Verdict::Iso)
    }
}

/// Orders of the coordinate group of `H^n(Z)` used by `class_coordinates`:
/// torsion orders followed by zeros for the free part.
fn coordinate_orders(fc: &FormComplex, n: usize) -> Result<Vec<i128>> {
    let mut orders = Vec::new();
    if n > 0 {
        orders.extend(fc.delta_snf(n - 1)?.diagonal().into_iter().filter(|&s| s > 1));
    }
    orders.extend(std::iter::repeat_n(0, fc.homology_basis(n)?.free.len()));
    Ok(orders)
}

/// Matrix of `f*: H^n(coarse; Z) → H^n(fine; Z)` in class coordinates.
pub fn induced_map(map: &CochainMap, fine: &FormComplex, coarse: &FormComplex, n: usize) -> Result<Vec<Vec<i128>>> {
    let mut generators: Vec<TotalCochain> = Vec::new();
    if n > 0 {
        generators.extend(coarse.torsion_generators(n - 1)?.into_iter().map(|(z, _)| z));
    }
    generators.extend(coarse.free_cocycles(n)?);
    let columns = generators.iter().map(|z| fine.class_coordinates(&map.apply(z)?)).collect::<Result<Vec<_>>>()?;
    let rows = coordinate_orders(fine, n)?.len();
    Ok((0..rows).map(|i| columns.iter().map(|c| c[i]).collect()).collect())
}

/// Whether a map between isomorphic finitely generated abelian groups, given
/// in coordinates, is onto (and so an isomorphism).
fn is_onto(matrix: &[Vec<i128>], orders: &[i128]) -> Result<bool> {
    let rows = orders.len();
    let cols = matrix.first().map_or(0, Vec::len);
    let mut triplets: Vec<(usize, usize, i128)> = Vec::new();
    for (i, row) in matrix.iter().enumerate() {
        triplets.extend(row.iter().enumerate().map(|(j, &x)| (i, j, x)));
    }
    triplets.extend(orders.iter().enumerate().filter(|(_, &s)| s > 0).map(|(i, &s)| (i, cols + i, s)));
    let factors = invariant_factors(&IntMatrix::from_triplets(rows, cols + rows, triplets))?;
    Ok(factors.len() == rows && factors.iter().all(|&s| s == 1))
}

fn integral_verdict(map: &CochainMap, fine: &FormComplex, coarse: &FormComplex, n: usize) -> Result<(Verdict, Vec<Vec<i128>>)> {
    let (a, b) = (coarse.cohomology(n, Coeff::Z)?, fine.cohomology(n, Coeff::Z)?);
    let matrix = induced_map(map, fine, coarse, n)?;
    let verdict = if a == b && is_onto(&matrix, &coordinate_orders(fine, n)?)? { Verdict::Iso } else { Verdict::NotIso };
    Ok((verdict, matrix))
}

/// Per-degree verdicts on whether `f*: H^k(coarse; A) → H^k(fine; A)` is an
/// isomorphism for `k ≤ max_degree`.
///
/// Over Z the induced map is computed on class coordinates; it is an
/// isomorphism iff the groups agree and it is onto. Over Q the free part of the
/// same matrix decides. For `Z/m` and `Q/Z` the universal coefficient sequence
/// is natural, so integral isomorphisms in degrees `k` and `k+1` give one in
/// degree `k`; different groups give a negative verdict, anything else is left
/// undetermined. Those coefficients need degree `max_degree + 1` materialized.
pub fn verify_invariance(
    f: &MoritaMorphism,
    fine: &FormComplex,
    coarse: &FormComplex,
    coeff: Coeff,
    max_degree: usize,
) -> Result<InvarianceReport> {
    let map = f.pullback_map(fine, coarse)?;
    verify_map(&map, fine, coarse, coeff, max_degree)
}

/// [`verify_invariance`] for an already built cochain map (any morphism).
pub fn verify_map(map: &CochainMap, fine: &FormComplex, coarse: &FormComplex, coeff: Coeff, max_degree: usize) -> Result<InvarianceReport> {
    let needed = match coeff {
        Coeff::Z | Coeff::Q => max_degree,
        _ => max_degree + 1,
    };
    fine.check_degree(needed)?;
    coarse.check_degree(needed)?;
    let mut degrees = Vec::new();
    for n in 0..=max_degree {
        let (a, b) = (coarse.cohomology(n, coeff)?, fine.cohomology(n, coeff)?);
        let (verdict, matrix) = match coeff {
            Coeff::Z => integral_verdict(map, fine, coarse, n)?,
            Coeff::Q => {
                let matrix = induced_map(map, fine, coarse, n)?;
                let t = coordinate_orders(fine, n)?.iter().filter(|&&s| s > 0).count();
                let ta = if n > 0 { coarse.torsion_generators(n - 1)?.len() } else { 0 };
                let free: Vec<(usize, usize, i128)> = matrix[t..]
                    .iter()
                    .enumerate()
                    .flat_map(|(i, row)| row[ta..].iter().enumerate().map(move |(j, &x)| (i, j, x)))
                    .collect();
                let rank = invariant_factors(&IntMatrix::from_triplets(a.rank, a.rank, free))?.len();
                let v = if a.rank == b.rank && rank == a.rank { Verdict::Iso } else { Verdict::NotIso };
                (v, matrix)
            }
            _ => {
                if a != b {
                    (Verdict::NotIso, Vec::new())
                } else {
                    let here = integral_verdict(map, fine, coarse, n)?.0;
                    let next = integral_verdict(map, fine, coarse, n + 1)?.0;
                    let v = if here == Verdict::Iso && next == Verdict::Iso { Verdict::Iso } else { Verdict::Undetermined };
                    (v, Vec::new())
                }
            }
        };
        degrees.push(DegreeVerdict { degree: n, coarse: a, fine: b, verdict, matrix });
    }
    Ok(InvarianceReport { coeff, degrees })
}

/// One row of [`banal_comparison`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BanalRow {
    pub degree: usize,
    pub total: Presentation,
    pub simplicial: Presentation,
}

impl BanalRow {
    pub fn agrees(&self) -> bool {
        self.total == self.simplicial
    }
}

/// Total integral cohomology of a Čech groupoid next to the simplicial
/// cohomology of the underlying complex, degrees `0..=max_degree`.
pub fn banal_comparison(cg: &CechGroupoid, max_degree: usize, cap: usize) -> Result<Vec<BanalRow>> {
    let fc = FormComplex::of_cech(cg, max_degree, cap)?;
    (0..=max_degree)
        .map(|n| {
            let simplicial = if n <= cg.complex.dim() { cg.complex.integral_cohomology(n)? } else { Presentation::zero() };
            Ok(BanalRow { degree: n, total: fc.cohomology(n, Coeff::Z)?, simplicial })
        })
        .collect()
}

/// Pulls a cochain of total degree `n` back along `f` (plain or Morita).
pub fn pullback_total(map: &CochainMap, c: &TotalCochain) -> Result<TotalCochain> {
    let out = map.apply(c)?;
    Ok(TotalCochain::new(out.degree, out.coeff, out.values.iter().map(|v| out.coeff.reduce(v)).collect()))
}
