//! Circle central extensions (gerbes trivialized over the objects) as rational
//! lifts `σ̃ ∈ K^{2,0}`, with connective structures, curvings, pseudo-curvature,
//! Dixmier–Douady classes, realization and flat data.
//!
//! `σ̃` is valid when `m = ∂σ̃` is integral and locally constant; the
//! Dixmier–Douady class is `[m] ∈ H³(Z)`. For `A ∈ K^{1,1}`, `B ∈ K^{0,2}`:
//!
//! * `Ω = dB`, `ω = ∂B − dA`, `η = ∂A − dσ̃`,
//! * `η + ω + Ω = δ(B + A − σ̃) + m`.
//!
//! A connective structure satisfies `∂A = dσ̃` (for locally constant `σ` this
//! is `∂A = 0`), a curving `∂B = dA`.

use num::Zero;

use crate::arith::{frac, Coeff, Rational};
use crate::bundles::realize;
use crate::cohomology::CohomologyClass;
use crate::complex::{Cochain, FormComplex, TotalCochain};
use crate::error::{Error, Result};
use crate::homalg::{snf, solve, IntMatrix};
use crate::simplicial::SimplicialComplex;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionCocycle {
    /// Rational lift at bidegree `(2,0)`.
    pub lift: Cochain,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GerbeConnection {
    /// Bidegree `(1,1)`.
    pub a: Cochain,
    /// Bidegree `(0,2)`.
    pub b: Cochain,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GerbeCurvature {
    /// Bidegree `(2,1)`.
    pub eta: Cochain,
    /// Bidegree `(1,2)`.
    pub omega: Cochain,
    /// Bidegree `(0,3)`.
    pub big_omega: Cochain,
}

/// A gerbe with its pseudo-connection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GerbeDatum {
    pub sigma: ExtensionCocycle,
    pub connection: GerbeConnection,
}

impl ExtensionCocycle {
    pub fn zero(fc: &FormComplex) -> Self {
        ExtensionCocycle { lift: fc.zero(2, 0, Coeff::Q) }
    }

    pub fn new(lift: Cochain) -> Result<Self> {
        if (lift.p, lift.k) != (2, 0) {
            return Err(Error::BidegreeOutOfRange { p: lift.p, k: lift.k });
        }
        Ok(ExtensionCocycle { lift: lift.with_coeff(Coeff::Q) })
    }

    /// Canonical lift in `[0,1)` of circle values.
    pub fn from_circle_values(fc: &FormComplex, values: &[Rational]) -> Result<Self> {
        if values.len() != fc.block_len(2, 0) {
            return Err(Error::DimensionMismatch("extension cocycle length".into()));
        }
        ExtensionCocycle::new(Cochain::new(2, 0, Coeff::Q, values.iter().map(frac).collect()))
    }

    pub fn circle_values(&self) -> Vec<Rational> {
        self.lift.values.iter().map(frac).collect()
    }
}

impl GerbeConnection {
    pub fn zero(fc: &FormComplex) -> Self {
        GerbeConnection { a: fc.zero(1, 1, Coeff::Q), b: fc.zero(0, 2, Coeff::Q) }
    }

    pub fn new(a: Cochain, b: Cochain) -> Result<Self> {
        if (a.p, a.k) != (1, 1) {
            return Err(Error::BidegreeOutOfRange { p: a.p, k: a.k });
        }
        if (b.p, b.k) != (0, 2) {
            return Err(Error::BidegreeOutOfRange { p: b.p, k: b.k });
        }
        Ok(GerbeConnection { a: a.with_coeff(Coeff::Q), b: b.with_coeff(Coeff::Q) })
    }
}

impl GerbeCurvature {
    pub fn total(&self, fc: &FormComplex) -> Result<TotalCochain> {
        fc.assemble(3, Coeff::Q, &[&self.big_omega, &self.omega, &self.eta])
    }
}

fn check_len(fc: &FormComplex, c: &Cochain) -> Result<()> {
    if c.values.len() != fc.block_len(c.p, c.k) {
        return Err(Error::DimensionMismatch(format!("cochain at ({},{}) has wrong length", c.p, c.k)));
    }
    Ok(())
}

/// Violations of the extension cocycle conditions (empty when valid).
pub fn validate_extension_cocycle(fc: &FormComplex, sigma: &ExtensionCocycle) -> Vec<String> {
    if let Err(e) = check_len(fc, &sigma.lift) {
        return vec![e.to_string()];
    }
    let mut report = Vec::new();
    let m = fc.apply_del(&sigma.lift);
    for (i, v) in m.values.iter().enumerate() {
        if !v.is_integer() {
            report.push(format!("∂σ is not integral on {}", fc.basis_label(3, 0, i)));
        }
    }
    for (i, v) in fc.apply_d(&m).values.iter().enumerate() {
        if !v.is_zero() {
            report.push(format!("∂σ is not locally constant on {}", fc.basis_label(3, 1, i)));
        }
    }
    report
}

fn require_valid(fc: &FormComplex, sigma: &ExtensionCocycle) -> Result<()> {
    let report = validate_extension_cocycle(fc, sigma);
    if report.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidExtension(report.join("; ")))
    }
}

/// Pullback `σ∘f` of an extension cocycle along a (plain or Morita) morphism.
pub fn pullback_extension(map: &crate::morita::CochainMap, sigma: &ExtensionCocycle) -> Result<ExtensionCocycle> {
    ExtensionCocycle::new(map.apply_block(&sigma.lift)?)
}

/// `σ₁ + σ₂`.
pub fn tensor(fc: &FormComplex, s1: &ExtensionCocycle, s2: &ExtensionCocycle) -> Result<ExtensionCocycle> {
    check_len(fc, &s1.lift)?;
    if s1.lift.values.len() != s2.lift.values.len() {
        return Err(Error::BaseMismatch);
    }
    ExtensionCocycle::new(&s1.lift + &s2.lift)
}

/// The integral 3-cocycle `∂σ̃` at bidegree `(3,0)`.
pub fn dd_cocycle(fc: &FormComplex, sigma: &ExtensionCocycle) -> Result<TotalCochain> {
    require_valid(fc, sigma)?;
    fc.embed(&fc.apply_del(&sigma.lift).with_coeff(Coeff::Z))
}

pub fn dd_class(fc: &FormComplex, sigma: &ExtensionCocycle) -> Result<CohomologyClass> {
    fc.integral_class(&dd_cocycle(fc, sigma)?)
}

pub fn pseudo_curvature_gerbe(fc: &FormComplex, sigma: &ExtensionCocycle, conn: &GerbeConnection) -> Result<GerbeCurvature> {
    require_valid(fc, sigma)?;
    check_len(fc, &conn.a)?;
    check_len(fc, &conn.b)?;
    let big_omega = fc.apply_d(&conn.b);
    let omega = &fc.apply_del(&conn.b) - &fc.apply_d(&conn.a);
    let eta = &fc.apply_del(&conn.a) - &fc.apply_d(&sigma.lift);
    let curv = GerbeCurvature { eta, omega, big_omega };
    debug_assert!(fc.max_degree() < 3 || fc.is_closed(&curv.total(fc)?)?);
    Ok(curv)
}

/// `∂A = dσ̃`.
pub fn connective_check(fc: &FormComplex, sigma: &ExtensionCocycle, a: &Cochain) -> Result<bool> {
    check_len(fc, a)?;
    Ok(fc.apply_del(a) == fc.apply_d(&sigma.lift))
}

/// Outcome of [`find_curving`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Curving {
    Found(Cochain),
    /// `dA` is not in the image of `∂`; carries `∂(dA)`, the obstruction.
    Obstructed(Cochain),
}

/// Solves `∂B = dA` for `B ∈ K^{0,2}` (least solution in Smith coordinates).
pub fn find_curving(fc: &FormComplex, a: &Cochain) -> Result<Curving> {
    check_len(fc, a)?;
    let target = fc.apply_d(a);
    if fc.block_len(0, 2) == 0 {
        return Ok(if target.is_zero() { Curving::Found(fc.zero(0, 2, Coeff::Q)) } else { Curving::Obstructed(fc.apply_del(&target)) });
    }
    let f = snf(fc.del_matrix(0, 2))?;
    match solve(&f, Coeff::Q, &target.values)? {
        Some(b) => Ok(Curving::Found(Cochain::new(0, 2, Coeff::Q, b))),
        None => Ok(Curving::Obstructed(fc.apply_del(&target))),
    }
}

/// Curvature `Ω = dB` and whether `∂Ω = 0`.
pub fn curvature(fc: &FormComplex, b: &Cochain) -> Result<(Cochain, bool)> {
    check_len(fc, b)?;
    let omega = fc.apply_d(b);
    let descends = fc.apply_del(&omega).is_zero();
    Ok((omega, descends))
}

/// `∂A = dσ̃`, `dA = ∂B`, `dB = 0`.
pub fn is_flat(fc: &FormComplex, sigma: &ExtensionCocycle, conn: &GerbeConnection) -> Result<bool> {
    check_len(fc, &conn.b)?;
    Ok(connective_check(fc, sigma, &conn.a)? && fc.apply_d(&conn.a) == fc.apply_del(&conn.b) && fc.apply_d(&conn.b).is_zero())
}

fn potential(fc: &FormComplex, d: &GerbeDatum) -> Result<TotalCochain> {
    fc.assemble(2, Coeff::Q, &[&d.connection.b, &d.connection.a, &(-&d.sigma.lift)])
}

fn split_potential(fc: &FormComplex, w: &TotalCochain) -> Result<GerbeDatum> {
    let b = fc.component(w, 0).with_coeff(Coeff::Q);
    let a = fc.component(w, 1).with_coeff(Coeff::Q);
    let sigma = -&fc.component(w, 2).with_coeff(Coeff::Q);
    Ok(GerbeDatum { sigma: ExtensionCocycle::new(sigma)?, connection: GerbeConnection::new(a, b)? })
}

/// A gerbe with pseudo-connection whose pseudo-curvature is exactly the given
/// rational 3-cocycle (vanishing at bidegree `(3,0)`).
///
/// Errors: `NotClosed`, `NotIntegral`, `OmegaNotExact` when `Ω ≠ dB₀` for
/// every `B₀`, `NeedsRefinement` when the class has no locally constant
/// integral representative on this cover.
pub fn realize_gerbe(fc: &FormComplex, curvature: &TotalCochain) -> Result<GerbeDatum> {
    if curvature.degree != 3 {
        return Err(Error::DimensionMismatch("gerbe pseudo-curvature has total degree 3".into()));
    }
    fc.expect_degree(curvature)?;
    let x = curvature.with_coeff(Coeff::Q);
    if !fc.component(&x, 3).is_zero() {
        return Err(Error::DimensionMismatch("gerbe pseudo-curvature has no (3,0) component".into()));
    }
    if !fc.is_closed(&x)? {
        return Err(Error::NotClosed);
    }
    if !fc.is_integer_class(&x)?.integral {
        return Err(Error::NotIntegral);
    }
    let big_omega = fc.component(&x, 0);
    if !big_omega.values.is_empty() {
        let f = snf(fc.d_matrix(0, 2))?;
        if solve(&f, Coeff::Q, &big_omega.values)?.is_none() {
            return Err(Error::OmegaNotExact);
        }
    }
    let (w, _) = realize(fc, &x)?;
    let out = split_potential(fc, &w)?;
    debug_assert_eq!(pseudo_curvature_gerbe(fc, &out.sigma, &out.connection)?.total(fc)?, x);
    Ok(out)
}

/// Componentwise difference of two data with equal pseudo-curvature; the
/// result satisfies the flatness equations.
pub fn difference_flat(fc: &FormComplex, first: &GerbeDatum, second: &GerbeDatum) -> Result<GerbeDatum> {
    let k1 = pseudo_curvature_gerbe(fc, &first.sigma, &first.connection)?;
    let k2 = pseudo_curvature_gerbe(fc, &second.sigma, &second.connection)?;
    if k1 != k2 {
        return Err(Error::CurvatureMismatch);
    }
    let out = GerbeDatum {
        sigma: ExtensionCocycle::new(&first.sigma.lift - &second.sigma.lift)?,
        connection: GerbeConnection::new(&first.connection.a - &second.connection.a, &first.connection.b - &second.connection.b)?,
    };
    debug_assert!(is_flat(fc, &out.sigma, &out.connection)?);
    Ok(out)
}

/// Componentwise sum; acting by a flat datum keeps the pseudo-curvature.
pub fn add_data(fc: &FormComplex, d: &GerbeDatum, flat: &GerbeDatum) -> Result<GerbeDatum> {
    if !is_flat(fc, &flat.sigma, &flat.connection)? {
        return Err(Error::NotFlat);
    }
    Ok(GerbeDatum {
        sigma: ExtensionCocycle::new(&d.sigma.lift + &flat.sigma.lift)?,
        connection: GerbeConnection::new(&d.connection.a + &flat.connection.a, &d.connection.b + &flat.connection.b)?,
    })
}

/// Whether two gerbe data are isomorphic: `(B + A − σ̃)` differ by a coboundary
/// modulo integers, i.e. their difference is zero in `H²(Q/Z)`.
pub fn isomorphic(fc: &FormComplex, first: &GerbeDatum, second: &GerbeDatum) -> Result<bool> {
    let d = (&potential(fc, first)? - &potential(fc, second)?).with_coeff(Coeff::QModZ);
    Ok(fc.is_coboundary(&d)?.is_some())
}

/// The flat datum `(σ, A, B) = (−y_{2,0}, y_{1,1}, y_{0,2})` of a rational lift
/// `y` of a circle 2-cocycle whose coboundary is integral and sits at `(3,0)`.
pub fn flat_from_circle_class(fc: &FormComplex, y: &TotalCochain) -> Result<GerbeDatum> {
    let y = y.with_coeff(Coeff::Q);
    let out = split_potential(fc, &y)?;
    require_valid(fc, &out.sigma)?;
    if !is_flat(fc, &out.sigma, &out.connection)? {
        return Err(Error::NotFlat);
    }
    Ok(out)
}

/// Representatives of the flat data modulo isomorphism with fiber `(1/N)Z/Z`,
/// one per class of `H²(Q/Z)` killed by `N`.
pub fn flat_classes(fc: &FormComplex, order: u64) -> Result<Vec<GerbeDatum>> {
    fc.circle_classes(2, order)?.iter().map(|y| flat_from_circle_class(fc, y)).collect()
}

/// Class representatives of central extensions of a finite groupoid with
/// fiber `(1/N)Z/Z`: one per element of `H²(Q/Z)` killed by `N`.
pub fn enumerate_extension_classes(fc: &FormComplex, order: u64) -> Result<Vec<ExtensionCocycle>> {
    if fc.groupoid().is_none() {
        return Err(Error::InvalidExtension("enumeration is for finite groupoids".into()));
    }
    fc.circle_classes(2, order)?.into_iter().map(|y| ExtensionCocycle::new(fc.component(&y, 2).scale(Rational::from_integer(-1)))).collect()
}

/// `⟨loop, a⟩ mod 1` for a flat simplicial 1-cochain `a` and a 1-cycle.
pub fn holonomy(k: &SimplicialComplex, a: &[Rational], cycle: &[i128]) -> Result<Rational> {
    if a.len() != k.count(1) || cycle.len() != k.count(1) {
        return Err(Error::DimensionMismatch("holonomy expects values on edges".into()));
    }
    if k.dim() >= 2 && k.coboundary(1).mul_vec_rat(a).iter().any(|v| !v.is_zero()) {
        return Err(Error::NotFlat);
    }
    let boundary = k.coboundary(0).transpose().mul_vec_int(cycle)?;
    if boundary.iter().any(|&v| v != 0) {
        return Err(Error::NotACycle);
    }
    let total: Rational = cycle.iter().zip(a).map(|(&c, v)| Rational::from_integer(c) * v).sum();
    Ok(frac(&total))
}

/// Whether a flat 1-cochain has trivial holonomy along every loop.
pub fn is_holonomy_free(k: &SimplicialComplex, a: &[Rational]) -> Result<bool> {
    let boundary: IntMatrix = k.coboundary(0).transpose();
    for z in crate::cohomology::integer_kernel(&boundary)? {
        if !holonomy(k, a, &z)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
