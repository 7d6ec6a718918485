//! Circle bundles over a groupoid, presented by transition data over the
//! object carrier, with pseudo-connections and pseudo-curvature.
//!
//! A bundle is a rational lift `c̃ ∈ K^{1,0}` of its circle-valued transition
//! function `c = c̃ mod Z`. It is valid when `n = ∂c̃` is integral and
//! locally constant (`dn = 0`); the Chern class is `[n] ∈ H²(Z)`. The group
//! acts on the fibre by `t ↦ t + c(γ)`. Lifts differing by a locally constant
//! integer cochain describe the same bundle.
//!
//! For a pseudo-connection `A ∈ K^{0,1}` the pseudo-curvature is
//! `Ω = dA`, `ω = ∂A + dc̃`, so that `ω + Ω = δ(A − c̃) + n`.

use num::Zero;

use crate::arith::{frac, Coeff, Rational};
use crate::cohomology::CohomologyClass;
use crate::complex::{Cochain, FormComplex, TotalCochain};
use crate::error::{Error, Result};
use crate::homalg::{snf, solve, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleCocycle {
    /// Rational lift at bidegree `(1,0)`.
    pub lift: Cochain,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoConnection {
    /// 1-form on the object carrier, bidegree `(0,1)`.
    pub a: Cochain,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoCurvature {
    /// Bidegree `(1,1)`.
    pub omega: Cochain,
    /// Bidegree `(0,2)`.
    pub big_omega: Cochain,
}

impl BundleCocycle {
    pub fn zero(fc: &FormComplex) -> Self {
        BundleCocycle { lift: fc.zero(1, 0, Coeff::Q) }
    }

    pub fn new(lift: Cochain) -> Result<Self> {
        if (lift.p, lift.k) != (1, 0) {
            return Err(Error::BidegreeOutOfRange { p: lift.p, k: lift.k });
        }
        Ok(BundleCocycle { lift: lift.with_coeff(Coeff::Q) })
    }

    /// Canonical lift in `[0,1)` of circle values.
    pub fn from_circle_values(fc: &FormComplex, values: &[Rational]) -> Result<Self> {
        if values.len() != fc.block_len(1, 0) {
            return Err(Error::DimensionMismatch("bundle cocycle length".into()));
        }
        BundleCocycle::new(Cochain::new(1, 0, Coeff::Q, values.iter().map(frac).collect()))
    }

    /// The transition function as circle values.
    pub fn circle_values(&self) -> Vec<Rational> {
        self.lift.values.iter().map(frac).collect()
    }
}

impl PseudoConnection {
    pub fn zero(fc: &FormComplex) -> Self {
        PseudoConnection { a: fc.zero(0, 1, Coeff::Q) }
    }

    pub fn new(a: Cochain) -> Result<Self> {
        if (a.p, a.k) != (0, 1) {
            return Err(Error::BidegreeOutOfRange { p: a.p, k: a.k });
        }
        Ok(PseudoConnection { a: a.with_coeff(Coeff::Q) })
    }
}

impl PseudoCurvature {
    pub fn total(&self, fc: &FormComplex) -> Result<TotalCochain> {
        fc.assemble(2, Coeff::Q, &[&self.big_omega, &self.omega])
    }
}

fn check_len(fc: &FormComplex, c: &Cochain) -> Result<()> {
    if c.values.len() != fc.block_len(c.p, c.k) {
        return Err(Error::DimensionMismatch(format!("cochain at ({},{}) has wrong length", c.p, c.k)));
    }
    Ok(())
}

/// Violations of the bundle conditions, cell by cell (empty when valid).
pub fn validate_bundle(fc: &FormComplex, c: &BundleCocycle) -> Vec<String> {
    let mut report = Vec::new();
    if let Err(e) = check_len(fc, &c.lift) {
        return vec![e.to_string()];
    }
    let n = fc.apply_del(&c.lift);
    for (i, v) in n.values.iter().enumerate() {
        if !v.is_integer() {
            report.push(format!("∂c is not integral on {}", fc.basis_label(2, 0, i)));
        }
    }
    let dn = fc.apply_d(&n);
    for (i, v) in dn.values.iter().enumerate() {
        if !v.is_zero() {
            report.push(format!("∂c is not locally constant on {}", fc.basis_label(2, 1, i)));
        }
    }
    report
}

fn require_valid(fc: &FormComplex, c: &BundleCocycle) -> Result<()> {
    let report = validate_bundle(fc, c);
    if report.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidBundle(report.join("; ")))
    }
}

/// The integral 2-cocycle `∂c̃`, placed at bidegree `(2,0)`.
pub fn chern_cocycle(fc: &FormComplex, c: &BundleCocycle) -> Result<TotalCochain> {
    require_valid(fc, c)?;
    let n = fc.apply_del(&c.lift).with_coeff(Coeff::Z);
    fc.embed(&n)
}

pub fn chern_class(fc: &FormComplex, c: &BundleCocycle) -> Result<CohomologyClass> {
    fc.integral_class(&chern_cocycle(fc, c)?)
}

pub fn pseudo_curvature(fc: &FormComplex, c: &BundleCocycle, a: &PseudoConnection) -> Result<PseudoCurvature> {
    require_valid(fc, c)?;
    check_len(fc, &a.a)?;
    let big_omega = fc.apply_d(&a.a);
    let omega = &fc.apply_del(&a.a) + &fc.apply_d(&c.lift);
    let curv = PseudoCurvature { omega, big_omega };
    debug_assert!(fc.max_degree() < 2 || fc.is_closed(&curv.total(fc)?)?);
    Ok(curv)
}

/// The total 1-cochain `A − c̃`.
fn potential(fc: &FormComplex, c: &BundleCocycle, a: &PseudoConnection) -> Result<TotalCochain> {
    fc.assemble(1, Coeff::Q, &[&a.a, &(-&c.lift)])
}

fn split_potential(fc: &FormComplex, x: &TotalCochain) -> Result<(BundleCocycle, PseudoConnection)> {
    let a = fc.component(x, 0).with_coeff(Coeff::Q);
    let c = -&fc.component(x, 1).with_coeff(Coeff::Q);
    Ok((BundleCocycle::new(c)?, PseudoConnection::new(a)?))
}

/// Integer cochains `n ∈ K^{p,0}` with `dn = 0` and `∂n = 0`, as a basis.
pub(crate) fn locally_constant_cocycles(fc: &FormComplex, p: usize) -> Result<Vec<Vec<i128>>> {
    let len = fc.block_len(p, 0);
    let mut triplets = Vec::new();
    for i in 0..len {
        let mut e = fc.zero(p, 0, Coeff::Q);
        e.values[i] = Rational::from_integer(1);
        let image: Vec<Rational> = fc.apply_d(&e).values.into_iter().chain(fc.apply_del(&e).values).collect();
        for (r, v) in image.iter().enumerate() {
            if !v.is_zero() {
                triplets.push((r, i, v.to_integer()));
            }
        }
    }
    let rows = fc.block_len(p, 1) + fc.block_len(p + 1, 0);
    crate::cohomology::integer_kernel(&IntMatrix::from_triplets(rows, len, triplets))
}

/// Finds an integral cocycle `n` concentrated at `(p,0)`, locally constant,
/// rationally cohomologous to `x`, then `w` with `δw = x − n`.
pub(crate) fn realize(fc: &FormComplex, x: &TotalCochain) -> Result<(TotalCochain, Vec<i128>)> {
    let deg = x.degree;
    let p = deg;
    let lattice = locally_constant_cocycles(fc, p)?;
    let f = fc.delta_snf(deg - 1)?;
    let r = f.rank();
    let y = f.u.mul_vec_rat(&x.values)?;
    let layout = fc.total_layout(deg);
    let &(_, _, off, len) = layout.iter().find(|b| b.0 == p).expect("(p,0) block");
    let total = fc.total_len(deg);
    let rows = total - r;
    // columns: U·E·L restricted to rows r..
    let mut triplets = Vec::new();
    for (j, l) in lattice.iter().enumerate() {
        let mut embedded = vec![0i128; total];
        embedded[off..off + len].copy_from_slice(l);
        let ul = f.u.mul_vec_int(&embedded)?;
        for (i, &v) in ul[r..].iter().enumerate() {
            if v != 0 {
                triplets.push((i, j, v));
            }
        }
    }
    let m = IntMatrix::from_triplets(rows, lattice.len(), triplets);
    let t = solve(&snf(&m)?, Coeff::Z, &y[r..])?.ok_or(Error::NeedsRefinement)?;
    let mut n = vec![0i128; len];
    for (tj, l) in t.iter().zip(&lattice) {
        let tj = tj.to_integer();
        if tj != 0 {
            for (slot, &v) in n.iter_mut().zip(l) {
                *slot += tj * v;
            }
        }
    }
    let nc = fc.embed(&Cochain::new(p, 0, Coeff::Q, n.iter().map(|&v| Rational::from_integer(v)).collect()))?;
    let w = solve(f, Coeff::Q, &(x - &nc).values)?.expect("x − n is exact over Q by construction");
    Ok((TotalCochain::new(deg - 1, Coeff::Q, w), n))
}

/// A bundle with pseudo-connection whose pseudo-curvature is exactly the given
/// rational 2-cocycle (which must vanish at bidegree `(2,0)`).
pub fn realize_bundle(fc: &FormComplex, curvature: &TotalCochain) -> Result<(BundleCocycle, PseudoConnection)> {
    if curvature.degree != 2 {
        return Err(Error::DimensionMismatch("pseudo-curvature has total degree 2".into()));
    }
    fc.expect_degree(curvature)?;
    let x = curvature.with_coeff(Coeff::Q);
    if !fc.component(&x, 2).is_zero() {
        return Err(Error::DimensionMismatch("pseudo-curvature has no (2,0) component".into()));
    }
    if !fc.is_closed(&x)? {
        return Err(Error::NotClosed);
    }
    if !fc.is_integer_class(&x)?.integral {
        return Err(Error::NotIntegral);
    }
    let (w, _) = realize(fc, &x)?;
    let out = split_potential(fc, &w)?;
    debug_assert_eq!(pseudo_curvature(fc, &out.0, &out.1)?.total(fc)?, x);
    Ok(out)
}

/// The class in `H¹(Q/Z)` of `(A − A') − (c̃ − c̃')` for two bundles with
/// equal pseudo-curvature.
pub fn difference_class(
    fc: &FormComplex,
    first: (&BundleCocycle, &PseudoConnection),
    second: (&BundleCocycle, &PseudoConnection),
) -> Result<TotalCochain> {
    let k1 = pseudo_curvature(fc, first.0, first.1)?;
    let k2 = pseudo_curvature(fc, second.0, second.1)?;
    if k1 != k2 {
        return Err(Error::CurvatureMismatch);
    }
    let d = &potential(fc, first.0, first.1)? - &potential(fc, second.0, second.1)?;
    Ok(d.with_coeff(Coeff::QModZ))
}

/// Whether a difference class is zero in `H¹(Q/Z)`.
pub fn is_trivial_difference(fc: &FormComplex, diff: &TotalCochain) -> Result<bool> {
    Ok(fc.is_coboundary(&diff.with_coeff(Coeff::QModZ))?.is_some())
}

/// Acts by a circle 1-cocycle `y` (given by a rational lift): `A − c̃ ↦ A − c̃ + y`.
/// The lift must have `δy` integral and concentrated at `(2,0)`, which keeps the
/// pseudo-curvature unchanged.
pub fn twist(fc: &FormComplex, bundle: (&BundleCocycle, &PseudoConnection), y: &TotalCochain) -> Result<(BundleCocycle, PseudoConnection)> {
    fc.expect_degree(y)?;
    let y = y.with_coeff(Coeff::Q);
    let dy = fc.apply_delta(&y)?;
    let off_axis_zero =
        fc.total_layout(2).iter().filter(|b| b.0 != 2).all(|&(_, _, off, len)| dy.values[off..off + len].iter().all(Zero::is_zero));
    if !dy.is_integral() || !off_axis_zero {
        return Err(Error::NotClosed);
    }
    let x = &potential(fc, bundle.0, bundle.1)? + &y;
    let out = split_potential(fc, &x)?;
    require_valid(fc, &out.0)?;
    Ok(out)
}

/// Gauge transformation by a function `f ∈ K^{0,0}`: `c̃ ↦ c̃ + ∂f`, `A ↦ A − df`.
pub fn gauge(fc: &FormComplex, bundle: (&BundleCocycle, &PseudoConnection), f: &Cochain) -> Result<(BundleCocycle, PseudoConnection)> {
    if (f.p, f.k) != (0, 0) {
        return Err(Error::BidegreeOutOfRange { p: f.p, k: f.k });
    }
    check_len(fc, f)?;
    let f = f.with_coeff(Coeff::Q);
    let c = &bundle.0.lift + &fc.apply_del(&f);
    let a = &bundle.1.a - &fc.apply_d(&f);
    Ok((BundleCocycle::new(c)?, PseudoConnection::new(a)?))
}

/// A rational cocycle cohomologous to `z` with vanishing `(n,0)` component,
/// where `n` is the degree of `z`: subtracts `δb` for `b ∈ K^{n-1,0}` solving
/// `∂b = z_{n,0}`. Rows of the double complex are exact in positive `p`, so
/// this succeeds whenever the `(n,0)` component is `∂`-closed and `n ≥ 1`.
pub fn without_top_component(fc: &FormComplex, z: &TotalCochain) -> Result<TotalCochain> {
    let n = z.degree;
    if n == 0 {
        return Err(Error::DegreeOutOfRange { degree: 0, max: fc.max_degree() });
    }
    let z = z.with_coeff(Coeff::Q);
    let top = fc.component(&z, n);
    if top.is_zero() {
        return Ok(z);
    }
    let f = snf(fc.del_matrix(n - 1, 0))?;
    let b = solve(&f, Coeff::Q, &top.values)?.ok_or(Error::NotClosed)?;
    let b = fc.embed(&Cochain::new(n - 1, 0, Coeff::Q, b))?;
    Ok(&z - &fc.apply_delta(&b)?)
}
