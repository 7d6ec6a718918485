//! Total cohomology and homology of a [`FormComplex`], coboundary and
//! integrality tests, and integral class coordinates.

use num::{Integer, Zero};

use crate::arith::{int, Coeff, Rational};
use crate::complex::{FormComplex, TotalCochain};
use crate::cycles::pair_values;
use crate::error::{Error, Result};
use crate::homalg::{invariant_factors, snf, snf_right, solve, IntMatrix, Presentation, SnfResult};

/// A cohomology class: a representative cocycle, the group it lives in and,
/// for integral classes, its coordinates (see [`FormComplex::class_coordinates`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyClass {
    pub degree: usize,
    pub representative: TotalCochain,
    pub group: Presentation,
    pub coordinates: Vec<i128>,
}

impl CohomologyClass {
    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().all(|&c| c == 0)
    }
}

/// Result of [`FormComplex::is_integer_class`]: when integral, `ω = z + δb`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralityWitness {
    pub integral: bool,
    pub z: Option<TotalCochain>,
    pub b: Option<TotalCochain>,
}

/// Pairings of a cocycle with the free homology basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingReport {
    pub integral: bool,
    pub pairings: Vec<Rational>,
}

impl FormComplex {
    /// Nonzero invariant factors of `δ_n`.
    pub fn delta_factors(&self, n: usize) -> Result<&[i128]> {
        let cell = &self.cache[n].factors;
        if let Some(f) = cell.get() {
            return Ok(f);
        }
        let f = invariant_factors(self.total_differential(n)?)?;
        Ok(cell.get_or_init(|| f))
    }

    /// Smith form of `δ_n` with both transforms.
    pub fn delta_snf(&self, n: usize) -> Result<&SnfResult> {
        let cell = &self.cache[n].snf;
        if let Some(f) = cell.get() {
            return Ok(f);
        }
        let f = snf(self.total_differential(n)?)?;
        Ok(cell.get_or_init(|| f))
    }

    fn prev_factors(&self, n: usize) -> Result<&[i128]> {
        if n == 0 {
            Ok(&[])
        } else {
            self.delta_factors(n - 1)
        }
    }

    /// Betti number of total degree `n`.
    pub fn betti(&self, n: usize) -> Result<usize> {
        self.check_degree(n)?;
        Ok(self.total_len(n) - self.delta_factors(n)?.len() - self.prev_factors(n)?.len())
    }

    /// `H^n` of the total complex with the given coefficients.
    ///
    /// Non-integral coefficients use universal coefficients:
    /// `H^n(A) = H^n(Z) ⊗ A ⊕ Tor(H^{n+1}(Z), A)`; torsion of `H^{n+1}(Z)`
    /// is read off the invariant factors of `δ_n`.
    pub fn cohomology(&self, n: usize, coeff: Coeff) -> Result<Presentation> {
        let b = self.betti(n)?;
        let tors_n: Vec<i128> = self.prev_factors(n)?.iter().copied().filter(|&d| d > 1).collect();
        let tors_next: Vec<i128> = self.delta_factors(n)?.iter().copied().filter(|&d| d > 1).collect();
        match coeff {
            Coeff::Z => Presentation::from_cyclic(b, &tors_n),
            Coeff::Q => Ok(Presentation::free(b)),
            Coeff::QModZ => Presentation::from_cyclic(b, &tors_next),
            Coeff::ZMod(m) => {
                let m = m as i128;
                let mut orders = vec![m; b];
                orders.extend(tors_n.iter().map(|d| d.gcd(&m)));
                orders.extend(tors_next.iter().map(|d| d.gcd(&m)));
                Presentation::from_cyclic(0, &orders)
            }
        }
    }

    /// `H_n` of the dual integral chain complex (boundary `δ^T`).
    pub fn homology(&self, n: usize) -> Result<Presentation> {
        let b = self.betti(n)?;
        Presentation::from_cyclic(b, self.delta_factors(n)?)
    }

    pub(crate) fn expect_degree(&self, c: &TotalCochain) -> Result<()> {
        if c.values.len() != self.total_len(c.degree) {
            return Err(Error::DimensionMismatch(format!(
                "degree-{} cochain has {} values, expected {}",
                c.degree,
                c.values.len(),
                self.total_len(c.degree)
            )));
        }
        Ok(())
    }

    /// Solves `δb = c` in the coefficient domain of `c`; `None` when `c` is not
    /// a coboundary. Errors with `NotClosed` unless `δc = 0`.
    pub fn is_coboundary(&self, c: &TotalCochain) -> Result<Option<TotalCochain>> {
        self.expect_degree(c)?;
        if !self.is_closed(c)? {
            return Err(Error::NotClosed);
        }
        if c.degree == 0 {
            return Ok(c.is_zero().then(|| c.clone()));
        }
        if matches!(c.coeff, Coeff::Z | Coeff::ZMod(_)) && !c.is_integral() {
            return Err(Error::NotIntegral);
        }
        let f = self.delta_snf(c.degree - 1)?;
        Ok(solve(f, c.coeff, &c.values)?.map(|b| TotalCochain::new(c.degree - 1, c.coeff, b)))
    }

    /// Whether two cocycles of the same degree and coefficients are cohomologous.
    pub fn cohomologous(&self, a: &TotalCochain, b: &TotalCochain) -> Result<bool> {
        Ok(self.is_coboundary(&(a - b))?.is_some())
    }

    /// Decides whether a rational cocycle `ω` can be written `z + δb` with `z`
    /// integral and `b` rational, and returns such a pair.
    pub fn is_integer_class(&self, omega: &TotalCochain) -> Result<IntegralityWitness> {
        self.expect_degree(omega)?;
        let omega = omega.with_coeff(Coeff::Q);
        if !self.is_closed(&omega)? {
            return Err(Error::NotClosed);
        }
        let n = omega.degree;
        if n == 0 {
            let integral = omega.is_integral();
            return Ok(IntegralityWitness { integral, z: integral.then(|| omega.with_coeff(Coeff::Z)), b: None });
        }
        let f = self.delta_snf(n - 1)?;
        let diag = f.diagonal();
        let y = f.u.mul_vec_rat(&omega.values)?;
        if y[diag.len()..].iter().any(|v| !v.is_integer()) {
            return Ok(IntegralityWitness { integral: false, z: None, b: None });
        }
        let mut xp = vec![Rational::zero(); f.v.rows()];
        for (i, &s) in diag.iter().enumerate() {
            xp[i] = y[i] / int(s);
        }
        let b = TotalCochain::new(n - 1, Coeff::Q, f.v.mul_vec_rat(&xp)?);
        let z = &omega - &self.apply_delta(&b)?;
        debug_assert!(z.is_integral());
        Ok(IntegralityWitness { integral: true, z: Some(z.with_coeff(Coeff::Z)), b: Some(b) })
    }

    /// Pairs a rational cocycle with every free homology generator and checks
    /// that all pairings are integers. Torsion is invisible to this test.
    pub fn integrality_by_pairing(&self, omega: &TotalCochain) -> Result<PairingReport> {
        self.expect_degree(omega)?;
        let omega = omega.with_coeff(Coeff::Q);
        if !self.is_closed(&omega)? {
            return Err(Error::NotClosed);
        }
        let basis = self.homology_basis(omega.degree)?;
        let pairings: Vec<Rational> = basis.free.iter().map(|g| pair_values(g, &omega.values)).collect();
        Ok(PairingReport { integral: pairings.iter().all(|p| p.is_integer()), pairings })
    }

    /// Coordinates of an integral cocycle: residues `(Uz)_i mod s_i` for the
    /// nontrivial invariant factors `s_i` of `δ_{n-1}`, then the pairings with
    /// the free homology basis. Two cocycles are cohomologous over Z iff their
    /// coordinates agree, and the map is additive (torsion entries mod `s_i`).
    pub fn class_coordinates(&self, z: &TotalCochain) -> Result<Vec<i128>> {
        self.expect_degree(z)?;
        if !z.is_integral() {
            return Err(Error::NotIntegral);
        }
        let zq = z.with_coeff(Coeff::Q);
        if !self.is_closed(&zq)? {
            return Err(Error::NotClosed);
        }
        let n = z.degree;
        let mut coords = Vec::new();
        if n > 0 {
            let f = self.delta_snf(n - 1)?;
            let y = f.u.mul_vec_rat(&zq.values)?;
            for (i, &s) in f.diagonal().iter().enumerate() {
                if s > 1 {
                    coords.push(y[i].to_integer().mod_floor(&s));
                }
            }
        }
        for g in &self.homology_basis(n)?.free {
            coords.push(pair_values(g, &zq.values).to_integer());
        }
        Ok(coords)
    }

    /// Packages an integral cocycle as a class of `H^n(Z)`.
    pub fn integral_class(&self, z: &TotalCochain) -> Result<CohomologyClass> {
        let coordinates = self.class_coordinates(z)?;
        Ok(CohomologyClass {
            degree: z.degree,
            representative: z.with_coeff(Coeff::Z),
            group: self.cohomology(z.degree, Coeff::Z)?,
            coordinates,
        })
    }

    /// Integral cocycles generating the torsion of `H^{n+1}(Z)`, with their
    /// orders: `U⁻¹ e_i` for the invariant factors `s_i > 1` of `δ_n`.
    pub fn torsion_generators(&self, n: usize) -> Result<Vec<(TotalCochain, i128)>> {
        let f = self.delta_snf(n)?;
        let mut out = Vec::new();
        for (i, &s) in f.diagonal().iter().enumerate() {
            if s > 1 {
                let values = f.u_inv.col_i128(i)?.into_iter().map(int).collect();
                out.push((TotalCochain::new(n + 1, Coeff::Z, values), s));
            }
        }
        Ok(out)
    }

    /// Rational lifts of the classes of `H^n(Q/Z)` killed by `order`, one per
    /// class, in lexicographic order of their coordinates (zero class first).
    /// Torsion summands come from the Bockstein: `δ(V e_i / s_i) = s_i⁻¹ δ V e_i`
    /// is the `i`-th torsion generator of `H^{n+1}(Z)`.
    pub fn circle_classes(&self, n: usize, order: u64) -> Result<Vec<TotalCochain>> {
        let order = order as i128;
        let f = self.delta_snf(n)?;
        let len = self.total_len(n);
        let mut generators: Vec<(Vec<Rational>, i128)> = Vec::new();
        for (i, &s) in f.diagonal().iter().enumerate() {
            let g = s.gcd(&order);
            if s > 1 && g > 1 {
                // element of order g in Z/s: (s/g)·(V e_i / s) = V e_i / g
                let values = f.v.col_i128(i)?.into_iter().map(|x| Rational::new(x, g)).collect();
                generators.push((values, g));
            }
        }
        for z in self.free_cocycles(n)? {
            generators.push((z.values.iter().map(|v| v / int(order)).collect(), order));
        }
        let mut out = vec![vec![Rational::zero(); len]];
        for (g, m) in &generators {
            let mut next = Vec::with_capacity(out.len() * *m as usize);
            for base in &out {
                for a in 0..*m {
                    next.push(base.iter().zip(g).map(|(b, x)| b + x * int(a)).collect());
                }
            }
            out = next;
        }
        Ok(out.into_iter().map(|v| TotalCochain::new(n, Coeff::Q, v)).collect())
    }

    /// Integral cocycles `z_i` with `⟨h_j, z_i⟩ = δ_ij` for the free homology
    /// basis `h_j` of degree `n`.
    pub fn free_cocycles(&self, n: usize) -> Result<Vec<TotalCochain>> {
        self.check_degree(n)?;
        let basis = self.homology_basis(n)?;
        let b = basis.free.len();
        if b == 0 {
            return Ok(Vec::new());
        }
        let kernel = integer_kernel(self.total_differential(n)?)?;
        let mut triplets = Vec::new();
        for (i, h) in basis.free.iter().enumerate() {
            for (j, k) in kernel.iter().enumerate() {
                let v: i128 = h.iter().zip(k).map(|(a, c)| a * c).sum();
                triplets.push((i, j, v));
            }
        }
        let p = snf(&IntMatrix::from_triplets(b, kernel.len(), triplets))?;
        let len = self.total_len(n);
        let mut out = Vec::new();
        for i in 0..b {
            let mut e = vec![Rational::zero(); b];
            e[i] = int(1);
            let x = solve(&p, Coeff::Z, &e)?.ok_or(Error::NotIntegral)?;
            let mut values = vec![Rational::zero(); len];
            for (j, c) in x.iter().enumerate() {
                if !c.is_zero() {
                    for (slot, &k) in values.iter_mut().zip(&kernel[j]) {
                        *slot += c * int(k);
                    }
                }
            }
            out.push(TotalCochain::new(n, Coeff::Z, values));
        }
        Ok(out)
    }
}

/// Basis of the integer kernel `{x ∈ Z^cols : A x = 0}`.
pub fn integer_kernel(a: &IntMatrix) -> Result<Vec<Vec<i128>>> {
    let (diag, v, _) = snf_right(a)?;
    (diag.len()..a.cols()).map(|j| v.col_i128(j)).collect()
}
