//! Integral chains of the total complex: cycles, the free homology basis, the
//! chain–cochain pairing and fundamental cycles of closed pseudomanifolds.
//!
//! Chains live on the same cells as cochains; the boundary is `δ^T`.

use num::{BigInt, ToPrimitive, Zero};

use crate::arith::{int, Coeff, Rational};
use crate::cohomology::integer_kernel;
use crate::complex::{FormComplex, TotalCochain};
use crate::error::{Error, Result};
use crate::homalg::{snf, snf_right, solve, BigMatrix, IntMatrix};

/// Integral cycles whose classes form a basis of the free part of `H_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyBasis {
    pub degree: usize,
    pub free: Vec<Vec<i128>>,
}

/// An integral chain of the total complex in degree `degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainCycle {
    pub degree: usize,
    pub values: Vec<i128>,
}

pub(crate) fn pair_values(chain: &[i128], values: &[Rational]) -> Rational {
    chain.iter().zip(values).filter(|(c, _)| **c != 0).map(|(&c, v)| int(c) * v).sum()
}

impl FormComplex {
    /// Boundary `δ_{n-1}^T c` of a degree-`n` chain (empty for `n = 0`).
    pub fn chain_boundary(&self, c: &ChainCycle) -> Result<Vec<i128>> {
        if c.values.len() != self.total_len(c.degree) {
            return Err(Error::DimensionMismatch("chain length".into()));
        }
        if c.degree == 0 {
            return Ok(Vec::new());
        }
        self.total_differential(c.degree - 1)?.transpose().mul_vec_int(&c.values)
    }

    pub fn is_cycle(&self, c: &ChainCycle) -> Result<bool> {
        Ok(self.chain_boundary(c)?.iter().all(|&v| v == 0))
    }

    /// Boundary of a degree-`n+1` chain as a degree-`n` chain.
    pub fn boundary_of(&self, n: usize, c: &[i128]) -> Result<ChainCycle> {
        let values = self.total_differential(n)?.transpose().mul_vec_int(c)?;
        Ok(ChainCycle { degree: n, values })
    }

    /// `∫_γ ω`, reduced in the coefficient domain of `ω`.
    pub fn pair(&self, gamma: &ChainCycle, omega: &TotalCochain) -> Result<Rational> {
        if gamma.degree != omega.degree {
            return Err(Error::DimensionMismatch(format!(
                "chain of degree {} paired with cochain of degree {}",
                gamma.degree, omega.degree
            )));
        }
        self.expect_degree(omega)?;
        if !self.is_closed(omega)? {
            return Err(Error::NotClosed);
        }
        if !self.is_cycle(gamma)? {
            return Err(Error::NotACycle);
        }
        Ok(omega.coeff.reduce(&pair_values(&gamma.values, &omega.values)))
    }

    /// Integral cycles spanning `H_n` modulo torsion.
    pub fn homology_basis(&self, n: usize) -> Result<&HomologyBasis> {
        let cell = &self.cache[n].homology;
        if let Some(h) = cell.get() {
            return Ok(h);
        }
        let h = self.compute_homology_basis(n)?;
        Ok(cell.get_or_init(|| h))
    }

    fn compute_homology_basis(&self, n: usize) -> Result<HomologyBasis> {
        self.check_degree(n)?;
        let len = self.total_len(n);
        // cycles: kernel of δ_{n-1}^T, as the trailing rows of Vᵀ
        let (kernel, v_inv, r) = if n == 0 {
            let id = BigMatrix::identity(len);
            (id.clone(), id, 0)
        } else {
            let (diag, v, v_inv) = snf_right(&self.total_differential(n - 1)?.transpose())?;
            (v.transpose(), v_inv, diag.len())
        };
        let k = len - r;
        // boundaries in kernel coordinates: rows r.. of V⁻¹ δ_n^T
        let delta = self.total_differential(n)?;
        let mut triplets = Vec::new();
        for j in 0..delta.rows() {
            let mut col = vec![0i128; len];
            for &(c, x) in delta.row(j) {
                col[c] = x;
            }
            let y = v_inv.mul_vec_int(&col)?;
            debug_assert!(y[..r].iter().all(|&x| x == 0));
            for (i, &x) in y[r..].iter().enumerate() {
                if x != 0 {
                    triplets.push((i, j, x));
                }
            }
        }
        let bmat = IntMatrix::from_triplets(k, delta.rows(), triplets);
        let f = snf(&bmat)?;
        let rho = f.rank();
        let mut free = Vec::new();
        for j in rho..k {
            let mut chain = vec![BigInt::zero(); len];
            for &(i, ref c) in f.u_inv.transpose().row(j) {
                for (row, x) in kernel.row(r + i) {
                    chain[*row] += c * x;
                }
            }
            let chain = chain.iter().map(|c| c.to_i128().ok_or(Error::Overflow)).collect::<Result<Vec<_>>>()?;
            free.push(chain);
        }
        Ok(HomologyBasis { degree: n, free })
    }

    /// Fundamental cycle of a closed oriented pseudomanifold carried by a Čech
    /// complex: the oriented top simplices placed in the first patch containing
    /// them, plus integral correction cells at `p ≥ 1`.
    pub fn fundamental_cycle(&self) -> Result<ChainCycle> {
        let model = self.model();
        let k = &model.ambient;
        let m = k.dim();
        if m > self.k_max() {
            return Err(Error::NotAPseudomanifold("top simplices are not materialized".into()));
        }
        let orientation = orientation_cycle(k)?;
        let len = self.total_len(m);
        let mut chain = vec![0i128; len];
        let layout = self.total_layout(m);
        let &(_, _, off0, _) = layout.iter().find(|b| b.0 == 0).expect("p = 0 block");
        for (s, &e) in orientation.iter().enumerate() {
            let cell = model.carriers[0]
                .iter()
                .position(|car| car.contains(m, s))
                .ok_or_else(|| Error::NotAPseudomanifold("cover misses a top simplex".into()))?;
            let i = self.basis_index(0, m, cell, s).expect("top simplex in its patch");
            chain[off0 + i] = e;
        }
        if m == 0 {
            return Ok(ChainCycle { degree: 0, values: chain });
        }
        let gamma = ChainCycle { degree: m, values: chain.clone() };
        let bd = self.chain_boundary(&gamma)?;
        if bd.iter().all(|&v| v == 0) {
            return Ok(gamma);
        }
        // solve ∂x = -∂c_0 with x supported on p ≥ 1
        let cols: Vec<usize> = layout.iter().filter(|b| b.0 >= 1).flat_map(|&(_, _, off, l)| off..off + l).collect();
        let a = self.total_differential(m - 1)?.transpose().select_cols(&cols);
        let f = snf(&a)?;
        let rhs: Vec<Rational> = bd.iter().map(|&v| int(-v)).collect();
        let x = solve(&f, Coeff::Z, &rhs)?.ok_or_else(|| Error::NotAPseudomanifold("no integral correction exists".into()))?;
        for (j, v) in cols.iter().zip(&x) {
            chain[*j] += v.to_integer();
        }
        let gamma = ChainCycle { degree: m, values: chain };
        debug_assert!(self.is_cycle(&gamma)?);
        Ok(gamma)
    }
}

/// The simplicial fundamental cycle of a closed, connected, oriented
/// pseudomanifold: `±1` on every top simplex, first entry `+1`.
pub fn orientation_cycle(k: &crate::simplicial::SimplicialComplex) -> Result<Vec<i128>> {
    let m = k.dim();
    if m == 0 {
        if k.count(0) != 1 {
            return Err(Error::NotAPseudomanifold("a 0-dimensional closed pseudomanifold is a point".into()));
        }
        return Ok(vec![1]);
    }
    let boundary = k.coboundary(m - 1).transpose();
    for row in 0..boundary.rows() {
        if boundary.row(row).len() != 2 {
            return Err(Error::NotAPseudomanifold(format!("a codimension-one face lies in {} top simplices", boundary.row(row).len())));
        }
    }
    let kernel = integer_kernel(&boundary)?;
    if kernel.len() != 1 {
        return Err(Error::NotAPseudomanifold(format!("top homology has rank {}", kernel.len())));
    }
    let mut z = kernel.into_iter().next().expect("one kernel vector");
    if z.iter().any(|v| v.abs() != 1) {
        return Err(Error::NotAPseudomanifold("not orientable".into()));
    }
    if z[0] < 0 {
        z.iter_mut().for_each(|v| *v = -*v);
    }
    Ok(z)
}

impl ChainCycle {
    pub fn zero(degree: usize, len: usize) -> Self {
        ChainCycle { degree, values: vec![0; len] }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}
