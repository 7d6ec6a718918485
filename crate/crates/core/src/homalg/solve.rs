//! Linear systems `B·x = y` over Z, Q, Z/n and Q/Z, read off a Smith form of `B`.

use num::{BigInt, BigRational, Integer, ToPrimitive, Zero};

use super::lattice::{lll, nearest_plane};
use super::snf::SnfResult;
use crate::arith::{Coeff, Rational};
use crate::error::{Error, Result};

/// Kernel dimension up to which oversized solutions are shortened.
const SHORTEN_LIMIT: usize = 64;
/// Entry size (in bits) above which a solution counts as oversized.
const SHORT_BITS: u64 = 48;

/// Solves `B·x = y` in the coefficient domain, given `snf(B)`.
///
/// Free coordinates of the Smith basis are set to zero, so the answer is
/// deterministic. A solution with oversized entries is moved along the
/// kernel to a short one. Over `Q/Z` the equation is read mod 1 and over `Z/n` mod n;
/// the returned vector is then a representative.
pub fn solve(f: &SnfResult, coeff: Coeff, y: &[Rational]) -> Result<Option<Vec<Rational>>> {
    let m = f.u.rows();
    let n = f.v.rows();
    if y.len() != m {
        return Err(Error::DimensionMismatch(format!("rhs has length {}, expected {m}", y.len())));
    }
    let diag: Vec<BigInt> = f.diagonal().into_iter().map(BigInt::from).collect();
    let r = diag.len();
    let yp = f.u.mul_vec_big(&y.iter().map(big).collect::<Vec<_>>());
    let mut xp = vec![BigRational::zero(); n];
    match coeff {
        Coeff::Q => {
            if yp[r..].iter().any(|v| !v.is_zero()) {
                return Ok(None);
            }
            for i in 0..r {
                xp[i] = &yp[i] / &diag[i];
            }
        }
        Coeff::Z => {
            if y.iter().any(|v| !v.is_integer()) {
                return Err(Error::DimensionMismatch("integer system with rational right-hand side".into()));
            }
            if yp[r..].iter().any(|v| !v.is_zero()) {
                return Ok(None);
            }
            for i in 0..r {
                let q = &yp[i] / &diag[i];
                if !q.is_integer() {
                    return Ok(None);
                }
                xp[i] = q;
            }
        }
        Coeff::QModZ => {
            if yp[r..].iter().any(|v| !v.is_integer()) {
                return Ok(None);
            }
            for i in 0..r {
                xp[i] = &yp[i] / &diag[i];
            }
        }
        Coeff::ZMod(modulus) => {
            let nn = BigInt::from(modulus);
            if y.iter().any(|v| !v.is_integer()) {
                return Err(Error::DimensionMismatch("modular system with rational right-hand side".into()));
            }
            let ypm: Vec<BigInt> = yp.iter().map(|v| v.to_integer().mod_floor(&nn)).collect();
            if ypm[r..].iter().any(|v| !v.is_zero()) {
                return Ok(None);
            }
            let nn = modulus as i128;
            for i in 0..r {
                let d = diag[i].mod_floor(&BigInt::from(nn)).to_i128().expect("reduced");
                let b = ypm[i].to_i128().expect("reduced");
                match solve_congruence(d, b, nn) {
                    Some(x) => xp[i] = BigRational::from_integer(BigInt::from(x)),
                    None => return Ok(None),
                }
            }
        }
    }
    let mut x: Vec<BigRational> = f.v.mul_vec_big(&xp).iter().map(|v| reduce_big(coeff, v)).collect();
    if x.iter().any(|v| v.numer().bits() > SHORT_BITS || v.denom().bits() > SHORT_BITS)
        && matches!(coeff, Coeff::Z | Coeff::Q)
        && n - r <= SHORTEN_LIMIT
    {
        // shift by the kernel towards a short solution
        let vt = f.v.transpose();
        let kernel: Vec<Vec<BigInt>> = (r..n)
            .map(|j| {
                let mut col = vec![BigInt::zero(); n];
                for (i, v) in vt.row(j) {
                    col[*i] = v.clone();
                }
                col
            })
            .collect();
        x = nearest_plane(&x, &lll(&kernel), coeff == Coeff::Z);
    }
    Ok(Some(x.iter().map(small).collect::<Result<Vec<_>>>()?))
}

fn big(r: &Rational) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn small(r: &BigRational) -> Result<Rational> {
    match (r.numer().to_i128(), r.denom().to_i128()) {
        (Some(n), Some(d)) => Ok(Rational::new(n, d)),
        _ => Err(Error::Overflow),
    }
}

/// Canonical representative before narrowing, so that modular answers always fit.
fn reduce_big(coeff: Coeff, v: &BigRational) -> BigRational {
    match coeff {
        Coeff::Z | Coeff::Q => v.clone(),
        Coeff::QModZ => v - v.floor(),
        Coeff::ZMod(n) => {
            let n = BigInt::from(n);
            BigRational::from_integer(v.to_integer().mod_floor(&n))
        }
    }
}

/// Smallest nonnegative `x` with `a·x ≡ b (mod n)`, if any.
pub fn solve_congruence(a: i128, b: i128, n: i128) -> Option<i128> {
    let a = a.mod_floor(&n);
    let b = b.mod_floor(&n);
    let g = a.gcd(&n);
    if b % g != 0 {
        return None;
    }
    let (a1, b1, n1) = (a / g, b / g, n / g);
    if n1 == 1 {
        return Some(0);
    }
    let inv = a1.extended_gcd(&n1).x.mod_floor(&n1);
    Some((inv * b1).mod_floor(&n1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::homalg::{matrix::IntMatrix, snf::snf};

    #[test]
    fn congruences() {
        assert_eq!(solve_congruence(2, 4, 6), Some(2));
        assert_eq!(solve_congruence(2, 3, 6), None);
        assert_eq!(solve_congruence(3, 1, 7), Some(5));
    }

    #[test]
    fn domains_differ() {
        // 2x = 1
        let b = IntMatrix::from_dense(&[vec![2]]);
        let f = snf(&b).unwrap();
        assert!(solve(&f, Coeff::Z, &[int(1)]).unwrap().is_none());
        assert_eq!(solve(&f, Coeff::Q, &[int(1)]).unwrap(), Some(vec![rat(1, 2)]));
        assert!(solve(&f, Coeff::ZMod(2), &[int(1)]).unwrap().is_none());
        assert_eq!(solve(&f, Coeff::ZMod(3), &[int(1)]).unwrap(), Some(vec![int(2)]));
        assert_eq!(solve(&f, Coeff::QModZ, &[rat(1, 3)]).unwrap(), Some(vec![rat(1, 6)]));
    }

    #[test]
    fn inconsistent_rank_deficient() {
        // [1 1; 1 1] x = (1, 2)
        let b = IntMatrix::from_dense(&[vec![1, 1], vec![1, 1]]);
        let f = snf(&b).unwrap();
        assert!(solve(&f, Coeff::Q, &[int(1), int(2)]).unwrap().is_none());
        let x = solve(&f, Coeff::Z, &[int(3), int(3)]).unwrap().unwrap();
        assert_eq!(x[0] + x[1], int(3));
        // (1, 2) mod 1 is (0, 0): solvable over Q/Z
        assert!(solve(&f, Coeff::QModZ, &[int(1), int(2)]).unwrap().is_some());
    }
}
