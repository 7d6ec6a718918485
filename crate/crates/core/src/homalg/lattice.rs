//! Short vectors in integer lattices: LLL reduction and nearest-plane rounding.

use num::{BigInt, BigRational, Zero};

type Vector = Vec<BigRational>;

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

/// Gram-Schmidt vectors and their squared norms.
fn orthogonalize(basis: &[Vector]) -> (Vec<Vector>, Vec<BigRational>) {
    let mut star: Vec<Vector> = Vec::with_capacity(basis.len());
    let mut norms = Vec::with_capacity(basis.len());
    for b in basis {
        let mut v = b.clone();
        for (s, n) in star.iter().zip(&norms) {
            let mu = dot(b, s) / n;
            for (vi, si) in v.iter_mut().zip(s) {
                *vi -= &mu * si;
            }
        }
        norms.push(dot(&v, &v));
        star.push(v);
    }
    (star, norms)
}

fn sub_scaled(target: &mut [BigRational], c: &BigRational, v: &[BigRational]) {
    for (t, x) in target.iter_mut().zip(v) {
        *t -= c * x;
    }
}

/// LLL-reduced basis (δ = 3/4) of the lattice spanned by independent integer vectors.
pub fn lll(basis: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut b: Vec<Vector> = basis.iter().map(|v| v.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let mut k = 1;
    while k < b.len() {
        for j in (0..k).rev() {
            let (star, norms) = orthogonalize(&b[..=j]);
            let mu = dot(&b[k], &star[j]) / &norms[j];
            let q = mu.round();
            if !q.is_zero() {
                let bj = b[j].clone();
                sub_scaled(&mut b[k], &q, &bj);
            }
        }
        let (star, norms) = orthogonalize(&b[..=k]);
        let mu = dot(&b[k], &star[k - 1]) / &norms[k - 1];
        if norms[k] >= (&delta - &mu * &mu) * &norms[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    b.into_iter().map(|v| v.into_iter().map(|x| x.to_integer()).collect()).collect()
}

/// Moves `x` along the span of `basis`: by integer steps when `integral`
/// (nearest-plane rounding), otherwise onto the orthogonal complement.
pub fn nearest_plane(x: &[BigRational], basis: &[Vec<BigInt>], integral: bool) -> Vector {
    let b: Vec<Vector> = basis.iter().map(|v| v.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let (star, norms) = orthogonalize(&b);
    let mut x = x.to_vec();
    for j in (0..b.len()).rev() {
        let mut c = dot(&x, &star[j]) / &norms[j];
        if integral {
            c = c.round();
        }
        if !c.is_zero() {
            sub_scaled(&mut x, &c, &b[j]);
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::{One, Signed};

    fn max_abs(v: &[BigRational]) -> BigRational {
        v.iter().map(|x| x.abs()).fold(BigRational::zero(), |a, b| if b > a { b } else { a })
    }

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn reduces_a_skewed_basis() {
        let b = ints(&[&[1, 0, 0], &[1000, 1, 0], &[1000001, 1000, 1]]);
        let r = lll(&b);
        assert!(r.iter().all(|v| v.iter().all(|x| x.abs() <= BigInt::one())));
    }

    #[test]
    fn projection_and_rounding() {
        let b = ints(&[&[1, 1]]);
        let x: Vector = vec![BigRational::from_integer(7.into()), BigRational::from_integer(2.into())];
        let half = BigRational::new(5.into(), 2.into());
        assert_eq!(nearest_plane(&x, &b, false), vec![half.clone(), -half]);
        let y = nearest_plane(&x, &b, true);
        assert_eq!(&y[0] - &y[1], BigRational::from_integer(5.into()));
        assert!(max_abs(&y) <= BigRational::from_integer(3.into()));
    }
}
