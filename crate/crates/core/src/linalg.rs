//! Small exact linear algebra: rational elimination and integer kernels.
//!
//! Matrices here are tiny (at most a few dozen rows), so everything is
//! dense and favors exactness over speed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub(crate) fn to_rational(m: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    m.iter()
        .map(|row| row.iter().map(|&v| BigRational::from_integer(v.into())).collect())
        .collect()
}

/// Inverse of a square integer matrix over the rationals, `None` if singular.
pub(crate) fn rational_inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a = to_rational(m);
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let t = &f * &a[col][j];
                a[r][j] = &a[r][j] - t;
                let t = &f * &inv[col][j];
                inv[r][j] = &inv[r][j] - t;
            }
        }
    }
    Some(inv)
}

/// Determinant of a square integer matrix by rational elimination.
pub(crate) fn determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    let mut a = to_rational(m);
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigInt::zero();
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for j in col..n {
                let t = &f * &a[col][j];
                a[r][j] = &a[r][j] - t;
            }
        }
    }
    debug_assert!(det.is_integer());
    det.to_integer()
}

/// Integer adjugate-style inverse: returns `(A, D)` with `D > 0` and
/// `m^{-1} = A / D`, where `D = |det m|`.
pub(crate) fn scaled_integer_inverse(m: &[Vec<i64>]) -> Option<(Vec<Vec<i128>>, i128)> {
    let inv = rational_inverse(m)?;
    let det = determinant(m).abs();
    let d = BigRational::from_integer(det.clone());
    let mut out = Vec::with_capacity(inv.len());
    for row in inv {
        let mut r = Vec::with_capacity(row.len());
        for v in row {
            let scaled = v * &d;
            debug_assert!(scaled.is_integer());
            r.push(scaled.to_integer().to_i128()?);
        }
        out.push(r);
    }
    Some((out, det.to_i128()?))
}

/// Affine solution set of `A x = b` over the rationals.
#[derive(Debug, Clone)]
pub(crate) struct RationalSolution {
    /// Particular solution with all free variables set to zero.
    pub particular: Vec<BigRational>,
    /// Indices of free variables.
    pub free: Vec<usize>,
    /// For each free variable `f`, the direction added to `x` per unit of `x_f`.
    pub directions: Vec<Vec<BigRational>>,
}

/// Solves `A x = b` by reduced row echelon form; `None` if inconsistent.
pub(crate) fn solve_rational(a: &[Vec<i64>], b: &[i64]) -> Option<RationalSolution> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m = to_rational(a);
    let mut rhs: Vec<BigRational> = b.iter().map(|&v| BigRational::from_integer(v.into())).collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        rhs.swap(row, p);
        let pv = m[row][col].clone();
        for j in 0..cols {
            m[row][j] = &m[row][j] / &pv;
        }
        rhs[row] = &rhs[row] / &pv;
        for r in 0..rows {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for j in 0..cols {
                let t = &f * &m[row][j];
                m[r][j] = &m[r][j] - t;
            }
            let t = &f * &rhs[row];
            rhs[r] = &rhs[r] - t;
        }
        pivots.push(col);
        row += 1;
    }
    if rhs[row..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut particular = vec![BigRational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = rhs[r].clone();
    }
    let directions = free
        .iter()
        .map(|&f| {
            let mut d = vec![BigRational::zero(); cols];
            d[f] = BigRational::one();
            for (r, &c) in pivots.iter().enumerate() {
                d[c] = -m[r][f].clone();
            }
            d
        })
        .collect();
    Some(RationalSolution {
        particular,
        free,
        directions,
    })
}

/// Z-basis of `{x in Z^k : A x = 0}`.
///
/// Reduces `[A^T | I]` with unimodular integer row operations; rows whose
/// `A^T` part vanishes carry a lattice basis of the kernel in their `I` part.
pub(crate) fn integer_kernel_basis(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let rows = a.len();
    let k = a.first().map_or(0, Vec::len);
    // work[i] = (column i of A) ++ (e_i)
    let mut work: Vec<Vec<i128>> = (0..k)
        .map(|i| {
            let mut v: Vec<i128> = (0..rows).map(|r| a[r][i] as i128).collect();
            v.extend((0..k).map(|j| i128::from(i == j)));
            v
        })
        .collect();
    let mut lead = 0;
    for col in 0..rows {
        if lead == k {
            break;
        }
        // Euclid on column `col` among rows lead..k.
        loop {
            let nonzero: Vec<usize> = (lead..k).filter(|&r| work[r][col] != 0).collect();
            if nonzero.len() <= 1 {
                if let Some(&r) = nonzero.first() {
                    work.swap(lead, r);
                    lead += 1;
                }
                break;
            }
            let min_row = *nonzero
                .iter()
                .min_by_key(|&&r| work[r][col].abs())
                .unwrap();
            for &r in &nonzero {
                if r == min_row {
                    continue;
                }
                let f = work[r][col] / work[min_row][col];
                for j in 0..work[r].len() {
                    work[r][j] -= f * work[min_row][j];
                }
            }
        }
    }
    work[lead..]
        .iter()
        .map(|v| v[rows..].iter().map(|&x| x as i64).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det() {
        let m = vec![vec![2, 1], vec![1, 1]];
        assert_eq!(determinant(&m), BigInt::from(1));
        let (a, d) = scaled_integer_inverse(&m).unwrap();
        assert_eq!(d, 1);
        assert_eq!(a, vec![vec![1, -1], vec![-1, 2]]);
        assert!(rational_inverse(&[vec![1, 2], vec![2, 4]]).is_none());
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
    }

    #[test]
    fn solve_with_free_variable() {
        // x1 = 1, x2 free
        let s = solve_rational(&[vec![0, 0], vec![1, 0]], &[0, 1]).unwrap();
        assert_eq!(s.free, vec![1]);
        assert_eq!(s.particular[0], BigRational::from_integer(1.into()));
        assert!(solve_rational(&[vec![0, 0]], &[1]).is_none());
    }

    #[test]
    fn kernel_basis_spans_kernel() {
        let a = vec![vec![2, 4, 6], vec![1, 2, 3]];
        let basis = integer_kernel_basis(&a);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            for row in &a {
                assert_eq!(row.iter().zip(v).map(|(x, y)| x * y).sum::<i64>(), 0);
            }
        }
        // Saturated: the 2x2 minors of the basis have gcd 1.
        let (u, w) = (&basis[0], &basis[1]);
        let minors = [
            u[0] * w[1] - u[1] * w[0],
            u[0] * w[2] - u[2] * w[0],
            u[1] * w[2] - u[2] * w[1],
        ];
        let g = minors
            .iter()
            .fold(0i64, |g, &m| num_integer::gcd(g, m));
        assert_eq!(g, 1);
        assert!(integer_kernel_basis(&[vec![1, 0], vec![0, 1]]).is_empty());
        assert_eq!(integer_kernel_basis(&[vec![0]]), vec![vec![1]]);
    }
}
