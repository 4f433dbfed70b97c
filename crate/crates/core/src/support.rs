//! q-vectors with a fixed support `r = (r_1 < ... < r_k)`.
//!
//! Writing `q = (r_1^{x_1}, ..., r_k^{x_k})`, the necessary IDP condition
//! `1 + sum_{i != j} (q_i mod q_j) = q_j` becomes the linear system `R x = b`
//! with `b_j = r_j - 1` and
//!
//! ```text
//! R[j][i] = 0            if i == j
//!           r_i          if i <  j
//!           r_i mod r_j  if i >  j
//! ```
//!
//! [`solve_positive`] enumerates its positive integer solutions. The set is
//! finite whenever some `r_i` does not divide `r_k`: then row `k` plus row `i`
//! is a strictly positive vector `a` in the row space, and `a . x` is constant
//! on the solution set.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::qvector::{QVector, SupportDecomposition};

/// Default per-coordinate bound for unbounded families.
pub const DEFAULT_BOUND: u64 = 50;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportSystem {
    r: Vec<u32>,
    matrix: Vec<Vec<i64>>,
    rhs: Vec<i64>,
}

impl SupportSystem {
    pub fn r(&self) -> &[u32] {
        &self.r
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn rhs(&self) -> &[i64] {
        &self.rhs
    }

    pub fn k(&self) -> usize {
        self.r.len()
    }

    /// Exact check of `R x = rhs`.
    pub fn satisfies(&self, x: &[u64]) -> bool {
        x.len() == self.k()
            && self.matrix.iter().zip(&self.rhs).all(|(row, &b)| {
                row.iter()
                    .zip(x)
                    .map(|(&a, &xi)| a as i128 * xi as i128)
                    .sum::<i128>()
                    == b as i128
            })
    }

    /// `q = (r_1^{x_1}, ..., r_k^{x_k})`.
    pub fn expand(&self, x: &[u64]) -> Result<QVector> {
        let mults = x
            .iter()
            .map(|&v| u32::try_from(v).map_err(|_| Error::InvalidQVector(format!("multiplicity {v}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(SupportDecomposition::new(self.r.clone(), mults)?.expand())
    }

    /// A strictly positive vector in the row space of `R`, per the
    /// row-`k`-plus-row-`i` construction, if some `r_i` does not divide `r_k`.
    pub fn positive_row_certificate(&self) -> Option<Vec<i64>> {
        let k = self.k();
        let rk = *self.r.last()?;
        let i = self.r[..k - 1].iter().position(|&ri| rk % ri != 0)?;
        let a: Vec<i64> = (0..k)
            .map(|c| self.matrix[k - 1][c] + self.matrix[i][c])
            .collect();
        a.iter().all(|&v| v > 0).then_some(a)
    }
}

pub fn validate_r(r: &[i64]) -> Result<Vec<u32>> {
    if r.is_empty() {
        return Err(Error::InvalidRVector("empty".into()));
    }
    if r[0] < 1 || r.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidRVector(
            "entries must be strictly increasing positive integers".into(),
        ));
    }
    r.iter()
        .map(|&v| {
            u32::try_from(v).map_err(|_| Error::InvalidRVector(format!("entry {v} too large")))
        })
        .collect()
}

/// Builds the `k x k` system for the r-vector.
pub fn build_system(r: &[i64]) -> Result<SupportSystem> {
    let r = validate_r(r)?;
    let k = r.len();
    let matrix = (0..k)
        .map(|j| {
            (0..k)
                .map(|i| match i.cmp(&j) {
                    std::cmp::Ordering::Equal => 0,
                    std::cmp::Ordering::Less => r[i] as i64,
                    std::cmp::Ordering::Greater => (r[i] % r[j]) as i64,
                })
                .collect()
        })
        .collect();
    let rhs = r.iter().map(|&v| v as i64 - 1).collect();
    Ok(SupportSystem { r, matrix, rhs })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolutionSet {
    /// Every positive integer solution.
    Finite { solutions: Vec<Vec<u64>> },
    /// Solutions with all coordinates `<= bound`; the full set is not known
    /// to be finite.
    UnboundedFamily {
        base: Option<Vec<u64>>,
        kernel_basis: Vec<Vec<i64>>,
        bound: u64,
        solutions: Vec<Vec<u64>>,
    },
}

impl SolutionSet {
    pub fn solutions(&self) -> &[Vec<u64>] {
        match self {
            SolutionSet::Finite { solutions } => solutions,
            SolutionSet::UnboundedFamily { solutions, .. } => solutions,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, SolutionSet::Finite { .. })
    }
}

/// Enumerates positive integer solutions of `R x = rhs`.
///
/// When a positive row-space certificate exists (or the kernel is trivial)
/// the result is complete and `Finite`; otherwise solutions with every
/// `x_i <= bound` (default [`DEFAULT_BOUND`]) are returned as an
/// `UnboundedFamily`. Solutions are ordered by `sum x_i r_i`, then
/// lexicographically.
pub fn solve_positive(sys: &SupportSystem, bound: Option<u64>) -> Result<SolutionSet> {
    let rational = linalg::solve_rational(&sys.matrix, &sys.rhs).ok_or(Error::NoSolution)?;
    let k = sys.k();

    // Per-coordinate upper bounds.
    let certificate = sys.positive_row_certificate();
    let (limits, finite) = if rational.free.is_empty() {
        (vec![0u64; k], true)
    } else if let Some(a) = &certificate {
        // a = R^T y for some y, so a.x is the same for every solution; evaluate
        // it on the rational particular solution.
        let level: BigRational = a
            .iter()
            .zip(&rational.particular)
            .map(|(&ai, xi)| BigRational::from_integer(ai.into()) * xi)
            .fold(BigRational::zero(), |acc, v| acc + v);
        let level = level.floor().to_integer().to_i128().unwrap_or(i128::MAX);
        let a_sum: i128 = a.iter().map(|&v| v as i128).sum();
        let limits = a
            .iter()
            .map(|&ai| {
                let slack = level - a_sum + ai as i128;
                if slack < ai as i128 {
                    0
                } else {
                    (slack / ai as i128) as u64
                }
            })
            .collect();
        (limits, true)
    } else {
        (vec![bound.unwrap_or(DEFAULT_BOUND); k], false)
    };

    let mut solutions = Vec::new();
    let free = &rational.free;
    let mut free_vals = vec![1u64; free.len()];
    let within_limits = |x: &[u64]| finite || x.iter().zip(&limits).all(|(v, l)| v <= l);
    if free.is_empty() {
        if let Some(x) = integral_positive(&rational.particular) {
            solutions.push(x);
        }
    } else if free.iter().all(|&f| limits[f] >= 1) {
        'outer: loop {
            let mut x = rational.particular.clone();
            for (d, &v) in rational.directions.iter().zip(&free_vals) {
                let v = BigRational::from_integer(v.into());
                for (xi, di) in x.iter_mut().zip(d) {
                    *xi += di * &v;
                }
            }
            if let Some(x) = integral_positive(&x) {
                if within_limits(&x) {
                    solutions.push(x);
                }
            }
            for (slot, &f) in free_vals.iter_mut().zip(free).rev() {
                if *slot < limits[f] {
                    *slot += 1;
                    continue 'outer;
                }
                *slot = 1;
            }
            break;
        }
    }
    for x in &solutions {
        if !sys.satisfies(x) {
            return Err(Error::Inconsistency(format!("solution {x:?} fails R x = b")));
        }
    }
    sort_solutions(&sys.r, &mut solutions);

    if finite {
        Ok(SolutionSet::Finite { solutions })
    } else {
        Ok(SolutionSet::UnboundedFamily {
            base: solutions.first().cloned(),
            kernel_basis: linalg::integer_kernel_basis(&sys.matrix),
            bound: bound.unwrap_or(DEFAULT_BOUND),
            solutions,
        })
    }
}

fn integral_positive(x: &[BigRational]) -> Option<Vec<u64>> {
    x.iter()
        .map(|v| {
            if v.is_integer() && v.is_positive() {
                v.to_integer().to_u64()
            } else {
                None
            }
        })
        .collect()
}

fn weighted_total(r: &[u32], x: &[u64]) -> u128 {
    r.iter().zip(x).map(|(&a, &b)| a as u128 * b as u128).sum()
}

fn sort_solutions(r: &[u32], sols: &mut [Vec<u64>]) {
    sols.sort_by(|a, b| {
        weighted_total(r, a)
            .cmp(&weighted_total(r, b))
            .then_with(|| a.cmp(b))
    });
}

/// The first `count` reflexive q-vectors supported by `r`, ordered by
/// `sum x_i r_i` then lexicographically in `x`.
///
/// Reflexivity with support `r` means `lcm(r) | 1 + sum x_i r_i`, so only
/// totals `l * lcm(r) - 1` are scanned; each is split into positive
/// multiplicities by direct search.
pub fn reflexive_family(r: &[i64], count: usize) -> Result<Vec<QVector>> {
    let r = validate_r(r)?;
    let g = r.iter().fold(0u64, |g, &v| g.gcd(&(v as u64)));
    if g != 1 {
        return Err(Error::GcdNotOne(g));
    }
    let lcm = r.iter().fold(1u128, |l, &v| l.lcm(&(v as u128)));
    let min_total: u128 = r.iter().map(|&v| v as u128).sum();
    let mut out = Vec::with_capacity(count);
    let mut ell = (min_total + 1).div_ceil(lcm);
    while out.len() < count {
        let total = ell * lcm - 1;
        let mut x = vec![0u64; r.len()];
        compositions(&r, 0, total, &mut x, &mut |x| {
            if out.len() < count {
                let mults = x.iter().map(|&v| v as u32).collect();
                out.push(
                    SupportDecomposition::new(r.clone(), mults)
                        .expect("positive multiplicities")
                        .expand(),
                );
            }
        });
        ell += 1;
    }
    Ok(out)
}

/// Positive `x` with `sum x_i r_i = remaining`, in lexicographic order.
fn compositions(r: &[u32], i: usize, remaining: u128, x: &mut [u64], emit: &mut dyn FnMut(&[u64])) {
    if i == r.len() {
        if remaining == 0 {
            emit(x);
        }
        return;
    }
    let rest_min: u128 = r[i + 1..].iter().map(|&v| v as u128).sum();
    if remaining < rest_min + r[i] as u128 {
        return;
    }
    let max = (remaining - rest_min) / r[i] as u128;
    for v in 1..=max {
        x[i] = v as u64;
        compositions(r, i + 1, remaining - v * r[i] as u128, x, emit);
    }
}
