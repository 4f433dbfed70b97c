//! Exact lattice geometry of the simplex `conv{e_1, ..., e_n, -sum q_i e_i}`.
//!
//! Everything here is brute force by design of its callers: the routines are
//! used as oracles against the closed-form formulas, so they only rely on
//! barycentric coordinates and exhaustive scans.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::qvector::QVector;

/// Point of `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// Point of `Z^{1+n}` in the cone over the simplex; `height` is the zero-th coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConePoint {
    pub height: i64,
    pub point: LatticePoint,
}

/// Feasibility bounds for the brute-force oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCaps {
    pub max_dim: usize,
    pub max_sum: u64,
}

impl OracleCaps {
    /// Default caps for the Ehrhart oracles.
    pub const EHRHART: OracleCaps = OracleCaps {
        max_dim: 7,
        max_sum: 200,
    };
    /// Default caps for the sumset IDP oracle.
    pub const IDP: OracleCaps = OracleCaps {
        max_dim: 6,
        max_sum: 60,
    };

    pub fn check(&self, q: &QVector) -> Result<()> {
        if q.dim() > self.max_dim || q.sum() > self.max_sum {
            return Err(Error::OracleTooLarge(format!(
                "q = ({q}) has n = {} and sum {}, caps are n <= {} and sum <= {}",
                q.dim(),
                q.sum(),
                self.max_dim,
                self.max_sum
            )));
        }
        Ok(())
    }
}

impl std::str::FromStr for OracleCaps {
    type Err = Error;

    /// Parses `n:v`, e.g. `7:200`.
    fn from_str(s: &str) -> Result<Self> {
        let (n, v) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("oracle caps `{s}` must look like n:v")))?;
        let max_dim = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad dimension cap `{n}`")))?;
        let max_sum = v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad volume cap `{v}`")))?;
        Ok(OracleCaps { max_dim, max_sum })
    }
}

/// Vertices `v_1 = e_1, ..., v_n = e_n` and `v_0 = -q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexGeometry {
    q: QVector,
    apex: Vec<i64>,
    volume: i128,
}

impl SimplexGeometry {
    pub fn new(q: &QVector) -> Self {
        SimplexGeometry {
            apex: q.entries().iter().map(|&v| -(v as i64)).collect(),
            volume: q.normalized_volume() as i128,
            q: q.clone(),
        }
    }

    pub fn q(&self) -> &QVector {
        &self.q
    }

    pub fn dim(&self) -> usize {
        self.apex.len()
    }

    /// `v_0 = -q`.
    pub fn apex(&self) -> &[i64] {
        &self.apex
    }

    /// All `n + 1` vertices, `v_0` first.
    pub fn vertices(&self) -> Vec<LatticePoint> {
        let n = self.dim();
        let mut out = vec![LatticePoint(self.apex.clone())];
        out.extend((0..n).map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            LatticePoint(e)
        }));
        out
    }

    /// Normalized volume `1 + sum q_i`.
    pub fn total_weight(&self) -> u64 {
        self.volume as u64
    }

    /// Barycentric coordinates of `x` with respect to `t * simplex`, scaled by the
    /// normalized volume `V`: entry 0 is `V * lambda_0 = t - sum x`, entry `i` is
    /// `V * lambda_i = V x_i + q_i (t - sum x)`. They sum to `V t`.
    pub fn scaled_barycentric(&self, x: &[i64], t: i64) -> Vec<i128> {
        let u = t as i128 - x.iter().map(|&v| v as i128).sum::<i128>();
        let mut out = Vec::with_capacity(x.len() + 1);
        out.push(u);
        out.extend(
            x.iter()
                .zip(&self.apex)
                .map(|(&xi, &a)| self.volume * xi as i128 - a as i128 * u),
        );
        out
    }

    /// Exact test `x in t * simplex`.
    pub fn contains_dilate(&self, x: &[i64], t: i64) -> bool {
        x.len() == self.dim() && self.scaled_barycentric(x, t).iter().all(|&l| l >= 0)
    }

    /// Lattice points of `t * simplex`, in deterministic order.
    ///
    /// Scans the box `[-t q_i, t]` slab by slab on `s = sum x`: inside a slab,
    /// `lambda_0` is fixed and each coordinate gets an interval, and a pruned
    /// depth-first walk visits only completable prefixes. Each produced point
    /// is re-checked with [`SimplexGeometry::contains_dilate`].
    pub fn dilate_points(&self, t: i64) -> Vec<LatticePoint> {
        self.slabs(t)
            .into_par_iter()
            .map(|u| {
                let mut pts = Vec::new();
                self.walk_slab(t, u, &mut |x| pts.push(LatticePoint(x.to_vec())));
                pts
            })
            .flatten()
            .collect()
    }

    /// `#(t * simplex ∩ Z^n)`.
    pub fn count_dilate(&self, t: i64) -> u64 {
        self.slabs(t)
            .into_par_iter()
            .map(|u| {
                let mut c = 0u64;
                self.walk_slab(t, u, &mut |_| c += 1);
                c
            })
            .sum()
    }

    /// Slab index `u = t - sum x = V lambda_0`, ranging over `0..=V t`.
    fn slabs(&self, t: i64) -> Vec<i128> {
        if t < 0 {
            return Vec::new();
        }
        (0..=self.volume * t as i128).collect()
    }

    fn walk_slab(&self, t: i64, u: i128, emit: &mut dyn FnMut(&[i64])) {
        let n = self.dim();
        let v = self.volume;
        let target = t as i128 - u;
        // lambda_i >= 0  <=>  V x_i >= -q_i u ;  lambda_i <= t  <=>  V x_i <= V t - q_i u
        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        for &a in &self.apex {
            let qi = -(a as i128);
            let l = div_ceil(-qi * u, v).max(-(t as i128) * qi);
            let h = (v * t as i128 - qi * u).div_euclid(v).min(t as i128);
            if l > h {
                return;
            }
            lo.push(l);
            hi.push(h);
        }
        let mut lo_suffix = vec![0i128; n + 1];
        let mut hi_suffix = vec![0i128; n + 1];
        for i in (0..n).rev() {
            lo_suffix[i] = lo_suffix[i + 1] + lo[i];
            hi_suffix[i] = hi_suffix[i + 1] + hi[i];
        }
        if target < lo_suffix[0] || target > hi_suffix[0] {
            return;
        }
        let mut x = vec![0i64; n];
        self.walk(0, target, &lo, &hi, &lo_suffix, &hi_suffix, &mut x, t, emit);
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        i: usize,
        remaining: i128,
        lo: &[i128],
        hi: &[i128],
        lo_suffix: &[i128],
        hi_suffix: &[i128],
        x: &mut [i64],
        t: i64,
        emit: &mut dyn FnMut(&[i64]),
    ) {
        let n = x.len();
        if i == n {
            if remaining == 0 && self.contains_dilate(x, t) {
                emit(x);
            }
            return;
        }
        let from = lo[i].max(remaining - hi_suffix[i + 1]);
        let to = hi[i].min(remaining - lo_suffix[i + 1]);
        for val in from..=to {
            x[i] = val as i64;
            self.walk(i + 1, remaining - val, lo, hi, lo_suffix, hi_suffix, x, t, emit);
        }
    }

    /// Columns `(1, v_0), (1, v_1), ..., (1, v_n)` as a square integer matrix.
    pub fn cone_generator_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.dim();
        let mut m = vec![vec![0i64; n + 1]; n + 1];
        m[0].iter_mut().for_each(|v| *v = 1);
        for i in 0..n {
            m[i + 1][0] = self.apex[i];
            m[i + 1][i + 1] = 1;
        }
        m
    }

    /// Lattice points of the half-open fundamental parallelepiped
    /// `{sum lambda_i (1, v_i) : 0 <= lambda_i < 1}`.
    ///
    /// Scans the integer bounding box of the parallelepiped and tests
    /// membership exactly through the integer adjugate of the generator
    /// matrix (`0 <= adj w < |det|` row-wise). Sub-boxes where some row
    /// cannot reach `[0, |det|)` are skipped. Sorted by height, then
    /// coordinates.
    pub fn parallelepiped_points(&self) -> Vec<ConePoint> {
        let m = self.cone_generator_matrix();
        let (adj, det) =
            linalg::scaled_integer_inverse(&m).expect("cone generators are linearly independent");
        // Each coordinate lies between the sums of negative and positive
        // generator entries in its row.
        let ranges: Vec<(i64, i64)> = m
            .iter()
            .map(|row| {
                let lo: i64 = row.iter().filter(|&&v| v < 0).sum();
                let hi: i64 = row.iter().filter(|&&v| v > 0).sum();
                (lo, hi)
            })
            .collect();
        let scan = BoxScan::new(adj, det, ranges);
        let (h_lo, h_hi) = scan.ranges[0];
        let mut pts: Vec<ConePoint> = (h_lo..=h_hi)
            .into_par_iter()
            .flat_map_iter(|height| {
                let mut found = Vec::new();
                let mut w = vec![0i64; scan.ranges.len()];
                let partial = vec![0i128; scan.adj.len()];
                scan.descend(0, height, &mut w, partial, &mut found);
                found
            })
            .collect();
        pts.sort();
        pts
    }
}

/// Branch-and-bound over the box, one coordinate per level.
struct BoxScan {
    adj: Vec<Vec<i128>>,
    det: i128,
    ranges: Vec<(i64, i64)>,
    /// `reach[k][r]`: min and max of `sum_{c >= k} adj[r][c] w_c` over the box.
    reach: Vec<Vec<(i128, i128)>>,
}

impl BoxScan {
    fn new(adj: Vec<Vec<i128>>, det: i128, ranges: Vec<(i64, i64)>) -> Self {
        let dim = ranges.len();
        let mut reach = vec![vec![(0i128, 0i128); adj.len()]; dim + 1];
        for k in (0..dim).rev() {
            for (r, row) in adj.iter().enumerate() {
                let a = row[k] * ranges[k].0 as i128;
                let b = row[k] * ranges[k].1 as i128;
                let (lo, hi) = reach[k + 1][r];
                reach[k][r] = (lo + a.min(b), hi + a.max(b));
            }
        }
        BoxScan {
            adj,
            det,
            ranges,
            reach,
        }
    }

    fn descend(&self, k: usize, value: i64, w: &mut [i64], mut partial: Vec<i128>, out: &mut Vec<ConePoint>) {
        w[k] = value;
        for (p, row) in partial.iter_mut().zip(&self.adj) {
            *p += row[k] * value as i128;
        }
        let feasible = partial.iter().zip(&self.reach[k + 1]).all(|(&p, &(lo, hi))| {
            p + hi >= 0 && p + lo < self.det
        });
        if !feasible {
            return;
        }
        if k + 1 == w.len() {
            debug_assert!(in_half_open(&self.adj, self.det, w));
            out.push(ConePoint {
                height: w[0],
                point: LatticePoint(w[1..].to_vec()),
            });
            return;
        }
        let (lo, hi) = self.ranges[k + 1];
        for v in lo..=hi {
            self.descend(k + 1, v, w, partial.clone(), out);
        }
    }
}

fn in_half_open(adj: &[Vec<i128>], det: i128, w: &[i64]) -> bool {
    adj.iter().all(|row| {
        let num: i128 = row.iter().zip(w).map(|(&a, &b)| a * b as i128).sum();
        (0..det).contains(&num)
    })
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -((-a).div_euclid(b))
}
