//! Affine free sums `Δ_(1,p) *_0 Δ_(1,q) = Δ_(1,y)` with
//! `y = (p, s q)` and `s = 1 + sum p`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qvector::{is_reflexive, QVector};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeSumSplit {
    pub p: QVector,
    pub q: QVector,
    pub scale: u64,
    pub y: QVector,
}

/// Builds `y = sorted(p ++ s q)` for reflexive `p` and `q`.
pub fn compose(p: &QVector, q: &QVector) -> Result<FreeSumSplit> {
    for v in [p, q] {
        if !is_reflexive(v) {
            return Err(Error::NotReflexive(v.to_string()));
        }
    }
    let scale = p.normalized_volume();
    let mut entries: Vec<u32> = p.entries().to_vec();
    for &v in q.entries() {
        let scaled = v as u64 * scale;
        let scaled = u32::try_from(scaled)
            .map_err(|_| Error::InvalidQVector(format!("scaled entry {scaled} exceeds the word-size bound")))?;
        entries.push(scaled);
    }
    let y = QVector::new(entries)?;
    Ok(FreeSumSplit {
        p: p.clone(),
        q: q.clone(),
        scale,
        y,
    })
}

/// All ways to write reflexive `y` as `compose(p, q)`, by ascending scale.
///
/// Every entry of `p` is below `s = 1 + sum p` while every entry of `s q` is
/// at least `s`, so `p` is a prefix of the sorted `y` cut between two
/// distinct values. Each cut is tested for divisibility and reflexivity of
/// both parts.
pub fn decompose(y: &QVector) -> Result<Vec<FreeSumSplit>> {
    if !is_reflexive(y) {
        return Err(Error::NotReflexive(y.to_string()));
    }
    let e = y.entries();
    let mut out = Vec::new();
    let mut prefix_sum = 0u64;
    for cut in 1..e.len() {
        prefix_sum += e[cut - 1] as u64;
        if e[cut - 1] == e[cut] {
            continue;
        }
        let s = prefix_sum + 1;
        if e[cut..].iter().any(|&v| !(v as u64).is_multiple_of(s)) {
            continue;
        }
        let p = QVector::new(e[..cut].to_vec())?;
        let q = QVector::new(e[cut..].iter().map(|&v| (v as u64 / s) as u32).collect::<Vec<_>>())?;
        if is_reflexive(&p) && is_reflexive(&q) {
            out.push(FreeSumSplit {
                p,
                q,
                scale: s,
                y: y.clone(),
            });
        }
    }
    Ok(out)
}

/// The split `(r_1^{x_1}, ..., r_{k-1}^{x_{k-1}}) *_0 (1^{x_k})` that exists
/// when every part divides the largest one and `r_k = 1 + sum_{i<k} x_i r_i`.
pub fn decomposes_by_divisible_support(q: &QVector) -> Option<FreeSumSplit> {
    let support = q.support();
    let k = support.len();
    if k < 2 {
        return None;
    }
    let parts = support.parts();
    let mults = support.multiplicities();
    let rk = parts[k - 1] as u64;
    if parts[..k - 1].iter().any(|&r| !rk.is_multiple_of(r as u64)) {
        return None;
    }
    let lower: u64 = parts[..k - 1]
        .iter()
        .zip(&mults[..k - 1])
        .map(|(&r, &x)| r as u64 * x as u64)
        .sum();
    if rk != 1 + lower {
        return None;
    }
    let split = q.entries().len() - mults[k - 1] as usize;
    let p = QVector::new(q.entries()[..split].to_vec()).ok()?;
    let ones = QVector::new(vec![1u32; mults[k - 1] as usize]).ok()?;
    Some(FreeSumSplit {
        p,
        q: ones,
        scale: rk,
        y: q.clone(),
    })
}
