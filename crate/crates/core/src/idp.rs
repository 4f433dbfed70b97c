//! Integer decomposition property for reflexive `Δ_(1,q)`.
//!
//! [`idp_check`] is the facet-by-facet arithmetic criterion: for each facet
//! `j` (vertex `e_j` dropped), the parallelepiped points of the facet are
//! indexed by `b = 1..q_j-1` with height
//!
//! ```text
//! height_j(b) = b (1 + sum_{i!=j} q_i) / q_j - sum_{i!=j} floor(b q_i / q_j)
//! ```
//!
//! and every point of height >= 2 must split off a height-1 point `c < b`
//! with `floor(b q_i/q_j) - floor(c q_i/q_j) = floor((b-c) q_i/q_j)` for all
//! `i != j`. [`IdpOracle`] decides the same property from the definition by
//! building sumsets of lattice points.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{LatticePoint, OracleCaps, SimplexGeometry};
use crate::qvector::{is_reflexive, QVector};

/// A facet point of height >= 2, with the splitting `c` if one exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetWitness {
    /// 1-based index of the dropped coordinate.
    pub facet_j: usize,
    pub b: u64,
    pub height: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub found_c: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdpVerdict {
    pub is_idp: bool,
    /// First failing `(j, b)` in `(j, b)` order, present iff `!is_idp`.
    pub witness: Option<FacetWitness>,
}

/// Arithmetic data for the facet opposite `e_j`.
struct Facet {
    facet_j: usize,
    qj: u64,
    /// `1 + sum_{i != j} q_i`
    co_weight: u64,
    /// other entries as (value, count), values equal to `qj` excluded
    others: Vec<(u64, u64)>,
}

impl Facet {
    fn floors(&self, b: u64) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.others
            .iter()
            .map(move |&(v, cnt)| (cnt, ((b as u128 * v as u128) / self.qj as u128) as u64))
    }

    fn height(&self, b: u64) -> Result<u64> {
        let num = b as u128 * self.co_weight as u128;
        if !num.is_multiple_of(self.qj as u128) {
            return Err(Error::Inconsistency(format!(
                "non-integral facet height: b = {b}, q_j = {}",
                self.qj
            )));
        }
        // entries equal to q_j contribute floor(b) = b each
        let same = (self.co_weight - 1 - self.others.iter().map(|&(v, c)| v * c).sum::<u64>())
            / self.qj;
        let floor_sum: u128 = self
            .floors(b)
            .map(|(cnt, f)| cnt as u128 * f as u128)
            .sum::<u128>()
            + same as u128 * b as u128;
        let h = num / self.qj as u128;
        if floor_sum > h {
            return Err(Error::Inconsistency(format!(
                "negative facet height: b = {b}, q_j = {}",
                self.qj
            )));
        }
        Ok((h - floor_sum) as u64)
    }

    fn splits(&self, b: u64, c: u64) -> bool {
        let qj = self.qj as u128;
        self.others.iter().all(|&(v, _)| {
            let v = v as u128;
            (b as u128 * v) / qj - (c as u128 * v) / qj == ((b - c) as u128 * v) / qj
        })
    }

    /// Every `(b, height, c)` with height >= 2; stops at the first `b`
    /// without a `c` when `stop_at_failure`.
    fn scan(&self, stop_at_failure: bool) -> Result<Vec<FacetWitness>> {
        let heights: Vec<u64> = (0..self.qj).map(|b| self.height(b)).collect::<Result<_>>()?;
        let units: Vec<u64> = (1..self.qj).filter(|&c| heights[c as usize] == 1).collect();
        let mut out = Vec::new();
        for b in 1..self.qj {
            let height = heights[b as usize];
            if height < 2 {
                continue;
            }
            let found_c = units
                .iter()
                .copied()
                .take_while(|&c| c < b)
                .find(|&c| self.splits(b, c));
            out.push(FacetWitness {
                facet_j: self.facet_j,
                b,
                height,
                found_c,
            });
            if stop_at_failure && found_c.is_none() {
                break;
            }
        }
        Ok(out)
    }
}

/// One facet per distinct entry > 1, labelled by its smallest index.
fn facets(q: &QVector) -> Vec<Facet> {
    let support = q.support();
    let total = q.sum();
    let mut out = Vec::new();
    let mut index = 1;
    for (&r, &x) in support.parts().iter().zip(support.multiplicities()) {
        let qj = r as u64;
        if qj > 1 {
            let others = support
                .parts()
                .iter()
                .zip(support.multiplicities())
                .filter(|(&v, _)| v != r)
                .map(|(&v, &c)| (v as u64, c as u64))
                .collect();
            out.push(Facet {
                facet_j: index,
                qj,
                co_weight: 1 + total - qj,
                others,
            });
        }
        index += x as usize;
    }
    out
}

/// Decides IDP for a reflexive `Δ_(1,q)`; the witness is the first failing
/// `(j, b)` in lexicographic order.
pub fn idp_check(q: &QVector) -> Result<IdpVerdict> {
    if !is_reflexive(q) {
        return Err(Error::NotReflexive(q.to_string()));
    }
    for facet in facets(q) {
        let scanned = facet.scan(true)?;
        if let Some(w) = scanned.into_iter().find(|w| w.found_c.is_none()) {
            return Ok(IdpVerdict {
                is_idp: false,
                witness: Some(w),
            });
        }
    }
    Ok(IdpVerdict {
        is_idp: true,
        witness: None,
    })
}

/// All facet points of height >= 2 with the smallest splitting `c` (if any),
/// over every distinct facet. Raw certificate data for the criterion.
pub fn facet_certificates(q: &QVector) -> Result<Vec<FacetWitness>> {
    if !is_reflexive(q) {
        return Err(Error::NotReflexive(q.to_string()));
    }
    let mut out = Vec::new();
    for facet in facets(q) {
        out.extend(facet.scan(false)?);
    }
    Ok(out)
}

/// `1 + sum_{i != j} (q_i mod q_j) == q_j` for every `j`.
///
/// Necessary for IDP of a reflexive `Δ_(1,q)`, and implies reflexivity.
pub fn necessary_condition(q: &QVector) -> bool {
    let support = q.support();
    let pairs: Vec<(u64, u64)> = support
        .parts()
        .iter()
        .zip(support.multiplicities())
        .map(|(&r, &x)| (r as u64, x as u64))
        .collect();
    pairs.iter().all(|&(qj, _)| {
        let residues: u64 = pairs
            .iter()
            .filter(|&&(v, _)| v != qj)
            .map(|&(v, cnt)| cnt * (v % qj))
            .sum();
        1 + residues == qj
    })
}

/// Outcome of the sumset oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdpOracleOutcome {
    pub is_idp: bool,
    /// First `(m, w)` with `w in mΔ` not a sum of `m` lattice points of `Δ`.
    pub witness: Option<(u32, LatticePoint)>,
}

/// Brute-force IDP decision straight from the definition.
///
/// For `m = 2..=n`, every lattice point of `mΔ` must lie in the `m`-fold
/// sumset of `Δ ∩ Z^n`, built level by level in hash sets.
pub struct IdpOracle {
    geometry: SimplexGeometry,
    points: Vec<LatticePoint>,
}

impl IdpOracle {
    pub fn new(q: &QVector, caps: OracleCaps) -> Result<Self> {
        caps.check(q)?;
        let geometry = SimplexGeometry::new(q);
        let points = geometry.dilate_points(1);
        Ok(IdpOracle { geometry, points })
    }

    pub fn lattice_points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn geometry(&self) -> &SimplexGeometry {
        &self.geometry
    }

    fn next_level(&self, level: &HashSet<Vec<i64>>) -> HashSet<Vec<i64>> {
        let mut out = HashSet::with_capacity(level.len() * 2);
        for a in level {
            for p in &self.points {
                out.insert(a.iter().zip(&p.0).map(|(x, y)| x + y).collect());
            }
        }
        out
    }

    /// The `m`-fold sumset of `Δ ∩ Z^n` (`m >= 1`).
    pub fn sumset(&self, m: u32) -> HashSet<Vec<i64>> {
        let mut level: HashSet<Vec<i64>> = self.points.iter().map(|p| p.0.clone()).collect();
        for _ in 1..m.max(1) {
            level = self.next_level(&level);
        }
        level
    }

    /// Is `w` a sum of exactly `m` lattice points of `Δ`?
    pub fn is_m_fold_sum(&self, w: &[i64], m: u32) -> bool {
        self.sumset(m).contains(w)
    }

    pub fn run(&self) -> IdpOracleOutcome {
        let n = self.geometry.dim() as u32;
        let mut level: HashSet<Vec<i64>> = self.points.iter().map(|p| p.0.clone()).collect();
        for m in 2..=n {
            level = self.next_level(&level);
            for w in self.geometry.dilate_points(m as i64) {
                if !level.contains(&w.0) {
                    return IdpOracleOutcome {
                        is_idp: false,
                        witness: Some((m, w)),
                    };
                }
            }
        }
        IdpOracleOutcome {
            is_idp: true,
            witness: None,
        }
    }
}

/// Convenience wrapper around [`IdpOracle::run`].
pub fn idp_oracle_bruteforce(q: &QVector, caps: OracleCaps) -> Result<IdpOracleOutcome> {
    Ok(IdpOracle::new(q, caps)?.run())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qvector::make_qvector;

    fn q(v: &[i64]) -> QVector {
        make_qvector(v).unwrap()
    }

    #[test]
    fn idp_examples() {
        assert!(idp_check(&q(&[1, 1, 1])).unwrap().is_idp);
        assert!(idp_check(&q(&[2, 3])).unwrap().is_idp);
        assert!(idp_check(&q(&[1, 1, 3])).unwrap().is_idp);
        let v = idp_check(&q(&[2, 2, 15, 20, 20])).unwrap();
        assert!(!v.is_idp);
        let w = v.witness.unwrap();
        assert!(w.found_c.is_none());
        assert!(w.height >= 2 && w.b >= 1);
        assert!(matches!(idp_check(&q(&[2, 2])), Err(Error::NotReflexive(_))));
    }

    #[test]
    fn payne_simplex_fails_at_first_b_with_height_two() {
        // (1^5, 3): facet j = 6 (q_j = 3); heights are 2 at b = 1 and 4 at b = 2,
        // so b = 1 already has no c < b.
        let v = idp_check(&q(&[1, 1, 1, 1, 1, 3])).unwrap();
        assert!(!v.is_idp);
        let w = v.witness.unwrap();
        assert_eq!((w.facet_j, w.b, w.height, w.found_c), (6, 1, 2, None));
    }

    #[test]
    fn necessary_examples() {
        assert!(necessary_condition(&q(&[2, 2, 15, 20, 20])));
        assert!(!necessary_condition(&q(&[1, 1, 1, 1, 1, 3])));
        assert!(necessary_condition(&q(&[2, 3])));
        assert!(necessary_condition(&q(&[1])));
        assert!(necessary_condition(&q(&[3, 20, 24, 24, 24, 24])));
    }

    #[test]
    fn certificates_use_c_equal_one_on_idp_instances() {
        let v = q(&[1, 1, 3]);
        let certs = facet_certificates(&v).unwrap();
        assert_eq!(
            certs,
            vec![FacetWitness {
                facet_j: 3,
                b: 2,
                height: 2,
                found_c: Some(1)
            }]
        );
    }

    #[test]
    fn oracle_examples() {
        let caps = OracleCaps::IDP;
        assert!(idp_oracle_bruteforce(&q(&[1, 1, 1]), caps).unwrap().is_idp);
        assert!(idp_oracle_bruteforce(&q(&[2, 3]), caps).unwrap().is_idp);
        assert!(!idp_oracle_bruteforce(&q(&[1, 1, 1, 1, 1, 3]), caps).unwrap().is_idp);
        assert!(idp_oracle_bruteforce(&q(&[1]), caps).unwrap().is_idp);
        assert!(matches!(
            idp_oracle_bruteforce(&q(&[1; 7]), caps),
            Err(Error::OracleTooLarge(_))
        ));
    }

    #[test]
    fn oracle_rejects_necessary_not_idp_witness() {
        let o = IdpOracle::new(&q(&[2, 2, 15, 20, 20]), OracleCaps::IDP).unwrap();
        assert_eq!(o.lattice_points().len(), 15);
        let w = [-1, -1, -8, -10, -10];
        assert!(o.geometry().contains_dilate(&w, 2));
        assert!(!o.is_m_fold_sum(&w, 2));
        let out = o.run();
        assert!(!out.is_idp);
        assert_eq!(out.witness.as_ref().unwrap().0, 2);
    }
}
