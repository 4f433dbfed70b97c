//! h*-polynomials of the simplices `Δ_(1,q)`.
//!
//! Three independent routes are provided:
//!
//! * [`hstar_closed_form`]: the height histogram `#{b : w(b) = h}` with
//!   `w(b) = b - sum_i floor(q_i b / (1 + sum q))`, `b = 0..=sum q`.
//! * [`hstar_oracle_interpolation`]: counts lattice points of the dilates
//!   `tΔ`, `t = 0..=n`, and recovers h* from the Ehrhart series numerator.
//! * [`hstar_oracle_parallelepiped`]: histogram of heights of lattice points
//!   in the fundamental parallelepiped, found by a bounding-box scan.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{OracleCaps, SimplexGeometry};
use crate::hstar::HStarPolynomial;
use crate::qvector::{is_reflexive, QVector};

/// `w(b) = b - sum_i floor(q_i b / V)` for a fixed q, `V = 1 + sum q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightFunction {
    volume: u64,
    // (part, multiplicity) pairs of the support
    parts: Vec<(u64, u64)>,
}

impl WeightFunction {
    pub fn new(q: &QVector) -> Self {
        let s = q.support();
        WeightFunction {
            volume: q.normalized_volume(),
            parts: s
                .parts()
                .iter()
                .zip(s.multiplicities())
                .map(|(&r, &x)| (r as u64, x as u64))
                .collect(),
        }
    }

    /// Largest admissible argument, `sum q`.
    pub fn max_b(&self) -> u64 {
        self.volume - 1
    }

    pub fn eval(&self, b: u64) -> u64 {
        let v = self.volume as u128;
        let floors: u128 = self
            .parts
            .iter()
            .map(|&(r, x)| x as u128 * ((r as u128 * b as u128) / v))
            .sum();
        (b as u128 - floors) as u64
    }
}

/// Height histogram of `w(b)` over `b = 0..=sum q`, padded to length `n + 1`.
///
/// The fundamental-parallelepiped argument behind this formula does not use
/// reflexivity, so it is valid for every q; [`hstar_closed_form`] is the
/// reflexivity-gated entry point.
pub fn hstar_weight_formula(q: &QVector) -> HStarPolynomial {
    let w = WeightFunction::new(q);
    let n = q.dim();
    let mut coeffs = vec![0u64; n + 1];
    for b in 0..=w.max_b() {
        let h = w.eval(b) as usize;
        if h >= coeffs.len() {
            coeffs.resize(h + 1, 0);
        }
        coeffs[h] += 1;
    }
    HStarPolynomial::new(coeffs)
}

/// h* of a reflexive `Δ_(1,q)` from the weight histogram.
pub fn hstar_closed_form(q: &QVector) -> Result<HStarPolynomial> {
    if !is_reflexive(q) {
        return Err(Error::NotReflexive(q.to_string()));
    }
    Ok(hstar_weight_formula(q))
}

/// Ehrhart counts `i(Δ; t)` for `t = 0..=n`.
pub fn ehrhart_counts(q: &QVector, caps: OracleCaps) -> Result<Vec<u64>> {
    caps.check(q)?;
    let g = SimplexGeometry::new(q);
    Ok((0..=q.dim() as i64).map(|t| g.count_dilate(t)).collect())
}

/// h* recovered from dilate counts: `h*_j = sum_{i<=j} (-1)^i C(n+1, i) i(Δ; j-i)`.
pub fn hstar_oracle_interpolation(q: &QVector, caps: OracleCaps) -> Result<HStarPolynomial> {
    let counts = ehrhart_counts(q, caps)?;
    let n = q.dim();
    let binom = binomials(n + 1);
    let mut coeffs = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let mut acc: i128 = 0;
        for i in 0..=j {
            let term = binom[i] as i128 * counts[j - i] as i128;
            if i % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        if acc < 0 {
            return Err(Error::Inconsistency(format!(
                "negative h*_{j} = {acc} recovered for q = ({q})"
            )));
        }
        coeffs.push(acc as u64);
    }
    Ok(HStarPolynomial::new(coeffs))
}

/// Height histogram of the fundamental parallelepiped's lattice points.
pub fn hstar_oracle_parallelepiped(q: &QVector, caps: OracleCaps) -> Result<HStarPolynomial> {
    caps.check(q)?;
    let g = SimplexGeometry::new(q);
    let mut coeffs = vec![0u64; q.dim() + 1];
    for p in g.parallelepiped_points() {
        let h = usize::try_from(p.height)
            .map_err(|_| Error::Inconsistency(format!("negative height {}", p.height)))?;
        if h >= coeffs.len() {
            coeffs.resize(h + 1, 0);
        }
        coeffs[h] += 1;
    }
    Ok(HStarPolynomial::new(coeffs))
}

fn binomials(n: usize) -> Vec<u128> {
    let mut row = vec![1u128];
    for k in 1..=n {
        let prev = row[k - 1];
        row.push(prev * (n - k + 1) as u128 / k as u128);
    }
    row
}

fn check_payne(s: u64, k: u64, r: u64) -> Result<()> {
    if s < 3 || k < r + 2 {
        return Err(Error::PayneConstraint { s, k, r });
    }
    Ok(())
}

/// Payne's vector `(1^{sk-1}, s^{r+1})`.
pub fn payne_qvector(s: u64, k: u64, r: u64) -> Result<QVector> {
    check_payne(s, k, r)?;
    if s > crate::qvector::MAX_ENTRY {
        return Err(Error::InvalidQVector(format!("entry {s} too large")));
    }
    let mut entries = vec![1u32; (s * k - 1) as usize];
    entries.extend(std::iter::repeat_n(s as u32, (r + 1) as usize));
    QVector::new(entries)
}

/// `(1 + z^k + ... + z^{(s-1)k}) (1 + z + ... + z^{k+r})`, expanded.
pub fn payne_hstar_product(s: u64, k: u64, r: u64) -> Result<HStarPolynomial> {
    check_payne(s, k, r)?;
    let mut spaced = vec![0u64; ((s - 1) * k + 1) as usize];
    for i in 0..s {
        spaced[(i * k) as usize] = 1;
    }
    let ones = vec![1u64; (k + r + 1) as usize];
    Ok(HStarPolynomial::new(spaced).mul(&HStarPolynomial::new(ones)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qvector::make_qvector;

    fn q(v: &[i64]) -> QVector {
        make_qvector(v).unwrap()
    }

    fn h(v: &[u64]) -> HStarPolynomial {
        HStarPolynomial::new(v.to_vec())
    }

    #[test]
    fn weight_function_values() {
        let w = WeightFunction::new(&q(&[2, 3]));
        let ws: Vec<u64> = (0..=5).map(|b| w.eval(b)).collect();
        assert_eq!(ws, vec![0, 1, 1, 1, 1, 2]);
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(hstar_closed_form(&q(&[1, 1, 1])).unwrap(), h(&[1, 1, 1, 1]));
        assert_eq!(
            hstar_closed_form(&q(&[3, 20, 24, 24, 24, 24])).unwrap(),
            h(&[1, 16, 29, 28, 29, 16, 1])
        );
        assert_eq!(
            hstar_closed_form(&q(&[1, 1, 1, 1, 1, 3, 9, 9, 9, 9, 9, 27])).unwrap(),
            h(&[1, 2, 5, 6, 10, 10, 13, 10, 10, 6, 5, 2, 1])
        );
        assert!(matches!(
            hstar_closed_form(&q(&[2, 2])),
            Err(Error::NotReflexive(_))
        ));
    }

    #[test]
    fn interpolation_examples() {
        let caps = OracleCaps::EHRHART;
        assert_eq!(ehrhart_counts(&q(&[1, 1, 1]), caps).unwrap(), vec![1, 5, 15, 35]);
        assert_eq!(hstar_oracle_interpolation(&q(&[1, 1, 1]), caps).unwrap(), h(&[1, 1, 1, 1]));
        assert_eq!(hstar_oracle_interpolation(&q(&[2, 3]), caps).unwrap(), h(&[1, 4, 1]));
        assert_eq!(hstar_oracle_interpolation(&q(&[1, 1]), caps).unwrap(), h(&[1, 1, 1]));
        assert!(matches!(
            hstar_oracle_interpolation(&q(&[1; 8]), caps),
            Err(Error::OracleTooLarge(_))
        ));
    }

    #[test]
    fn parallelepiped_examples() {
        let caps = OracleCaps::EHRHART;
        assert_eq!(hstar_oracle_parallelepiped(&q(&[1, 1, 1]), caps).unwrap(), h(&[1, 1, 1, 1]));
        assert_eq!(
            hstar_oracle_parallelepiped(&q(&[1, 1, 1, 1, 1, 3]), caps).unwrap(),
            h(&[1, 1, 2, 1, 2, 1, 1])
        );
        assert_eq!(hstar_oracle_parallelepiped(&q(&[2, 3]), caps).unwrap(), h(&[1, 4, 1]));
        assert!(hstar_oracle_parallelepiped(&q(&[100, 101]), caps).is_err());
    }

    #[test]
    fn non_reflexive_oracles_agree_with_weight_formula() {
        // (2,2): brute force gives dilate counts 1, 5, 14 and h* = [1,2,2].
        let caps = OracleCaps::EHRHART;
        let v = q(&[2, 2]);
        assert_eq!(hstar_oracle_interpolation(&v, caps).unwrap(), h(&[1, 2, 2]));
        assert_eq!(hstar_oracle_parallelepiped(&v, caps).unwrap(), h(&[1, 2, 2]));
        assert_eq!(hstar_weight_formula(&v), h(&[1, 2, 2]));
    }

    #[test]
    fn payne_vectors() {
        assert_eq!(payne_qvector(3, 2, 0).unwrap(), q(&[1, 1, 1, 1, 1, 3]));
        let mut e = vec![1i64; 8];
        e.extend([3, 3]);
        assert_eq!(payne_qvector(3, 3, 1).unwrap(), q(&e));
        let mut e = vec![1i64; 7];
        e.push(4);
        assert_eq!(payne_qvector(4, 2, 0).unwrap(), q(&e));
        assert!(matches!(payne_qvector(2, 2, 0), Err(Error::PayneConstraint { .. })));
        assert!(matches!(payne_qvector(3, 2, 1), Err(Error::PayneConstraint { .. })));
    }

    #[test]
    fn payne_products() {
        assert_eq!(payne_hstar_product(3, 2, 0).unwrap(), h(&[1, 1, 2, 1, 2, 1, 1]));
        // (1 + z^3 + z^6)(1 + z + z^2 + z^3 + z^4), expanded by hand
        assert_eq!(
            payne_hstar_product(3, 3, 1).unwrap(),
            h(&[1, 1, 1, 2, 2, 1, 2, 2, 1, 1, 1])
        );
        for (s, k, r) in [(3, 2, 0), (4, 3, 1), (5, 5, 3)] {
            let p = payne_hstar_product(s, k, r).unwrap();
            assert_eq!(p.degree(), Some(((s - 1) * k + k + r) as usize));
        }
    }
}
