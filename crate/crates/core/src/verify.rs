//! Bounded verification of the two-support classification and of the
//! explicit h* expansion for `q = (r^m, (1 + rm)^{r-1})`.

use serde::{Deserialize, Serialize};

use crate::ehrhart::hstar_closed_form;
use crate::error::Result;
use crate::hstar::HStarPolynomial;
use crate::idp::idp_check;
use crate::qvector::{is_reflexive, QVector, SupportDecomposition};

/// Predicted "IDP and reflexive" for `q = (r^m, s^x)`, `r < s`:
/// `r != 1, s = 1 + rm, x = r - 1`, or `r = 1, s = 1 + m`.
pub fn two_support_predicate(r: u64, m: u64, s: u64, x: u64) -> bool {
    if r == 1 {
        s == 1 + m
    } else {
        s == 1 + r * m && x == r - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoSupportCase {
    pub r: u64,
    pub m: u64,
    pub s: u64,
    pub x: u64,
    pub computed: bool,
    pub predicted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoSupportReport {
    pub checked: u64,
    pub idp_reflexive: u64,
    pub discrepancies: Vec<TwoSupportCase>,
}

fn two_support_q(r: u64, m: u64, s: u64, x: u64) -> QVector {
    SupportDecomposition::new(vec![r as u32, s as u32], vec![m as u32, x as u32])
        .expect("r < s and positive multiplicities")
        .expand()
}

/// Compares `is_reflexive && idp_check` with [`two_support_predicate`] for
/// all `1 <= r < s <= max_part`, `1 <= m <= m_max`, `1 <= x <= x_max`.
pub fn verify_two_support_classification(
    max_part: u64,
    m_max: u64,
    x_max: u64,
) -> Result<TwoSupportReport> {
    let mut report = TwoSupportReport {
        checked: 0,
        idp_reflexive: 0,
        discrepancies: Vec::new(),
    };
    for s in 2..=max_part {
        for r in 1..s {
            for m in 1..=m_max {
                for x in 1..=x_max {
                    let q = two_support_q(r, m, s, x);
                    let computed = is_reflexive(&q) && idp_check(&q)?.is_idp;
                    let predicted = two_support_predicate(r, m, s, x);
                    report.checked += 1;
                    report.idp_reflexive += computed as u64;
                    if computed != predicted {
                        report.discrepancies.push(TwoSupportCase {
                            r,
                            m,
                            s,
                            x,
                            computed,
                            predicted,
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

/// `q = (r^m, (1 + rm)^{r-1})` for `r >= 2`.
pub fn two_part_family_qvector(r: u64, m: u64) -> QVector {
    two_support_q(r, m, 1 + r * m, r - 1)
}

/// `r (z + ... + z^{m-1})(1 + ... + z^{r-1}) + sum_{j<r} (r-j) z^{m+j} + sum_{j<r} (j+1) z^j`.
pub fn two_part_family_expansion(r: u64, m: u64) -> HStarPolynomial {
    let (r, m) = (r as usize, m as usize);
    let mut c = vec![0u64; r + m];
    for qd in 1..m {
        for j in 0..r {
            c[qd + j] += r as u64;
        }
    }
    for j in 0..r {
        c[m + j] += (r - j) as u64;
        c[j] += (j + 1) as u64;
    }
    HStarPolynomial::new(c)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoPartFamilyCase {
    pub r: u64,
    pub m: u64,
    pub closed_form: HStarPolynomial,
    pub expansion: HStarPolynomial,
    pub symmetric: bool,
    pub unimodal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoPartFamilyReport {
    pub checked: u64,
    pub discrepancies: Vec<TwoPartFamilyCase>,
}

/// For `2 <= r <= r_max`, `1 <= m <= m_max`: h* is symmetric, unimodal and
/// equal to [`two_part_family_expansion`].
pub fn verify_two_part_family(r_max: u64, m_max: u64) -> Result<TwoPartFamilyReport> {
    let mut report = TwoPartFamilyReport {
        checked: 0,
        discrepancies: Vec::new(),
    };
    for r in 2..=r_max {
        for m in 1..=m_max {
            let q = two_part_family_qvector(r, m);
            let closed_form = hstar_closed_form(&q)?;
            let expansion = two_part_family_expansion(r, m);
            let symmetric = closed_form.is_symmetric();
            let unimodal = closed_form.is_unimodal();
            report.checked += 1;
            if !(symmetric && unimodal && closed_form == expansion) {
                report.discrepancies.push(TwoPartFamilyCase {
                    r,
                    m,
                    closed_form,
                    expansion,
                    symmetric,
                    unimodal,
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qvector::make_qvector;

    #[test]
    fn predicate_cases() {
        assert!(two_support_predicate(2, 1, 3, 1));
        assert!(two_support_predicate(1, 2, 3, 5));
        assert!(!two_support_predicate(2, 1, 3, 2));
        let q = two_support_q(2, 1, 3, 2);
        assert_eq!(q, make_qvector(&[2, 3, 3]).unwrap());
        assert!(!(is_reflexive(&q) && idp_check(&q).unwrap().is_idp));
        let q = two_support_q(1, 2, 3, 5);
        assert!(idp_check(&q).unwrap().is_idp);
    }

    #[test]
    fn expansion_small_cases() {
        assert_eq!(two_part_family_expansion(2, 1).coefficients(), &[1, 4, 1]);
        assert_eq!(two_part_family_qvector(3, 2), make_qvector(&[3, 3, 7, 7]).unwrap());
        assert_eq!(two_part_family_qvector(2, 3), make_qvector(&[2, 2, 2, 7]).unwrap());
        for (r, m) in [(2, 1), (3, 2), (2, 3)] {
            let q = two_part_family_qvector(r, m);
            assert_eq!(hstar_closed_form(&q).unwrap(), two_part_family_expansion(r, m));
        }
    }

    #[test]
    fn small_sweeps_are_clean() {
        let rep = verify_two_support_classification(6, 4, 4).unwrap();
        assert!(rep.discrepancies.is_empty(), "{:?}", rep.discrepancies);
        assert!(rep.idp_reflexive > 0);
        let rep = verify_two_part_family(4, 4).unwrap();
        assert_eq!(rep.checked, 12);
        assert!(rep.discrepancies.is_empty());
    }
}
