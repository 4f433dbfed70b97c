//! h*-coefficient vectors and the shape predicates on them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients `(h*_0, ..., h*_d)`, lowest degree first.
///
/// Stored untrimmed (length `n + 1` when produced for an `n`-dimensional
/// simplex); [`HStarPolynomial::trimmed`] drops trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HStarPolynomial {
    coefficients: Vec<u64>,
}

impl HStarPolynomial {
    pub fn new(coefficients: Vec<u64>) -> Self {
        HStarPolynomial { coefficients }
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn into_coefficients(self) -> Vec<u64> {
        self.coefficients
    }

    /// Coefficients with trailing zeros removed.
    pub fn trimmed(&self) -> &[u64] {
        let end = self
            .coefficients
            .iter()
            .rposition(|&c| c != 0)
            .map_or(0, |i| i + 1);
        &self.coefficients[..end]
    }

    /// Degree of the trimmed polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.trimmed().len().checked_sub(1)
    }

    /// `h*(1)`, which equals the normalized volume.
    pub fn value_at_one(&self) -> u128 {
        self.coefficients.iter().map(|&c| c as u128).sum()
    }

    pub fn is_unimodal(&self) -> bool {
        is_unimodal(self)
    }

    pub fn is_symmetric(&self) -> bool {
        is_symmetric(self)
    }

    /// Polynomial product.
    pub fn mul(&self, other: &HStarPolynomial) -> HStarPolynomial {
        if self.coefficients.is_empty() || other.coefficients.is_empty() {
            return HStarPolynomial::new(Vec::new());
        }
        let mut out = vec![0u64; self.coefficients.len() + other.coefficients.len() - 1];
        for (i, &a) in self.coefficients.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        HStarPolynomial::new(out)
    }

    /// Zero-pads (never truncates) to at least `len` coefficients.
    pub fn padded(mut self, len: usize) -> HStarPolynomial {
        if self.coefficients.len() < len {
            self.coefficients.resize(len, 0);
        }
        self
    }
}

/// True iff the trimmed coefficients rise (weakly) and then fall (weakly).
///
/// The zero polynomial and single coefficients are unimodal.
pub fn is_unimodal(h: &HStarPolynomial) -> bool {
    let a = h.trimmed();
    let peak = a.windows(2).position(|w| w[0] > w[1]);
    match peak {
        None => true,
        Some(j) => a[j..].windows(2).all(|w| w[0] >= w[1]),
    }
}

/// True iff the trimmed coefficients form a palindrome.
pub fn is_symmetric(h: &HStarPolynomial) -> bool {
    let a = h.trimmed();
    a.iter().eq(a.iter().rev())
}

impl fmt::Display for HStarPolynomial {
    /// Bracketed list, e.g. `[1,16,29,28,29,16,1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.coefficients.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for HStarPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("`{s}` is not a bracketed list")))?;
        if inner.trim().is_empty() {
            return Ok(HStarPolynomial::new(Vec::new()));
        }
        inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("`{t}` is not a nonnegative integer")))
            })
            .collect::<Result<Vec<_>>>()
            .map(HStarPolynomial::new)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(v: &[u64]) -> HStarPolynomial {
        HStarPolynomial::new(v.to_vec())
    }

    #[test]
    fn unimodal_examples() {
        assert!(!is_unimodal(&h(&[1, 16, 29, 28, 29, 16, 1])));
        assert!(is_unimodal(&h(&[1, 4, 1])));
        assert!(!is_unimodal(&h(&[1, 1, 2, 1, 2, 1, 1])));
    }

    #[test]
    fn unimodal_edge_cases() {
        assert!(is_unimodal(&h(&[])));
        assert!(is_unimodal(&h(&[0, 0])));
        assert!(is_unimodal(&h(&[5])));
        assert!(is_unimodal(&h(&[1, 2, 2, 3, 3, 1, 0, 0])));
        assert!(is_unimodal(&h(&[3, 2, 1])));
        assert!(!is_unimodal(&h(&[1, 0, 1])));
        assert!(!is_unimodal(&h(&[2, 1, 2])));
    }

    #[test]
    fn symmetric_examples() {
        assert!(is_symmetric(&h(&[1, 4, 1])));
        assert!(is_symmetric(&h(&[1, 1, 1, 1])));
        assert!(is_symmetric(&h(&[1, 2, 1, 0])));
        assert!(!is_symmetric(&h(&[1, 2, 2])));
        assert!(is_symmetric(&h(&[])));
    }

    #[test]
    fn trimmed_and_degree() {
        let p = h(&[1, 2, 1, 0]);
        assert_eq!(p.trimmed(), &[1, 2, 1]);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(h(&[0, 0]).degree(), None);
    }

    #[test]
    fn product() {
        let a = h(&[1, 0, 1, 0, 1]);
        let b = h(&[1, 1, 1]);
        assert_eq!(a.mul(&b), h(&[1, 1, 2, 1, 2, 1, 1]));
    }

    #[test]
    fn text_encoding() {
        let p = h(&[1, 16, 29, 28, 29, 16, 1]);
        assert_eq!(p.to_string(), "[1,16,29,28,29,16,1]");
        assert_eq!("[1, 16,29,28,29,16,1]".parse::<HStarPolynomial>().unwrap(), p);
        assert!("1,2".parse::<HStarPolynomial>().is_err());
        assert!("[1,-2]".parse::<HStarPolynomial>().is_err());
    }
}
