//! q-vectors and their supports.
//!
//! A [`QVector`] is the weakly increasing vector of positive integers that
//! determines the simplex with vertices `e_1, ..., e_n` and `-(q_1 e_1 + ... + q_n e_n)`.
//! Input order does not matter: the simplex is invariant under coordinate
//! permutations, so entries are sorted on construction.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible q entry.
pub const MAX_ENTRY: u64 = u32::MAX as u64;

/// Canonical (sorted, positive, nonempty) q-vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<u32>")]
pub struct QVector(Vec<u32>);

/// Validates and canonicalizes raw integers into a [`QVector`].
pub fn make_qvector(raw: &[i64]) -> Result<QVector> {
    if raw.is_empty() {
        return Err(Error::InvalidQVector("empty list".into()));
    }
    let mut entries = Vec::with_capacity(raw.len());
    for &v in raw {
        if v < 1 {
            return Err(Error::InvalidQVector(format!("entry {v} is not positive")));
        }
        if v as u64 > MAX_ENTRY {
            return Err(Error::InvalidQVector(format!(
                "entry {v} exceeds the word-size bound {MAX_ENTRY}"
            )));
        }
        entries.push(v as u32);
    }
    entries.sort_unstable();
    Ok(QVector(entries))
}

impl QVector {
    /// Builds a q-vector from already-typed entries (sorted on the way in).
    pub fn new(entries: impl Into<Vec<u32>>) -> Result<Self> {
        let mut entries = entries.into();
        if entries.is_empty() {
            return Err(Error::InvalidQVector("empty list".into()));
        }
        if entries.contains(&0) {
            return Err(Error::InvalidQVector("entry 0 is not positive".into()));
        }
        entries.sort_unstable();
        Ok(QVector(entries))
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// Dimension `n`.
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `q_1 + ... + q_n`.
    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&v| v as u64).sum()
    }

    /// Normalized volume `1 + q_1 + ... + q_n`.
    ///
    /// Entries are bounded by `2^32 - 1`, so the sum cannot overflow `u64`
    /// for any vector that fits in memory.
    pub fn normalized_volume(&self) -> u64 {
        1 + self.sum()
    }

    pub fn support(&self) -> SupportDecomposition {
        support_of(self)
    }

    pub fn is_reflexive(&self) -> bool {
        is_reflexive(self)
    }

    pub fn max_entry(&self) -> u32 {
        *self.0.last().expect("nonempty")
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for QVector {
    type Err = Error;

    /// Parses the comma-separated encoding, e.g. `2,2,15,20,20`.
    fn from_str(s: &str) -> Result<Self> {
        let raw = parse_csv(s)?;
        make_qvector(&raw)
    }
}

impl TryFrom<Vec<i64>> for QVector {
    type Error = Error;

    fn try_from(raw: Vec<i64>) -> Result<Self> {
        make_qvector(&raw)
    }
}

impl From<QVector> for Vec<u32> {
    fn from(q: QVector) -> Self {
        q.0
    }
}

/// Parses a comma-separated list of integers (whitespace tolerated).
pub fn parse_csv(s: &str) -> Result<Vec<i64>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty list".into()));
    }
    s.split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<i64>()
                .map_err(|_| Error::Parse(format!("`{tok}` is not an integer")))
        })
        .collect()
}

/// Run-length form `(r_1^{x_1}, ..., r_k^{x_k})` of a q-vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SupportDecomposition {
    parts: Vec<u32>,
    multiplicities: Vec<u32>,
}

impl SupportDecomposition {
    /// Builds a decomposition from strictly increasing parts and positive multiplicities.
    pub fn new(parts: Vec<u32>, multiplicities: Vec<u32>) -> Result<Self> {
        if parts.is_empty() || parts.len() != multiplicities.len() {
            return Err(Error::InvalidRVector(
                "parts and multiplicities must be nonempty and of equal length".into(),
            ));
        }
        if parts[0] == 0 || parts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidRVector(
                "parts must be strictly increasing positive integers".into(),
            ));
        }
        if multiplicities.contains(&0) {
            return Err(Error::InvalidRVector("multiplicities must be >= 1".into()));
        }
        Ok(SupportDecomposition {
            parts,
            multiplicities,
        })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    /// Number of distinct parts `k`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Expands back into the q-vector.
    pub fn expand(&self) -> QVector {
        let entries: Vec<u32> = self
            .parts
            .iter()
            .zip(&self.multiplicities)
            .flat_map(|(&r, &x)| std::iter::repeat_n(r, x as usize))
            .collect();
        QVector(entries)
    }
}

/// Run-length encodes a q-vector into distinct parts with multiplicities.
pub fn support_of(q: &QVector) -> SupportDecomposition {
    let mut parts: Vec<u32> = Vec::new();
    let mut multiplicities: Vec<u32> = Vec::new();
    for &v in q.entries() {
        match parts.last() {
            Some(&last) if last == v => *multiplicities.last_mut().unwrap() += 1,
            _ => {
                parts.push(v);
                multiplicities.push(1);
            }
        }
    }
    SupportDecomposition {
        parts,
        multiplicities,
    }
}

/// `q_j | 1 + sum_{i != j} q_i` for every `j`.
///
/// Since `q_j | q_j`, this is the same as every entry dividing the
/// normalized volume, which is what gets checked.
pub fn is_reflexive(q: &QVector) -> bool {
    let volume = q.normalized_volume();
    q.entries().iter().all(|&v| volume.is_multiple_of(v as u64))
}

/// Free-function form of [`QVector::normalized_volume`].
pub fn normalized_volume(q: &QVector) -> u64 {
    q.normalized_volume()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> QVector {
        make_qvector(v).unwrap()
    }

    #[test]
    fn make_sorts_input() {
        assert_eq!(q(&[3, 1, 1]).entries(), &[1, 1, 3]);
        assert_eq!(q(&[1]).entries(), &[1]);
        assert_eq!(q(&[2, 2, 15, 20, 20]).entries(), &[2, 2, 15, 20, 20]);
    }

    #[test]
    fn make_rejects_bad_input() {
        assert!(matches!(make_qvector(&[]), Err(Error::InvalidQVector(_))));
        assert!(matches!(make_qvector(&[1, 0]), Err(Error::InvalidQVector(_))));
        assert!(matches!(make_qvector(&[-3]), Err(Error::InvalidQVector(_))));
        assert!(matches!(
            make_qvector(&[1, 1 << 32]),
            Err(Error::InvalidQVector(_))
        ));
        assert!(make_qvector(&[u32::MAX as i64]).is_ok());
    }

    #[test]
    fn csv_roundtrip() {
        let v: QVector = " 20,2, 15,2,20".parse().unwrap();
        assert_eq!(v.to_string(), "2,2,15,20,20");
        assert!("1,,2".parse::<QVector>().is_err());
        assert!("".parse::<QVector>().is_err());
        assert!("a".parse::<QVector>().is_err());
    }

    #[test]
    fn support_examples() {
        let s = support_of(&q(&[1, 1, 1, 1, 1, 3]));
        assert_eq!(s.parts(), &[1, 3]);
        assert_eq!(s.multiplicities(), &[5, 1]);
        let s = support_of(&q(&[7]));
        assert_eq!((s.parts(), s.multiplicities()), (&[7u32][..], &[1u32][..]));
        let s = support_of(&q(&[2, 2, 5]));
        assert_eq!((s.parts(), s.multiplicities()), (&[2u32, 5][..], &[2u32, 1][..]));
    }

    #[test]
    fn support_new_validates() {
        assert!(SupportDecomposition::new(vec![3, 2], vec![1, 1]).is_err());
        assert!(SupportDecomposition::new(vec![2, 3], vec![1, 0]).is_err());
        assert!(SupportDecomposition::new(vec![2, 3], vec![1]).is_err());
        let s = SupportDecomposition::new(vec![2, 5], vec![2, 1]).unwrap();
        assert_eq!(s.expand(), q(&[2, 2, 5]));
    }

    #[test]
    fn reflexive_examples() {
        assert!(is_reflexive(&q(&[1, 1, 1])));
        assert!(is_reflexive(&q(&[2, 3])));
        assert!(!is_reflexive(&q(&[2, 2])));
        assert!(is_reflexive(&q(&[3, 20, 24, 24, 24, 24])));
    }

    #[test]
    fn volume_examples() {
        assert_eq!(normalized_volume(&q(&[1, 1, 1])), 4);
        assert_eq!(normalized_volume(&q(&[3, 20, 24, 24, 24, 24])), 120);
        assert_eq!(normalized_volume(&q(&[1, 1, 1, 1, 1, 3])), 9);
    }

    #[test]
    fn serde_as_array() {
        let v = q(&[3, 1]);
        assert_eq!(serde_json::to_string(&v).unwrap(), "[1,3]");
        let back: QVector = serde_json::from_str("[3,1]").unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<QVector>("[0]").is_err());
    }
}
