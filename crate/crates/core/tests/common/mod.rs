#![allow(dead_code)]

use reflexive_lab::{make_qvector, QVector};

pub fn q(v: &[i64]) -> QVector {
    make_qvector(v).unwrap()
}

/// All weakly increasing positive vectors with `1 <= n <= n_max` and sum `<= sum_max`.
pub fn grid(n_max: usize, sum_max: u64) -> Vec<QVector> {
    fn rec(cur: &mut Vec<i64>, n_max: usize, left: u64, out: &mut Vec<QVector>) {
        if !cur.is_empty() {
            out.push(make_qvector(cur).unwrap());
        }
        if cur.len() == n_max {
            return;
        }
        let lo = cur.last().copied().unwrap_or(1);
        for v in lo..=left as i64 {
            cur.push(v);
            rec(cur, n_max, left - v as u64, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n_max, sum_max, &mut out);
    out
}

pub fn reflexive_grid(n_max: usize, sum_max: u64) -> Vec<QVector> {
    grid(n_max, sum_max)
        .into_iter()
        .filter(|q| q.is_reflexive())
        .collect()
}
