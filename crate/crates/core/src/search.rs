//! Batch classification of q-vectors with JSONL output.
//!
//! Candidates are produced in canonical order (dimension, then
//! lexicographic), evaluated in parallel in bounded chunks, and written in
//! candidate order by a single writer, so the output bytes do not depend on
//! the thread count. The last line of a finished run is
//! `{"summary": {...}}`.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ehrhart::{hstar_closed_form, hstar_oracle_parallelepiped, hstar_weight_formula};
use crate::error::{Error, Result};
use crate::freesum::decompose;
use crate::geometry::OracleCaps;
use crate::idp::{idp_check, idp_oracle_bruteforce, necessary_condition, FacetWitness};
use crate::qvector::{is_reflexive, QVector, SupportDecomposition};
use crate::support::validate_r;

/// Record filters; a record is emitted only if it passes all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Filter {
    Reflexive,
    Necessary,
    Idp,
    NonUnimodal,
    Indecomposable,
}

impl FromStr for Filter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "reflexive" => Filter::Reflexive,
            "necessary" => Filter::Necessary,
            "idp" => Filter::Idp,
            "non_unimodal" | "non-unimodal" => Filter::NonUnimodal,
            "indecomposable" => Filter::Indecomposable,
            other => return Err(Error::Parse(format!("unknown filter `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub n_min: usize,
    pub n_max: usize,
    /// Largest entry; ignored when `support` is fixed.
    pub max_entry: u32,
    /// Fixed support `r`: candidates are all `(r_1^{x_1}, ..., r_k^{x_k})`
    /// with `x_i >= 1` and dimension in range.
    pub support: Option<Vec<i64>>,
    pub filters: Vec<Filter>,
    pub threads: usize,
    /// Re-check 1% of the records with the brute-force oracles.
    pub cross_check: bool,
    /// Maximum number of evaluated records held before writing.
    pub sequencer_capacity: usize,
    pub oracle_caps: OracleCaps,
}

impl Default for SearchSpec {
    fn default() -> Self {
        SearchSpec {
            n_min: 1,
            n_max: 5,
            max_entry: 12,
            support: None,
            filters: Vec::new(),
            threads: 1,
            cross_check: false,
            sequencer_capacity: 10_000,
            oracle_caps: OracleCaps::EHRHART,
        }
    }
}

impl SearchSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSearchSpec(m.to_string()));
        if self.n_min < 1 {
            return bad("n_min must be >= 1");
        }
        if self.n_max < self.n_min {
            return bad("n_max must be >= n_min");
        }
        if self.max_entry < 1 {
            return bad("max entry must be >= 1");
        }
        if self.threads < 1 {
            return bad("thread count must be >= 1");
        }
        if self.sequencer_capacity < 1 {
            return bad("sequencer capacity must be >= 1");
        }
        if let Some(r) = &self.support {
            validate_r(r).map_err(|e| Error::InvalidSearchSpec(e.to_string()))?;
        }
        Ok(())
    }

    fn wants(&self, f: Filter) -> bool {
        self.filters.contains(&f)
    }
}

/// One line of search output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateReport {
    pub q: QVector,
    pub support_parts: Vec<u32>,
    pub support_mults: Vec<u32>,
    pub reflexive: bool,
    pub necessary: bool,
    /// `None` when IDP was not decided (non-reflexive q).
    pub idp: Option<bool>,
    pub hstar: Vec<u64>,
    pub symmetric: bool,
    pub unimodal: bool,
    pub free_sum_splits: usize,
    pub witness: Option<FacetWitness>,
    pub counterexample: bool,
    /// Wall time of the evaluation; never serialized so output stays
    /// byte-for-byte reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CandidateReport {
    /// Structural invariants every record must satisfy.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Inconsistency(format!("q = ({}): {m}", self.q)));
        if self.idp == Some(true) && !(self.reflexive && self.necessary) {
            return fail("idp without reflexive and necessary");
        }
        if self.reflexive && !self.symmetric {
            return fail("reflexive but h* not symmetric");
        }
        if self.necessary && !self.reflexive {
            return fail("necessary condition without reflexivity");
        }
        if self.counterexample != (self.idp == Some(true) && self.reflexive && !self.unimodal) {
            return fail("counterexample flag inconsistent");
        }
        Ok(())
    }
}

/// Classifies one candidate; `None` when a filter rejects it.
pub fn evaluate(q: &QVector, spec: &SearchSpec) -> Result<Option<CandidateReport>> {
    let start = Instant::now();
    let reflexive = is_reflexive(q);
    if !reflexive && (spec.wants(Filter::Reflexive) || spec.wants(Filter::Idp)) {
        return Ok(None);
    }
    let necessary = necessary_condition(q);
    if !necessary && (spec.wants(Filter::Necessary) || spec.wants(Filter::Idp)) {
        return Ok(None);
    }
    let hstar = if reflexive {
        hstar_closed_form(q)?
    } else {
        hstar_weight_formula(q)
    };
    let symmetric = hstar.is_symmetric();
    let unimodal = hstar.is_unimodal();
    if unimodal && spec.wants(Filter::NonUnimodal) {
        return Ok(None);
    }
    let (idp, witness) = if reflexive {
        let verdict = idp_check(q)?;
        (Some(verdict.is_idp), verdict.witness)
    } else {
        (None, None)
    };
    if idp != Some(true) && spec.wants(Filter::Idp) {
        return Ok(None);
    }
    let free_sum_splits = if reflexive { decompose(q)?.len() } else { 0 };
    if free_sum_splits > 0 && spec.wants(Filter::Indecomposable) {
        return Ok(None);
    }
    let support = q.support();
    let report = CandidateReport {
        q: q.clone(),
        support_parts: support.parts().to_vec(),
        support_mults: support.multiplicities().to_vec(),
        reflexive,
        necessary,
        idp,
        hstar: hstar.into_coefficients(),
        symmetric,
        unimodal,
        free_sum_splits,
        witness,
        counterexample: idp == Some(true) && reflexive && !unimodal,
        elapsed: start.elapsed(),
    };
    report.check_invariants()?;
    Ok(Some(report))
}

/// Re-derives h* and IDP of a record with the brute-force oracles (when
/// within caps) and fails on any disagreement.
pub fn cross_check(report: &CandidateReport, caps: OracleCaps) -> Result<()> {
    if caps.check(&report.q).is_ok() {
        let oracle = hstar_oracle_parallelepiped(&report.q, caps)?;
        if oracle.coefficients() != report.hstar.as_slice() {
            return Err(Error::Inconsistency(format!(
                "q = ({}): h* {:?} but parallelepiped oracle gives {}",
                report.q, report.hstar, oracle
            )));
        }
    }
    if let Some(idp) = report.idp {
        if OracleCaps::IDP.check(&report.q).is_ok() {
            let oracle = idp_oracle_bruteforce(&report.q, OracleCaps::IDP)?;
            if oracle.is_idp != idp {
                return Err(Error::Inconsistency(format!(
                    "q = ({}): idp = {idp} but sumset oracle gives {}",
                    report.q, oracle.is_idp
                )));
            }
        }
    }
    Ok(())
}

/// Canonical candidate order key.
fn order_key(q: &QVector) -> (usize, &[u32]) {
    (q.dim(), q.entries())
}

/// Candidates in canonical order: by dimension, then lexicographically.
pub fn candidates(spec: &SearchSpec) -> Result<Box<dyn Iterator<Item = QVector> + Send>> {
    spec.validate()?;
    match &spec.support {
        None => Ok(Box::new(WeaklyIncreasing::new(
            spec.n_min,
            spec.n_max,
            spec.max_entry,
        ))),
        Some(r) => {
            let r = validate_r(r)?;
            let k = r.len();
            let mut all = Vec::new();
            for n in spec.n_min.max(k)..=spec.n_max {
                let mut level = Vec::new();
                let mut x = vec![0u32; k];
                mult_compositions(n, 0, &mut x, &mut |x| {
                    level.push(
                        SupportDecomposition::new(r.clone(), x.to_vec())
                            .expect("valid support")
                            .expand(),
                    )
                });
                level.sort();
                all.extend(level);
            }
            Ok(Box::new(all.into_iter()))
        }
    }
}

fn mult_compositions(remaining: usize, i: usize, x: &mut [u32], emit: &mut dyn FnMut(&[u32])) {
    let k = x.len();
    if i == k - 1 {
        if remaining >= 1 {
            x[i] = remaining as u32;
            emit(x);
        }
        return;
    }
    for v in 1..=remaining.saturating_sub(k - 1 - i) {
        x[i] = v as u32;
        mult_compositions(remaining - v, i + 1, x, emit);
    }
}

/// Weakly increasing vectors over `1..=max`, dimension by dimension.
struct WeaklyIncreasing {
    n: usize,
    n_max: usize,
    max: u32,
    current: Option<Vec<u32>>,
}

impl WeaklyIncreasing {
    fn new(n_min: usize, n_max: usize, max: u32) -> Self {
        WeaklyIncreasing {
            n: n_min,
            n_max,
            max,
            current: (n_min <= n_max).then(|| vec![1; n_min]),
        }
    }
}

impl Iterator for WeaklyIncreasing {
    type Item = QVector;

    fn next(&mut self) -> Option<QVector> {
        let cur = self.current.take()?;
        let out = QVector::new(cur.clone()).expect("positive entries");
        // advance: bump the last entry that can grow, reset the tail to it
        let mut next = cur;
        match next.iter().rposition(|&v| v < self.max) {
            Some(i) => {
                let v = next[i] + 1;
                next[i..].iter_mut().for_each(|e| *e = v);
                self.current = Some(next);
            }
            None if self.n < self.n_max => {
                self.n += 1;
                self.current = Some(vec![1; self.n]);
            }
            None => {}
        }
        Some(out)
    }
}

/// Totals over emitted records.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub candidates_examined: u64,
    pub records: u64,
    pub resumed_records: u64,
    pub reflexive: u64,
    pub necessary: u64,
    pub idp: u64,
    pub non_unimodal: u64,
    pub idp_free_sum: u64,
    /// Share of IDP reflexive records that decompose as free sums.
    pub free_sum_fraction: Option<f64>,
    pub counterexamples: u64,
    pub cross_checked: u64,
}

impl SearchSummary {
    fn add(&mut self, r: &CandidateReport) {
        self.records += 1;
        self.reflexive += r.reflexive as u64;
        self.necessary += r.necessary as u64;
        if r.idp == Some(true) {
            self.idp += 1;
            self.idp_free_sum += (r.free_sum_splits > 0) as u64;
        }
        self.non_unimodal += (!r.unimodal) as u64;
        self.counterexamples += r.counterexample as u64;
    }

    fn finish(&mut self) {
        self.free_sum_fraction =
            (self.idp > 0).then(|| self.idp_free_sum as f64 / self.idp as f64);
    }
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    summary: &'a SearchSummary,
}

/// Runs the search, calling `sink` once per emitted record in canonical
/// order. Candidates at or before `resume_after` are skipped.
pub fn run_search_with(
    spec: &SearchSpec,
    resume_after: Option<&QVector>,
    mut sink: impl FnMut(&CandidateReport) -> Result<()>,
) -> Result<SearchSummary> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.threads)
        .build()
        .map_err(|e| Error::InvalidSearchSpec(e.to_string()))?;
    let mut iter = candidates(spec)?;
    if let Some(last) = resume_after {
        let key = order_key(last);
        iter = Box::new(iter.skip_while(move |q| order_key(q) <= key));
    }
    let mut summary = SearchSummary::default();
    loop {
        let chunk: Vec<QVector> = iter.by_ref().take(spec.sequencer_capacity).collect();
        if chunk.is_empty() {
            break;
        }
        summary.candidates_examined += chunk.len() as u64;
        let evaluated: Vec<Result<Option<CandidateReport>>> =
            pool.install(|| chunk.par_iter().map(|q| evaluate(q, spec)).collect());
        for rec in evaluated {
            let Some(rec) = rec? else { continue };
            if spec.cross_check && summary.records % 100 == 0 {
                cross_check(&rec, spec.oracle_caps)?;
                summary.cross_checked += 1;
            }
            summary.add(&rec);
            sink(&rec)?;
        }
    }
    summary.finish();
    Ok(summary)
}

/// Runs the search and writes JSONL records plus the summary line.
pub fn run_search<W: Write>(spec: &SearchSpec, out: W) -> Result<SearchSummary> {
    let mut out = BufWriter::new(out);
    let summary = run_search_with(spec, None, |rec| write_record(&mut out, rec))?;
    write_summary(&mut out, &summary)?;
    out.flush()?;
    Ok(summary)
}

fn write_record<W: Write>(out: &mut W, rec: &CandidateReport) -> Result<()> {
    serde_json::to_writer(&mut *out, rec).map_err(|e| Error::Io(e.to_string()))?;
    out.write_all(b"\n")?;
    Ok(())
}

fn write_summary<W: Write>(out: &mut W, summary: &SearchSummary) -> Result<()> {
    serde_json::to_writer(&mut *out, &SummaryLine { summary }).map_err(|e| Error::Io(e.to_string()))?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Runs the search into a file. With `resume`, complete records already in
/// the file are kept (a trailing partial line or summary is dropped) and the
/// run continues after the last one.
pub fn run_search_to_file(spec: &SearchSpec, path: &Path, resume: bool) -> Result<SearchSummary> {
    let mut kept: Vec<CandidateReport> = Vec::new();
    let mut kept_bytes = 0u64;
    if resume && path.exists() {
        let reader = BufReader::new(File::open(path)?);
        for line in reader.split(b'\n') {
            let line = line?;
            match serde_json::from_slice::<CandidateReport>(&line) {
                Ok(rec) => {
                    kept_bytes += line.len() as u64 + 1;
                    kept.push(rec);
                }
                Err(_) => break,
            }
        }
    }
    let file = if resume {
        let f = OpenOptions::new().read(true).write(true).create(true).truncate(false).open(path)?;
        f.set_len(kept_bytes)?;
        let mut f = f;
        std::io::Seek::seek(&mut f, std::io::SeekFrom::End(0))?;
        f
    } else {
        File::create(path)?
    };
    let mut out = BufWriter::new(file);
    let mut summary = run_search_with(spec, kept.last().map(|r| &r.q), |rec| write_record(&mut out, rec))?;
    summary.resumed_records = kept.len() as u64;
    for rec in &kept {
        summary.add(rec);
    }
    summary.finish();
    write_summary(&mut out, &summary)?;
    out.flush()?;
    Ok(summary)
}
