use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use reflexive_lab::search::{cross_check, evaluate};
use reflexive_lab::{
    build_system, compose, decompose, hstar_closed_form, hstar_oracle_interpolation,
    hstar_oracle_parallelepiped, idp_oracle_bruteforce, payne_hstar_product,
    payne_qvector, reflexive_family, run_search, run_search_to_file, solve_positive,
    verify_two_part_family, verify_two_support_classification, Error, Filter,
    HStarPolynomial, OracleCaps, QVector, SearchSpec, SolutionSet,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_COUNTEREXAMPLE: u8 = 2;
pub const EXIT_INCONSISTENT: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "reflexive-lab", version, about = "h*-polynomials, reflexivity and IDP for the simplices Δ_(1,q)")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for searches and oracles.
    #[arg(long, global = true, env = "REFLEXIVE_LAB_THREADS")]
    threads: Option<usize>,

    /// Oracle limits as `n:v` (max dimension : max sum of q).
    #[arg(long, global = true, value_parser = parse_caps)]
    oracle_caps: Option<OracleCaps>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the h*-vector of Δ_(1,q).
    Hstar {
        #[arg(long)]
        q: String,
        #[arg(long, value_enum, default_value_t = Method::Closed)]
        oracle: Method,
    },
    /// Classify q: reflexive, necessary condition, IDP, unimodality.
    Check {
        #[arg(long)]
        q: String,
        /// Confirm h* and IDP with the brute-force oracles.
        #[arg(long)]
        oracle: bool,
    },
    /// Positive solutions of the support system for an r-vector.
    Enumerate {
        #[arg(long)]
        r: String,
        /// Per-coordinate bound for unbounded families.
        #[arg(long)]
        bound: Option<u64>,
        /// List the first N reflexive q-vectors supported by r instead.
        #[arg(long)]
        count: Option<usize>,
    },
    /// Affine free sums.
    Freesum {
        #[command(subcommand)]
        action: FreesumAction,
    },
    /// Payne's q-vector and its product-form h*.
    Payne {
        #[arg(long)]
        s: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        r: u64,
    },
    /// Batch classification with JSONL output.
    Search(SearchArgs),
    /// Bounded verification sweeps.
    Verify {
        #[command(subcommand)]
        which: VerifyWhich,
    },
}

#[derive(Subcommand, Debug)]
enum FreesumAction {
    Compose {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    Decompose {
        #[arg(long)]
        q: String,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyWhich {
    /// (idp && reflexive) vs. the two-support classification.
    TwoSupport {
        #[arg(long, default_value_t = 15)]
        max_part: u64,
        #[arg(long, default_value_t = 10)]
        m_max: u64,
        #[arg(long, default_value_t = 10)]
        x_max: u64,
    },
    /// h* of (r^m, (1+rm)^(r-1)) vs. its explicit expansion.
    TwoPartFamily {
        #[arg(long, default_value_t = 8)]
        r_max: u64,
        #[arg(long, default_value_t = 8)]
        m_max: u64,
    },
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long, default_value_t = 1)]
    n_min: usize,
    #[arg(long, default_value_t = 5)]
    n_max: usize,
    #[arg(long, default_value_t = 12)]
    max_entry: u32,
    /// Fix the support r (comma separated).
    #[arg(long)]
    support: Option<String>,
    /// reflexive, necessary, idp, non_unimodal, indecomposable (repeatable or comma separated).
    #[arg(long = "filter", value_delimiter = ',', value_parser = parse_filter)]
    filters: Vec<Filter>,
    /// Write JSONL here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Continue an interrupted run in --output.
    #[arg(long, requires = "output")]
    resume: bool,
    /// Re-check 1% of the records with the brute-force oracles.
    #[arg(long)]
    cross_check: bool,
    /// Records buffered between evaluation and writing.
    #[arg(long, default_value_t = 10_000)]
    sequencer: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    Closed,
    Interpolation,
    Parallelepiped,
}

fn parse_q(s: &str) -> reflexive_lab::Result<QVector> {
    s.parse::<QVector>()
}

fn parse_list(s: &str) -> reflexive_lab::Result<Vec<i64>> {
    reflexive_lab::qvector::parse_csv(s)
}

fn parse_caps(s: &str) -> Result<OracleCaps, String> {
    s.parse::<OracleCaps>().map_err(|e| e.to_string())
}

fn parse_filter(s: &str) -> Result<Filter, String> {
    s.parse::<Filter>().map_err(|e| e.to_string())
}

/// What a subcommand produced: text lines, a JSON value, and an exit code.
struct Output {
    text: Vec<String>,
    json: Value,
    code: u8,
}

impl Output {
    fn ok(text: Vec<String>, json: Value) -> Self {
        Output {
            text,
            json,
            code: EXIT_OK,
        }
    }
}

struct Ctx {
    json: bool,
    threads: Option<usize>,
    caps: Option<OracleCaps>,
}

impl Ctx {
    fn ehrhart_caps(&self) -> OracleCaps {
        self.caps.unwrap_or(OracleCaps::EHRHART)
    }

    fn idp_caps(&self) -> OracleCaps {
        self.caps.unwrap_or(OracleCaps::IDP)
    }
}

pub fn run(args: Vec<OsString>) -> u8 {
    let wants_json = args.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return EXIT_OK;
            }
            if wants_json {
                print_json_error("usage", &e.to_string());
            } else {
                let _ = e.print();
            }
            return EXIT_ERROR;
        }
    };
    let ctx = Ctx {
        json: cli.json,
        threads: cli.threads,
        caps: cli.oracle_caps,
    };
    if let Some(t) = ctx.threads {
        if t == 0 {
            return report_error(&ctx, &Error::InvalidSearchSpec("--threads must be >= 1".into()));
        }
        // Only the first call can configure the global pool; later calls are no-ops.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let result = match cli.command {
        Command::Search(args) => return cmd_search(&ctx, args),
        Command::Hstar { q, oracle } => parse_q(&q).and_then(|q| cmd_hstar(&ctx, &q, oracle)),
        Command::Check { q, oracle } => parse_q(&q).and_then(|q| cmd_check(&ctx, &q, oracle)),
        Command::Enumerate { r, bound, count } => {
            parse_list(&r).and_then(|r| cmd_enumerate(&r, bound, count))
        }
        Command::Freesum { action } => cmd_freesum(action),
        Command::Payne { s, k, r } => cmd_payne(s, k, r),
        Command::Verify { which } => cmd_verify(which),
    };
    match result {
        Ok(out) => {
            emit(&ctx, &out);
            out.code
        }
        Err(e) => report_error(&ctx, &e),
    }
}

fn emit(ctx: &Ctx, out: &Output) {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    if ctx.json {
        let _ = writeln!(lock, "{}", out.json);
    } else {
        for line in &out.text {
            let _ = writeln!(lock, "{line}");
        }
    }
}

fn print_json_error(code: &str, message: &str) {
    println!("{}", json!({ "code": code, "message": message.trim() }));
}

fn report_error(ctx: &Ctx, e: &Error) -> u8 {
    if ctx.json {
        print_json_error(e.code(), &e.to_string());
    } else {
        eprintln!("error: {e}");
    }
    match e {
        Error::Inconsistency(_) => EXIT_INCONSISTENT,
        _ => EXIT_ERROR,
    }
}

fn hstar_lines(h: &HStarPolynomial, volume: u64) -> Vec<String> {
    vec![
        h.to_string(),
        format!("symmetric={}", h.is_symmetric()),
        format!("unimodal={}", h.is_unimodal()),
        format!("volume={volume}"),
    ]
}

fn cmd_hstar(ctx: &Ctx, q: &QVector, method: Method) -> reflexive_lab::Result<Output> {
    let h = match method {
        Method::Closed => hstar_closed_form(q)?,
        Method::Interpolation => hstar_oracle_interpolation(q, ctx.ehrhart_caps())?,
        Method::Parallelepiped => hstar_oracle_parallelepiped(q, ctx.ehrhart_caps())?,
    };
    let volume = q.normalized_volume();
    let json = json!({
        "q": q,
        "method": format!("{method:?}").to_lowercase(),
        "hstar": h,
        "symmetric": h.is_symmetric(),
        "unimodal": h.is_unimodal(),
        "volume": volume,
    });
    Ok(Output::ok(hstar_lines(&h, volume), json))
}

fn cmd_check(ctx: &Ctx, q: &QVector, oracle: bool) -> reflexive_lab::Result<Output> {
    let report = evaluate(q, &SearchSpec::default())?.expect("no filters set");
    let idp_text = match report.idp {
        Some(b) => b.to_string(),
        None => "skipped".to_string(),
    };
    let mut text = vec![
        format!(
            "reflexive={} necessary={} idp={} symmetric={} unimodal={}",
            report.reflexive, report.necessary, idp_text, report.symmetric, report.unimodal
        ),
        format!("hstar={}", HStarPolynomial::new(report.hstar.clone())),
        format!("free_sum_splits={}", report.free_sum_splits),
    ];
    if let Some(w) = &report.witness {
        text.push(format!(
            "witness facet_j={} b={} height={}",
            w.facet_j, w.b, w.height
        ));
    }
    let mut json = serde_json::to_value(&report).expect("report serializes");
    let mut code = EXIT_OK;
    if oracle {
        let hstar_oracle = hstar_oracle_parallelepiped(q, ctx.ehrhart_caps()).ok();
        let idp_oracle = match report.idp {
            Some(_) => idp_oracle_bruteforce(q, ctx.idp_caps()).ok(),
            None => None,
        };
        let hstar_agree = hstar_oracle
            .as_ref()
            .map(|h| h.coefficients() == report.hstar.as_slice());
        let idp_agree = idp_oracle.as_ref().map(|o| Some(o.is_idp) == report.idp);
        let show = |v: Option<String>| v.unwrap_or_else(|| "skipped".into());
        text.push(format!(
            "oracle hstar={} idp={} agree={}",
            show(hstar_oracle.as_ref().map(|h| h.to_string())),
            show(idp_oracle.as_ref().map(|o| o.is_idp.to_string())),
            hstar_agree.unwrap_or(true) && idp_agree.unwrap_or(true)
        ));
        json["oracle"] = json!({
            "hstar": hstar_oracle,
            "idp": idp_oracle.as_ref().map(|o| o.is_idp),
            "idp_witness": idp_oracle.as_ref().and_then(|o| o.witness.clone()),
        });
        if hstar_agree == Some(false) || idp_agree == Some(false) {
            code = EXIT_INCONSISTENT;
        }
        // Also run the record-level validator when both oracles apply.
        if code == EXIT_OK && hstar_agree.is_some() {
            cross_check(&report, ctx.ehrhart_caps())?;
        }
    }
    Ok(Output { text, json, code })
}

fn cmd_enumerate(r: &[i64], bound: Option<u64>, count: Option<usize>) -> reflexive_lab::Result<Output> {
    if let Some(count) = count {
        let fam = reflexive_family(r, count)?;
        let text = fam.iter().map(ToString::to_string).collect();
        return Ok(Output::ok(text, json!({ "r": r, "reflexive_family": fam })));
    }
    let sys = build_system(r)?;
    let set = solve_positive(&sys, bound)?;
    let qs: Vec<QVector> = set
        .solutions()
        .iter()
        .map(|x| sys.expand(x))
        .collect::<reflexive_lab::Result<_>>()?;
    let mut text: Vec<String> = qs.iter().map(ToString::to_string).collect();
    if let SolutionSet::UnboundedFamily { bound, .. } = &set {
        eprintln!("# unbounded family: listing solutions with every multiplicity <= {bound}");
    }
    if text.is_empty() {
        eprintln!("# no positive integer solutions");
        text.clear();
    }
    let mut json = serde_json::to_value(&set).expect("solution set serializes");
    json["r"] = json!(r);
    json["q"] = json!(qs);
    Ok(Output::ok(text, json))
}

fn cmd_freesum(action: FreesumAction) -> reflexive_lab::Result<Output> {
    match action {
        FreesumAction::Compose { p, q } => {
            let (p, q) = (parse_q(&p)?, parse_q(&q)?);
            let split = compose(&p, &q)?;
            let text = vec![format!("y={} s={}", split.y, split.scale)];
            Ok(Output::ok(text, serde_json::to_value(&split).expect("serializes")))
        }
        FreesumAction::Decompose { q } => {
            let q = parse_q(&q)?;
            let splits = decompose(&q)?;
            let text = if splits.is_empty() {
                vec!["indecomposable".to_string()]
            } else {
                splits
                    .iter()
                    .map(|s| format!("p={} q={} s={}", s.p, s.q, s.scale))
                    .collect()
            };
            Ok(Output::ok(text, json!({ "y": q, "splits": splits })))
        }
    }
}

fn cmd_payne(s: u64, k: u64, r: u64) -> reflexive_lab::Result<Output> {
    let q = payne_qvector(s, k, r)?;
    let h = payne_hstar_product(s, k, r)?;
    let text = vec![
        q.to_string(),
        h.to_string(),
        format!("unimodal={}", h.is_unimodal()),
    ];
    let json = json!({ "s": s, "k": k, "r": r, "q": q, "hstar": h, "unimodal": h.is_unimodal() });
    Ok(Output::ok(text, json))
}

fn cmd_verify(which: VerifyWhich) -> reflexive_lab::Result<Output> {
    match which {
        VerifyWhich::TwoSupport {
            max_part,
            m_max,
            x_max,
        } => {
            let rep = verify_two_support_classification(max_part, m_max, x_max)?;
            let mut text = vec![format!(
                "checked={} idp_reflexive={} discrepancies={}",
                rep.checked,
                rep.idp_reflexive,
                rep.discrepancies.len()
            )];
            text.extend(rep.discrepancies.iter().map(|d| {
                format!(
                    "discrepancy r={} m={} s={} x={} computed={} predicted={}",
                    d.r, d.m, d.s, d.x, d.computed, d.predicted
                )
            }));
            let code = if rep.discrepancies.is_empty() { EXIT_OK } else { EXIT_INCONSISTENT };
            Ok(Output {
                text,
                json: serde_json::to_value(&rep).expect("serializes"),
                code,
            })
        }
        VerifyWhich::TwoPartFamily { r_max, m_max } => {
            let rep = verify_two_part_family(r_max, m_max)?;
            let mut text = vec![format!(
                "checked={} discrepancies={}",
                rep.checked,
                rep.discrepancies.len()
            )];
            text.extend(rep.discrepancies.iter().map(|d| {
                format!(
                    "discrepancy r={} m={} closed_form={} expansion={} symmetric={} unimodal={}",
                    d.r, d.m, d.closed_form, d.expansion, d.symmetric, d.unimodal
                )
            }));
            let code = if rep.discrepancies.is_empty() { EXIT_OK } else { EXIT_INCONSISTENT };
            Ok(Output {
                text,
                json: serde_json::to_value(&rep).expect("serializes"),
                code,
            })
        }
    }
}

fn cmd_search(ctx: &Ctx, args: SearchArgs) -> u8 {
    let support = match args.support.as_deref().map(parse_list).transpose() {
        Ok(s) => s,
        Err(e) => return report_error(ctx, &e),
    };
    let spec = SearchSpec {
        n_min: args.n_min,
        n_max: args.n_max,
        max_entry: args.max_entry,
        support,
        filters: args.filters,
        threads: ctx.threads.unwrap_or(1),
        cross_check: args.cross_check,
        sequencer_capacity: args.sequencer,
        oracle_caps: ctx.ehrhart_caps(),
    };
    let result = match &args.output {
        Some(path) => run_search_to_file(&spec, path, args.resume),
        None => run_search(&spec, std::io::stdout().lock()),
    };
    match result {
        Ok(summary) => {
            if !ctx.json || args.output.is_some() {
                eprintln!(
                    "examined={} records={} reflexive={} idp={} non_unimodal={} counterexamples={}",
                    summary.candidates_examined,
                    summary.records + summary.resumed_records,
                    summary.reflexive,
                    summary.idp,
                    summary.non_unimodal,
                    summary.counterexamples
                );
            }
            if summary.counterexamples > 0 {
                eprintln!("COUNTEREXAMPLE found: see records with \"counterexample\":true");
                EXIT_COUNTEREXAMPLE
            } else {
                EXIT_OK
            }
        }
        Err(e) => report_error(ctx, &e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use reflexive_lab::make_qvector;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn make_qvector_matches_cli_parse() {
        assert_eq!(parse_q("3,1,1").unwrap(), make_qvector(&[1, 1, 3]).unwrap());
        assert!(parse_q("0,1").is_err());
    }
}
