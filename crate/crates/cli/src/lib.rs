//! Front end for the `monpres` binary: reading input, running the
//! `analyze`, `verify` and `sweep` commands, and mapping results to exit
//! codes.

pub mod report;

use std::io::{self, Read, Write};
use std::path::Path;

use monpres::presentation::{normalize, parse_presentation, Presentation, PresentationError};
use monpres::sweep::{check_presentation, family, run_sweep, CheckOptions, Family, OracleSet, SweepRow};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use report::{analyze, render_text, AnalysisReport};

/// Process exit codes. A verdict of "not normal" is a successful run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Input = 2,
    Disagreement = 3,
    ResourceLimit = 4,
}

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Parse(#[from] PresentationError),
    #[error("{0}")]
    Usage(String),
}

/// Reads a presentation from a file, from stdin for `-`, or from the argument
/// itself when it is not a file but parses as a presentation.
pub fn read_input(arg: &str) -> Result<String, InputError> {
    if arg == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|source| InputError::Io {
            path: "stdin".into(),
            source,
        })?;
        return Ok(s);
    }
    match std::fs::read_to_string(arg) {
        Ok(s) => Ok(s),
        Err(_) if parse_presentation(arg).is_ok() => Ok(arg.to_string()),
        Err(source) => Err(InputError::Io {
            path: arg.to_string(),
            source,
        }),
    }
}

pub struct Output {
    pub exit: Exit,
    pub stdout: String,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn parse(text: &str) -> Result<Presentation, InputError> {
    Ok(parse_presentation(text)?)
}

pub fn cmd_analyze(text: &str, json: bool) -> Result<Output, InputError> {
    let p = parse(text)?;
    let n = normalize(&p)?;
    let report = analyze(&p, &n);
    let exit = if report.disagreements().is_empty() {
        Exit::Ok
    } else {
        Exit::Disagreement
    };
    let stdout = if json { to_json(&report) } else { render_text(&report) };
    Ok(Output { exit, stdout })
}

/// Parses `cancel`, `normal`, `class` and `all`.
pub fn oracle_set(names: &[String]) -> Result<OracleSet, InputError> {
    let mut set = OracleSet {
        cancel: false,
        normal: false,
        class: false,
    };
    for name in names {
        match name.as_str() {
            "cancel" => set.cancel = true,
            "normal" => set.normal = true,
            "class" => set.class = true,
            "all" => set = OracleSet::ALL,
            other => return Err(InputError::Usage(format!("unknown oracle {other:?}"))),
        }
    }
    Ok(set)
}

pub fn cmd_verify(text: &str, degree_bound: usize, oracles: OracleSet, json: bool) -> Result<Output, InputError> {
    let p = parse(text)?;
    let n = normalize(&p)?;
    let mut report = analyze(&p, &n);
    let opts = CheckOptions {
        oracles,
        degree_bound,
        injectivity_degree: None,
    };
    let check = check_presentation(&p, &opts);
    if check.verdict.status != report.verdict.status {
        report.verdict = check.verdict.clone();
        report.canonical = None;
        report.embedding = None;
        report.minimal_primes.clear();
        report.principal_divisors.clear();
        report.class_group = None;
        report
            .notes
            .push("the oracles overrode the combinatorial verdict".into());
    }
    let exit = if !check.disagreements.is_empty() || !report.disagreements().is_empty() {
        Exit::Disagreement
    } else if check.resource_limited {
        Exit::ResourceLimit
    } else {
        Exit::Ok
    };
    report.oracles = Some(report::OracleEntry {
        degree_bound,
        requested: oracles,
        check,
    });
    let stdout = if json { to_json(&report) } else { render_text(&report) };
    Ok(Output { exit, stdout })
}

/// Largest sweep parameters accepted, per family: generators and exponent.
pub fn sweep_caps(f: Family) -> (usize, u64) {
    match f {
        Family::One => (7, 4),
        Family::Two => (8, 3),
    }
}

pub const CSV_SCHEMA: &str = "# monpres sweep schema 1";

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CsvRow {
    pub index: usize,
    pub family: String,
    pub parameters: String,
    pub presentation: String,
    pub verdict: String,
    pub failed_condition: String,
    pub oracle_normal: String,
    pub formula: String,
    pub matrix: String,
    pub facet: String,
    pub primes: String,
    pub facets: String,
    pub reconciled: String,
    pub injective: String,
    pub witness: String,
    pub agree: bool,
    pub notes: String,
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

impl CsvRow {
    pub fn from_row(f: Family, r: &SweepRow) -> Self {
        let c = &r.check;
        let mut notes = c.disagreements.clone();
        notes.extend(c.errors.iter().cloned());
        CsvRow {
            index: r.index,
            family: match f {
                Family::One => "one".into(),
                Family::Two => "two".into(),
            },
            parameters: r.instance.parameters(),
            presentation: r.presentation.clone(),
            verdict: c.verdict.status.to_string(),
            failed_condition: opt(&c.verdict.failed_condition),
            oracle_normal: opt(&c.oracle_normal),
            formula: opt(&c.formula),
            matrix: opt(&c.matrix_route),
            facet: opt(&c.facet_route),
            primes: opt(&c.prime_count),
            facets: opt(&c.facet_count),
            reconciled: opt(&c.reconciled),
            injective: opt(&c.injective),
            witness: c.witness.clone().unwrap_or_default(),
            agree: c.agree(),
            notes: notes.join("; "),
        }
    }
}

/// Writes the schema comment line followed by the CSV rows.
pub fn write_csv<W: Write>(mut w: W, f: Family, rows: &[SweepRow]) -> io::Result<()> {
    writeln!(w, "{CSV_SCHEMA}")?;
    let mut csv = csv::Writer::from_writer(w);
    for r in rows {
        csv.serialize(CsvRow::from_row(f, r))?;
    }
    csv.flush()
}

pub struct SweepSummary {
    pub rows: usize,
    pub disagreements: usize,
    pub unfinished: usize,
    pub exit: Exit,
}

pub fn cmd_sweep(
    f: Family,
    max_n: usize,
    max_exp: u64,
    degree_bound: usize,
    out: Option<&Path>,
) -> Result<(SweepSummary, String), InputError> {
    let (cap_n, cap_exp) = sweep_caps(f);
    if max_n > cap_n || max_exp > cap_exp || max_exp == 0 {
        return Err(InputError::Usage(format!(
            "this family accepts --max-n up to {cap_n} and --max-exp between 1 and {cap_exp}"
        )));
    }
    let opts = CheckOptions {
        oracles: OracleSet::ALL,
        degree_bound,
        injectivity_degree: Some(6),
    };
    let rows = run_sweep(family(f, max_n, max_exp), &opts);
    let disagreements = rows.iter().filter(|r| !r.check.agree()).count();
    let unfinished = rows.iter().filter(|r| r.check.resource_limited).count();
    let exit = if disagreements > 0 {
        Exit::Disagreement
    } else if unfinished > 0 {
        Exit::ResourceLimit
    } else {
        Exit::Ok
    };
    let mut stdout = Vec::new();
    match out {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|source| InputError::Io {
                path: path.display().to_string(),
                source,
            })?;
            write_csv(io::BufWriter::new(file), f, &rows).map_err(|source| InputError::Io {
                path: path.display().to_string(),
                source,
            })?;
        }
        None => write_csv(&mut stdout, f, &rows).expect("writing to memory"),
    }
    let summary = SweepSummary {
        rows: rows.len(),
        disagreements,
        unfinished,
        exit,
    };
    Ok((summary, String::from_utf8(stdout).expect("csv is UTF-8")))
}
