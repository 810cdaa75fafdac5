//! Per-trial result records and their stable CSV schema.
//!
//! The schema is versioned: `CSV_SCHEMA_VERSION` names the current column
//! layout and the reader rejects any file whose header row differs from it,
//! so records written today stay parseable or fail loudly, never silently
//! shift meaning.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Format version for [`CSV_COLUMNS`]. Bump it whenever the column layout
/// changes.
pub const CSV_SCHEMA_VERSION: u32 = 1;

/// Fixed column order of the record CSV. The header row doubles as the
/// schema sentinel for [`CSV_SCHEMA_VERSION`].
pub const CSV_COLUMNS: [&str; 16] = [
    "trial_id",
    "seed",
    "problem",
    "n",
    "algo",
    "mutation",
    "crossover",
    "pc",
    "mu",
    "budget",
    "evaluations_used",
    "generations",
    "first_pareto_hit_evals",
    "coverage_fraction",
    "success",
    "wall_time_ms",
];

/// One finished trial. Optional fields render as empty CSV cells.
///
/// Selector fields hold the canonical strings of the corresponding
/// [`super::spec`] types, so a record round-trips between memory and CSV
/// without loss.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub trial_id: u64,
    pub seed: u64,
    pub problem: String,
    pub n: usize,
    pub algo: String,
    pub mutation: String,
    pub crossover: String,
    pub pc: f64,
    /// Unset for the single-archive loop, which has no population size.
    pub mu: Option<usize>,
    pub budget: u64,
    pub evaluations_used: u64,
    pub generations: u64,
    /// Evaluation count at the first appearance of a Pareto-optimal vector;
    /// unset when the run never reached the front.
    pub first_pareto_hit_evals: Option<u64>,
    pub coverage_fraction: f64,
    pub success: bool,
    /// Only recorded when timing is switched on; timing values vary between
    /// runs, so they are off by default to keep output byte-identical.
    pub wall_time_ms: Option<u64>,
}

impl TrialRecord {
    /// Structural invariants every record must satisfy: success means full
    /// coverage, and a front hit cannot postdate the evaluations used.
    pub fn validate(&self) -> Result<()> {
        if self.success != (self.coverage_fraction == 1.0) {
            return Err(Error::Parse(format!(
                "record {}: success={} contradicts coverage_fraction={}",
                self.trial_id, self.success, self.coverage_fraction
            )));
        }
        if let Some(hit) = self.first_pareto_hit_evals {
            if hit > self.evaluations_used {
                return Err(Error::Parse(format!(
                    "record {}: first_pareto_hit_evals={hit} exceeds evaluations_used={}",
                    self.trial_id, self.evaluations_used
                )));
            }
        }
        Ok(())
    }

    fn to_fields(&self) -> [String; 16] {
        [
            self.trial_id.to_string(),
            self.seed.to_string(),
            self.problem.clone(),
            self.n.to_string(),
            self.algo.clone(),
            self.mutation.clone(),
            self.crossover.clone(),
            self.pc.to_string(),
            self.mu.map(|m| m.to_string()).unwrap_or_default(),
            self.budget.to_string(),
            self.evaluations_used.to_string(),
            self.generations.to_string(),
            self.first_pareto_hit_evals
                .map(|e| e.to_string())
                .unwrap_or_default(),
            self.coverage_fraction.to_string(),
            self.success.to_string(),
            self.wall_time_ms.map(|t| t.to_string()).unwrap_or_default(),
        ]
    }

    fn from_row(row: &csv::StringRecord, line: u64) -> Result<TrialRecord> {
        if row.len() != CSV_COLUMNS.len() {
            return Err(Error::Parse(format!(
                "line {line}: expected {} fields, found {}",
                CSV_COLUMNS.len(),
                row.len()
            )));
        }
        let record = TrialRecord {
            trial_id: field(row, 0, line)?,
            seed: field(row, 1, line)?,
            problem: row[2].to_string(),
            n: field(row, 3, line)?,
            algo: row[4].to_string(),
            mutation: row[5].to_string(),
            crossover: row[6].to_string(),
            pc: field(row, 7, line)?,
            mu: optional_field(row, 8, line)?,
            budget: field(row, 9, line)?,
            evaluations_used: field(row, 10, line)?,
            generations: field(row, 11, line)?,
            first_pareto_hit_evals: optional_field(row, 12, line)?,
            coverage_fraction: field(row, 13, line)?,
            success: field(row, 14, line)?,
            wall_time_ms: optional_field(row, 15, line)?,
        };
        record.validate()?;
        Ok(record)
    }
}

fn field<T: FromStr>(row: &csv::StringRecord, idx: usize, line: u64) -> Result<T> {
    row[idx].parse().map_err(|_| {
        Error::Parse(format!(
            "line {line}, column {}: cannot parse {:?}",
            CSV_COLUMNS[idx], &row[idx]
        ))
    })
}

fn optional_field<T: FromStr>(
    row: &csv::StringRecord,
    idx: usize,
    line: u64,
) -> Result<Option<T>> {
    if row[idx].is_empty() {
        return Ok(None);
    }
    field(row, idx, line).map(Some)
}

/// Writes the header plus one row per record.
pub fn write_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_COLUMNS)?;
    for record in records {
        writer.write_record(record.to_fields())?;
    }
    writer.flush()?;
    Ok(())
}

/// The exact bytes `write_csv` would produce; handy for byte-identity
/// comparisons.
pub fn csv_bytes(records: &[TrialRecord]) -> Result<Vec<u8>> {
    let mut buffer = Vec::new();
    write_csv(records, &mut buffer)?;
    Ok(buffer)
}

pub fn write_csv_file<P: AsRef<Path>>(records: &[TrialRecord], path: P) -> Result<()> {
    write_csv(records, BufWriter::new(File::create(path)?))
}

/// Parses records, rejecting unknown headers and invariant-violating rows.
pub fn read_csv<R: Read>(input: R) -> Result<Vec<TrialRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header = reader.headers().map_err(Error::Csv)?;
    if header.iter().ne(CSV_COLUMNS) {
        return Err(Error::Parse(format!(
            "unrecognised CSV header {:?}; this reader understands schema \
             version {CSV_SCHEMA_VERSION} with columns {:?}",
            header.iter().collect::<Vec<_>>().join(","),
            CSV_COLUMNS.join(",")
        )));
    }
    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        // Header is line 1, first record line 2.
        records.push(TrialRecord::from_row(&row?, i as u64 + 2)?);
    }
    Ok(records)
}

pub fn read_csv_file<P: AsRef<Path>>(path: P) -> Result<Vec<TrialRecord>> {
    read_csv(BufReader::new(File::open(path)?))
}
