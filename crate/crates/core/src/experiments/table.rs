use std::io::{Read, Write};
use std::path::Path;

use super::run::{Metadata, SweepRecord};
use crate::error::{Error, Result};

/// Column order of the results table.
pub const COLUMNS: [&str; 34] = [
    "figure",
    "panel",
    "scenario",
    "scenario_param",
    "p",
    "omega",
    "gamma",
    "omega_over_gamma",
    "n",
    "selection",
    "time",
    "gamma_t",
    "entropy_s",
    "chi_e1",
    "chi_e1_normalized",
    "acc_mi_e1",
    "redundancy",
    "redundancy_fraction_size",
    "redundancy_defined",
    "pointer_fidelity",
    "pointer_theta",
    "pointer_phi",
    "sbs_fraction_size",
    "sbs_reconstruction_error",
    "sbs_max_distinguishability",
    "sbs_decoherence_residual",
    "flag",
    "threshold_mode",
    "delta",
    "quantifier",
    "pointer_convention",
    "grid_id",
    "version",
    "schema",
];

const SCHEMA: &str = "1";

fn float(x: f64) -> String {
    format!("{x:.11e}")
}

fn opt_float(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

fn opt_usize(x: Option<usize>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn row(r: &SweepRecord) -> [String; 34] {
    [
        r.figure.clone(),
        r.panel.clone(),
        r.scenario.clone(),
        opt_float(r.scenario_param),
        float(r.p),
        float(r.omega),
        float(r.gamma),
        float(r.omega_over_gamma),
        r.n.to_string(),
        r.selection.clone(),
        opt_float(r.time),
        opt_float(r.gamma_t),
        opt_float(r.entropy_s),
        opt_float(r.chi_e1),
        opt_float(r.chi_e1_normalized),
        opt_float(r.acc_mi_e1),
        opt_usize(r.redundancy),
        opt_usize(r.redundancy_fraction_size),
        r.redundancy_defined.map(|b| b.to_string()).unwrap_or_default(),
        opt_float(r.pointer_fidelity),
        opt_float(r.pointer_theta),
        opt_float(r.pointer_phi),
        opt_usize(r.sbs_fraction_size),
        opt_float(r.sbs_reconstruction_error),
        opt_float(r.sbs_max_distinguishability),
        opt_float(r.sbs_decoherence_residual),
        r.flag.clone(),
        r.meta.threshold_mode.clone(),
        float(r.meta.delta),
        r.meta.quantifier.clone(),
        r.meta.pointer_convention.clone(),
        r.meta.grid_id.clone(),
        r.meta.version.clone(),
        SCHEMA.to_string(),
    ]
}

/// Writes `records` as CSV with a header row. Floats carry 12 significant
/// digits; absent values are empty cells.
pub fn write_table<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in records {
        w.write_record(row(r))?;
    }
    w.flush()?;
    Ok(())
}

/// [`write_table`] to a file, creating parent directories.
pub fn emit_table(records: &[SweepRecord], path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let file = std::fs::File::create(path)?;
    write_table(records, std::io::BufWriter::new(file))
}

struct Cells<'a> {
    rec: &'a csv::StringRecord,
    line: u64,
}

impl Cells<'_> {
    fn err(&self, col: usize, what: &str) -> Error {
        Error::Table(format!(
            "line {}: column {}: {what}",
            self.line, COLUMNS[col]
        ))
    }

    fn text(&self, col: usize) -> String {
        self.rec[col].to_string()
    }

    fn float(&self, col: usize) -> Result<f64> {
        self.rec[col].parse().map_err(|_| self.err(col, "expected a number"))
    }

    fn opt_float(&self, col: usize) -> Result<Option<f64>> {
        if self.rec[col].is_empty() {
            Ok(None)
        } else {
            self.float(col).map(Some)
        }
    }

    fn usize(&self, col: usize) -> Result<usize> {
        self.rec[col].parse().map_err(|_| self.err(col, "expected an integer"))
    }

    fn opt_usize(&self, col: usize) -> Result<Option<usize>> {
        if self.rec[col].is_empty() {
            Ok(None)
        } else {
            self.usize(col).map(Some)
        }
    }

    fn opt_bool(&self, col: usize) -> Result<Option<bool>> {
        match &self.rec[col] {
            "" => Ok(None),
            "true" => Ok(Some(true)),
            "false" => Ok(Some(false)),
            _ => Err(self.err(col, "expected true or false")),
        }
    }
}

fn parse_row(rec: &csv::StringRecord, line: u64) -> Result<SweepRecord> {
    if rec.len() != COLUMNS.len() {
        return Err(Error::Table(format!(
            "line {line}: expected {} columns, found {}",
            COLUMNS.len(),
            rec.len()
        )));
    }
    let c = Cells { rec, line };
    Ok(SweepRecord {
        figure: c.text(0),
        panel: c.text(1),
        scenario: c.text(2),
        scenario_param: c.opt_float(3)?,
        p: c.float(4)?,
        omega: c.float(5)?,
        gamma: c.float(6)?,
        omega_over_gamma: c.float(7)?,
        n: c.usize(8)?,
        selection: c.text(9),
        time: c.opt_float(10)?,
        gamma_t: c.opt_float(11)?,
        entropy_s: c.opt_float(12)?,
        chi_e1: c.opt_float(13)?,
        chi_e1_normalized: c.opt_float(14)?,
        acc_mi_e1: c.opt_float(15)?,
        redundancy: c.opt_usize(16)?,
        redundancy_fraction_size: c.opt_usize(17)?,
        redundancy_defined: c.opt_bool(18)?,
        pointer_fidelity: c.opt_float(19)?,
        pointer_theta: c.opt_float(20)?,
        pointer_phi: c.opt_float(21)?,
        sbs_fraction_size: c.opt_usize(22)?,
        sbs_reconstruction_error: c.opt_float(23)?,
        sbs_max_distinguishability: c.opt_float(24)?,
        sbs_decoherence_residual: c.opt_float(25)?,
        flag: c.text(26),
        meta: Metadata {
            threshold_mode: c.text(27),
            delta: c.float(28)?,
            quantifier: c.text(29),
            pointer_convention: c.text(30),
            grid_id: c.text(31),
            version: c.text(32),
        },
    })
}

/// Parses a table produced by [`write_table`].
pub fn parse_table<R: Read>(input: R) -> Result<Vec<SweepRecord>> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers()?.clone();
    if header.iter().ne(COLUMNS.iter().copied()) {
        return Err(Error::Table("header does not match the expected columns".into()));
    }
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = rec.position().map_or(i as u64 + 2, |p| p.line());
        out.push(parse_row(&rec, line)?);
    }
    Ok(out)
}

pub fn read_table(path: &Path) -> Result<Vec<SweepRecord>> {
    parse_table(std::io::BufReader::new(std::fs::File::open(path)?))
}
