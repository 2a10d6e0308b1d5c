//! Result records and their CSV/JSON files.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::CliError;

/// Observable family that produced a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Multiport,
    General,
    #[value(skip)]
    SternGerlach,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Multiport => "multiport",
            Self::General => "general",
            Self::SternGerlach => "stern-gerlach",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// One optimization result. `settings` holds the flattened angles in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub n: usize,
    pub model: Model,
    pub f_max: f64,
    /// Noise fraction above which the state is separable, `N/(N+1)`.
    pub separability_bound: f64,
    pub evaluations: u64,
    pub lp_solves: u64,
    pub wall_time_seconds: f64,
    pub seed: u64,
    pub settings: Vec<f64>,
}

pub fn separability_bound(n: usize) -> f64 {
    n as f64 / (n as f64 + 1.0)
}

/// CSV shape of [`ResultRecord`]: settings joined by `;`.
#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    n: usize,
    model: Model,
    f_max: f64,
    separability_bound: f64,
    evaluations: u64,
    lp_solves: u64,
    wall_time_seconds: f64,
    seed: u64,
    settings: String,
}

/// 17 significant digits, enough to round-trip any `f64`.
fn format_angle(x: f64) -> String {
    format!("{x:.16e}")
}

impl From<&ResultRecord> for CsvRow {
    fn from(r: &ResultRecord) -> Self {
        Self {
            n: r.n,
            model: r.model,
            f_max: r.f_max,
            separability_bound: r.separability_bound,
            evaluations: r.evaluations,
            lp_solves: r.lp_solves,
            wall_time_seconds: r.wall_time_seconds,
            seed: r.seed,
            settings: r.settings.iter().map(|&x| format_angle(x)).collect::<Vec<_>>().join(";"),
        }
    }
}

impl TryFrom<CsvRow> for ResultRecord {
    type Error = String;

    fn try_from(row: CsvRow) -> Result<Self, String> {
        let settings = if row.settings.trim().is_empty() {
            Vec::new()
        } else {
            row.settings
                .split(';')
                .map(|s| s.trim().parse::<f64>().map_err(|e| format!("settings entry {s:?}: {e}")))
                .collect::<Result<_, _>>()?
        };
        Ok(Self {
            n: row.n,
            model: row.model,
            f_max: row.f_max,
            separability_bound: row.separability_bound,
            evaluations: row.evaluations,
            lp_solves: row.lp_solves,
            wall_time_seconds: row.wall_time_seconds,
            seed: row.seed,
            settings,
        })
    }
}

pub fn write_records<W: Write>(out: W, records: &[ResultRecord], format: Format) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in records {
                w.serialize(CsvRow::from(r)).map_err(|e| CliError::Output(e.to_string()))?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, records).map_err(|e| CliError::Output(e.to_string()))?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Records read back from a file. Unparseable records are kept as errors
/// so a report can name them.
pub type ParsedRecords = Vec<Result<ResultRecord, String>>;

/// Read records in either format; JSON is recognized by a leading `[`.
pub fn read_records<R: Read>(mut input: R) -> Result<ParsedRecords, CliError> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    if text.trim_start().starts_with('[') {
        let values: Vec<serde_json::Value> =
            serde_json::from_str(&text).map_err(|e| CliError::Integrity(format!("malformed JSON: {e}")))?;
        return Ok(values
            .into_iter()
            .map(|v| serde_json::from_value(v).map_err(|e| e.to_string()))
            .collect());
    }
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    Ok(reader
        .deserialize::<CsvRow>()
        .map(|row| row.map_err(|e| e.to_string()).and_then(ResultRecord::try_from))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ResultRecord {
        ResultRecord {
            n: 3,
            model: Model::Multiport,
            f_max: 0.303_847_577_293_368_1,
            separability_bound: separability_bound(3),
            evaluations: 1234,
            lp_solves: 1235,
            wall_time_seconds: 0.125,
            seed: u64::MAX,
            settings: vec![0.0, std::f64::consts::PI, 1e-300, 6.283_185_307_179_585, 0.1 + 0.2],
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let mut buf = Vec::new();
        write_records(&mut buf, &[sample(), sample()], Format::Csv).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(
            "n,model,f_max,separability_bound,evaluations,lp_solves,wall_time_seconds,seed,settings\n"
        ));
        let back = read_records(buf.as_slice()).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0].as_ref().unwrap(), &sample());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let mut buf = Vec::new();
        write_records(&mut buf, &[sample()], Format::Json).unwrap();
        let back = read_records(buf.as_slice()).unwrap();
        assert_eq!(back[0].as_ref().unwrap(), &sample());
    }

    #[test]
    fn angles_use_seventeen_digits() {
        assert_eq!(format_angle(0.1), "1.0000000000000001e-1");
        assert_eq!(format_angle(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn bad_field_is_reported_per_record() {
        let mut buf = Vec::new();
        write_records(&mut buf, &[sample(), sample()], Format::Csv).unwrap();
        let text = String::from_utf8(buf).unwrap().replacen("0.3038475772933681", "oops", 1);
        let back = read_records(text.as_bytes()).unwrap();
        assert!(back[0].is_err());
        assert!(back[1].is_ok());
    }

    #[test]
    fn model_names() {
        assert_eq!(Model::SternGerlach.as_str(), "stern-gerlach");
        assert_eq!(serde_json::to_string(&Model::SternGerlach).unwrap(), "\"stern-gerlach\"");
    }
}
