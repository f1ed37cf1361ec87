//! Experiment reports: CSV and plain-text table output.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use super::metrics::Metrics;
use super::EvalError;

/// Correction method compared in the experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Braille-space Hamming search.
    Ours,
    /// Frequency-ranked edit-distance speller.
    Baseline,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::Ours, Method::Baseline];

    pub fn label(self) -> &'static str {
        match self {
            Method::Ours => "ours",
            Method::Baseline => "baseline",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ours" => Ok(Method::Ours),
            "baseline" => Ok(Method::Baseline),
            other => Err(format!("unknown method {other:?}; expected ours or baseline")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub experiment: String,
    pub condition: String,
    pub method: Method,
    pub seed: u64,
    pub words: usize,
    pub metrics: Metrics,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReportMetadata {
    pub seed: u64,
    pub dictionary: String,
    /// Seconds since the Unix epoch; not written to the CSV.
    pub timestamp: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub rows: Vec<ReportRow>,
    pub metadata: ReportMetadata,
}

pub const CSV_HEADER: [&str; 11] = [
    "experiment",
    "condition",
    "method",
    "seed",
    "words",
    "avg_levenshtein",
    "hit_rate",
    "char_error",
    "word_error",
    "dict_coverage",
    "dictionary",
];

fn fixed(v: f64) -> String {
    format!("{v:.4}")
}

impl Report {
    pub fn row(&self, condition: &str, method: Method) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.condition == condition && r.method == method)
    }

    pub fn conditions(&self) -> Vec<&str> {
        let mut seen: Vec<&str> = Vec::new();
        for row in &self.rows {
            if !seen.contains(&row.condition.as_str()) {
                seen.push(&row.condition);
            }
        }
        seen
    }

    /// One line per row with fixed four-decimal numbers; identical inputs
    /// give byte-identical output.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), EvalError> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(CSV_HEADER)?;
        for row in &self.rows {
            let m = &row.metrics;
            writer.write_record([
                row.experiment.clone(),
                row.condition.clone(),
                row.method.to_string(),
                row.seed.to_string(),
                row.words.to_string(),
                fixed(m.avg_levenshtein),
                fixed(m.hit_rate),
                fixed(m.char_error),
                fixed(m.word_error),
                fixed(m.dict_coverage),
                self.metadata.dictionary.clone(),
            ])?;
        }
        writer.flush().map_err(|e| EvalError::Csv(e.into()))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is UTF-8")
    }
}

/// Side-by-side table of both methods per condition.
impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<14} {:>7} {:>9} {:>9} {:>9} {:>9} {:>8} {:>8} {:>8}",
            "condition", "words", "lev ours", "lev base", "hit ours", "hit base", "char err", "word err", "coverage"
        )?;
        for condition in self.conditions() {
            let (Some(ours), Some(base)) = (self.row(condition, Method::Ours), self.row(condition, Method::Baseline))
            else {
                continue;
            };
            writeln!(
                f,
                "{:<14} {:>7} {:>9.3} {:>9.3} {:>9.1} {:>9.1} {:>8.1} {:>8.1} {:>8.1}",
                condition,
                ours.words,
                ours.metrics.avg_levenshtein,
                base.metrics.avg_levenshtein,
                ours.metrics.hit_rate,
                base.metrics.hit_rate,
                ours.metrics.char_error,
                ours.metrics.word_error,
                ours.metrics.dict_coverage,
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let metrics = Metrics {
            avg_levenshtein: 0.123456,
            hit_rate: 96.25,
            char_error: 1.0 / 3.0,
            word_error: 2.0,
            dict_coverage: 97.4,
        };
        let rows = Method::ALL
            .iter()
            .map(|&method| ReportRow {
                experiment: "a".into(),
                condition: "2.5%".into(),
                method,
                seed: 7,
                words: 1600,
                metrics,
            })
            .collect();
        Report {
            rows,
            metadata: ReportMetadata {
                seed: 7,
                dictionary: "pt.txt".into(),
                timestamp: Some(1),
            },
        }
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv_string();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], CSV_HEADER.join(","));
        assert_eq!(lines[1], "a,2.5%,ours,7,1600,0.1235,96.2500,0.3333,2.0000,97.4000,pt.txt");
        assert!(lines[2].contains(",baseline,"));
    }

    #[test]
    fn table_has_one_line_per_condition() {
        let text = sample().to_string();
        assert_eq!(text.lines().count(), 2);
        assert!(text.lines().nth(1).unwrap().starts_with("2.5%"));
    }

    #[test]
    fn method_parsing() {
        assert_eq!("ours".parse::<Method>().unwrap(), Method::Ours);
        assert_eq!("baseline".parse::<Method>().unwrap(), Method::Baseline);
        assert!("bk".parse::<Method>().is_err());
    }
}
