//! Descriptive statistics and the experiment CSV schema.

use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Forty reference tesselation runs, in the
/// experiment CSV schema.
pub const REFERENCE_RUNS_CSV: &str = include_str!("../data/reference_runs.csv");

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("series `{0}` is empty")]
    Empty(String),
    #[error("series `{0}` and `{1}` differ in length")]
    LengthMismatch(String, String),
    #[error("need at least 2 values, `{0}` has fewer")]
    TooShort(String),
    #[error("series `{0}` has zero variance")]
    ZeroVariance(String),
    #[error("histogram needs at least one bin")]
    NoBins,
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub values: Vec<f64>,
}

impl Series {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Self {
        Series {
            label: label.into(),
            values,
        }
    }

    fn non_empty(&self) -> Result<&[f64], StatsError> {
        if self.values.is_empty() {
            Err(StatsError::Empty(self.label.clone()))
        } else {
            Ok(&self.values)
        }
    }

    fn mean(&self) -> Result<f64, StatsError> {
        let v = self.non_empty()?;
        Ok(v.iter().sum::<f64>() / v.len() as f64)
    }
}

/// Divisor of the variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Divisor {
    /// `n`
    Population,
    /// `n − 1`
    #[default]
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub median: f64,
    pub mean: f64,
    pub std: f64,
}

/// Median (even counts average the middle two), mean and standard deviation.
/// A single value has zero deviation under either divisor.
pub fn summary(s: &Series, divisor: Divisor) -> Result<Summary, StatsError> {
    let v = s.non_empty()?;
    let mut sorted = v.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    let mean = s.mean()?;
    let ss: f64 = v.iter().map(|x| (x - mean).powi(2)).sum();
    let d = match divisor {
        Divisor::Population => n as f64,
        Divisor::Sample => (n as f64 - 1.0).max(1.0),
    };
    Ok(Summary {
        median,
        mean,
        std: (ss / d).sqrt(),
    })
}

fn centered(x: &Series, y: &Series) -> Result<(Vec<f64>, Vec<f64>), StatsError> {
    if x.values.len() != y.values.len() {
        return Err(StatsError::LengthMismatch(x.label.clone(), y.label.clone()));
    }
    if x.values.len() < 2 {
        return Err(StatsError::TooShort(x.label.clone()));
    }
    let (mx, my) = (x.mean()?, y.mean()?);
    Ok((
        x.values.iter().map(|v| v - mx).collect(),
        y.values.iter().map(|v| v - my).collect(),
    ))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Sample Pearson correlation, clamped to `[−1, 1]`.
pub fn pearson(x: &Series, y: &Series) -> Result<f64, StatsError> {
    let (dx, dy) = centered(x, y)?;
    let (sxx, syy) = (dot(&dx, &dx), dot(&dy, &dy));
    if sxx == 0.0 {
        return Err(StatsError::ZeroVariance(x.label.clone()));
    }
    if syy == 0.0 {
        return Err(StatsError::ZeroVariance(y.label.clone()));
    }
    Ok((dot(&dx, &dy) / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
}

impl LinearFit {
    pub fn at(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }
}

/// Ordinary least squares fit of `y` on `x`.
pub fn linfit(x: &Series, y: &Series) -> Result<LinearFit, StatsError> {
    let (dx, dy) = centered(x, y)?;
    let sxx = dot(&dx, &dx);
    if sxx == 0.0 {
        return Err(StatsError::ZeroVariance(x.label.clone()));
    }
    let slope = dot(&dx, &dy) / sxx;
    Ok(LinearFit {
        slope,
        intercept: y.mean()? - slope * x.mean()?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    /// `bins + 1` increasing bin boundaries.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

/// Equal-width bins over `[min, max]`, right-open except the last. A
/// constant series puts everything in the first bin.
pub fn histogram(s: &Series, bins: usize) -> Result<Histogram, StatsError> {
    if bins == 0 {
        return Err(StatsError::NoBins);
    }
    let v = s.non_empty()?;
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / bins as f64;
    let edges = (0..=bins)
        .map(|i| if i == bins { hi } else { lo + width * i as f64 })
        .collect();
    let mut counts = vec![0; bins];
    for &x in v {
        let i = if width > 0.0 {
            (((x - lo) / width) as usize).min(bins - 1)
        } else {
            0
        };
        counts[i] += 1;
    }
    Ok(Histogram { edges, counts })
}

/// Maximum-likelihood Poisson rate: the sample mean.
pub fn poisson_mle(s: &Series) -> Result<f64, StatsError> {
    s.mean()
}

/// One tesselation of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub run: usize,
    pub vertices: usize,
    pub edges: usize,
    /// Bounded faces.
    pub regions: usize,
    pub sites_recursive: usize,
    pub sites_sequential: usize,
    pub alpha_deg: f64,
    pub epsilon: f64,
}

/// Experiment columns as series, in schema order after `run`.
pub fn columns(records: &[ExperimentRecord]) -> Vec<Series> {
    let col = |name: &str, f: &dyn Fn(&ExperimentRecord) -> f64| {
        Series::new(name, records.iter().map(f).collect())
    };
    vec![
        col("vertices", &|r| r.vertices as f64),
        col("edges", &|r| r.edges as f64),
        col("regions", &|r| r.regions as f64),
        col("sites_recursive", &|r| r.sites_recursive as f64),
        col("sites_sequential", &|r| r.sites_sequential as f64),
        col("alpha_deg", &|r| r.alpha_deg),
        col("epsilon", &|r| r.epsilon),
    ]
}

/// Labels of the summary rows that may follow the records.
pub const SUMMARY_ROWS: [&str; 3] = ["MED", "AVG", "STD"];

/// Reads experiment records, skipping summary rows.
pub fn read_records(reader: impl io::Read) -> Result<Vec<ExperimentRecord>, StatsError> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers()?.clone();
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        if row.get(0).is_some_and(|run| SUMMARY_ROWS.contains(&run)) {
            continue;
        }
        out.push(row.deserialize(Some(&headers))?);
    }
    Ok(out)
}

pub fn read_records_file(path: impl AsRef<Path>) -> Result<Vec<ExperimentRecord>, StatsError> {
    read_records(std::fs::File::open(path)?)
}

pub fn write_records(
    writer: impl io::Write,
    records: &[ExperimentRecord],
) -> Result<(), StatsError> {
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Records followed by MED, AVG and STD rows (sample divisor).
pub fn write_table(writer: impl io::Write, records: &[ExperimentRecord]) -> Result<(), StatsError> {
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(r)?;
    }
    if !records.is_empty() {
        let sums = columns(records)
            .iter()
            .map(|c| summary(c, Divisor::Sample))
            .collect::<Result<Vec<_>, _>>()?;
        for (label, pick) in SUMMARY_ROWS.iter().zip([
            |s: &Summary| s.median,
            |s: &Summary| s.mean,
            |s: &Summary| s.std,
        ]) {
            let mut row = vec![label.to_string()];
            row.extend(sums.iter().map(|s| pick(s).to_string()));
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// The reference runs as records.
pub fn reference_runs() -> Vec<ExperimentRecord> {
    read_records(REFERENCE_RUNS_CSV.as_bytes()).expect("bundled table parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[f64]) -> Series {
        Series::new("s", v.to_vec())
    }

    #[test]
    fn small_summaries() {
        let r = summary(&s(&[1.0, 2.0, 3.0]), Divisor::Sample).unwrap();
        assert_eq!((r.median, r.mean, r.std), (2.0, 2.0, 1.0));
        assert_eq!(
            summary(&s(&[4.0, 1.0, 3.0, 2.0]), Divisor::Sample)
                .unwrap()
                .median,
            2.5
        );
        let p = summary(&s(&[1.0, 3.0]), Divisor::Population).unwrap();
        assert_eq!(p.std, 1.0);
        assert!(matches!(
            summary(&s(&[]), Divisor::Sample),
            Err(StatsError::Empty(_))
        ));
    }

    #[test]
    fn perfect_correlations() {
        let x = s(&[1.0, 2.0, 3.0]);
        assert_eq!(pearson(&x, &s(&[2.0, 4.0, 6.0])).unwrap(), 1.0);
        assert_eq!(pearson(&x, &s(&[3.0, 2.0, 1.0])).unwrap(), -1.0);
        assert!(matches!(
            pearson(&x, &s(&[1.0, 1.0, 1.0])),
            Err(StatsError::ZeroVariance(_))
        ));
        assert!(matches!(
            pearson(&x, &s(&[1.0])),
            Err(StatsError::LengthMismatch(..))
        ));
    }

    #[test]
    fn fit_recovers_a_line() {
        let x = s(&[0.0, 1.0, 2.0, 5.0]);
        let y = Series::new("y", x.values.iter().map(|v| 2.0 * v + 1.0).collect());
        let f = linfit(&x, &y).unwrap();
        assert_eq!((f.slope, f.intercept), (2.0, 1.0));
        assert!(linfit(&s(&[3.0, 3.0]), &s(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn histogram_examples() {
        let h = histogram(&s(&(0..20).map(f64::from).collect::<Vec<_>>()), 20).unwrap();
        assert_eq!(h.counts, vec![1; 20]);
        assert_eq!(h.edges.len(), 21);
        let c = histogram(&s(&[7.0; 5]), 4).unwrap();
        assert_eq!(c.counts, vec![5, 0, 0, 0]);
        assert!(matches!(histogram(&s(&[1.0]), 0), Err(StatsError::NoBins)));
    }

    #[test]
    fn table_has_forty_rows() {
        let t = reference_runs();
        assert_eq!(t.len(), 40);
        assert_eq!(t[0].edges, 142);
        assert_eq!(t[39].sites_sequential, 8616);
    }
}
