//! Batches of generated tesselations solved with both growth variants.

use std::fmt::Write as _;

use givp::solver::{solve, SolverConfig, SolverError, Variant};
use givp::stats::{
    self, columns, histogram, linfit, pearson, summary, Divisor, ExperimentRecord, Histogram,
    LinearFit, StatsError, Summary,
};
use givp::tessgen::{generate, TessGenConfig, TessGenError};
use givp::verify::{exact_guard_check, VerifyError};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("runs must be positive")]
    NoRuns,
    #[error("point ramp {0}..{1} is empty or below 3")]
    Ramp(usize, usize),
    #[error("run {run} (seed {seed}): {source}")]
    Generate {
        run: usize,
        seed: u64,
        source: TessGenError,
    },
    #[error("run {run} (seed {seed}), {variant}: {source}")]
    Solve {
        run: usize,
        seed: u64,
        variant: Variant,
        source: SolverError,
    },
    #[error("run {run} (seed {seed}), {variant}: {source}")]
    Verify {
        run: usize,
        seed: u64,
        variant: Variant,
        source: VerifyError,
    },
    #[error("run {run} (seed {seed}), {variant}: certificate failed on edge {edge}: {message}")]
    Uncertified {
        run: usize,
        seed: u64,
        variant: Variant,
        edge: usize,
        message: String,
    },
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// Run sizes grow linearly from `min_points` to `max_points`; each run draws
/// `attempts_ratio · points` random chords.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub runs: usize,
    pub seed: u64,
    pub min_points: usize,
    pub max_points: usize,
    pub attempts_ratio: f64,
}

impl ExperimentConfig {
    pub fn new(runs: usize, seed: u64) -> Self {
        ExperimentConfig {
            runs,
            seed,
            min_points: 30,
            max_points: 175,
            attempts_ratio: 0.75,
        }
    }

    /// Generator settings of run `i`, counted from 1.
    pub fn run_config(&self, i: usize) -> TessGenConfig {
        let f = if self.runs > 1 {
            (i - 1) as f64 / (self.runs - 1) as f64
        } else {
            0.0
        };
        let points = (self.min_points as f64 + f * (self.max_points - self.min_points) as f64)
            .round() as usize;
        let attempts = (points as f64 * self.attempts_ratio).round() as usize;
        TessGenConfig::new(self.seed.wrapping_add(i as u64), points, attempts)
    }
}

/// Generates, solves and certifies every run. Records come back in run order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    if cfg.runs == 0 {
        return Err(ExperimentError::NoRuns);
    }
    if cfg.min_points < 3 || cfg.max_points < cfg.min_points {
        return Err(ExperimentError::Ramp(cfg.min_points, cfg.max_points));
    }
    (1..=cfg.runs)
        .into_par_iter()
        .map(|run| run_one(run, &cfg.run_config(run)))
        .collect()
}

fn run_one(run: usize, tg: &TessGenConfig) -> Result<ExperimentRecord, ExperimentError> {
    let seed = tg.seed;
    let g = generate(tg).map_err(|source| ExperimentError::Generate { run, seed, source })?;
    let mut sites = [0; 2];
    let mut alpha = 0.0;
    let mut eps = 0.0;
    for (slot, variant) in sites
        .iter_mut()
        .zip([Variant::Recursive, Variant::Sequential])
    {
        let sol =
            solve(&g, &SolverConfig::new(variant)).map_err(|source| ExperimentError::Solve {
                run,
                seed,
                variant,
                source,
            })?;
        let cert = exact_guard_check(&g, &sol).map_err(|source| ExperimentError::Verify {
            run,
            seed,
            variant,
            source,
        })?;
        if let Some(bad) = cert.failures().next() {
            let message = bad
                .counterexample
                .as_ref()
                .map_or(String::new(), |c| c.message.clone());
            return Err(ExperimentError::Uncertified {
                run,
                seed,
                variant,
                edge: bad.edge,
                message,
            });
        }
        *slot = sol.sites.len();
        alpha = sol.report.alpha.to_degrees();
        eps = sol.report.epsilon;
    }
    Ok(ExperimentRecord {
        run,
        vertices: g.num_vertices(),
        edges: g.num_edges(),
        regions: g.num_bounded_faces(),
        sites_recursive: sites[0],
        sites_sequential: sites[1],
        alpha_deg: alpha,
        epsilon: eps,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Correlation {
    pub x: String,
    pub y: String,
    pub r: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Regression {
    pub y: String,
    pub fit: LinearFit,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub summaries: Vec<(String, Summary)>,
    pub correlations: Vec<Correlation>,
    pub regressions: Vec<Regression>,
    pub poisson: Vec<(String, f64)>,
    pub histograms: Vec<(String, Histogram)>,
}

/// Summary statistics, the three correlations, sites-versus-edges fits and
/// 20-bin histograms of the angle and offset columns.
pub fn analyse(records: &[ExperimentRecord]) -> Result<Analysis, ExperimentError> {
    let cols = columns(records);
    let [_, edges, _, rec, seq, alpha, eps] = &cols[..] else {
        unreachable!("seven columns")
    };
    let summaries = cols
        .iter()
        .map(|c| Ok((c.label.clone(), summary(c, Divisor::Sample)?)))
        .collect::<Result<_, StatsError>>()?;
    let corr = |x: &stats::Series, y: &stats::Series| -> Result<Correlation, StatsError> {
        Ok(Correlation {
            x: x.label.clone(),
            y: y.label.clone(),
            r: pearson(x, y)?,
        })
    };
    let correlations = vec![corr(alpha, edges)?, corr(eps, edges)?, corr(alpha, eps)?];
    let regressions = vec![
        Regression {
            y: seq.label.clone(),
            fit: linfit(edges, seq)?,
        },
        Regression {
            y: rec.label.clone(),
            fit: linfit(edges, rec)?,
        },
    ];
    let poisson = vec![
        (alpha.label.clone(), stats::poisson_mle(alpha)?),
        (eps.label.clone(), stats::poisson_mle(eps)?),
    ];
    let histograms = vec![
        (alpha.label.clone(), histogram(alpha, 20)?),
        (eps.label.clone(), histogram(eps, 20)?),
    ];
    Ok(Analysis {
        summaries,
        correlations,
        regressions,
        poisson,
        histograms,
    })
}

impl Analysis {
    /// Plain-text report, one fact per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (label, m) in &self.summaries {
            let _ = writeln!(
                s,
                "summary {label} median {} mean {} std {}",
                m.median, m.mean, m.std
            );
        }
        for c in &self.correlations {
            let _ = writeln!(s, "corr {} {} {}", c.x, c.y, c.r);
        }
        for r in &self.regressions {
            let _ = writeln!(
                s,
                "fit {} edges slope {} intercept {}",
                r.y, r.fit.slope, r.fit.intercept
            );
        }
        for (label, l) in &self.poisson {
            let _ = writeln!(s, "poisson {label} rate {l}");
        }
        for (label, h) in &self.histograms {
            let edges: Vec<String> = h.edges.iter().map(|e| e.to_string()).collect();
            let counts: Vec<String> = h.counts.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(
                s,
                "histogram {label} edges {} counts {}",
                edges.join(","),
                counts.join(",")
            );
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramp_spans_the_configured_sizes() {
        let cfg = ExperimentConfig::new(40, 100);
        assert_eq!(cfg.run_config(1).n_points, 30);
        assert_eq!(cfg.run_config(40).n_points, 175);
        assert_eq!(cfg.run_config(40).n_edge_attempts, 131);
        assert_eq!(cfg.run_config(3).seed, 103);
        assert_eq!(ExperimentConfig::new(1, 0).run_config(1).n_points, 30);
    }

    #[test]
    fn zero_runs_are_refused() {
        assert!(matches!(
            run_experiment(&ExperimentConfig::new(0, 1)),
            Err(ExperimentError::NoRuns)
        ));
    }
}
