use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use givp::geom::{Point, Rect};
use givp::pslg;
use givp::solver::{solve, Solution, SolverConfig, Variant};
use givp::stats::write_table;
use givp::tessgen::{generate_file, TessGenConfig};
use givp::verify::{
    brute_force_voronoi, edge_coverage_check, exact_guard_check, sampled_nearest_pair_check,
    verification_box, CheckReport, BRUTE_FORCE_CAP,
};
use givp_cli::experiment::{analyse, run_experiment, ExperimentConfig};
use givp_cli::render::render_svg;

/// Places Voronoi generators whose diagram contains a planar straight-line graph.
#[derive(Parser)]
#[command(name = "givp", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random tesselation.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        points: usize,
        /// Random chords to draw [default: --points]
        #[arg(long)]
        edge_attempts: Option<usize>,
        /// Sampling box as `xmin,ymin,xmax,ymax`.
        #[arg(long = "box", value_parser = parse_box)]
        bbox: Option<Rect>,
        /// Smallest angle between a new edge and existing ones, in degrees.
        #[arg(long)]
        min_angle: Option<f64>,
        /// Smallest clearance, as a fraction of the box diagonal.
        #[arg(long)]
        min_feature: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Place sites for a graph file.
    Solve {
        input: PathBuf,
        #[arg(long, default_value = "sequential", value_parser = parse_variant)]
        variant: Variant,
        #[arg(long, default_value_t = 0.995)]
        safety: f64,
        /// Relative tolerance (times the bounding-box diagonal).
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Sentinel offset to use instead of the largest admissible one.
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check that a solution's Voronoi diagram contains every edge.
    Verify {
        pslg: PathBuf,
        solution: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        mode: Mode,
        /// Probes per interval for the sampled check.
        #[arg(long, default_value_t = 8)]
        samples: usize,
        /// Largest site count the brute-force diagram accepts.
        #[arg(long, default_value_t = BRUTE_FORCE_CAP)]
        max_sites: usize,
        /// Write the per-edge verdicts as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Draw a graph and optionally a solution as SVG.
    Render {
        pslg: PathBuf,
        #[arg(long)]
        solution: Option<PathBuf>,
        /// Overlay the Voronoi diagram of the solution's sites.
        #[arg(long)]
        voronoi: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve a ramp of random tesselations and summarize the counts.
    Experiment {
        #[arg(long)]
        runs: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 30)]
        min_points: usize,
        #[arg(long, default_value_t = 175)]
        max_points: usize,
        #[arg(long, default_value_t = 0.75)]
        attempts_ratio: f64,
        #[arg(long)]
        csv: PathBuf,
        /// Also write the summary text to this file.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Mode {
    Certificate,
    Bruteforce,
    Sampled,
    All,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse()
        .map_err(|e: givp::solver::UnknownVariant| e.to_string())
}

fn parse_box(s: &str) -> Result<Rect, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [x0, y0, x1, y1] => Ok(Rect::new(Point::new(x0, y0), Point::new(x1, y1))),
        _ => Err(format!(
            "expected 4 comma-separated numbers, got {}",
            v.len()
        )),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", format!("{e:#}").replace('\n', " "));
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Cmd) -> Result<ExitCode> {
    match cmd {
        Cmd::Gen {
            seed,
            points,
            edge_attempts,
            bbox,
            min_angle,
            min_feature,
            out,
        } => {
            let mut cfg = TessGenConfig::new(seed, points, edge_attempts.unwrap_or(points));
            if let Some(b) = bbox {
                cfg.bbox = b;
            }
            if let Some(a) = min_angle {
                cfg.min_angle_deg = a;
            }
            if let Some(f) = min_feature {
                cfg.min_feature = f;
            }
            let file = generate_file(&cfg)?;
            fs::write(&out, file.to_json_string())
                .with_context(|| format!("writing {}", out.display()))?;
            let g = file.to_pslg()?;
            println!(
                "vertices {} edges {} regions {}",
                g.num_vertices(),
                g.num_edges(),
                g.num_bounded_faces()
            );
        }
        Cmd::Solve {
            input,
            variant,
            safety,
            tol,
            epsilon,
            out,
        } => {
            let g = pslg::load(&input).with_context(|| format!("loading {}", input.display()))?;
            let cfg = SolverConfig {
                variant,
                safety,
                tol,
                epsilon_override: epsilon,
            };
            let sol = solve(&g, &cfg)?;
            sol.save(&out)
                .with_context(|| format!("writing {}", out.display()))?;
            let c = &sol.report.counts;
            println!(
                "variant {} sites {} pairs {} inner_circles {} epsilon {} alpha_deg {}",
                variant,
                c.sites,
                c.pairs,
                c.inner_circles,
                sol.report.epsilon,
                sol.report.alpha.to_degrees()
            );
        }
        Cmd::Verify {
            pslg: gpath,
            solution,
            mode,
            samples,
            max_sites,
            report,
        } => {
            let g = pslg::load(&gpath).with_context(|| format!("loading {}", gpath.display()))?;
            let sol = Solution::load(&solution)
                .with_context(|| format!("loading {}", solution.display()))?;
            let too_many = sol.sites.len() > max_sites;
            if mode == Mode::Bruteforce && too_many {
                bail!(
                    "brute-force check refused: {} sites exceed the cap of {max_sites}; use --mode certificate",
                    sol.sites.len()
                );
            }
            let mut reports: Vec<CheckReport> = Vec::new();
            if matches!(mode, Mode::Certificate | Mode::All) {
                reports.push(exact_guard_check(&g, &sol)?);
            }
            if matches!(mode, Mode::Bruteforce | Mode::All) {
                if too_many {
                    println!(
                        "bruteforce SKIPPED {} sites exceed the cap of {max_sites}",
                        sol.sites.len()
                    );
                } else {
                    let vd = brute_force_voronoi(&sol.sites, verification_box(&g))?;
                    let tol = 1e-6 * g.bbox().diagonal();
                    reports.push(edge_coverage_check(&g, &vd, tol, sol.report.epsilon));
                }
            }
            if matches!(mode, Mode::Sampled | Mode::All) {
                reports.push(sampled_nearest_pair_check(&g, &sol, samples)?);
            }
            for r in &reports {
                let name = serde_json::to_value(r.check)?;
                let name = name.as_str().unwrap_or_default();
                match r.failures().next() {
                    None => println!("{name} PASS"),
                    Some(v) => {
                        let msg = v.counterexample.as_ref().map_or("", |c| c.message.as_str());
                        println!("{name} FAIL edge {} {msg}", v.edge);
                    }
                }
            }
            if let Some(path) = report {
                fs::write(&path, serde_json::to_string_pretty(&reports)? + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if !reports.iter().all(|r| r.pass) {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Render {
            pslg: gpath,
            solution,
            voronoi,
            out,
        } => {
            let g = pslg::load(&gpath).with_context(|| format!("loading {}", gpath.display()))?;
            let sol = solution
                .map(|p| Solution::load(&p).with_context(|| format!("loading {}", p.display())))
                .transpose()?;
            let vd = match (&sol, voronoi) {
                (Some(s), true) if !s.sites.is_empty() => {
                    if s.sites.len() > BRUTE_FORCE_CAP {
                        bail!(
                            "voronoi overlay refused: {} sites exceed the cap of {BRUTE_FORCE_CAP}",
                            s.sites.len()
                        );
                    }
                    Some(brute_force_voronoi(&s.sites, verification_box(&g))?)
                }
                _ => None,
            };
            fs::write(&out, render_svg(&g, sol.as_ref(), vd.as_ref()))
                .with_context(|| format!("writing {}", out.display()))?;
        }
        Cmd::Experiment {
            runs,
            seed,
            min_points,
            max_points,
            attempts_ratio,
            csv,
            summary,
        } => {
            let cfg = ExperimentConfig {
                runs,
                seed,
                min_points,
                max_points,
                attempts_ratio,
            };
            let records = run_experiment(&cfg)?;
            let mut buf = Vec::new();
            write_table(&mut buf, &records)?;
            fs::write(&csv, buf).with_context(|| format!("writing {}", csv.display()))?;
            let text = if records.len() >= 2 {
                analyse(&records)?.to_text()
            } else {
                String::from("analysis needs at least 2 runs\n")
            };
            print!("{text}");
            if let Some(path) = summary {
                fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
