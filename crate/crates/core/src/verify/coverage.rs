use rayon::prelude::*;

use super::voronoi::site_tree;
use super::{Check, CheckReport, Counterexample, EdgeVerdict, VerifyError, VoronoiDiagram};
use crate::geom::{Point, Rect};
use crate::pslg::Pslg;
use crate::solver::{EdgeFrame, Solution};
use crate::spatial::EdgeIndex;

fn mirrored(frame: &EdgeFrame, a: Point, b: Point, tol: f64) -> bool {
    a != b && frame.side(a.midpoint(b)).abs() <= tol && (a - b).dot(frame.dir).abs() <= tol
}

/// Every input edge must be covered, up to `tol`, by Voronoi edges whose two
/// generating sites are mirrored across it. Each edge is probed at
/// `64·⌈len/spacing⌉` evenly spaced points.
pub fn edge_coverage_check(g: &Pslg, vd: &VoronoiDiagram, tol: f64, spacing: f64) -> CheckReport {
    let frames: Vec<EdgeFrame> = (0..g.num_edges()).map(|e| EdgeFrame::new(g, e)).collect();
    let index = EdgeIndex::new((0..g.num_edges()).map(|e| g.segment(e)).collect());
    let mut spans: Vec<Vec<(f64, f64)>> = vec![Vec::new(); frames.len()];
    for ve in vd.edges() {
        let (si, sj) = (vd.sites[ve.sites.0], vd.sites[ve.sites.1]);
        let bounds = Rect::bounding([&ve.a, &ve.b])
            .expect("two points")
            .inflate(tol);
        for e in index.intersecting(&bounds) {
            let fr = &frames[e];
            if fr.side(ve.a).abs() <= tol && fr.side(ve.b).abs() <= tol && mirrored(fr, si, sj, tol)
            {
                let (x, y) = (fr.param(ve.a), fr.param(ve.b));
                spans[e].push((x.min(y), x.max(y)));
            }
        }
    }
    let verdicts = frames
        .par_iter()
        .zip(spans.par_iter_mut())
        .map(|(fr, spans)| {
            spans.sort_by(|a, b| a.0.total_cmp(&b.0));
            let n = 64 * ((fr.len / spacing).ceil() as usize).max(1);
            let mut covered_to = f64::NEG_INFINITY;
            let mut next = 0;
            let mut result = Ok(());
            for k in 0..=n {
                let y = fr.len * k as f64 / n as f64;
                while next < spans.len() && spans[next].0 - tol <= y {
                    covered_to = covered_to.max(spans[next].1);
                    next += 1;
                }
                if y > covered_to + tol {
                    let x = fr.at(y);
                    result = Err(Counterexample {
                        point: Some(x),
                        ..Counterexample::new(format!(
                            "edge point ({}, {}) lies on no Voronoi edge of a mirrored pair",
                            x.x, x.y
                        ))
                    });
                    break;
                }
            }
            EdgeVerdict::from_result(fr.edge, result)
        })
        .collect();
    CheckReport::new(Check::Bruteforce, verdicts)
}

/// Probes `samples_per_interval` interior points between consecutive feet
/// (and between the end vertices and the outermost feet) of every edge. At
/// each probe the nearest sites, up to ties within tolerance, must include a
/// pair mirrored across the edge.
pub fn sampled_nearest_pair_check(
    g: &Pslg,
    sol: &Solution,
    samples_per_interval: usize,
) -> Result<CheckReport, VerifyError> {
    if samples_per_interval < 2 {
        return Err(VerifyError::Mismatch(format!(
            "need at least 2 samples per interval, got {samples_per_interval}"
        )));
    }
    if sol.sites.is_empty() {
        return Err(VerifyError::NoSites);
    }
    let tol = sol.report.tol * g.bbox().diagonal();
    let tree = site_tree(&sol.sites);
    let mut feet: Vec<Option<Vec<f64>>> = vec![None; g.num_edges()];
    for plan in &sol.report.plans {
        let slot = feet
            .get_mut(plan.edge)
            .ok_or_else(|| VerifyError::Mismatch(format!("plan for unknown edge {}", plan.edge)))?;
        let fr = EdgeFrame::new(g, plan.edge);
        slot.replace(plan.pairs().iter().map(|p| fr.param(p.foot)).collect());
    }
    let verdicts = (0..g.num_edges())
        .into_par_iter()
        .map(|e| {
            let fr = EdgeFrame::new(g, e);
            let Some(ts) = &feet[e] else {
                return EdgeVerdict::from_result(e, Err(Counterexample::new("no pairs annotated for this edge")));
            };
            let mut marks = vec![0.0];
            marks.extend(ts.iter().copied());
            marks.push(fr.len);
            marks.sort_by(f64::total_cmp);
            for w in marks.windows(2) {
                for j in 1..=samples_per_interval {
                    let y = w[0] + (w[1] - w[0]) * j as f64 / (samples_per_interval + 1) as f64;
                    let x = fr.at(y);
                    let mut near = Vec::new();
                    let mut dmin = f64::INFINITY;
                    for s in tree.nearest_neighbor_iter(&[x.x, x.y]) {
                        let sp = Point::from(*s.geom());
                        let d = sp.dist(x);
                        dmin = dmin.min(d);
                        if d > dmin + tol {
                            break;
                        }
                        near.push(sp);
                    }
                    let ok = near.iter().enumerate().any(|(i, &a)| near[i + 1..].iter().any(|&b| mirrored(&fr, a, b, tol)));
                    if !ok {
                        return EdgeVerdict::from_result(
                            e,
                            Err(Counterexample {
                                point: Some(x),
                                site: Some(near[0]),
                                ..Counterexample::new(format!(
                                    "nearest site to ({}, {}) is ({}, {}), not part of a pair mirrored across the edge",
                                    x.x, x.y, near[0].x, near[0].y
                                ))
                            }),
                        );
                    }
                }
            }
            EdgeVerdict::from_result(e, Ok(()))
        })
        .collect();
    Ok(CheckReport::new(Check::Sampled, verdicts))
}
