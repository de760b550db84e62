use rayon::prelude::*;
use rstar::primitives::GeomWithData;
use rstar::RTree;

use super::voronoi::site_tree;
use super::{Check, CheckReport, Counterexample, EdgeVerdict, VerifyError};
use crate::geom::{strictly_inside, Circle, Point};
use crate::pslg::Pslg;
use crate::solver::{EdgeCoverPlan, EdgeFrame, Solution};

type SiteTree = RTree<GeomWithData<[f64; 2], usize>>;

/// A pair as recovered from the site set: foot coordinate along the edge,
/// offset, and the two site ids.
#[derive(Debug, Clone, Copy)]
struct Guard {
    t: f64,
    offset: f64,
    p: usize,
    q: usize,
}

impl Guard {
    /// `|y − foot|² + offset² − y²`, which is linear in `y`.
    fn intercept(&self) -> f64 {
        self.t * self.t + self.offset * self.offset
    }
}

/// Exact empty-circle certificate over every input edge.
///
/// Along an edge the nearest annotated pair changes at the breakpoints of a
/// lower envelope of lines. Within one envelope interval, whether a site
/// lies strictly inside the circle through the nearest pair is a linear
/// condition in the center's position, so testing both interval ends is
/// exact.
pub fn exact_guard_check(g: &Pslg, sol: &Solution) -> Result<CheckReport, VerifyError> {
    let tol = sol.report.tol * g.bbox().diagonal();
    let mut by_edge: Vec<Option<&EdgeCoverPlan>> = vec![None; g.num_edges()];
    for plan in &sol.report.plans {
        let slot = by_edge
            .get_mut(plan.edge)
            .ok_or_else(|| VerifyError::Mismatch(format!("plan for unknown edge {}", plan.edge)))?;
        let mut ends = [plan.from, plan.to];
        ends.sort_unstable();
        if ends != g.edge(plan.edge) {
            return Err(VerifyError::Mismatch(format!(
                "plan for edge {} names vertices {ends:?}",
                plan.edge
            )));
        }
        if slot.replace(plan).is_some() {
            return Err(VerifyError::Mismatch(format!(
                "two plans for edge {}",
                plan.edge
            )));
        }
    }
    let tree = site_tree(&sol.sites);
    let verdicts = (0..g.num_edges())
        .into_par_iter()
        .map(|e| EdgeVerdict::from_result(e, check_edge(g, e, by_edge[e], &sol.sites, &tree, tol)))
        .collect();
    Ok(CheckReport::new(Check::Certificate, verdicts))
}

fn find_site(tree: &SiteTree, x: Point, tol: f64) -> Option<usize> {
    tree.nearest_neighbor(&[x.x, x.y])
        .filter(|s| Point::from(*s.geom()).dist(x) <= tol)
        .map(|s| s.data)
}

fn check_edge(
    g: &Pslg,
    e: usize,
    plan: Option<&EdgeCoverPlan>,
    sites: &[Point],
    tree: &SiteTree,
    tol: f64,
) -> Result<(), Counterexample> {
    let plan =
        plan.ok_or_else(|| Counterexample::new("coverage gap: no pairs annotated for this edge"))?;
    let frame = EdgeFrame::new(g, e);
    let mut guards = Vec::new();
    for pair in plan.pairs() {
        let (Some(p), Some(q)) = (find_site(tree, pair.p, tol), find_site(tree, pair.q, tol))
        else {
            return Err(Counterexample {
                point: Some(pair.foot),
                ..Counterexample::new(format!(
                    "coverage gap: pair with foot ({}, {}) is missing from the site set",
                    pair.foot.x, pair.foot.y
                ))
            });
        };
        let (sp, sq) = (sites[p], sites[q]);
        let mid = sp.midpoint(sq);
        if frame.side(mid).abs() > tol || (sp - sq).dot(frame.dir).abs() > tol || p == q {
            return Err(Counterexample {
                point: Some(mid),
                ..Counterexample::new(format!(
                    "pair with foot ({}, {}) is not mirrored across the edge",
                    mid.x, mid.y
                ))
            });
        }
        guards.push(Guard {
            t: frame.param(mid),
            offset: sp.dist(sq) / 2.0,
            p,
            q,
        });
    }
    guards.sort_by(|a, b| a.t.total_cmp(&b.t).then(a.offset.total_cmp(&b.offset)));

    for (k, y0, y1) in envelope(&guards, frame.len) {
        let gk = guards[k];
        for y in [y0, y1] {
            let center = frame.at(y);
            let circle = Circle {
                center,
                radius: (y - gk.t).hypot(gk.offset),
            };
            let r2 = circle.radius * circle.radius;
            let intruder = tree
                .locate_within_distance([center.x, center.y], r2)
                .map(|s| s.data)
                .filter(|&s| s != gk.p && s != gk.q)
                .filter(|&s| strictly_inside(sites[s], &circle, tol))
                .min();
            if let Some(s) = intruder {
                let nearest_circle = plan
                    .circles
                    .iter()
                    .enumerate()
                    .min_by(|a, b| {
                        let da = (frame.param(a.1.circle.center) - y).abs();
                        let db = (frame.param(b.1.circle.center) - y).abs();
                        da.total_cmp(&db)
                    })
                    .map_or(String::from("initial circle"), |(i, _)| {
                        format!("inner circle {i}")
                    });
                return Err(Counterexample {
                    point: Some(center),
                    site: Some(sites[s]),
                    circle: Some(circle),
                    message: format!(
                        "site ({}, {}) lies strictly inside the empty circle centered at ({}, {}) near {nearest_circle}",
                        sites[s].x, sites[s].y, center.x, center.y
                    ),
                });
            }
        }
    }
    Ok(())
}

/// Lower envelope over `[0, len]` of `y ↦ |y − tᵢ|² + offsetᵢ²`, as
/// `(guard, from, to)` intervals. `guards` must be sorted by `t`.
fn envelope(guards: &[Guard], len: f64) -> Vec<(usize, f64, f64)> {
    let cross = |i: &Guard, j: &Guard| (j.intercept() - i.intercept()) / (2.0 * (j.t - i.t));
    let mut hull: Vec<usize> = Vec::new();
    for (k, gk) in guards.iter().enumerate() {
        if let Some(&last) = hull.last() {
            if guards[last].t == gk.t {
                continue;
            }
        }
        while hull.len() >= 2 {
            let (i, j) = (&guards[hull[hull.len() - 2]], &guards[hull[hull.len() - 1]]);
            if cross(i, gk) <= cross(i, j) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    let mut out = Vec::with_capacity(hull.len());
    for (m, &k) in hull.iter().enumerate() {
        let lo = if m == 0 {
            0.0
        } else {
            cross(&guards[hull[m - 1]], &guards[k]).max(0.0)
        };
        let hi = if m + 1 == hull.len() {
            len
        } else {
            cross(&guards[k], &guards[hull[m + 1]]).min(len)
        };
        if lo <= hi {
            out.push((k, lo, hi));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn guard(t: f64, offset: f64) -> Guard {
        Guard {
            t,
            offset,
            p: 0,
            q: 0,
        }
    }

    #[test]
    fn envelope_switches_at_midpoints() {
        let gs = [guard(1.0, 1.0), guard(3.0, 1.0), guard(7.0, 1.0)];
        assert_eq!(
            envelope(&gs, 10.0),
            vec![(0, 0.0, 2.0), (1, 2.0, 5.0), (2, 5.0, 10.0)]
        );
    }

    #[test]
    fn envelope_drops_dominated_pairs() {
        // The wide pair at 2 is never nearest between the two tight ones.
        let gs = [guard(0.0, 0.1), guard(2.0, 3.0), guard(4.0, 0.1)];
        let env = envelope(&gs, 4.0);
        assert_eq!(env.iter().map(|e| e.0).collect::<Vec<_>>(), vec![0, 2]);
        assert!((env[0].2 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn unequal_offsets_cross_off_center() {
        // |y|² + 1 = |y − 4|² + 4  =>  y = 19/8
        let env = envelope(&[guard(0.0, 1.0), guard(4.0, 2.0)], 4.0);
        assert_eq!(env[0].2, 19.0 / 8.0);
    }
}
