use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{EdgeFrame, InitialCircle, SentinelPair, SolverConfig, SolverError};
use crate::geom::{dist_segment_segment, sentinel_positions, Circle, Rect, Segment};
use crate::pslg::Pslg;
use crate::spatial::EdgeIndex;

/// The individual upper bounds on ε before the safety factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsilonBounds {
    /// `ρ₀·sin(α/2)`: sentinels on an initial circle stay nearer their own edge.
    pub angle: f64,
    /// Half the smallest distance between two edges without a common vertex.
    pub feature: Option<f64>,
    /// Clearance of every middle segment to every other edge, over `1 + √2`.
    pub middle: Option<f64>,
    /// `safety · min` of the above; the largest admissible ε.
    pub admissible: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonChoice {
    pub epsilon: f64,
    /// Initial circles, tightened so that no foreign sentinel can reach them.
    pub circles: Vec<Option<InitialCircle>>,
    pub bounds: EpsilonBounds,
}

fn incident(g: &Pslg, f: usize, u: usize) -> bool {
    g.edge(f).contains(&u)
}

/// Distance from `u` to the nearest edge not incident to it.
fn clearance(g: &Pslg, index: &EdgeIndex, u: usize) -> Option<f64> {
    index
        .nearest(g.vertices()[u], |f| !incident(g, f, u))
        .map(|(_, d)| d)
}

/// One initial circle per vertex of positive degree:
/// `ρ(u) = safety · min(λ(u)/2, distance to the nearest non-incident edge)`.
pub fn initial_circles(
    g: &Pslg,
    cfg: &SolverConfig,
) -> Result<Vec<Option<InitialCircle>>, SolverError> {
    cfg.check()?;
    let index = EdgeIndex::new((0..g.num_edges()).map(|e| g.segment(e)).collect());
    initial_circles_with(g, &index, cfg)
}

pub(super) fn initial_circles_with(
    g: &Pslg,
    index: &EdgeIndex,
    cfg: &SolverConfig,
) -> Result<Vec<Option<InitialCircle>>, SolverError> {
    (0..g.num_vertices())
        .into_par_iter()
        .map(|u| {
            if g.degree(u) == 0 {
                return Ok(None);
            }
            let center = g.vertices()[u];
            let lambda = g
                .incident_edges(u)
                .map(|e| g.segment(e).length())
                .fold(f64::INFINITY, f64::min);
            let d = clearance(g, index, u).unwrap_or(f64::INFINITY);
            if d <= 0.0 {
                return Err(SolverError::VertexOnEdge(u));
            }
            Ok(Some(InitialCircle {
                vertex: u,
                center,
                radius: cfg.safety * (lambda / 2.0).min(d),
            }))
        })
        .collect()
}

/// Picks the sentinel offset ε and tightens the initial circles.
///
/// A foreign sentinel sits within ε of its own edge, so a circle whose
/// radius reaches within ε of a non-incident edge could swallow one. Those
/// circles are shrunk against a first estimate of ε before the final value
/// is computed, which can only decrease it.
pub fn choose_epsilon(
    g: &Pslg,
    circles: &[Option<InitialCircle>],
    cfg: &SolverConfig,
) -> Result<EpsilonChoice, SolverError> {
    cfg.check()?;
    let alpha = super::graph_alpha(g)?;
    let frames: Vec<EdgeFrame> = (0..g.num_edges()).map(|e| EdgeFrame::new(g, e)).collect();
    let index = EdgeIndex::new((0..g.num_edges()).map(|e| g.segment(e)).collect());
    choose_epsilon_with(g, &index, &frames, circles, alpha, cfg)
}

pub(super) fn choose_epsilon_with(
    g: &Pslg,
    index: &EdgeIndex,
    frames: &[EdgeFrame],
    circles: &[Option<InitialCircle>],
    alpha: f64,
    cfg: &SolverConfig,
) -> Result<EpsilonChoice, SolverError> {
    let s = (alpha / 2.0).sin();
    let min_radius = |cs: &[Option<InitialCircle>]| {
        cs.iter()
            .flatten()
            .map(|c| c.radius)
            .fold(f64::INFINITY, f64::min)
    };
    let feature = feature_distance(g, index).map(|d| d / 2.0);
    let cap = |b: f64, extra: Option<f64>| cfg.safety * extra.map_or(b, |e| b.min(e));

    let first = cap(min_radius(circles) * s, feature);
    let tightened: Vec<Option<InitialCircle>> = circles
        .par_iter()
        .map(|c| {
            c.map(|mut c| {
                if let Some(d) = clearance(g, index, c.vertex) {
                    c.radius = c.radius.min(cfg.safety * (d - first));
                }
                c
            })
        })
        .collect();
    let angle = min_radius(&tightened) * s;
    let estimate = cap(angle, feature);
    let middle = middle_clearance(frames, index, &tightened, estimate)
        .map(|d| d / (1.0 + std::f64::consts::SQRT_2));
    let admissible = cfg.safety
        * [Some(angle), feature, middle]
            .into_iter()
            .flatten()
            .fold(f64::INFINITY, f64::min);
    let epsilon = match cfg.epsilon_override {
        Some(given) if given > admissible => {
            return Err(SolverError::OverrideTooLarge {
                given,
                max: admissible,
            })
        }
        Some(given) => given,
        None => admissible,
    };
    Ok(EpsilonChoice {
        epsilon,
        circles: tightened,
        bounds: EpsilonBounds {
            angle,
            feature,
            middle,
            admissible,
        },
    })
}

/// Smallest distance between two edges that share no vertex. Such a
/// distance is always attained at an endpoint of one of the two edges.
fn feature_distance(g: &Pslg, index: &EdgeIndex) -> Option<f64> {
    (0..g.num_vertices())
        .into_par_iter()
        .filter_map(|u| {
            let p = g.vertices()[u];
            let neighbors: Vec<usize> = g.outgoing(u).iter().map(|&h| g.dest(h)).collect();
            index
                .nearest_iter(p)
                .filter(|&f| !incident(g, f, u))
                .find(|&f| {
                    let ends = g.edge(f);
                    neighbors.iter().any(|w| !ends.contains(w))
                })
                .map(|f| crate::geom::dist_point_segment(p, index.segment(f)))
        })
        .reduce_with(f64::min)
}

/// Smallest distance from the middle segment of any edge (between the feet
/// of its two initial pairs at offset `eps`) to any other edge.
fn middle_clearance(
    frames: &[EdgeFrame],
    index: &EdgeIndex,
    circles: &[Option<InitialCircle>],
    eps: f64,
) -> Option<f64> {
    let all = Rect::bounding(frames.iter().flat_map(|f| [&f.origin, &f.end]))?;
    frames
        .par_iter()
        .filter_map(|fr| {
            let reach = |v: usize| {
                let r = circles[v]
                    .expect("edge endpoints have initial circles")
                    .radius;
                ((r - eps) * (r + eps)).sqrt()
            };
            let (t1, t2) = (reach(fr.from), fr.len - reach(fr.to));
            if t2 <= t1 {
                return None;
            }
            let mid = Segment {
                a: fr.at(t1),
                b: fr.at(t2),
            };
            let own = Rect::bounding([&mid.a, &mid.b]).expect("two points");
            let mut r = 4.0 * eps;
            loop {
                let best = index
                    .intersecting(&own.inflate(r))
                    .into_iter()
                    .filter(|&f| f != fr.edge)
                    .map(|f| dist_segment_segment(&mid, index.segment(f)))
                    .fold(f64::INFINITY, f64::min);
                if best <= r || r > all.diagonal() {
                    return best.is_finite().then_some(best);
                }
                r *= 2.0;
            }
        })
        .reduce_with(f64::min)
}

pub(super) fn initial_pair(
    frame: &EdgeFrame,
    c: &InitialCircle,
    eps: f64,
) -> Result<SentinelPair, SolverError> {
    let toward = if c.vertex == frame.from {
        frame.end
    } else {
        frame.origin
    };
    let circle = Circle::new(c.center, c.radius)?;
    let m = sentinel_positions(&circle, &frame.line(), toward, eps)?;
    let (p, q) = if frame.side(m.p) >= 0.0 {
        (m.p, m.q)
    } else {
        (m.q, m.p)
    };
    Ok(SentinelPair {
        edge: frame.edge,
        foot: m.foot,
        p,
        q,
        offset: eps,
    })
}

/// For each vertex in id order and each incident edge in counter-clockwise
/// order, the pair on that vertex's initial circle.
pub fn place_initial_sentinels(
    g: &Pslg,
    circles: &[Option<InitialCircle>],
    eps: f64,
) -> Result<Vec<SentinelPair>, SolverError> {
    let mut out = Vec::new();
    for (u, c) in circles.iter().enumerate() {
        let Some(c) = c else { continue };
        for e in g.incident_edges(u) {
            out.push(initial_pair(&EdgeFrame::new(g, e), c, eps)?);
        }
    }
    Ok(out)
}
