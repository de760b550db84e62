//! Sentinel placement: initial circles at every vertex, a global offset ε,
//! and one of three strategies for guarding the middle of each edge.

mod cover;
mod setup;

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Circle, GeomError, LineEq, Point};
use crate::pslg::{metrics, Pslg, PslgError};
use crate::spatial::EdgeIndex;

pub use cover::{
    cover_edge_naive, cover_edge_recursive, cover_edge_sequential, cover_gap_recursive, EdgeContext,
};
pub use setup::{
    choose_epsilon, initial_circles, place_initial_sentinels, EpsilonBounds, EpsilonChoice,
};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("safety must lie in (0, 1), got {0}")]
    Safety(f64),
    #[error("tolerance must be positive, got {0}")]
    Tolerance(f64),
    #[error("epsilon override must be positive, got {0}")]
    NonPositiveOverride(f64),
    #[error("epsilon override {given} exceeds the admissible bound {max}")]
    OverrideTooLarge { given: f64, max: f64 },
    #[error("vertex {0} lies on a non-incident edge")]
    VertexOnEdge(usize),
    #[error("epsilon {eps} underflows the tolerance {tol}; input too degenerate")]
    EpsilonUnderflow { eps: f64, tol: f64 },
    #[error("cover of edge {0} made no progress")]
    Stalled(usize),
    #[error(transparent)]
    Pslg(#[from] PslgError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed solution file: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Naive,
    Sequential,
    Recursive,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Naive, Variant::Sequential, Variant::Recursive];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Naive => "naive",
            Variant::Sequential => "sequential",
            Variant::Recursive => "recursive",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown variant `{0}` (expected one of naive, sequential, recursive)")]
pub struct UnknownVariant(pub String);

impl FromStr for Variant {
    type Err = UnknownVariant;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| UnknownVariant(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub variant: Variant,
    /// Shrink factor in (0, 1) applied to every radius bound and to ε.
    pub safety: f64,
    /// Relative tolerance, multiplied by the bounding-box diagonal.
    pub tol: f64,
    pub epsilon_override: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            variant: Variant::Sequential,
            safety: 0.995,
            tol: 1e-9,
            epsilon_override: None,
        }
    }
}

impl SolverConfig {
    pub fn new(variant: Variant) -> Self {
        SolverConfig {
            variant,
            ..Default::default()
        }
    }

    pub fn check(&self) -> Result<(), SolverError> {
        if !(self.safety > 0.0 && self.safety < 1.0) {
            return Err(SolverError::Safety(self.safety));
        }
        if !(self.tol > 0.0) {
            return Err(SolverError::Tolerance(self.tol));
        }
        match self.epsilon_override {
            Some(e) if !(e > 0.0) => Err(SolverError::NonPositiveOverride(e)),
            _ => Ok(()),
        }
    }
}

/// Initial circle around a vertex of positive degree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialCircle {
    pub vertex: usize,
    pub center: Point,
    pub radius: f64,
}

/// Two sites mirrored across an edge line. `p` lies left of the edge's
/// canonical direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SentinelPair {
    pub edge: usize,
    pub foot: Point,
    pub p: Point,
    pub q: Point,
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverCircle {
    pub circle: Circle,
    pub pairs: Vec<SentinelPair>,
}

/// Local frame of an edge. The canonical direction runs from the
/// lexicographically smaller endpoint to the larger one, so it does not
/// depend on vertex labels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeFrame {
    pub edge: usize,
    pub from: usize,
    pub to: usize,
    pub origin: Point,
    pub end: Point,
    pub dir: Point,
    pub normal: Point,
    pub len: f64,
}

impl EdgeFrame {
    pub fn new(g: &Pslg, edge: usize) -> Self {
        let [a, b] = g.edge(edge);
        let (pa, pb) = (g.vertices()[a], g.vertices()[b]);
        if pa.lex_cmp(&pb).is_le() {
            Self::between(edge, (a, pa), (b, pb))
        } else {
            Self::between(edge, (b, pb), (a, pa))
        }
    }

    /// Frame of the directed segment `from -> to`, taken as given.
    pub fn between(edge: usize, from: (usize, Point), to: (usize, Point)) -> Self {
        let len = from.1.dist(to.1);
        let dir = (to.1 - from.1) * (1.0 / len);
        EdgeFrame {
            edge,
            from: from.0,
            to: to.0,
            origin: from.1,
            end: to.1,
            dir,
            normal: dir.perp(),
            len,
        }
    }

    pub fn at(&self, t: f64) -> Point {
        self.origin + self.dir * t
    }

    /// Coordinate of the projection of `p` along the edge.
    pub fn param(&self, p: Point) -> f64 {
        (p - self.origin).dot(self.dir)
    }

    /// Signed distance of `p` from the edge line, positive on the left.
    pub fn side(&self, p: Point) -> f64 {
        (p - self.origin).dot(self.normal)
    }

    pub fn line(&self) -> LineEq {
        crate::geom::line_through(self.origin, self.end).expect("edge endpoints are distinct")
    }

    pub fn pair_at(&self, t: f64, offset: f64) -> SentinelPair {
        let foot = self.at(t);
        let n = self.normal * offset;
        SentinelPair {
            edge: self.edge,
            foot,
            p: foot + n,
            q: foot - n,
            offset,
        }
    }
}

/// Guarding plan of one edge: the pair at each end (on the initial circles)
/// and the inner circles covering the middle segment between their feet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeCoverPlan {
    pub edge: usize,
    pub from: usize,
    pub to: usize,
    pub w1: Point,
    pub w2: Point,
    pub delta: f64,
    pub start: SentinelPair,
    pub end: SentinelPair,
    pub circles: Vec<CoverCircle>,
}

impl EdgeCoverPlan {
    /// All pairs of the plan in order along the edge, shared pairs once.
    pub fn pairs(&self) -> Vec<SentinelPair> {
        let mut out = vec![self.start];
        for c in &self.circles {
            for p in &c.pairs {
                if out.last() != Some(p) {
                    out.push(*p);
                }
            }
        }
        if out.last() != Some(&self.end) {
            out.push(self.end);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Counts {
    pub sites: usize,
    pub pairs: usize,
    pub initial_pairs: usize,
    pub inner_circles: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub variant: Variant,
    pub safety: f64,
    pub tol: f64,
    pub alpha: f64,
    pub rho0: f64,
    pub epsilon: f64,
    pub bounds: EpsilonBounds,
    pub counts: Counts,
    pub initial_circles: Vec<InitialCircle>,
    pub plans: Vec<EdgeCoverPlan>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub sites: Vec<Point>,
    pub report: SolveReport,
}

impl Solution {
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("solution values are finite");
        s.push('\n');
        s
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), SolverError> {
        fs::write(path, self.to_json_string())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, SolverError> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }
}

pub fn solve(g: &Pslg, cfg: &SolverConfig) -> Result<Solution, SolverError> {
    cfg.check()?;
    let alpha = graph_alpha(g)?;
    let bbox = g.bbox();
    let frames: Vec<EdgeFrame> = (0..g.num_edges()).map(|e| EdgeFrame::new(g, e)).collect();
    let index = EdgeIndex::new((0..g.num_edges()).map(|e| g.segment(e)).collect());
    let spec_circles = setup::initial_circles_with(g, &index, cfg)?;
    let choice = setup::choose_epsilon_with(g, &index, &frames, &spec_circles, alpha, cfg)?;
    let eps = choice.epsilon;
    let tol = cfg.tol * bbox.diagonal();
    if eps <= tol {
        return Err(SolverError::EpsilonUnderflow { eps, tol });
    }

    let plans = frames
        .par_iter()
        .map(|frame| {
            let circle_at =
                |v: usize| choice.circles[v].expect("edge endpoints have initial circles");
            let ctx = EdgeContext {
                frame,
                start: setup::initial_pair(frame, &circle_at(frame.from), eps)?,
                end: setup::initial_pair(frame, &circle_at(frame.to), eps)?,
                eps,
                obstacles: &index,
            };
            match cfg.variant {
                Variant::Naive => Ok(cover_edge_naive(&ctx)),
                Variant::Sequential => cover_edge_sequential(&ctx),
                Variant::Recursive => cover_edge_recursive(&ctx),
            }
        })
        .collect::<Result<Vec<_>, SolverError>>()?;

    let mut counts = Counts {
        initial_pairs: 2 * plans.len(),
        ..Default::default()
    };
    let mut raw = Vec::new();
    for plan in &plans {
        let pairs = plan.pairs();
        counts.pairs += pairs.len();
        counts.inner_circles += plan.circles.len();
        raw.extend(pairs.iter().flat_map(|p| [p.p, p.q]));
    }
    let sites = dedup_sites(raw, tol);
    counts.sites = sites.len();
    let initial: Vec<InitialCircle> = choice.circles.iter().flatten().copied().collect();
    let rho0 = initial
        .iter()
        .map(|c| c.radius)
        .fold(f64::INFINITY, f64::min);
    Ok(Solution {
        sites,
        report: SolveReport {
            variant: cfg.variant,
            safety: cfg.safety,
            tol: cfg.tol,
            alpha,
            rho0,
            epsilon: eps,
            bounds: choice.bounds,
            counts,
            initial_circles: initial,
            plans,
        },
    })
}

/// Smallest angle of the graph, or π when no vertex has two incident edges
/// (nothing then constrains the offset through angles).
pub(crate) fn graph_alpha(g: &Pslg) -> Result<f64, SolverError> {
    match metrics(g) {
        Ok(m) => Ok(m.alpha),
        Err(PslgError::AlphaUndefined) => Ok(std::f64::consts::PI),
        Err(e) => Err(e.into()),
    }
}

/// Sorts lexicographically and merges points closer than `tol`.
pub fn dedup_sites(mut pts: Vec<Point>, tol: f64) -> Vec<Point> {
    pts.sort_by(|a, b| a.lex_cmp(b));
    let mut out: Vec<Point> = Vec::with_capacity(pts.len());
    for p in pts {
        let dup = out
            .iter()
            .rev()
            .take_while(|k| p.x - k.x <= tol)
            .any(|k| k.dist(p) <= tol);
        if !dup {
            out.push(p);
        }
    }
    out
}
