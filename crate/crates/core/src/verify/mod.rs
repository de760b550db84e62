//! Independent checks that a site set really produces every input edge in
//! its Voronoi diagram.
//!
//! A point `y` of an edge lies on the Voronoi edge of a mirrored pair when
//! the circle centered at `y` through the pair has no site strictly inside.
//! [`exact_guard_check`] certifies that for whole intervals at once,
//! [`brute_force_voronoi`] builds the diagram explicitly, and
//! [`sampled_nearest_pair_check`] probes individual points.

mod certificate;
mod coverage;
mod voronoi;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Circle, Point, Rect};
use crate::pslg::Pslg;

pub use certificate::exact_guard_check;
pub use coverage::{edge_coverage_check, sampled_nearest_pair_check};
pub use voronoi::{brute_force_voronoi, HalfPlane, VoronoiCell, VoronoiDiagram, VoronoiEdge};

/// Site count above which the brute-force diagram is refused by default.
pub const BRUTE_FORCE_CAP: usize = 5000;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("no sites")]
    NoSites,
    #[error("sites {0} and {1} coincide")]
    DuplicateSite(usize, usize),
    #[error("site {0} lies outside the clipping box")]
    OutsideBox(usize),
    #[error("solution does not match the graph: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Pslg(#[from] crate::pslg::PslgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Certificate,
    Bruteforce,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Point>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub site: Option<Point>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub circle: Option<Circle>,
}

impl Counterexample {
    pub(crate) fn new(message: impl Into<String>) -> Self {
        Counterexample {
            message: message.into(),
            point: None,
            site: None,
            circle: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeVerdict {
    pub edge: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl EdgeVerdict {
    pub(crate) fn from_result(edge: usize, r: Result<(), Counterexample>) -> Self {
        match r {
            Ok(()) => EdgeVerdict {
                edge,
                pass: true,
                counterexample: None,
            },
            Err(c) => EdgeVerdict {
                edge,
                pass: false,
                counterexample: Some(c),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: Check,
    pub pass: bool,
    pub edges: Vec<EdgeVerdict>,
}

impl CheckReport {
    pub(crate) fn new(check: Check, mut edges: Vec<EdgeVerdict>) -> Self {
        edges.sort_by_key(|v| v.edge);
        CheckReport {
            check,
            pass: edges.iter().all(|v| v.pass),
            edges,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &EdgeVerdict> {
        self.edges.iter().filter(|v| !v.pass)
    }
}

/// Clipping box for the brute-force diagram: the graph's bounding box
/// inflated by twice its longest edge.
pub fn verification_box(g: &Pslg) -> Rect {
    let longest = (0..g.num_edges())
        .map(|e| g.segment(e).length())
        .fold(0.0, f64::max);
    g.bbox().inflate(2.0 * longest)
}
