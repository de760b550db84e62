//! Doubly-connected edge list for the input tesselation.
//!
//! Edge `e` owns half-edges `2e` (from its lower-indexed endpoint) and
//! `2e + 1`. Faces lie to the left of their half-edges, so bounded faces are
//! walked counter-clockwise and each connected component contributes one
//! clockwise (or zero-area, for trees) outer cycle.

use std::f64::consts::TAU;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{orient, segments_intersect, Point, Rect, Segment};

#[derive(Debug, Error)]
pub enum PslgError {
    #[error("vertex {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("edge {edge}: vertex index {index} out of range ({len} vertices)")]
    IndexOutOfRange {
        edge: usize,
        index: usize,
        len: usize,
    },
    #[error("edge {0} is a self-loop")]
    SelfLoop(usize),
    #[error("duplicate edge {0:?}")]
    DuplicateEdge([usize; 2]),
    #[error("vertices {0} and {1} coincide")]
    DuplicateVertex(usize, usize),
    #[error("edges {0:?} and {1:?} cross")]
    Crossing([usize; 2], [usize; 2]),
    #[error("edges {0:?} and {1:?} overlap")]
    Overlap([usize; 2], [usize; 2]),
    #[error("smallest angle undefined: no vertex has degree >= 2")]
    AlphaUndefined,
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed PSLG file: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HalfEdge {
    pub origin: usize,
    pub twin: usize,
    pub next: usize,
    pub prev: usize,
    pub face: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Face {
    pub half_edge: usize,
    pub bounded: bool,
}

/// Planar straight-line graph stored as a DCEL. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Pslg {
    vertices: Vec<Point>,
    half_edges: Vec<HalfEdge>,
    faces: Vec<Face>,
    /// Outgoing half-edges of each vertex in counter-clockwise order.
    rotation: Vec<Vec<usize>>,
}

/// Relative tolerance (of the bounding-box diagonal) under which two
/// vertices count as duplicates.
pub const SNAP_REL: f64 = 1e-9;

pub fn build_pslg(vertices: Vec<Point>, edges: &[[usize; 2]]) -> Result<Pslg, PslgError> {
    let n = vertices.len();
    if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
        return Err(PslgError::NonFinite(i));
    }
    let mut canon = Vec::with_capacity(edges.len());
    for (k, &[a, b]) in edges.iter().enumerate() {
        for index in [a, b] {
            if index >= n {
                return Err(PslgError::IndexOutOfRange {
                    edge: k,
                    index,
                    len: n,
                });
            }
        }
        if a == b {
            return Err(PslgError::SelfLoop(k));
        }
        canon.push([a.min(b), a.max(b)]);
    }
    canon.sort_unstable();
    if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
        return Err(PslgError::DuplicateEdge(w[0]));
    }
    if let Some((a, b)) = find_duplicate_vertex(&vertices) {
        return Err(PslgError::DuplicateVertex(a, b));
    }
    check_crossings(&vertices, &canon)?;

    let mut half_edges = Vec::with_capacity(2 * canon.len());
    let mut rotation = vec![Vec::new(); n];
    for (e, &[a, b]) in canon.iter().enumerate() {
        let h = 2 * e;
        half_edges.push(HalfEdge {
            origin: a,
            twin: h + 1,
            next: usize::MAX,
            prev: usize::MAX,
            face: usize::MAX,
        });
        half_edges.push(HalfEdge {
            origin: b,
            twin: h,
            next: usize::MAX,
            prev: usize::MAX,
            face: usize::MAX,
        });
        rotation[a].push(h);
        rotation[b].push(h + 1);
    }
    let dest = |h: usize, he: &[HalfEdge]| he[he[h].twin].origin;
    for (v, out) in rotation.iter_mut().enumerate() {
        let o = vertices[v];
        out.sort_by(|&h1, &h2| {
            let d1 = vertices[dest(h1, &half_edges)] - o;
            let d2 = vertices[dest(h2, &half_edges)] - o;
            d1.y.atan2(d1.x).total_cmp(&d2.y.atan2(d2.x))
        });
    }
    // Position of each half-edge within its origin's rotation.
    let mut slot = vec![0usize; half_edges.len()];
    for out in &rotation {
        for (i, &h) in out.iter().enumerate() {
            slot[h] = i;
        }
    }
    for h in 0..half_edges.len() {
        let t = half_edges[h].twin;
        let around = &rotation[half_edges[t].origin];
        let i = slot[t];
        let next = around[(i + around.len() - 1) % around.len()];
        half_edges[h].next = next;
        half_edges[next].prev = h;
    }
    let mut faces = Vec::new();
    for start in 0..half_edges.len() {
        if half_edges[start].face != usize::MAX {
            continue;
        }
        let f = faces.len();
        let mut area2 = 0.0;
        let mut h = start;
        loop {
            half_edges[h].face = f;
            let a = vertices[half_edges[h].origin];
            let b = vertices[dest(h, &half_edges)];
            area2 += a.cross(b);
            h = half_edges[h].next;
            if h == start {
                break;
            }
        }
        faces.push(Face {
            half_edge: start,
            bounded: area2 > 0.0,
        });
    }
    Ok(Pslg {
        vertices,
        half_edges,
        faces,
        rotation,
    })
}

fn find_duplicate_vertex(vertices: &[Point]) -> Option<(usize, usize)> {
    let bbox = Rect::bounding(vertices)?;
    let tol = SNAP_REL * bbox.diagonal();
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    order.sort_by(|&a, &b| vertices[a].lex_cmp(&vertices[b]));
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if vertices[j].x - vertices[i].x > tol {
                break;
            }
            if vertices[i].dist(vertices[j]) <= tol {
                return Some((i.min(j), i.max(j)));
            }
        }
    }
    None
}

fn check_crossings(vertices: &[Point], edges: &[[usize; 2]]) -> Result<(), PslgError> {
    // Sweep over x-extents so only overlapping boxes are tested.
    let mut order: Vec<usize> = (0..edges.len()).collect();
    let xmin = |e: usize| vertices[edges[e][0]].x.min(vertices[edges[e][1]].x);
    let xmax = |e: usize| vertices[edges[e][0]].x.max(vertices[edges[e][1]].x);
    order.sort_by(|&a, &b| xmin(a).total_cmp(&xmin(b)));
    for (k, &i) in order.iter().enumerate() {
        let [a, b] = edges[i];
        let si = Segment {
            a: vertices[a],
            b: vertices[b],
        };
        let (ylo, yhi) = (si.a.y.min(si.b.y), si.a.y.max(si.b.y));
        for &j in &order[k + 1..] {
            if xmin(j) > xmax(i) {
                break;
            }
            let [c, d] = edges[j];
            let sj = Segment {
                a: vertices[c],
                b: vertices[d],
            };
            if sj.a.y.max(sj.b.y) < ylo || sj.a.y.min(sj.b.y) > yhi {
                continue;
            }
            let (ei, ej) = (edges[i.min(j)], edges[i.max(j)]);
            let shared = [a, b].iter().find(|v| **v == c || **v == d).copied();
            match shared {
                Some(v) => {
                    let other_i = if a == v { b } else { a };
                    let other_j = if c == v { d } else { c };
                    let o = vertices[v];
                    let (di, dj) = (vertices[other_i] - o, vertices[other_j] - o);
                    if di.cross(dj) == 0.0 && di.dot(dj) > 0.0 {
                        return Err(PslgError::Overlap(ei, ej));
                    }
                }
                None => {
                    if segments_intersect(&si, &sj) {
                        return Err(PslgError::Crossing(ei, ej));
                    }
                }
            }
        }
    }
    Ok(())
}

impl Pslg {
    /// Assembles a DCEL from raw parts without any checking. Intended for
    /// exercising [`validate`] on malformed structures.
    pub fn from_raw_parts(
        vertices: Vec<Point>,
        half_edges: Vec<HalfEdge>,
        faces: Vec<Face>,
    ) -> Pslg {
        let mut rotation = vec![Vec::new(); vertices.len()];
        for (h, he) in half_edges.iter().enumerate() {
            if let Some(r) = rotation.get_mut(he.origin) {
                r.push(h);
            }
        }
        Pslg {
            vertices,
            half_edges,
            faces,
            rotation,
        }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn half_edges(&self) -> &[HalfEdge] {
        &self.half_edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.half_edges.len() / 2
    }

    pub fn num_bounded_faces(&self) -> usize {
        self.faces.iter().filter(|f| f.bounded).count()
    }

    /// Endpoint vertex ids of edge `e`, lower id first.
    pub fn edge(&self, e: usize) -> [usize; 2] {
        [
            self.half_edges[2 * e].origin,
            self.half_edges[2 * e + 1].origin,
        ]
    }

    pub fn edges(&self) -> impl Iterator<Item = [usize; 2]> + '_ {
        (0..self.num_edges()).map(|e| self.edge(e))
    }

    /// Edge `e` as a segment running from its lexicographically smaller
    /// endpoint, independent of vertex labels.
    pub fn segment(&self, e: usize) -> Segment {
        let [a, b] = self.edge(e).map(|v| self.vertices[v]);
        if a.lex_cmp(&b).is_le() {
            Segment { a, b }
        } else {
            Segment { a: b, b: a }
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    /// Outgoing half-edges of `v`, counter-clockwise.
    pub fn outgoing(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    /// Edge ids incident to `v`, in counter-clockwise order.
    pub fn incident_edges(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.rotation[v].iter().map(|h| h / 2)
    }

    pub fn dest(&self, h: usize) -> usize {
        self.half_edges[self.half_edges[h].twin].origin
    }

    pub fn bbox(&self) -> Rect {
        Rect::bounding(&self.vertices).unwrap_or(Rect::new(Point::default(), Point::default()))
    }

    /// Vertex ids of the boundary cycle of face `f`.
    pub fn face_cycle(&self, f: usize) -> Vec<usize> {
        let start = self.faces[f].half_edge;
        let mut out = vec![];
        let mut h = start;
        loop {
            out.push(self.half_edges[h].origin);
            h = self.half_edges[h].next;
            if h == start || out.len() > self.half_edges.len() {
                break;
            }
        }
        out
    }

    /// Number of connected components, counting isolated vertices.
    pub fn num_components(&self) -> usize {
        let mut uf = UnionFind::new(self.vertices.len());
        for [a, b] in self.edges() {
            uf.union(a, b);
        }
        uf.count()
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            sets: n,
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        self.sets -= 1;
        true
    }

    pub(crate) fn count(&self) -> usize {
        self.sets
    }

    pub(crate) fn len(&self) -> usize {
        self.parent.len()
    }

    /// Adds a new singleton set.
    pub(crate) fn push(&mut self) {
        self.parent.push(self.parent.len());
        self.sets += 1;
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    /// `(face, vertex)` pairs where a bounded face turns clockwise.
    pub reflex_vertices: Vec<(usize, usize)>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every structural invariant and audits bounded faces for convexity.
/// Never panics on malformed input.
pub fn validate(g: &Pslg) -> ValidationReport {
    let mut report = ValidationReport::default();
    let nh = g.half_edges.len();
    let v = &mut report.violations;
    let in_range =
        |h: &HalfEdge| h.twin < nh && h.next < nh && h.prev < nh && h.face < g.faces.len();
    for (h, he) in g.half_edges.iter().enumerate() {
        if !in_range(he) || he.origin >= g.vertices.len() {
            v.push(format!("half-edge {h}: index out of range"));
        }
    }
    if !v.is_empty() {
        return report;
    }
    let he = &g.half_edges;
    if nh % 2 != 0 {
        v.push("odd number of half-edges".into());
    }
    for h in 0..nh {
        if he[h].twin == h || he[he[h].twin].twin != h {
            v.push(format!("twin involution violated at half-edge {h}"));
        }
        if he[he[h].prev].next != h || he[he[h].next].prev != h {
            v.push(format!("next/prev inconsistent at half-edge {h}"));
        }
        if he[he[h].next].origin != he[he[h].twin].origin {
            v.push(format!(
                "half-edge {h}: next does not start at its destination"
            ));
        }
    }
    let mut seen = vec![false; nh];
    for (f, face) in g.faces.iter().enumerate() {
        if face.half_edge >= nh {
            v.push(format!("face {f}: half-edge out of range"));
            continue;
        }
        let mut h = face.half_edge;
        let mut steps = 0;
        loop {
            if seen[h] {
                v.push(format!("half-edge {h} on more than one face cycle"));
                break;
            }
            seen[h] = true;
            if he[h].face != f {
                v.push(format!(
                    "half-edge {h} on cycle of face {f} but labelled {}",
                    he[h].face
                ));
            }
            h = he[h].next;
            steps += 1;
            if h == face.half_edge || steps > nh {
                break;
            }
        }
    }
    if let Some(h) = seen.iter().position(|s| !s) {
        v.push(format!("half-edge {h} belongs to no face cycle"));
    }
    if !v.is_empty() {
        return report;
    }

    for (e, [a, b]) in g.edges().enumerate() {
        if g.vertices[a] == g.vertices[b] {
            v.push(format!("edge {e} has zero length"));
        }
    }
    if let Some((a, b)) = find_duplicate_vertex(&g.vertices) {
        v.push(format!("vertices {a} and {b} coincide"));
    }
    let edges: Vec<[usize; 2]> = g.edges().collect();
    if let Err(err) = check_crossings(&g.vertices, &edges) {
        v.push(err.to_string());
    }
    for (u, out) in g.rotation.iter().enumerate() {
        let angles: Vec<f64> = out
            .iter()
            .map(|&h| {
                let d = g.vertices[g.dest(h)] - g.vertices[u];
                d.y.atan2(d.x)
            })
            .collect();
        if angles.windows(2).any(|w| w[0] >= w[1]) {
            v.push(format!(
                "vertex {u}: rotation not strictly counter-clockwise"
            ));
        }
    }
    let bounded = g.num_bounded_faces() as i64;
    let c = g.num_components() as i64;
    let (nv, ne) = (g.num_vertices() as i64, g.num_edges() as i64);
    if nv - ne + bounded != c {
        v.push(format!(
            "Euler characteristic violated: V - E + F_bounded = {} but components = {c}",
            nv - ne + bounded
        ));
    }
    let unbounded = g.faces.len() as i64 - bounded;
    let edge_components = c - g.rotation.iter().filter(|r| r.is_empty()).count() as i64;
    if unbounded != edge_components {
        v.push(format!(
            "{unbounded} outer cycles for {edge_components} components with edges"
        ));
    }

    for (f, face) in g.faces.iter().enumerate().filter(|(_, f)| f.bounded) {
        let start = face.half_edge;
        let mut h = start;
        loop {
            let n = he[h].next;
            let (a, b, c) = (
                g.vertices[he[h].origin],
                g.vertices[he[n].origin],
                g.vertices[g.dest(n)],
            );
            if orient(a, b, c) < 0.0 {
                report.reflex_vertices.push((f, he[n].origin));
            }
            h = n;
            if h == start {
                break;
            }
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq)]
pub struct PslgMetrics {
    /// Smallest angle between cyclically consecutive incident edges, radians.
    pub alpha: f64,
    /// Shortest incident edge length per vertex (`None` for isolated vertices).
    pub lambda: Vec<Option<f64>>,
    pub delta_max: f64,
    pub bbox: Rect,
}

pub fn metrics(g: &Pslg) -> Result<PslgMetrics, PslgError> {
    let mut alpha = f64::INFINITY;
    let mut lambda = vec![None; g.num_vertices()];
    for (u, out) in g.rotation.iter().enumerate() {
        let o = g.vertices[u];
        let mut angles = Vec::with_capacity(out.len());
        for &h in out {
            let d = g.vertices[g.dest(h)] - o;
            let len = d.norm();
            lambda[u] = Some(lambda[u].map_or(len, |l: f64| l.min(len)));
            angles.push(d.y.atan2(d.x));
        }
        if angles.len() >= 2 {
            for w in angles.windows(2) {
                alpha = alpha.min(w[1] - w[0]);
            }
            alpha = alpha.min(angles[0] + TAU - angles[angles.len() - 1]);
        }
    }
    if !alpha.is_finite() {
        return Err(PslgError::AlphaUndefined);
    }
    let delta_max = (0..g.num_edges())
        .map(|e| g.segment(e).length())
        .fold(0.0, f64::max);
    Ok(PslgMetrics {
        alpha,
        lambda,
        delta_max,
        bbox: g.bbox(),
    })
}

/// On-disk PSLG: `{"vertices": [[x, y], ...], "edges": [[i, j], ...]}` with an
/// optional `gen` header written by the generator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PslgFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gen: Option<serde_json::Value>,
    pub vertices: Vec<Point>,
    pub edges: Vec<[usize; 2]>,
}

impl PslgFile {
    pub fn from_pslg(g: &Pslg) -> Self {
        let mut edges: Vec<[usize; 2]> = g.edges().collect();
        edges.sort_unstable();
        PslgFile {
            gen: None,
            vertices: g.vertices.clone(),
            edges,
        }
    }

    pub fn to_pslg(&self) -> Result<Pslg, PslgError> {
        build_pslg(self.vertices.clone(), &self.edges)
    }

    /// Deterministic text form, one vertex or edge per line.
    pub fn to_json_string(&self) -> String {
        let mut s = String::from("{\n");
        if let Some(gen) = &self.gen {
            s += &format!(
                "  \"gen\": {},\n",
                serde_json::to_string(gen).expect("json value")
            );
        }
        let rows = |items: Vec<String>| items.join(",\n    ");
        let vs = self
            .vertices
            .iter()
            .map(|p| serde_json::to_string(p).expect("finite point"))
            .collect();
        let es = self
            .edges
            .iter()
            .map(|e| format!("[{}, {}]", e[0], e[1]))
            .collect();
        s += &format!("  \"vertices\": [\n    {}\n  ],\n", rows(vs));
        s += &format!("  \"edges\": [\n    {}\n  ]\n}}\n", rows(es));
        s
    }
}

pub fn load(path: impl AsRef<Path>) -> Result<Pslg, PslgError> {
    load_file(path)?.to_pslg()
}

pub fn load_file(path: impl AsRef<Path>) -> Result<PslgFile, PslgError> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn save(g: &Pslg, path: impl AsRef<Path>) -> Result<(), PslgError> {
    fs::write(path, PslgFile::from_pslg(g).to_json_string())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    fn triangle() -> Pslg {
        let h = 3f64.sqrt() * 2.0;
        build_pslg(
            pts(&[(0.0, 0.0), (4.0, 0.0), (2.0, h)]),
            &[[0, 1], [1, 2], [2, 0]],
        )
        .unwrap()
    }

    #[test]
    fn triangle_structure() {
        let g = triangle();
        assert_eq!(g.half_edges().len(), 6);
        assert_eq!(g.faces().len(), 2);
        assert_eq!(g.num_bounded_faces(), 1);
        assert_eq!(3 - 3 + g.faces().len(), 2);
        assert!(validate(&g).is_valid());
    }

    #[test]
    fn crossing_rejected() {
        let err = build_pslg(
            pts(&[(0.0, 0.0), (2.0, 2.0), (0.0, 2.0), (2.0, 0.0)]),
            &[[0, 1], [2, 3]],
        )
        .unwrap_err();
        assert!(matches!(err, PslgError::Crossing([0, 1], [2, 3])), "{err}");
    }

    #[test]
    fn single_edge() {
        let g = build_pslg(pts(&[(0.0, 0.0), (1.0, 0.0)]), &[[1, 0]]).unwrap();
        assert_eq!(g.half_edges().len(), 2);
        assert_eq!(g.faces().len(), 1);
        assert!(!g.faces()[0].bounded);
        assert!(validate(&g).is_valid());
        assert!(matches!(metrics(&g), Err(PslgError::AlphaUndefined)));
    }

    #[test]
    fn rejects_bad_input() {
        let v = pts(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        assert!(matches!(
            build_pslg(v.clone(), &[[0, 3]]),
            Err(PslgError::IndexOutOfRange {
                edge: 0,
                index: 3,
                ..
            })
        ));
        assert!(matches!(
            build_pslg(v.clone(), &[[1, 1]]),
            Err(PslgError::SelfLoop(0))
        ));
        assert!(matches!(
            build_pslg(v.clone(), &[[0, 1], [1, 0]]),
            Err(PslgError::DuplicateEdge([0, 1]))
        ));
        assert!(matches!(
            build_pslg(v.clone(), &[[0, 1], [0, 2]]),
            Err(PslgError::Overlap(..))
        ));
        let dup = pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0)]);
        assert!(matches!(
            build_pslg(dup, &[[0, 1]]),
            Err(PslgError::DuplicateVertex(1, 2))
        ));
        // Vertex on the interior of a non-incident edge.
        let t = pts(&[(0.0, 0.0), (2.0, 0.0), (1.0, 0.0), (1.0, 1.0)]);
        assert!(matches!(
            build_pslg(t, &[[0, 1], [2, 3]]),
            Err(PslgError::Crossing(..))
        ));
    }

    #[test]
    fn broken_twin_is_reported() {
        let g = triangle();
        let mut he = g.half_edges().to_vec();
        he[0].twin = 0;
        let bad = Pslg::from_raw_parts(g.vertices().to_vec(), he, g.faces().to_vec());
        let report = validate(&bad);
        assert!(
            report
                .violations
                .iter()
                .any(|m| m.contains("twin involution violated")),
            "{report:?}"
        );
    }

    #[test]
    fn l_shape_has_one_reflex_vertex() {
        let v = pts(&[
            (0.0, 0.0),
            (2.0, 0.0),
            (2.0, 1.0),
            (1.0, 1.0),
            (1.0, 2.0),
            (0.0, 2.0),
        ]);
        let e: Vec<[usize; 2]> = (0..6).map(|i| [i, (i + 1) % 6]).collect();
        let g = build_pslg(v, &e).unwrap();
        let report = validate(&g);
        assert!(report.is_valid(), "{report:?}");
        assert_eq!(report.reflex_vertices.len(), 1);
        assert_eq!(report.reflex_vertices[0].1, 3);
    }

    #[test]
    fn alpha_examples() {
        let sq = build_pslg(
            pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]),
            &[[0, 1], [1, 2], [2, 3], [3, 0]],
        )
        .unwrap();
        assert!((metrics(&sq).unwrap().alpha - FRAC_PI_2).abs() < 1e-12);
        assert!((metrics(&triangle()).unwrap().alpha - FRAC_PI_3).abs() < 1e-12);
        let path = build_pslg(
            pts(&[(0.0, 0.0), (1.0, 0.0), (3.0, 0.0)]),
            &[[0, 1], [1, 2]],
        )
        .unwrap();
        let m = metrics(&path).unwrap();
        assert!((m.alpha - PI).abs() < 1e-12);
        assert_eq!(m.lambda, vec![Some(1.0), Some(1.0), Some(2.0)]);
        assert_eq!(m.delta_max, 2.0);
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tri.json");
        let g = triangle();
        save(&g, &path).unwrap();
        let back = load(&path).unwrap();
        assert_eq!(back, g);
        let text = std::fs::read_to_string(&path).unwrap();
        save(&back, &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
    }

    #[test]
    fn load_reports_bad_record() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(
            &path,
            r#"{"vertices": [[0,0],[1,0]], "edges": [[0,1],[1,5]]}"#,
        )
        .unwrap();
        let err = load(&path).unwrap_err().to_string();
        assert!(err.contains("edge 1") && err.contains("index 5"), "{err}");
        std::fs::write(&path, r#"{"vertices": [[0,0]], "edges": "#).unwrap();
        assert!(matches!(load(&path), Err(PslgError::Json(_))));
    }
}
