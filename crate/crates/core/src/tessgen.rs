//! Seeded random tesselations: uniform points, random chords with
//! intersection splitting, then an augmentation pass that connects the
//! components and removes vertices of degree below two.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{angle_between, dist_point_segment, orient, Point, Rect, Segment};
use crate::pslg::{build_pslg, Pslg, PslgError, PslgFile, UnionFind};

/// Identifier of the random number generator, recorded in file headers.
pub const RNG_ID: &str = "chacha8";

#[derive(Debug, Error)]
pub enum TessGenError {
    #[error("n_points must be at least 3, got {0}")]
    TooFewPoints(usize),
    #[error("box must have positive width and height")]
    DegenerateBox,
    #[error("min_angle_deg must lie in [0, 60), got {0}")]
    MinAngle(f64),
    #[error("min_feature must lie in [0, 0.1), got {0}")]
    MinFeature(f64),
    #[error("could not place point {0} away from the others")]
    Crowded(usize),
    #[error("could not connect the graph")]
    Disconnected,
    #[error(transparent)]
    Pslg(#[from] PslgError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TessGenConfig {
    pub seed: u64,
    pub n_points: usize,
    pub n_edge_attempts: usize,
    #[serde(rename = "box")]
    pub bbox: Rect,
    /// Smallest angle a new edge may form with existing edges, in degrees.
    pub min_angle_deg: f64,
    /// Smallest vertex-to-edge clearance and edge piece length, as a
    /// fraction of the box diagonal.
    pub min_feature: f64,
    /// Resamples allowed per point and per edge attempt.
    pub retries: usize,
}

impl TessGenConfig {
    pub fn new(seed: u64, n_points: usize, n_edge_attempts: usize) -> Self {
        TessGenConfig {
            seed,
            n_points,
            n_edge_attempts,
            bbox: Rect::new(Point::new(0.0, 0.0), Point::new(1000.0, 1000.0)),
            min_angle_deg: 15.0,
            min_feature: 1e-3,
            retries: 50,
        }
    }

    pub fn check(&self) -> Result<(), TessGenError> {
        if self.n_points < 3 {
            return Err(TessGenError::TooFewPoints(self.n_points));
        }
        if !(self.bbox.width() > 0.0 && self.bbox.height() > 0.0) {
            return Err(TessGenError::DegenerateBox);
        }
        if !(0.0..60.0).contains(&self.min_angle_deg) {
            return Err(TessGenError::MinAngle(self.min_angle_deg));
        }
        if !(0.0..0.1).contains(&self.min_feature) {
            return Err(TessGenError::MinFeature(self.min_feature));
        }
        Ok(())
    }

    /// Header object stored under `gen` in generated files.
    pub fn header(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("config is serializable");
        v["rng_id"] = RNG_ID.into();
        v
    }
}

struct Builder {
    pts: Vec<Point>,
    edges: Vec<[usize; 2]>,
    min_len: f64,
    min_angle: f64,
}

/// Why a candidate edge was refused.
#[derive(Debug, PartialEq)]
enum Refusal {
    /// Would produce a crossing, overlap or touching configuration.
    Invalid,
    /// Valid but below the quality thresholds.
    Poor,
}

struct Crossing {
    edge: usize,
    t: f64,
    at: Point,
}

impl Builder {
    fn seg(&self, e: usize) -> Segment {
        let [a, b] = self.edges[e];
        Segment {
            a: self.pts[a],
            b: self.pts[b],
        }
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges
            .iter()
            .any(|&[a, b]| (a == u && b == v) || (a == v && b == u))
    }

    fn degree(&self) -> Vec<usize> {
        let mut d = vec![0; self.pts.len()];
        for &[a, b] in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    /// Checks the segment `u–v` against the current graph and returns its
    /// proper crossings ordered from `u`. With `split` false, any crossing
    /// refuses the segment.
    fn examine(
        &self,
        u: usize,
        v: usize,
        split: bool,
        strict: bool,
    ) -> Result<Vec<Crossing>, Refusal> {
        let (p, q) = (self.pts[u], self.pts[v]);
        let s = Segment { a: p, b: q };
        let len = p.dist(q);
        let poor = |bad: bool| {
            if bad && strict {
                Err(Refusal::Poor)
            } else {
                Ok(())
            }
        };
        if len == 0.0 || self.has_edge(u, v) {
            return Err(Refusal::Invalid);
        }
        poor(len < self.min_len)?;
        for (w, &x) in self.pts.iter().enumerate() {
            if w == u || w == v {
                continue;
            }
            let d = dist_point_segment(x, &s);
            if d == 0.0 {
                return Err(Refusal::Invalid);
            }
            poor(d < self.min_len)?;
        }
        let mut crossings = Vec::new();
        for (e, &[a, b]) in self.edges.iter().enumerate() {
            let f = self.seg(e);
            let shared = [a, b].iter().find(|&&x| x == u || x == v).copied();
            if let Some(c) = shared {
                let here = if c == u { p } else { q };
                let there = if c == u { q } else { p };
                let other = self.pts[if a == c { b } else { a }];
                let ang = angle_between(there - here, other - here).unwrap_or(0.0);
                if ang == 0.0 {
                    return Err(Refusal::Invalid);
                }
                poor(ang < self.min_angle)?;
                continue;
            }
            for end in [p, q] {
                let d = dist_point_segment(end, &f);
                if d == 0.0 {
                    return Err(Refusal::Invalid);
                }
                poor(d < self.min_len)?;
            }
            let (d1, d2) = (orient(p, q, f.a), orient(p, q, f.b));
            let (d3, d4) = (orient(f.a, f.b, p), orient(f.a, f.b, q));
            if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
                if !split {
                    return Err(Refusal::Invalid);
                }
                let t = d3 / (d3 - d4);
                let at = p + (q - p) * t;
                let ang = angle_between(q - p, f.b - f.a).unwrap_or(0.0);
                poor(ang.min(std::f64::consts::PI - ang) < self.min_angle)?;
                poor(at.dist(f.a) < self.min_len || at.dist(f.b) < self.min_len)?;
                crossings.push(Crossing { edge: e, t, at });
            }
        }
        crossings.sort_by(|a, b| a.t.total_cmp(&b.t));
        let mut last = p;
        for c in &crossings {
            poor(c.at.dist(last) < self.min_len)?;
            last = c.at;
        }
        poor(q.dist(last) < self.min_len)?;
        Ok(crossings)
    }

    fn insert(&mut self, u: usize, v: usize, crossings: Vec<Crossing>) {
        let mut chain = vec![u];
        let mut split: Vec<(usize, usize)> = Vec::new();
        for c in crossings {
            let x = self.pts.len();
            self.pts.push(c.at);
            split.push((c.edge, x));
            chain.push(x);
        }
        chain.push(v);
        for (e, x) in split {
            let [a, b] = self.edges[e];
            self.edges[e] = [a, x];
            self.edges.push([x, b]);
        }
        for w in chain.windows(2) {
            self.edges.push([w[0], w[1]]);
        }
    }

    fn components(&self) -> UnionFind {
        let mut uf = UnionFind::new(self.pts.len());
        for &[a, b] in &self.edges {
            uf.union(a, b);
        }
        uf
    }

    fn foot(&self, u: usize, e: usize) -> Option<Point> {
        let f = self.seg(e);
        let t = f.closest_param(self.pts[u]);
        let x = f.at(t);
        (t > 0.0 && t < 1.0 && x.dist(f.a) >= self.min_len && x.dist(f.b) >= self.min_len)
            .then_some(x)
    }

    /// Chords from each vertex of `from` to other vertices and to the feet
    /// of its perpendiculars on edges, ordered by length, filtered by `keep`.
    fn candidates(
        &self,
        from: &[usize],
        keep: impl Fn(usize, Target) -> bool,
    ) -> Vec<(usize, Target)> {
        let mut c: Vec<(f64, usize, Target)> = Vec::new();
        for &u in from {
            let p = self.pts[u];
            for v in (0..self.pts.len()).filter(|&v| v != u) {
                if keep(u, Target::Vertex(v)) {
                    c.push((p.dist2(self.pts[v]), u, Target::Vertex(v)));
                }
            }
            for e in 0..self.edges.len() {
                if self.edges[e].contains(&u) || !keep(u, Target::Foot(e)) {
                    continue;
                }
                if let Some(x) = self.foot(u, e) {
                    c.push((p.dist2(x), u, Target::Foot(e)));
                }
            }
        }
        c.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
        c.into_iter().map(|(_, u, t)| (u, t)).collect()
    }

    /// Adds the chord if it passes [`Builder::examine`]; a foot target
    /// splits its edge first and is rolled back on refusal.
    fn attach(&mut self, u: usize, to: Target, strict: bool) -> Option<usize> {
        match to {
            Target::Vertex(v) => {
                self.examine(u, v, false, strict).ok()?;
                self.edges.push([u, v]);
                Some(v)
            }
            Target::Foot(e) => {
                let x = self.foot(u, e)?;
                let xi = self.pts.len();
                let [a, b] = self.edges[e];
                self.pts.push(x);
                self.edges[e] = [a, xi];
                self.edges.push([xi, b]);
                if self.examine(u, xi, false, strict).is_ok() {
                    self.edges.push([u, xi]);
                    Some(xi)
                } else {
                    self.edges.pop();
                    self.edges[e] = [a, b];
                    self.pts.pop();
                    None
                }
            }
        }
    }

    /// Joins components with the shortest admissible chords between them.
    fn connect(&mut self) -> Result<(), TessGenError> {
        for strict in [true, false] {
            let mut uf = self.components();
            if uf.count() == 1 {
                return Ok(());
            }
            let comp: Vec<usize> = (0..self.pts.len()).map(|v| uf.find(v)).collect();
            let edge_comp: Vec<usize> = self.edges.iter().map(|&[a, _]| comp[a]).collect();
            let all: Vec<usize> = (0..self.pts.len()).collect();
            let cands = self.candidates(&all, |u, t| match t {
                Target::Vertex(v) => comp[u] != comp[v],
                Target::Foot(e) => comp[u] != edge_comp[e],
            });
            for (u, t) in cands {
                let other = match t {
                    Target::Vertex(v) => v,
                    Target::Foot(e) => self.edges[e][0],
                };
                if uf.find(u) == uf.find(other) {
                    continue;
                }
                if let Some(x) = self.attach(u, t, strict) {
                    if x == uf.len() {
                        uf.push();
                    }
                    uf.union(u, x);
                    uf.union(x, other);
                    if uf.count() == 1 {
                        return Ok(());
                    }
                }
            }
        }
        Err(TessGenError::Disconnected)
    }

    /// Gives every vertex of degree below two its shortest admissible chord.
    fn fix_leaves(&mut self) {
        let mut u = 0;
        while u < self.pts.len() {
            'strictness: for strict in [true, false] {
                while self.degree()[u] < 2 {
                    let cands = self.candidates(&[u], |_, _| true);
                    if !cands
                        .into_iter()
                        .any(|(u, t)| self.attach(u, t, strict).is_some())
                    {
                        continue 'strictness;
                    }
                }
                break;
            }
            u += 1;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Target {
    Vertex(usize),
    Foot(usize),
}

pub fn generate(cfg: &TessGenConfig) -> Result<Pslg, TessGenError> {
    cfg.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let min_len = cfg.min_feature * cfg.bbox.diagonal();
    let mut b = Builder {
        pts: Vec::with_capacity(cfg.n_points),
        edges: Vec::new(),
        min_len,
        min_angle: cfg.min_angle_deg.to_radians(),
    };
    let r = cfg.bbox;
    for i in 0..cfg.n_points {
        let mut placed = false;
        for _ in 0..=cfg.retries {
            let p = Point::new(
                rng.random_range(r.min.x..r.max.x),
                rng.random_range(r.min.y..r.max.y),
            );
            if b.pts.iter().all(|&q| q.dist(p) >= min_len && q != p) {
                b.pts.push(p);
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(TessGenError::Crowded(i));
        }
    }
    for _ in 0..cfg.n_edge_attempts {
        for _ in 0..=cfg.retries {
            let u = rng.random_range(0..cfg.n_points);
            let v = rng.random_range(0..cfg.n_points);
            if u == v {
                continue;
            }
            if let Ok(crossings) = b.examine(u, v, true, true) {
                b.insert(u, v, crossings);
                break;
            }
        }
    }
    b.connect()?;
    b.fix_leaves();
    Ok(build_pslg(b.pts, &b.edges)?)
}

/// Generated graph with its `gen` header, ready to save.
pub fn generate_file(cfg: &TessGenConfig) -> Result<PslgFile, TessGenError> {
    let g = generate(cfg)?;
    let mut file = PslgFile::from_pslg(&g);
    file.gen = Some(cfg.header());
    Ok(file)
}
