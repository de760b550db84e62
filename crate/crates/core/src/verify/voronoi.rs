use rayon::prelude::*;
use rstar::primitives::GeomWithData;
use rstar::RTree;

use super::VerifyError;
use crate::geom::{Point, Rect};

/// Half-plane of points at least as close to `site` as to `other`, bounded
/// by their perpendicular bisector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub site: Point,
    pub other: Point,
}

impl HalfPlane {
    /// Non-positive exactly on the kept side; scaled like a squared length.
    pub fn eval(&self, x: Point) -> f64 {
        (self.other - self.site).dot(x - self.site.midpoint(self.other))
    }

    fn crossing(&self, a: Point, b: Point) -> Point {
        let (sa, sb) = (self.eval(a), self.eval(b));
        a + (b - a) * (sa / (sa - sb))
    }
}

/// Voronoi cell as a counter-clockwise convex polygon. `neighbors[i]` is the
/// site whose bisector carries the side from `polygon[i]` to `polygon[i+1]`,
/// or `None` on the clipping box.
#[derive(Debug, Clone, PartialEq)]
pub struct VoronoiCell {
    pub polygon: Vec<Point>,
    pub neighbors: Vec<Option<usize>>,
}

impl VoronoiCell {
    pub fn area(&self) -> f64 {
        let n = self.polygon.len();
        (0..n)
            .map(|i| self.polygon[i].cross(self.polygon[(i + 1) % n]))
            .sum::<f64>()
            / 2.0
    }
}

/// A Voronoi edge with the two sites that generate it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoronoiEdge {
    pub a: Point,
    pub b: Point,
    pub sites: (usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct VoronoiDiagram {
    pub sites: Vec<Point>,
    pub bbox: Rect,
    pub cells: Vec<VoronoiCell>,
}

impl VoronoiDiagram {
    /// Every side shared by two cells, reported once from the lower site.
    pub fn edges(&self) -> Vec<VoronoiEdge> {
        let mut out = Vec::new();
        for (p, cell) in self.cells.iter().enumerate() {
            let n = cell.polygon.len();
            for i in 0..n {
                if let Some(q) = cell.neighbors[i] {
                    if p < q {
                        out.push(VoronoiEdge {
                            a: cell.polygon[i],
                            b: cell.polygon[(i + 1) % n],
                            sites: (p, q),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn total_area(&self) -> f64 {
        self.cells.iter().map(VoronoiCell::area).sum()
    }
}

pub(crate) fn site_tree(sites: &[Point]) -> RTree<GeomWithData<[f64; 2], usize>> {
    RTree::bulk_load(
        sites
            .iter()
            .enumerate()
            .map(|(i, p)| GeomWithData::new([p.x, p.y], i))
            .collect(),
    )
}

/// Every cell is the box clipped by the bisectors of the other sites, taken
/// in order of distance until no farther site can cut it.
pub fn brute_force_voronoi(sites: &[Point], bbox: Rect) -> Result<VoronoiDiagram, VerifyError> {
    if sites.is_empty() {
        return Err(VerifyError::NoSites);
    }
    if let Some(i) = sites.iter().position(|p| !bbox.contains(*p)) {
        return Err(VerifyError::OutsideBox(i));
    }
    let tree = site_tree(sites);
    for (i, p) in sites.iter().enumerate() {
        let twin = tree
            .nearest_neighbor_iter(&[p.x, p.y])
            .find(|e| e.data != i);
        if let Some(t) = twin.filter(|t| Point::from(*t.geom()) == *p) {
            return Err(VerifyError::DuplicateSite(i.min(t.data), i.max(t.data)));
        }
    }
    let cells = (0..sites.len())
        .into_par_iter()
        .map(|i| {
            let p = sites[i];
            let mut polygon = vec![
                bbox.min,
                Point::new(bbox.max.x, bbox.min.y),
                bbox.max,
                Point::new(bbox.min.x, bbox.max.y),
            ];
            let mut neighbors = vec![None; 4];
            let mut reach2 = polygon.iter().map(|v| v.dist2(p)).fold(0.0, f64::max);
            for other in tree.nearest_neighbor_iter(&[p.x, p.y]) {
                if other.data == i {
                    continue;
                }
                let q = Point::from(*other.geom());
                if q.dist2(p) > 4.0 * reach2 {
                    break;
                }
                let h = HalfPlane { site: p, other: q };
                clip(&mut polygon, &mut neighbors, &h, other.data);
                reach2 = polygon.iter().map(|v| v.dist2(p)).fold(0.0, f64::max);
            }
            VoronoiCell { polygon, neighbors }
        })
        .collect();
    Ok(VoronoiDiagram {
        sites: sites.to_vec(),
        bbox,
        cells,
    })
}

fn clip(polygon: &mut Vec<Point>, labels: &mut Vec<Option<usize>>, h: &HalfPlane, id: usize) {
    let n = polygon.len();
    let s: Vec<f64> = polygon.iter().map(|&v| h.eval(v)).collect();
    if s.iter().all(|&x| x <= 0.0) {
        return;
    }
    let mut out = Vec::with_capacity(n + 1);
    let mut out_labels = Vec::with_capacity(n + 1);
    for i in 0..n {
        let j = (i + 1) % n;
        let (cur, nxt) = (polygon[i], polygon[j]);
        match (s[i] <= 0.0, s[j] <= 0.0) {
            (true, true) => {
                out.push(cur);
                out_labels.push(labels[i]);
            }
            (true, false) => {
                out.push(cur);
                out_labels.push(labels[i]);
                out.push(h.crossing(cur, nxt));
                out_labels.push(Some(id));
            }
            (false, true) => {
                out.push(h.crossing(cur, nxt));
                out_labels.push(labels[i]);
            }
            (false, false) => {}
        }
    }
    // Drop sides that collapsed to a point.
    let mut k = 0;
    while k < out.len() && out.len() > 2 {
        let next = (k + 1) % out.len();
        if out[k] == out[next] {
            out.remove(k);
            out_labels.remove(k);
        } else {
            k += 1;
        }
    }
    *polygon = out;
    *labels = out_labels;
}
