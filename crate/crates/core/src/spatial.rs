//! Spatial index over the edges of a graph.

use rstar::primitives::{GeomWithData, Line};
use rstar::{RTree, AABB};

use crate::geom::{dist_point_segment, Point, Rect, Segment};

type Entry = GeomWithData<Line<[f64; 2]>, usize>;

/// R-tree over edge segments, keyed by edge id.
pub struct EdgeIndex {
    tree: RTree<Entry>,
    segments: Vec<Segment>,
}

impl EdgeIndex {
    pub fn new(segments: Vec<Segment>) -> Self {
        let entries = segments
            .iter()
            .enumerate()
            .map(|(id, s)| GeomWithData::new(Line::new([s.a.x, s.a.y], [s.b.x, s.b.y]), id))
            .collect();
        EdgeIndex {
            tree: RTree::bulk_load(entries),
            segments,
        }
    }

    pub fn segment(&self, id: usize) -> &Segment {
        &self.segments[id]
    }

    /// Distance from `p` to the nearest edge accepted by `keep`, with its id.
    pub fn nearest(&self, p: Point, mut keep: impl FnMut(usize) -> bool) -> Option<(usize, f64)> {
        self.tree
            .nearest_neighbor_iter(&[p.x, p.y])
            .find(|e| keep(e.data))
            .map(|e| (e.data, dist_point_segment(p, &self.segments[e.data])))
    }

    /// Edge ids in increasing distance from `p`.
    pub fn nearest_iter(&self, p: Point) -> impl Iterator<Item = usize> + '_ {
        self.tree.nearest_neighbor_iter(&[p.x, p.y]).map(|e| e.data)
    }

    /// Ids of edges whose bounding boxes meet `r`, in increasing id order.
    pub fn intersecting(&self, r: &Rect) -> Vec<usize> {
        let aabb = AABB::from_corners([r.min.x, r.min.y], [r.max.x, r.max.y]);
        let mut ids: Vec<usize> = self
            .tree
            .locate_in_envelope_intersecting(&aabb)
            .map(|e| e.data)
            .collect();
        ids.sort_unstable();
        ids
    }
}
