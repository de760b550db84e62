use super::{CoverCircle, EdgeCoverPlan, EdgeFrame, SentinelPair, SolverError};
use crate::geom::{
    grow_circle_on_edge, line_through, offset_line, solve_quadratic, Circle, Point, Rect,
};
use crate::spatial::EdgeIndex;

/// Everything a cover strategy needs for one edge. The two end pairs are
/// the ones on the initial circles.
pub struct EdgeContext<'a> {
    pub frame: &'a EdgeFrame,
    pub start: SentinelPair,
    pub end: SentinelPair,
    pub eps: f64,
    /// Every edge of the input, the owner included (it is skipped by id).
    pub obstacles: &'a EdgeIndex,
}

impl EdgeContext<'_> {
    fn gap(&self) -> (f64, f64) {
        (
            self.frame.param(self.start.foot),
            self.frame.param(self.end.foot),
        )
    }

    fn plan(&self, circles: Vec<CoverCircle>) -> EdgeCoverPlan {
        let (t1, t2) = self.gap();
        EdgeCoverPlan {
            edge: self.frame.edge,
            from: self.frame.from,
            to: self.frame.to,
            w1: self.start.foot,
            w2: self.end.foot,
            delta: (t2 - t1).max(0.0),
            start: self.start,
            end: self.end,
            circles,
        }
    }

    fn circle(&self, t: f64, radius: f64, pairs: Vec<SentinelPair>) -> CoverCircle {
        CoverCircle {
            circle: Circle {
                center: self.frame.at(t),
                radius,
            },
            pairs,
        }
    }

    /// Distance from `p` to the nearest edge other than the owner.
    fn clearance(&self, p: Point) -> f64 {
        self.obstacles
            .nearest(p, |f| f != self.frame.edge)
            .map_or(f64::INFINITY, |(_, d)| d)
    }
}

/// `⌊δ/2ε⌋ + 1` circles of radius ε, each with one pair through its center.
/// The last circle is pulled back so that its chord ends at `w2`; a single
/// circle sits at the middle of the gap.
pub fn cover_edge_naive(ctx: &EdgeContext) -> EdgeCoverPlan {
    let (t1, t2) = ctx.gap();
    let eps = ctx.eps;
    let delta = t2 - t1;
    let mut circles = Vec::new();
    if delta > 0.0 {
        let k = (delta / (2.0 * eps)).floor() as usize + 1;
        let centers: Vec<f64> = if k == 1 {
            vec![(t1 + t2) / 2.0]
        } else {
            (0..k - 1)
                .map(|i| t1 + (2 * i + 1) as f64 * eps)
                .chain([t2 - eps])
                .collect()
        };
        for t in centers {
            circles.push(ctx.circle(t, eps, vec![ctx.frame.pair_at(t, eps)]));
        }
    }
    ctx.plan(circles)
}

/// Greedy growth from the `w1` side: each circle passes through the previous
/// pair and grows until it comes within ε of another edge. The last circle is
/// centered halfway between the previous pair and the terminal pair.
pub fn cover_edge_sequential(ctx: &EdgeContext) -> Result<EdgeCoverPlan, SolverError> {
    let (mut a, t2) = ctx.gap();
    let eps = ctx.eps;
    let mut prev = ctx.start;
    let mut circles = Vec::new();
    while t2 > a {
        let half = (t2 - a) / 2.0;
        match first_contact(ctx, &prev, half) {
            None => {
                circles.push(ctx.circle(a + half, half.hypot(eps), vec![prev, ctx.end]));
                break;
            }
            Some(h) if h > 0.0 => {
                let next = ctx.frame.pair_at(a + 2.0 * h, eps);
                circles.push(ctx.circle(a + h, h.hypot(eps), vec![prev, next]));
                prev = next;
                a += 2.0 * h;
            }
            Some(_) => return Err(SolverError::Stalled(ctx.frame.edge)),
        }
    }
    Ok(ctx.plan(circles))
}

/// Smallest advance `h ≤ limit` at which the circle centered `h` past the
/// foot of `anchor` and passing through it comes within ε of another edge.
fn first_contact(ctx: &EdgeContext, anchor: &SentinelPair, limit: f64) -> Option<f64> {
    let eps = ctx.eps;
    let a = ctx.frame.param(anchor.foot);
    let mut reach = (4.0 * eps).min(limit);
    loop {
        let far = ctx.frame.at(a + reach);
        let region = Rect::bounding([
            &(anchor.foot - Point::new(eps, eps)),
            &(anchor.foot + Point::new(eps, eps)),
        ])
        .expect("two points");
        let r = reach.hypot(eps);
        let region = Rect::new(
            Point::new(region.min.x.min(far.x - r), region.min.y.min(far.y - r)),
            Point::new(region.max.x.max(far.x + r), region.max.y.max(far.y + r)),
        )
        .inflate(eps);
        let best = ctx
            .obstacles
            .intersecting(&region)
            .into_iter()
            .filter(|&f| f != ctx.frame.edge)
            .filter_map(|f| contact(ctx, anchor, f))
            .fold(f64::INFINITY, f64::min);
        if best <= reach {
            return Some(best);
        }
        if reach >= limit {
            return None;
        }
        reach = (2.0 * reach).min(limit);
    }
}

/// First advance at which the growing circle through `anchor` gets within ε
/// of edge `f`, either along its interior or at one of its endpoints.
fn contact(ctx: &EdgeContext, anchor: &SentinelPair, f: usize) -> Option<f64> {
    let eps = ctx.eps;
    let frame = ctx.frame;
    let seg = ctx.obstacles.segment(f);
    let foot = anchor.foot;
    let mut best = f64::INFINITY;

    let fl = line_through(seg.a, seg.b).ok()?;
    let n = fl.normal();
    let fdir = seg.dir();
    let flen = seg.length();
    let edge_line = frame.line();
    for sigma in [1.0, -1.0] {
        let (x, y) = (sigma * fl.eval(anchor.p), sigma * fl.eval(anchor.q));
        let from = if x >= y { anchor.p } else { anchor.q };
        if sigma * fl.eval(from) <= eps {
            continue;
        }
        let Ok(band) = offset_line(&fl, eps, seg.a + n * sigma) else {
            continue;
        };
        let Ok(c) = grow_circle_on_edge(&edge_line, foot, frame.dir, from, &band) else {
            continue;
        };
        let along = (c.center - seg.a).dot(fdir);
        if (0.0..=flen).contains(&along) {
            best = best.min((c.center - foot).dot(frame.dir));
        }
    }

    // |c − P| = r + ε with c = foot + t·dir and r² = t² + ε².
    let e2 = eps * eps;
    for end in [seg.a, seg.b] {
        let w = foot - end;
        let (big_a, b) = (w.norm2(), frame.dir.dot(w));
        for t in solve_quadratic(
            b * b - e2,
            b * (big_a - 2.0 * e2),
            (big_a - 4.0 * e2) * big_a / 4.0,
        ) {
            if t > 0.0 && big_a + 2.0 * b * t - 2.0 * e2 >= 0.0 {
                best = best.min(t);
            }
        }
    }
    best.is_finite().then_some(best)
}

/// Largest circles first: a circle at the middle of the remaining gap as
/// large as the ε-clearance to other edges allows, then recursion on the two
/// uncovered remainders.
pub fn cover_edge_recursive(ctx: &EdgeContext) -> Result<EdgeCoverPlan, SolverError> {
    let circles = cover_gap_recursive(ctx, &ctx.start, &ctx.end)?;
    Ok(ctx.plan(circles))
}

/// Covers the gap between the feet of two pairs of the same edge; circles
/// are returned in order along the edge.
pub fn cover_gap_recursive(
    ctx: &EdgeContext,
    left: &SentinelPair,
    right: &SentinelPair,
) -> Result<Vec<CoverCircle>, SolverError> {
    let eps = ctx.eps;
    let mut out: Vec<(f64, CoverCircle)> = Vec::new();
    let mut todo = vec![(*left, *right)];
    while let Some((l, r)) = todo.pop() {
        let (g0, g1) = (ctx.frame.param(l.foot), ctx.frame.param(r.foot));
        if g1 <= g0 {
            continue;
        }
        let m = (g0 + g1) / 2.0;
        let half = (g1 - g0) / 2.0;
        let r_max = ctx.clearance(ctx.frame.at(m)) - eps;
        let closing = half.hypot(eps);
        if closing <= r_max {
            out.push((m, ctx.circle(m, closing, vec![l, r])));
            continue;
        }
        let h2 = (r_max - eps) * (r_max + eps);
        if !(h2 > 0.0) {
            return Err(SolverError::Stalled(ctx.frame.edge));
        }
        let h = h2.sqrt();
        let (lp, rp) = (ctx.frame.pair_at(m - h, eps), ctx.frame.pair_at(m + h, eps));
        out.push((m, ctx.circle(m, r_max, vec![lp, rp])));
        todo.push((rp, r));
        todo.push((l, lp));
    }
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(out.into_iter().map(|(_, c)| c).collect())
}
