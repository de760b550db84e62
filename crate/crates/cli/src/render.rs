//! Layered SVG scenes. The y axis is flipped so the picture has the usual
//! mathematical orientation; every coordinate has six decimals.

use std::fmt::Write as _;

use givp::geom::{Circle, Point, Rect};
use givp::pslg::Pslg;
use givp::solver::Solution;
use givp::verify::VoronoiDiagram;

fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

struct Canvas {
    out: String,
    unit: f64,
}

impl Canvas {
    fn layer(&mut self, id: &str, style: &str, body: String) {
        if !body.is_empty() {
            let _ = writeln!(self.out, "<g id=\"{id}\" {style}>\n{body}</g>");
        }
    }

    fn line(&self, a: Point, b: Point) -> String {
        format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
            num(a.x),
            num(-a.y),
            num(b.x),
            num(-b.y)
        )
    }

    fn circle(&self, c: &Circle) -> String {
        format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>\n",
            num(c.center.x),
            num(-c.center.y),
            num(c.radius)
        )
    }

    fn dot(&self, p: Point) -> String {
        self.circle(&Circle {
            center: p,
            radius: 1.5 * self.unit,
        })
    }
}

/// Renders the graph, then whatever of the solution and diagram is given.
/// Empty layers are left out.
pub fn render_svg(g: &Pslg, sol: Option<&Solution>, vd: Option<&VoronoiDiagram>) -> String {
    let bbox = g.bbox();
    let diag = bbox.diagonal().max(f64::MIN_POSITIVE);
    let margin = 0.05 * diag;
    let view = Rect::new(
        Point::new(bbox.min.x - margin, -bbox.max.y - margin),
        Point::new(bbox.max.x + margin, -bbox.min.y + margin),
    );
    let mut c = Canvas {
        out: String::new(),
        unit: diag / 400.0,
    };
    let _ = writeln!(
        c.out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">",
        num(view.min.x),
        num(view.min.y),
        num(view.width()),
        num(view.height())
    );
    let u = c.unit;

    let edges: String = g
        .edges()
        .map(|[a, b]| c.line(g.vertices()[a], g.vertices()[b]))
        .collect();
    c.layer(
        "edges",
        &format!(
            "stroke=\"black\" stroke-width=\"{}\" stroke-linecap=\"round\"",
            num(3.0 * u)
        ),
        edges,
    );

    if let Some(sol) = sol {
        let initial: String = sol
            .report
            .initial_circles
            .iter()
            .map(|ic| {
                c.circle(&Circle {
                    center: ic.center,
                    radius: ic.radius,
                })
            })
            .collect();
        let style = |color: &str| {
            format!(
                "fill=\"none\" stroke=\"{color}\" stroke-width=\"{}\"",
                num(u)
            )
        };
        c.layer("initial-circles", &style("steelblue"), initial);
        let inner: String = sol
            .report
            .plans
            .iter()
            .flat_map(|p| &p.circles)
            .map(|cc| c.circle(&cc.circle))
            .collect();
        c.layer("inner-circles", &style("darkorange"), inner);
        let sites: String = sol.sites.iter().map(|&p| c.dot(p)).collect();
        c.layer("sites", "fill=\"crimson\"", sites);
    }

    if let Some(vd) = vd {
        let lines: String = vd.edges().iter().map(|e| c.line(e.a, e.b)).collect();
        let style = format!(
            "stroke=\"gray\" stroke-width=\"{}\" stroke-dasharray=\"{} {}\"",
            num(0.5 * u),
            num(2.0 * u),
            num(2.0 * u)
        );
        c.layer("voronoi", &style, lines);
    }
    c.out.push_str("</svg>\n");
    c.out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_zero_is_printed_as_zero() {
        assert_eq!(num(-0.0), "0.000000");
        assert_eq!(num(-1e-9), "0.000000");
        assert_eq!(num(-0.5), "-0.500000");
    }
}
