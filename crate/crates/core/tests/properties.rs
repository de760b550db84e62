//! Invariants over seeded random tesselations.

use givp::geom::Point;
use givp::pslg::{build_pslg, metrics, validate, Pslg};
use givp::solver::{solve, SolverConfig, Variant};
use givp::tessgen::{generate, TessGenConfig};
use givp::verify::{brute_force_voronoi, edge_coverage_check, exact_guard_check, verification_box};
use proptest::prelude::*;

fn graph(seed: u64, n: usize) -> Pslg {
    generate(&TessGenConfig::new(seed, n, n)).unwrap()
}

fn transformed(g: &Pslg, f: impl Fn(Point) -> Point) -> Pslg {
    build_pslg(
        g.vertices().iter().map(|&p| f(p)).collect(),
        &g.edges().collect::<Vec<_>>(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_variant_is_certified(seed in any::<u64>(), n in 5usize..20) {
        let g = graph(seed, n);
        let sols: Vec<_> = Variant::ALL.iter().map(|&v| solve(&g, &SolverConfig::new(v)).unwrap()).collect();
        for sol in &sols {
            let cert = exact_guard_check(&g, sol).unwrap();
            prop_assert!(cert.pass, "{}: {:?}", sol.report.variant, cert.failures().next());
            prop_assert_eq!(sol.report.counts.initial_pairs, 2 * g.num_edges());
            prop_assert_eq!(sol.report.counts.sites, sol.sites.len());
        }
        let naive = sols[0].sites.len();
        prop_assert!(sols[1].sites.len() <= naive);
        prop_assert!(sols[2].sites.len() <= naive);
        let eps = sols[0].report.epsilon;
        for plan in &sols[0].report.plans {
            prop_assert_eq!(plan.circles.len(), (plan.delta / (2.0 * eps)).floor() as usize + 1);
        }
    }

    #[test]
    fn certificate_implies_brute_force_coverage(seed in any::<u64>(), n in 4usize..12) {
        let g = graph(seed, n);
        let tol = 1e-6 * g.bbox().diagonal();
        for v in [Variant::Sequential, Variant::Recursive] {
            let sol = solve(&g, &SolverConfig::new(v)).unwrap();
            prop_assert!(exact_guard_check(&g, &sol).unwrap().pass);
            let vd = brute_force_voronoi(&sol.sites, verification_box(&g)).unwrap();
            let cov = edge_coverage_check(&g, &vd, tol, sol.report.epsilon);
            prop_assert!(cov.pass, "{}: {:?}", v, cov.failures().next());
        }
    }

    #[test]
    fn voronoi_cells_tile_the_box(seed in any::<u64>(), n in 4usize..10) {
        let g = graph(seed, n);
        let sol = solve(&g, &SolverConfig::default()).unwrap();
        let bbox = verification_box(&g);
        let vd = brute_force_voronoi(&sol.sites, bbox).unwrap();
        let area = bbox.width() * bbox.height();
        prop_assert!((vd.total_area() - area).abs() <= 1e-6 * area);
        for (i, cell) in vd.cells.iter().enumerate() {
            let site = vd.sites[i];
            for (k, &x) in cell.polygon.iter().enumerate() {
                let d = x.dist(site);
                for other in cell.neighbors[k].iter().chain(cell.neighbors[(k + cell.polygon.len() - 1) % cell.polygon.len()].iter()) {
                    let e = x.dist(vd.sites[*other]);
                    prop_assert!((d - e).abs() <= 1e-7 * d.max(1.0), "vertex {:?} of cell {}", x, i);
                }
            }
        }
    }

    #[test]
    fn power_of_two_scaling_keeps_the_count(seed in any::<u64>(), k in -6i32..6) {
        let g = graph(seed, 10);
        let s = 2f64.powi(k);
        let h = transformed(&g, |p| p * s);
        for v in Variant::ALL {
            let a = solve(&g, &SolverConfig::new(v)).unwrap();
            let b = solve(&h, &SolverConfig::new(v)).unwrap();
            prop_assert_eq!(a.sites.len(), b.sites.len());
            prop_assert_eq!(b.report.epsilon, a.report.epsilon * s);
        }
    }

    #[test]
    fn graph_invariants_hold(seed in any::<u64>(), n in 3usize..30) {
        let g = graph(seed, n);
        prop_assert!(validate(&g).is_valid());
        let bounded_and_outer = g.num_bounded_faces() + 1;
        prop_assert_eq!(g.num_vertices() + bounded_and_outer, g.num_edges() + 1 + g.num_components());
        for v in 0..g.num_vertices() {
            let angles: Vec<f64> = g
                .outgoing(v)
                .iter()
                .map(|&h| {
                    let d = g.vertices()[g.dest(h)] - g.vertices()[v];
                    d.y.atan2(d.x)
                })
                .collect();
            let turns = angles.windows(2).filter(|w| w[1] <= w[0]).count();
            prop_assert!(turns <= 1, "rotation at {} is not cyclically increasing", v);
        }
    }

    #[test]
    fn metrics_ignore_labels(seed in any::<u64>(), n in 3usize..20, shift in 1usize..50) {
        let g = graph(seed, n);
        let nv = g.num_vertices();
        let perm: Vec<usize> = (0..nv).map(|i| (i + shift) % nv).collect();
        let mut verts = vec![Point::default(); nv];
        for (old, &new) in perm.iter().enumerate() {
            verts[new] = g.vertices()[old];
        }
        let edges: Vec<[usize; 2]> = g.edges().map(|[a, b]| [perm[a], perm[b]]).collect();
        let h = build_pslg(verts, &edges).unwrap();
        let (a, b) = (metrics(&g).unwrap(), metrics(&h).unwrap());
        prop_assert_eq!(a.alpha, b.alpha);
        prop_assert_eq!(a.delta_max, b.delta_max);
        let sa = solve(&g, &SolverConfig::default()).unwrap();
        let sb = solve(&h, &SolverConfig::default()).unwrap();
        prop_assert_eq!(sa.sites, sb.sites);
    }
}
