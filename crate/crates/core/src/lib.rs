//! Generator placement for the generalized inverse Voronoi problem.
//!
//! Given a planar straight-line graph, [`solver::solve`] places a finite set
//! of sites whose Voronoi diagram contains every input edge, and
//! [`verify`] checks that claim independently.

pub mod geom;
pub mod pslg;
pub mod solver;
pub mod spatial;
pub mod stats;
pub mod tessgen;
pub mod verify;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/sentinels.md")]
    mod sentinels {}
    #[doc = include_str!("../../../book/src/covers.md")]
    mod covers {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/tessgen.md")]
    mod tessgen {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
