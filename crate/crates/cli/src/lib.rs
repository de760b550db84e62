//! Building blocks of the `givp` command: the experiment harness and the
//! SVG renderer.

pub mod experiment;
pub mod render;
