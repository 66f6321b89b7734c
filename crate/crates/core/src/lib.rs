pub mod analysis;
pub mod configs;
pub mod derivations;
pub mod golden;
pub mod io;
pub mod linalg;
pub mod planar;
pub mod seeds;
mod shapes;
mod shapes_derived;
pub mod substitution;
pub mod tiling;
