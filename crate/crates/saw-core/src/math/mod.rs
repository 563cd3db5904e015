//! Small numerical building blocks shared across the crate.

pub mod cmatrix;
pub mod interp;
pub mod linfit;
pub mod poly;
pub mod stencil;
