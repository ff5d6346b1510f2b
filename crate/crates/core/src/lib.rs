//! Pointwise curvature algebra for area-extremality questions on 4-manifolds.

pub mod boundary;
pub mod clifford;
pub mod exterior;
pub mod families;
pub mod io;
pub mod sampling;
pub mod smallmat;
pub mod sweeps;
pub mod thorpe;
pub mod topology;
pub mod weitzenbock;
