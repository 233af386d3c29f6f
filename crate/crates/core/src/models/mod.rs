//! Concrete hyperbolic systems: toral automorphisms with a Markov
//! partition, affine horseshoes and suspension flows.

mod horseshoe;
mod partition;
mod suspension;
mod torus;

pub use horseshoe::{affine_horseshoe, simplest_rational, AffineHorseshoe, HorseshoeDimension, HorseshoeSystem, LinearObservable};
pub use partition::{
    avoidance_subsystem, invariant_set_dimension, invariant_set_dimension_enclosure, markov_partition_cat, Avoidance,
    Cell, CodingCheck, Forbidden, MarkovPartition, Piece, Rect,
};
pub use suspension::{suspend, ROOF_SAMPLE_PERIOD};
pub use torus::{periodic_points, ToralAutomorphism, TorusPoint, PERIODIC_POINT_CAP};

/// The automorphism `[[2,1],[1,1]]`.
pub fn cat_map() -> ToralAutomorphism {
    ToralAutomorphism::cat_map()
}
