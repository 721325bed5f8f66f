//! Exact points, instances, universes and tagged boxes.

mod boxes;
mod edge_free;
mod instance;
mod point;
mod pointset;
pub mod rational;
mod universe;

pub use boxes::{BoxSearch, TaggedBox};
pub use edge_free::{box_edge_free, EdgeStatus};
pub use instance::{Adjacency, GraphInstance, InstanceKind, Polynomial};
pub use point::{IntoRational, Point};
pub use pointset::PointSet;
pub use rational::Rational;
pub use universe::SampleUniverse;
