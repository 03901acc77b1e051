//! Deterministic spatial, temporal and graph tools used by the specialist
//! agents. Everything is pure and generic over [`star_core::Real`].

pub mod error;
pub mod graph;
pub mod spatial;
pub mod temporal;

pub use error::{GraphError, SpatialError, TemporalError};
