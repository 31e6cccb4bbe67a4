//! Exact computation of trace-cone invariants of block-presented ordered
//! K-theory data: ordered groups, delta-families of trace simplices, the
//! extended trace cone with its lattice structure, the functors between
//! the two descriptions, and morphism transport.

pub mod blocks;
pub mod corpus;
pub mod document;
pub mod elliott;
pub mod error;
pub mod functors;
pub mod generate;
pub mod lp;
pub mod matrix;
pub mod ordered_groups;
pub mod rational;
pub mod report;
pub mod stevens;
pub mod trace_cones;

pub use error::{Error, Result};
pub use document::{Document, Kind};
pub use matrix::Matrix;
pub use ordered_groups::{FinAbGroup, K1Hom, PositiveHom, Scale, ScaledOrderedGroup, Support};
pub use rational::{ExtRat, Rational};
pub use report::{Check, Report, Violation};
pub use elliott::{EMorphism, EObject, TraceConeX, XElement};
pub use stevens::{DeltaFamily, SMorphism, SObject};
