//! Word metrics, growth estimates, and rough/quasi-isometry certification
//! for finitely generated groups given by concrete normal forms.
//!
//! The crate is organized around a small number of value types:
//!
//! * [`group::Group`] / [`group::Element`] — group descriptors and exact
//!   element arithmetic for free, free-abelian, cyclic, direct-product,
//!   central-extension, and lattice-by-finite semidirect families;
//! * [`metric::Ball`] — breadth-first balls of word metrics with strict
//!   resource caps, plus growth reports and DOT/CSV export;
//! * [`coarse::CoarseMap`] — maps between two marked groups together with
//!   additive/multiplicative distortion fitting on finite balls;
//! * [`families::FamilyRequest`] — generating sets that pin one target
//!   element at length one while pushing another beyond a prescribed
//!   length;
//! * [`isometry`] — exact isometry groups of finite Cayley graphs and
//!   sign-composition analysis of candidate shared isometries;
//! * [`quotient`] — finite-kernel quotients and generating-set
//!   enlargements realized as explicit coarse maps.

#![forbid(unsafe_code)]

pub mod coarse;
pub mod families;
pub mod group;
pub mod isometry;
pub mod metric;
pub mod quotient;

pub use coarse::{CoarseMap, ElementMap, QiFit, RoughCheck};
pub use families::{FamilyRequest, SeparatingFamily};
pub use group::{Element, GeneratingSet, Group, GroupError};
pub use isometry::{IsometryReport, SharedIsometryReport, StructureHint};
pub use metric::{Ball, GrowthReport, MetricError};
pub use quotient::{QuotientIsometry, RecognitionReport};
