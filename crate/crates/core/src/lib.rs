//! Exact-arithmetic verification of the planar similarity system
//! `{S_0, S_1, S_2, S_h}` whose attractor is a dendrite containing `[0, 1]`.
//!
//! The constant `c` is held as a lazily extended base-3 digit stream
//! ([`ternary`]); all geometry is exact in `c` ([`cform`], [`geometry`]) and
//! every predicate is decided against a refinable enclosure
//! ([`precision`]). The [`separation`] and [`dendrite`] modules run the
//! finite-depth checks and produce [`report::VerificationReport`]s;
//! [`suite`] runs them in order and [`render`] draws the cells as SVG.

pub mod cform;
pub mod dendrite;
pub mod error;
pub mod geometry;
pub mod interval;
pub mod precision;
pub mod rational;
pub mod render;
pub mod report;
pub mod separation;
pub mod suite;
pub mod ternary;

pub use error::{Error, Result};
pub use geometry::{Letter, Point2, Relation, Similarity, System, Triangle, Word};
pub use interval::RationalInterval;
pub use precision::CSource;
pub use rational::Rational;
pub use report::{Outcome, ReportDocument, VerificationReport};
pub use ternary::{CantorPoint, DigitStream, EnumerationMode};
