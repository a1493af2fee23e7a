//! Exact constructions of Ulrich bundles on cyclic covers.
//!
//! A cyclic cover `X → Y` of degree `d` is cut out by `T^d = s` inside the
//! total space of a line bundle. When the branch section `s` is a sum of
//! `d`-fold products of sections, an explicit square matrix `Q` with
//! `Q^d = (T^d − s)·I` presents a bundle on `X` whose pushforward to `Y` is
//! trivial. This crate computes such decompositions, builds and verifies the
//! matrices exactly over cyclotomic fields, and records the numerical
//! obstructions for covers of curves.

pub mod cli;
pub mod coverarith;
pub mod ellmodel;
pub mod exactfield;
pub mod gradedgeom;
pub mod linear;
pub mod matfac;
pub mod polyring;
