//! Exact computations with generalized reductive root systems, their Lie
//! algebras, affinizations and Lie tori.

#![allow(clippy::needless_range_loop)]

pub mod affine;
pub mod exactfield;
pub mod finroot;
pub mod grrs;
pub mod lattice;
pub mod liealg;
pub mod linalg;
pub mod report;
pub mod torus;
pub mod window;
