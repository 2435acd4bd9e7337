//! Optimal (r, delta) locally repairable codes from algebraic curves.
//!
//! The crate builds codes from elliptic, hyperelliptic and superelliptic
//! curves over small finite fields. Every claimed parameter is rechecked
//! from the generator matrix alone, without trusting the construction.

pub mod artifact;
pub mod code;
pub mod curve;
pub mod ecurve;
pub mod funcspace;
pub mod gf;
pub mod linalg;
pub mod par;
pub mod recipes;
pub mod repairsim;
pub mod scurve;
pub mod verify;
