//! Co-Higgs bundles on the projective line.
//!
//! A co-Higgs bundle on `P^1` is a split bundle `V = O(d_1) + ... + O(d_k)`
//! with a Higgs field `phi`, a matrix whose `(i, j)` entry is a section of
//! `O(d_i - d_j + 2)`. This crate computes, with exact Gaussian-rational
//! arithmetic, the spectral curve `det(y - phi(z)) = 0` in the total space of
//! `O(2)`, slope stability, and the hypercohomology of the two-term complex
//! `O(V) -> O(V(2))`. It also checks the B-field action: symbolically as a
//! complex gauge transformation, and numerically as the isospectral flow of
//! Nahm's equations.

pub mod bfield;
pub mod bundle;
pub mod cli;
pub mod cohomology;
pub mod exactalg;
pub mod nahm;
pub mod rng;
pub mod spectral;
pub mod stability;
