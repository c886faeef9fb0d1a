//! Exact Poincaré series of affine Weyl groups with unequal parameters and
//! the distinction test for degree-1 Iwahori-spherical discrete series.
//!
//! Everything is computed over the integers and rationals; no floating point
//! is involved anywhere.

#![allow(clippy::needless_range_loop)]

pub mod affine_map;
pub mod cartan_data;
pub mod closed_forms;
pub mod distinction;
pub mod hecke_module;
pub mod series_ring;
pub mod weyl_engine;
