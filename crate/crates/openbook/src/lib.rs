//! Exact Dehn twist calculus for open book monodromies.
//!
//! This crate models compact oriented surfaces with boundary as glued
//! triangulations, simple closed curves as normal coordinates, and mapping
//! classes as sequences of elementary moves. On top of that it computes
//! right-veeringness and fractional Dehn twist coefficients exactly, builds
//! (2,1)-cable open books and Stallings twists, and certifies the results.

pub mod catalog;
pub mod certificate;
pub mod cli;
pub mod demo;
pub mod fdtc;
pub mod mapping;
pub mod openbook;
pub mod surface;
pub mod veer;

pub use mapping::MappingClass;
pub use surface::{BasedArc, CurveCoords, Triangulation};
