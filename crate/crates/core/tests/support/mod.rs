//! Oracles and generators shared by the integration suites and the
//! acceptance runner.
#![allow(dead_code)]

pub mod css;
pub mod docgen;
pub mod filters;
pub mod fuzz;
pub mod gallery;
pub mod schedule;
