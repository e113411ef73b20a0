//! Command line and HTTP front ends for the reelscript compiler.
//!
//! Both go through [`api`], so a spec compiled by `reelscript compile` and
//! one returned by `POST /compile` are byte-for-byte the same.

pub mod api;
pub mod cli;
pub mod server;
