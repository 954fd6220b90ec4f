//! Command-line front end: verdict checks, classification sweeps, character
//! tables, parabolic records, and result caching.

pub mod cache;
pub mod classify;
pub mod commands;
