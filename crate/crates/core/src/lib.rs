//! Exact fair-division workbench for the EFX family of fairness notions.
//!
//! The crate decides EF, EF1, EFX, EFX+, WEF, WEFX, WWEFX, α-WEFX and Pareto
//! optimality for allocations of indivisible goods, counts satisfying
//! allocations exhaustively, and implements constructive algorithms that
//! produce such allocations. All arithmetic is exact.

pub mod approx;
pub mod construct;
pub mod enumeration;
pub mod error;
pub mod fairness;
pub mod fixtures;
pub mod gen;
pub mod io;
mod kernel;
pub mod matching;
pub mod model;
pub mod rational;
pub mod reduction;
pub mod wefx_po;

pub use enumeration::{
    build_join_graph, count_satisfying, count_satisfying_with, iter_allocations, min_count_search, CountOptions,
    CountResult, JoinGraph, SearchReport, DEFAULT_CAP,
};
pub use error::{Error, Result};
pub use fairness::{check, eliminate_envy_cycles, envy_graph, EnvyGraph, FairnessReport, Property, Witness};
pub use io::{parse_allocation, parse_instance};
pub use model::{classify_valuations, validate_allocation, Allocation, Bundle, Instance, Valuation, ValuationClass};
pub use rational::Rational;
