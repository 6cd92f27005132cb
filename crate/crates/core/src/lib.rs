//! Exact evaluation and analysis of Weil sums of binomials
//!
//! `W_{F,d}(u) = Σ_{x∈F} ψ(x^d + u·x)` over a small finite field `F` of
//! characteristic `p`, where `ψ(x) = ζ_p^{Tr(x)}`. Every value lives in the
//! cyclotomic ring `Z[ζ_p]` and is computed exactly.
//!
//! Layout:
//! - [`ff_core`]: table-driven finite fields `F_{p^n}`.
//! - [`cyclotomic`]: exact `Z[ζ_p]` arithmetic and the `(1-ζ)`-adic valuation.
//! - [`group_algebra`]: the group algebra over `F*` and pluggable convolution.
//! - [`weil_engine`]: spectra by naive summation or by convolution.
//! - [`analysis`]: identities, congruences, three-valued structure, towers.
//! - [`scan`]: exhaustive scans, verification suites and JSONL records.
//!
//! Algorithm variants (spectrum methods, convolvers, verification suites) sit
//! behind traits and are looked up by name in small registries so the CLI can
//! select them at runtime.

pub mod analysis;
pub mod arith;
pub mod cyclotomic;
pub mod error;
pub mod ff_core;
pub mod group_algebra;
pub mod registry;
pub mod scan;
pub mod weil_engine;

pub use cyclotomic::{CycInt, PDecomp, ValuationQ};
pub use error::{Error, Result};
pub use ff_core::{build_field, inverse_exponent, Elem, FieldSpec, FieldTables};
pub use group_algebra::GAElem;
pub use weil_engine::WeilSpectrum;

/// Engine version stamped into every scan record.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
