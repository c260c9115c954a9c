//! Finite-dimensional toolkit for semigroups of partial isometries.
//!
//! * [`numlin`]: tolerance-aware complex linear algebra.
//! * [`pisom`]: partial isometries, the product criterion, power partial
//!   isometries and their unitary / truncated-shift decomposition.
//! * [`projlat`]: commuting projection families, Boolean atoms and multiplicity.
//! * [`sgroup`]: monitored semigroup closures, selfadjoint closures, enrichment
//!   by projections, irreducibility and Brandt structure.
//! * [`invsg`]: finite inverse semigroup tables and their left regular
//!   representation by partial isometries.
//! * [`catalog`] and [`instances`]: built-in generator sets and seeded random
//!   families with prescribed structure.

pub mod catalog;
pub mod instances;
pub mod invsg;
pub mod numlin;
pub mod pisom;
pub mod projlat;
pub mod sgroup;
