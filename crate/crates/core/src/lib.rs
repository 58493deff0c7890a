//! Tools for auditing forest-carbon estimates on small agroforestry plots.
//!
//! The crate compares two independent estimates of aboveground biomass (AGB)
//! density for a surveyed site:
//!
//! * a **ground truth** computed from field measurements (GPS position,
//!   species, diameter at breast height) through species-family allometric
//!   equations, divided by the site polygon area, and
//! * a **filtered** estimate obtained by cubically interpolating a coarse
//!   AGB-density raster to fine resolution and averaging the cells whose
//!   centers fall inside the site polygon.
//!
//! The ratio of the two is the site's overestimation factor. [`audit`] wires
//! the full pipeline together and emits deterministic JSON/CSV reports;
//! [`crownmatch`] additionally assigns field records to externally detected
//! tree crowns so AGB can be attributed per crown.

pub mod allometry;
pub mod audit;
pub mod crownmatch;
pub mod fielddata;
pub mod inputs;
pub mod raster;
pub mod render;
pub mod zonal;

mod kahan;

pub(crate) use kahan::KahanSum;
