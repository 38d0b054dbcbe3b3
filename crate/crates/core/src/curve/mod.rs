//! Reducible rational curves dual to Le-networks: components, double points,
//! real ovals, plus the explicit plane curve for the Gr(2,4) top cell.

mod faces;
mod model;
mod plane24;
mod svg;

pub use faces::{Dart, DartKind, PlanarMap};
pub use model::{
    build_curve, genus_accounting, observed_counts, Component, ComponentKind, Coord, CurveModel, GenusCounts, Gluing, MarkedPoint, Oval,
    OvalCensus,
};
pub use plane24::{singularity_count, BiPoly, PlaneCurve24, XiFamily};
pub use svg::curve_svg;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("curve structure: {0}")]
    Structure(String),
    #[error("point zeta = {zeta} on {component} is a marked point")]
    OnMarkedPoint { component: String, zeta: f64 },
    #[error("degenerate phase configuration: {0}")]
    Degenerate(String),
}
