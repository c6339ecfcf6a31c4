//! Shared inputs for the pipeline benchmarks.

use holocert::verify::fixture_spec;
use holocert::{holonomy_algebra, EnumerationMode, Geometry, HSpec};

/// Fixtures benchmarked by default, smallest first.
pub const FIXTURES: &[&str] = &["F1", "F3", "F4"];

pub fn spec(fixture: &str) -> HSpec {
    fixture_spec(fixture, 0).expect("built-in fixture")
}

/// Curvature tower up to order `N + 1`.
pub fn geometry(spec: &HSpec) -> Geometry {
    Geometry::build(spec, spec.dim_h() + 1).expect("geometry builds")
}

/// Dimension of the holonomy algebra, the end product of one run.
pub fn holonomy_dimension(geo: &Geometry, mode: EnumerationMode) -> usize {
    holonomy_algebra(geo, geo.r_max(), mode)
        .expect("holonomy closes")
        .span
        .dim()
}
