//! Exact certification that the polynomial metric of signature `(2, n+2)`
//! attached to a subalgebra `h ⊂ so(n)` has holonomy algebra `g^h` at the origin.
//!
//! Layers, bottom up:
//! * [`poly`], [`rational`], [`matrix`]: exact arithmetic.
//! * [`liealg`]: `so(2, n+2)`, the stabilizer of `span{p1, p2}`, `g^h`, spans.
//! * [`metric`]: the metric, its potentials `u^î`, `f`, and its polynomial inverse.
//! * [`curvature`]: connection, curvature tower, holonomy generators.
//! * [`oracle`]: floating-point finite differences and loop transport.
//! * [`verify`]: run configuration, the named identity checks, reports.

pub mod curvature;
pub mod error;
pub mod liealg;
pub mod matrix;
pub mod metric;
pub mod oracle;
pub mod poly;
pub mod rational;
pub mod verify;

pub use curvature::{
    christoffel, holonomy_algebra, holonomy_generators, nabla, riemann, ChristoffelField,
    CurvTensor, EnumerationMode, Geometry, HolonomyGenerators, HolonomyResult,
};
pub use error::{Error, ParseError, Result};
pub use liealg::{
    bracket, decompose_parabolic, embed_gh, equal_span, gram_eta, pr_so_n, so_check,
    span_lie_closure, weak_irreducibility_probe, AlgebraSpan, EtaForm, Frame, GhElement,
    ParabolicElement, ProbeReport,
};
pub use matrix::RatMatrix;
pub use metric::{build_metric, build_u, invert_metric, HSpec, MetricField, MetricOptions};
pub use poly::{ArithOp, Monomial, Poly};
pub use rational::Rational;
pub use verify::{
    emit_report, parse_config, run_checks, CheckReport, CheckResult, ReportFormat, RunConfig,
    Status, CHECK_NAMES,
};
