use holocert::verify::fixture_spec;
use holocert::{decompose_parabolic, holonomy_algebra, EnumerationMode, Geometry, Rational};

#[test]
fn middle_index_derivative_can_be_nonzero() {
    // (7, 8; 7, 5) in 1-based indices on F2: the second derivative slot is e_3.
    let spec = fixture_spec("F2", 0).unwrap();
    let geo = Geometry::build(&spec, 2).unwrap();
    let f = geo.frame();
    let op = geo.operator_at_origin(f.q1(), f.q2(), &[f.q1(), f.e(2)]);
    let parts = decompose_parabolic(&op).unwrap();
    assert!(parts.b.is_zero() && parts.a.is_zero());
    let four = Rational::from_integer(4.into());
    let zero = Rational::from_integer(0.into());
    assert_eq!(
        parts.x,
        vec![zero.clone(), zero.clone(), zero.clone(), four.clone()]
    );
    assert_eq!(
        parts.y,
        vec![zero.clone(), zero.clone(), four, zero.clone()]
    );
    assert_eq!(parts.c, zero);
}

#[test]
fn pruned_and_exhaustive_spans_agree() {
    for fixture in ["F0", "F1", "F2", "F3", "F4"] {
        let spec = fixture_spec(fixture, 0).unwrap();
        let geo = Geometry::build(&spec, spec.dim_h() + 1).unwrap();
        let pruned = holonomy_algebra(&geo, geo.r_max(), EnumerationMode::Pruned).unwrap();
        let full = holonomy_algebra(&geo, geo.r_max(), EnumerationMode::Exhaustive).unwrap();
        assert!(pruned.equal && full.equal, "{fixture}");
        assert!(full.generators.matrices().len() >= pruned.generators.matrices().len());
    }
}
