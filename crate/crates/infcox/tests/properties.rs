mod common;

use common::props;

#[test]
fn star_composition() {
    props::star_composition().unwrap();
}

#[test]
fn conjugacy_invariance() {
    props::conjugacy_invariance().unwrap();
}

#[test]
fn delta_lc_multiplicative() {
    props::delta_lc_multiplicative().unwrap();
}

#[test]
fn lc_shape() {
    props::lc_shape().unwrap();
}

#[test]
fn delta_comparison() {
    props::delta_comparison().unwrap();
}

#[test]
fn minpoly_resubstitution() {
    props::minpoly_resubstitution().unwrap();
}

#[test]
fn dimension_oracle_small_cases() {
    use common::*;
    let cusp = cusp_surface();
    for d in 0..8 {
        let ours = infcox::cox::dimension(&cusp, &[d]).unwrap();
        assert_eq!(ours, section_dim_oracle(&cusp_branches(), &[d], &cusp_support(d)), "d = {d}");
    }
}
