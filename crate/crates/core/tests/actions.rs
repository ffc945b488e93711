use std::sync::Arc;

use supercoset_core::action::*;
use supercoset_core::coset::coset_atlas;
use supercoset_core::fixtures::{self, scalars};
use supercoset_core::geometry::{differential_at, rank_profile};
use supercoset_core::group::check_subsupergroup;
use supercoset_core::ideal::IdealPresentation;
use supercoset_core::{ChartSignature, Coord, Error, Scalar, SuperPolynomial};

fn var(sig: &Arc<ChartSignature>, name: &str) -> SuperPolynomial {
    SuperPolynomial::coordinate(sig, name).unwrap()
}

#[test]
fn fixture_actions_satisfy_the_axioms() {
    let gl = fixtures::gl11();
    let tr = fixtures::translation();
    for a in [
        fixtures::gl11_standard(&gl),
        fixtures::trivial_action(&gl),
        fixtures::left_multiplication(&gl),
        fixtures::translation_on_line(&tr),
        fixtures::left_multiplication(&fixtures::affine()),
    ] {
        let report = verify_action_axioms(&a, 4).unwrap();
        assert!(report.passed(), "{}: {:?}", a.name(), report.failures().next());
    }
}

#[test]
fn a_wrong_action_is_caught() {
    let g = fixtures::gl11();
    let space = Arc::new(ChartSignature::at_origin(["y"], ["eta"]).unwrap());
    let a = Action::new("Transposed", &g, &space, vec![], None);
    assert!(a.is_err());
    let pc = supercoset_core::ProductChart::new(&[(g.chart(), ""), (&space, "")]).unwrap();
    let v = |n: &str| var(pc.signature(), n);
    // uses the transpose: not an action of the group law
    let mu = vec![&(&v("a") * &v("y")) + &(&v("beta") * &v("eta")), &(&v("alpha") * &v("y")) + &(&v("b") * &v("eta"))];
    let a = Action::new("Transposed", &g, &space, mu, None).unwrap();
    let report = verify_action_axioms(&a, 4).unwrap();
    assert!(!report.get("compatibility").unwrap().passed());
    assert!(report.get("identity").unwrap().passed());
}

#[test]
fn orbit_maps() {
    let g = fixtures::gl11();
    let std = fixtures::gl11_standard(&g);
    let om = orbit_map(&std, &scalars(&[1])).unwrap();
    assert_eq!(om.morphism.pullback("y").unwrap(), &var(g.chart(), "a"));
    assert_eq!(om.morphism.pullback("eta").unwrap(), &var(g.chart(), "beta"));
    let d = differential_at(&om.morphism, g.identity()).unwrap();
    assert_eq!(d.even, vec![scalars(&[1, 0])]);
    assert_eq!(d.odd, vec![scalars(&[0, 1])]);
    let profile = rank_profile(&om.morphism, g.identity()).unwrap();
    assert_eq!((profile.even_rank, profile.odd_rank, profile.is_submersion), (1, 1, true));

    let fixed = orbit_map(&fixtures::trivial_action(&g), &scalars(&[5])).unwrap();
    assert_eq!(fixed.morphism.pullbacks()[0], SuperPolynomial::constant(g.chart(), Scalar::from_int(5)));
    assert!(fixed.morphism.pullbacks()[1].is_zero());
}

#[test]
fn translation_identities_hold() {
    let g = fixtures::gl11();
    let std = fixtures::gl11_standard(&g);
    for x in [scalars(&[1]), scalars(&[3])] {
        for h in [scalars(&[1, 1]), scalars(&[2, 1]), scalars(&[3, 5])] {
            let report = translation_identities(&std, &x, &h, 4).unwrap();
            assert!(report.passed(), "{x:?} {h:?}");
        }
    }
    let left = fixtures::left_multiplication(&g);
    assert!(translation_identities(&left, &scalars(&[2, 3]), &scalars(&[2, 1]), 4).unwrap().passed());
}

#[test]
fn fundamental_fields_of_the_standard_action() {
    let g = fixtures::gl11();
    let std = fixtures::gl11_standard(&g);
    let x = scalars(&[1]);
    let fa = fundamental_field(&std, Coord::Even(0), &x, 4).unwrap();
    let mx = Arc::new(std.space().with_center(x.clone()).unwrap());
    assert_eq!(fa.coefficients[0].1, var(&mx, "y"));
    assert!(fa.coefficients[1].1.is_zero());
    let fb = fundamental_field(&std, Coord::Odd(1), &x, 4).unwrap();
    assert!(fb.coefficients[0].1.is_zero());
    assert_eq!(fb.coefficients[1].1, var(&mx, "y"));
    assert_eq!(fb.value(), scalars(&[1]));

    // the field value is the matching column of the orbit map's differential
    let om = orbit_map(&std, &x).unwrap();
    let d = differential_at(&om.morphism, g.identity()).unwrap();
    for c in g.chart().coords() {
        let v = fundamental_field(&std, c, &x, 2).unwrap().value();
        let column: Vec<Scalar> = match c {
            Coord::Even(j) => d.even.iter().map(|row| row[j].clone()).collect(),
            Coord::Odd(j) => d.odd.iter().map(|row| row[j].clone()).collect(),
        };
        assert_eq!(v, column, "{}", g.chart().name_of(c));
    }

    let tr = fixtures::translation();
    let shift = fixtures::translation_on_line(&tr);
    for c in tr.chart().coords() {
        let f = fundamental_field(&shift, c, &scalars(&[2]), 4).unwrap();
        assert!(f.coefficients.iter().all(|(_, k)| k.even_degree() == 0 && k.terms().all(|(m, _)| m.is_one())));
    }
}

#[test]
fn transitivity_criteria_agree() {
    let g = fixtures::gl11();
    let std = fixtures::gl11_standard(&g);
    let t = is_transitive_at(&std, &scalars(&[1])).unwrap();
    assert!(t.is_transitive() && t.criteria_agree() && t.fields_match_differential);
    let t0 = is_transitive_at(&std, &scalars(&[0])).unwrap();
    assert!(!t0.profile.is_submersion);
    assert_eq!(t0.profile.even_rank, 0);
    assert!(t0.criteria_agree() && t0.fields_match_differential);
    let left = fixtures::left_multiplication(&g);
    for x in [scalars(&[1, 1]), scalars(&[2, -1])] {
        let t = is_transitive_at(&left, &x).unwrap();
        assert!(t.is_transitive() && t.criteria_agree());
    }
    let trivial = is_transitive_at(&fixtures::trivial_action(&g), &scalars(&[1])).unwrap();
    assert!(!trivial.is_transitive() && trivial.criteria_agree());
}

#[test]
fn stabilizer_of_the_first_basis_vector() {
    let g = fixtures::gl11();
    let std = fixtures::gl11_standard(&g);
    let st = stabilizer_subgroup(&std, &scalars(&[1]), 4).unwrap();
    let one = SuperPolynomial::one(g.chart());
    assert_eq!(st.subgroup.ideal().generators(), &[&var(g.chart(), "a") - &one, var(g.chart(), "beta")]);
    assert_eq!(st.subgroup.dim(), (1, 1));
    for label in ["nu-invariance", "iota-invariance", "iota-containment", "involution"] {
        assert!(st.subgroup.report().get(label).unwrap().passed(), "{label}");
    }
    assert_eq!(st.adapted.pivot_even, vec![0]);
    assert_eq!(st.adapted.pivot_odd, vec![1]);
    assert!(matches!(stabilizer_subgroup(&std, &scalars(&[0]), 4), Err(Error::NotTransitive(_))));
}

#[test]
fn stabilizer_of_left_multiplication_is_trivial() {
    let g = fixtures::gl11();
    let st = stabilizer_subgroup(&fixtures::left_multiplication(&g), g.identity(), 4).unwrap();
    assert_eq!(st.subgroup.dim(), (0, 0));
    assert_eq!(st.subgroup.ideal().generators().len(), 4);
}

#[test]
fn equivariant_identification() {
    let g = fixtures::gl11();
    let std = fixtures::gl11_standard(&g);
    let x = scalars(&[1]);
    let st = stabilizer_subgroup(&std, &x, 4).unwrap();
    let atlas = coset_atlas(&st.subgroup, &[scalars(&[1, 1]), scalars(&[2, 1])], &[(0, 1, scalars(&[2]))], 4).unwrap();
    let samples = [(0, scalars(&[1])), (0, scalars(&[3])), (1, scalars(&[1]))];
    let iso = equivariant_iso(&std, &x, &atlas, &samples, 4).unwrap();
    let sc = atlas.slice().chart();
    assert_eq!(iso.charts[0].pullback("y").unwrap(), &var(sc, "a_s"));
    assert_eq!(iso.charts[0].pullback("eta").unwrap(), &var(sc, "beta_s"));
    for r in &iso.report.residuals {
        assert!(r.passed(), "{}: {:?}", r.label, r.witness());
    }
    assert_eq!(iso.report.residuals.iter().filter(|r| r.label.starts_with("equivariance")).count(), 3);
}

#[test]
fn trivial_stabilizer_gives_the_orbit_map() {
    let g = fixtures::gl11();
    let left = fixtures::left_multiplication(&g);
    let one = SuperPolynomial::one(g.chart());
    let all =
        vec![&var(g.chart(), "a") - &one, &var(g.chart(), "b") - &one, var(g.chart(), "alpha"), var(g.chart(), "beta")];
    let e = check_subsupergroup(&g, &IdealPresentation::new(g.chart(), all).unwrap(), 4).unwrap();
    let atlas = coset_atlas(&e, &[g.identity().to_vec()], &[], 4).unwrap();
    let iso = equivariant_iso(&left, g.identity(), &atlas, &[(0, g.identity().to_vec())], 4).unwrap();
    assert!(iso.report.passed());
    let om = orbit_map(&left, g.identity()).unwrap();
    for (b, m) in iso.charts[0].pullbacks().iter().zip(om.morphism.pullbacks()) {
        assert_eq!(b.to_absolute().to_string().replace("_s", ""), m.to_absolute().to_string());
    }
}
