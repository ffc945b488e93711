use std::sync::Arc;

use num_traits::Zero;
use proptest::prelude::*;

use super::*;

fn chart(even: &[&str], odd: &[&str]) -> Arc<ChartSignature> {
    Arc::new(ChartSignature::at_origin(even.iter().copied(), odd.iter().copied()).unwrap())
}

fn v(sig: &Arc<ChartSignature>, name: &str) -> SuperPolynomial {
    SuperPolynomial::coordinate(sig, name).unwrap()
}

fn c(sig: &Arc<ChartSignature>, n: i64) -> SuperPolynomial {
    SuperPolynomial::constant(sig, Scalar::from_int(n))
}

#[test]
fn odd_coordinates_anticommute() {
    let s = chart(&["x"], &["xi1", "xi2"]);
    let (x1, x2) = (v(&s, "xi1"), v(&s, "xi2"));
    assert_eq!(&x2 * &x1, -(&x1 * &x2));
    assert!((&x1 * &x1).is_zero());
}

#[test]
fn odd_square_vanishes_in_products() {
    let s = chart(&["f0", "f1", "g0", "g1"], &["xi1"]);
    let xi = v(&s, "xi1");
    let f = &v(&s, "f0") + &(&v(&s, "f1") * &xi);
    let g = &v(&s, "g0") + &(&v(&s, "g1") * &xi);
    let expected =
        &(&v(&s, "f0") * &v(&s, "g0")) + &(&(&(&v(&s, "f0") * &v(&s, "g1")) + &(&v(&s, "f1") * &v(&s, "g0"))) * &xi);
    assert_eq!(&f * &g, expected);
}

#[test]
fn square_of_even_nilpotent_sum() {
    let s = chart(&["x"], &["xi1", "xi2"]);
    let n = &v(&s, "xi1") * &v(&s, "xi2");
    let f = &v(&s, "x") + &n;
    let expected = &(&v(&s, "x") * &v(&s, "x")) + &(&c(&s, 2) * &(&v(&s, "x") * &n));
    assert_eq!(&f * &f, expected);
}

#[test]
fn product_signature_mismatch_is_an_error() {
    let a = chart(&["x"], &[]);
    let b = chart(&["y"], &[]);
    assert!(v(&a, "x").mul(&v(&b, "y")).is_err());
}

#[test]
fn value_at_discards_nilpotents() {
    let s = chart(&["x"], &["xi1", "xi2"]);
    let f = &(&c(&s, 1) + &v(&s, "x")) + &(&v(&s, "x") * &(&v(&s, "xi1") * &v(&s, "xi2")));
    assert_eq!(f.value_at(&[Scalar::from_int(2)]).unwrap(), Scalar::from_int(3));
    assert_eq!(v(&s, "xi1").value_at(&[Scalar::from_int(5)]).unwrap(), Scalar::zero());
    assert_eq!(c(&s, 7).value_at(&[Scalar::from_int(-1)]).unwrap(), Scalar::from_int(7));
    assert!(matches!(f.value_at(&[]), Err(crate::Error::MissingCoordinate(_))));
}

#[test]
fn substitute_mixed_parity() {
    // f = y + eta*xi2 with y <- x^2, eta <- x*xi1
    let tgt = chart(&["x"], &["xi1", "xi2"]);
    let src = chart(&["y"], &["eta", "xi2"]);
    let f = &v(&src, "y") + &(&v(&src, "eta") * &v(&src, "xi2"));
    let x = v(&tgt, "x");
    let assignment = vec![&x * &x, &x * &v(&tgt, "xi1"), v(&tgt, "xi2")];
    let out = f.substitute(&assignment, &tgt).unwrap();
    let expected = &(&x * &x) + &(&x * &(&v(&tgt, "xi1") * &v(&tgt, "xi2")));
    assert_eq!(out, expected);
}

#[test]
fn substitute_identity_is_noop() {
    let s = Arc::new(ChartSignature::new(vec!["x".into()], vec!["t".into()], vec![Scalar::from_int(3)]).unwrap());
    let f = &(&v(&s, "x") * &v(&s, "x")) + &(&v(&s, "x") * &v(&s, "t"));
    let ids: Vec<_> = s.coords().map(|k| SuperPolynomial::coordinate_at(&s, k)).collect();
    assert_eq!(f.substitute(&ids, &s).unwrap(), f);
}

#[test]
fn substitute_rejects_parity_mismatch() {
    let s = chart(&["x"], &["t"]);
    let f = v(&s, "x");
    let bad = vec![v(&s, "t"), v(&s, "t")];
    assert!(matches!(f.substitute(&bad, &s), Err(crate::Error::ParityMismatch { .. })));
}

#[test]
fn recenter_binomial() {
    let s = chart(&["x"], &[]);
    let f = &v(&s, "x") * &v(&s, "x");
    let g = f.recenter(&[Scalar::from_int(1)]).unwrap();
    // 1 + 2u + u^2 in the local variable u = x - 1
    let local: Vec<(Vec<u16>, Scalar)> = g.terms().map(|(m, c)| (m.even().to_vec(), c.clone())).collect();
    assert_eq!(
        local,
        vec![(vec![0], Scalar::from_int(1)), (vec![1], Scalar::from_int(2)), (vec![2], Scalar::from_int(1)),]
    );
    assert_eq!(f.recenter(&[Scalar::zero()]).unwrap(), f);
    assert_eq!(g.recenter(&[Scalar::zero()]).unwrap(), f);
    assert_eq!(g.to_string(), "x^2");
}

#[test]
fn truncation_examples() {
    let s = chart(&["x"], &["xi1", "xi2"]);
    let x = v(&s, "x");
    let f = &(&(&x * &(&x * &x)) + &x) + &v(&s, "xi1");
    assert_eq!(f.truncate(2).unwrap().body(), &(&x + &v(&s, "xi1")));
    assert_eq!(f.truncate(3).unwrap().body(), &f);
    let g = &(&x * &x) * &(&v(&s, "xi1") * &v(&s, "xi2"));
    assert_eq!(g.truncate(2).unwrap().body(), &g);
    assert!(matches!(f.truncate(-1), Err(crate::Error::NegativeOrder(-1))));
}

#[test]
fn display_uses_absolute_coordinates() {
    let s = Arc::new(
        ChartSignature::new(
            vec!["a".into(), "b".into()],
            vec!["alpha".into(), "beta".into()],
            vec![Scalar::from_int(1), Scalar::from_int(1)],
        )
        .unwrap(),
    );
    let f = &v(&s, "a") - &c(&s, 1);
    assert_eq!(f.to_string(), "a-1");
    assert_eq!(v(&s, "beta").to_string(), "beta");
    let g = &(&v(&s, "a") * &v(&s, "b")) + &(&v(&s, "alpha") * &v(&s, "beta"));
    assert_eq!(g.to_string(), "a*b+alpha*beta");
    assert_eq!((-&v(&s, "a")).scale(&Scalar::from_ratio(1, 2)).to_string(), "-1/2*a");
}

#[test]
fn left_derivative_signs() {
    let s = chart(&["x"], &["p", "q"]);
    let f = &v(&s, "p") * &v(&s, "q");
    assert_eq!(f.derivative(Coord::Odd(0)), v(&s, "q"));
    assert_eq!(f.derivative(Coord::Odd(1)), -&v(&s, "p"));
}

#[test]
fn term_repr_uses_one_based_odd_indices() {
    let s = chart(&["x"], &["xi1", "xi2"]);
    let f = -(&v(&s, "xi1") * &v(&s, "xi2"));
    let t = f.to_term_reprs();
    assert_eq!(t.len(), 1);
    assert_eq!(t[0].odd, vec![1, 2]);
    assert_eq!(t[0].even, vec![0]);
    assert_eq!(t[0].coeff, Scalar::from_int(-1));
    assert_eq!(SuperPolynomial::from_term_reprs(&s, &t).unwrap(), f);
}

// ---- property tests -------------------------------------------------------

fn prop_chart() -> Arc<ChartSignature> {
    Arc::new(
        ChartSignature::new(
            vec!["x".into(), "y".into()],
            vec!["p".into(), "q".into(), "r".into()],
            vec![Scalar::from_int(1), Scalar::zero()],
        )
        .unwrap(),
    )
}

fn arb_poly(parity: Option<Parity>) -> impl Strategy<Value = SuperPolynomial> {
    prop::collection::vec(((0u16..3, 0u16..3), 0u16..8, -3i64..4), 0..6).prop_map(move |raw| {
        let s = prop_chart();
        let terms = raw.into_iter().filter_map(|((e0, e1), mask, k)| {
            let m = Monomial::from_parts(&[e0, e1], mask);
            match parity {
                Some(p) if m.parity() != p => None,
                _ => Some((m, Scalar::from_int(k))),
            }
        });
        SuperPolynomial::from_terms(&s, terms)
    })
}

fn arb_homogeneous() -> impl Strategy<Value = (SuperPolynomial, Parity)> {
    prop_oneof![
        arb_poly(Some(Parity::Even)).prop_map(|f| (f, Parity::Even)),
        arb_poly(Some(Parity::Odd)).prop_map(|f| (f, Parity::Odd)),
    ]
}

proptest! {
    #[test]
    fn ring_axioms(f in arb_poly(None), g in arb_poly(None), h in arb_poly(None)) {
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
    }

    #[test]
    fn super_commutativity((f, pf) in arb_homogeneous(), (g, pg) in arb_homogeneous()) {
        let fg = &f * &g;
        let gf = &g * &f;
        if pf.is_odd() && pg.is_odd() {
            prop_assert_eq!(fg, -gf);
        } else {
            prop_assert_eq!(fg, gf);
        }
    }

    #[test]
    fn substitution_is_multiplicative(
        f in arb_poly(None),
        g in arb_poly(None),
        a0 in arb_poly(Some(Parity::Even)),
        a1 in arb_poly(Some(Parity::Even)),
        b0 in arb_poly(Some(Parity::Odd)),
        b1 in arb_poly(Some(Parity::Odd)),
        b2 in arb_poly(Some(Parity::Odd)),
    ) {
        let s = prop_chart();
        let a = vec![a0, a1, b0, b1, b2];
        let lhs = (&f * &g).substitute(&a, &s).unwrap();
        let rhs = &f.substitute(&a, &s).unwrap() * &g.substitute(&a, &s).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn truncation_is_a_congruence(f in arb_poly(None), g in arb_poly(None), d in 0u32..4) {
        let full = (&f * &g).truncated(d);
        let via = (&f.truncated(d) * &g.truncated(d)).truncated(d);
        prop_assert_eq!(&full, &via);
        let jf = Jet::new(&f, d);
        let jg = Jet::new(&g, d);
        let prod = jf.mul(&jg).unwrap();
        prop_assert_eq!(prod.body(), &full);
    }

    #[test]
    fn value_agrees_with_constant_substitution(f in arb_poly(None), x in -3i64..4, y in -3i64..4) {
        let s = prop_chart();
        let p = [Scalar::from_int(x), Scalar::from_int(y)];
        let pt = Arc::new(ChartSignature::point());
        let a = vec![
            SuperPolynomial::constant(&pt, p[0].clone()),
            SuperPolynomial::constant(&pt, p[1].clone()),
            SuperPolynomial::zero(&pt),
            SuperPolynomial::zero(&pt),
            SuperPolynomial::zero(&pt),
        ];
        let sub = f.substitute(&a, &pt).unwrap();
        prop_assert_eq!(sub.constant_term(), f.value_at(&p).unwrap());
        let _ = s;
    }

    #[test]
    fn recenter_round_trips(f in arb_poly(None), x in -3i64..4, y in -3i64..4) {
        let there = f.recenter(&[Scalar::from_int(x), Scalar::from_int(y)]).unwrap();
        let back = there.recenter(f.signature().center()).unwrap();
        prop_assert_eq!(back, f);
    }
}
