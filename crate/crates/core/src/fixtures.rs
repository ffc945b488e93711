//! Small supergroups, subgroups and actions used by the tests, the
//! acceptance suite and the bundled models.

use std::sync::Arc;

use crate::action::Action;
use crate::group::LieSupergroup;
use crate::ideal::IdealPresentation;
use crate::scalar::Scalar;
use crate::superalg::{ChartSignature, SuperPolynomial};

fn var(sig: &Arc<ChartSignature>) -> impl Fn(&str) -> SuperPolynomial + '_ {
    move |name| SuperPolynomial::coordinate(sig, name).expect("fixture coordinate")
}

fn chart(even: &[&str], odd: &[&str], center: &[i64]) -> Arc<ChartSignature> {
    Arc::new(
        ChartSignature::new(
            even.iter().map(|s| s.to_string()).collect(),
            odd.iter().map(|s| s.to_string()).collect(),
            center.iter().map(|&c| Scalar::from_int(c)).collect(),
        )
        .expect("fixture chart"),
    )
}

fn group(
    name: &str,
    chart: Arc<ChartSignature>,
    law: impl Fn(&dyn Fn(&str) -> SuperPolynomial) -> Vec<SuperPolynomial>,
) -> LieSupergroup {
    let pair = crate::geometry::ProductChart::new(&[(&chart, "1"), (&chart, "2")]).expect("pair chart");
    let v = var(pair.signature());
    LieSupergroup::new(name, &chart, law(&v)).expect("fixture group")
}

/// `GL(1|1)` as supermatrices `[[a, alpha], [beta, b]]`.
pub fn gl11() -> LieSupergroup {
    group("GL11", chart(&["a", "b"], &["alpha", "beta"], &[1, 1]), |v| {
        vec![
            &(&v("a1") * &v("a2")) + &(&v("alpha1") * &v("beta2")),
            &(&v("beta1") * &v("alpha2")) + &(&v("b1") * &v("b2")),
            &(&v("a1") * &v("alpha2")) + &(&v("alpha1") * &v("b2")),
            &(&v("beta1") * &v("a2")) + &(&v("b1") * &v("beta2")),
        ]
    })
}

/// `GL(1|1)` with the `alpha1*beta2` term dropped: associativity fails.
pub fn broken_gl11() -> LieSupergroup {
    group("Broken", chart(&["a", "b"], &["alpha", "beta"], &[1, 1]), |v| {
        vec![
            &v("a1") * &v("a2"),
            &(&v("beta1") * &v("alpha2")) + &(&v("b1") * &v("b2")),
            &(&v("a1") * &v("alpha2")) + &(&v("alpha1") * &v("b2")),
            &(&v("beta1") * &v("a2")) + &(&v("b1") * &v("beta2")),
        ]
    })
}

/// Upper triangular matrices `[[1, alpha], [0, b]]` in `GL(1|1)`.
pub fn gl11_upper(g: &LieSupergroup) -> IdealPresentation {
    let v = var(g.chart());
    IdealPresentation::new(g.chart(), vec![&v("a") - &SuperPolynomial::one(g.chart()), v("beta")])
        .expect("fixture ideal")
}

/// The additive group `C^{1|1}`.
pub fn translation() -> LieSupergroup {
    group("Translation", chart(&["t"], &["tau"], &[0]), |v| vec![&v("t1") + &v("t2"), &v("tau1") + &v("tau2")])
}

/// `GL(1)` acting on `C^{1|1}`: `(a, t | tau)` with `(a1, t1, tau1)(a2, t2, tau2) = (a1 a2, a1 t2 + t1, a1 tau2 + tau1)`.
pub fn affine() -> LieSupergroup {
    group("Affine", chart(&["a", "t"], &["tau"], &[1, 0]), |v| {
        vec![&v("a1") * &v("a2"), &(&v("a1") * &v("t2")) + &v("t1"), &(&v("a1") * &v("tau2")) + &v("tau1")]
    })
}

/// `GL(2)` as matrices `[[a, b], [c, d]]`.
pub fn gl2() -> LieSupergroup {
    group("GL2", chart(&["a", "b", "c", "d"], &[], &[1, 0, 0, 1]), |v| {
        vec![
            &(&v("a1") * &v("a2")) + &(&v("b1") * &v("c2")),
            &(&v("a1") * &v("b2")) + &(&v("b1") * &v("d2")),
            &(&v("c1") * &v("a2")) + &(&v("d1") * &v("c2")),
            &(&v("c1") * &v("b2")) + &(&v("d1") * &v("d2")),
        ]
    })
}

/// Upper triangular matrices in `GL(2)`; the quotient is the projective line.
pub fn gl2_borel(g: &LieSupergroup) -> IdealPresentation {
    IdealPresentation::new(g.chart(), vec![var(g.chart())("c")]).expect("fixture ideal")
}

pub fn scalars(values: &[i64]) -> Vec<Scalar> {
    values.iter().map(|&v| Scalar::from_int(v)).collect()
}

fn action(
    name: &str,
    g: &LieSupergroup,
    space: Arc<ChartSignature>,
    law: impl Fn(&dyn Fn(&str) -> SuperPolynomial) -> Vec<SuperPolynomial>,
) -> Action {
    let pc = crate::geometry::ProductChart::new(&[(g.chart(), ""), (&space, "")]).expect("product chart");
    let v = var(pc.signature());
    Action::new(name, g, &space, law(&v), None).expect("fixture action")
}

/// `GL(1|1)` on column vectors `(y | eta)`.
pub fn gl11_standard(g: &LieSupergroup) -> Action {
    action("Std", g, chart(&["y"], &["eta"], &[0]), |v| {
        vec![&(&v("a") * &v("y")) + &(&v("alpha") * &v("eta")), &(&v("beta") * &v("y")) + &(&v("b") * &v("eta"))]
    })
}

/// A group acting on a renamed copy of itself by left multiplication.
pub fn left_multiplication(g: &LieSupergroup) -> Action {
    let space = Arc::new(g.chart().renamed("_m"));
    let pc = crate::geometry::ProductChart::new(&[(g.chart(), ""), (&space, "")]).expect("product chart");
    let ps = pc.signature();
    let (vals, _) = g.product(&pc.factor_coordinates(0), &pc.factor_coordinates(1), ps, None).expect("product");
    Action::new("Left", g, &space, vals, None).expect("fixture action")
}

/// `C^{1|1}` acting on itself by addition.
pub fn translation_on_line(g: &LieSupergroup) -> Action {
    action("Shift", g, chart(&["y"], &["eta"], &[0]), |v| vec![&v("t") + &v("y"), &v("tau") + &v("eta")])
}

/// Every element acts as the identity.
pub fn trivial_action(g: &LieSupergroup) -> Action {
    action("Trivial", g, chart(&["y"], &["eta"], &[0]), |v| vec![v("y"), v("eta")])
}
