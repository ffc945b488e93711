//! `GL(1|1)` checked against a hand-rolled Grassmann algebra that knows
//! nothing about the engine's monomial encoding.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use supercoset_core::fixtures::{self, scalars};
use supercoset_core::group::{derive_inverse, translation_morphism};
use supercoset_core::{ChartSignature, Scalar, Side, SuperPolynomial};

type Key = (Vec<u32>, Vec<usize>);

/// Polynomials in commuting variables and anticommuting generators over `Q`,
/// with odd factors kept in increasing order.
#[derive(Clone, Debug, PartialEq)]
struct Oracle {
    n_even: usize,
    terms: BTreeMap<Key, BigRational>,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Oracle {
    fn zero(n_even: usize) -> Self {
        Oracle { n_even, terms: BTreeMap::new() }
    }

    fn constant(n_even: usize, c: BigRational) -> Self {
        let mut o = Self::zero(n_even);
        o.push((vec![0; n_even], vec![]), c);
        o
    }

    fn even(n_even: usize, i: usize) -> Self {
        let mut e = vec![0; n_even];
        e[i] = 1;
        let mut o = Self::zero(n_even);
        o.push((e, vec![]), q(1));
        o
    }

    fn odd(n_even: usize, i: usize) -> Self {
        let mut o = Self::zero(n_even);
        o.push((vec![0; n_even], vec![i]), q(1));
        o
    }

    fn push(&mut self, k: Key, c: BigRational) {
        let slot = self.terms.entry(k.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.push(k.clone(), c.clone());
        }
        r
    }

    fn scale(&self, c: &BigRational) -> Self {
        let mut r = Self::zero(self.n_even);
        for (k, v) in &self.terms {
            r.push(k.clone(), v * c);
        }
        r
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&q(-1)))
    }

    fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero(self.n_even);
        for ((ea, oa), ca) in &self.terms {
            for ((eb, ob), cb) in &o.terms {
                if oa.iter().any(|i| ob.contains(i)) {
                    continue;
                }
                // bubble sort the concatenation, counting swaps
                let mut w: Vec<usize> = oa.iter().chain(ob).copied().collect();
                let mut swaps = 0;
                for i in 0..w.len() {
                    for j in 0..w.len() - 1 - i {
                        if w[j] > w[j + 1] {
                            w.swap(j, j + 1);
                            swaps += 1;
                        }
                    }
                }
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let c = ca * cb;
                r.push((e, w), if swaps % 2 == 1 { -c } else { c });
            }
        }
        r
    }

    fn truncated(&self, d: u32) -> Self {
        let mut r = Self::zero(self.n_even);
        for (k, c) in &self.terms {
            if k.0.iter().sum::<u32>() <= d {
                r.push(k.clone(), c.clone());
            }
        }
        r
    }

    /// `1 / (c + u)` to order `d` in `u`.
    fn reciprocal_series(n_even: usize, c: &BigRational, u: &Self, d: u32) -> Self {
        let mut r = Self::zero(n_even);
        let mut p = Self::constant(n_even, c.recip());
        for _ in 0..=d {
            r = r.add(&p);
            p = p.mul(u).scale(&(-c.recip())).truncated(d);
        }
        r
    }

    fn from_engine(f: &SuperPolynomial) -> Self {
        let mut r = Self::zero(f.signature().n_even());
        for (m, c) in f.terms() {
            assert!(c.is_real(), "{f}");
            r.push((m.even().iter().map(|&e| e as u32).collect(), m.odd_indices()), c.re().clone());
        }
        r
    }
}

/// Supermatrix `[[a, alpha], [beta, b]]` over the oracle algebra.
#[derive(Clone, Debug, PartialEq)]
struct Mat([Oracle; 4]);

impl Mat {
    fn mul(&self, o: &Mat) -> Mat {
        let [a, al, be, b] = &self.0;
        let [a2, al2, be2, b2] = &o.0;
        Mat([
            a.mul(a2).add(&al.mul(be2)),
            a.mul(al2).add(&al.mul(b2)),
            be.mul(a2).add(&b.mul(be2)),
            be.mul(al2).add(&b.mul(b2)),
        ])
    }

    /// Engine values in the chart order `a, b, alpha, beta`.
    fn to_engine_order(&self) -> [Oracle; 4] {
        let [a, al, be, b] = self.0.clone();
        [a, b, al, be]
    }
}

fn grassmann(n_odd: usize) -> Arc<ChartSignature> {
    Arc::new(ChartSignature::at_origin(Vec::<String>::new(), (1..=n_odd).map(|i| format!("theta{i}"))).unwrap())
}

/// The k-th matrix with even entries `(a, b)` and odd entries `theta(2k)`, `theta(2k+1)`.
fn family(k: usize, a: i64, b: i64, over: &Arc<ChartSignature>) -> (Mat, Vec<SuperPolynomial>) {
    let oracle =
        Mat([Oracle::constant(0, q(a)), Oracle::odd(0, 2 * k), Oracle::odd(0, 2 * k + 1), Oracle::constant(0, q(b))]);
    let theta = |i: usize| SuperPolynomial::coordinate(over, &format!("theta{}", i + 1)).unwrap();
    let engine = vec![
        SuperPolynomial::constant(over, Scalar::from_int(a)),
        SuperPolynomial::constant(over, Scalar::from_int(b)),
        theta(2 * k),
        theta(2 * k + 1),
    ];
    (oracle, engine)
}

fn assert_matches(engine: &[SuperPolynomial], oracle: &[Oracle]) {
    for (e, o) in engine.iter().zip(oracle) {
        assert_eq!(&Oracle::from_engine(e), o, "engine gave {e}");
    }
}

fn nonzero() -> impl Strategy<Value = i64> {
    (-6i64..=6).prop_filter("invertible", |v| *v != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn multiplication_matches_supermatrices(a in proptest::array::uniform6(nonzero())) {
        let g = fixtures::gl11();
        let over = grassmann(6);
        let (m1, g1) = family(0, a[0], a[1], &over);
        let (m2, g2) = family(1, a[2], a[3], &over);
        let (m3, g3) = family(2, a[4], a[5], &over);

        let (g12, _) = g.product(&g1, &g2, &over, None).unwrap();
        assert_matches(&g12, &m1.mul(&m2).to_engine_order());

        let (left, _) = g.product(&g12, &g3, &over, None).unwrap();
        let (g23, _) = g.product(&g2, &g3, &over, None).unwrap();
        let (right, _) = g.product(&g1, &g23, &over, None).unwrap();
        let expected = m1.mul(&m2).mul(&m3);
        prop_assert_eq!(&expected, &m1.mul(&m2.mul(&m3)));
        assert_matches(&left, &expected.to_engine_order());
        assert_matches(&right, &expected.to_engine_order());
    }

    #[test]
    fn left_translation_matches(a0 in nonzero(), b0 in nonzero()) {
        let g = fixtures::gl11();
        let l = translation_morphism(&g, &scalars(&[a0, b0]), Side::Left).unwrap();
        // absolute coordinates a, b | alpha, beta
        let gen = Mat([Oracle::even(2, 0), Oracle::odd(2, 0), Oracle::odd(2, 1), Oracle::even(2, 1)]);
        let p = Mat([Oracle::constant(2, q(a0)), Oracle::zero(2), Oracle::zero(2), Oracle::constant(2, q(b0))]);
        let absolute: Vec<SuperPolynomial> = l.pullbacks().iter().map(SuperPolynomial::to_absolute).collect();
        assert_matches(&absolute, &p.mul(&gen).to_engine_order());
        let r = translation_morphism(&g, &scalars(&[a0, b0]), Side::Right).unwrap();
        let absolute: Vec<SuperPolynomial> = r.pullbacks().iter().map(SuperPolynomial::to_absolute).collect();
        assert_matches(&absolute, &gen.mul(&p).to_engine_order());
    }
}

#[test]
fn inverse_matches_the_block_formula() {
    let g = fixtures::gl11();
    for d in [1, 3, 5] {
        let iota = derive_inverse(&g, d).unwrap();
        let d = iota.order().unwrap_or(d);
        // local coordinates u = a - 1, v = b - 1 around the identity
        let (u, v) = (Oracle::even(2, 0), Oracle::even(2, 1));
        let (alpha, beta) = (Oracle::odd(2, 0), Oracle::odd(2, 1));
        let inv_a = Oracle::reciprocal_series(2, &q(1), &u, d);
        let inv_b = Oracle::reciprocal_series(2, &q(1), &v, d);
        let inv_ab = inv_a.mul(&inv_b).truncated(d);
        let ab = alpha.mul(&beta).mul(&inv_ab);
        let one = Oracle::constant(2, q(1));
        let expected = [
            inv_a.mul(&one.add(&ab)).truncated(d),
            inv_b.mul(&one.sub(&ab)).truncated(d),
            alpha.mul(&inv_ab).scale(&q(-1)).truncated(d),
            beta.mul(&inv_ab).scale(&q(-1)).truncated(d),
        ];
        let got: Vec<SuperPolynomial> = iota.pullbacks().iter().map(|f| f.truncated(d)).collect();
        assert_matches(&got, &expected);
    }
}

#[test]
fn block_formula_inverts_exactly() {
    // sanity check of the oracle on concrete invertible entries
    let (a, b) = (q(3), q(-2));
    let over = 0;
    let (alpha, beta) = (Oracle::odd(over, 0), Oracle::odd(over, 1));
    let ia = a.recip();
    let ib = b.recip();
    let iab = &ia * &ib;
    let ab = alpha.mul(&beta).scale(&iab);
    let one = Oracle::constant(over, q(1));
    let m = Mat([Oracle::constant(over, a.clone()), alpha.clone(), beta.clone(), Oracle::constant(over, b.clone())]);
    let inv = Mat([one.add(&ab).scale(&ia), alpha.scale(&(-&iab)), beta.scale(&(-&iab)), one.sub(&ab).scale(&ib)]);
    let id = Mat([one.clone(), Oracle::zero(over), Oracle::zero(over), one.clone()]);
    assert_eq!(m.mul(&inv), id);
    assert_eq!(inv.mul(&m), id);
}
