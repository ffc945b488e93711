//! Locating reduced points: damped Newton iteration in floating point,
//! rational reconstruction of the limit, and exact confirmation.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::scalar::Scalar;
use crate::superalg::{Coord, SuperPolynomial};

const MAX_DEN: i64 = 1 << 16;

/// Numeric part of a function as absolute monomials with float coefficients.
struct FloatPoly(Vec<(Vec<u16>, Complex64)>);

impl FloatPoly {
    fn new(f: &SuperPolynomial) -> Self {
        let abs = f.to_absolute();
        FloatPoly(
            abs.terms()
                .filter(|(m, _)| m.odd_mask() == 0)
                .map(|(m, c)| {
                    let (re, im) = c.to_f64_pair();
                    (m.even().to_vec(), Complex64::new(re, im))
                })
                .collect(),
        )
    }

    fn eval(&self, x: &[Complex64]) -> Complex64 {
        self.0.iter().map(|(e, c)| e.iter().zip(x).fold(*c, |acc, (&k, xi)| acc * xi.powu(k as u32))).sum()
    }
}

/// A common root of `system` (one equation per even coordinate of the
/// chart), found near `start` and confirmed exactly.
pub fn solve_reduced(system: &[SuperPolynomial], start: &[Scalar]) -> Option<Vec<Scalar>> {
    let sig = system.first()?.signature().clone();
    let n = sig.n_even();
    if system.len() != n || start.len() != n {
        return None;
    }
    let f: Vec<FloatPoly> = system.iter().map(FloatPoly::new).collect();
    let jac: Vec<Vec<FloatPoly>> =
        system.iter().map(|g| (0..n).map(|j| FloatPoly::new(&g.derivative(Coord::Even(j)))).collect()).collect();
    let x0: Vec<Complex64> = start
        .iter()
        .map(|s| {
            let (re, im) = s.to_f64_pair();
            Complex64::new(re, im)
        })
        .collect();
    for attempt in 0..12 {
        let guess: Vec<Complex64> = x0
            .iter()
            .enumerate()
            .map(|(i, z)| {
                if attempt == 0 {
                    *z
                } else {
                    let t = attempt as f64;
                    z + Complex64::new(0.37 * t * ((i % 3) as f64 - 0.9), 0.21 * t * ((i % 2) as f64 - 0.4))
                }
            })
            .collect();
        let Some(root) = newton(&f, &jac, guess) else { continue };
        let Some(exact) = root.iter().map(reconstruct).collect::<Option<Vec<Scalar>>>() else { continue };
        if system.iter().all(|g| g.value_at(&exact).is_ok_and(|v| v.is_zero())) {
            return Some(exact);
        }
    }
    None
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn newton(f: &[FloatPoly], jac: &[Vec<FloatPoly>], mut x: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let eval = |x: &[Complex64]| -> Vec<Complex64> { f.iter().map(|p| p.eval(x)).collect() };
    let mut r = eval(&x);
    for _ in 0..200 {
        if norm(&r) < 1e-14 {
            return Some(x);
        }
        let j: Vec<Vec<Complex64>> = jac.iter().map(|row| row.iter().map(|p| p.eval(&x)).collect()).collect();
        let dx = solve_linear(j, r.iter().map(|z| -z).collect())?;
        let mut t = 1.0;
        loop {
            let trial: Vec<Complex64> = x.iter().zip(&dx).map(|(a, b)| a + b * t).collect();
            let rt = eval(&trial);
            if norm(&rt) < norm(&r) || t < 1e-8 {
                x = trial;
                r = rt;
                break;
            }
            t *= 0.5;
        }
    }
    (norm(&r) < 1e-10).then_some(x)
}

#[allow(clippy::needless_range_loop)]
fn solve_linear(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &k| a[i][c].norm().total_cmp(&a[k][c].norm()))?;
        if a[p][c].norm() < 1e-300 {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for i in c + 1..n {
            let f = a[i][c] / a[c][c];
            for k in c..n {
                let t = a[c][k];
                a[i][k] -= f * t;
            }
            let t = b[c];
            b[i] -= f * t;
        }
    }
    let mut x = vec![Complex64::zero(); n];
    for i in (0..n).rev() {
        let s: Complex64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

fn reconstruct(z: &Complex64) -> Option<Scalar> {
    Some(Scalar::new(best_rational(z.re)?, best_rational(z.im)?))
}

/// Continued-fraction approximation with bounded denominator, accepted only
/// when it matches to near machine precision.
fn best_rational(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        if a.abs() > 1e12 {
            break;
        }
        let a = a as i64;
        let (h2, k2) = (a.checked_mul(h1)?.checked_add(h0)?, a.checked_mul(k1)?.checked_add(k0)?);
        if k2 > MAX_DEN {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let approx = h1 as f64 / k1 as f64;
        if (approx - x).abs() <= 1e-13 * x.abs().max(1.0) {
            return Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let frac = y - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        y = 1.0 / frac;
    }
    None
}
