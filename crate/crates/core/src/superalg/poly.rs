use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::signature::{ChartSignature, Coord};
use super::{Jet, Parity};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A Grassmann-valued polynomial on a chart, stored in canonical form over
/// the even coordinates shifted to the chart center.
#[derive(Clone, PartialEq, Eq)]
pub struct SuperPolynomial {
    sig: Arc<ChartSignature>,
    terms: BTreeMap<Monomial, Scalar>,
}

fn check_same(a: &ChartSignature, b: &ChartSignature) -> Result<()> {
    if a != b {
        return Err(Error::SignatureMismatch(format!("{a:?} vs {b:?}")));
    }
    Ok(())
}

impl SuperPolynomial {
    pub fn zero(sig: &Arc<ChartSignature>) -> Self {
        SuperPolynomial { sig: sig.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(sig: &Arc<ChartSignature>, c: Scalar) -> Self {
        let mut p = Self::zero(sig);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(sig.n_even()), c);
        }
        p
    }

    pub fn one(sig: &Arc<ChartSignature>) -> Self {
        Self::constant(sig, Scalar::one())
    }

    /// The coordinate function itself (for even coordinates: center + local variable).
    pub fn coordinate(sig: &Arc<ChartSignature>, name: &str) -> Result<Self> {
        let c = sig.lookup(name).ok_or_else(|| Error::UnknownCoordinate(name.to_string()))?;
        Ok(Self::coordinate_at(sig, c))
    }

    pub fn coordinate_at(sig: &Arc<ChartSignature>, c: Coord) -> Self {
        let mut p = Self::local_coordinate(sig, c);
        if let Coord::Even(i) = c {
            let center = sig.center()[i].clone();
            if !center.is_zero() {
                p.terms.insert(Monomial::one(sig.n_even()), center);
            }
        }
        p
    }

    /// The coordinate measured from the chart center (`x - c` or `ξ`).
    pub fn local_coordinate(sig: &Arc<ChartSignature>, c: Coord) -> Self {
        let one = Monomial::one(sig.n_even());
        let m = match c {
            Coord::Even(i) => one.with_even(i, 1),
            Coord::Odd(j) => one.with_odd_mask(1 << j),
        };
        let mut terms = BTreeMap::new();
        terms.insert(m, Scalar::one());
        SuperPolynomial { sig: sig.clone(), terms }
    }

    pub fn from_terms(sig: &Arc<ChartSignature>, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = Self::zero(sig);
        for (m, c) in terms {
            assert_eq!(m.even().len(), sig.n_even(), "monomial arity");
            p.add_term(m, &c);
        }
        p
    }

    pub fn signature(&self) -> &Arc<ChartSignature> {
        &self.sig
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Coefficient of the empty monomial (value at the center, nilpotents dropped).
    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&Monomial::one(self.sig.n_even()))
    }

    /// `Some(parity)` if all terms share one parity; zero counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(Monomial::parity);
        match it.next() {
            None => Some(Parity::Even),
            Some(p) => it.all(|q| q == p).then_some(p),
        }
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.parity() == Parity::Even)
    }

    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(|m| m.parity() == Parity::Odd)
    }

    /// Highest even degree among the terms.
    pub fn even_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::even_degree).max().unwrap_or(0)
    }

    /// True if some term has even degree 0 but a non-empty odd part.
    pub(crate) fn has_pure_odd_term(&self) -> bool {
        self.terms.keys().any(|m| m.even_degree() == 0 && m.odd_mask() != 0)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    fn sub_term(&mut self, m: Monomial, c: &Scalar) {
        self.add_term(m, &-c);
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(&self.sig);
        }
        SuperPolynomial { sig: self.sig.clone(), terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        check_same(&self.sig, &other.sig)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        check_same(&self.sig, &other.sig)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.sub_term(m.clone(), c);
        }
        Ok(out)
    }

    /// Product under the Koszul sign rule.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_same(&self.sig, &other.sig)?;
        Ok(self.mul_trunc(other, None))
    }

    /// Product keeping only terms of even degree `<= order`.
    pub(crate) fn mul_trunc(&self, other: &Self, order: Option<u32>) -> Self {
        debug_assert_eq!(self.sig, other.sig);
        let mut out = Self::zero(&self.sig);
        for (ma, ca) in &self.terms {
            let da = ma.even_degree();
            if order.is_some_and(|d| da > d) {
                continue;
            }
            for (mb, cb) in &other.terms {
                if order.is_some_and(|d| da + mb.even_degree() > d) {
                    continue;
                }
                if let Some((neg, m)) = ma.mul(mb) {
                    let c = ca * cb;
                    if neg {
                        out.sub_term(m, &c);
                    } else {
                        out.add_term(m, &c);
                    }
                }
            }
        }
        out
    }

    /// Drop every term of even degree above `order`.
    pub fn truncated(&self, order: u32) -> Self {
        SuperPolynomial {
            sig: self.sig.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.even_degree() <= order)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub(crate) fn truncated_opt(&self, order: Option<u32>) -> Self {
        match order {
            Some(d) => self.truncated(d),
            None => self.clone(),
        }
    }

    /// The jet of order `d` at the chart center.
    pub fn truncate(&self, d: i64) -> Result<Jet> {
        if d < 0 {
            return Err(Error::NegativeOrder(d));
        }
        let d = u32::try_from(d).map_err(|_| Error::NegativeOrder(d))?;
        Ok(Jet::from_parts(self.truncated(d), d))
    }

    /// `f(p)`: the numeric part evaluated at the reduced point `p` (absolute coordinates).
    pub fn value_at(&self, p: &[Scalar]) -> Result<Scalar> {
        if p.len() != self.sig.n_even() {
            let missing = self.sig.even_names().get(p.len()).cloned().unwrap_or_default();
            return Err(Error::MissingCoordinate(missing));
        }
        let shift: Vec<Scalar> = p.iter().zip(self.sig.center()).map(|(x, c)| x - c).collect();
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            if m.odd_mask() != 0 {
                continue;
            }
            let mut t = c.clone();
            for (u, &e) in shift.iter().zip(m.even()) {
                if e > 0 {
                    t = &t * &u.pow(e as u32);
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Value at a named point, e.g. `[("x", 2)]`.
    pub fn value_at_named(&self, point: &[(String, Scalar)]) -> Result<Scalar> {
        let p = self.sig.point_from_pairs(point)?;
        self.value_at(&p)
    }

    /// Replace every coordinate by a superfunction over `target`; the
    /// assignment is in flat coordinate order (evens then odds) and gives the
    /// absolute value of each coordinate.
    pub fn substitute(&self, assignment: &[SuperPolynomial], target: &Arc<ChartSignature>) -> Result<Self> {
        Ok(self.substitute_tracked(None, assignment, None, target)?.0)
    }

    /// Substitution with jet-precision bookkeeping. `own` is the order to
    /// which `self` is known, `assigned` the order of the assignment values.
    /// Returns the composite and the order to which it is known.
    ///
    /// An even-degree filtration is not preserved when an even value carries
    /// pure-odd terms: each such factor lowers the even degree by one, and at
    /// most `m/2` of them can multiply to a non-zero value.
    pub(crate) fn substitute_tracked(
        &self,
        own: Option<u32>,
        assignment: &[SuperPolynomial],
        assigned: Option<u32>,
        target: &Arc<ChartSignature>,
    ) -> Result<(Self, Option<u32>)> {
        let (n, m) = self.sig.dim();
        if assignment.len() != n + m {
            return Err(Error::SignatureMismatch(format!(
                "assignment has {} values for {} coordinates",
                assignment.len(),
                n + m
            )));
        }
        for (k, a) in assignment.iter().enumerate() {
            check_same(&a.sig, target)?;
            let c = self.sig.coord_at(k);
            let ok = match c {
                Coord::Even(_) => a.is_even(),
                Coord::Odd(_) => a.is_odd(),
            };
            if !ok {
                return Err(Error::ParityMismatch {
                    coordinate: self.sig.name_of(c).to_string(),
                    expected: if matches!(c, Coord::Even(_)) { "even" } else { "odd" },
                    value: a.to_string(),
                });
            }
        }
        let shifted: Vec<SuperPolynomial> = (0..n)
            .map(|i| {
                let mut v = assignment[i].clone();
                v.sub_term(Monomial::one(target.n_even()), &self.sig.center()[i]);
                v
            })
            .collect();

        let order = match own {
            None => assigned,
            Some(d) => {
                if let Some(v) = shifted.iter().find(|v| !v.constant_term().is_zero()) {
                    return Err(Error::CenterMismatch(format!(
                        "jet expanded at {:?} composed with a map not sending the source center there (offset {})",
                        self.sig,
                        v.constant_term()
                    )));
                }
                let loss = if shifted.iter().any(|v| v.has_pure_odd_term()) { (target.n_odd() / 2) as u32 } else { 0 };
                let valid = d.checked_sub(loss).ok_or_else(|| {
                    Error::InsufficientOrder(format!(
                        "order {d} jet loses {loss} degrees under a map with nilpotent even part"
                    ))
                })?;
                Some(assigned.map_or(valid, |a| a.min(valid)))
            }
        };

        // powers[i][e] = shifted[i]^e
        let mut max_exp = vec![0u16; n];
        for mono in self.terms.keys() {
            for (mx, &e) in max_exp.iter_mut().zip(mono.even()) {
                *mx = (*mx).max(e);
            }
        }
        let powers: Vec<Vec<SuperPolynomial>> = (0..n)
            .map(|i| {
                let mut row = vec![SuperPolynomial::one(target)];
                for _ in 0..max_exp[i] {
                    let next = row.last().unwrap().mul_trunc(&shifted[i], order);
                    row.push(next);
                }
                row
            })
            .collect();

        let mut out = SuperPolynomial::zero(target);
        let mut odd_cache: BTreeMap<u16, SuperPolynomial> = BTreeMap::new();
        for (mono, coeff) in &self.terms {
            let odd_part = match odd_cache.get(&mono.odd_mask()) {
                Some(p) => p.clone(),
                None => {
                    let mut p = SuperPolynomial::one(target);
                    for j in mono.odd_indices() {
                        p = p.mul_trunc(&assignment[n + j], order);
                    }
                    odd_cache.insert(mono.odd_mask(), p.clone());
                    p
                }
            };
            if odd_part.is_zero() {
                continue;
            }
            let mut acc = SuperPolynomial::constant(target, coeff.clone());
            for (i, &e) in mono.even().iter().enumerate() {
                if e > 0 {
                    acc = acc.mul_trunc(&powers[i][e as usize], order);
                    if acc.is_zero() {
                        break;
                    }
                }
            }
            // even powers commute with everything, so order of factors is free
            let term = acc.mul_trunc(&odd_part, order);
            for (m, c) in term.terms {
                out.add_term(m, &c);
            }
        }
        Ok((out, order))
    }

    /// The same function written around a different center (exact).
    pub fn recenter(&self, new_center: &[Scalar]) -> Result<Self> {
        let target = Arc::new(self.sig.with_center(new_center.to_vec())?);
        if target == self.sig {
            return Ok(self.clone());
        }
        let ids: Vec<SuperPolynomial> = target.coords().map(|c| SuperPolynomial::coordinate_at(&target, c)).collect();
        self.substitute(&ids, &target)
    }

    /// Expansion around the origin, i.e. in absolute coordinates.
    pub fn to_absolute(&self) -> Self {
        let zero = vec![Scalar::zero(); self.sig.n_even()];
        self.recenter(&zero).expect("origin is a valid center")
    }

    /// Move into a larger chart. `map[k]` is the flat index in `target` of
    /// this chart's flat coordinate `k`.
    pub fn lift(&self, target: &Arc<ChartSignature>, map: &[usize]) -> Result<Self> {
        let (n, m) = self.sig.dim();
        if map.len() != n + m {
            return Err(Error::SignatureMismatch("lift map has wrong length".into()));
        }
        let centers_agree = (0..n).all(|i| match target.coord_at(map[i]) {
            Coord::Even(t) => target.center()[t] == self.sig.center()[i],
            Coord::Odd(_) => false,
        });
        let odd_ok = (n..n + m).all(|k| matches!(target.coord_at(map[k]), Coord::Odd(_)));
        if !odd_ok || !centers_agree {
            let assignment: Vec<SuperPolynomial> =
                map.iter().map(|&t| SuperPolynomial::coordinate_at(target, target.coord_at(t))).collect();
            return self.substitute(&assignment, target);
        }
        let mut out = SuperPolynomial::zero(target);
        for (mono, c) in &self.terms {
            let mut even = vec![0u16; target.n_even()];
            for (i, &e) in mono.even().iter().enumerate() {
                if let Coord::Even(t) = target.coord_at(map[i]) {
                    even[t] += e;
                }
            }
            let odd: Vec<usize> = mono
                .odd_indices()
                .into_iter()
                .map(|j| match target.coord_at(map[n + j]) {
                    Coord::Odd(t) => t,
                    Coord::Even(_) => unreachable!(),
                })
                .collect();
            let (neg, mm) = Monomial::from_odd_list(&even, &odd).expect("injective map");
            if neg {
                out.sub_term(mm, c);
            } else {
                out.add_term(mm, c);
            }
        }
        Ok(out)
    }

    /// Left derivative with respect to a coordinate.
    pub fn derivative(&self, c: Coord) -> Self {
        let mut out = Self::zero(&self.sig);
        for (m, v) in &self.terms {
            match c {
                Coord::Even(i) => {
                    let e = m.even()[i];
                    if e > 0 {
                        out.add_term(m.with_even(i, e - 1), &(v * &Scalar::from_int(e as i64)));
                    }
                }
                Coord::Odd(j) => {
                    let bit = 1u16 << j;
                    if m.odd_mask() & bit != 0 {
                        let before = (m.odd_mask() & (bit - 1)).count_ones();
                        let nm = m.with_odd_mask(m.odd_mask() & !bit);
                        if before % 2 == 1 {
                            out.sub_term(nm, v);
                        } else {
                            out.add_term(nm, v);
                        }
                    }
                }
            }
        }
        out
    }

    /// Coefficient of the linear local term of `c` (numeric part at the center).
    pub fn linear_coefficient(&self, c: Coord) -> Scalar {
        let one = Monomial::one(self.sig.n_even());
        let m = match c {
            Coord::Even(i) => one.with_even(i, 1),
            Coord::Odd(j) => one.with_odd_mask(1 << j),
        };
        self.coefficient(&m)
    }

    /// Terms in the order used for display: higher total degree first.
    fn display_terms(&self) -> Vec<(&Monomial, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let da = a.even_degree() + a.odd_degree();
            let db = b.even_degree() + b.odd_degree();
            db.cmp(&da).then_with(|| b.even().cmp(a.even())).then_with(|| a.odd_indices().cmp(&b.odd_indices()))
        });
        v
    }

    fn fmt_local(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.display_terms().into_iter().enumerate() {
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.even().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.sig.even_names()[i].clone()),
                    _ => factors.push(format!("{}^{}", self.sig.even_names()[i], e)),
                }
            }
            for j in m.odd_indices() {
                factors.push(self.sig.odd_names()[j].clone());
            }
            let negative_real = c.is_real() && c.re() < &num_rational::BigRational::zero();
            let mag = if negative_real { -c } else { c.clone() };
            if k == 0 {
                if negative_real {
                    write!(f, "-")?;
                }
            } else if negative_real {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for SuperPolynomial {
    /// Printed in absolute coordinates, e.g. `a-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sig.center().iter().all(Zero::is_zero) {
            self.fmt_local(f)
        } else {
            self.to_absolute().fmt_local(f)
        }
    }
}

impl fmt::Debug for SuperPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn add(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        self.try_add(rhs).expect("signature mismatch in +")
    }
}

impl Sub for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn sub(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        self.try_sub(rhs).expect("signature mismatch in -")
    }
}

impl Mul for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn mul(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        SuperPolynomial::mul(self, rhs).expect("signature mismatch in *")
    }
}

impl Neg for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn neg(self) -> SuperPolynomial {
        self.scale(&-Scalar::one())
    }
}

impl Add for SuperPolynomial {
    type Output = SuperPolynomial;
    fn add(self, rhs: SuperPolynomial) -> SuperPolynomial {
        &self + &rhs
    }
}

impl Sub for SuperPolynomial {
    type Output = SuperPolynomial;
    fn sub(self, rhs: SuperPolynomial) -> SuperPolynomial {
        &self - &rhs
    }
}

impl Mul for SuperPolynomial {
    type Output = SuperPolynomial;
    fn mul(self, rhs: SuperPolynomial) -> SuperPolynomial {
        &self * &rhs
    }
}

impl Neg for SuperPolynomial {
    type Output = SuperPolynomial;
    fn neg(self) -> SuperPolynomial {
        -&self
    }
}
