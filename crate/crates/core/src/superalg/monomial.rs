use std::cmp::Ordering;

use smallvec::SmallVec;

use super::Parity;

/// A canonical monomial `u^k · ξ_{i1} ξ_{i2} …` with `i1 < i2 < …`, where
/// `u` are the even coordinates relative to the chart center.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    even: SmallVec<[u16; 6]>,
    odd: u16,
}

impl Monomial {
    pub fn one(n_even: usize) -> Self {
        Monomial { even: SmallVec::from_elem(0, n_even), odd: 0 }
    }

    pub fn from_parts(even: &[u16], odd_mask: u16) -> Self {
        Monomial { even: SmallVec::from_slice(even), odd: odd_mask }
    }

    /// Monomial from an arbitrary (unsorted) list of odd indices. Returns the
    /// sign picked up by sorting, or `None` when an index repeats.
    pub fn from_odd_list(even: &[u16], odd: &[usize]) -> Option<(bool, Self)> {
        let (neg, mask) = sort_odd(odd)?;
        Some((neg, Monomial { even: SmallVec::from_slice(even), odd: mask }))
    }

    pub fn even(&self) -> &[u16] {
        &self.even
    }

    pub fn odd_mask(&self) -> u16 {
        self.odd
    }

    pub fn odd_indices(&self) -> Vec<usize> {
        (0..16).filter(|i| self.odd & (1 << i) != 0).collect()
    }

    pub fn even_degree(&self) -> u32 {
        self.even.iter().map(|&e| e as u32).sum()
    }

    pub fn odd_degree(&self) -> u32 {
        self.odd.count_ones()
    }

    pub fn parity(&self) -> Parity {
        if self.odd.count_ones().is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_one(&self) -> bool {
        self.odd == 0 && self.even.iter().all(|&e| e == 0)
    }

    /// Product of canonical monomials: `None` if an odd factor repeats,
    /// otherwise `(negated, product)`.
    pub fn mul(&self, other: &Monomial) -> Option<(bool, Monomial)> {
        if self.odd & other.odd != 0 {
            return None;
        }
        let neg = odd_merge_sign(self.odd, other.odd);
        let even = self.even.iter().zip(other.even.iter()).map(|(a, b)| a + b).collect();
        Some((neg, Monomial { even, odd: self.odd | other.odd }))
    }

    pub(crate) fn with_even(&self, i: usize, e: u16) -> Monomial {
        let mut m = self.clone();
        m.even[i] = e;
        m
    }

    pub(crate) fn with_odd_mask(&self, mask: u16) -> Monomial {
        Monomial { even: self.even.clone(), odd: mask }
    }
}

/// Sign of `ξ^A · ξ^B` when brought into ascending order (`true` = negative).
pub(crate) fn odd_merge_sign(a: u16, b: u16) -> bool {
    let mut count = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        // factors of A with index above j must pass over ξ_j
        let above = if j >= 15 { 0 } else { a & (!0u16 << (j + 1)) };
        count += above.count_ones();
        rest &= rest - 1;
    }
    count % 2 == 1
}

fn sort_odd(list: &[usize]) -> Option<(bool, u16)> {
    let mut mask = 0u16;
    let mut inversions = 0usize;
    for (k, &i) in list.iter().enumerate() {
        if mask & (1 << i) != 0 {
            return None;
        }
        mask |= 1 << i;
        inversions += list[..k].iter().filter(|&&p| p > i).count();
    }
    Some((inversions % 2 == 1, mask))
}

fn odd_lex_cmp(a: u16, b: u16) -> Ordering {
    let (mut a, mut b) = (a, b);
    loop {
        match (a, b) {
            (0, 0) => return Ordering::Equal,
            (0, _) => return Ordering::Less,
            (_, 0) => return Ordering::Greater,
            _ => {
                let (ia, ib) = (a.trailing_zeros(), b.trailing_zeros());
                if ia != ib {
                    return ia.cmp(&ib);
                }
                a &= a - 1;
                b &= b - 1;
            }
        }
    }
}

impl Ord for Monomial {
    /// Graded-lex on the even multidegree (the first coordinate ranks
    /// highest within a degree), then the odd subset lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        self.even_degree()
            .cmp(&other.even_degree())
            .then_with(|| other.even.cmp(&self.even))
            .then_with(|| odd_lex_cmp(self.odd, other.odd))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
