//! Finitely supported integer combinations over an ordered key type.

use alloc::collections::btree_map::{self, BTreeMap};
use core::ops::{Add, AddAssign, Neg, Sub};

/// Coefficient type for every formal sum in the crate. Arithmetic is checked;
/// overflow is a bug in the caller's input sizes, never silently wrapped.
pub type Coeff = i64;

#[inline]
pub(crate) fn cmul(a: Coeff, b: Coeff) -> Coeff {
    a.checked_mul(b).expect("coefficient overflow")
}

#[inline]
pub(crate) fn cadd(a: Coeff, b: Coeff) -> Coeff {
    a.checked_add(b).expect("coefficient overflow")
}

#[inline]
pub(crate) fn ucoeff(n: u64) -> Coeff {
    Coeff::try_from(n).expect("coefficient overflow")
}

/// A free-abelian-group element: a canonical map key → nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormalSum<K: Ord> {
    terms: BTreeMap<K, Coeff>,
}

impl<K: Ord> Default for FormalSum<K> {
    fn default() -> Self {
        FormalSum { terms: BTreeMap::new() }
    }
}

impl<K: Ord> FormalSum<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn singleton(key: K, coeff: Coeff) -> Self {
        let mut s = Self::zero();
        s.add_term(key, coeff);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: K, coeff: Coeff) {
        if coeff == 0 {
            return;
        }
        match self.terms.entry(key) {
            btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            btree_map::Entry::Occupied(mut o) => {
                let c = cadd(*o.get(), coeff);
                if c == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = c;
                }
            }
        }
    }

    pub fn coeff(&self, key: &K) -> Coeff {
        self.terms.get(key).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, Coeff)> + '_ {
        self.terms.iter().map(|(k, c)| (k, *c))
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> + '_ {
        self.terms.keys()
    }

    pub fn scale(&self, factor: Coeff) -> Self
    where
        K: Clone,
    {
        if factor == 0 {
            return Self::zero();
        }
        FormalSum {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), cmul(*c, factor))).collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &Self, factor: Coeff)
    where
        K: Clone,
    {
        for (k, c) in other.iter() {
            self.add_term(k.clone(), cmul(c, factor));
        }
    }

    /// Sum of coefficients weighted by `weight(key)`.
    pub fn weighted_sum(&self, mut weight: impl FnMut(&K) -> Coeff) -> Coeff {
        self.iter().fold(0, |acc, (k, c)| cadd(acc, cmul(c, weight(k))))
    }

    pub fn map_keys<K2: Ord>(&self, mut f: impl FnMut(&K) -> K2) -> FormalSum<K2> {
        let mut out = FormalSum::zero();
        for (k, c) in self.iter() {
            out.add_term(f(k), c);
        }
        out
    }

    pub fn into_iter_terms(self) -> impl Iterator<Item = (K, Coeff)> {
        self.terms.into_iter()
    }
}

impl<K: Ord> FromIterator<(K, Coeff)> for FormalSum<K> {
    fn from_iter<I: IntoIterator<Item = (K, Coeff)>>(iter: I) -> Self {
        let mut s = Self::zero();
        for (k, c) in iter {
            s.add_term(k, c);
        }
        s
    }
}

impl<K: Ord + Clone> AddAssign<&FormalSum<K>> for FormalSum<K> {
    fn add_assign(&mut self, rhs: &FormalSum<K>) {
        self.add_scaled(rhs, 1);
    }
}

impl<K: Ord + Clone> Add for &FormalSum<K> {
    type Output = FormalSum<K>;
    fn add(self, rhs: Self) -> FormalSum<K> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<K: Ord + Clone> Sub for &FormalSum<K> {
    type Output = FormalSum<K>;
    fn sub(self, rhs: Self) -> FormalSum<K> {
        let mut out = self.clone();
        out.add_scaled(rhs, -1);
        out
    }
}

impl<K: Ord + Clone> Neg for &FormalSum<K> {
    type Output = FormalSum<K>;
    fn neg(self) -> FormalSum<K> {
        self.scale(-1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merging_drops_zeros() {
        let mut s: FormalSum<u32> = FormalSum::zero();
        s.add_term(3, 2);
        s.add_term(1, 1);
        s.add_term(3, -2);
        assert_eq!(s.len(), 1);
        assert_eq!(s.coeff(&1), 1);
        assert_eq!(s.coeff(&3), 0);
        let t = &s - &s;
        assert!(t.is_zero());
    }
}
