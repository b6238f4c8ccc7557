//! Finite extensions of the ground field, modeled finite-field style.
//!
//! A level is a positive integer `n` standing for the unique degree-`n`
//! extension of the ground field (level 1). Level `m` embeds into level `l`
//! exactly when `m | l`; composita are least common multiples, and the
//! tensor product of two extensions over a common subfield splits into
//! `gcd` copies of the compositum.

use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

use crate::Error;

/// A node of the extension lattice, identified by its degree over the ground field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtLevel(pub(crate) u64);

impl ExtLevel {
    pub const GROUND: ExtLevel = ExtLevel(1);

    pub fn new(n: u64) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::InvalidLevel(n));
        }
        Ok(ExtLevel(n))
    }

    #[inline]
    pub fn degree(self) -> u64 {
        self.0
    }

    /// True when `self` embeds into `other`.
    #[inline]
    pub fn divides(self, other: ExtLevel) -> bool {
        other.0 % self.0 == 0
    }

    #[inline]
    pub fn compositum(self, other: ExtLevel) -> ExtLevel {
        ExtLevel(self.0.lcm(&other.0))
    }

    #[inline]
    pub fn intersection(self, other: ExtLevel) -> ExtLevel {
        ExtLevel(self.0.gcd(&other.0))
    }

    pub fn is_ground(self) -> bool {
        self.0 == 1
    }
}

impl fmt::Display for ExtLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `[l : m]`, defined only when `m | l`.
pub fn rel_degree(l: ExtLevel, m: ExtLevel) -> Result<u64, Error> {
    if !m.divides(l) {
        return Err(Error::NotATower { upper: l.0, lower: m.0 });
    }
    Ok(l.0 / m.0)
}

/// The components of `l ⊗_base m`, each a copy of the compositum.
///
/// Returns `gcd(l, m) / base` copies of `lcm(l, m)`.
pub fn tensor_decompose(l: ExtLevel, m: ExtLevel, base: ExtLevel) -> Result<Vec<ExtLevel>, Error> {
    let (copies, level) = tensor_split(l, m, base)?;
    Ok(core::iter::repeat(level).take(copies as usize).collect())
}

/// Same as [`tensor_decompose`] but as `(copies, level)`.
pub fn tensor_split(l: ExtLevel, m: ExtLevel, base: ExtLevel) -> Result<(u64, ExtLevel), Error> {
    if !base.divides(l) {
        return Err(Error::NotATower { upper: l.0, lower: base.0 });
    }
    if !base.divides(m) {
        return Err(Error::NotATower { upper: m.0, lower: base.0 });
    }
    Ok((l.0.gcd(&m.0) / base.0, l.compositum(m)))
}

/// Lcm of an iterator of levels, starting from `start`.
pub fn compositum_all<I: IntoIterator<Item = ExtLevel>>(start: ExtLevel, it: I) -> ExtLevel {
    it.into_iter().fold(start, ExtLevel::compositum)
}

/// Closed point whose residue field is generated by level `min` over the
/// ground: the number of points it splits into, counted with their degree
/// over the new base, when the base is raised from `from` to `to`.
///
/// Over base `b` the point has level `lcm(min, b)`; raising to `to` gives
/// `gcd(lcm(min, from), to) / from` copies at level `lcm(min, to)`.
pub fn res_multiplicity(min: ExtLevel, from: ExtLevel, to: ExtLevel) -> Result<u64, Error> {
    rel_degree(to, from)?;
    Ok(min.compositum(from).0.gcd(&to.0) / from.0)
}

/// Factor picked up by a closed point when the base is lowered from `from`
/// to `to`: `[lcm(min, from) : lcm(min, to)]`.
pub fn tr_multiplicity(min: ExtLevel, from: ExtLevel, to: ExtLevel) -> Result<u64, Error> {
    rel_degree(from, to)?;
    Ok(min.compositum(from).0 / min.compositum(to).0)
}

/// Number of closed points, weighted by their degree over the compositum,
/// in the fibre product over `base` of closed points at levels `levels`
/// (each a multiple of `base`): `prod [l_i : base] / [lcm : base]`.
pub fn product_multiplicity(base: ExtLevel, levels: &[ExtLevel]) -> Result<(u64, ExtLevel), Error> {
    let mut num: u64 = 1;
    let mut top = base;
    for &l in levels {
        num = num.checked_mul(rel_degree(l, base)?).expect("multiplicity overflow");
        top = top.compositum(l);
    }
    Ok((num / rel_degree(top, base)?, top))
}

impl TryFrom<u64> for ExtLevel {
    type Error = Error;
    fn try_from(n: u64) -> Result<Self, Error> {
        ExtLevel::new(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(n: u64) -> ExtLevel {
        ExtLevel::new(n).unwrap()
    }

    #[test]
    fn rel_degree_examples() {
        assert_eq!(rel_degree(lv(6), lv(3)).unwrap(), 2);
        assert_eq!(rel_degree(lv(5), lv(5)).unwrap(), 1);
        assert_eq!(rel_degree(lv(12), lv(4)).unwrap(), 3);
        assert_eq!(
            rel_degree(lv(6), lv(4)),
            Err(Error::NotATower { upper: 6, lower: 4 })
        );
    }

    #[test]
    fn zero_level_rejected() {
        assert_eq!(ExtLevel::new(0), Err(Error::InvalidLevel(0)));
    }

    proptest::proptest! {
        #[test]
        fn trace_after_restriction_multiplies_by_degree(min in 1u64..13, m in 1u64..7, k in 1u64..5) {
            let (min, m, n) = (lv(min), lv(m), lv(m * k));
            let r = res_multiplicity(min, m, n).unwrap();
            let t = tr_multiplicity(min, n, m).unwrap();
            proptest::prop_assert_eq!(r * t, k);
        }

        #[test]
        fn tensor_components_account_for_degree(b in 1u64..7, x in 1u64..7, y in 1u64..7) {
            let (l, m, base) = (lv(b * x), lv(b * y), lv(b));
            let parts = tensor_decompose(l, m, base).unwrap();
            let total: u64 = parts.iter().map(|c| rel_degree(*c, m).unwrap()).sum();
            proptest::prop_assert_eq!(total, rel_degree(l, base).unwrap());
            proptest::prop_assert_eq!(parts, tensor_decompose(m, l, base).unwrap());
        }

        #[test]
        fn rel_degree_is_multiplicative(a in 1u64..8, b in 1u64..8, c in 1u64..8) {
            let (base, mid, top) = (lv(a), lv(a * b), lv(a * b * c));
            proptest::prop_assert_eq!(
                rel_degree(top, base).unwrap(),
                rel_degree(top, mid).unwrap() * rel_degree(mid, base).unwrap()
            );
        }
    }

    #[test]
    fn split_and_trace_multiplicities() {
        // a degree-2 point over the ground splits into two rational points over level 2
        assert_eq!(res_multiplicity(lv(2), lv(1), lv(2)).unwrap(), 2);
        assert_eq!(res_multiplicity(lv(2), lv(1), lv(3)).unwrap(), 1);
        assert_eq!(tr_multiplicity(lv(1), lv(2), lv(1)).unwrap(), 2);
        assert_eq!(tr_multiplicity(lv(6), lv(6), lv(3)).unwrap(), 1);
        assert_eq!(product_multiplicity(lv(1), &[lv(2), lv(2)]).unwrap(), (2, lv(2)));
        assert_eq!(product_multiplicity(lv(1), &[lv(2), lv(3)]).unwrap(), (1, lv(6)));
        assert_eq!(product_multiplicity(lv(2), &[]).unwrap(), (1, lv(2)));
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(tensor_decompose(lv(2), lv(3), lv(1)).unwrap(), [lv(6)]);
        assert_eq!(tensor_decompose(lv(4), lv(4), lv(1)).unwrap(), [lv(4); 4]);
        // gcd * lcm = l * m and the components account for [6:2] = 3
        let parts = tensor_decompose(lv(6), lv(4), lv(2)).unwrap();
        assert_eq!(parts, [lv(12)]);
        let total: u64 = parts.iter().map(|c| rel_degree(*c, lv(4)).unwrap()).sum();
        assert_eq!(total, 3);
        assert!(tensor_decompose(lv(6), lv(4), lv(3)).is_err());
    }
}
