use core::fmt;

use crate::{Error, Result};

/// A finite set of coordinate indices `u ⊆ {1, …, 63}`, stored as a bit mask
/// (bit `j - 1` for component `j`).
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);
    /// Largest representable component index.
    pub const MAX_COMPONENT: usize = 63;

    pub const fn from_bits(bits: u64) -> Self {
        Subset(bits & !(1 << 63))
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// `{1, …, s}`.
    /// `{1, …, s}`, saturating at [`MAX_COMPONENT`](Self::MAX_COMPONENT).
    pub fn prefix(s: usize) -> Self {
        if s >= Self::MAX_COMPONENT {
            Subset(u64::MAX >> (64 - Self::MAX_COMPONENT))
        } else {
            Subset((1u64 << s) - 1)
        }
    }

    pub fn singleton(j: usize) -> Self {
        assert!((1..=Self::MAX_COMPONENT).contains(&j));
        Subset(1 << (j - 1))
    }

    /// Builds a subset from 1-based component indices. Repeated indices are
    /// rejected.
    pub fn from_components(components: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &j in components {
            if !(1..=Self::MAX_COMPONENT).contains(&j) {
                return Err(Error::ComponentOutOfRange {
                    component: j,
                    s_max: Self::MAX_COMPONENT,
                });
            }
            let bit = 1u64 << (j - 1);
            if bits & bit != 0 {
                return Err(Error::MalformedWeights("repeated component in subset"));
            }
            bits |= bit;
        }
        Ok(Subset(bits))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, j: usize) -> bool {
        (1..=Self::MAX_COMPONENT).contains(&j) && self.0 & (1 << (j - 1)) != 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersects(self, other: Subset) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    /// Largest component in the set, 0 for the empty set.
    pub fn max_component(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    /// Components in increasing order.
    pub fn components(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        core::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let j = bits.trailing_zeros() as usize + 1;
                bits &= bits - 1;
                Some(j)
            }
        })
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, j) in self.components().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{j}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn components_round_trip() {
        let u = Subset::from_components(&[5, 1, 3]).unwrap();
        assert_eq!(u.components().collect::<Vec<_>>(), vec![1, 3, 5]);
        assert_eq!(u.len(), 3);
        assert_eq!(u.max_component(), 5);
        assert_eq!(format!("{u}"), "{1,3,5}");
    }

    #[test]
    fn rejects_bad_components() {
        assert!(Subset::from_components(&[0]).is_err());
        assert!(Subset::from_components(&[64]).is_err());
        assert!(Subset::from_components(&[2, 2]).is_err());
    }

    #[test]
    fn prefix_and_set_ops() {
        let p = Subset::prefix(4);
        assert_eq!(p.bits(), 0b1111);
        assert!(Subset::singleton(3).is_subset_of(p));
        assert!(!Subset::singleton(5).is_subset_of(p));
        assert_eq!(Subset::EMPTY.max_component(), 0);
        assert!(Subset::prefix(0).is_empty());
    }
}
