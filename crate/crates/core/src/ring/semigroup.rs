use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// A numerical semigroup `S = <g_1, ..., g_k>` with `gcd = 1`.
///
/// The ring `k[[t^s : s in S]]` is a one-dimensional Cohen-Macaulay local
/// domain; its monomial ideals are described by valuations in `S`.
#[derive(Clone, Debug)]
pub struct NumericalSemigroup {
    generators: Vec<u32>,
    conductor: u32,
    // membership for 0..conductor; everything at or above the conductor is a member
    table: Vec<bool>,
}

impl NumericalSemigroup {
    pub fn new(generators: &[u32], cap: u64) -> Result<Self> {
        let mut gens: Vec<u32> = generators.to_vec();
        gens.sort_unstable();
        gens.dedup();
        if gens.is_empty() {
            return Err(Error::InvalidRing("semigroup needs at least one generator".into()));
        }
        if gens[0] == 0 {
            return Err(Error::InvalidRing("semigroup generators must be positive".into()));
        }
        let g = gens.iter().fold(0u32, |acc, &x| acc.gcd(&x));
        if g != 1 {
            return Err(Error::InvalidRing(format!(
                "generators have gcd {g}; colengths would be infinite"
            )));
        }

        let smallest = gens[0] as usize;
        let mut member = vec![true];
        let mut run = 1usize;
        let mut n = 0usize;
        while run < smallest {
            n += 1;
            if n as u64 > cap {
                return Err(Error::ResourceLimit(format!(
                    "semigroup conductor exceeds {cap}"
                )));
            }
            let m = gens
                .iter()
                .any(|&g| (g as usize) <= n && member[n - g as usize]);
            member.push(m);
            run = if m { run + 1 } else { 0 };
        }
        let conductor = (n + 1 - smallest) as u32;
        member.truncate(conductor as usize);
        Ok(NumericalSemigroup {
            generators: gens,
            conductor,
            table: member,
        })
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    /// Smallest `c` such that every integer `>= c` lies in the semigroup
    /// (the Frobenius number plus one).
    pub fn frobenius_bound(&self) -> u32 {
        self.conductor
    }

    pub fn multiplicity(&self) -> u32 {
        self.generators[0]
    }

    #[inline]
    pub fn contains(&self, n: u32) -> bool {
        n >= self.conductor || self.table[n as usize]
    }

    /// The gaps `N \ S`, in increasing order.
    pub fn gaps(&self) -> Vec<u32> {
        (0..self.conductor).filter(|&n| !self.contains(n)).collect()
    }
}

impl PartialEq for NumericalSemigroup {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
    }
}

impl Eq for NumericalSemigroup {}

impl fmt::Display for NumericalSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "semigroup(")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

/// Reduces a set of valuations to the irredundant ones: drops `b` whenever
/// `b - a` is a semigroup element for some other kept `a`.
pub(crate) fn minimalize(s: &NumericalSemigroup, mut values: Vec<u32>) -> Vec<u32> {
    values.sort_unstable();
    values.dedup();
    let mut kept: Vec<u32> = Vec::with_capacity(values.len());
    for v in values {
        if !kept.iter().any(|&k| s.contains(v - k)) {
            kept.push(v);
        }
    }
    kept
}

pub(crate) fn in_ideal(s: &NumericalSemigroup, gens: &[u32], v: u32) -> bool {
    gens.iter().any(|&e| v >= e && s.contains(v - e))
}

/// Counts semigroup elements below `bound` that do not lie in the ideal.
pub(crate) fn colength_below(s: &NumericalSemigroup, gens: &[u32], bound: u32) -> u64 {
    (0..bound)
        .filter(|&v| s.contains(v) && !in_ideal(s, gens, v))
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked_semigroup() -> NumericalSemigroup {
        NumericalSemigroup::new(&[7, 15, 17, 33], 1 << 20).unwrap()
    }

    #[test]
    fn membership_and_gaps() {
        let s = worked_semigroup();
        for g in [0, 7, 14, 15, 17, 21, 22, 24, 33] {
            assert!(s.contains(g), "{g}");
        }
        for g in [1, 6, 8, 16, 20, 23, 26] {
            assert!(!s.contains(g), "{g}");
        }
        // brute force: closure under addition below 200
        let mut reach = vec![false; 200];
        reach[0] = true;
        for n in 1..200 {
            reach[n] = [7usize, 15, 17, 33].iter().any(|&g| g <= n && reach[n - g]);
        }
        for n in 0..200 {
            assert_eq!(s.contains(n as u32), reach[n], "{n}");
        }
        let last_gap = (0..200).rev().find(|&n| !reach[n]).unwrap() as u32;
        assert_eq!(s.frobenius_bound(), last_gap + 1);
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(NumericalSemigroup::new(&[4, 6], 1000).is_err());
        assert!(NumericalSemigroup::new(&[], 1000).is_err());
        assert!(NumericalSemigroup::new(&[0, 1], 1000).is_err());
    }

    #[test]
    fn regular_case() {
        let s = NumericalSemigroup::new(&[1], 10).unwrap();
        assert_eq!(s.frobenius_bound(), 0);
        assert!(s.gaps().is_empty());
        let s = NumericalSemigroup::new(&[2, 3], 10).unwrap();
        assert_eq!(s.gaps(), vec![1]);
    }

    #[test]
    fn minimalize_drops_translates() {
        let s = worked_semigroup();
        // 50 = 14 + 36 and 66 = 14 + 52 with 36, 52 in S
        assert_eq!(
            minimalize(&s, vec![14, 24, 40, 34, 50, 66]),
            vec![14, 24, 34, 40]
        );
    }
}
