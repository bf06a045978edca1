use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numtheory::lcm;

/// A permutation of `0..len`, stored as its image table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    map: Vec<u32>,
}

impl Permutation {
    pub fn identity(len: usize) -> Self {
        Permutation {
            map: (0..len as u32).collect(),
        }
    }

    /// Validates that `map` is a bijection of `0..map.len()`.
    pub fn from_vec(map: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for (i, &v) in map.iter().enumerate() {
            let v = v as usize;
            if v >= map.len() || seen[v] {
                return Err(Error::InvalidArgument(alloc::format!(
                    "not a permutation: entry {i} maps to {v}"
                )));
            }
            seen[v] = true;
        }
        Ok(Permutation { map })
    }

    pub(crate) fn from_vec_unchecked(map: Vec<u32>) -> Self {
        debug_assert!(Self::from_vec(map.clone()).is_ok());
        Permutation { map }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.map[i] as usize
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.map
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(
            self.len(),
            other.len(),
            "composing permutations of different sizes"
        );
        Permutation {
            map: other.map.iter().map(|&i| self.map[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v as usize] = i as u32;
        }
        Permutation { map: inv }
    }

    pub fn pow(&self, k: u64) -> Permutation {
        let mut out = Permutation::identity(self.len());
        for (start, len) in self.cycle_starts() {
            let shift = (k % len as u64) as usize;
            let cycle: Vec<u32> = self.cycle_from(start).collect();
            for (j, &x) in cycle.iter().enumerate() {
                out.map[x as usize] = cycle[(j + shift) % len];
            }
        }
        out
    }

    fn cycle_from(&self, start: usize) -> impl Iterator<Item = u32> + '_ {
        let mut cur = Some(start as u32);
        core::iter::from_fn(move || {
            let x = cur?;
            let next = self.map[x as usize];
            cur = (next as usize != start).then_some(next);
            Some(x)
        })
    }

    /// `(smallest element, length)` for every cycle, ordered by smallest element.
    pub fn cycle_starts(&self) -> Vec<(usize, usize)> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for i in 0..self.len() {
            if seen[i] {
                continue;
            }
            let mut len = 0;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = self.map[j] as usize;
                len += 1;
            }
            out.push((i, len));
        }
        out
    }

    /// Length of the cycle through each element.
    pub fn cycle_lengths(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.len()];
        for (start, len) in self.cycle_starts() {
            for x in self.cycle_from(start) {
                out[x as usize] = len as u64;
            }
        }
        out
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        self.cycle_starts()
            .into_iter()
            .map(|(s, _)| self.cycle_from(s).map(|x| x as usize).collect())
            .collect()
    }

    /// Least common multiple of cycle lengths.
    pub fn order(&self) -> Result<u64> {
        self.cycle_starts()
            .into_iter()
            .try_fold(1u64, |acc, (_, len)| {
                lcm(acc, len as u64).ok_or(Error::Overflow("permutation order"))
            })
    }

    pub fn sign(&self) -> i8 {
        let parity = self
            .cycle_starts()
            .iter()
            .map(|&(_, l)| l - 1)
            .sum::<usize>()
            % 2;
        if parity == 0 {
            1
        } else {
            -1
        }
    }

    /// Disjoint union: `self` on `0..self.len()`, `other` shifted after it.
    pub fn disjoint_union(&self, other: &Permutation) -> Permutation {
        let off = self.len() as u32;
        let mut map = self.map.clone();
        map.extend(other.map.iter().map(|&v| v + off));
        Permutation { map }
    }

    /// First index where `self ∘ other ≠ other ∘ self`.
    pub fn commutation_defect(&self, other: &Permutation) -> Option<usize> {
        (0..self.len()).find(|&i| self.apply(other.apply(i)) != other.apply(self.apply(i)))
    }
}
