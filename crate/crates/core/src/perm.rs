//! Permutations of `{0, ..., m-1}`; shown to users 1-based.

use std::fmt;

use crate::error::{Error, Result};

/// Largest `m` for which all of `S_m` may be listed.
pub const MAX_ENUMERABLE: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(m: usize) -> Self {
        Perm((0..m as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            let x = x as usize;
            if x >= images.len() || seen[x] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    /// From a 1-based image array such as `[2, 3, 1]`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidPermutation(format!("{images:?} contains 0")));
        }
        Self::from_images(images.iter().map(|&x| (x - 1) as u32).collect())
    }

    /// From 1-based cycles, e.g. `&[&[1, 2, 3]]` for `(1 2 3)`.
    pub fn from_cycles(m: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..m as u32).collect();
        let mut used = vec![false; m];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x == 0 || x > m || used[x - 1] {
                    return Err(Error::InvalidPermutation(format!("bad cycle {cycle:?} for m = {m}")));
                }
                used[x - 1] = true;
                images[x - 1] = (cycle[(i + 1) % cycle.len()] - 1) as u32;
            }
        }
        Ok(Perm(images))
    }

    /// Cyclic shift `j -> j + r (mod m)`.
    pub fn shift(m: usize, r: usize) -> Self {
        Perm((0..m).map(|j| ((j + r) % m) as u32).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    /// `tau ∘ self ∘ tau⁻¹`.
    pub fn conjugate(&self, tau: &Perm) -> Perm {
        tau.compose(&self.compose(&tau.inverse()))
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn fixed_points(&self) -> usize {
        self.0.iter().enumerate().filter(|&(i, &x)| i as u32 == x).count()
    }

    /// Number of points that are not fixed.
    pub fn moved_points(&self) -> usize {
        self.len() - self.fixed_points()
    }

    /// Cycle lengths in non-increasing order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut lengths = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.apply(x);
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }

    /// Position in the lexicographic order of `S_m`.
    pub fn rank(&self) -> u64 {
        let m = self.len();
        let mut used = vec![false; m];
        let mut rank = 0u64;
        for (i, &x) in self.0.iter().enumerate() {
            let smaller = (0..x as usize).filter(|&y| !used[y]).count() as u64;
            rank = rank * (m - i) as u64 + smaller;
            used[x as usize] = true;
        }
        rank
    }

    pub fn unrank(m: usize, mut rank: u64) -> Result<Perm> {
        let total = factorial(m).ok_or_else(|| Error::TooLarge(format!("{m}! overflows")))?;
        if rank >= total {
            return Err(Error::OutOfRange(format!("rank {rank} >= {m}!")));
        }
        let mut digits = vec![0usize; m];
        for i in (0..m).rev() {
            let base = (m - i) as u64;
            digits[i] = (rank % base) as usize;
            rank /= base;
        }
        let mut free: Vec<u32> = (0..m as u32).collect();
        Ok(Perm(digits.into_iter().map(|d| free.remove(d)).collect()))
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

pub fn factorial(m: usize) -> Option<u64> {
    (1..=m as u64).try_fold(1u64, |acc, x| acc.checked_mul(x))
}

/// All of `S_m` in lexicographic order.
pub fn all_perms(m: usize) -> Result<Vec<Perm>> {
    if m > MAX_ENUMERABLE {
        return Err(Error::TooLarge(format!("refusing to list S_{m}")));
    }
    let mut out = Vec::with_capacity(factorial(m).unwrap_or(0) as usize);
    let mut cur: Vec<u32> = (0..m as u32).collect();
    loop {
        out.push(Perm(cur.clone()));
        // next lexicographic permutation
        let Some(i) = (1..m).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return Ok(out);
        };
        let j = (i..m).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// Lexicographically least permutation of each cycle type, in lex order.
pub fn class_representatives(m: usize) -> Result<Vec<Perm>> {
    let mut seen = std::collections::HashSet::new();
    Ok(all_perms(m)?.into_iter().filter(|p| seen.insert(p.cycle_type())).collect())
}
