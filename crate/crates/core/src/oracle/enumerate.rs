//! Exhaustive enumeration of set partitions, permutations, and rank sequences.

use crate::error::{Error, Result};
use crate::partition::SetPartition;

/// Largest `n` for which partitions are enumerated.
pub const MAX_ENUMERATION_N: usize = 12;

/// Bell numbers via the Bell triangle.
pub fn bell(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for x in &row {
            let v = *next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row[0]
}

/// Restricted growth strings of length `n` in lexicographic order:
/// `a_0 = 0`, `a_i <= 1 + max(a_0..a_{i-1})`.
#[derive(Debug, Clone)]
pub struct RgsIter {
    a: Vec<u8>,
    /// `m[i] = max(a_0..=a_i)`
    m: Vec<u8>,
    started: bool,
    done: bool,
}

impl RgsIter {
    pub fn new(n: usize) -> Self {
        RgsIter { a: vec![0; n], m: vec![0; n], started: false, done: n == 0 }
    }

    /// Advances to the next string; `None` when exhausted.
    pub fn advance(&mut self) -> Option<&[u8]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.a);
        }
        let n = self.a.len();
        let mut i = n;
        while i > 1 {
            i -= 1;
            if self.a[i] <= self.m[i - 1] {
                self.a[i] += 1;
                self.m[i] = self.m[i - 1].max(self.a[i]);
                for j in i + 1..n {
                    self.a[j] = 0;
                    self.m[j] = self.m[i];
                }
                return Some(&self.a);
            }
        }
        self.done = true;
        None
    }
}

/// Streams the canonical partitions of `[n]`.
pub struct PartitionIter {
    rgs: RgsIter,
}

impl Iterator for PartitionIter {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        self.rgs.advance().map(SetPartition::from_rgs)
    }
}

fn check_n(n: usize, max: usize) -> Result<()> {
    if n == 0 || n > max {
        return Err(Error::OutOfRange(format!("n = {n} outside supported range [1, {max}]")));
    }
    Ok(())
}

pub fn partitions(n: usize) -> Result<PartitionIter> {
    check_n(n, MAX_ENUMERATION_N)?;
    Ok(PartitionIter { rgs: RgsIter::new(n) })
}

/// All `Bell(n)` partitions of `[n]`, `1 <= n <= 12`.
pub fn enumerate_partitions(n: usize) -> Result<Vec<SetPartition>> {
    Ok(partitions(n)?.collect())
}

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..k).collect();
    let mut out = vec![current.clone()];
    loop {
        let Some(i) = (1..k).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
}

/// All initial-rank sequences `ρ` with `ρ_j ∈ {1..=j}`, `j = 1..=k`.
pub fn rank_sequences(k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for j in 1..=k {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<usize>| {
                (1..=j).map(move |r| {
                    let mut next = prefix.clone();
                    next.push(r);
                    next
                })
            })
            .collect();
    }
    out
}
