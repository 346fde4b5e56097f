//! Set partitions of `[n] = {1, ..., n}` and compositions of integers.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordered sequence of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition(Vec<usize>);

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::OutOfRange("a composition needs at least one part".into()));
        }
        if parts.contains(&0) {
            return Err(Error::OutOfRange(format!("zero part in composition {parts:?}")));
        }
        Ok(Composition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// `n_λ`
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// `k_λ`
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `Λ_j = λ_j + ... + λ_k` for `j = 0..=k` (0-based; the last entry is 0).
    pub fn tail_sums(&self) -> Vec<usize> {
        let mut tails = vec![0; self.0.len() + 1];
        for i in (0..self.0.len()).rev() {
            tails[i] = tails[i + 1] + self.0[i];
        }
        tails
    }

    /// The composition with part `j` (0-based) incremented; `j == len()` appends a 1.
    pub fn incremented(&self, j: usize) -> Composition {
        let mut parts = self.0.clone();
        if j == parts.len() {
            parts.push(1);
        } else {
            parts[j] += 1;
        }
        Composition(parts)
    }

    /// Parts in nonincreasing order; the key of an exchangeable function.
    pub fn sorted_desc(&self) -> Vec<usize> {
        let mut parts = self.0.clone();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        parts
    }

    /// All compositions of `n` (`2^(n-1)` of them), lexicographic in parts.
    pub fn all_of(n: usize) -> Vec<Composition> {
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), n)];
        while let Some((prefix, rest)) = stack.pop() {
            if rest == 0 {
                out.push(Composition(prefix));
                continue;
            }
            for first in (1..=rest).rev() {
                let mut next = prefix.clone();
                next.push(first);
                stack.push((next, rest - first));
            }
        }
        out
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A partition of `[n]` whose blocks are sorted element lists listed in order
/// of appearance (block minima strictly increase). Elements are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPartition")]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct RawPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl TryFrom<RawPartition> for SetPartition {
    type Error = Error;

    fn try_from(raw: RawPartition) -> Result<Self> {
        let p = canonicalize(raw.n, raw.blocks)?;
        Ok(p)
    }
}

impl SetPartition {
    /// The partition of the empty set.
    pub fn empty() -> Self {
        SetPartition { n: 0, blocks: Vec::new() }
    }

    /// Builds a partition from block labels of elements `1..=labels.len()`.
    /// Labels may be arbitrary; blocks come out in order of appearance.
    pub fn from_labels<L: Copy + Eq + std::hash::Hash>(labels: &[L]) -> Self {
        let mut index = std::collections::HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, label) in labels.iter().enumerate() {
            let b = *index.entry(*label).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(i + 1);
        }
        SetPartition { n: labels.len(), blocks }
    }

    /// Builds from a restricted growth string (`rgs[0] = 0`, `rgs[i] <= 1 + max(rgs[..i])`).
    pub(crate) fn from_rgs(rgs: &[u8]) -> Self {
        let k = rgs.iter().map(|&b| b as usize + 1).max().unwrap_or(0);
        let mut blocks = vec![Vec::new(); k];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b as usize].push(i + 1);
        }
        SetPartition { n: rgs.len(), blocks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// `(|B_1|, ..., |B_k|)`; `None` for the empty partition.
    pub fn composition(&self) -> Option<Composition> {
        if self.blocks.is_empty() {
            None
        } else {
            Some(Composition(self.block_sizes()))
        }
    }

    /// Block label (0-based block index) of every element.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &e in block {
                labels[e - 1] = b;
            }
        }
        labels
    }

    /// Removes block `index` (0-based) and relabels the survivors by the
    /// increasing bijection onto `[n - |B|]`.
    pub fn delete_block(&self, index: usize) -> Result<SetPartition> {
        if index >= self.blocks.len() {
            return Err(Error::IndexOutOfRange { index, len: self.blocks.len() });
        }
        let labels = self.labels();
        let kept: Vec<usize> = labels.into_iter().filter(|&b| b != index).collect();
        Ok(SetPartition::from_labels(&kept))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "n": self.n, "blocks": self.blocks })
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let items: Vec<String> = b.iter().map(|e| e.to_string()).collect();
                format!("{{{}}}", items.join(","))
            })
            .collect();
        write!(f, "{}", blocks.join(""))
    }
}

/// Validates a family of subsets of `[n]` and lists it in order of appearance.
pub fn canonicalize(n: usize, blocks: Vec<Vec<usize>>) -> Result<SetPartition> {
    let mut seen = vec![false; n];
    let mut blocks = blocks;
    for block in &mut blocks {
        if block.is_empty() {
            return Err(Error::MalformedPartition("empty block".into()));
        }
        for &e in block.iter() {
            if e == 0 || e > n {
                return Err(Error::MalformedPartition(format!("element {e} outside [1, {n}]")));
            }
            if seen[e - 1] {
                return Err(Error::MalformedPartition(format!("element {e} appears twice")));
            }
            seen[e - 1] = true;
        }
        block.sort_unstable();
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::MalformedPartition(format!("element {} is not covered", missing + 1)));
    }
    blocks.sort_unstable_by_key(|b| b[0]);
    Ok(SetPartition { n, blocks })
}
