//! Finite unions of disjoint open subintervals of `[0, 1]`.

use crate::error::{Error, Result};
use crate::frequency::MASS_TOLERANCE;

/// Where a point of `[0, 1)` falls relative to an [`IntervalSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    /// Inside the component with this index (components sorted left to right).
    Component(usize),
    /// Inside an unresolved gap holding truncated mass.
    Unresolved,
    /// In the null complement (endpoints, rounding slack).
    Outside,
}

/// Sorted disjoint open intervals plus unresolved gaps carrying the
/// untracked (truncated) mass. Components and gaps together have length 1.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSet {
    components: Vec<(f64, f64)>,
    unresolved: Vec<(f64, f64)>,
}

fn check_sorted(name: &str, xs: &[(f64, f64)]) -> Result<()> {
    for &(l, r) in xs {
        if !(0.0..=1.0).contains(&l) || !(0.0..=1.0).contains(&r) || l > r {
            return Err(Error::OutOfRange(format!("{name} interval ({l}, {r}) not inside [0,1]")));
        }
    }
    if xs.windows(2).any(|w| w[0].1 > w[1].0) {
        return Err(Error::OutOfRange(format!("{name} intervals overlap or are unsorted")));
    }
    Ok(())
}

impl IntervalSet {
    pub fn new(components: Vec<(f64, f64)>, unresolved: Vec<(f64, f64)>) -> Result<Self> {
        check_sorted("component", &components)?;
        check_sorted("unresolved", &unresolved)?;
        let set = IntervalSet { components, unresolved };
        let mut all: Vec<(f64, f64)> = set.components.iter().chain(&set.unresolved).copied().collect();
        all.sort_by(|a, b| a.0.total_cmp(&b.0));
        if all.windows(2).any(|w| w[0].1 > w[1].0 + 1e-15) {
            return Err(Error::OutOfRange("unresolved gap overlaps a component".into()));
        }
        let mass = set.total_length() + set.residual();
        if (mass - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::OutOfRange(format!("interval set covers mass {mass}, expected 1")));
        }
        Ok(set)
    }

    /// Contiguous tiles of the given lengths laid out from 0, followed by a
    /// terminal unresolved gap of the leftover mass.
    pub fn from_tiles(lengths: &[f64]) -> Result<Self> {
        let mut components = Vec::with_capacity(lengths.len());
        let mut left = 0.0f64;
        for &len in lengths {
            if len < 0.0 {
                return Err(Error::OutOfRange(format!("negative tile length {len}")));
            }
            let right = (left + len).min(1.0);
            if right > left {
                components.push((left, right));
            }
            left = right;
        }
        let unresolved = if left < 1.0 { vec![(left, 1.0)] } else { Vec::new() };
        IntervalSet::new(components, unresolved)
    }

    pub fn components(&self) -> &[(f64, f64)] {
        &self.components
    }

    pub fn unresolved(&self) -> &[(f64, f64)] {
        &self.unresolved
    }

    pub fn total_length(&self) -> f64 {
        self.components.iter().map(|(l, r)| r - l).sum()
    }

    /// Mass held in unresolved gaps.
    pub fn residual(&self) -> f64 {
        self.unresolved.iter().map(|(l, r)| r - l).sum()
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.components.iter().map(|(l, r)| r - l).collect()
    }

    pub fn locate(&self, u: f64) -> Location {
        if let Some(i) = find(&self.components, u) {
            Location::Component(i)
        } else if find(&self.unresolved, u).is_some() {
            Location::Unresolved
        } else {
            Location::Outside
        }
    }
}

fn find(xs: &[(f64, f64)], u: f64) -> Option<usize> {
    // first interval whose right end exceeds u
    let i = xs.partition_point(|&(_, r)| r <= u);
    match xs.get(i) {
        Some(&(l, _)) if l < u => Some(i),
        _ => None,
    }
}
