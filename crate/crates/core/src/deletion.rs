//! Deletion kernels, decrement matrices, and random deletions.

use crate::eppf::rising_factorial;
use crate::error::{Error, Result};
use crate::frequency::FrequencyVector;
use crate::params::ExtParams;
use crate::partition::{Composition, SetPartition};
use crate::rng::RngHandle;
use crate::samplers::tau_biased_pick;
use crate::scalar::{binomial, Scalar};

/// `d(λ; j) = [θλ_j + α(n - λ_j)] / [n(θ + α(k-1))]` for 0-based `j`.
pub fn deletion_kernel<S: Scalar>(params: &ExtParams<S>, lambda: &Composition, j: usize) -> Result<S> {
    let (alpha, theta) = params.nonnegative_pair()?;
    let k = lambda.len();
    if j >= k {
        return Err(Error::IndexOutOfRange { index: j, len: k });
    }
    if k == 1 {
        return Ok(S::one());
    }
    let n = S::from_int(lambda.total() as i64);
    let part = S::from_int(lambda.parts()[j] as i64);
    let num = theta.clone() * part.clone() + alpha.clone() * (n.clone() - part);
    let den = n * (theta + alpha * S::from_int(k as i64 - 1));
    Ok(num / den)
}

/// Lower-triangular table `q(n, m)`, `1 <= m <= n <= n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecrementMatrix<S> {
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> DecrementMatrix<S> {
    /// `rows[n-1][m-1] = q(n, m)`; each row must be a probability vector.
    pub fn new(rows: Vec<Vec<S>>) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            if row.len() != i + 1 {
                return Err(Error::OutOfRange(format!("row {} has {} entries", i + 1, row.len())));
            }
            if row.iter().any(|x| *x < S::zero()) {
                return Err(Error::OutOfRange(format!("negative entry in row {}", i + 1)));
            }
        }
        Ok(DecrementMatrix { rows })
    }

    pub fn n_max(&self) -> usize {
        self.rows.len()
    }

    /// `q(n, m)`, 1-based.
    pub fn get(&self, n: usize, m: usize) -> Option<&S> {
        self.rows.get(n.checked_sub(1)?)?.get(m.checked_sub(1)?)
    }

    pub fn row(&self, n: usize) -> Option<&[S]> {
        Some(&self.rows.get(n.checked_sub(1)?)?[..])
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.rows
    }

    pub fn row_sum(&self, n: usize) -> Option<S> {
        Some(self.row(n)?.iter().cloned().fold(S::zero(), |a, b| a + b))
    }
}

/// `q(n, m) = C(n,m) (1-α)_{m-1} / (θ+n-m)_m · [(n-m)α + mθ] / n`, with the
/// `m = n` entry in the form `(1-α)_{n-1} / (θ+1)_{n-1}` so that `θ = 0` is covered.
pub fn decrement_entry<S: Scalar>(alpha: &S, theta: &S, n: usize, m: usize) -> S {
    let one_minus = S::one() - alpha.clone();
    if m == n {
        return rising_factorial(&one_minus, n - 1) / rising_factorial(&(theta.clone() + S::one()), n - 1);
    }
    let nn = S::from_int(n as i64);
    let mm = S::from_int(m as i64);
    binomial::<S>(n as u64, m as u64) * rising_factorial(&one_minus, m - 1)
        / rising_factorial(&(theta.clone() + S::from_int((n - m) as i64)), m)
        * ((nn.clone() - mm.clone()) * alpha.clone() + mm * theta.clone())
        / nn
}

pub fn decrement_matrix<S: Scalar>(params: &ExtParams<S>, n_max: usize) -> Result<DecrementMatrix<S>> {
    let (alpha, theta) = params.nonnegative_pair()?;
    let rows = (1..=n_max)
        .map(|n| (1..=n).map(|m| decrement_entry(&alpha, &theta, n, m)).collect())
        .collect();
    DecrementMatrix::new(rows)
}

/// `d(λ;1) C(n, λ_1) (1-α)_{λ_1-1} (θ + (k-1)α) / (θ + n - λ_1)_{λ_1}`, which
/// must depend on `λ` only through `n` and `λ_1`.
pub fn f1_value<S: Scalar>(params: &ExtParams<S>, lambda: &Composition) -> Result<S> {
    let (alpha, theta) = params.nonnegative_pair()?;
    let n = lambda.total();
    let first = lambda.parts()[0];
    let k = lambda.len();
    if k == 1 {
        // θ / (θ)_n with the factor θ cancelled
        return Ok(decrement_entry(&alpha, &theta, n, n));
    }
    let d = deletion_kernel(params, lambda, 0)?;
    Ok(d * binomial::<S>(n as u64, first as u64)
        * rising_factorial(&(S::one() - alpha.clone()), first - 1)
        * (theta.clone() + S::from_int(k as i64 - 1) * alpha)
        / rising_factorial(&(theta + S::from_int((n - first) as i64)), first))
}

/// Spread `max - min` of [`f1_value`] over all compositions of `n` with first part `first`.
pub fn f1_consistency<S: Scalar>(params: &ExtParams<S>, n: usize, first: usize) -> Result<S> {
    if first == 0 || first > n {
        return Err(Error::OutOfRange(format!("first part {first} not in [1, {n}]")));
    }
    if n > 12 {
        return Err(Error::OutOfRange(format!("f1_consistency enumerates n <= 12, got {n}")));
    }
    let mut values = Vec::new();
    if first == n {
        values.push(f1_value(params, &Composition::new(vec![n])?)?);
    } else {
        for rest in Composition::all_of(n - first) {
            let mut parts = vec![first];
            parts.extend_from_slice(rest.parts());
            values.push(f1_value(params, &Composition::new(parts)?)?);
        }
    }
    let mut lo = values[0].clone();
    let mut hi = values[0].clone();
    for v in values {
        if v < lo {
            lo = v.clone();
        }
        if v > hi {
            hi = v;
        }
    }
    Ok(hi - lo)
}

/// Deletes a τ-biased pick among the blocks; returns its size and the relabelled remainder.
pub fn tau_delete(partition: &SetPartition, tau: f64, rng: &mut RngHandle) -> Result<(usize, SetPartition)> {
    let sizes: Vec<f64> = partition.block_sizes().iter().map(|&s| s as f64).collect();
    let j = tau_biased_pick(&sizes, tau, rng)?;
    Ok((partition.blocks()[j].len(), partition.delete_block(j)?))
}

/// Picks `J` with probability `P_J`, deletes `P_1..P_J`, and renormalizes the rest.
/// Returns the deleted prefix and the remainder (`None` when nothing is left).
/// A pick landing in the untracked residual is an error.
pub fn bulk_delete<S: Scalar>(
    f: &FrequencyVector<S>,
    rng: &mut RngHandle,
) -> Result<(Vec<S>, Option<FrequencyVector<S>>)> {
    if !f.dust().is_zero() {
        return Err(Error::OutOfRange("bulk deletion needs proper frequencies (no dust)".into()));
    }
    let mut u = rng.uniform();
    let mut pick = None;
    for (j, p) in f.p().iter().enumerate() {
        let x = p.to_f64();
        if u < x {
            pick = Some(j);
            break;
        }
        u -= x;
    }
    let j = pick.ok_or_else(|| {
        Error::OutOfRange(format!("pick fell in the untracked residual {}", f.residual()))
    })?;
    let prefix = f.p()[..=j].to_vec();
    let rest = &f.p()[j + 1..];
    let mass = rest.iter().cloned().fold(f.residual().clone(), |a, b| a + b);
    if mass.is_zero() {
        return Ok((prefix, None));
    }
    let scaled: Vec<S> = rest.iter().map(|x| x.clone() / mass.clone()).collect();
    let residual = f.residual().clone() / mass;
    Ok((prefix, Some(FrequencyVector::new(scaled, S::zero(), residual)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn comp(parts: &[usize]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    fn nonneg_grid() -> Vec<ExtParams<Rational>> {
        vec![
            ExtParams::ratio(0, 1, 1, 1).unwrap(),
            ExtParams::ratio(0, 1, 2, 1).unwrap(),
            ExtParams::ratio(1, 2, 1, 2).unwrap(),
            ExtParams::ratio(1, 3, 2, 3).unwrap(),
            ExtParams::ratio(2, 3, 0, 1).unwrap(),
        ]
    }

    #[test]
    fn kernel_examples() {
        let equal = ExtParams::ratio(1, 3, 1, 3).unwrap();
        let l = comp(&[4, 1, 2]);
        for j in 0..3 {
            assert_eq!(deletion_kernel(&equal, &l, j).unwrap(), r(1, 3));
        }
        let ewens = ExtParams::ratio(0, 1, 1, 1).unwrap();
        assert_eq!(deletion_kernel(&ewens, &comp(&[2, 1, 1]), 0).unwrap(), r(1, 2));
        let stable = ExtParams::ratio(1, 2, 0, 1).unwrap();
        assert_eq!(deletion_kernel(&stable, &comp(&[2, 1, 1]), 0).unwrap(), r(1, 4));
        assert_eq!(deletion_kernel(&stable, &comp(&[3]), 0).unwrap(), r(1, 1));
        assert!(deletion_kernel(&stable, &comp(&[3]), 1).is_err());
        let neg = ExtParams::neg_alpha(r(-1, 1), 3).unwrap();
        assert!(matches!(deletion_kernel(&neg, &comp(&[1, 1]), 0), Err(Error::UnsupportedKernel(_))));
        let small = ExtParams::ratio(1, 2, -1, 4).unwrap();
        assert!(deletion_kernel(&small, &comp(&[1, 1]), 0).is_err());
    }

    #[test]
    fn kernel_sums_to_one() {
        for params in nonneg_grid() {
            for n in 1..=9 {
                for l in Composition::all_of(n) {
                    let total = (0..l.len())
                        .map(|j| deletion_kernel(&params, &l, j).unwrap())
                        .fold(r(0, 1), |a, b| a + b);
                    assert_eq!(total, r(1, 1));
                }
            }
        }
    }

    #[test]
    fn decrement_examples() {
        for params in nonneg_grid() {
            let q = decrement_matrix(&params, 50).unwrap();
            assert_eq!(q.get(1, 1), Some(&r(1, 1)));
            for n in 1..=50 {
                assert_eq!(q.row_sum(n).unwrap(), r(1, 1), "{params} row {n}");
            }
        }
        let ewens = ExtParams::ratio(0, 1, 1, 1).unwrap();
        let q = decrement_matrix(&ewens, 2).unwrap();
        assert_eq!(q.row(2).unwrap(), &[r(1, 2), r(1, 2)]);
        assert!(q.get(3, 1).is_none());
        assert!(q.get(0, 1).is_none());
    }

    #[test]
    fn f1_examples() {
        assert_eq!(f1_consistency(&ExtParams::ratio(0, 1, 1, 1).unwrap(), 3, 1).unwrap(), r(0, 1));
        assert_eq!(f1_consistency(&ExtParams::ratio(1, 2, 1, 2).unwrap(), 4, 2).unwrap(), r(0, 1));
        assert_eq!(f1_consistency(&ExtParams::ratio(1, 3, 2, 3).unwrap(), 5, 1).unwrap(), r(0, 1));
        for params in nonneg_grid() {
            let q = decrement_matrix(&params, 8).unwrap();
            for n in 1..=8 {
                for m in 1..=n {
                    assert_eq!(f1_consistency(&params, n, m).unwrap(), r(0, 1));
                    let mut parts = vec![m];
                    if m < n {
                        parts.push(n - m);
                    }
                    assert_eq!(&f1_value(&params, &comp(&parts)).unwrap(), q.get(n, m).unwrap());
                }
            }
        }
        // a size-biased kernel breaks consistency away from α = 0
        let wrong = ExtParams::ratio(1, 2, 1, 2).unwrap();
        let spread = {
            let values: Vec<Rational> = [vec![1, 1, 2], vec![1, 3]]
                .iter()
                .map(|p| {
                    let l = comp(p);
                    let d = r(1, 4); // λ_1 / n
                    f1_value(&wrong, &l).unwrap() / deletion_kernel(&wrong, &l, 0).unwrap() * d
                })
                .collect();
            values[0].clone() - values[1].clone()
        };
        assert_ne!(spread, r(0, 1));
    }

    #[test]
    fn tau_delete_examples() {
        let mut rng = RngHandle::new(2);
        let single = SetPartition::from_labels(&[0]);
        let (m, rest) = tau_delete(&single, 0.3, &mut rng).unwrap();
        assert_eq!(m, 1);
        assert_eq!(rest, SetPartition::empty());

        let p = SetPartition::from_labels(&[0, 1, 0]);
        let n = 90_000;
        let first = (0..n).filter(|_| tau_delete(&p, 0.0, &mut rng).unwrap().0 == 2).count();
        assert!((first as f64 / n as f64 - 2.0 / 3.0).abs() < 0.01);
        let q = SetPartition::from_labels(&[0, 1, 1, 2, 2, 2]);
        let mut counts = [0usize; 4];
        for _ in 0..n {
            counts[tau_delete(&q, 0.5, &mut rng).unwrap().0] += 1;
        }
        for &c in &counts[1..] {
            assert!((c as f64 / n as f64 - 1.0 / 3.0).abs() < 0.01);
        }
    }

    #[test]
    fn bulk_delete_examples() {
        let mut rng = RngHandle::new(6);
        let whole = FrequencyVector::proper(vec![r(1, 1)]).unwrap();
        let (prefix, rest) = bulk_delete(&whole, &mut rng).unwrap();
        assert_eq!(prefix, vec![r(1, 1)]);
        assert!(rest.is_none());

        let halves = FrequencyVector::proper(vec![r(1, 2), r(1, 2)]).unwrap();
        for _ in 0..50 {
            let (prefix, rest) = bulk_delete(&halves, &mut rng).unwrap();
            if prefix.len() == 1 {
                assert_eq!(rest.unwrap().p(), &[r(1, 1)]);
            } else {
                assert!(rest.is_none());
            }
        }
        let dusty = FrequencyVector::new(vec![0.5], 0.5, 0.0).unwrap();
        assert!(bulk_delete(&dusty, &mut rng).is_err());
        let truncated = FrequencyVector::new(vec![1e-9], 0.0, 1.0 - 1e-9).unwrap();
        assert!(bulk_delete(&truncated, &mut rng).is_err());
    }

    #[test]
    fn bulk_delete_regenerates_gem_zero_theta() {
        use crate::samplers::gem_sample;
        let params = ExtParams::two_param(0.0, 2.0).unwrap();
        let mut rng = RngHandle::new(31);
        let n = 40_000;
        let mut first = Vec::with_capacity(n);
        let mut skipped = 0;
        while first.len() < n {
            let (_, f) = gem_sample(&params, 1e-10, &mut rng).unwrap();
            match bulk_delete(&f, &mut rng) {
                Ok((_, Some(rest))) if !rest.p().is_empty() => {
                    let w = rest.residual_fractions().unwrap();
                    first.push((w.values()[0], w.values().get(1).copied().unwrap_or(1.0)));
                }
                _ => skipped += 1,
            }
        }
        assert!(skipped < 10);
        // W_1, W_2 of the remainder are again beta(1, 2): mean 1/3, E W^2 = 1/6
        let m1 = first.iter().map(|x| x.0).sum::<f64>() / n as f64;
        let m2 = first.iter().map(|x| x.0 * x.0).sum::<f64>() / n as f64;
        let m3 = first.iter().map(|x| x.1).sum::<f64>() / n as f64;
        let se = (1.0 / 18.0 / n as f64).sqrt();
        assert!((m1 - 1.0 / 3.0).abs() < 4.0 * se, "{m1}");
        assert!((m3 - 1.0 / 3.0).abs() < 4.0 * se, "{m3}");
        assert!((m2 - 1.0 / 6.0).abs() < 0.005, "{m2}");
    }
}
