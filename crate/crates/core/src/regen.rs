//! Regenerative structure through subordinators: Laplace exponents, `Φ(n, m)`,
//! decrement matrices from measures, and random multiplicatively
//! regenerative interval sets.
//!
//! A measure is described by its image `ν̃` on `(0, 1]` under `x ↦ 1 - e^{-x}`.
//! For the `(α, θ)` family the tail is `ν̃(u, 1] = u^{-α} (1-u)^θ`; at `θ = 0`
//! this includes a unit atom at `u = 1` (killing).

use statrs::function::beta::ln_beta;

use crate::deletion::DecrementMatrix;
use crate::eppf::rising_factorial;
use crate::error::{Error, Result};
use crate::frequency::FrequencyVector;
use crate::interval::{IntervalSet, Location};
use crate::params::{ExtParams, Xi};
use crate::partition::SetPartition;
use crate::rng::RngHandle;
use crate::samplers::{gem_sample, xi_order};
use crate::scalar::{binomial, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub enum LevyImageMeasure<S> {
    /// Closed-form tail `u^{-α} (1-u)^θ`, `0 <= α < 1`, `θ >= 0`.
    AlphaTheta { alpha: S, theta: S },
    /// Weighted atoms `(u_i, w_i)` with `u_i ∈ (0, 1]`, `w_i > 0`.
    FiniteAtoms(Vec<(S, S)>),
}

/// `reduced * scale`; in exact mode `reduced` is exact and `scale` a common
/// float factor, so ratios of values with equal scale are exact.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiValue<S> {
    pub reduced: S,
    pub scale: f64,
}

impl<S: Scalar> PhiValue<S> {
    pub fn to_f64(&self) -> f64 {
        self.reduced.to_f64() * self.scale
    }
}

impl<S: Scalar> LevyImageMeasure<S> {
    pub fn alpha_theta(alpha: S, theta: S) -> Result<Self> {
        let m = LevyImageMeasure::AlphaTheta { alpha, theta };
        m.validate()?;
        Ok(m)
    }

    pub fn atoms(atoms: Vec<(S, S)>) -> Result<Self> {
        let m = LevyImageMeasure::FiniteAtoms(atoms);
        m.validate()?;
        Ok(m)
    }

    /// The measure of the `(α, θ)` partition, for `α, θ >= 0`.
    pub fn from_params(params: &ExtParams<S>) -> Result<Self> {
        match params {
            ExtParams::TwoParam { alpha, theta } if *theta >= S::zero() => {
                Self::alpha_theta(alpha.clone(), theta.clone())
            }
            other => Err(Error::UnsupportedKernel(format!(
                "no subordinator for {other}; needs alpha, theta >= 0"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            LevyImageMeasure::AlphaTheta { alpha, theta } => {
                if *alpha >= S::one() {
                    return Err(Error::DivergentMeasure(format!(
                        "tail u^-{alpha} has infinite first moment"
                    )));
                }
                if *alpha < S::zero() || *theta < S::zero() {
                    return Err(Error::InvalidParams(format!(
                        "measure needs alpha in [0,1), theta >= 0; got ({alpha}, {theta})"
                    )));
                }
            }
            LevyImageMeasure::FiniteAtoms(atoms) => {
                for (u, w) in atoms {
                    if *u <= S::zero() || *u > S::one() || *w <= S::zero() {
                        return Err(Error::InvalidParams(format!("bad atom ({u}, {w})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Common scale of [`phi_nm`] and [`phi_n`] values: `B(1-α, θ+1)`, or 1 for atoms.
    fn scale(&self) -> f64 {
        match self {
            LevyImageMeasure::AlphaTheta { alpha, theta } => {
                ln_beta(1.0 - alpha.to_f64(), theta.to_f64() + 1.0).exp()
            }
            LevyImageMeasure::FiniteAtoms(_) => 1.0,
        }
    }

    /// Multiplies every atom weight by `c`.
    pub fn scaled(&self, c: &S) -> Result<Self> {
        match self {
            LevyImageMeasure::FiniteAtoms(atoms) => Self::atoms(
                atoms.iter().map(|(u, w)| (u.clone(), w.clone() * c.clone())).collect(),
            ),
            LevyImageMeasure::AlphaTheta { .. } => Err(Error::InvalidParams(
                "the closed-form family is kept at unit scale".into(),
            )),
        }
    }
}

/// `Φ(a) = ∫ (1 - (1-x)^a) ν̃(dx)`; `a B(1-α, θ+a)` for the closed form.
pub fn laplace_exponent<S: Scalar>(measure: &LevyImageMeasure<S>, a: f64) -> Result<f64> {
    measure.validate()?;
    if !(a >= 0.0) {
        return Err(Error::OutOfRange(format!("Laplace exponent needs a >= 0, got {a}")));
    }
    if a == 0.0 {
        return Ok(0.0);
    }
    Ok(match measure {
        LevyImageMeasure::AlphaTheta { alpha, theta } => {
            a * ln_beta(1.0 - alpha.to_f64(), theta.to_f64() + a).exp()
        }
        LevyImageMeasure::FiniteAtoms(atoms) => atoms
            .iter()
            .map(|(u, w)| w.to_f64() * (1.0 - (1.0 - u.to_f64()).powf(a)))
            .sum(),
    })
}

/// Ratio `B(a+i, b+j) / B(a, b) = (a)_i (b)_j / (a+b)_{i+j}`.
fn beta_shift<S: Scalar>(a: &S, b: &S, i: usize, j: usize) -> S {
    rising_factorial(a, i) * rising_factorial(b, j) / rising_factorial(&(a.clone() + b.clone()), i + j)
}

/// `Φ(n) = Φ(a)` at integer `a = n`, in the exact representation.
pub fn phi_n<S: Scalar>(measure: &LevyImageMeasure<S>, n: usize) -> Result<PhiValue<S>> {
    measure.validate()?;
    let reduced = match measure {
        LevyImageMeasure::AlphaTheta { alpha, theta } => {
            if n == 0 {
                S::zero()
            } else {
                let a = S::one() - alpha.clone();
                let b = theta.clone() + S::one();
                S::from_int(n as i64) * beta_shift(&a, &b, 0, n - 1)
            }
        }
        LevyImageMeasure::FiniteAtoms(atoms) => atoms.iter().fold(S::zero(), |acc, (u, w)| {
            acc + w.clone() * (S::one() - (S::one() - u.clone()).powi(n as u32))
        }),
    };
    Ok(PhiValue { reduced, scale: measure.scale() })
}

/// `Φ(n, m) = C(n, m) ∫ x^m (1-x)^{n-m} ν̃(dx)`.
///
/// Closed form: `C(n,m) [α B(m-α, n-m+θ+1) + θ B(m-α+1, n-m+θ)]`, where the
/// second term at `m = n` is `(n+1-α+θ) B(n+1-α, θ+1)` (continuous at `θ = 0`).
pub fn phi_nm<S: Scalar>(measure: &LevyImageMeasure<S>, n: usize, m: usize) -> Result<PhiValue<S>> {
    measure.validate()?;
    if m == 0 || m > n {
        return Err(Error::OutOfRange(format!("Φ(n,m) needs 1 <= m <= n, got n={n}, m={m}")));
    }
    let choose = binomial::<S>(n as u64, m as u64);
    let reduced = match measure {
        LevyImageMeasure::AlphaTheta { alpha, theta } => {
            let a = S::one() - alpha.clone();
            let b = theta.clone() + S::one();
            let first = alpha.clone() * beta_shift(&a, &b, m - 1, n - m);
            let second = if m == n {
                (S::from_int(n as i64 + 1) - alpha.clone() + theta.clone()) * beta_shift(&a, &b, n, 0)
            } else {
                // B(m-α+1, n-m+θ) = B(a+m, b+n-m-1)
                theta.clone() * beta_shift(&a, &b, m, n - m - 1)
            };
            choose * (first + second)
        }
        LevyImageMeasure::FiniteAtoms(atoms) => {
            let sum = atoms.iter().fold(S::zero(), |acc, (u, w)| {
                acc + w.clone() * u.powi(m as u32) * (S::one() - u.clone()).powi((n - m) as u32)
            });
            choose * sum
        }
    };
    Ok(PhiValue { reduced, scale: measure.scale() })
}

/// `q(n, m) = Φ(n, m) / Φ(n)`.
pub fn decrement_from_phi<S: Scalar>(measure: &LevyImageMeasure<S>, n_max: usize) -> Result<DecrementMatrix<S>> {
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let total = phi_n(measure, n)?.reduced;
        if total.is_zero() {
            return Err(Error::Degenerate(format!("Φ({n}) = 0")));
        }
        let row = (1..=n)
            .map(|m| Ok(phi_nm(measure, n, m)?.reduced / total.clone()))
            .collect::<Result<Vec<S>>>()?;
        rows.push(row);
    }
    DecrementMatrix::new(rows)
}

/// Jump times and post-jump levels of a pure-jump subordinator path.
#[derive(Debug, Clone, PartialEq)]
pub struct SubordinatorPath {
    times: Vec<f64>,
    levels: Vec<f64>,
    killed: bool,
}

impl SubordinatorPath {
    pub fn new(times: Vec<f64>, levels: Vec<f64>, killed: bool) -> Result<Self> {
        if times.len() != levels.len() {
            return Err(Error::OutOfRange("times and levels differ in length".into()));
        }
        let increasing = |xs: &[f64]| xs.first().is_none_or(|&x| x >= 0.0) && xs.windows(2).all(|w| w[0] <= w[1]);
        if !increasing(&times) || !increasing(&levels) {
            return Err(Error::OutOfRange("subordinator path must be nondecreasing from 0".into()));
        }
        Ok(SubordinatorPath { times, levels, killed })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn is_killed(&self) -> bool {
        self.killed
    }

    /// Range points `F = 1 - e^{-S}` after each jump (the point `F_0 = 0` is implicit).
    pub fn range_points(&self) -> Vec<f64> {
        self.levels.iter().map(|s| -(-s).exp_m1()).collect()
    }

    /// Gaps between successive range points; the mass above the last point
    /// is an unresolved gap unless the path was killed.
    pub fn interval_set(&self) -> Result<IntervalSet> {
        let mut components = Vec::with_capacity(self.levels.len() + 1);
        let mut left = 0.0;
        for f in self.range_points() {
            let right = f.min(1.0);
            if right > left {
                components.push((left, right));
            }
            left = right;
        }
        let mut unresolved = Vec::new();
        if left < 1.0 {
            if self.killed {
                components.push((left, 1.0));
            } else {
                unresolved.push((left, 1.0));
            }
        }
        IntervalSet::new(components, unresolved)
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::OutOfRange(format!("residual cap must lie in (0,1), got {eps}")));
    }
    Ok(())
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::InvalidParams(format!("theta must be positive, got {theta}")));
    }
    Ok(())
}

/// Complement of `{1 - ∏_{i<=j} (1 - V_i)}` for i.i.d. `V_i ~ beta(1, θ)`.
pub fn stick_breaking_set(theta: f64, eps: f64, rng: &mut RngHandle) -> Result<IntervalSet> {
    check_theta(theta)?;
    check_eps(eps)?;
    let mut tiles = Vec::new();
    let mut remaining = 1.0;
    while remaining >= eps {
        let v = rng.beta(1.0, theta);
        tiles.push(v * remaining);
        remaining *= 1.0 - v;
    }
    IntervalSet::from_tiles(&tiles)
}

/// Unit-rate compound Poisson path with `exp(θ)` jumps, run until `1 - F < eps`.
pub fn compound_poisson_path(theta: f64, eps: f64, rng: &mut RngHandle) -> Result<SubordinatorPath> {
    check_theta(theta)?;
    check_eps(eps)?;
    let stop = -eps.ln();
    let (mut t, mut s) = (0.0, 0.0);
    let mut times = Vec::new();
    let mut levels = Vec::new();
    while s <= stop {
        t += rng.exp(1.0);
        s += rng.exp(theta);
        times.push(t);
        levels.push(s);
    }
    SubordinatorPath::new(times, levels, false)
}

/// Complement of the range of `1 - e^{-S}` for the `(0, θ)` subordinator.
pub fn compound_poisson_set(theta: f64, eps: f64, rng: &mut RngHandle) -> Result<IntervalSet> {
    compound_poisson_path(theta, eps, rng)?.interval_set()
}

/// Lays the stored frequencies out as contiguous intervals in `◁_ξ` order of
/// their indices; the residual becomes a terminal unresolved gap.
pub fn ordered_arrangement(f: &FrequencyVector<f64>, xi: &Xi<f64>, rng: &mut RngHandle) -> Result<IntervalSet> {
    if *f.dust() != 0.0 {
        return Err(Error::OutOfRange("ordered arrangement needs proper frequencies".into()));
    }
    let order = xi_order(f.p().len(), xi, rng)?;
    let tiles: Vec<f64> = order.arrangement().into_iter().map(|i| f.p()[i]).collect();
    IntervalSet::from_tiles(&tiles)
}

/// `(α, θ)` set as a cross-breed: `beta(1, θ)` stick-breaking pieces `(a, b)`,
/// each filled by an independent `(α, 0)` set mapped onto `[a, 1]` by
/// `x ↦ a + (1-a)x` and cut off at `b`.
///
/// The `(α, 0)` set is GEM(α, 0) in `◁_0` order. Its truncation cap is
/// `eps / (1 - a)`, so each piece leaves at most `eps` absolute mass untracked.
pub fn crossbreed_set(alpha: f64, theta: f64, eps: f64, rng: &mut RngHandle) -> Result<IntervalSet> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParams(format!("cross-breed needs 0 < alpha < 1, got {alpha}")));
    }
    check_theta(theta)?;
    check_eps(eps)?;
    let inner = ExtParams::two_param(alpha, 0.0)?;
    let mut components = Vec::new();
    let mut unresolved = Vec::new();
    let mut a = 0.0f64;
    while 1.0 - a >= eps {
        let v = rng.beta(1.0, theta);
        let b = a + v * (1.0 - a);
        let cap = (eps / (1.0 - a)).min(0.5);
        let (_, f) = gem_sample(&inner, cap, rng)?;
        let set = ordered_arrangement(&f, &Xi::Finite(0.0), rng)?;
        let map = |x: f64| a + (1.0 - a) * x;
        for &(l, r) in set.components() {
            let (l, r) = (map(l), map(r).min(b));
            if l < r {
                components.push((l, r));
            }
        }
        for &(l, r) in set.unresolved() {
            let (l, r) = (map(l), map(r).min(b));
            if l < r {
                unresolved.push((l, r));
            }
        }
        a = b;
    }
    if a < 1.0 {
        unresolved.push((a, 1.0));
    }
    IntervalSet::new(components, unresolved)
}

/// Outcome of [`leftmost_delete`].
#[derive(Debug, Clone, PartialEq)]
pub struct LeftmostDeletion {
    pub size: usize,
    pub remainder: SetPartition,
    /// Sample points that fell in unresolved (truncated) mass.
    pub unresolved_hits: usize,
}

/// Paintbox partition of `n` uniforms by `set`, then deletion of the block in
/// the leftmost occupied interval. Points outside components are singletons
/// positioned at themselves.
pub fn leftmost_delete(set: &IntervalSet, n: usize, rng: &mut RngHandle) -> Result<LeftmostDeletion> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be >= 1".into()));
    }
    // label: (is_component, component index or point index)
    let mut labels = Vec::with_capacity(n);
    let mut positions = Vec::with_capacity(n);
    let mut unresolved_hits = 0;
    for i in 0..n {
        let u = rng.uniform();
        match set.locate(u) {
            Location::Component(c) => {
                labels.push((true, c));
                positions.push(set.components()[c].0);
            }
            other => {
                if other == Location::Unresolved {
                    unresolved_hits += 1;
                }
                labels.push((false, i));
                positions.push(u);
            }
        }
    }
    let leftmost = (0..n)
        .min_by(|&i, &j| positions[i].total_cmp(&positions[j]))
        .expect("n >= 1");
    let partition = SetPartition::from_labels(&labels);
    let block = partition.labels()[leftmost];
    Ok(LeftmostDeletion {
        size: partition.blocks()[block].len(),
        remainder: partition.delete_block(block)?,
        unresolved_hits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deletion::decrement_matrix;
    use crate::scalar::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn at(a: Rational, t: Rational) -> LevyImageMeasure<Rational> {
        LevyImageMeasure::alpha_theta(a, t).unwrap()
    }

    #[test]
    fn laplace_examples() {
        let m = at(r(0, 1), r(2, 1));
        assert_eq!(laplace_exponent(&m, 0.0).unwrap(), 0.0);
        for a in [0.5, 1.0, 3.0, 7.25] {
            assert!((laplace_exponent(&m, a).unwrap() - a / (a + 2.0)).abs() < 1e-13);
        }
        let atom = LevyImageMeasure::atoms(vec![(1.0, 2.5)]).unwrap();
        assert_eq!(laplace_exponent(&atom, 0.0).unwrap(), 0.0);
        assert_eq!(laplace_exponent(&atom, 0.3).unwrap(), 2.5);
        assert!(laplace_exponent(&atom, -1.0).is_err());
        assert!(matches!(
            LevyImageMeasure::alpha_theta(r(1, 1), r(0, 1)),
            Err(Error::DivergentMeasure(_))
        ));
    }

    #[test]
    fn phi_integer_matches_float() {
        for (a, t) in [(r(0, 1), r(1, 1)), (r(1, 2), r(1, 2)), (r(2, 3), r(0, 1)), (r(1, 3), r(5, 2))] {
            let m = at(a, t);
            for n in 1..=8 {
                let exact = phi_n(&m, n).unwrap().to_f64();
                assert!((exact - laplace_exponent(&m, n as f64).unwrap()).abs() < 1e-12);
                let sum = (1..=n).fold(r(0, 1), |acc, k| acc + phi_nm(&m, n, k).unwrap().reduced);
                assert_eq!(sum, phi_n(&m, n).unwrap().reduced);
            }
        }
    }

    #[test]
    fn phi_nm_examples() {
        let m = at(r(0, 1), r(1, 1));
        assert!((phi_nm(&m, 1, 1).unwrap().to_f64() - 0.5).abs() < 1e-14);
        assert!((phi_n(&m, 1).unwrap().to_f64() - 0.5).abs() < 1e-14);
        let atom = LevyImageMeasure::atoms(vec![(r(1, 1), r(1, 1))]).unwrap();
        for n in 1..=5 {
            assert_eq!(phi_nm(&atom, n, n).unwrap().reduced, r(1, 1));
            for k in 1..n {
                assert_eq!(phi_nm(&atom, n, k).unwrap().reduced, r(0, 1));
            }
        }
        let half = at(r(1, 2), r(1, 2));
        let q = decrement_matrix(&ExtParams::ratio(1, 2, 1, 2).unwrap(), 2).unwrap();
        let ratio = phi_nm(&half, 2, 1).unwrap().reduced / phi_n(&half, 2).unwrap().reduced;
        assert_eq!(&ratio, q.get(2, 1).unwrap());
        assert!(phi_nm(&half, 2, 3).is_err());
    }

    #[test]
    fn decrement_from_measure_examples() {
        let q = decrement_from_phi(&at(r(0, 1), r(1, 1)), 2).unwrap();
        assert_eq!(q.get(1, 1), Some(&r(1, 1)));
        assert_eq!(q.row(2).unwrap(), &[r(1, 2), r(1, 2)]);
        let atom = LevyImageMeasure::atoms(vec![(r(1, 2), r(1, 1))]).unwrap();
        let q = decrement_from_phi(&atom, 6).unwrap();
        for n in 1..=6u64 {
            let norm = r(1, 1) - r(1, 2).powi(n as u32);
            for m in 1..=n {
                let expected = binomial::<Rational>(n, m) * r(1, 2).powi(n as u32) / norm.clone();
                assert_eq!(q.get(n as usize, m as usize).unwrap(), &expected);
            }
        }
        let scaled = atom.scaled(&r(7, 3)).unwrap();
        assert_eq!(decrement_from_phi(&scaled, 6).unwrap(), q);
        assert!(decrement_from_phi(&LevyImageMeasure::<Rational>::FiniteAtoms(vec![]), 2).is_err());
    }

    #[test]
    fn closed_form_matches_deletion_kernel() {
        for (an, ad, tn, td) in [(0, 1, 1, 1), (0, 1, 2, 1), (1, 2, 1, 2), (1, 3, 2, 3), (2, 3, 0, 1)] {
            let params = ExtParams::ratio(an, ad, tn, td).unwrap();
            let m = LevyImageMeasure::from_params(&params).unwrap();
            assert_eq!(decrement_from_phi(&m, 12).unwrap(), decrement_matrix(&params, 12).unwrap());
        }
    }

    #[test]
    fn subordinator_path_checks() {
        assert!(SubordinatorPath::new(vec![1.0, 0.5], vec![0.1, 0.2], false).is_err());
        let p = SubordinatorPath::new(vec![1.0], vec![f64::INFINITY], true).unwrap();
        let set = p.interval_set().unwrap();
        assert_eq!(set.components(), &[(0.0, 1.0)]);
        let mut rng = RngHandle::new(4);
        let path = compound_poisson_path(1.5, 1e-6, &mut rng).unwrap();
        let f = path.range_points();
        assert!(f.windows(2).all(|w| w[0] < w[1]));
        assert!(1.0 - f.last().unwrap() < 1e-6);
    }

    #[test]
    fn stick_breaking_set_first_length() {
        let mut rng = RngHandle::new(10);
        let n = 40_000;
        let mean = (0..n)
            .map(|_| stick_breaking_set(3.0, 1e-6, &mut rng).unwrap().lengths()[0])
            .sum::<f64>()
            / n as f64;
        assert!((mean - 0.25).abs() < 0.005);
        let set = stick_breaking_set(3.0, 1e-6, &mut rng).unwrap();
        assert!(set.residual() < 1e-6);
        assert!(stick_breaking_set(0.0, 1e-6, &mut rng).is_err());
    }

    #[test]
    fn arrangement_examples() {
        let mut rng = RngHandle::new(13);
        let whole = FrequencyVector::proper(vec![1.0]).unwrap();
        let set = ordered_arrangement(&whole, &Xi::Finite(1.0), &mut rng).unwrap();
        assert_eq!(set.components(), &[(0.0, 1.0)]);
        let f = FrequencyVector::proper(vec![0.5, 0.3, 0.2]).unwrap();
        let set = ordered_arrangement(&f, &Xi::Infinite, &mut rng).unwrap();
        assert_eq!(set.lengths().len(), 3);
        assert!((set.lengths()[0] - 0.5).abs() < 1e-15 && (set.lengths()[2] - 0.2).abs() < 1e-15);
        let set = ordered_arrangement(&f, &Xi::Finite(0.0), &mut rng).unwrap();
        assert!((set.lengths()[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn leftmost_examples() {
        let mut rng = RngHandle::new(17);
        let whole = IntervalSet::from_tiles(&[1.0]).unwrap();
        let d = leftmost_delete(&whole, 5, &mut rng).unwrap();
        assert_eq!((d.size, d.remainder.n()), (5, 0));
        let set = IntervalSet::from_tiles(&[0.3, 0.7]).unwrap();
        assert_eq!(leftmost_delete(&set, 1, &mut rng).unwrap().size, 1);
        assert!(leftmost_delete(&set, 0, &mut rng).is_err());
        let n = 100_000;
        let both = (0..n).filter(|_| leftmost_delete(&set, 2, &mut rng).unwrap().size == 2).count();
        // m = 2 iff both points share a tile
        assert!((both as f64 / n as f64 - 0.58).abs() < 0.006);
    }

    fn leftmost_law(sample: impl Fn(&mut RngHandle) -> IntervalSet, n: usize, reps: usize, seed: u64) -> Vec<f64> {
        let mut counts = vec![0usize; n + 1];
        let mut rng = RngHandle::new(seed);
        for _ in 0..reps {
            let set = sample(&mut rng);
            counts[leftmost_delete(&set, n, &mut rng).unwrap().size] += 1;
        }
        counts[1..].iter().map(|&c| c as f64 / reps as f64).collect()
    }

    fn assert_close(emp: &[f64], target: &[f64], reps: usize) {
        for (e, t) in emp.iter().zip(target) {
            let se = (t * (1.0 - t) / reps as f64).sqrt();
            assert!((e - t).abs() <= 5.0 * se + 1e-4, "{emp:?} vs {target:?}");
        }
    }

    #[test]
    fn sets_reproduce_decrement_rows() {
        let reps = 30_000;
        let n = 4;
        let q = decrement_matrix(&ExtParams::two_param(0.0, 1.5).unwrap(), n).unwrap();
        let row = q.row(n).unwrap().to_vec();
        let emp = leftmost_law(|rng| stick_breaking_set(1.5, 1e-7, rng).unwrap(), n, reps, 1);
        assert_close(&emp, &row, reps);
        let emp = leftmost_law(|rng| compound_poisson_set(1.5, 1e-7, rng).unwrap(), n, reps, 2);
        assert_close(&emp, &row, reps);

        let q = decrement_matrix(&ExtParams::two_param(1.0 / 3.0, 1.0).unwrap(), n).unwrap();
        let emp = leftmost_law(|rng| crossbreed_set(1.0 / 3.0, 1.0, 1e-5, rng).unwrap(), n, reps, 3);
        assert_close(&emp, q.row(n).unwrap(), reps);
    }

    #[test]
    fn crossbreed_mass() {
        let mut rng = RngHandle::new(23);
        for _ in 0..50 {
            let set = crossbreed_set(1.0 / 3.0, 2.0, 1e-6, &mut rng).unwrap();
            assert!((set.total_length() + set.residual() - 1.0).abs() < 1e-9);
            assert!(set.residual() < 1e-4);
        }
    }
}
