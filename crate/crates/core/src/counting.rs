//! Counting functions: the Nevanlinna sum over preimages, its restricted
//! variant on |Im s| < 1, the weighted variant with exponent 2 + alpha, and
//! the height-averaged mean variant, together with an empirical estimator
//! for the uniform restricted bound and a little-o criterion checker.
//!
//! Preimages with Re s below the floor 1e-7 are not searched (the argument
//! principle degenerates on the boundary); they contribute at most 1e-7 per
//! root to any of the sums.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::character::Character;
use crate::error::{Error, Result};
use crate::preimages::{find_preimages, Rectangle, RootSet};
use crate::scalar::{real, Real, C};
use crate::symbol::{ClassTag, Symbol};

/// Lower sigma cutoff for root searches.
pub fn sigma_floor<T: Real>() -> T {
    real(1e-7)
}

/// Slack past the certified right edge Re w / c0. Any positive slack keeps
/// every preimage inside the window; a generous one keeps the saturating
/// root of linear symbols well away from the contour, where the winding
/// quadrature is cheap.
fn edge_slack<T: Real>() -> T {
    real(1e-3)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CountKind<T: Real> {
    /// Sum of Re s over all preimages with |Im s| < t_trunc.
    Full { t_trunc: T },
    /// Sum of Re s over preimages with |Im s| < 1.
    Restricted,
    /// Sum of (Re s)^{2+alpha} over preimages with |Im s| < 1.
    Weighted { alpha: T },
    /// (1/t_cap) sum of (Re s)^{2+alpha} over |Im s| < t_cap, Re s > sigma0.
    Mean { sigma0: T, t_cap: T },
}

impl<T: Real> CountKind<T> {
    pub fn label(&self) -> String {
        match self {
            CountKind::Full { t_trunc } => format!("full({t_trunc})"),
            CountKind::Restricted => "restricted".into(),
            CountKind::Weighted { alpha } => format!("weighted({alpha})"),
            CountKind::Mean { sigma0, t_cap } => format!("mean({sigma0},{t_cap})"),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TruncationNote<T: Real> {
    /// Window actually searched.
    pub window: Rectangle<T>,
    /// Growth of the value from the half window to the full window, when the
    /// window is a truncation of an unbounded one.
    pub tail_increment: Option<T>,
    pub root_count: usize,
    pub winding: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CountingValue<T: Real> {
    pub value: T,
    pub kind: CountKind<T>,
    pub truncation: TruncationNote<T>,
}

fn require_positive_re<T: Real>(w: C<T>) -> Result<()> {
    if !(w.re > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "target must lie in the right half-plane, got Re w = {}",
            w.re
        )));
    }
    Ok(())
}

/// Right edge of the search window for positive characteristic: preimages
/// satisfy Re s <= Re w / c0 because Re phi >= c0 Re s on the class.
fn positive_char_sigma_hi<T: Real>(phi: &Symbol<T>, w: C<T>, slack: T) -> T {
    w.re / T::from_u32(phi.characteristic()).unwrap() + slack
}

/// Adaptive right edge for characteristic zero: the first sigma at which the
/// coefficient tail certifies |phi(s) - phi(+inf)| < |w - phi(+inf)|.
fn adaptive_sigma_hi<T: Real>(phi: &Symbol<T>, w: C<T>) -> Result<T> {
    let a1 = phi.psi().constant_term();
    let dist = (w - a1).norm();
    if dist <= real(1e-14) {
        return Err(Error::AdaptiveBoundFailure);
    }
    let mut hi = T::one();
    for _ in 0..64 {
        if phi.psi().tail_bound(hi) < dist {
            return Ok(hi);
        }
        hi = hi + hi;
    }
    Err(Error::AdaptiveBoundFailure)
}

fn search_window<T: Real>(phi: &Symbol<T>, w: C<T>, t_lo: T, t_hi: T, sigma_min: Option<T>) -> Result<Option<Rectangle<T>>> {
    let slack = edge_slack::<T>();
    let sigma_hi = if phi.is_positive_characteristic() {
        positive_char_sigma_hi(phi, w, slack)
    } else {
        adaptive_sigma_hi(phi, w)?
    };
    let sigma_lo = sigma_min
        .unwrap_or_else(sigma_floor::<T>)
        .min(sigma_hi * real(0.5));
    if !(sigma_lo < sigma_hi) || !(sigma_lo > T::zero()) {
        return Ok(None);
    }
    Ok(Some(Rectangle::new(sigma_lo, sigma_hi, t_lo, t_hi)?))
}

fn roots_in<T: Real>(phi: &Symbol<T>, w: C<T>, window: &Rectangle<T>) -> Result<RootSet<T>> {
    find_preimages(phi, w, window, real(1e-8))
}

/// Full Nevanlinna counting value: sum of Re s with multiplicity over
/// preimages with |Im s| < t_trunc. Requires positive characteristic, which
/// confines the preimages to Re s <= Re w / c0.
pub fn nevanlinna_full<T: Real>(phi: &Symbol<T>, w: C<T>, t_trunc: T) -> Result<CountingValue<T>> {
    if phi.class() != ClassTag::Gge1 {
        return Err(Error::WrongClass { expected: "G>=1" });
    }
    require_positive_re(w)?;
    if !(t_trunc > T::zero()) {
        return Err(Error::InvalidParameter("t_trunc must be positive".into()));
    }
    let window = match search_window(phi, w, -t_trunc, t_trunc, None)? {
        Some(win) => win,
        None => {
            return Ok(zero_value(
                CountKind::Full { t_trunc },
                Rectangle::new(sigma_floor(), w.re.max(real(1e-6)), -t_trunc, t_trunc)?,
            ))
        }
    };
    let set = roots_in(phi, w, &window)?;
    let half = t_trunc * real(0.5);
    let value = set.sum_over_roots(|s| s.re);
    let value_half = set
        .roots
        .iter()
        .filter(|r| r.location.im.abs() < half)
        .map(|r| r.location.re * T::from_u32(r.multiplicity).unwrap())
        .fold(T::zero(), |a, b| a + b);
    Ok(CountingValue {
        value,
        kind: CountKind::Full { t_trunc },
        truncation: TruncationNote {
            window: set.window,
            tail_increment: Some(value - value_half),
            root_count: set.roots.len(),
            winding: set.total_winding,
        },
    })
}

fn zero_value<T: Real>(kind: CountKind<T>, window: Rectangle<T>) -> CountingValue<T> {
    CountingValue {
        value: T::zero(),
        kind,
        truncation: TruncationNote {
            window,
            tail_increment: None,
            root_count: 0,
            winding: 0,
        },
    }
}

/// Restricted counting value: sum of Re s over preimages with |Im s| < 1
/// exactly. The window is finite, so there is no truncation error.
pub fn restricted_counting<T: Real>(phi: &Symbol<T>, w: C<T>) -> Result<CountingValue<T>> {
    require_positive_re(w)?;
    let window = match search_window(phi, w, -T::one(), T::one(), None)? {
        Some(win) => win,
        None => {
            return Ok(zero_value(
                CountKind::Restricted,
                Rectangle::new(sigma_floor(), w.re.max(real(1e-6)), -T::one(), T::one())?,
            ))
        }
    };
    let set = roots_in(phi, w, &window)?;
    Ok(CountingValue {
        value: set.sum_over_roots(|s| s.re),
        kind: CountKind::Restricted,
        truncation: TruncationNote {
            window: set.window,
            tail_increment: None,
            root_count: set.roots.len(),
            winding: set.total_winding,
        },
    })
}

/// Weighted counting value for the Bergman scale: sum of (Re s)^{2+alpha}
/// over the restricted window. At alpha = -1 this coincides with the
/// restricted counting value.
pub fn weighted_counting<T: Real>(phi: &Symbol<T>, w: C<T>, alpha: T) -> Result<CountingValue<T>> {
    require_positive_re(w)?;
    if !(alpha >= -T::one()) {
        return Err(Error::InvalidParameter(format!(
            "weighted counting needs alpha >= -1, got {alpha}"
        )));
    }
    let exponent = real::<T>(2.0) + alpha;
    let window = match search_window(phi, w, -T::one(), T::one(), None)? {
        Some(win) => win,
        None => {
            return Ok(zero_value(
                CountKind::Weighted { alpha },
                Rectangle::new(sigma_floor(), w.re.max(real(1e-6)), -T::one(), T::one())?,
            ))
        }
    };
    let set = roots_in(phi, w, &window)?;
    Ok(CountingValue {
        value: set.sum_over_roots(|s| s.re.powf(exponent)),
        kind: CountKind::Weighted { alpha },
        truncation: TruncationNote {
            window: set.window,
            tail_increment: None,
            root_count: set.roots.len(),
            winding: set.total_winding,
        },
    })
}

/// Mean counting value: (1/t_cap) sum of (Re s)^{2+alpha} over preimages
/// with |Im s| < t_cap and Re s > sigma0. The right edge of the window is
/// found adaptively from the coefficient tail bound; the value is reported
/// together with the increment from the half-height window.
pub fn mean_counting<T: Real>(
    phi: &Symbol<T>,
    sigma0: T,
    t_cap: T,
    w: C<T>,
    alpha: T,
) -> Result<CountingValue<T>> {
    require_positive_re(w)?;
    if !(sigma0 > T::zero()) || !(t_cap > T::zero()) {
        return Err(Error::InvalidParameter(
            "mean counting needs sigma0 > 0 and t_cap > 0".into(),
        ));
    }
    if !(alpha > -T::one()) {
        return Err(Error::InvalidParameter(format!(
            "mean counting needs alpha > -1, got {alpha}"
        )));
    }
    let kind = CountKind::Mean { sigma0, t_cap };
    let sigma_hi = if phi.is_positive_characteristic() {
        positive_char_sigma_hi(phi, w, edge_slack())
    } else {
        adaptive_sigma_hi(phi, w)?
    };
    if sigma_hi <= sigma0 {
        return Ok(zero_value(
            kind,
            Rectangle::new(sigma0, sigma0 + T::one(), -t_cap, t_cap)?,
        ));
    }
    let window = Rectangle::new(sigma0, sigma_hi, -t_cap, t_cap)?;
    let set = roots_in(phi, w, &window)?;
    let exponent = real::<T>(2.0) + alpha;
    let value = set.sum_over_roots(|s| s.re.powf(exponent)) / t_cap;
    let half = t_cap * real(0.5);
    let value_half = set
        .roots
        .iter()
        .filter(|r| r.location.im.abs() < half)
        .map(|r| r.location.re.powf(exponent) * T::from_u32(r.multiplicity).unwrap())
        .fold(T::zero(), |a, b| a + b)
        / half;
    Ok(CountingValue {
        value,
        kind,
        truncation: TruncationNote {
            window: set.window,
            tail_increment: Some(value - value_half),
            root_count: set.roots.len(),
            winding: set.total_winding,
        },
    })
}

/// Empirical lower estimate of the best constant C in the uniform bound
/// N(w) <= C Re w / (1 + (Im w)^2): the maximum of the inverted ratio over a
/// grid of targets and a sample of characters.
pub fn estimate_bound_constant<T: Real>(
    phi: &Symbol<T>,
    w_grid: &[C<T>],
    chi_samples: &[Character<T>],
) -> Result<T> {
    if phi.class() != ClassTag::Gge1 {
        return Err(Error::WrongClass { expected: "G>=1" });
    }
    if w_grid.is_empty() || chi_samples.is_empty() {
        return Err(Error::InvalidParameter(
            "bound-constant estimation needs nonempty target and character grids".into(),
        ));
    }
    let c0 = T::from_u32(phi.characteristic()).unwrap();
    for &w in w_grid {
        require_positive_re(w)?;
        if !(w.re < c0) {
            return Err(Error::InvalidParameter(format!(
                "bound-constant grid requires Re w < c0, got Re w = {}",
                w.re
            )));
        }
    }
    let pairs: Vec<(usize, usize)> = (0..chi_samples.len())
        .flat_map(|i| (0..w_grid.len()).map(move |j| (i, j)))
        .collect();
    let ratios = pairs
        .par_iter()
        .map(|&(i, j)| {
            let twisted = phi.twist(&chi_samples[i]);
            let w = w_grid[j];
            let n = restricted_counting(&twisted, w)?;
            Ok(n.value * (T::one() + w.im * w.im) / w.re)
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(ratios.into_iter().fold(T::zero(), T::max))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LittleOParams<T: Real> {
    /// Decreasing sequence of Re w values to probe.
    pub sigmas: Vec<T>,
    /// Imaginary parts probed at each sigma: a uniform grid on [-v_max, v_max].
    pub v_max: T,
    pub v_count: usize,
    /// Characters sampled for the uniform variant (0 = plain criterion).
    pub chi_count: usize,
    pub t_trunc: T,
    /// Final-ratio threshold for the consistent verdict.
    pub threshold: T,
}

impl<T: Real> Default for LittleOParams<T> {
    fn default() -> Self {
        LittleOParams {
            sigmas: (3..=10).map(|k| real::<T>(0.5).powi(k)).collect(),
            v_max: real(10.0),
            v_count: 7,
            chi_count: 0,
            t_trunc: real(32.0),
            threshold: real(0.05),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LittleOVerdict {
    ConsistentWithLittleO,
    Violated,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LittleOReport<T: Real> {
    /// (sigma, max over the probe grid of N(w) / Re w) rows, sigma decreasing.
    pub ratios: Vec<(T, T)>,
    pub verdict: LittleOVerdict,
    pub threshold: T,
    /// True when characters beyond the trivial one were sampled; the uniform
    /// claim is only ever sampled, never proven.
    pub sampled_uniform: bool,
}

/// Probe the little-o criterion: R(sigma) = max over targets with
/// Re w = sigma (and optionally over sampled characters) of the full
/// counting value divided by Re w.
pub fn verify_little_o<T: Real>(
    phi: &Symbol<T>,
    params: &LittleOParams<T>,
) -> Result<LittleOReport<T>> {
    if phi.class() != ClassTag::Gge1 {
        return Err(Error::WrongClass { expected: "G>=1" });
    }
    if params.sigmas.is_empty() || params.v_count == 0 {
        return Err(Error::InvalidParameter("empty little-o probe grid".into()));
    }
    let mut chis = vec![Character::trivial()];
    if params.chi_count > 0 {
        chis.extend(crate::character::halton_characters(
            &phi.psi().support_primes(),
            params.chi_count,
        ));
    }
    let symbols: Vec<Symbol<T>> = chis.iter().map(|chi| phi.twist(chi)).collect();
    let mut ratios = Vec::with_capacity(params.sigmas.len());
    for &sigma in &params.sigmas {
        let targets: Vec<C<T>> = (0..params.v_count)
            .map(|j| {
                let frac = T::from_usize(j).unwrap() / T::from_usize(params.v_count - 1).unwrap();
                C::new(sigma, -params.v_max + (params.v_max + params.v_max) * frac)
            })
            .collect();
        let pairs: Vec<(usize, usize)> = (0..symbols.len())
            .flat_map(|i| (0..targets.len()).map(move |j| (i, j)))
            .collect();
        let values = pairs
            .par_iter()
            .map(|&(i, j)| {
                let n = nevanlinna_full(&symbols[i], targets[j], params.t_trunc)?;
                Ok(n.value / targets[j].re)
            })
            .collect::<Result<Vec<T>>>()?;
        let r = values.into_iter().fold(T::zero(), T::max);
        ratios.push((sigma, r));
    }

    let max_ratio = ratios.iter().map(|&(_, r)| r).fold(T::zero(), T::max);
    let last = ratios.last().unwrap().1;
    let slack = real::<T>(1.1);
    let trending_down = ratios
        .windows(2)
        .all(|pair| pair[1].1 <= pair[0].1 * slack + real(1e-12));
    let verdict = if last < params.threshold && trending_down {
        LittleOVerdict::ConsistentWithLittleO
    } else if last >= params.threshold && last >= max_ratio * real(0.9) {
        LittleOVerdict::Violated
    } else {
        LittleOVerdict::Inconclusive
    };
    Ok(LittleOReport {
        ratios,
        verdict,
        threshold: params.threshold,
        sampled_uniform: params.chi_count > 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::DirichletPolynomial;

    fn c(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    fn symbol(c0: u32, terms: &[(u64, f64)]) -> Symbol<f64> {
        Symbol::assume(c0, DirichletPolynomial::from_real_terms(terms.iter().copied()))
    }

    #[test]
    fn full_counting_saturates_linear_symbol() {
        // phi = c0 s has the single preimage w / c0, so the value is Re w / c0
        let phi = symbol(2, &[]);
        for &w in &[c(0.2, 0.0), c(0.45, 7.0), c(0.01, -3.0)] {
            let n = nevanlinna_full(&phi, w, 64.0).unwrap();
            assert!(
                (n.value - w.re / 2.0).abs() < 1e-10,
                "expected saturation at {w}"
            );
        }
    }

    #[test]
    fn full_counting_empty_for_shift() {
        let phi = symbol(1, &[(1, 1.0)]);
        let n = nevanlinna_full(&phi, c(0.5, 0.0), 64.0).unwrap();
        assert_eq!(n.value, 0.0);
        assert_eq!(n.truncation.root_count, 0);
    }

    #[test]
    fn full_counting_respects_nc1_cap() {
        let phi = symbol(1, &[(1, 1.0), (2, -1.0)]);
        let w = c(0.2, 0.0);
        let n = nevanlinna_full(&phi, w, 40.0).unwrap();
        assert!(n.value <= 0.2 + 1e-8, "(NC1) violated: {}", n.value);
        assert!(n.value > 0.0, "the symbol does attain w = 0.2");
        assert!(n.truncation.tail_increment.is_some());
    }

    #[test]
    fn full_counting_rejects_zero_characteristic() {
        let phi = symbol(0, &[(1, 2.5), (2, -1.0), (3, -1.0)]);
        assert!(matches!(
            nevanlinna_full(&phi, c(1.0, 0.0), 8.0),
            Err(Error::WrongClass { .. })
        ));
    }

    #[test]
    fn restricted_window_is_sharp() {
        let phi = symbol(2, &[]);
        // preimage 0.25 + 1.5i has |Im| >= 1: excluded
        let n = restricted_counting(&phi, c(0.5, 3.0)).unwrap();
        assert_eq!(n.value, 0.0);
        // preimage 0.25 inside
        let n = restricted_counting(&phi, c(0.5, 0.0)).unwrap();
        assert!((n.value - 0.25).abs() < 1e-10);
    }

    #[test]
    fn weighted_counting_examples() {
        let phi = symbol(2, &[]);
        let n = weighted_counting(&phi, c(0.5, 0.0), 0.0).unwrap();
        assert!((n.value - 0.0625).abs() < 1e-10);

        let shift = symbol(1, &[(1, 1.0)]);
        let n = weighted_counting(&shift, c(0.3, 0.0), 0.7).unwrap();
        assert_eq!(n.value, 0.0);
    }

    #[test]
    fn weighted_at_minus_one_is_restricted() {
        let phi = symbol(1, &[(1, 1.0), (2, -1.0)]);
        for &w in &[c(0.3, 0.2), c(0.15, -0.4)] {
            let a = weighted_counting(&phi, w, -1.0).unwrap().value;
            let b = restricted_counting(&phi, w).unwrap().value;
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn restricted_below_full() {
        let phi = symbol(1, &[(1, 1.0), (2, -1.0)]);
        for &w in &[c(0.25, 0.0), c(0.1, 0.5)] {
            let full = nevanlinna_full(&phi, w, 4.0).unwrap().value;
            let restricted = restricted_counting(&phi, w).unwrap().value;
            assert!(restricted <= full + 1e-10);
        }
    }

    #[test]
    fn mean_counting_constructed_preimage() {
        // Remark symbol: w = phi(2) has the preimage s = 2
        let phi = symbol(0, &[(1, 2.5), (2, -1.0), (3, -1.0)]);
        let w = phi.eval(c(2.0, 0.0));
        let t_cap = 8.0;
        let n = mean_counting(&phi, 0.05, t_cap, w, 0.0).unwrap();
        assert!(n.value >= 4.0 / t_cap - 1e-9, "value {}", n.value);
        let found = n.truncation.root_count >= 1;
        assert!(found);
    }

    #[test]
    fn mean_counting_out_of_range_target() {
        let phi = symbol(0, &[(1, 2.5), (2, -1.0), (3, -1.0)]);
        // Re w beyond 2.5 + 2: unattainable
        let n = mean_counting(&phi, 0.01, 8.0, c(5.0, 0.0), 0.0).unwrap();
        assert_eq!(n.value, 0.0);
    }

    #[test]
    fn mean_counting_pole_at_infinity_value() {
        let phi = symbol(0, &[(1, 2.5), (2, -1.0), (3, -1.0)]);
        assert!(matches!(
            mean_counting(&phi, 0.01, 8.0, c(2.5, 0.0), 0.0),
            Err(Error::AdaptiveBoundFailure)
        ));
    }

    #[test]
    fn bound_constant_linear_symbol() {
        let phi = symbol(2, &[]);
        let grid: Vec<C<f64>> = (0..5)
            .flat_map(|i| {
                (0..5).map(move |j| c(0.05 + 0.08 * i as f64, -4.0 + 2.0 * j as f64))
            })
            .collect();
        let chis = vec![Character::trivial()];
        let estimate = estimate_bound_constant(&phi, &grid, &chis).unwrap();
        // closed form: sup over |v| < c0 of (1 + v^2)/c0 with c0 = 2
        assert!(estimate <= (1.0 + 4.0) / 2.0 + 1e-9);
        assert!(estimate > 0.0);
    }

    #[test]
    fn bound_constant_rejects_empty_grids() {
        let phi = symbol(2, &[]);
        assert!(estimate_bound_constant(&phi, &[], &[Character::trivial()]).is_err());
        assert!(estimate_bound_constant(&phi, &[c(0.3, 0.0)], &[]).is_err());
    }

    #[test]
    fn little_o_violated_for_linear_symbol() {
        let phi = symbol(2, &[]);
        let params = LittleOParams {
            sigmas: vec![0.125, 0.0625, 0.03125],
            v_max: 2.0,
            v_count: 3,
            t_trunc: 8.0,
            ..LittleOParams::default()
        };
        let report = verify_little_o(&phi, &params).unwrap();
        assert_eq!(report.verdict, LittleOVerdict::Violated);
        for &(_, r) in &report.ratios {
            assert!((r - 0.5).abs() < 1e-9, "exact ratio is 1/2, got {r}");
        }
    }

    #[test]
    fn little_o_consistent_for_shift() {
        let phi = symbol(1, &[(1, 1.0)]);
        let params = LittleOParams {
            sigmas: vec![0.125, 0.0625, 0.03125],
            v_max: 2.0,
            v_count: 3,
            t_trunc: 8.0,
            ..LittleOParams::default()
        };
        let report = verify_little_o(&phi, &params).unwrap();
        assert_eq!(report.verdict, LittleOVerdict::ConsistentWithLittleO);
        for &(_, r) in &report.ratios {
            assert_eq!(r, 0.0);
        }
    }

    #[test]
    fn twist_covariance_of_preimages() {
        // characteristic zero: phi_chi(z - i tau) = phi(z) for the
        // vertical-translate character, so root sets shift by -i tau
        let phi = symbol(0, &[(1, 2.5), (2, -1.0), (3, -1.0)]);
        let tau = 0.691;
        let chi = Character::vertical_translate(&[2, 3], tau);
        let twisted = phi.twist(&chi);
        let w = phi.eval(c(0.8, 0.3));
        let window = Rectangle::new(0.05, 3.0, -2.0, 2.0).unwrap();
        let base = find_preimages(&phi, w, &window, 1e-8).unwrap();
        let shifted_window = Rectangle::new(0.05, 3.0, -2.0 - tau, 2.0 - tau).unwrap();
        let twisted_set = find_preimages(&twisted, w, &shifted_window, 1e-8).unwrap();
        assert_eq!(base.roots.len(), twisted_set.roots.len());
        for r in &base.roots {
            let moved = r.location - c(0.0, tau);
            assert!(
                twisted_set
                    .roots
                    .iter()
                    .any(|t| (t.location - moved).norm() < 1e-8),
                "missing shifted root {moved}"
            );
        }

        // positive characteristic: the same identity holds with the target
        // shifted by i c0 tau
        let phi = symbol(1, &[(1, 1.0), (2, -1.0)]);
        let chi = Character::vertical_translate(&[2], tau);
        let twisted = phi.twist(&chi);
        let w = c(0.3, 0.1);
        let base = find_preimages(&phi, c(w.re, w.im + tau), &window, 1e-8).unwrap();
        let twisted_set = find_preimages(&twisted, w, &shifted_window, 1e-8).unwrap();
        assert_eq!(base.roots.len(), twisted_set.roots.len());
        for r in &base.roots {
            let moved = r.location - c(0.0, tau);
            assert!(twisted_set
                .roots
                .iter()
                .any(|t| (t.location - moved).norm() < 1e-8));
        }
    }
}
