//! Closed-form constants and the local-to-global recursion.
//!
//! Symbols follow the usual names: `c` is a linear isoperimetric constant in
//! `(0, 1]`, `a` the diagram size scale, `k` a face budget, `beta` a local
//! isoperimetric constant, `d` the density and `eps`, `eps_prime` slacks.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("alpha is defined only for C in (0, 1), got {0}")]
    AlphaUndefined(f64),
    #[error("isoperimetric constant must lie in (0, 1], got {0}")]
    ConstantOutOfRange(f64),
    #[error("1 - 2d - eps = {0} is not positive")]
    NonPositiveMargin(f64),
    #[error("density must be positive, got {0}")]
    NonPositiveDensity(f64),
    #[error("size scale must be positive, got {0}")]
    NonPositiveScale(f64),
}

/// `α = 1/log(1/(1 − C))`, the depth constant of a diagram whose
/// subdiagrams satisfy `|∂D| ≥ Cℓ|D|`. Satisfies `α ≤ 1/C`.
pub fn alpha(c: f64) -> Result<f64, BoundsError> {
    if !(c > 0.0 && c < 1.0) {
        return Err(BoundsError::AlphaUndefined(c));
    }
    Ok(-1.0 / (-c).ln_1p())
}

/// `α`, extended by its limit 0 at `C = 1`.
fn alpha_closed(c: f64) -> Result<f64, BoundsError> {
    check_constant(c)?;
    if c == 1.0 {
        Ok(0.0)
    } else {
        alpha(c)
    }
}

fn check_constant(c: f64) -> Result<(), BoundsError> {
    if c > 0.0 && c <= 1.0 {
        Ok(())
    } else {
        Err(BoundsError::ConstantOutOfRange(c))
    }
}

/// Face budget `3000/C⁵`.
pub fn min_k(c: f64) -> Result<f64, BoundsError> {
    check_constant(c)?;
    Ok(3000.0 / c.powi(5))
}

/// Size scale `3000/C⁴`.
pub fn min_a(c: f64) -> Result<f64, BoundsError> {
    check_constant(c)?;
    Ok(3000.0 / c.powi(4))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SideConditions {
    pub c: f64,
    pub a: f64,
    pub alpha: f64,
    /// `α log(7A/6C)`.
    pub cut_term: f64,
    /// `2α log(7A/6C) ≤ A/8`: both halves of a cut stay below scale `A`.
    pub halves_fit: bool,
    /// `4α log(7A/6C) ≤ √A`: the cut costs at most `ℓ√A` boundary.
    pub cut_is_cheap: bool,
}

impl SideConditions {
    pub fn hold(&self) -> bool {
        self.halves_fit && self.cut_is_cheap
    }
}

/// The two conditions the one-step lemma places on `A`, evaluated at `a`.
pub fn side_conditions(c: f64, a: f64) -> Result<SideConditions, BoundsError> {
    let alpha = alpha_closed(c)?;
    if a <= 0.0 {
        return Err(BoundsError::NonPositiveScale(a));
    }
    let cut_term = alpha * (7.0 * a / (6.0 * c)).ln();
    Ok(SideConditions { c, a, alpha, cut_term, halves_fit: 2.0 * cut_term <= a / 8.0, cut_is_cheap: 4.0 * cut_term <= a.sqrt() })
}

/// One indexing of the recursion `β_k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaSequence {
    /// `β_0, …, β_{k_max}`.
    pub values: Vec<f64>,
    pub infimum: f64,
    /// Total deficit of the infinite recursion, `β − lim β_k`.
    pub limit_deficit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BootstrapReport {
    pub beta: f64,
    pub a: f64,
    /// `β_0 = β − 1/√A`, `β_{k+1} = β_k − 1/√(A(7/6)^k)`: the first step is
    /// charged twice, total deficit `(1 + 1/(1 − √(6/7)))/√A ≈ 14.48/√A`.
    pub as_displayed: BetaSequence,
    /// `β_k = β − Σ_{j≤k} 1/√(A(7/6)^j)`: step `k` works at scale
    /// `A(7/6)^k`, total deficit `1/(1 − √(6/7))/√A ≈ 13.48/√A`.
    pub lemma_scale: BetaSequence,
    /// `β − 14/√A`.
    pub claimed_bound: f64,
    pub as_displayed_holds: bool,
    pub lemma_scale_holds: bool,
}

/// `1/(1 − √(6/7))`, the sum of `(6/7)^{j/2}` over `j ≥ 0`.
pub fn geometric_deficit() -> f64 {
    1.0 / (1.0 - (6.0f64 / 7.0).sqrt())
}

pub fn bootstrap_beta(beta: f64, a: f64, k_max: usize) -> Result<BootstrapReport, BoundsError> {
    if a <= 0.0 {
        return Err(BoundsError::NonPositiveScale(a));
    }
    let root = a.sqrt();
    let step = |j: usize| 1.0 / (a * (7.0f64 / 6.0).powi(j as i32)).sqrt();
    let mut displayed = vec![beta - 1.0 / root];
    let mut lemma = vec![beta - 1.0 / root];
    for k in 0..k_max {
        displayed.push(displayed[k] - step(k));
        lemma.push(lemma[k] - step(k + 1));
    }
    let seq = |values: Vec<f64>, limit_deficit: f64| BetaSequence {
        infimum: values.iter().copied().fold(f64::INFINITY, f64::min),
        values,
        limit_deficit,
    };
    let as_displayed = seq(displayed, (1.0 + geometric_deficit()) / root);
    let lemma_scale = seq(lemma, geometric_deficit() / root);
    let claimed_bound = beta - 14.0 / root;
    Ok(BootstrapReport {
        beta,
        a,
        as_displayed_holds: as_displayed.infimum >= claimed_bound,
        lemma_scale_holds: lemma_scale.infimum >= claimed_bound,
        as_displayed,
        lemma_scale,
        claimed_bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MainAssembly {
    pub c: f64,
    pub eps: f64,
    /// Smallest `K` with `K ≥ 3000/C⁵` and `14/√(KC) ≤ ε/2`.
    pub k: f64,
    /// `14/√(KC)` at that `K`.
    pub final_deficit: f64,
}

/// Face budget for which the local constant `1 − 2d − ε/2` propagates to
/// `1 − 2d − ε` on all diagrams.
pub fn main_assembly(c: f64, eps: f64) -> Result<MainAssembly, BoundsError> {
    let floor = min_k(c)?;
    let k = floor.max((28.0 / eps).powi(2) / c);
    Ok(MainAssembly { c, eps, k, final_deficit: 14.0 / (k * c).sqrt() })
}

/// Hyperbolicity constant bound `12ℓ/(1 − 2d − ε)²`.
pub fn delta_bound(ell: f64, d: f64, eps: f64) -> Result<f64, BoundsError> {
    let margin = 1.0 - 2.0 * d - eps;
    if margin <= 0.0 {
        return Err(BoundsError::NonPositiveMargin(margin));
    }
    Ok(12.0 * ell / (margin * margin))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreendlingerThresholds {
    /// `ℓ/2 + (ℓ/2)(1 − 5d − ε)` consecutive edges.
    pub consecutive: f64,
    /// `ℓ(1 − 5d/2 − ε)` edges, not necessarily consecutive.
    pub total: f64,
}

pub fn greendlinger_threshold(ell: f64, d: f64, eps: f64) -> GreendlingerThresholds {
    GreendlingerThresholds {
        consecutive: ell / 2.0 + ell / 2.0 * (1.0 - 5.0 * d - eps),
        total: ell * (1.0 - 5.0 * d / 2.0 - eps),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CounterexampleMargin {
    /// `|∂D| = 6(1 − 2d)ℓ + 8εℓ − 2` for the 6-face diagram.
    pub boundary: f64,
    /// `7(1 − 2d − ε′)ℓ`, the lower bound for the 7-face extension.
    pub extension_lower_bound: f64,
    /// `extension_lower_bound − boundary`; positive means the extension is impossible.
    pub gap: f64,
    pub contradiction: bool,
    /// The `ε` at which the gap vanishes: `((1 − 2d) − 7ε′ + 2/ℓ)/8`.
    pub eps_star: f64,
}

pub fn counterexample_margin(ell: f64, d: f64, eps: f64, eps_prime: f64) -> Result<CounterexampleMargin, BoundsError> {
    if d <= 0.0 {
        return Err(BoundsError::NonPositiveDensity(d));
    }
    let boundary = 6.0 * (1.0 - 2.0 * d) * ell + 8.0 * eps * ell - 2.0;
    let extension_lower_bound = 7.0 * (1.0 - 2.0 * d - eps_prime) * ell;
    let gap = extension_lower_bound - boundary;
    Ok(CounterexampleMargin {
        boundary,
        extension_lower_bound,
        gap,
        contradiction: gap > 0.0,
        eps_star: ((1.0 - 2.0 * d) - 7.0 * eps_prime + 2.0 / ell) / 8.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_values() {
        assert_eq!(alpha(1.0 - (-1.0f64).exp()).unwrap(), 1.0);
        assert!((alpha(0.5).unwrap() - std::f64::consts::LOG2_E).abs() < 1e-15);
        assert!(alpha(1.0).is_err());
        assert!(alpha(0.0).is_err());
    }

    #[test]
    fn scale_constants() {
        assert_eq!(min_k(1.0).unwrap(), 3000.0);
        assert_eq!(min_a(1.0).unwrap(), 3000.0);
        assert_eq!(min_k(0.5).unwrap(), 96000.0);
        assert!(side_conditions(1.0, 3000.0).unwrap().hold());
    }

    #[test]
    fn deficits() {
        assert!((geometric_deficit() - 13.4807).abs() < 1e-4);
        let r = bootstrap_beta(0.5, 1e4, 400).unwrap();
        assert!(r.lemma_scale_holds);
        assert!(!r.as_displayed_holds);
        assert!((r.as_displayed.limit_deficit * 100.0 - 14.4807).abs() < 1e-4);
    }

    #[test]
    fn delta_and_thresholds() {
        assert_eq!(delta_bound(100.0, 0.25, 0.0).unwrap(), 4800.0);
        assert_eq!(delta_bound(7.0, 0.0, 0.0).unwrap(), 84.0);
        assert!(delta_bound(10.0, 0.5, 0.0).is_err());
        assert_eq!(greendlinger_threshold(100.0, 0.1, 0.0).consecutive, 75.0);
        assert_eq!(greendlinger_threshold(10.0, 0.2, 0.0).consecutive, 5.0);
    }

    #[test]
    fn margin_example() {
        let m = counterexample_margin(1000.0, 0.25, 0.001, 0.001).unwrap();
        assert!(m.contradiction);
        // 7(1 − 0.5 − 0.001)·1000 = 3493 against 3000 + 8 − 2.
        assert!((m.gap - (3493.0 - 3006.0)).abs() < 1e-9);
        assert!(counterexample_margin(10.0, 0.0, 0.0, 0.0).is_err());
    }
}
