//! The derivation a couple induces on its Hahn series field.
//!
//! A monomial derives through the psi map of the couple,
//!
//! ```text
//! D(t^g) = sum over the support of g of  lambda_p * g_p * t^(g + psi_hat(p))
//! ```
//!
//! extended linearly to series.  The slopes `lambda_p` are strictly
//! negative rationals, one per chain point class with a shared default, so
//! the leading behaviour of a derivative is pinned down exactly: the
//! valuation of `D(a)` is `v(a) + psi(v(a))` whenever that makes sense.
//!
//! The checks in this module never trust the formula they are checking: the
//! valuation identity is confirmed on sampled series against independently
//! computed leading data, the domination inequality is swept over every
//! monomial pair in the window before sampling, and [`induced_couple`]
//! recovers the psi map from monomial derivatives by exact division and
//! compares it with the one the configuration was built from.

use num::{BigRational, One, Signed};
use thiserror::Error;

use std::collections::BTreeMap;

use crate::chain::{ChainPoint, Window};
use crate::couple::PsiMap;
use crate::group::GroupElement;
use crate::sample::Sampler;
use crate::series::{invert_truncated, truncate, Series, SeriesError, TruncatedSeries};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DerivationError {
    #[error("the zero series has no logarithmic derivative")]
    ZeroSeries,
    #[error("logarithmic derivatives require a nonzero valuation")]
    ZeroValuation,
    #[error("the bound must exceed the valuation of the logarithmic derivative")]
    BoundBelowLeading,
    #[error(transparent)]
    Inversion(#[from] SeriesError),
}

/// A couple together with the negative slopes that turn its psi map into a
/// derivation on series.
#[derive(Debug, Clone)]
pub struct DerivationConfig {
    couple: PsiMap,
    default_slope: BigRational,
    slopes: BTreeMap<ChainPoint, BigRational>,
}

impl DerivationConfig {
    /// Uses slope `-1` for every class.
    pub fn new(couple: PsiMap) -> Self {
        DerivationConfig::with_slope(couple, -BigRational::one())
    }

    pub fn with_slope(couple: PsiMap, default_slope: BigRational) -> Self {
        assert!(default_slope.is_negative(), "slopes must be negative");
        DerivationConfig {
            couple,
            default_slope,
            slopes: BTreeMap::new(),
        }
    }

    pub fn set_slope(&mut self, class: ChainPoint, slope: BigRational) {
        assert!(slope.is_negative(), "slopes must be negative");
        assert!(self.couple.chain().contains(&class));
        self.slopes.insert(class, slope);
    }

    pub fn slope(&self, class: &ChainPoint) -> BigRational {
        self.slopes
            .get(class)
            .cloned()
            .unwrap_or_else(|| self.default_slope.clone())
    }

    pub fn couple(&self) -> &PsiMap {
        &self.couple
    }

    pub fn derive_monomial(&self, exponent: &GroupElement) -> Series {
        assert!(exponent.supported_on(self.couple.chain()));
        let mut out = Series::zero();
        for (p, c) in exponent.terms() {
            out.add_term(
                exponent + &self.couple.psi_hat(p),
                self.slope(p) * c,
            );
        }
        out
    }

    pub fn derive(&self, a: &Series) -> Series {
        let mut out = Series::zero();
        for (g, c) in a.terms() {
            for (h, d) in self.derive_monomial(g).terms() {
                out.add_term(h.clone(), c * d);
            }
        }
        out
    }
}

/// The expected leading monomial of `D(a)` for `a` with nonzero valuation:
/// exponent `v(a) + psi(v(a))` and coefficient `lead(a) * slope * lead(v(a))`.
fn expected_derivative_lead(cfg: &DerivationConfig, a: &Series) -> (GroupElement, BigRational) {
    let va = a.valuation();
    let (class, vc) = va.leading().expect("nonzero valuation");
    let exponent = va + &cfg.couple().psi(va);
    let coeff = a.leading().unwrap().1 * cfg.slope(class) * vc;
    (exponent, coeff)
}

/// `D(a)/a` below the exponent bound, proved against the defining identity:
/// the product of `a` with the answer must match `D(a)` below `bound + v(a)`.
pub fn log_derivative(
    cfg: &DerivationConfig,
    a: &Series,
    bound: &GroupElement,
) -> Result<TruncatedSeries, DerivationError> {
    if a.is_zero() {
        return Err(DerivationError::ZeroSeries);
    }
    let va = a.valuation().clone();
    if va.is_zero() {
        return Err(DerivationError::ZeroValuation);
    }
    let lead = cfg.couple().psi(&va);
    if *bound <= lead {
        return Err(DerivationError::BoundBelowLeading);
    }
    let da = cfg.derive(a);
    let (expected_v, expected_c) = expected_derivative_lead(cfg, a);
    assert_eq!(*da.valuation(), expected_v);
    assert_eq!(*da.leading().unwrap().1, expected_c);

    let inverse_bound = bound - da.valuation();
    let inverse = invert_truncated(a, &inverse_bound)?;
    let result = truncate(&(&da * inverse.terms()), bound);

    let residual = &(a * result.terms()) - &da;
    assert!(
        residual.is_zero() || *residual.valuation() >= bound + &va,
        "the logarithmic derivative must satisfy a * (Da/a) = Da below the bound"
    );
    Ok(result)
}

/// Recovers the psi map from the derivation by exact monomial division:
/// `D(t^u) * t^-u` for the unit `u` of each windowed class is a single
/// monomial whose exponent must be the configured `psi_hat` and whose
/// coefficient must be the slope of the class.
pub fn induced_couple(cfg: &DerivationConfig, window: Window) -> Vec<(ChainPoint, GroupElement)> {
    let chain = cfg.couple().chain();
    let mut table = Vec::new();
    for class in chain.points(window) {
        let unit = GroupElement::unit(class.clone());
        let derivative = cfg.derive_monomial(&unit);
        let quotient = &derivative * &Series::monomial(BigRational::one(), -&unit);
        assert_eq!(quotient.term_count(), 1, "a monomial derivative is a monomial");
        let (exponent, coeff) = quotient.leading().unwrap();
        assert_eq!(*coeff, cfg.slope(&class));
        assert_eq!(*exponent, cfg.couple().psi_hat(&class));
        table.push((class, exponent.clone()));
    }
    table
}

/// Outcome of one derivation-level check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DerivationCheck {
    Pass,
    Fail { a: Series, b: Option<Series> },
}

impl DerivationCheck {
    pub fn passed(&self) -> bool {
        matches!(self, DerivationCheck::Pass)
    }
}

/// Results of the valuation-level derivation checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationAxiomReport {
    /// `v(D(a)) = v(a) + psi(v(a))` with the predicted leading coefficient.
    pub valuation_identity: DerivationCheck,
    /// `v(D(a)) > psi(v(b))` for infinitesimal `a` and any `b` with nonzero
    /// valuation: derivatives of small elements fall below every
    /// logarithmic derivative.
    pub small_derivation: DerivationCheck,
    pub samples: usize,
    pub seed: u64,
}

impl DerivationAxiomReport {
    pub fn all_pass(&self) -> bool {
        self.valuation_identity.passed() && self.small_derivation.passed()
    }
}

pub fn check_derivation_axioms(
    cfg: &DerivationConfig,
    window: Window,
    samples: usize,
    seed: u64,
) -> DerivationAxiomReport {
    let couple = cfg.couple();
    couple.assert_window(window);
    let chain = couple.chain();

    let mut valuation_identity = DerivationCheck::Pass;
    let mut small_derivation = DerivationCheck::Pass;

    'pairs: for ga in chain.points(window) {
        for gb in chain.points(window) {
            let a = Series::monomial(BigRational::one(), GroupElement::unit(ga.clone()));
            let b = Series::monomial(BigRational::one(), GroupElement::unit(gb.clone()));
            let da = cfg.derive(&a);
            let margin = da.valuation() - &couple.psi_hat(&gb);
            if !margin.is_positive() {
                small_derivation = DerivationCheck::Fail { a, b: Some(b) };
                break 'pairs;
            }
        }
    }

    let mut sampler = Sampler::new(seed);
    for _ in 0..samples {
        if valuation_identity.passed() {
            let a = sampler.nonzero_valuation_series(chain, window, 3);
            let da = cfg.derive(&a);
            let (expected_v, expected_c) = expected_derivative_lead(cfg, &a);
            let ok = !da.is_zero()
                && *da.valuation() == expected_v
                && *da.leading().unwrap().1 == expected_c;
            if !ok {
                valuation_identity = DerivationCheck::Fail { a, b: None };
            }
        }
        if small_derivation.passed() {
            let a = sampler.infinitesimal_series(chain, window, 3);
            let b = sampler.nonzero_valuation_series(chain, window, 3);
            let da = cfg.derive(&a);
            let margin = da.valuation() - &couple.psi(b.valuation());
            if !margin.is_positive() {
                small_derivation = DerivationCheck::Fail { a, b: Some(b) };
            }
        }
    }

    DerivationAxiomReport {
        valuation_identity,
        small_derivation,
        samples,
        seed,
    }
}

/// Results of the ordered-field-with-derivation checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HFieldReport {
    /// Elements above every bounded one have positive derivative, and their
    /// negatives have negative derivative.
    pub growth_positivity: DerivationCheck,
    /// Boundedness is convex: anything dominated by a bounded element is
    /// bounded.
    pub bounded_convexity: DerivationCheck,
    /// Every bounded element splits as a rational constant plus an
    /// infinitesimal, and constants derive to zero.
    pub constant_splitting: DerivationCheck,
    pub samples: usize,
    pub seed: u64,
}

impl HFieldReport {
    pub fn all_pass(&self) -> bool {
        self.growth_positivity.passed()
            && self.bounded_convexity.passed()
            && self.constant_splitting.passed()
    }
}

pub fn check_h_axioms(
    cfg: &DerivationConfig,
    window: Window,
    samples: usize,
    seed: u64,
) -> HFieldReport {
    let couple = cfg.couple();
    couple.assert_window(window);
    let chain = couple.chain();

    let mut growth_positivity = DerivationCheck::Pass;
    let mut bounded_convexity = DerivationCheck::Pass;
    let mut constant_splitting = DerivationCheck::Pass;

    let mut sampler = Sampler::new(seed);
    for _ in 0..samples {
        if growth_positivity.passed() {
            let anchor = -&sampler.nonzero_group_element(chain, window, 2).abs();
            let lead = sampler.rational_nonzero();
            let a = sampler.series_with_leading(chain, window, 3, anchor, lead);
            if cfg.derive(&a).sign() != a.sign() {
                growth_positivity = DerivationCheck::Fail { a, b: None };
            }
        }
        if bounded_convexity.passed() {
            let b = sampler.bounded_series(chain, window, 3);
            let mut a = b.scale(&sampler.unit_scale());
            if sampler.flip() {
                let bump = sampler.nonzero_group_element(chain, window, 2).abs();
                a.add_term(bump, sampler.unit_scale());
            }
            let abs_a = if a.is_positive() { a.clone() } else { -&a };
            let abs_b = if b.is_positive() { b.clone() } else { -&b };
            if abs_a <= abs_b {
                let bounded = a.is_zero() || *a.valuation() >= GroupElement::zero();
                if !bounded {
                    bounded_convexity = DerivationCheck::Fail { a, b: Some(b) };
                }
            }
        }
        if constant_splitting.passed() {
            let a = sampler.bounded_series(chain, window, 3);
            let constant = Series::monomial(a.coeff(&GroupElement::zero()), GroupElement::zero());
            let rest = &a - &constant;
            let split = rest.is_zero() || rest.valuation() > &GroupElement::zero();
            if !split || !cfg.derive(&constant).is_zero() {
                constant_splitting = DerivationCheck::Fail { a, b: None };
            }
        }
    }

    HFieldReport {
        growth_positivity,
        bounded_convexity,
        constant_splitting,
        samples,
        seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::Chain;
    use num::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn free_config(labels: &[&str]) -> DerivationConfig {
        let chain = Chain::product(labels.iter().copied());
        DerivationConfig::new(PsiMap::new(chain, GroupElement::zero()))
    }

    fn shifted_config() -> DerivationConfig {
        let chain = Chain::product(["q1", "q2", "q3"]);
        let offset = -&GroupElement::unit(chain.point("q2", 0));
        DerivationConfig::new(PsiMap::new(chain, offset))
    }

    #[test]
    fn a_unit_monomial_derives_to_its_shift() {
        let cfg = free_config(&["q1"]);
        let chain = cfg.couple().chain().clone();
        let g = GroupElement::unit(chain.point("q1", 0));
        let d = cfg.derive_monomial(&g);
        let expected_exp = &g - &GroupElement::unit(chain.point("q1", 1));
        assert_eq!(
            d,
            Series::monomial(rat(-1, 1), expected_exp)
        );
    }

    #[test]
    fn derivation_is_linear_and_leibniz() {
        let cfg = shifted_config();
        let chain = cfg.couple().chain();
        let w = Window::new(-3, 3);
        let mut s = Sampler::new(11);
        for _ in 0..40 {
            let a = s.series(chain, w, 3);
            let b = s.series(chain, w, 3);
            assert_eq!(cfg.derive(&(&a + &b)), &cfg.derive(&a) + &cfg.derive(&b));
            let product_rule = &(&a * &cfg.derive(&b)) + &(&b * &cfg.derive(&a));
            assert_eq!(cfg.derive(&(&a * &b)), product_rule);
        }
    }

    #[test]
    fn constants_have_zero_derivative() {
        let cfg = free_config(&["q1", "q2"]);
        assert!(cfg.derive(&Series::one()).is_zero());
        assert!(cfg
            .derive(&Series::monomial(rat(-7, 3), GroupElement::zero()))
            .is_zero());
        assert!(cfg.derive(&Series::zero()).is_zero());
    }

    #[test]
    fn derivatives_track_the_psi_map_on_leading_terms() {
        let cfg = shifted_config();
        let chain = cfg.couple().chain();
        let w = Window::new(-3, 3);
        let mut s = Sampler::new(23);
        for _ in 0..60 {
            let a = s.nonzero_valuation_series(chain, w, 3);
            let da = cfg.derive(&a);
            let (expected_v, expected_c) = expected_derivative_lead(&cfg, &a);
            assert_eq!(*da.valuation(), expected_v);
            assert_eq!(*da.leading().unwrap().1, expected_c);
        }
    }

    #[test]
    fn the_small_derivation_margin_is_explicit_on_adjacent_units() {
        let cfg = free_config(&["q1", "q2"]);
        let chain = cfg.couple().chain();
        let a = Series::monomial(rat(1, 1), GroupElement::unit(chain.point("q1", 1)));
        let b_class = chain.point("q1", 0);
        let margin = cfg.derive(&a).valuation() - &cfg.couple().psi_hat(&b_class);
        let expected = &GroupElement::unit(chain.point("q1", 1)).scale(&rat(2, 1))
            - &GroupElement::unit(chain.point("q1", 2));
        assert_eq!(margin, expected);
        assert!(margin.is_positive());
    }

    #[test]
    fn log_derivatives_verify_against_the_product() {
        let cfg = free_config(&["q1"]);
        let chain = cfg.couple().chain().clone();
        let g = GroupElement::unit(chain.point("q1", 0));
        let psi_g = cfg.couple().psi(&g);
        let a = &Series::monomial(rat(2, 1), g.clone()) + &Series::monomial(rat(1, 1), g.scale(&rat(2, 1)));
        let bound = &psi_g + &g.scale(&rat(2, 1));
        let ld = log_derivative(&cfg, &a, &bound).unwrap();
        assert_eq!(*ld.terms().valuation(), psi_g);
        assert_eq!(
            log_derivative(&cfg, &Series::zero(), &bound).unwrap_err(),
            DerivationError::ZeroSeries
        );
        assert_eq!(
            log_derivative(&cfg, &Series::one(), &bound).unwrap_err(),
            DerivationError::ZeroValuation
        );
        assert_eq!(
            log_derivative(&cfg, &a, &psi_g).unwrap_err(),
            DerivationError::BoundBelowLeading
        );
    }

    #[test]
    fn the_induced_couple_is_the_configured_one() {
        for cfg in [free_config(&["q1", "q2"]), shifted_config()] {
            let table = induced_couple(&cfg, Window::new(-3, 3));
            assert!(!table.is_empty());
            for (class, extracted) in table {
                assert_eq!(extracted, cfg.couple().psi_hat(&class));
            }
        }
    }

    #[test]
    fn slope_overrides_rescale_without_moving_exponents() {
        let mut cfg = free_config(&["q1", "q2"]);
        let chain = cfg.couple().chain().clone();
        let class = chain.point("q1", 0);
        cfg.set_slope(class.clone(), rat(-3, 2));
        let d = cfg.derive_monomial(&GroupElement::unit(class.clone()));
        assert_eq!(*d.leading().unwrap().1, rat(-3, 2));
        assert_eq!(
            *d.valuation(),
            &GroupElement::unit(class.clone()) + &cfg.couple().psi_hat(&class)
        );
        let table = induced_couple(&cfg, Window::new(-2, 2));
        assert!(table
            .iter()
            .all(|(c, e)| *e == cfg.couple().psi_hat(c)));
    }

    #[test]
    #[should_panic(expected = "slopes must be negative")]
    fn positive_slopes_are_rejected() {
        let cfg = free_config(&["q1"]);
        let mut cfg = cfg;
        cfg.set_slope(cfg.couple().chain().point("q1", 0), rat(1, 2));
    }

    #[test]
    fn derivation_checks_pass_on_standard_fields() {
        for cfg in [free_config(&["q1", "q2"]), shifted_config()] {
            let w = Window::new(-4, 4);
            let dv = check_derivation_axioms(&cfg, w, 60, 5);
            assert!(dv.all_pass(), "{dv:?}");
            let hf = check_h_axioms(&cfg, w, 60, 5);
            assert!(hf.all_pass(), "{hf:?}");
        }
    }

    #[test]
    fn a_positive_slope_field_fails_growth_positivity() {
        let chain = Chain::product(["q1"]);
        let couple = PsiMap::new(chain, GroupElement::zero());
        let cfg = DerivationConfig {
            couple,
            default_slope: rat(1, 1),
            slopes: BTreeMap::new(),
        };
        let report = check_h_axioms(&cfg, Window::new(-3, 3), 40, 5);
        assert!(!report.growth_positivity.passed());
    }
}
