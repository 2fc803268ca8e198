//! Coarsening a Hahn series field by a convex subgroup.
//!
//! A nonempty final segment of the chain indexes the convex subgroup of
//! exponents supported on it.  Passing to cosets coarsens the valuation,
//! and three independent questions arise about the derivation downstairs:
//! does the segment sit in the differential rank of the couple, does some
//! translate of the couple put it in the unfolded rank, and does the
//! derivation at least descend to a nontrivial derivation on the coarse
//! residue field?
//!
//! [`coarsen_residue`] answers all three and cross-checks the answer
//! against two certificates computed straight from the derivation: whether
//! the coarse bounded ring and its maximal ideal are preserved (with a
//! nontrivial unit witness), and whether the coarse small-derivation
//! inequality `w(D(a)) > psi_w(w(b))` survives, swept over every windowed
//! monomial pair before sampling.  The four classes correspond exactly to
//! the four corners of that certificate matrix, and the report records
//! whether the correspondence held.

use std::cmp::Ordering;

use num::{BigRational, One, Signed};
use thiserror::Error;

use crate::chain::{Chain, ChainPoint, FinalSegment, Window};
use crate::derivation::{DerivationCheck, DerivationConfig};
use crate::group::{subgroup_contains, GroupElement};
use crate::rank::{is_compatible_fast, RankError};
use crate::sample::Sampler;
use crate::series::Series;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoarsenError {
    #[error("the empty segment indexes the trivial subgroup; there is nothing to coarsen")]
    EmptySegment,
    #[error(transparent)]
    Window(#[from] RankError),
}

/// Where a group element sits relative to the convex subgroup indexed by
/// the segment: inside it, or positive or negative modulo it.
pub fn coset_cmp(chain: &Chain, segment: &FinalSegment, g: &GroupElement) -> Ordering {
    if subgroup_contains(chain, segment, g) {
        Ordering::Equal
    } else {
        g.sign()
    }
}

/// Bounded for the coarsened valuation: zero or coset-nonnegative valuation.
pub fn w_bounded(chain: &Chain, segment: &FinalSegment, a: &Series) -> bool {
    a.is_zero() || coset_cmp(chain, segment, a.valuation()) != Ordering::Less
}

/// Infinitesimal for the coarsened valuation.
pub fn w_small(chain: &Chain, segment: &FinalSegment, a: &Series) -> bool {
    a.is_zero() || coset_cmp(chain, segment, a.valuation()) == Ordering::Greater
}

/// A unit of the coarse bounded ring: nonzero with valuation inside the
/// subgroup.
pub fn w_unit(chain: &Chain, segment: &FinalSegment, a: &Series) -> bool {
    !a.is_zero() && coset_cmp(chain, segment, a.valuation()) == Ordering::Equal
}

/// The image of a coarsely bounded series in the coarse residue field:
/// the terms whose exponents lie in the subgroup.
pub fn residue(chain: &Chain, segment: &FinalSegment, a: &Series) -> Series {
    assert!(w_bounded(chain, segment, a));
    Series::from_terms(
        a.terms()
            .filter(|(g, _)| subgroup_contains(chain, segment, g))
            .map(|(g, c)| (g.clone(), c.clone())),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoarseningClass {
    /// The segment is compatible with the couple itself.
    InDifferentialRank,
    /// Not compatible, but compatible with a translate through some
    /// windowed class.
    InUnfoldedRankOnly,
    /// Not even a translate takes it, but the derivation still descends to
    /// a nontrivial derivation of the coarse residue field.
    ResidueDerivationOnly,
    /// The coarsening supports no nontrivial induced derivation.
    NoInducedDerivation,
}

#[derive(Debug, Clone)]
pub struct CoarseningReport {
    pub segment: FinalSegment,
    pub class: CoarseningClass,
    /// Whether derivatives of coarsely bounded elements stay bounded and
    /// derivatives of coarse infinitesimals stay infinitesimal.
    pub bounded_preserved: DerivationCheck,
    /// A coarse unit whose derivative is again a coarse unit, when one
    /// exists in the window: the residue derivation it certifies nontrivial.
    pub residue_witness: Option<Series>,
    /// The coarse small-derivation inequality `w(D(a)) > psi_w(w(b))` for
    /// infinitesimal `a` and coarse nonunit `b`.
    pub small_derivation_w: DerivationCheck,
    /// Whether the class computed from rank data agrees with the corner of
    /// the certificate matrix the two checks landed in.
    pub certificate_alignment: bool,
    /// Set when the segment is full, so the coarse valuation collapses.
    pub trivial: bool,
    pub samples: usize,
    pub seed: u64,
}

fn monomial(coeff: BigRational, exponent: GroupElement) -> Series {
    Series::monomial(coeff, exponent)
}

fn unit_monomial(class: &ChainPoint) -> Series {
    monomial(BigRational::one(), GroupElement::unit(class.clone()))
}

/// Classifies the coarsening by the segment and certifies the result from
/// the derivation itself.
pub fn coarsen_residue(
    cfg: &DerivationConfig,
    segment: &FinalSegment,
    window: Window,
    samples: usize,
    seed: u64,
) -> Result<CoarseningReport, CoarsenError> {
    let couple = cfg.couple();
    let chain = couple.chain();
    segment.assert_valid(chain);
    if segment.is_empty(chain) {
        return Err(CoarsenError::EmptySegment);
    }
    if !couple.window_sufficient(window) {
        let req = couple.required_window().expect("only offsets constrain the window");
        return Err(CoarsenError::Window(RankError::WindowTooSmall {
            lo: window.lo(),
            hi: window.hi(),
            need_lo: req.lo(),
            need_hi: req.hi(),
        }));
    }

    let classes = chain.points(window);
    // Tail boundaries can sit exactly at the window's edge, so every
    // certificate inspects a slightly wider aperture, as the rank oracle
    // does.
    let sweep = chain.points(window.inflate(2));
    let inside: Vec<ChainPoint> = sweep
        .iter()
        .filter(|p| segment.contains(chain, p))
        .cloned()
        .collect();
    let outside: Vec<ChainPoint> = sweep
        .iter()
        .filter(|p| !segment.contains(chain, p))
        .cloned()
        .collect();

    let in_rank = is_compatible_fast(couple, segment);
    let translate_hit = classes
        .iter()
        .any(|class| is_compatible_fast(&couple.translate_class(class), segment));
    let descends = subgroup_contains(chain, segment, couple.offset());
    let class = if in_rank {
        CoarseningClass::InDifferentialRank
    } else if translate_hit {
        CoarseningClass::InUnfoldedRankOnly
    } else if descends {
        CoarseningClass::ResidueDerivationOnly
    } else {
        CoarseningClass::NoInducedDerivation
    };

    let mut bounded_preserved = DerivationCheck::Pass;
    'sweep: for point in &sweep {
        for u in [
            unit_monomial(point),
            monomial(-BigRational::one(), -&GroupElement::unit(point.clone())),
        ] {
            let du = cfg.derive(&u);
            let bounded_ok = !w_bounded(chain, segment, &u) || w_bounded(chain, segment, &du);
            let small_ok = !w_small(chain, segment, &u) || w_small(chain, segment, &du);
            if !(bounded_ok && small_ok) {
                bounded_preserved = DerivationCheck::Fail { a: u, b: None };
                break 'sweep;
            }
        }
    }

    let mut small_derivation_w = DerivationCheck::Pass;
    'pairs: for gamma in &sweep {
        for delta in &outside {
            let a = unit_monomial(gamma);
            let da = cfg.derive(&a);
            let margin = da.valuation() - &couple.psi_hat(delta);
            if !(margin.is_positive() && !subgroup_contains(chain, segment, &margin)) {
                small_derivation_w = DerivationCheck::Fail {
                    a,
                    b: Some(unit_monomial(delta)),
                };
                break 'pairs;
            }
        }
    }

    let mut sampler = Sampler::new(seed);
    for _ in 0..samples {
        if bounded_preserved.passed() {
            let anchor = if !inside.is_empty() && (outside.is_empty() || sampler.flip()) {
                GroupElement::term(
                    inside[sampler.index(inside.len())].clone(),
                    sampler.rational_nonzero(),
                )
            } else if !outside.is_empty() {
                GroupElement::term(
                    outside[sampler.index(outside.len())].clone(),
                    sampler.rational_nonzero().abs(),
                )
            } else {
                GroupElement::zero()
            };
            let lead = sampler.rational_nonzero();
            let a = sampler.series_with_leading(chain, window, 3, anchor, lead);
            let da = cfg.derive(&a);
            let bounded_ok = !w_bounded(chain, segment, &a) || w_bounded(chain, segment, &da);
            let small_ok = !w_small(chain, segment, &a) || w_small(chain, segment, &da);
            if !(bounded_ok && small_ok) {
                bounded_preserved = DerivationCheck::Fail { a, b: None };
            }
        }
        if small_derivation_w.passed() && !outside.is_empty() {
            let a = sampler.infinitesimal_series(chain, window, 3);
            let b_point = outside[sampler.index(outside.len())].clone();
            let b_anchor = GroupElement::term(b_point, sampler.rational_nonzero());
            let b_lead = sampler.rational_nonzero();
            let b = sampler.series_with_leading(chain, window, 3, b_anchor, b_lead);
            let da = cfg.derive(&a);
            let margin = da.valuation() - &couple.psi(b.valuation());
            if !(margin.is_positive() && !subgroup_contains(chain, segment, &margin)) {
                small_derivation_w = DerivationCheck::Fail { a, b: Some(b) };
            }
        }
    }

    let residue_witness = inside.iter().find_map(|point| {
        let u = unit_monomial(point);
        let du = cfg.derive(&u);
        if w_unit(chain, segment, &du) {
            assert!(!residue(chain, segment, &du).is_zero());
            Some(u)
        } else {
            None
        }
    });

    let expected = match (
        bounded_preserved.passed() && residue_witness.is_some(),
        small_derivation_w.passed(),
    ) {
        (true, true) => CoarseningClass::InDifferentialRank,
        (false, true) => CoarseningClass::InUnfoldedRankOnly,
        (true, false) => CoarseningClass::ResidueDerivationOnly,
        (false, false) => CoarseningClass::NoInducedDerivation,
    };

    Ok(CoarseningReport {
        segment: segment.clone(),
        class,
        bounded_preserved,
        residue_witness,
        small_derivation_w,
        certificate_alignment: expected == class,
        trivial: segment.is_full(chain),
        samples,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::enumerate_final_segments;
    use crate::couple::PsiMap;
    use num::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn fixture_field() -> DerivationConfig {
        let chain = Chain::product(["q1", "q2", "q3"]);
        let offset = -&GroupElement::unit(chain.point("q2", 0));
        DerivationConfig::new(PsiMap::new(chain, offset))
    }

    fn slices(alls: usize, tail: Option<i64>) -> FinalSegment {
        FinalSegment::Slices {
            alls,
            tail: tail.map(BigInt::from),
        }
    }

    #[test]
    fn cosets_split_by_the_leading_point() {
        let cfg = fixture_field();
        let chain = cfg.couple().chain();
        let seg = slices(1, None);
        let in_h = GroupElement::unit(chain.point("q1", -3));
        let above = GroupElement::unit(chain.point("q2", 5));
        let mixed = &-&above + &in_h.scale(&rat(9, 1));
        assert_eq!(coset_cmp(chain, &seg, &in_h), Ordering::Equal);
        assert_eq!(coset_cmp(chain, &seg, &above), Ordering::Greater);
        assert_eq!(coset_cmp(chain, &seg, &mixed), Ordering::Less);
        assert_eq!(coset_cmp(chain, &seg, &GroupElement::zero()), Ordering::Equal);
    }

    #[test]
    fn coarse_membership_predicates_follow_the_cosets() {
        let cfg = fixture_field();
        let chain = cfg.couple().chain();
        let seg = slices(1, None);
        let unit = Series::monomial(rat(2, 1), -&GroupElement::unit(chain.point("q1", 0)));
        let small = Series::monomial(rat(1, 1), GroupElement::unit(chain.point("q3", -2)));
        let big = Series::monomial(rat(1, 1), -&GroupElement::unit(chain.point("q2", 0)));
        assert!(w_unit(chain, &seg, &unit) && w_bounded(chain, &seg, &unit));
        assert!(w_small(chain, &seg, &small) && w_bounded(chain, &seg, &small));
        assert!(!w_bounded(chain, &seg, &big));
        assert!(w_bounded(chain, &seg, &Series::zero()) && w_small(chain, &seg, &Series::zero()));
    }

    #[test]
    fn residues_keep_exactly_the_subgroup_supported_terms() {
        let cfg = fixture_field();
        let chain = cfg.couple().chain();
        let seg = slices(1, None);
        let a = Series::from_terms([
            (GroupElement::unit(chain.point("q1", -2)), rat(4, 1)),
            (GroupElement::zero(), rat(-1, 2)),
            (GroupElement::unit(chain.point("q3", 0)), rat(7, 1)),
        ]);
        let r = residue(chain, &seg, &a);
        assert_eq!(r.term_count(), 2);
        assert_eq!(r.coeff(&GroupElement::zero()), rat(-1, 2));
        assert_eq!(r.coeff(&GroupElement::unit(chain.point("q1", -2))), rat(4, 1));
    }

    #[test]
    fn the_four_reference_segments_classify_and_align() {
        let cfg = fixture_field();
        let w = Window::new(-4, 4);
        let cases = [
            (slices(2, None), CoarseningClass::InDifferentialRank),
            (slices(1, None), CoarseningClass::InUnfoldedRankOnly),
            (slices(1, Some(-2)), CoarseningClass::ResidueDerivationOnly),
            (slices(0, Some(0)), CoarseningClass::NoInducedDerivation),
        ];
        for (segment, expected) in cases {
            let report = coarsen_residue(&cfg, &segment, w, 40, 3).unwrap();
            assert_eq!(report.class, expected, "{:?}", segment);
            assert!(report.certificate_alignment, "{:?}", report);
            assert!(!report.trivial);
        }
    }

    #[test]
    fn the_residue_only_segment_fails_the_coarse_inequality_at_the_planted_pair() {
        let cfg = fixture_field();
        let chain = cfg.couple().chain().clone();
        let seg = slices(1, Some(-2));
        let gamma = chain.point("q2", -2);
        let delta = chain.point("q2", -3);
        let da = cfg.derive(&unit_monomial(&gamma));
        let margin = da.valuation() - &cfg.couple().psi_hat(&delta);
        let expected = &GroupElement::unit(gamma.clone()).scale(&rat(2, 1))
            - &GroupElement::unit(chain.point("q2", -1));
        assert_eq!(margin, expected);
        assert!(margin.is_positive());
        assert!(subgroup_contains(&chain, &seg, &margin));
        let report = coarsen_residue(&cfg, &seg, Window::new(-4, 4), 40, 3).unwrap();
        assert!(!report.small_derivation_w.passed());
        assert!(report.bounded_preserved.passed());
        let witness = report.residue_witness.expect("a coarse unit with unit derivative");
        assert!(w_unit(&chain, &seg, &cfg.derive(&witness)));
    }

    #[test]
    fn the_dead_segment_fails_both_certificates() {
        let cfg = fixture_field();
        let chain = cfg.couple().chain().clone();
        let seg = slices(0, Some(0));
        let gamma = chain.point("q1", 0);
        let delta = chain.point("q1", -1);
        let da = cfg.derive(&unit_monomial(&gamma));
        let margin = da.valuation() - &cfg.couple().psi_hat(&delta);
        let expected = &GroupElement::unit(gamma.clone()).scale(&rat(2, 1))
            - &GroupElement::unit(chain.point("q1", 1));
        assert_eq!(margin, expected);
        assert!(subgroup_contains(&chain, &seg, &margin));
        let escape = cfg.derive(&unit_monomial(&gamma));
        assert!(!w_bounded(&chain, &seg, &escape));
        let report = coarsen_residue(&cfg, &seg, Window::new(-4, 4), 40, 3).unwrap();
        assert!(!report.small_derivation_w.passed());
        assert!(!report.bounded_preserved.passed());
        assert!(report.residue_witness.is_none());
    }

    #[test]
    fn the_unfolded_only_segment_escapes_through_the_offset() {
        let cfg = fixture_field();
        let chain = cfg.couple().chain().clone();
        let seg = slices(1, None);
        let u = Series::monomial(rat(1, 1), -&GroupElement::unit(chain.point("q1", 0)));
        assert!(w_unit(&chain, &seg, &u));
        let du = cfg.derive(&u);
        let led = du.valuation().clone();
        assert_eq!(
            led.coeff(&chain.point("q2", 0)),
            rat(-1, 1)
        );
        assert!(!w_bounded(&chain, &seg, &du));
        let report = coarsen_residue(&cfg, &seg, Window::new(-4, 4), 40, 3).unwrap();
        assert!(!report.bounded_preserved.passed());
        assert!(report.small_derivation_w.passed());
        assert!(report.residue_witness.is_none());
    }

    #[test]
    fn full_segments_coarsen_trivially_and_empty_ones_are_refused() {
        let cfg = fixture_field();
        let chain = cfg.couple().chain().clone();
        let w = Window::new(-4, 4);
        let full = coarsen_residue(&cfg, &FinalSegment::full(&chain), w, 20, 3).unwrap();
        assert!(full.trivial);
        assert_eq!(full.class, CoarseningClass::InDifferentialRank);
        assert!(full.certificate_alignment);
        assert_eq!(
            coarsen_residue(&cfg, &FinalSegment::empty(&chain), w, 20, 3).unwrap_err(),
            CoarsenError::EmptySegment
        );
    }

    #[test]
    fn free_couples_align_on_every_nonempty_segment() {
        let chain = Chain::product(["q1", "q2"]);
        let cfg = DerivationConfig::new(PsiMap::new(chain.clone(), GroupElement::zero()));
        let w = Window::new(-3, 3);
        for segment in enumerate_final_segments(&chain, w) {
            if segment.is_empty(&chain) {
                continue;
            }
            let report = coarsen_residue(&cfg, &segment, w, 25, 9).unwrap();
            assert!(report.certificate_alignment, "{:?}", report);
            let saturated = segment.is_saturated(&chain);
            assert_eq!(
                report.class == CoarseningClass::InDifferentialRank,
                saturated,
                "{}",
                segment.display(&chain)
            );
            if !saturated {
                assert_eq!(report.class, CoarseningClass::ResidueDerivationOnly);
            }
        }
    }
}
