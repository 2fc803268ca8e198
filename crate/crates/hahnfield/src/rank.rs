//! Differential ranks of shift-generated couples.
//!
//! A convex subgroup of the Hahn group, indexed by a final segment of the
//! chain, is *compatible* with the couple when membership is preserved in
//! both directions: a nonzero element lies in the subgroup exactly when its
//! psi value does.  The compatible segments, ordered by inclusion, form the
//! rank of the couple; the unfolded rank collects the segments compatible
//! with some translate `psi - psi(g)` and recovers the rank inside it as a
//! final segment.
//!
//! Every rank computation here runs two independent routes and insists they
//! agree: a closed form (nonempty, saturated, offset inside the segment)
//! and the definitional membership sweep over a window of classes inflated
//! enough to expose any tail violation.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use thiserror::Error;

use crate::chain::{enumerate_final_segments, Chain, ChainPoint, ExtendedPoint, FinalSegment, Window};
use crate::couple::{contraction_chi, find_cut_point, qo_depth, qo_induced_leq, PsiMap};
use crate::group::{subgroup_contains, GroupElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RankError {
    #[error("window [{lo}, {hi}] too small: the offset support needs [{need_lo}, {need_hi}]")]
    WindowTooSmall {
        lo: i64,
        hi: i64,
        need_lo: i64,
        need_hi: i64,
    },
    #[error("the couple does not admit asymptotic integration")]
    NotAsymptoticallyIntegrating,
}

fn check_window(couple: &PsiMap, window: Window) -> Result<(), RankError> {
    if couple.window_sufficient(window) {
        Ok(())
    } else {
        let req = couple.required_window().expect("only product chains constrain the window");
        Err(RankError::WindowTooSmall {
            lo: window.lo(),
            hi: window.hi(),
            need_lo: req.lo(),
            need_hi: req.hi(),
        })
    }
}

/// Definitional compatibility: over the window inflated by 2, each class
/// lies in the segment exactly when its psi value lies in the convex
/// subgroup the segment indexes.  The empty segment indexes the trivial
/// subgroup, which does not count as part of a rank, so it reports `false`.
pub fn is_compatible_oracle(couple: &PsiMap, segment: &FinalSegment, window: Window) -> bool {
    let chain = couple.chain();
    segment.assert_valid(chain);
    if segment.is_empty(chain) {
        return false;
    }
    let sweep = if chain.is_product() {
        window.inflate(2)
    } else {
        window
    };
    chain.points(sweep).iter().all(|class| {
        segment.contains(chain, class)
            == subgroup_contains(chain, segment, &couple.psi_hat(class))
    })
}

/// Closed-form compatibility: the segment is nonempty, saturated (closed
/// under shift preimages), and contains the whole offset support.
///
/// Saturation is forced because `psi_hat(class)` carries the term
/// `-unit(omega(class))`: a segment containing `omega(class)` and the
/// offset but not `class` itself would absorb the psi value of a class it
/// excludes.  Conversely a saturated segment around the offset preserves
/// membership both ways, since the leading term of the psi value either
/// sits in the offset support or is the shift of the argument class.
pub fn is_compatible_fast(couple: &PsiMap, segment: &FinalSegment) -> bool {
    let chain = couple.chain();
    segment.assert_valid(chain);
    !segment.is_empty(chain)
        && segment.is_saturated(chain)
        && subgroup_contains(chain, segment, couple.offset())
}

/// Compatible segments of a couple, ascending by inclusion, with the
/// principal ones among them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankReport {
    pub segments: Vec<FinalSegment>,
    /// Principal segments paired with a generating class: the segment is
    /// the smallest compatible one containing that class.
    pub principal: Vec<(FinalSegment, ChainPoint)>,
}

impl RankReport {
    pub fn principal_segments(&self) -> Vec<FinalSegment> {
        self.principal.iter().map(|(s, _)| s.clone()).collect()
    }
}

fn principal_map(
    chain: &Chain,
    segments: &[FinalSegment],
    window: Window,
) -> Vec<(FinalSegment, ChainPoint)> {
    let mut out: Vec<(FinalSegment, ChainPoint)> = Vec::new();
    for class in chain.points(window) {
        let smallest = segments
            .iter()
            .find(|s| s.contains(chain, &class))
            .expect("the full segment is compatible and contains every class");
        if !out.iter().any(|(s, _)| s == smallest) {
            out.push((smallest.clone(), class.clone()));
        }
    }
    out.sort_by(|(a, _), (b, _)| a.cmp(b));
    out
}

/// The rank of the couple: all compatible final segments in the window,
/// each judged by both the closed form and the definitional oracle, which
/// must agree.  The compatible segments are re-checked to be saturated and
/// to contain the offset support.
pub fn psi_rank(couple: &PsiMap, window: Window) -> Result<RankReport, RankError> {
    check_window(couple, window)?;
    let chain = couple.chain();
    let mut segments = Vec::new();
    for segment in enumerate_final_segments(chain, window) {
        let fast = is_compatible_fast(couple, &segment);
        let oracle = is_compatible_oracle(couple, &segment, window);
        assert_eq!(
            fast,
            oracle,
            "compatibility routes disagree on {}",
            segment.display(chain)
        );
        if fast {
            segments.push(segment);
        }
    }
    for s in &segments {
        assert!(s.is_saturated(chain));
        assert!(subgroup_contains(chain, s, couple.offset()));
    }
    let principal = principal_map(chain, &segments, window);
    Ok(RankReport {
        segments,
        principal,
    })
}

/// The smallest compatible segment whose subgroup contains the class.
pub fn principal_segment(
    couple: &PsiMap,
    class: &ChainPoint,
    window: Window,
) -> Result<FinalSegment, RankError> {
    let report = psi_rank(couple, window)?;
    Ok(report
        .segments
        .iter()
        .find(|s| s.contains(couple.chain(), class))
        .expect("the full segment is always compatible")
        .clone())
}

/// The unfolded rank data of a couple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnfoldedRankReport {
    /// Segments compatible with some translate `psi - psi(g)`, ascending.
    pub segments: Vec<FinalSegment>,
    /// The principal segments among them.
    pub principal_segments: Vec<FinalSegment>,
    /// The segments compatible with `psi` itself: a final segment of
    /// `segments`, cut out by containing the offset.
    pub diff_rank_subset: Vec<FinalSegment>,
    /// The principal segments of the rank: a final segment of
    /// `principal_segments`.
    pub principal_diff_rank_subset: Vec<FinalSegment>,
}

/// Computes the unfolded rank by translating the couple through one
/// representative of every windowed class, widening the window as each
/// translate's offset requires, and collecting the compatible segments.
///
/// Several structural facts are asserted along the way, each recomputed
/// from the definitions rather than assumed:
///
/// * every translate's cut class lies strictly above the class translated
///   through, so the translates exhaust arbitrarily small cuts;
/// * the segments compatible with a translate are exactly the collected
///   segments whose subgroup contains the translated class;
/// * the rank is the final segment of the collection consisting of the
///   segments that contain the offset (all of them for offset `0`), and
///   the principal ranks relate the same way.
pub fn unfolded_rank(couple: &PsiMap, window: Window) -> Result<UnfoldedRankReport, RankError> {
    check_window(couple, window)?;
    let chain = couple.chain();
    let base = psi_rank(couple, window)?;

    let mut all: BTreeSet<FinalSegment> = BTreeSet::new();
    let mut per_class: Vec<(ChainPoint, Vec<FinalSegment>)> = Vec::new();
    for class in chain.points(window) {
        let translate = couple.translate_class(&class);
        let mut tw = window;
        if let Some(req) = translate.required_window() {
            tw = tw.extend_to(req.lo()).extend_to(req.hi());
        }
        let cut = find_cut_point(&translate, tw);
        assert!(
            cut.cut_class > ExtendedPoint::Point(class.clone()),
            "translating through a class cuts strictly above it"
        );
        let segs = psi_rank(&translate, tw)?.segments;
        for s in &segs {
            all.insert(s.clone());
        }
        per_class.push((class, segs));
    }
    let segments: Vec<FinalSegment> = all.into_iter().collect();

    for (class, segs) in &per_class {
        let expected: Vec<FinalSegment> = segments
            .iter()
            .filter(|s| s.contains(chain, class))
            .cloned()
            .collect();
        assert_eq!(segs, &expected, "translate segments are a membership slice");
    }

    let mut principal_segments: Vec<FinalSegment> = Vec::new();
    for class in chain.points(window) {
        let smallest = segments
            .iter()
            .find(|s| s.contains(chain, &class))
            .expect("the full segment is compatible with every translate");
        if !principal_segments.contains(smallest) {
            principal_segments.push(smallest.clone());
        }
    }
    principal_segments.sort();

    let diff_rank_subset = base.segments.clone();
    let principal_diff_rank_subset = base.principal_segments();

    let offset_slice: Vec<FinalSegment> = segments
        .iter()
        .filter(|s| subgroup_contains(chain, s, couple.offset()))
        .cloned()
        .collect();
    assert_eq!(
        diff_rank_subset, offset_slice,
        "the rank consists of the collected segments containing the offset"
    );
    let final_slice: Vec<FinalSegment> = segments
        .iter()
        .filter(|s| **s >= diff_rank_subset[0])
        .cloned()
        .collect();
    assert_eq!(diff_rank_subset, final_slice, "the rank is a final segment");
    let principal_final: Vec<FinalSegment> = principal_segments
        .iter()
        .filter(|s| *s >= &principal_diff_rank_subset[0])
        .cloned()
        .collect();
    assert_eq!(principal_diff_rank_subset, principal_final);
    if couple.offset().is_zero() {
        assert_eq!(diff_rank_subset, segments);
        assert_eq!(principal_diff_rank_subset, principal_segments);
    }

    Ok(UnfoldedRankReport {
        segments,
        principal_segments,
        diff_rank_subset,
        principal_diff_rank_subset,
    })
}

/// The rank of the contraction attached to an asymptotically integrating
/// couple: segments whose subgroup is preserved in both directions by the
/// contraction, judged on class units over the inflated window.
pub fn chi_rank(couple: &PsiMap, window: Window) -> Result<RankReport, RankError> {
    if !(couple.offset().is_zero() && couple.chain().is_product()) {
        return Err(RankError::NotAsymptoticallyIntegrating);
    }
    check_window(couple, window)?;
    let chain = couple.chain();
    let sweep = window.inflate(2);
    let contracted: Vec<(ChainPoint, GroupElement)> = chain
        .points(sweep)
        .into_iter()
        .map(|class| {
            let chi = contraction_chi(couple, &-&GroupElement::unit(class.clone()));
            (class, chi)
        })
        .collect();
    let mut segments = Vec::new();
    for segment in enumerate_final_segments(chain, window) {
        if segment.is_empty(chain) {
            continue;
        }
        let compatible = contracted.iter().all(|(class, chi)| {
            segment.contains(chain, class) == subgroup_contains(chain, &segment, chi)
        });
        if compatible {
            segments.push(segment);
        }
    }
    let principal = principal_map(chain, &segments, window);
    Ok(RankReport {
        segments,
        principal,
    })
}

/// The rank read off from the quasi-order the couple induces on classes:
/// equivalence classes of mutual relation, ordered, and their final
/// segments realised as final segments of the chain.  Each realisation is
/// verified pointwise against the quasi-order buckets on the window.
///
/// The construction requires a zero or single-term offset.  A wider offset
/// pulls every orbit into the block of its deepest support point, so the
/// buckets collapse below the rank and the two notions genuinely part ways.
pub fn rank_of_quasiorder(couple: &PsiMap, window: Window) -> Result<RankReport, RankError> {
    check_window(couple, window)?;
    assert!(
        couple.offset().term_count() <= 1,
        "quasi-order buckets recover the rank only for single-term offsets"
    );
    let chain = couple.chain();
    let classes = chain.points(window);
    let depth = qo_depth(chain, window);

    let mut buckets: Vec<Vec<ChainPoint>> = Vec::new();
    'outer: for class in &classes {
        for bucket in &mut buckets {
            let rep = &bucket[0];
            if qo_induced_leq(couple, class, rep, depth)
                && qo_induced_leq(couple, rep, class, depth)
            {
                bucket.push(class.clone());
                continue 'outer;
            }
        }
        buckets.push(vec![class.clone()]);
    }
    buckets.sort_by(|a, b| {
        let ab = qo_induced_leq(couple, &a[0], &b[0], depth);
        let ba = qo_induced_leq(couple, &b[0], &a[0], depth);
        match (ab, ba) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (true, true) => unreachable!("distinct buckets are not equivalent"),
            (false, false) => panic!("the induced quasi-order is total on classes"),
        }
    });

    let mut segments = Vec::new();
    for k in 1..=buckets.len() {
        let chosen: Vec<&ChainPoint> = buckets[buckets.len() - k..].iter().flatten().collect();
        let candidate = match chain {
            Chain::Finite { .. } => {
                let start = chosen
                    .iter()
                    .map(|p| match p {
                        ChainPoint::Finite(i) => *i,
                        ChainPoint::Product { .. } => unreachable!(),
                    })
                    .min()
                    .unwrap();
                FinalSegment::Suffix { start }
            }
            Chain::ProductQZ { .. } => {
                let deepest_block = chosen
                    .iter()
                    .map(|p| match p {
                        ChainPoint::Product { q, .. } => *q,
                        ChainPoint::Finite(_) => unreachable!(),
                    })
                    .max()
                    .unwrap();
                FinalSegment::Slices {
                    alls: deepest_block + 1,
                    tail: None,
                }
            }
        };
        for p in &classes {
            assert_eq!(
                candidate.contains(chain, p),
                chosen.contains(&p),
                "quasi-order buckets fill whole blocks"
            );
        }
        segments.push(candidate);
    }
    segments.sort();
    let principal = principal_map(chain, &segments, window);
    Ok(RankReport {
        segments,
        principal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::couple::translate_to_negative;
    use num::BigRational;

    fn qz(labels: &[&str]) -> Chain {
        Chain::product(labels.iter().copied())
    }

    fn blocks(alls: usize) -> FinalSegment {
        FinalSegment::Slices { alls, tail: None }
    }

    fn shifted(chain: &Chain, label: &str, n: i64) -> PsiMap {
        PsiMap::new(chain.clone(), -&GroupElement::unit(chain.point(label, n)))
    }

    #[test]
    fn free_couples_are_compatible_with_every_block_union() {
        let chain = qz(&["q1", "q2", "q3"]);
        let couple = PsiMap::new(chain.clone(), GroupElement::zero());
        let report = psi_rank(&couple, Window::new(-4, 4)).unwrap();
        assert_eq!(report.segments, vec![blocks(1), blocks(2), blocks(3)]);
        assert_eq!(report.principal_segments(), report.segments);
        // Witnesses generate their segments: each is the smallest
        // compatible segment containing its class.
        for (seg, class) in &report.principal {
            assert!(seg.contains(&chain, class));
            for other in &report.segments {
                if other < seg {
                    assert!(!other.contains(&chain, class));
                }
            }
        }
    }

    #[test]
    fn an_offset_trims_the_rank_to_segments_containing_it() {
        let chain = qz(&["q1", "q2", "q3"]);
        let couple = shifted(&chain, "q2", 0);
        let report = psi_rank(&couple, Window::new(-4, 4)).unwrap();
        assert_eq!(report.segments, vec![blocks(2), blocks(3)]);
        assert_eq!(report.principal_segments(), report.segments);
    }

    #[test]
    fn finite_chains_have_exactly_the_full_segment() {
        let chain = Chain::finite(["a", "b", "c"]);
        for couple in [
            PsiMap::new(chain.clone(), GroupElement::zero()),
            PsiMap::new(chain.clone(), -&GroupElement::unit(chain.label_point("b"))),
        ] {
            let report = psi_rank(&couple, Window::default()).unwrap();
            assert_eq!(report.segments, vec![FinalSegment::full(&chain)]);
            assert_eq!(report.principal.len(), 1);
        }
    }

    #[test]
    fn small_windows_are_rejected_not_misread() {
        let chain = qz(&["q1", "q2"]);
        let couple = shifted(&chain, "q1", 5);
        let err = psi_rank(&couple, Window::new(-2, 2)).unwrap_err();
        assert!(matches!(err, RankError::WindowTooSmall { need_hi: 7, .. }));
    }

    #[test]
    fn compatibility_routes_agree_including_tails() {
        let chain = qz(&["q1", "q2"]);
        let w = Window::new(-3, 3);
        let couples = [
            PsiMap::new(chain.clone(), GroupElement::zero()),
            shifted(&chain, "q2", 0),
            shifted(&chain, "q1", 1),
            PsiMap::new(chain.clone(), GroupElement::unit(chain.point("q1", 1))),
        ];
        for couple in &couples {
            for segment in enumerate_final_segments(&chain, w) {
                assert_eq!(
                    is_compatible_fast(couple, &segment),
                    is_compatible_oracle(couple, &segment, w),
                    "{}",
                    segment.display(&chain)
                );
            }
        }
    }

    #[test]
    fn principal_segment_picks_the_smallest_container() {
        let chain = qz(&["q1", "q2", "q3"]);
        let couple = PsiMap::new(chain.clone(), GroupElement::zero());
        let w = Window::new(-4, 4);
        assert_eq!(
            principal_segment(&couple, &chain.point("q2", 0), w).unwrap(),
            blocks(2)
        );
        assert_eq!(
            principal_segment(&couple, &chain.point("q1", -3), w).unwrap(),
            blocks(1)
        );
    }

    #[test]
    fn unfolding_a_free_couple_changes_nothing() {
        let chain = qz(&["q1", "q2"]);
        let couple = PsiMap::new(chain.clone(), GroupElement::zero());
        let report = unfolded_rank(&couple, Window::new(-4, 4)).unwrap();
        assert_eq!(report.segments, vec![blocks(1), blocks(2)]);
        assert_eq!(report.diff_rank_subset, report.segments);
        assert_eq!(report.principal_segments, report.segments);
        assert_eq!(report.principal_diff_rank_subset, report.segments);
    }

    #[test]
    fn unfolding_recovers_segments_below_the_offset() {
        let chain = qz(&["q1", "q2"]);
        let couple = shifted(&chain, "q2", 0);
        let report = unfolded_rank(&couple, Window::new(-4, 4)).unwrap();
        assert_eq!(report.segments, vec![blocks(1), blocks(2)]);
        assert_eq!(report.diff_rank_subset, vec![blocks(2)]);
        assert_eq!(report.principal_segments, vec![blocks(1), blocks(2)]);
        assert_eq!(report.principal_diff_rank_subset, vec![blocks(2)]);
    }

    #[test]
    fn contraction_rank_matches_the_unfolded_segments() {
        let chain = qz(&["q1", "q2", "q3"]);
        let couple = PsiMap::new(chain.clone(), GroupElement::zero());
        let w = Window::new(-4, 4);
        let chi = chi_rank(&couple, w).unwrap();
        let unfolded = unfolded_rank(&couple, w).unwrap();
        assert_eq!(chi.segments, unfolded.segments);
        assert_eq!(
            chi_rank(&shifted(&chain, "q2", 0), w).unwrap_err(),
            RankError::NotAsymptoticallyIntegrating
        );
    }

    #[test]
    fn quasiorder_rank_reproduces_the_compatibility_rank() {
        let w = Window::new(-4, 4);
        let couples = [
            PsiMap::new(qz(&["q1", "q2"]), GroupElement::zero()),
            PsiMap::new(qz(&["q1", "q2", "q3"]), GroupElement::zero()),
            shifted(&qz(&["q1", "q2", "q3"]), "q2", 0),
            shifted(&qz(&["q1", "q2"]), "q2", 0),
            PsiMap::new(Chain::finite(["a", "b"]), GroupElement::zero()),
        ];
        for couple in &couples {
            let by_quasiorder = rank_of_quasiorder(couple, w).unwrap();
            let by_compatibility = psi_rank(couple, w).unwrap();
            assert_eq!(by_quasiorder, by_compatibility);
        }
    }

    #[test]
    fn quasiorder_rank_survives_an_orbit_leaving_the_chain() {
        let w = Window::new(-4, 4);
        let chain = qz(&["q1", "q2", "q3"]);
        let couple = PsiMap::new(chain.clone(), GroupElement::unit(chain.point("q1", 1)));
        assert!(couple.induced(&chain.point("q1", 0)).is_infinity());
        let by_quasiorder = rank_of_quasiorder(&couple, w).unwrap();
        assert_eq!(by_quasiorder, psi_rank(&couple, w).unwrap());
        assert_eq!(by_quasiorder.segments, vec![blocks(1), blocks(2), blocks(3)]);
    }

    #[test]
    #[should_panic(expected = "single-term offsets")]
    fn quasiorder_rank_rejects_wide_offsets() {
        let chain = qz(&["q1", "q2", "q3"]);
        let offset = GroupElement::from_terms([
            (chain.point("q2", 0), BigRational::from_integer((-1).into())),
            (chain.point("q3", 1), BigRational::from_integer((-1).into())),
        ]);
        let couple = PsiMap::new(chain, offset);
        let _ = rank_of_quasiorder(&couple, Window::new(-4, 4));
    }

    #[test]
    fn negative_translation_preserves_the_rank() {
        let w = Window::new(-4, 4);
        for chain in [qz(&["q1", "q2"]), qz(&["q1", "q2", "q3"])] {
            let couple = PsiMap::new(chain.clone(), GroupElement::unit(chain.point("q2", 0)));
            let translated = translate_to_negative(&couple, w);
            assert_eq!(
                psi_rank(&couple, w).unwrap().segments,
                psi_rank(&translated.couple, w).unwrap().segments,
            );
        }
    }
}
