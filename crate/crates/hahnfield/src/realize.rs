//! Realising prescribed principal ranks.
//!
//! Given an ascending chain of labels, and optionally one of them
//! generating a final segment, [`realize`] manufactures a Hahn field whose
//! differential structure carries exactly those prescriptions: the
//! principal unfolded rank comes out order-isomorphic to the whole label
//! chain, and the principal differential rank to the final segment the
//! generator cuts off.  The witness field is the series field over the
//! label-by-integers group, shifted so its cut sits at the generator.
//!
//! Nothing in the returned certificate is taken on faith.  The couple is
//! pushed through the axiom checks, the cut point and trichotomy class are
//! recomputed and matched against what the construction promises, both
//! ranks are computed with their built-in closed-form/oracle agreement,
//! the realised label lists are read off segment by segment, and the
//! derivation is checked against the valuation, growth and smallness laws
//! before anything is returned.

use thiserror::Error;

use crate::chain::{Chain, ChainPoint, ExtendedPoint, FinalSegment, Window};
use crate::couple::{
    check_axioms, classify_trichotomy, find_cut_point, AxiomReport, CutPointReport, PsiMap,
    TrichotomyClass,
};
use crate::derivation::{
    check_derivation_axioms, check_h_axioms, induced_couple, DerivationAxiomReport,
    DerivationConfig, HFieldReport,
};
use crate::group::GroupElement;
use crate::rank::{psi_rank, unfolded_rank, RankReport, UnfoldedRankReport};

/// Upper bound on the chain length a realization accepts.
pub const MAX_LABELS: usize = 12;

const REALIZE_SAMPLES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RealizeError {
    #[error("the chain needs at least one label")]
    EmptyChain,
    #[error("at most {MAX_LABELS} labels are supported, got {0}")]
    TooManyLabels(usize),
    #[error("labels are nonempty words over letters, digits and underscores, got {0:?}")]
    InvalidLabel(String),
    #[error("label {0:?} appears more than once")]
    DuplicateLabel(String),
    #[error("the generator {0:?} is not one of the chain labels")]
    UnknownGenerator(String),
}

/// A validated realization request: the label chain in ascending order,
/// and optionally the label generating the principal final segment the
/// differential rank should realise.  Without a generator the requested
/// rank is the whole chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizationSpec {
    labels: Vec<String>,
    generator: Option<String>,
}

impl RealizationSpec {
    pub fn new<I, S>(labels: I, generator: Option<&str>) -> Result<Self, RealizeError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(RealizeError::EmptyChain);
        }
        if labels.len() > MAX_LABELS {
            return Err(RealizeError::TooManyLabels(labels.len()));
        }
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty()
                || !label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            {
                return Err(RealizeError::InvalidLabel(label.clone()));
            }
            if labels[..i].contains(label) {
                return Err(RealizeError::DuplicateLabel(label.clone()));
            }
        }
        let generator = match generator {
            None => None,
            Some(g) => {
                if !labels.iter().any(|l| l == g) {
                    return Err(RealizeError::UnknownGenerator(g.to_string()));
                }
                Some(g.to_string())
            }
        };
        Ok(RealizationSpec { labels, generator })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn generator(&self) -> Option<&str> {
        self.generator.as_deref()
    }
}

/// Everything a realization proves about the field it built.
#[derive(Debug, Clone)]
pub struct RealizationCertificate {
    pub couple: PsiMap,
    pub window: Window,
    pub seed: u64,
    pub cut: CutPointReport,
    pub trichotomy: TrichotomyClass,
    pub axioms: AxiomReport,
    pub derivation_axioms: DerivationAxiomReport,
    pub h_field: HFieldReport,
    pub rank: RankReport,
    pub unfolded: UnfoldedRankReport,
    /// The labels realised by the principal differential rank, ascending.
    pub principal_rank_labels: Vec<String>,
    /// The labels realised by the principal unfolded rank, ascending.
    pub principal_unfolded_labels: Vec<String>,
}

fn block_labels(chain: &Chain, segments: &[FinalSegment]) -> Vec<String> {
    segments
        .iter()
        .map(|seg| {
            let FinalSegment::Slices { alls, tail: None } = seg else {
                panic!("principal segments of these couples are block unions");
            };
            chain.labels()[alls - 1].clone()
        })
        .collect()
}

/// Builds the field `spec` describes and certifies every promised property.
pub fn realize(spec: &RealizationSpec, seed: u64) -> RealizationCertificate {
    let chain = Chain::product(spec.labels.iter().map(String::as_str));
    let offset = match &spec.generator {
        None => GroupElement::zero(),
        Some(label) => -&GroupElement::unit(chain.point(label, 0)),
    };
    let couple = PsiMap::new(chain.clone(), offset);
    let window = Window::default();

    let axioms = check_axioms(&couple, window, REALIZE_SAMPLES, seed);
    assert!(axioms.all_pass(), "the constructed couple fails an axiom: {axioms:?}");

    let cut = find_cut_point(&couple, window);
    match &spec.generator {
        None => assert!(cut.cut_class.is_infinity()),
        Some(label) => assert_eq!(
            cut.cut_class,
            ExtendedPoint::Point(chain.point(label, 0)),
            "the cut sits at the generator"
        ),
    }

    let trichotomy = classify_trichotomy(&couple, window, seed);
    match &spec.generator {
        None => assert_eq!(trichotomy, TrichotomyClass::AsymptoticIntegration),
        Some(_) => assert_eq!(trichotomy, TrichotomyClass::Gap(couple.offset().clone())),
    }

    let rank = psi_rank(&couple, window).expect("the default window covers the offset");
    let unfolded = unfolded_rank(&couple, window).expect("the default window covers the offset");
    assert_eq!(rank.segments, unfolded.diff_rank_subset);
    assert_eq!(rank.principal_segments(), unfolded.principal_diff_rank_subset);

    let generator_index = match &spec.generator {
        None => 0,
        Some(label) => chain
            .label_index(label)
            .expect("RealizationSpec::new checked membership"),
    };
    let expected_rank: Vec<FinalSegment> = (generator_index + 1..=chain.label_count())
        .map(|alls| FinalSegment::Slices { alls, tail: None })
        .collect();
    assert_eq!(
        rank.principal_segments(),
        expected_rank,
        "the principal differential rank realises the requested final segment"
    );
    for (segment, witness) in &rank.principal {
        let FinalSegment::Slices { alls, tail: None } = segment else {
            unreachable!("compatible segments are block unions");
        };
        let ChainPoint::Product { q, .. } = witness else {
            unreachable!("product chains have product witnesses");
        };
        assert_eq!(q + 1, *alls, "each principal segment is generated from its deepest block");
    }
    let principal_rank_labels = block_labels(&chain, &rank.principal_segments());
    assert_eq!(
        principal_rank_labels.as_slice(),
        &spec.labels[generator_index..]
    );

    let expected_unfolded: Vec<FinalSegment> = (1..=chain.label_count())
        .map(|alls| FinalSegment::Slices { alls, tail: None })
        .collect();
    assert_eq!(
        unfolded.principal_segments, expected_unfolded,
        "the principal unfolded rank realises the whole chain"
    );
    let principal_unfolded_labels = block_labels(&chain, &unfolded.principal_segments);
    assert_eq!(principal_unfolded_labels.as_slice(), spec.labels());

    let cfg = DerivationConfig::new(couple.clone());
    let derivation_axioms = check_derivation_axioms(&cfg, window, REALIZE_SAMPLES, seed);
    assert!(
        derivation_axioms.all_pass(),
        "the induced derivation fails a valuation law: {derivation_axioms:?}"
    );
    let h_field = check_h_axioms(&cfg, window, REALIZE_SAMPLES, seed);
    assert!(h_field.all_pass(), "the field fails an order law: {h_field:?}");
    let table = induced_couple(&cfg, window);
    assert_eq!(table.len(), chain.points(window).len());

    RealizationCertificate {
        couple,
        window,
        seed,
        cut,
        trichotomy,
        axioms,
        derivation_axioms,
        h_field,
        rank,
        unfolded,
        principal_rank_labels,
        principal_unfolded_labels,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_generator_realises_its_final_segment() {
        let spec = RealizationSpec::new(["alpha", "beta", "gamma"], Some("beta")).unwrap();
        let cert = realize(&spec, 17);
        assert_eq!(cert.principal_rank_labels, ["beta", "gamma"]);
        assert_eq!(cert.principal_unfolded_labels, ["alpha", "beta", "gamma"]);
        assert!(matches!(cert.trichotomy, TrichotomyClass::Gap(_)));
    }

    #[test]
    fn no_generator_realises_the_whole_chain_twice() {
        let spec = RealizationSpec::new(["a", "b"], None).unwrap();
        let cert = realize(&spec, 5);
        assert_eq!(cert.principal_rank_labels, ["a", "b"]);
        assert_eq!(cert.principal_unfolded_labels, ["a", "b"]);
        assert_eq!(cert.trichotomy, TrichotomyClass::AsymptoticIntegration);
        assert!(cert.cut.cut_class.is_infinity());
    }

    #[test]
    fn a_single_label_realises_either_way() {
        for generator in [None, Some("solo")] {
            let spec = RealizationSpec::new(["solo"], generator).unwrap();
            let cert = realize(&spec, 2);
            assert_eq!(cert.principal_rank_labels, ["solo"]);
            assert_eq!(cert.principal_unfolded_labels, ["solo"]);
        }
    }

    #[test]
    fn the_topmost_generator_still_yields_the_full_chain() {
        let spec = RealizationSpec::new(["a", "b", "c"], Some("a")).unwrap();
        let cert = realize(&spec, 9);
        assert_eq!(cert.principal_rank_labels, ["a", "b", "c"]);
        assert!(matches!(cert.trichotomy, TrichotomyClass::Gap(_)));
    }

    #[test]
    fn specs_validate_their_labels() {
        assert_eq!(
            RealizationSpec::new(Vec::<String>::new(), None).unwrap_err(),
            RealizeError::EmptyChain
        );
        assert_eq!(
            RealizationSpec::new(["a", "b", "a"], None).unwrap_err(),
            RealizeError::DuplicateLabel("a".into())
        );
        assert_eq!(
            RealizationSpec::new(["a", "b"], Some("zz")).unwrap_err(),
            RealizeError::UnknownGenerator("zz".into())
        );
        assert_eq!(
            RealizationSpec::new(["a-b"], None).unwrap_err(),
            RealizeError::InvalidLabel("a-b".into())
        );
        let many: Vec<String> = (0..13).map(|i| format!("q{i}")).collect();
        assert_eq!(
            RealizationSpec::new(many, None).unwrap_err(),
            RealizeError::TooManyLabels(13)
        );
    }

    #[test]
    fn realizations_are_deterministic_in_the_seed() {
        let spec = RealizationSpec::new(["x", "y"], Some("y")).unwrap();
        let a = realize(&spec, 11);
        let b = realize(&spec, 11);
        assert_eq!(a.principal_rank_labels, b.principal_rank_labels);
        assert_eq!(a.rank.segments, b.rank.segments);
        assert_eq!(a.axioms.seed, b.axioms.seed);
    }
}
