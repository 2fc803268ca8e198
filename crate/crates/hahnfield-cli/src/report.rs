//! JSON bodies for the command-line reports.
//!
//! Every report carries `"schema": "hahnfield/1"` and the name of the
//! command that produced it.  Elements, series, points and segments are
//! rendered in the same grammars the parsers accept, and the embedded
//! couple description matches the couple-file format, so report fragments
//! can be fed back in as inputs.

use hahnfield::chain::{Chain, Window};
use hahnfield::couple::{
    AxiomOutcome, AxiomReport, CutPointReport, PsiMap, TrichotomyClass,
};
use hahnfield::derivation::{DerivationAxiomReport, DerivationCheck, HFieldReport};
use hahnfield::parse::{ChainFile, CoupleFile};
use hahnfield::rank::{RankReport, UnfoldedRankReport};
use hahnfield::realize::{RealizationCertificate, RealizationSpec};
use hahnfield::residue::{CoarseningClass, CoarseningReport};
use serde::Serialize;

pub const SCHEMA: &str = "hahnfield/1";

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report<T: Serialize> {
    pub schema: &'static str,
    pub command: &'static str,
    #[serde(flatten)]
    pub body: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: &'static str, body: T) -> Self {
        Report { schema: SCHEMA, command, body }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

#[derive(Serialize)]
pub struct WindowBody {
    pub lo: i64,
    pub hi: i64,
}

impl From<Window> for WindowBody {
    fn from(window: Window) -> Self {
        WindowBody { lo: window.lo(), hi: window.hi() }
    }
}

pub fn couple_body(couple: &PsiMap) -> CoupleFile {
    CoupleFile {
        chain: ChainFile::of(couple.chain()),
        offset: couple.offset().display(couple.chain()),
    }
}

#[derive(Serialize)]
pub struct ElementPair {
    pub g: String,
    pub h: String,
}

#[derive(Serialize)]
pub struct SeriesPair {
    pub a: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum Counterexample {
    Elements(ElementPair),
    Series(SeriesPair),
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckBody {
    pub check: &'static str,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

fn axiom_entry(chain: &Chain, name: &'static str, outcome: &AxiomOutcome) -> CheckBody {
    CheckBody {
        check: name,
        pass: outcome.passed(),
        counterexample: match outcome {
            AxiomOutcome::Pass => None,
            AxiomOutcome::Fail(cx) => Some(Counterexample::Elements(ElementPair {
                g: cx.g.display(chain),
                h: cx.h.display(chain),
            })),
        },
    }
}

fn check_entry(chain: &Chain, name: &'static str, check: &DerivationCheck) -> CheckBody {
    CheckBody {
        check: name,
        pass: check.passed(),
        counterexample: match check {
            DerivationCheck::Pass => None,
            DerivationCheck::Fail { a, b } => Some(Counterexample::Series(SeriesPair {
                a: a.display(chain),
                b: b.as_ref().map(|s| s.display(chain)),
            })),
        },
    }
}

pub fn axiom_entries(chain: &Chain, report: &AxiomReport) -> Vec<CheckBody> {
    vec![
        axiom_entry(chain, "AC1", &report.ac1),
        axiom_entry(chain, "AC2", &report.ac2),
        axiom_entry(chain, "AC3", &report.ac3),
        axiom_entry(chain, "ACH", &report.ach),
    ]
}

pub fn derivation_entries(chain: &Chain, report: &DerivationAxiomReport) -> Vec<CheckBody> {
    vec![
        check_entry(chain, "valuationIdentity", &report.valuation_identity),
        check_entry(chain, "smallDerivation", &report.small_derivation),
    ]
}

pub fn h_field_entries(chain: &Chain, report: &HFieldReport) -> Vec<CheckBody> {
    vec![
        check_entry(chain, "growthPositivity", &report.growth_positivity),
        check_entry(chain, "boundedConvexity", &report.bounded_convexity),
        check_entry(chain, "constantSplitting", &report.constant_splitting),
    ]
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TrichotomyBody {
    pub class: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

pub fn trichotomy_body(chain: &Chain, class: &TrichotomyClass) -> TrichotomyBody {
    match class {
        TrichotomyClass::Gap(g) => TrichotomyBody { class: "gap", witness: Some(g.display(chain)) },
        TrichotomyClass::MaxPsi(g) => {
            TrichotomyBody { class: "maxPsi", witness: Some(g.display(chain)) }
        }
        TrichotomyClass::AsymptoticIntegration => {
            TrichotomyBody { class: "asymptoticIntegration", witness: None }
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CutBody {
    pub cut_class: String,
    pub witness: String,
}

pub fn cut_body(chain: &Chain, cut: &CutPointReport) -> CutBody {
    CutBody {
        cut_class: chain.display_extended(&cut.cut_class),
        witness: cut.witness.display(chain),
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PrincipalBody {
    pub segment: String,
    pub witness: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RankBody {
    pub segments: Vec<String>,
    pub principal: Vec<PrincipalBody>,
}

pub fn rank_body(chain: &Chain, report: &RankReport) -> RankBody {
    RankBody {
        segments: report.segments.iter().map(|s| s.display(chain)).collect(),
        principal: report
            .principal
            .iter()
            .map(|(segment, witness)| PrincipalBody {
                segment: segment.display(chain),
                witness: chain.display_point(witness),
            })
            .collect(),
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct UnfoldedBody {
    pub segments: Vec<String>,
    pub principal_segments: Vec<String>,
    pub diff_rank_subset: Vec<String>,
    pub principal_diff_rank_subset: Vec<String>,
}

pub fn unfolded_body(chain: &Chain, report: &UnfoldedRankReport) -> UnfoldedBody {
    let show = |segments: &[hahnfield::chain::FinalSegment]| {
        segments.iter().map(|s| s.display(chain)).collect()
    };
    UnfoldedBody {
        segments: show(&report.segments),
        principal_segments: show(&report.principal_segments),
        diff_rank_subset: show(&report.diff_rank_subset),
        principal_diff_rank_subset: show(&report.principal_diff_rank_subset),
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RealizeBody {
    pub labels: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    pub couple: CoupleFile,
    pub window: WindowBody,
    pub seed: u64,
    pub cut: CutBody,
    pub trichotomy: TrichotomyBody,
    pub axioms: Vec<CheckBody>,
    pub derivation_axioms: Vec<CheckBody>,
    pub h_field: Vec<CheckBody>,
    pub rank: RankBody,
    pub unfolded: UnfoldedBody,
    pub principal_rank_labels: Vec<String>,
    pub principal_unfolded_labels: Vec<String>,
}

pub fn realize_body(spec: &RealizationSpec, cert: &RealizationCertificate) -> RealizeBody {
    let chain = cert.couple.chain();
    RealizeBody {
        labels: spec.labels().to_vec(),
        generator: spec.generator().map(str::to_string),
        couple: couple_body(&cert.couple),
        window: cert.window.into(),
        seed: cert.seed,
        cut: cut_body(chain, &cert.cut),
        trichotomy: trichotomy_body(chain, &cert.trichotomy),
        axioms: axiom_entries(chain, &cert.axioms),
        derivation_axioms: derivation_entries(chain, &cert.derivation_axioms),
        h_field: h_field_entries(chain, &cert.h_field),
        rank: rank_body(chain, &cert.rank),
        unfolded: unfolded_body(chain, &cert.unfolded),
        principal_rank_labels: cert.principal_rank_labels.clone(),
        principal_unfolded_labels: cert.principal_unfolded_labels.clone(),
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ContractionBody {
    pub segments: Vec<String>,
    pub matches_unfolded: bool,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RankCommandBody {
    pub couple: CoupleFile,
    pub window: WindowBody,
    pub rank: RankBody,
    pub unfolded: UnfoldedBody,
    pub cut: CutBody,
    pub trichotomy: TrichotomyBody,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contraction: Option<ContractionBody>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AxiomsBody {
    pub couple: CoupleFile,
    pub window: WindowBody,
    pub seed: u64,
    pub samples: usize,
    pub axioms: Vec<CheckBody>,
    pub derivation_axioms: Vec<CheckBody>,
    pub h_field: Vec<CheckBody>,
    pub all_pass: bool,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DeriveBody {
    pub couple: CoupleFile,
    pub series: String,
    pub derivative: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub valuation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derivative_valuation: Option<String>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct QoBody {
    pub chain: ChainFile,
    pub window: WindowBody,
    pub depth: usize,
    pub a: String,
    pub b: String,
    pub a_leq_b: bool,
    pub b_leq_a: bool,
    pub relation: &'static str,
}

pub fn relation_name(a_leq_b: bool, b_leq_a: bool) -> &'static str {
    match (a_leq_b, b_leq_a) {
        (true, true) => "equivalent",
        (true, false) => "below",
        (false, true) => "above",
        (false, false) => "incomparable",
    }
}

pub fn class_name(class: CoarseningClass) -> &'static str {
    match class {
        CoarseningClass::InDifferentialRank => "inDifferentialRank",
        CoarseningClass::InUnfoldedRankOnly => "inUnfoldedRankOnly",
        CoarseningClass::ResidueDerivationOnly => "residueDerivationOnly",
        CoarseningClass::NoInducedDerivation => "noInducedDerivation",
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ResidueBody {
    pub couple: CoupleFile,
    pub window: WindowBody,
    pub seed: u64,
    pub samples: usize,
    pub segment: String,
    pub class: &'static str,
    pub checks: Vec<CheckBody>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue_witness: Option<String>,
    pub certificate_alignment: bool,
    pub trivial: bool,
}

pub fn residue_body(couple: &PsiMap, window: Window, report: &CoarseningReport) -> ResidueBody {
    let chain = couple.chain();
    ResidueBody {
        couple: couple_body(couple),
        window: window.into(),
        seed: report.seed,
        samples: report.samples,
        segment: report.segment.display(chain),
        class: class_name(report.class),
        checks: vec![
            check_entry(chain, "boundedPreserved", &report.bounded_preserved),
            check_entry(chain, "smallDerivationW", &report.small_derivation_w),
        ],
        residue_witness: report.residue_witness.as_ref().map(|s| s.display(chain)),
        certificate_alignment: report.certificate_alignment,
        trivial: report.trivial,
    }
}
