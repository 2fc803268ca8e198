//! The `hahnfield` command line: realise rank prescriptions, compute
//! differential and unfolded ranks, check the couple and field axioms,
//! differentiate series, compare classes in the induced quasiorder and
//! classify coarsenings, all in exact arithmetic.
//!
//! Exit codes: `0` on success, `1` when a requested check fails (the
//! counterexample is printed as JSON), `2` for unusable input.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use hahnfield::chain::{Chain, Window};
use hahnfield::couple::{
    check_axioms, classify_trichotomy, find_cut_point, qo_depth, qo_induced_leq, PsiMap,
};
use hahnfield::derivation::{check_derivation_axioms, check_h_axioms, DerivationConfig};
use hahnfield::group::GroupElement;
use hahnfield::parse::{
    parse_chain_file, parse_couple_file, parse_point, parse_segment, parse_series, ChainFile,
};
use hahnfield::rank::{chi_rank, psi_rank, unfolded_rank, RankError};
use hahnfield::realize::{realize, RealizationSpec};
use hahnfield::residue::coarsen_residue;
use hahnfield::sample::DEFAULT_SEED;

const AXIOM_SAMPLES: usize = 100;
const RESIDUE_SAMPLES: usize = 32;

#[derive(Parser)]
#[command(name = "hahnfield", version, about = "Exact Hahn-series fields and their ranks")]
struct Cli {
    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Class window `lo,hi` for sweeps and rank computations.
    #[arg(long, global = true, value_parser = parse_window_arg, allow_hyphen_values = true)]
    window: Option<Window>,
    /// Seed for sampled checks; falls back to HAHNFIELD_SEED, then a fixed
    /// default.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a field realising the labels as its principal unfolded rank
    /// and the final segment from --p as its principal differential rank.
    Realize {
        /// Comma-separated chain labels, ascending.
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<String>,
        /// Label generating the requested principal final segment.
        #[arg(long)]
        p: Option<String>,
    },
    /// Compute the differential and unfolded ranks of a couple.
    Rank {
        /// Couple file (JSON: chain plus offset).
        #[arg(long)]
        couple: PathBuf,
    },
    /// Check the couple axioms and the derivation and field laws.
    Axioms {
        #[arg(long)]
        couple: PathBuf,
    },
    /// Differentiate a series in the field of a couple.
    Derive {
        /// Series in the `c*t{exponent}` grammar.
        #[arg(long)]
        series: String,
        /// Couple file; defaults to the zero-offset couple over q1<q2<q3.
        #[arg(long)]
        couple: Option<PathBuf>,
    },
    /// Compare two classes in the quasiorder induced by the shift.
    Qo {
        /// First point, e.g. `(q1,0)`.
        #[arg(long)]
        a: String,
        /// Second point.
        #[arg(long)]
        b: String,
        /// Chain file; defaults to the product chain over q1<q2<q3.
        #[arg(long)]
        chain: Option<PathBuf>,
    },
    /// Coarsen by a final segment and classify the residue derivation.
    Residue {
        #[arg(long)]
        couple: PathBuf,
        /// Final segment, e.g. `{q1:all,q2:tail(3)}` or `full`.
        #[arg(long)]
        segment: String,
    },
}

fn parse_window_arg(s: &str) -> std::result::Result<Window, String> {
    let (lo, hi) = s.split_once(',').ok_or("expected `lo,hi`")?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("bad upper bound: {e}"))?;
    if lo > hi {
        return Err(format!("window [{lo}, {hi}] is empty"));
    }
    Ok(Window::new(lo, hi))
}

fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("HAHNFIELD_SEED") {
        Ok(text) => text
            .trim()
            .parse()
            .with_context(|| format!("HAHNFIELD_SEED must be an unsigned integer, got {text:?}")),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_SEED),
        Err(err) => Err(err).context("reading HAHNFIELD_SEED"),
    }
}

fn load_couple(path: &Path) -> Result<PsiMap> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_couple_file(&text).with_context(|| format!("couple file {}", path.display()))
}

fn load_chain(path: &Path) -> Result<Chain> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_chain_file(&text).with_context(|| format!("chain file {}", path.display()))
}

fn default_chain() -> Chain {
    Chain::product(["q1", "q2", "q3"])
}

fn main() -> ExitCode {
    // Die quietly when the reader of a pipe goes away, as `head` does.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let window = cli.window.unwrap_or_default();
    let json = cli.json;
    let outcome = resolve_seed(cli.seed).and_then(|seed| match cli.command {
        Command::Realize { q, p } => realize_cmd(json, q, p.as_deref(), seed),
        Command::Rank { couple } => rank_cmd(json, &couple, window, seed),
        Command::Axioms { couple } => axioms_cmd(json, &couple, window, seed),
        Command::Derive { series, couple } => derive_cmd(json, couple.as_deref(), &series),
        Command::Qo { a, b, chain } => qo_cmd(json, chain.as_deref(), &a, &b, window),
        Command::Residue { couple, segment } => {
            residue_cmd(json, &couple, &segment, window, seed)
        }
    });
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn realize_cmd(json: bool, q: Vec<String>, p: Option<&str>, seed: u64) -> Result<u8> {
    let spec = RealizationSpec::new(q, p)?;
    let cert = realize(&spec, seed);
    let body = report::realize_body(&spec, &cert);
    if json {
        println!("{}", report::Report::new("realize", body).to_json());
    } else {
        println!("chain: {}", body.labels.join(" < "));
        if let Some(generator) = &body.generator {
            println!("generator: {generator}");
        }
        println!("cut class: {}", body.cut.cut_class);
        print_trichotomy(&body.trichotomy);
        println!(
            "principal differential rank: {}",
            body.principal_rank_labels.join(" < ")
        );
        println!(
            "principal unfolded rank: {}",
            body.principal_unfolded_labels.join(" < ")
        );
        let families = body.axioms.len() + body.derivation_axioms.len() + body.h_field.len();
        println!("checks: {families} axiom families pass; the ranks realise the request");
    }
    Ok(0)
}

fn print_trichotomy(body: &report::TrichotomyBody) {
    match &body.witness {
        Some(witness) => println!("trichotomy: {} at {}", body.class, witness),
        None => println!("trichotomy: {}", body.class),
    }
}

fn rank_cmd(json: bool, path: &Path, window: Window, seed: u64) -> Result<u8> {
    let couple = load_couple(path)?;
    let chain = couple.chain();
    let rank = psi_rank(&couple, window)?;
    let unfolded = unfolded_rank(&couple, window)?;
    let cut = find_cut_point(&couple, window);
    let trichotomy = classify_trichotomy(&couple, window, seed);
    let contraction = match chi_rank(&couple, window) {
        Ok(chi) => Some(report::ContractionBody {
            matches_unfolded: chi.segments == unfolded.segments,
            segments: chi.segments.iter().map(|s| s.display(chain)).collect(),
        }),
        Err(RankError::NotAsymptoticallyIntegrating) => None,
        Err(err) => return Err(err.into()),
    };
    let pass = contraction.as_ref().map_or(true, |c| c.matches_unfolded);
    let body = report::RankCommandBody {
        couple: report::couple_body(&couple),
        window: window.into(),
        rank: report::rank_body(chain, &rank),
        unfolded: report::unfolded_body(chain, &unfolded),
        cut: report::cut_body(chain, &cut),
        trichotomy: report::trichotomy_body(chain, &trichotomy),
        contraction,
    };
    if json {
        println!("{}", report::Report::new("rank", body).to_json());
    } else {
        println!("differential rank segments:");
        for segment in &body.rank.segments {
            println!("  {segment}");
        }
        println!("principal:");
        for principal in &body.rank.principal {
            println!("  {} generated by {}", principal.segment, principal.witness);
        }
        println!("unfolded rank segments:");
        for segment in &body.unfolded.segments {
            println!("  {segment}");
        }
        println!("cut class: {}", body.cut.cut_class);
        print_trichotomy(&body.trichotomy);
        if let Some(contraction) = &body.contraction {
            println!("contraction rank matches unfolded: {}", contraction.matches_unfolded);
        }
        if !pass {
            println!("{}", report::Report::new("rank", body).to_json());
        }
    }
    Ok(if pass { 0 } else { 1 })
}

fn axioms_cmd(json: bool, path: &Path, window: Window, seed: u64) -> Result<u8> {
    let couple = load_couple(path)?;
    if !couple.window_sufficient(window) {
        bail!(
            "window [{}, {}] is too small for the couple's offset; widen --window",
            window.lo(),
            window.hi()
        );
    }
    let chain = couple.chain();
    let axioms = check_axioms(&couple, window, AXIOM_SAMPLES, seed);
    let cfg = DerivationConfig::new(couple.clone());
    let derivation = check_derivation_axioms(&cfg, window, AXIOM_SAMPLES, seed);
    let h_field = check_h_axioms(&cfg, window, AXIOM_SAMPLES, seed);
    let all_pass = axioms.all_pass() && derivation.all_pass() && h_field.all_pass();
    let body = report::AxiomsBody {
        couple: report::couple_body(&couple),
        window: window.into(),
        seed,
        samples: AXIOM_SAMPLES,
        axioms: report::axiom_entries(chain, &axioms),
        derivation_axioms: report::derivation_entries(chain, &derivation),
        h_field: report::h_field_entries(chain, &h_field),
        all_pass,
    };
    if json {
        println!("{}", report::Report::new("axioms", body).to_json());
    } else {
        for entry in body
            .axioms
            .iter()
            .chain(&body.derivation_axioms)
            .chain(&body.h_field)
        {
            println!("{}: {}", entry.check, if entry.pass { "pass" } else { "FAIL" });
        }
        if !all_pass {
            println!("{}", report::Report::new("axioms", body).to_json());
        }
    }
    Ok(if all_pass { 0 } else { 1 })
}

fn derive_cmd(json: bool, path: Option<&Path>, series: &str) -> Result<u8> {
    let couple = match path {
        Some(path) => load_couple(path)?,
        None => PsiMap::new(default_chain(), GroupElement::zero()),
    };
    let chain = couple.chain();
    let a = parse_series(chain, series).context("invalid series")?;
    let cfg = DerivationConfig::new(couple.clone());
    let da = cfg.derive(&a);
    let body = report::DeriveBody {
        couple: report::couple_body(&couple),
        series: a.display(chain),
        derivative: da.display(chain),
        valuation: (!a.is_zero()).then(|| a.valuation().display(chain)),
        derivative_valuation: (!da.is_zero()).then(|| da.valuation().display(chain)),
    };
    if json {
        println!("{}", report::Report::new("derive", body).to_json());
    } else {
        println!("D({}) = {}", body.series, body.derivative);
        if let (Some(v), Some(dv)) = (&body.valuation, &body.derivative_valuation) {
            println!("v(a) = {v}");
            println!("v(D a) = {dv}");
        }
    }
    Ok(0)
}

fn qo_cmd(json: bool, path: Option<&Path>, a: &str, b: &str, window: Window) -> Result<u8> {
    let chain = match path {
        Some(path) => load_chain(path)?,
        None => default_chain(),
    };
    let couple = PsiMap::new(chain.clone(), GroupElement::zero());
    let a_point = parse_point(&chain, a).context("invalid point for --a")?;
    let b_point = parse_point(&chain, b).context("invalid point for --b")?;
    let depth = qo_depth(&chain, window);
    let a_leq_b = qo_induced_leq(&couple, &a_point, &b_point, depth);
    let b_leq_a = qo_induced_leq(&couple, &b_point, &a_point, depth);
    let body = report::QoBody {
        chain: ChainFile::of(&chain),
        window: window.into(),
        depth,
        a: chain.display_point(&a_point),
        b: chain.display_point(&b_point),
        a_leq_b,
        b_leq_a,
        relation: report::relation_name(a_leq_b, b_leq_a),
    };
    if json {
        println!("{}", report::Report::new("qo", body).to_json());
    } else {
        println!("{} <= {}: {}", body.a, body.b, body.a_leq_b);
        println!("{} <= {}: {}", body.b, body.a, body.b_leq_a);
        println!("relation: {}", body.relation);
    }
    Ok(0)
}

fn residue_cmd(json: bool, path: &Path, segment: &str, window: Window, seed: u64) -> Result<u8> {
    let couple = load_couple(path)?;
    let chain = couple.chain();
    let segment = parse_segment(chain, segment).context("invalid segment")?;
    let cfg = DerivationConfig::new(couple.clone());
    let coarsening = coarsen_residue(&cfg, &segment, window, RESIDUE_SAMPLES, seed)?;
    let pass = coarsening.certificate_alignment;
    let body = report::residue_body(&couple, window, &coarsening);
    if json {
        println!("{}", report::Report::new("residue", body).to_json());
    } else {
        println!("segment: {}", body.segment);
        println!("class: {}", body.class);
        for check in &body.checks {
            println!("{}: {}", check.check, if check.pass { "holds" } else { "fails" });
        }
        match &body.residue_witness {
            Some(witness) => println!("residue witness: {witness}"),
            None => println!("residue witness: none in the window"),
        }
        println!("certificate alignment: {}", body.certificate_alignment);
        if !pass {
            println!("{}", report::Report::new("residue", body).to_json());
        }
    }
    Ok(if pass { 0 } else { 1 })
}
