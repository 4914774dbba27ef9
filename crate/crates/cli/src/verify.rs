use clap::{Args, Subcommand};
use laurent::cyclic::{cyclic_caterpillar, verify_cyclic, GSequenceCertificate};
use laurent::exchange::{check_caterpillar_conditions, CaterpillarReport, Propagation};
use laurent::homogeneous::{apply_word, builtin_family, check_homogeneous, HomReport, HomogeneousError, WordOutcome};
use laurent::stencil::{verify_stencil, StencilRecurrence};
use serde::{Deserialize, Serialize};

use crate::record::emit;
use crate::{finding, input, CliError, Common, Format, Target};

#[derive(Subcommand)]
pub enum VerifyCommand {
    /// G-sequence test for a one-dimensional recurrence.
    Cyclic(Target),
    /// Stencil test for a lattice recurrence.
    Stencil(StencilArgs),
    /// Checks hom1-hom3 for a homogeneous exchange pattern.
    Homogeneous(HomogeneousArgs),
    /// G-sequence test, then the caterpillar conditions and propagation along
    /// a finite caterpillar.
    Caterpillar(CaterpillarArgs),
}

#[derive(Args)]
pub struct StencilArgs {
    #[command(flatten)]
    target: Target,
    /// Exponents of the number wall, e.g. `--pqr 2,1,0`.
    #[arg(long, value_delimiter = ',')]
    pqr: Option<Vec<u32>>,
}

#[derive(Args)]
pub struct HomogeneousArgs {
    #[command(flatten)]
    target: Target,
    /// Number of variables of the quadratic family.
    #[arg(long)]
    n: Option<u32>,
    /// Degrees of the palindromic pair.
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    e: Option<u32>,
    /// Also apply this word of maps, e.g. `1,2,3` (rightmost acts first).
    #[arg(long, value_delimiter = ',')]
    word: Option<Vec<usize>>,
}

#[derive(Args)]
pub struct CaterpillarArgs {
    #[command(flatten)]
    target: Target,
    /// Spine vertices between the root and the head.
    #[arg(long, default_value_t = 8)]
    spine: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneousRun {
    pub report: HomReport,
    pub word: Option<Vec<usize>>,
    pub outcome: Option<WordOutcome>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PropagationSummary {
    Laurent { vertices: usize },
    NotLaurent { vertex: usize, edge: usize, label: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaterpillarRun {
    pub certificate: GSequenceCertificate,
    pub spine: Vec<usize>,
    pub conditions: Option<CaterpillarReport>,
    pub propagation: Option<PropagationSummary>,
}

pub fn run(cmd: &VerifyCommand, common: &Common) -> Result<bool, CliError> {
    match cmd {
        VerifyCommand::Cyclic(target) => cyclic(target, common),
        VerifyCommand::Stencil(args) => stencil(args, common),
        VerifyCommand::Homogeneous(args) => homogeneous(args, common),
        VerifyCommand::Caterpillar(args) => caterpillar(args, common),
    }
}

fn cyclic(target: &Target, common: &Common) -> Result<bool, CliError> {
    let spec = target.definition()?.cyclic().map_err(input)?;
    let cert = verify_cyclic(&spec, common.seed, common.trials).map_err(finding)?;
    let pass = cert.passed();
    match common.format {
        Format::Text => outln!("{cert}"),
        Format::Json => emit("verify cyclic", &target.label(), common, pass, &cert)?,
    }
    Ok(pass)
}

fn stencil(args: &StencilArgs, common: &Common) -> Result<bool, CliError> {
    let recurrence = match (&args.pqr, &args.target.name) {
        (Some(pqr), Some(name)) if name == "number-wall" => match pqr[..] {
            [p, q, r] => StencilRecurrence::number_wall(p, q, r),
            _ => return Err(CliError::Input("--pqr takes three exponents, e.g. 2,1,0".into())),
        },
        (Some(_), _) => return Err(CliError::Input("--pqr applies only to number-wall".into())),
        (None, _) => args.target.definition()?.stencil().map_err(input)?,
    };
    let cert = verify_stencil(&recurrence, common.seed, common.trials).map_err(finding)?;
    let pass = cert.passed();
    match common.format {
        Format::Text => outln!("{cert}"),
        Format::Json => emit("verify stencil", &args.target.label(), common, pass, &cert)?,
    }
    Ok(pass)
}

fn homogeneous(args: &HomogeneousArgs, common: &Common) -> Result<bool, CliError> {
    let family_args: Vec<u32> = match args.target.name.as_deref() {
        Some("quadratic") => args.n.into_iter().collect(),
        Some("palindromic") => match (args.d, args.e) {
            (None, None) => vec![],
            (d, e) => vec![d.unwrap_or(2), e.unwrap_or(2)],
        },
        _ if args.n.is_some() || args.d.is_some() || args.e.is_some() => {
            return Err(CliError::Input("--n applies to quadratic, --d and --e to palindromic".into()))
        }
        _ => vec![],
    };
    let pattern = match &args.target.name {
        Some(name) => builtin_family(name, &family_args).map_err(|e| match e {
            HomogeneousError::UnknownFamily(_) => CliError::Input(format!("{e}; expected one of quadratic, palindromic, seq54, trinomial")),
            e => input(e),
        })?,
        None => args.target.definition()?.pattern().map_err(input)?,
    };
    let report = check_homogeneous(&pattern, common.seed, common.trials).map_err(finding)?;
    let outcome = match &args.word {
        Some(word) => {
            if word.iter().any(|&l| l == 0 || l > pattern.n()) {
                return Err(CliError::Input(format!("word letters must lie in 1..={}", pattern.n())));
            }
            Some(apply_word(&pattern, word, &pattern.identity_point()).map_err(finding)?)
        }
        None => None,
    };
    let pass = report.pass && !matches!(outcome, Some(WordOutcome::NotLaurent { .. }));
    let run = HomogeneousRun {
        report,
        word: args.word.clone(),
        outcome,
    };
    match common.format {
        Format::Text => {
            outln!("{}", run.report);
            if let (Some(word), Some(outcome)) = (&run.word, &run.outcome) {
                let w: Vec<String> = word.iter().map(usize::to_string).collect();
                match outcome {
                    WordOutcome::Laurent { point } => {
                        outln!("word <{}>: Laurent", w.join(","));
                        for (k, c) in point.iter().enumerate() {
                            outln!("  x{}' = {c}", k + 1);
                        }
                    }
                    WordOutcome::NotLaurent { position, numerator, denominator } => {
                        outln!("word <{}>: not Laurent at letter {position}: ({numerator}) / ({denominator})", w.join(","));
                    }
                }
            }
        }
        Format::Json => emit("verify homogeneous", &args.target.label(), common, pass, &run)?,
    }
    Ok(pass)
}

fn caterpillar(args: &CaterpillarArgs, common: &Common) -> Result<bool, CliError> {
    let spec = args.target.definition()?.cyclic().map_err(input)?;
    let certificate = verify_cyclic(&spec, common.seed, common.trials).map_err(finding)?;
    let mut run = CaterpillarRun {
        certificate,
        spine: Vec::new(),
        conditions: None,
        propagation: None,
    };
    if run.certificate.passed() {
        let (pattern, spine) = cyclic_caterpillar(&spec, &run.certificate, args.spine).map_err(finding)?;
        let conditions = check_caterpillar_conditions(&pattern, &spine, common.seed, common.trials).map_err(finding)?;
        run.propagation = Some(match pattern.propagate().map_err(finding)? {
            Propagation::Laurent(clusters) => PropagationSummary::Laurent { vertices: clusters.len() },
            Propagation::NotLaurent { vertex, edge, label } => PropagationSummary::NotLaurent { vertex, edge, label },
        });
        run.conditions = Some(conditions);
        run.spine = spine;
    }
    let pass = run.conditions.as_ref().is_some_and(|c| c.pass)
        && matches!(run.propagation, Some(PropagationSummary::Laurent { .. }));
    match common.format {
        Format::Text => print_caterpillar(&run, pass),
        Format::Json => emit("verify caterpillar", &args.target.label(), common, pass, &run)?,
    }
    Ok(pass)
}

fn print_caterpillar(run: &CaterpillarRun, pass: bool) {
    outln!("{}", run.certificate);
    let Some(c) = &run.conditions else {
        outln!("caterpillar not built: the G-sequence test did not pass");
        outln!("verdict: fail");
        return;
    };
    let spine: Vec<String> = run.spine.iter().map(usize::to_string).collect();
    outln!("caterpillar spine: {}", spine.join(" - "));
    let ok = c.gep1.iter().filter(|e| e.pass).count();
    outln!("GEP1: {ok}/{} edges", c.gep1.len());
    for e in c.gep1.iter().filter(|e| !e.pass) {
        outln!("  edge {}: {}", e.edge, e.detail.as_deref().unwrap_or("fails"));
    }
    let ok = c.gep2.iter().filter(|p| p.verdict.is_coprime()).count();
    outln!("GEP2: {ok}/{} pairs coprime (probable)", c.gep2.len());
    for p in c.gep2.iter().filter(|p| !p.verdict.is_coprime()) {
        outln!("  edges {}, {}: {:?}", p.p_edge, p.q_edge, p.verdict);
    }
    let ok = c.gep3.iter().filter(|t| t.pass()).count();
    outln!("GEP3: {ok}/{} configurations with a witness", c.gep3.len());
    for t in c.gep3.iter().filter(|t| !t.pass()) {
        outln!("  edges {}, {}, {}: {}", t.p_edge, t.q_edge, t.r_edge, t.detail.as_deref().unwrap_or("no witness"));
    }
    match &run.propagation {
        Some(PropagationSummary::Laurent { vertices }) => outln!("propagation: Laurent at all {vertices} vertices"),
        Some(PropagationSummary::NotLaurent { vertex, edge, label }) => {
            outln!("propagation: not Laurent at vertex {vertex} (edge {edge}, label {label})")
        }
        None => {}
    }
    outln!("verdict: {}", if pass { "pass" } else { "fail" });
}
