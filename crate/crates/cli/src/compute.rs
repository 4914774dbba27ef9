use std::collections::BTreeMap;
use std::hash::{DefaultHasher, Hash, Hasher};
use std::str::FromStr;

use clap::Args;
use laurent::homogeneous::HomogeneousError;
use laurent::recurrences::{Index, RecurrenceError, RecurrenceKind, RecurrenceSpec, TermTable, TermValue};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::record::emit;
use crate::{finding, input, CliError, Common, Format, Target};

#[derive(Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    target: Target,
    /// Laurent polynomials in the initial variables (the default).
    #[arg(long, conflicts_with = "numeric")]
    symbolic: bool,
    /// Exact rational values; implied by `--ones`, `--init` and `--random`.
    #[arg(long)]
    numeric: bool,
    /// All initial values equal to 1.
    #[arg(long, group = "initial")]
    ones: bool,
    /// Initial values in index order, e.g. `1,2,3/2,1`.
    #[arg(long, value_delimiter = ',', group = "initial")]
    init: Vec<String>,
    /// Random positive rational initial values drawn from `--seed`.
    #[arg(long, group = "initial")]
    random: bool,
    /// Number of terms (lattice kinds: non-initial points of the window).
    #[arg(long, default_value_t = 15)]
    count: usize,
    /// Print only this term: `5`, a lattice point `1,2,3`, or for a
    /// homogeneous pattern a word `1,2` or a starting variable `x1`.
    #[arg(long, allow_hyphen_values = true)]
    index: Option<String>,
    /// Integer value for a formal parameter, `name=value`; repeatable.
    #[arg(long = "bind", value_parser = parse_binding)]
    bind: Vec<(String, i64)>,
    /// Exit with status 1 if some term is not a Laurent polynomial.
    #[arg(long)]
    expect_laurent: bool,
}

fn parse_binding(s: &str) -> Result<(String, i64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let v = v.trim().parse().map_err(|e| format!("`{v}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

#[derive(Serialize)]
struct ComputeRun<'a> {
    mode: &'static str,
    initial_values: Option<&'a str>,
    table: &'a TermTable,
}

enum Init {
    Ones,
    List(Vec<BigRational>),
    Random(u64),
}

impl Init {
    fn label(&self) -> &'static str {
        match self {
            Init::Ones => "ones",
            Init::List(_) => "given",
            Init::Random(_) => "random",
        }
    }

    fn value(&self, index: &Index) -> BigRational {
        match self {
            Init::Ones => BigRational::from_integer(1.into()),
            Init::List(values) => match index {
                Index::Int(i) => values[*i as usize].clone(),
                _ => unreachable!("lists are rejected for lattice kinds"),
            },
            Init::Random(seed) => {
                let mut h = DefaultHasher::new();
                (seed, index).hash(&mut h);
                let mut r = ChaCha8Rng::seed_from_u64(h.finish());
                BigRational::new(BigInt::from(r.gen_range(1..=9)), BigInt::from(r.gen_range(1..=9)))
            }
        }
    }
}

fn classify(e: RecurrenceError) -> CliError {
    match e {
        RecurrenceError::ZeroTerm(_)
        | RecurrenceError::Algebra(_)
        | RecurrenceError::Homogeneous(HomogeneousError::Algebra(_)) => finding(e),
        _ => input(e),
    }
}

/// Position of a term in the table order: initial variables, then reduced
/// words breadth-first.
fn homogeneous_count(n: usize, word: &[usize]) -> Result<usize, CliError> {
    if word.is_empty() || word.iter().any(|&l| l == 0 || l > n) || word.windows(2).any(|w| w[0] == w[1]) {
        return Err(CliError::Input(format!("`{word:?}` is not a reduced word over 1..={n}")));
    }
    let mut count = n;
    let mut level = n;
    for _ in 1..word.len() {
        count += level;
        level *= n - 1;
    }
    Ok(count + level)
}

fn parse_index(spec: &RecurrenceSpec, s: &str) -> Result<(Index, usize), CliError> {
    let bad = || CliError::Input(format!("cannot read index `{s}` for {}", spec.name));
    let list = |t: &str| -> Result<Vec<i64>, CliError> {
        t.trim_matches(|c| c == '[' || c == ']' || c == '<' || c == '>')
            .split(',')
            .map(|c| c.trim().parse().map_err(|_| bad()))
            .collect()
    };
    match &spec.kind {
        RecurrenceKind::OneDim { .. } => {
            let i: i64 = s.trim().parse().map_err(|_| bad())?;
            if i < 0 {
                return Err(bad());
            }
            Ok((Index::Int(i), i as usize + 1))
        }
        RecurrenceKind::Lattice { .. } => Ok((Index::Point(list(s)?), 0)),
        RecurrenceKind::Homogeneous { pattern, .. } => {
            let n = pattern.n();
            if let Some(k) = s.trim().strip_prefix('x') {
                let k: usize = k.parse().map_err(|_| bad())?;
                if !(1..=n).contains(&k) {
                    return Err(bad());
                }
                return Ok((Index::Int(k as i64 - 1), k));
            }
            let word: Vec<usize> = list(s)?.into_iter().map(|l| l.max(0) as usize).collect();
            let count = homogeneous_count(n, &word)?;
            Ok((Index::Word { word }, count))
        }
    }
}

pub fn run(args: &ComputeArgs, common: &Common) -> Result<bool, CliError> {
    let mut spec = args.target.spec()?;
    if !args.bind.is_empty() {
        let extra: BTreeMap<String, i64> = args.bind.iter().cloned().collect();
        spec = spec.bind(&extra).map_err(input)?;
    }
    let numeric = args.numeric || args.ones || args.random || !args.init.is_empty();
    let init = if args.random {
        Init::Random(common.seed)
    } else if !args.init.is_empty() {
        let values = args
            .init
            .iter()
            .map(|v| BigRational::from_str(v.trim()).map_err(|_| CliError::Input(format!("`{v}` is not a rational number"))))
            .collect::<Result<Vec<_>, _>>()?;
        let expected = match &spec.kind {
            RecurrenceKind::OneDim { recurrence, .. } => recurrence.n(),
            RecurrenceKind::Homogeneous { pattern, .. } => pattern.n(),
            RecurrenceKind::Lattice { .. } => {
                return Err(CliError::Input("--init needs a one-dimensional or homogeneous recurrence; use --ones or --random".into()))
            }
        };
        if values.len() != expected {
            return Err(CliError::Input(format!("--init takes {expected} values, got {}", values.len())));
        }
        Init::List(values)
    } else {
        Init::Ones
    };
    if numeric {
        let free = spec.free_parameters();
        if !free.is_empty() {
            return Err(CliError::Input(format!("numeric terms need --bind for {}", free.join(", "))));
        }
    }

    let index = args.index.as_deref().map(|s| parse_index(&spec, s)).transpose()?;
    let mut table = match (&spec.kind, &index) {
        (RecurrenceKind::Lattice { recurrence }, Some((Index::Point(p), _))) => {
            let targets = [p.clone()];
            if numeric {
                recurrence.compute_numeric(&targets, |h| init.value(&Index::Point(h.clone())))
            } else {
                recurrence.compute_symbolic(&targets)
            }
        }
        _ => {
            let count = index.as_ref().map_or(args.count, |(_, c)| *c);
            if numeric {
                spec.compute_numeric(count, |i| init.value(i))
            } else {
                spec.compute_symbolic(count)
            }
        }
    }
    .map_err(classify)?;

    if let Some((i, _)) = &index {
        table.entries.retain(|e| &e.index == i);
        if table.entries.is_empty() {
            return Err(CliError::Input(format!("{} has no term at index {i}", spec.name)));
        }
    }
    let not_laurent = table.first_not_laurent().cloned();
    let pass = !(args.expect_laurent && not_laurent.is_some());

    match common.format {
        Format::Json => {
            let run = ComputeRun {
                mode: if numeric { "numeric" } else { "symbolic" },
                initial_values: numeric.then(|| init.label()),
                table: &table,
            };
            emit("compute", &args.target.label(), common, pass, &run)?;
        }
        Format::Text => match (&index, &spec.kind) {
            (Some(_), _) => match &table.entries[0].value {
                TermValue::Laurent { value } => outln!("{value}"),
                TermValue::Rational { value } => outln!("{value}"),
                TermValue::NotLaurent { numerator, denominator } => outln!("({numerator}) / ({denominator})  [not Laurent]"),
            },
            (None, RecurrenceKind::OneDim { .. }) if numeric => {
                let values: Vec<String> = table
                    .entries
                    .iter()
                    .map(|e| match &e.value {
                        TermValue::Rational { value } => value.to_string(),
                        _ => unreachable!("numeric tables hold rationals"),
                    })
                    .collect();
                outln!("{}", values.join(","));
            }
            _ => out!("{table}"),
        },
    }
    if let (Some(i), true) = (&not_laurent, args.expect_laurent) {
        eprintln!("laurent: term {i} is not a Laurent polynomial");
    }
    Ok(pass)
}
