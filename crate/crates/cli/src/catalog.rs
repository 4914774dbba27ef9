use clap::Args;
use laurent::recurrences::{catalog, lookup, RecurrenceKind};
use laurent::Definition;
use serde::Serialize;

use crate::record::emit;
use crate::{input, CliError, Common, Format};

#[derive(Args)]
pub struct CatalogArgs {
    /// Print this entry as a definition file instead of listing.
    #[arg(long)]
    show: Option<String>,
}

#[derive(Serialize)]
struct Entry {
    name: String,
    kind: &'static str,
    description: String,
    free_parameters: Vec<String>,
}

pub fn run(args: &CatalogArgs, common: &Common) -> Result<bool, CliError> {
    if let Some(name) = &args.show {
        let def = Definition::from_spec(&lookup(name).map_err(input)?);
        match common.format {
            Format::Text => out!("{}", def.to_toml()),
            Format::Json => emit("catalog", name, common, true, &def)?,
        }
        return Ok(true);
    }
    let entries: Vec<Entry> = catalog()
        .iter()
        .map(|s| Entry {
            name: s.name.clone(),
            kind: match s.kind {
                RecurrenceKind::OneDim { .. } => "one-dim",
                RecurrenceKind::Lattice { .. } => "stencil",
                RecurrenceKind::Homogeneous { .. } => "homogeneous",
            },
            description: s.description.clone(),
            free_parameters: s.free_parameters(),
        })
        .collect();
    match common.format {
        Format::Text => {
            for e in &entries {
                outln!("{:<14} {:<12} {}", e.name, e.kind, e.description);
            }
        }
        Format::Json => emit("catalog", "", common, true, &entries)?,
    }
    Ok(true)
}
