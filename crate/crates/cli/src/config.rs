//! Validated run configuration assembled from the command line.

use std::collections::BTreeMap;
use std::path::PathBuf;

use isospec_core::catalog::CatalogPotential;
use isospec_core::grid::{Grid1D, GridFunction};
use serde::Serialize;

use crate::args::{Format, OriginArg, RunArgs};
use crate::error::{CliError, Result};
use crate::table::ingest_table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialKind {
    Catalog,
    Tabulated,
}

#[derive(Debug, Clone, Serialize)]
pub struct PotentialSpec {
    pub kind: PotentialKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub catalog_name: Option<String>,
    pub params: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table_path: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub potential: PotentialSpec,
    pub grid: GridSpec,
    pub k: usize,
    pub lambdas: Vec<f64>,
    pub integral_origin: OriginArg,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    pub output_format: Format,
}

/// A configuration together with the sampled input potential.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub config: RunConfig,
    pub potential: GridFunction,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn parse_lambdas(args: &RunArgs) -> Result<Vec<f64>> {
    let list = match (&args.lambda, &args.lambdas) {
        (Some(l), _) => vec![*l],
        (None, Some(text)) if text.trim().is_empty() => Vec::new(),
        (None, Some(text)) => text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| usage(format!("cannot parse lambda `{}`", s.trim())))
            })
            .collect::<Result<_>>()?,
        (None, None) => Vec::new(),
    };
    if let Some(bad) = list.iter().find(|l| !l.is_finite()) {
        return Err(usage(format!("lambda must be finite, got {bad}")));
    }
    Ok(list)
}

fn validate_grid(grid: &GridSpec) -> Result<()> {
    if grid.n < 3 || grid.n.is_multiple_of(2) {
        return Err(usage(format!("n must be odd and at least 3, got {}", grid.n)));
    }
    if !(grid.x_min.is_finite() && grid.x_max.is_finite() && grid.x_min < grid.x_max) {
        return Err(usage(format!(
            "need finite xmin < xmax, got [{}, {}]",
            grid.x_min, grid.x_max
        )));
    }
    Ok(())
}

pub fn prepare(command: &str, args: &RunArgs) -> Result<Prepared> {
    let lambdas = parse_lambdas(args)?;
    let catalog = CatalogPotential::NAMES.contains(&args.potential.as_str());

    let (spec, potential) = if catalog {
        let entry = CatalogPotential::from_name(&args.potential, args.omega, args.a)?;
        let mut params = BTreeMap::new();
        match entry {
            CatalogPotential::Harmonic { omega } => {
                params.insert("omega".to_string(), omega);
            }
            CatalogPotential::PoschlTeller { a } => {
                params.insert("a".to_string(), a);
            }
            CatalogPotential::Box => {}
        }
        if params.values().any(|p| !p.is_finite()) {
            return Err(usage("potential parameters must be finite"));
        }
        let d = entry.default_grid();
        let grid = GridSpec {
            x_min: args.xmin.unwrap_or(d.x_min()),
            x_max: args.xmax.unwrap_or(d.x_max()),
            n: args.n.unwrap_or(d.len()),
        };
        validate_grid(&grid)?;
        let g = Grid1D::new(grid.x_min, grid.x_max, grid.n)?;
        let spec = PotentialSpec {
            kind: PotentialKind::Catalog,
            catalog_name: Some(entry.name().to_string()),
            params,
            table_path: None,
        };
        (spec, entry.sample(g))
    } else {
        if args.xmin.is_some() || args.xmax.is_some() || args.n.is_some() {
            return Err(usage("--xmin/--xmax/--n cannot be combined with a tabulated potential"));
        }
        if args.omega.is_some() || args.a.is_some() {
            return Err(usage("--omega and --a only apply to catalog potentials"));
        }
        let path = PathBuf::from(&args.potential);
        let v = ingest_table(&path)?;
        let spec = PotentialSpec {
            kind: PotentialKind::Tabulated,
            catalog_name: None,
            params: BTreeMap::new(),
            table_path: Some(path),
        };
        (spec, v)
    };

    let g = *potential.grid();
    let grid = GridSpec {
        x_min: g.x_min(),
        x_max: g.x_max(),
        n: g.len(),
    };
    validate_grid(&grid)?;
    if args.k == 0 {
        return Err(usage("k must be at least 1"));
    }
    // The partner ladder needs k + 1 levels of the interior Hamiltonian.
    if args.k + 1 > grid.n - 2 {
        return Err(usage(format!("k = {} is too large for n = {}", args.k, grid.n)));
    }

    Ok(Prepared {
        config: RunConfig {
            command: command.to_string(),
            potential: spec,
            grid,
            k: args.k,
            lambdas,
            integral_origin: args.integral_origin,
            output_path: args.out.clone(),
            output_format: args.format,
        },
        potential,
    })
}
