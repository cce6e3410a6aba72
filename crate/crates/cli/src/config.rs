//! Experiment descriptions and set resolution.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::ValueEnum;
use apsets::{IntegerSet, SetFamily};
use serde::{Deserialize, Serialize};


use crate::{FamilyKind, Format, SetArgs};

/// Where a set comes from.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(untagged)]
pub enum SetSpec {
    File { file: String, x: Option<u64> },
    Family {
        #[serde(flatten)]
        family: SetFamily,
        x: u64,
    },
}

/// Everything that determines a run; echoed into JSON output.
#[derive(Serialize, Debug, Clone)]
pub struct ExperimentConfig {
    pub command: &'static str,
    pub sets: Vec<SetSpec>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub q_schedule: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arcs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<serde_json::Value>,
    pub output: Option<String>,
    pub format: Format,
}

/// Sidecar written next to a generated set file.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct Sidecar {
    #[serde(flatten)]
    pub family: SetFamily,
    pub id: String,
    pub x: u64,
    pub count: u64,
    pub density: f64,
}

pub fn sidecar_path(set_file: &Path) -> PathBuf {
    let mut s = set_file.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

pub fn family_from_args(a: &SetArgs) -> anyhow::Result<SetFamily> {
    let Some(kind) = a.family else {
        bail!("no set given: pass --set <file> or --family");
    };
    let name = kind.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let need = |v: Option<u64>, flag: &str| {
        v.with_context(|| format!("--family {name} needs --{flag}"))
    };
    Ok(match kind {
        FamilyKind::Kfree => SetFamily::Kfree {
            k: a.k.context("--family kfree needs --k")?,
        },
        FamilyKind::Beatty => SetFamily::Beatty { r: need(a.r, "r")? },
        FamilyKind::Periodic => SetFamily::Periodic {
            q: need(a.q, "q")?,
            residues: a.residues.clone(),
        },
        FamilyKind::Sifted => SetFamily::Sifted {
            bound: need(a.bound, "bound")?,
        },
        FamilyKind::Full => SetFamily::Full,
    })
}

pub fn spec_from_args(a: &SetArgs) -> anyhow::Result<SetSpec> {
    match (&a.set, a.family) {
        (Some(_), Some(_)) => bail!("--set and --family are mutually exclusive"),
        (Some(p), None) => Ok(SetSpec::File {
            file: p.display().to_string(),
            x: a.x,
        }),
        (None, _) => Ok(SetSpec::Family {
            family: family_from_args(a)?,
            x: a.x.context("an inline set needs --x")?,
        }),
    }
}

/// A resolved set with the identifier used in report rows.
pub struct LoadedSet {
    pub id: String,
    pub set: IntegerSet,
}

pub fn load(spec: &SetSpec) -> anyhow::Result<LoadedSet> {
    match spec {
        SetSpec::Family { family, x } => Ok(LoadedSet {
            id: family.id(),
            set: family.generate(*x)?,
        }),
        SetSpec::File { file, x } => {
            let path = Path::new(file);
            let bytes = std::fs::read(path).with_context(|| format!("reading set file {file}"))?;
            let mut set = IntegerSet::from_bytes(&bytes).with_context(|| format!("set file {file}"))?;
            if let Some(x) = x {
                set = set.truncate(*x)?;
            }
            let id = match std::fs::read(sidecar_path(path)) {
                Ok(b) => serde_json::from_slice::<Sidecar>(&b)
                    .with_context(|| format!("sidecar of {file}"))?
                    .id,
                Err(_) => path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| file.clone()),
            };
            Ok(LoadedSet { id, set })
        }
    }
}
