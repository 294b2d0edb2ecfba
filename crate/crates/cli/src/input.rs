//! Flag and config-file parsing: group descriptors, generating sets,
//! element lists, rational grids, and map specifications.

use std::path::Path;

use num_rational::Ratio;
use roughiso_core::coarse::{CoarseMap, ElementMap, Lambda};
use roughiso_core::families::FamilyRequest;
use roughiso_core::group::{
    parse_element, parse_group, schreier_f4_in_f2, Element, GeneratingSet, Group,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Defaults that can be stored in a TOML file and overridden by flags.
///
/// Every field is optional; a subcommand reads only the fields it
/// understands. Unknown keys are rejected so that typos surface as
/// config errors instead of silently ignored settings.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ExperimentConfig {
    pub group: Option<String>,
    pub gens: Option<String>,
    pub codomain_group: Option<String>,
    pub codomain_gens: Option<String>,
    pub map: Option<String>,
    pub center: Option<String>,
    pub g: Option<String>,
    pub h: Option<String>,
    pub base: Option<String>,
    pub images: Option<String>,
    pub subgroup: Option<String>,
    pub requests: Option<String>,
    pub rank: Option<u32>,
    pub scale: Option<u32>,
    pub radius: Option<u32>,
    pub k_max: Option<u32>,
    pub eps_budget: Option<u32>,
    pub max_order: Option<u64>,
    pub torsion: Option<u64>,
    pub cap: Option<u64>,
    pub directed: Option<bool>,
    pub lambda_grid: Option<String>,
    pub lambda: Option<String>,
    pub eps: Option<String>,
    pub format: Option<String>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<ExperimentConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config: {e}")))
    }
}

/// Flag value if present, else config value, else an error naming the flag.
pub fn pick<T: Clone>(
    flag: &Option<T>,
    from_config: Option<T>,
    name: &str,
) -> Result<T, CliError> {
    flag.clone()
        .or(from_config)
        .ok_or_else(|| CliError::Usage(format!("missing required value --{name}")))
}

/// Flag value if present, else config value, else the given default.
pub fn pick_or<T: Clone>(flag: &Option<T>, from_config: Option<T>, default: T) -> T {
    flag.clone().or(from_config).unwrap_or(default)
}

pub fn group_from(text: &str) -> Result<Group, CliError> {
    parse_group(text).map_err(|e| CliError::Usage(format!("bad group descriptor {text:?}: {e}")))
}

pub fn element_from(group: &Group, text: &str) -> Result<Element, CliError> {
    parse_element(group, text)
        .map_err(|e| CliError::Usage(format!("bad element {text:?} in {group}: {e}")))
}

/// Parses a semicolon-separated element list; empty entries are skipped.
pub fn elements_from(group: &Group, text: &str) -> Result<Vec<Element>, CliError> {
    text.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| element_from(group, t))
        .collect()
}

/// Builds a generating set from `free-basis` / `standard-basis` /
/// `standard` (the canonical generators) or a semicolon-separated
/// element list.
pub fn gens_from(group: &Group, text: &str) -> Result<GeneratingSet, CliError> {
    let label = text.to_string();
    let result = match text.trim() {
        "free-basis" | "standard-basis" | "standard" => {
            GeneratingSet::standard(group.clone(), label)
        }
        list => GeneratingSet::new(group.clone(), elements_from(group, list)?, label),
    };
    result.map_err(|e| CliError::Usage(format!("bad generating set {text:?}: {e}")))
}

/// Parses one rational such as `2`, `3/2`, or `-1/4`.
pub fn ratio_from(text: &str) -> Result<Lambda, CliError> {
    let bad = |detail: &str| CliError::Usage(format!("bad rational {text:?}: {detail}"));
    let mut parts = text.trim().splitn(2, '/');
    let numer: i64 = parts
        .next()
        .unwrap_or("")
        .trim()
        .parse()
        .map_err(|_| bad("integer numerator expected"))?;
    let denom: i64 = match parts.next() {
        Some(d) => d.trim().parse().map_err(|_| bad("integer denominator expected"))?,
        None => 1,
    };
    if denom == 0 {
        return Err(bad("zero denominator"));
    }
    Ok(Ratio::new(numer, denom))
}

/// Parses a semicolon-separated grid such as `1;3/2;2`.
pub fn lambda_grid_from(text: &str) -> Result<Vec<Lambda>, CliError> {
    let grid: Vec<Lambda> = text
        .split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(ratio_from)
        .collect::<Result<_, _>>()?;
    if grid.is_empty() {
        return Err(CliError::Usage("empty lambda grid".into()));
    }
    Ok(grid)
}

/// Parses separation requests written as `g|h|scale`, semicolon-separated.
pub fn requests_from(group: &Group, text: &str) -> Result<Vec<FamilyRequest>, CliError> {
    let mut requests = Vec::new();
    for chunk in text.split(';').map(str::trim).filter(|t| !t.is_empty()) {
        let parts: Vec<&str> = chunk.split('|').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(CliError::Usage(format!(
                "bad request {chunk:?}: expected g|h|scale"
            )));
        }
        let scale: u32 = parts[2]
            .parse()
            .map_err(|_| CliError::Usage(format!("bad scale in request {chunk:?}")))?;
        requests.push(FamilyRequest {
            g: element_from(group, parts[0])?,
            h: element_from(group, parts[1])?,
            scale,
        });
    }
    if requests.is_empty() {
        return Err(CliError::Usage("empty request list".into()));
    }
    Ok(requests)
}

/// Builds a coarse map from its text specification.
///
/// Forms: `identity`, `inversion`, `translation:<element>`,
/// `project-left`, `schreier`, `schreier-forward`, and
/// `hom:<image;image;...>` (generator images in the codomain, forward
/// only). The codomain argument is required for `hom:` and otherwise
/// checked against the shape the map itself determines.
pub fn map_from(
    spec: &str,
    domain: &Group,
    codomain: Option<&Group>,
) -> Result<CoarseMap, CliError> {
    let usage = |detail: String| CliError::Usage(detail);
    let map = match spec.trim() {
        "identity" => CoarseMap::identity(domain.clone()),
        "inversion" => CoarseMap::inversion(domain.clone())
            .map_err(|e| usage(format!("inversion map: {e}")))?,
        "project-left" => CoarseMap::project_left(domain.clone())
            .map_err(|e| usage(format!("project-left map: {e}")))?,
        "schreier" | "schreier-forward" => {
            let embedding = schreier_f4_in_f2();
            if domain != embedding.domain() {
                return Err(usage(format!(
                    "schreier map expects domain {}, got {domain}",
                    embedding.domain()
                )));
            }
            if spec.trim() == "schreier" {
                CoarseMap::schreier(embedding)
            } else {
                CoarseMap::forward_only(
                    embedding.domain().clone(),
                    embedding.codomain().clone(),
                    ElementMap::SchreierEmbed(embedding),
                )
                .map_err(|e| usage(format!("schreier-forward map: {e}")))?
            }
        }
        other => {
            if let Some(elem) = other.strip_prefix("translation:") {
                let g = element_from(domain, elem)?;
                CoarseMap::translation(domain.clone(), g)
                    .map_err(|e| usage(format!("translation map: {e}")))?
            } else if let Some(images) = other.strip_prefix("hom:") {
                let cod = codomain.ok_or_else(|| {
                    usage("hom: maps need an explicit codomain group".into())
                })?;
                let images = elements_from(cod, images)?;
                if images.len() != domain.generator_count() {
                    return Err(usage(format!(
                        "hom: expected {} generator images, got {}",
                        domain.generator_count(),
                        images.len()
                    )));
                }
                CoarseMap::forward_only(
                    domain.clone(),
                    cod.clone(),
                    ElementMap::Homomorphism { images },
                )
                .map_err(|e| usage(format!("hom map: {e}")))?
            } else {
                return Err(usage(format!("unknown map specification {other:?}")));
            }
        }
    };
    if let Some(cod) = codomain {
        if cod != map.codomain() {
            return Err(usage(format!(
                "map {spec:?} has codomain {}, but {cod} was given",
                map.codomain()
            )));
        }
    }
    Ok(map)
}
