//! `roughiso`: word metrics, growth, and rough/quasi-isometry
//! experiments on marked groups, with machine-readable reports.
//!
//! Exit codes: 0 success / property holds, 1 property fails or a
//! refutation witness was found (the report is still printed), 2 a
//! resource cap stopped the computation, 3 invalid flags or config.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use roughiso_core::coarse::{check_rough_isometry, default_lambda_grid, fit_parameters};
use roughiso_core::families::{
    family_abelian_z, family_free, image_conditions, rigidity_conditions, torsion_obstruction,
    verify_property, verify_separation, FamilyRequest,
};
use roughiso_core::isometry::{
    ball_pairs, check_sign_homomorphy, enumerate_isometries, refute_shared_candidate,
    shared_isometry_group, sign_case_table, DEFAULT_MAX_ISOMETRY_ORDER,
};
use roughiso_core::metric::{ball_to_csv, ball_to_dot, enumerate_ball, growth_report};
use roughiso_core::quotient::{
    build_quotient_isometry, enlargement_isometry, fit_quotient, homomorphism_analysis,
    quotient_recognition,
};

use roughiso_cli::input::{
    element_from, elements_from, gens_from, group_from, lambda_grid_from, map_from, pick,
    pick_or, ratio_from, requests_from, ExperimentConfig,
};
use roughiso_cli::{output, CliError, EXIT_CAP, EXIT_FAIL, EXIT_PASS};

const DEFAULT_CAP: u64 = 5_000_000;
const CAP_ENV: &str = "ROUGHISO_CAP";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Dot,
    Csv,
}

#[derive(Parser)]
#[command(
    name = "roughiso",
    version,
    about = "Word metrics, growth, and rough/quasi-isometry experiments on marked groups"
)]
struct Cli {
    /// TOML file supplying defaults for any flag
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output format (JSON is the machine-readable primary form)
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// Element cap for every breadth-first traversal
    #[arg(long, global = true, value_name = "N")]
    cap: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the ball of a given radius in a marked group
    Ball {
        #[arg(long)]
        group: Option<String>,
        /// Generators: `free-basis` / `standard-basis` or `g1;g2;...`
        #[arg(long)]
        gens: Option<String>,
        #[arg(long)]
        radius: Option<u32>,
        /// Center element (defaults to the identity)
        #[arg(long)]
        center: Option<String>,
        /// Use only the generators as steps, not their inverses
        #[arg(long)]
        directed: bool,
    },
    /// Ball sizes with per-radius growth-rate estimators
    Growth {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        gens: Option<String>,
        #[arg(long = "kmax")]
        k_max: Option<u32>,
        #[arg(long)]
        directed: bool,
    },
    /// Fit multiplicative/additive distortion constants on finite balls
    Fit {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        gens: Option<String>,
        /// Map spec: identity | inversion | translation:<g> |
        /// project-left | schreier | schreier-forward | hom:<images>
        #[arg(long)]
        map: Option<String>,
        #[arg(long = "codomain-group")]
        codomain_group: Option<String>,
        #[arg(long = "codomain-gens")]
        codomain_gens: Option<String>,
        #[arg(long)]
        radius: Option<u32>,
        /// Multiplicative grid, e.g. `1;3/2;2`
        #[arg(long = "lambda-grid")]
        lambda_grid: Option<String>,
    },
    /// Verify an additive-only distortion budget (λ fixed at 1)
    RoughCheck {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        gens: Option<String>,
        #[arg(long)]
        map: Option<String>,
        #[arg(long = "codomain-group")]
        codomain_group: Option<String>,
        #[arg(long = "codomain-gens")]
        codomain_gens: Option<String>,
        #[arg(long)]
        radius: Option<u32>,
        #[arg(long = "eps-budget")]
        eps_budget: Option<u32>,
    },
    /// Build and certify a separating family in a free group
    FamilyFree {
        #[arg(long)]
        rank: Option<u32>,
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        h: Option<String>,
        #[arg(long)]
        scale: Option<u32>,
    },
    /// Build and certify a separating family in the integers
    FamilyZ {
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        h: Option<String>,
        #[arg(long)]
        scale: Option<u32>,
    },
    /// Check the one-step/far-apart property of a marking for a pair
    VerifyProperty {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        gens: Option<String>,
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        h: Option<String>,
        #[arg(long)]
        scale: Option<u32>,
    },
    /// Structural conditions on a generating set, images, or torsion order
    CheckConditions {
        #[arg(long)]
        group: Option<String>,
        /// Check the rigidity conditions on these base elements
        #[arg(long)]
        base: Option<String>,
        /// Check the image-side conditions on these elements
        #[arg(long)]
        images: Option<String>,
        /// Check whether a cyclic factor of this order is admissible
        #[arg(long)]
        torsion: Option<u64>,
    },
    /// Enumerate all isometries of one finite marked group
    IsomEnum {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        gens: Option<String>,
        #[arg(long = "max-order")]
        max_order: Option<u64>,
    },
    /// Isometries shared by every generating-set marking of a finite group
    SharedIsom {
        #[arg(long)]
        group: Option<String>,
        #[arg(long = "max-order")]
        max_order: Option<u64>,
    },
    /// Try to refute a candidate self-map via separating families
    Refute {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        map: Option<String>,
        /// Separation requests `g|h|scale`, semicolon-separated
        #[arg(long)]
        requests: Option<String>,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        eps: Option<String>,
    },
    /// Check φ(gh) = φ(g)φ(h)^±1 over all pairs from a ball
    SignHomomorphy {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        gens: Option<String>,
        #[arg(long)]
        map: Option<String>,
        #[arg(long = "codomain-group")]
        codomain_group: Option<String>,
        #[arg(long)]
        radius: Option<u32>,
    },
    /// The sixteen sign cases and the relation each one forces
    CaseTable,
    /// Collapse the finite factor of a product along the left projection
    Quotient {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        gens: Option<String>,
        #[arg(long)]
        radius: Option<u32>,
    },
    /// Measure the distortion of enlarging a marking by a finite subgroup
    Enlarge {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        gens: Option<String>,
        /// Finite subgroup elements, semicolon-separated
        #[arg(long)]
        subgroup: Option<String>,
        #[arg(long)]
        radius: Option<u32>,
    },
    /// Kernel growth, image coverage, and quotient recognition for a map
    HomAnalysis {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        gens: Option<String>,
        #[arg(long)]
        map: Option<String>,
        #[arg(long = "codomain-group")]
        codomain_group: Option<String>,
        #[arg(long = "codomain-gens")]
        codomain_gens: Option<String>,
        #[arg(long)]
        radius: Option<u32>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((report, code)) => {
            print!("{report}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

/// Executes one subcommand, returning the rendered report and exit code.
fn run(cli: Cli) -> Result<(String, u8), CliError> {
    let config = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    let format = resolve_format(cli.format, &config)?;
    let cap = resolve_cap(cli.cap, &config)?;

    // Commands other than `ball` and `growth` emit JSON only.
    let json_only = |format: OutputFormat| -> Result<(), CliError> {
        if format != OutputFormat::Json {
            return Err(CliError::Usage(
                "this subcommand only supports --format json".into(),
            ));
        }
        Ok(())
    };

    match &cli.command {
        Command::Ball {
            group,
            gens,
            radius,
            center,
            directed,
        } => {
            let group = group_from(&pick(group, config.group.clone(), "group")?)?;
            let gens = gens_from(&group, &pick(gens, config.gens.clone(), "gens")?)?;
            let radius = pick(radius, config.radius, "radius")?;
            let center = match pick_or(center, config.center.clone(), String::new()) {
                text if text.is_empty() => group.identity(),
                text => element_from(&group, &text)?,
            };
            let directed = *directed || config.directed.unwrap_or(false);
            let ball = enumerate_ball(&gens, &center, radius, cap, directed)?;
            let code = if ball.truncated() { EXIT_CAP } else { EXIT_PASS };
            let report = match format {
                OutputFormat::Json => output::render(&output::ball(&ball)),
                OutputFormat::Dot => ball_to_dot(&ball),
                OutputFormat::Csv => ball_to_csv(&ball),
            };
            Ok((report, code))
        }
        Command::Growth {
            group,
            gens,
            k_max,
            directed,
        } => {
            let group = group_from(&pick(group, config.group.clone(), "group")?)?;
            let gens = gens_from(&group, &pick(gens, config.gens.clone(), "gens")?)?;
            let k_max = pick(k_max, config.k_max, "kmax")?;
            let directed = *directed || config.directed.unwrap_or(false);
            let report = growth_report(&gens, k_max, cap, directed)?;
            let code = if report.truncated { EXIT_CAP } else { EXIT_PASS };
            let text = match format {
                OutputFormat::Json => output::render(&output::growth(&gens, directed, &report)),
                OutputFormat::Csv => growth_csv(&report),
                OutputFormat::Dot => {
                    return Err(CliError::Usage(
                        "growth supports --format json or csv".into(),
                    ))
                }
            };
            Ok((text, code))
        }
        Command::Fit {
            group,
            gens,
            map,
            codomain_group,
            codomain_gens,
            radius,
            lambda_grid,
        } => {
            json_only(format)?;
            let (map_spec, map, s_dom, s_cod) = resolve_map_setup(
                group,
                gens,
                map,
                codomain_group,
                codomain_gens,
                &config,
            )?;
            let radius = pick(radius, config.radius, "radius")?;
            let grid = match pick_or(lambda_grid, config.lambda_grid.clone(), String::new()) {
                text if text.is_empty() => default_lambda_grid(),
                text => lambda_grid_from(&text)?,
            };
            let fit = fit_parameters(&map, &s_dom, &s_cod, radius, &grid, cap)?;
            let dto = output::qi_fit(map.domain(), map.codomain(), &map_spec, &fit);
            Ok((output::render(&dto), EXIT_PASS))
        }
        Command::RoughCheck {
            group,
            gens,
            map,
            codomain_group,
            codomain_gens,
            radius,
            eps_budget,
        } => {
            json_only(format)?;
            let (map_spec, map, s_dom, s_cod) = resolve_map_setup(
                group,
                gens,
                map,
                codomain_group,
                codomain_gens,
                &config,
            )?;
            let radius = pick(radius, config.radius, "radius")?;
            let eps_budget = pick(eps_budget, config.eps_budget, "eps-budget")?;
            let check = check_rough_isometry(&map, &s_dom, &s_cod, radius, eps_budget, cap)?;
            let code = if check.pass { EXIT_PASS } else { EXIT_FAIL };
            let dto = output::rough_check(map.domain(), map.codomain(), &map_spec, &check);
            Ok((output::render(&dto), code))
        }
        Command::FamilyFree { rank, g, h, scale } => {
            json_only(format)?;
            let rank = pick(rank, config.rank, "rank")?;
            let free = roughiso_core::group::Group::Free(rank);
            let g = element_from(&free, &pick(g, config.g.clone(), "g")?)?;
            let h = element_from(&free, &pick(h, config.h.clone(), "h")?)?;
            let scale = pick(scale, config.scale, "scale")?;
            let fam = family_free(rank, &g, &h, scale)?;
            let verification = verify_separation(&fam, cap)?;
            let code = if verification.pass { EXIT_PASS } else { EXIT_FAIL };
            Ok((output::render(&output::family(&fam, &verification)), code))
        }
        Command::FamilyZ { g, h, scale } => {
            json_only(format)?;
            let parse_int = |text: &str| -> Result<i64, CliError> {
                text.trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad integer {text:?}")))
            };
            let g = parse_int(&pick(g, config.g.clone(), "g")?)?;
            let h = parse_int(&pick(h, config.h.clone(), "h")?)?;
            let scale = pick(scale, config.scale, "scale")?;
            let fam = family_abelian_z(g, h, scale)?;
            let verification = verify_separation(&fam, cap)?;
            let code = if verification.pass { EXIT_PASS } else { EXIT_FAIL };
            Ok((output::render(&output::family(&fam, &verification)), code))
        }
        Command::VerifyProperty {
            group,
            gens,
            g,
            h,
            scale,
        } => {
            json_only(format)?;
            let group = group_from(&pick(group, config.group.clone(), "group")?)?;
            let gens = gens_from(&group, &pick(gens, config.gens.clone(), "gens")?)?;
            let g = element_from(&group, &pick(g, config.g.clone(), "g")?)?;
            let h = element_from(&group, &pick(h, config.h.clone(), "h")?)?;
            let scale = pick(scale, config.scale, "scale")?;
            let request = FamilyRequest {
                g: g.clone(),
                h: h.clone(),
                scale,
            };
            let report = verify_property(&gens, &request, cap)?;
            let code = if report.pass { EXIT_PASS } else { EXIT_FAIL };
            let dto = output::property(&gens, &g, &h, scale, &report);
            Ok((output::render(&dto), code))
        }
        Command::CheckConditions {
            group,
            base,
            images,
            torsion,
        } => {
            json_only(format)?;
            let group = group_from(&pick(group, config.group.clone(), "group")?)?;
            let base = base.clone().or(config.base.clone());
            let images = images.clone().or(config.images.clone());
            let torsion = torsion.or(config.torsion);
            let given = usize::from(base.is_some())
                + usize::from(images.is_some())
                + usize::from(torsion.is_some());
            if given != 1 {
                return Err(CliError::Usage(
                    "give exactly one of --base, --images, --torsion".into(),
                ));
            }
            let dto = if let Some(base) = base {
                let elements = elements_from(&group, &base)?;
                output::conditions(&group, "base", &rigidity_conditions(&group, &elements)?)
            } else if let Some(images) = images {
                let elements = elements_from(&group, &images)?;
                output::conditions(&group, "images", &image_conditions(&group, &elements)?)
            } else {
                output::torsion(&group, &torsion_obstruction(torsion.expect("checked above")))
            };
            let code = if dto.pass { EXIT_PASS } else { EXIT_FAIL };
            Ok((output::render(&dto), code))
        }
        Command::IsomEnum {
            group,
            gens,
            max_order,
        } => {
            json_only(format)?;
            let group = group_from(&pick(group, config.group.clone(), "group")?)?;
            let gens = gens_from(&group, &pick(gens, config.gens.clone(), "gens")?)?;
            let max_order = pick_or(max_order, config.max_order, DEFAULT_MAX_ISOMETRY_ORDER);
            let report = enumerate_isometries(&gens, max_order)?;
            Ok((
                output::render(&output::isometries(&gens, &report)),
                EXIT_PASS,
            ))
        }
        Command::SharedIsom { group, max_order } => {
            json_only(format)?;
            let group = group_from(&pick(group, config.group.clone(), "group")?)?;
            let max_order = pick_or(max_order, config.max_order, DEFAULT_MAX_ISOMETRY_ORDER);
            let report = shared_isometry_group(&group, max_order)?;
            Ok((
                output::render(&output::shared_isometries(&group, &report)),
                EXIT_PASS,
            ))
        }
        Command::Refute {
            group,
            map,
            requests,
            lambda,
            eps,
        } => {
            json_only(format)?;
            let group = group_from(&pick(group, config.group.clone(), "group")?)?;
            let map_spec = pick(map, config.map.clone(), "map")?;
            let map = map_from(&map_spec, &group, Some(&group))?;
            let requests = requests_from(
                &group,
                &pick(requests, config.requests.clone(), "requests")?,
            )?;
            let lambda = ratio_from(&pick_or(lambda, config.lambda.clone(), "1".into()))?;
            let eps = ratio_from(&pick_or(eps, config.eps.clone(), "0".into()))?;
            let summary = refute_shared_candidate(&map, &requests, lambda, eps, cap)?;
            let code = if summary.is_refuted() { EXIT_FAIL } else { EXIT_PASS };
            let dto = output::refutation(&group, &map_spec, &summary);
            Ok((output::render(&dto), code))
        }
        Command::SignHomomorphy {
            group,
            gens,
            map,
            codomain_group,
            radius,
        } => {
            json_only(format)?;
            let group = group_from(&pick(group, config.group.clone(), "group")?)?;
            let gens = gens_from(&group, &pick(gens, config.gens.clone(), "gens")?)?;
            let codomain = match codomain_group.clone().or(config.codomain_group.clone()) {
                Some(text) => Some(group_from(&text)?),
                None => None,
            };
            let map_spec = pick(map, config.map.clone(), "map")?;
            let map = map_from(&map_spec, &group, codomain.as_ref())?;
            let radius = pick_or(radius, config.radius, 2);
            let pairs = ball_pairs(&gens, radius, cap)?;
            let report = check_sign_homomorphy(&map, &pairs)?;
            let code = if report.pass { EXIT_PASS } else { EXIT_FAIL };
            let dto =
                output::sign_homomorphy(&group, map.codomain(), &map_spec, radius, &report);
            Ok((output::render(&dto), code))
        }
        Command::CaseTable => {
            json_only(format)?;
            let rows = sign_case_table();
            Ok((output::render(&output::case_table(&rows)), EXIT_PASS))
        }
        Command::Quotient {
            group,
            gens,
            radius,
        } => {
            json_only(format)?;
            let group = group_from(&pick(group, config.group.clone(), "group")?)?;
            let base = gens_from(&group, &pick(gens, config.gens.clone(), "gens")?)?;
            let radius = pick_or(radius, config.radius, 4);
            let construction = build_quotient_isometry(&base)?;
            let fit = fit_quotient(&construction, radius, cap)?;
            let dto = output::quotient(&base, &construction, &fit);
            Ok((output::render(&dto), EXIT_PASS))
        }
        Command::Enlarge {
            group,
            gens,
            subgroup,
            radius,
        } => {
            json_only(format)?;
            let group = group_from(&pick(group, config.group.clone(), "group")?)?;
            let base = gens_from(&group, &pick(gens, config.gens.clone(), "gens")?)?;
            let subgroup = elements_from(
                &group,
                &pick(subgroup, config.subgroup.clone(), "subgroup")?,
            )?;
            let radius = pick(radius, config.radius, "radius")?;
            let report = enlargement_isometry(&base, &subgroup, radius, cap)?;
            let dto = output::enlargement(&subgroup, &report);
            Ok((output::render(&dto), EXIT_PASS))
        }
        Command::HomAnalysis {
            group,
            gens,
            map,
            codomain_group,
            codomain_gens,
            radius,
        } => {
            json_only(format)?;
            let (map_spec, map, s_dom, s_cod) = resolve_map_setup(
                group,
                gens,
                map,
                codomain_group,
                codomain_gens,
                &config,
            )?;
            let radius = pick(radius, config.radius, "radius")?;
            let analysis = homomorphism_analysis(&map, &s_dom, &s_cod, radius, cap)?;
            let recognition = quotient_recognition(&map, &s_dom, &s_cod, radius, cap)?;
            let code = if recognition.pass { EXIT_PASS } else { EXIT_FAIL };
            let dto = output::hom_analysis(
                map.domain(),
                map.codomain(),
                &map_spec,
                &analysis,
                &recognition,
            );
            Ok((output::render(&dto), code))
        }
    }
}

/// Shared setup for the map-based subcommands: domain group and marking,
/// the map itself, and a codomain marking (reusing the domain marking
/// for self-maps, standard generators otherwise unless given).
fn resolve_map_setup(
    group: &Option<String>,
    gens: &Option<String>,
    map: &Option<String>,
    codomain_group: &Option<String>,
    codomain_gens: &Option<String>,
    config: &ExperimentConfig,
) -> Result<
    (
        String,
        roughiso_core::coarse::CoarseMap,
        roughiso_core::group::GeneratingSet,
        roughiso_core::group::GeneratingSet,
    ),
    CliError,
> {
    let domain = group_from(&pick(group, config.group.clone(), "group")?)?;
    let s_dom = gens_from(&domain, &pick(gens, config.gens.clone(), "gens")?)?;
    let codomain = match codomain_group.clone().or(config.codomain_group.clone()) {
        Some(text) => Some(group_from(&text)?),
        None => None,
    };
    let map_spec = pick(map, config.map.clone(), "map")?;
    let map = map_from(&map_spec, &domain, codomain.as_ref())?;
    let s_cod = match codomain_gens.clone().or(config.codomain_gens.clone()) {
        Some(text) => gens_from(map.codomain(), &text)?,
        None if map.codomain() == &domain => s_dom.clone(),
        None => gens_from(map.codomain(), "standard-basis")?,
    };
    Ok((map_spec, map, s_dom, s_cod))
}

fn resolve_format(
    flag: Option<OutputFormat>,
    config: &ExperimentConfig,
) -> Result<OutputFormat, CliError> {
    if let Some(f) = flag {
        return Ok(f);
    }
    match config.format.as_deref() {
        None => Ok(OutputFormat::Json),
        Some("json") => Ok(OutputFormat::Json),
        Some("dot") => Ok(OutputFormat::Dot),
        Some("csv") => Ok(OutputFormat::Csv),
        Some(other) => Err(CliError::Usage(format!("unknown format {other:?}"))),
    }
}

/// Cap priority: `--cap` flag, config, `ROUGHISO_CAP`, built-in default.
fn resolve_cap(flag: Option<u64>, config: &ExperimentConfig) -> Result<u64, CliError> {
    if let Some(c) = flag {
        return Ok(c);
    }
    if let Some(c) = config.cap {
        return Ok(c);
    }
    match std::env::var(CAP_ENV) {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad {CAP_ENV} value {text:?}"))),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

fn growth_csv(report: &roughiso_core::metric::GrowthReport) -> String {
    let mut text = String::from("k,ball,ball_root,sphere_root\n");
    for (k, size) in report.sizes.iter().enumerate() {
        let (ball_root, sphere_root) = if k == 0 {
            (String::new(), String::new())
        } else {
            (
                format!("{}", report.ball_roots[k - 1]),
                format!("{}", report.sphere_roots[k - 1]),
            )
        };
        text.push_str(&format!("{k},{size},{ball_root},{sphere_root}\n"));
    }
    text
}
