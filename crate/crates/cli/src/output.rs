//! Report structures serialized as the primary JSON output.
//!
//! Every field is either a scalar, a string in canonical element text,
//! or a nested structure of the same kind, so serialization is
//! byte-stable across runs: field order follows declaration order and
//! no hash-ordered container is ever serialized.

use roughiso_core::coarse::{
    Defect, Lambda, PairWitness, QiFit, RoughCheck, RoughFailure, WitnessSide,
};
use roughiso_core::families::{
    ConditionReport, PropertyReport, SeparatingFamily, SeparationReport, TorsionReport,
};
use roughiso_core::group::{format_element, Element, GeneratingSet, Group};
use roughiso_core::isometry::{
    CaseRow, IsometryReport, RefutationSummary, RelationClass, SharedIsometryReport,
    SignHomReport, SignOutcome, StructureHint,
};
use roughiso_core::metric::{Ball, GrowthReport, Length};
use roughiso_core::quotient::{
    EnlargementReport, HomomorphismAnalysis, QuotientIsometry, RecognitionReport,
    RecognitionStage,
};
use serde::Serialize;

pub fn elem(group: &Group, e: &Element) -> String {
    format_element(group, e)
}

pub fn elems(group: &Group, list: &[Element]) -> Vec<String> {
    list.iter().map(|e| elem(group, e)).collect()
}

pub fn gens_text(gens: &GeneratingSet) -> Vec<String> {
    elems(gens.group(), gens.elements())
}

/// Rationals print as `3` or `3/2`, never as floats.
pub fn ratio(r: &Lambda) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn ratios(list: &[Lambda]) -> Vec<String> {
    list.iter().map(ratio).collect()
}

#[derive(Serialize)]
pub struct LengthDto {
    pub kind: &'static str,
    pub value: Option<u32>,
}

pub fn length(l: &Length) -> LengthDto {
    match l {
        Length::Exact(d) => LengthDto {
            kind: "exact",
            value: Some(*d),
        },
        Length::AtLeast(d) => LengthDto {
            kind: "at-least",
            value: Some(*d),
        },
        Length::Infinite => LengthDto {
            kind: "infinite",
            value: None,
        },
    }
}

#[derive(Serialize)]
pub struct DefectDto {
    pub kind: &'static str,
    pub value: u32,
}

pub fn defect(d: &Defect) -> DefectDto {
    match d {
        Defect::Exact(v) => DefectDto {
            kind: "exact",
            value: *v,
        },
        Defect::AtLeast(v) => DefectDto {
            kind: "at-least",
            value: *v,
        },
    }
}

pub fn structure(hint: &StructureHint) -> &'static str {
    match hint {
        StructureHint::TranslationsOnly => "translations-only",
        StructureHint::TranslationsAndInversion => "translations-and-inversion",
        StructureHint::Other => "other",
    }
}

#[derive(Serialize)]
pub struct BallEntryDto {
    pub element: String,
    pub distance: u32,
}

#[derive(Serialize)]
pub struct BallDto {
    pub group: String,
    pub gens: Vec<String>,
    pub center: String,
    pub directed: bool,
    pub requested_radius: u32,
    pub radius: u32,
    pub truncated: bool,
    pub sizes: Vec<u64>,
    pub sphere_sizes: Vec<u64>,
    pub elements: Vec<BallEntryDto>,
}

pub fn ball(b: &Ball) -> BallDto {
    let group = b.group();
    BallDto {
        group: group.to_string(),
        gens: gens_text(b.gens()),
        center: elem(group, b.center()),
        directed: b.directed(),
        requested_radius: b.requested_radius(),
        radius: b.radius(),
        truncated: b.truncated(),
        sizes: b.sizes(),
        sphere_sizes: b.sphere_sizes().to_vec(),
        elements: b
            .sorted_entries()
            .into_iter()
            .map(|(e, d)| BallEntryDto {
                element: elem(group, &e),
                distance: d,
            })
            .collect(),
    }
}

#[derive(Serialize)]
pub struct GrowthDto {
    pub group: String,
    pub gens: Vec<String>,
    pub k_max: u32,
    pub directed: bool,
    pub truncated: bool,
    pub sizes: Vec<u64>,
    pub ball_roots: Vec<f64>,
    pub sphere_roots: Vec<f64>,
    pub log_slope: f64,
}

pub fn growth(gens: &GeneratingSet, directed: bool, r: &GrowthReport) -> GrowthDto {
    GrowthDto {
        group: gens.group().to_string(),
        gens: gens_text(gens),
        k_max: r.k_max,
        directed,
        truncated: r.truncated,
        sizes: r.sizes.clone(),
        ball_roots: r.ball_roots.clone(),
        sphere_roots: r.sphere_roots.clone(),
        log_slope: r.log_slope,
    }
}

#[derive(Serialize)]
pub struct WitnessDto {
    pub side: &'static str,
    pub x: String,
    pub y: String,
    pub source_distance: u32,
    pub target_distance: u32,
}

pub fn witness(domain: &Group, codomain: &Group, w: &PairWitness) -> WitnessDto {
    // A forward witness pair lives in the domain, a backward one in the
    // codomain.
    let (side, source) = match w.side {
        WitnessSide::Forward => ("forward", domain),
        WitnessSide::Backward => ("backward", codomain),
    };
    WitnessDto {
        side,
        x: elem(source, &w.x),
        y: elem(source, &w.y),
        source_distance: w.source_distance,
        target_distance: w.target_distance,
    }
}

#[derive(Serialize)]
pub struct BestDto {
    pub lambda: String,
    pub eps: String,
}

#[derive(Serialize)]
pub struct QiFitDto {
    pub domain: String,
    pub codomain: String,
    pub map: String,
    pub radius: u32,
    pub anchor_radius: u32,
    pub lambda_grid: Vec<String>,
    pub eps_of_lambda: Vec<String>,
    pub best: BestDto,
    pub witnesses: Vec<Option<WitnessDto>>,
    pub inner_radius: u32,
    pub nearness_defect: DefectDto,
    pub surjectivity_radius: u32,
    pub surjectivity_defect: DefectDto,
    pub distance_overflow: bool,
}

pub fn qi_fit(domain: &Group, codomain: &Group, map_spec: &str, fit: &QiFit) -> QiFitDto {
    QiFitDto {
        domain: domain.to_string(),
        codomain: codomain.to_string(),
        map: map_spec.to_string(),
        radius: fit.radius,
        anchor_radius: fit.anchor_radius,
        lambda_grid: ratios(&fit.lambda_grid),
        eps_of_lambda: ratios(&fit.eps_of_lambda),
        best: BestDto {
            lambda: ratio(&fit.best.0),
            eps: ratio(&fit.best.1),
        },
        witnesses: fit
            .witnesses
            .iter()
            .map(|w| w.as_ref().map(|w| witness(domain, codomain, w)))
            .collect(),
        inner_radius: fit.inner_radius,
        nearness_defect: defect(&fit.nearness_defect),
        surjectivity_radius: fit.surjectivity_radius,
        surjectivity_defect: defect(&fit.surjectivity_defect),
        distance_overflow: fit.distance_overflow,
    }
}

#[derive(Serialize)]
pub struct FailureDto {
    pub kind: &'static str,
    pub witness: Option<WitnessDto>,
    pub defect: Option<DefectDto>,
}

#[derive(Serialize)]
pub struct RoughCheckDto {
    pub pass: bool,
    pub eps_budget: u32,
    pub failure: Option<FailureDto>,
    pub fit: QiFitDto,
}

pub fn rough_check(
    domain: &Group,
    codomain: &Group,
    map_spec: &str,
    check: &RoughCheck,
) -> RoughCheckDto {
    let failure = check.failure.as_ref().map(|f| match f {
        RoughFailure::Embedding(w) => FailureDto {
            kind: "embedding",
            witness: Some(witness(domain, codomain, w)),
            defect: None,
        },
        RoughFailure::Nearness { defect: d } => FailureDto {
            kind: "nearness",
            witness: None,
            defect: Some(defect(d)),
        },
        RoughFailure::Surjectivity { defect: d } => FailureDto {
            kind: "surjectivity",
            witness: None,
            defect: Some(defect(d)),
        },
        RoughFailure::Unresolved => FailureDto {
            kind: "unresolved",
            witness: None,
            defect: None,
        },
    });
    RoughCheckDto {
        pass: check.pass,
        eps_budget: check.eps_budget,
        failure,
        fit: qi_fit(domain, codomain, map_spec, &check.fit),
    }
}

#[derive(Serialize)]
pub struct SeparationDto {
    pub pass: bool,
    pub near_length: u32,
    pub far_length: LengthDto,
    pub required: u32,
}

pub fn separation(r: &SeparationReport) -> SeparationDto {
    SeparationDto {
        pass: r.pass,
        near_length: r.near_length,
        far_length: length(&r.far_length),
        required: r.required,
    }
}

#[derive(Serialize)]
pub struct FamilyDto {
    pub group: String,
    pub gens: Vec<String>,
    pub near: String,
    pub near_length: u32,
    pub far: String,
    pub scale: u32,
    pub swapped: bool,
    pub verification: SeparationDto,
}

pub fn family(f: &SeparatingFamily, verification: &SeparationReport) -> FamilyDto {
    let group = f.gens.group();
    FamilyDto {
        group: group.to_string(),
        gens: gens_text(&f.gens),
        near: elem(group, &f.near),
        near_length: f.near_length,
        far: elem(group, &f.far),
        scale: f.scale,
        swapped: f.swapped,
        verification: separation(verification),
    }
}

#[derive(Serialize)]
pub struct PropertyDto {
    pub group: String,
    pub gens: Vec<String>,
    pub g: String,
    pub h: String,
    pub scale: u32,
    pub pass: bool,
    pub g_length: LengthDto,
    pub h_length: LengthDto,
    pub required: u32,
}

pub fn property(
    gens: &GeneratingSet,
    g: &Element,
    h: &Element,
    scale: u32,
    r: &PropertyReport,
) -> PropertyDto {
    let group = gens.group();
    PropertyDto {
        group: group.to_string(),
        gens: gens_text(gens),
        g: elem(group, g),
        h: elem(group, h),
        scale,
        pass: r.pass,
        g_length: length(&r.g_length),
        h_length: length(&r.h_length),
        required: r.required,
    }
}

#[derive(Serialize)]
pub struct ConditionDto {
    pub name: String,
    pub holds: bool,
    pub witness: Option<Vec<String>>,
}

#[derive(Serialize)]
pub struct TorsionDto {
    pub order: u64,
    pub totient: u64,
    pub admissible: bool,
}

#[derive(Serialize)]
pub struct ConditionsDto {
    pub group: String,
    pub mode: &'static str,
    pub pass: bool,
    pub conditions: Vec<ConditionDto>,
    pub torsion: Option<TorsionDto>,
}

pub fn conditions(group: &Group, mode: &'static str, r: &ConditionReport) -> ConditionsDto {
    ConditionsDto {
        group: group.to_string(),
        mode,
        pass: r.pass,
        conditions: r
            .conditions
            .iter()
            .map(|c| ConditionDto {
                name: c.name.to_string(),
                holds: c.holds,
                witness: c.witness.as_ref().map(|w| elems(group, w)),
            })
            .collect(),
        torsion: None,
    }
}

pub fn torsion(group: &Group, r: &TorsionReport) -> ConditionsDto {
    ConditionsDto {
        group: group.to_string(),
        mode: "torsion",
        pass: r.admissible,
        conditions: Vec::new(),
        torsion: Some(TorsionDto {
            order: r.order,
            totient: r.totient,
            admissible: r.admissible,
        }),
    }
}

#[derive(Serialize)]
pub struct IsometriesDto {
    pub group: String,
    pub gens: Vec<String>,
    pub order: u64,
    pub structure: &'static str,
    pub elements: Vec<String>,
    pub permutations: Vec<Vec<u32>>,
}

pub fn isometries(gens: &GeneratingSet, r: &IsometryReport) -> IsometriesDto {
    let group = gens.group();
    IsometriesDto {
        group: group.to_string(),
        gens: gens_text(gens),
        order: r.permutations.len() as u64,
        structure: structure(&r.structure),
        elements: elems(group, &r.elements),
        permutations: r.permutations.clone(),
    }
}

#[derive(Serialize)]
pub struct SharedIsometriesDto {
    pub group: String,
    pub order: u64,
    pub generating_sets: u64,
    pub structure: &'static str,
    pub elements: Vec<String>,
    pub permutations: Vec<Vec<u32>>,
}

pub fn shared_isometries(group: &Group, r: &SharedIsometryReport) -> SharedIsometriesDto {
    SharedIsometriesDto {
        group: group.to_string(),
        order: r.permutations.len() as u64,
        generating_sets: r.generating_sets,
        structure: structure(&r.structure),
        elements: elems(group, &r.elements),
        permutations: r.permutations.clone(),
    }
}

#[derive(Serialize)]
pub struct CertificateDto {
    pub x: String,
    pub y: String,
    pub offset: String,
    pub image_offset: String,
    pub scale: u32,
    pub family_gens: Vec<String>,
    pub near: String,
    pub far: String,
    pub verification: SeparationDto,
}

#[derive(Serialize)]
pub struct RefutationDto {
    pub group: String,
    pub map: String,
    pub lambda: String,
    pub eps: String,
    pub checked: u32,
    pub skipped: u32,
    pub inconclusive: u32,
    pub refuted: bool,
    pub certificate: Option<CertificateDto>,
}

pub fn refutation(group: &Group, map_spec: &str, r: &RefutationSummary) -> RefutationDto {
    let certificate = r.refuted.as_ref().map(|c| {
        let fam_group = c.family.gens.group();
        CertificateDto {
            x: elem(group, &c.x),
            y: elem(group, &c.y),
            offset: elem(group, &c.offset),
            image_offset: elem(group, &c.image_offset),
            scale: c.scale,
            family_gens: gens_text(&c.family.gens),
            near: elem(fam_group, &c.family.near),
            far: elem(fam_group, &c.family.far),
            verification: separation(&c.report),
        }
    });
    RefutationDto {
        group: group.to_string(),
        map: map_spec.to_string(),
        lambda: ratio(&r.lambda),
        eps: ratio(&r.eps),
        checked: r.checked,
        skipped: r.skipped,
        inconclusive: r.inconclusive,
        refuted: certificate.is_some(),
        certificate,
    }
}

#[derive(Serialize)]
pub struct SignEntryDto {
    pub g: String,
    pub h: String,
    pub sign: &'static str,
}

#[derive(Serialize)]
pub struct SignHomDto {
    pub domain: String,
    pub codomain: String,
    pub map: String,
    pub radius: u32,
    pub pass: bool,
    pub base_point: String,
    pub minus_occurs: bool,
    pub entries: Vec<SignEntryDto>,
}

pub fn sign_homomorphy(
    domain: &Group,
    codomain: &Group,
    map_spec: &str,
    radius: u32,
    r: &SignHomReport,
) -> SignHomDto {
    SignHomDto {
        domain: domain.to_string(),
        codomain: codomain.to_string(),
        map: map_spec.to_string(),
        radius,
        pass: r.pass,
        base_point: elem(codomain, &r.base_point),
        minus_occurs: r.minus_occurs,
        entries: r
            .entries
            .iter()
            .map(|e| SignEntryDto {
                g: elem(domain, &e.g),
                h: elem(domain, &e.h),
                sign: match e.sign {
                    SignOutcome::Plus => "plus",
                    SignOutcome::Minus => "minus",
                    SignOutcome::Neither => "neither",
                },
            })
            .collect(),
    }
}

pub fn relation(r: RelationClass) -> &'static str {
    match r {
        RelationClass::None => "none",
        RelationClass::XInvolution => "x-involution",
        RelationClass::YInvolution => "y-involution",
        RelationClass::EqualSquares => "equal-squares",
        RelationClass::InverseSquares => "inverse-squares",
        RelationClass::ProductInvolution => "product-involution",
        RelationClass::QuotientInvolution => "quotient-involution",
        RelationClass::Commuting => "commuting",
        RelationClass::ConjugationInvertsX => "conjugation-inverts-x",
        RelationClass::ConjugationInvertsY => "conjugation-inverts-y",
    }
}

#[derive(Serialize)]
pub struct CaseRowDto {
    pub alpha: i8,
    pub beta: i8,
    pub gamma: i8,
    pub delta: i8,
    pub witness: String,
    pub relation: &'static str,
    pub contradicts: Option<&'static str>,
}

#[derive(Serialize)]
pub struct CaseTableDto {
    pub rows: Vec<CaseRowDto>,
}

pub fn case_table(rows: &[CaseRow]) -> CaseTableDto {
    let free2 = Group::Free(2);
    CaseTableDto {
        rows: rows
            .iter()
            .map(|r| CaseRowDto {
                alpha: r.alpha,
                beta: r.beta,
                gamma: r.gamma,
                delta: r.delta,
                witness: elem(&free2, &r.witness),
                relation: relation(r.relation),
                contradicts: r.contradicts,
            })
            .collect(),
    }
}

#[derive(Serialize)]
pub struct QuotientDto {
    pub group: String,
    pub base_gens: Vec<String>,
    pub enlarged_gens: Vec<String>,
    pub quotient_group: String,
    pub quotient_gens: Vec<String>,
    pub kernel_size: u64,
    pub fit: QiFitDto,
}

pub fn quotient(base: &GeneratingSet, q: &QuotientIsometry, fit: &QiFit) -> QuotientDto {
    let group = base.group();
    let quotient_group = q.quotient_gens.group();
    QuotientDto {
        group: group.to_string(),
        base_gens: gens_text(base),
        enlarged_gens: gens_text(&q.enlarged),
        quotient_group: quotient_group.to_string(),
        quotient_gens: gens_text(&q.quotient_gens),
        kernel_size: q.kernel_size,
        fit: qi_fit(group, quotient_group, "project-left", fit),
    }
}

#[derive(Serialize)]
pub struct EnlargementDto {
    pub group: String,
    pub base_gens: Vec<String>,
    pub subgroup: Vec<String>,
    pub diameter: u32,
    pub enlarged_gens: Vec<String>,
    pub fit: QiFitDto,
}

pub fn enlargement(subgroup: &[Element], r: &EnlargementReport) -> EnlargementDto {
    let group = r.base.group();
    EnlargementDto {
        group: group.to_string(),
        base_gens: gens_text(&r.base),
        subgroup: elems(group, subgroup),
        diameter: r.diameter,
        enlarged_gens: gens_text(&r.enlarged),
        fit: qi_fit(group, group, "identity", &r.fit),
    }
}

#[derive(Serialize)]
pub struct ImageHitDto {
    pub radius: u32,
    pub ball: u64,
    pub hit: u64,
}

#[derive(Serialize)]
pub struct StageDto {
    pub stage: &'static str,
    pub holds: bool,
}

#[derive(Serialize)]
pub struct RecognitionFailureDto {
    pub stage: &'static str,
    pub detail: String,
    pub witness: Option<Vec<String>>,
}

#[derive(Serialize)]
pub struct RecognitionDto {
    pub pass: bool,
    pub stages: Vec<StageDto>,
    pub failure: Option<RecognitionFailureDto>,
}

fn stage_name(s: &RecognitionStage) -> &'static str {
    match s {
        RecognitionStage::Homomorphism => "homomorphism",
        RecognitionStage::Surjectivity => "surjectivity",
        RecognitionStage::KernelStability => "kernel-stability",
        RecognitionStage::InducedBijection => "induced-bijection",
    }
}

#[derive(Serialize)]
pub struct HomAnalysisDto {
    pub domain: String,
    pub codomain: String,
    pub map: String,
    pub radius: u32,
    pub kernel_sizes: Vec<u64>,
    pub kernel_stabilized: bool,
    pub image_hits: Vec<ImageHitDto>,
    pub recognition: RecognitionDto,
}

pub fn hom_analysis(
    domain: &Group,
    codomain: &Group,
    map_spec: &str,
    analysis: &HomomorphismAnalysis,
    recognition: &RecognitionReport,
) -> HomAnalysisDto {
    HomAnalysisDto {
        domain: domain.to_string(),
        codomain: codomain.to_string(),
        map: map_spec.to_string(),
        radius: analysis.radius,
        kernel_sizes: analysis.kernel_sizes.clone(),
        kernel_stabilized: analysis.kernel_stabilized,
        image_hits: analysis
            .image_hits
            .iter()
            .map(|h| ImageHitDto {
                radius: h.radius,
                ball: h.ball,
                hit: h.hit,
            })
            .collect(),
        recognition: RecognitionDto {
            pass: recognition.pass,
            stages: recognition
                .stages
                .iter()
                .map(|(s, holds)| StageDto {
                    stage: stage_name(s),
                    holds: *holds,
                })
                .collect(),
            failure: recognition.failure.as_ref().map(|f| RecognitionFailureDto {
                stage: stage_name(&f.stage),
                detail: f.detail.clone(),
                witness: f
                    .witness
                    .as_ref()
                    .map(|(a, b)| vec![elem(domain, a), elem(domain, b)]),
            }),
        },
    }
}

/// Pretty JSON plus a trailing newline; the single rendering path every
/// subcommand shares so output stays byte-identical for identical input.
pub fn render<T: Serialize>(dto: &T) -> String {
    let mut text = serde_json::to_string_pretty(dto).expect("report structures always serialize");
    text.push('\n');
    text
}
