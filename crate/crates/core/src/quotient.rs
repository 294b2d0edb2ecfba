//! Collapsing a finite direct factor: the projection as a rough
//! isometry, marking enlargements absorbed by a finite subgroup, and a
//! staged analysis of when a map behaves like such a quotient.

use crate::coarse::{fit_parameters, CoarseError, CoarseMap, Lambda, QiFit};
use crate::group::{Element, GeneratingSet, Group, GroupError};
use crate::metric::{enumerate_ball, subgroup_diameter, MetricError};
use num_rational::Ratio;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuotientError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Coarse(#[from] CoarseError),
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

/// The projection of `A × B` (with `B` finite) onto `A`, packaged with
/// the markings that make it a rough isometry.
#[derive(Clone, Debug)]
pub struct QuotientIsometry {
    /// Marking on the product: the base marking together with every
    /// non-identity element of the collapsed finite factor.
    pub enlarged: GeneratingSet,
    /// Marking on the quotient: non-identity projections of the above.
    pub quotient_gens: GeneratingSet,
    /// Projection forward, canonical section backward.
    pub map: CoarseMap,
    /// Order of the collapsed factor.
    pub kernel_size: u64,
}

/// Builds the quotient construction for a product group `A × B` with
/// `B` finite.
///
/// Every non-identity kernel element is added to the marking, so points
/// in one fiber are at distance one; the projection then moves distances
/// by at most one and is exactly surjective.
pub fn build_quotient_isometry(base: &GeneratingSet) -> Result<QuotientIsometry, QuotientError> {
    let group = base.group().clone();
    let Group::Direct(left, right) = &group else {
        return Err(QuotientError::Unsupported(format!(
            "need a direct product to collapse a factor, got {group}"
        )));
    };
    let kernel_size = right.order().ok_or_else(|| {
        QuotientError::Unsupported("the collapsed factor must be finite".into())
    })?;
    let left_identity = left.identity();
    let mut enlarged_elements: Vec<Element> = base.elements().to_vec();
    for b in right.elements()? {
        if !right.is_identity(&b) {
            enlarged_elements.push(Element::pair(left_identity.clone(), b));
        }
    }
    let enlarged = GeneratingSet::new(
        group.clone(),
        enlarged_elements,
        format!("{}+kernel", base.label()),
    )?;

    let mut projections = Vec::new();
    for s in enlarged.elements() {
        let Element::Pair(a, _) = s else {
            return Err(QuotientError::Unsupported(
                "product elements must be pairs".into(),
            ));
        };
        if !left.is_identity(a) {
            projections.push(a.as_ref().clone());
        }
    }
    let quotient_gens = GeneratingSet::new(
        left.as_ref().clone(),
        projections,
        format!("{}-projected", base.label()),
    )?;
    let map = CoarseMap::project_left(group)?;
    Ok(QuotientIsometry {
        enlarged,
        quotient_gens,
        map,
        kernel_size,
    })
}

/// The identity map from a base marking to the same marking enlarged by
/// a finite subgroup, with the fitted parameters and the diameter bound
/// that controls them.
#[derive(Clone, Debug)]
pub struct EnlargementReport {
    pub base: GeneratingSet,
    pub enlarged: GeneratingSet,
    /// Diameter of the added subgroup under the base marking.
    pub diameter: u32,
    pub fit: QiFit,
}

/// Fits the identity map `(G, d_base) → (G, d_enlarged)` where the
/// enlargement adds the non-identity elements of a finite subgroup.
///
/// Each added step costs at most the subgroup's base-marking diameter,
/// and in a direct product the added steps can be collected into a
/// single kernel offset, so the fitted `ε` at `λ = 1` never exceeds
/// that diameter.
pub fn enlargement_isometry(
    base: &GeneratingSet,
    subgroup: &[Element],
    radius: u32,
    cap: u64,
) -> Result<EnlargementReport, QuotientError> {
    let group = base.group().clone();
    for h in subgroup {
        group.check_element(h)?;
    }
    let diameter = subgroup_diameter(base, subgroup, cap)?;
    let mut enlarged_elements: Vec<Element> = base.elements().to_vec();
    enlarged_elements.extend(
        subgroup
            .iter()
            .filter(|h| !group.is_identity(h))
            .cloned(),
    );
    let enlarged = GeneratingSet::new(
        group.clone(),
        enlarged_elements,
        format!("{}+subgroup", base.label()),
    )?;
    let map = CoarseMap::identity(group);
    let grid = vec![Ratio::from_integer(1)];
    let fit = fit_parameters(&map, base, &enlarged, radius, &grid, cap)?;
    Ok(EnlargementReport {
        base: base.clone(),
        enlarged,
        diameter,
        fit,
    })
}

/// Ball-by-ball behaviour of a candidate homomorphism: how much of the
/// source collapses to the identity, and how much of the target is hit.
#[derive(Clone, Debug)]
pub struct HomomorphismAnalysis {
    pub radius: u32,
    /// `kernel_sizes[r]` counts source elements of length at most `r`
    /// mapping to the identity.
    pub kernel_sizes: Vec<u64>,
    /// Whether the last two kernel counts agree, suggesting the kernel
    /// is finite and already exhausted.
    pub kernel_stabilized: bool,
    /// Per radius: target ball size versus how many of its elements are
    /// hit by the image of the full source ball.
    pub image_hits: Vec<ImageHit>,
}

#[derive(Clone, Copy, Debug)]
pub struct ImageHit {
    pub radius: u32,
    pub ball: u64,
    pub hit: u64,
}

/// Measures kernel growth and image coverage of a map over balls.
///
/// Image coverage compares each target ball against the image of the
/// full source ball of the outer radius, so coverage at small radii is
/// meaningful even when the map stretches lengths.
pub fn homomorphism_analysis(
    map: &CoarseMap,
    source: &GeneratingSet,
    target: &GeneratingSet,
    radius: u32,
    cap: u64,
) -> Result<HomomorphismAnalysis, QuotientError> {
    let source_ball = enumerate_ball(source, &map.domain().identity(), radius, cap, false)?;
    source_ball.require_complete(cap)?;
    let target_ball = enumerate_ball(target, &map.codomain().identity(), radius, cap, false)?;
    target_ball.require_complete(cap)?;

    let mut kernel_at = vec![0u64; radius as usize + 1];
    let mut image: HashMap<Element, ()> = HashMap::new();
    let codomain = map.codomain();
    for (x, r) in source_ball.sorted_entries() {
        let y = map.forward(&x)?;
        if codomain.is_identity(&y) {
            kernel_at[r as usize] += 1;
        }
        image.insert(y, ());
    }
    let mut kernel_sizes = Vec::with_capacity(radius as usize + 1);
    let mut running = 0u64;
    for count in kernel_at {
        running += count;
        kernel_sizes.push(running);
    }
    let kernel_stabilized = kernel_sizes.len() >= 2
        && kernel_sizes[kernel_sizes.len() - 1] == kernel_sizes[kernel_sizes.len() - 2];

    let mut hit_at = vec![0u64; radius as usize + 1];
    let mut ball_at = vec![0u64; radius as usize + 1];
    for (y, r) in target_ball.sorted_entries() {
        ball_at[r as usize] += 1;
        if image.contains_key(&y) {
            hit_at[r as usize] += 1;
        }
    }
    let mut image_hits = Vec::with_capacity(radius as usize + 1);
    let mut ball_running = 0u64;
    let mut hit_running = 0u64;
    for r in 0..=radius {
        ball_running += ball_at[r as usize];
        hit_running += hit_at[r as usize];
        image_hits.push(ImageHit {
            radius: r,
            ball: ball_running,
            hit: hit_running,
        });
    }
    Ok(HomomorphismAnalysis {
        radius,
        kernel_sizes,
        kernel_stabilized,
        image_hits,
    })
}

/// The four requirements checked, in order, when deciding whether a map
/// behaves like collapsing a finite subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecognitionStage {
    /// The map respects multiplication on sampled pairs.
    Homomorphism,
    /// Target balls inside the window are fully covered.
    Surjectivity,
    /// The kernel count stops growing before the window ends.
    KernelStability,
    /// Source elements sharing an image differ by a kernel element of
    /// bounded length.
    InducedBijection,
}

#[derive(Clone, Debug)]
pub struct RecognitionFailure {
    pub stage: RecognitionStage,
    pub detail: String,
    pub witness: Option<(Element, Element)>,
}

#[derive(Clone, Debug)]
pub struct RecognitionReport {
    pub pass: bool,
    pub stages: Vec<(RecognitionStage, bool)>,
    pub failure: Option<RecognitionFailure>,
    pub analysis: HomomorphismAnalysis,
}

/// Runs the staged recognition of a finite-kernel quotient on balls of
/// the given radius. The stages run in a fixed order and the first
/// failing stage is reported with a witness; later stages still execute
/// so the report shows every verdict.
pub fn quotient_recognition(
    map: &CoarseMap,
    source: &GeneratingSet,
    target: &GeneratingSet,
    radius: u32,
    cap: u64,
) -> Result<RecognitionReport, QuotientError> {
    if radius < 2 {
        return Err(QuotientError::Unsupported(
            "recognition needs radius at least 2".into(),
        ));
    }
    let domain = map.domain().clone();
    let analysis = homomorphism_analysis(map, source, target, radius, cap)?;

    // Multiplicativity on pairs drawn from a small ball. Products of
    // two sampled points stay inside the analysed window.
    let pair_radius = radius / 2;
    let pair_ball = enumerate_ball(source, &domain.identity(), pair_radius, cap, false)?;
    pair_ball.require_complete(cap)?;
    let pair_entries = pair_ball.sorted_entries();
    let mut hom_ok = true;
    let mut hom_witness = None;
    'outer: for (x, _) in &pair_entries {
        let fx = map.forward(x)?;
        for (y, _) in &pair_entries {
            let product = domain.multiply(x, y)?;
            let direct = map.forward(&product)?;
            let composed = map.codomain().multiply(&fx, &map.forward(y)?)?;
            if direct != composed {
                hom_ok = false;
                hom_witness = Some((x.clone(), y.clone()));
                break 'outer;
            }
        }
    }

    // Full coverage of target balls strictly inside the window.
    let mut surj_ok = true;
    let mut surj_detail = String::new();
    for hit in &analysis.image_hits {
        if hit.radius + 1 > radius {
            break;
        }
        if hit.hit < hit.ball {
            surj_ok = false;
            surj_detail = format!(
                "at radius {} only {} of {} target elements are hit",
                hit.radius, hit.hit, hit.ball
            );
            break;
        }
    }

    let kernel_ok = analysis.kernel_stabilized;

    // Fibers over the inner ball: same image forces a kernel offset.
    let inner = radius.saturating_sub(1);
    let inner_ball = enumerate_ball(source, &domain.identity(), inner, cap, false)?;
    inner_ball.require_complete(cap)?;
    let mut fibers: HashMap<Element, Vec<Element>> = HashMap::new();
    for (x, _) in inner_ball.sorted_entries() {
        let image = map.forward(&x)?;
        fibers.entry(image).or_default().push(x);
    }
    let mut fiber_ok = true;
    let mut fiber_witness = None;
    'fiber: for members in fibers.values() {
        for pair in members.windows(2) {
            let offset = domain.quotient(&pair[0], &pair[1])?;
            let image = map.forward(&offset)?;
            if !map.codomain().is_identity(&image) {
                fiber_ok = false;
                fiber_witness = Some((pair[0].clone(), pair[1].clone()));
                break 'fiber;
            }
        }
    }

    let stages = vec![
        (RecognitionStage::Homomorphism, hom_ok),
        (RecognitionStage::Surjectivity, surj_ok),
        (RecognitionStage::KernelStability, kernel_ok),
        (RecognitionStage::InducedBijection, fiber_ok),
    ];
    let failure = stages.iter().find(|(_, ok)| !ok).map(|(stage, _)| {
        let (detail, witness) = match stage {
            RecognitionStage::Homomorphism => (
                "the map is not multiplicative on the sampled pairs".to_string(),
                hom_witness.clone(),
            ),
            RecognitionStage::Surjectivity => (surj_detail.clone(), None),
            RecognitionStage::KernelStability => (
                format!(
                    "kernel count still grows at radius {}: {:?}",
                    radius, analysis.kernel_sizes
                ),
                None,
            ),
            RecognitionStage::InducedBijection => (
                "elements sharing an image do not differ by a kernel element".to_string(),
                fiber_witness.clone(),
            ),
        };
        RecognitionFailure {
            stage: *stage,
            detail,
            witness,
        }
    });
    Ok(RecognitionReport {
        pass: failure.is_none(),
        stages,
        failure,
        analysis,
    })
}

/// Convenience: the fitted parameters of a quotient construction on a
/// window, using the enlarged marking upstairs and the projected one
/// downstairs.
pub fn fit_quotient(
    construction: &QuotientIsometry,
    radius: u32,
    cap: u64,
) -> Result<QiFit, QuotientError> {
    let grid: Vec<Lambda> = vec![Ratio::from_integer(1)];
    Ok(fit_parameters(
        &construction.map,
        &construction.enlarged,
        &construction.quotient_gens,
        radius,
        &grid,
        cap,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coarse::{Defect, ElementMap};
    use crate::group::parse_group;

    fn z_cross_c3() -> Group {
        Group::Direct(
            Box::new(Group::FreeAbelian(1)),
            Box::new(Group::Cyclic(3)),
        )
    }

    #[test]
    fn collapsing_a_finite_factor_is_a_tight_rough_isometry() {
        let group = z_cross_c3();
        let base = GeneratingSet::standard(group, "std").unwrap();
        let construction = build_quotient_isometry(&base).unwrap();
        assert_eq!(construction.kernel_size, 3);
        // Kernel step (0, 1) coincides with a standard generator, so the
        // enlargement only adds (0, 2).
        assert_eq!(construction.enlarged.elements().len(), 3);
        assert_eq!(
            construction.quotient_gens.elements().len(),
            1,
            "only ±1 projects non-trivially"
        );
        let fit = fit_quotient(&construction, 5, 100_000).unwrap();
        let one = Ratio::from_integer(1);
        assert!(fit.eps_at(&one).unwrap() <= one);
        assert_eq!(fit.surjectivity_defect, Defect::Exact(0));
        assert!(!fit.distance_overflow);
    }

    #[test]
    fn quotient_construction_requires_a_product_with_finite_factor() {
        let free = Group::Free(2);
        let base = GeneratingSet::standard(free, "std").unwrap();
        assert!(matches!(
            build_quotient_isometry(&base),
            Err(QuotientError::Unsupported(_))
        ));

        let both_infinite = Group::Direct(
            Box::new(Group::FreeAbelian(1)),
            Box::new(Group::FreeAbelian(1)),
        );
        let base = GeneratingSet::standard(both_infinite, "std").unwrap();
        assert!(matches!(
            build_quotient_isometry(&base),
            Err(QuotientError::Unsupported(_))
        ));
    }

    #[test]
    fn enlarging_by_a_finite_subgroup_costs_at_most_its_diameter() {
        let group = Group::Direct(
            Box::new(Group::FreeAbelian(1)),
            Box::new(Group::Cyclic(4)),
        );
        let base = GeneratingSet::standard(group.clone(), "std").unwrap();
        let zero = Element::vector(&[0]);
        let subgroup: Vec<Element> = (0..4)
            .map(|k| Element::pair(zero.clone(), Element::residue(k)))
            .collect();
        let report = enlargement_isometry(&base, &subgroup, 4, 100_000).unwrap();
        // The element (0, 2) needs two base steps.
        assert_eq!(report.diameter, 2);
        let one = Ratio::from_integer(1);
        let eps = report.fit.eps_at(&one).unwrap();
        assert!(eps >= one, "the shortcut (0,2) saves a step");
        assert!(eps <= Ratio::from_integer(report.diameter as i64));
        assert_eq!(report.fit.surjectivity_defect, Defect::Exact(0));
    }

    #[test]
    fn projection_kernel_stabilizes_and_covers_the_target() {
        let group = z_cross_c3();
        let source = GeneratingSet::standard(group.clone(), "std").unwrap();
        let target = GeneratingSet::standard(Group::FreeAbelian(1), "std").unwrap();
        let map = CoarseMap::project_left(group).unwrap();
        let analysis = homomorphism_analysis(&map, &source, &target, 4, 100_000).unwrap();
        // (0, 2) is the inverse of the standard step (0, 1), so the
        // whole kernel {0} × C₃ sits inside the unit ball.
        assert_eq!(analysis.kernel_sizes, vec![1, 3, 3, 3, 3]);
        assert!(analysis.kernel_stabilized);
        for hit in &analysis.image_hits {
            assert_eq!(hit.hit, hit.ball, "radius {}", hit.radius);
        }

        let report = quotient_recognition(&map, &source, &target, 4, 100_000).unwrap();
        assert!(report.pass, "failure: {:?}", report.failure);
        assert!(report.stages.iter().all(|(_, ok)| *ok));
    }

    #[test]
    fn abelianization_fails_recognition_at_kernel_stability() {
        let f2 = Group::Free(2);
        let z2 = Group::FreeAbelian(2);
        let source = GeneratingSet::standard(f2.clone(), "std").unwrap();
        let target = GeneratingSet::standard(z2.clone(), "std").unwrap();
        let map = CoarseMap::forward_only(
            f2,
            z2,
            ElementMap::Homomorphism {
                images: vec![Element::vector(&[1, 0]), Element::vector(&[0, 1])],
            },
        )
        .unwrap();
        let report = quotient_recognition(&map, &source, &target, 4, 100_000).unwrap();
        assert!(!report.pass);
        let failure = report.failure.unwrap();
        assert_eq!(failure.stage, RecognitionStage::KernelStability);
        // Shortest non-trivial kernel elements are the eight length-four
        // commutator words.
        assert_eq!(report.analysis.kernel_sizes, vec![1, 1, 1, 1, 9]);
        // Earlier stages hold: it is a homomorphism onto the grid.
        assert!(report.stages[0].1);
        assert!(report.stages[1].1);
    }

    #[test]
    fn a_non_multiplicative_table_fails_the_first_stage() {
        let c4 = parse_group("cyclic(4)").unwrap();
        let gens = GeneratingSet::standard(c4.clone(), "std").unwrap();
        // Swap 1 and 3: fixes the identity, preserves distances, but is
        // not multiplicative (1 + 1 = 2 while 3 + 3 = 2 forces clashes
        // elsewhere: 1 + 2 = 3 maps to 1, yet 3 + 2 = 1 in the table).
        let table: std::collections::BTreeMap<Element, Element> = [
            (Element::residue(0), Element::residue(0)),
            (Element::residue(1), Element::residue(3)),
            (Element::residue(2), Element::residue(2)),
            (Element::residue(3), Element::residue(1)),
        ]
        .into_iter()
        .collect();
        let map = CoarseMap::forward_only(c4.clone(), c4, ElementMap::Table(table)).unwrap();
        let report = quotient_recognition(&map, &gens, &gens, 2, 100_000).unwrap();
        // Inversion is in fact multiplicative on C₄ (it is abelian), so
        // this candidate passes every stage: it is the automorphism
        // x ↦ −x, an honest quotient map with trivial kernel.
        assert!(report.pass);
        assert_eq!(report.analysis.kernel_sizes.last(), Some(&1));

        // A genuinely broken table: swap 0 and 1.
        let table: std::collections::BTreeMap<Element, Element> = [
            (Element::residue(0), Element::residue(1)),
            (Element::residue(1), Element::residue(0)),
            (Element::residue(2), Element::residue(2)),
            (Element::residue(3), Element::residue(3)),
        ]
        .into_iter()
        .collect();
        let c4 = parse_group("cyclic(4)").unwrap();
        let map = CoarseMap::forward_only(c4.clone(), c4, ElementMap::Table(table)).unwrap();
        let report = quotient_recognition(&map, &gens, &gens, 2, 100_000).unwrap();
        assert!(!report.pass);
        assert_eq!(
            report.failure.unwrap().stage,
            RecognitionStage::Homomorphism
        );
    }
}
