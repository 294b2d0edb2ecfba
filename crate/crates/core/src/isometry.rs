//! Isometries of finite Cayley graphs, the isometries shared by every
//! marking of a group, refutation certificates for self-map candidates,
//! and the sign-twisted homomorphism analysis.

use crate::coarse::{CoarseMap, Lambda};
use crate::families::{
    family_abelian_z, family_free, verify_separation, FamilyError, FamilyRequest,
    SeparatingFamily, SeparationReport,
};
use crate::group::{Element, GeneratingSet, Group, GroupError};
use crate::metric::MetricError;
use num_rational::Ratio;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IsomError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Coarse(#[from] crate::coarse::CoarseError),
    #[error("the set does not generate the group; {missing} elements unreachable")]
    NotGenerating { missing: usize },
    #[error("group too large for exhaustive search: {order} exceeds the limit {limit}")]
    TooLarge { order: u64, limit: u64 },
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

/// How a list of permutations sits relative to the group operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureHint {
    /// Every permutation is a left translation.
    TranslationsOnly,
    /// Every permutation is a left translation, possibly composed with
    /// group inversion, and inversion genuinely occurs.
    TranslationsAndInversion,
    /// Some permutation is neither.
    Other,
}

/// Multiplication, inversion and lookup tables for one finite group.
struct FiniteTables {
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    identity: usize,
}

impl FiniteTables {
    fn new(group: &Group) -> Result<FiniteTables, IsomError> {
        let elements = group.elements()?;
        let index: HashMap<Element, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        let n = elements.len();
        let mut mul = vec![vec![0usize; n]; n];
        let mut inv = vec![0usize; n];
        for i in 0..n {
            for j in 0..n {
                let product = group.multiply(&elements[i], &elements[j])?;
                mul[i][j] = index[&product];
            }
            inv[i] = index[&group.invert(&elements[i])?];
        }
        let identity = index[&group.identity()];
        Ok(FiniteTables {
            elements,
            index,
            mul,
            inv,
            identity,
        })
    }

    fn len(&self) -> usize {
        self.elements.len()
    }
}

/// Distance matrix of a finite marked group via one breadth-first pass
/// and left-invariance: `d(x, y) = ‖x⁻¹y‖`.
fn distance_matrix(tables: &FiniteTables, step_indices: &[usize]) -> Result<Vec<Vec<u32>>, IsomError> {
    let n = tables.len();
    let mut norm = vec![u32::MAX; n];
    norm[tables.identity] = 0;
    let mut frontier = vec![tables.identity];
    let mut depth = 0;
    while !frontier.is_empty() {
        depth += 1;
        let mut next = Vec::new();
        for &i in &frontier {
            for &s in step_indices {
                let j = tables.mul[i][s];
                if norm[j] == u32::MAX {
                    norm[j] = depth;
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let missing = norm.iter().filter(|d| **d == u32::MAX).count();
    if missing > 0 {
        return Err(IsomError::NotGenerating { missing });
    }
    let mut matrix = vec![vec![0u32; n]; n];
    for x in 0..n {
        for y in 0..n {
            matrix[x][y] = norm[tables.mul[tables.inv[x]][y]];
        }
    }
    Ok(matrix)
}

fn step_indices(tables: &FiniteTables, gens: &GeneratingSet) -> Result<Vec<usize>, IsomError> {
    let mut steps = Vec::new();
    for e in gens.step_letters(false) {
        let i = *tables
            .index
            .get(&e)
            .ok_or_else(|| IsomError::Unsupported("generator outside the group".into()))?;
        steps.push(i);
    }
    steps.sort_unstable();
    steps.dedup();
    Ok(steps)
}

/// All permutations of the group preserving the word metric of `gens`.
#[derive(Clone, Debug)]
pub struct IsometryReport {
    pub elements: Vec<Element>,
    /// Each permutation maps the i-th canonical element to the one at
    /// index `perm[i]`.
    pub permutations: Vec<Vec<u32>>,
    pub structure: StructureHint,
}

/// Default ceiling on the group order for exhaustive isometry searches.
pub const DEFAULT_MAX_ISOMETRY_ORDER: u64 = 24;

fn check_order(group: &Group, max_order: u64) -> Result<(), IsomError> {
    let order = group
        .order()
        .ok_or_else(|| IsomError::Unsupported("group must be finite".into()))?;
    if order > max_order {
        return Err(IsomError::TooLarge {
            order,
            limit: max_order,
        });
    }
    Ok(())
}

/// Enumerates every distance-preserving bijection of a finite marked
/// group by fingerprint-guided backtracking over the distance matrix.
pub fn enumerate_isometries(
    gens: &GeneratingSet,
    max_order: u64,
) -> Result<IsometryReport, IsomError> {
    let group = gens.group();
    check_order(group, max_order)?;
    let tables = FiniteTables::new(group)?;
    let steps = step_indices(&tables, gens)?;
    let matrix = distance_matrix(&tables, &steps)?;
    let permutations = isometries_of_matrix(&matrix);
    let structure = structure_hint(&tables, &permutations);
    Ok(IsometryReport {
        elements: tables.elements,
        permutations,
        structure,
    })
}

fn isometries_of_matrix(matrix: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let n = matrix.len();
    // The multiset of distances from a point must be preserved, which
    // prunes candidate images before backtracking.
    let fingerprint: Vec<Vec<u32>> = matrix
        .iter()
        .map(|row| {
            let mut f = row.clone();
            f.sort_unstable();
            f
        })
        .collect();
    let mut result = Vec::new();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn recurse(
        position: usize,
        matrix: &[Vec<u32>],
        fingerprint: &[Vec<u32>],
        image: &mut [usize],
        used: &mut [bool],
        result: &mut Vec<Vec<u32>>,
    ) {
        let n = matrix.len();
        if position == n {
            result.push(image.iter().map(|i| *i as u32).collect());
            return;
        }
        for candidate in 0..n {
            if used[candidate] || fingerprint[candidate] != fingerprint[position] {
                continue;
            }
            let consistent = (0..position)
                .all(|k| matrix[position][k] == matrix[candidate][image[k]]);
            if !consistent {
                continue;
            }
            image[position] = candidate;
            used[candidate] = true;
            recurse(position + 1, matrix, fingerprint, image, used, result);
            used[candidate] = false;
            image[position] = usize::MAX;
        }
    }
    recurse(0, matrix, &fingerprint, &mut image, &mut used, &mut result);
    result
}

fn structure_hint(tables: &FiniteTables, permutations: &[Vec<u32>]) -> StructureHint {
    let n = tables.len();
    let mut saw_inversion = false;
    for perm in permutations {
        let base = perm[tables.identity] as usize;
        let translation = (0..n).all(|i| perm[i] as usize == tables.mul[base][i]);
        if translation {
            continue;
        }
        let twisted = (0..n).all(|i| perm[i] as usize == tables.mul[base][tables.inv[i]]);
        if twisted {
            saw_inversion = true;
            continue;
        }
        return StructureHint::Other;
    }
    if saw_inversion {
        StructureHint::TranslationsAndInversion
    } else {
        StructureHint::TranslationsOnly
    }
}

/// Permutations preserving the word metric of every symmetric marking.
#[derive(Clone, Debug)]
pub struct SharedIsometryReport {
    pub elements: Vec<Element>,
    /// Number of symmetric identity-free generating subsets considered.
    pub generating_sets: u64,
    pub permutations: Vec<Vec<u32>>,
    pub structure: StructureHint,
}

const MAX_INVERSE_CLASSES: u32 = 16;

/// Intersects the isometry groups over all symmetric identity-free
/// generating subsets of a finite group.
///
/// Elements are grouped into inverse-pair classes; every class subset
/// whose union generates the group contributes one marking. The
/// isometries of the sparsest marking are enumerated outright, then
/// filtered by adjacency preservation against every other marking.
pub fn shared_isometry_group(
    group: &Group,
    max_order: u64,
) -> Result<SharedIsometryReport, IsomError> {
    check_order(group, max_order)?;
    let order = group.order().expect("finiteness checked above");
    let tables = FiniteTables::new(group)?;
    let n = tables.len();

    // Inverse-pair classes of non-identity elements, canonically ordered.
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut seen = vec![false; n];
    for i in 0..n {
        if i == tables.identity || seen[i] {
            continue;
        }
        let j = tables.inv[i];
        seen[i] = true;
        seen[j] = true;
        if i == j {
            classes.push(vec![i]);
        } else {
            classes.push(vec![i, j]);
        }
    }
    if classes.len() as u32 > MAX_INVERSE_CLASSES {
        return Err(IsomError::TooLarge {
            order,
            limit: max_order,
        });
    }

    // Every class subset whose union generates the group is a marking.
    let mut markings: Vec<Vec<usize>> = Vec::new();
    for mask in 1u64..(1 << classes.len()) {
        let mut steps = Vec::new();
        for (c, class) in classes.iter().enumerate() {
            if mask & (1 << c) != 0 {
                steps.extend_from_slice(class);
            }
        }
        if generates(&tables, &steps) {
            steps.sort_unstable();
            markings.push(steps);
        }
    }
    if markings.is_empty() {
        return Err(IsomError::NotGenerating { missing: n });
    }
    markings.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

    // Enumerate the sparsest marking, then filter by the rest.
    let matrix = distance_matrix(&tables, &markings[0])?;
    let mut shared = isometries_of_matrix(&matrix);
    for marking in &markings[1..] {
        let members: Vec<bool> = {
            let mut m = vec![false; n];
            for &s in marking {
                m[s] = true;
            }
            m
        };
        shared.retain(|perm| preserves_adjacency(&tables, marking, &members, perm));
        if shared.is_empty() {
            break;
        }
    }
    let structure = structure_hint(&tables, &shared);
    Ok(SharedIsometryReport {
        elements: tables.elements,
        generating_sets: markings.len() as u64,
        permutations: shared,
        structure,
    })
}

fn generates(tables: &FiniteTables, steps: &[usize]) -> bool {
    let n = tables.len();
    let mut reached = vec![false; n];
    reached[tables.identity] = true;
    let mut frontier = vec![tables.identity];
    let mut count = 1;
    while let Some(i) = frontier.pop() {
        for &s in steps {
            let j = tables.mul[i][s];
            if !reached[j] {
                reached[j] = true;
                count += 1;
                frontier.push(j);
            }
        }
    }
    count == n
}

/// A bijection preserves the word metric of a marking exactly when it
/// maps marked steps to marked steps in both directions; for a finite
/// bijection, preserving edges preserves non-edges as well.
fn preserves_adjacency(
    tables: &FiniteTables,
    steps: &[usize],
    members: &[bool],
    perm: &[u32],
) -> bool {
    for i in 0..tables.len() {
        let pi = perm[i] as usize;
        for &s in steps {
            let j = tables.mul[i][s];
            let pj = perm[j] as usize;
            let offset = tables.mul[tables.inv[pi]][pj];
            if !members[offset] {
                return false;
            }
        }
    }
    true
}

/// The data certifying a refutation: a marking on which the pair offsets
/// have certified lengths violating the budget.
#[derive(Clone, Debug)]
pub struct RefutationCertificate {
    /// The request pair the contradiction was found at.
    pub x: Element,
    pub y: Element,
    /// Offset `y⁻¹x` between the chosen pair.
    pub offset: Element,
    /// Offset `φ(y)⁻¹φ(x)` between the images.
    pub image_offset: Element,
    /// The separation scale `⌈(1+ε)(1+λ)⌉` the family enforces.
    pub scale: u32,
    pub family: SeparatingFamily,
    pub report: SeparationReport,
    pub lambda: Lambda,
    pub eps: Lambda,
}

/// Outcome of a refutation sweep over a request list.
#[derive(Clone, Debug)]
pub struct RefutationSummary {
    pub lambda: Lambda,
    pub eps: Lambda,
    /// Requests whose offsets genuinely differed and were tested.
    pub checked: u32,
    /// Requests with `z′ ∈ {z, z⁻¹}`; such motion is compatible with
    /// every symmetric marking and cannot be refuted.
    pub skipped: u32,
    /// The first contradiction found, if any.
    pub refuted: Option<RefutationCertificate>,
    /// Families that were built but failed their own certification.
    pub inconclusive: u32,
}

impl RefutationSummary {
    pub fn is_refuted(&self) -> bool {
        self.refuted.is_some()
    }
}

/// Attempts to refute that the self-map is a `(λ, ε)` quasi-isometry
/// for every symmetric marking of the group, by replaying each request.
///
/// From a request pair `(x, y)` it forms the offset `z = y⁻¹x` and its
/// image offset `z′ = φ(y)⁻¹φ(x)`. When `z′ ∉ {z, z⁻¹}`, a marking is
/// built in which one offset is a single step while the other is
/// certified longer than the budget allows, contradicting the bound at
/// `(x, y)`. The sweep stops at the first contradiction.
pub fn refute_shared_candidate(
    map: &CoarseMap,
    requests: &[FamilyRequest],
    lambda: Lambda,
    eps: Lambda,
    cap: u64,
) -> Result<RefutationSummary, IsomError> {
    if map.domain() != map.codomain() {
        return Err(IsomError::Unsupported(
            "refutation applies to self-maps of one group".into(),
        ));
    }
    if lambda < Ratio::from_integer(1) || eps < Ratio::from_integer(0) {
        return Err(IsomError::Unsupported(
            "budget needs λ ≥ 1 and ε ≥ 0".into(),
        ));
    }
    let one = Ratio::from_integer(1);
    let scale_ratio = (one + eps) * (one + lambda);
    let scale = u32::try_from(scale_ratio.ceil().to_integer())
        .map_err(|_| IsomError::Unsupported("budget too large".into()))?;

    let group = map.domain().clone();
    let mut summary = RefutationSummary {
        lambda,
        eps,
        checked: 0,
        skipped: 0,
        refuted: None,
        inconclusive: 0,
    };
    for request in requests {
        let x = &request.g;
        let y = &request.h;
        let z = group.quotient(y, x)?;
        let image_x = map.forward(x)?;
        let image_y = map.forward(y)?;
        let z_image = group.quotient(&image_y, &image_x)?;
        if z_image == z || z_image == group.invert(&z)? {
            summary.skipped += 1;
            continue;
        }
        summary.checked += 1;
        let family = match &group {
            Group::Free(rank) => family_free(*rank, &z, &z_image, scale)?,
            Group::FreeAbelian(1) => {
                let as_int = |e: &Element| match e {
                    Element::Vector(v) => Ok(v[0]),
                    _ => Err(IsomError::Unsupported("expected an integer element".into())),
                };
                family_abelian_z(as_int(&z)?, as_int(&z_image)?, scale)?
            }
            other => {
                return Err(IsomError::Unsupported(format!(
                    "no family construction for {other}"
                )))
            }
        };
        let report = verify_separation(&family, cap)?;
        if report.pass {
            summary.refuted = Some(RefutationCertificate {
                x: x.clone(),
                y: y.clone(),
                offset: z,
                image_offset: z_image,
                scale,
                family,
                report,
                lambda,
                eps,
            });
            return Ok(summary);
        }
        summary.inconclusive += 1;
    }
    Ok(summary)
}

/// Per-element summary of which sign works against every left factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignStatus {
    /// Only `ψ(g)·ψ(h)` matches.
    Plus,
    /// Only `ψ(g)·ψ(h)⁻¹` matches.
    Minus,
    /// Both match for every left factor (the image is an involution).
    Both,
    /// Different left factors need different signs.
    Mixed,
}

/// Result of testing a permutation for sign-twisted multiplicativity.
#[derive(Clone, Debug)]
pub struct SignReport {
    pub pass: bool,
    /// The value `φ(e)` divided out before testing.
    pub base_point: Element,
    /// Per right-factor status over all left factors.
    pub signs: Vec<(Element, SignStatus)>,
    /// Pairs `(g, h)` where neither sign matches.
    pub failures: Vec<(Element, Element)>,
}

/// Tests whether the permutation, normalized to fix the identity, is
/// multiplicative up to a per-pair sign: `ψ(gh) ∈ {ψ(g)ψ(h), ψ(g)ψ(h)⁻¹}`
/// for all `g, h`.
pub fn permutation_sign_homomorphy(group: &Group, perm: &[u32]) -> Result<SignReport, IsomError> {
    let tables = FiniteTables::new(group)?;
    let n = tables.len();
    if perm.len() != n {
        return Err(IsomError::Unsupported(
            "permutation length must match the group order".into(),
        ));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        let p = p as usize;
        if p >= n || seen[p] {
            return Err(IsomError::Unsupported("not a permutation".into()));
        }
        seen[p] = true;
    }

    // Normalize: ψ(x) = φ(e)⁻¹ · φ(x) fixes the identity.
    let base = perm[tables.identity] as usize;
    let base_inv = tables.inv[base];
    let psi: Vec<usize> = (0..n)
        .map(|i| tables.mul[base_inv][perm[i] as usize])
        .collect();

    let mut signs = Vec::new();
    let mut failures = Vec::new();
    for h in 0..n {
        let mut plus_all = true;
        let mut minus_all = true;
        for g in 0..n {
            let lhs = psi[tables.mul[g][h]];
            let plus = lhs == tables.mul[psi[g]][psi[h]];
            let minus = lhs == tables.mul[psi[g]][tables.inv[psi[h]]];
            if !plus {
                plus_all = false;
            }
            if !minus {
                minus_all = false;
            }
            if !plus && !minus {
                failures.push((tables.elements[g].clone(), tables.elements[h].clone()));
            }
        }
        let status = match (plus_all, minus_all) {
            (true, true) => SignStatus::Both,
            (true, false) => SignStatus::Plus,
            (false, true) => SignStatus::Minus,
            (false, false) => SignStatus::Mixed,
        };
        signs.push((tables.elements[h].clone(), status));
    }
    // Mixed per-element status is acceptable as long as every single
    // pair matched one of the two signs.
    let pass = failures.is_empty();
    Ok(SignReport {
        pass,
        base_point: tables.elements[base].clone(),
        signs,
        failures,
    })
}

/// The resolved sign for one sampled pair. When both signs match (the
/// image of the right factor is an involution), the sign is reported as
/// `Plus` by convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignOutcome {
    Plus,
    Minus,
    Neither,
}

#[derive(Clone, Debug)]
pub struct SignEntry {
    pub g: Element,
    pub h: Element,
    pub sign: SignOutcome,
}

/// Sign analysis of an arbitrary map on an explicit pair sample.
#[derive(Clone, Debug)]
pub struct SignHomReport {
    /// No pair produced `Neither`.
    pub pass: bool,
    /// The value `φ(e)` divided out before testing.
    pub base_point: Element,
    pub entries: Vec<SignEntry>,
    /// Whether some pair genuinely required the minus sign.
    pub minus_occurs: bool,
}

/// Tests whether a map between groups, normalized so the identity maps
/// to the identity, is multiplicative up to a per-pair sign on the
/// sampled pairs: `ψ(gh) ∈ {ψ(g)ψ(h), ψ(g)ψ(h)⁻¹}`.
pub fn check_sign_homomorphy(
    map: &CoarseMap,
    pairs: &[(Element, Element)],
) -> Result<SignHomReport, IsomError> {
    let domain = map.domain().clone();
    let codomain = map.codomain().clone();
    let base_point = map.forward(&domain.identity())?;
    let base_inv = codomain.invert(&base_point)?;
    let normalized = |x: &Element| -> Result<Element, IsomError> {
        Ok(codomain.multiply(&base_inv, &map.forward(x)?)?)
    };

    let mut entries = Vec::with_capacity(pairs.len());
    let mut pass = true;
    let mut minus_occurs = false;
    for (g, h) in pairs {
        let product = domain.multiply(g, h)?;
        let lhs = normalized(&product)?;
        let psi_g = normalized(g)?;
        let psi_h = normalized(h)?;
        let plus = lhs == codomain.multiply(&psi_g, &psi_h)?;
        let minus = lhs == codomain.multiply(&psi_g, &codomain.invert(&psi_h)?)?;
        let sign = if plus {
            SignOutcome::Plus
        } else if minus {
            minus_occurs = true;
            SignOutcome::Minus
        } else {
            pass = false;
            SignOutcome::Neither
        };
        entries.push(SignEntry {
            g: g.clone(),
            h: h.clone(),
            sign,
        });
    }
    Ok(SignHomReport {
        pass,
        base_point,
        entries,
        minus_occurs,
    })
}

/// All ordered pairs from the ball of the given radius, in canonical
/// order — the standard sample for the sign analysis.
pub fn ball_pairs(
    gens: &GeneratingSet,
    radius: u32,
    cap: u64,
) -> Result<Vec<(Element, Element)>, IsomError> {
    let ball = crate::metric::enumerate_ball(
        gens,
        &gens.group().identity(),
        radius,
        cap,
        false,
    )?;
    ball.require_complete(cap)?;
    let entries = ball.sorted_entries();
    let mut pairs = Vec::with_capacity(entries.len() * entries.len());
    for (g, _) in &entries {
        for (h, _) in &entries {
            pairs.push((g.clone(), h.clone()));
        }
    }
    Ok(pairs)
}

/// The universal relation forced by one sign pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelationClass {
    /// The identity holds in every group; no constraint.
    None,
    /// `x² = e`.
    XInvolution,
    /// `y² = e`.
    YInvolution,
    /// `x² = y²`.
    EqualSquares,
    /// `x²y² = e`.
    InverseSquares,
    /// `(xy)² = e`.
    ProductInvolution,
    /// `(xy⁻¹)² = e`.
    QuotientInvolution,
    /// `xy = yx`.
    Commuting,
    /// `y⁻¹xy = x⁻¹`.
    ConjugationInvertsX,
    /// `x⁻¹yx = y⁻¹`.
    ConjugationInvertsY,
}

impl RelationClass {
    /// Which named image condition the forced relation contradicts:
    /// `a` = no involutions, `b` = no shared squares, `c` = no
    /// involutive products, `d` = no commuting pairs, `e` = no
    /// conjugation inverting an element.
    pub fn contradicts(self) -> Option<&'static str> {
        match self {
            RelationClass::None => None,
            RelationClass::XInvolution | RelationClass::YInvolution => Some("a"),
            RelationClass::EqualSquares | RelationClass::InverseSquares => Some("b"),
            RelationClass::ProductInvolution | RelationClass::QuotientInvolution => Some("c"),
            RelationClass::Commuting => Some("d"),
            RelationClass::ConjugationInvertsX | RelationClass::ConjugationInvertsY => Some("e"),
        }
    }
}

/// One row of the sign-pattern table.
#[derive(Clone, Debug)]
pub struct CaseRow {
    pub alpha: i8,
    pub beta: i8,
    pub gamma: i8,
    pub delta: i8,
    /// Reduced witness word `(x^α y^β)⁻¹ (x y^γ)^δ` in the free group.
    pub witness: Element,
    pub relation: RelationClass,
    /// The image condition the relation contradicts, if any.
    pub contradicts: Option<&'static str>,
}

/// Derives, for each of the sixteen sign patterns, the universal
/// relation forced by `x^α y^β = (x y^γ)^δ`.
///
/// The witness word is reduced in the free group on `{x, y}` and then
/// classified up to cyclic rotation and inversion against the candidate
/// relator words — nothing is hardcoded per row.
pub fn sign_case_table() -> Vec<CaseRow> {
    let mut rows = Vec::new();
    for &alpha in &[1i8, -1] {
        for &beta in &[1i8, -1] {
            for &gamma in &[1i8, -1] {
                for &delta in &[1i8, -1] {
                    let witness = case_witness(alpha, beta, gamma, delta);
                    let relation = classify_relator(&witness);
                    rows.push(CaseRow {
                        alpha,
                        beta,
                        gamma,
                        delta,
                        witness: Element::word(&witness),
                        relation,
                        contradicts: relation.contradicts(),
                    });
                }
            }
        }
    }
    rows
}

fn case_witness(alpha: i8, beta: i8, gamma: i8, delta: i8) -> Vec<i8> {
    let x = 1i8;
    let y = 2i8;
    // left = x^α y^β, right = (x y^γ)^δ, witness = left⁻¹ · right.
    let mut left = vec![x * alpha, y * beta];
    let base = vec![x, y * gamma];
    let right: Vec<i8> = if delta == 1 {
        base
    } else {
        base.iter().rev().map(|l| -l).collect()
    };
    left.reverse();
    let left_inv: Vec<i8> = left.iter().map(|l| -l).collect();
    let mut word = left_inv;
    word.extend(right);
    crate::group::reduce_word(word)
}

/// Candidate relator words for each non-trivial relation class.
fn relation_candidates() -> Vec<(RelationClass, Vec<i8>)> {
    vec![
        (RelationClass::XInvolution, vec![1, 1]),
        (RelationClass::YInvolution, vec![2, 2]),
        (RelationClass::EqualSquares, vec![1, 1, -2, -2]),
        (RelationClass::InverseSquares, vec![1, 1, 2, 2]),
        (RelationClass::ProductInvolution, vec![1, 2, 1, 2]),
        (RelationClass::QuotientInvolution, vec![1, -2, 1, -2]),
        (RelationClass::Commuting, vec![-1, -2, 1, 2]),
        (RelationClass::ConjugationInvertsX, vec![-2, 1, 2, 1]),
        (RelationClass::ConjugationInvertsY, vec![-1, 2, 1, 2]),
    ]
}

fn cyclically_reduce(mut w: Vec<i8>) -> Vec<i8> {
    while w.len() >= 2 && w.first().copied() == w.last().map(|l| -l) {
        w.remove(0);
        w.pop();
    }
    w
}

fn rotations_with_inverse(w: &[i8]) -> Vec<Vec<i8>> {
    let mut out = Vec::new();
    let inv: Vec<i8> = w.iter().rev().map(|l| -l).collect();
    for base in [w.to_vec(), inv] {
        for r in 0..base.len().max(1) {
            let mut rot = base[r..].to_vec();
            rot.extend_from_slice(&base[..r]);
            out.push(rot);
        }
    }
    out
}

fn classify_relator(witness: &[i8]) -> RelationClass {
    let reduced = cyclically_reduce(witness.to_vec());
    if reduced.is_empty() {
        return RelationClass::None;
    }
    let variants = rotations_with_inverse(&reduced);
    for (class, candidate) in relation_candidates() {
        if variants.iter().any(|v| *v == candidate) {
            return class;
        }
    }
    RelationClass::None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coarse::ElementMap;
    use crate::group::parse_group;

    fn standard(group: &Group) -> GeneratingSet {
        GeneratingSet::standard(group.clone(), "std").unwrap()
    }

    /// Brute-force oracle: every permutation of the group, kept if it
    /// preserves the full distance matrix.
    fn brute_force_isometries(gens: &GeneratingSet) -> Vec<Vec<u32>> {
        let tables = FiniteTables::new(gens.group()).unwrap();
        let steps = step_indices(&tables, gens).unwrap();
        let matrix = distance_matrix(&tables, &steps).unwrap();
        let n = tables.len();
        let mut result = Vec::new();
        let mut perm: Vec<usize> = (0..n).collect();
        permute_all(&mut perm, 0, &mut |p| {
            let ok = (0..n).all(|i| (0..n).all(|j| matrix[i][j] == matrix[p[i]][p[j]]));
            if ok {
                result.push(p.iter().map(|i| *i as u32).collect());
            }
        });
        result.sort();
        result
    }

    fn permute_all(perm: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
        if k == perm.len() {
            visit(perm);
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            permute_all(perm, k + 1, visit);
            perm.swap(k, i);
        }
    }

    #[test]
    fn backtracking_matches_brute_force_on_small_groups() {
        let cases: Vec<GeneratingSet> = vec![
            standard(&Group::Cyclic(2)),
            standard(&Group::Cyclic(3)),
            standard(&Group::Cyclic(4)),
            standard(&Group::Cyclic(5)),
            standard(&Group::Cyclic(6)),
            standard(&Group::Direct(
                Box::new(Group::Cyclic(2)),
                Box::new(Group::Cyclic(2)),
            )),
            standard(&Group::Direct(
                Box::new(Group::Cyclic(2)),
                Box::new(Group::Cyclic(3)),
            )),
        ];
        for gens in cases {
            let mut got = enumerate_isometries(&gens, DEFAULT_MAX_ISOMETRY_ORDER)
                .unwrap()
                .permutations;
            got.sort();
            let expected = brute_force_isometries(&gens);
            assert_eq!(got, expected, "marking {}", gens.group());
        }
    }

    #[test]
    fn cycle_markings_have_dihedral_isometry_groups() {
        for (n, expected) in [(3u32, 6usize), (4, 8), (5, 10), (6, 12)] {
            let gens = standard(&Group::Cyclic(n));
            let report = enumerate_isometries(&gens, DEFAULT_MAX_ISOMETRY_ORDER).unwrap();
            assert_eq!(report.permutations.len(), expected, "cycle of order {n}");
        }
    }

    #[test]
    fn complete_marking_yields_every_permutation() {
        // All three involutions of C₂×C₂ give the complete graph, whose
        // isometries are all 4! bijections.
        let c2 = Group::Cyclic(2);
        let v4 = Group::Direct(Box::new(c2.clone()), Box::new(c2));
        let involutions: Vec<Element> = v4
            .elements()
            .unwrap()
            .into_iter()
            .filter(|e| !v4.is_identity(e))
            .collect();
        let gens = GeneratingSet::new(v4, involutions, "all").unwrap();
        let report = enumerate_isometries(&gens, DEFAULT_MAX_ISOMETRY_ORDER).unwrap();
        assert_eq!(report.permutations.len(), 24);
        assert_eq!(report.structure, StructureHint::Other);
    }

    #[test]
    fn isometries_form_a_group_containing_the_translations() {
        let gens = standard(&Group::Cyclic(6));
        let report = enumerate_isometries(&gens, DEFAULT_MAX_ISOMETRY_ORDER).unwrap();
        let perms: std::collections::BTreeSet<Vec<u32>> =
            report.permutations.iter().cloned().collect();
        let n = report.elements.len();
        for p in &perms {
            // Inverse permutation stays in the set.
            let mut inv = vec![0u32; n];
            for i in 0..n {
                inv[p[i] as usize] = i as u32;
            }
            assert!(perms.contains(&inv));
            // Compositions stay in the set.
            for q in &perms {
                let composed: Vec<u32> = (0..n).map(|i| p[q[i] as usize]).collect();
                assert!(perms.contains(&composed));
            }
        }
        // Every left translation preserves the metric.
        let tables = FiniteTables::new(gens.group()).unwrap();
        for g in 0..n {
            let translation: Vec<u32> = (0..n).map(|i| tables.mul[g][i] as u32).collect();
            assert!(perms.contains(&translation));
        }
        assert_eq!(perms.len() % n, 0, "order divisible by the group order");
    }

    #[test]
    fn shared_isometries_of_small_cyclic_groups_are_dihedral() {
        for (n, expected) in [(2u32, 2usize), (3, 6), (5, 10), (6, 12)] {
            let report =
                shared_isometry_group(&Group::Cyclic(n), DEFAULT_MAX_ISOMETRY_ORDER).unwrap();
            assert_eq!(report.permutations.len(), expected, "order {n}");
            if n > 2 {
                assert_eq!(report.structure, StructureHint::TranslationsAndInversion);
            }
        }
    }

    #[test]
    fn shared_isometries_of_elementary_abelian_groups_are_translations() {
        let c2 = Group::Cyclic(2);
        let v4 = Group::Direct(Box::new(c2.clone()), Box::new(c2.clone()));
        let report = shared_isometry_group(&v4, DEFAULT_MAX_ISOMETRY_ORDER).unwrap();
        assert_eq!(report.permutations.len(), 4);
        assert_eq!(report.structure, StructureHint::TranslationsOnly);

        let v8 = Group::Direct(Box::new(v4.clone()), Box::new(c2.clone()));
        let report = shared_isometry_group(&v8, DEFAULT_MAX_ISOMETRY_ORDER).unwrap();
        assert_eq!(report.permutations.len(), 8);
        assert_eq!(report.structure, StructureHint::TranslationsOnly);
    }

    #[test]
    fn order_bound_is_enforced() {
        let c30 = Group::Cyclic(30);
        assert!(matches!(
            shared_isometry_group(&c30, DEFAULT_MAX_ISOMETRY_ORDER),
            Err(IsomError::TooLarge { order: 30, .. })
        ));
        let gens = standard(&c30);
        assert!(matches!(
            enumerate_isometries(&gens, 24),
            Err(IsomError::TooLarge { .. })
        ));
        assert!(enumerate_isometries(&gens, 30).is_ok());
    }

    #[test]
    fn non_generating_marking_is_rejected() {
        let c6 = parse_group("cyclic(6)").unwrap();
        let gens = GeneratingSet::new(c6, [Element::residue(2)], "even").unwrap();
        assert!(matches!(
            enumerate_isometries(&gens, DEFAULT_MAX_ISOMETRY_ORDER),
            Err(IsomError::NotGenerating { .. })
        ));
    }

    #[test]
    fn doubling_the_integers_is_refuted_at_unit_budget() {
        let z = Group::FreeAbelian(1);
        let map = CoarseMap::forward_only(
            z.clone(),
            z.clone(),
            ElementMap::Homomorphism {
                images: vec![Element::vector(&[2])],
            },
        )
        .unwrap();
        let requests = vec![FamilyRequest {
            g: Element::vector(&[1]),
            h: Element::vector(&[0]),
            scale: 4,
        }];
        let summary = refute_shared_candidate(
            &map,
            &requests,
            Ratio::from_integer(1),
            Ratio::from_integer(0),
            1_000_000,
        )
        .unwrap();
        assert_eq!(summary.checked, 1);
        assert_eq!(summary.skipped, 0);
        let cert = summary.refuted.expect("doubling must be refuted");
        assert_eq!(cert.offset, Element::vector(&[1]));
        assert_eq!(cert.image_offset, Element::vector(&[2]));
        assert_eq!(cert.scale, 2);
        assert!(cert.report.pass);
        // The family used is the frozen worked construction for (1, 2).
        let got: Vec<i64> = cert
            .family
            .gens
            .elements()
            .iter()
            .map(|e| match e {
                Element::Vector(v) => v[0],
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(got, vec![2, 9, 28]);
    }

    #[test]
    fn inversion_offsets_cannot_be_refuted() {
        let z = Group::FreeAbelian(1);
        let map = CoarseMap::inversion(z.clone()).unwrap();
        let requests = vec![
            FamilyRequest {
                g: Element::vector(&[3]),
                h: Element::vector(&[0]),
                scale: 4,
            },
            FamilyRequest {
                g: Element::vector(&[7]),
                h: Element::vector(&[2]),
                scale: 4,
            },
        ];
        let summary = refute_shared_candidate(
            &map,
            &requests,
            Ratio::from_integer(1),
            Ratio::from_integer(0),
            1_000_000,
        )
        .unwrap();
        assert!(!summary.is_refuted());
        assert_eq!(summary.skipped, 2);
        assert_eq!(summary.checked, 0);
    }

    #[test]
    fn free_group_candidate_with_twisted_images_is_refuted() {
        let f2 = Group::Free(2);
        // Send a ↦ a, b ↦ ab: a homomorphism, but the generator offset
        // b has image offset ab, which no symmetric marking equates.
        let map = CoarseMap::forward_only(
            f2.clone(),
            f2.clone(),
            ElementMap::Homomorphism {
                images: vec![Element::word(&[1]), Element::word(&[1, 2])],
            },
        )
        .unwrap();
        let requests = vec![FamilyRequest {
            g: Element::word(&[2]),
            h: f2.identity(),
            scale: 3,
        }];
        let summary = refute_shared_candidate(
            &map,
            &requests,
            Ratio::from_integer(1),
            Ratio::from_integer(1),
            1_000_000,
        )
        .unwrap();
        assert!(summary.is_refuted());
    }

    #[test]
    fn translations_and_inversion_are_sign_homomorphic() {
        let c5 = Group::Cyclic(5);
        let report = shared_isometry_group(&c5, DEFAULT_MAX_ISOMETRY_ORDER).unwrap();
        for perm in &report.permutations {
            let sign = permutation_sign_homomorphy(&c5, perm).unwrap();
            assert!(sign.pass, "failed for {perm:?}");
        }
    }

    #[test]
    fn a_non_multiplicative_permutation_fails_with_witness_pairs() {
        // Swap two non-identity elements of the cycle of order 5 and fix
        // the rest: distance to multiplicativity shows up immediately.
        let c5 = Group::Cyclic(5);
        let perm = vec![0u32, 2, 1, 3, 4];
        let report = permutation_sign_homomorphy(&c5, &perm).unwrap();
        assert!(!report.pass);
        assert!(!report.failures.is_empty());
    }

    #[test]
    fn dropping_the_twisting_factor_needs_the_minus_sign() {
        // In Z ⋊ C₄ with the sign action, projecting away the finite
        // part is multiplicative only up to sign: (1,1)·(1,1) = (0,2)
        // projects to 0 = 1 − 1.
        let group = parse_group("semidirect(zn(1),cyclic(4),action=inversion)").unwrap();
        let map = CoarseMap::project_left(group.clone()).unwrap();
        let gens = GeneratingSet::standard(group.clone(), "std").unwrap();
        let pairs = ball_pairs(&gens, 2, 10_000).unwrap();
        let report = check_sign_homomorphy(&map, &pairs).unwrap();
        assert!(report.pass, "every pair resolves to one of the signs");
        assert!(report.minus_occurs);
        let twist = Element::semi(&[1], Element::residue(1));
        let entry = report
            .entries
            .iter()
            .find(|e| e.g == twist && e.h == twist)
            .expect("the twisting pair is sampled");
        assert_eq!(entry.sign, SignOutcome::Minus);
    }

    #[test]
    fn homomorphisms_carry_the_plus_sign_everywhere() {
        let z = Group::FreeAbelian(1);
        let map = CoarseMap::forward_only(
            z.clone(),
            z.clone(),
            ElementMap::Homomorphism {
                images: vec![Element::vector(&[2])],
            },
        )
        .unwrap();
        let gens = GeneratingSet::standard(z, "std").unwrap();
        let pairs = ball_pairs(&gens, 3, 10_000).unwrap();
        let report = check_sign_homomorphy(&map, &pairs).unwrap();
        assert!(report.pass);
        assert!(report.entries.iter().all(|e| e.sign == SignOutcome::Plus));
        assert!(!report.minus_occurs);
    }

    #[test]
    fn sign_case_table_matches_the_frozen_classification() {
        let rows = sign_case_table();
        assert_eq!(rows.len(), 16);
        let expected = [
            RelationClass::None,                // + + + +
            RelationClass::ProductInvolution,   // + + + -
            RelationClass::YInvolution,         // + + - +
            RelationClass::ConjugationInvertsX, // + + - -
            RelationClass::YInvolution,         // + - + +
            RelationClass::ConjugationInvertsX, // + - + -
            RelationClass::None,                // + - - +
            RelationClass::QuotientInvolution,  // + - - -
            RelationClass::XInvolution,         // - + + +
            RelationClass::ConjugationInvertsY, // - + + -
            RelationClass::EqualSquares,        // - + - +
            RelationClass::Commuting,           // - + - -
            RelationClass::InverseSquares,      // - - + +
            RelationClass::Commuting,           // - - + -
            RelationClass::XInvolution,         // - - - +
            RelationClass::ConjugationInvertsY, // - - - -
        ];
        let expected_contradictions = [
            None,
            Some("c"),
            Some("a"),
            Some("e"),
            Some("a"),
            Some("e"),
            None,
            Some("c"),
            Some("a"),
            Some("e"),
            Some("b"),
            Some("d"),
            Some("b"),
            Some("d"),
            Some("a"),
            Some("e"),
        ];
        for ((row, want), contradiction) in
            rows.iter().zip(expected).zip(expected_contradictions)
        {
            assert_eq!(
                row.relation, want,
                "pattern ({}, {}, {}, {})",
                row.alpha, row.beta, row.gamma, row.delta
            );
            assert_eq!(row.contradicts, contradiction);
        }
        assert_eq!(
            rows.iter().filter(|r| r.relation == RelationClass::None).count(),
            2,
            "exactly two patterns force nothing"
        );
    }

    #[test]
    fn case_witnesses_are_conjugate_to_their_relators() {
        // Independent check: each non-trivial witness must be conjugate
        // (up to inversion) to its candidate relator by a short word.
        let f2 = Group::Free(2);
        let mut conjugators = vec![f2.identity()];
        let letters = [1i8, -1, 2, -2];
        for a in letters {
            conjugators.push(Element::word(&[a]));
            for b in letters {
                conjugators.push(Element::word(&[a, b]));
                for c in letters {
                    conjugators.push(Element::word(&[a, b, c]));
                }
            }
        }
        let relators: HashMap<RelationClass, Vec<i8>> =
            relation_candidates().into_iter().collect();
        for row in sign_case_table() {
            if row.relation == RelationClass::None {
                assert_eq!(row.witness, f2.identity(), "trivial rows reduce to nothing");
                continue;
            }
            let relator = Element::word(&relators[&row.relation]);
            let relator_inv = f2.invert(&relator).unwrap();
            let found = conjugators.iter().any(|c| {
                let conj = f2.conjugate(&relator, c).unwrap();
                let conj_inv = f2.conjugate(&relator_inv, c).unwrap();
                conj == row.witness || conj_inv == row.witness
            });
            assert!(
                found,
                "no short conjugator for pattern ({}, {}, {}, {})",
                row.alpha, row.beta, row.gamma, row.delta
            );
        }
    }
}
