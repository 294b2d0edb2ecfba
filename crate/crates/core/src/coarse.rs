//! Coarse maps between marked groups and their distortion analysis.
//!
//! A [`CoarseMap`] bundles a forward map, an optional coarse inverse, and
//! the two group descriptors. [`fit_parameters`] measures, over a
//! deterministic family of sampled pairs inside metric balls, the minimal
//! additive constant `ε` for each multiplicative constant `λ` on a grid —
//! all in exact rational arithmetic — plus how far the two compositions
//! are from the identity and how far the forward image is from covering
//! the inner codomain ball.

use crate::group::{Element, FreeEmbedding, GeneratingSet, Group, GroupError};
use crate::metric::{
    closed_form_length, enumerate_ball, is_standard_marking, word_length, Ball, Length,
    MetricError,
};
use num_rational::Ratio;
use std::collections::{BTreeMap, HashMap, HashSet};
use thiserror::Error;

/// Exact rational multiplicative constant.
pub type Lambda = Ratio<i64>;

/// The default multiplicative grid: 1, 3/2, 2, 3, 4.
pub fn default_lambda_grid() -> Vec<Lambda> {
    vec![
        Ratio::from_integer(1),
        Ratio::new(3, 2),
        Ratio::from_integer(2),
        Ratio::from_integer(3),
        Ratio::from_integer(4),
    ]
}

#[derive(Debug, Error)]
pub enum CoarseError {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("map is undefined on sampled element {element}")]
    MapUndefined { element: String },
    #[error("map shape mismatch: {0}")]
    Mismatch(String),
    #[error("operation needs a coarse inverse, but none was provided")]
    MissingBackward,
}

/// One pointwise map between (elements of) two groups.
#[derive(Clone, Debug)]
pub enum ElementMap {
    /// `x ↦ x` between identical groups.
    Identity,
    /// `x ↦ x⁻¹` on one group.
    Inversion,
    /// `x ↦ g·x` on one group.
    LeftTranslation(Element),
    /// Extension of generator images by normal-form decomposition.
    ///
    /// `images[i]` is the image of the i-th canonical generator of the
    /// domain. The extension is well defined for any image list; whether
    /// it is multiplicative is a property checked elsewhere.
    Homomorphism { images: Vec<Element> },
    /// First component of a pair / the lattice part / the word part.
    ProjectLeft,
    /// Second component of a pair / the finite part / the center.
    ProjectRight,
    /// `x ↦ (x, e)` into a product-like codomain.
    EmbedLeft,
    /// `x ↦ (e, x)` into a product-like codomain.
    EmbedRight,
    /// Free-subgroup embedding by generator substitution.
    SchreierEmbed(FreeEmbedding),
    /// Coset retraction inverting [`ElementMap::SchreierEmbed`].
    SchreierRetract(FreeEmbedding),
    /// Finite lookup table.
    Table(BTreeMap<Element, Element>),
}

/// A forward map with group context and an optional coarse inverse.
#[derive(Clone, Debug)]
pub struct CoarseMap {
    domain: Group,
    codomain: Group,
    forward: ElementMap,
    backward: Option<ElementMap>,
}

impl CoarseMap {
    pub fn new(
        domain: Group,
        codomain: Group,
        forward: ElementMap,
        backward: Option<ElementMap>,
    ) -> Result<CoarseMap, CoarseError> {
        domain.validate()?;
        codomain.validate()?;
        let map = CoarseMap {
            domain,
            codomain,
            forward,
            backward,
        };
        // Evaluating on the identity exercises every shape constraint
        // except table coverage, which is checked lazily per element.
        if !matches!(map.forward, ElementMap::Table(_)) {
            map.forward(&map.domain.identity())?;
        }
        if map.backward.is_some() && !matches!(map.backward, Some(ElementMap::Table(_))) {
            map.backward(&map.codomain.identity())?;
        }
        Ok(map)
    }

    pub fn identity(group: Group) -> CoarseMap {
        CoarseMap::new(
            group.clone(),
            group,
            ElementMap::Identity,
            Some(ElementMap::Identity),
        )
        .expect("identity map is always well formed")
    }

    pub fn inversion(group: Group) -> Result<CoarseMap, CoarseError> {
        CoarseMap::new(
            group.clone(),
            group,
            ElementMap::Inversion,
            Some(ElementMap::Inversion),
        )
    }

    /// Left translation by `g`, with translation by `g⁻¹` as inverse.
    pub fn translation(group: Group, g: Element) -> Result<CoarseMap, CoarseError> {
        let g_inv = group.invert(&g)?;
        CoarseMap::new(
            group.clone(),
            group,
            ElementMap::LeftTranslation(g),
            Some(ElementMap::LeftTranslation(g_inv)),
        )
    }

    /// Projection of a product-like group onto its first coordinate,
    /// with the canonical section as coarse inverse.
    pub fn project_left(domain: Group) -> Result<CoarseMap, CoarseError> {
        let codomain = left_factor(&domain)?;
        CoarseMap::new(
            domain,
            codomain,
            ElementMap::ProjectLeft,
            Some(ElementMap::EmbedLeft),
        )
    }

    /// The finite-index free-subgroup embedding with its retraction.
    pub fn schreier(embedding: FreeEmbedding) -> CoarseMap {
        CoarseMap::new(
            embedding.domain().clone(),
            embedding.codomain().clone(),
            ElementMap::SchreierEmbed(embedding.clone()),
            Some(ElementMap::SchreierRetract(embedding)),
        )
        .expect("free-subgroup embedding is well formed")
    }

    /// A map given only in the forward direction.
    pub fn forward_only(
        domain: Group,
        codomain: Group,
        forward: ElementMap,
    ) -> Result<CoarseMap, CoarseError> {
        CoarseMap::new(domain, codomain, forward, None)
    }

    pub fn with_backward(mut self, backward: ElementMap) -> Result<CoarseMap, CoarseError> {
        self.backward = Some(backward);
        if !matches!(self.backward, Some(ElementMap::Table(_))) {
            self.backward(&self.codomain.identity())?;
        }
        Ok(self)
    }

    pub fn domain(&self) -> &Group {
        &self.domain
    }

    pub fn codomain(&self) -> &Group {
        &self.codomain
    }

    pub fn forward_map(&self) -> &ElementMap {
        &self.forward
    }

    pub fn backward_map(&self) -> Option<&ElementMap> {
        self.backward.as_ref()
    }

    pub fn forward(&self, x: &Element) -> Result<Element, CoarseError> {
        apply(&self.forward, &self.domain, &self.codomain, x)
    }

    pub fn backward(&self, y: &Element) -> Result<Element, CoarseError> {
        let map = self.backward.as_ref().ok_or(CoarseError::MissingBackward)?;
        apply(map, &self.codomain, &self.domain, y)
    }

    /// The same pair of maps with the roles of the directions swapped.
    pub fn reversed(&self) -> Result<CoarseMap, CoarseError> {
        let backward = self.backward.clone().ok_or(CoarseError::MissingBackward)?;
        Ok(CoarseMap {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            forward: backward,
            backward: Some(self.forward.clone()),
        })
    }
}

fn left_factor(group: &Group) -> Result<Group, CoarseError> {
    match group {
        Group::Direct(a, _) => Ok(a.as_ref().clone()),
        Group::Semidirect { rank, .. } => Ok(Group::FreeAbelian(*rank)),
        Group::Central(n) => Ok(Group::Free(*n)),
        other => Err(CoarseError::Mismatch(format!(
            "{other} has no product structure to project from"
        ))),
    }
}

fn apply(
    map: &ElementMap,
    domain: &Group,
    codomain: &Group,
    x: &Element,
) -> Result<Element, CoarseError> {
    domain.check_element(x)?;
    let result = match map {
        ElementMap::Identity => {
            require(domain == codomain, "identity needs equal groups")?;
            x.clone()
        }
        ElementMap::Inversion => {
            require(domain == codomain, "inversion needs equal groups")?;
            domain.invert(x)?
        }
        ElementMap::LeftTranslation(g) => {
            require(domain == codomain, "translation needs equal groups")?;
            domain.multiply(g, x)?
        }
        ElementMap::Homomorphism { images } => {
            require(
                images.len() == domain.generator_count(),
                "one image per canonical generator required",
            )?;
            let mut acc = codomain.identity();
            for (index, exponent) in domain.decompose(x)? {
                let factor = codomain.power(&images[index], exponent)?;
                acc = codomain.multiply(&acc, &factor)?;
            }
            acc
        }
        ElementMap::ProjectLeft => match x {
            Element::Pair(l, _) => l.as_ref().clone(),
            Element::Semi(v, _) => Element::Vector(v.clone()),
            Element::Central(w, _) => Element::Word(w.clone()),
            _ => return Err(CoarseError::Mismatch("no left component to project".into())),
        },
        ElementMap::ProjectRight => match x {
            Element::Pair(_, r) => r.as_ref().clone(),
            Element::Semi(_, f) => f.as_ref().clone(),
            Element::Central(_, c) => Element::Vector(vec![*c]),
            _ => {
                return Err(CoarseError::Mismatch(
                    "no right component to project".into(),
                ))
            }
        },
        ElementMap::EmbedLeft => match codomain {
            Group::Direct(_, b) => Element::pair(x.clone(), b.identity()),
            Group::Semidirect { finite, .. } => {
                let Element::Vector(v) = x else {
                    return Err(CoarseError::Mismatch(
                        "lattice embedding expects a vector".into(),
                    ));
                };
                Element::Semi(v.clone(), Box::new(finite.identity()))
            }
            Group::Central(_) => {
                let Element::Word(w) = x else {
                    return Err(CoarseError::Mismatch("word embedding expects a word".into()));
                };
                Element::Central(w.clone(), 0)
            }
            other => {
                return Err(CoarseError::Mismatch(format!(
                    "{other} has no product structure to embed into"
                )))
            }
        },
        ElementMap::EmbedRight => match codomain {
            Group::Direct(a, _) => Element::pair(a.identity(), x.clone()),
            Group::Semidirect { rank, .. } => {
                Element::Semi(vec![0; *rank as usize], Box::new(x.clone()))
            }
            Group::Central(_) => {
                let Element::Vector(v) = x else {
                    return Err(CoarseError::Mismatch(
                        "center embedding expects a rank-1 vector".into(),
                    ));
                };
                require(v.len() == 1, "center embedding expects a rank-1 vector")?;
                Element::Central(Vec::new(), v[0])
            }
            other => {
                return Err(CoarseError::Mismatch(format!(
                    "{other} has no product structure to embed into"
                )))
            }
        },
        ElementMap::SchreierEmbed(emb) => emb.apply(x)?,
        ElementMap::SchreierRetract(emb) => emb.retract(x)?,
        ElementMap::Table(table) => {
            table
                .get(x)
                .cloned()
                .ok_or_else(|| CoarseError::MapUndefined {
                    element: crate::group::format_element(domain, x),
                })?
        }
    };
    codomain.check_element(&result)?;
    Ok(result)
}

fn require(cond: bool, message: &str) -> Result<(), CoarseError> {
    if cond {
        Ok(())
    } else {
        Err(CoarseError::Mismatch(message.to_string()))
    }
}

/// A distance value that may only be known as a lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Defect {
    Exact(u32),
    AtLeast(u32),
}

impl Defect {
    pub fn within(&self, budget: u32) -> bool {
        match self {
            Defect::Exact(d) => *d <= budget,
            Defect::AtLeast(_) => false,
        }
    }

    pub fn lower_bound(&self) -> u32 {
        match self {
            Defect::Exact(d) | Defect::AtLeast(d) => *d,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Defect::Exact(_))
    }
}

/// Which direction of the pair scan produced a witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessSide {
    Forward,
    Backward,
}

/// A sampled pair realizing the extremal distortion at some `λ`.
#[derive(Clone, Debug)]
pub struct PairWitness {
    pub side: WitnessSide,
    pub x: Element,
    pub y: Element,
    /// Distance between the pair in the map's source marked group.
    pub source_distance: u32,
    /// Distance between the images in the target marked group
    /// (a lower bound when the probe overflowed).
    pub target_distance: u32,
}

/// Result of fitting multiplicative/additive constants on finite balls.
#[derive(Clone, Debug)]
pub struct QiFit {
    pub lambda_grid: Vec<Lambda>,
    /// Minimal additive constant per grid `λ` over all sampled pairs.
    pub eps_of_lambda: Vec<Lambda>,
    /// Extremal pair per grid `λ` (None when no pair forces `ε > 0`).
    pub witnesses: Vec<Option<PairWitness>>,
    pub radius: u32,
    pub anchor_radius: u32,
    /// Grid entry minimizing `λ + ε`, used to derive the inner radius.
    pub best: (Lambda, Lambda),
    /// `⌊(radius − ε₀)/λ₀⌋`, clamped at zero.
    pub inner_radius: u32,
    /// Max distance between `x` and `η′(η(x))` on the inner domain ball,
    /// and between `y` and `η(η′(y))` on the inner codomain ball.
    pub nearness_defect: Defect,
    /// Radius of the codomain ball probed for surjectivity: the inner
    /// radius shrunk by the search limit, so that truncation of the
    /// sampled image at the boundary cannot inflate the defect.
    pub surjectivity_radius: u32,
    /// Minimal `ε` such that every codomain element within
    /// [`QiFit::surjectivity_radius`] lies within `ε` of the image of
    /// the sampled domain ball.
    pub surjectivity_defect: Defect,
    /// True when some sampled image distance exceeded every probe bound,
    /// making the reported `ε` values lower bounds only.
    pub distance_overflow: bool,
}

impl QiFit {
    pub fn eps_at(&self, lambda: &Lambda) -> Option<Lambda> {
        self.lambda_grid
            .iter()
            .position(|l| l == lambda)
            .map(|i| self.eps_of_lambda[i])
    }
}

struct BallCache<'a> {
    gens: &'a GeneratingSet,
    ball: Ball,
    cap: u64,
    standard: bool,
    overflow: bool,
}

impl<'a> BallCache<'a> {
    fn new(gens: &'a GeneratingSet, radius: u32, cap: u64) -> Result<Self, CoarseError> {
        let ball = enumerate_ball(gens, &gens.group().identity(), radius, cap, false)?;
        ball.require_complete(cap)?;
        Ok(BallCache {
            gens,
            ball,
            cap,
            standard: is_standard_marking(gens),
            overflow: false,
        })
    }

    /// Distance of `e` from the identity; falls back to a closed form or
    /// a bounded probe when `e` lies outside the cached ball.
    fn length(&mut self, e: &Element) -> Result<Defect, CoarseError> {
        if let Some(d) = self.ball.distance(e) {
            return Ok(Defect::Exact(d));
        }
        if self.standard {
            if let Some(d) = closed_form_length(self.gens.group(), e) {
                return Ok(Defect::Exact(d));
            }
        }
        let probe_radius = 2 * self.ball.radius() + 2;
        match word_length(self.gens, e, probe_radius, self.cap, false)? {
            Length::Exact(d) => Ok(Defect::Exact(d)),
            Length::AtLeast(b) => {
                self.overflow = true;
                Ok(Defect::AtLeast(b))
            }
            Length::Infinite => {
                self.overflow = true;
                Ok(Defect::AtLeast(probe_radius + 1))
            }
        }
    }
}

/// Fits additive constants for each grid `λ` over deterministic pair
/// families, then measures composition nearness and surjectivity on the
/// inner ball.
///
/// Sampled pairs are `(x, x′)` with `x` in the small anchor ball and `x′`
/// in the full radius-`r` ball, taken on the domain side through the
/// forward map and on the codomain side through the coarse inverse.
/// Distances are exact word metrics; constants are exact rationals.
pub fn fit_parameters(
    map: &CoarseMap,
    s_dom: &GeneratingSet,
    s_cod: &GeneratingSet,
    radius: u32,
    lambda_grid: &[Lambda],
    cap: u64,
) -> Result<QiFit, CoarseError> {
    if s_dom.group() != map.domain() || s_cod.group() != map.codomain() {
        return Err(CoarseError::Mismatch(
            "generating sets must match the map's domain and codomain".into(),
        ));
    }
    if lambda_grid.is_empty() {
        return Err(CoarseError::Mismatch("lambda grid must be non-empty".into()));
    }
    for l in lambda_grid {
        if *l < Ratio::from_integer(1) {
            return Err(CoarseError::Mismatch(
                "multiplicative constants below one are not meaningful".into(),
            ));
        }
    }
    let anchor = radius.min(1);
    let mut dom = BallCache::new(s_dom, radius + anchor, cap)?;
    let mut cod = BallCache::new(s_cod, radius + anchor, cap)?;

    let mut eps: Vec<Lambda> = vec![Ratio::from_integer(0); lambda_grid.len()];
    let mut witnesses: Vec<Option<PairWitness>> = vec![None; lambda_grid.len()];

    // Images over the sampled balls, cached for reuse by the nearness
    // and surjectivity stages.
    let dom_entries: Vec<(Element, u32)> = dom.ball.sorted_entries();
    let mut forward_of: HashMap<Element, Element> = HashMap::new();
    for (x, d) in &dom_entries {
        if *d <= radius {
            forward_of.insert(x.clone(), map.forward(x)?);
        }
    }
    let cod_entries: Vec<(Element, u32)> = cod.ball.sorted_entries();
    let mut backward_of: HashMap<Element, Element> = HashMap::new();
    if map.backward_map().is_some() {
        for (y, d) in &cod_entries {
            if *d <= radius {
                backward_of.insert(y.clone(), map.backward(y)?);
            }
        }
    }

    {
        let source_ball = dom.ball.clone();
        scan_side(
            WitnessSide::Forward,
            map.domain(),
            map.codomain(),
            &source_ball,
            &dom_entries,
            anchor,
            radius,
            &forward_of,
            &mut cod,
            lambda_grid,
            &mut eps,
            &mut witnesses,
        )?;
    }
    if map.backward_map().is_some() {
        let source_ball = cod.ball.clone();
        scan_side(
            WitnessSide::Backward,
            map.codomain(),
            map.domain(),
            &source_ball,
            &cod_entries,
            anchor,
            radius,
            &backward_of,
            &mut dom,
            lambda_grid,
            &mut eps,
            &mut witnesses,
        )?;
    }

    // Pick the grid entry minimizing λ + ε; ties prefer the smaller λ.
    let mut best_index = 0;
    for i in 1..lambda_grid.len() {
        let cur = lambda_grid[i] + eps[i];
        let best = lambda_grid[best_index] + eps[best_index];
        if cur < best || (cur == best && lambda_grid[i] < lambda_grid[best_index]) {
            best_index = i;
        }
    }
    let (lambda0, eps0) = (lambda_grid[best_index], eps[best_index]);
    let inner_radius = inner_radius(radius, lambda0, eps0);

    // Composition nearness on the inner balls.
    let mut nearness = Defect::Exact(0);
    if map.backward_map().is_some() {
        for (x, d) in &dom_entries {
            if *d > inner_radius {
                continue;
            }
            let round_trip = map.backward(&forward_of[x])?;
            let offset = map.domain().quotient(x, &round_trip)?;
            nearness = max_defect(nearness, dom.length(&offset)?);
        }
        for (y, d) in &cod_entries {
            if *d > inner_radius {
                continue;
            }
            let round_trip = map.forward(&backward_of[y])?;
            let offset = map.codomain().quotient(y, &round_trip)?;
            nearness = max_defect(nearness, cod.length(&offset)?);
        }
    }

    // Surjectivity onto the codomain ball, with a margin: near the
    // sampling boundary the image is truncated, so targets stay
    // `search_limit` steps inside the inner ball.
    let image: HashSet<Element> = forward_of.values().cloned().collect();
    let search_limit = ceil_to_u32(eps0).saturating_add(2).max(2);
    let surjectivity_radius = inner_radius.saturating_sub(search_limit);
    let mut surjectivity = Defect::Exact(0);
    for (y, d) in &cod_entries {
        if *d > surjectivity_radius {
            continue;
        }
        let found = distance_to_set(map.codomain(), s_cod, y, &image, search_limit)?;
        surjectivity = max_defect(surjectivity, found);
    }

    Ok(QiFit {
        lambda_grid: lambda_grid.to_vec(),
        eps_of_lambda: eps,
        witnesses,
        radius,
        anchor_radius: anchor,
        best: (lambda0, eps0),
        inner_radius,
        nearness_defect: nearness,
        surjectivity_radius,
        surjectivity_defect: surjectivity,
        distance_overflow: dom.overflow || cod.overflow,
    })
}

/// Scans anchored pairs in one direction, tightening `ε` per grid `λ`.
///
/// For each pair `(x, x′)` with `‖x‖ ≤ anchor` and `‖x′‖ ≤ radius`, the
/// source distance comes from the complete radius-`(radius+anchor)` ball
/// and the image distance from the target cache. The additive constant
/// this pair demands is `max(d_img − λ·d_src, d_src/λ − d_img, 0)`.
#[allow(clippy::too_many_arguments)]
fn scan_side(
    side: WitnessSide,
    source: &Group,
    target_group: &Group,
    source_ball: &Ball,
    source_entries: &[(Element, u32)],
    anchor: u32,
    radius: u32,
    image_of: &HashMap<Element, Element>,
    target: &mut BallCache<'_>,
    lambda_grid: &[Lambda],
    eps: &mut [Lambda],
    witnesses: &mut [Option<PairWitness>],
) -> Result<(), CoarseError> {
    for (x, dx) in source_entries {
        if *dx > anchor {
            continue;
        }
        let x_inv = source.invert(x)?;
        let image_x_inv = target_group.invert(&image_of[x])?;
        for (x2, d2) in source_entries {
            if *d2 > radius {
                continue;
            }
            let q = source.multiply(&x_inv, x2)?;
            let d_src = source_ball
                .distance(&q)
                .expect("pair quotient lies inside the sampled source ball");
            let u = target_group.multiply(&image_x_inv, &image_of[x2])?;
            let d_img = target.length(&u)?.lower_bound();
            let src = Ratio::from_integer(i64::from(d_src));
            let img = Ratio::from_integer(i64::from(d_img));
            for (i, lambda) in lambda_grid.iter().enumerate() {
                let upper_gap = img - *lambda * src;
                let lower_gap = src / *lambda - img;
                let needed = upper_gap.max(lower_gap);
                if needed > eps[i] {
                    eps[i] = needed;
                    witnesses[i] = Some(PairWitness {
                        side,
                        x: x.clone(),
                        y: x2.clone(),
                        source_distance: d_src,
                        target_distance: d_img,
                    });
                }
            }
        }
    }
    Ok(())
}

fn inner_radius(radius: u32, lambda0: Lambda, eps0: Lambda) -> u32 {
    let r = Ratio::from_integer(i64::from(radius));
    if eps0 >= r {
        return 0;
    }
    let inner = (r - eps0) / lambda0;
    inner.floor().to_integer().max(0) as u32
}

fn ceil_to_u32(x: Lambda) -> u32 {
    x.ceil().to_integer().max(0) as u32
}

fn max_defect(a: Defect, b: Defect) -> Defect {
    let bound = a.lower_bound().max(b.lower_bound());
    if a.is_exact() && b.is_exact() {
        Defect::Exact(bound)
    } else {
        Defect::AtLeast(bound)
    }
}

/// Exact distance from `y` to the nearest element of `set`, probing
/// outward through products (not restricted to an enumerated region) up
/// to `limit` steps.
fn distance_to_set(
    group: &Group,
    gens: &GeneratingSet,
    y: &Element,
    set: &HashSet<Element>,
    limit: u32,
) -> Result<Defect, CoarseError> {
    if set.contains(y) {
        return Ok(Defect::Exact(0));
    }
    let steps = gens.step_letters(false);
    let mut visited: HashSet<Element> = HashSet::new();
    visited.insert(y.clone());
    let mut frontier = vec![y.clone()];
    for d in 1..=limit {
        let mut next = Vec::new();
        for x in &frontier {
            for s in &steps {
                let z = group.multiply(x, s)?;
                if visited.insert(z.clone()) {
                    if set.contains(&z) {
                        return Ok(Defect::Exact(d));
                    }
                    next.push(z);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(Defect::AtLeast(limit + 1))
}

/// Pass/fail verdict for the additive budget at `λ = 1`.
#[derive(Clone, Debug)]
pub struct RoughCheck {
    pub pass: bool,
    pub eps_budget: u32,
    pub fit: QiFit,
    pub failure: Option<RoughFailure>,
}

/// The first certified obstruction found by [`check_rough_isometry`].
#[derive(Clone, Debug)]
pub enum RoughFailure {
    /// A sampled pair whose image distance distorts beyond the budget.
    Embedding(PairWitness),
    /// A round-trip composition strays beyond the budget.
    Nearness { defect: Defect },
    /// An inner-ball codomain element sits farther than the budget from
    /// the image.
    Surjectivity { defect: Defect },
    /// Probes overflowed, so the budget could be verified in neither
    /// direction.
    Unresolved,
}

/// Checks whether the map restricted to sampled balls satisfies the
/// additive-only distortion budget (multiplicative constant fixed at 1),
/// with near-inverse and near-surjectivity defects under the same budget.
pub fn check_rough_isometry(
    map: &CoarseMap,
    s_dom: &GeneratingSet,
    s_cod: &GeneratingSet,
    radius: u32,
    eps_budget: u32,
    cap: u64,
) -> Result<RoughCheck, CoarseError> {
    let grid = vec![Ratio::from_integer(1)];
    let fit = fit_parameters(map, s_dom, s_cod, radius, &grid, cap)?;
    let eps_budget_ratio = Ratio::from_integer(i64::from(eps_budget));

    let failure = if fit.eps_of_lambda[0] > eps_budget_ratio {
        Some(match fit.witnesses[0].clone() {
            Some(w) => RoughFailure::Embedding(w),
            None => RoughFailure::Unresolved,
        })
    } else if fit.distance_overflow {
        Some(RoughFailure::Unresolved)
    } else if !fit.nearness_defect.within(eps_budget) {
        Some(RoughFailure::Nearness {
            defect: fit.nearness_defect,
        })
    } else if !fit.surjectivity_defect.within(eps_budget) {
        Some(RoughFailure::Surjectivity {
            defect: fit.surjectivity_defect,
        })
    } else {
        None
    };

    Ok(RoughCheck {
        pass: failure.is_none(),
        eps_budget,
        fit,
        failure,
    })
}

/// One failed counting inequality inside [`GrowthTransfer`].
#[derive(Clone, Debug)]
pub struct TransferViolation {
    /// Radius at which the inequality failed.
    pub rho: u32,
    /// True when the domain ball exceeded its bound, false for codomain.
    pub domain_side: bool,
    pub ball: u64,
    pub bound: u128,
}

/// Ball-counting comparison between two marked groups linked by an
/// additive constant `ε`.
#[derive(Clone, Debug)]
pub struct GrowthTransfer {
    pub pass: bool,
    pub radius: u32,
    pub eps: u32,
    pub dom_sizes: Vec<u64>,
    pub cod_sizes: Vec<u64>,
    pub violations: Vec<TransferViolation>,
    pub truncated: bool,
}

/// Verifies, for every `ρ ≤ radius`, the two counting inequalities
/// `#B_dom(ρ) ≤ #B_dom(ε)·#B_cod(ρ+ε)` and
/// `#B_cod(ρ) ≤ #B_cod(ε)·#B_dom(ρ+ε)`.
///
/// Both inequalities hold whenever the marked groups admit a rough
/// isometry with additive constant `ε`, so a violation refutes every such
/// map. Sizes come from full ball enumeration (with the compact encoding
/// fast path where it applies).
pub fn growth_transfer_check(
    s_dom: &GeneratingSet,
    s_cod: &GeneratingSet,
    eps: u32,
    radius: u32,
    cap: u64,
) -> Result<GrowthTransfer, CoarseError> {
    let dom_report = crate::metric::ball_sizes(s_dom, radius + eps, cap, false)?;
    let cod_report = crate::metric::ball_sizes(s_cod, radius + eps, cap, false)?;
    let truncated = dom_report.truncated || cod_report.truncated;

    let dom_sizes = dom_report.sizes.clone();
    let cod_sizes = cod_report.sizes.clone();
    // A finite group's report may stop before the requested radius once
    // the ball saturates; the last size then holds for all larger radii.
    let size_at = |sizes: &Vec<u64>, r: u32| -> Option<u64> {
        match sizes.get(r as usize) {
            Some(v) => Some(*v),
            None if !truncated => sizes.last().copied(),
            None => None,
        }
    };

    let mut violations = Vec::new();
    let mut checked_all = true;
    for rho in 0..=radius {
        let sizes = (
            size_at(&dom_sizes, rho),
            size_at(&cod_sizes, rho),
            size_at(&dom_sizes, eps),
            size_at(&cod_sizes, eps),
            size_at(&dom_sizes, rho + eps),
            size_at(&cod_sizes, rho + eps),
        );
        let (
            Some(dom_rho),
            Some(cod_rho),
            Some(dom_eps),
            Some(cod_eps),
            Some(dom_shift),
            Some(cod_shift),
        ) = sizes
        else {
            checked_all = false;
            continue;
        };
        let bound_dom = u128::from(dom_eps) * u128::from(cod_shift);
        if u128::from(dom_rho) > bound_dom {
            violations.push(TransferViolation {
                rho,
                domain_side: true,
                ball: dom_rho,
                bound: bound_dom,
            });
        }
        let bound_cod = u128::from(cod_eps) * u128::from(dom_shift);
        if u128::from(cod_rho) > bound_cod {
            violations.push(TransferViolation {
                rho,
                domain_side: false,
                ball: cod_rho,
                bound: bound_cod,
            });
        }
    }

    Ok(GrowthTransfer {
        pass: violations.is_empty() && checked_all && !truncated,
        radius,
        eps,
        dom_sizes,
        cod_sizes,
        violations,
        truncated: truncated || !checked_all,
    })
}
