//! Word metrics on Cayley graphs: ball enumeration, word lengths,
//! growth reports, and subgroup diameters.
//!
//! Every breadth-first traversal honors a hard element cap. When the cap
//! would be exceeded the traversal stops cleanly and reports the largest
//! fully completed radius instead of a half-built layer.

mod export;
mod packed;

pub use export::{ball_to_csv, ball_to_dot};

use crate::group::{Element, GeneratingSet, Group, GroupError};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error(
        "element cap {cap} exceeded: completed radius {completed_radius} of {requested_radius}"
    )]
    CapExceeded {
        cap: u64,
        completed_radius: u32,
        requested_radius: u32,
    },
    #[error("target element is not generated by the set")]
    NotGenerated,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Exact distances from a center on a Cayley graph, out to some radius.
#[derive(Clone, Debug)]
pub struct Ball {
    gens: GeneratingSet,
    center: Element,
    directed: bool,
    /// Largest radius whose layer is fully enumerated.
    radius: u32,
    requested_radius: u32,
    /// True when the cap stopped enumeration before the requested radius.
    truncated: bool,
    distances: HashMap<Element, u32>,
    /// `sphere_sizes[d]` counts elements at distance exactly `d`.
    sphere_sizes: Vec<u64>,
}

impl Ball {
    pub fn gens(&self) -> &GeneratingSet {
        &self.gens
    }

    pub fn group(&self) -> &Group {
        self.gens.group()
    }

    pub fn center(&self) -> &Element {
        &self.center
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn requested_radius(&self) -> u32 {
        self.requested_radius
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn len(&self) -> usize {
        self.distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distances.is_empty()
    }

    /// Distance from the center, if within the enumerated radius.
    pub fn distance(&self, e: &Element) -> Option<u32> {
        self.distances.get(e).copied()
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.distances.contains_key(e)
    }

    /// Cumulative ball sizes `#B(0), …, #B(radius)`.
    pub fn sizes(&self) -> Vec<u64> {
        let mut total = 0;
        self.sphere_sizes
            .iter()
            .map(|s| {
                total += s;
                total
            })
            .collect()
    }

    /// Sphere sizes `#S(0), …, #S(radius)`.
    pub fn sphere_sizes(&self) -> &[u64] {
        &self.sphere_sizes
    }

    /// All enumerated elements in canonical order with their distances.
    pub fn sorted_entries(&self) -> Vec<(Element, u32)> {
        let mut entries: Vec<(Element, u32)> =
            self.distances.iter().map(|(e, d)| (e.clone(), *d)).collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        entries
    }

    /// Errors out if the cap truncated this ball before the requested radius.
    pub fn require_complete(&self, cap: u64) -> Result<&Ball, MetricError> {
        if self.truncated {
            Err(MetricError::CapExceeded {
                cap,
                completed_radius: self.radius,
                requested_radius: self.requested_radius,
            })
        } else {
            Ok(self)
        }
    }
}

/// Enumerates the ball of the given radius around `center`.
///
/// In the symmetric (default) case each step multiplies on the right by a
/// generator or an inverse; with `directed` only the generators themselves
/// are used, which yields an asymmetric distance.
pub fn enumerate_ball(
    gens: &GeneratingSet,
    center: &Element,
    radius: u32,
    cap: u64,
    directed: bool,
) -> Result<Ball, MetricError> {
    let group = gens.group();
    group.check_element(center)?;
    if cap == 0 {
        return Err(MetricError::InvalidInput("element cap must be positive".into()));
    }
    let steps = gens.step_letters(directed);
    let mut distances: HashMap<Element, u32> = HashMap::new();
    distances.insert(center.clone(), 0);
    let mut sphere_sizes = vec![1u64];
    let mut frontier = vec![center.clone()];
    let mut completed = 0;
    let mut truncated = false;
    'layers: for d in 0..radius {
        let mut next = Vec::new();
        for x in &frontier {
            for s in &steps {
                let y = group.multiply(x, s)?;
                if !distances.contains_key(&y) {
                    if distances.len() as u64 >= cap {
                        // Roll the half-built layer back so `radius` is exact.
                        for e in &next {
                            distances.remove(e);
                        }
                        truncated = true;
                        break 'layers;
                    }
                    distances.insert(y.clone(), d + 1);
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            // The group (or the cone reachable in the directed case) is
            // exhausted: all further layers are empty.
            completed = radius;
            break;
        }
        sphere_sizes.push(next.len() as u64);
        completed = d + 1;
        frontier = next;
    }
    Ok(Ball {
        gens: gens.clone(),
        center: center.clone(),
        directed,
        radius: completed,
        requested_radius: radius,
        truncated,
        distances,
        sphere_sizes,
    })
}

/// Result of a bounded word-length query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Length {
    /// The exact word length.
    Exact(u32),
    /// Not found within the probe radius: the length is at least this.
    AtLeast(u32),
    /// The element is not generated by the set at all.
    Infinite,
}

impl Length {
    /// True when the length is certified to be `>= bound`.
    pub fn certifies_at_least(&self, bound: u32) -> bool {
        match self {
            Length::Exact(d) => *d >= bound,
            Length::AtLeast(d) => *d >= bound,
            Length::Infinite => true,
        }
    }

    pub fn exact(&self) -> Option<u32> {
        match self {
            Length::Exact(d) => Some(*d),
            _ => None,
        }
    }
}

/// Word length of `g` with early exit, probing out to `r_max`.
///
/// Returns [`Length::AtLeast`]`(r_max + 1)` when `g` lies strictly outside
/// the probed ball — a certified lower bound, not a failure. Canonical
/// markings with a closed-form length return [`Length::Exact`] even beyond
/// `r_max`.
pub fn word_length(
    gens: &GeneratingSet,
    g: &Element,
    r_max: u32,
    cap: u64,
    directed: bool,
) -> Result<Length, MetricError> {
    let group = gens.group();
    group.check_element(g)?;
    if group.is_identity(g) {
        return Ok(Length::Exact(0));
    }
    if !directed && is_standard_marking(gens) {
        if let Some(d) = closed_form_length(group, g) {
            return Ok(Length::Exact(d));
        }
    }
    let steps = gens.step_letters(directed);
    let mut visited: HashMap<Element, u32> = HashMap::new();
    visited.insert(group.identity(), 0);
    let mut frontier = vec![group.identity()];
    for d in 0..r_max {
        let mut next = Vec::new();
        for x in &frontier {
            for s in &steps {
                let y = group.multiply(x, s)?;
                if !visited.contains_key(&y) {
                    if y == *g {
                        return Ok(Length::Exact(d + 1));
                    }
                    if visited.len() as u64 >= cap {
                        return Err(MetricError::CapExceeded {
                            cap,
                            completed_radius: d,
                            requested_radius: r_max,
                        });
                    }
                    visited.insert(y.clone(), d + 1);
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            return Ok(Length::Infinite);
        }
        frontier = next;
    }
    Ok(Length::AtLeast(r_max + 1))
}

/// True when the marking equals the canonical generating set of its
/// group up to symmetric closure, so closed-form lengths apply.
pub fn is_standard_marking(gens: &GeneratingSet) -> bool {
    let Ok(standard) = GeneratingSet::standard(gens.group().clone(), "standard") else {
        return false;
    };
    let mut ours = gens.step_letters(false);
    ours.sort();
    ours.dedup();
    let mut canonical = standard.step_letters(false);
    canonical.sort();
    canonical.dedup();
    ours == canonical
}

/// Word length under the canonical marking for families whose normal
/// form makes it explicit; `None` for other families or on overflow.
///
/// Free groups count reduced letters, lattices use the 1-norm, cyclic
/// groups the circular distance, and direct products add the coordinate
/// lengths (one coordinate moves per step).
pub fn closed_form_length(group: &Group, g: &Element) -> Option<u32> {
    let value: u64 = match (group, g) {
        (Group::Free(_), Element::Word(w)) => w.len() as u64,
        (Group::FreeAbelian(_), Element::Vector(v)) => {
            let mut total: u64 = 0;
            for x in v {
                total = total.checked_add(x.unsigned_abs())?;
            }
            total
        }
        (Group::Cyclic(n), Element::Residue(r)) => u64::from((*r).min(n - r)),
        (Group::Direct(a, b), Element::Pair(l, r)) => {
            let da = closed_form_length(a, l)?;
            let db = closed_form_length(b, r)?;
            u64::from(da) + u64::from(db)
        }
        _ => return None,
    };
    u32::try_from(value).ok()
}

/// Ball sizes only, identity-centered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeReport {
    /// Cumulative sizes `#B(0), …, #B(completed_radius)`.
    pub sizes: Vec<u64>,
    pub completed_radius: u32,
    pub truncated: bool,
}

/// Computes cumulative ball sizes around the identity.
///
/// Pure free groups take a packed-word fast path that stores elements as
/// fixed-width integers, which keeps multi-million-element enumerations
/// affordable; every other family falls back to the generic traversal.
pub fn ball_sizes(
    gens: &GeneratingSet,
    radius: u32,
    cap: u64,
    directed: bool,
) -> Result<SizeReport, MetricError> {
    if let Some(report) = packed::packed_ball_sizes(gens, radius, cap, directed)? {
        return Ok(report);
    }
    let ball = enumerate_ball(gens, &gens.group().identity(), radius, cap, directed)?;
    Ok(SizeReport {
        sizes: ball.sizes(),
        completed_radius: ball.radius(),
        truncated: ball.truncated(),
    })
}

/// Growth data for one marked group.
#[derive(Clone, Debug)]
pub struct GrowthReport {
    pub k_max: u32,
    /// Cumulative ball sizes `#B(0), …`.
    pub sizes: Vec<u64>,
    /// `(#B(k))^{1/k}` for `k ≥ 1`.
    pub ball_roots: Vec<f64>,
    /// `(#B(k) − #B(k−1))^{1/k}` for `k ≥ 1`.
    pub sphere_roots: Vec<f64>,
    /// Least-squares slope of `ln #B(k)` over the upper half of the radii.
    pub log_slope: f64,
    pub truncated: bool,
}

/// Ball sizes plus per-radius growth-rate estimators.
pub fn growth_report(
    gens: &GeneratingSet,
    k_max: u32,
    cap: u64,
    directed: bool,
) -> Result<GrowthReport, MetricError> {
    let report = ball_sizes(gens, k_max, cap, directed)?;
    let sizes = report.sizes;
    let mut ball_roots = Vec::new();
    let mut sphere_roots = Vec::new();
    for k in 1..sizes.len() {
        ball_roots.push((sizes[k] as f64).powf(1.0 / k as f64));
        let sphere = sizes[k] - sizes[k - 1];
        sphere_roots.push((sphere as f64).powf(1.0 / k as f64));
    }
    let achieved = report.completed_radius;
    let log_slope = tail_log_slope(&sizes, achieved);
    Ok(GrowthReport {
        k_max,
        sizes,
        ball_roots,
        sphere_roots,
        log_slope,
        truncated: report.truncated,
    })
}

/// Least-squares slope of `ln #B(k)` over `k` in the upper half of the
/// achieved radii (at least two points; 0.0 when not enough data).
fn tail_log_slope(sizes: &[u64], achieved: u32) -> f64 {
    if achieved < 2 {
        return 0.0;
    }
    let half = achieved.div_ceil(2);
    let start = (achieved - half).max(1);
    let points: Vec<(f64, f64)> = (start..=achieved)
        .map(|k| (k as f64, (sizes[k as usize] as f64).ln()))
        .collect();
    let n = points.len() as f64;
    let mean_x: f64 = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y: f64 = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Maximum word length over a finite subgroup, i.e. its diameter under
/// the (left-invariant) word metric of the ambient group.
///
/// `subgroup` must contain the identity and be closed under inversion and
/// multiplication; this is validated before any traversal.
pub fn subgroup_diameter(
    gens: &GeneratingSet,
    subgroup: &[Element],
    cap: u64,
) -> Result<u32, MetricError> {
    let group = gens.group();
    let mut sorted: Vec<Element> = subgroup.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != subgroup.len() {
        return Err(MetricError::InvalidInput(
            "subgroup list contains duplicates".into(),
        ));
    }
    validate_subgroup(group, &sorted)?;
    // Left-invariance turns the pairwise diameter into a max word length:
    // d(h1, h2) = ‖h1⁻¹h2‖ and h1⁻¹h2 ranges over the whole subgroup.
    let mut remaining: usize = sorted
        .iter()
        .filter(|h| !group.is_identity(h))
        .count();
    if remaining == 0 {
        return Ok(0);
    }
    let steps = gens.step_letters(false);
    let mut visited: HashMap<Element, u32> = HashMap::new();
    visited.insert(group.identity(), 0);
    let mut frontier = vec![group.identity()];
    let mut depth = 0;
    loop {
        depth += 1;
        let mut next = Vec::new();
        for x in &frontier {
            for s in &steps {
                let y = group.multiply(x, s)?;
                if !visited.contains_key(&y) {
                    if visited.len() as u64 >= cap {
                        return Err(MetricError::CapExceeded {
                            cap,
                            completed_radius: depth - 1,
                            requested_radius: depth,
                        });
                    }
                    if sorted.binary_search(&y).is_ok() {
                        remaining -= 1;
                    }
                    visited.insert(y.clone(), depth);
                    next.push(y);
                }
            }
        }
        if remaining == 0 {
            return Ok(depth);
        }
        if next.is_empty() {
            return Err(MetricError::NotGenerated);
        }
        frontier = next;
    }
}

fn validate_subgroup(group: &Group, sorted: &[Element]) -> Result<(), MetricError> {
    if sorted.binary_search(&group.identity()).is_err() {
        return Err(MetricError::InvalidInput(
            "subgroup must contain the identity".into(),
        ));
    }
    for h in sorted {
        group.check_element(h)?;
        let inv = group.invert(h)?;
        if sorted.binary_search(&inv).is_err() {
            return Err(MetricError::InvalidInput(
                "subgroup is not closed under inversion".into(),
            ));
        }
        for k in sorted {
            let prod = group.multiply(h, k)?;
            if sorted.binary_search(&prod).is_err() {
                return Err(MetricError::InvalidInput(
                    "subgroup is not closed under multiplication".into(),
                ));
            }
        }
    }
    Ok(())
}
