//! Generating families that separate a pair of elements at a chosen
//! scale, plus structural conditions on generating sets and images.
//!
//! A separating family puts one element of the pair at distance ≤ 1 from
//! the identity while forcing the other beyond a certified threshold, so
//! the two word lengths differ by at least the requested scale. The
//! verification is an honest breadth-first certificate, not a by-product
//! of the construction.

use crate::group::{Element, GeneratingSet, Group, GroupError};
use crate::metric::{word_length, Length, MetricError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("the two elements are equal; no marking separates them")]
    EqualPair,
    #[error("the elements are mutually inverse; symmetric markings give them equal length")]
    InversePair,
    #[error("invalid request: {0}")]
    Invalid(String),
}

/// A pair of elements with the scale at which they must be separated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyRequest {
    pub g: Element,
    pub h: Element,
    pub scale: u32,
}

/// A generating family built to separate one pair of elements.
#[derive(Clone, Debug)]
pub struct SeparatingFamily {
    pub gens: GeneratingSet,
    /// The element kept close: either the identity or a family member.
    pub near: Element,
    /// Exact word length of `near` by construction (0 or 1).
    pub near_length: u32,
    /// The element forced far from the identity.
    pub far: Element,
    /// The requested minimal gap between the two word lengths.
    pub scale: u32,
    /// True when the roles of the requested pair were exchanged.
    pub swapped: bool,
}

/// Outcome of certifying a separating family by breadth-first search.
#[derive(Clone, Debug)]
pub struct SeparationReport {
    pub pass: bool,
    pub near_length: u32,
    pub far_length: Length,
    /// The far element must be certified at least this long.
    pub required: u32,
}

/// Certifies that the family separates its pair at the requested scale.
pub fn verify_separation(
    family: &SeparatingFamily,
    cap: u64,
) -> Result<SeparationReport, FamilyError> {
    let near = word_length(&family.gens, &family.near, 2, cap, false)?;
    let Some(near_length) = near.exact() else {
        return Ok(SeparationReport {
            pass: false,
            near_length: u32::MAX,
            far_length: near,
            required: family.scale,
        });
    };
    if near_length != family.near_length {
        return Ok(SeparationReport {
            pass: false,
            near_length,
            far_length: Length::Exact(near_length),
            required: family.scale,
        });
    }
    let required = family.scale + near_length;
    let probe = required.saturating_sub(1);
    let far_length = word_length(&family.gens, &family.far, probe, cap, false)?;
    Ok(SeparationReport {
        pass: far_length.certifies_at_least(required),
        near_length,
        far_length,
        required,
    })
}

/// Outcome of checking the one-step/far-apart property of a marking
/// against a request.
#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub pass: bool,
    pub g_length: Length,
    pub h_length: Length,
    /// The far element of the satisfied branch must measure at least
    /// this much.
    pub required: u32,
}

/// Checks the separation property directly on a marking: one element of
/// the pair lies within one step of the identity while the other is
/// certified at least `scale` away (either assignment of roles counts).
///
/// The identity element counts as within one step. Search overflow on
/// the far side counts as success: the probe radius certifies the lower
/// bound.
pub fn verify_property(
    gens: &GeneratingSet,
    request: &FamilyRequest,
    cap: u64,
) -> Result<PropertyReport, FamilyError> {
    if request.scale == 0 {
        return Err(FamilyError::Invalid("scale must be positive".into()));
    }
    let probe = request.scale.saturating_sub(1).max(1);
    let g_length = word_length(gens, &request.g, probe, cap, false)?;
    let h_length = word_length(gens, &request.h, probe, cap, false)?;
    let near = |len: &Length| matches!(len.exact(), Some(0) | Some(1));
    let far = |len: &Length| len.certifies_at_least(request.scale);
    let pass = (near(&g_length) && far(&h_length)) || (near(&h_length) && far(&g_length));
    Ok(PropertyReport {
        pass,
        g_length,
        h_length,
        required: request.scale,
    })
}

/// True when `candidate = base^k` for some integer `k`.
fn is_word_power_of(group: &Group, candidate: &Element, base: &Element) -> Result<bool, FamilyError> {
    if group.is_identity(base) {
        return Ok(group.is_identity(candidate));
    }
    let base_len = word_letter_count(base);
    let cand_len = word_letter_count(candidate);
    let bound = cand_len / base_len.max(1) + 1;
    for k in 0..=bound {
        let k = i64::try_from(k).map_err(|_| FamilyError::Invalid("power bound overflow".into()))?;
        if group.power(base, k)? == *candidate || group.power(base, -k)? == *candidate {
            return Ok(true);
        }
    }
    Ok(false)
}

fn word_letter_count(e: &Element) -> usize {
    match e {
        Element::Word(w) => w.len(),
        _ => 0,
    }
}

/// Search budget for probing a candidate marking inside the free
/// constructor; small because the probe radius is below the scale.
const SHAPE_PROBE_CAP: u64 = 250_000;

/// True when the candidate members certifiably keep the far element at
/// distance `scale` or more. Anything short of a certificate — the far
/// element found nearby, or the probe overflowing — counts as failure,
/// so the caller falls back to the stronger member shape.
fn flat_shape_separates(group: &Group, members: &[Element], far: &Element, scale: u32) -> bool {
    let Ok(gens) = GeneratingSet::new(group.clone(), members.to_vec(), "probe") else {
        return false;
    };
    match word_length(&gens, far, scale.saturating_sub(1), SHAPE_PROBE_CAP, false) {
        Ok(Length::AtLeast(_)) | Ok(Length::Infinite) => true,
        Ok(Length::Exact(d)) => d >= scale,
        Err(_) => false,
    }
}

/// A disguised letter protected on both sides: `shift·s·shift`, with the
/// letter oriented away from cancellation at the junctions where
/// possible, and the longer result kept otherwise.
fn buried_member(group: &Group, shift: &Element, s: &Element) -> Result<Element, FamilyError> {
    let wrap = |letter: &Element| -> Result<Element, FamilyError> {
        Ok(group.multiply(&group.multiply(shift, letter)?, shift)?)
    };
    let full = 2 * word_letter_count(shift) + word_letter_count(s);
    let plain = wrap(s)?;
    if word_letter_count(&plain) == full {
        return Ok(plain);
    }
    let flipped = wrap(&group.invert(s)?)?;
    if word_letter_count(&flipped) >= word_letter_count(&plain) {
        Ok(flipped)
    } else {
        Ok(plain)
    }
}

/// Builds a family in a free group separating `g` from `h` by at least
/// `scale`.
///
/// One element of the pair becomes a family member (or stays the
/// identity); the basis letters are disguised as `x^{m^j}·s_j^{±1}` with
/// a spread of exponents so that no short product recovers the far
/// element. Each letter is oriented so that it does not cancel into the
/// anchor power, keeping every disguised member longer than `m`.
///
/// That flat shape has a blind spot: a member and its inverse bracket
/// any short anchor power, so a far element such as `s⁻¹·x·s` costs only
/// three steps no matter how large the exponents grow. The candidate
/// marking is therefore probed directly, and when the far element is
/// reachable below the scale (or the probe cannot certify), each letter
/// is buried between two anchor blocks instead — `x^{m^j}·s_j·x^{m^j}` —
/// so every use of a member pays for both blocks and no cheap
/// conjugation survives. Equal or mutually inverse pairs are rejected:
/// a symmetric marking always assigns them equal lengths.
pub fn family_free(
    rank: u32,
    g: &Element,
    h: &Element,
    scale: u32,
) -> Result<SeparatingFamily, FamilyError> {
    let group = Group::Free(rank);
    group.validate()?;
    group.check_element(g)?;
    group.check_element(h)?;
    if g == h {
        return Err(FamilyError::EqualPair);
    }
    if group.invert(g)? == *h {
        return Err(FamilyError::InversePair);
    }

    // Decide which element stays near. The far one must not be a power
    // of the near one, or powers of the near generator would reach it.
    let (near, far, swapped) = if group.is_identity(g) {
        (group.identity(), h.clone(), false)
    } else if group.is_identity(h) {
        (group.identity(), g.clone(), true)
    } else if !is_word_power_of(&group, h, g)? {
        (g.clone(), h.clone(), false)
    } else {
        // `h = g^k` with `k ∉ {0, ±1}`, so `g` is not a power of `h`.
        (h.clone(), g.clone(), true)
    };

    let far_len = word_letter_count(&far) as u32;
    let p = scale.max(far_len).max(1);
    let m = i64::from(p) + 1;

    let basis = group.standard_generators();
    let mut elements = Vec::new();
    let (anchor, disguised): (Element, Vec<Element>) = if group.is_identity(&near) {
        // Keep the identity at distance zero; anchor on the first basis
        // letter the far element is not a power of.
        let anchor = basis
            .iter()
            .find(|b| !is_word_power_of(&group, &far, b).unwrap_or(true))
            .cloned()
            .ok_or_else(|| {
                FamilyError::Invalid("no basis letter independent of the far element".into())
            })?;
        let rest = basis.iter().filter(|b| **b != anchor).cloned().collect();
        (anchor, rest)
    } else {
        let rest = basis.iter().filter(|b| **b != near).cloned().collect();
        (near.clone(), rest)
    };
    elements.push(anchor.clone());
    let mut exponents = Vec::new();
    let mut exponent: i64 = 1;
    for s in &disguised {
        exponent = exponent
            .checked_mul(m)
            .ok_or_else(|| FamilyError::Invalid("exponent overflow".into()))?;
        exponents.push(exponent);
        let shift = group.power(&anchor, exponent)?;
        let mut member = group.multiply(&shift, s)?;
        if word_letter_count(&member) <= word_letter_count(&shift) {
            member = group.multiply(&shift, &group.invert(s)?)?;
        }
        elements.push(member);
    }

    if !flat_shape_separates(&group, &elements, &far, scale) {
        elements.truncate(1);
        for (s, exponent) in disguised.iter().zip(&exponents) {
            let shift = group.power(&anchor, *exponent)?;
            elements.push(buried_member(&group, &shift, s)?);
        }
    }

    let near_length = u32::from(!group.is_identity(&near));
    let gens = GeneratingSet::new(group, elements, "separating")?;
    Ok(SeparatingFamily {
        gens,
        near,
        near_length,
        far,
        scale,
        swapped,
    })
}

/// Builds a family in the integers separating `g` from `h` by at least
/// `scale`.
///
/// The disguising generators are `P²` and `P³+1` for a modulus `P`
/// larger than the scale and both inputs, coprime to the near element;
/// their sizes force any expression of the far element to be long.
pub fn family_abelian_z(g: i64, h: i64, scale: u32) -> Result<SeparatingFamily, FamilyError> {
    if g == h {
        return Err(FamilyError::EqualPair);
    }
    if g == -h && g != 0 {
        return Err(FamilyError::InversePair);
    }
    let multiple_of = |a: i64, b: i64| b != 0 && a % b == 0;
    let (near, far, swapped) = if g == 0 {
        (0, h, false)
    } else if h == 0 {
        (0, g, true)
    } else if !multiple_of(h, g) {
        (g, h, false)
    } else {
        // `h` is a proper multiple of `g`, so `g` cannot be one of `h`.
        (h, g, true)
    };

    let group = Group::FreeAbelian(1);
    let bound = i64::from(scale).max(near.abs()).max(far.abs());
    let mut elements = Vec::new();
    let p = if near == 0 {
        1 + bound
    } else {
        let mut p = 1 + bound;
        while gcd(p, near) != 1 {
            p += 1;
        }
        elements.push(Element::vector(&[near]));
        p
    };
    let p2 = p.checked_mul(p).ok_or_else(|| FamilyError::Invalid("modulus overflow".into()))?;
    let p3 = p2.checked_mul(p).ok_or_else(|| FamilyError::Invalid("modulus overflow".into()))?;
    elements.push(Element::vector(&[p2]));
    elements.push(Element::vector(&[p3 + 1]));

    let near_length = u32::from(near != 0);
    let near = Element::vector(&[near]);
    let far = Element::vector(&[far]);
    let gens = GeneratingSet::new(group, elements, "separating")?;
    Ok(SeparatingFamily {
        gens,
        near,
        near_length,
        far,
        scale,
        swapped,
    })
}

fn gcd(a: i64, b: i64) -> i64 {
    num_integer::Integer::gcd(&a.abs(), &b.abs())
}

/// One named structural condition together with a counterexample when it
/// fails.
#[derive(Clone, Debug)]
pub struct ConditionCheck {
    pub name: &'static str,
    pub holds: bool,
    pub witness: Option<Vec<Element>>,
}

/// Verdict over a list of structural conditions.
#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub pass: bool,
    pub conditions: Vec<ConditionCheck>,
}

impl ConditionReport {
    fn from_checks(conditions: Vec<ConditionCheck>) -> ConditionReport {
        ConditionReport {
            pass: conditions.iter().all(|c| c.holds),
            conditions,
        }
    }

    pub fn failing(&self) -> Vec<&'static str> {
        self.conditions
            .iter()
            .filter(|c| !c.holds)
            .map(|c| c.name)
            .collect()
    }
}

fn symmetric_steps(group: &Group, base: &[Element]) -> Result<Vec<Element>, FamilyError> {
    let mut steps = Vec::new();
    for e in base {
        group.check_element(e)?;
        if group.is_identity(e) {
            return Err(FamilyError::Invalid(
                "the identity cannot belong to a generating set".into(),
            ));
        }
        steps.push(e.clone());
        steps.push(group.invert(e)?);
    }
    steps.sort();
    steps.dedup();
    Ok(steps)
}

/// Checks the five rigidity conditions on a generating set.
///
/// Over the symmetric closure `S` these require: no product of two steps
/// is a step; no `s₁²s₂² = e` for `s₂ ∉ {s₁, s₁⁻¹}`; no conjugate of a
/// step by an independent step equals its inverse; no such conjugate
/// equals the step itself (commuting steps); and at least two steps that
/// are not mutually inverse. Together they pin down how translations can
/// interact, which is what makes isometry groups rigid.
pub fn rigidity_conditions(
    group: &Group,
    base: &[Element],
) -> Result<ConditionReport, FamilyError> {
    let steps = symmetric_steps(group, base)?;
    let mut checks = Vec::new();

    let mut witness: Option<Vec<Element>> = None;
    'outer1: for s1 in &steps {
        for s2 in &steps {
            let prod = group.multiply(s1, s2)?;
            if steps.contains(&prod) {
                witness = Some(vec![s1.clone(), s2.clone(), prod]);
                break 'outer1;
            }
        }
    }
    checks.push(ConditionCheck {
        name: "no-product-of-two-steps-is-a-step",
        holds: witness.is_none(),
        witness,
    });

    let mut witness: Option<Vec<Element>> = None;
    'outer2: for s1 in &steps {
        for s2 in &steps {
            if s2 == s1 || *s2 == group.invert(s1)? {
                continue;
            }
            let square_product =
                group.multiply(&group.power(s1, 2)?, &group.power(s2, 2)?)?;
            if group.is_identity(&square_product) {
                witness = Some(vec![s1.clone(), s2.clone()]);
                break 'outer2;
            }
        }
    }
    checks.push(ConditionCheck {
        name: "no-squares-cancel",
        holds: witness.is_none(),
        witness,
    });

    let mut witness: Option<Vec<Element>> = None;
    'outer3: for s1 in &steps {
        for s2 in &steps {
            if s2 == s1 || *s2 == group.invert(s1)? {
                continue;
            }
            if group.conjugate(s1, s2)? == group.invert(s1)? {
                witness = Some(vec![s1.clone(), s2.clone()]);
                break 'outer3;
            }
        }
    }
    checks.push(ConditionCheck {
        name: "no-conjugate-inverts-a-step",
        holds: witness.is_none(),
        witness,
    });

    let mut witness: Option<Vec<Element>> = None;
    'outer4: for s1 in &steps {
        for s2 in &steps {
            if s2 == s1 || *s2 == group.invert(s1)? {
                continue;
            }
            if group.conjugate(s1, s2)? == *s1 {
                witness = Some(vec![s1.clone(), s2.clone()]);
                break 'outer4;
            }
        }
    }
    checks.push(ConditionCheck {
        name: "no-independent-steps-commute",
        holds: witness.is_none(),
        witness,
    });

    let enough = has_two_non_inverse(group, &steps)?;
    checks.push(ConditionCheck {
        name: "at-least-two-independent-steps",
        holds: enough,
        witness: None,
    });

    Ok(ConditionReport::from_checks(checks))
}

fn has_two_non_inverse(group: &Group, steps: &[Element]) -> Result<bool, FamilyError> {
    for (i, a) in steps.iter().enumerate() {
        for b in steps.iter().skip(i + 1) {
            if *b != group.invert(a)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Checks the six conditions on a list of image elements that make a
/// sign assignment force a genuine homomorphism.
///
/// The list is taken as given (typically the images of a symmetric
/// generating set): no element squares to the identity, no two distinct
/// elements share a square, no product of two distinct elements is an
/// involution, no two independent elements commute, no conjugation
/// inverts an element, and there are at least two elements that are not
/// mutually inverse.
pub fn image_conditions(group: &Group, images: &[Element]) -> Result<ConditionReport, FamilyError> {
    let mut elems = Vec::new();
    for e in images {
        group.check_element(e)?;
        elems.push(e.clone());
    }
    elems.sort();
    elems.dedup();
    let mut checks = Vec::new();

    let mut witness: Option<Vec<Element>> = None;
    for x in &elems {
        if group.is_identity(&group.power(x, 2)?) {
            witness = Some(vec![x.clone()]);
            break;
        }
    }
    checks.push(ConditionCheck {
        name: "no-involutions",
        holds: witness.is_none(),
        witness,
    });

    let mut witness: Option<Vec<Element>> = None;
    'sq: for x in &elems {
        for y in &elems {
            if x == y {
                continue;
            }
            if group.power(x, 2)? == group.power(y, 2)? {
                witness = Some(vec![x.clone(), y.clone()]);
                break 'sq;
            }
        }
    }
    checks.push(ConditionCheck {
        name: "no-shared-squares",
        holds: witness.is_none(),
        witness,
    });

    let mut witness: Option<Vec<Element>> = None;
    'pr: for x in &elems {
        for y in &elems {
            if x == y {
                continue;
            }
            let xy = group.multiply(x, y)?;
            if group.is_identity(&group.power(&xy, 2)?) && !group.is_identity(&xy) {
                witness = Some(vec![x.clone(), y.clone()]);
                break 'pr;
            }
        }
    }
    checks.push(ConditionCheck {
        name: "no-involutive-products",
        holds: witness.is_none(),
        witness,
    });

    let mut witness: Option<Vec<Element>> = None;
    'cm: for x in &elems {
        for y in &elems {
            if x == y || *y == group.invert(x)? {
                continue;
            }
            if group.conjugate(x, y)? == *x {
                witness = Some(vec![x.clone(), y.clone()]);
                break 'cm;
            }
        }
    }
    checks.push(ConditionCheck {
        name: "no-independent-commuting-images",
        holds: witness.is_none(),
        witness,
    });

    let mut witness: Option<Vec<Element>> = None;
    'ci: for x in &elems {
        for y in &elems {
            if x == y || *y == group.invert(x)? {
                continue;
            }
            if group.conjugate(x, y)? == group.invert(x)? {
                witness = Some(vec![x.clone(), y.clone()]);
                break 'ci;
            }
        }
    }
    checks.push(ConditionCheck {
        name: "no-conjugation-inverts-an-image",
        holds: witness.is_none(),
        witness,
    });

    let enough = has_two_non_inverse(group, &elems)?;
    checks.push(ConditionCheck {
        name: "at-least-two-independent-images",
        holds: enough,
        witness: None,
    });

    Ok(ConditionReport::from_checks(checks))
}

/// Admissibility of a finite cyclic order under the torsion obstruction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorsionReport {
    pub order: u64,
    pub totient: u64,
    /// True when the multiplicative unit group is small enough (at most
    /// two units), which happens exactly for orders 1, 2, 3, 4 and 6.
    pub admissible: bool,
}

/// Euler's totient by trial-division factorization.
pub fn euler_totient(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Checks whether a cyclic factor of the given order can survive the
/// torsion obstruction: its unit group must have at most two elements.
pub fn torsion_obstruction(order: u64) -> TorsionReport {
    let totient = euler_totient(order);
    TorsionReport {
        order,
        totient,
        admissible: order > 0 && totient <= 2,
    }
}
