//! Group descriptors and exact arithmetic for the supported families.
//!
//! A [`Group`] value describes one concrete finitely generated group:
//! free groups, free-abelian lattices, finite cyclic groups, direct
//! products, free-times-central-integer products, and lattice-by-finite
//! semidirect products. All element arithmetic is dispatched through the
//! descriptor so that payload shapes can be validated at the boundary.

mod element;
mod genset;
mod parse;
mod schreier;

pub use element::{reduce_word, Element};
pub use genset::GeneratingSet;
pub use parse::{format_element, parse_element, parse_group};
pub use schreier::{schreier_f4_in_f2, FreeEmbedding};

use thiserror::Error;

/// How the finite part of a semidirect product acts on the lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Action {
    /// The finite part commutes with the lattice (plain direct product law).
    Trivial,
    /// Odd finite elements negate the lattice vector.
    Inversion,
}

/// Descriptor for one supported group family.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Group {
    /// Free group of the given rank.
    Free(u32),
    /// Free-abelian group `Z^n`.
    FreeAbelian(u32),
    /// Finite cyclic group of the given order (`1` gives the trivial group).
    Cyclic(u32),
    /// Direct product of two factors.
    Direct(Box<Group>, Box<Group>),
    /// Free group of the given rank with one extra central integer generator.
    Central(u32),
    /// Lattice `Z^rank` extended by a finite group acting on it.
    Semidirect {
        rank: u32,
        finite: Box<Group>,
        action: Action,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("element payload does not match group family {group}: {detail}")]
    FamilyMismatch { group: String, detail: String },
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("integer overflow in group arithmetic")]
    ArithmeticOverflow,
    #[error("unsupported group descriptor: {0}")]
    UnsupportedDescriptor(String),
    #[error("operation requires a finite group, but {0} is infinite")]
    NotFinite(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Largest word rank the text format supports (`a`..`z`).
pub const MAX_WORD_RANK: u32 = 26;

impl Group {
    /// Validates structural constraints of the descriptor itself.
    pub fn validate(&self) -> Result<(), GroupError> {
        match self {
            Group::Free(n) | Group::Central(n) => {
                if *n == 0 || *n > MAX_WORD_RANK {
                    return Err(GroupError::UnsupportedDescriptor(format!(
                        "word rank must be in 1..={MAX_WORD_RANK}, got {n}"
                    )));
                }
                Ok(())
            }
            Group::FreeAbelian(n) => {
                if *n == 0 {
                    return Err(GroupError::UnsupportedDescriptor(
                        "free-abelian rank must be positive".into(),
                    ));
                }
                Ok(())
            }
            Group::Cyclic(m) => {
                if *m == 0 {
                    return Err(GroupError::UnsupportedDescriptor(
                        "cyclic order must be positive".into(),
                    ));
                }
                Ok(())
            }
            Group::Direct(a, b) => {
                a.validate()?;
                b.validate()
            }
            Group::Semidirect {
                rank,
                finite,
                action,
            } => {
                if *rank == 0 {
                    return Err(GroupError::UnsupportedDescriptor(
                        "semidirect lattice rank must be positive".into(),
                    ));
                }
                finite.validate()?;
                if finite.order().is_none() {
                    return Err(GroupError::UnsupportedDescriptor(
                        "semidirect finite part must be a finite group".into(),
                    ));
                }
                if *action == Action::Inversion {
                    // Parity must be a homomorphism on the finite part.
                    match finite.as_ref() {
                        Group::Cyclic(m) if m % 2 == 0 => {}
                        other => {
                            return Err(GroupError::UnsupportedDescriptor(format!(
                                "inversion action requires a cyclic finite part of \
                                 even order, got {other}"
                            )))
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// Group order if finite.
    pub fn order(&self) -> Option<u64> {
        match self {
            Group::Free(_) | Group::FreeAbelian(_) | Group::Central(_) => None,
            Group::Cyclic(m) => Some(u64::from(*m)),
            Group::Direct(a, b) => Some(a.order()?.checked_mul(b.order()?)?),
            Group::Semidirect { .. } => None,
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            Group::Free(_) => Element::Word(Vec::new()),
            Group::FreeAbelian(n) => Element::Vector(vec![0; *n as usize]),
            Group::Cyclic(_) => Element::Residue(0),
            Group::Direct(a, b) => Element::pair(a.identity(), b.identity()),
            Group::Central(_) => Element::Central(Vec::new(), 0),
            Group::Semidirect { rank, finite, .. } => {
                Element::semi(&vec![0; *rank as usize], finite.identity())
            }
        }
    }

    pub fn is_identity(&self, e: &Element) -> bool {
        *e == self.identity()
    }

    /// Validates that `e` is a well-formed normal form for this group.
    pub fn check_element(&self, e: &Element) -> Result<(), GroupError> {
        let mismatch = |detail: &str| GroupError::FamilyMismatch {
            group: self.to_string(),
            detail: detail.to_string(),
        };
        match (self, e) {
            (Group::Free(n), Element::Word(w)) => check_word(w, *n),
            (Group::FreeAbelian(n), Element::Vector(v)) => {
                if v.len() == *n as usize {
                    Ok(())
                } else {
                    Err(mismatch("vector length differs from rank"))
                }
            }
            (Group::Cyclic(m), Element::Residue(r)) => {
                if r < m {
                    Ok(())
                } else {
                    Err(GroupError::InvalidElement(format!(
                        "residue {r} out of range for modulus {m}"
                    )))
                }
            }
            (Group::Direct(a, b), Element::Pair(l, r)) => {
                a.check_element(l)?;
                b.check_element(r)
            }
            (Group::Central(n), Element::Central(w, _)) => check_word(w, *n),
            (Group::Semidirect { rank, finite, .. }, Element::Semi(v, f)) => {
                if v.len() != *rank as usize {
                    return Err(mismatch("lattice vector length differs from rank"));
                }
                finite.check_element(f)
            }
            _ => Err(mismatch("payload shape belongs to a different family")),
        }
    }

    /// Sign through which a finite part acts on the lattice.
    fn action_sign(&self, finite_part: &Element) -> Result<i64, GroupError> {
        let Group::Semidirect { action, .. } = self else {
            unreachable!("action_sign is only called on semidirect descriptors");
        };
        match action {
            Action::Trivial => Ok(1),
            Action::Inversion => match finite_part {
                Element::Residue(t) => Ok(if t % 2 == 0 { 1 } else { -1 }),
                _ => Err(GroupError::InvalidElement(
                    "inversion action needs a cyclic finite part".into(),
                )),
            },
        }
    }

    pub fn multiply(&self, x: &Element, y: &Element) -> Result<Element, GroupError> {
        self.check_element(x)?;
        self.check_element(y)?;
        self.multiply_unchecked(x, y)
    }

    fn multiply_unchecked(&self, x: &Element, y: &Element) -> Result<Element, GroupError> {
        match (self, x, y) {
            (Group::Free(_), Element::Word(a), Element::Word(b)) => {
                Ok(Element::Word(concat_reduce(a, b)))
            }
            (Group::FreeAbelian(_), Element::Vector(a), Element::Vector(b)) => {
                Ok(Element::Vector(add_vectors(a, b)?))
            }
            (Group::Cyclic(m), Element::Residue(a), Element::Residue(b)) => {
                Ok(Element::Residue((a + b) % m))
            }
            (Group::Direct(ga, gb), Element::Pair(al, ar), Element::Pair(bl, br)) => {
                Ok(Element::pair(
                    ga.multiply_unchecked(al, bl)?,
                    gb.multiply_unchecked(ar, br)?,
                ))
            }
            (Group::Central(_), Element::Central(aw, ac), Element::Central(bw, bc)) => {
                Ok(Element::Central(
                    concat_reduce(aw, bw),
                    ac.checked_add(*bc).ok_or(GroupError::ArithmeticOverflow)?,
                ))
            }
            (
                Group::Semidirect { finite, .. },
                Element::Semi(av, af),
                Element::Semi(bv, bf),
            ) => {
                let sign = self.action_sign(af)?;
                let mut vector = Vec::with_capacity(av.len());
                for (a, b) in av.iter().zip(bv.iter()) {
                    let scaled = b.checked_mul(sign).ok_or(GroupError::ArithmeticOverflow)?;
                    vector.push(a.checked_add(scaled).ok_or(GroupError::ArithmeticOverflow)?);
                }
                Ok(Element::Semi(
                    vector,
                    Box::new(finite.multiply_unchecked(af, bf)?),
                ))
            }
            _ => unreachable!("payloads validated before arithmetic"),
        }
    }

    pub fn invert(&self, x: &Element) -> Result<Element, GroupError> {
        self.check_element(x)?;
        self.invert_unchecked(x)
    }

    fn invert_unchecked(&self, x: &Element) -> Result<Element, GroupError> {
        match (self, x) {
            (Group::Free(_), Element::Word(w)) => Ok(Element::Word(invert_word(w))),
            (Group::FreeAbelian(_), Element::Vector(v)) => Ok(Element::Vector(negate_vector(v)?)),
            (Group::Cyclic(m), Element::Residue(r)) => Ok(Element::Residue((m - r) % m)),
            (Group::Direct(ga, gb), Element::Pair(l, r)) => Ok(Element::pair(
                ga.invert_unchecked(l)?,
                gb.invert_unchecked(r)?,
            )),
            (Group::Central(_), Element::Central(w, c)) => Ok(Element::Central(
                invert_word(w),
                c.checked_neg().ok_or(GroupError::ArithmeticOverflow)?,
            )),
            (Group::Semidirect { finite, .. }, Element::Semi(v, f)) => {
                let f_inv = finite.invert_unchecked(f)?;
                let sign = self.action_sign(&f_inv)?;
                let mut vector = Vec::with_capacity(v.len());
                for a in v {
                    let scaled = a
                        .checked_mul(sign)
                        .and_then(|s| s.checked_neg())
                        .ok_or(GroupError::ArithmeticOverflow)?;
                    vector.push(scaled);
                }
                Ok(Element::Semi(vector, Box::new(f_inv)))
            }
            _ => unreachable!("payloads validated before arithmetic"),
        }
    }

    /// `x^k` by binary exponentiation; negative exponents invert first.
    pub fn power(&self, x: &Element, k: i64) -> Result<Element, GroupError> {
        self.check_element(x)?;
        let (mut base, mut exp) = if k < 0 {
            (
                self.invert_unchecked(x)?,
                k.checked_neg().ok_or(GroupError::ArithmeticOverflow)? as u64,
            )
        } else {
            (x.clone(), k as u64)
        };
        let mut acc = self.identity();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.multiply_unchecked(&acc, &base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = self.multiply_unchecked(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// `x⁻¹·y`, the relative position of `y` seen from `x`.
    pub fn quotient(&self, x: &Element, y: &Element) -> Result<Element, GroupError> {
        let inv = self.invert(x)?;
        self.multiply_unchecked(&inv, y)
    }

    /// `y⁻¹·x·y`.
    pub fn conjugate(&self, x: &Element, y: &Element) -> Result<Element, GroupError> {
        let y_inv = self.invert(y)?;
        let left = self.multiply(&y_inv, x)?;
        self.multiply_unchecked(&left, y)
    }

    /// Number of canonical generators used for normal-form decomposition.
    pub fn generator_count(&self) -> usize {
        match self {
            Group::Free(n) | Group::FreeAbelian(n) => *n as usize,
            Group::Cyclic(m) => usize::from(*m > 1),
            Group::Direct(a, b) => a.generator_count() + b.generator_count(),
            Group::Central(n) => *n as usize + 1,
            Group::Semidirect { rank, finite, .. } => {
                *rank as usize + finite.generator_count()
            }
        }
    }

    /// Canonical generators in the order used by [`Group::decompose`].
    pub fn standard_generators(&self) -> Vec<Element> {
        match self {
            Group::Free(n) => (1..=*n as i8).map(|k| Element::Word(vec![k])).collect(),
            Group::FreeAbelian(n) => (0..*n as usize)
                .map(|i| {
                    let mut v = vec![0; *n as usize];
                    v[i] = 1;
                    Element::Vector(v)
                })
                .collect(),
            Group::Cyclic(m) => {
                if *m > 1 {
                    vec![Element::Residue(1)]
                } else {
                    Vec::new()
                }
            }
            Group::Direct(a, b) => {
                let mut gens: Vec<Element> = a
                    .standard_generators()
                    .into_iter()
                    .map(|g| Element::pair(g, b.identity()))
                    .collect();
                gens.extend(
                    b.standard_generators()
                        .into_iter()
                        .map(|g| Element::pair(a.identity(), g)),
                );
                gens
            }
            Group::Central(n) => {
                let mut gens: Vec<Element> = (1..=*n as i8)
                    .map(|k| Element::Central(vec![k], 0))
                    .collect();
                gens.push(Element::Central(Vec::new(), 1));
                gens
            }
            Group::Semidirect { rank, finite, .. } => {
                let mut gens: Vec<Element> = (0..*rank as usize)
                    .map(|i| {
                        let mut v = vec![0; *rank as usize];
                        v[i] = 1;
                        Element::semi(&v, finite.identity())
                    })
                    .collect();
                gens.extend(
                    finite
                        .standard_generators()
                        .into_iter()
                        .map(|g| Element::semi(&vec![0; *rank as usize], g)),
                );
                gens
            }
        }
    }

    /// Writes `e` as an ordered product of canonical-generator powers.
    ///
    /// The decomposition follows the normal form left to right, so
    /// multiplying the powers back in order reproduces `e` exactly.
    pub fn decompose(&self, e: &Element) -> Result<Vec<(usize, i64)>, GroupError> {
        self.check_element(e)?;
        let mut out = Vec::new();
        self.decompose_into(e, 0, &mut out)?;
        Ok(out)
    }

    fn decompose_into(
        &self,
        e: &Element,
        offset: usize,
        out: &mut Vec<(usize, i64)>,
    ) -> Result<(), GroupError> {
        match (self, e) {
            (Group::Free(_), Element::Word(w)) => {
                decompose_word(w, offset, out);
                Ok(())
            }
            (Group::FreeAbelian(_), Element::Vector(v)) => {
                for (i, c) in v.iter().enumerate() {
                    if *c != 0 {
                        out.push((offset + i, *c));
                    }
                }
                Ok(())
            }
            (Group::Cyclic(_), Element::Residue(r)) => {
                if *r != 0 {
                    out.push((offset, i64::from(*r)));
                }
                Ok(())
            }
            (Group::Direct(a, b), Element::Pair(l, r)) => {
                a.decompose_into(l, offset, out)?;
                b.decompose_into(r, offset + a.generator_count(), out)
            }
            (Group::Central(n), Element::Central(w, c)) => {
                decompose_word(w, offset, out);
                if *c != 0 {
                    out.push((offset + *n as usize, *c));
                }
                Ok(())
            }
            (Group::Semidirect { rank, finite, .. }, Element::Semi(v, f)) => {
                for (i, c) in v.iter().enumerate() {
                    if *c != 0 {
                        out.push((offset + i, *c));
                    }
                }
                finite.decompose_into(f, offset + *rank as usize, out)
            }
            _ => unreachable!("payloads validated before decomposition"),
        }
    }

    /// All elements of a finite group in canonical order.
    pub fn elements(&self) -> Result<Vec<Element>, GroupError> {
        match self {
            Group::Cyclic(m) => Ok((0..*m).map(Element::Residue).collect()),
            Group::Direct(a, b) => {
                let left = a.elements()?;
                let right = b.elements()?;
                let mut out = Vec::with_capacity(left.len() * right.len());
                for l in &left {
                    for r in &right {
                        out.push(Element::pair(l.clone(), r.clone()));
                    }
                }
                Ok(out)
            }
            _ => Err(GroupError::NotFinite(self.to_string())),
        }
    }
}

fn check_word(w: &[i8], rank: u32) -> Result<(), GroupError> {
    for pair in w.windows(2) {
        if pair[0] == -pair[1] {
            return Err(GroupError::InvalidElement(
                "word is not freely reduced".into(),
            ));
        }
    }
    for letter in w {
        let idx = letter.unsigned_abs() as u32;
        if *letter == 0 || idx > rank {
            return Err(GroupError::InvalidElement(format!(
                "letter {letter} outside rank {rank}"
            )));
        }
    }
    Ok(())
}

fn concat_reduce(a: &[i8], b: &[i8]) -> Vec<i8> {
    let mut out = a.to_vec();
    for x in b {
        if out.last().is_some_and(|y| *y == -*x) {
            out.pop();
        } else {
            out.push(*x);
        }
    }
    out
}

fn invert_word(w: &[i8]) -> Vec<i8> {
    w.iter().rev().map(|x| -x).collect()
}

fn add_vectors(a: &[i64], b: &[i64]) -> Result<Vec<i64>, GroupError> {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| x.checked_add(*y).ok_or(GroupError::ArithmeticOverflow))
        .collect()
}

fn negate_vector(v: &[i64]) -> Result<Vec<i64>, GroupError> {
    v.iter()
        .map(|x| x.checked_neg().ok_or(GroupError::ArithmeticOverflow))
        .collect()
}

fn decompose_word(w: &[i8], offset: usize, out: &mut Vec<(usize, i64)>) {
    let mut i = 0;
    while i < w.len() {
        let letter = w[i];
        let mut run = 0i64;
        while i < w.len() && w[i] == letter {
            run += 1;
            i += 1;
        }
        let index = offset + letter.unsigned_abs() as usize - 1;
        out.push((index, if letter > 0 { run } else { -run }));
    }
}

impl std::fmt::Display for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Group::Free(n) => write!(f, "free({n})"),
            Group::FreeAbelian(n) => write!(f, "zn({n})"),
            Group::Cyclic(m) => write!(f, "cyclic({m})"),
            Group::Direct(a, b) => write!(f, "direct({a},{b})"),
            Group::Central(n) => write!(f, "central(free({n}),z)"),
            Group::Semidirect {
                rank,
                finite,
                action,
            } => {
                let action = match action {
                    Action::Trivial => "trivial",
                    Action::Inversion => "inversion",
                };
                write!(f, "semidirect(zn({rank}),{finite},action={action})")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_by_c4() -> Group {
        Group::Semidirect {
            rank: 1,
            finite: Box::new(Group::Cyclic(4)),
            action: Action::Inversion,
        }
    }

    #[test]
    fn free_multiplication_reduces() {
        let f2 = Group::Free(2);
        let x = Element::word(&[1, 2]);
        let y = Element::word(&[-2, -1, 1]);
        // (ab)(b⁻¹a⁻¹a) = a
        assert_eq!(f2.multiply(&x, &y).unwrap(), Element::word(&[1]));
    }

    #[test]
    fn free_inverse_reverses_and_negates() {
        let f2 = Group::Free(2);
        let x = Element::word(&[1, 2, -1]);
        let inv = f2.invert(&x).unwrap();
        assert_eq!(inv, Element::word(&[1, -2, -1]));
        assert!(f2.is_identity(&f2.multiply(&x, &inv).unwrap()));
    }

    #[test]
    fn cyclic_arithmetic_wraps() {
        let c4 = Group::Cyclic(4);
        assert_eq!(
            c4.multiply(&Element::residue(3), &Element::residue(2)).unwrap(),
            Element::residue(1)
        );
        assert_eq!(c4.invert(&Element::residue(1)).unwrap(), Element::residue(3));
        assert_eq!(c4.invert(&Element::residue(0)).unwrap(), Element::residue(0));
    }

    #[test]
    fn inversion_action_twists_multiplication() {
        // (0,1)·(1,0) = (0 + (-1)·1, 1) = (-1, 1)
        let g = z_by_c4();
        let torsion = Element::semi(&[0], Element::residue(1));
        let shift = Element::semi(&[1], Element::residue(0));
        assert_eq!(
            g.multiply(&torsion, &shift).unwrap(),
            Element::semi(&[-1], Element::residue(1))
        );
        // With trivial action the same product stays (1, 1).
        let h = Group::Semidirect {
            rank: 1,
            finite: Box::new(Group::Cyclic(4)),
            action: Action::Trivial,
        };
        assert_eq!(
            h.multiply(&torsion, &shift).unwrap(),
            Element::semi(&[1], Element::residue(1))
        );
    }

    #[test]
    fn inversion_action_inverse_keeps_vector_sign_when_odd() {
        // (1,1)⁻¹ = (1,3): check (1,1)·(1,3) = identity.
        let g = z_by_c4();
        let x = Element::semi(&[1], Element::residue(1));
        let inv = g.invert(&x).unwrap();
        assert_eq!(inv, Element::semi(&[1], Element::residue(3)));
        assert!(g.is_identity(&g.multiply(&x, &inv).unwrap()));
    }

    #[test]
    fn semidirect_group_law_is_associative_on_samples() {
        let g = z_by_c4();
        let samples = [
            Element::semi(&[0], Element::residue(1)),
            Element::semi(&[1], Element::residue(0)),
            Element::semi(&[-2], Element::residue(3)),
            Element::semi(&[5], Element::residue(2)),
        ];
        for a in &samples {
            for b in &samples {
                for c in &samples {
                    let left = g.multiply(&g.multiply(a, b).unwrap(), c).unwrap();
                    let right = g.multiply(a, &g.multiply(b, c).unwrap()).unwrap();
                    assert_eq!(left, right, "associativity failed on {a:?},{b:?},{c:?}");
                }
            }
        }
    }

    #[test]
    fn central_product_keeps_center_separate() {
        let g = Group::Central(2);
        let a = Element::central(&[1], 0);
        let c = Element::central(&[], 1);
        let ac = g.multiply(&a, &c).unwrap();
        let ca = g.multiply(&c, &a).unwrap();
        assert_eq!(ac, ca, "central generator must commute with the word part");
        assert_eq!(ac, Element::central(&[1], 1));
    }

    #[test]
    fn power_matches_repeated_multiplication() {
        let f2 = Group::Free(2);
        let x = Element::word(&[1, 2]);
        let mut acc = f2.identity();
        for _ in 0..5 {
            acc = f2.multiply(&acc, &x).unwrap();
        }
        assert_eq!(f2.power(&x, 5).unwrap(), acc);
        assert_eq!(f2.power(&x, -5).unwrap(), f2.invert(&acc).unwrap());
        assert_eq!(f2.power(&x, 0).unwrap(), f2.identity());
    }

    #[test]
    fn decompose_recomposes_in_order() {
        let g = Group::Semidirect {
            rank: 2,
            finite: Box::new(Group::Cyclic(2)),
            action: Action::Inversion,
        };
        assert!(g.validate().is_ok());
        let e = Element::semi(&[3, -2], Element::residue(1));
        let gens = g.standard_generators();
        let mut acc = g.identity();
        for (idx, exp) in g.decompose(&e).unwrap() {
            acc = g.multiply(&acc, &g.power(&gens[idx], exp).unwrap()).unwrap();
        }
        assert_eq!(acc, e);
    }

    #[test]
    fn finite_enumeration_is_sorted_and_complete() {
        let g = Group::Direct(Box::new(Group::Cyclic(2)), Box::new(Group::Cyclic(3)));
        let elems = g.elements().unwrap();
        assert_eq!(elems.len(), 6);
        assert!(elems.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(g.order(), Some(6));
    }

    #[test]
    fn invalid_payload_shapes_are_rejected() {
        let f2 = Group::Free(2);
        assert!(f2.check_element(&Element::residue(1)).is_err());
        assert!(f2.check_element(&Element::Word(vec![3])).is_err());
        assert!(f2.check_element(&Element::Word(vec![1, -1])).is_err());
        let c3 = Group::Cyclic(3);
        assert!(c3.check_element(&Element::residue(3)).is_err());
    }

    #[test]
    fn inversion_action_descriptor_requires_even_cyclic_part() {
        let bad = Group::Semidirect {
            rank: 1,
            finite: Box::new(Group::Cyclic(3)),
            action: Action::Inversion,
        };
        assert!(bad.validate().is_err());
        assert!(z_by_c4().validate().is_ok());
    }
}
