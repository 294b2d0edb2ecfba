//! Element payloads shared by every group family.
//!
//! An [`Element`] is a plain value; all arithmetic lives on
//! [`crate::group::Group`], which knows the family (rank, modulus, action)
//! the payload belongs to. Orderings are total and deterministic so that
//! exported artifacts are byte-stable: words sort shortlex, tuples sort
//! lexicographically.

use std::cmp::Ordering;

/// A group element in canonical normal form.
///
/// Invariants (enforced by [`crate::group::Group::check_element`]):
/// * `Word` / `Central` words are freely reduced and use letters `±1..=±rank`.
/// * `Vector` length equals the free-abelian rank.
/// * `Residue` lies in `0..modulus`.
/// * `Semi` holds a lattice vector plus a finite-part element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    /// Freely reduced word; letter `k > 0` is generator `k`, `-k` its inverse.
    Word(Vec<i8>),
    /// Free-abelian lattice point.
    Vector(Vec<i64>),
    /// Residue modulo the cyclic order.
    Residue(u32),
    /// Direct-product pair.
    Pair(Box<Element>, Box<Element>),
    /// Word together with a central integer coordinate.
    Central(Vec<i8>, i64),
    /// Lattice vector together with a finite part acting on it.
    Semi(Vec<i64>, Box<Element>),
}

impl Element {
    /// Shorthand for a reduced word element; reduces its input.
    pub fn word(letters: &[i8]) -> Element {
        Element::Word(reduce_word(letters.iter().copied()))
    }

    pub fn vector(coords: &[i64]) -> Element {
        Element::Vector(coords.to_vec())
    }

    pub fn residue(r: u32) -> Element {
        Element::Residue(r)
    }

    pub fn pair(left: Element, right: Element) -> Element {
        Element::Pair(Box::new(left), Box::new(right))
    }

    pub fn central(letters: &[i8], center: i64) -> Element {
        Element::Central(reduce_word(letters.iter().copied()), center)
    }

    pub fn semi(vector: &[i64], finite: Element) -> Element {
        Element::Semi(vector.to_vec(), Box::new(finite))
    }

    fn family_rank(&self) -> u8 {
        match self {
            Element::Word(_) => 0,
            Element::Vector(_) => 1,
            Element::Residue(_) => 2,
            Element::Pair(_, _) => 3,
            Element::Central(_, _) => 4,
            Element::Semi(_, _) => 5,
        }
    }
}

/// Freely reduce a letter sequence by cancelling adjacent inverse pairs.
pub fn reduce_word(letters: impl IntoIterator<Item = i8>) -> Vec<i8> {
    let mut out: Vec<i8> = Vec::new();
    for x in letters {
        if out.last().is_some_and(|y| *y == -x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

/// Letter order used by shortlex: generator 1 before its inverse, then
/// generator 2, and so on.
fn letter_key(letter: i8) -> (i8, u8) {
    (letter.abs(), u8::from(letter < 0))
}

fn compare_words(a: &[i8], b: &[i8]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        for (x, y) in a.iter().zip(b.iter()) {
            let ord = letter_key(*x).cmp(&letter_key(*y));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        Ordering::Equal
    })
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        use Element::*;
        match (self, other) {
            (Word(a), Word(b)) => compare_words(a, b),
            (Vector(a), Vector(b)) => a.cmp(b),
            (Residue(a), Residue(b)) => a.cmp(b),
            (Pair(al, ar), Pair(bl, br)) => al.cmp(bl).then_with(|| ar.cmp(br)),
            (Central(aw, ac), Central(bw, bc)) => {
                compare_words(aw, bw).then_with(|| ac.cmp(bc))
            }
            (Semi(av, af), Semi(bv, bf)) => av.cmp(bv).then_with(|| af.cmp(bf)),
            _ => self.family_rank().cmp(&other.family_rank()),
        }
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
