//! Finite-index free subgroup embeddings via Schreier rewriting.
//!
//! The concrete instance shipped here embeds the rank-4 free group onto
//! the index-3 subgroup of F2 consisting of words whose `a`-exponent sum
//! is divisible by three (the kernel of `a ↦ 1, b ↦ 0` into Z/3). With
//! the prefix-closed transversal `{e, a, a²}` the Schreier generators
//! come out as `a³`, `b`, `a b a⁻¹`, `a² b a⁻²`.

use super::element::reduce_word;
use super::{Element, Group, GroupError};

/// An injective homomorphism of a free group onto a finite-index
/// subgroup of another free group, with an explicit coset retraction.
#[derive(Clone, Debug)]
pub struct FreeEmbedding {
    domain: Group,
    codomain: Group,
    generator_images: Vec<Element>,
    index: u32,
}

/// The rank-4 free group embedded onto the index-3 subgroup of F2
/// described in the module docs.
pub fn schreier_f4_in_f2() -> FreeEmbedding {
    FreeEmbedding {
        domain: Group::Free(4),
        codomain: Group::Free(2),
        generator_images: vec![
            Element::word(&[1, 1, 1]),     // a³
            Element::word(&[2]),           // b
            Element::word(&[1, 2, -1]),    // a b a⁻¹
            Element::word(&[1, 1, 2, -1, -1]), // a² b a⁻²
        ],
        index: 3,
    }
}

impl FreeEmbedding {
    pub fn domain(&self) -> &Group {
        &self.domain
    }

    pub fn codomain(&self) -> &Group {
        &self.codomain
    }

    pub fn generator_images(&self) -> &[Element] {
        &self.generator_images
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    /// Applies the embedding: substitutes generator images and reduces.
    pub fn apply(&self, w: &Element) -> Result<Element, GroupError> {
        self.domain.check_element(w)?;
        let Element::Word(letters) = w else {
            unreachable!("free-group elements are words");
        };
        let mut out: Vec<i8> = Vec::new();
        for letter in letters {
            let image = &self.generator_images[letter.unsigned_abs() as usize - 1];
            let Element::Word(img) = image else {
                unreachable!("images live in a free group")
            };
            if *letter > 0 {
                for x in img {
                    push_reduced(&mut out, *x);
                }
            } else {
                for x in img.iter().rev() {
                    push_reduced(&mut out, -x);
                }
            }
        }
        Ok(Element::Word(out))
    }

    /// `a`-exponent sum of a codomain word, reduced into `0..index`.
    pub fn coset_class(&self, y: &Element) -> Result<u32, GroupError> {
        self.codomain.check_element(y)?;
        let Element::Word(letters) = y else {
            unreachable!("free-group elements are words");
        };
        let sum: i64 = letters
            .iter()
            .map(|l| match l {
                1 => 1,
                -1 => -1,
                _ => 0,
            })
            .sum();
        Ok(sum.rem_euclid(i64::from(self.index)) as u32)
    }

    /// Rewrites a codomain word that lies in the image subgroup as a
    /// domain word. Fails when the word is outside the subgroup.
    pub fn rewrite(&self, y: &Element) -> Result<Element, GroupError> {
        self.codomain.check_element(y)?;
        let Element::Word(letters) = y else {
            unreachable!("free-group elements are words");
        };
        let mut state: u32 = 0; // current coset: a-exponent of the prefix mod 3
        let mut out: Vec<i8> = Vec::new();
        for letter in letters {
            match letter {
                1 => {
                    if state == 2 {
                        push_reduced(&mut out, 1);
                        state = 0;
                    } else {
                        state += 1;
                    }
                }
                -1 => {
                    if state == 0 {
                        push_reduced(&mut out, -1);
                        state = 2;
                    } else {
                        state -= 1;
                    }
                }
                2 => push_reduced(&mut out, 2 + state as i8),
                -2 => push_reduced(&mut out, -(2 + state as i8)),
                _ => unreachable!("rank-2 words only contain letters ±1, ±2"),
            }
        }
        if state != 0 {
            return Err(GroupError::InvalidElement(format!(
                "word {:?} lies outside the index-{} subgroup",
                y, self.index
            )));
        }
        Ok(Element::Word(out))
    }

    /// Retraction onto the subgroup followed by rewriting: sends `y` to
    /// the domain word of `y·a^{-k}` where `k` is the coset class of `y`.
    pub fn retract(&self, y: &Element) -> Result<Element, GroupError> {
        let class = self.coset_class(y)?;
        let Element::Word(letters) = y else {
            unreachable!("free-group elements are words");
        };
        let mut adjusted = letters.clone();
        for _ in 0..class {
            if adjusted.last().is_some_and(|l| *l == 1) {
                adjusted.pop();
            } else {
                adjusted.push(-1);
            }
        }
        self.rewrite(&Element::Word(reduce_word(adjusted)))
    }

    /// The transversal word `a^k` representing coset `k`.
    pub fn transversal_representative(&self, class: u32) -> Element {
        Element::Word(vec![1; class as usize])
    }
}

fn push_reduced(out: &mut Vec<i8>, letter: i8) {
    if out.last().is_some_and(|y| *y == -letter) {
        out.pop();
    } else {
        out.push(letter);
    }
}
