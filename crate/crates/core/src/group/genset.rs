//! Generating sets with deterministic ordering.

use super::{Element, Group, GroupError};

/// A finite generating set for a fixed group.
///
/// Elements are stored sorted and deduplicated, never contain the
/// identity, and — when the `symmetric` flag is set — are closed under
/// inversion. Word metrics built from a set use its symmetric closure
/// unless a directed metric is requested explicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingSet {
    group: Group,
    elements: Vec<Element>,
    symmetric: bool,
    label: String,
}

impl GeneratingSet {
    /// Builds a set after validating every element against the group.
    ///
    /// The identity is rejected rather than silently dropped so that a
    /// caller mistake surfaces early.
    pub fn new(
        group: Group,
        elements: impl IntoIterator<Item = Element>,
        label: impl Into<String>,
    ) -> Result<GeneratingSet, GroupError> {
        group.validate()?;
        let mut elems: Vec<Element> = Vec::new();
        for e in elements {
            group.check_element(&e)?;
            if group.is_identity(&e) {
                return Err(GroupError::InvalidElement(
                    "generating sets must not contain the identity".into(),
                ));
            }
            elems.push(e);
        }
        elems.sort();
        elems.dedup();
        let symmetric = elems
            .iter()
            .all(|e| elems.binary_search(&group.invert(e).expect("validated")).is_ok());
        Ok(GeneratingSet {
            group,
            elements: elems,
            symmetric,
            label: label.into(),
        })
    }

    /// The canonical generators of the group as a set.
    pub fn standard(group: Group, label: impl Into<String>) -> Result<GeneratingSet, GroupError> {
        let gens = group.standard_generators();
        GeneratingSet::new(group, gens, label)
    }

    /// Same elements together with every inverse; the result is symmetric.
    pub fn symmetric_closure(&self) -> GeneratingSet {
        if self.symmetric {
            return self.clone();
        }
        let mut elems = self.elements.clone();
        for e in &self.elements {
            elems.push(self.group.invert(e).expect("validated"));
        }
        GeneratingSet::new(self.group.clone(), elems, self.label.clone())
            .expect("closure of a valid set stays valid")
    }

    /// Letters used for one metric step: the elements themselves in the
    /// directed case, their symmetric closure otherwise.
    pub fn step_letters(&self, directed: bool) -> Vec<Element> {
        if directed || self.symmetric {
            self.elements.clone()
        } else {
            self.symmetric_closure().elements
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.elements.binary_search(e).is_ok()
    }

    /// Union of two sets over the same group.
    pub fn union(&self, other: &GeneratingSet) -> Result<GeneratingSet, GroupError> {
        if self.group != other.group {
            return Err(GroupError::FamilyMismatch {
                group: self.group.to_string(),
                detail: "cannot union generating sets of different groups".into(),
            });
        }
        let elems = self
            .elements
            .iter()
            .chain(other.elements.iter())
            .cloned()
            .collect::<Vec<_>>();
        GeneratingSet::new(
            self.group.clone(),
            elems,
            format!("{}+{}", self.label, other.label),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_rejected() {
        let g = Group::Cyclic(4);
        let err = GeneratingSet::new(g, [Element::residue(0)], "s");
        assert!(err.is_err());
    }

    #[test]
    fn elements_are_sorted_and_deduplicated() {
        let g = Group::Free(2);
        let s = GeneratingSet::new(
            g,
            [
                Element::word(&[2]),
                Element::word(&[1]),
                Element::word(&[2]),
            ],
            "s",
        )
        .unwrap();
        assert_eq!(s.elements(), &[Element::word(&[1]), Element::word(&[2])]);
    }

    #[test]
    fn symmetric_flag_tracks_closure() {
        let g = Group::FreeAbelian(1);
        let asym = GeneratingSet::new(g.clone(), [Element::vector(&[1])], "s").unwrap();
        assert!(!asym.is_symmetric());
        let sym = asym.symmetric_closure();
        assert!(sym.is_symmetric());
        assert_eq!(sym.len(), 2);
        // An explicitly-given inverse pair is detected as symmetric.
        let pair = GeneratingSet::new(
            g,
            [Element::vector(&[3]), Element::vector(&[-3])],
            "p",
        )
        .unwrap();
        assert!(pair.is_symmetric());
    }

    #[test]
    fn step_letters_respect_directedness() {
        let g = Group::Cyclic(3);
        let s = GeneratingSet::new(g, [Element::residue(1)], "s").unwrap();
        assert_eq!(s.step_letters(true), vec![Element::residue(1)]);
        assert_eq!(
            s.step_letters(false),
            vec![Element::residue(1), Element::residue(2)]
        );
    }
}
