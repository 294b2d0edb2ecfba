//! Shared fixtures for the benchmark targets.

use roughiso_core::group::{schreier_f4_in_f2, GeneratingSet, Group};

/// Element budget generous enough that no benchmark truncates.
pub const CAP: u64 = 50_000_000;

/// The standard marking of a group, unwrapped for fixture use.
pub fn std_marking(group: &Group) -> GeneratingSet {
    GeneratingSet::standard(group.clone(), "std").expect("standard marking")
}

/// The rank-2 free group marked by its basis together with the images
/// of the rank-4 basis under the index-3 embedding. This is the marking
/// that makes the embedding a rough isometry, and it exercises the
/// generic (non-packed) enumeration path.
pub fn enlarged_rank2_marking() -> GeneratingSet {
    let emb = schreier_f4_in_f2();
    let f2 = emb.codomain().clone();
    let mut elements = std_marking(&f2).elements().to_vec();
    for g in emb.domain().standard_generators() {
        elements.push(emb.apply(&g).expect("image"));
    }
    GeneratingSet::new(f2, elements, "enlarged").expect("marking")
}
