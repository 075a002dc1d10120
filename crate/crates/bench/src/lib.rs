//! Shared fixtures for the criterion benches.

use quantpool::{derive, generate_ar1, Ar1Params, ReplicationSet};

/// An AR(1) replication set with deterministic contents.
pub fn ar1_set(phi: f64, r: usize, l: usize, seed: u64) -> ReplicationSet {
    let params = Ar1Params::standard(phi).expect("valid phi");
    let paths = (0..r)
        .map(|j| generate_ar1(&params, l, 0, derive(seed, 0, j as u64)).expect("generation"))
        .collect();
    ReplicationSet::new(paths).expect("nonempty")
}
