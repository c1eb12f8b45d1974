//! Benchmark fixtures.

use cobarlab_core::{double_suspension, DgCoalgebra, Field, GradedSpace};

/// `k ⊕ s²W` for `W` given as `(name, degree)` pairs.
pub fn suspension<K: Field>(w: &[(&str, i32)]) -> DgCoalgebra<K> {
    let space = GradedSpace::from_generators(w.iter().map(|(n, d)| (*n, *d))).expect("distinct names");
    double_suspension(&space).expect("positive degrees")
}
