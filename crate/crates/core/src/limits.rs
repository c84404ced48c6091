/// Size gates for the exhaustive constructions. Every constructor that can
/// blow up takes these explicitly (or uses `Limits::default()`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest group produced by generator closure.
    pub max_group_order: usize,
    /// Largest group whose subgroup lattice is computed.
    pub max_lattice_order: usize,
    /// Largest lattice (number of subgroups) accepted by transfer-system enumeration.
    pub max_enumerate_subgroups: usize,
    /// Largest number of sections materialized by a dependent product.
    pub max_sections: usize,
    /// Largest coinduced set materialized point by point.
    pub max_coinduce_points: usize,
    /// Largest action table (points times acting-group order) materialized.
    pub max_action_entries: usize,
    /// Largest order of the ambient group in a full equivalence sweep.
    pub max_sweep_order: usize,
    /// Largest order of the ambient group in single-pair coinduction checks.
    pub max_oracle_order: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_group_order: 10_000,
            max_lattice_order: 360,
            max_enumerate_subgroups: 16,
            max_sections: 1_000_000,
            max_coinduce_points: 10_000_000,
            max_action_entries: 50_000_000,
            max_sweep_order: 24,
            max_oracle_order: 60,
        }
    }
}
