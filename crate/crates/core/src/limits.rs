/// Resource ceilings shared by the exact engines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of cells in an orbit linearization.
    pub cell_budget: usize,
    /// Maximum number of search-tree nodes visited while enumerating avoiders.
    pub node_budget: u64,
    /// Largest `n` for which the forbidden set (a slice of `S_n`) is materialized.
    pub max_forbidden_n: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { cell_budget: 1_000_000, node_budget: 500_000_000, max_forbidden_n: 10 }
    }
}
