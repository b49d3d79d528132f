/// Size caps and search budgets.
///
/// Every constructor that can blow up (power structures, product powers,
/// permutation search, homomorphism search) consults one of these values
/// instead of a hard-coded constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Largest base universe accepted by `power_structure` (the result has
    /// `2^n - 1` elements).
    pub power_universe: usize,
    /// Largest universe accepted by `automorphism_orbits` (factorial search).
    pub orbit_universe: usize,
    /// Largest universe a product or peek-power construction may produce.
    pub product_universe: usize,
    /// Node budget for backtracking homomorphism search; one unit per
    /// (element, candidate value) extension tried.
    pub hom_budget: u64,
    /// Largest variable count accepted by the set-constraint brute-force
    /// oracle (the search space is `2^(m * vars)`).
    pub set_oracle_vars: usize,
    /// Node budget for the set-constraint oracle's assignment search; one
    /// unit per candidate set tried.
    pub set_oracle_nodes: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            power_universe: 12,
            orbit_universe: 8,
            product_universe: 1_000_000,
            hom_budget: 100_000_000,
            set_oracle_vars: 3,
            set_oracle_nodes: 100_000_000,
        }
    }
}

impl Limits {
    pub fn with_power_universe(mut self, cap: usize) -> Self {
        self.power_universe = cap;
        self
    }

    pub fn with_hom_budget(mut self, budget: u64) -> Self {
        self.hom_budget = budget;
        self
    }
}
