/// Budgets for the bounded searches and enumerations in the crate.
///
/// Every search that could in principle run unbounded takes its cap from
/// here, and exceeding a cap is always a reported error, never a silent
/// truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchLimits {
    /// Largest block-set size `|B_n|` that validation will enumerate
    /// exhaustively; beyond it, rules with a structural certificate fall back
    /// to that certificate and others fail with a search-bound error.
    pub validation_block_cap: u64,
    /// Largest block-set size for materializing a rule table.
    pub table_block_cap: u64,
    /// Longest connector word searched between two blocks.
    pub connector_max_len: usize,
    /// Longest candidate word in the seed/core block searches.
    pub word_search_max_len: usize,
    /// Largest repetition count tried when solving the length inequalities.
    pub repeat_max: usize,
    /// Alphabet-size cap for recoding passes in the iterated driver.
    pub alphabet_cap: usize,
    /// Horizon for the direct fixed-set transport check (enumerating small
    /// fixed sets and pushing them through the rewrite).
    pub clause_horizon: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            validation_block_cap: 2_000_000,
            table_block_cap: 600_000,
            connector_max_len: 32,
            word_search_max_len: 24,
            repeat_max: 64,
            alphabet_cap: 4096,
            clause_horizon: 30,
        }
    }
}
