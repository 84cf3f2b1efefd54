//! Process-wide tables, built once at their largest supported size.

use std::sync::OnceLock;

use allgenus_core::gfengine::{BIVARIATE_MAX_N, TRIVARIATE_MAX_N};
use allgenus_core::{dist_series, DistTable, Statistic};

/// Largest `n` available for `stat`.
pub fn max_n(stat: Statistic) -> usize {
    if stat.is_joint() {
        TRIVARIATE_MAX_N
    } else {
        BIVARIATE_MAX_N
    }
}

/// Full-size table for `stat`, computed on first use.
pub fn shared(stat: Statistic) -> &'static DistTable {
    static CELLS: [OnceLock<DistTable>; 6] = [const { OnceLock::new() }; 6];
    let i = Statistic::ALL
        .iter()
        .position(|&s| s == stat)
        .expect("listed");
    CELLS[i].get_or_init(|| dist_series(stat, max_n(stat)))
}
