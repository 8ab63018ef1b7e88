use std::time::Instant;

use super::{cdh, Layout, PenaltyState, SearchContext, SearchRng};

/// Stop conditions shared by a whole run. Checked between CDH calls.
#[derive(Clone, Debug, Default)]
pub struct Budget {
    pub deadline: Option<Instant>,
    pub max_cdh_calls: Option<u64>,
    pub cdh_calls: u64,
}

impl Budget {
    pub fn unlimited() -> Budget {
        Budget::default()
    }

    pub fn exhausted(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d) || self.max_cdh_calls.is_some_and(|m| self.cdh_calls >= m)
    }
}

#[derive(Clone, Debug)]
pub struct GlsOutcome {
    /// Best layout by `F`.
    pub best: Layout,
    pub best_total: u64,
}

impl GlsOutcome {
    pub fn is_feasible(&self) -> bool {
        self.best_total == 0
    }
}

/// Guided local search: CDH from the weighted-best solution, weight updates
/// after each local optimum, stopping after `k_max` calls without improving
/// `F` or once the budget runs out.
pub fn gls(ctx: &SearchContext, layout: Layout, k_max: u32, rng: &mut SearchRng, budget: &mut Budget) -> GlsOutcome {
    let problem = ctx.problem;
    let mut current = layout;
    let mut state = PenaltyState::new(problem, &current);
    let mut best = current.clone();
    let mut best_total = state.total();
    if best_total == 0 {
        return GlsOutcome { best, best_total };
    }
    let mut k = 0;
    while k < k_max {
        if budget.exhausted() {
            break;
        }
        let out = cdh(ctx, &mut current, &mut state, rng);
        budget.cdh_calls += 1;
        if out.best_total < best_total {
            best = out.best;
            best_total = out.best_total;
            k = 0;
            if best_total == 0 {
                break;
            }
        }
        state.update_weights();
        k += 1;
    }
    GlsOutcome { best, best_total }
}
