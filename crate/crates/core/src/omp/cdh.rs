use rand::Rng;

use super::{neighbor_search, Layout, PenaltyState, SearchContext, SearchRng};

const CACHE_CHECK_INTERVAL: u64 = 1000;

#[derive(Clone, Debug)]
pub struct CdhOutcome {
    /// Best layout by unweighted penalty `F` seen during the call.
    pub best: Layout,
    pub best_total: u64,
    /// Accepted moves.
    pub moves: u64,
}

/// Active-set bookkeeping with O(1) insert, remove and uniform choice.
struct ActiveSet {
    items: Vec<usize>,
    slot: Vec<Option<usize>>,
}

impl ActiveSet {
    fn full(n: usize) -> Self {
        ActiveSet {
            items: (0..n).collect(),
            slot: (0..n).map(Some).collect(),
        }
    }

    fn insert(&mut self, k: usize) {
        if self.slot[k].is_none() {
            self.slot[k] = Some(self.items.len());
            self.items.push(k);
        }
    }

    fn remove(&mut self, k: usize) {
        if let Some(i) = self.slot[k].take() {
            self.items.swap_remove(i);
            if let Some(&moved) = self.items.get(i) {
                self.slot[moved] = Some(i);
            }
        }
    }
}

/// Coordinate descent with fast local search on `layout`, which is left at
/// the locally optimal solution for the weighted penalty. `state` must match
/// `layout` on entry and is kept in sync.
pub fn cdh(ctx: &SearchContext, layout: &mut Layout, state: &mut PenaltyState, rng: &mut SearchRng) -> CdhOutcome {
    let problem = ctx.problem;
    let mut best = layout.clone();
    let mut best_total = state.total();
    let mut moves = 0;
    if best_total == 0 {
        return CdhOutcome {
            best,
            best_total,
            moves,
        };
    }

    let mut active = ActiveSet::full(layout.len());
    while !active.items.is_empty() {
        let k = active.items[rng.gen_range(0..active.items.len())];
        let mut untried: Vec<usize> = (0..problem.piece(k).variants.len()).collect();
        while !untried.is_empty() {
            let o = untried.swap_remove(rng.gen_range(0..untried.len()));
            let (old_w, old_u) = state.piece_total(k);
            if old_u == 0 {
                // nothing to improve for a piece without overlap
                continue;
            }
            let Ok((v, new_w, new_u)) = neighbor_search(ctx, layout, state, k, o) else {
                continue;
            };
            let total = state.total() - old_u + new_u;
            let accept = new_w < old_w;
            if accept {
                for &j in state.overlaps(k) {
                    active.insert(j);
                }
                layout.positions[k] = v;
                layout.orientations[k] = o;
                state.update_piece(problem, layout, k);
                for &j in state.overlaps(k) {
                    active.insert(j);
                }
                moves += 1;
                // full re-evaluation: every move in debug builds, sampled in release
                if cfg!(debug_assertions) || moves % CACHE_CHECK_INTERVAL == 0 {
                    assert!(state.matches(problem, layout), "penalty cache out of sync");
                    assert_eq!(state.total(), total);
                }
            }
            if total < best_total {
                best_total = total;
                best.clone_from(layout);
                if !accept {
                    best.positions[k] = v;
                    best.orientations[k] = o;
                }
                if best_total == 0 {
                    return CdhOutcome {
                        best,
                        best_total,
                        moves,
                    };
                }
            }
        }
        active.remove(k);
    }
    CdhOutcome {
        best,
        best_total,
        moves,
    }
}
