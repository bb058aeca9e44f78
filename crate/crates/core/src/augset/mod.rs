//! Partial augmenting sets: layer state, refine steps, extraction.

mod extract;
mod refine;
mod state;

pub use extract::{apply_augmenting, extract_augmenting_set, validate_augmenting_set, validate_partial_augmenting_set, Clause, Verdict};
pub use refine::{
    find_maximal_extension, find_maximal_extension_checked, find_maximal_extension_ordered, refine, refine_ab, refine_ab_with,
    refine_ba, refine_ba_with, refine_call_cap, refine_until_gap, refine_until_gap_with, refine_with, LoopPolicy, RefineOptions,
    RefineOutcome,
};
pub use state::{init_layer_state, AugmentingSet, ElementType, Layer, LayerState, PartialAugmentingSet, QueryClock, Transition};
