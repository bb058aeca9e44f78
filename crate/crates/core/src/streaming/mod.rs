//! Semi-streaming execution: elements are only seen during metered passes.

mod algorithm;
mod session;

pub use algorithm::{
    classify_arrival, streaming_greedy_and_d2, streaming_refine, streaming_two_thirds, streaming_two_thirds_with, update_aba, ArrivalType, Snapshot,
    StreamReport, StreamState, UpdateStats, ACCESS_RULE,
};
pub use session::{Guarded, StreamSession};
