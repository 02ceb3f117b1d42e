//! Densest episodes in temporal networks.
//!
//! Given a temporal graph, find `k` disjoint time intervals covering the
//! timeline, each paired with a dense subgraph of the edges active in it, so
//! that the summed densities `|E(H)|/|V(H)|` are maximal.
//!
//! ```
//! use tempograph::prelude::*;
//!
//! let g = TemporalGraph::parse_edge_list("1 2 1\n2 3 1\n1 3 2\n4 5 7\n5 6 7\n4 6 8\n4 7 8\n5 7 8\n6 7 8\n").unwrap();
//! let seg = approx_dp_segment(&g, 2, 0.1, DensestMode::Incremental(0.1)).unwrap();
//! let seg = post_process(&g, &seg);
//! assert_eq!(seg.boundaries(), vec![2]);
//! assert_eq!(seg.total_profit, 2.5);
//! ```

pub mod cli;
pub mod coverage;
pub mod error;
pub mod eval;
pub mod incremental;
pub mod segmentation;
pub mod static_densest;
pub mod synth;
pub mod temporal_graph;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::coverage::{
        cover_value, gain_interval, kgcvr_segment, marginal_gain_chi, CountMinSketch, CoverConfig,
        CoverFn, CoverReport, CoverState,
    };
    pub use crate::error::{Error, Result};
    pub use crate::eval::{evaluate, found_episodes, EvalReport, FoundEpisode};
    pub use crate::incremental::{
        find, find_densest, update_stream, IncrementalDensest, MonotoneBest,
    };
    pub use crate::segmentation::{
        approx_dp_segment, brute_force_segment, exact_dp_segment, post_process, DensestMode,
        Episode, Mode, Segmentation,
    };
    pub use crate::static_densest::{
        brute_force_densest, charikar_peel, exact_densest, greedy_k_static,
        static_greedy_generalized, DensestResult, InnerSolver, NodeWeights,
    };
    pub use crate::synth::{generate, GroundTruth, SyntheticSpec};
    pub use crate::temporal_graph::{Interval, NodeId, StaticGraph, TemporalGraph};
}
