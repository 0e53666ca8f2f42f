//! Independent oracles, numerical certificates and the corpus harness.

pub mod generator;
pub mod harness;
pub mod numerics;
pub mod oracles;
pub mod properties;

pub use generator::{mesh_stream, random_mesh, Filter, GeneratedMesh, GeneratorConfig};
pub use harness::{
    classify, conjecture_search_wgas_wdc, crosscheck_thm_aas_sdc, crosscheck_thm_sgas_aas, Verdicts,
};
pub use numerics::{linear_independence_rank, partition_of_unity, RankReport};
pub use oracles::{atj_slice_oracle, overlap_bruteforce_oracle};
pub use properties::child_anchor_inheritance as property_child_anchor_inheritance;
