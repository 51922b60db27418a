//! Exact discrete causal models: parameters, the full split conditional,
//! probing-scheme shadows, binary reconstruction, and distinguishing
//! witnesses.

mod dataset;
mod params;
mod simulate;
mod table;
mod witness;

pub use dataset::{
    generate_all_patterns, reconstruct_binary, reconstruct_binary_slice, shadow_all_patterns, Pattern, ProbeDataset,
};
pub use params::{uniform_cards, Cards, Mechanism, Params};
pub use simulate::{do_pattern_shadow, full_conditional, observational_shadow, simulate};
pub use table::{assignments, decode, encode, FullConditional, Table};
pub use witness::{
    certify_infeasible, chain_construction, check_feasible, copy_construction, dominance_witness, CommonAncestorFact,
    Construction, DconnectionFact, DistinguishingWitness, DominanceCertificate, Verdict, Witness,
};
