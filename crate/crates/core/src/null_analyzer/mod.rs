//! Exact decision procedures for the null condition, the strong null
//! condition, and the (b-i)/(b-ii) partition conditions.

pub mod analysis;
pub mod divergence;
pub mod null_form;
pub mod partition;
pub mod symbol;

pub use analysis::{analyze_system, AnalysisReport};
pub use divergence::{divergence_decompose, divergence_decompose_avoiding, expand_divergence, DivergenceCertificate};
pub use null_form::{
    check_null_condition, check_null_equation, check_strong_null, decompose_null_forms, q0, qab, Factor,
    NullCombination, NullDecomposition, NullForm, StrongNullResult,
};
pub use partition::{
    check_b_i, check_b_ii_2, find_partition, EnumerationBound, PartitionCertificate, PartitionFailure, PartitionOutcome,
};
pub use symbol::{eval_on_null_data, eval_on_null_data_exact, find_null_witness, SymbolWitness};
