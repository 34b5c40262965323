//! Null-structure analysis and numerical experiments for coupled systems
//! `(□ + m_i²) u_i = F_i(u, ∂u, ∂_x∂u)` of wave and Klein-Gordon equations.

pub mod rational;
pub mod system_model;
pub mod linalg;
pub mod null_analyzer;
mod par;
pub mod examples;
pub mod solver;
pub mod diagnostics;
pub mod experiments;

/// Size the global worker pool; only the first call has an effect.
#[cfg(feature = "parallel")]
pub fn set_thread_count(n: usize) -> Result<(), String> {
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}
