pub mod cli;
pub mod endotactic;
pub mod equivalence;
pub mod exact;
pub mod io;
pub mod network;
pub mod realization;
