//! Scheduling and demand-response analysis for a hydrogen-based direct
//! reduction plant with a flexible shaft furnace.

pub mod drmetrics;
pub mod plant;
pub mod scenario;
pub mod scheduler;
pub mod sf_flex;
pub mod solver;
