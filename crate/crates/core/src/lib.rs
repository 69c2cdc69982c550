pub mod baselines;
pub mod bench;
pub mod decomposition;
pub mod feasibility;
pub mod gauge;
pub mod geometry;
pub mod instances;
pub mod render;
pub mod solver;
pub mod system;
