//! Simulation of multi-tape two-way finite automata and their
//! quantum-classical extension.

pub mod angle;
pub mod bench;
pub mod cli;
pub mod engine;
pub mod error;
pub mod format;
pub mod library;
pub mod machine;
pub mod oracle;
pub mod qcfa;
pub mod quantum;
pub mod report;
pub mod run;
pub mod symbol;
pub mod verify;
