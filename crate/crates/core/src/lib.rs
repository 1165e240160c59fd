pub mod error;
pub mod exact;
pub mod geometry;
pub mod linalg;
pub mod strings;
pub mod vee_check;
pub mod prepotential;
pub mod catalog;
pub mod identity_field;
pub mod report;
pub mod restriction;
pub mod solver;
pub mod cli;
