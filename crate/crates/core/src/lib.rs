pub mod error;
pub mod quadrature;
pub mod series;
pub mod membership;
pub mod operators;
pub mod sequences;
pub mod config;
pub mod verify;
pub mod plotdata;
