pub mod associator;
pub mod evolve;
pub mod fock_check;
pub mod reconstruct;
pub mod spectrum;
pub mod validate;
