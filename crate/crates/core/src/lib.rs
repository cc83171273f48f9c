//! Exact analysis of which regular languages measure-many quantum finite
//! automata can recognize, plus constructions and combinators for the ones
//! that can.
//!
//! The DFA side ([`automata`], [`fragments`]) decides membership in the
//! recognizable class by searching the transition monoid for forbidden
//! patterns. The quantum side ([`qfa`], [`spectral`], [`synthesis`],
//! [`combinators`]) simulates machines, builds them from DFAs and combines
//! them.

pub mod automata;
pub mod linalg;
pub mod qfa;
pub mod combinators;
pub mod fixtures;
pub mod fragments;
pub mod spectral;
pub mod synthesis;
pub mod io;
