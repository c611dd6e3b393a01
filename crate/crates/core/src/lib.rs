//! Exact computations for three-dimensional non-Lie Leibniz algebras:
//! structure tables, operator traces, automorphism groups, polynomial
//! invariants of several copies, and a trace-based classifier.

pub mod algebra;
pub mod aut;
pub mod catalog;
pub mod classify;
pub mod exact;
pub mod invariants;
pub mod par;
pub mod suite;
pub mod trace;
