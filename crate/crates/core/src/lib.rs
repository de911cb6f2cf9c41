//! Property (NL) for Coxeter groups: no element acts loxodromically in any
//! action on a hyperbolic space. `classify` decides it from the defining
//! graph where the known results apply; the other modules are the concrete
//! models the decisions rest on (the infinite dihedral group, the geometric
//! representation and small Cayley graphs).

pub mod classify;
pub mod cli;
pub mod coxgraph;
pub mod dinfty;
pub mod georep;
pub mod metricspace;
pub mod selftest;
