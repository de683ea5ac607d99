//! Suslov nonholonomic rigid body: closed-form dynamics, hypergeometric
//! reduction, explicit meromorphic solutions, polynomial first integrals,
//! scattering angle and the meromorphicity / Liouvillian classification.

pub mod algebra;
pub mod model;
pub mod closed_form;
pub mod integrator;
pub mod hyper;
pub mod jet;
pub mod meromorphic;
pub mod integrals;
pub mod galois;
pub mod scattering;
