//! Exact invariants of plane curve germs: Puiseux pairs, intersection numbers,
//! orders and contacts along arcs, and a decision procedure for bi-Lipschitz
//! contact equivalence.

pub mod arc;
pub mod bivariate;
pub mod cyclo;
pub mod equivalence;
pub mod error;
pub mod germ;
pub mod invariants;
pub mod json;
pub mod radical;
pub mod newton;
pub mod oracle;
pub mod parser;
pub mod ring;
pub mod series;
pub mod squarefree;
pub mod unipoly;

pub use arc::{arc_size_order, Arc, BranchGerm};
pub use bivariate::BivariatePoly;
pub use cyclo::{cyclotomic_polynomial, CycloNumber};
pub use equivalence::{
    decide_equivalence, invariant_signature, verify_certificate, EquivalenceCertificate, InvariantSignature,
    Verdict, Witness,
};
pub use error::{Error, Result};
pub use germ::{germ_from_branch_data, BranchSpec, Factor, GermPresentation};
pub use invariants::{
    characteristic_data, coincidence_exponent, contact, intersection_number, order_along_halfbranch,
    order_along_parameterized, order_of_germ, CharData, ExtRational, OrderResult,
};
pub use newton::{expand, newton_polygon, ExpandOptions, ExpandedBranch, ExpansionReport, NewtonPolygon};
pub use oracle::{estimate_contact, estimate_order, SlopeEstimate};
pub use parser::{parse_polynomial, parse_univariate};
pub use ring::Rational;
pub use series::{PuiseuxSeries, Valuation};
