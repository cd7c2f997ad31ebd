//! Ground truth independent of the recurrences: exhaustive enumerators,
//! Dyck-pair bijections and the comparison against the tables.

mod crosscheck;
mod dyck;
mod enumerate;

pub use crosscheck::{
    check_bijections, crosscheck, BijectionReport, BijectionRow, CellMismatch, CrosscheckReport, SeriesRow, Status,
};
pub use dyck::{
    bij_s_lift, bij_s_project, catalan, dyck_paths, enumerate_dyck_pairs, enumerate_one_aligned, noncrossing_formula,
    phi, phi_inverse, DyckPair, DyckStep, OneAlignedWalk,
};
pub use enumerate::{
    enumerate_p_walks, enumerate_p_walks_capped, enumerate_s_walks, enumerate_s_walks_capped, p_census, s_census,
    Census, PEnumeration, SEnumeration, DEFAULT_CAP,
};
