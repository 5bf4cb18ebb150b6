//! Membership predicates and constructors for the spaces of boundary data.

pub mod config;
pub mod interval;

pub use config::{
    check_c, check_c_aff, check_c_tau, construct_c_tau_point, deck_shift, sheet_index, CTauReport, DiscBoundaryConfig,
    PuncturedConfig,
};
pub use interval::{
    check_p_interval, check_paff_interval, check_ptau_circle, construct_interval_datum, construct_lifted_interval_datum,
    construct_ptau_loop, construct_ptau_loop_within, IntervalDatumAff, IntervalDatumLifted, LoopDatum,
};
