//! Circle-method diagnostics for almost periodic integer sets.
//!
//! The crate generates truncated integer sets, splits the L² energy of their
//! exponential sums between major and minor arcs, estimates Fourier spectra
//! and local densities, and counts binary additive representations.

pub mod additive;
pub mod arcs;
pub mod conv;
mod error;
pub mod expsum;
pub mod freq;
pub mod num;
pub mod setgen;
pub mod spectrum;

pub use additive::{
    asymptotic_report, beatty_main_term, rational_main_term, rep_count, ArcCoefficients,
    AsymptoticReport, MainTerm, RepCountTable,
};
pub use arcs::{
    beatty_major_arcs, beatty_spectrum, farey_centers, farey_major_arcs, intersect_arcs,
    sequence_major_arcs, ArcSystem,
};
pub use error::{Error, Result};
pub use expsum::{
    autocorrelation, energy_on_arcs, eval_s, eval_s_at, minor_arc_ratio, minor_arc_ratio_from, Autocorrelation,
};
pub use freq::Frequency;
pub use num_complex::Complex64;
pub use setgen::{
    combine, density, gen_beatty, gen_kfree, gen_multiplicative, gen_periodic, IntegerSet,
    MultiplicativeSpec, SetFamily, SetOp,
};
pub use spectrum::{
    arc_coefficient, besicovitch_distance, build_fq, extremality_sum,
    extremality_sum_kfree_theoretical, fourier_coefficient,
    kfree_coefficient_oracle, local_densities, spectrum_scan, wirsing_series, ExtremalityCurve,
    LocalDensityTable, SpectrumEstimate, TrigPolynomial, WirsingSeries,
};
