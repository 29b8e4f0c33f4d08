//! Recovery of phase dynamics from time series: phase extraction,
//! smoothing, trigonometric regression libraries and sparse fits.

mod filter;
mod library;
mod phase;
mod regress;
mod slow;

pub use filter::{central_difference, rolling_mean, savitzky_golay, window_samples};
pub use library::{build_library, build_library_from, standard_combos, BasisLibrary, Feature};
pub use phase::{
    detrend, estimate_resonant_frequencies, extract_phase_peaks, extract_phase_polar, fit_slopes,
    PhaseSeries, PhaseSource,
};
pub use regress::{
    lasso, lasso_auto, lasso_kkt_violation, lasso_lambda_max, ols, stlsq, FitResult, LassoOptions,
};
pub use slow::{
    fit_slow_phase, golden_section, per_cycle_error, triplet_amplitude, triplet_amplitudes,
    SlowFitOptions, SlowPhaseFit,
};
