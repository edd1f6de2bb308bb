//! Fourier-symbol analysis, truncation-order measurement and modal predictions.

pub mod closed_form;
pub mod modal;
pub mod order;
pub mod stability;
pub mod symbol;
pub mod truncation;

pub use closed_form::{closed_form_block2_eigs, compare_with_numeric, Block2Eigensystem, ClosedFormComparison};
pub use modal::{
    fitted_h2_coefficient, modal_evolution_prediction, perturbed_error_mode_check,
    predicted_h2_coefficient, NyquistModeReport,
};
pub use order::{fit_order, OrderFit};
pub use stability::{stability_scan, symbol_scan_csv, StabilityReport};
pub use symbol::{alias_wavenumber, numeric_block_symbol, BlockSymbol};
pub use truncation::{truncation_order, truncation_residual, OrderEstimate};
