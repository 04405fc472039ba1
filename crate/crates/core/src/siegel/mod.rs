//! Theta constants with characteristics on the Siegel upper half-space, the
//! forms `χ_g`, and degeneration families with vanishing-order fits.

mod family;
mod point;
mod theta;

pub use family::{default_grid, fay_family, split_family, vanishing_order_fit, SlopeFit};
pub use point::SiegelPoint;
pub use theta::{
    chi_g, chi_g8_petersson, chi_weight, even_characteristics, log_chi_g8_petersson, log_chi_g8_petersson_mp, theta_constant,
    theta_constants, ThetaChar, ThetaValue,
};
