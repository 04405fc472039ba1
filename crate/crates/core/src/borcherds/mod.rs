//! The vector-valued modular form `F_Λ`, its coset-sum oracle, restriction to
//! sublattices, and the Borcherds-lift layer: weight, Heegner divisor,
//! truncated product, Petersson norm and wall queries.

mod divisor;
pub mod enumerate;
mod lift;
mod product;
mod vvform;
mod walls;

pub use divisor::{borcherds_divisor, DivisorLedger, HeegnerSum};
pub use lift::{lift_oracle, lift_representatives};
pub use product::{petersson_norm_point, product_eval, tube_period, ProductValue, TubePoint};
pub use vvform::{construct_f, restrict, weight_closed_form, WeightReport, VVForm};
pub use walls::{separating_walls, Wall, WallReport};
