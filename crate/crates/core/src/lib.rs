pub mod asymptotics;
pub mod error;
pub mod exact;
pub mod extraction;
pub mod intrel;
pub mod loop_observables;
pub mod mpnum;
pub mod special_products;

pub use error::{Error, Result};
