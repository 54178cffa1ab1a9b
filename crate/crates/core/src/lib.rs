pub mod bounds;
pub mod chebyshev;
pub mod cli;
pub mod error;
pub mod exact;
pub mod halfline;
pub mod oracle;
pub mod series;
pub mod zolotarev;

pub use error::{Error, Result};
