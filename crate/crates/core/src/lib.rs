pub mod error;
pub mod lfun;
pub mod numerics;
pub mod qseries;
pub mod special;
pub mod twist;
pub mod zeros;

pub use error::{Error, Result};
