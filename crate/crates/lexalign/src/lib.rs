//! File formats, reports, plots and the command-line pipeline for
//! [`lexalign_core`].

pub mod cli;
pub mod dictfile;
pub mod error;
pub mod mapfile;
pub mod pipeline;
pub mod plot;
pub mod report;
pub mod vecfile;

pub use error::{Error, Result};
