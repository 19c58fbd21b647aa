pub mod cli;
pub mod embed;
pub mod error;
pub mod format;
pub mod kfun;
pub mod mixed;
pub mod sample;
pub mod space;
pub mod step;
pub mod tol;
pub mod verify;
