pub mod arena;
pub mod curves;
pub mod eval;
pub mod profile;
pub mod train;
