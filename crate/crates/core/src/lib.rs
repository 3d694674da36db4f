pub mod arith;
pub mod cyclotomic;
pub mod error;
pub mod json;
pub mod polymat;
pub mod actions;
pub mod classification;
pub mod circulant;
pub mod wlp;
pub mod surface;
pub mod arrangements;
pub mod cli;
