pub mod cli;
pub mod cuspidal;
pub mod error;
pub mod gkm;
pub mod kac;
pub mod nakajima;
pub mod poly;
pub mod quiver;
pub mod roots;
pub mod series;
