pub mod augment;
pub mod config;
pub mod geom;
pub mod graph;
pub mod index;
pub mod simplify;
pub mod enumerate;
pub mod verify;
