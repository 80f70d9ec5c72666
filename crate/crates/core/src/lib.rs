pub mod cases;
pub mod geom;
pub mod graphs;
pub mod lp;
pub mod relax;
pub mod prune;
pub mod cli;
