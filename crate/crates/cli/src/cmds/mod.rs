pub mod advantage;
pub mod bhh;
pub mod cycles;
pub mod fourier;
pub mod gap;
pub mod gen;
pub mod iid;
pub mod ordering;
pub mod run;
