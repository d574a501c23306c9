pub mod analysis;
pub mod catalog;
pub mod deauto;
pub mod dsl;
pub mod exact;
pub mod growth;
pub mod map;
pub mod report;
pub mod sample;
pub mod singularity;
