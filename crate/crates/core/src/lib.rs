pub mod collections;
pub mod dgpres;
pub mod exactlin;
pub mod families;
pub mod report;
pub mod spherical;
pub mod tensoralg;
pub mod twcx;
