pub mod appell_humbert;
pub mod eisenstein;
pub mod lattice;
pub mod permgroup;
pub mod symmetry;
pub mod report;
pub mod surface_invariants;
pub mod torsion_covers;
